"""
Joint-permutation time irreversibility (TIR), amplitude irreversibility
(AIR) and the distribution of equal states (DES).

TIR compares the joint-pattern distribution of a centered series with that
of its time reversal, AIR with that of its amplitude reversal. Differences
are measured with the subtraction-based index

    Ys<p, q> = p (p - q) / (p + q),    p >= q,

which stays finite when one side of a pair is a forbidden pattern
(Ys<p, 0> = p).
"""

import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .errors import ConfigurationError, DomainError, PreconditionError
from .ordinal import (
    EmbeddingConfig,
    JointPattern,
    PatternDistribution,
    pattern_distribution,
    symmetric_counterpart,
    tie_free_patterns,
)
from .series import as_series, reverse

KINDS = ("TIR", "AIR")
METHODS = ("forward_backward", "symmetric_pairs")
SUM_MODES = ("larger_first", "bidirectional")

DEFAULT_METHOD = "forward_backward"
DEFAULT_SUM_MODE = "larger_first"

MIN_WINDOWS = 100
WARN_WINDOWS = 1000

# Beyond this m the tie-free pattern universe (2 * m!) is not enumerated, so
# forbidden pairs are not listed.
MAX_ENUMERATED_M = 7


def ys_index(p: float, q: float) -> float:
    """Ys<p, q> = p (p - q) / (p + q) for probabilities ``0 <= q <= p <= 1``."""
    if p < 0 or q < 0:
        raise DomainError(f"probabilities must be non-negative, got p={p}, q={q}")
    if q > p:
        raise PreconditionError(f"Ys expects the larger probability first, got p={p} < q={q}")
    if p == 0:
        return 0.0
    return p * (p - q) / (p + q)


def _symmetry(kind: str) -> str:
    if kind not in KINDS:
        raise ConfigurationError(f"kind must be one of {KINDS}, got {kind!r}")
    return "time" if kind == "TIR" else "amplitude"


@dataclass(frozen=True)
class PairContribution:
    pattern: JointPattern
    counterpart: JointPattern
    p: float
    q: float
    contribution: float

    @property
    def self_symmetric(self) -> bool:
        return self.pattern == self.counterpart

    def as_dict(self) -> dict:
        return {
            "pattern": self.pattern.key,
            "counterpart": self.counterpart.key,
            "p": self.p,
            "q": self.q,
            "contribution": self.contribution,
        }


@dataclass(frozen=True)
class IrrevReport:
    """TIR or AIR with its per-pair breakdown.

    ``pairs`` lists every unordered pattern pair with non-zero mass;
    ``forbidden_pairs`` lists tie-free pairs absent from both sides;
    ``single_patterns`` are observed patterns whose counterpart never occurs.
    """

    kind: str
    total: float
    pairs: Tuple[PairContribution, ...]
    forbidden_pairs: Tuple[Tuple[JointPattern, JointPattern], ...]
    single_patterns: Tuple[JointPattern, ...]
    method: str
    sum_mode: str
    config: EmbeddingConfig
    window_count: int
    distribution: Optional[PatternDistribution] = field(default=None, repr=False, compare=False)

    def contributions(self) -> List[float]:
        return [pc.contribution for pc in self.pairs]

    def as_dict(self, include_distribution: bool = False) -> dict:
        out = {
            "kind": self.kind,
            "total": self.total,
            "method": self.method,
            "sum_mode": self.sum_mode,
            "embedding": self.config.as_dict(),
            "window_count": self.window_count,
            "pairs": [pc.as_dict() for pc in self.pairs],
            "forbidden_pairs": [[a.key, b.key] for a, b in self.forbidden_pairs],
            "single_patterns": [p.key for p in self.single_patterns],
        }
        if include_distribution and self.distribution is not None:
            out["distribution"] = self.distribution.to_dict()
        return out


def _pair_contribution(p: float, q: float, sum_mode: str) -> float:
    if p == 0 and q == 0:
        return 0.0
    if sum_mode == "larger_first":
        return ys_index(max(p, q), min(p, q))
    # both directed terms: p(p-q)/(p+q) + q(q-p)/(p+q)
    return (p - q) ** 2 / (p + q)


def irreversibility(
    series,
    config: EmbeddingConfig = EmbeddingConfig(),
    kind: str = "TIR",
    method: str = DEFAULT_METHOD,
    sum_mode: str = DEFAULT_SUM_MODE,
) -> IrrevReport:
    """TIR or AIR of a centered series.

    ``forward_backward`` compares each pattern's probability in the series
    against the same pattern in the reversed series; ``symmetric_pairs``
    compares each pattern against its symmetric counterpart within the
    series itself. Unordered pairs are counted once; with
    ``sum_mode='larger_first'`` a pair adds Ys<max, min>, with
    ``'bidirectional'`` it adds the sum of both directed Ys terms,
    (p - q)**2 / (p + q).
    """
    symmetry = _symmetry(kind)
    if method not in METHODS:
        raise ConfigurationError(f"method must be one of {METHODS}, got {method!r}")
    if sum_mode not in SUM_MODES:
        raise ConfigurationError(f"sum_mode must be one of {SUM_MODES}, got {sum_mode!r}")
    series = as_series(series)
    n_windows = config.window_count(series.length)
    if n_windows < MIN_WINDOWS:
        raise DomainError(
            f"{kind} needs at least {MIN_WINDOWS} windows; series of length {series.length} gives "
            f"{max(n_windows, 0)} (minimum length {MIN_WINDOWS + (config.m - 1) * config.tau})"
        )
    if not series.is_centered():
        raise PreconditionError(f"{kind} needs a centered series (mean is {series.mean:.3g})")
    if n_windows < WARN_WINDOWS:
        warnings.warn(f"only {n_windows} windows; {kind} estimates will be noisy", RuntimeWarning, stacklevel=2)

    forward = pattern_distribution(series, config)

    def counterpart(c: JointPattern) -> JointPattern:
        return symmetric_counterpart(c, symmetry, config.tie_mode)

    if method == "forward_backward":
        backward = pattern_distribution(reverse(series, symmetry), config)
        support = set(forward) | set(backward)

        def probs(a: JointPattern, b: JointPattern) -> Tuple[float, float]:
            return forward.prob(a), backward.prob(a)

    else:
        support = set(forward)
        support |= {counterpart(c) for c in forward}

        def probs(a: JointPattern, b: JointPattern) -> Tuple[float, float]:
            return forward.prob(a), forward.prob(b)

    pairs: List[PairContribution] = []
    singles: List[JointPattern] = []
    seen = set()
    for c in sorted(support):
        if c in seen:
            continue
        cc = counterpart(c)
        seen.update((c, cc))
        a, b = min(c, cc), max(c, cc)
        p, q = probs(a, b)
        if p == 0 and q == 0:
            continue
        pairs.append(PairContribution(a, b, p, q, _pair_contribution(p, q, sum_mode)))
        if a != b:
            if q == 0:
                singles.append(a)
            elif p == 0:
                singles.append(b)

    forbidden = []
    if config.m <= MAX_ENUMERATED_M:
        for c in tie_free_patterns(config.m):
            if c in seen:
                continue
            cc = counterpart(c)
            seen.update((c, cc))
            forbidden.append((min(c, cc), max(c, cc)))

    total = float(sum(pc.contribution for pc in pairs))
    return IrrevReport(
        kind=kind,
        total=total,
        pairs=tuple(pairs),
        forbidden_pairs=tuple(sorted(forbidden)),
        single_patterns=tuple(sorted(singles)),
        method=method,
        sum_mode=sum_mode,
        config=config,
        window_count=n_windows,
        distribution=forward,
    )


def tir(series, config: EmbeddingConfig = EmbeddingConfig(), **kwargs) -> float:
    return irreversibility(series, config, "TIR", **kwargs).total


def air(series, config: EmbeddingConfig = EmbeddingConfig(), **kwargs) -> float:
    return irreversibility(series, config, "AIR", **kwargs).total


def des(series, tau: int = 1, tol: float = 0.0) -> float:
    """Fraction of sample pairs ``tau`` apart that are equal (within ``tol``)."""
    x = as_series(series).samples
    if int(tau) != tau or tau < 1:
        raise ConfigurationError(f"tau must be an integer >= 1, got {tau}")
    if tol < 0:
        raise ConfigurationError(f"tol must be >= 0, got {tol}")
    if tau >= x.size:
        raise DomainError(f"DES needs tau < series length ({tau} >= {x.size})")
    equal = np.abs(x[:-tau] - x[tau:]) <= tol
    return int(np.count_nonzero(equal)) / (x.size - tau)
