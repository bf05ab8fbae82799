"""
Ordinal encoding of embedded windows.

A window ``(x(t), x(t+tau), ..., x(t+(m-1)tau))`` is coarse-grained into

* its amplitude permutation (AmP): entry ``t`` is the position of the
  ``t``-th window value in the ascending reordering, so the word traces the
  window's shape in time order;
* its original permutation (OrP): entry ``k`` is the time index of the
  ``k``-th smallest value;
* its joint pattern ``(s; AmP)`` where ``s`` is 1 when the window mean lies
  above the series mean and 0 otherwise.

Equal values are never broken apart. Every member of a tie group gets the
group's smallest (or largest) index, so ``(2, 5, 2)`` encodes as AmP
``(1, 3, 1)`` under the default ``smallest_index`` rule.
"""

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from .errors import ConfigurationError, DomainError, PreconditionError
from .series import as_series

TIE_MODES = ("smallest_index", "largest_index")
SYMMETRIES = ("time", "amplitude")


@dataclass(frozen=True)
class EmbeddingConfig:
    """Window length ``m``, delay ``tau`` and the equal-value rule.

    ``tolerance`` is an absolute threshold below which two values count as
    equal; the default 0 means exact equality.
    """

    m: int = 3
    tau: int = 1
    tie_mode: str = "smallest_index"
    tolerance: float = 0.0

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 2:
            raise ConfigurationError(f"m must be an integer >= 2, got {self.m}")
        if int(self.tau) != self.tau or self.tau < 1:
            raise ConfigurationError(f"tau must be an integer >= 1, got {self.tau}")
        if self.tie_mode not in TIE_MODES:
            raise ConfigurationError(f"tie_mode must be one of {TIE_MODES}, got {self.tie_mode!r}")
        if not self.tolerance >= 0:
            raise ConfigurationError(f"tolerance must be >= 0, got {self.tolerance}")

    @property
    def span(self) -> int:
        return (self.m - 1) * self.tau + 1

    def window_count(self, length: int) -> int:
        return length - (self.m - 1) * self.tau

    def as_dict(self) -> dict:
        return {"m": self.m, "tau": self.tau, "tie_mode": self.tie_mode, "tolerance": self.tolerance}


@dataclass(frozen=True, order=True)
class JointPattern:
    """Global symbol ``s`` plus the amplitude-permutation word."""

    s: int
    word: Tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.word)

    @property
    def key(self) -> str:
        """Canonical ``"s;r1,r2,...,rm"`` identity used for serialization."""
        return f"{self.s};" + ",".join(str(r) for r in self.word)

    @classmethod
    def from_key(cls, key: str) -> "JointPattern":
        try:
            s, word = key.strip().strip("()").split(";")
            return cls(int(s), tuple(int(r) for r in word.split(",")))
        except ValueError:
            raise DomainError(f"malformed joint-pattern key {key!r}") from None

    def is_tie_free(self) -> bool:
        return len(set(self.word)) == len(self.word)

    def __str__(self):
        return "(" + self.key + ")"


def _check_finite(values: np.ndarray):
    if not np.all(np.isfinite(values)):
        raise DomainError("window contains a non-finite value")


def _ranks(windows: np.ndarray, tie_mode: str, tol: float) -> np.ndarray:
    """Amplitude-permutation words for a 2-D stack of windows (one per row)."""
    a = windows[:, None, :]  # other values
    b = windows[:, :, None]  # value whose rank is computed
    if tie_mode == "smallest_index":
        below = a < b - tol if tol else a < b
        return below.sum(axis=2, dtype=np.int64) + 1
    not_above = a <= b + tol if tol else a <= b
    return not_above.sum(axis=2, dtype=np.int64)


def amplitude_permutation(window: Sequence[float], tie_mode: str = "smallest_index", tol: float = 0.0) -> Tuple[int, ...]:
    """Rank of each window value, in time order (AmP)."""
    w = np.asarray(window, dtype=float)
    if w.ndim != 1 or w.size < 2:
        raise DomainError("a window needs at least 2 values")
    if tie_mode not in TIE_MODES:
        raise ConfigurationError(f"tie_mode must be one of {TIE_MODES}, got {tie_mode!r}")
    _check_finite(w)
    return tuple(int(r) for r in _ranks(w[None, :], tie_mode, tol)[0])


def original_permutation(window: Sequence[float], tie_mode: str = "smallest_index", tol: float = 0.0) -> Tuple[int, ...]:
    """Time index of each value in ascending order (OrP).

    Equal values sit in neighbouring slots in order of occurrence, and all
    members of a group are rewritten to the group's smallest (or largest)
    time index.
    """
    w = np.asarray(window, dtype=float)
    if w.ndim != 1 or w.size < 2:
        raise DomainError("a window needs at least 2 values")
    if tie_mode not in TIE_MODES:
        raise ConfigurationError(f"tie_mode must be one of {TIE_MODES}, got {tie_mode!r}")
    _check_finite(w)
    order = [int(i) for i in np.argsort(w, kind="stable")]
    out: List[int] = []
    group: List[int] = [order[0]]
    for prev, cur in zip(order, order[1:]):
        if abs(w[cur] - w[prev]) <= tol:
            group.append(cur)
            continue
        out += [min(group) + 1 if tie_mode == "smallest_index" else max(group) + 1] * len(group)
        group = [cur]
    out += [min(group) + 1 if tie_mode == "smallest_index" else max(group) + 1] * len(group)
    return tuple(out)


def joint_pattern(window: Sequence[float], series_mean: float = 0.0, tie_mode: str = "smallest_index", tol: float = 0.0) -> JointPattern:
    """Joint pattern ``(s; AmP)``; ``s = 1`` iff the window mean exceeds ``series_mean``."""
    word = amplitude_permutation(window, tie_mode, tol)
    s = int(np.asarray(window, dtype=float).mean() > series_mean)
    return JointPattern(s, word)


def representative_window(pattern: JointPattern) -> np.ndarray:
    """A window realizing ``pattern`` with a zero series mean.

    The word entries themselves reproduce the order and equality structure;
    the window is then shifted so its mean sits one unit above (s=1) or
    below (s=0) zero.
    """
    w = np.asarray(pattern.word, dtype=float)
    return w - w.mean() + (1.0 if pattern.s else -1.0)


@lru_cache(maxsize=65536)
def symmetric_counterpart(pattern: JointPattern, symmetry: str = "time", tie_mode: str = "smallest_index") -> JointPattern:
    """Pattern of the time- or amplitude-symmetric window.

    Computed by reversing (or negating) a representative window and
    re-encoding it, which stays correct for tie groups where entrywise
    reversal/complement shortcuts do not.
    """
    if symmetry not in SYMMETRIES:
        raise ConfigurationError(f"symmetry must be one of {SYMMETRIES}, got {symmetry!r}")
    w = representative_window(pattern)
    w = w[::-1] if symmetry == "time" else -w
    return joint_pattern(w, 0.0, tie_mode)


def embed(samples: Sequence[float], m: int, tau: int) -> np.ndarray:
    """All overlapping delay vectors as an ``(L - (m-1)tau, m)`` read-only view."""
    x = np.asarray(samples, dtype=float)
    span = (m - 1) * tau + 1
    if x.size < span:
        raise DomainError(f"series of length {x.size} is too short for m={m}, tau={tau}: need at least {span}")
    return np.lib.stride_tricks.sliding_window_view(x, span)[:, ::tau]


@dataclass
class PatternDistribution:
    """Relative frequencies of joint patterns over all windows of a series.

    Patterns that never occur are absent; :meth:`prob` returns 0 for them.
    """

    counts: Dict[JointPattern, int]
    window_count: int
    config: EmbeddingConfig
    probabilities: Dict[JointPattern, float] = field(init=False)

    def __post_init__(self):
        self.probabilities = {p: c / self.window_count for p, c in sorted(self.counts.items())}

    def prob(self, pattern: JointPattern) -> float:
        return self.probabilities.get(pattern, 0.0)

    def __contains__(self, pattern):
        return pattern in self.probabilities

    def __iter__(self) -> Iterator[JointPattern]:
        return iter(self.probabilities)

    def __len__(self):
        return len(self.probabilities)

    def to_dict(self) -> Dict[str, float]:
        return {p.key: v for p, v in self.probabilities.items()}


def pattern_distribution(series, config: EmbeddingConfig = EmbeddingConfig()) -> PatternDistribution:
    """Joint-pattern frequencies of a centered series.

    Windows start at every index (stride 1), giving ``L - (m-1)tau`` windows.
    The series mean is taken to be exactly zero.
    """
    series = as_series(series)
    n_windows = config.window_count(series.length)
    if n_windows < 1:
        raise DomainError(
            f"series of length {series.length} is too short for m={config.m}, tau={config.tau}: "
            f"need at least {config.span} samples"
        )
    if not series.is_centered():
        raise PreconditionError(f"pattern distributions need a centered series (mean is {series.mean:.3g})")
    _check_finite(series.samples)
    w = embed(series.samples, config.m, config.tau)
    ranks = _ranks(w, config.tie_mode, config.tolerance)
    s = (w.mean(axis=1) > 0.0).astype(np.int64)
    base = config.m + 1
    if 2 * base ** config.m < 2 ** 62:
        # pack (s, r1..rm) into one integer in radix m+1
        codes = s.copy()
        for col in range(config.m):
            codes = codes * base + ranks[:, col]
        uniq, counts = np.unique(codes, return_counts=True)
        rows = []
        for code in uniq.tolist():
            digits = []
            for _ in range(config.m):
                code, d = divmod(code, base)
                digits.append(d)
            rows.append([code] + digits[::-1])
    else:
        rows, counts = np.unique(np.column_stack([s, ranks]), axis=0, return_counts=True)
    table = {JointPattern(int(r[0]), tuple(int(v) for v in r[1:])): int(c) for r, c in zip(rows, counts)}
    return PatternDistribution(table, n_windows, config)


def tie_free_patterns(m: int) -> Iterator[JointPattern]:
    """Every joint pattern whose word is a permutation of 1..m."""
    for s in (0, 1):
        for perm in itertools.permutations(range(1, m + 1)):
            yield JointPattern(s, perm)


def order_types(m: int) -> List[Tuple[int, ...]]:
    """One representative window per weak ordering of ``m`` values (ties allowed).

    Values are dense ranks 1..k, so ``order_types(3)`` has 13 members.
    """
    seen = set()
    for values in itertools.product(range(1, m + 1), repeat=m):
        levels = sorted(set(values))
        dense = tuple(levels.index(v) + 1 for v in values)
        seen.add(dense)
    return sorted(seen)

