"""Nonparametric group comparisons and descriptive summaries."""

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.stats import norm, rankdata

from .errors import DegenerateInputError, DomainError

ALPHA = 0.05


@dataclass(frozen=True)
class TestResult:
    """Outcome of a two-sided normal-approximation rank test."""

    __test__ = False  # not a pytest class

    statistic: float
    p_value: float
    n1: int
    n2: int
    method: str
    tie_correction_applied: bool
    z: float = 0.0
    alternative: str = "two-sided"

    def significant(self, alpha: float = ALPHA) -> bool:
        return self.p_value < alpha

    def as_dict(self) -> dict:
        return {
            "method": self.method,
            "statistic": self.statistic,
            "z": self.z,
            "p_value": self.p_value,
            "n1": self.n1,
            "n2": self.n2,
            "alternative": self.alternative,
            "tie_correction_applied": self.tie_correction_applied,
        }


def _tie_term(ranks_of: np.ndarray) -> Tuple[float, bool]:
    """Sum of t**3 - t over tie groups."""
    _, counts = np.unique(ranks_of, return_counts=True)
    term = float(np.sum(counts.astype(float) ** 3 - counts))
    return term, bool(np.any(counts > 1))


def _two_sided(z: float) -> float:
    return float(min(1.0, 2.0 * norm.sf(abs(z))))


def mann_whitney_u(a: Sequence[float], b: Sequence[float]) -> TestResult:
    """Mann-Whitney U test for two independent samples.

    Normal approximation with tie and continuity corrections; the reported
    statistic is ``min(U_a, U_b)``.
    """
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    n1, n2 = x.size, y.size
    if n1 == 0 or n2 == 0:
        raise DomainError("Mann-Whitney U needs two nonempty samples")
    pooled = np.concatenate([x, y])
    ranks = rankdata(pooled)
    u1 = float(ranks[:n1].sum() - n1 * (n1 + 1) / 2.0)
    u2 = n1 * n2 - u1
    u = min(u1, u2)
    n = n1 + n2
    tie_term, ties = _tie_term(pooled)
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1))) if n > 1 else 0.0
    if var <= 0:
        # every value identical: no evidence of separation
        return TestResult(u, 1.0, n1, n2, "mann_whitney_u", ties, 0.0)
    mean_u = n1 * n2 / 2.0
    z = (abs(u - mean_u) - 0.5) / math.sqrt(var)
    z = max(z, 0.0)
    return TestResult(u, _two_sided(z), n1, n2, "mann_whitney_u", ties, z)


def wilcoxon_signed_rank(a: Sequence[float], b: Sequence[float]) -> TestResult:
    """Wilcoxon signed-rank test for paired samples.

    Zero differences are discarded; the statistic is ``min(W+, W-)`` and the
    p-value comes from the tie-corrected normal approximation.
    """
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    if x.size != y.size:
        raise DomainError(f"paired samples differ in length ({x.size} vs {y.size})")
    d = x - y
    d = d[d != 0]
    if d.size == 0:
        raise DegenerateInputError("all paired differences are zero")
    n = d.size
    ranks = rankdata(np.abs(d))
    w_plus = float(ranks[d > 0].sum())
    w_minus = float(ranks[d < 0].sum())
    w = min(w_plus, w_minus)
    tie_term, ties = _tie_term(np.abs(d))
    mean_w = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0
    z = (w - mean_w) / math.sqrt(var) if var > 0 else 0.0
    return TestResult(w, _two_sided(z), x.size, y.size, "wilcoxon_signed_rank", ties, z)


def summarize(values: Sequence[float]) -> Tuple[float, float]:
    """Sample mean and standard error (``n - 1`` standard deviation over sqrt(n))."""
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        raise DomainError(f"summarize needs at least 2 values, got {v.size}")
    mean = float(np.mean(v))
    if np.all(v == v[0]):
        return mean, 0.0
    se = float(np.std(v, ddof=1) / math.sqrt(v.size))
    return mean, se
