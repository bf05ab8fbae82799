"""
iAAFT surrogates and percentile-band significance tests.

Iterative amplitude-adjusted Fourier transform surrogates keep the exact
amplitude distribution of the data and (after convergence) its power
spectrum, realizing the null hypothesis of a linear Gaussian process seen
through a static monotone transform.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
import scipy.fft

from .errors import ConfigurationError, DomainError
from .irreversibility import DEFAULT_METHOD, DEFAULT_SUM_MODE, KINDS, irreversibility
from .ordinal import EmbeddingConfig
from .series import TimeSeries, as_series, center

MIN_LENGTH = 8
MIN_SURROGATES = 40
DEFAULT_SURROGATES = 100
DEFAULT_MAX_ITER = 1000
DEFAULT_MASTER_SEED = 2023

VERDICTS = ("above_band", "within_band", "below_band")


def surrogate_rng(master_seed: int, index: int) -> np.random.Generator:
    """PCG64 stream for surrogate ``index``, independent of evaluation order."""
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), int(index)]))


def periodogram(samples: Sequence[float]) -> np.ndarray:
    """Squared DFT magnitudes at the non-negative frequencies."""
    return np.abs(scipy.fft.rfft(np.asarray(samples, dtype=float))) ** 2


def spectral_mismatch(original: Sequence[float], surrogate: Sequence[float]) -> float:
    """Relative RMS deviation of the surrogate periodogram over nonzero frequencies.

    ``sqrt(mean((P_s - P_o)**2)) / sqrt(mean(P_o**2))``; 0 when both spectra
    vanish identically.
    """
    po = periodogram(original)[1:]
    ps = periodogram(surrogate)[1:]
    ref = np.sqrt(np.mean(po ** 2))
    diff = np.sqrt(np.mean((ps - po) ** 2))
    if ref == 0:
        return 0.0 if diff == 0 else float("inf")
    return float(diff / ref)


@dataclass
class IaaftRun:
    samples: np.ndarray
    iterations: int
    converged: bool
    # RMS distance between current and target Fourier amplitudes, one per iteration
    discrepancy: List[float] = field(default_factory=list)


def iaaft_run(x: Sequence[float], rng: np.random.Generator, max_iter: int = DEFAULT_MAX_ITER) -> IaaftRun:
    """Run the iAAFT iteration on raw samples.

    Starts from a random shuffle, then alternates spectrum imposition (keep
    phases, restore the original Fourier magnitudes) with a rank-order remap
    onto the sorted original values, until the rank order repeats or
    ``max_iter`` is reached. The last step is always the remap.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < MIN_LENGTH:
        raise DomainError(f"iAAFT needs at least {MIN_LENGTH} samples, got {n}")
    if max_iter < 1:
        raise ConfigurationError(f"max_iter must be >= 1, got {max_iter}")
    target = np.abs(scipy.fft.rfft(x))
    sorted_x = np.sort(x)
    s = rng.permutation(x)
    prev = None
    history: List[float] = []
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        spec = scipy.fft.rfft(s)
        mag = np.abs(spec)
        history.append(float(np.sqrt(np.mean((mag - target) ** 2))))
        scale = np.divide(target, mag, out=np.ones_like(mag), where=mag > 0)
        phased = spec * scale
        # zero bins have no phase; give them the target magnitude at phase 0
        zero = mag == 0
        phased[zero] = target[zero]
        s = scipy.fft.irfft(phased, n=n)
        order = np.argsort(s)
        s = np.empty(n)
        s[order] = sorted_x
        if prev is not None and np.array_equal(order, prev):
            converged = True
            break
        prev = order
    return IaaftRun(s, it, converged, history)


def iaaft(series, seed: int, max_iter: int = DEFAULT_MAX_ITER) -> TimeSeries:
    """One iAAFT surrogate of ``series``; ``seed`` fixes the initial shuffle."""
    series = as_series(series)
    run = iaaft_run(series.samples, np.random.default_rng(int(seed)), max_iter)
    return TimeSeries(run.samples, provenance=f"iAAFT(seed={seed}) of {series.provenance}".strip())


@dataclass(frozen=True)
class SurrogateTestResult:
    metric_kind: str
    original_value: float
    surrogate_values: Tuple[float, ...]
    p2_5: float
    p97_5: float
    verdict: str
    n_surrogates: int
    master_seed: int

    def as_dict(self) -> dict:
        return {
            "metric": self.metric_kind,
            "original": self.original_value,
            "p2_5": self.p2_5,
            "p97_5": self.p97_5,
            "verdict": self.verdict,
            "n_surrogates": self.n_surrogates,
            "master_seed": self.master_seed,
            "surrogate_values": list(self.surrogate_values),
        }


def band_verdict(value: float, low: float, high: float) -> str:
    if value > high:
        return "above_band"
    if value < low:
        return "below_band"
    return "within_band"


def _one_surrogate(args) -> Dict[str, float]:
    samples, index, master_seed, max_iter, config, kinds, method, sum_mode = args
    run = iaaft_run(samples, surrogate_rng(master_seed, index), max_iter)
    surr = center(TimeSeries(run.samples))
    return {k: irreversibility(surr, config, k, method, sum_mode).total for k in kinds}


def surrogate_tests(
    series,
    config: EmbeddingConfig = EmbeddingConfig(),
    kinds: Sequence[str] = KINDS,
    n_surrogates: int = DEFAULT_SURROGATES,
    master_seed: int = DEFAULT_MASTER_SEED,
    method: str = DEFAULT_METHOD,
    sum_mode: str = DEFAULT_SUM_MODE,
    max_iter: int = DEFAULT_MAX_ITER,
    workers: int = 1,
) -> Dict[str, SurrogateTestResult]:
    """Test several metrics against one shared surrogate ensemble.

    Surrogate ``i`` is seeded from ``(master_seed, i)`` alone, so results do
    not depend on ``workers``. Each kind's result equals what
    :func:`surrogate_test` returns for it.
    """
    if n_surrogates < MIN_SURROGATES:
        raise ConfigurationError(
            f"at least {MIN_SURROGATES} surrogates are needed for 2.5/97.5 percentiles, got {n_surrogates}"
        )
    for k in kinds:
        if k not in KINDS:
            raise ConfigurationError(f"metric must be one of {KINDS}, got {k!r}")
    series = center(as_series(series))
    original = {k: irreversibility(series, config, k, method, sum_mode).total for k in kinds}
    jobs = [
        (series.samples, i, master_seed, max_iter, config, tuple(kinds), method, sum_mode)
        for i in range(n_surrogates)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_one_surrogate, jobs, chunksize=max(1, n_surrogates // (4 * workers))))
    else:
        values = [_one_surrogate(job) for job in jobs]

    out = {}
    for k in kinds:
        vals = np.array([v[k] for v in values])
        low, high = np.percentile(vals, [2.5, 97.5], method="linear")
        out[k] = SurrogateTestResult(
            metric_kind=k,
            original_value=original[k],
            surrogate_values=tuple(float(v) for v in vals),
            p2_5=float(low),
            p97_5=float(high),
            verdict=band_verdict(original[k], low, high),
            n_surrogates=n_surrogates,
            master_seed=int(master_seed),
        )
    return out


def surrogate_test(
    series,
    config: EmbeddingConfig = EmbeddingConfig(),
    metric_kind: str = "TIR",
    n_surrogates: int = DEFAULT_SURROGATES,
    master_seed: int = DEFAULT_MASTER_SEED,
    **kwargs,
) -> SurrogateTestResult:
    """Compare TIR or AIR of ``series`` with the 2.5/97.5 percentiles of its iAAFT surrogates."""
    return surrogate_tests(series, config, (metric_kind,), n_surrogates, master_seed, **kwargs)[metric_kind]
