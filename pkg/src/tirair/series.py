"""
Model series generators and elementary series transforms.

Six generators are provided: the chaotic logistic and Henon maps, the
Lorenz flow (fixed-step RK4), a Gaussian AR(1) process, spectrally
synthesized 1/f noise and i.i.d. uniform noise on [0, 1]. Stochastic
models draw from numpy's PCG64 bit generator seeded through
``numpy.random.default_rng(seed)``, so a seed reproduces a series exactly.

Maps and flows emit the initial state as sample 1.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.signal import lfilter

from .errors import ConfigurationError, DomainError, NumericOverflowError, PreconditionError

MODELS = ("logistic", "henon", "lorenz", "ar1", "pink", "uniform")
CHAOTIC_MODELS = ("logistic", "henon", "lorenz")
STOCHASTIC_MODELS = ("ar1", "pink", "uniform")

#: Default model parameters (logistic r, Henon alpha/beta, Lorenz sigma/b/rho,
#: AR(1) delta) and initial states used for the model-series analysis.
DEFAULT_PARAMS: Dict[str, Dict[str, float]] = {
    "logistic": {"r": 4.0},
    "henon": {"alpha": 1.4, "beta": 0.3},
    "lorenz": {"sigma": 10.0, "b": 8.0 / 3.0, "rho": 28.0, "dt": 0.01, "transient": 0},
    "ar1": {"delta": 0.3},
    "pink": {},
    "uniform": {},
}
DEFAULT_INITIAL: Dict[str, Tuple[float, ...]] = {
    "logistic": (0.01,),
    "henon": (0.01, 0.01),
    "lorenz": (0.0, 0.0, 1e-10),
}
DEFAULT_LENGTH = 50400
DEFAULT_SEED = 20230101

# Absolute slack on |mean| for a series to count as centered, relative to its scale.
CENTER_TOL = 1e-9


@dataclass(frozen=True)
class TimeSeries:
    """Ordered real samples with a cached mean and a provenance string."""

    samples: np.ndarray
    provenance: str = ""
    mean: float = field(init=False, repr=False)

    def __post_init__(self):
        arr = np.array(self.samples, dtype=float)
        if arr.ndim != 1:
            raise DomainError("a time series must be one-dimensional")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "mean", float(np.mean(arr)) if arr.size else float("nan"))

    @property
    def length(self) -> int:
        return int(self.samples.size)

    def __len__(self):
        return self.length

    def is_centered(self) -> bool:
        if self.length == 0:
            return False
        scale = max(1.0, float(np.max(np.abs(self.samples))))
        return abs(self.mean) <= CENTER_TOL * scale


@dataclass
class GeneratorSpec:
    """Everything needed to reproduce one model series.

    ``params`` holds the model's named real parameters (r, alpha, beta, sigma,
    b, rho, delta, dt) plus the Lorenz ``transient`` step count. Missing
    entries are *not* filled in here; use :func:`default_spec` for the
    reference settings.
    """

    model: str
    params: Dict[str, float] = field(default_factory=dict)
    initial: Tuple[float, ...] = ()
    length: int = DEFAULT_LENGTH
    seed: Optional[int] = None
    component: str = "x"

    def describe(self) -> str:
        parts = [self.model]
        parts += [f"{k}={v:g}" for k, v in sorted(self.params.items())]
        if self.initial:
            parts.append("init=(" + ",".join(f"{v:g}" for v in self.initial) + ")")
        if self.model in ("henon", "lorenz"):
            parts.append(f"component={self.component}")
        if self.model in STOCHASTIC_MODELS:
            parts.append(f"seed={self.seed}")
        parts.append(f"length={self.length}")
        return " ".join(parts)


def default_spec(model: str, length: int = DEFAULT_LENGTH, seed: int = DEFAULT_SEED, **overrides) -> GeneratorSpec:
    """Reference settings for ``model``; keyword overrides replace parameters."""
    if model not in MODELS:
        raise ConfigurationError(f"unknown model {model!r}; expected one of {MODELS}")
    params = dict(DEFAULT_PARAMS[model])
    initial = overrides.pop("initial", DEFAULT_INITIAL.get(model, ()))
    component = overrides.pop("component", "x")
    params.update(overrides)
    return GeneratorSpec(
        model=model,
        params=params,
        initial=tuple(initial),
        length=length,
        seed=seed if model in STOCHASTIC_MODELS else None,
        component=component,
    )


def _param(spec: GeneratorSpec, name: str) -> float:
    try:
        value = spec.params[name]
    except KeyError:
        raise ConfigurationError(f"{spec.model}: missing parameter {name!r}") from None
    return float(value)


def _check_length(spec: GeneratorSpec) -> int:
    if int(spec.length) <= 0:
        raise ConfigurationError(f"length must be positive, got {spec.length}")
    return int(spec.length)


def _initial(spec: GeneratorSpec, size: int) -> Tuple[float, ...]:
    if len(spec.initial) != size:
        raise ConfigurationError(
            f"{spec.model}: initial state needs {size} values, got {len(spec.initial)}"
        )
    return tuple(float(v) for v in spec.initial)


def generate_map(spec: GeneratorSpec) -> TimeSeries:
    """Iterate the logistic or Henon map for ``spec.length`` samples."""
    n = _check_length(spec)
    out = np.empty(n)
    if spec.model == "logistic":
        r = _param(spec, "r")
        (x,) = _initial(spec, 1)
        for i in range(n):
            if not math.isfinite(x):
                raise NumericOverflowError(f"logistic map diverged at step {i + 1}", step=i + 1)
            out[i] = x
            x = r * x * (1.0 - x)
    elif spec.model == "henon":
        alpha = _param(spec, "alpha")
        beta = _param(spec, "beta")
        x, y = _initial(spec, 2)
        if spec.component not in ("x", "y"):
            raise ConfigurationError(f"henon has no component {spec.component!r}")
        pick_x = spec.component == "x"
        for i in range(n):
            if not (math.isfinite(x) and math.isfinite(y)):
                raise NumericOverflowError(f"Henon map diverged at step {i + 1}", step=i + 1)
            out[i] = x if pick_x else y
            x, y = 1.0 - alpha * x * x + y, beta * x
    else:
        raise ConfigurationError(f"generate_map does not handle model {spec.model!r}")
    return TimeSeries(out, provenance=spec.describe())


def integrate_lorenz(spec: GeneratorSpec) -> TimeSeries:
    """Fixed-step fourth-order Runge-Kutta integration of the Lorenz flow.

    One sample is emitted per step, starting with the initial state. The
    first ``transient`` steps (default 0) are integrated and discarded.
    """
    n = _check_length(spec)
    sigma = _param(spec, "sigma")
    b = _param(spec, "b")
    rho = _param(spec, "rho")
    dt = _param(spec, "dt")
    transient = int(spec.params.get("transient", 0))
    if dt <= 0:
        raise ConfigurationError(f"lorenz: dt must be positive, got {dt}")
    if transient < 0:
        raise ConfigurationError(f"lorenz: transient must be >= 0, got {transient}")
    if spec.component not in ("x", "y", "z"):
        raise ConfigurationError(f"lorenz has no component {spec.component!r}")
    comp = "xyz".index(spec.component)
    x, y, z = _initial(spec, 3)

    def f(x, y, z):
        return sigma * (y - x), x * (rho - z) - y, x * y - b * z

    h2 = dt / 2.0
    h6 = dt / 6.0
    out = np.empty(n)
    for step in range(n + transient):
        if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)):
            raise NumericOverflowError(f"Lorenz state became non-finite at step {step + 1}", step=step + 1)
        if step >= transient:
            out[step - transient] = (x, y, z)[comp]
        k1 = f(x, y, z)
        k2 = f(x + h2 * k1[0], y + h2 * k1[1], z + h2 * k1[2])
        k3 = f(x + h2 * k2[0], y + h2 * k2[1], z + h2 * k2[2])
        k4 = f(x + dt * k3[0], y + dt * k3[1], z + dt * k3[2])
        x += h6 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        y += h6 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        z += h6 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
    return TimeSeries(out, provenance=spec.describe())


def pink_noise(n: int, rng: np.random.Generator) -> np.ndarray:
    """Spectral synthesis of 1/f noise.

    Fourier amplitudes scale as f**-0.5 (power as 1/f) with uniformly random
    phases and a zero DC term; the result is scaled to unit variance.
    """
    freqs = np.fft.rfftfreq(n)
    amp = np.zeros(freqs.size)
    amp[1:] = freqs[1:] ** -0.5
    phases = rng.uniform(0.0, 2.0 * np.pi, size=freqs.size)
    x = np.fft.irfft(amp * np.exp(1j * phases), n=n)
    sd = x.std()
    return x / sd if sd > 0 else x


def generate_stochastic(spec: GeneratorSpec) -> TimeSeries:
    """AR(1), 1/f or uniform noise, reproducible from ``spec.seed``."""
    n = _check_length(spec)
    if spec.seed is None:
        raise ConfigurationError(f"{spec.model}: a seed is required")
    rng = np.random.default_rng(int(spec.seed))
    if spec.model == "ar1":
        delta = _param(spec, "delta")
        if not abs(delta) < 1.0:
            raise ConfigurationError(f"ar1: |delta| must be < 1 for stationarity, got {delta}")
        innovations = rng.standard_normal(n)
        # x[t] = delta * x[t-1] + xi[t], with x[1] = xi[1]
        out = lfilter([1.0], [1.0, -delta], innovations)
    elif spec.model == "pink":
        out = pink_noise(n, rng)
    elif spec.model == "uniform":
        out = rng.random(n)
    else:
        raise ConfigurationError(f"generate_stochastic does not handle model {spec.model!r}")
    return TimeSeries(out, provenance=spec.describe())


def generate(spec: GeneratorSpec) -> TimeSeries:
    """Dispatch to the generator for ``spec.model``."""
    if spec.model in ("logistic", "henon"):
        return generate_map(spec)
    if spec.model == "lorenz":
        return integrate_lorenz(spec)
    if spec.model in STOCHASTIC_MODELS:
        return generate_stochastic(spec)
    raise ConfigurationError(f"unknown model {spec.model!r}; expected one of {MODELS}")


def as_series(data, provenance: str = "") -> TimeSeries:
    if isinstance(data, TimeSeries):
        return data
    return TimeSeries(np.asarray(data, dtype=float), provenance=provenance)


def center(series) -> TimeSeries:
    """Subtract the arithmetic mean."""
    series = as_series(series)
    if series.length == 0:
        raise DomainError("cannot center an empty series")
    x = series.samples - series.mean
    # second pass removes the rounding residue of the first
    x = x - np.mean(x)
    prov = series.provenance if series.provenance.endswith("[centered]") else f"{series.provenance} [centered]".strip()
    return TimeSeries(x, provenance=prov)


def reverse(series, mode: str = "time") -> TimeSeries:
    """Time reversal (``mode='time'``) or amplitude reversal (``'amplitude'``).

    Amplitude reversal is only defined for a zero-mean series.
    """
    series = as_series(series)
    if mode == "time":
        return TimeSeries(series.samples[::-1], provenance=f"{series.provenance} [time-reversed]".strip())
    if mode == "amplitude":
        if not series.is_centered():
            raise PreconditionError(
                f"amplitude reversal needs a centered series (mean is {series.mean:.3g})"
            )
        return TimeSeries(-series.samples, provenance=f"{series.provenance} [amplitude-reversed]".strip())
    raise ConfigurationError(f"unknown reversal mode {mode!r}; expected 'time' or 'amplitude'")

