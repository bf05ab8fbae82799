from fractions import Fraction

import numpy as np
import pytest

from tirair.errors import ConfigurationError, DomainError, NumericOverflowError, PreconditionError
from tirair.series import (
    GeneratorSpec,
    TimeSeries,
    center,
    default_spec,
    generate,
    generate_map,
    generate_stochastic,
    integrate_lorenz,
    reverse,
)


def test_logistic_fixed_point_at_zero():
    s = generate_map(GeneratorSpec("logistic", {"r": 4.0}, (0.0,), length=20))
    assert np.all(s.samples == 0)


def test_logistic_first_iterates():
    # exact rational iteration of x <- 4x(1-x) from 1/100
    x = [Fraction(1, 100)]
    for _ in range(2):
        x.append(4 * x[-1] * (1 - x[-1]))
    s = generate_map(default_spec("logistic", length=3))
    assert s.samples[0] == 0.01
    assert s.samples[1] == pytest.approx(float(x[1]), abs=1e-15)  # 0.0396
    assert s.samples[2] == pytest.approx(float(x[2]), abs=1e-15)  # 0.15212736
    assert float(x[2]) == pytest.approx(0.15212736, abs=1e-15)


def test_henon_second_sample():
    s = generate_map(default_spec("henon", length=2))
    assert s.samples[1] == pytest.approx(1 - 1.4 * 0.01 ** 2 + 0.01, abs=1e-15)
    assert s.samples[1] == pytest.approx(1.00986, abs=1e-12)


def test_henon_y_component():
    s = generate_map(default_spec("henon", length=3, component="y"))
    assert s.samples[0] == 0.01
    assert s.samples[1] == pytest.approx(0.3 * 0.01)


def test_map_missing_parameter():
    with pytest.raises(ConfigurationError, match="alpha"):
        generate_map(GeneratorSpec("henon", {"beta": 0.3}, (0.0, 0.0), length=5))


def test_map_divergence_names_step():
    spec = GeneratorSpec("logistic", {"r": 4.0}, (10.0,), length=50)
    with pytest.raises(NumericOverflowError, match="step") as info:
        generate_map(spec)
    assert info.value.step is not None and info.value.step > 1


@pytest.mark.parametrize("length", [0, -3])
def test_nonpositive_length(length):
    with pytest.raises(ConfigurationError):
        generate(default_spec("logistic", length=length))


def test_lorenz_origin_is_fixed():
    s = integrate_lorenz(default_spec("lorenz", length=100, initial=(0.0, 0.0, 0.0)))
    assert np.all(s.samples == 0)


def test_lorenz_initial_state_emitted_first():
    s = integrate_lorenz(default_spec("lorenz", length=10))
    assert s.samples[0] == 0.0
    z = integrate_lorenz(default_spec("lorenz", length=10, component="z"))
    assert z.samples[0] == 1e-10


def _euler(state, dt, steps, sigma=10.0, b=8.0 / 3.0, rho=28.0):
    x, y, z = state
    for _ in range(steps):
        x, y, z = (
            x + dt * sigma * (y - x),
            y + dt * (x * (rho - z) - y),
            z + dt * (x * y - b * z),
        )
    return x, y, z


@pytest.mark.parametrize("component", ["x", "y", "z"])
def test_lorenz_rk4_matches_fine_euler(component):
    spec = default_spec("lorenz", length=11, initial=(1.0, 1.0, 1.0), dt=0.001, component=component)
    rk4 = integrate_lorenz(spec).samples
    idx = "xyz".index(component)
    state = (1.0, 1.0, 1.0)
    expected = [state[idx]]
    # Euler at dt=1e-6 carries ~1.3e-6 truncation error here; 1e-7 keeps the oracle well inside 1e-6
    for _ in range(10):
        state = _euler(state, 1e-7, 10000)
        expected.append(state[idx])
    np.testing.assert_allclose(rk4, expected, rtol=0, atol=1e-6)


def test_lorenz_transient_discards_leading_steps():
    full = integrate_lorenz(default_spec("lorenz", length=30, initial=(1.0, 1.0, 1.0)))
    cut = integrate_lorenz(default_spec("lorenz", length=20, initial=(1.0, 1.0, 1.0), transient=10))
    np.testing.assert_array_equal(cut.samples, full.samples[10:])


@pytest.mark.parametrize("dt", [0.0, -0.01])
def test_lorenz_bad_dt(dt):
    with pytest.raises(ConfigurationError):
        integrate_lorenz(default_spec("lorenz", length=10, dt=dt))


def test_lorenz_blows_up():
    spec = default_spec("lorenz", length=200, initial=(1e3, 1e3, 1e3), dt=1.0)
    with pytest.raises(NumericOverflowError):
        integrate_lorenz(spec)


def test_uniform_range():
    s = generate_stochastic(default_spec("uniform", length=5000, seed=3))
    assert s.samples.min() >= 0 and s.samples.max() <= 1


def test_ar1_zero_delta_is_innovations():
    s = generate_stochastic(default_spec("ar1", length=1000, seed=11, delta=0.0))
    np.testing.assert_array_equal(s.samples, np.random.default_rng(11).standard_normal(1000))


def test_ar1_recursion():
    s = generate_stochastic(default_spec("ar1", length=200, seed=5)).samples
    xi = np.random.default_rng(5).standard_normal(200)
    expected = [xi[0]]
    for e in xi[1:]:
        expected.append(0.3 * expected[-1] + e)
    np.testing.assert_allclose(s, expected, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("delta", [1.0, -1.0, 1.5])
def test_ar1_nonstationary_rejected(delta):
    with pytest.raises(ConfigurationError):
        generate_stochastic(default_spec("ar1", length=10, delta=delta))


def test_stochastic_needs_seed():
    with pytest.raises(ConfigurationError):
        generate_stochastic(GeneratorSpec("uniform", length=10))


def test_pink_noise_slope():
    x = generate_stochastic(default_spec("pink", length=4096, seed=8)).samples
    power = np.abs(np.fft.rfft(x - x.mean())) ** 2
    f = np.fft.rfftfreq(x.size)
    slope = np.polyfit(np.log(f[1:]), np.log(power[1:]), 1)[0]
    assert -1.3 <= slope <= -0.7


@pytest.mark.parametrize("model", ["logistic", "henon", "lorenz", "ar1", "pink", "uniform"])
def test_generators_reproducible(model):
    a = generate(default_spec(model, length=2000))
    b = generate(default_spec(model, length=2000))
    assert a.samples.tobytes() == b.samples.tobytes()
    assert a.provenance == b.provenance


def test_different_seeds_differ():
    a = generate(default_spec("ar1", length=100, seed=1))
    b = generate(default_spec("ar1", length=100, seed=2))
    assert not np.array_equal(a.samples, b.samples)


def test_cached_mean(rng):
    x = rng.normal(3.0, 2.0, 1000)
    s = TimeSeries(x)
    assert s.length == len(s) == 1000
    assert abs(s.mean - sum(x) / 1000) <= 1e-12 * abs(s.mean)


def test_center_examples():
    np.testing.assert_allclose(center([1, 2, 3]).samples, [-1, 0, 1], atol=1e-15)
    np.testing.assert_array_equal(center([5, 5, 5]).samples, [0, 0, 0])
    z = np.array([-2.0, 0.5, 1.5])
    np.testing.assert_allclose(center(z).samples, z, rtol=0, atol=1e-15)


def test_center_mean_is_zero(rng):
    x = rng.normal(1e3, 50, 4097)
    c = center(x)
    assert abs(c.mean) <= 1e-12 * np.max(np.abs(c.samples))


def test_center_empty():
    with pytest.raises(DomainError):
        center([])


def test_reverse_examples():
    np.testing.assert_array_equal(reverse([1, 2, 3], "time").samples, [3, 2, 1])
    np.testing.assert_array_equal(reverse([-1, 0, 1], "amplitude").samples, [1, 0, -1])


def test_reverse_involution(rng):
    x = center(rng.normal(size=257))
    assert np.array_equal(reverse(reverse(x, "time"), "time").samples, x.samples)
    assert np.array_equal(reverse(reverse(x, "amplitude"), "amplitude").samples, x.samples)
    assert reverse(x, "amplitude").is_centered()
    assert reverse(x, "time").length == x.length


def test_amplitude_reverse_needs_centering():
    with pytest.raises(PreconditionError):
        reverse([1.0, 2.0, 3.0], "amplitude")


def test_reverse_bad_mode():
    with pytest.raises(ConfigurationError):
        reverse([1.0, 2.0], "sideways")


def test_samples_are_read_only():
    s = TimeSeries([1.0, 2.0])
    with pytest.raises(ValueError):
        s.samples[0] = 5.0
