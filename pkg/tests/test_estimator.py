import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ampboost.errors import EstimationError, GaussianModelViolation
from ampboost.estimator import (
    estimate_ps,
    ps_error,
    sample_costs,
    table1_experiment,
)
from ampboost.problems import generate_linear_qubo, linear_qubo
from ampboost.spectrum import enumerate_space, exact_ps, stats


class TestSampleCosts:
    def test_constant_problem_all_equal(self):
        p = linear_qubo([0, 0, 0], [0, 0])
        assert np.all(sample_costs(p, 100, seed=0) == 0)

    def test_sample_mean_near_population_mean(self):
        p = generate_linear_qubo(18, seed=5)
        space = enumerate_space(p)
        st_ = stats(space, 1.0)
        m = 10_000
        samples = sample_costs(p, m, seed=1)
        assert abs(samples.mean() - st_.mu) < 4 * st_.sigma / np.sqrt(m)

    def test_seed_determinism(self):
        p = generate_linear_qubo(10, seed=2)
        assert np.array_equal(sample_costs(p, 64, seed=7),
                              sample_costs(p, 64, seed=7))

    def test_too_few_samples(self):
        with pytest.raises(EstimationError):
            sample_costs(generate_linear_qubo(4, seed=0), 1, seed=0)


class TestEstimatePs:
    def test_closed_form_sigma_1000(self):
        # two-point sample {-1000, 1000}: mu=0, population sigma exactly 1000
        est = estimate_ps([-1000.0, 1000.0], n_qubits=23)
        alpha = 2.0**22 / (1000.0 * np.sqrt(np.pi / 2))
        assert est.alpha_t == pytest.approx(alpha, rel=1e-12)
        assert est.alpha_t == pytest.approx(3346.6, rel=1e-3)
        half = 1000.0 * np.sqrt(2 * np.log(alpha))
        assert est.x_plus == pytest.approx(half, rel=1e-12)
        assert est.x_plus == pytest.approx(4029.6, rel=1e-3)
        assert est.ps_t == pytest.approx(2 * np.pi / (2 * half), rel=1e-12)
        assert est.ps_t == pytest.approx(7.796e-4, rel=1e-3)

    def test_two_tiny_samples(self):
        est = estimate_ps([-1.0, 1.0], n_qubits=2)
        assert est.alpha_t == pytest.approx(2 / np.sqrt(np.pi / 2), rel=1e-12)
        assert est.ps_t > 0 and np.isfinite(est.ps_t)

    def test_constant_samples_rejected(self):
        with pytest.raises(EstimationError):
            estimate_ps([4.0, 4.0, 4.0], n_qubits=8)

    def test_overwide_spread_rejected(self):
        with pytest.raises(GaussianModelViolation):
            estimate_ps([-1e6, 1e6], n_qubits=4)

    def test_span_and_scale_identities(self):
        rng = np.random.default_rng(0)
        est = estimate_ps(rng.normal(0, 300, size=500), n_qubits=18)
        assert est.x_plus > est.x_minus
        assert est.ps_t == pytest.approx(2 * np.pi / (est.x_plus - est.x_minus),
                                         rel=1e-12)

    def test_shift_equivariance(self):
        rng = np.random.default_rng(4)
        samples = rng.normal(0, 250, size=400)
        a = estimate_ps(samples, 18)
        b = estimate_ps(samples + 123.0, 18)
        assert b.sigma_t == pytest.approx(a.sigma_t, rel=1e-12)
        assert b.alpha_t == pytest.approx(a.alpha_t, rel=1e-12)
        assert b.ps_t == pytest.approx(a.ps_t, rel=1e-12)
        assert b.x_minus == pytest.approx(a.x_minus + 123.0, rel=1e-9)
        assert b.x_plus == pytest.approx(a.x_plus + 123.0, rel=1e-9)

    def test_scale_follows_closed_form_not_naive_law(self):
        rng = np.random.default_rng(5)
        samples = rng.normal(0, 100, size=400)
        lam = 3.0
        a = estimate_ps(samples, 20)
        b = estimate_ps(samples * lam, 20)
        assert b.sigma_t == pytest.approx(lam * a.sigma_t, rel=1e-12)
        alpha_b = 2.0**19 / (b.sigma_t * np.sqrt(np.pi / 2))
        half_b = b.sigma_t * np.sqrt(2 * np.log(alpha_b))
        assert b.ps_t == pytest.approx(np.pi / half_b, rel=1e-12)
        assert b.ps_t != pytest.approx(a.ps_t / lam, rel=1e-6)

    def test_normalization_identity(self):
        rng = np.random.default_rng(6)
        for n in (8, 16, 23):
            est = estimate_ps(rng.normal(0, 2 ** (n - 6), size=300), n)
            assert est.alpha_t * est.sigma_t * np.sqrt(2 * np.pi) == pytest.approx(
                2.0**n, rel=1e-9
            )


class TestPsError:
    def test_zero_when_exact(self):
        assert ps_error(0.5, 0.5) == 0

    def test_relative_arithmetic(self):
        assert ps_error(1.07 * 0.3, 0.3) == pytest.approx(0.07)

    def test_invalid_reference(self):
        with pytest.raises(EstimationError):
            ps_error(0.1, 0.0)


class TestTrialBattery:
    def test_consistency_on_synthetic_gaussian_space(self):
        # directly estimate from a huge gaussian sample: error under 2%
        rng = np.random.default_rng(9)
        n = 20
        sigma = 400.0
        samples = rng.normal(0.0, sigma, size=2**n)
        est = estimate_ps(samples, n)
        alpha = 2.0 ** (n - 1) / (sigma * np.sqrt(np.pi / 2))
        ps_ref = np.pi / (sigma * np.sqrt(2 * np.log(alpha)))
        assert ps_error(est.ps_t, ps_ref) < 0.02

    def test_small_battery_shape_and_determinism(self):
        rows = table1_experiment(10, [50, 200], trials=5, qubo_count=5, seed=3)
        again = table1_experiment(10, [50, 200], trials=5, qubo_count=5, seed=3)
        assert [r.m for r in rows] == [50, 200]
        assert all(np.isfinite(r.mean_error) and r.mean_error > 0 for r in rows)
        assert rows == again


@given(st.floats(0.1, 10.0), st.integers(10, 24))
@settings(max_examples=40, deadline=None)
def test_estimate_positive_whenever_model_holds(scale, n):
    rng = np.random.default_rng(42)
    samples = rng.normal(0, scale, size=200)
    try:
        est = estimate_ps(samples, n)
    except GaussianModelViolation:
        return
    assert est.ps_t > 0
    assert est.x_plus > est.x_minus
