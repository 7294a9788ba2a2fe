import math

import numpy as np
import pytest

from anisorec.indexsets import AnisotropyMixed, IndexSet, hyperbolic_cross
from anisorec.sensing import (
    RNSP_RHO,
    RNSP_TAU,
    MeasurementOperator,
    SampleSet,
    adjoint,
    apply,
    draw_uniform_samples,
    lambda_upper_bound,
    recovery_constants,
    rip_constant_bruteforce,
    sample_vector,
    srlasso_error_certificate,
    truncation_error_vector,
)
from anisorec.sobolev import PeriodicFunction, evaluate, generate_extremal

INV_SQRT_2PI = (2.0 * math.pi) ** -0.5


class TestSampling:
    def test_deterministic(self):
        a = draw_uniform_samples(3, 2, seed=1)
        b = draw_uniform_samples(3, 2, seed=1)
        assert np.array_equal(a.points, b.points)

    def test_range_and_shape(self):
        s = draw_uniform_samples(1, 3, seed=0)
        assert s.points.shape == (1, 3)
        assert np.all(s.points >= -math.pi) and np.all(s.points < math.pi)

    def test_monte_carlo_mean(self):
        s = draw_uniform_samples(10_000, 1, seed=2)
        mean = s.points.mean()
        stderr = s.points.std(ddof=1) / 100.0
        assert abs(mean) <= 3.0 * stderr

    def test_points_immutable(self):
        s = draw_uniform_samples(4, 1, seed=3)
        with pytest.raises(ValueError):
            s.points[0, 0] = 0.0


class TestSampleVector:
    def test_constant_mode(self):
        f = PeriodicFunction(1, {(0,): 1.0})
        b = sample_vector(f, draw_uniform_samples(4, 1, seed=1))
        assert np.allclose(b, INV_SQRT_2PI / 2.0)

    def test_zero_function(self):
        f = PeriodicFunction(1, {})
        assert np.allclose(sample_vector(f, draw_uniform_samples(5, 1, seed=1)), 0.0)

    def test_single_mode_at_origin(self):
        f = PeriodicFunction(1, {(1,): 1.0})
        origin = SampleSet(1, np.zeros((1, 1)))
        assert sample_vector(f, origin)[0] == pytest.approx(INV_SQRT_2PI)


class TestOperator:
    def test_unit_column(self):
        origin = SampleSet(1, np.zeros((1, 1)))
        op = MeasurementOperator(origin, hyperbolic_cross(1, 2), scaled=True)
        z = np.zeros(3, dtype=complex)
        z[0] = 1.0  # canonical order puts n = 0 first
        assert apply(op, z)[0] == pytest.approx(1.0)

    def test_zero_vector(self):
        op = _random_operator(5, 7, seed=3)
        assert np.allclose(op.apply(np.zeros(op.shape[1], complex)), 0.0)

    def test_entry_modulus(self):
        op = _random_operator(6, 9, seed=4)
        mat = op.dense()
        assert np.allclose(np.abs(mat), 1.0 / math.sqrt(6))

    def test_adjoint_identity(self, rng):
        for seed in range(5):
            op = _random_operator(5, 8, seed=seed)
            z = rng.normal(size=8) + 1j * rng.normal(size=8)
            w = rng.normal(size=5) + 1j * rng.normal(size=5)
            lhs = np.vdot(w, apply(op, z))
            rhs = np.vdot(adjoint(op, w), z)
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))

    def test_scaled_relation(self, rng):
        scaled = _random_operator(4, 6, seed=5, scaled=True)
        plain = MeasurementOperator(scaled.samples, scaled.indexset, scaled=False)
        z = rng.normal(size=6) + 0j
        factor = (2.0 * math.pi) ** (scaled.samples.dim / 2.0)
        assert np.allclose(scaled.apply(z), factor * plain.apply(z))

    def test_dimension_mismatch(self):
        op = _random_operator(3, 5, seed=6)
        with pytest.raises(ValueError):
            op.apply(np.zeros(4, complex))
        with pytest.raises(ValueError):
            op.adjoint(np.zeros(5, complex))

    def test_dense_refuses_large(self):
        samples = draw_uniform_samples(2000, 1, seed=0)
        op = MeasurementOperator(samples, hyperbolic_cross(1, 400), scaled=True)
        with pytest.raises(ValueError):
            op.dense()

    def test_chunked_matches_dense(self, rng, monkeypatch):
        import anisorec.sensing as sensing_mod

        samples = draw_uniform_samples(12, 2, seed=7)
        idx = hyperbolic_cross(2, 6)
        op_cached = MeasurementOperator(samples, idx, scaled=True)
        monkeypatch.setattr(sensing_mod, "_CHUNK_ENTRIES", 40)
        op_chunked = MeasurementOperator(samples, idx, scaled=True)
        z = rng.normal(size=len(idx)) + 1j * rng.normal(size=len(idx))
        w = rng.normal(size=12) + 0j
        assert np.allclose(op_cached.apply(z), op_chunked.apply(z))
        assert np.allclose(op_cached.adjoint(w), op_chunked.adjoint(w))


class TestTruncation:
    def test_zero_when_support_inside(self):
        f = PeriodicFunction(1, {(0,): 1.0, (2,): 0.5})
        samples = draw_uniform_samples(6, 1, seed=8)
        v = truncation_error_vector(f, samples, hyperbolic_cross(1, 4))
        assert np.all(v == 0.0)

    def test_fully_truncated_mode(self):
        f = PeriodicFunction(1, {(9,): 1.0})
        x0 = SampleSet(1, np.array([[0.4]]))
        v = truncation_error_vector(f, x0, hyperbolic_cross(1, 3))
        assert v[0] == pytest.approx(evaluate(f, [0.4]))

    def test_measurement_identity(self, rng):
        # b = A fhat_Lambda + v on random instances
        idx = hyperbolic_cross(2, 5)
        for seed in range(10):
            coeffs = {
                (int(a), int(b)): complex(*rng.normal(size=2))
                for a, b in rng.integers(-4, 5, size=(8, 2))
            }
            f = PeriodicFunction(2, coeffs)
            samples = draw_uniform_samples(7, 2, seed=seed)
            op = MeasurementOperator(samples, idx, scaled=False)
            b = sample_vector(f, samples)
            rhs = op.apply(f.coeff_vector(idx)) + truncation_error_vector(f, samples, idx)
            assert np.max(np.abs(b - rhs)) <= 1e-12


class TestRip:
    def test_single_column_is_tight(self):
        op = _random_operator(4, 1, seed=9)
        assert rip_constant_bruteforce(op, 1) <= 1e-12

    def test_dft_grid_is_isometric(self):
        # equispaced grid with m = N makes the scaled operator unitary
        idx = hyperbolic_cross(1, 6)  # 11 columns
        m = len(idx)
        grid = SampleSet(1, (-math.pi + 2.0 * math.pi * np.arange(m) / m).reshape(-1, 1))
        op = MeasurementOperator(grid, idx, scaled=True)
        assert rip_constant_bruteforce(op, 1) <= 1e-12
        assert rip_constant_bruteforce(op, 2) <= 1e-12

    def test_duplicate_column_gives_one(self):
        # a single sample at the origin makes all columns identical
        origin = SampleSet(1, np.zeros((1, 1)))
        op = MeasurementOperator(origin, hyperbolic_cross(1, 2), scaled=True)
        assert rip_constant_bruteforce(op, 2) == pytest.approx(1.0)

    def test_caps(self):
        op = _random_operator(3, 17, seed=10)
        with pytest.raises(ValueError):
            rip_constant_bruteforce(op, 1)
        op = _random_operator(3, 5, seed=11)
        with pytest.raises(ValueError):
            rip_constant_bruteforce(op, 4)


class TestCertificate:
    def test_constants_at_bridge_values(self):
        c1, c2, c3, c4 = recovery_constants(RNSP_RHO, RNSP_TAU)
        assert c3 == pytest.approx(8.191637457982837, rel=1e-12)
        assert c4 == pytest.approx(19.579676813240855, rel=1e-12)

    def test_zero_inputs_give_zero_bounds(self):
        lo, hi = srlasso_error_certificate(RNSP_RHO, RNSP_TAU, 0.2, 1, 0.0, 0.0)
        assert lo == 0.0 and hi == 0.0

    def test_lambda_endpoint_s1(self):
        assert lambda_upper_bound(1) == pytest.approx(0.28433683062723425, rel=1e-12)

    def test_lambda_out_of_range(self):
        upper = lambda_upper_bound(4)
        with pytest.raises(ValueError):
            srlasso_error_certificate(RNSP_RHO, RNSP_TAU, upper * 1.01, 4, 0.0, 0.0)
        with pytest.raises(ValueError):
            srlasso_error_certificate(RNSP_RHO, RNSP_TAU, 0.0, 4, 0.0, 0.0)

    def test_bound_formulas(self):
        rho, tau, lam, s = 0.5, 2.0, 0.05, 4
        sigma, h = 0.3, 0.01
        c1 = 2 * 1.5 / 0.5
        c2 = 8 / 0.5
        c3 = 2 * 1.5**2 / 0.5
        c4 = 2 * 2 * 3.5 / 0.5
        lo, hi = srlasso_error_certificate(rho, tau, lam, s, sigma, h)
        assert lo == pytest.approx(c1 * sigma + 0.5 * (c1 / lam + c2 * 2) * h)
        assert hi == pytest.approx(c3 * sigma / 2 + 0.5 * (c3 / (2 * lam) + c4) * h)


def _random_operator(m, n_target, seed, scaled=True):
    samples = draw_uniform_samples(m, 1, seed=seed)
    order = 1
    while len(hyperbolic_cross(1, order)) < n_target:
        order += 1
    idx = IndexSet(1, hyperbolic_cross(1, order).indices[:n_target])
    return MeasurementOperator(samples, idx, scaled=scaled)
