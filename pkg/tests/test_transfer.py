import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from husimi_ising import oracle
from husimi_ising.model import ModelParams
from husimi_ising.transfer import (
    build_transfer,
    eigenvectors,
    log_partition,
    magnetization,
    sigma_z_rotated,
    spectral,
    two_point,
)

from conftest import random_params

SIGMA_Z = np.diag([1.0, -1.0])

couplings = st.floats(-3, 3, allow_nan=False)
betas = st.floats(0.01, 5, allow_nan=False)


def _params(J, B, beta, n=6):
    return ModelParams(J, B, beta, n)


class TestBuildTransfer:
    def test_infinite_temperature(self):
        np.testing.assert_array_equal(build_transfer(ModelParams(1.5, -0.3, 0.0, 4)).as_array(), np.ones((2, 2)))

    def test_field_only(self):
        t = build_transfer(ModelParams(0.0, 1.0, 1.0, 4)).as_array()
        np.testing.assert_allclose(t, [[math.exp(-1), 1.0], [1.0, math.e]], rtol=1e-15)

    def test_coupling_only(self):
        t = build_transfer(ModelParams(1.0, 0.0, 1.0, 4)).as_array()
        np.testing.assert_allclose(t, [[math.e, math.exp(-1)], [math.exp(-1), math.e]], rtol=1e-15)

    def test_overflow_keeps_log_entries(self):
        t = build_transfer(ModelParams(10.0, 1.0, 100.0, 4))
        assert not t.representable
        assert t.log_mm == pytest.approx(1100.0)
        with pytest.raises(OverflowError):
            t.as_array()

    def test_trace_of_power_is_partition_function(self, rng):
        for n in range(2, 9):
            p = random_params(rng, n, beta=(0.0, 2.0))
            t = build_transfer(p).as_array()
            z = np.trace(np.linalg.matrix_power(t, n))
            assert math.log(z) == pytest.approx(oracle.log_partition_brute(p), rel=1e-12)


class TestSpectral:
    def test_zero_field(self):
        beta, J = 0.7, 1.3
        sp = spectral(ModelParams(J, 0.0, beta, 4))
        assert sp.lambda_plus == pytest.approx(2 * math.cosh(beta * J), rel=1e-14)
        assert sp.lambda_minus == pytest.approx(2 * math.sinh(beta * J), rel=1e-14)
        assert sp.omega == pytest.approx(math.pi / 4, abs=1e-15)
        assert sp.cos2w == 0.0
        assert sp.sin2w == pytest.approx(1.0, abs=1e-15)

    def test_infinite_temperature(self):
        sp = spectral(ModelParams(2.0, 1.0, 0.0, 4))
        assert sp.lambda_plus == pytest.approx(2.0, rel=1e-15)
        assert sp.ratio == 0.0
        assert sp.power(0) == 1.0
        assert sp.power(3) == 0.0

    def test_eigenvalue_formula(self, rng):
        # corrected discriminant e^{2bJ} sinh^2(bB) + e^{-2bJ}
        for _ in range(20):
            p = random_params(rng, 4, beta=(0.0, 3.0))
            x, h = p.beta * p.J, p.beta * p.B
            disc = math.sqrt(math.exp(2 * x) * math.sinh(h) ** 2 + math.exp(-2 * x))
            sp = spectral(p)
            assert sp.lambda_plus == pytest.approx(math.exp(x) * math.cosh(h) + disc, rel=1e-13)
            want_minus = math.exp(x) * math.cosh(h) - disc
            assert sp.lambda_minus == pytest.approx(want_minus, rel=1e-9, abs=1e-12 * sp.lambda_plus)

    def test_matches_numpy_eigh(self, rng):
        for _ in range(30):
            p = random_params(rng, 4)
            vals = np.linalg.eigvalsh(build_transfer(p).as_array())
            sp = spectral(p)
            assert sp.lambda_plus == pytest.approx(vals[1], rel=1e-13)
            assert sp.lambda_minus == pytest.approx(vals[0], abs=1e-12 * sp.lambda_plus)

    def test_reconstruction(self, rng):
        for _ in range(30):
            p = random_params(rng, 4)
            sp = spectral(p)
            u = eigenvectors(sp)
            rebuilt = u @ np.diag([sp.lambda_plus, sp.lambda_minus]) @ u.T
            t = build_transfer(p).as_array()
            np.testing.assert_allclose(rebuilt, t, rtol=1e-12, atol=1e-12 * sp.lambda_plus)

    def test_eigen_residual(self, rng):
        for _ in range(50):
            p = random_params(rng, 4)
            sp = spectral(p)
            t = build_transfer(p).as_array()
            v = eigenvectors(sp)
            for col, lam in ((0, sp.lambda_plus), (1, sp.lambda_minus)):
                resid = t @ v[:, col] - lam * v[:, col]
                assert np.max(np.abs(resid)) <= 1e-12 * sp.lambda_plus

    def test_tan_omega_formula(self, rng):
        for _ in range(20):
            p = random_params(rng, 4, beta=(0.01, 3.0))
            x, h = p.beta * p.J, p.beta * p.B
            s = math.exp(x) * math.sinh(h)
            q = math.sqrt(s * s + math.exp(-2 * x))
            # e^{-x} / (s + q) == e^{x} (q - s); pick the form without cancellation
            tan_w = math.exp(-x) / (s + q) if s >= 0 else math.exp(x) * (q - s)
            assert math.tan(spectral(p).omega) == pytest.approx(tan_w, rel=1e-12)

    def test_omega_matches_numpy_eigenvector(self, rng):
        for _ in range(20):
            p = random_params(rng, 4)
            _, vecs = np.linalg.eigh(build_transfer(p).as_array())
            top = vecs[:, 1] * np.sign(vecs[0, 1])
            sp = spectral(p)
            np.testing.assert_allclose(top, [math.sin(sp.omega), math.cos(sp.omega)], atol=1e-12)

    @given(couplings, couplings, betas)
    def test_invariants(self, J, B, beta):
        sp = spectral(_params(J, B, beta))
        assert sp.cos2w**2 + sp.sin2w**2 == pytest.approx(1.0, abs=1e-14)
        assert abs(sp.ratio) < 1.0
        assert sp.sin2w > 0.0
        assert 0.0 < sp.omega < math.pi / 2

    @given(couplings, couplings, betas)
    def test_determinant(self, J, B, beta):
        sp = spectral(_params(J, B, beta))
        det = sp.lambda_plus * sp.lambda_minus
        assert det == pytest.approx(2 * math.sinh(2 * beta * J), rel=1e-10, abs=1e-14 * sp.lambda_plus**2)

    def test_large_parameters_stay_finite(self):
        sp = spectral(ModelParams(5.0, 3.0, 400.0, 10**9))
        assert math.isfinite(sp.log_lambda_plus)
        assert sp.log_lambda_plus == pytest.approx(400.0 * 8.0, rel=1e-14)
        sp = spectral(ModelParams(-5.0, 0.1, 400.0, 10))
        assert math.isfinite(sp.log_lambda_plus) and sp.log_abs_ratio <= 0.0
        sp = spectral(ModelParams(-5.0, 0.1, 2.0, 10))
        assert -1 < sp.ratio < 0

    def test_power_sum_accuracy_near_minus_one(self):
        sp = spectral(ModelParams(-2.0, 0.0, 5.0, 11))
        # r = tanh(-10); 1 + r^11 = 1 - tanh(10)^11
        eps = 2.0 / (math.exp(20.0) + 1.0)  # 1 - tanh(10)
        want = -math.expm1(11 * math.log1p(-eps))
        assert sp.power_sum(0, 11) == pytest.approx(want, rel=1e-12)


class TestTraceIdentities:
    @pytest.mark.parametrize("n", range(2, 13))
    def test_sigma_z_trace(self, rng, n):
        p = random_params(rng, n, beta=(0.0, 1.5))
        sp = spectral(p)
        t = build_transfer(p).as_array()
        direct = np.trace(np.linalg.matrix_power(t, n) @ SIGMA_Z)
        closed = (sp.lambda_minus**n - sp.lambda_plus**n) * sp.cos2w
        assert direct == pytest.approx(closed, rel=1e-12, abs=1e-12 * sp.lambda_plus**n)

    @pytest.mark.parametrize("n", range(2, 13))
    def test_two_sigma_trace(self, rng, n):
        p = random_params(rng, n, beta=(0.0, 1.5))
        sp = spectral(p)
        t = build_transfer(p).as_array()
        lp, lm, c, s = sp.lambda_plus, sp.lambda_minus, sp.cos2w, sp.sin2w
        for d in range(1, n):
            direct = np.trace(
                np.linalg.matrix_power(t, n - d) @ SIGMA_Z @ np.linalg.matrix_power(t, d) @ SIGMA_Z
            )
            closed = (
                lp**n * c**2 + lp ** (n - d) * lm**d * s**2 + lm ** (n - d) * lp**d * s**2 + lm**n * c**2
            )
            assert direct == pytest.approx(closed, rel=1e-12, abs=1e-12 * lp**n)

    def test_rotated_sigma_z_matches_conjugation(self, rng):
        for _ in range(10):
            sp = spectral(random_params(rng, 4))
            u = eigenvectors(sp)
            np.testing.assert_allclose(sigma_z_rotated(sp), u.T @ SIGMA_Z @ u, atol=1e-14)


class TestSigmaZRotated:
    def test_zero_field(self):
        m = sigma_z_rotated(spectral(ModelParams(1.0, 0.0, 1.0, 4)))
        np.testing.assert_allclose(m, [[0.0, -1.0], [-1.0, 0.0]], atol=1e-15)

    @given(couplings, couplings, betas)
    def test_traceless_involution(self, J, B, beta):
        m = sigma_z_rotated(spectral(_params(J, B, beta)))
        assert abs(np.trace(m)) <= 1e-15
        np.testing.assert_allclose(m @ m, np.eye(2), atol=1e-14)


class TestLogPartition:
    def test_infinite_temperature(self):
        assert log_partition(ModelParams(1.0, 1.0, 0.0, 7)) == pytest.approx(7 * math.log(2), rel=1e-15)

    @pytest.mark.parametrize("n", range(2, 13))
    def test_matches_oracle(self, rng, n):
        for _ in range(5):
            p = random_params(rng, n)
            assert log_partition(p) == pytest.approx(oracle.log_partition_brute(p), rel=1e-12)

    def test_huge_chain(self):
        p = ModelParams(1.0, 0.3, 2.0, 10**6)
        value = log_partition(p)
        base = p.N * spectral(p).log_lambda_plus
        assert math.isfinite(value)
        assert abs(value - base) <= math.log(2)


class TestMagnetization:
    def test_zero_field(self, rng):
        for _ in range(5):
            assert magnetization(random_params(rng, 7, B=(0.0, 0.0))) == 0.0

    def test_low_temperature(self):
        assert magnetization(ModelParams(1.0, 1.0, 100.0, 50)) == pytest.approx(-1.0, abs=1e-8)

    @pytest.mark.parametrize("n", range(2, 13))
    def test_matches_oracle(self, rng, n):
        for _ in range(5):
            p = random_params(rng, n)
            assert magnetization(p) == pytest.approx(oracle.correlator_brute(p, [1]), abs=1e-12)

    def test_bounded(self, rng):
        for _ in range(100):
            assert abs(magnetization(random_params(rng, int(rng.integers(2, 500)), beta=(0, 50)))) <= 1.0


class TestTwoPoint:
    @pytest.mark.parametrize("beta", [0.1, 0.5, 1.0, 2.0])
    def test_adjacent_zero_field_thermodynamic(self, beta):
        p = ModelParams(1.0, 0.0, beta, 4000)
        assert two_point(p, 1, 2) == pytest.approx(math.tanh(beta), abs=1e-14)

    def test_adjacent_zero_field_n12_close_to_tanh(self):
        p = ModelParams(1.0, 0.0, 0.5, 12)
        assert oracle.correlator_brute(p, [1, 2]) == pytest.approx(math.tanh(0.5), abs=1e-3)

    def test_infinite_temperature(self):
        p = ModelParams(1.0, 0.7, 0.0, 9)
        for j in range(2, 10):
            assert two_point(p, 1, j) == 0.0

    @pytest.mark.parametrize("n", range(2, 13))
    def test_matches_oracle(self, rng, n):
        for _ in range(3):
            p = random_params(rng, n)
            for i in range(1, n):
                for j in range(i + 1, n + 1):
                    assert two_point(p, i, j) == pytest.approx(oracle.correlator_brute(p, [i, j]), abs=1e-12)

    @pytest.mark.parametrize("bad", [(0, 2), (2, 2), (3, 2), (1, 7)])
    def test_index_errors(self, bad):
        with pytest.raises(ValueError):
            two_point(ModelParams(1, 0, 1, 6), *bad)

    @settings(max_examples=30)
    @given(couplings, couplings, betas, st.integers(3, 30))
    def test_translation_and_reflection(self, J, B, beta, n):
        p = _params(J, B, beta, n)
        for d in range(1, n):
            ref = two_point(p, 1, 1 + d)
            for i in range(2, n - d + 1):
                assert two_point(p, i, i + d) == ref
            assert two_point(p, 1, 1 + n - d) == pytest.approx(ref, abs=1e-15)

    def test_frustrated_odd_ring(self):
        # strongly antiferromagnetic odd ring: r close to -1
        for n in (3, 5, 7, 11):
            p = ModelParams(-2.0, 0.0, 5.0, n)
            for j in range(2, n + 1):
                assert two_point(p, 1, j) == pytest.approx(oracle.correlator_brute(p, [1, j]), abs=1e-12)
