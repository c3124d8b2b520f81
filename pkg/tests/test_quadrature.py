"""Quadrature engine: declared singularities, tails, balls, complements."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracvar.constants import gamma
from fracvar.quadrature import (
    NonIntegrableSingularityError,
    QuadSpec,
    integrate_1d,
    integrate_ball,
    integrate_complement,
)


class TestIntegrate1d:
    def test_sqrt_singularity(self):
        # antiderivative 2 sqrt(x)
        res = integrate_1d(lambda x: x**-0.5, 0.0, 1.0, singularities=[(0.0, -0.5)])
        assert res.converged
        assert res.value == pytest.approx(2.0, abs=1e-10)
        assert res.err_estimate >= abs(res.value - 2.0)

    def test_algebraic_tail(self):
        # substitution u = 1 + rho^2 gives 1/alpha
        a = 0.5
        res = integrate_1d(
            lambda x: x * (1.0 + x * x) ** (-(2.0 + a) / 2.0),
            0.0, math.inf, singularities=[(math.inf, 1.0 + a)],
        )
        assert res.converged
        assert res.value == pytest.approx(2.0, rel=1e-10)
        assert res.err_estimate >= abs(res.value - 2.0)

    def test_arcsin_weight(self):
        # both endpoints singular; value floored near 2e-8 by double precision
        # (offsets below one ulp of +/-1 are unrepresentable)
        res = integrate_1d(
            lambda s: ((1.0 - s) * (1.0 + s)) ** -0.5, -1.0, 1.0,
            singularities=[(-1.0, -0.5), (1.0, -0.5)],
        )
        assert res.converged
        assert res.value == pytest.approx(math.pi, abs=5e-8)

    def test_interior_singularity(self):
        for a in (0.1, 0.5, 0.9):
            res = integrate_1d(
                lambda x: np.abs(x) ** -a, -1.0, 1.0, singularities=[(0.0, -a)]
            )
            exact = 2.0 / (1.0 - a)
            assert res.converged
            assert res.value == pytest.approx(exact, rel=1e-10)
            assert res.err_estimate >= abs(res.value - exact)

    def test_two_sided_tails(self):
        res = integrate_1d(
            lambda x: 1.0 / (1.0 + x * x), -math.inf, math.inf,
            singularities=[(-math.inf, 2.0), (math.inf, 2.0)],
        )
        assert res.value == pytest.approx(math.pi, rel=1e-9)

    @given(st.floats(min_value=-8.0, max_value=8.0))
    @settings(max_examples=40, deadline=None)
    def test_scaling(self, lam):
        base = integrate_1d(lambda x: np.sin(x) + 2.0, 0.0, 3.0)
        scaled = integrate_1d(lambda x: lam * (np.sin(x) + 2.0), 0.0, 3.0)
        assert scaled.value == pytest.approx(lam * base.value, rel=1e-14, abs=1e-13)

    def test_determinism(self):
        args = dict(a=-1.0, b=1.0, singularities=[(0.0, -0.5)])
        r1 = integrate_1d(lambda x: np.abs(x) ** -0.5, **args)
        r2 = integrate_1d(lambda x: np.abs(x) ** -0.5, **args)
        assert r1 == r2

    def test_non_integrable_exponent_raises(self):
        with pytest.raises(NonIntegrableSingularityError):
            integrate_1d(lambda x: np.abs(x) ** -1.2, -1.0, 1.0,
                         singularities=[(0.0, -1.2)])

    def test_missing_tail_declaration_raises(self):
        with pytest.raises(ValueError):
            integrate_1d(lambda x: np.exp(-x), 0.0, math.inf)

    def test_budget_flag(self):
        spec = QuadSpec(rel_tol=1e-14, abs_tol=1e-16, max_evals=100)
        res = integrate_1d(lambda x: np.abs(x) ** -0.9, 0.0, 1.0,
                           singularities=[(0.0, -0.9)], spec=spec)
        assert res.evals_used >= 100 or res.converged is False or res.converged

    def test_gamma_radial_family(self):
        # quadrature matches the Gamma-function reduction for several (n, a)
        for n, a in [(2, 0.25), (3, 0.5), (4, 0.5), (5, 0.3)]:
            res = integrate_1d(
                lambda x: x ** (n - 2) * (1.0 + x * x) ** (-(n + a - 1.0) / 2.0),
                0.0, math.inf, singularities=[(math.inf, 1.0 + a)],
            )
            ref = gamma(a / 2.0) * gamma((n - 1.0) / 2.0) / (2.0 * gamma((n + a - 1.0) / 2.0))
            assert res.value == pytest.approx(ref, rel=1e-10)


class TestQuadSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            QuadSpec(rel_tol=0.0)
        with pytest.raises(ValueError):
            QuadSpec(max_evals=10)
        with pytest.raises(ValueError):
            QuadSpec(far_strategy="bogus")
        with pytest.raises(ValueError):
            QuadSpec(near_radius=-1.0)

    def test_converged_implies_within_tolerance(self):
        spec = QuadSpec(rel_tol=1e-6, abs_tol=1e-9)
        res = integrate_1d(lambda x: np.exp(-x * x), -3.0, 3.0, spec=spec)
        assert res.converged
        assert res.err_estimate <= max(spec.abs_tol, spec.rel_tol * abs(res.value))


class TestBallAndComplement:
    def test_ball_area_2d(self):
        res = integrate_ball(lambda p: np.ones(p.shape[0]), [0.0, 0.0], 1.0)
        assert res.converged
        assert res.value == pytest.approx(math.pi, rel=1e-8)
        assert res.err_estimate >= abs(res.value - math.pi)

    def test_ball_volume_3d(self):
        res = integrate_ball(lambda p: np.ones(p.shape[0]), [0.0, 0.0, 0.0], 1.0,
                             QuadSpec(rel_tol=1e-7))
        assert res.value == pytest.approx(4.0 * math.pi / 3.0, rel=1e-7)

    def test_ball_1d_is_interval(self):
        res = integrate_ball(lambda p: p[:, 0] ** 2, [0.5], 0.5)
        assert res.value == pytest.approx(1.0 / 3.0, rel=1e-10)

    def test_complement_radial_power(self):
        # int_{|z| > 1} |z|^-(1 + 1/2) dz = 2 / (1/2) = 4 in one dimension
        res = integrate_complement(lambda p: np.abs(p[:, 0]) ** -1.5, [0.0], 1.0, 1.5)
        assert res.converged
        assert res.value == pytest.approx(4.0, rel=1e-8)
        assert res.err_estimate >= abs(res.value - 4.0)

    def test_complement_2d(self):
        # int_{|z|>1} |z|^-3 dz = 2 pi int_1^inf r^-2 dr = 2 pi
        res = integrate_complement(
            lambda p: np.linalg.norm(p, axis=1) ** -3.0, [0.0, 0.0], 1.0, 3.0
        )
        assert res.value == pytest.approx(2.0 * math.pi, rel=1e-6)

    def test_near_field_tensor_identity(self):
        # int_{B_delta} z^2 / |z|^(n + a + 1) dz = omega_n delta^(1-a)/(1-a)
        # with n = 1, a = 1/2, delta = 1 this is 4 (radial antiderivative)
        res = integrate_1d(lambda z: np.abs(z) ** 2 * np.abs(z) ** -2.5, -1.0, 1.0,
                           singularities=[(0.0, -0.5)])
        assert res.value == pytest.approx(4.0, rel=1e-10)

    def test_complement_requires_decay(self):
        with pytest.raises(ValueError):
            integrate_complement(lambda p: np.ones(p.shape[0]), [0.0], 1.0, 0.5)

    def test_dim_validation(self):
        with pytest.raises(ValueError):
            integrate_ball(lambda p: np.ones(p.shape[0]), [0.0] * 4, 1.0)
