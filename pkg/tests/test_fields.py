"""Field catalog: evaluation, metadata, mollification, averages, measures."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracvar.constants import mu, nu
from fracvar.fields import (
    CubeIndicator,
    FAlpha,
    Gaussian,
    HalfSpace,
    HalfSpaceIndicator,
    IntervalIndicator,
    MagicCube,
    NonConvergentAverageError,
    OddBumpPair,
    OddPlateau,
    SignedMeasure,
    SingularPointError,
    SmoothBump,
    UnsupportedFieldError,
    VectorField,
    d_alpha_measure,
    eval as feval,
    field_from_json,
    mollify,
    precise_representative,
)
from fracvar.quadrature import QuadSpec, integrate_1d


class TestFAlpha:
    def test_frozen_values(self):
        fa = FAlpha(alpha=0.5)
        # mu(1,-1/2) (2^(-1/2) - 1) and 2/sqrt(pi), frozen from the
        # high-precision oracle
        assert feval(fa, 2.0) == pytest.approx(-0.11684748862755453, rel=1e-12)
        assert feval(fa, 0.5) == pytest.approx(1.1283791670955126, rel=1e-12)

    @given(st.floats(min_value=1e-3, max_value=1.0 - 1e-3),
           st.floats(min_value=0.05, max_value=0.95))
    @settings(max_examples=120, deadline=None)
    def test_reflection_symmetry_on_unit_interval(self, x, a):
        # sampled away from the endpoints, where representing 1 - x already
        # costs ~eps/x of the offset to the singular point
        fa = FAlpha(alpha=a)
        assert feval(fa, 1.0 - x) == pytest.approx(feval(fa, x), rel=1e-12)

    def test_singular_points_raise(self):
        fa = FAlpha(alpha=0.5)
        with pytest.raises(SingularPointError):
            feval(fa, 0.0)
        with pytest.raises(SingularPointError):
            feval(fa, 1.0)

    def test_decay_metadata(self):
        fa = FAlpha(alpha=0.3)
        assert fa.decay_exponent == pytest.approx(1.7)
        # differenced tails: f ~ mu (a-1) x^(a-2)
        x = 1e5
        expect = mu(1, -0.3) * (0.3 - 1.0) * x ** (0.3 - 2.0)
        assert feval(fa, x) == pytest.approx(expect, rel=1e-4)


class TestCompactSupport:
    def test_bump_bit_exact_zero_outside(self):
        b = SmoothBump(center=(0.25,), width=0.5)
        for x in (0.76, 5.0, -0.25, -100.0):
            assert feval(b, x) == 0.0
        assert feval(b, 0.25) == 1.0

    def test_indicator_open_interval(self):
        chi = IntervalIndicator(a=-1.0, b=1.0)
        assert feval(chi, 0.0) == 1.0
        assert feval(chi, 1.0) == 0.0  # boundary evaluates to 0
        assert feval(chi, 2.0) == 0.0

    def test_cube_indicator(self):
        q = CubeIndicator(ndim=2)
        assert feval(q, (0.5, -0.5)) == 1.0
        assert feval(q, (1.5, 0.0)) == 0.0
        with pytest.raises(SingularPointError):
            feval(q, (1.0, 0.0))

    def test_half_space(self):
        hs = HalfSpaceIndicator(halfspace=HalfSpace.make((0.6, 0.8)))
        assert feval(hs, (0.6, 0.8)) == 1.0
        assert feval(hs, (-0.6, -0.8)) == 0.0
        # exact hyperplane hits are declared singular (axis-aligned normal so
        # the signed distance is exactly zero in floating point)
        hs_axis = HalfSpaceIndicator(halfspace=HalfSpace.make((1.0, 0.0)))
        with pytest.raises(SingularPointError):
            feval(hs_axis, (0.0, 0.7))

    def test_halfspace_unit_normal_validation(self):
        with pytest.raises(ValueError):
            HalfSpace(nu=(1.0, 1.0), x0=(0.0, 0.0))


class TestMollify:
    def test_full_mass_average_at_center(self):
        m = mollify(IntervalIndicator(a=-1.0, b=1.0), 0.25)
        assert feval(m, 0.0) == pytest.approx(1.0, abs=1e-9)

    def test_support_growth(self):
        m = mollify(IntervalIndicator(a=-1.0, b=1.0), 0.1)
        lo, hi = m.support_box
        assert lo[0] == pytest.approx(-1.1)
        assert hi[0] == pytest.approx(1.1)
        assert feval(m, 1.2) == pytest.approx(0.0, abs=1e-15)

    def test_converges_to_field_at_continuity_points(self):
        g = Gaussian(center=(0.0,), width=1.0)
        for x in (-0.7, 0.0, 0.4, 1.3):
            vals = [feval(mollify(g, eps), x) for eps in (0.2, 0.05, 0.0125)]
            errs = [abs(v - feval(g, x)) for v in vals]
            assert errs[-1] < 1e-4
            assert errs[0] > errs[-1] or errs[0] < 1e-8

    def test_preserves_nonnegativity_and_mass(self):
        chi = IntervalIndicator(a=-1.0, b=1.0)
        m = mollify(chi, 0.2)
        grid = np.linspace(-1.5, 1.5, 101)[:, None]
        assert np.all(m.values(grid) >= -1e-14)
        mass = integrate_1d(lambda x: m.values(x[:, None]), -1.2, 1.2,
                            spec=QuadSpec(rel_tol=1e-8)).value
        assert mass == pytest.approx(2.0, rel=1e-6)


class TestPreciseRepresentative:
    def test_interval_jump_midpoint(self):
        chi = IntervalIndicator(a=-1.0, b=1.0)
        assert precise_representative(chi, 1.0) == pytest.approx(0.5, abs=1e-9)

    def test_continuity_point_matches_eval(self):
        g = Gaussian(center=(0.0,), width=1.0)
        for x in (-0.3, 0.9):
            assert precise_representative(g, x) == pytest.approx(feval(g, x), rel=1e-6)

    def test_half_space_on_hyperplane(self):
        hs = HalfSpaceIndicator(halfspace=HalfSpace.make((0.6, 0.8)))
        # ball-average oracle: exactly half the ball lies on each side
        assert precise_representative(hs, (0.0, 0.0)) == pytest.approx(0.5, abs=1e-9)

    def test_f_alpha_at_origin(self):
        # the odd singular part averages to zero; the remaining term is
        # continuous with value mu(1, -a)
        fa = FAlpha(alpha=0.5)
        assert precise_representative(fa, 0.0) == pytest.approx(mu(1, -0.5), rel=1e-4)


class TestMagicCube:
    def test_closed_form_vs_defining_integrals_1d(self):
        # exterior: nu(1,1-a) int_(-1,1) |y-x|^(a-2) dy; interior: the
        # complement integral; the closed form must agree with quadrature
        a = 0.5
        f = MagicCube(alpha=a, ndim=1)
        c = nu(1, 1.0 - a)
        for x in (1.5, 2.5, -3.0):
            quad = integrate_1d(
                lambda y: np.abs(y - x) ** (a - 2.0), -1.0, 1.0,
                spec=QuadSpec(rel_tol=1e-11),
            ).value
            assert feval(f, x) == pytest.approx(c * quad, rel=1e-9)
        for x in (0.0, 0.6):
            quad = integrate_1d(
                lambda y: np.abs(y - x) ** (a - 2.0), 1.0, math.inf,
                singularities=[(math.inf, 2.0 - a)], spec=QuadSpec(rel_tol=1e-11),
            ).value
            quad += integrate_1d(
                lambda y: np.abs(y - x) ** (a - 2.0), -math.inf, -1.0,
                singularities=[(-math.inf, 2.0 - a)], spec=QuadSpec(rel_tol=1e-11),
            ).value
            assert feval(f, x) == pytest.approx(-c * quad, rel=1e-9)

    def test_frozen_exterior_value(self):
        f = MagicCube(alpha=0.5, ndim=1)
        assert feval(f, 1.5) == pytest.approx(-0.31187633134574028, rel=1e-11)

    def test_negative_tail_to_zero_from_below(self):
        f = MagicCube(alpha=0.5, ndim=1)
        vals = [feval(f, x) for x in (2.0, 5.0, 20.0, 200.0)]
        assert all(v < 0.0 for v in vals)
        assert all(abs(b) < abs(a) for a, b in zip(vals, vals[1:]))

    def test_positive_inside_negative_outside_2d(self):
        f = MagicCube(alpha=0.5, ndim=2)
        assert feval(f, (0.0, 0.0)) > 0.0
        assert feval(f, (1.2, 0.3)) < 0.0

    def test_boundary_is_singular(self):
        f = MagicCube(alpha=0.5, ndim=1)
        with pytest.raises(SingularPointError):
            feval(f, 1.0)


class TestDAlphaMeasure:
    def test_f_alpha_atom_pair(self):
        m = d_alpha_measure(FAlpha(alpha=0.5), 0.5)
        assert m.density is None
        assert m.atoms == (((0.0,), (1.0,)), ((1.0,), (-1.0,)))
        assert m.total_atomic_variation == pytest.approx(2.0)

    def test_smooth_field_density(self):
        m = d_alpha_measure(Gaussian(center=(0.0,), width=1.0), 0.5)
        assert m.atoms == ()
        assert m.density is not None
        # the density component is the fractional gradient
        from fracvar.operators import frac_gradient

        val = m.density.values(np.array([[0.7]]))[0, 0]
        ref = frac_gradient(Gaussian(center=(0.0,), width=1.0), 0.5, 0.7)[0]
        assert val == pytest.approx(ref, rel=1e-10)

    def test_magic_cube_1d_atoms(self):
        m = d_alpha_measure(MagicCube(alpha=0.5, ndim=1), 0.5)
        assert m.atoms == (((-1.0,), (1.0,)), ((1.0,), (-1.0,)))

    def test_magic_cube_2d_unsupported(self):
        with pytest.raises(UnsupportedFieldError):
            d_alpha_measure(MagicCube(alpha=0.5, ndim=2), 0.5)

    def test_order_mismatch_and_unknown_fields(self):
        with pytest.raises(UnsupportedFieldError):
            d_alpha_measure(FAlpha(alpha=0.5), 0.25)
        with pytest.raises(UnsupportedFieldError):
            d_alpha_measure(IntervalIndicator(), 0.5)

    def test_signed_measure_validation(self):
        with pytest.raises(ValueError):
            SignedMeasure(atoms=(((0.0,), (1.0,)), ((0.0,), (2.0,))))


class TestTestFamilyFields:
    def test_plateau_shape(self):
        p = OddPlateau(span=5.0, core=0.35, edge=0.8)
        xs = np.linspace(-6.0, 6.0, 201)[:, None]
        v = p.values(xs)
        assert np.max(np.abs(v)) <= 1.0
        assert feval(p, 2.0) > 0.9
        assert feval(p, -2.0) < -0.9
        assert feval(p, 5.5) == 0.0

    def test_pair_shape(self):
        q = OddBumpPair(offset=1.0, scale=0.5)
        assert feval(q, 1.0) == pytest.approx(1.0)
        assert feval(q, -1.0) == pytest.approx(-1.0)
        assert feval(q, 3.0) == 0.0

    def test_plateau_gradient_consistency(self):
        p = OddPlateau(span=5.0, core=0.35, edge=0.8)
        xs = np.array([[0.1], [1.0], [4.5]])
        g = p.grad_values(xs)
        h = 1e-6
        fd = (p.values(xs + h) - p.values(xs - h)) / (2.0 * h)
        assert np.allclose(g[:, 0], fd, rtol=1e-5, atol=1e-7)


class TestJson:
    @pytest.mark.parametrize(
        "desc,kind",
        [
            ('{"kind":"f_alpha","alpha":0.5}', FAlpha),
            ('{"kind":"gaussian","center":[0],"width":1,"dim":1}', Gaussian),
            ('{"kind":"smooth_bump","center":[0.1,0.2],"width":[1,2],"dim":2}', SmoothBump),
            ('{"kind":"interval_indicator","a":-1,"b":1}', IntervalIndicator),
            ('{"kind":"cube_indicator","dim":2}', CubeIndicator),
            ('{"kind":"half_space_indicator","nu":[3,4],"x0":[0,0]}', HalfSpaceIndicator),
            ('{"kind":"magic_cube","alpha":0.5,"dim":1}', MagicCube),
            ('{"kind":"mollified","base":{"kind":"interval_indicator"},"eps":0.1}', type(mollify(IntervalIndicator(), 0.1))),
        ],
    )
    def test_descriptors(self, desc, kind):
        f = field_from_json(desc)
        assert isinstance(f, kind)

    def test_halfspace_descriptor_normalizes(self):
        f = field_from_json('{"kind":"half_space_indicator","nu":[3,4]}')
        assert np.linalg.norm(f.halfspace.nu) == pytest.approx(1.0, abs=1e-15)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            field_from_json('{"kind":"polynomial"}')


def test_vector_field_dim_consistency():
    with pytest.raises(ValueError):
        VectorField(components=(Gaussian(center=(0.0,)), Gaussian(center=(0.0, 0.0))))
