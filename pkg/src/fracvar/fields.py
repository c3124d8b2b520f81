"""Catalog of analytic fields the verification suites evaluate operators on.

Each field knows the metadata the quadrature engine needs: exact or effective
support box, algebraic tail rate, singular set, smoothness, and (for smooth
entries) closed-form first and second derivatives used by near-field
corrections.  Raw ``values`` are total functions (indicator boundaries give 0,
within-ulp singular hits give 0); the public :func:`eval` refuses declared
singular points instead.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .constants import ball_volume, mu, nu
from .quadrature import QuadSpec, integrate_1d, integrate_ball

__all__ = [
    "ScalarField",
    "VectorField",
    "HalfSpace",
    "SignedMeasure",
    "SingularPointError",
    "UnsupportedFieldError",
    "NonConvergentAverageError",
    "Gaussian",
    "SmoothBump",
    "IntervalIndicator",
    "CubeIndicator",
    "HalfSpaceIndicator",
    "FAlpha",
    "MagicCube",
    "Mollified",
    "ProductField",
    "ScaledField",
    "OddPlateau",
    "OddBumpPair",
    "FracGradientComponent",
    "eval",
    "mollify",
    "precise_representative",
    "d_alpha_measure",
    "field_from_json",
    "bump_vector",
]


class SingularPointError(ValueError):
    """Evaluation requested at a declared singular point."""


class UnsupportedFieldError(ValueError):
    """Operation not defined for this catalog entry."""


class NonConvergentAverageError(RuntimeError):
    """Shrinking ball averages did not stabilize within budget."""


def as_points(x, dim: int) -> np.ndarray:
    """Coerce scalars, points, and point batches to an (m, dim) array."""
    a = np.asarray(x, dtype=float)
    if a.ndim == 0:
        if dim != 1:
            raise ValueError(f"scalar point given for dim {dim}")
        return a.reshape(1, 1)
    if a.ndim == 1:
        if a.size == dim:
            return a.reshape(1, dim)
        if dim == 1:
            return a.reshape(-1, 1)
        raise ValueError(f"point of length {a.size} given for dim {dim}")
    if a.ndim == 2 and a.shape[1] == dim:
        return a
    raise ValueError(f"cannot interpret array of shape {a.shape} as points in dim {dim}")


@dataclass(frozen=True)
class HalfSpace:
    """Open half-space {(y - x0) . nu > 0} with its boundary hyperplane."""

    nu: tuple[float, ...]
    x0: tuple[float, ...]

    def __post_init__(self) -> None:
        n = np.asarray(self.nu, dtype=float)
        if len(self.nu) != len(self.x0):
            raise ValueError("nu and x0 must have the same dimension")
        if abs(float(np.linalg.norm(n)) - 1.0) > 1e-14:
            raise ValueError("nu must be a unit vector to 1e-14")

    @property
    def dim(self) -> int:
        return len(self.nu)

    def signed_distance(self, X: np.ndarray) -> np.ndarray:
        n = np.asarray(self.nu)
        x0 = np.asarray(self.x0)
        return (X - x0) @ n

    @staticmethod
    def make(nu: Sequence[float], x0: Sequence[float] | None = None) -> "HalfSpace":
        n = np.asarray(nu, dtype=float)
        n = n / np.linalg.norm(n)
        if x0 is None:
            x0 = (0.0,) * n.size
        return HalfSpace(nu=tuple(float(v) for v in n), x0=tuple(float(v) for v in x0))


# ---------------------------------------------------------------------------
# Scalar fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarField:
    """Base catalog entry; subclasses fill in the metadata and evaluation."""

    @property
    def kind(self) -> str:
        raise NotImplementedError

    @property
    def dim(self) -> int:
        raise NotImplementedError

    # -- metadata -----------------------------------------------------------
    @property
    def compact_support(self) -> bool:
        return self.support_box is not None

    @property
    def support_box(self) -> tuple[np.ndarray, np.ndarray] | None:
        return None  # unbounded by default

    @property
    def quad_box(self) -> tuple[np.ndarray, np.ndarray]:
        """Box outside which the field is zero (exactly, or below 1e-50)."""
        box = self.support_box
        if box is None:
            raise UnsupportedFieldError(f"{self.kind} has no finite evaluation box")
        return box

    @property
    def decay_exponent(self) -> float:
        return math.inf  # compact support counts as infinitely fast decay

    @property
    def singular_points(self) -> tuple[tuple[float, ...], ...]:
        return ()

    @property
    def is_smooth(self) -> bool:
        return False

    @property
    def has_gradient(self) -> bool:
        return False

    @property
    def smooth_scale(self) -> float:
        return 1.0

    @property
    def sup_norm_bound(self) -> float:
        return 1.0

    def is_singular(self, x: np.ndarray) -> bool:
        pt = as_points(x, self.dim)[0]
        return any(np.array_equal(pt, np.asarray(s)) for s in self.singular_points)

    # -- evaluation ---------------------------------------------------------
    def values(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def grad_values(self, X: np.ndarray) -> np.ndarray:
        raise UnsupportedFieldError(f"{self.kind} has no closed-form gradient")

    def laplacian_values(self, X: np.ndarray) -> np.ndarray:
        raise UnsupportedFieldError(f"{self.kind} has no closed-form laplacian")

    def __call__(self, x) -> float | np.ndarray:
        X = as_points(x, self.dim)
        out = self.values(X)
        return float(out[0]) if np.asarray(x).ndim <= 1 and np.asarray(x).size <= self.dim else out

    def ball_average(self, x: np.ndarray, r: float, spec: QuadSpec | None = None) -> float:
        """Mean of the field over B_r(x); default is numeric quadrature."""
        x = as_points(x, self.dim)[0]
        res = integrate_ball(self.values, x, r, spec)
        return res.value / (ball_volume(self.dim) * r**self.dim)


def _norm2(X: np.ndarray, center: np.ndarray) -> np.ndarray:
    d = X - center
    return np.einsum("ij,ij->i", d, d)


@dataclass(frozen=True)
class Gaussian(ScalarField):
    """exp(-pi |x - center|^2 / width^2); effectively supported in center +/- 6 width."""

    center: tuple[float, ...] = (0.0,)
    width: float = 1.0
    amplitude: float = 1.0

    @property
    def kind(self) -> str:
        return "gaussian"

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def quad_box(self):
        c = np.asarray(self.center)
        pad = 6.0 * self.width
        return c - pad, c + pad

    @property
    def is_smooth(self) -> bool:
        return True

    @property
    def has_gradient(self) -> bool:
        return True

    @property
    def smooth_scale(self) -> float:
        return self.width

    @property
    def sup_norm_bound(self) -> float:
        return abs(self.amplitude)

    def values(self, X: np.ndarray) -> np.ndarray:
        c = np.asarray(self.center)
        return self.amplitude * np.exp(-math.pi * _norm2(X, c) / self.width**2)

    def grad_values(self, X: np.ndarray) -> np.ndarray:
        c = np.asarray(self.center)
        f = self.values(X)
        return (-2.0 * math.pi / self.width**2) * (X - c) * f[:, None]

    def laplacian_values(self, X: np.ndarray) -> np.ndarray:
        c = np.asarray(self.center)
        f = self.values(X)
        q = _norm2(X, c)
        w2 = self.width**2
        return f * (4.0 * math.pi**2 * q / w2**2 - 2.0 * math.pi * self.dim / w2)


def _bump_1d(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    ti = t[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - ti**2))
    return out


def _bump_1d_d1(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    ti = t[inside]
    om = 1.0 - ti**2
    out[inside] = np.exp(1.0 - 1.0 / om) * (-2.0 * ti / om**2)
    return out


def _bump_1d_d2(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    ti = t[inside]
    om = 1.0 - ti**2
    s = -2.0 * ti / om**2
    sp = (-2.0 - 6.0 * ti**2) / om**3
    out[inside] = np.exp(1.0 - 1.0 / om) * (s**2 + sp)
    return out


@dataclass(frozen=True)
class SmoothBump(ScalarField):
    """Tensor product of 1-d bumps exp(1 - 1/(1 - t^2)), peak 1, support the open box."""

    center: tuple[float, ...] = (0.0,)
    width: tuple[float, ...] | float = 1.0

    def __post_init__(self) -> None:
        if isinstance(self.width, (int, float)):
            object.__setattr__(self, "width", (float(self.width),) * len(self.center))
        if len(self.width) != len(self.center):
            raise ValueError("width and center dimensions differ")

    @property
    def kind(self) -> str:
        return "smooth_bump"

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def support_box(self):
        c = np.asarray(self.center)
        w = np.asarray(self.width)
        return c - w, c + w

    @property
    def is_smooth(self) -> bool:
        return True

    @property
    def has_gradient(self) -> bool:
        return True

    @property
    def smooth_scale(self) -> float:
        return min(self.width)

    def _t(self, X: np.ndarray) -> np.ndarray:
        return (X - np.asarray(self.center)) / np.asarray(self.width)

    def values(self, X: np.ndarray) -> np.ndarray:
        t = self._t(X)
        out = np.ones(X.shape[0])
        for i in range(self.dim):
            out = out * _bump_1d(t[:, i])
        return out

    def grad_values(self, X: np.ndarray) -> np.ndarray:
        t = self._t(X)
        parts = [_bump_1d(t[:, i]) for i in range(self.dim)]
        grad = np.empty_like(X)
        for i in range(self.dim):
            pi = _bump_1d_d1(t[:, i]) / self.width[i]
            for j in range(self.dim):
                if j != i:
                    pi = pi * parts[j]
            grad[:, i] = pi
        return grad

    def laplacian_values(self, X: np.ndarray) -> np.ndarray:
        t = self._t(X)
        parts = [_bump_1d(t[:, i]) for i in range(self.dim)]
        out = np.zeros(X.shape[0])
        for i in range(self.dim):
            term = _bump_1d_d2(t[:, i]) / self.width[i] ** 2
            for j in range(self.dim):
                if j != i:
                    term = term * parts[j]
            out += term
        return out

    def ball_average(self, x: np.ndarray, r: float, spec: QuadSpec | None = None) -> float:
        spec = spec or QuadSpec(rel_tol=1e-9, abs_tol=1e-13)
        return super().ball_average(x, r, spec)


@dataclass(frozen=True)
class IntervalIndicator(ScalarField):
    """Indicator of the open interval (a, b) on the line; boundary evaluates to 0."""

    a: float = -1.0
    b: float = 1.0

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise ValueError("need a < b")

    @property
    def kind(self) -> str:
        return "interval_indicator"

    @property
    def dim(self) -> int:
        return 1

    @property
    def support_box(self):
        return np.array([self.a]), np.array([self.b])

    def values(self, X: np.ndarray) -> np.ndarray:
        x = X[:, 0]
        return np.where((x > self.a) & (x < self.b), 1.0, 0.0)

    def region_intervals(self) -> tuple[tuple[float, float], ...]:
        return ((self.a, self.b),)

    def ball_average(self, x: np.ndarray, r: float, spec: QuadSpec | None = None) -> float:
        x0 = as_points(x, 1)[0, 0]
        lo, hi = max(self.a, x0 - r), min(self.b, x0 + r)
        return max(0.0, hi - lo) / (2.0 * r)


@dataclass(frozen=True)
class CubeIndicator(ScalarField):
    """Indicator of the open cube center + (-half_width, half_width)^n."""

    ndim: int = 1
    half_width: float = 1.0
    center: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.center is None:
            object.__setattr__(self, "center", (0.0,) * self.ndim)
        if len(self.center) != self.ndim:
            raise ValueError("center dimension mismatch")

    @property
    def kind(self) -> str:
        return "cube_indicator"

    @property
    def dim(self) -> int:
        return self.ndim

    @property
    def support_box(self):
        c = np.asarray(self.center)
        return c - self.half_width, c + self.half_width

    def values(self, X: np.ndarray) -> np.ndarray:
        lo, hi = self.support_box
        inside = np.all((X > lo) & (X < hi), axis=1)
        return np.where(inside, 1.0, 0.0)

    def is_singular(self, x) -> bool:
        # the boundary of the cube is the jump set
        pt = as_points(x, self.dim)[0]
        lo, hi = self.support_box
        on_face = np.any((pt == lo) | (pt == hi))
        inside_closed = np.all((pt >= lo) & (pt <= hi))
        return bool(on_face and inside_closed)

    def ball_average(self, x: np.ndarray, r: float, spec: QuadSpec | None = None) -> float:
        pt = as_points(x, self.dim)[0]
        lo, hi = self.support_box
        if self.dim == 1:
            a, b = max(lo[0], pt[0] - r), min(hi[0], pt[0] + r)
            return max(0.0, b - a) / (2.0 * r)
        if self.dim == 2:
            # area of box cap: integrate the chord overlap across axis 0
            def chord(y1: np.ndarray) -> np.ndarray:
                half = np.sqrt(np.maximum(0.0, r**2 - (y1 - pt[0]) ** 2))
                top = np.minimum(hi[1], pt[1] + half)
                bot = np.maximum(lo[1], pt[1] - half)
                return np.maximum(0.0, top - bot)

            a, b = max(lo[0], pt[0] - r), min(hi[0], pt[0] + r)
            if not a < b:
                return 0.0
            res = integrate_1d(chord, a, b, spec=spec or QuadSpec(rel_tol=1e-9))
            return res.value / (math.pi * r**2)
        raise UnsupportedFieldError("cube ball averages implemented for n <= 2")


@dataclass(frozen=True)
class HalfSpaceIndicator(ScalarField):
    """Indicator of an open half-space; the boundary hyperplane is its singular set."""

    halfspace: HalfSpace = dc_field(default_factory=lambda: HalfSpace.make((1.0,)))

    @property
    def kind(self) -> str:
        return "half_space_indicator"

    @property
    def dim(self) -> int:
        return self.halfspace.dim

    @property
    def decay_exponent(self) -> float:
        return 0.0  # bounded, no decay

    def values(self, X: np.ndarray) -> np.ndarray:
        return np.where(self.halfspace.signed_distance(X) > 0.0, 1.0, 0.0)

    def is_singular(self, x) -> bool:
        pt = as_points(x, self.dim)
        return bool(self.halfspace.signed_distance(pt)[0] == 0.0)

    def ball_average(self, x: np.ndarray, r: float, spec: QuadSpec | None = None) -> float:
        # volume fraction of the ball on the positive side (spherical cap)
        pt = as_points(x, self.dim)
        t = float(np.clip(self.halfspace.signed_distance(pt)[0] / r, -1.0, 1.0))
        if self.dim == 1:
            return 0.5 * (1.0 + t)
        if self.dim == 2:
            return 1.0 - (math.acos(t) - t * math.sqrt(1.0 - t * t)) / math.pi
        return 1.0 - (1.0 - t) ** 2 * (2.0 + t) / 4.0


@dataclass(frozen=True)
class FAlpha(ScalarField):
    """mu(1,-a) (|x|^(a-1) sgn x - |x-1|^(a-1) sgn(x-1)): the one-dimensional
    function whose fractional variation is the atom pair +delta_0 - delta_1,
    while its absolute value has infinite fractional variation."""

    alpha: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("f_alpha requires alpha in (0, 1)")

    @property
    def kind(self) -> str:
        return "f_alpha"

    @property
    def dim(self) -> int:
        return 1

    @property
    def decay_exponent(self) -> float:
        return 2.0 - self.alpha  # from the differenced |x|^(alpha-1) tails

    @property
    def singular_points(self):
        return ((0.0,), (1.0,))

    @property
    def has_gradient(self) -> bool:
        return True  # away from the singular pair

    def values(self, X: np.ndarray) -> np.ndarray:
        x = X[:, 0]
        m = mu(1, -self.alpha)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = m * (
                np.abs(x) ** (self.alpha - 1.0) * np.sign(x)
                - np.abs(x - 1.0) ** (self.alpha - 1.0) * np.sign(x - 1.0)
            )
        return np.where(np.isfinite(v), v, 0.0)

    def grad_values(self, X: np.ndarray) -> np.ndarray:
        x = X[:, 0]
        m = mu(1, -self.alpha)
        with np.errstate(divide="ignore", invalid="ignore"):
            g = m * (self.alpha - 1.0) * (
                np.abs(x) ** (self.alpha - 2.0) - np.abs(x - 1.0) ** (self.alpha - 2.0)
            )
        return np.where(np.isfinite(g), g, 0.0)[:, None]

    def ball_average(self, x: np.ndarray, r: float, spec: QuadSpec | None = None) -> float:
        x0 = as_points(x, 1)[0, 0]
        sing = [(p[0], self.alpha - 1.0) for p in self.singular_points if x0 - r < p[0] < x0 + r]
        res = integrate_1d(
            lambda y: self.values(y[:, None]), x0 - r, x0 + r, singularities=sing,
            spec=spec or QuadSpec(rel_tol=1e-9),
        )
        return res.value / (2.0 * r)


@dataclass(frozen=True)
class MagicCube(ScalarField):
    """Fractional Laplacian of order (1-alpha) applied to the unit-cube indicator.

    Negative outside the cube with f -> 0^- at infinity, positive inside, and
    unbounded near the boundary; in dimension 1 it has a closed form, in
    dimensions 2 and 3 the defining region integrals are evaluated on demand.
    """

    alpha: float = 0.5
    ndim: int = 1

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("magic_cube requires alpha in (0, 1)")
        if self.ndim not in (1, 2, 3):
            raise ValueError("magic_cube supports dim 1..3")

    @property
    def kind(self) -> str:
        return "magic_cube"

    @property
    def dim(self) -> int:
        return self.ndim

    @property
    def decay_exponent(self) -> float:
        return self.ndim + 1.0 - self.alpha

    @property
    def singular_points(self):
        if self.ndim == 1:
            return ((-1.0,), (1.0,))
        return ()

    def is_singular(self, x) -> bool:
        pt = as_points(x, self.dim)[0]
        on_face = np.any(np.abs(pt) == 1.0)
        inside_closed = np.all(np.abs(pt) <= 1.0)
        return bool(on_face and inside_closed)

    def values(self, X: np.ndarray) -> np.ndarray:
        if self.ndim == 1:
            return self._values_1d(X)
        return np.array([self._value_nd(p) for p in X])

    def _values_1d(self, X: np.ndarray) -> np.ndarray:
        x = np.abs(X[:, 0])
        a = self.alpha
        c = nu(1, 1.0 - a) / (1.0 - a)
        out = np.zeros_like(x)
        ext = x > 1.0
        inn = x < 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            out[ext] = c * ((x[ext] - 1.0) ** (a - 1.0) - (x[ext] + 1.0) ** (a - 1.0))
            out[inn] = -c * ((1.0 - x[inn]) ** (a - 1.0) + (1.0 + x[inn]) ** (a - 1.0))
        return np.where(np.isfinite(out), out, 0.0)

    def _value_nd(self, p: np.ndarray) -> float:
        from .operators import cube_kernel_integral  # local import, avoids a cycle

        n, a = self.ndim, self.alpha
        c = nu(n, 1.0 - a)
        inside = bool(np.all(np.abs(p) < 1.0))
        val = cube_kernel_integral(p, exponent=n + 1.0 - a, half_width=1.0, over_complement=inside)
        return -c * val if inside else c * val


@dataclass(frozen=True)
class Mollified(ScalarField):
    """Convolution of a base field with the standard bump mollifier at scale eps."""

    base: ScalarField = dc_field(default_factory=lambda: IntervalIndicator())
    eps: float = 0.1

    def __post_init__(self) -> None:
        if not self.eps > 0.0:
            raise ValueError("eps must be positive")
        if self.base.dim > 2:
            raise UnsupportedFieldError("mollification implemented for dim <= 2")

    @property
    def kind(self) -> str:
        return "mollified"

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def support_box(self):
        box = self.base.support_box
        if box is None:
            return None
        lo, hi = box
        return lo - self.eps, hi + self.eps

    @property
    def quad_box(self):
        lo, hi = self.base.quad_box
        return lo - self.eps, hi + self.eps

    @property
    def decay_exponent(self) -> float:
        return self.base.decay_exponent

    @property
    def is_smooth(self) -> bool:
        return True

    @property
    def smooth_scale(self) -> float:
        return min(self.eps, self.base.smooth_scale)

    def values(self, X: np.ndarray) -> np.ndarray:
        return np.array([self._value_at(p) for p in X])

    def _value_at(self, p: np.ndarray) -> float:
        rho = _MOLLIFIER_NORM[self.dim] / self.eps**self.dim
        if self.dim == 1:
            x0 = p[0]

            def g(y: np.ndarray) -> np.ndarray:
                t = (x0 - y) / self.eps
                return _bump_1d(t) * self.base.values(y[:, None])

            base_exp = getattr(self.base, "alpha", 0.5) - 1.0
            sing = [
                (s[0], base_exp)
                for s in self.base.singular_points
                if x0 - self.eps < s[0] < x0 + self.eps
            ]
            res = integrate_1d(
                g, x0 - self.eps, x0 + self.eps, singularities=sing,
                spec=QuadSpec(rel_tol=1e-10, abs_tol=1e-14),
            )
            return rho * res.value

        def g2(Y: np.ndarray) -> np.ndarray:
            t = np.linalg.norm((p - Y) / self.eps, axis=1)
            return _bump_1d(t) * self.base.values(Y)

        res = integrate_ball(g2, p, self.eps, QuadSpec(rel_tol=1e-8, abs_tol=1e-12))
        return rho * res.value


def _mollifier_norm_1d() -> float:
    res = integrate_1d(_bump_1d, -1.0, 1.0, spec=QuadSpec(rel_tol=1e-13, abs_tol=1e-16))
    return 1.0 / res.value


def _mollifier_norm_2d() -> float:
    res = integrate_1d(
        lambda r: r * _bump_1d(r), 0.0, 1.0, spec=QuadSpec(rel_tol=1e-13, abs_tol=1e-16)
    )
    return 1.0 / (2.0 * math.pi * res.value)


_MOLLIFIER_NORM = {1: _mollifier_norm_1d(), 2: _mollifier_norm_2d()}


@dataclass(frozen=True)
class ProductField(ScalarField):
    """Pointwise product of two fields (used by the Leibniz-rule checks)."""

    left: ScalarField = dc_field(default_factory=Gaussian)
    right: ScalarField = dc_field(default_factory=Gaussian)

    def __post_init__(self) -> None:
        if self.left.dim != self.right.dim:
            raise ValueError("factor dimensions differ")

    @property
    def kind(self) -> str:
        return "product"

    @property
    def dim(self) -> int:
        return self.left.dim

    @property
    def support_box(self):
        boxes = [b for b in (self.left.support_box, self.right.support_box) if b is not None]
        if not boxes:
            return None
        lo = np.max([b[0] for b in boxes], axis=0)
        hi = np.min([b[1] for b in boxes], axis=0)
        return lo, np.maximum(hi, lo)

    @property
    def quad_box(self):
        lo1, hi1 = self.left.quad_box
        lo2, hi2 = self.right.quad_box
        lo = np.maximum(lo1, lo2)
        hi = np.minimum(hi1, hi2)
        return lo, np.maximum(hi, lo)

    @property
    def is_smooth(self) -> bool:
        return self.left.is_smooth and self.right.is_smooth

    @property
    def has_gradient(self) -> bool:
        return self.left.has_gradient and self.right.has_gradient

    @property
    def smooth_scale(self) -> float:
        return min(self.left.smooth_scale, self.right.smooth_scale)

    @property
    def sup_norm_bound(self) -> float:
        return self.left.sup_norm_bound * self.right.sup_norm_bound

    def values(self, X: np.ndarray) -> np.ndarray:
        return self.left.values(X) * self.right.values(X)

    def grad_values(self, X: np.ndarray) -> np.ndarray:
        return (
            self.left.grad_values(X) * self.right.values(X)[:, None]
            + self.right.grad_values(X) * self.left.values(X)[:, None]
        )

    def laplacian_values(self, X: np.ndarray) -> np.ndarray:
        gl = self.left.grad_values(X)
        gr = self.right.grad_values(X)
        return (
            self.left.laplacian_values(X) * self.right.values(X)
            + self.right.laplacian_values(X) * self.left.values(X)
            + 2.0 * np.einsum("ij,ij->i", gl, gr)
        )


@dataclass(frozen=True)
class ScaledField(ScalarField):
    base: ScalarField = dc_field(default_factory=Gaussian)
    factor: float = 1.0

    @property
    def kind(self) -> str:
        return "scaled"

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def support_box(self):
        return self.base.support_box

    @property
    def quad_box(self):
        return self.base.quad_box

    @property
    def decay_exponent(self) -> float:
        return self.base.decay_exponent

    @property
    def singular_points(self):
        return self.base.singular_points

    @property
    def is_smooth(self) -> bool:
        return self.base.is_smooth

    @property
    def has_gradient(self) -> bool:
        return self.base.has_gradient

    @property
    def smooth_scale(self) -> float:
        return self.base.smooth_scale

    @property
    def sup_norm_bound(self) -> float:
        return abs(self.factor) * self.base.sup_norm_bound

    def is_singular(self, x) -> bool:
        return self.base.is_singular(x)

    def values(self, X: np.ndarray) -> np.ndarray:
        return self.factor * self.base.values(X)

    def grad_values(self, X: np.ndarray) -> np.ndarray:
        return self.factor * self.base.grad_values(X)

    def laplacian_values(self, X: np.ndarray) -> np.ndarray:
        return self.factor * self.base.laplacian_values(X)


def _ramp(t: np.ndarray) -> np.ndarray:
    """C-infinity ramp: 0 for t <= 0, 1 for t >= 1."""
    out = np.zeros_like(t)
    out[t >= 1.0] = 1.0
    mid = (t > 0.0) & (t < 1.0)
    tm = t[mid]
    h1 = np.exp(-1.0 / tm)
    h2 = np.exp(-1.0 / (1.0 - tm))
    out[mid] = h1 / (h1 + h2)
    return out


def _ramp_d1(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    mid = (t > 0.0) & (t < 1.0)
    tm = t[mid]
    h1 = np.exp(-1.0 / tm)
    h2 = np.exp(-1.0 / (1.0 - tm))
    d1 = h1 / tm**2
    d2 = h2 / (1.0 - tm) ** 2
    out[mid] = (d1 * h2 + h1 * d2) / (h1 + h2) ** 2
    return out


@dataclass(frozen=True)
class OddPlateau(ScalarField):
    """Smooth, compactly supported, odd field close to sign(x) on [-span, span].

    tanh(x / core) times a C-infinity cutoff ramp of width ``edge`` at the
    ends; sup norm < 1 by construction.  These are the wide members of the
    default dual test family for the fractional variation.
    """

    span: float = 10.0
    core: float = 0.25
    edge: float = 1.0

    def __post_init__(self) -> None:
        if not (self.span > self.edge > 0.0 and self.core > 0.0):
            raise ValueError("need span > edge > 0 and core > 0")

    @property
    def kind(self) -> str:
        return "odd_plateau"

    @property
    def dim(self) -> int:
        return 1

    @property
    def support_box(self):
        return np.array([-self.span]), np.array([self.span])

    @property
    def is_smooth(self) -> bool:
        return True

    @property
    def has_gradient(self) -> bool:
        return True

    @property
    def smooth_scale(self) -> float:
        return min(self.core, self.edge)

    def values(self, X: np.ndarray) -> np.ndarray:
        x = X[:, 0]
        return np.tanh(x / self.core) * _ramp((self.span - np.abs(x)) / self.edge)

    def grad_values(self, X: np.ndarray) -> np.ndarray:
        x = X[:, 0]
        cut = _ramp((self.span - np.abs(x)) / self.edge)
        dcut = _ramp_d1((self.span - np.abs(x)) / self.edge) * (-np.sign(x) / self.edge)
        th = np.tanh(x / self.core)
        g = (1.0 - th**2) / self.core * cut + th * dcut
        return g[:, None]


@dataclass(frozen=True)
class OddBumpPair(ScalarField):
    """b((x - offset)/scale) - b((x + offset)/scale): an odd pair of bumps.

    Sup norm <= 1 since each lobe lies in [0, 1]; positive lobe on the right,
    matching the sign of the optimal dual field for indicators centered at 0.
    """

    offset: float = 1.0
    scale: float = 1.0

    def __post_init__(self) -> None:
        if not (self.offset > 0.0 and self.scale > 0.0):
            raise ValueError("offset and scale must be positive")

    @property
    def kind(self) -> str:
        return "odd_bump_pair"

    @property
    def dim(self) -> int:
        return 1

    @property
    def support_box(self):
        w = self.offset + self.scale
        return np.array([-w]), np.array([w])

    @property
    def is_smooth(self) -> bool:
        return True

    @property
    def has_gradient(self) -> bool:
        return True

    @property
    def smooth_scale(self) -> float:
        return self.scale

    def values(self, X: np.ndarray) -> np.ndarray:
        x = X[:, 0]
        return _bump_1d((x - self.offset) / self.scale) - _bump_1d((x + self.offset) / self.scale)

    def grad_values(self, X: np.ndarray) -> np.ndarray:
        x = X[:, 0]
        g = (
            _bump_1d_d1((x - self.offset) / self.scale)
            - _bump_1d_d1((x + self.offset) / self.scale)
        ) / self.scale
        return g[:, None]


@dataclass(frozen=True)
class FracGradientComponent(ScalarField):
    """Component of the fractional gradient of a smooth base field, as a field.

    Used as the density of the variation measure of smooth catalog entries.
    """

    base: ScalarField = dc_field(default_factory=Gaussian)
    alpha: float = 0.5
    component: int = 0

    @property
    def kind(self) -> str:
        return "frac_gradient_component"

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def decay_exponent(self) -> float:
        return self.dim + self.alpha

    def values(self, X: np.ndarray) -> np.ndarray:
        from .operators import frac_gradient

        return np.array([frac_gradient(self.base, self.alpha, p)[self.component] for p in X])


# ---------------------------------------------------------------------------
# Vector fields and measures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VectorField:
    components: tuple[ScalarField, ...]

    def __post_init__(self) -> None:
        dims = {c.dim for c in self.components}
        if len(dims) != 1:
            raise ValueError("all components must share the ambient dimension")

    @property
    def dim(self) -> int:
        return self.components[0].dim

    def values(self, X: np.ndarray) -> np.ndarray:
        return np.stack([c.values(X) for c in self.components], axis=1)

    @property
    def sup_norm_bound(self) -> float:
        return max(c.sup_norm_bound for c in self.components)


def bump_vector(center: Sequence[float], width: float, dim: int) -> VectorField:
    """Vector field whose components are translated tensor bumps."""
    comps = []
    for i in range(dim):
        c = list(center)
        c[i % len(c)] += 0.1 * width * i
        comps.append(SmoothBump(center=tuple(c), width=width))
    return VectorField(components=tuple(comps))


@dataclass(frozen=True)
class SignedMeasure:
    """Atoms (point, vector weight) plus an optional absolutely continuous part."""

    atoms: tuple[tuple[tuple[float, ...], tuple[float, ...]], ...] = ()
    density: VectorField | None = None

    def __post_init__(self) -> None:
        pts = [a[0] for a in self.atoms]
        if len(set(pts)) != len(pts):
            raise ValueError("atoms must sit at distinct points")

    @property
    def total_atomic_variation(self) -> float:
        return float(sum(np.linalg.norm(w) for _, w in self.atoms))


# ---------------------------------------------------------------------------
# Module operations
# ---------------------------------------------------------------------------


def eval(field: ScalarField, x) -> float:  # noqa: A001 - spec operation name
    """Evaluate a catalog field at a point, refusing declared singular points."""
    X = as_points(x, field.dim)
    if field.is_singular(X[0]):
        raise SingularPointError(f"{field.kind} is singular at {X[0].tolist()}")
    return float(field.values(X)[0])


def mollify(field: ScalarField, eps: float) -> Mollified:
    """Smooth a field by convolution with the standard bump mollifier."""
    return Mollified(base=field, eps=eps)


def precise_representative(
    field: ScalarField,
    x,
    rel_tol: float = 1e-6,
    max_levels: int = 14,
) -> float:
    """Limit of ball averages at x, computed by shrinking radii until stable."""
    X = as_points(x, field.dim)[0]
    r = 0.25 * min(1.0, field.smooth_scale)
    prev = None
    hits = 0
    for _ in range(max_levels):
        avg = field.ball_average(X, r)
        if prev is not None:
            if abs(avg - prev) <= rel_tol * max(1.0, abs(avg)):
                hits += 1
                if hits >= 2:
                    return avg
            else:
                hits = 0
        prev = avg
        r *= 0.25
    raise NonConvergentAverageError(
        f"ball averages of {field.kind} at {X.tolist()} did not stabilize"
    )


def d_alpha_measure(field: ScalarField, alpha: float) -> SignedMeasure:
    """The fractional variation measure for the entries where it is known.

    f_alpha at its own order gives the atom pair +delta_0 - delta_1; smooth
    fields give the absolutely continuous density (the fractional gradient);
    magic_cube in dimension 1 gives the atoms of the derivative of the cube
    indicator.  Everything else is refused.
    """
    if isinstance(field, FAlpha):
        if abs(alpha - field.alpha) > 1e-12:
            raise UnsupportedFieldError(
                "the variation measure of f_alpha is identified only at its own order"
            )
        return SignedMeasure(atoms=(((0.0,), (1.0,)), ((1.0,), (-1.0,))))
    if isinstance(field, MagicCube):
        if abs(alpha - field.alpha) > 1e-12:
            raise UnsupportedFieldError(
                "the variation measure of magic_cube is identified only at its own order"
            )
        if field.dim == 1:
            return SignedMeasure(atoms=(((-1.0,), (1.0,)), ((1.0,), (-1.0,))))
        raise UnsupportedFieldError(
            "for dim >= 2 the variation measure of magic_cube is a surface measure, "
            "which this atomic+density representation cannot hold"
        )
    if field.is_smooth and field.has_gradient:
        comps = tuple(
            FracGradientComponent(base=field, alpha=alpha, component=i)
            for i in range(field.dim)
        )
        return SignedMeasure(atoms=(), density=VectorField(components=comps))
    raise UnsupportedFieldError(f"variation measure of {field.kind} is not identified")


# ---------------------------------------------------------------------------
# JSON descriptors
# ---------------------------------------------------------------------------


def field_from_json(obj) -> ScalarField:
    """Build a field from a JSON descriptor (dict or JSON text).

    Examples: {"kind": "f_alpha", "alpha": 0.5},
    {"kind": "gaussian", "center": [0], "width": 1, "dim": 1}.
    """
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("field descriptor must be an object with a 'kind' key")
    kind = obj["kind"]
    if kind == "gaussian":
        center = obj.get("center", [0.0] * obj.get("dim", 1))
        return Gaussian(center=tuple(float(c) for c in center), width=float(obj.get("width", 1.0)))
    if kind == "smooth_bump":
        center = obj.get("center", [0.0] * obj.get("dim", 1))
        width = obj.get("width", 1.0)
        width = tuple(float(w) for w in width) if isinstance(width, (list, tuple)) else float(width)
        return SmoothBump(center=tuple(float(c) for c in center), width=width)
    if kind == "interval_indicator":
        return IntervalIndicator(a=float(obj.get("a", -1.0)), b=float(obj.get("b", 1.0)))
    if kind == "cube_indicator":
        ndim = int(obj.get("dim", 1))
        center = obj.get("center")
        return CubeIndicator(
            ndim=ndim,
            half_width=float(obj.get("half_width", 1.0)),
            center=tuple(float(c) for c in center) if center is not None else None,
        )
    if kind == "half_space_indicator":
        nu_v = obj.get("nu", [1.0])
        x0 = obj.get("x0")
        return HalfSpaceIndicator(halfspace=HalfSpace.make(nu_v, x0))
    if kind == "f_alpha":
        return FAlpha(alpha=float(obj["alpha"]))
    if kind == "magic_cube":
        return MagicCube(alpha=float(obj["alpha"]), ndim=int(obj.get("dim", 1)))
    if kind == "mollified":
        return Mollified(base=field_from_json(obj["base"]), eps=float(obj["eps"]))
    raise ValueError(f"unknown field kind {kind!r}")
