"""Trigonometric-polynomial symbols and the tridiagonal ellipse geometry.

A symbol is stored by its finitely many non-zero Fourier coefficients
``F(e^{it}) = sum_n a_n e^{int}``.  The tridiagonal family
``F(z) = a/z + b + c z`` has an elliptic image curve; the helpers here
describe that ellipse in closed form and invert ``F`` on the annulus
``1 < |z| < |a/c|`` whose image is the open interior of the ellipse.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Any, Mapping

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DegenerateEllipse, NoConvergence, NotInInterior, PreconditionError

TWO_PI = 2.0 * math.pi
DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class LaurentSymbol:
    """Finitely supported Fourier coefficients ``{n: a_n}``.

    Exact zeros are trimmed on construction, so the lowest and highest
    stored indices are the true band limits.
    """

    coeffs: Mapping[int, complex]

    def __post_init__(self) -> None:
        items = sorted((int(n), complex(v)) for n, v in dict(self.coeffs).items())
        trimmed = {n: v for n, v in items if v != 0}
        object.__setattr__(self, "coeffs", MappingProxyType(trimmed))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentSymbol):
            return NotImplemented
        return dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{n}: {v!r}" for n, v in self.coeffs.items())
        return f"LaurentSymbol({{{body}}})"

    @property
    def low(self) -> int:
        """``M``: number of sub-zero Fourier modes in the band (anti-analytic degree)."""
        return max(0, -min(self.coeffs, default=0))

    @property
    def high(self) -> int:
        """``N``: highest positive Fourier mode (analytic degree)."""
        return max(0, max(self.coeffs, default=0))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_analytic(self) -> bool:
        return self.low == 0

    @property
    def is_antianalytic(self) -> bool:
        return self.high == 0

    @property
    def is_constant(self) -> bool:
        return self.low == 0 and self.high == 0

    def coefficient(self, n: int) -> complex:
        return self.coeffs.get(n, 0j)

    @property
    def l1_norm(self) -> float:
        """``sum |a_n|``; an upper bound for the sup norm."""
        return float(sum(abs(v) for v in self.coeffs.values()))

    @property
    def lipschitz(self) -> float:
        """Bernstein bound ``sum |n a_n|`` on ``|d/dt F(e^{it})|``."""
        return float(sum(abs(n * v) for n, v in self.coeffs.items()))

    def eval(self, theta):
        """Evaluate ``F(e^{i theta})``; vectorised over ``theta``."""
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape, dtype=complex)
        for n, v in self.coeffs.items():
            out = out + (v if n == 0 else v * np.exp(1j * n * theta))
        if out.ndim == 0:
            return complex(out)
        return out

    def at(self, z):
        """Evaluate ``sum a_n z^n`` at arbitrary non-zero complex points."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for n, v in self.coeffs.items():
            out = out + (v if n == 0 else v * z**n)
        if out.ndim == 0:
            return complex(out)
        return out

    def shifted(self, lam: complex) -> "LaurentSymbol":
        """The symbol ``F - lam``."""
        d = dict(self.coeffs)
        d[0] = d.get(0, 0j) - complex(lam)
        return LaurentSymbol(d)

    def analytic_part(self) -> "LaurentSymbol":
        return LaurentSymbol({n: v for n, v in self.coeffs.items() if n >= 0})

    def to_json(self) -> dict[str, Any]:
        return {
            "coeffs": [
                {"n": n, "re": float(v.real), "im": float(v.imag)} for n, v in self.coeffs.items()
            ]
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "LaurentSymbol":
        return cls({int(e["n"]): complex(e.get("re", 0.0), e.get("im", 0.0)) for e in data["coeffs"]})


@dataclass(frozen=True)
class TridiagonalSymbol:
    """``F(e^{it}) = a e^{-it} + b + c e^{it}``."""

    a: complex
    b: complex = 0j
    c: complex = 0j

    def __post_init__(self) -> None:
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.a / z + self.b + self.c * z
        return complex(out) if out.ndim == 0 else out

    def eval(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = self.a * np.exp(-1j * theta) + self.b + self.c * np.exp(1j * theta)
        return complex(out) if out.ndim == 0 else out

    def to_laurent(self) -> LaurentSymbol:
        return to_laurent(self)

    def to_json(self) -> dict[str, Any]:
        return {k: [float(v.real), float(v.imag)] for k, v in (("a", self.a), ("b", self.b), ("c", self.c))}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "TridiagonalSymbol":
        return cls(*(complex(*data.get(k, (0.0, 0.0))) for k in ("a", "b", "c")))


def to_laurent(tri: TridiagonalSymbol) -> LaurentSymbol:
    return LaurentSymbol({-1: tri.a, 0: tri.b, 1: tri.c})


def as_tridiagonal(sym: LaurentSymbol) -> TridiagonalSymbol | None:
    """Return the tridiagonal view of ``sym`` if its support lies in {-1, 0, 1}."""
    if any(abs(n) > 1 for n in sym.coeffs):
        return None
    return TridiagonalSymbol(sym.coefficient(-1), sym.coefficient(0), sym.coefficient(1))


def symbol_from_json(data: Mapping[str, Any]) -> LaurentSymbol | TridiagonalSymbol:
    """Parse either JSON layout: ``{"coeffs": [...]}`` or ``{"a":..,"b":..,"c":..}``."""
    if "coeffs" in data:
        return LaurentSymbol.from_json(data)
    if {"a", "b", "c"} & set(data):
        return TridiagonalSymbol.from_json(data)
    raise ValueError("symbol JSON needs a 'coeffs' list or 'a'/'b'/'c' entries")


def conjugate_symbol(sym: LaurentSymbol) -> LaurentSymbol:
    """Symbol of the adjoint operator: coefficient ``n`` becomes ``conj(a_{-n})``."""
    return LaurentSymbol({-n: v.conjugate() for n, v in sym.coeffs.items()})


# -- extrema on the circle ------------------------------------------------------


def _refine_circle_min(fun, grid: np.ndarray, values: np.ndarray, candidates: int, xtol: float) -> tuple[float, float]:
    """Bounded Brent refinement of the smallest grid local minima of a 2pi-periodic ``fun``."""
    n = grid.size
    step = TWO_PI / n
    left = np.roll(values, 1)
    right = np.roll(values, -1)
    local = np.flatnonzero((values <= left) & (values <= right))
    if local.size == 0:
        local = np.array([int(np.argmin(values))])
    local = local[np.argsort(values[local], kind="stable")][:candidates]

    best_t = float(grid[int(np.argmin(values))])
    best_v = float(values.min())
    for k in local:
        t0 = float(grid[k])
        res = minimize_scalar(
            lambda t: float(fun(t)),
            bounds=(t0 - step, t0 + step),
            method="bounded",
            options={"xatol": xtol},
        )
        if res.fun < best_v:
            best_v = float(res.fun)
            best_t = float(res.x) % TWO_PI
    return best_t, best_v


def circle_minimum(fun, grid_size: int = 4096, candidates: int = 8, xtol: float = 1e-12) -> tuple[float, float]:
    """Minimise a smooth 2pi-periodic function: uniform grid, then bounded Brent search.

    Returns ``(theta, value)``.  The value never exceeds the coarse grid minimum.
    """
    grid = np.arange(grid_size) * (TWO_PI / grid_size)
    values = np.asarray(fun(grid), dtype=float)
    return _refine_circle_min(fun, grid, values, candidates, xtol)


def sup_norm(sym: LaurentSymbol, grid_size: int = 4096) -> float:
    """``max |F|`` on the unit circle.

    Grid values bound the true maximum from below; the coarse error is at
    most ``sym.lipschitz * pi / grid_size`` before golden-section refinement.
    """
    if grid_size < 16:
        raise ValueError("grid_size must be at least 16")
    if sym.is_zero:
        return 0.0
    if len(sym.coeffs) == 1:
        return abs(next(iter(sym.coeffs.values())))
    _, v = circle_minimum(lambda t: -np.abs(sym.eval(t)), grid_size)
    return -v


def min_modulus(sym: LaurentSymbol, grid_size: int = 4096) -> tuple[float, float]:
    """``(theta, min |F(e^{i theta})|)``."""
    if sym.is_zero:
        return 0.0, 0.0
    return circle_minimum(lambda t: np.abs(sym.eval(t)), grid_size)


def sup_norm_grid_error(sym: LaurentSymbol, grid_size: int) -> float:
    """A priori bound on ``||F||_inf - max_grid |F|`` from Bernstein's inequality."""
    return sym.lipschitz * math.pi / grid_size


# -- tridiagonal ellipse ----------------------------------------------------------


@dataclass(frozen=True)
class EllipseGeometry:
    center: complex
    rotation: float
    semi_major: float
    semi_minor: float
    foci: tuple[complex, complex]

    def to_json(self) -> dict[str, Any]:
        return {
            "center": [self.center.real, self.center.imag],
            "rotation": self.rotation,
            "semi_major": self.semi_major,
            "semi_minor": self.semi_minor,
            "foci": [[f.real, f.imag] for f in self.foci],
        }


class Containment(str, Enum):
    INSIDE = "Inside"
    ON_CURVE = "OnCurve"
    OUTSIDE = "Outside"


class CircleRelation(str, Enum):
    INTERSECTS = "Intersects"
    DISJOINT = "Disjoint"
    TANGENT = "Tangent"


@dataclass(frozen=True)
class CircleIntersection:
    """Outcome of the ``E cap T`` test; ``margin`` is ``min_T g``."""

    relation: CircleRelation
    margin: float
    theta: float

    def to_json(self) -> dict[str, Any]:
        return {"relation": self.relation.value, "margin": self.margin, "theta": self.theta}


def _moduli(tri: TridiagonalSymbol) -> tuple[float, float, float, float]:
    ma, mc = abs(tri.a), abs(tri.c)
    alpha = cmath.phase(tri.a) if ma else 0.0
    gamma = cmath.phase(tri.c) if mc else 0.0
    return ma, mc, alpha, gamma


def _check_nondegenerate(tri: TridiagonalSymbol, tol: float) -> None:
    ma, mc = abs(tri.a), abs(tri.c)
    if abs(ma - mc) <= tol * max(ma + mc, np.finfo(float).tiny):
        raise DegenerateEllipse(f"|a| = {ma!r} and |c| = {mc!r} give a flat ellipse")


def ellipse_of(tri: TridiagonalSymbol, tol: float = DEFAULT_TOL) -> EllipseGeometry:
    _check_nondegenerate(tri, tol)
    ma, mc, alpha, gamma = _moduli(tri)
    rot = 0.5 * (alpha + gamma)
    half_focal = 2.0 * math.sqrt(ma * mc)
    u = cmath.exp(1j * rot)
    return EllipseGeometry(
        center=tri.b,
        rotation=rot,
        semi_major=ma + mc,
        semi_minor=abs(ma - mc),
        foci=(tri.b + half_focal * u, tri.b - half_focal * u),
    )


def normalized_frame(tri: TridiagonalSymbol, w):
    """Coordinates of ``w`` after translating by ``-b`` and rotating by ``-(alpha+gamma)/2``."""
    _, _, alpha, gamma = _moduli(tri)
    return (np.asarray(w, dtype=complex) - tri.b) * cmath.exp(-0.5j * (alpha + gamma))


def ellipse_form(tri: TridiagonalSymbol, w):
    """Quadratic form ``g(w) = x^2/(|a|+|c|)^2 + y^2/(|a|-|c|)^2`` in the normalized frame."""
    ma, mc, _, _ = _moduli(tri)
    v = normalized_frame(tri, w)
    g = v.real**2 / (ma + mc) ** 2 + v.imag**2 / (ma - mc) ** 2
    return float(g) if np.ndim(g) == 0 else g


def ellipse_contains(tri: TridiagonalSymbol, w: complex, tol: float = DEFAULT_TOL) -> Containment:
    _check_nondegenerate(tri, tol)
    g = ellipse_form(tri, w)
    if g < 1.0 - tol:
        return Containment.INSIDE
    if abs(g - 1.0) <= tol:
        return Containment.ON_CURVE
    return Containment.OUTSIDE


def ellipse_intersects_unit_circle(
    tri: TridiagonalSymbol, tol: float = DEFAULT_TOL, grid_size: int = 4096
) -> CircleIntersection:
    """Whether the open interior of the ellipse ``F(T)`` meets the unit circle.

    ``m = min_theta g(e^{i theta})`` decides: the interior is the sublevel set
    ``g < 1``, so it meets the circle iff ``m < 1``.
    """
    _check_nondegenerate(tri, tol)
    theta, m = circle_minimum(lambda t: ellipse_form(tri, np.exp(1j * t)), grid_size)
    if m < 1.0 - tol:
        rel = CircleRelation.INTERSECTS
    elif m > 1.0 + tol:
        rel = CircleRelation.DISJOINT
    else:
        rel = CircleRelation.TANGENT
    return CircleIntersection(rel, m, theta)


def annulus_param_solve(tri: TridiagonalSymbol, w: complex, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """Find ``z = r0 e^{i theta}`` with ``1 < r0 <= sqrt|a/c|`` and ``F(z) = w``.

    Works in the normalized frame ``F~(zeta) = |a|/zeta + |c| zeta``, where
    ``F~(r e^{it}) = (|a|/r + |c| r) cos t + i (|c| r - |a|/r) sin t``.  The
    radius solves ``phi1(r) = 1`` for
    ``phi1(r) = x^2/(|a|/r+|c|r)^2 + y^2/(|c|r-|a|/r)^2``, which increases
    from ``g(w) < 1`` at ``r = 1`` to ``+inf`` at ``r = sqrt(|a|/|c|)``;
    bisection on that branch, then the angle is read off.  Points on the
    focal segment (``y = 0``, ``|x| <= 2 sqrt(|a||c|)``) sit exactly at
    ``r0 = sqrt(|a|/|c|)``.
    """
    ma, mc, alpha, gamma = _moduli(tri)
    if not (ma > mc > 0):
        raise PreconditionError("annulus parametrisation needs |a| > |c| > 0")
    if ellipse_contains(tri, w, tol) is not Containment.INSIDE:
        raise NotInInterior(f"{w!r} is not inside the ellipse F(T)")

    v = complex(normalized_frame(tri, w))
    x, y = v.real, v.imag
    pole = math.sqrt(ma / mc)

    def phi1(r: float) -> float:
        s = ma / r + mc * r
        d = mc * r - ma / r
        if d == 0.0:
            return math.inf if y != 0.0 else x * x / (s * s)
        return x * x / (s * s) + y * y / (d * d)

    if y == 0.0 and x * x <= 4.0 * ma * mc:
        r0 = pole
    else:
        lo, hi = 1.0, pole
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if phi1(mid) < 1.0:
                lo = mid
            else:
                hi = mid
        r0 = 0.5 * (lo + hi)

    s = ma / r0 + mc * r0
    d = mc * r0 - ma / r0
    cos_t = max(-1.0, min(1.0, x / s))
    if d != 0.0 and y != 0.0:
        sin_t = y / d
    else:
        sin_t = math.sqrt(max(0.0, 1.0 - cos_t * cos_t))
    # at the centre cos_t = 0 and sin_t = 1: the upper preimage i*sqrt(|a|/|c|)
    t = math.atan2(sin_t, cos_t)
    zeta = r0 * cmath.exp(1j * t)
    z = zeta * cmath.exp(-0.5j * (gamma - alpha))

    scale = abs(tri.a) + abs(tri.b) + abs(tri.c)
    # Newton polish; the bisection branch already fixes which preimage we are on.
    for _ in range(3):
        err = tri(z) - w
        if abs(err) <= 1e-15 * scale:
            break
        deriv = -tri.a / z**2 + tri.c
        if abs(deriv) < 1e-8 * scale:
            break
        z_new = z - err / deriv
        if abs(tri(z_new) - w) < abs(err) and 1.0 < abs(z_new) <= pole * (1 + 1e-12):
            z = z_new
        else:
            break

    if abs(tri(z) - w) > 1e-10 * scale:
        raise NoConvergence(f"annulus solve missed {w!r} by {abs(tri(z) - w):.3e}")
    return abs(z), cmath.phase(z) % TWO_PI
