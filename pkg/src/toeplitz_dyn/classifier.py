"""Hypercyclicity verdicts for Toeplitz operators with polynomial symbols.

Three symbol classes are decided exactly (up to a tolerance band around the
strict inequalities): analytic symbols (never hypercyclic), anti-analytic
symbols (Godefroy-Shapiro) and tridiagonal symbols (Shkarin).  Independent
necessary conditions are checked for every symbol and attached as evidence;
a Hypercyclic answer is never returned while one of them fires.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DegenerateEllipse, OnCurve
from .spectral import classify_point, components, curve_box, spectrum_grid, winding_number, winding_numbers
from .symbol import (
    DEFAULT_TOL,
    TWO_PI,
    CircleRelation,
    LaurentSymbol,
    TridiagonalSymbol,
    as_tridiagonal,
    circle_minimum,
    ellipse_intersects_unit_circle,
    min_modulus,
    sup_norm,
    to_laurent,
)


class Status(str, Enum):
    HYPERCYCLIC = "Hypercyclic"
    NOT_HYPERCYCLIC = "NotHypercyclic"
    INDETERMINATE = "Indeterminate"
    UNSUPPORTED = "Unsupported"


class Route(str, Enum):
    ANALYTIC = "Analytic"
    ANTI_ANALYTIC = "AntiAnalytic"
    TRIDIAGONAL = "Tridiagonal"
    DIAGNOSTICS_ONLY = "DiagnosticsOnly"


class ReasonKind(str, Enum):
    NECESSARY = "necessary"
    SUFFICIENT = "sufficient"
    DIAGNOSTIC = "diagnostic"


# Codes that certify non-hypercyclicity on their own.
OBSTRUCTION_CODES = frozenset({"CONTRACTION", "SEPARATION", "ADJOINT_EIGEN", "SPECTRUM_MISSES_CIRCLE", "HYPONORMAL"})


def _jsonable(v: Any) -> Any:
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


@dataclass(frozen=True)
class Reason:
    code: str
    kind: ReasonKind
    evidence: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {
            "code": self.code,
            "kind": self.kind.value,
            "evidence": {k: _jsonable(v) for k, v in self.evidence.items()},
        }


@dataclass
class Verdict:
    status: Status
    route: Route
    reasons: list[Reason] = field(default_factory=list)
    tolerances: dict[str, float] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def codes(self) -> list[str]:
        return [r.code for r in self.reasons]

    @property
    def obstructions(self) -> list[Reason]:
        return [r for r in self.reasons if r.code in OBSTRUCTION_CODES]

    def to_json(self) -> dict[str, Any]:
        return {
            "status": self.status.value,
            "route": self.route.value,
            "reasons": [r.to_json() for r in self.reasons],
            "tolerances": dict(self.tolerances),
            "warnings": list(self.warnings),
        }


@dataclass(frozen=True)
class ClassifyOptions:
    tol: float = DEFAULT_TOL
    grid_size: int = 4096
    expansion_grid: int = 1024
    probe_grid: int = 21
    component_resolution: int = 64
    obstructions: bool = True
    diagnostics: bool = False

    def tolerances(self) -> dict[str, float]:
        return {"tol": self.tol}


# -- obstructions -----------------------------------------------------------------


def obstruction_contraction(sym: LaurentSymbol, tol: float = DEFAULT_TOL) -> Reason | None:
    """``||T_F|| = ||F||_inf <= 1``: every orbit is bounded."""
    s = sup_norm(sym)
    if s <= 1.0 + tol:
        return Reason("CONTRACTION", ReasonKind.NECESSARY, {"sup_norm": s})
    return None


def _expansion_profile(sym: LaurentSymbol, theta0) -> np.ndarray:
    """Grid value of ``min_theta Re(e^{i theta0} F(e^{i theta}))`` (an upper bound)."""
    k = 1024
    vals = sym.eval(np.arange(k) * (TWO_PI / k))
    rot = np.exp(1j * np.asarray(theta0, dtype=float))
    return (rot[:, None] * np.atleast_1d(vals)[None, :]).real.min(axis=1)


def _separation_value(sym: LaurentSymbol, theta0: float) -> tuple[float, float]:
    rot = cmath.exp(1j * theta0)
    return circle_minimum(lambda t: (rot * sym.eval(t)).real, 1024)


def obstruction_expansion(sym: LaurentSymbol, tol: float = DEFAULT_TOL, grid: int = 1024) -> Reason | None:
    """Search ``theta0`` with ``Re(e^{i theta0} F) >= 1`` on the circle.

    Then ``Re <e^{i theta0} T f, f> >= ||f||^2`` so ``||T f|| >= ||f||`` and
    orbits stay away from zero.
    """
    if sym.is_zero:
        return None
    t0 = np.arange(grid) * (TWO_PI / grid)
    prof = _expansion_profile(sym, t0)
    j = int(np.argmax(prof))
    # prof over-estimates each inner minimum by at most L*pi/1024; the outer
    # grid misses the best theta0 by at most ||F||_1 * pi / grid.
    slack = sym.lipschitz * math.pi / 1024 + sym.l1_norm * math.pi / grid
    if prof[j] + slack < 1.0 - tol:
        return None
    best_t = float(t0[j])
    step = TWO_PI / grid
    best_t, neg = circle_minimum_local(lambda th: -_separation_value(sym, th)[1], best_t, step)
    value = -neg
    if value >= 1.0 - tol:
        return Reason("SEPARATION", ReasonKind.NECESSARY, {"theta0": best_t, "min_re": value})
    return None


def circle_minimum_local(fun, t0: float, step: float) -> tuple[float, float]:
    """Minimise ``fun`` on ``[t0 - step, t0 + step]``; never worse than ``fun(t0)``."""
    res = minimize_scalar(fun, bounds=(t0 - step, t0 + step), method="bounded", options={"xatol": 1e-12})
    base = fun(t0)
    if res.fun <= base:
        return float(res.x) % TWO_PI, float(res.fun)
    return t0, float(base)


def _grid_probes(sym: LaurentSymbol, probe_grid: int) -> np.ndarray:
    lo, hi = curve_box(sym, margin=0.0)
    xs = np.linspace(lo.real, hi.real, probe_grid)
    ys = np.linspace(lo.imag, hi.imag, probe_grid)
    grid_pts = (xs[None, :] + 1j * ys[:, None]).ravel()
    return np.concatenate([[sym.coefficient(0)], grid_pts])


def _near_curve_probes(sym: LaurentSymbol, count: int = 64, rel: float = 1e-2) -> np.ndarray:
    """Points just off the curve on both sides; they catch thin regions the grid misses."""
    th = np.arange(count) * (TWO_PI / count)
    vals = sym.eval(th)
    deriv = sum(1j * n * v * np.exp(1j * n * th) for n, v in sym.coeffs.items())
    normal = 1j * deriv / np.where(np.abs(deriv) > 0, np.abs(deriv), 1.0)
    eps = rel * sym.l1_norm
    return np.concatenate([vals + eps * normal, vals - eps * normal])


def obstruction_adjoint_eigen(sym: LaurentSymbol, probe_grid: int = 21) -> Reason | None:
    """A point with positive winding is an eigenvalue of ``T_F*``.

    Probes the centroid ``a_0`` and a grid over the curve's bounding box,
    then, if nothing was found, points just off the curve.
    """
    if sym.is_constant:
        return None
    for pts in (_grid_probes(sym, probe_grid), _near_curve_probes(sym)):
        wind, on_curve, _ = winding_numbers(sym, pts)
        hits = np.flatnonzero((wind > 0) & ~on_curve)
        if hits.size:
            k = int(hits[0])
            return Reason("ADJOINT_EIGEN", ReasonKind.NECESSARY, {"lambda": complex(pts[k]), "winding": int(wind[k])})
    return None


def obstruction_spectral_circle(sym: LaurentSymbol, tol: float = DEFAULT_TOL) -> Reason | None:
    """Fires when the spectrum misses the unit circle.

    If ``|F|`` takes values on both sides of 1 the curve (part of the
    spectrum) crosses the circle.  Otherwise the circle avoids the curve, so
    the winding number is constant along it and one evaluation at ``1``
    decides whether the whole circle lies in the spectrum.
    """
    _, lo = min_modulus(sym)
    hi = sup_norm(sym)
    if lo <= 1.0 + tol and hi >= 1.0 - tol:
        return None
    pc = classify_point(sym, 1.0)
    if pc.winding != 0 or pc.kind.value == "OnCurve":
        return None
    return Reason("SPECTRUM_MISSES_CIRCLE", ReasonKind.NECESSARY, {"min_modulus": lo, "sup_norm": hi})


def diagnostic_components(sym: LaurentSymbol, resolution: int = 64) -> list[Reason]:
    """One warning per spectral component whose cells miss the unit circle."""
    if sym.is_constant:
        return []
    rep = components(spectrum_grid(sym, resolution=(resolution, resolution)))
    out = []
    for comp in rep.components:
        if not comp.intersects_unit_circle:
            out.append(
                Reason(
                    "COMPONENT_MISSES_CIRCLE",
                    ReasonKind.DIAGNOSTIC,
                    {
                        "component": comp.id,
                        "winding": comp.winding,
                        "cell_count": comp.cell_count,
                        "representative": comp.representative,
                        "resolution": resolution,
                    },
                )
            )
    return out


def run_obstructions(sym: LaurentSymbol, opts: ClassifyOptions | None = None) -> list[Reason]:
    opts = opts or ClassifyOptions()
    found = [
        obstruction_contraction(sym, opts.tol),
        obstruction_expansion(sym, opts.tol, opts.expansion_grid),
        obstruction_adjoint_eigen(sym, opts.probe_grid),
        obstruction_spectral_circle(sym, opts.tol),
    ]
    return [r for r in found if r is not None]


# -- decision routes ----------------------------------------------------------------


def classify_analytic(sym: LaurentSymbol, opts: ClassifyOptions | None = None) -> Verdict:
    """``T_F* k_lam = conj(F(lam)) k_lam``: the adjoint always has eigenvalues."""
    opts = opts or ClassifyOptions()
    ev = sym.coefficient(0).conjugate()
    return Verdict(
        Status.NOT_HYPERCYCLIC,
        Route.ANALYTIC,
        [Reason("ADJOINT_EIGEN", ReasonKind.NECESSARY, {"lambda": 0j, "adjoint_eigenvalue": ev})],
        opts.tolerances(),
    )


def _band(value: float, threshold: float, tol: float) -> int:
    """-1 below the band, 0 inside, +1 above."""
    if value < threshold - tol:
        return -1
    if value > threshold + tol:
        return 1
    return 0


def classify_antianalytic(sym: LaurentSymbol, opts: ClassifyOptions | None = None) -> Verdict:
    """``F = conj(phi)``: hypercyclic iff ``phi`` is non-constant and ``phi(D)`` meets the circle.

    For a polynomial ``phi`` that reads ``inf_D |phi| < 1 < sup_D |phi|``.
    The supremum is ``max_T |phi|``; the infimum is 0 when ``phi`` has a zero
    in the disc (positive winding about 0) and ``min_T |phi|`` otherwise.
    """
    opts = opts or ClassifyOptions()
    tol = opts.tol
    route = Route.ANTI_ANALYTIC
    if sym.is_constant:
        return Verdict(
            Status.NOT_HYPERCYCLIC,
            route,
            [Reason("CONSTANT", ReasonKind.NECESSARY, {"value": sym.coefficient(0)})],
            opts.tolerances(),
        )
    phi = LaurentSymbol({-n: v.conjugate() for n, v in sym.coeffs.items()})
    s = sup_norm(phi, opts.grid_size)
    _, min_t = min_modulus(phi, opts.grid_size)
    try:
        zeros = winding_number(phi, 0.0).value
        inf_d = 0.0 if zeros >= 1 else min_t
    except OnCurve:
        # a zero within delta of the circle: zero counting is not trustworthy
        zeros = None
        inf_d = min_t
    evidence = {"sup": s, "inf": inf_d, "zeros_in_disc": zeros}
    lo, hi = _band(inf_d, 1.0, tol), _band(s, 1.0, tol)
    if zeros is None:
        status, kind = Status.INDETERMINATE, ReasonKind.NECESSARY
        evidence["zero_near_circle"] = True
    elif lo == -1 and hi == 1:
        status, kind = Status.HYPERCYCLIC, ReasonKind.SUFFICIENT
    elif lo == 1 or hi == -1:
        status, kind = Status.NOT_HYPERCYCLIC, ReasonKind.NECESSARY
    else:
        status, kind = Status.INDETERMINATE, ReasonKind.NECESSARY
        evidence["within_tolerance"] = True
    reasons = [Reason("GS_CONDITION", kind, evidence)]
    if hi <= 0:
        reasons.append(Reason("CONTRACTION", ReasonKind.NECESSARY, {"sup_norm": s}))
    return Verdict(status, route, reasons, opts.tolerances())


def separation_profile(tri: TridiagonalSymbol, theta0):
    """``min_theta Re(e^{i theta0} F(e^{i theta}))`` in closed form.

    ``Re(e^{i t0}(a e^{-it} + c e^{it}))`` has minimum ``-|a e^{i t0} + conj(c) e^{-i t0}|``.
    """
    rot = np.exp(1j * np.asarray(theta0, dtype=float))
    return (rot * tri.b).real - np.abs(tri.a * rot + np.conj(tri.c) / rot)


def classify_tridiagonal(tri: TridiagonalSymbol, opts: ClassifyOptions | None = None) -> Verdict:
    """Shkarin: hypercyclic iff ``|a| > |c|`` and the open ellipse interior meets the circle.

    Degenerate inputs are rerouted: ``c = 0`` is anti-analytic, ``a = 0`` analytic.
    """
    opts = opts or ClassifyOptions()
    tol = opts.tol
    if tri.c == 0:
        return classify_antianalytic(to_laurent(tri), opts)
    if tri.a == 0:
        return classify_analytic(to_laurent(tri), opts)
    route = Route.TRIDIAGONAL
    ma, mc = abs(tri.a), abs(tri.c)
    if ma <= mc:
        reasons = [
            Reason(
                "HYPONORMAL",
                ReasonKind.NECESSARY,
                {"abs_a": ma, "abs_c": mc, "commutator_coefficient": mc * mc - ma * ma},
            )
        ]
        warnings = []
        if ma == mc:
            warnings.append("|a| = |c|: decided by hyponormality, valid on H^2 only")
        else:
            try:
                w = winding_number(to_laurent(tri), tri.b).value
                if w > 0:
                    reasons.append(Reason("ADJOINT_EIGEN", ReasonKind.NECESSARY, {"lambda": tri.b, "winding": w}))
            except OnCurve:
                pass
        return Verdict(Status.NOT_HYPERCYCLIC, route, reasons, opts.tolerances(), warnings)

    try:
        inter = ellipse_intersects_unit_circle(tri, tol, opts.grid_size)
    except DegenerateEllipse:
        return Verdict(
            Status.INDETERMINATE,
            route,
            [Reason("SHKARIN_ELLIPSE", ReasonKind.NECESSARY, {"abs_a": ma, "abs_c": mc, "degenerate": True})],
            opts.tolerances(),
            ["|a| and |c| agree within tolerance: ellipse is flat"],
        )
    evidence = {"abs_a": ma, "abs_c": mc, "margin": inter.margin, "theta": inter.theta}
    if inter.relation is CircleRelation.INTERSECTS:
        return Verdict(
            Status.HYPERCYCLIC, route, [Reason("SHKARIN_ELLIPSE", ReasonKind.SUFFICIENT, evidence)], opts.tolerances()
        )
    if inter.relation is CircleRelation.TANGENT:
        evidence["within_tolerance"] = True
        return Verdict(
            Status.INDETERMINATE,
            route,
            [Reason("SHKARIN_ELLIPSE", ReasonKind.NECESSARY, evidence)],
            opts.tolerances(),
            ["ellipse interior is tangent to the unit circle"],
        )

    reasons = [Reason("SHKARIN_ELLIPSE", ReasonKind.NECESSARY, evidence)]
    theta0, neg = circle_minimum(lambda t: -separation_profile(tri, t), opts.grid_size)
    if -neg >= 1.0 - tol:
        reasons.append(Reason("SEPARATION", ReasonKind.NECESSARY, {"theta0": theta0, "min_re": -neg}))
    else:
        s = sup_norm(to_laurent(tri), opts.grid_size)
        if s <= 1.0 + tol:
            reasons.append(Reason("CONTRACTION", ReasonKind.NECESSARY, {"sup_norm": s}))
    return Verdict(Status.NOT_HYPERCYCLIC, route, reasons, opts.tolerances())


def classify(sym: LaurentSymbol | TridiagonalSymbol, opts: ClassifyOptions | None = None) -> Verdict:
    """Route a symbol to its decision procedure and cross-check with the obstructions."""
    opts = opts or ClassifyOptions()
    if isinstance(sym, TridiagonalSymbol):
        sym = to_laurent(sym)
    tri = as_tridiagonal(sym)
    if sym.is_antianalytic:
        verdict = classify_antianalytic(sym, opts)
    elif sym.is_analytic:
        verdict = classify_analytic(sym, opts)
    elif tri is not None:
        verdict = classify_tridiagonal(tri, opts)
    else:
        verdict = Verdict(
            Status.UNSUPPORTED,
            Route.DIAGNOSTICS_ONLY,
            [],
            opts.tolerances(),
            ["symbol outside the characterised classes; component diagnostics assume unchecked smoothness hypotheses"],
        )

    if opts.obstructions:
        present = set(verdict.codes)
        for r in run_obstructions(sym, opts):
            if r.code not in present:
                verdict.reasons.append(r)
                present.add(r.code)
        if verdict.status is Status.HYPERCYCLIC and verdict.obstructions:
            verdict.status = Status.INDETERMINATE
            verdict.warnings.append(
                "decision procedure and obstruction checks disagree within tolerance: "
                + ", ".join(r.code for r in verdict.obstructions)
            )
    if verdict.route is Route.DIAGNOSTICS_ONLY or opts.diagnostics:
        verdict.reasons.extend(diagnostic_components(sym, opts.component_resolution))
    return verdict
