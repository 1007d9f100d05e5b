"""Winding numbers, Fredholm data and rasterised spectra of Toeplitz operators.

For a continuous symbol the spectrum is the curve ``F(T)`` together with
every point it winds around.  Winding numbers are accumulated from argument
increments over a theta-partition that is refined until each sub-arc is
certified not to loop around the point: with ``L = sum |n a_n|`` the arc over
an interval of length ``h`` stays within ``L h`` of its endpoint, so the
increment is the principal argument whenever ``L h`` is below the distance
from the endpoint to the point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np
from scipy import ndimage

from .errors import NonIntegerWinding, OnCurve
from .symbol import TWO_PI, LaurentSymbol

BASE_SAMPLES = 256
FINE_SAMPLES = 4096
# Sub-arcs must satisfy L*h < CERT * dist so every increment is below pi/2.
CERT = 0.7
MAX_UNIFORM = 1 << 14
MAX_LEVELS = 48
_CHUNK = 1 << 22


@dataclass(frozen=True)
class WindingResult:
    value: int
    min_curve_distance: float
    refinement_levels: int


class PointKind(str, Enum):
    ON_CURVE = "OnCurve"
    SPECTRUM = "Spectrum"
    RESOLVENT = "Resolvent"


@dataclass(frozen=True)
class PointClass:
    kind: PointKind
    winding: int = 0

    def to_json(self) -> dict[str, Any]:
        return {"class": self.kind.value, "winding": self.winding}


def curve_delta(sym: LaurentSymbol) -> float:
    """On-curve guard ``1e-8 * sum |a_n|``."""
    return 1e-8 * sym.l1_norm


def _sum_increments(vals: np.ndarray, lam) -> np.ndarray:
    """Total argument change of ``vals - lam`` along the closed sample loop (last axis)."""
    d = vals - lam
    ratio = np.roll(d, -1, axis=-1) / d
    return np.angle(ratio).sum(axis=-1)


def _round_winding(total: float) -> int:
    w = total / TWO_PI
    k = round(w)
    if abs(w - k) > 0.01:
        raise NonIntegerWinding(f"accumulated winding {w!r} is not near an integer")
    return int(k)


def _adaptive_single(sym: LaurentSymbol, lam: complex, delta: float) -> WindingResult:
    """Interval-by-interval refinement for points close to the curve."""
    L = sym.lipschitz
    theta = np.arange(BASE_SAMPLES) * (TWO_PI / BASE_SAMPLES)
    vals = sym.eval(theta)
    dist = np.abs(vals - lam)
    levels = 0
    while True:
        dmin = float(dist.min())
        if dmin <= delta:
            raise OnCurve(f"point {lam!r} is within {dmin:.3e} of the symbol curve")
        nxt_theta = np.append(theta[1:], TWO_PI)
        h = nxt_theta - theta
        nxt_dist = np.roll(dist, -1)
        bad = L * h >= CERT * np.maximum(dist, nxt_dist)
        if not bad.any():
            break
        if levels >= MAX_LEVELS:
            raise OnCurve(f"point {lam!r} could not be separated from the curve (distance < {L * h.min():.3e})")
        mids = theta[bad] + 0.5 * h[bad]
        theta = np.concatenate([theta, mids])
        order = np.argsort(theta, kind="stable")
        theta = theta[order]
        vals = np.concatenate([vals, sym.eval(mids)])[order]
        dist = np.abs(vals - lam)
        levels += 1
    total = float(_sum_increments(vals, lam))
    return WindingResult(_round_winding(total), float(dist.min()), levels)


def winding_number(sym: LaurentSymbol, lam: complex, delta: float | None = None) -> WindingResult:
    """Winding number of the curve ``theta -> F(e^{i theta})`` about ``lam``.

    Raises :class:`OnCurve` when ``lam`` is within ``delta`` (default
    ``1e-8 * sum |a_n|``) of a curve sample.
    """
    delta = curve_delta(sym) if delta is None else delta
    return _adaptive_single(sym, complex(lam), delta)


def winding_numbers(sym: LaurentSymbol, points, delta: float | None = None):
    """Vectorised winding numbers.

    Returns ``(winding, on_curve, distance)`` arrays shaped like ``points``;
    ``winding`` is 0 where ``on_curve`` is set.  Points far from the curve
    share uniform partitions; the rest fall back to :func:`winding_number`.
    """
    pts = np.asarray(points, dtype=complex)
    shape = pts.shape
    pts = pts.ravel()
    delta = curve_delta(sym) if delta is None else delta
    L = sym.lipschitz
    wind = np.zeros(pts.size, dtype=int)
    on_curve = np.zeros(pts.size, dtype=bool)
    dist = np.zeros(pts.size)
    if pts.size == 0:
        return wind.reshape(shape), on_curve.reshape(shape), dist.reshape(shape)

    base = sym.eval(np.arange(BASE_SAMPLES) * (TWO_PI / BASE_SAMPLES))
    d0 = np.empty(pts.size)
    step = max(1, _CHUNK // BASE_SAMPLES)
    for s in range(0, pts.size, step):
        d0[s : s + step] = np.abs(base[None, :] - pts[s : s + step, None]).min(axis=1)
    dist[:] = d0

    # Certified lower bound on the true distance from the base sampling;
    # points where it is useless get a second, finer distance pass.
    lower = d0 - L * math.pi / BASE_SAMPLES
    unsure = np.flatnonzero((lower <= 0) & (d0 > delta))
    if unsure.size:
        fine = sym.eval(np.arange(FINE_SAMPLES) * (TWO_PI / FINE_SAMPLES))
        step_f = max(1, _CHUNK // FINE_SAMPLES)
        for s in range(0, unsure.size, step_f):
            sel = unsure[s : s + step_f]
            d0[sel] = np.abs(fine[None, :] - pts[sel, None]).min(axis=1)
            lower[sel] = d0[sel] - L * math.pi / FINE_SAMPLES
        dist[:] = d0
    with np.errstate(divide="ignore", invalid="ignore"):
        need = np.where(lower > 0, TWO_PI * L / (CERT * np.where(lower > 0, lower, 1.0)), np.inf)
    need = np.where(L == 0, BASE_SAMPLES, need)
    samples = np.full(pts.size, -1, dtype=np.int64)
    finite = np.isfinite(need) & (need <= MAX_UNIFORM)
    samples[finite] = np.maximum(BASE_SAMPLES, 2 ** np.ceil(np.log2(np.maximum(need[finite], 1.0)))).astype(np.int64)
    samples[d0 <= delta] = 0

    for n in np.unique(samples[samples > 0]):
        idx = np.flatnonzero(samples == n)
        curve = sym.eval(np.arange(n) * (TWO_PI / n))
        step = max(1, _CHUNK // int(n))
        for s in range(0, idx.size, step):
            sel = idx[s : s + step]
            tot = _sum_increments(curve[None, :], pts[sel, None])
            w = tot / TWO_PI
            k = np.rint(w)
            if np.any(np.abs(w - k) > 0.01):
                raise NonIntegerWinding("uniform partition produced a non-integer winding")
            wind[sel] = k.astype(int)

    for i in np.flatnonzero(samples < 0):
        try:
            r = winding_number(sym, pts[i], delta)
            wind[i] = r.value
            dist[i] = r.min_curve_distance
        except OnCurve:
            on_curve[i] = True
            wind[i] = 0
    on_curve |= d0 <= delta
    wind[on_curve] = 0
    return wind.reshape(shape), on_curve.reshape(shape), dist.reshape(shape)


def classify_point(sym: LaurentSymbol, lam: complex, delta: float | None = None) -> PointClass:
    try:
        w = winding_number(sym, lam, delta).value
    except OnCurve:
        return PointClass(PointKind.ON_CURVE)
    if w != 0:
        return PointClass(PointKind.SPECTRUM, w)
    return PointClass(PointKind.RESOLVENT)


def fredholm_index(sym: LaurentSymbol, lam: complex) -> int:
    """Index of ``T_F - lam``: minus the winding number about ``lam``."""
    return -winding_number(sym, lam).value


def kernel_dims(sym: LaurentSymbol, lam: complex) -> tuple[int, int]:
    """``(dim ker(T_F - lam), dim ker(T_F - lam)*)``.

    Coburn's theorem makes one of the two vanish, so the index alone fixes both.
    """
    w = winding_number(sym, lam).value
    return max(-w, 0), max(w, 0)


# -- spectrum raster ----------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumGrid:
    """Cell-centre classification over ``[x0, x1] x [y0, y1]``.

    ``kinds`` holds 0 (Resolvent), 1 (Spectrum) or 2 (OnCurve); rows index y.
    """

    lower_left: complex
    upper_right: complex
    nx: int
    ny: int
    kinds: np.ndarray
    winding: np.ndarray

    KIND_NAMES = ("Resolvent", "Spectrum", "OnCurve")

    @property
    def xs(self) -> np.ndarray:
        x0, x1 = self.lower_left.real, self.upper_right.real
        dx = (x1 - x0) / self.nx
        return x0 + dx * (np.arange(self.nx) + 0.5)

    @property
    def ys(self) -> np.ndarray:
        y0, y1 = self.lower_left.imag, self.upper_right.imag
        dy = (y1 - y0) / self.ny
        return y0 + dy * (np.arange(self.ny) + 0.5)

    @property
    def cell_size(self) -> tuple[float, float]:
        return (
            (self.upper_right.real - self.lower_left.real) / self.nx,
            (self.upper_right.imag - self.lower_left.imag) / self.ny,
        )

    def cell(self, i: int, j: int) -> PointClass:
        k = int(self.kinds[j, i])
        if k == 1:
            return PointClass(PointKind.SPECTRUM, int(self.winding[j, i]))
        return PointClass(PointKind.ON_CURVE if k == 2 else PointKind.RESOLVENT)

    def rows(self):
        """``(x, y, class, winding)`` per cell, x fastest."""
        xs, ys = self.xs, self.ys
        for j in range(self.ny):
            for i in range(self.nx):
                k = int(self.kinds[j, i])
                yield float(xs[i]), float(ys[j]), self.KIND_NAMES[k], int(self.winding[j, i])


def curve_box(sym: LaurentSymbol, margin: float = 0.1, samples: int = 4096) -> tuple[complex, complex]:
    """Bounding box of ``F(T)`` widened by ``margin`` of its extent on each side."""
    vals = sym.eval(np.arange(samples) * (TWO_PI / samples))
    vals = np.atleast_1d(vals)
    x0, x1 = float(vals.real.min()), float(vals.real.max())
    y0, y1 = float(vals.imag.min()), float(vals.imag.max())
    ext = max(x1 - x0, y1 - y0)
    pad = margin * ext if ext > 0.0 else 0.5 * max(1.0, abs(complex(vals[0])))
    pad_x = pad_y = pad
    return complex(x0 - pad_x, y0 - pad_y), complex(x1 + pad_x, y1 + pad_y)


def spectrum_grid(
    sym: LaurentSymbol,
    box: tuple[complex, complex] | None = None,
    resolution: tuple[int, int] = (64, 64),
    delta: float | None = None,
) -> SpectrumGrid:
    nx, ny = resolution
    if nx < 8 or ny < 8:
        raise ValueError("resolution must be at least 8x8")
    lo, hi = curve_box(sym) if box is None else (complex(box[0]), complex(box[1]))
    dx = (hi.real - lo.real) / nx
    dy = (hi.imag - lo.imag) / ny
    xs = lo.real + dx * (np.arange(nx) + 0.5)
    ys = lo.imag + dy * (np.arange(ny) + 0.5)
    pts = xs[None, :] + 1j * ys[:, None]
    wind, on_curve, _ = winding_numbers(sym, pts, delta)
    kinds = np.where(on_curve, 2, np.where(wind != 0, 1, 0)).astype(np.int8)
    return SpectrumGrid(lo, hi, nx, ny, kinds, np.where(kinds == 1, wind, 0))


@dataclass(frozen=True)
class Component:
    id: int
    cell_count: int
    winding: int
    intersects_unit_circle: bool
    representative: complex

    def to_json(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "cell_count": self.cell_count,
            "winding": self.winding,
            "intersects_unit_circle": self.intersects_unit_circle,
            "representative": [self.representative.real, self.representative.imag],
        }


@dataclass(frozen=True)
class ComponentReport:
    components: list[Component]
    resolution: tuple[int, int]

    def to_json(self) -> dict[str, Any]:
        return {
            "resolution": list(self.resolution),
            "components": [c.to_json() for c in self.components],
        }


def _cells_meet_circle(grid: SpectrumGrid) -> np.ndarray:
    """Whether each cell square meets ``|z| = 1``: nearest point inside, farthest corner outside."""
    dx, dy = grid.cell_size
    xs, ys = grid.xs, grid.ys
    X, Y = np.meshgrid(xs, ys)
    x0, x1 = X - dx / 2, X + dx / 2
    y0, y1 = Y - dy / 2, Y + dy / 2
    nx_ = np.clip(0.0, x0, x1)
    ny_ = np.clip(0.0, y0, y1)
    near = np.hypot(nx_, ny_)
    far = np.hypot(np.maximum(np.abs(x0), np.abs(x1)), np.maximum(np.abs(y0), np.abs(y1)))
    return (near <= 1.0) & (far >= 1.0)


def components(grid: SpectrumGrid) -> ComponentReport:
    """4-connected components of Spectrum cells, split by winding value."""
    meets = _cells_meet_circle(grid)
    found: list[Component] = []
    spec = grid.kinds == 1
    for w in sorted(set(np.unique(grid.winding[spec]).tolist())):
        labels, count = ndimage.label(spec & (grid.winding == w))
        for lab in range(1, count + 1):
            mask = labels == lab
            js, is_ = np.nonzero(mask)
            # representative: first cell in row-major order
            rep = complex(grid.xs[is_[0]], grid.ys[js[0]])
            found.append(
                Component(
                    id=0,
                    cell_count=int(mask.sum()),
                    winding=int(w),
                    intersects_unit_circle=bool(meets[mask].any()),
                    representative=rep,
                )
            )
    found.sort(key=lambda c: (c.representative.imag, c.representative.real))
    found = [Component(k, c.cell_count, c.winding, c.intersects_unit_circle, c.representative) for k, c in enumerate(found)]
    return ComponentReport(found, (grid.nx, grid.ny))
