"""Orbits of finite sections and the eigenvector-based transitivity witness.

Everything here runs on a :class:`TruncatedToeplitz`.  Claims about the
infinite operator only hold while the accumulated support of an iterate stays
clear of the truncation edge, which :class:`OrbitTrace` keeps track of.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .eigensystem import EigenPair, residual, tridiagonal_eigenvector
from .errors import (
    EigenResidualTooLarge,
    PreconditionError,
    ProjectionIllConditioned,
    SpectralGapViolation,
    SupportOverflow,
)
from .operators import TruncatedToeplitz, support
from .symbol import TWO_PI, TridiagonalSymbol, to_laurent

WITNESS_RESIDUAL_TOL = 1e-9
GRAM_COND_LIMIT = 1e12


@dataclass
class OrbitTrace:
    norms: np.ndarray
    snapshots: dict[int, np.ndarray] = field(default_factory=dict)
    support_margin: int = 0
    contaminated: bool = False

    @property
    def steps(self) -> int:
        return len(self.norms) - 1

    def to_json(self) -> dict[str, Any]:
        return {
            "norms": [float(v) for v in self.norms],
            "support_margin": int(self.support_margin),
            "contaminated": bool(self.contaminated),
            "snapshots": {
                str(k): [[float(z.real), float(z.imag)] for z in v] for k, v in sorted(self.snapshots.items())
            },
        }

    def rows(self):
        for k, v in enumerate(self.norms):
            yield k, float(v)


def orbit(T: TruncatedToeplitz, x, steps: int, snapshot_steps: Sequence[int] = ()) -> OrbitTrace:
    """Norms ``||T^k x||`` for ``k = 0..steps``.

    Each application pushes the support at most ``N`` (sub-diagonal count)
    indices towards the edge.  ``support_margin`` is the guaranteed gap left
    after the last step; once it is negative the section no longer agrees
    with the infinite operator and ``contaminated`` is set.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    v = T._check(x).copy()
    want = set(int(s) for s in snapshot_steps)
    _, N = T.bandwidth
    supp = support(v)
    last = supp[1] if supp is not None else 0
    norms = np.empty(steps + 1)
    snaps: dict[int, np.ndarray] = {}
    norms[0] = np.linalg.norm(v)
    if 0 in want:
        snaps[0] = v.copy()
    for k in range(1, steps + 1):
        v = T.apply(v)
        norms[k] = np.linalg.norm(v)
        if k in want:
            snaps[k] = v.copy()
    margin = T.dim - 1 - last - N * steps
    return OrbitTrace(norms, snaps, margin, margin < 0)


@dataclass
class WitnessReport:
    n: int
    norm_Tn_x: float
    norm_u_n: float
    approach: float
    witness_defect: float
    table: list[dict[str, float]] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def transitivity_error(self) -> float:
        """``max(approach, ||u_n||)``: how far ``x + u_n`` is from ``x`` and ``T^n(x+u_n)`` from ``y``."""
        return max(self.approach, self.norm_u_n)

    def to_json(self) -> dict[str, Any]:
        out = {
            "n": self.n,
            "norm_Tn_x": self.norm_Tn_x,
            "norm_u_n": self.norm_u_n,
            "approach": self.approach,
            "witness_defect": self.witness_defect,
            "table": [dict(r) for r in self.table],
        }
        if self.extra:
            out["extra"] = dict(self.extra)
        return out

    def rows(self):
        for r in self.table:
            yield r["n"], r["norm_Tn_x"], r["norm_u_n"], r["approach"]


Triple = tuple[complex, np.ndarray, complex]


def _check_pairs(T: TruncatedToeplitz, pairs: Sequence[Triple], small: bool, tol: float) -> None:
    for lam, vec, _ in pairs:
        lam = complex(lam)
        if small and not abs(lam) < 1.0:
            raise SpectralGapViolation(f"|lambda| = {abs(lam)} is not < 1")
        if not small and not abs(lam) > 1.0:
            raise SpectralGapViolation(f"|mu| = {abs(lam)} is not > 1")
        res = residual(T, EigenPair(lam, np.asarray(vec, dtype=complex)))
        if res > tol:
            raise EigenResidualTooLarge(f"eigen-residual {res:.3e} exceeds {tol:.1e} for eigenvalue {lam}")


def gs_witness(
    T: TruncatedToeplitz,
    small: Sequence[Triple],
    large: Sequence[Triple],
    n: int,
    target=None,
    residual_tol: float = WITNESS_RESIDUAL_TOL,
) -> WitnessReport:
    """Build ``x = sum a_k x_k``, ``y = sum b_k y_k`` and ``u_n = sum b_k mu_k^{-n} y_k``.

    Exactly ``T^n u_n = y``, so ``T^n(x + u_n) - y = T^n x`` shrinks like
    ``max |lambda_k|^n`` while ``u_n`` shrinks like ``max |mu_k|^{-n}``.
    ``approach`` is measured against ``target`` when given, else against ``y``.
    The table covers ``n' = 0..n``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    _check_pairs(T, small, True, residual_tol)
    _check_pairs(T, large, False, residual_tol)
    zero = np.zeros(T.dim, dtype=complex)
    x = sum((complex(a) * np.asarray(v, dtype=complex) for _, v, a in small), zero.copy())
    ys = [np.asarray(v, dtype=complex) for _, v, _ in large]
    mus = np.array([complex(m) for m, _, _ in large], dtype=complex)
    bs = np.array([complex(b) for _, _, b in large], dtype=complex)
    y = sum((b * v for b, v in zip(bs, ys)), zero.copy())
    goal = y if target is None else T._check(target)
    ny = float(np.linalg.norm(y))

    Tx = x.copy()
    Ty = [v.copy() for v in ys]
    table = []
    for step in range(n + 1):
        if step:
            Tx = T.apply(Tx)
            Ty = [T.apply(v) for v in Ty]
        weights = bs * mus ** (-step)
        u = sum((w * v for w, v in zip(weights, ys)), zero.copy())
        Tu = sum((w * v for w, v in zip(weights, Ty)), zero.copy())
        table.append(
            {
                "n": step,
                "norm_Tn_x": float(np.linalg.norm(Tx)),
                "norm_u_n": float(np.linalg.norm(u)),
                "approach": float(np.linalg.norm(Tx + Tu - goal)),
                "witness_defect": float(np.linalg.norm(Tu - y)) / ny if ny > 0 else float(np.linalg.norm(Tu)),
            }
        )
    last = table[-1]
    return WitnessReport(
        n, last["norm_Tn_x"], last["norm_u_n"], last["approach"], last["witness_defect"], table
    )


def decay_ratio(values: Sequence[float], lo: int, hi: int) -> float:
    """Geometric ratio from a least-squares fit of ``log values[k]`` for ``k = lo..hi``."""
    k = np.arange(lo, hi + 1)
    v = np.log(np.asarray(values, dtype=float)[lo : hi + 1])
    slope = np.polyfit(k, v, 1)[0]
    return float(np.exp(slope))


# -- transitivity demo ---------------------------------------------------------------


def sample_annulus(
    tri: TridiagonalSymbol,
    K: int,
    inside: bool,
    rng: np.random.Generator,
    tol: float = 1e-9,
    max_draws: int = 100_000,
) -> np.ndarray:
    """``K`` parameters ``z0`` uniform in ``(r, theta)``, ``1 < r <= sqrt|a/c|``.

    Kept when ``|F(z0)| < 1 - tol`` (``inside``) or ``> 1 + tol``.  Points
    with ``|z0| > sqrt|a/c|`` would duplicate eigenvectors through the
    symmetry ``z0 -> a/(c z0)``.
    """
    rmax = float(np.sqrt(abs(tri.a / tri.c)))
    out: list[complex] = []
    for _ in range(max_draws):
        if len(out) == K:
            break
        r = rng.uniform(1.0, rmax)
        if r <= 1.0:
            continue
        z = r * np.exp(1j * rng.uniform(0.0, TWO_PI))
        m = abs(tri(z))
        if (inside and m < 1.0 - tol) or (not inside and m > 1.0 + tol):
            out.append(complex(z))
    if len(out) < K:
        raise PreconditionError("could not sample enough parameters; region too thin")
    return np.array(out)


@dataclass
class Projection:
    coefficients: np.ndarray
    error: float
    condition: float
    regularized: bool


def gram_project(V: np.ndarray, target, regularize: bool = True, ridge: float = 1e-12) -> Projection:
    """Least squares of ``target`` on the columns of ``V`` through the Gram matrix.

    When ``cond(G) > 1e12`` a Tikhonov term ``ridge * trace(G)`` is added, or
    :class:`ProjectionIllConditioned` is raised if ``regularize`` is false.
    """
    t = np.asarray(target, dtype=complex)
    G = V.conj().T @ V
    rhs = V.conj().T @ t
    cond = float(np.linalg.cond(G)) if G.size else 0.0
    reg = False
    if G.size and not cond <= GRAM_COND_LIMIT:
        if not regularize:
            raise ProjectionIllConditioned(f"Gram condition number {cond:.3e} exceeds {GRAM_COND_LIMIT:.0e}")
        G = G + ridge * float(np.trace(G).real) * np.eye(G.shape[0])
        reg = True
    coef = np.linalg.solve(G, rhs) if G.size else np.zeros(0, dtype=complex)
    err = float(np.linalg.norm(V @ coef - t))
    return Projection(coef, err, cond, reg)


def transitivity_demo(
    tri: TridiagonalSymbol,
    x_target,
    y_target,
    K: int = 12,
    max_steps: int = 60,
    eps: float = 1e-3,
    seed: int = 42,
    regularize: bool = True,
) -> WitnessReport:
    """Approximate ``x_target``/``y_target`` by eigenvectors with ``|mu| < 1``/``> 1`` and run the witness.

    Returns the report at the first ``n <= max_steps`` whose approach to
    ``y_target`` drops below ``2 eps`` (or the best ``n`` otherwise).  The
    projection errors and the bound
    ``e2 + ||T^n x~|| + witness slack`` go into ``report.extra``.
    """
    from .classifier import Status, classify_tridiagonal

    verdict = classify_tridiagonal(tri)
    if verdict.status is not Status.HYPERCYCLIC:
        raise PreconditionError(f"symbol is not hypercyclic ({verdict.status.value})")
    xt = np.asarray(x_target, dtype=complex)
    yt = np.asarray(y_target, dtype=complex)
    if xt.shape != yt.shape or xt.ndim != 1:
        raise ValueError("targets must be 1-d vectors of equal length")
    dim = xt.size
    T = TruncatedToeplitz(to_laurent(tri), dim)
    rng = np.random.default_rng(seed)
    z_in = sample_annulus(tri, K, True, rng)
    z_out = sample_annulus(tri, K, False, rng)
    small_pairs = [tridiagonal_eigenvector(tri, z, dim) for z in z_in]
    large_pairs = [tridiagonal_eigenvector(tri, z, dim) for z in z_out]
    V1 = np.array([p.vector for p in small_pairs]).T
    V2 = np.array([p.vector for p in large_pairs]).T
    p1 = gram_project(V1, xt, regularize)
    p2 = gram_project(V2, yt, regularize)

    small = [(p.eigenvalue, p.vector, a) for p, a in zip(small_pairs, p1.coefficients)]
    large = [(p.eigenvalue, p.vector, b) for p, b in zip(large_pairs, p2.coefficients)]
    full = gs_witness(T, small, large, max_steps, target=yt)
    goal = 2.0 * eps
    hit = next((r for r in full.table if r["approach"] < goal), None)
    best = hit or min(full.table, key=lambda r: r["approach"])
    n = int(best["n"])
    table = full.table[: n + 1]
    lam_max = max(abs(p.eigenvalue) for p in small_pairs)
    extra = {
        "projection_error_x": p1.error,
        "projection_error_y": p2.error,
        "gram_condition_x": p1.condition,
        "gram_condition_y": p2.condition,
        "regularized": [p1.regularized, p2.regularized],
        "max_abs_lambda": lam_max,
        "min_abs_mu": min(abs(p.eigenvalue) for p in large_pairs),
        "bound": p2.error + best["norm_Tn_x"] + best["witness_defect"] * float(np.linalg.norm(V2 @ p2.coefficients)),
        "reached": hit is not None,
        "z0_small": [[float(z.real), float(z.imag)] for z in z_in],
        "z0_large": [[float(z.real), float(z.imag)] for z in z_out],
    }
    return WitnessReport(
        n, best["norm_Tn_x"], best["norm_u_n"], best["approach"], best["witness_defect"], table, extra
    )


# -- hyponormal growth -----------------------------------------------------------------


@dataclass
class GrowthReport:
    norms: np.ndarray
    ratios: np.ndarray
    holds: bool
    pattern: str
    first_increase: int | None

    def to_json(self) -> dict[str, Any]:
        return {
            "norms": [float(v) for v in self.norms],
            "ratios": [float(v) for v in self.ratios],
            "holds": self.holds,
            "pattern": self.pattern,
            "first_increase": self.first_increase,
        }


def hyponormal_growth_check(tri: TridiagonalSymbol, x, steps: int, dim: int | None = None) -> GrowthReport:
    """Check ``||T^{k+1}x||^2 <= ||T^{k+2}x|| ||T^k x||`` along the orbit.

    For hyponormal ``T`` (``|c| >= |a|``) the norm sequence is either
    non-increasing throughout or strictly increasing after its first increase.
    ``ratios[k]`` is ``||T^{k+1}x||^2 / (||T^{k+2}x|| ||T^k x||)``.
    """
    if abs(tri.c) < abs(tri.a):
        raise PreconditionError("needs |c| >= |a|")
    x = np.asarray(x, dtype=complex)
    dim = x.size if dim is None else dim
    if x.size != dim:
        raise ValueError("vector length does not match dim")
    supp = support(x)
    last = supp[1] if supp is not None else 0
    if last + steps + 2 > dim:
        raise SupportOverflow(f"support {last} + {steps} steps + 2 exceeds dim {dim}")
    tr = orbit(TruncatedToeplitz(to_laurent(tri), dim), x, steps)
    nm = tr.norms
    lhs = nm[1:-1] ** 2
    rhs = nm[2:] * nm[:-2]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(rhs > 0, lhs / rhs, np.where(lhs > 0, np.inf, 1.0))
    holds = bool(np.all(lhs <= rhs * (1.0 + 1e-12)))
    inc = np.flatnonzero(np.diff(nm) > 0)
    if inc.size == 0:
        pattern, first = "non-increasing", None
    else:
        first = int(inc[0])
        after = np.diff(nm[first:])
        pattern = "increasing after first increase" if np.all(after > 0) else "mixed"
    return GrowthReport(nm, ratios, holds, pattern, first)
