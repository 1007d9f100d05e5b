"""Finite sections of Toeplitz operators and Hardy-space numerics.

Vectors are Taylor coefficient arrays ``(f_0, ..., f_{n-1})`` of elements of
H^2.  The dimension-``n`` section of ``T_F`` has entries ``a_{j-k}``; it is
applied matrix-free, one diagonal at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .errors import DimensionMismatch, NoConvergence, OutsideDisc, SupportOverflow
from .symbol import LaurentSymbol, TridiagonalSymbol, conjugate_symbol, to_laurent


@dataclass(frozen=True)
class TruncatedToeplitz:
    """Compression ``P_n T_F P_n`` acting on the last axis of coefficient arrays."""

    symbol: LaurentSymbol
    dim: int

    def __post_init__(self) -> None:
        if isinstance(self.symbol, TridiagonalSymbol):
            object.__setattr__(self, "symbol", to_laurent(self.symbol))
        if self.dim < 1:
            raise ValueError("dim must be >= 1")

    @property
    def bandwidth(self) -> tuple[int, int]:
        """``(M, N)``: number of super- and sub-diagonals."""
        return self.symbol.low, self.symbol.high

    @cached_property
    def adjoint(self) -> "TruncatedToeplitz":
        return TruncatedToeplitz(conjugate_symbol(self.symbol), self.dim)

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        if x.shape[-1:] != (self.dim,):
            raise DimensionMismatch(f"vector length {x.shape[-1:]} does not match dim {self.dim}")
        return x

    def apply(self, x) -> np.ndarray:
        x = self._check(x)
        n = self.dim
        y = np.zeros_like(x)
        for k, v in self.symbol.coeffs.items():
            if k >= n or -k >= n:
                continue
            if k >= 0:
                y[..., k:] += v * x[..., : n - k]
            else:
                y[..., : n + k] += v * x[..., -k:]
        return y

    def apply_adjoint(self, x) -> np.ndarray:
        return self.adjoint.apply(x)

    def dense(self) -> np.ndarray:
        """Explicit matrix; for test oracles and small ``dim`` only."""
        n = self.dim
        j, k = np.indices((n, n))
        m = np.zeros((n, n), dtype=complex)
        for d, v in self.symbol.coeffs.items():
            m[(j - k) == d] = v
        return m


def riesz_project(x: Mapping[int, complex]) -> dict[int, complex]:
    """Drop the negative Fourier modes of a finitely supported L^2 element."""
    return {n: complex(v) for n, v in sorted(x.items()) if n >= 0}


def bilateral_to_vector(x: Mapping[int, complex], n: int) -> np.ndarray:
    """Dense coefficient vector of the non-negative part, truncated to length ``n``."""
    out = np.zeros(n, dtype=complex)
    for k, v in x.items():
        if 0 <= k < n:
            out[k] = v
    return out


def inner_product(f, g) -> complex:
    """``<f, g> = sum f_k conj(g_k)``."""
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    if f.shape != g.shape:
        raise DimensionMismatch(f"shapes {f.shape} and {g.shape} differ")
    return complex(np.vdot(g, f))


def kernel_vector(lam: complex, n: int) -> np.ndarray:
    """Truncated reproducing kernel ``k_lam``: coefficients ``conj(lam)^k``."""
    lam = complex(lam)
    if abs(lam) >= 1.0:
        raise OutsideDisc(f"|lambda| = {abs(lam)} >= 1")
    return np.power(lam.conjugate(), np.arange(n))


def operator_norm_estimate(
    T: TruncatedToeplitz,
    tol: float = 1e-12,
    max_iter: int = 10_000,
    seed: int = 42,
    method: str = "lanczos",
) -> float:
    """Largest singular value of ``T`` from the dominant eigenvalue of ``T* T``.

    The start vector is drawn from a seeded generator so the estimate is
    reproducible.  ``method="power"`` runs plain power iteration and stops
    once the Rayleigh quotient moves by less than ``tol`` relative; the top
    singular values of banded sections come in near-degenerate pairs, so the
    default is a Lanczos solve (ARPACK) on the same operator.
    """
    if T.symbol.is_zero:
        return 0.0
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(T.dim) + 1j * rng.standard_normal(T.dim)
    v /= np.linalg.norm(v)
    if method == "lanczos" and T.dim > 2:
        return _lanczos_norm(T, v, tol, max_iter)
    if method not in ("lanczos", "power"):
        raise ValueError(f"unknown method {method!r}")
    rho = 0.0
    for _ in range(max_iter):
        w = T.apply(v)
        rho_new = float(np.vdot(w, w).real)
        u = T.apply_adjoint(w)
        nu = np.linalg.norm(u)
        if nu == 0.0:
            return 0.0
        v = u / nu
        if abs(rho_new - rho) <= tol * rho_new:
            return float(np.sqrt(rho_new))
        rho = rho_new
    raise NoConvergence(f"power iteration did not settle in {max_iter} steps (rho={rho})")


def _lanczos_norm(T: TruncatedToeplitz, v0: np.ndarray, tol: float, max_iter: int) -> float:
    op = LinearOperator((T.dim, T.dim), matvec=lambda x: T.apply_adjoint(T.apply(x)), dtype=complex)
    try:
        vals = eigsh(op, k=1, which="LA", v0=v0, tol=tol, maxiter=max_iter, return_eigenvectors=False)
    except ArpackNoConvergence as exc:
        raise NoConvergence(f"Lanczos did not converge in {max_iter} restarts") from exc
    return float(np.sqrt(max(float(vals[0].real), 0.0)))


def poisson_transform(sym: LaurentSymbol, lam):
    """Harmonic extension of ``F`` into the disc at ``lam``.

    Closed form for trigonometric polynomials:
    ``sum_{n>=0} a_n lam^n + sum_{n<0} a_n conj(lam)^{|n|}``.
    """
    lam = np.asarray(lam, dtype=complex)
    if np.any(np.abs(lam) >= 1.0):
        raise OutsideDisc("Poisson transform needs |lambda| < 1")
    out = np.zeros(lam.shape, dtype=complex)
    for n, v in sym.coeffs.items():
        out = out + v * (lam**n if n >= 0 else np.conj(lam) ** (-n))
    return complex(out) if out.ndim == 0 else out


def support(x, atol: float = 0.0) -> tuple[int, int] | None:
    """First and last index with ``|x_k| > atol``; ``None`` for the zero vector."""
    idx = np.flatnonzero(np.abs(np.asarray(x)) > atol)
    if idx.size == 0:
        return None
    return int(idx[0]), int(idx[-1])


def commutator_defect(tri: TridiagonalSymbol, n: int, x) -> float:
    """``||(T*T - TT*)x - (|c|^2 - |a|^2)(I - SS*)x||`` on the dimension-``n`` section.

    ``(I - SS*)`` keeps only the constant coefficient.  The identity is
    exact on the section while ``x`` is supported in ``[0, n-3]``.
    """
    x = np.asarray(x, dtype=complex)
    if x.shape != (n,):
        raise DimensionMismatch(f"vector length {x.shape} does not match dim {n}")
    supp = support(x)
    if supp is not None and supp[1] > n - 3:
        raise SupportOverflow(f"support reaches index {supp[1]} > n-3 = {n - 3}")
    T = TruncatedToeplitz(to_laurent(tri), n)
    lhs = T.apply_adjoint(T.apply(x)) - T.apply(T.apply_adjoint(x))
    rhs = np.zeros_like(x)
    rhs[0] = (abs(tri.c) ** 2 - abs(tri.a) ** 2) * x[0]
    return float(np.linalg.norm(lhs - rhs))
