"""Closed-form eigenvectors and their finite-section residuals.

Two families are covered.  For an anti-analytic symbol ``F = conj(phi)`` the
kernel ``k_lam`` is an eigenvector with eigenvalue ``conj(phi(lam))``.  For
``F(z) = a/z + b + c z`` with ``|a| > |c| > 0`` and ``1 < |z0| < |a/c|`` the
kernel of ``T_F - F(z0)`` is spanned by ``1/((z - z0)(z - a/(c z0)))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import DimensionMismatch, NotInInterior, OutOfAnnulus, PreconditionError
from .operators import TruncatedToeplitz, kernel_vector
from .symbol import (
    Containment,
    LaurentSymbol,
    TridiagonalSymbol,
    annulus_param_solve,
    ellipse_contains,
)

DOUBLE_ROOT_RTOL = 1e-10
# Below this separation of the two poles the partial-fraction constant loses digits.
_CLOSE_POLES = 1e-3


@dataclass
class EigenPair:
    eigenvalue: complex
    vector: np.ndarray
    meta: dict[str, Any] = field(default_factory=dict)
    residual: float | None = None

    def to_json(self, k: int = 16) -> dict[str, Any]:
        meta = {
            key: ([val.real, val.imag] if isinstance(val, complex) else val) for key, val in self.meta.items()
        }
        head = self.vector[:k]
        return {
            "eigenvalue": [self.eigenvalue.real, self.eigenvalue.imag],
            "meta": meta,
            "dim": int(self.vector.size),
            "coefficients": [[float(v.real), float(v.imag)] for v in head],
            "residual": self.residual,
        }


def analytic_conjugate(sym: LaurentSymbol) -> LaurentSymbol:
    """``phi`` with ``F = conj(phi)`` on the circle, for anti-analytic ``F``."""
    if not sym.is_antianalytic:
        raise PreconditionError("symbol has positive Fourier modes")
    return LaurentSymbol({-n: v.conjugate() for n, v in sym.coeffs.items()})


def antianalytic_eigen(sym: LaurentSymbol, lam: complex, n: int) -> EigenPair:
    """``T_F k_lam = conj(phi(lam)) k_lam``."""
    lam = complex(lam)
    phi = analytic_conjugate(sym)
    vec = kernel_vector(lam, n)
    mu = complex(phi.at(lam)).conjugate()
    return EigenPair(mu, vec, {"family": "antianalytic", "lambda": lam})


def _pole_coefficients(p: complex, q: complex, n: int) -> np.ndarray:
    """Taylor coefficients of ``p q / ((1 - p z)(1 - q z))`` by ``h_k = q h_{k-1} + p^k``."""
    out = np.empty(n, dtype=complex)
    h = 0j
    pk = 1 + 0j
    for k in range(n):
        h = q * h + pk
        out[k] = h
        pk *= p
    return p * q * out


def tridiagonal_eigenvector(tri: TridiagonalSymbol, z0: complex, n: int) -> EigenPair:
    """Eigenvector ``1/((z - z0)(z - a/(c z0)))`` truncated to ``n`` coefficients.

    Coefficients ``C (-z0^{-(k+1)} + (c z0/a)^{k+1})`` with
    ``C = 1/(z0 - a/(c z0))``; when ``z0^2`` is within ``1e-10 |a/c|`` of
    ``a/c`` the poles merge and ``(k+1) z0^{-(k+2)}`` is used.
    """
    z0 = complex(z0)
    a, b, c = tri.a, tri.b, tri.c
    if not (abs(a) > abs(c) > 0):
        raise PreconditionError("eigenvector family needs |a| > |c| > 0")
    ratio = abs(a / c)
    if not (1.0 < abs(z0) < ratio):
        raise OutOfAnnulus(f"|z0| = {abs(z0)} is outside (1, {ratio})")
    mu = a / z0 + b + c * z0
    w = a / (c * z0)
    p = 1.0 / z0
    q = c * z0 / a
    k = np.arange(n)
    double = abs(z0 * z0 - a / c) <= DOUBLE_ROOT_RTOL * ratio
    if double:
        vec = (k + 1) * np.power(p, k + 2)
        form = "double_root"
    elif abs(p - q) <= _CLOSE_POLES * max(abs(p), abs(q)):
        vec = _pole_coefficients(p, q, n)
        form = "close_poles"
    else:
        C = 1.0 / (z0 - w)
        pp = np.cumprod(np.full(n, p))
        qq = np.cumprod(np.full(n, q))
        vec = C * (qq - pp)
        form = "partial_fractions"
    return EigenPair(complex(mu), vec, {"family": "tridiagonal", "z0": z0, "form": form})


def residual(T: TruncatedToeplitz, pair: EigenPair) -> float:
    """Interior residual ``||((T - mu) v)[:n - M]|| / ||v||``.

    The last ``M`` rows (``M`` super-diagonals) miss coefficients beyond the
    section, so they are excluded.
    """
    v = np.asarray(pair.vector, dtype=complex)
    if v.shape != (T.dim,):
        raise DimensionMismatch(f"vector length {v.shape} does not match dim {T.dim}")
    M, _ = T.bandwidth
    r = T.apply(v) - pair.eigenvalue * v
    keep = max(T.dim - M, 0)
    nv = np.linalg.norm(v)
    if nv == 0.0:
        raise ValueError("zero eigenvector")
    out = float(np.linalg.norm(r[:keep]) / nv)
    pair.residual = out
    return out


def inverse_eigen_param(tri: TridiagonalSymbol, mu: complex, tol: float = 1e-9) -> complex:
    """``z0`` with ``F(z0) = mu`` and ``1 < |z0| <= sqrt|a/c|``."""
    if not (abs(tri.a) > abs(tri.c) > 0):
        raise PreconditionError("needs |a| > |c| > 0")
    if ellipse_contains(tri, mu, tol) is not Containment.INSIDE:
        raise NotInInterior(f"{mu!r} is not inside the ellipse")
    r0, theta = annulus_param_solve(tri, mu, tol)
    return complex(r0 * math.cos(theta), r0 * math.sin(theta))


def decay_rate(tri: TridiagonalSymbol, z0: complex) -> float:
    """Geometric rate ``max(1/|z0|, |c z0 / a|)`` of the eigenvector coefficients."""
    return max(1.0 / abs(z0), abs(tri.c * z0 / tri.a))
