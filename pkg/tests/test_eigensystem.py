import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import polar
from toeplitz_dyn.eigensystem import (
    EigenPair,
    analytic_conjugate,
    antianalytic_eigen,
    decay_rate,
    inverse_eigen_param,
    residual,
    tridiagonal_eigenvector,
)
from toeplitz_dyn.errors import DimensionMismatch, NotInInterior, OutOfAnnulus, OutsideDisc, PreconditionError
from toeplitz_dyn.operators import TruncatedToeplitz
from toeplitz_dyn.symbol import LaurentSymbol, TridiagonalSymbol, to_laurent

TRI = TridiagonalSymbol(2, 0, 0.5)


def test_fixture_is_taylor_series_of_inverse_quadratic():
    p = tridiagonal_eigenvector(TRI, 2j, 16)
    want = np.zeros(16)
    want[0::2] = [(-1) ** k / 4 ** (k + 1) for k in range(8)]
    assert p.eigenvalue == 0
    assert np.allclose(p.vector, want, atol=1e-15)
    assert p.meta["form"] == "partial_fractions"


def test_eigenvalue_of_real_parameter():
    p = tridiagonal_eigenvector(TRI, 1.5, 8)
    assert p.eigenvalue == pytest.approx(2 / 1.5 + 0.75)
    with pytest.raises(OutOfAnnulus):
        tridiagonal_eigenvector(TRI, 4.5, 8)
    with pytest.raises(OutOfAnnulus):
        tridiagonal_eigenvector(TRI, 0.9, 8)
    with pytest.raises(PreconditionError):
        tridiagonal_eigenvector(TridiagonalSymbol(1, 0, 1), 1.0, 8)


def test_residual_against_dense_section():
    p = tridiagonal_eigenvector(TRI, 1.2 + 0.7j, 16)
    T = TruncatedToeplitz(to_laurent(TRI), 16)
    r = (T.dense() - p.eigenvalue * np.eye(16)) @ p.vector
    assert residual(T, p) == pytest.approx(np.linalg.norm(r[:-1]) / np.linalg.norm(p.vector), abs=1e-15)
    assert p.residual is not None and p.residual < 1e-14
    with pytest.raises(DimensionMismatch):
        residual(TruncatedToeplitz(to_laurent(TRI), 17), p)


def test_perturbed_eigenvalue_has_large_residual():
    p = tridiagonal_eigenvector(TRI, 2j, 16)
    bad = EigenPair(p.eigenvalue + 0.1, p.vector)
    assert residual(TruncatedToeplitz(to_laurent(TRI), 16), bad) >= 0.05


def test_antianalytic_pair():
    s = LaurentSymbol({-1: 2})
    p = antianalytic_eigen(s, 0.3, 64)
    assert p.eigenvalue == pytest.approx(0.6)
    assert np.allclose(p.vector[:3], [1, 0.3, 0.09])
    assert residual(TruncatedToeplitz(s, 64), p) < 1e-12
    p0 = antianalytic_eigen(s, 0, 5)
    assert p0.eigenvalue == 0 and np.array_equal(p0.vector, np.eye(5)[0])
    with pytest.raises(OutsideDisc):
        antianalytic_eigen(s, 1.2, 5)
    with pytest.raises(PreconditionError):
        analytic_conjugate(LaurentSymbol({1: 1}))


def test_antianalytic_complex_coefficients():
    s = LaurentSymbol({-2: 1 - 1j, -1: 0.5j, 0: 2})
    lam = 0.2 - 0.5j
    p = antianalytic_eigen(s, lam, 80)
    phi = analytic_conjugate(s)
    assert p.eigenvalue == pytest.approx(np.conj(phi.at(lam)))
    assert residual(TruncatedToeplitz(s, 80), p) < 1e-12


def test_double_root_and_close_poles():
    # z0^2 = a/c exactly: the two poles merge at z0
    z0 = 2.0 * np.exp(0.3j)
    tri = TridiagonalSymbol(2 * np.exp(0.6j), 0.1, 0.5)
    p = tridiagonal_eigenvector(tri, z0, 64)
    assert p.meta["form"] == "double_root"
    T = TruncatedToeplitz(to_laurent(tri), 64)
    assert residual(T, p) < 1e-13
    q = tridiagonal_eigenvector(tri, z0 * (1 + 1e-6), 64)
    assert q.meta["form"] == "close_poles"
    assert residual(T, q) < 1e-12
    # the confluent limit agrees with the nearby partial-fraction vector up to scale
    u, v = p.vector / np.linalg.norm(p.vector), q.vector / np.linalg.norm(q.vector)
    assert abs(abs(np.vdot(u, v)) - 1) < 1e-9


@given(st.integers(0, 10_000))
def test_preimage_symmetry_and_recurrence(seed):
    rng = np.random.default_rng(seed)
    a = polar(rng, 0.2, 5)
    c = polar(rng, 0.05, 0.95) * abs(a)
    if not abs(a) > abs(c) > 0:
        return
    b = polar(rng, 0, 3)
    tri = TridiagonalSymbol(a, b, c)
    z0 = rng.uniform(1.001, abs(a / c) * 0.999) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    mu = tri(z0)
    assert abs(mu - tri(a / (c * z0))) <= 1e-12 * (abs(a) + abs(b) + abs(c)) * max(abs(z0), abs(a / (c * z0)))
    p = tridiagonal_eigenvector(tri, z0, 128)
    v = p.vector
    terms = np.abs(np.stack([a * v[2:], (b - mu) * v[1:-1], c * v[:-2]]))
    rec = a * v[2:] + (b - mu) * v[1:-1] + c * v[:-2]
    assert np.all(np.abs(rec) <= 1e-12 * terms.max(axis=0) + 1e-300)


def test_decay_rate_fit():
    tri = TridiagonalSymbol(2, 0.3, 0.5)
    for z0 in (1.5, 1.2j, 3.0):
        v = np.abs(tridiagonal_eigenvector(tri, z0, 256).vector)
        k = np.arange(40, 200)
        slope = np.polyfit(k, np.log(v[k]), 1)[0]
        assert slope == pytest.approx(np.log(decay_rate(tri, z0)), rel=0.05)


def test_inverse_parameter():
    assert inverse_eigen_param(TRI, 0) == pytest.approx(2j)
    assert inverse_eigen_param(TRI, 2 / 1.5 + 0.75) == pytest.approx(1.5)
    with pytest.raises(NotInInterior):
        inverse_eigen_param(TRI, 3)


def test_eigenvalue_in_disc_iff_parameter_in_omega1():
    rng = np.random.default_rng(11)
    for _ in range(100):
        z0 = rng.uniform(1.01, 3.99) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        p = tridiagonal_eigenvector(TRI, z0, 8)
        assert (abs(p.eigenvalue) < 1) == (abs(TRI(z0)) < 1)


def test_json_shape():
    js = tridiagonal_eigenvector(TRI, 2j, 32).to_json(4)
    assert js["dim"] == 32 and len(js["coefficients"]) == 4
    assert js["meta"]["z0"] == [0.0, 2.0]
