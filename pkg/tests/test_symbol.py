import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import complex_st, polar
from toeplitz_dyn.errors import DegenerateEllipse, NotInInterior, PreconditionError
from toeplitz_dyn.symbol import (
    CircleRelation,
    Containment,
    LaurentSymbol,
    TridiagonalSymbol,
    annulus_param_solve,
    as_tridiagonal,
    circle_minimum,
    conjugate_symbol,
    ellipse_contains,
    ellipse_form,
    ellipse_intersects_unit_circle,
    ellipse_of,
    min_modulus,
    sup_norm,
    sup_norm_grid_error,
    symbol_from_json,
    to_laurent,
)


def test_zero_coefficients_are_trimmed():
    s = LaurentSymbol({-3: 0, -1: 2, 0: 0, 4: 0})
    assert dict(s.coeffs) == {-1: 2}
    assert (s.low, s.high) == (1, 0)
    assert s.is_antianalytic and not s.is_analytic


def test_band_of_mixed_symbol():
    s = LaurentSymbol({-2: 1, 1: 1j})
    assert (s.low, s.high) == (2, 1)
    assert s.lipschitz == pytest.approx(3.0)
    assert s.l1_norm == pytest.approx(2.0)


def test_eval_matches_direct_sum():
    s = LaurentSymbol({-1: 2, 0: 1j, 2: -0.5})
    th = np.linspace(0, 2 * np.pi, 17)
    z = np.exp(1j * th)
    assert np.allclose(s.eval(th), 2 / z + 1j - 0.5 * z**2)
    assert np.allclose(s.at(z), s.eval(th))


def test_json_roundtrip():
    s = LaurentSymbol({-2: 1 - 1j, 3: 0.25})
    assert LaurentSymbol.from_json(s.to_json()) == s
    t = TridiagonalSymbol(2, 1j, 0.5)
    assert TridiagonalSymbol.from_json(t.to_json()) == t
    assert symbol_from_json(t.to_json()) == t
    assert symbol_from_json(s.to_json()) == s
    with pytest.raises(ValueError):
        symbol_from_json({"x": 1})


def test_tridiagonal_views():
    t = TridiagonalSymbol(2, 0, 0.5)
    assert as_tridiagonal(to_laurent(t)) == t
    assert as_tridiagonal(LaurentSymbol({2: 1})) is None
    assert t(2j) == pytest.approx(0.0)


def test_conjugate_symbol_gives_adjoint_matrix():
    from toeplitz_dyn.operators import TruncatedToeplitz

    s = LaurentSymbol({-2: 1 + 2j, 0: 3, 1: -1j})
    A = TruncatedToeplitz(s, 9).dense()
    B = TruncatedToeplitz(conjugate_symbol(s), 9).dense()
    assert np.allclose(B, A.conj().T)


def test_sup_norm_examples():
    assert sup_norm(to_laurent(TridiagonalSymbol(2, 0, 0.5))) == pytest.approx(2.5, abs=1e-12)
    assert sup_norm(LaurentSymbol({-1: 0.9})) == pytest.approx(0.9)
    assert sup_norm(LaurentSymbol({})) == 0.0
    # |1 + z^3| peaks at 2
    assert sup_norm(LaurentSymbol({0: 1, 3: 1})) == pytest.approx(2.0, abs=1e-12)


@given(st.lists(complex_st(3.0), min_size=2, max_size=6), st.integers(-3, 0))
def test_sup_norm_dominates_dense_sampling(coefs, shift):
    s = LaurentSymbol({shift + k: v for k, v in enumerate(coefs)})
    dense = np.abs(s.eval(np.linspace(0, 2 * np.pi, 20001))).max()
    sn = sup_norm(s)
    assert sn >= dense - 1e-9
    assert sn <= s.l1_norm + 1e-9
    assert sn - dense <= sup_norm_grid_error(s, 20000) + 1e-9


def test_min_modulus_of_shifted_circle():
    th, m = min_modulus(LaurentSymbol({0: 3, 1: 1}))
    assert m == pytest.approx(2.0, abs=1e-12)
    assert abs(cmath.exp(1j * th) + 1) < 1e-5


def test_circle_minimum_flat_function():
    th, v = circle_minimum(lambda t: np.zeros_like(np.asarray(t, dtype=float)) + 1.0)
    assert v == 1.0


def test_ellipse_geometry():
    g = ellipse_of(TridiagonalSymbol(2, 1j, 0.5))
    assert g.semi_major == pytest.approx(2.5)
    assert g.semi_minor == pytest.approx(1.5)
    assert g.center == 1j
    assert {round(f.real, 12) for f in g.foci} == {2.0, -2.0}
    with pytest.raises(DegenerateEllipse):
        ellipse_of(TridiagonalSymbol(1, 0, 1))


@given(complex_st(4), complex_st(2), complex_st(4))
def test_ellipse_form_is_one_on_the_curve(a, b, c):
    if abs(abs(a) - abs(c)) < 1e-2 or min(abs(a), abs(c)) < 1e-2:
        return
    t = TridiagonalSymbol(a, b, c)
    w = t.eval(np.linspace(0, 2 * np.pi, 50))
    assert np.allclose(ellipse_form(t, w), 1.0, atol=1e-9)


def test_ellipse_contains():
    t = TridiagonalSymbol(2, 0, 0.5)
    assert ellipse_contains(t, 0) is Containment.INSIDE
    assert ellipse_contains(t, 2.5) is Containment.ON_CURVE
    assert ellipse_contains(t, 3) is Containment.OUTSIDE


def test_ellipse_circle_relation():
    r = ellipse_intersects_unit_circle(TridiagonalSymbol(2, 0, 0.5))
    assert r.relation is CircleRelation.INTERSECTS and r.margin == pytest.approx(0.16)
    r = ellipse_intersects_unit_circle(TridiagonalSymbol(2, 10, 0.5))
    assert r.relation is CircleRelation.DISJOINT
    assert r.margin == pytest.approx((10 - 1) ** 2 / 2.5**2)
    # Circle of radius 1 touching the ellipse {|x|<=2.5,|y|<=1.5} from outside at x = 2.5
    r = ellipse_intersects_unit_circle(TridiagonalSymbol(2, 3.5, 0.5))
    assert r.relation is CircleRelation.TANGENT


def test_annulus_param_examples():
    t = TridiagonalSymbol(2, 0, 0.5)
    r0, th = annulus_param_solve(t, 0)
    assert (r0, th) == (pytest.approx(2.0), pytest.approx(math.pi / 2))
    r0, th = annulus_param_solve(t, 2 / 1.5 + 0.75)
    assert r0 == pytest.approx(1.5) and min(th, 2 * math.pi - th) < 1e-9
    with pytest.raises(NotInInterior):
        annulus_param_solve(t, 3)
    with pytest.raises(PreconditionError):
        annulus_param_solve(TridiagonalSymbol(0.5, 0, 2), 0)


def test_annulus_param_against_quadratic_formula():
    rng = np.random.default_rng(7)
    for _ in range(200):
        a = polar(rng, 0.5, 5)
        c = polar(rng, 0.1, 0.95) * abs(a)
        b = polar(rng, 0, 3)
        t = TridiagonalSymbol(a, b, c)
        z = rng.uniform(1.01, np.sqrt(abs(a / c)) * 0.999) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        w = t(z)
        r0, th = annulus_param_solve(t, w)
        # roots of c z^2 + (b - w) z + a = 0; the one with modulus <= sqrt|a/c|
        roots = np.roots([c, b - w, a])
        want = roots[np.argmin(np.abs(roots))]
        got = r0 * np.exp(1j * th)
        assert abs(got - want) < 1e-8 * max(1, abs(want))
        assert 1 < r0 <= np.sqrt(abs(a / c)) * (1 + 1e-12)
