import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tightframe import LaurentPoly, PolyMatrix, lp_conj_reflect, lp_eval, lp_mul
from tightframe import fixtures as F

z1, z2 = LaurentPoly.var(2, 0), LaurentPoly.var(2, 1)
z = LaurentPoly.var(1, 0)


def polys(dim=2, max_terms=8, span=4):
    coeff = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
    exp = st.tuples(*[st.integers(-span, span)] * dim)
    return st.dictionaries(exp, coeff, max_size=max_terms).map(lambda d: LaurentPoly(dim, d))


# -- multiplication ------------------------------------------------------


def test_mul_three_direction_product():
    got = lp_mul(lp_mul((1 + z1) / 2, (1 + z2) / 2), (1 + z1 * z2) / 2)
    assert got.approx_eq(F.b111_mask(), 1e-15)


def test_mul_identity():
    p = F.b111_mask()
    assert p * LaurentPoly.const(2) == p


def test_mul_univariate_square():
    # convolution of (1, 1)/2 with itself
    got = lp_mul((1 + z) / 2, (1 + z) / 2)
    assert got.terms == {(0,): 0.25, (1,): 0.5, (2,): 0.25}


def test_mul_dimension_mismatch():
    with pytest.raises(ValueError):
        lp_mul(z, z1)


def test_pruning_relative_threshold():
    p = LaurentPoly(1, {(0,): 1.0, (1,): 5e-15, (2,): 2e-14})
    assert p.exponents() == [(0,), (2,)]
    big = LaurentPoly(1, {(0,): 1e6, (1,): 1e-9})
    assert big.exponents() == [(0,)]


# -- adjoint and evaluation ------------------------------------------------


def test_conj_reflect_monomial():
    assert lp_conj_reflect(z1) == LaurentPoly.monomial((-1, 0))


def test_conj_reflect_real_coefficients():
    assert lp_conj_reflect((1 + z) / 2) == (1 + LaurentPoly.monomial((-1,))) / 2


def test_square_modulus_nonnegative_on_grid():
    p = F.b111_mask()
    vals = (lp_conj_reflect(p) * p).grid_values(32)
    assert np.abs(vals.imag).max() <= 1e-14
    assert vals.real.min() >= -1e-15


def test_eval_box_spline():
    p = F.b111_mask()
    assert lp_eval(p, [1, 1]) == pytest.approx(1.0, abs=1e-15)
    assert lp_eval(p, [-1, 1]) == pytest.approx(0.0, abs=1e-15)
    # exact value i/2 from symbolic expansion
    assert lp_eval(p, [1j, 1]) == pytest.approx(0.5j, abs=1e-15)


def test_eval_zero_coordinate_negative_power():
    with pytest.raises(ZeroDivisionError):
        lp_eval(LaurentPoly.monomial((-1, 0)), [0, 1])
    assert lp_eval(z1 + 1, [0, 5]) == 1


def test_grid_values_match_pointwise():
    rng = np.random.default_rng(1)
    p = LaurentPoly(2, {(int(a), int(b)): rng.normal() for a, b in rng.integers(-5, 6, size=(10, 2))})
    n = 8
    vals = p.grid_values(n)
    for j, k in [(0, 0), (1, 3), (7, 2)]:
        pt = [np.exp(2j * np.pi * j / n), np.exp(2j * np.pi * k / n)]
        assert vals[j, k] == pytest.approx(p(pt), abs=1e-12)


# -- ordering and serialization --------------------------------------------


def test_term_order_last_coordinate_most_significant():
    p = LaurentPoly(2, {(1, 1): 1, (0, 1): 1, (1, 0): 1, (0, 0): 1})
    assert p.exponents() == [(0, 0), (1, 0), (0, 1), (1, 1)]


def test_json_format_and_round_trip():
    p = F.b111_mask() * (1 + 0.3j)
    data = json.loads(p.to_json())
    assert data["dim"] == 2
    assert [t["exp"] for t in data["terms"]][:3] == [[0, 0], [1, 0], [0, 1]]
    assert set(data["terms"][0]) == {"exp", "re", "im"}
    assert LaurentPoly.from_json(p.to_json()) == p


def test_from_dict_rejects_bad_lengths():
    with pytest.raises(ValueError):
        LaurentPoly(2, {(1,): 1.0})


# -- matrices ----------------------------------------------------------------


def test_polymatrix_products_and_adjoints():
    P = PolyMatrix.column([1 + z1, z2 - 2j])
    G = P.adjoint() @ P
    expected = (1 + z1).conj_reflect() * (1 + z1) + (z2 - 2j).conj_reflect() * (z2 - 2j)
    assert G.entry(0, 0).approx_eq(expected, 1e-14)
    S = P.star()
    assert S.entry(0, 1) == z2 + 2j
    A = np.array([[1, 2]])
    assert (A @ P).entry(0, 0).approx_eq(1 + z1 + 2 * z2 - 4j, 1e-14)


def test_diag_monomials():
    E = PolyMatrix.diag_monomials(2, (1, 2))
    assert E.shape == (3, 3)
    assert E.entry(2, 2) == z2 and E.entry(0, 0) == z1 and not E.entry(0, 1)


# -- properties -------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(polys())
def test_property_involution(p):
    assert lp_conj_reflect(lp_conj_reflect(p)) == p


@settings(max_examples=100, deadline=None)
@given(polys(), polys())
def test_property_adjoint_of_product(a, b):
    lhs = lp_conj_reflect(lp_mul(a, b))
    rhs = lp_mul(lp_conj_reflect(a), lp_conj_reflect(b))
    assert lhs.approx_eq(rhs, 1e-12 * max(1.0, lhs.max_abs()))


@settings(max_examples=100, deadline=None)
@given(polys(), st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi))
def test_property_adjoint_is_conjugate_on_torus(p, t1, t2):
    pt = [np.exp(1j * t1), np.exp(1j * t2)]
    assert abs(lp_eval(lp_conj_reflect(p), pt) - np.conj(lp_eval(p, pt))) <= 1e-12 * max(1.0, p.max_abs() * len(p))


@settings(max_examples=100, deadline=None)
@given(polys(max_terms=20), polys(max_terms=20))
def test_property_commutative(a, b):
    ab = a * b
    assert (ab - b * a).max_abs() <= 1e-15 * max(1.0, ab.max_abs())


def test_random_associative_commutative_50_terms():
    import gen

    rng = np.random.default_rng(2)
    for _ in range(200):
        a, b, c = (gen.random_poly(rng, 2, terms=50, span=4) for _ in range(3))
        left, right = (a * b) * c, a * (b * c)
        assert (left - right).max_abs() <= 1e-15 * left.max_abs()
        assert (a * b - b * a).max_abs() <= 1e-15 * (a * b).max_abs()


@settings(max_examples=200, deadline=None)
@given(polys(dim=3))
def test_property_json_round_trip(p):
    assert LaurentPoly.from_json(p.to_json()) == p
