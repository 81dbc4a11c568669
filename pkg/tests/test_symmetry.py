import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gen
from tightframe import (
    LaurentPoly,
    PolyphaseVector,
    PreconditionError,
    dyadic,
    grid_min,
    polyphase_merge,
    polyphase_split,
    qmf_check,
    setup_dilation,
    shift_action,
    subqmf_defect,
    sum_rules_check,
)
from tightframe import fixtures as F
from tightframe.symmetry import defect_xi, fp_vector, polyphase_gram_sum, shift_sum, to_xi

z = LaurentPoly.var(1, 0)
z1, z2 = LaurentPoly.var(2, 0), LaurentPoly.var(2, 1)
QUINCUNX = [[1, 1], [1, -1]]


# -- setup -------------------------------------------------------------------


def test_setup_dyadic_2d():
    s = dyadic(2)
    assert s.m == 4
    assert s.cosets == ((0, 0), (1, 0), (0, 1), (1, 1))
    assert s.dual_reps == ((0, 0), (1, 0), (0, 1), (1, 1))


def test_setup_dyadic_1d():
    s = dyadic(1)
    assert s.m == 2 and s.cosets == ((0,), (1,))


def test_setup_quincunx():
    s = setup_dilation(QUINCUNX)
    assert s.m == 2 and s.cosets == ((0, 0), (1, 0))


@pytest.mark.parametrize("M", [[[1, 0], [0, 1]], [[2, 4], [1, 2]], [[-1]]])
def test_setup_rejects_trivial_or_singular(M):
    with pytest.raises(PreconditionError):
        setup_dilation(M)


@pytest.mark.parametrize("M", [[[3]], [[2, 1], [0, 2]], [[1, -1], [1, 1]], [[0, 2], [1, 0]], [[2, 0, 0], [0, 2, 0], [0, 0, 2]]])
def test_setup_cosets_distinct_and_complete(M):
    s = setup_dilation(M)
    assert s.cosets[0] == (0,) * s.dim and s.dual_reps[0] == (0,) * s.dim
    assert len({s._lat.key(a) for a in s.cosets}) == s.m
    assert len({s._dual.key(k) for k in s.dual_reps}) == s.m
    assert s.to_dict()["M"] == np.asarray(M).tolist()


# -- shift action ------------------------------------------------------------


def test_shift_action_pi_pi_on_box_spline():
    s = dyadic(2)
    idx = s.dual_reps.index((1, 1))
    got = shift_action(F.b111_mask(), idx, s)
    for alpha, c in F.b111_mask().items():
        assert got.coeff(alpha) == c * (-1) ** (alpha[0] + alpha[1])


def test_shift_action_identity():
    p = F.b111_mask()
    assert shift_action(p, 0, dyadic(2)) is p


def test_shift_action_univariate_sign_flip():
    assert shift_action((1 + z) / 2, 1, dyadic(1)) == (1 - z) / 2


def test_shift_action_out_of_range():
    with pytest.raises(PreconditionError):
        shift_action(z, 2, dyadic(1))


def test_characters_exact_for_dyadic():
    s = dyadic(2)
    vals = {s.character(i, a) for i in range(4) for a in [(0, 0), (1, 0), (0, 1), (1, 1), (3, -5)]}
    assert vals <= {1 + 0j, -1 + 0j}


# -- polyphase ---------------------------------------------------------------


def test_polyphase_box_spline():
    fp = fp_vector(F.b111_mask(), dyadic(2))
    assert (fp - F.b111_fp()).max_abs() == 0.0


def test_polyphase_constant():
    v = polyphase_split(LaurentPoly.const(2), dyadic(2))
    assert v.components[0] == LaurentPoly.const(2)
    assert all(not c for c in v.components[1:])


def test_polyphase_univariate_square():
    v = polyphase_split(((1 + z) / 2) ** 2, dyadic(1))
    assert v.components[0] == (1 + z) / 4
    assert v.components[1] == LaurentPoly.const(1, 0.5)


def test_merge_examples():
    s2 = dyadic(2)
    one = PolyphaseVector(s2, (LaurentPoly.const(2),) + (LaurentPoly.zero(2),) * 3)
    assert polyphase_merge(one) == LaurentPoly.const(2)
    v = PolyphaseVector(dyadic(1), ((1 + z) / 4, LaurentPoly.const(1, 0.5)))
    assert polyphase_merge(v) == ((1 + z) / 2) ** 2
    p = F.b111_mask()
    assert polyphase_merge(polyphase_split(p, s2)) == p


def test_merge_rejects_scaled():
    with pytest.raises(PreconditionError):
        polyphase_merge(polyphase_split(z, dyadic(1), scale=True))


def test_split_dimension_mismatch():
    with pytest.raises(PreconditionError):
        polyphase_split(z, dyadic(2))


# -- sum rules, defect, QMF -----------------------------------------------------


def test_sum_rules():
    assert sum_rules_check(F.b111_mask(), dyadic(2)).passed
    assert not sum_rules_check(LaurentPoly.const(2), dyadic(2)).passed
    assert sum_rules_check(((1 + z) / 2) ** 2, dyadic(1)).passed
    rep = sum_rules_check(LaurentPoly.const(1), dyadic(1))
    assert rep.residuals == [0.0, 1.0]


def test_defect_box_spline():
    f = subqmf_defect(F.b111_mask(), dyadic(2))
    # 16 f = 6 - (xi1 + 1/xi1) - (xi2 + 1/xi2) - (xi1 xi2 + 1/(xi1 xi2)), xi = z^2
    expected = LaurentPoly(
        2, {(0, 0): 6, (2, 0): -1, (-2, 0): -1, (0, 2): -1, (0, -2): -1, (2, 2): -1, (-2, -2): -1}
    ) / 16
    assert f.approx_eq(expected, 1e-15)
    assert f.is_hermitian(1e-15)
    assert all(k[0] % 2 == 0 and k[1] % 2 == 0 for k in f.exponents())


def test_defect_haar_zero():
    assert not subqmf_defect((1 + z) / 2, dyadic(1))


def test_defect_univariate_square():
    f = subqmf_defect(((1 + z) / 2) ** 2, dyadic(1))
    assert f.approx_eq(LaurentPoly(1, {(0,): 2, (2,): -1, (-2,): -1}) / 8, 1e-15)
    assert defect_xi(((1 + z) / 2) ** 2, dyadic(1)).approx_eq(LaurentPoly(1, {(0,): 2, (1,): -1, (-1,): -1}) / 8, 1e-15)


def test_qmf_check():
    assert qmf_check((1 + z) / 2, dyadic(1))
    assert not qmf_check(F.b111_mask(), dyadic(2))
    assert qmf_check((1 + z1) * (1 + z2) / 4, dyadic(2))


def test_grid_min():
    assert grid_min(subqmf_defect(F.b111_mask(), dyadic(2))) >= -1e-12
    assert grid_min(LaurentPoly.zero(2)) == 0.0
    assert grid_min(subqmf_defect(F.fixture_drury(), dyadic(3)), 32) >= -1e-9


def test_to_xi_rejects_non_invariant():
    with pytest.raises(PreconditionError):
        to_xi(z, dyadic(1))


# -- properties ----------------------------------------------------------------

DILATIONS = [[[2]], [[3]], [[2, 0], [0, 2]], QUINCUNX, [[2, 1], [0, 2]], [[1, -2], [2, 1]]]


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(DILATIONS), st.integers(0, 2**32 - 1))
def test_property_split_merge_exact(M, seed):
    s = setup_dilation(M)
    p = gen.random_poly(np.random.default_rng(seed), s.dim, terms=10)
    assert polyphase_merge(polyphase_split(p, s)) == p


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(DILATIONS), st.integers(0, 2**32 - 1))
def test_property_shift_sum_equals_polyphase_sum(M, seed):
    s = setup_dilation(M)
    p = gen.random_poly(np.random.default_rng(seed), s.dim, terms=8)
    direct = shift_sum(p, s)
    via = polyphase_gram_sum(p, s).map_exponents(s.M)
    assert (direct - via).max_abs() <= 1e-12 * max(1.0, direct.max_abs())


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(DILATIONS), st.integers(0, 2**32 - 1))
def test_property_defect_support_on_lattice(M, seed):
    s = setup_dilation(M)
    p = gen.random_poly(np.random.default_rng(seed), s.dim, terms=6) * 0.1
    f = subqmf_defect(p, s)
    for k in f.exponents():
        s.to_lattice(k)  # raises if k is not in M Z^d
    assert f.is_hermitian(1e-12)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(DILATIONS), st.integers(0, 2**32 - 1))
def test_property_shift_average_is_invariant_part(M, seed):
    s = setup_dilation(M)
    p = gen.random_poly(np.random.default_rng(seed), s.dim, terms=10)
    total = LaurentPoly.zero(s.dim)
    for i in range(s.m):
        total = total + shift_action(p, i, s)
    comps = polyphase_split(p, s).components
    invariant = polyphase_merge(PolyphaseVector(s, (comps[0],) + tuple(LaurentPoly.zero(s.dim) for _ in comps[1:])))
    assert (total - invariant * s.m).max_abs() <= 1e-12 * max(1.0, p.max_abs())


def test_property_product_closure_random():
    rng = np.random.default_rng(5)
    s = dyadic(2)
    for _ in range(30):
        p1, p2 = gen.random_nonneg_mask(rng, s), gen.random_nonneg_mask(rng, s)
        assert grid_min(subqmf_defect(p1, s)) >= -1e-9
        assert grid_min(subqmf_defect(p2, s)) >= -1e-9
        assert grid_min(subqmf_defect(p1 * p2, s)) >= -1e-9
