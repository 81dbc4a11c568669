import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gen
from tightframe import LaurentPoly, PreconditionError, fejer_riesz, univariate_tight_frame
from tightframe.synth import total_degree
from tightframe.symmetry import fp_vector, setup_dilation

z = LaurentPoly.var(1, 0)
S2 = np.sqrt(2)


def _up_to_phase(h, ref, tol):
    c = ref.coeff((0,)) if ref.coeff((0,)) else ref.coeff(ref.exponents()[0])
    k = (0,) if ref.coeff((0,)) else ref.exponents()[0]
    phase = h.coeff(k) / c
    return abs(abs(phase) - 1) <= tol and (h - ref * phase).max_abs() <= tol


# -- Fejer-Riesz ------------------------------------------------------------------


def test_fejer_riesz_first_difference():
    f = LaurentPoly(1, {(0,): 2, (1,): -1, (-1,): -1}) / 8
    sf = fejer_riesz(f)
    assert _up_to_phase(sf.factor, (1 - z) / (2 * S2), 1e-8)
    assert sf.residual <= 1e-12


def test_fejer_riesz_constant():
    sf = fejer_riesz(LaurentPoly.const(1))
    assert sf.factor == LaurentPoly.const(1)
    assert sf.residual == 0.0


def test_fejer_riesz_double_root_on_circle():
    sf = fejer_riesz(LaurentPoly(1, {(0,): 2, (1,): 1, (-1,): 1}))
    assert _up_to_phase(sf.factor, 1 + z, 1e-7)
    assert sf.residual <= 1e-12


def test_fejer_riesz_minimum_phase_positive_leading_coefficient():
    g = 3 + z  # root at -3 lies outside; the minimum-phase factor is 1 + 3z
    sf = fejer_riesz(g.conj_reflect() * g)
    h = sf.factor
    assert np.all(np.abs(sf.roots) <= 1 + 1e-7)
    assert (h - (1 + 3 * z)).max_abs() <= 1e-12


def test_fejer_riesz_rejects_negative():
    with pytest.raises(PreconditionError, match="negative"):
        fejer_riesz(LaurentPoly(1, {(0,): 1, (1,): 1, (-1,): 1}))


def test_fejer_riesz_circle_roots_must_pair():
    from tightframe.univariate import _pair_circle_roots

    # 2 - 2 sin(theta) has a double root at theta = pi/2
    assert fejer_riesz(LaurentPoly(1, {(0,): 2, (1,): 1j, (-1,): -1j})).residual <= 1e-10
    with pytest.raises(PreconditionError, match="odd multiplicity"):
        _pair_circle_roots(np.array([1.0 + 0j]))
    with pytest.raises(PreconditionError, match="unpaired"):
        _pair_circle_roots(np.array([1.0 + 0j, -1.0 + 0j]))


def test_fejer_riesz_rejects_nonhermitian_and_multivariate():
    with pytest.raises(PreconditionError, match="hermitian"):
        fejer_riesz(1 + z)
    with pytest.raises(PreconditionError):
        fejer_riesz(LaurentPoly.const(2))


def test_fejer_riesz_zero():
    assert not fejer_riesz(LaurentPoly.zero(1)).factor


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 20), st.integers(0, 2**32 - 1))
def test_property_fejer_riesz_random_squares(degree, seed):
    g = gen.random_univariate(np.random.default_rng(seed), degree)
    f = g.conj_reflect() * g
    sf = fejer_riesz(f)
    assert (sf.factor.conj_reflect() * sf.factor - f).max_abs() <= 1e-8
    assert np.all(np.abs(sf.roots) <= 1 + 1e-7)
    assert min(sf.factor.exponents(), default=(0,))[0] >= 0


# -- univariate frames ---------------------------------------------------------------


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_univariate_bspline_frames(k):
    p = ((1 + z) / 2) ** k
    fs = univariate_tight_frame(p, 2)
    assert fs.u_matrix.shape == (2, 2)
    assert fs.report.passed and fs.report.residual <= 1e-10
    D = fs.realization.D
    deg = total_degree(fp_vector(p, setup_dilation([[2]])))
    if D.shape[0]:
        assert np.abs(np.linalg.matrix_power(D, max(deg, 1))).max() <= 1e-12
        assert D.shape[0] <= deg


def test_univariate_haar_has_one_effective_generator():
    fs = univariate_tight_frame((1 + z) / 2, 2)
    live = [a for a in fs.masks if a.max_abs() > 1e-12]
    assert len(live) == 1
    a = live[0]
    phase = a.coeff((0,)) / abs(a.coeff((0,)))
    assert (a / phase).approx_eq((1 - z) / 2, 1e-12)


def test_univariate_square_degrees():
    fs = univariate_tight_frame(((1 + z) / 2) ** 2, 2)
    for a in fs.masks:
        lo, hi = a.degree_box()
        assert hi[0] - lo[0] <= 2


def test_univariate_three_channel():
    p = (1 + z + z**2) / 3
    fs = univariate_tight_frame(p * p, 3)
    assert fs.u_matrix.shape == (3, 3) and fs.report.passed


def test_univariate_rejects_bad_masks():
    with pytest.raises(PreconditionError, match="sum rules"):
        univariate_tight_frame(LaurentPoly.const(1), 2)
    with pytest.raises(PreconditionError):
        univariate_tight_frame(LaurentPoly.var(2, 0), 2)
