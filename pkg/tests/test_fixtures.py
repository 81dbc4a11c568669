import numpy as np

from tightframe import LaurentPoly, dyadic, polyphase_merge, polyphase_split
from tightframe import fixtures as F
from tightframe.laurent import PolyMatrix
from tightframe.symmetry import fp_vector

z1, z2 = LaurentPoly.var(2, 0), LaurentPoly.var(2, 1)


def test_b111_mask_is_product_of_direction_factors():
    assert F.b111_mask() == (1 + z1) * (1 + z2) * (1 + z1 * z2) / 8


def test_b111_fixtures_are_consistent():
    A0 = F.b111_A0()
    H0 = F.b111_H0()
    assert np.abs(H0.conj().T @ H0 - A0).max() <= 1e-15
    assert np.abs(A0 - A0.T).max() == 0.0
    # the displayed inner function is isometric on the torus: ||f_p||^2 + ||q0||^2 = 1
    inner = F.b111_inner()
    assert ((inner.adjoint() @ inner).entry(0, 0) - 1).max_abs() <= 1e-15
    C = F.b111_colligation()
    assert np.abs(C.conj().T @ C - np.eye(4)).max() <= 1e-15


def test_b111a_fixtures_are_consistent():
    inner = PolyMatrix.vstack([F.b111_fp(), F.b111a_q0()])
    assert ((inner.adjoint() @ inner).entry(0, 0) - 1).max_abs() <= 1e-15
    C = F.b111a_colligation()
    assert np.abs(C.conj().T @ C - np.eye(4)).max() <= 1e-15
    assert F.b111a_completion_rows().shape == (5, 7)
    assert len(F.b111a_framelets()) == 5


def test_b111_polyphase_round_trip():
    p = F.b111_mask()
    assert polyphase_merge(polyphase_split(p, F.b111_setup())) == p


# -- three-variable complex mask -----------------------------------------------------


def test_drury_q_normalized():
    assert abs(F.drury_q()(np.ones(3)) - 1) <= 1e-14
    p = F.fixture_drury()
    assert abs(p(np.ones(3)) - 1) <= 1e-14


def test_drury_g_sup_norm():
    gmax = float(np.abs(F.drury_g().grid_values(64)).max())
    assert abs(gmax - 3 * np.sqrt(3)) <= 1e-2
    # grids divisible by 3 contain a maximizer
    assert abs(np.abs(F.drury_g().grid_values(48)).max() - 3 * np.sqrt(3)) <= 1e-12


def test_drury_fp_is_constant_direction():
    s = dyadic(3)
    fp = fp_vector(F.fixture_drury(), s)
    q = F.drury_q()
    for chi in range(8):
        assert (fp.entry(chi, 0) - q / np.sqrt(8)).max_abs() <= 1e-15
    rng = np.random.default_rng(0)
    for _ in range(20):
        xi = np.exp(2j * np.pi * rng.random(3))
        assert abs(np.linalg.norm(fp(xi)) - abs(q(xi))) <= 1e-13


def test_drury_mask_has_complex_coefficients():
    assert any(abs(c.imag) > 1e-3 for _, c in F.fixture_drury().items())
