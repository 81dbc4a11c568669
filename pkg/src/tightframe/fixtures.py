"""Worked example data: the three-directional box spline and a three-variable mask
whose defect has no polydisk Gram form.

Exponent tuples follow the package ordering, so ``(a, b)`` means ``z1^a z2^b``.
"""

from __future__ import annotations

import numpy as np

from .laurent import LaurentPoly, PolyMatrix
from .symmetry import dyadic

S2, S3, S6 = np.sqrt(2.0), np.sqrt(3.0), np.sqrt(6.0)


def _poly(dim: int, terms: dict, scale: float = 1.0) -> LaurentPoly:
    return LaurentPoly(dim, {k: v * scale for k, v in terms.items()})


# ---------------------------------------------------------------------------
# three-directional box spline, M = 2I


def b111_mask() -> LaurentPoly:
    """``(1 + z1)(1 + z2)(1 + z1 z2) / 8``."""
    return _poly(2, {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 2, (1, 2): 1, (2, 1): 1, (2, 2): 1}, 1 / 8)


def b111_setup():
    return dyadic(2)


def b111_fp() -> PolyMatrix:
    x = {(0, 0): 1}
    return PolyMatrix.column(
        [
            _poly(2, {**x, (1, 1): 1}, 0.25),
            _poly(2, {**x, (0, 1): 1}, 0.25),
            _poly(2, {**x, (1, 0): 1}, 0.25),
            _poly(2, {(0, 0): 2}, 0.25),
        ]
    )


def b111_A0() -> np.ndarray:
    return np.array([[3, -1, -1, -1], [-1, 1, 0, 0], [-1, 0, 1, 0], [-1, 0, 0, 1]]) / 16


def b111_A1() -> np.ndarray:
    return np.array([[0.25]])


def b111_A2() -> np.ndarray:
    return np.eye(2) / 8


def b111_H0() -> np.ndarray:
    """A rank-3 factor of ``A0`` with rational entries."""
    return np.array([[1, -1, 0, 0], [1, 0, -1, 0], [1, 0, 0, -1]]) / 4


def b111_q0() -> PolyMatrix:
    """``H0 v(xi) = (1 - xi1, 1 - xi2, 1 - xi1 xi2) / 4``."""
    return PolyMatrix.column(
        [
            _poly(2, {(0, 0): 1, (1, 0): -1}, 0.25),
            _poly(2, {(0, 0): 1, (0, 1): -1}, 0.25),
            _poly(2, {(0, 0): 1, (1, 1): -1}, 0.25),
        ]
    )


def b111_inner() -> PolyMatrix:
    """The 7-row inner function ``(f_p, q0)``."""
    return PolyMatrix.vstack([b111_fp(), b111_q0()])


def b111_colligation() -> np.ndarray:
    """``[[A, B], [C, D]]`` of ``(f_p, q0)`` with state order ``xi1; xi2: 1, xi1``."""
    r = 2 * S2
    return (
        np.array(
            [
                [1, 0, 0, r],
                [1, 0, r, 0],
                [1, 2, 0, 0],
                [2, 0, 0, 0],
                [1, -2, 0, 0],
                [1, 0, -r, 0],
                [1, 0, 0, -r],
                [2, 0, 0, 0],
                [S2, 0, 0, 0],
                [0, r, 0, 0],
            ]
        )
        / 4
    )


# ---------------------------------------------------------------------------
# shorter extension of the same mask: five framelets


def b111a_q0() -> PolyMatrix:
    """``(sqrt6/2 (1 - xi1), sqrt2/2 (2 - xi2 - xi1 xi2)) / 4``."""
    return PolyMatrix.column(
        [
            _poly(2, {(0, 0): 1, (1, 0): -1}, S6 / 8),
            _poly(2, {(0, 0): 2, (0, 1): -1, (1, 1): -1}, S2 / 8),
        ]
    )


def b111a_A1() -> np.ndarray:
    return np.array([[0.25]])


def b111a_A2() -> np.ndarray:
    return np.array([[3, 1], [1, 3]]) / 32


def b111a_colligation() -> np.ndarray:
    r = 4 * S2
    return (
        np.array(
            [
                [2, 0, 4, -r],
                [2, 0, 4, r],
                [2, 4, 0, 0],
                [4, 0, 0, 0],
                [S6, -2 * S6, 0, 0],
                [2 * S2, 0, -r, 0],
                [4, 0, 0, 0],
                [2, 4, 0, 0],
                [S2, -2 * S2, 0, 0],
            ]
        )
        / 8
    )


def b111a_u() -> PolyMatrix:
    """``u(xi) = (1/2) [[xi2, 1, -sqrt2], [0, 1, sqrt2], [1, 0, 0], [0, 0, 0]]``."""
    c0 = np.array([[0, 1, -S2], [0, 1, S2], [1, 0, 0], [0, 0, 0]], dtype=complex) / 2
    c2 = np.zeros((4, 3), dtype=complex)
    c2[0, 0] = 0.5
    return PolyMatrix(2, (4, 3), {(0, 0): c0, (0, 1): c2})


def b111a_completion_rows() -> np.ndarray:
    """Five rows ``(T0, T1)`` completing the adjoint block to an isometry."""
    return (
        np.array(
            [
                [6 * S3, 6 * S3, -2 * S3, -4 * S3, -4 * S3, -2 * S3, -S6],
                [0, 0, -12 * S2, 0, 0, 12 * S2, 0],
                [0, 0, 0, 12 * S2, -12 * S2, 0, 0],
                [0, 0, 4 * S6, -4 * S6, -4 * S6, 4 * S6, 4 * S3],
                [0, 0, 0, 0, 0, 0, 12 * S3],
            ]
        )
        / 24
    )


def b111a_u0() -> PolyMatrix:
    P = lambda terms, s: _poly(2, terms, s / 12)  # noqa: E731
    z = LaurentPoly.zero(2)
    rows = [
        [P({(0, 0): 3, (1, 1): -1}, S3), P({(0, 1): 1}, 3 * S2), P({(1, 1): -1}, 3 * S2), P({(1, 1): -1}, S6), P({(0, 1): -1}, 3 * S6)],
        [P({(0, 0): 3, (0, 1): -1}, S3), P({(0, 1): 1}, 3 * S2), z, P({(0, 1): 2}, S6), P({(0, 1): 1}, 3 * S6)],
        [P({(0, 0): -1, (1, 0): -1}, S3), P({(0, 0): -6}, S2), P({(1, 0): -1}, 3 * S2), P({(0, 0): 2, (1, 0): -1}, S6), z],
        [P({(0, 0): -2}, S3), z, P({(0, 0): 6}, S2), P({(0, 0): -2}, S6), z],
    ]
    return PolyMatrix.from_entries(rows)


def b111a_framelets() -> list[LaurentPoly]:
    """The five framelet masks of the shorter extension."""
    return [
        _poly(2, {(0, 0): 3, (1, 0): 3, (0, 1): -1, (1, 1): -2, (2, 1): -1, (1, 2): -1, (2, 2): -1}, S3 / 24),
        _poly(2, {(0, 1): 2, (0, 2): -1, (1, 2): -1}, -3 * S2 / 24),
        _poly(2, {(1, 1): 2, (2, 1): -1, (2, 2): -1}, 3 * S2 / 24),
        _poly(2, {(0, 1): 2, (1, 1): -2, (2, 1): -1, (1, 2): 2, (2, 2): -1}, S6 / 24),
        _poly(2, {(0, 2): 1, (1, 2): -1}, -3 * S6 / 24),
    ]


# ---------------------------------------------------------------------------
# three-variable mask built from g = z1^3 + z2^3 + z3^3 - 3 z1 z2 z3

OMEGA = np.exp(2j * np.pi / 3)


def drury_g() -> LaurentPoly:
    return LaurentPoly(3, {(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): 1, (1, 1, 1): -3})


def drury_q() -> LaurentPoly:
    """``g(w z1, w z2, z3) / g(w, w, 1)`` with ``w = exp(2 pi i / 3)``, so ``q(1, 1, 1) = 1``."""
    g = drury_g()
    rotated = g.scale_variables([OMEGA, OMEGA, 1.0])
    return rotated / g([OMEGA, OMEGA, 1.0])


def fixture_drury() -> LaurentPoly:
    """``p(z) = q(z^2) sum_{alpha in {0,1}^3} z^alpha / 8``, a mask for ``M = 2I_3``."""
    q2 = drury_q().map_exponents(2 * np.eye(3, dtype=np.int64))
    box = LaurentPoly(3, {(a, b, c): 1.0 for a in (0, 1) for b in (0, 1) for c in (0, 1)})
    return q2 * box / 8
