"""Transfer-function realizations ``F(xi) = A + B E(xi) (I - D E(xi))^{-1} C``.

``E(xi) = diag(I_{n_1} xi_1, ..., I_{n_d} xi_d)``.  All realizations built here
have ``D E(xi)`` nilpotent, so the Neumann series is a finite sum and the
transfer function is a polynomial.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .certify import AglerDecomposition, monomial_column
from .errors import InternalConsistencyError, PreconditionError, VerificationError
from .laurent import PolyMatrix
from .symmetry import fp_vector

ISOMETRY_WARN = 1e-10
ISOMETRY_ERROR = 1e-8


@dataclass
class Realization:
    A: np.ndarray  # (outputs, 1)
    B: np.ndarray  # (outputs, states)
    C: np.ndarray  # (states, 1)
    D: np.ndarray  # (states, states)
    state_blocks: tuple
    dim: int
    isometric: bool = True

    @property
    def n_outputs(self) -> int:
        return self.A.shape[0]

    @property
    def n_states(self) -> int:
        return self.D.shape[0]

    def colligation(self) -> np.ndarray:
        return np.block([[self.A, self.B], [self.C, self.D]])

    def isometry_defect(self) -> float:
        V = self.colligation()
        return float(np.abs(V.conj().T @ V - np.eye(V.shape[1])).max())

    def E(self) -> PolyMatrix:
        return PolyMatrix.diag_monomials(self.dim, self.state_blocks)

    def nilpotency_residual(self) -> float:
        """``||(D E(1,...,1))^n||`` with ``n`` the state dimension."""
        n = self.n_states
        if n == 0:
            return 0.0
        return float(np.abs(np.linalg.matrix_power(self.D, n)).max())

    def to_dict(self) -> dict:
        def enc(M):
            return [[{"re": float(x.real), "im": float(x.imag)} for x in row] for row in np.atleast_2d(M)]

        return {
            "A": enc(self.A),
            "B": enc(self.B),
            "C": enc(self.C),
            "D": enc(self.D),
            "stateBlocks": list(self.state_blocks),
            "isometryDefect": self.isometry_defect(),
        }


def _check_isometry(R: Realization, stage: str) -> None:
    defect = R.isometry_defect()
    if defect > ISOMETRY_ERROR:
        V = R.colligation()
        raise VerificationError(
            f"colligation is not isometric (defect {defect:.3e}); V*V - I =\n{V.conj().T @ V - np.eye(V.shape[1])}",
            stage,
            defect,
        )
    if defect > ISOMETRY_WARN:
        warnings.warn(f"{stage}: isometry defect {defect:.3e} above {ISOMETRY_WARN:g}", stacklevel=3)


def _last_nonzero(beta) -> int:
    nz = [i for i, x in enumerate(beta) if x]
    return nz[-1] if nz else -1


def build_realization(dec: AglerDecomposition, H: np.ndarray, check: bool = True) -> Realization:
    """Realization of ``(f_p, H v)`` with the explicit entry formulas for diagonal ``A_j``.

    For a state ``(i, beta)`` the predecessor is ``(j, gamma)`` with ``j`` the
    last nonzero coordinate of ``beta`` and ``gamma = beta - e_j`` truncated
    to ``j`` coordinates: ``j = i`` when ``beta_i > 0`` and ``j < i`` otherwise.
    """
    H = np.atleast_2d(np.asarray(H, dtype=complex))
    setup = dec.setup
    d, m = setup.dim, setup.m
    r = H.shape[0]
    base = dec.base_indices
    if H.shape[0] and H.shape[1] != len(base):
        raise PreconditionError("H columns do not match the base index set")

    states = []
    weight = {}
    for j in range(d):
        for i, beta in enumerate(dec.dir_indices[j]):
            states.append((j, tuple(beta)))
            weight[(j, tuple(beta))] = float(dec.A_diag[j][i, i].real)
    spos = {s: k for k, s in enumerate(states)}
    n = len(states)

    def predecessor(beta):
        j = _last_nonzero(beta)
        gamma = tuple(beta[: j + 1])
        gamma = gamma[:j] + (gamma[j] - 1,)
        key = (j, gamma)
        if key not in spos or weight[key] <= 0:
            raise InternalConsistencyError(f"state {key} needed for monomial {beta} has zero weight")
        return key

    comps = [c for c in fp_vector(dec.source_mask, setup).column_polys()]
    zero = (0,) * d
    A = np.zeros((m + r, 1), dtype=complex)
    for chi, comp in enumerate(comps):
        A[chi, 0] = comp.coeff(zero)
    if zero in base and r:
        A[m:, 0] = H[:, base.index(zero)]
    C = np.zeros((n, 1), dtype=complex)
    D = np.zeros((n, n), dtype=complex)
    for k, (i, beta) in enumerate(states):
        if not any(beta):
            C[k, 0] = np.sqrt(weight[(i, beta)])
            continue
        pred = predecessor(beta)
        D[k, spos[pred]] = np.sqrt(weight[(i, beta)] / weight[pred])
    B = np.zeros((m + r, n), dtype=complex)
    for a_idx, alpha in enumerate(base):
        if not any(alpha):
            continue
        j, gamma = predecessor(alpha)
        col = spos[(j, gamma)]
        s = np.sqrt(weight[(j, gamma)])
        padded = tuple(alpha) + (0,) * (d - len(alpha))
        for chi, comp in enumerate(comps):
            B[chi, col] = comp.coeff(padded) / s
        if r:
            B[m:, col] = H[:, a_idx] / s
    R = Realization(A, B, C, D, dec.state_blocks(), d, True)
    if check:
        _check_isometry(R, "build_realization")
    return R


def monomial_states(H: np.ndarray, indices: Sequence[tuple], d: int) -> PolyMatrix:
    """State functions ``H v_j(xi)`` for one direction."""
    H = np.atleast_2d(np.asarray(H, dtype=complex))
    if H.shape[0] == 0 or not len(indices):
        return PolyMatrix(d, (0, 1))
    return H @ monomial_column(indices, d)


def realize_from_states(outputs: PolyMatrix, states: Sequence[PolyMatrix], tol: float = 1e-10, check: bool = True) -> Realization:
    """Solve ``V (1, E g) = (F, g)`` for ``V = [[A, B], [C, D]]`` by coefficient matching.

    ``states[j]`` holds the direction-``j`` state functions ``q_j``.  The
    state functions must be linearly independent for ``V`` to be unique.
    """
    d = outputs.dim
    blocks = tuple(s.shape[0] for s in states)
    n = sum(blocks)
    out = outputs.shape[0]
    if n:
        g = PolyMatrix.vstack([s for s in states if s.shape[0]])
        Eg = PolyMatrix.diag_monomials(d, blocks) @ g
        x = PolyMatrix.vstack([PolyMatrix.constant(d, np.ones((1, 1))), Eg])
        y = PolyMatrix.vstack([outputs, g])
    else:
        x = PolyMatrix.constant(d, np.ones((1, 1)))
        y = outputs
    keys = sorted({k for k, _ in x.items()} | {k for k, _ in y.items()})
    X = np.hstack([x.coeff(k) for k in keys])
    Y = np.hstack([y.coeff(k) for k in keys])
    Vt, *_ = np.linalg.lstsq(X.T, Y.T, rcond=None)
    V = Vt.T
    miss = float(np.abs(V @ X - Y).max())
    if miss > tol * max(1.0, float(np.abs(Y).max())):
        raise VerificationError(f"no linear colligation reproduces the outputs (residual {miss:.3e})", "realize", miss)
    R = Realization(V[:out, :1], V[:out, 1:], V[out:, :1], V[out:, 1:], blocks, d, True)
    if check:
        _check_isometry(R, "realize_from_states")
    return R


def neumann_series(R: Realization, left: np.ndarray, order: str) -> PolyMatrix:
    """``left (E D)^k`` summed (order ``"ED"``) or ``(D E)^k left`` summed (order ``"DE"``)."""
    d, n = R.dim, R.n_states
    E = R.E()
    if order == "DE":
        step = R.D @ E
        term = PolyMatrix.constant(d, left)
        total = term
        for _ in range(n + 1):
            term = step @ term
            if term.max_abs() == 0.0:
                return total
            total = total + term
    else:
        step = E @ R.D
        term = PolyMatrix.constant(d, left)
        total = term
        for _ in range(n + 1):
            term = term @ step
            if term.max_abs() == 0.0:
                return total
            total = total + term
    raise VerificationError("Neumann series does not terminate: D E is not nilpotent", "neumann")


def transfer_expand(R: Realization) -> PolyMatrix:
    """``A + B E (I - D E)^{-1} C`` expanded as a polynomial column."""
    d = R.dim
    top = PolyMatrix.constant(d, R.A)
    if R.n_states == 0:
        return top
    tail = neumann_series(R, R.C, "DE")
    return top + (PolyMatrix.constant(d, R.B) @ (R.E() @ tail))


def trim_to_contractive(R: Realization, keep: int) -> Realization:
    """Keep the first ``keep`` outputs; ``C`` and ``D`` are unchanged."""
    if keep > R.n_outputs:
        raise PreconditionError(f"cannot keep {keep} of {R.n_outputs} outputs")
    if keep == R.n_outputs:
        return R
    return replace(R, A=R.A[:keep].copy(), B=R.B[:keep].copy(), isometric=False)
