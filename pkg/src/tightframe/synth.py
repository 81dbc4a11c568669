"""Framelet synthesis: adjunction, isometry completion, ``u0`` and mask assembly, UEP checks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .certify import agler_nonneg, gram_from_kernel, hermitian_kernel, monomial_column, psd_factor
from .errors import PreconditionError, TightFrameError, VerificationError
from .laurent import LaurentPoly, PolyMatrix
from .realize import (
    Realization,
    build_realization,
    monomial_states,
    neumann_series,
    realize_from_states,
    transfer_expand,
    trim_to_contractive,
)
from .symmetry import DilationSetup, fp_vector, from_xi, polyphase_split, shift_action

UEP_TOL = 1e-10


@dataclass
class CompletionReport:
    """Rows ``T = (T0, T1)`` stacked under a contraction so the result is isometric."""

    base_matrix: np.ndarray
    added_rows: np.ndarray
    defect_rank: int
    isometry_defect: float

    def stacked(self) -> np.ndarray:
        return np.vstack([self.base_matrix, self.added_rows])

    def to_dict(self) -> dict:
        return {
            "defectRank": self.defect_rank,
            "isometryDefect": self.isometry_defect,
            "addedRows": _encode_matrix(self.added_rows),
        }


@dataclass
class UepReport:
    residual: float
    sample_residual: float
    tol: float
    vanishing: list = field(default_factory=list)
    degrees: list = field(default_factory=list)
    supports: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.residual <= self.tol
            and self.sample_residual <= self.tol
            and all(v <= self.tol for v in self.vanishing)
        )

    def to_dict(self) -> dict:
        return {
            "residual": self.residual,
            "sampleResidual": self.sample_residual,
            "tol": self.tol,
            "passed": self.passed,
            "vanishing": list(self.vanishing),
            "degrees": [list(d) for d in self.degrees],
            "supports": [[list(lo), list(hi)] for lo, hi in self.supports],
        }


@dataclass
class FrameletSet:
    """Masks ``a_1..a_N`` with the polyphase matrix ``u0`` they came from."""

    masks: list
    u_matrix: PolyMatrix
    report: UepReport | None = None
    realization: Realization | None = None
    completion: CompletionReport | None = None
    u: PolyMatrix | None = None
    stages: dict = field(default_factory=dict)

    @property
    def N(self) -> int:
        return len(self.masks)

    def to_dict(self) -> dict:
        out = {"N": self.N, "masks": [a.to_dict() for a in self.masks]}
        if self.report is not None:
            out["report"] = self.report.to_dict()
        if self.stages:
            out["stages"] = dict(self.stages)
        return out


def _encode_matrix(M: np.ndarray) -> list:
    return [[{"re": float(x.real), "im": float(x.imag)} for x in row] for row in np.atleast_2d(M)]


def total_degree(P: PolyMatrix | LaurentPoly) -> int:
    """Largest ``|alpha|_1`` over the support (``-1`` for zero)."""
    exps = [k for k, _ in P.items()] if isinstance(P, PolyMatrix) else P.exponents()
    return max((sum(k) for k in exps), default=-1)


# ---------------------------------------------------------------------------
# adjunction


def adjoint_polynomial(R: Realization, tol: float = UEP_TOL, target: PolyMatrix | None = None) -> PolyMatrix:
    """``u(xi) = B (I - E(xi) D)^{-1}``, checked against ``f^*(xi) = A^* + C^* E(xi) u^*(xi)``.

    ``f`` is ``target`` when given (normally ``f_p``), else the transfer
    function of ``R`` itself.
    """
    d, out, n = R.dim, R.n_outputs, R.n_states
    f = transfer_expand(R) if target is None else target
    if n == 0:
        u = PolyMatrix(d, (out, 0))
        rhs = PolyMatrix.constant(d, R.A.conj().T)
    else:
        u = neumann_series(R, R.B, "ED")
        rhs = PolyMatrix.constant(d, R.A.conj().T) + PolyMatrix.constant(d, R.C.conj().T) @ (R.E() @ u.star())
    residual = (rhs - f.star()).max_abs()
    if residual > tol:
        raise VerificationError(f"adjunction identity fails (residual {residual:.3e})", "adjoint_polynomial", residual)
    return u


# ---------------------------------------------------------------------------
# completion


def adjoint_block(R: Realization) -> np.ndarray:
    """``[[A^*, C^*], [B^*, D^*]]`` of a (trimmed) realization."""
    return np.block([[R.A.conj().T, R.C.conj().T], [R.B.conj().T, R.D.conj().T]])


def isometry_complete(Mtx, tol: float = UEP_TOL, rows=None) -> CompletionReport:
    """Rows ``T`` with ``T^* T = I - Mtx^* Mtx``, by default ``psd_factor`` of the defect.

    ``rows`` injects a prescribed completion, which is checked instead of computed.
    """
    Mtx = np.atleast_2d(np.asarray(Mtx, dtype=complex))
    k = Mtx.shape[1]
    if Mtx.size:
        smax = float(np.linalg.norm(Mtx, 2))
        if smax > 1 + tol:
            raise PreconditionError(f"matrix is not contractive (largest singular value {smax:.12g})")
    defect = np.eye(k) - Mtx.conj().T @ Mtx
    if rows is not None:
        T = np.atleast_2d(np.asarray(rows, dtype=complex))
        if T.shape[1] != k:
            raise PreconditionError(f"completion rows have {T.shape[1]} columns, expected {k}")
        miss = float(np.abs(T.conj().T @ T - defect).max())
        if miss > tol:
            raise VerificationError(f"prescribed rows do not factor the defect (residual {miss:.3e})", "isometry_complete", miss)
    elif k == 0 or float(np.abs(defect).max()) <= tol:
        T = np.zeros((0, k), dtype=complex)
    else:
        T = psd_factor(defect, tol)
    stacked = np.vstack([Mtx, T])
    iso = float(np.abs(stacked.conj().T @ stacked - np.eye(k)).max()) if k else 0.0
    if iso > tol:
        raise VerificationError(f"completed matrix is not isometric (defect {iso:.3e})", "isometry_complete", iso)
    return CompletionReport(Mtx, T, T.shape[0], iso)


def build_u0(comp: CompletionReport, u: PolyMatrix, state_blocks, m: int) -> PolyMatrix:
    """``u0(xi) = T0^* + u(xi) E(xi) T1^*``, an ``m x (defect rank)`` polynomial matrix."""
    T = comp.added_rows
    n = sum(state_blocks)
    if T.shape[1] != m + n or u.shape != (m, n):
        raise PreconditionError(f"dimension mismatch: rows {T.shape}, u {u.shape}, m {m}, states {n}")
    d = u.dim
    T0, T1 = T[:, :m], T[:, m:]
    u0 = PolyMatrix.constant(d, T0.conj().T)
    if n:
        u0 = u0 + (u @ PolyMatrix.diag_monomials(d, state_blocks)) @ T1.conj().T
    return u0


# ---------------------------------------------------------------------------
# assembly and verification


def assemble_framelets(u0: PolyMatrix, setup: DilationSetup) -> FrameletSet:
    """``a_j(z) = m^{-1/2} sum_chi z^{alpha_chi} u0[chi, j](z^M)``."""
    m = setup.m
    if u0.shape[0] != m:
        raise PreconditionError(f"u0 has {u0.shape[0]} rows, expected {m}")
    scale = 1.0 / np.sqrt(m)
    masks = []
    for j in range(u0.shape[1]):
        a = LaurentPoly.zero(setup.dim)
        for chi, alpha in enumerate(setup.cosets):
            a = a + LaurentPoly.monomial(alpha) * from_xi(u0.entry(chi, j), setup)
        masks.append(a * scale)
    return FrameletSet(masks, u0)


def framelet_polyphase(masks, setup: DilationSetup) -> PolyMatrix:
    """The ``m x N`` matrix of scaled polyphase columns of the masks."""
    if not masks:
        return PolyMatrix(setup.dim, (setup.m, 0))
    cols = [polyphase_split(a, setup, scale=True).components for a in masks]
    return PolyMatrix.from_entries([[cols[j][chi] for j in range(len(masks))] for chi in range(setup.m)])


def verify_uep(
    p: LaurentPoly, fs: FrameletSet, setup: DilationSetup, tol: float = UEP_TOL, samples: int = 100, seed: int = 0
) -> UepReport:
    """Residual of ``I - f_p f_p^* - U U^*`` coefficientwise, plus the shift form at random torus points."""
    d, m = setup.dim, setup.m
    fp = fp_vector(p, setup)
    U = framelet_polyphase(fs.masks, setup)
    lhs = PolyMatrix.identity(d, m) - fp @ fp.adjoint()
    if U.shape[1]:
        lhs = lhs - U @ U.adjoint()
    residual = lhs.max_abs()

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        z = np.exp(2j * np.pi * rng.random(d))
        F = np.array([[shift_action(a, s, setup)(z) for s in range(m)] for a in [p] + list(fs.masks)])
        S = F.T @ F.conj()
        worst = max(worst, float(np.abs(np.eye(m) - S).max()))

    ones = [1.0] * d
    vanishing = [abs(a(ones)) for a in fs.masks]
    degrees, supports = [], []
    for a in fs.masks:
        lo, hi = a.degree_box() if a else ((0,) * d, (0,) * d)
        supports.append((tuple(lo), tuple(hi)))
        degrees.append(tuple(h - l for l, h in zip(lo, hi)))
    return UepReport(residual, worst, tol, vanishing, degrees, supports)


# ---------------------------------------------------------------------------
# pipeline


def _custom_realization(fp: PolyMatrix, q0: PolyMatrix, d: int, tol: float) -> Realization:
    outputs = PolyMatrix.vstack([fp, q0])
    kernel = 1 - hermitian_kernel(outputs)
    grams, remainder = gram_from_kernel(kernel, d, tol)
    if remainder > tol:
        raise VerificationError(
            f"1 - |f_p|^2 - |q0|^2 has no bilinear split along the disk variables (remainder {remainder:.3e})",
            "gram",
            remainder,
        )
    states = []
    for j, (idx, A) in enumerate(grams):
        try:
            H = psd_factor(A, tol)
        except PreconditionError as exc:
            raise PreconditionError(f"custom q0 is invalid: direction {j + 1} Gram matrix: {exc}") from None
        states.append(monomial_states(H, idx, d))
    return realize_from_states(outputs, states, tol=tol)


def frame_pipeline(
    p: LaurentPoly,
    setup: DilationSetup,
    custom_q0: PolyMatrix | None = None,
    completion_rows=None,
    H0=None,
    tol: float = UEP_TOL,
) -> FrameletSet:
    """Mask to framelets: decomposition, realization, trim, adjunction, completion, assembly, check.

    Parameters
    ----------
    p : LaurentPoly
        Mask with nonnegative coefficients, or any mask when ``custom_q0`` is given.
    custom_q0 : PolyMatrix, optional
        Column ``q0(xi)`` extending ``f_p``; direction Gram matrices are then
        found by coefficient matching.
    completion_rows : array, optional
        Prescribed rows for the isometric completion.
    H0 : array, optional
        Prescribed factor of ``A0`` for the default decomposition.
    """
    d, m = setup.dim, setup.m
    fp = fp_vector(p, setup)
    stages: dict = {}
    try:
        if custom_q0 is None:
            dec = agler_nonneg(p, setup)
            stages["bilinearResidual"] = dec.bilinear_residual()
            if stages["bilinearResidual"] > tol:
                raise VerificationError("bilinear identity fails", "agler_nonneg", stages["bilinearResidual"])
            H = psd_factor(dec.A0) if H0 is None else np.asarray(H0, dtype=complex)
            R = build_realization(dec, H)
            target = PolyMatrix.vstack([fp, H @ monomial_column(dec.base_indices, d)]) if H.shape[0] else fp
        else:
            R = _custom_realization(fp, custom_q0, d, tol)
            target = PolyMatrix.vstack([fp, custom_q0])
        stages["isometryDefect"] = R.isometry_defect()
        miss = (transfer_expand(R) - target).max_abs()
        stages["transferResidual"] = miss
        if miss > tol:
            raise VerificationError("transfer function does not reproduce (f_p, q0)", "transfer_expand", miss)
        Rt = trim_to_contractive(R, m)
        u = adjoint_polynomial(Rt, tol, target=fp)
        comp = isometry_complete(adjoint_block(Rt), tol, rows=completion_rows)
        stages["completionDefect"] = comp.isometry_defect
        u0 = build_u0(comp, u, Rt.state_blocks, m)
        fs = assemble_framelets(u0, setup)
    except VerificationError:
        raise
    except TightFrameError as exc:
        raise type(exc)(f"frame pipeline: {exc}") from exc
    fs.realization, fs.completion, fs.u = R, comp, u
    fs.report = verify_uep(p, fs, setup, tol)
    stages["uepResidual"] = fs.report.residual
    fs.stages = stages
    if not fs.report.passed:
        raise VerificationError("UEP identity fails", "verify_uep", fs.report.residual)
    return fs
