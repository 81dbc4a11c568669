"""Fejer-Riesz spectral factorization and univariate m-channel tight frames."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

from .errors import PreconditionError, VerificationError
from .laurent import LaurentPoly, PolyMatrix

ROOT_TOL = 1e-7
MAX_DEGREE = 64


@dataclass
class SpectralFactor:
    input: LaurentPoly
    factor: LaurentPoly
    residual: float
    roots: np.ndarray


def _pair_circle_roots(roots: np.ndarray) -> list[complex]:
    """Greedy nearest-pair matching of roots on the unit circle; one per pair."""
    pool = sorted(roots.tolist(), key=lambda r: (np.angle(r), abs(r)))
    kept = []
    while pool:
        r = pool.pop(0)
        if not pool:
            raise PreconditionError("odd multiplicity root on the unit circle: not a hermitian square")
        dist = [abs(r - s) for s in pool]
        j = int(np.argmin(dist))
        if dist[j] > max(1e-3, 10 * ROOT_TOL):
            raise PreconditionError(f"unpaired unit-circle root {r:.6g}")
        s = pool.pop(j)
        mid = (r + s) / 2
        kept.append(mid / abs(mid))
    return kept


def fejer_riesz(f: LaurentPoly, grid: int = 1024) -> SpectralFactor:
    """Minimum-phase ``h`` with ``h* h = f`` for a nonnegative univariate ``f``.

    Roots of ``xi^n f(xi)`` come in pairs ``(r, 1/conj(r))``; the factor is
    built from the closed-disk representatives and scaled by a positive
    constant fitted in least squares.
    """
    if f.dim != 1:
        raise PreconditionError("Fejer-Riesz factorization needs a univariate polynomial")
    scale = max(1.0, f.max_abs())
    if not f.is_hermitian(1e-12 * scale):
        raise PreconditionError("polynomial does not have hermitian coefficients")
    if not f:
        return SpectralFactor(f, LaurentPoly.zero(1), 0.0, np.array([]))
    lo, hi = f.degree_box()
    n = max(hi[0], -lo[0])
    if n > MAX_DEGREE:
        raise PreconditionError(f"degree {n} exceeds the supported maximum {MAX_DEGREE}")
    fmin = float(f.grid_values(grid).real.min())
    if fmin < -1e-9:
        raise PreconditionError(f"polynomial is negative on the circle (min {fmin:.3e})")
    c = np.array([f.coeff((k,)) for k in range(-n, n + 1)])
    # hermitian symmetrization removes rounding asymmetry
    c = 0.5 * (c + c[::-1].conj())
    if n == 0:
        h = LaurentPoly.const(1, np.sqrt(max(c[0].real, 0.0)))
        return SpectralFactor(f, h, (h.conj_reflect() * h - f).max_abs(), np.array([]))

    roots = np.roots(c[::-1])
    mag = np.abs(roots)
    on = roots[np.abs(mag - 1) < ROOT_TOL]
    inside = roots[mag <= 1 - ROOT_TOL]
    outside = roots[mag >= 1 + ROOT_TOL]
    if len(inside) != len(outside):
        raise PreconditionError("roots do not pair as (r, 1/conj r)")
    chosen = list(inside) + _pair_circle_roots(on)
    if len(chosen) != n:
        raise PreconditionError(f"found {len(chosen)} factor roots, expected {n}")

    w = np.poly(chosen)[::-1]  # ascending coefficients, monic
    wpoly = LaurentPoly(1, {(k,): w[k] for k in range(n + 1)}, prune=False)
    ww = wpoly.conj_reflect() * wpoly
    a = np.array([ww.coeff((k,)) for k in range(-n, n + 1)])
    gain = float(np.real(np.vdot(a, c)) / np.real(np.vdot(a, a)))
    if gain < 0:
        raise PreconditionError("negative spectral gain")
    h = wpoly * np.sqrt(gain)
    residual = (h.conj_reflect() * h - f).max_abs()
    return SpectralFactor(f, h, residual, np.asarray(chosen))


def univariate_tight_frame(p: LaurentPoly, m: int, tol: float = 1e-10):
    """Tight frame with exactly ``m`` generators for a univariate sub-QMF mask.

    The steps: Fejer-Riesz factor of ``1 - ||f_p||^2`` extends ``f_p`` to an
    inner function, a nilpotent realization of it is adjoined, and the
    co-isometry is completed to a unitary from which the column belonging
    to the extra output is removed.
    """
    from . import realize, synth
    from .certify import gram_from_kernel, hermitian_kernel, psd_factor
    from .symmetry import defect_xi, fp_vector, grid_min, setup_dilation, sum_rules_check

    if p.dim != 1:
        raise PreconditionError("univariate construction needs a univariate mask")
    setup = setup_dilation([[m]])
    if not sum_rules_check(p, setup, 1e-10).passed:
        raise PreconditionError("mask violates the sum rules")
    dxi = defect_xi(p, setup)
    if grid_min(dxi, 1024) < -1e-9:
        raise PreconditionError("mask violates the sub-QMF condition")

    fp = fp_vector(p, setup)
    q0 = fejer_riesz(dxi).factor
    if q0.degree_box()[0][0] < 0:
        raise VerificationError("spectral factor has negative powers", stage="fejer_riesz")
    outputs = PolyMatrix.vstack([fp, PolyMatrix.column([q0])])
    kernel = 1 - hermitian_kernel(outputs)
    grams, remainder = gram_from_kernel(kernel, 1)
    if remainder > tol:
        raise VerificationError("kernel does not split along the disk variable", "gram", remainder)
    (idx, A1), = grams
    H1 = psd_factor(A1, tol)
    states = [realize.monomial_states(H1, idx, 1)]
    R = realize.realize_from_states(outputs, states, tol=tol)
    n_state = R.D.shape[0]

    A, A0 = R.A[:m], R.A[m:m + 1]
    B, B0 = R.B[:m], R.B[m:m + 1]
    C, D = R.C, R.D
    coiso = np.block([[A.conj().T, A0.conj().T, C.conj().T],
                      [B.conj().T, B0.conj().T, D.conj().T]])
    extra = null_space(coiso).conj().T  # m rows completing the co-isometry to a unitary
    if extra.shape[0] != m:
        raise VerificationError(f"unitary completion produced {extra.shape[0]} rows, expected {m}", "completion")
    # rotate the completion so only its last row touches the dropped column
    q, _ = np.linalg.qr(extra[:, m:m + 1], mode="complete")
    extra = np.roll(q.conj().T @ extra, -1, axis=0)
    X = extra[:, :m]
    Y = extra[:, m + 1:]
    trimmed = realize.trim_to_contractive(R, m)
    k = synth.adjoint_polynomial(trimmed, tol=tol, target=fp_vector(p, setup))
    # U(xi) = X^* + xi k(xi) Y^*
    xi = PolyMatrix.diag_monomials(1, [n_state]) if n_state else None
    U = PolyMatrix.constant(1, X.conj().T)
    if n_state:
        U = U + (k @ xi) @ Y.conj().T
    fs = synth.assemble_framelets(U, setup)
    fs.report = synth.verify_uep(p, fs, setup, tol)
    fs.realization = R
    if not fs.report.passed:
        raise VerificationError("UEP identity fails", "verify_uep", fs.report.residual)
    return fs
