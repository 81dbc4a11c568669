"""Constructive sum-of-hermitian-squares certificates for the sub-QMF defect.

Bilinear kernels ``K(xi, conj(eta))`` are stored as ``LaurentPoly`` objects in
``2d`` variables: the first ``d`` exponents belong to ``xi``, the last ``d``
to ``conj(eta)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InternalConsistencyError, PreconditionError, VerificationError
from .laurent import LaurentPoly, PolyMatrix, lex_key
from .symmetry import (
    DilationSetup,
    defect_xi,
    fp_vector,
    polyphase_split,
    shift_action,
    to_xi,
)
from .univariate import fejer_riesz

PSD_TOL = 1e-10


# ---------------------------------------------------------------------------
# bilinear kernels


def hermitian_kernel(P: PolyMatrix, G: np.ndarray | None = None) -> LaurentPoly:
    """``P(eta)^* G P(xi)`` as a polynomial in ``(xi, conj eta)``.

    ``P`` is an ``n x 1`` polynomial column in ``xi``; ``G`` defaults to the identity.
    """
    d = P.dim
    n = P.shape[0]
    G = np.eye(n) if G is None else np.asarray(G, dtype=complex)
    terms: dict = {}
    items = [(k, c[:, 0]) for k, c in P.items()]
    for a, pa in items:
        left = pa.conj() @ G
        for b, pb in items:
            key = b + a
            terms[key] = terms.get(key, 0j) + complex(left @ pb)
    return LaurentPoly(2 * d, terms) if terms else LaurentPoly.zero(2 * d)


def disk_factor(j: int, d: int) -> LaurentPoly:
    """``1 - xi_j conj(eta_j)`` for 0-based ``j``."""
    e = [0] * (2 * d)
    e[j] = e[d + j] = 1
    return LaurentPoly(2 * d, {(0,) * (2 * d): 1.0, tuple(e): -1.0})


def monomial_column(indices: Sequence[tuple], d: int) -> PolyMatrix:
    """Column ``(xi^beta)_beta``; short multi-indices are padded with zeros."""
    if not indices:
        return PolyMatrix(d, (0, 1))
    polys = [LaurentPoly.monomial(tuple(b) + (0,) * (d - len(b))) for b in indices]
    return PolyMatrix.column(polys)


def gram_from_kernel(K: LaurentPoly, d: int, tol: float = 1e-12):
    """Split ``K = sum_j (1 - xi_j conj eta_j) v_j(eta)^* A_j v_j(xi)`` by coefficient matching.

    ``v_j`` runs over monomials in ``xi_1..xi_j`` only, which makes the split
    unique: peel off ``xi_d`` first, then ``xi_{d-1}``, and so on.

    Returns ``(grams, remainder)`` where ``grams[j] = (indices, A_j)`` and
    ``remainder`` is the largest coefficient that could not be absorbed.
    """
    if K.dim != 2 * d:
        raise PreconditionError("kernel dimension does not match 2d")
    rest = {(k[:d], k[d:]): v for k, v in K.items()}
    leftover = 0.0
    grams = [None] * d
    for j in reversed(range(d)):
        groups: dict = {}
        for (a, b), c in rest.items():
            if any(a[i] or b[i] for i in range(j + 1, d)):
                leftover = max(leftover, abs(c))
                continue
            k = min(a[j], b[j])
            base_a = a[:j] + (a[j] - k,) + a[j + 1:]
            base_b = b[:j] + (b[j] - k,) + b[j + 1:]
            groups.setdefault((base_a, base_b), {})[k] = c
        P: dict = {}
        new_rest: dict = {}
        for (ba, bb), seq in groups.items():
            total = sum(seq.values())
            if ba[j] or bb[j]:
                leftover = max(leftover, abs(total))
            else:
                new_rest[(ba, bb)] = new_rest.get((ba, bb), 0j) + total
            top = max(seq)
            tail = 0j
            for k in range(top, -1, -1):
                # p_k = -sum_{i > k} c_i
                if tail != 0:
                    ea = ba[:j] + (ba[j] + k,) + ba[j + 1:]
                    eb = bb[:j] + (bb[j] + k,) + bb[j + 1:]
                    P[(ea[: j + 1], eb[: j + 1])] = -tail
                tail += seq.get(k, 0j)
        grams[j] = _gram_matrix(P, j + 1, tol)
        rest = new_rest
    leftover = max([leftover] + [abs(c) for c in rest.values()])
    return grams, leftover


def _gram_matrix(P: dict, j: int, tol: float):
    if not P:
        return [], np.zeros((0, 0), dtype=complex)
    exps = [e for pair in P for e in pair]
    if any(x < 0 for e in exps for x in e):
        raise PreconditionError("kernel has negative powers; no polydisk Gram form")
    hi = np.max(np.array(exps), axis=0)
    box = sorted(itertools.product(*[range(h + 1) for h in hi]), key=lex_key)
    pos = {b: i for i, b in enumerate(box)}
    A = np.zeros((len(box), len(box)), dtype=complex)
    for (ea, eb), c in P.items():
        A[pos[eb], pos[ea]] += c
    scale = max(1.0, float(np.abs(A).max()))
    keep = [i for i in range(len(box)) if np.abs(A[i]).max() > tol * scale or np.abs(A[:, i]).max() > tol * scale]
    return [box[i] for i in keep], A[np.ix_(keep, keep)]


# ---------------------------------------------------------------------------
# PSD factorization


def psd_factor(A, tol: float = PSD_TOL) -> np.ndarray:
    """Rank-revealing factor ``H`` with ``H^* H = A`` from the eigendecomposition.

    Rows are ``sqrt(lambda_k) v_k^*`` in descending eigenvalue order, each row
    scaled by a unit phase so its first significant entry is real positive.
    """
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    n = A.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    norm = float(np.abs(A).max())
    if norm == 0.0:
        return np.zeros((0, n), dtype=complex)
    if np.abs(A - A.conj().T).max() > tol * norm:
        raise PreconditionError("matrix is not hermitian")
    lam, V = np.linalg.eigh(0.5 * (A + A.conj().T))
    top = float(np.abs(lam).max())
    if lam.min() < -tol * top:
        raise PreconditionError(f"matrix is not positive semidefinite (eigenvalue {lam.min():.3e})")
    order = np.argsort(lam)[::-1]
    rows = []
    for k in order:
        if lam[k] <= tol * top:
            continue
        row = np.sqrt(lam[k]) * V[:, k].conj()
        lead = np.flatnonzero(np.abs(row) > 1e-8 * np.abs(row).max())[0]
        rows.append(row * (abs(row[lead]) / row[lead]))
    return np.array(rows, dtype=complex).reshape(len(rows), n)


def factor_polys(H: np.ndarray, indices: Sequence[tuple], d: int) -> list[LaurentPoly]:
    """Rows of ``H`` applied to the monomial vector over ``indices``."""
    v = monomial_column(indices, d)
    if H.shape[0] == 0:
        return []
    return (H @ v).column_polys() if len(indices) else []


# ---------------------------------------------------------------------------
# Schur-Agler decomposition for nonnegative masks


@dataclass
class AglerDecomposition:
    """Gram data of ``1 - f_p(eta)^* f_p(xi) = v^* A0 v + sum_j (1 - xi_j conj eta_j) v_j^* A_j v_j``."""

    base_indices: list
    A0: np.ndarray
    dir_indices: list
    A_diag: list
    setup: DilationSetup
    source_mask: LaurentPoly
    block_A0: list = field(default_factory=list, repr=False)

    @property
    def dim(self) -> int:
        return self.setup.dim

    def v(self) -> PolyMatrix:
        return monomial_column(self.base_indices, self.dim)

    def v_j(self, j: int) -> PolyMatrix:
        return monomial_column(self.dir_indices[j], self.dim)

    def state_blocks(self) -> tuple[int, ...]:
        return tuple(len(ix) for ix in self.dir_indices)

    def kernel_residual(self) -> LaurentPoly:
        d = self.dim
        K = 1 - hermitian_kernel(fp_vector(self.source_mask, self.setup))
        K = K - hermitian_kernel(self.v(), self.A0)
        for j in range(d):
            if self.dir_indices[j]:
                K = K - disk_factor(j, d) * hermitian_kernel(self.v_j(j), self.A_diag[j])
        return K

    def bilinear_residual(self) -> float:
        return self.kernel_residual().max_abs()


def agler_nonneg(p: LaurentPoly, setup: DilationSetup, prune: bool = True) -> AglerDecomposition:
    """Explicit Gram matrices for a mask with nonnegative coefficients.

    Requires real nonnegative coefficients, nonnegative exponents, and
    ``p~_chi(1,...,1) = 1/m`` for every coset.
    """
    d, m = setup.dim, setup.m
    for alpha, c in p.items():
        if any(a < 0 for a in alpha):
            raise PreconditionError(f"negative exponent {alpha}")
        if abs(c.imag) > 1e-14 or c.real < -1e-14:
            raise PreconditionError(f"coefficient {c} at {alpha} is not real and nonnegative")
    comps = polyphase_split(p, setup).components
    bad = []
    for i, comp in enumerate(comps):
        s = sum(c.real for _, c in comp.items())
        if abs(s - 1.0 / m) > 1e-12:
            bad.append((setup.cosets[i], s))
    if bad:
        detail = ", ".join(f"coset {a}: sum {s:.15g}" for a, s in bad)
        raise PreconditionError(f"polyphase normalization p~_chi(1) = 1/{m} violated ({detail})")

    base = sorted({beta for comp in comps for beta, _ in comp.items()}, key=lex_key)
    pos = {b: i for i, b in enumerate(base)}
    r = len(base)
    blocks = []
    A0 = np.zeros((r, r))
    rows = []
    for comp in comps:
        row = np.zeros(r)
        for beta, c in comp.items():
            row[pos[beta]] = c.real
        rows.append(row)
        blk = -m * np.outer(row, row)
        blk[np.diag_indices(r)] = row - m * row**2
        blocks.append(blk)
        A0 += blk
    weight = np.sum(rows, axis=0)  # sum_chi p(alpha_chi + M alpha)

    n = np.max(np.array(base), axis=0) if base else np.zeros(d, dtype=int)
    dir_indices, A_diag = [], []
    for j in range(d):
        box = sorted(itertools.product(*[range(n[k] + 1) for k in range(j + 1)]), key=lex_key)
        diag = []
        for beta in box:
            total = 0.0
            for alpha, w in zip(base, weight):
                if alpha[:j] == beta[:j] and alpha[j] > beta[j]:
                    total += w
            diag.append(total)
        if prune:
            keep = [i for i, x in enumerate(diag) if x > 1e-14]
            box = [box[i] for i in keep]
            diag = [diag[i] for i in keep]
        dir_indices.append(box)
        A_diag.append(np.diag(np.array(diag, dtype=float)))
    return AglerDecomposition(base, A0, dir_indices, A_diag, setup, p, blocks)


# ---------------------------------------------------------------------------
# certificates


@dataclass
class SosCertificate:
    """``target = sum_j factors[j]^* factors[j]`` on the torus.

    For mask certificates the target is the sub-QMF defect read in ``xi``
    and ``mask`` is the mask it came from.
    """

    target: LaurentPoly
    factors: list
    mask: LaurentPoly | None = None

    @property
    def length(self) -> int:
        return len(self.factors)

    def sum_of_squares(self) -> LaurentPoly:
        total = LaurentPoly.zero(self.target.dim)
        for h in self.factors:
            total = total + h.conj_reflect() * h
        return total

    def residual(self) -> float:
        return (self.target - self.sum_of_squares()).max_abs()

    def to_dict(self, tol: float = 1e-10) -> dict:
        return {
            "length": self.length,
            "factors": [h.to_dict() for h in self.factors],
            "residual": self.residual(),
        }


@dataclass
class SosReport:
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol


def verify_sos(cert: SosCertificate, tol: float = 1e-10) -> SosReport:
    return SosReport(cert.residual(), tol)


def certificate_from_agler(dec: AglerDecomposition, H: np.ndarray | None = None) -> SosCertificate:
    H = psd_factor(dec.A0) if H is None else np.asarray(H, dtype=complex)
    factors = factor_polys(H, dec.base_indices, dec.dim)
    return SosCertificate(defect_xi(dec.source_mask, dec.setup), factors, dec.source_mask)


def _nonzero(polys, eps: float = 1e-14):
    return [h for h in polys if h.max_abs() > eps]


def sos_product(
    cert_p: SosCertificate, cert_q: SosCertificate, q: LaurentPoly, setup: DilationSetup, tol: float = 1e-10
) -> SosCertificate:
    """Certificate for ``p q`` from one for ``p`` and a scalar sos ``1 - q^* q = sum tau_j^* tau_j``.

    New factors are the scaled polyphase components of ``p tau_j``.
    """
    if cert_p.mask is None:
        raise PreconditionError("mask certificate must carry its mask")
    p = cert_p.mask
    if cert_p.residual() > tol:
        raise VerificationError("certificate for p does not verify", "sos_product", cert_p.residual())
    scalar_target = 1 - q.conj_reflect() * q
    scalar = SosCertificate(scalar_target, list(cert_q.factors), q)
    if scalar.residual() > tol:
        raise VerificationError("scalar certificate for 1 - q*q does not verify", "sos_product", scalar.residual())
    factors = list(cert_p.factors)
    root_m = math.sqrt(setup.m)
    for tau in cert_q.factors:
        comps = polyphase_split(p * tau, setup).components
        factors.extend(_nonzero([c * root_m for c in comps]))
    pq = p * q
    out = SosCertificate(defect_xi(pq, setup), factors, pq)
    if out.length > cert_p.length + setup.m * cert_q.length:
        raise InternalConsistencyError("product certificate exceeds the length bound")
    if out.residual() > tol:
        raise VerificationError("product certificate does not verify", "sos_product", out.residual())
    return out


def line_direction(f: LaurentPoly) -> tuple[int, ...] | None:
    """Primitive ``theta`` with ``supp f`` inside ``Z theta``, or ``None`` if there is none."""
    nonzero = [k for k in f.exponents() if any(k)]
    if not nonzero:
        return (1,) + (0,) * (f.dim - 1)
    e = nonzero[0]
    g = 0
    for x in e:
        g = math.gcd(g, abs(x))
    theta = tuple(x // g for x in e)
    t = np.array(theta)
    for k in nonzero:
        kk = np.array(k)
        i = int(np.flatnonzero(t)[0])
        if kk[i] % t[i] or not np.array_equal(kk, (kk[i] // t[i]) * t):
            return None
    return theta


def hermitian_square_on_line(f: LaurentPoly) -> LaurentPoly:
    """Single square ``h`` with ``|h|^2 = f`` for ``f`` supported on a line ``Z theta``."""
    theta = line_direction(f)
    if theta is None:
        raise PreconditionError("polynomial is not univariate in a monomial; cannot apply Fejer-Riesz")
    t = np.array(theta)
    i = int(np.flatnonzero(t)[0])
    uni = LaurentPoly(1, {(k[i] // t[i],): v for k, v in f.items()}, prune=False)
    h = fejer_riesz(uni).factor
    return LaurentPoly(f.dim, {tuple(int(x) for x in kk[0] * t): v for kk, v in h.items()})


def sos_telescope(
    factor_masks: Sequence[LaurentPoly], subgroups: Sequence[Sequence[int]], setup: DilationSetup, tol: float = 1e-10
) -> SosCertificate:
    """Certificate for ``prod p_j`` when ``G = G_1 x ... x G_r`` and ``p_j`` is ``G_k``-invariant for ``k != j``.

    ``subgroups[j]`` lists the shift indices of ``G_j``.  With
    ``t_j = sum_{G_j} |p_j^sigma|^2 = |s_j|^2`` and ``1 - t_j = |h_j|^2`` the
    factors are ``s_1 ... s_{j-1} h_j``.
    """
    if len(factor_masks) != len(subgroups):
        raise PreconditionError("one subgroup per factor is required")
    _check_product_decomposition(subgroups, setup)
    for j, pj in enumerate(factor_masks):
        for k, Gk in enumerate(subgroups):
            if k == j:
                continue
            for s in Gk:
                if not shift_action(pj, s, setup).approx_eq(pj, 1e-13):
                    raise PreconditionError(f"factor {j} is not invariant under subgroup {k}")
    factors = []
    prefix = LaurentPoly.const(setup.dim)
    product = LaurentPoly.const(setup.dim)
    for pj, Gj in zip(factor_masks, subgroups):
        tj = LaurentPoly.zero(setup.dim)
        for s in Gj:
            ps = shift_action(pj, s, setup)
            tj = tj + ps.conj_reflect() * ps
        tj = to_xi(tj, setup)
        gap = 1 - tj
        if gap.max_abs() > 1e-14:
            hj = hermitian_square_on_line(gap)
            factors.append(prefix * hj)
        prefix = prefix * hermitian_square_on_line(tj)
        product = product * pj
    cert = SosCertificate(defect_xi(product, setup), _nonzero(factors), product)
    if cert.residual() > tol:
        raise VerificationError("telescoped certificate does not verify", "sos_telescope", cert.residual())
    return cert


def _check_product_decomposition(subgroups, setup: DilationSetup) -> None:
    dual = setup._dual
    reps = [np.array(k) for k in setup.dual_reps]
    seen = set()
    count = 0
    for combo in itertools.product(*subgroups):
        total = sum((reps[s] for s in combo), np.zeros(setup.dim, dtype=np.int64))
        seen.add(dual.key(total))
        count += 1
    if count != setup.m or len(seen) != setup.m:
        raise PreconditionError("subgroups do not decompose G as a direct product")
