"""Box-spline masks for ``M = 2I`` and their constructive sum-of-squares certificates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .certify import SosCertificate, hermitian_square_on_line, sos_product, sos_telescope
from .errors import InternalConsistencyError, PreconditionError
from .laurent import LaurentPoly
from .symmetry import DilationSetup, dyadic


def _gf2_select(rows: np.ndarray) -> tuple[list[int], int]:
    """Indices of the first ``GF(2)``-independent rows (in order) and the rank."""
    basis: list[np.ndarray] = []
    pivots: list[int] = []
    chosen = []
    for i, r in enumerate(rows % 2):
        v = r.copy()
        for b, piv in zip(basis, pivots):
            if v[piv]:
                v = (v + b) % 2
        nz = np.flatnonzero(v)
        if nz.size:
            basis.append(v)
            pivots.append(int(nz[0]))
            chosen.append(i)
    return chosen, len(chosen)


def gf2_inverse(A: np.ndarray) -> np.ndarray:
    """Inverse of a square 0/1 matrix over ``GF(2)``."""
    A = np.asarray(A, dtype=np.int64) % 2
    n = A.shape[0]
    aug = np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1)
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r, c]), None)
        if piv is None:
            raise PreconditionError("matrix is singular modulo 2")
        aug[[c, piv]] = aug[[piv, c]]
        for r in range(n):
            if r != c and aug[r, c]:
                aug[r] = (aug[r] + aug[c]) % 2
    return aug[:, n:]


@dataclass(frozen=True)
class BoxSplineSpec:
    """Directions ``theta_j`` with multiplicities ``l_j``; the dilation is ``2I``.

    On construction the directions are reordered so the first ``d`` span
    ``Z^d`` modulo ``2Z^d``; ``order`` records the permutation applied.
    """

    directions: tuple
    multiplicities: tuple
    dim: int
    order: tuple

    @classmethod
    def create(cls, directions, multiplicities=None) -> "BoxSplineSpec":
        dirs = [tuple(int(x) for x in t) for t in directions]
        if not dirs:
            raise PreconditionError("at least one direction is required")
        d = len(dirs[0])
        if any(len(t) != d for t in dirs):
            raise PreconditionError("directions have different lengths")
        if any(not any(t) for t in dirs):
            raise PreconditionError("zero direction")
        mult = [1] * len(dirs) if multiplicities is None else [int(x) for x in multiplicities]
        if len(mult) != len(dirs) or any(x < 1 for x in mult):
            raise PreconditionError("multiplicities must be positive, one per direction")
        chosen, rank = _gf2_select(np.array(dirs, dtype=np.int64))
        if rank < d:
            raise PreconditionError(f"directions do not span Z^{d} modulo 2 (mod-2 rank {rank} < {d})")
        first = chosen[:d]
        order = tuple(first + [i for i in range(len(dirs)) if i not in first])
        return cls(tuple(dirs[i] for i in order), tuple(mult[i] for i in order), d, order)

    @property
    def r(self) -> int:
        return len(self.directions)

    def setup(self) -> DilationSetup:
        return dyadic(self.dim)

    def factor(self, j: int) -> LaurentPoly:
        """``((1 + z^theta_j) / 2)^l_j``."""
        base = (1 + LaurentPoly.monomial(self.directions[j])) / 2
        return base ** self.multiplicities[j]


def boxspline_mask(spec: BoxSplineSpec) -> LaurentPoly:
    p = LaurentPoly.const(spec.dim)
    for j in range(spec.r):
        p = p * spec.factor(j)
    return p


def bound_L(spec: BoxSplineSpec) -> int:
    """Upper bound ``d + (r - d) 2^d`` on the certificate length."""
    d = spec.dim
    return d + (spec.r - d) * 2**d


def dual_subgroups(spec: BoxSplineSpec, setup: DilationSetup) -> list[list[int]]:
    """``G_j = {0, pi b_j}`` with ``theta_i . b_j = delta_ij`` modulo 2."""
    Theta = np.array(spec.directions[: spec.dim], dtype=np.int64)
    B = gf2_inverse(Theta)
    lookup = {setup._dual.key(k): i for i, k in enumerate(setup.dual_reps)}
    return [[0, lookup[setup._dual.key(B[:, j])]] for j in range(spec.dim)]


def sos_boxspline(spec: BoxSplineSpec, tol: float = 1e-10) -> SosCertificate:
    """Telescope the first ``d`` factors, then multiply in the rest one at a time."""
    setup = spec.setup()
    d = spec.dim
    cert = sos_telescope([spec.factor(j) for j in range(d)], dual_subgroups(spec, setup), setup, tol)
    for j in range(d, spec.r):
        q = spec.factor(j)
        gap = 1 - q.conj_reflect() * q
        tau = [hermitian_square_on_line(gap)] if gap.max_abs() > 1e-14 else []
        scalar = SosCertificate(gap, tau, q)
        cert = sos_product(cert, scalar, q, setup, tol)
    if cert.length > bound_L(spec):
        raise InternalConsistencyError(f"certificate length {cert.length} exceeds the bound {bound_L(spec)}")
    return cert
