"""Dilation-group machinery: cosets, shift action, polyphase split/merge, sub-QMF defect."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import InternalConsistencyError, PreconditionError
from .laurent import LaurentPoly, PolyMatrix, lex_key


def _int_det(M: np.ndarray) -> int:
    return int(round(np.linalg.det(M)))


def _adjugate(M: np.ndarray) -> np.ndarray:
    """Integer adjugate, so that ``M @ adj = det * I``."""
    d = M.shape[0]
    if d == 1:
        return np.array([[1]], dtype=np.int64)
    adj = np.zeros((d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            minor = np.delete(np.delete(M, i, axis=0), j, axis=1)
            adj[j, i] = (-1) ** (i + j) * _int_det(minor)
    return adj


class _Lattice:
    """Reduction of integer vectors modulo ``L Z^d`` via the adjugate of ``L``."""

    def __init__(self, L: np.ndarray):
        self.L = L
        self.det = _int_det(L)
        self.adj = _adjugate(L)
        self.mod = abs(self.det)

    def key(self, alpha) -> tuple[int, ...]:
        return tuple(int(x) % self.mod for x in self.adj @ np.asarray(alpha, dtype=np.int64))

    def divide(self, alpha) -> tuple[int, ...]:
        """``L^{-1} alpha`` for ``alpha`` in ``L Z^d``."""
        num = self.adj @ np.asarray(alpha, dtype=np.int64)
        if np.any(num % self.det):
            raise ValueError(f"{tuple(alpha)} is not in the lattice")
        return tuple(int(x) for x in num // self.det)

    def representatives(self, bound: int) -> list[tuple[int, ...]]:
        d = self.L.shape[0]
        seen: dict[tuple, tuple] = {}
        while True:
            box = itertools.product(range(bound + 1), repeat=d)
            for alpha in sorted(box, key=lex_key):
                k = self.key(alpha)
                if k not in seen:
                    seen[k] = alpha
            if len(seen) == self.mod:
                break
            bound = max(bound + 1, self.mod - 1)
        return sorted(seen.values(), key=lex_key)


@dataclass(frozen=True)
class DilationSetup:
    """Dilation matrix with coset data for ``Z^d / M Z^d`` and ``Z^d / M^T Z^d``.

    ``cosets[c]`` is the representative ``alpha_chi``; ``dual_reps[s]`` is the
    integer vector ``k`` with ``sigma = 2 pi M^{-T} k``.  Index 0 is zero in both.
    """

    M: np.ndarray
    m: int
    cosets: tuple[tuple[int, ...], ...]
    dual_reps: tuple[tuple[int, ...], ...]
    _lat: _Lattice = field(repr=False, compare=False)
    _dual: _Lattice = field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.M.shape[0]

    def coset_index(self, alpha) -> int:
        return self._coset_lookup[self._lat.key(alpha)]

    @property
    def _coset_lookup(self) -> dict:
        lookup = self.__dict__.get("_lookup_cache")
        if lookup is None:
            lookup = {self._lat.key(a): i for i, a in enumerate(self.cosets)}
            object.__setattr__(self, "_lookup_cache", lookup)
        return lookup

    def to_lattice(self, alpha) -> tuple[int, ...]:
        """``M^{-1} alpha`` for ``alpha`` in ``M Z^d``."""
        return self._lat.divide(alpha)

    def character(self, sigma_index: int, alpha) -> complex:
        """``exp(-i sigma . alpha)`` computed from the exact rational angle."""
        k = np.asarray(self.dual_reps[sigma_index], dtype=np.int64)
        # sigma . alpha = 2 pi (M^{-T} k) . alpha = 2 pi (k . M^{-1} alpha)
        num = int(k @ (self._lat.adj @ np.asarray(alpha, dtype=np.int64)))
        det = self._lat.det
        r = num % abs(det)
        if det < 0:
            r = (-num) % abs(det)
        return _root_of_unity(-r, abs(det))

    def to_dict(self) -> dict:
        return {
            "M": self.M.tolist(),
            "cosets": [list(a) for a in self.cosets],
            "dualReps": [list(k) for k in self.dual_reps],
        }


def _root_of_unity(r: int, n: int) -> complex:
    """``exp(2 pi i r / n)`` with exact values on quarter turns."""
    r %= n
    if (4 * r) % n == 0:
        return (1 + 0j, 1j, -1 + 0j, -1j)[(4 * r) // n]
    return complex(np.exp(2j * np.pi * r / n))


def setup_dilation(M) -> DilationSetup:
    """Build coset and dual-coset representatives for an integer dilation matrix."""
    M = np.atleast_2d(np.asarray(M, dtype=np.int64))
    if M.shape[0] != M.shape[1]:
        raise PreconditionError("dilation matrix must be square")
    det = _int_det(M)
    if det == 0:
        raise PreconditionError("dilation matrix is singular")
    if abs(det) < 2:
        raise PreconditionError("|det M| must be at least 2")
    lat, dual = _Lattice(M), _Lattice(M.T.copy())
    bound = int(np.abs(M).max()) * M.shape[0]
    cosets = tuple(lat.representatives(bound))
    dual_reps = tuple(dual.representatives(bound))
    return DilationSetup(M=M, m=abs(det), cosets=cosets, dual_reps=dual_reps, _lat=lat, _dual=dual)


def dyadic(d: int) -> DilationSetup:
    return setup_dilation(2 * np.eye(d, dtype=np.int64))


def shift_action(p: LaurentPoly, sigma_index: int, setup: DilationSetup) -> LaurentPoly:
    """``p^sigma(z) = p(exp(-i sigma_1) z_1, ...)``."""
    if not 0 <= sigma_index < setup.m:
        raise PreconditionError(f"sigma index {sigma_index} out of range 0..{setup.m - 1}")
    if sigma_index == 0:
        return p
    return LaurentPoly(p.dim, {k: v * setup.character(sigma_index, k) for k, v in p.items()})


@dataclass(frozen=True)
class PolyphaseVector:
    """Polyphase components in the variable ``xi = z^M``, one per coset."""

    setup: DilationSetup
    components: tuple[LaurentPoly, ...]
    scaled: bool = False

    def as_column(self) -> PolyMatrix:
        return PolyMatrix.column(list(self.components))

    def with_scale(self) -> "PolyphaseVector":
        if self.scaled:
            return self
        s = np.sqrt(self.setup.m)
        return PolyphaseVector(self.setup, tuple(c * s for c in self.components), True)


def polyphase_split(p: LaurentPoly, setup: DilationSetup, scale: bool = False) -> PolyphaseVector:
    """Split ``p`` into ``p~_chi(xi) = sum_b p(alpha_chi + M b) xi^b``."""
    if p.dim != setup.dim:
        raise PreconditionError(f"mask has {p.dim} variables, dilation has {setup.dim}")
    buckets: list[dict] = [{} for _ in range(setup.m)]
    for alpha, c in p.items():
        i = setup.coset_index(alpha)
        shift = tuple(a - b for a, b in zip(alpha, setup.cosets[i]))
        buckets[i][setup.to_lattice(shift)] = c
    comps = tuple(LaurentPoly(p.dim, b, prune=False) for b in buckets)
    vec = PolyphaseVector(setup, comps, False)
    return vec.with_scale() if scale else vec


def polyphase_merge(v: PolyphaseVector) -> LaurentPoly:
    """Inverse of :func:`polyphase_split` (unscaled vectors only)."""
    if v.scaled:
        raise PreconditionError("merge expects unscaled polyphase components")
    setup = v.setup
    terms = {}
    for alpha_chi, comp in zip(setup.cosets, v.components):
        for beta, c in comp.items():
            g = tuple(int(x) for x in setup.M @ np.asarray(beta, dtype=np.int64))
            terms[tuple(a + b for a, b in zip(alpha_chi, g))] = c
    return LaurentPoly(setup.dim, terms, prune=False)


def fp_vector(p: LaurentPoly, setup: DilationSetup) -> PolyMatrix:
    """``f_p(xi) = (m^{1/2} p~_chi(xi))_chi`` as an ``m x 1`` polynomial column."""
    return polyphase_split(p, setup, scale=True).as_column()


def to_xi(f: LaurentPoly, setup: DilationSetup) -> LaurentPoly:
    """Rewrite a G-invariant polynomial in ``xi = z^M``."""
    try:
        return LaurentPoly(f.dim, {setup.to_lattice(k): v for k, v in f.items()}, prune=False)
    except ValueError as exc:
        raise PreconditionError(f"polynomial is not G-invariant: {exc}") from None


def from_xi(g: LaurentPoly, setup: DilationSetup) -> LaurentPoly:
    """Substitute ``xi = z^M``."""
    return g.map_exponents(setup.M)


@dataclass
class SumRuleReport:
    residuals: list[float]
    tol: float

    @property
    def passed(self) -> bool:
        return all(r <= self.tol for r in self.residuals)


def sum_rules_check(p: LaurentPoly, setup: DilationSetup, tol: float = 1e-12) -> SumRuleReport:
    ones = [1.0] * setup.dim
    res = []
    for s in range(setup.m):
        val = shift_action(p, s, setup)(ones)
        res.append(abs(val - (1.0 if s == 0 else 0.0)))
    return SumRuleReport(res, tol)


def shift_sum(p: LaurentPoly, setup: DilationSetup) -> LaurentPoly:
    """``sum_sigma p^{sigma*} p^sigma`` in ``z``."""
    total = LaurentPoly.zero(p.dim)
    for s in range(setup.m):
        ps = shift_action(p, s, setup)
        total = total + ps.conj_reflect() * ps
    return total


def polyphase_gram_sum(p: LaurentPoly, setup: DilationSetup) -> LaurentPoly:
    """``m sum_chi p~_chi^* p~_chi`` in ``xi``."""
    total = LaurentPoly.zero(p.dim)
    for comp in polyphase_split(p, setup).components:
        total = total + comp.conj_reflect() * comp
    return total * setup.m


def subqmf_defect(p: LaurentPoly, setup: DilationSetup, tol: float = 1e-12) -> LaurentPoly:
    """``f = 1 - sum_sigma p^{sigma*} p^sigma`` in ``z``, cross-checked via polyphase."""
    direct = 1 - shift_sum(p, setup)
    via_polyphase = 1 - from_xi(polyphase_gram_sum(p, setup), setup)
    gap = (direct - via_polyphase).max_abs()
    if gap > tol:
        raise InternalConsistencyError(f"shift-sum and polyphase defects differ by {gap:.3e}")
    return via_polyphase


def defect_xi(p: LaurentPoly, setup: DilationSetup) -> LaurentPoly:
    """The sub-QMF defect read in ``xi``: ``1 - ||f_p(xi)||^2``."""
    return 1 - polyphase_gram_sum(p, setup)


def qmf_check(p: LaurentPoly, setup: DilationSetup, tol: float = 1e-12) -> bool:
    return subqmf_defect(p, setup).max_abs() <= tol


def default_grid(dim: int) -> int:
    return 64 if dim <= 2 else 32


def grid_min(f: LaurentPoly, n: int | None = None) -> float:
    """Minimum of ``Re f`` over the uniform ``n^d`` torus grid."""
    if not f:
        return 0.0
    n = default_grid(f.dim) if n is None else n
    return float(f.grid_values(n).real.min())
