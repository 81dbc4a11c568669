"""Sparse multivariate Laurent polynomials with complex coefficients.

Two classes live here:

``LaurentPoly``
    a scalar polynomial stored as ``{exponent tuple: complex}``.
``PolyMatrix``
    a matrix-valued polynomial stored as ``{exponent tuple: ndarray}``,
    i.e. ``P(z) = sum_a C_a z^a``.  Column vectors are ``PolyMatrix``
    objects with one column.

Exponent tuples are ordered with the *last* coordinate most significant,
so for ``d = 2`` the order is ``(0,0), (1,0), (0,1), (1,1)``.  Every
iteration, serialization and index set in the package uses this order.

Two different adjoints appear in the package:

* ``conj_reflect`` / ``adjoint`` is the torus adjoint ``p*(z) = conj(p(z))``
  for ``|z_j| = 1``; it conjugates coefficients and negates exponents.
* ``star`` is the analytic adjoint ``p*(z) = p(conj(z))^*``; it conjugates
  coefficients and keeps exponents.
"""

from __future__ import annotations

import json
from typing import Iterable, Mapping, Sequence

import numpy as np

PRUNE_REL = 1e-14
DEFAULT_EPS = 1e-12

Exponent = tuple[int, ...]


def lex_key(alpha: Sequence[int]) -> tuple[int, ...]:
    """Sort key for exponents: last coordinate most significant."""
    return tuple(reversed(tuple(alpha)))


def _prune(terms: dict, rel: float = PRUNE_REL) -> dict:
    if not terms:
        return terms
    cutoff = rel * max(1.0, max(abs(c) for c in terms.values()))
    return {k: v for k, v in terms.items() if abs(v) >= cutoff}


class LaurentPoly:
    """Immutable sparse Laurent polynomial in ``dim`` variables.

    Parameters
    ----------
    dim : int
        Number of variables.
    terms : mapping or iterable of (exponent, coefficient) pairs
        Coefficients are stored as python complex numbers.  Small
        coefficients are pruned relative to the largest one.
    """

    __slots__ = ("dim", "_terms")
    __array_ufunc__ = None

    def __init__(self, dim: int, terms: Mapping | Iterable = (), *, prune: bool = True):
        if dim < 1:
            raise ValueError("dimension must be positive")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, complex] = {}
        for alpha, c in items:
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != dim:
                raise ValueError(f"exponent {alpha} does not have length {dim}")
            acc[alpha] = acc.get(alpha, 0j) + complex(c)
        if prune:
            acc = _prune(acc)
        else:
            acc = {k: v for k, v in acc.items() if v != 0}
        self.dim = dim
        self._terms = dict(sorted(acc.items(), key=lambda kv: lex_key(kv[0])))

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, dim: int) -> "LaurentPoly":
        return cls(dim)

    @classmethod
    def const(cls, dim: int, c: complex = 1.0) -> "LaurentPoly":
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def monomial(cls, alpha: Sequence[int], c: complex = 1.0) -> "LaurentPoly":
        return cls(len(alpha), {tuple(alpha): c})

    @classmethod
    def var(cls, dim: int, j: int) -> "LaurentPoly":
        """The coordinate function ``z_j`` (0-based ``j``)."""
        alpha = [0] * dim
        alpha[j] = 1
        return cls(dim, {tuple(alpha): 1.0})

    @classmethod
    def from_univariate(cls, coeffs: Sequence[complex], theta: Sequence[int], start: int = 0) -> "LaurentPoly":
        """``sum_k coeffs[k] * (z^theta)^(start + k)``."""
        theta = tuple(int(t) for t in theta)
        terms = {}
        for k, c in enumerate(coeffs):
            alpha = tuple((start + k) * t for t in theta)
            terms[alpha] = terms.get(alpha, 0j) + c
        return cls(len(theta), terms)

    # -- container protocol -------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def exponents(self) -> list[Exponent]:
        return list(self._terms)

    def coeff(self, alpha: Sequence[int]) -> complex:
        return self._terms.get(tuple(alpha), 0j)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self, eps: float = DEFAULT_EPS) -> bool:
        return self.max_abs() <= eps

    def max_abs(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def degree_box(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Per-variable (min, max) exponents; zeros for the zero polynomial."""
        if not self._terms:
            return (0,) * self.dim, (0,) * self.dim
        exps = np.array(list(self._terms), dtype=int)
        return tuple(exps.min(axis=0).tolist()), tuple(exps.max(axis=0).tolist())

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.dim != self.dim:
                raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
            return other
        if np.isscalar(other):
            return LaurentPoly.const(self.dim, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for k, v in other.items():
            acc[k] = acc.get(k, 0j) + v
        return LaurentPoly(self.dim, acc)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.dim, {k: -v for k, v in self.items()}, prune=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other):
            return LaurentPoly(self.dim, {k: v * other for k, v in self.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict[Exponent, complex] = {}
        for a, ca in self.items():
            for b, cb in other.items():
                g = tuple(x + y for x, y in zip(a, b))
                acc[g] = acc.get(g, 0j) + ca * cb
        return LaurentPoly(self.dim, acc)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = LaurentPoly.const(self.dim)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self):
        return hash((self.dim, tuple(self._terms.items())))

    def approx_eq(self, other: "LaurentPoly", eps: float = DEFAULT_EPS) -> bool:
        return (self - other).max_abs() <= eps

    # -- involutions and substitutions --------------------------------
    def conj_reflect(self) -> "LaurentPoly":
        """Torus adjoint: coefficient of ``-a`` is ``conj(p(a))``."""
        return LaurentPoly(
            self.dim, {tuple(-a for a in k): v.conjugate() for k, v in self.items()}, prune=False
        )

    adjoint = conj_reflect

    def star(self) -> "LaurentPoly":
        """Analytic adjoint ``p(conj z)^*``: conjugate coefficients only."""
        return LaurentPoly(self.dim, {k: v.conjugate() for k, v in self.items()}, prune=False)

    def is_hermitian(self, eps: float = DEFAULT_EPS) -> bool:
        return self.approx_eq(self.conj_reflect(), eps)

    def map_exponents(self, matrix, dim: int | None = None) -> "LaurentPoly":
        """Substitute ``z -> z^M``: exponent ``a`` becomes ``M @ a``."""
        mat = np.asarray(matrix, dtype=int)
        out_dim = mat.shape[0] if dim is None else dim
        terms = {tuple((mat @ np.array(k)).tolist()): v for k, v in self.items()}
        return LaurentPoly(out_dim, terms, prune=False)

    def scale_variables(self, phases: Sequence[complex]) -> "LaurentPoly":
        """``p(w_1 z_1, ..., w_d z_d)`` for given complex ``w``."""
        w = [complex(x) for x in phases]
        terms = {}
        for k, v in self.items():
            f = v
            for wj, kj in zip(w, k):
                f *= wj**kj
            terms[k] = f
        return LaurentPoly(self.dim, terms)

    # -- evaluation ---------------------------------------------------
    def __call__(self, z: Sequence[complex]) -> complex:
        return lp_eval(self, z)

    def grid_values(self, n: int) -> np.ndarray:
        """Values on the uniform ``n^d`` torus grid ``z_j = exp(2 pi i k_j / n)``.

        Exponents only matter modulo ``n`` on this grid, so the
        evaluation is an exact inverse FFT of the wrapped coefficients.
        """
        arr = np.zeros((n,) * self.dim, dtype=complex)
        for k, v in self.items():
            arr[tuple(a % n for a in k)] += v
        return np.fft.ifftn(arr) * n**self.dim

    # -- serialization ------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "terms": [{"exp": list(k), "re": v.real, "im": v.imag} for k, v in self.items()],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "LaurentPoly":
        dim = int(data["dim"])
        terms = [(t["exp"], complex(t.get("re", 0.0), t.get("im", 0.0))) for t in data["terms"]]
        # bit-exact round trip: no pruning on load
        return cls(dim, terms, prune=False)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "LaurentPoly":
        return cls.from_dict(json.loads(text))

    def __repr__(self) -> str:
        if not self._terms:
            return f"LaurentPoly({self.dim}, 0)"
        body = " + ".join(f"({v:.6g})*z^{list(k)}" for k, v in self.items())
        return f"LaurentPoly({self.dim}, {body})"


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def lp_conj_reflect(p: LaurentPoly) -> LaurentPoly:
    return p.conj_reflect()


def lp_eval(p: LaurentPoly, z: Sequence[complex]) -> complex:
    """Evaluate ``sum_a p(a) z^a`` at a point with nonzero coordinates where needed."""
    z = [complex(x) for x in z]
    if len(z) != p.dim:
        raise ValueError(f"point has {len(z)} coordinates, polynomial has {p.dim} variables")
    total = 0j
    for k, v in p.items():
        term = v
        for zj, kj in zip(z, k):
            if zj == 0 and kj < 0:
                raise ZeroDivisionError("zero coordinate with a negative exponent")
            term *= zj**kj
        total += term
    return total


class PolyMatrix:
    """Matrix-valued Laurent polynomial ``sum_a C_a z^a``.

    ``coeffs`` maps exponent tuples to complex arrays of shape ``shape``.
    """

    __slots__ = ("dim", "shape", "_coeffs")
    __array_ufunc__ = None  # make ndarray @ PolyMatrix defer to __rmatmul__

    def __init__(self, dim: int, shape: tuple[int, int], coeffs: Mapping | None = None, *, prune: bool = True):
        self.dim = dim
        self.shape = (int(shape[0]), int(shape[1]))
        acc: dict[Exponent, np.ndarray] = {}
        for alpha, c in (coeffs or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != dim:
                raise ValueError(f"exponent {alpha} does not have length {dim}")
            c = np.asarray(c, dtype=complex).reshape(self.shape)
            acc[alpha] = acc[alpha] + c if alpha in acc else c.copy()
        if prune and acc:
            scale = max(1.0, max(float(np.abs(c).max(initial=0.0)) for c in acc.values()))
            cut = PRUNE_REL * scale
            for c in acc.values():
                c[np.abs(c) < cut] = 0
            acc = {k: c for k, c in acc.items() if np.any(c != 0)}
        self._coeffs = dict(sorted(acc.items(), key=lambda kv: lex_key(kv[0])))

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, dim: int, mat) -> "PolyMatrix":
        mat = np.atleast_2d(np.asarray(mat, dtype=complex))
        return cls(dim, mat.shape, {(0,) * dim: mat})

    @classmethod
    def identity(cls, dim: int, n: int) -> "PolyMatrix":
        return cls.constant(dim, np.eye(n))

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[LaurentPoly]]) -> "PolyMatrix":
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        dim = entries[0][0].dim
        coeffs: dict[Exponent, np.ndarray] = {}
        for i, row in enumerate(entries):
            if len(row) != cols:
                raise ValueError("ragged entry grid")
            for j, p in enumerate(row):
                if p.dim != dim:
                    raise ValueError("entries do not share a dimension")
                for k, v in p.items():
                    if k not in coeffs:
                        coeffs[k] = np.zeros((rows, cols), dtype=complex)
                    coeffs[k][i, j] += v
        return cls(dim, (rows, cols), coeffs, prune=False)

    @classmethod
    def column(cls, polys: Sequence[LaurentPoly], dim: int | None = None) -> "PolyMatrix":
        if not polys:
            return cls(dim or 1, (0, 1))
        return cls.from_entries([[p] for p in polys])

    @classmethod
    def row(cls, polys: Sequence[LaurentPoly], dim: int | None = None) -> "PolyMatrix":
        if not polys:
            return cls(dim or 1, (1, 0))
        return cls.from_entries([list(polys)])

    @classmethod
    def diag_monomials(cls, dim: int, block_sizes: Sequence[int]) -> "PolyMatrix":
        """``E(z) = diag(I_{n_1} z_1, ..., I_{n_d} z_d)``."""
        n = int(sum(block_sizes))
        coeffs = {}
        start = 0
        for j, nj in enumerate(block_sizes):
            if nj:
                alpha = [0] * dim
                alpha[j] = 1
                c = np.zeros((n, n), dtype=complex)
                c[start:start + nj, start:start + nj] = np.eye(nj)
                coeffs[tuple(alpha)] = c
            start += nj
        return cls(dim, (n, n), coeffs, prune=False)

    # -- access -------------------------------------------------------
    def items(self):
        return self._coeffs.items()

    def coeff(self, alpha: Sequence[int]) -> np.ndarray:
        return self._coeffs.get(tuple(alpha), np.zeros(self.shape, dtype=complex)).copy()

    def entry(self, i: int, j: int) -> LaurentPoly:
        return LaurentPoly(self.dim, {k: c[i, j] for k, c in self.items()}, prune=False)

    def entries(self) -> list[list[LaurentPoly]]:
        return [[self.entry(i, j) for j in range(self.shape[1])] for i in range(self.shape[0])]

    def column_polys(self, j: int = 0) -> list[LaurentPoly]:
        return [self.entry(i, j) for i in range(self.shape[0])]

    def max_abs(self) -> float:
        return max((float(np.abs(c).max(initial=0.0)) for c in self._coeffs.values()), default=0.0)

    def degree_box(self):
        if not self._coeffs:
            return (0,) * self.dim, (0,) * self.dim
        exps = np.array(list(self._coeffs), dtype=int)
        return tuple(exps.min(axis=0).tolist()), tuple(exps.max(axis=0).tolist())

    def __call__(self, z: Sequence[complex]) -> np.ndarray:
        z = [complex(x) for x in z]
        out = np.zeros(self.shape, dtype=complex)
        for k, c in self.items():
            w = 1.0 + 0j
            for zj, kj in zip(z, k):
                w *= zj**kj
            out += w * c
        return out

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if isinstance(other, np.ndarray):
            other = PolyMatrix.constant(self.dim, other)
        if other.shape != self.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        acc = {k: c.copy() for k, c in self.items()}
        for k, c in other.items():
            acc[k] = acc[k] + c if k in acc else c.copy()
        return PolyMatrix(self.dim, self.shape, acc)

    def __neg__(self):
        return PolyMatrix(self.dim, self.shape, {k: -c for k, c in self.items()}, prune=False)

    def __sub__(self, other):
        if isinstance(other, np.ndarray):
            other = PolyMatrix.constant(self.dim, other)
        return self + (-other)

    def __mul__(self, scalar):
        return PolyMatrix(self.dim, self.shape, {k: c * scalar for k, c in self.items()})

    __rmul__ = __mul__

    def __matmul__(self, other) -> "PolyMatrix":
        if isinstance(other, np.ndarray):
            other = np.atleast_2d(other)
            if self.shape[1] != other.shape[0]:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            return PolyMatrix(self.dim, (self.shape[0], other.shape[1]), {k: c @ other for k, c in self.items()})
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        acc: dict[Exponent, np.ndarray] = {}
        for a, ca in self.items():
            for b, cb in other.items():
                g = tuple(x + y for x, y in zip(a, b))
                prod = ca @ cb
                acc[g] = acc[g] + prod if g in acc else prod
        return PolyMatrix(self.dim, (self.shape[0], other.shape[1]), acc)

    def __rmatmul__(self, other: np.ndarray) -> "PolyMatrix":
        other = np.atleast_2d(other)
        if other.shape[1] != self.shape[0]:
            raise ValueError(f"shape mismatch {other.shape} @ {self.shape}")
        return PolyMatrix(self.dim, (other.shape[0], self.shape[1]), {k: other @ c for k, c in self.items()})

    def adjoint(self) -> "PolyMatrix":
        """Torus adjoint: conjugate transpose with exponents negated."""
        return PolyMatrix(
            self.dim, self.shape[::-1], {tuple(-a for a in k): c.conj().T for k, c in self.items()}, prune=False
        )

    def star(self) -> "PolyMatrix":
        """Analytic adjoint ``P(conj z)^*``: conjugate transpose, exponents kept."""
        return PolyMatrix(self.dim, self.shape[::-1], {k: c.conj().T for k, c in self.items()}, prune=False)

    def take_rows(self, idx) -> "PolyMatrix":
        idx = list(idx)
        return PolyMatrix(self.dim, (len(idx), self.shape[1]), {k: c[idx, :] for k, c in self.items()})

    def take_cols(self, idx) -> "PolyMatrix":
        idx = list(idx)
        return PolyMatrix(self.dim, (self.shape[0], len(idx)), {k: c[:, idx] for k, c in self.items()})

    @staticmethod
    def vstack(blocks: Sequence["PolyMatrix"]) -> "PolyMatrix":
        dim = blocks[0].dim
        cols = blocks[0].shape[1]
        rows = sum(b.shape[0] for b in blocks)
        acc: dict[Exponent, np.ndarray] = {}
        start = 0
        for b in blocks:
            if b.shape[1] != cols:
                raise ValueError("column counts differ")
            for k, c in b.items():
                if k not in acc:
                    acc[k] = np.zeros((rows, cols), dtype=complex)
                acc[k][start:start + b.shape[0]] += c
            start += b.shape[0]
        return PolyMatrix(dim, (rows, cols), acc, prune=False)

    def to_list(self) -> list[list[dict]]:
        return [[p.to_dict() for p in row] for row in self.entries()]

    def __repr__(self) -> str:
        return f"PolyMatrix(dim={self.dim}, shape={self.shape}, terms={len(self._coeffs)})"
