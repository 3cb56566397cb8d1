"""Exact dense linear algebra over QQ and GF(p).

Everything reduces to one primitive, :func:`rref`. Over GF(p) it runs a
vectorised Gauss-Jordan in numpy int64 (p < 2**31 keeps products in range);
over QQ it delegates to sympy's ``DomainMatrix`` (gmpy2-backed rationals).

Matrices are lists of rows; vectors are tuples. Inputs may hold raw
numbers, outputs are always normalised field elements.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np
from sympy import QQ as SYMPY_QQ
from sympy.polys.matrices import DomainMatrix

from .errors import InputError, PreconditionError
from .fields import ExactField, PrimeField

Vector = tuple
Matrix = list

_INT64_SAFE_P = 2**31


def _rref_modp(rows: Sequence[Sequence[int]], ncols: int, p: int):
    dtype = np.int64 if p < _INT64_SAFE_P else object
    M = np.array([[x % p for x in r] for r in rows], dtype=dtype).reshape(len(rows), ncols)
    nrows = M.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if len(nz) == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            M[[r, k]] = M[[k, r]]
        M[r] = (M[r] * pow(int(M[r, c]), -1, p)) % p
        col = M[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if len(hit):
            M[hit] = (M[hit] - np.outer(col[hit], M[r])) % p
        pivots.append(c)
        r += 1
    return [[int(x) for x in row] for row in M[:r]], pivots


def _to_mpq(x):
    x = Fraction(x)
    return SYMPY_QQ(x.numerator, x.denominator)


def _rref_qq(rows: Sequence[Sequence], ncols: int):
    dm = DomainMatrix([[_to_mpq(x) for x in r] for r in rows], (len(rows), ncols), SYMPY_QQ)
    red, pivots = dm.rref()
    out = red.to_list()[: len(pivots)]
    return [[Fraction(int(x.numerator), int(x.denominator)) for x in row] for row in out], list(pivots)


def rref(F: ExactField, rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    rows = [list(r) for r in rows]
    if ncols is None:
        if not rows:
            raise InputError("ncols required for an empty matrix")
        ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise InputError("ragged matrix")
    if not rows or ncols == 0:
        return [], []
    if isinstance(F, PrimeField):
        return _rref_modp(rows, ncols, F.p)
    return _rref_qq(rows, ncols)


def rank(F: ExactField, rows: Sequence[Sequence], ncols: int | None = None) -> int:
    return len(rref(F, rows, ncols)[1])


def nullspace(F: ExactField, M: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of {x : M x = 0}; one vector per free column, in column order."""
    red, pivots = rref(F, M, ncols) if M else ([], [])
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [F.zero] * ncols
        v[free] = F.one
        for row, pc in zip(red, pivots):
            v[pc] = F(-row[free])
        basis.append(tuple(v))
    return basis


def solve(F: ExactField, M: Sequence[Sequence], b: Sequence, ncols: int):
    """One solution x of M x = b, or None when the system is inconsistent."""
    if not M:
        return tuple([F.zero] * ncols) if all(F(x) == 0 for x in b) else None
    aug = [list(row) + [bi] for row, bi in zip(M, b)]
    red, pivots = rref(F, aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [F.zero] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = F(row[ncols])
    return tuple(x)


class Span:
    """A subspace held as its canonical RREF basis.

    Coordinates of a member v are read off the pivot columns, which makes
    membership tests and coordinate extraction a single pass.
    """

    def __init__(self, F: ExactField, vectors: Sequence[Sequence], dim: int):
        self.field = F
        self.ambient = dim
        red, piv = rref(F, vectors, dim) if vectors else ([], [])
        self.basis = [tuple(r) for r in red]
        self.pivots = piv

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, v: Sequence):
        """Coordinates of v in :attr:`basis`; None if v is not in the span."""
        F = self.field
        c = [F(v[p]) for p in self.pivots]
        recon = [0] * self.ambient
        for ci, row in zip(c, self.basis):
            if ci:
                for k, x in enumerate(row):
                    if x:
                        recon[k] += ci * x
        if any(F(recon[k] - v[k]) != 0 for k in range(self.ambient)):
            return None
        return tuple(c)

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def element(self, coords: Sequence) -> Vector:
        F = self.field
        out = [0] * self.ambient
        for ci, row in zip(coords, self.basis):
            if ci:
                for k, x in enumerate(row):
                    if x:
                        out[k] += ci * x
        return tuple(F(x) for x in out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Span):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, tuple(self.basis)))

    def __repr__(self):
        return f"Span(dim={self.dim}, ambient={self.ambient})"


class IncrementalSpan:
    """A growing subspace kept in fully reduced echelon form.

    ``add`` reduces a vector against the current rows and keeps the residue
    when it is nonzero; cheap enough for closure loops that test thousands
    of products one at a time.
    """

    def __init__(self, F: ExactField, dim: int):
        self.field = F
        self.ambient = dim
        self.rows: list[list] = []
        self.pivots: list[int] = []

    def reduce(self, v: Sequence) -> list:
        F = self.field
        w = [F(x) for x in v]
        for row, pc in zip(self.rows, self.pivots):
            c = w[pc]
            if c:
                for k, x in enumerate(row):
                    if x:
                        w[k] = F(w[k] - c * x)
        return w

    def add(self, v: Sequence) -> bool:
        F = self.field
        w = self.reduce(v)
        pc = next((k for k, x in enumerate(w) if x), None)
        if pc is None:
            return False
        s = F.inv(w[pc])
        w = [F(x * s) for x in w]
        for row in self.rows:
            c = row[pc]
            if c:
                for k, x in enumerate(w):
                    if x:
                        row[k] = F(row[k] - c * x)
        self.rows.append(w)
        self.pivots.append(pc)
        return True

    def __contains__(self, v) -> bool:
        return not any(self.reduce(v))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def basis(self) -> list[Vector]:
        return Span(self.field, self.rows, self.ambient).basis


def span_equal(F: ExactField, U: Sequence[Sequence], V: Sequence[Sequence], dim: int) -> bool:
    return Span(F, U, dim) == Span(F, V, dim)


def intersect(F: ExactField, U: Sequence[Sequence], V: Sequence[Sequence], dim: int) -> list[Vector]:
    """Basis of span(U) ∩ span(V)."""
    U = Span(F, U, dim).basis
    V = Span(F, V, dim).basis
    if not U or not V:
        return []
    # a.U = b.V  <=>  [U; -V]^T (a, b) = 0
    cols = list(U) + [tuple(F(-x) for x in v) for v in V]
    M = [[c[k] for c in cols] for k in range(dim)]
    out = []
    for sol in nullspace(F, M, len(cols)):
        a = sol[: len(U)]
        vec = [0] * dim
        for ai, u in zip(a, U):
            if ai:
                for k, x in enumerate(u):
                    vec[k] += ai * x
        out.append(tuple(F(x) for x in vec))
    return Span(F, out, dim).basis


def identity(F: ExactField, n: int) -> Matrix:
    return [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]


def zeros(F: ExactField, r: int, c: int) -> Matrix:
    return [[F.zero] * c for _ in range(r)]


def transpose(M: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*M)] if M else []


def matmul(F: ExactField, A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    if not A:
        return []
    inner = len(A[0])
    if inner != len(B):
        raise InputError(f"shape mismatch in product: {len(A)}x{inner} times {len(B)}x?")
    ncols = len(B[0]) if B else 0
    Bt = list(zip(*B)) if B else [()] * ncols
    out = []
    for row in A:
        nz = [(k, a) for k, a in enumerate(row) if a]
        out.append([F(sum(a * col[k] for k, a in nz)) for col in Bt])
    return out


def mat_vec(F: ExactField, M: Sequence[Sequence], v: Sequence) -> Vector:
    nz = [(k, x) for k, x in enumerate(v) if x]
    return tuple(F(sum(row[k] * x for k, x in nz)) for row in M)


def mat_add(F: ExactField, A, B) -> Matrix:
    return [[F(a + b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(F: ExactField, A, B) -> Matrix:
    return [[F(a - b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(F: ExactField, c, A) -> Matrix:
    return [[F(c * a) for a in row] for row in A]


def inverse(F: ExactField, M: Sequence[Sequence]) -> Matrix:
    n = len(M)
    if any(len(r) != n for r in M):
        raise InputError("inverse of a non-square matrix")
    if n == 0:
        return []
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(M)]
    red, pivots = rref(F, aug, 2 * n)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise PreconditionError("matrix is singular")
    return [[F(x) for x in row[n:]] for row in red]


def is_invertible(F: ExactField, M: Sequence[Sequence]) -> bool:
    return len(M) == (len(M[0]) if M else 0) and rank(F, M, len(M)) == len(M)


def as_tuple_matrix(F: ExactField, M: Sequence[Sequence]) -> tuple:
    return tuple(tuple(F(x) for x in row) for row in M)


def trace(F: ExactField, M: Sequence[Sequence]):
    return F(sum(M[i][i] for i in range(len(M))))


def column_space(F: ExactField, M: Sequence[Sequence]) -> list[Vector]:
    """Canonical basis of the column space (RREF of the transpose)."""
    if not M:
        return []
    return Span(F, transpose(M), len(M)).basis
