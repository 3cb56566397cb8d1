"""Finite-dimensional associative unital algebras given by structure constants.

``b_i * b_j = sum_k c[i][j][k] b_k``. The table is stored sparsely because
the algebras that show up here (matrix algebras, tensor products, Peirce
corners) have very few nonzero constants per basis pair.
"""

from __future__ import annotations

from functools import cached_property
from typing import Optional, Sequence

from ..errors import InputError, PreconditionError
from ..fields import QQ, ExactField
from .. import linalg as la

Element = tuple


class StructureAlgebra:
    def __init__(self, field: ExactField, dim: int, table, unit: Sequence, *, name: str = "", validate: bool = True):
        """``table`` is either a dense d x d x d nested list or a dict
        ``{(i, j): {k: c}}`` holding the nonzero constants."""
        if not isinstance(dim, int) or dim < 1:
            raise InputError(f"algebra dimension must be a positive integer, got {dim!r}")
        self.field = field
        self.dim = dim
        self.name = name
        F = field
        rows: list[list[tuple]] = [[() for _ in range(dim)] for _ in range(dim)]
        if isinstance(table, dict):
            for (i, j), entry in table.items():
                if not (0 <= i < dim and 0 <= j < dim):
                    raise InputError(f"basis index out of range in product ({i}, {j})")
                items = tuple(sorted((k, F(c)) for k, c in entry.items() if F(c) != 0))
                if any(not 0 <= k < dim for k, _ in items):
                    raise InputError("basis index out of range in structure constants")
                rows[i][j] = items
        else:
            if len(table) != dim or any(len(r) != dim for r in table) or any(
                len(v) != dim for r in table for v in r
            ):
                raise InputError(f"structure constants must have shape {dim}x{dim}x{dim}")
            for i in range(dim):
                for j in range(dim):
                    rows[i][j] = tuple((k, F(c)) for k, c in enumerate(table[i][j]) if F(c) != 0)
        self._table = rows
        if len(unit) != dim:
            raise InputError(f"unit has {len(unit)} coordinates, expected {dim}")
        self.unit = tuple(F(x) for x in unit)
        if validate:
            self.validate()

    # -- basic arithmetic -------------------------------------------------

    def basis(self, i: int) -> Element:
        F = self.field
        return tuple(F.one if k == i else F.zero for k in range(self.dim))

    @property
    def one(self) -> Element:
        return self.unit

    @property
    def zero(self) -> Element:
        return tuple([self.field.zero] * self.dim)

    def element(self, coords: Sequence) -> Element:
        if len(coords) != self.dim:
            raise InputError(f"element has {len(coords)} coordinates, expected {self.dim}")
        return tuple(self.field(x) for x in coords)

    def product_of_basis(self, i: int, j: int):
        return self._table[i][j]

    def mul(self, x: Sequence, y: Sequence) -> Element:
        F = self.field
        acc = [0] * self.dim
        ynz = [(j, b) for j, b in enumerate(y) if b]
        for i, a in enumerate(x):
            if not a:
                continue
            row = self._table[i]
            for j, b in ynz:
                ab = a * b
                for k, c in row[j]:
                    acc[k] += ab * c
        return tuple(F(v) for v in acc)

    def add(self, x, y) -> Element:
        F = self.field
        return tuple(F(a + b) for a, b in zip(x, y))

    def sub(self, x, y) -> Element:
        F = self.field
        return tuple(F(a - b) for a, b in zip(x, y))

    def scale(self, c, x) -> Element:
        F = self.field
        return tuple(F(c * a) for a in x)

    def combo(self, coeffs: Sequence, elements: Sequence[Sequence]) -> Element:
        F = self.field
        acc = [0] * self.dim
        for c, e in zip(coeffs, elements):
            if c:
                for k, v in enumerate(e):
                    if v:
                        acc[k] += c * v
        return tuple(F(v) for v in acc)

    def power(self, x, e: int) -> Element:
        out = self.one
        for _ in range(e):
            out = self.mul(out, x)
        return out

    def left_matrix(self, x: Sequence) -> list:
        """Matrix of ``y -> x*y``; column k holds the coordinates of ``x*b_k``."""
        if len(x) != self.dim:
            raise InputError(f"element has {len(x)} coordinates, expected {self.dim}")
        F = self.field
        d = self.dim
        M = [[0] * d for _ in range(d)]
        for i, a in enumerate(x):
            if not a:
                continue
            row = self._table[i]
            for k in range(d):
                for r, c in row[k]:
                    M[r][k] += a * c
        return [[F(v) for v in r] for r in M]

    def right_matrix(self, x: Sequence) -> list:
        """Matrix of ``y -> y*x``."""
        if len(x) != self.dim:
            raise InputError(f"element has {len(x)} coordinates, expected {self.dim}")
        F = self.field
        d = self.dim
        M = [[0] * d for _ in range(d)]
        for j, a in enumerate(x):
            if not a:
                continue
            for k in range(d):
                for r, c in self._table[k][j]:
                    M[r][k] += a * c
        return [[F(v) for v in r] for r in M]

    def inverse(self, x: Sequence) -> Element:
        y = la.solve(self.field, self.left_matrix(x), self.one, self.dim)
        if y is None or self.mul(y, x) != self.one:
            raise PreconditionError("element is not invertible")
        return y

    def is_unit(self, x: Sequence) -> bool:
        return la.is_invertible(self.field, self.left_matrix(x))

    def commutator(self, x, y) -> Element:
        return self.sub(self.mul(x, y), self.mul(y, x))

    # -- validation --------------------------------------------------------

    def validate(self) -> None:
        d = self.dim
        e = [self.basis(i) for i in range(d)]
        for i in range(d):
            if self.mul(self.one, e[i]) != e[i] or self.mul(e[i], self.one) != e[i]:
                raise InputError(f"unit law fails on basis element {i}", )
        prods = [[self._vec(self._table[i][j]) for j in range(d)] for i in range(d)]
        for i in range(d):
            for j in range(d):
                ij = prods[i][j]
                for k in range(d):
                    lhs = self.mul(ij, e[k])
                    rhs = self.mul(e[i], prods[j][k])
                    if lhs != rhs:
                        raise InputError(f"associativity fails on basis triple ({i}, {j}, {k})")

    def _vec(self, items) -> Element:
        F = self.field
        v = [F.zero] * self.dim
        for k, c in items:
            v[k] = c
        return tuple(v)

    # -- structure -----------------------------------------------------------

    def constants(self) -> list:
        """Dense structure constants ``c[i][j][k]``."""
        return [[list(self._vec(self._table[i][j])) for j in range(self.dim)] for i in range(self.dim)]

    def sparse_constants(self) -> dict:
        return {(i, j): dict(self._table[i][j]) for i in range(self.dim) for j in range(self.dim) if self._table[i][j]}

    @cached_property
    def generators(self) -> list[Element]:
        """A small generating set, picked greedily from the basis."""
        F, d = self.field, self.dim
        gens: list[Element] = []
        span = la.IncrementalSpan(F, d)
        span.add(self.one)
        for i in range(d):
            b = self.basis(i)
            if b in span:
                continue
            gens.append(b)
            queue = [tuple(r) for r in span.rows]
            while queue:
                v = queue.pop()
                for g in gens:
                    w = self.mul(g, v)
                    if span.add(w):
                        queue.append(w)
            if span.dim == d:
                break
        return gens

    def commutant(self, elements: Sequence[Sequence]) -> list[Element]:
        """Basis of ``{z : z*s = s*z for s in elements}``."""
        F, d = self.field, self.dim
        eqs = []
        for s in elements:
            R = self.right_matrix(s)
            L = self.left_matrix(s)
            eqs.extend([F(a - b) for a, b in zip(ra, rb)] for ra, rb in zip(R, L))
        if not eqs:
            return [self.basis(i) for i in range(d)]
        return la.Span(F, la.nullspace(F, eqs, d), d).basis

    @cached_property
    def center(self) -> list[Element]:
        return self.commutant(self.generators)

    def is_commutative(self) -> bool:
        return len(self.center) == self.dim

    def is_central(self) -> bool:
        return len(self.center) == 1

    def __repr__(self):
        label = self.name or "StructureAlgebra"
        return f"<{label} dim={self.dim} over {self.field}>"

    # -- JSON ------------------------------------------------------------------

    def to_json(self) -> dict:
        F = self.field
        return {
            "field": F.to_json(),
            "dim": self.dim,
            "constants": [[[F.format(c) for c in v] for v in row] for row in self.constants()],
            "unit": [F.format(c) for c in self.unit],
        }


def is_subspace_closed(A: StructureAlgebra, basis: Sequence[Sequence]) -> bool:
    S = la.Span(A.field, basis, A.dim)
    return A.one in S and all(A.mul(x, y) in S for x in S.basis for y in S.basis)


class AlgebraMorphism:
    """A unital algebra map; ``matrix`` column j holds the image of ``b_j``."""

    def __init__(self, source: StructureAlgebra, target: StructureAlgebra, matrix, *, validate=True):
        if source.field != target.field:
            raise InputError("source and target algebras live over different fields")
        F = source.field
        if len(matrix) != target.dim or any(len(r) != source.dim for r in matrix):
            raise InputError(f"morphism matrix must be {target.dim}x{source.dim}")
        self.source = source
        self.target = target
        self.matrix = [[F(x) for x in row] for row in matrix]
        if validate:
            self.validate()

    @classmethod
    def from_images(cls, source, target, images: Sequence[Sequence], **kw) -> "AlgebraMorphism":
        if len(images) != source.dim:
            raise InputError("need one image per source basis element")
        return cls(source, target, la.transpose([list(v) for v in images]), **kw)

    def image_of_basis(self, j: int) -> Element:
        return tuple(row[j] for row in self.matrix)

    def __call__(self, x: Sequence) -> Element:
        if len(x) != self.source.dim:
            raise InputError("element does not belong to the source algebra")
        return la.mat_vec(self.source.field, self.matrix, x)

    def validate(self) -> None:
        S, T = self.source, self.target
        if self(S.one) != T.one:
            raise InputError("morphism is not unital")
        imgs = [self.image_of_basis(j) for j in range(S.dim)]
        for i in range(S.dim):
            for j in range(S.dim):
                lhs = self(S._vec(S.product_of_basis(i, j)))
                if lhs != T.mul(imgs[i], imgs[j]):
                    raise InputError(f"morphism is not multiplicative on basis pair ({i}, {j})")

    def compose(self, other: "AlgebraMorphism") -> "AlgebraMorphism":
        """``self o other``."""
        if other.target is not self.source and other.target.dim != self.source.dim:
            raise InputError("morphisms are not composable")
        return AlgebraMorphism(other.source, self.target,
                               la.matmul(self.source.field, self.matrix, other.matrix), validate=False)

    def rank(self) -> int:
        return la.rank(self.source.field, self.matrix, self.source.dim)

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_bijective(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()

    def image(self) -> list[Element]:
        return la.column_space(self.source.field, self.matrix)

    def inverse(self) -> "AlgebraMorphism":
        if not self.is_bijective():
            raise PreconditionError("morphism is not bijective")
        return AlgebraMorphism(self.target, self.source, la.inverse(self.source.field, self.matrix))

    def preserves_centers(self) -> bool:
        """Image of Z(source) lies in Z(target)."""
        T = self.target
        zt = la.Span(T.field, T.center, T.dim)
        return all(self(z) in zt for z in self.source.center)

    def to_json(self) -> dict:
        F = self.source.field
        return {"matrix": [[F.format(x) for x in row] for row in self.matrix]}


# ---------------------------------------------------------------------------
# constructors


def field_algebra(F: ExactField = QQ) -> StructureAlgebra:
    return StructureAlgebra(F, 1, {(0, 0): {0: 1}}, [1], name=f"{F}")


def matrix_algebra(n: int, F: ExactField = QQ) -> StructureAlgebra:
    """M_n(F) with basis E_ij at index i*n + j."""
    if not isinstance(n, int) or n < 1:
        raise InputError(f"matrix size must be a positive integer, got {n!r}")
    table = {}
    for i in range(n):
        for j in range(n):
            for l in range(n):
                table[(i * n + j, j * n + l)] = {i * n + l: 1}
    unit = [1 if (k // n) == (k % n) else 0 for k in range(n * n)]
    return StructureAlgebra(F, n * n, table, unit, name=f"M_{n}({F})", validate=n <= 4)


def matrix_degree(A: StructureAlgebra) -> int:
    n = int(round(A.dim ** 0.5))
    if n * n != A.dim:
        raise PreconditionError(f"dimension {A.dim} is not a perfect square")
    return n


def to_matrix(x: Sequence, n: int) -> list:
    """Element of matrix_algebra(n) as an n x n matrix."""
    return [list(x[i * n:(i + 1) * n]) for i in range(n)]


def from_matrix(M: Sequence[Sequence]) -> Element:
    return tuple(v for row in M for v in row)


def quaternion(a, b, F: ExactField = QQ) -> StructureAlgebra:
    """(a, b / F) with basis 1, i, j, k = ij."""
    if F.characteristic == 2:
        raise InputError("quaternion algebras need characteristic different from 2")
    a, b = F(a), F(b)
    if a == 0 or b == 0:
        raise InputError("quaternion parameters must be nonzero")
    ab = F(a * b)
    t = {
        (0, 0): {0: 1}, (0, 1): {1: 1}, (0, 2): {2: 1}, (0, 3): {3: 1},
        (1, 0): {1: 1}, (2, 0): {2: 1}, (3, 0): {3: 1},
        (1, 1): {0: a}, (2, 2): {0: b}, (3, 3): {0: -ab},
        (1, 2): {3: 1}, (2, 1): {3: -1},
        (1, 3): {2: a}, (3, 1): {2: -a},
        (2, 3): {1: -b}, (3, 2): {1: b},
    }
    return StructureAlgebra(F, 4, t, [1, 0, 0, 0], name=f"({F.format(a)},{F.format(b)}/{F})")


def quaternion_norm(A: StructureAlgebra, x: Sequence):
    """Reduced norm on the standard basis of :func:`quaternion`: x0^2 - a x1^2 - b x2^2 + ab x3^2."""
    F = A.field
    a = A.mul(A.basis(1), A.basis(1))[0]
    b = A.mul(A.basis(2), A.basis(2))[0]
    return F(x[0] ** 2 - a * x[1] ** 2 - b * x[2] ** 2 + a * b * x[3] ** 2)


def direct_sum(A: StructureAlgebra, B: StructureAlgebra) -> StructureAlgebra:
    if A.field != B.field:
        raise InputError("direct sum of algebras over different fields")
    dA = A.dim
    t = {}
    for (i, j), e in A.sparse_constants().items():
        t[(i, j)] = e
    for (i, j), e in B.sparse_constants().items():
        t[(i + dA, j + dA)] = {k + dA: c for k, c in e.items()}
    return StructureAlgebra(A.field, dA + B.dim, t, list(A.unit) + list(B.unit),
                            name=f"{A.name or 'A'}+{B.name or 'B'}", validate=False)


def opposite(A: StructureAlgebra) -> StructureAlgebra:
    t = {(j, i): e for (i, j), e in A.sparse_constants().items()}
    return StructureAlgebra(A.field, A.dim, t, A.unit, name=f"{A.name or 'A'}^op", validate=False)


def full_tensor(A: StructureAlgebra, B: StructureAlgebra) -> StructureAlgebra:
    """A (x)_F B with basis a_i (x) b_j at index i*dim(B) + j."""
    if A.field != B.field:
        raise InputError("tensor product of algebras over different fields")
    F, dB = A.field, B.dim
    t: dict = {}
    sa, sb = A.sparse_constants(), B.sparse_constants()
    for (i, k), ea in sa.items():
        for (j, l), eb in sb.items():
            entry = t.setdefault((i * dB + j, k * dB + l), {})
            for r, c1 in ea.items():
                for s, c2 in eb.items():
                    entry[r * dB + s] = F(entry.get(r * dB + s, 0) + c1 * c2)
    unit = [F(x * y) for x in A.unit for y in B.unit]
    return StructureAlgebra(F, A.dim * dB, t, unit, name=f"{A.name or 'A'}(x){B.name or 'B'}",
                            validate=False)


def truncated_polynomial(m: int, F: ExactField = QQ) -> StructureAlgebra:
    """F[x]/(x^m), basis 1, x, ..., x^(m-1)."""
    t = {(i, j): {i + j: 1} for i in range(m) for j in range(m) if i + j < m}
    return StructureAlgebra(F, m, t, [1] + [0] * (m - 1), name=f"{F}[x]/(x^{m})")


def split_commutative(k: int, F: ExactField = QQ) -> StructureAlgebra:
    """F^k with its primitive idempotents as basis."""
    return StructureAlgebra(F, k, {(i, i): {i: 1} for i in range(k)}, [1] * k, name=f"{F}^{k}")


def subalgebra(A: StructureAlgebra, vectors: Sequence[Sequence]):
    """The subalgebra spanned by ``vectors`` (must be closed and contain 1).

    Returns ``(S, inclusion)`` where the basis of S is the canonical RREF basis
    of the span.
    """
    F = A.field
    span = la.Span(F, vectors, A.dim)
    if A.one not in span:
        raise InputError("subspace does not contain the unit")
    basis = span.basis
    t = {}
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            c = span.coordinates(A.mul(x, y))
            if c is None:
                raise InputError("subspace is not closed under multiplication")
            nz = {k: v for k, v in enumerate(c) if v}
            if nz:
                t[(i, j)] = nz
    S = StructureAlgebra(F, len(basis), t, span.coordinates(A.one), validate=False)
    inc = AlgebraMorphism.from_images(S, A, basis)
    return S, inc


def corner(A: StructureAlgebra, e: Sequence):
    """The corner algebra ``eAe`` with unit ``e``.

    Returns ``(C, basis)`` where ``basis`` lists the elements of A forming
    the basis of C (so ``basis`` is the non-unital inclusion).
    """
    F = A.field
    M = la.matmul(F, A.left_matrix(e), A.right_matrix(e))
    span = la.Span(F, la.transpose(M), A.dim)
    basis = span.basis
    if not basis:
        raise InputError("corner of the zero idempotent")
    t = {}
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            c = span.coordinates(A.mul(x, y))
            if c is None:
                raise InputError("element is not idempotent")
            nz = {k: v for k, v in enumerate(c) if v}
            if nz:
                t[(i, j)] = nz
    unit = span.coordinates(tuple(e))
    if unit is None:
        raise InputError("element is not idempotent")
    return StructureAlgebra(F, len(basis), t, unit, validate=False), basis


def unit_embedding(A: StructureAlgebra) -> AlgebraMorphism:
    return AlgebraMorphism.from_images(field_algebra(A.field), A, [A.one])


def identity_morphism(A: StructureAlgebra) -> AlgebraMorphism:
    return AlgebraMorphism(A, A, la.identity(A.field, A.dim), validate=False)


def block_diagonal_embedding(n: int, k: int, F: ExactField = QQ, *, source=None, target=None) -> AlgebraMorphism:
    """M_n -> M_{nk}, x -> diag(x, ..., x)."""
    source = source or matrix_algebra(n, F)
    target = target or matrix_algebra(n * k, F)
    N = n * k
    images = []
    for i in range(n):
        for j in range(n):
            v = [0] * (N * N)
            for b in range(k):
                v[(b * n + i) * N + (b * n + j)] = 1
            images.append(v)
    return AlgebraMorphism.from_images(source, target, images)


def kronecker_embedding(n: int, k: int, F: ExactField = QQ, *, source=None, target=None) -> AlgebraMorphism:
    """M_n -> M_{nk}, x -> x (x) I_k (each entry blown up to a scalar block)."""
    source = source or matrix_algebra(n, F)
    target = target or matrix_algebra(n * k, F)
    N = n * k
    images = []
    for i in range(n):
        for j in range(n):
            v = [0] * (N * N)
            for b in range(k):
                v[(i * k + b) * N + (j * k + b)] = 1
            images.append(v)
    return AlgebraMorphism.from_images(source, target, images)


def inner_automorphism(A: StructureAlgebra, u: Sequence) -> AlgebraMorphism:
    """x -> u x u^{-1}."""
    uinv = A.inverse(u)
    M = la.matmul(A.field, A.left_matrix(u), A.right_matrix(uinv))
    return AlgebraMorphism(A, A, M, validate=False)


def conjugate_morphism(f: AlgebraMorphism, u: Sequence) -> AlgebraMorphism:
    """x -> u f(x) u^{-1}."""
    return inner_automorphism(f.target, u).compose(f)


def permutation_matrix(perm: Sequence[int], F: ExactField = QQ) -> list:
    """Matrix sending e_j to e_perm[j]."""
    n = len(perm)
    return [[F.one if perm[j] == i else F.zero for j in range(n)] for i in range(n)]


def algebra_from_json(obj) -> StructureAlgebra:
    from ..fields import field_from_json

    if not isinstance(obj, dict):
        raise InputError(f"algebra must be a JSON object, got {type(obj).__name__}")
    F = field_from_json(obj.get("field", "Q"))
    name = obj.get("name")
    if name is not None:
        if name == "matrix":
            return matrix_algebra(int(obj["n"]), F)
        if name == "quaternion":
            return quaternion(F(obj["a"]), F(obj["b"]), F)
        if name == "field":
            return field_algebra(F)
        if name == "truncated":
            return truncated_polynomial(int(obj["m"]), F)
        if name == "split":
            return split_commutative(int(obj["k"]), F)
        raise InputError(f"unknown named algebra {name!r}")
    try:
        return StructureAlgebra(F, int(obj["dim"]), obj["constants"], obj["unit"])
    except KeyError as exc:
        raise InputError(f"algebra is missing field {exc}") from exc


def morphism_from_json(obj, source: StructureAlgebra, target: StructureAlgebra) -> AlgebraMorphism:
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise InputError("morphism must be an object with a 'matrix'")
    F = source.field
    return AlgebraMorphism(source, target, [[F(x) for x in row] for row in obj["matrix"]])


def matrix_unit(n: int, i: int, j: int, F: ExactField = QQ) -> Element:
    v = [F.zero] * (n * n)
    v[i * n + j] = F.one
    return tuple(v)


def diag_element(entries: Sequence, F: ExactField = QQ) -> Element:
    n = len(entries)
    v = [F.zero] * (n * n)
    for i, e in enumerate(entries):
        v[i * n + i] = F(e)
    return tuple(v)


def optional_inverse(A: StructureAlgebra, x) -> Optional[Element]:
    try:
        return A.inverse(x)
    except PreconditionError:
        return None
