"""Relative tensor products A1 (x)_A A2 and the Amitsur equalizer."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .. import linalg as la
from ..errors import InputError, PreconditionError, PropertyViolation
from .algebra import AlgebraMorphism, StructureAlgebra, full_tensor, subalgebra
from .structure import centralizer


def _same_algebra(A: StructureAlgebra, B: StructureAlgebra) -> bool:
    return A is B or (A.field == B.field and A.dim == B.dim and A.unit == B.unit
                      and A.sparse_constants() == B.sparse_constants())


class RelativeTensor:
    """``A1 (x)_A A2`` as an explicit quotient of ``A1 (x)_F A2``.

    The relation space W is spanned by ``x f1(a) (x) y - x (x) f2(a) y`` for
    basis elements x, y and algebra generators a of A (generators suffice:
    the relation for a product follows from the relations for its factors).
    The quotient is modelled by the free columns of the reduced echelon form
    of W, so every class has a unique representative supported there.

    Basis element ``x_i (x) y_j`` of the full tensor sits at index
    ``i * dim(A2) + j``.
    """

    def __init__(self, f1: AlgebraMorphism, f2: AlgebraMorphism):
        if not _same_algebra(f1.source, f2.source):
            raise InputError("the two morphisms must share their source algebra")
        if not (f1.source.field == f1.target.field == f2.target.field):
            raise InputError("all algebras must live over one field")
        f1.validate()
        f2.validate()
        self.f1, self.f2 = f1, f2
        A1, A2 = f1.target, f2.target
        self.field = F = A1.field
        self.d1, self.d2 = A1.dim, A2.dim
        N = self.d1 * self.d2
        rows = []
        for a in f1.source.generators:
            R1 = A1.right_matrix(f1(a))
            L2 = A2.left_matrix(f2(a))
            for i in range(self.d1):
                for j in range(self.d2):
                    v = [0] * N
                    for r in range(self.d1):
                        if R1[r][i]:
                            v[r * self.d2 + j] += R1[r][i]
                    for s in range(self.d2):
                        if L2[s][j]:
                            v[i * self.d2 + s] -= L2[s][j]
                    if any(v):
                        rows.append(v)
        self.relations = la.Span(F, rows, N)
        piv = set(self.relations.pivots)
        self.free = [c for c in range(N) if c not in piv]

    @property
    def dim(self) -> int:
        return len(self.free)

    @property
    def ambient_dim(self) -> int:
        return self.d1 * self.d2

    def project(self, v: Sequence) -> tuple:
        """Quotient coordinates of a vector of the full tensor."""
        F = self.field
        w = list(v)
        for row, pc in zip(self.relations.basis, self.relations.pivots):
            c = w[pc]
            if c:
                for k, x in enumerate(row):
                    if x:
                        w[k] -= c * x
        return tuple(F(w[c]) for c in self.free)

    def section(self, q: Sequence) -> tuple:
        F = self.field
        v = [F.zero] * self.ambient_dim
        for c, x in zip(self.free, q):
            v[c] = F(x)
        return tuple(v)

    def pure(self, x: Sequence, y: Sequence) -> tuple:
        """Class of ``x (x) y``."""
        F = self.field
        v = [0] * self.ambient_dim
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        v[i * self.d2 + j] += a * b
        return self.project([F(t) for t in v])

    def left_linear(self) -> list:
        """Matrix of ``x -> x (x) 1``."""
        A1, one2 = self.f1.target, self.f2.target.one
        cols = [self.pure(A1.basis(i), one2) for i in range(self.d1)]
        return la.transpose(cols) if cols and cols[0] else [[] for _ in range(self.dim)]

    def right_linear(self) -> list:
        """Matrix of ``y -> 1 (x) y``."""
        A2, one1 = self.f2.target, self.f1.target.one
        cols = [self.pure(one1, A2.basis(j)) for j in range(self.d2)]
        return la.transpose(cols) if cols and cols[0] else [[] for _ in range(self.dim)]

    def in_relations(self, v: Sequence) -> bool:
        return v in self.relations

    @cached_property
    def _transport(self):
        A = self.f1.source
        if not A.is_central():
            raise PreconditionError("algebra structure on the relative tensor needs a central base algebra")
        A1, A2 = self.f1.target, self.f2.target
        F = self.field
        C2 = centralizer(A2, [self.f2(a) for a in A.generators])
        S2, inc = subalgebra(A2, C2)
        T = full_tensor(A1, S2)
        # Phi: A1 (x) C2 -> quotient, on basis x_i (x) c_j
        cols = [self.pure(A1.basis(i), inc.image_of_basis(j)) for i in range(A1.dim) for j in range(S2.dim)]
        if len(cols) != self.dim:
            raise PropertyViolation("A1 (x) A2^A has the wrong dimension", expected=self.dim, actual=len(cols))
        Phi = la.transpose(cols)
        try:
            Psi = la.inverse(F, Phi)
        except PreconditionError as exc:
            raise PropertyViolation("A1 (x) A2^A -> A1 (x)_A A2 is not bijective") from exc
        return T, Phi, Psi

    @cached_property
    def algebra(self) -> StructureAlgebra:
        """Algebra structure transported from ``A1 (x)_F A2^A``."""
        T, Phi, Psi = self._transport
        F = self.field
        pre = la.transpose(Psi)  # row t: coordinates in T of quotient basis t
        table = {}
        for a in range(self.dim):
            for b in range(self.dim):
                prod = la.mat_vec(F, Phi, T.mul(pre[a], pre[b]))
                nz = {k: c for k, c in enumerate(prod) if c}
                if nz:
                    table[(a, b)] = nz
        unit = la.mat_vec(F, Phi, T.one)
        return StructureAlgebra(F, self.dim, table, unit, name="A1(x)_A A2")

    @cached_property
    def left_map(self) -> AlgebraMorphism:
        return AlgebraMorphism(self.f1.target, self.algebra, self.left_linear())

    @cached_property
    def right_map(self) -> AlgebraMorphism:
        return AlgebraMorphism(self.f2.target, self.algebra, self.right_linear())


def relative_tensor(f1: AlgebraMorphism, f2: AlgebraMorphism) -> RelativeTensor:
    return RelativeTensor(f1, f2)


@dataclass
class AmitsurReport:
    exact: bool
    source_dim: int
    target_dim: int
    tensor_dim: int
    equalizer_dim: int
    image_dim: int
    retraction: bool

    def to_json(self) -> dict:
        return {
            "exact": self.exact,
            "sourceDim": self.source_dim,
            "targetDim": self.target_dim,
            "tensorDim": self.tensor_dim,
            "equalizerDim": self.equalizer_dim,
            "imageDim": self.image_dim,
            "retraction": self.retraction,
        }


def amitsur_exactness(f: AlgebraMorphism) -> AmitsurReport:
    """Compare ``{b : b (x) 1 = 1 (x) b}`` in ``B (x)_A B`` with the image of A."""
    if not f.is_injective():
        raise PreconditionError("morphism is not injective, so it cannot be faithfully flat")
    B = f.target
    F = B.field
    T = relative_tensor(f, f)
    L, R = T.left_linear(), T.right_linear()
    D = la.mat_sub(F, L, R) if T.dim else []
    eq = la.nullspace(F, D, B.dim) if D else [B.basis(i) for i in range(B.dim)]
    img = f.image()
    exact = la.Span(F, eq, B.dim) == la.Span(F, img, B.dim)
    # multiplication B (x) B -> B must kill the relations to descend
    mult_ok = True
    for row in T.relations.basis:
        acc = B.zero
        for idx, c in enumerate(row):
            if c:
                i, j = divmod(idx, B.dim)
                acc = B.add(acc, B.scale(c, B.mul(B.basis(i), B.basis(j))))
        if acc != B.zero:
            mult_ok = False
            break
    return AmitsurReport(exact, f.source.dim, B.dim, T.dim, len(eq), len(img), mult_ok)
