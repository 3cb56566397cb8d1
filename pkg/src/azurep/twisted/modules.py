"""Right modules over structure-constant algebras, by explicit action matrices.

Module elements are column vectors. The right action of ``a`` is the matrix
``act(a)`` with ``m . a = act(a) @ m``; associativity then reads
``act(a b) = act(b) @ act(a)``.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .. import linalg as la
from ..errors import InputError
from ..exactalg.algebra import AlgebraMorphism, StructureAlgebra, matrix_degree


class RightModule:
    def __init__(self, over: StructureAlgebra, dim: int, action: Sequence, *, validate: bool = True, name: str = ""):
        F = over.field
        if len(action) != over.dim:
            raise InputError(f"need one action matrix per basis element ({over.dim}), got {len(action)}")
        for M in action:
            if len(M) != dim or any(len(r) != dim for r in M):
                raise InputError(f"action matrices must be {dim}x{dim}")
        self.algebra = over
        self.dim = dim
        self.action = [[[F(x) for x in r] for r in M] for M in action]
        self.name = name
        if validate:
            self.validate()

    @property
    def field(self):
        return self.algebra.field

    def act(self, a: Sequence) -> list:
        F, n = self.field, self.dim
        out = [[0] * n for _ in range(n)]
        for c, M in zip(a, self.action):
            if c:
                for r in range(n):
                    row = M[r]
                    for k in range(n):
                        if row[k]:
                            out[r][k] += c * row[k]
        return [[F(x) for x in r] for r in out]

    def validate(self) -> None:
        A, F = self.algebra, self.field
        if self.act(A.one) != la.identity(F, self.dim):
            raise InputError("the unit does not act as the identity")
        for i in range(A.dim):
            for j in range(A.dim):
                lhs = self.act(A.mul(A.basis(i), A.basis(j)))
                rhs = la.matmul(F, self.action[j], self.action[i])
                if lhs != rhs:
                    raise InputError(f"action is not a right action on basis pair ({i}, {j})")

    def to_json(self) -> dict:
        F = self.field
        return {"dimF": self.dim, "action": [[[F.format(x) for x in r] for r in M] for M in self.action]}

    def __repr__(self):
        return f"<RightModule dimF={self.dim} over {self.algebra!r}>"


def module_from_json(obj, A: StructureAlgebra) -> RightModule:
    if isinstance(obj, dict) and obj.get("kind") == "regular":
        return regular_module(A)
    if isinstance(obj, dict) and obj.get("kind") == "rows":
        return direct_sum([row_module(A)] * int(obj.get("copies", 1)))
    try:
        return RightModule(A, int(obj["dimF"]), obj["action"])
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed module: {exc}") from exc


def regular_module(A: StructureAlgebra) -> RightModule:
    """A acting on itself by right multiplication."""
    return RightModule(A, A.dim, [A.right_matrix(A.basis(i)) for i in range(A.dim)], validate=False, name="A_A")


def row_module(A: StructureAlgebra) -> RightModule:
    """Row vectors F^n for A = matrix_algebra(n): ``act(E_ij) = E_ji``."""
    n = matrix_degree(A)
    F = A.field
    action = []
    for i in range(n):
        for j in range(n):
            M = la.zeros(F, n, n)
            M[j][i] = F.one
            action.append(M)
    return RightModule(A, n, action, name="F^n")


def ideal_module(A: StructureAlgebra, basis: Sequence[Sequence]) -> RightModule:
    """A right ideal I of A (given by a basis) as a right A-module."""
    F = A.field
    span = la.Span(F, basis, A.dim)
    action = []
    for k in range(A.dim):
        cols = []
        for v in span.basis:
            c = span.coordinates(A.mul(v, A.basis(k)))
            if c is None:
                raise InputError("subspace is not a right ideal")
            cols.append(c)
        action.append(la.transpose(cols))
    return RightModule(A, span.dim, action, validate=False, name="ideal")


def direct_sum(mods: Sequence[RightModule]) -> RightModule:
    if not mods:
        raise InputError("direct sum of no modules")
    A = mods[0].algebra
    F = A.field
    n = sum(m.dim for m in mods)
    action = []
    for k in range(A.dim):
        M = la.zeros(F, n, n)
        off = 0
        for m in mods:
            for r in range(m.dim):
                for c in range(m.dim):
                    M[off + r][off + c] = m.action[k][r][c]
            off += m.dim
        action.append(M)
    return RightModule(A, n, action, validate=False)


def _intertwiner_equations(P: RightModule, Q: RightModule, sigma: Optional[AlgebraMorphism]):
    """Rows of the linear system f act_P(a) = act_Q(sigma(a)) f, unknown f (Q.dim x P.dim) row-major."""
    A, F = P.algebra, P.field
    m, n = Q.dim, P.dim
    rows = []
    for a in A.generators:
        Pa = P.act(a)
        Qa = Q.act(sigma(a) if sigma is not None else a)
        for r in range(m):
            for c in range(n):
                row = [0] * (m * n)
                # (f Pa)[r][c] = sum_k f[r][k] Pa[k][c]
                for k in range(n):
                    if Pa[k][c]:
                        row[r * n + k] += Pa[k][c]
                # (Qa f)[r][c] = sum_k Qa[r][k] f[k][c]
                for k in range(m):
                    if Qa[r][k]:
                        row[k * n + c] -= Qa[r][k]
                if any(row):
                    rows.append([F(x) for x in row])
    return rows


def _as_matrices(vecs, m, n):
    return [[list(v[r * n:(r + 1) * n]) for r in range(m)] for v in vecs]


def hom_space(P: RightModule, Q: RightModule) -> list:
    """Basis of Hom_A(P, Q) as Q.dim x P.dim matrices."""
    return semilinear_space(P, Q, None)


def semilinear_space(P: RightModule, Q: RightModule, sigma: Optional[AlgebraMorphism]) -> list:
    """Basis of ``{f : f(x . a) = f(x) . sigma(a)}``."""
    if sigma is None and P.algebra is not Q.algebra and P.algebra.dim != Q.algebra.dim:
        raise InputError("modules over different algebras")
    F = P.field
    rows = _intertwiner_equations(P, Q, sigma)
    N = Q.dim * P.dim
    vecs = la.nullspace(F, rows, N) if rows else [tuple(F.one if k == i else F.zero for k in range(N)) for i in range(N)]
    return _as_matrices(vecs, Q.dim, P.dim)


def is_semilinear(f, P: RightModule, Q: RightModule, sigma: Optional[AlgebraMorphism]) -> bool:
    A, F = P.algebra, P.field
    for i in range(A.dim):
        a = A.basis(i)
        lhs = la.matmul(F, f, P.act(a))
        rhs = la.matmul(F, Q.act(sigma(a) if sigma is not None else a), f)
        if lhs != rhs:
            return False
    return True


def is_automorphism(sigma: AlgebraMorphism) -> bool:
    return sigma.source.dim == sigma.target.dim and sigma.is_bijective()


def twist(P: RightModule, sigma: AlgebraMorphism) -> RightModule:
    """Same space with ``m * a := m . sigma(a)``."""
    if sigma.source.dim != P.algebra.dim or not is_automorphism(sigma):
        raise InputError("twisting needs an automorphism of the module's algebra")
    sigma.validate()
    A = P.algebra
    return RightModule(A, P.dim, [P.act(sigma(A.basis(i))) for i in range(A.dim)])


def inner_twist_isomorphism(P: RightModule, u: Sequence):
    """For ``sigma(a) = u a u^{-1}``: the A-linear isomorphism ``P -> P_sigma``,
    ``m -> m . u^{-1}``. Returns ``(sigma, P_sigma, matrix)`` after checking it."""
    from ..exactalg.algebra import inner_automorphism

    A, F = P.algebra, P.field
    sigma = inner_automorphism(A, u)
    Ps = twist(P, sigma)
    f = P.act(A.inverse(u))
    if not is_semilinear(f, P, Ps, None) or not la.is_invertible(F, f):
        raise InputError("inner twist map failed verification")
    return sigma, Ps, f


def modules_equal(P: RightModule, Q: RightModule) -> bool:
    return P.dim == Q.dim and P.action == Q.action
