"""Azumaya algebras with a dimension vector, both ways round.

``endo_algebra`` builds B = End_A(P_1 + ... + P_k) with P_1 = A; elements of
B are stored as N x N matrices on the direct sum (N = d_1 |alpha|) and the
StructureAlgebra works in a basis of those matrices. ``peirce_decompose``
goes back via corners e_1 B e_1 and e_i B e_1. The two ``*_roundtrip``
helpers write down the comparison isomorphisms and check them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .. import linalg as la
from ..errors import InputError, PreconditionError, PropertyViolation
from ..exactalg.algebra import AlgebraMorphism, StructureAlgebra, corner
from ..exactalg.structure import IdempotentFamily, degree, reduced_trace
from .modules import RightModule, direct_sum, hom_space, regular_module


def _flat(M) -> tuple:
    return tuple(x for r in M for x in r)


def _unflat(v, n) -> list:
    return [list(v[r * n:(r + 1) * n]) for r in range(n)]


def _embed_block(F, N, M, row_off, col_off):
    out = la.zeros(F, N, N)
    for r, row in enumerate(M):
        for c, x in enumerate(row):
            out[row_off + r][col_off + c] = x
    return out


class MatrixBackedAlgebra:
    """A StructureAlgebra whose basis is a concrete space of N x N matrices.

    The basis is the RREF basis of the span of ``mats``, so coordinates read
    off the span are coordinates in the algebra."""

    def __init__(self, F, N: int, mats: Sequence, name: str = ""):
        self.F = F
        self.N = N
        self.span = la.Span(F, [_flat(M) for M in mats], N * N)
        self.matrices = [_unflat(v, N) for v in self.span.basis]
        table = {}
        for i, X in enumerate(self.matrices):
            for j, Y in enumerate(self.matrices):
                c = self.coordinates(la.matmul(F, X, Y))
                if c is None:
                    raise PropertyViolation("matrix space is not closed under composition")
                entry = {k: x for k, x in enumerate(c) if x}
                if entry:
                    table[i, j] = entry
        unit = self.coordinates(la.identity(F, N))
        if unit is None:
            raise PropertyViolation("identity is not in the matrix space")
        self.algebra = StructureAlgebra(F, len(self.matrices), table, unit, name=name, validate=False)

    def coordinates(self, M):
        c = self.span.coordinates(_flat(M))
        return None if c is None else tuple(c)

    def matrix(self, x) -> list:
        F, N = self.F, self.N
        out = [F.zero] * (N * N)
        for c, M in zip(x, self.matrices):
            if c:
                for k, v in enumerate(_flat(M)):
                    if v:
                        out[k] += c * v
        return _unflat(out, N)


@dataclass
class DimVecAzumaya:
    B: StructureAlgebra
    idems: IdempotentFamily
    alpha: tuple
    realization: "MatrixBackedAlgebra | None" = None
    base: "StructureAlgebra | None" = None
    modules: "list | None" = None  # P_1 .. P_k

    def verify(self) -> None:
        B, F = self.B, self.B.field
        n = sum(self.alpha)
        if degree(B) != n:
            raise InputError(f"degree {degree(B)} does not match |alpha| = {n}")
        if len(B.center) != 1:
            raise InputError("B is not central")
        for e, d in zip(self.idems.elements, self.alpha):
            if reduced_trace(B, e) != F(d):
                raise InputError("reduced trace of an idempotent does not match alpha")

    @property
    def offsets(self) -> list:
        out, off = [], 0
        for P in self.modules:
            out.append(off)
            off += P.dim
        return out

    def to_json(self) -> dict:
        F = self.B.field
        return {"dim": self.B.dim, "degree": degree(self.B), "alpha": list(self.alpha),
                "centerDim": len(self.B.center),
                "traces": [F.format(t) for t in self.idems.traces()]}


def endo_algebra(A: StructureAlgebra, modules: Sequence[RightModule], alpha: Sequence[int]) -> DimVecAzumaya:
    """End_A(A + P_2 + ... + P_k) with its projection idempotents."""
    F = A.field
    alpha = tuple(int(d) for d in alpha)
    if len(alpha) != len(modules) + 1 or any(d < 1 for d in alpha):
        raise InputError("alpha needs one positive entry per vertex (P_1 = A is implicit)")
    try:
        d1 = degree(A)
    except PreconditionError as exc:
        raise PreconditionError(f"A is not central simple: {exc}") from None
    if d1 != alpha[0]:
        raise InputError(f"degree(A) = {d1} but alpha[0] = {alpha[0]}")
    for i, P in enumerate(modules, start=2):
        if P.algebra.dim != A.dim:
            raise InputError(f"P_{i} is a module over a different algebra")
        if P.dim != d1 * alpha[i - 1]:
            raise InputError(f"rank condition: dimF(P_{i}) = {P.dim}, expected {d1} * {alpha[i - 1]}")
    mods = [regular_module(A)] + list(modules)
    total = direct_sum(mods)
    N = total.dim
    # End_A(P) is the sum of the blocks Hom_A(P_j, P_i)
    offs, off = [], 0
    for P in mods:
        offs.append(off)
        off += P.dim
    mats = []
    for i, Pi in enumerate(mods):
        for j, Pj in enumerate(mods):
            for h in hom_space(Pj, Pi):
                mats.append(_embed_block(F, N, h, offs[i], offs[j]))
    real = MatrixBackedAlgebra(F, N, mats, name="End_A(P)")
    B = real.algebra
    idems = []
    for i, P in enumerate(mods):
        idems.append(real.coordinates(_embed_block(F, N, la.identity(F, P.dim), offs[i], offs[i])))
    family = IdempotentFamily(B, idems, alpha)
    out = DimVecAzumaya(B, family, alpha, real, A, mods)
    out.verify()
    return out


def dimvec_from_idempotents(B: StructureAlgebra, idempotents: Sequence[Sequence], alpha: Sequence[int]) -> DimVecAzumaya:
    out = DimVecAzumaya(B, IdempotentFamily(B, idempotents, alpha), tuple(int(d) for d in alpha))
    out.verify()
    return out


@dataclass
class PeirceData:
    algebra: StructureAlgebra  # e_1 B e_1
    algebra_lift: list  # its basis as elements of B
    modules: list  # P_1 .. P_k over algebra
    module_lifts: list  # per module, its basis as elements of B
    source: DimVecAzumaya

    def to_json(self) -> dict:
        return {"algebraDim": self.algebra.dim, "degree": degree(self.algebra),
                "moduleDims": [P.dim for P in self.modules]}


def peirce_decompose(D: DimVecAzumaya) -> PeirceData:
    try:
        D.verify()
    except (InputError, PreconditionError) as exc:
        raise InputError(f"not an Azumaya algebra with dimension vector: {exc}") from None
    B, F = D.B, D.B.field
    es = D.idems.elements
    A, lift = corner(B, es[0])
    d1 = degree(A)
    if d1 != D.alpha[0]:
        raise InputError(f"corner has degree {d1}, expected {D.alpha[0]}")
    mods, lifts = [], []
    for i, e in enumerate(es):
        # e_i B e_1 is the image of x -> e_i x e_1
        # (P_1 keeps the corner's own basis, so it is literally the regular module)
        if i == 0:
            basis = [tuple(v) for v in lift]
        else:
            T = la.matmul(F, B.left_matrix(e), B.right_matrix(es[0]))
            basis = list(la.Span(F, la.column_space(F, T), B.dim).basis)
        action = []
        for a in lift:
            cols = []
            for v in basis:
                c = _span_coords(F, basis, B.dim, B.mul(v, a))
                if c is None:
                    raise PropertyViolation("corner module not closed under the right action")
                cols.append(c)
            action.append(la.transpose(cols))
        P = RightModule(A, len(basis), action)
        if P.dim != d1 * D.alpha[i]:
            raise InputError(f"P_{i + 1} has dimF {P.dim}, expected {d1 * D.alpha[i]}")
        mods.append(P)
        lifts.append(basis)
    return PeirceData(A, lift, mods, lifts, D)


def _span_coords(F, vectors, dim, x):
    """Coordinates of x in a list of independent vectors; None if x is outside."""
    cols = la.transpose([list(v) for v in vectors])
    return la.solve(F, cols, list(x), len(vectors))


@dataclass
class RoundTrip:
    """Comparison maps with their verification outcome."""

    algebra_map: AlgebraMorphism
    module_maps: list  # matrices
    ok: bool

    def to_json(self) -> dict:
        return {"algebraIso": self.algebra_map.is_bijective(), "moduleMaps": len(self.module_maps), "ok": self.ok}


def endo_then_peirce(A: StructureAlgebra, modules: Sequence[RightModule], alpha: Sequence[int],
                     D: "DimVecAzumaya | None" = None, pd: "PeirceData | None" = None) -> RoundTrip:
    """A -> e_1 B e_1 by left multiplication on the first summand, and
    P_i -> e_i B e_1 by ``p -> (x -> p . x)``; both checked."""
    if D is None:
        D = endo_algebra(A, modules, alpha)
    if pd is None:
        pd = peirce_decompose(D)
    real, F = D.realization, A.field
    offs = D.offsets
    mods = D.modules
    d1sq = A.dim

    def to_corner(b):
        return _span_coords(F, pd.algebra_lift, D.B.dim, b)

    images = []
    for k in range(A.dim):
        L = A.left_matrix(A.basis(k))
        images.append(to_corner(real.coordinates(_embed_block(F, real.N, L, 0, 0))))
    iota = AlgebraMorphism(A, pd.algebra, la.transpose(images))
    iota.validate()
    ok = iota.is_bijective()
    module_maps = []
    for i, P in enumerate(mods):
        cols = []
        for k in range(P.dim):
            p = [F.one if t == k else F.zero for t in range(P.dim)]
            # x -> p . x as a block from summand 1 to summand i
            blk = la.transpose([la.mat_vec(F, P.act(A.basis(c)), p) for c in range(d1sq)])
            b = real.coordinates(_embed_block(F, real.N, blk, offs[i], 0))
            cols.append(_span_coords(F, pd.module_lifts[i], D.B.dim, b))
        theta = la.transpose(cols)
        ok = ok and la.is_invertible(F, theta)
        # theta(p . a) = theta(p) . iota(a)
        Pi = pd.modules[i]
        for k in range(A.dim):
            a = A.basis(k)
            if la.matmul(F, theta, P.act(a)) != la.matmul(F, Pi.act(iota(a)), theta):
                ok = False
        module_maps.append(theta)
    return RoundTrip(iota, module_maps, ok)


def peirce_then_endo(D: DimVecAzumaya, pd: "PeirceData | None" = None,
                     D2: "DimVecAzumaya | None" = None) -> RoundTrip:
    """B -> End_{A'}(sum e_i B e_1), b -> left multiplication by b; checked
    multiplicative, bijective and sending e_i to the new projections."""
    if pd is None:
        pd = peirce_decompose(D)
    B, F = D.B, D.B.field
    if D2 is None:
        D2 = endo_algebra(pd.algebra, pd.modules[1:], D.alpha)
    real = D2.realization
    # P_1 = e_1 B e_1 must be the regular module in the corner basis
    if pd.modules[0].action != regular_module(pd.algebra).action:
        raise PropertyViolation("first Peirce module is not the regular module")
    offs = D2.offsets
    spans = [la.Span(F, lift, B.dim) for lift in pd.module_lifts]

    def coords_in(i, v):
        return _span_coords(F, pd.module_lifts[i], B.dim, v)

    images = []
    for k in range(B.dim):
        b = B.basis(k)
        M = la.zeros(F, real.N, real.N)
        for j, lift in enumerate(pd.module_lifts):
            for c, v in enumerate(lift):
                w = B.mul(b, v)
                for i, ei in enumerate(D.idems.elements):
                    part = B.mul(ei, w)
                    if not any(part):
                        continue
                    if spans[i].coordinates(part) is None:
                        raise PropertyViolation("left multiplication leaves the Peirce pieces")
                    for r, x in enumerate(coords_in(i, part)):
                        M[offs[i] + r][offs[j] + c] = x
        x = real.coordinates(M)
        if x is None:
            raise PropertyViolation("left multiplication is not A-linear")
        images.append(x)
    psi = AlgebraMorphism(B, D2.B, la.transpose(images))
    psi.validate()
    ok = psi.is_bijective() and all(
        psi(e) == tuple(f) for e, f in zip(D.idems.elements, D2.idems.elements))
    return RoundTrip(psi, [], ok)


def conjugated_module(P: RightModule, g) -> RightModule:
    """Same module in the basis changed by g: act'(a) = g act(a) g^{-1}."""
    F = P.field
    ginv = la.inverse(F, g)
    return RightModule(P.algebra, P.dim, [la.matmul(F, la.matmul(F, g, M), ginv) for M in P.action])


def seeded_split_instance(seed: int, p: int = 5, max_total: int = 4):
    """A random (A, [P_2, ..], alpha) over GF(p) with A = M_{d_1} and each
    P_i a randomly re-based copy of (F^{d_1})^{d_i}."""
    import random

    from ..exactalg.algebra import matrix_algebra
    from ..fields import GF
    from .modules import row_module

    rng = random.Random(seed)
    F = GF(p)
    while True:
        d1 = rng.choice([1, 2])
        k = rng.choice([2, 3])
        alpha = (d1,) + tuple(rng.choice([1, 2]) for _ in range(k - 1))
        if sum(alpha) <= max_total:
            break
    A = matrix_algebra(d1, F)
    mods = []
    for d in alpha[1:]:
        P = direct_sum([row_module(A)] * d)
        while True:
            g = [[F(rng.randrange(p)) for _ in range(P.dim)] for _ in range(P.dim)]
            if la.is_invertible(F, g):
                break
        mods.append(conjugated_module(P, g))
    return A, mods, alpha
