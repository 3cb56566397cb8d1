"""Twisted representations, their isomorphisms, and the automorphism dictionary.

A twisted representation of a quiver carries a central simple algebra A,
right A-modules P_2..P_k (P_1 = A) and A-linear maps rho_a: P_s -> P_t.
An isomorphism is a tuple (sigma, sigma_1 = sigma, sigma_2, ...) of
sigma-semilinear bijections; it acts by ``rho_a -> sigma_t rho_a sigma_s^{-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .. import linalg as la
from ..errors import InputError, PreconditionError, PropertyViolation
from ..exactalg.algebra import AlgebraMorphism, StructureAlgebra
from ..exactalg.brauer import index_of
from ..exactalg.structure import degree
from ..quiverrep.quiver import QuiverPresentation
from .endo import (
    DimVecAzumaya,
    PeirceData,
    _embed_block,
    _span_coords,
    endo_algebra,
    endo_then_peirce,
    peirce_decompose,
    peirce_then_endo,
)
from .modules import (
    RightModule,
    direct_sum,
    ideal_module,
    is_semilinear,
    modules_equal,
    regular_module,
    twist,
)


def _path_matrix(F, mods, rho: dict, path, vertex=None):
    if not path:
        return la.identity(F, mods[vertex].dim)
    M = rho[path[0]]
    for name in path[1:]:
        M = la.matmul(F, rho[name], M)
    return M


class TwistedRep:
    def __init__(self, algebra: StructureAlgebra, modules: Sequence[RightModule], rho: dict,
                 quiver: QuiverPresentation, *, validate: bool = True):
        self.algebra = algebra
        self.quiver = quiver
        self.modules = [regular_module(algebra)] + list(modules)
        F = algebra.field
        if len(self.modules) != quiver.vertex_count:
            raise InputError(f"need {quiver.vertex_count - 1} modules besides A, got {len(modules)}")
        missing = {a.name for a in quiver.arrows} - set(rho)
        extra = set(rho) - {a.name for a in quiver.arrows}
        if missing or extra:
            raise InputError(f"rho must name exactly the arrows (missing {sorted(missing)}, unknown {sorted(extra)})")
        self.rho = {}
        for a in quiver.arrows:
            M = [[F(x) for x in r] for r in rho[a.name]]
            s, t = self.modules[a.source], self.modules[a.target]
            if len(M) != t.dim or any(len(r) != s.dim for r in M):
                raise InputError(f"rho_{a.name} must be {t.dim}x{s.dim}")
            self.rho[a.name] = M
        if validate:
            self.validate()

    @property
    def field(self):
        return self.algebra.field

    @property
    def alpha(self) -> tuple:
        d1 = degree(self.algebra)
        out = []
        for P in self.modules:
            if P.dim % d1:
                raise InputError(f"module of dimF {P.dim} violates the rank condition for degree {d1}")
            out.append(P.dim // d1)
        return tuple(out)

    def validate(self) -> None:
        F, Q = self.field, self.quiver
        for a in Q.arrows:
            if not is_semilinear(self.rho[a.name], self.modules[a.source], self.modules[a.target], None):
                raise InputError(f"rho_{a.name} is not A-linear")
        for k, rel in enumerate(Q.relations):
            s, t = Q.relation_ends[k]
            total = la.zeros(F, self.modules[t].dim, self.modules[s].dim)
            for term in rel:
                total = la.mat_add(F, total, la.mat_scale(F, F(term.coeff), _path_matrix(F, self.modules, self.rho, term.path, term.vertex)))
            if any(any(r) for r in total):
                raise InputError(f"relation {k + 1} does not vanish")

    def same_as(self, other: "TwistedRep") -> bool:
        return (len(self.modules) == len(other.modules)
                and all(modules_equal(P, P2) for P, P2 in zip(self.modules, other.modules))
                and self.rho == other.rho)

    def to_json(self) -> dict:
        F = self.field
        return {"alpha": list(self.alpha),
                "rho": {k: [[F.format(x) for x in r] for r in M] for k, M in sorted(self.rho.items())}}


class TwistedIso:
    def __init__(self, sigma: AlgebraMorphism, maps: Sequence, source_modules: Sequence[RightModule],
                 target_modules: Sequence[RightModule], *, validate: bool = True):
        F = sigma.source.field
        self.sigma = sigma
        self.maps = [[[F(x) for x in r] for r in M] for M in maps]
        self.source_modules = list(source_modules)
        self.target_modules = list(target_modules)
        if not (len(self.maps) == len(self.source_modules) == len(self.target_modules)):
            raise InputError("one map per vertex")
        if validate:
            self.validate()

    def validate(self) -> None:
        sigma, F = self.sigma, self.sigma.source.field
        sigma.validate()
        if not sigma.is_bijective():
            raise InputError("sigma is not an isomorphism")
        if self.maps[0] != sigma.matrix:
            raise InputError("sigma_1 must equal sigma")
        for i, (f, P, P2) in enumerate(zip(self.maps, self.source_modules, self.target_modules), start=1):
            if len(f) != P2.dim or any(len(r) != P.dim for r in f) or not la.is_invertible(F, f):
                raise InputError(f"sigma_{i} is not a bijection P_{i} -> P'_{i}")
            if not is_semilinear(f, P, P2, sigma):
                raise InputError(f"sigma_{i} is not sigma-semilinear")

    def intertwines(self, t: TwistedRep, t2: TwistedRep) -> bool:
        F = t.field
        for a in t.quiver.arrows:
            lhs = la.matmul(F, self.maps[a.target], t.rho[a.name])
            rhs = la.matmul(F, t2.rho[a.name], self.maps[a.source])
            if lhs != rhs:
                return False
        return True

    def compose(self, first: "TwistedIso") -> "TwistedIso":
        """``self o first``."""
        F = self.sigma.source.field
        return TwistedIso(self.sigma.compose(first.sigma),
                          [la.matmul(F, g, f) for g, f in zip(self.maps, first.maps)],
                          first.source_modules, self.target_modules)

    def inverse(self) -> "TwistedIso":
        F = self.sigma.source.field
        return TwistedIso(self.sigma.inverse(), [la.inverse(F, f) for f in self.maps],
                          self.target_modules, self.source_modules)

    def to_json(self) -> dict:
        F = self.sigma.source.field
        return {"sigma": [[F.format(x) for x in r] for r in self.sigma.matrix],
                "maps": [[[F.format(x) for x in r] for r in M] for M in self.maps]}


def identity_iso(A: StructureAlgebra, modules: Sequence[RightModule]) -> TwistedIso:
    from ..exactalg.algebra import identity_morphism

    mods = [regular_module(A)] + list(modules)
    return TwistedIso(identity_morphism(A), [la.identity(A.field, P.dim) for P in mods], mods, mods)


def twisting_iso(A: StructureAlgebra, modules: Sequence[RightModule], sigma: AlgebraMorphism) -> TwistedIso:
    """(sigma, sigma, id, ..., id) onto the twisted modules P_{i, sigma^{-1}}."""
    mods = [regular_module(A)] + list(modules)
    sinv = sigma.inverse()
    targets = [mods[0]] + [twist(P, sinv) for P in mods[1:]]
    maps = [sigma.matrix] + [la.identity(A.field, P.dim) for P in mods[1:]]
    return TwistedIso(sigma, maps, mods, targets)


def block_iso(A: StructureAlgebra, modules: Sequence[RightModule], sigma: AlgebraMorphism, maps: Sequence) -> TwistedIso:
    """Automorphism tuple with sigma_i: P_i -> P_i (targets are the same modules)."""
    mods = [regular_module(A)] + list(modules)
    return TwistedIso(sigma, [sigma.matrix] + list(maps), mods, mods)


def conjugate_twisted(t: TwistedRep, iso: TwistedIso) -> TwistedRep:
    """``rho'_a = sigma_t rho_a sigma_s^{-1}`` over the iso's target modules."""
    F = t.field
    if len(iso.source_modules) != len(t.modules) or not all(
            modules_equal(P, P2) for P, P2 in zip(t.modules, iso.source_modules)):
        raise InputError("isomorphism does not start at this representation's modules")
    inv = [la.inverse(F, f) for f in iso.maps]
    rho = {}
    for a in t.quiver.arrows:
        rho[a.name] = la.matmul(F, la.matmul(F, iso.maps[a.target], t.rho[a.name]), inv[a.source])
    out = TwistedRep(iso.sigma.target, iso.target_modules[1:], rho, t.quiver)
    if not iso.intertwines(t, out):
        raise PropertyViolation("conjugated representation does not make the squares commute")
    return out


# ---------------------------------------------------------------------------
# to algebra maps R -> B


@dataclass
class TwistedAlgebraMap:
    """phi: R -> B given on the vertex idempotents and arrows of R."""

    target: DimVecAzumaya
    vertex_images: list
    arrow_images: dict
    checked_paths: int

    def image_of_path(self, path: Sequence[str]):
        B = self.target.B
        x = self.arrow_images[path[0]]
        for name in path[1:]:
            x = B.mul(self.arrow_images[name], x)
        return x

    def matrix(self, x) -> list:
        return self.target.realization.matrix(x)

    def to_json(self) -> dict:
        F = self.target.B.field
        return {"checkedPaths": self.checked_paths,
                "arrows": {k: [F.format(c) for c in v] for k, v in sorted(self.arrow_images.items())},
                "vertices": [[F.format(c) for c in v] for v in self.vertex_images]}


def _paths(Q: QuiverPresentation, max_len: int):
    out = [[a.name] for a in Q.arrows]
    frontier = list(out)
    for _ in range(max_len - 1):
        nxt = []
        for p in frontier:
            last = Q.arrow(p[-1])
            for a in Q.arrows:
                if a.source == last.target:
                    nxt.append(p + [a.name])
        out.extend(nxt)
        frontier = nxt
    return out


def twisted_to_algebra_map(t: TwistedRep, Q: Optional[QuiverPresentation] = None, max_len: int = 3) -> TwistedAlgebraMap:
    """e_i -> projection onto P_i, a -> rho_a placed in its block of End_A(sum P_i).

    Checked: unital, e_i orthogonal idempotents, every path of length
    <= max_len maps to the composite of the rho's, and relations go to 0.
    """
    Q = Q or t.quiver
    try:
        t.validate()
    except InputError as exc:
        raise InputError(f"not a representation: {exc}") from None
    A, F = t.algebra, t.field
    D = endo_algebra(A, t.modules[1:], t.alpha)
    real, B, offs = D.realization, D.B, D.offsets
    arrows = {}
    for a in Q.arrows:
        x = real.coordinates(_embed_block(F, real.N, t.rho[a.name], offs[a.target], offs[a.source]))
        if x is None:
            raise PropertyViolation(f"rho_{a.name} does not land in End_A")
        arrows[a.name] = x
    verts = list(D.idems.elements)
    phi = TwistedAlgebraMap(D, verts, arrows, 0)
    checked = 0
    longest = max([max_len] + [len(term.path) for rel in Q.relations for term in rel])
    for p in _paths(Q, longest):
        M = _path_matrix(F, t.modules, t.rho, p)
        a0, al = Q.arrow(p[0]), Q.arrow(p[-1])
        want = real.coordinates(_embed_block(F, real.N, M, offs[al.target], offs[a0.source]))
        if phi.image_of_path(p) != want:
            raise PropertyViolation(f"phi is not multiplicative on path {p}")
        # e_t phi(p) e_s = phi(p)
        got = phi.image_of_path(p)
        if B.mul(B.mul(verts[al.target], got), verts[a0.source]) != got:
            raise PropertyViolation(f"phi(path {p}) leaves its Peirce block")
        checked += 1
    for k, rel in enumerate(Q.relations):
        total = B.zero
        for term in rel:
            x = verts[term.vertex] if not term.path else phi.image_of_path(term.path)
            total = B.add(total, B.scale(F(term.coeff), x))
        if any(total):
            raise InputError(f"relation {k + 1} does not map to zero")
    phi.checked_paths = checked
    return phi


# ---------------------------------------------------------------------------
# tuples <-> idempotent-preserving isomorphisms


def _block_diag(F, mats):
    n = sum(len(M) for M in mats)
    m = sum(len(M[0]) for M in mats)
    out = la.zeros(F, n, m)
    r0 = c0 = 0
    for M in mats:
        for r, row in enumerate(M):
            for c, x in enumerate(row):
                out[r0 + r][c0 + c] = x
        r0 += len(M)
        c0 += len(M[0])
    return out


def _alpha_of(A, mods):
    d1 = degree(A)
    return tuple([d1] + [P.dim // d1 for P in mods[1:]])


def iso_to_automorphism(iso: TwistedIso, source: Optional[DimVecAzumaya] = None,
                        target: Optional[DimVecAzumaya] = None) -> AlgebraMorphism:
    """psi(b) = phi b phi^{-1} with phi the block sum of the sigma_i."""
    try:
        iso.validate()
    except InputError as exc:
        raise InputError(f"not a twisted isomorphism: {exc}") from None
    A, A2 = iso.sigma.source, iso.sigma.target
    F = A.field
    src = source or endo_algebra(A, iso.source_modules[1:], _alpha_of(A, iso.source_modules))
    tgt = target or endo_algebra(A2, iso.target_modules[1:], _alpha_of(A2, iso.target_modules))
    phi = _block_diag(F, iso.maps)
    phinv = la.inverse(F, phi)
    images = []
    for k in range(src.B.dim):
        M = src.realization.matrix(src.B.basis(k))
        x = tgt.realization.coordinates(la.matmul(F, la.matmul(F, phi, M), phinv))
        if x is None:
            raise PropertyViolation("conjugation by the block map leaves End_A")
        images.append(x)
    psi = AlgebraMorphism.from_images(src.B, tgt.B, images)
    for e, e2 in zip(src.idems.elements, tgt.idems.elements):
        if psi(e) != tuple(e2):
            raise PropertyViolation("psi does not preserve the idempotents")
    return psi


def automorphism_to_tuple(psi: AlgebraMorphism, source: DimVecAzumaya, target: DimVecAzumaya,
                          source_peirce: Optional[PeirceData] = None,
                          target_peirce: Optional[PeirceData] = None) -> TwistedIso:
    """Restrict psi to e_1 B e_1 (giving sigma) and to e_i B e_1 (giving sigma_i)."""
    for i, (e, e2) in enumerate(zip(source.idems.elements, target.idems.elements), start=1):
        if psi(e) != tuple(e2):
            raise InputError(f"psi does not send e_{i} to e'_{i}; it is not linear over the vertex idempotents")
    pd = source_peirce or peirce_decompose(source)
    pd2 = target_peirce or peirce_decompose(target)
    F = source.B.field

    def restrict(lift, lift2):
        cols = []
        for v in lift:
            c = _span_coords(F, lift2, target.B.dim, psi(v))
            if c is None:
                raise InputError("psi does not respect the Peirce decomposition")
            cols.append(c)
        return la.transpose(cols)

    sigma = AlgebraMorphism(pd.algebra, pd2.algebra, restrict(pd.algebra_lift, pd2.algebra_lift))
    maps = [restrict(l1, l2) for l1, l2 in zip(pd.module_lifts, pd2.module_lifts)]
    return TwistedIso(sigma, maps, pd.modules, pd2.modules)


def twist_identification(iso: TwistedIso, i: int) -> list:
    """For an automorphism tuple (A = A'): the A-linear iso P'_i -> P_{i, sigma^{-1}},
    which is sigma_i^{-1}. ``i`` is 1-based."""
    A, A2 = iso.sigma.source, iso.sigma.target
    if A.dim != A2.dim or A.constants() != A2.constants():
        raise InputError("twist identification needs sigma to be an automorphism of one algebra")
    F = A.field
    f = la.inverse(F, iso.maps[i - 1])
    sigma_on_A = AlgebraMorphism(A, A, iso.sigma.matrix)
    Ptw = twist(iso.source_modules[i - 1], sigma_on_A.inverse())
    if not is_semilinear(f, iso.target_modules[i - 1], Ptw, None):
        raise PropertyViolation(f"sigma_{i}^(-1) is not A-linear onto the twisted module")
    return f


@dataclass
class DictionaryCheck:
    tuple_roundtrip: bool
    automorphism_roundtrip: bool

    @property
    def ok(self) -> bool:
        return self.tuple_roundtrip and self.automorphism_roundtrip

    def to_json(self) -> dict:
        return {"tupleRoundTrip": self.tuple_roundtrip, "automorphismRoundTrip": self.automorphism_roundtrip}


def dictionary_roundtrip(iso: TwistedIso) -> DictionaryCheck:
    """Tuple -> psi -> tuple, compared through the explicit identifications
    A ~ e_1 B e_1 and P_i ~ e_i B e_1; and psi -> tuple -> psi', compared
    through B ~ End(sum e_i B e_1)."""
    A, A2 = iso.sigma.source, iso.sigma.target
    F = A.field
    src = endo_algebra(A, iso.source_modules[1:], _alpha_of(A, iso.source_modules))
    tgt = endo_algebra(A2, iso.target_modules[1:], _alpha_of(A2, iso.target_modules))
    pd, pd2 = peirce_decompose(src), peirce_decompose(tgt)
    psi = iso_to_automorphism(iso, src, tgt)
    back = automorphism_to_tuple(psi, src, tgt, pd, pd2)
    r1 = endo_then_peirce(A, iso.source_modules[1:], src.alpha, src, pd)
    r2 = endo_then_peirce(A2, iso.target_modules[1:], tgt.alpha, tgt, pd2)
    ok1 = r1.ok and r2.ok
    # back.sigma o iota = iota' o sigma
    ok1 = ok1 and la.matmul(F, back.sigma.matrix, r1.algebra_map.matrix) == la.matmul(F, r2.algebra_map.matrix, iso.sigma.matrix)
    for th, th2, s_back, s in zip(r1.module_maps, r2.module_maps, back.maps, iso.maps):
        ok1 = ok1 and la.matmul(F, s_back, th) == la.matmul(F, th2, s)

    # psi -> back -> psi' on End(sum e_i B e_1); compare pi' o psi = psi' o pi
    e1, e2 = endo_algebra(pd.algebra, pd.modules[1:], src.alpha), endo_algebra(pd2.algebra, pd2.modules[1:], tgt.alpha)
    pi1 = peirce_then_endo(src, pd, e1)
    pi2 = peirce_then_endo(tgt, pd2, e2)
    psi2 = iso_to_automorphism(back, e1, e2)
    ok2 = pi1.ok and pi2.ok and (
        la.matmul(F, pi2.algebra_map.matrix, psi.matrix) == la.matmul(F, psi2.matrix, pi1.algebra_map.matrix))
    return DictionaryCheck(bool(ok1), bool(ok2))


# ---------------------------------------------------------------------------
# which dimension vectors admit modules


@dataclass
class ObstructionReport:
    index: int
    degree: int
    certificate: str
    vertices: list  # (d_i, divisible)
    witness: Optional[DimVecAzumaya] = None
    witness_index: Optional[int] = None

    @property
    def feasible(self) -> bool:
        return all(ok for _, ok in self.vertices)

    @property
    def first_failure(self) -> Optional[int]:
        for i, (_, ok) in enumerate(self.vertices, start=1):
            if not ok:
                return i
        return None

    def to_json(self) -> dict:
        out = {"index": self.index, "degree": self.degree, "certificate": self.certificate,
               "feasible": self.feasible,
               "vertices": [{"d": d, "moduleExists": ok} for d, ok in self.vertices]}
        if self.first_failure is not None:
            out["failsAt"] = self.first_failure
            out["simpleModuleDimF"] = self.degree * self.index
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
            out["witnessIndex"] = self.witness_index
        return out


def module_obstruction(A: StructureAlgebra, alpha: Sequence[int], *, seed: int = 0, attempts: int = 64,
                       build_witness: bool = True) -> ObstructionReport:
    """A right A-module of dimF d_1 d_i exists iff the index m divides d_i.

    The simple module is a minimal right ideal (dimF = d_1 m); when all
    vertices pass, P_i = simple^(d_i / m) and endo_algebra builds the witness,
    whose own index is recomputed to compare Brauer classes."""
    alpha = tuple(int(d) for d in alpha)
    if not alpha or any(d < 1 for d in alpha):
        raise InputError("dimension vector entries must be positive")
    try:
        n = degree(A)
    except PreconditionError as exc:
        raise PreconditionError(f"A is not central simple: {exc}") from None
    if n != alpha[0]:
        raise InputError(f"degree(A) = {n} but alpha[0] = {alpha[0]}")
    res = index_of(A, seed=seed, attempts=attempts)
    m = res.index
    report = ObstructionReport(m, n, res.certificate, [(d, d % m == 0) for d in alpha])
    if report.feasible and build_witness:
        if res.simple_ideal is None:
            raise PreconditionError("index found without an explicit simple module")
        S = ideal_module(A, res.simple_ideal)
        if S.dim != n * m:
            raise PropertyViolation("simple module has the wrong dimension", expected=n * m, actual=S.dim)
        mods = [direct_sum([S] * (d // m)) for d in alpha[1:]]
        W = endo_algebra(A, mods, alpha)
        report.witness = W
        report.witness_index = index_of(W.B, seed=seed, attempts=attempts).index
        if report.witness_index != m:
            raise PropertyViolation("witness is not Brauer equivalent to A", expected=m, actual=report.witness_index)
    return report
