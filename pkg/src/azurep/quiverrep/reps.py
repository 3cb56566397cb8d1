"""Representation equations, brute-force point scans and GL(alpha)-orbits.

A representation point is a dict ``{arrow name: matrix}`` where the matrix of
``a: i -> j`` is ``d_j x d_i``. The group GL(alpha) acts by
``M_a -> g_j M_a g_i^{-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .. import linalg as la
from .. import modp
from ..errors import BudgetExceeded, InputError, PropertyViolation
from ..fields import ExactField, PrimeField
from ..polynomials import (
    Poly,
    PolynomialSystem,
    generic_matrix,
    poly_identity,
    poly_matadd,
    poly_matmul,
    poly_matscale,
)
from .quiver import QuiverPresentation


def variable_names(Q: QuiverPresentation, alpha: Sequence[int]) -> list[str]:
    """Arrow order, then row-major; indices are 1-based."""
    names = []
    for a in Q.arrows:
        for r in range(alpha[a.target]):
            for c in range(alpha[a.source]):
                names.append(f"{a.name}_{r + 1}_{c + 1}")
    return names


def generic_point(Q: QuiverPresentation, alpha, F: ExactField, commutative=True) -> dict:
    out, idx = {}, 0
    for a in Q.arrows:
        rows, cols = alpha[a.target], alpha[a.source]
        out[a.name] = generic_matrix(F, idx, rows, cols, commutative)
        idx += rows * cols
    return out


def evaluate_relations_symbolic(Q: QuiverPresentation, alpha, F: ExactField, mats: dict, commutative=True) -> list:
    """Every entry of every relation, row-major within each relation."""
    polys = []
    for rel, (s, t) in zip(Q.relations, Q.relation_ends):
        total = [[Poly(F, {}, commutative) for _ in range(alpha[s])] for _ in range(alpha[t])]
        for term in rel:
            if not term.path:
                M = poly_identity(F, alpha[s], commutative)
            else:
                M = mats[term.path[0]]
                for name in term.path[1:]:
                    M = poly_matmul(mats[name], M)
            total = poly_matadd(total, poly_matscale(F(term.coeff), M))
        polys.extend(p for row in total for p in row)
    return polys


def rep_equations(Q: QuiverPresentation, alpha: Sequence[int], F: ExactField) -> PolynomialSystem:
    alpha = Q.check_alpha(alpha)
    mats = generic_point(Q, alpha, F)
    return PolynomialSystem(F, variable_names(Q, alpha), evaluate_relations_symbolic(Q, alpha, F, mats))


# ---------------------------------------------------------------------------
# exact points


def _check_shapes(Q: QuiverPresentation, alpha, point: dict, F: ExactField) -> dict:
    out = {}
    for a in Q.arrows:
        if a.name not in point:
            raise InputError(f"missing matrix for arrow {a.name!r}")
        M = point[a.name]
        rows, cols = alpha[a.target], alpha[a.source]
        if len(M) != rows or any(len(r) != cols for r in M):
            raise InputError(f"matrix for {a.name!r} must be {rows}x{cols}")
        out[a.name] = [[F(x) for x in r] for r in M]
    extra = set(point) - {a.name for a in Q.arrows}
    if extra:
        raise InputError(f"matrices given for unknown arrows {sorted(extra)}")
    return out


def evaluate_relation(Q: QuiverPresentation, alpha, F: ExactField, mats: dict, k: int) -> list:
    s, t = Q.relation_ends[k]
    total = la.zeros(F, alpha[t], alpha[s])
    for term in Q.relations[k]:
        if not term.path:
            M = la.identity(F, alpha[s])
        else:
            M = mats[term.path[0]]
            for name in term.path[1:]:
                M = la.matmul(F, mats[name], M)
        total = la.mat_add(F, total, la.mat_scale(F, F(term.coeff), M))
    return total


def is_representation(Q: QuiverPresentation, alpha, point: dict, F: ExactField) -> bool:
    alpha = Q.check_alpha(alpha)
    mats = _check_shapes(Q, alpha, point, F)
    return all(
        all(x == 0 for row in evaluate_relation(Q, alpha, F, mats, k) for x in row)
        for k in range(len(Q.relations))
    )


def point_to_vector(Q, alpha, point: dict) -> tuple:
    return tuple(x for a in Q.arrows for row in point[a.name] for x in row)


def vector_to_point(Q, alpha, vec: Sequence) -> dict:
    out, idx = {}, 0
    for a in Q.arrows:
        rows, cols = alpha[a.target], alpha[a.source]
        out[a.name] = tuple(tuple(int(v) for v in vec[idx + r * cols: idx + (r + 1) * cols]) for r in range(rows))
        idx += rows * cols
    return out


# ---------------------------------------------------------------------------
# batched scans over GF(p)


def _split_batch(Q, alpha, X: np.ndarray) -> dict:
    mats, idx = {}, 0
    for a in Q.arrows:
        rows, cols = alpha[a.target], alpha[a.source]
        mats[a.name] = X[:, idx: idx + rows * cols].reshape(-1, rows, cols)
        idx += rows * cols
    return mats


def _join_batch(Q, mats: dict, N: int) -> np.ndarray:
    if not Q.arrows:
        return np.zeros((N, 0), dtype=np.int64)
    return np.concatenate([mats[a.name].reshape(N, -1) for a in Q.arrows], axis=1)


def relations_hold_batch(Q: QuiverPresentation, alpha, mats: dict, N: int, p: int) -> np.ndarray:
    F = PrimeField(p)
    ok = np.ones(N, dtype=bool)
    for rel, (s, t) in zip(Q.relations, Q.relation_ends):
        total = np.zeros((N, alpha[t], alpha[s]), dtype=np.int64)
        for term in rel:
            if not term.path:
                M = np.broadcast_to(np.eye(alpha[s], dtype=np.int64), (N, alpha[s], alpha[s]))
            else:
                M = mats[term.path[0]]
                for name in term.path[1:]:
                    M = modp.matmul(mats[name], M, p)
            total = (total + F(term.coeff) * M) % p
        ok &= ~total.reshape(N, -1).any(axis=1)
    return ok


def enumerate_rep_array(Q: QuiverPresentation, alpha, p: int, cap: int) -> np.ndarray:
    """All GF(p)-points as rows of flattened variables, lexicographic order."""
    alpha = Q.check_alpha(alpha)
    modp.check_prime_size(p)
    PrimeField(p)
    v = Q.variable_count(alpha)
    X = modp.all_vectors(p, v, cap)
    if not Q.relations:
        return X
    ok = relations_hold_batch(Q, alpha, _split_batch(Q, alpha, X), len(X), p)
    return X[ok]


def enumerate_reps(Q: QuiverPresentation, alpha, F: PrimeField, cap: int) -> list[dict]:
    if not isinstance(F, PrimeField):
        raise InputError("enumeration needs a prime field")
    alpha = Q.check_alpha(alpha)
    return [vector_to_point(Q, alpha, row) for row in enumerate_rep_array(Q, alpha, F.p, cap)]


# ---------------------------------------------------------------------------
# the GL(alpha) action


def gl_action(Q: QuiverPresentation, alpha, g: Sequence, point: dict, F: ExactField) -> dict:
    """``a: i -> j`` goes to ``g_j M_a g_i^{-1}``; relations are re-checked."""
    alpha = Q.check_alpha(alpha)
    if len(g) != Q.vertex_count:
        raise InputError("one group element per vertex")
    ginv = []
    for i, gi in enumerate(g):
        if len(gi) != alpha[i] or any(len(r) != alpha[i] for r in gi):
            raise InputError(f"g_{i + 1} must be {alpha[i]}x{alpha[i]}")
        if not la.is_invertible(F, gi):
            raise InputError(f"g_{i + 1} is singular")
        ginv.append(la.inverse(F, gi))
    mats = _check_shapes(Q, alpha, point, F)
    out = {}
    for a in Q.arrows:
        out[a.name] = tuple(tuple(r) for r in la.matmul(F, la.matmul(F, g[a.target], mats[a.name]), ginv[a.source]))
    if is_representation(Q, alpha, point, F) and not is_representation(Q, alpha, out, F):
        raise PropertyViolation("group action broke a relation")
    return out


@dataclass
class Orbit:
    representative: tuple
    size: int
    stabilizer: int
    pgl_stabilizer: int

    def to_json(self) -> dict:
        return {"representative": list(self.representative), "size": self.size,
                "stabilizer": self.stabilizer, "pglStabilizer": self.pgl_stabilizer}


@dataclass
class OrbitReport:
    group_order: int
    scalar_order: int
    points: int
    orbits: list = field(default_factory=list)

    @property
    def pgl_order(self) -> int:
        return self.group_order // self.scalar_order

    def groupoid_cardinality(self) -> Fraction:
        return sum((Fraction(1, o.pgl_stabilizer) for o in self.orbits), Fraction(0))

    def to_json(self) -> dict:
        return {"groupOrder": self.group_order, "pglOrder": self.pgl_order, "points": self.points,
                "orbitCount": len(self.orbits), "orbits": [o.to_json() for o in self.orbits]}


def gl_alpha(alpha, q: int, max_group: int):
    """Per-vertex lists of GL(d_i, q) and the index grid of the product group."""
    order = 1
    for d in alpha:
        order *= modp.gl_order(d, q)
    if order > max_group:
        raise BudgetExceeded(f"GL{tuple(alpha)}(F_{q})", order, max_group)
    groups = [modp.general_linear_group(d, q, budget=max(max_group, q ** (d * d))) for d in alpha]
    grid = np.indices(tuple(len(G) for G, _ in groups)).reshape(len(alpha), -1)
    return groups, grid, order


def orbit_analysis(Q: QuiverPresentation, alpha, points: np.ndarray, p: int, max_group: int = 10**6) -> OrbitReport:
    """Orbits of the full GL(alpha)(F_p) on the given points (rows of flattened variables)."""
    alpha = Q.check_alpha(alpha)
    points = np.asarray(points, dtype=np.int64).reshape(len(points), -1)
    groups, grid, order = gl_alpha(alpha, p, max_group)
    v = points.shape[1]
    weights = np.array([p**k for k in range(v)], dtype=object if p ** max(v, 1) >= 2**62 else np.int64)

    def keys(rows):
        if weights.dtype == object:
            return [tuple(int(x) for x in r) for r in rows]
        return list((rows * weights).sum(axis=1)) if v else [0] * len(rows)

    point_keys = keys(points)
    index_of = {k: i for i, k in enumerate(point_keys)}
    if len(index_of) != len(points):
        raise InputError("duplicate points in orbit analysis input")
    seen = np.zeros(len(points), dtype=bool)
    g_el = [G[grid[i]] for i, (G, _) in enumerate(groups)]
    g_inv = [Gi[grid[i]] for i, (_, Gi) in enumerate(groups)]
    report = OrbitReport(order, p - 1, len(points))
    for idx in range(len(points)):
        if seen[idx]:
            continue
        mats = _split_batch(Q, alpha, points[idx: idx + 1])
        images = {}
        for a in Q.arrows:
            M = np.broadcast_to(mats[a.name], (order,) + mats[a.name].shape[1:])
            images[a.name] = modp.matmul(modp.matmul(g_el[a.target], M, p), g_inv[a.source], p)
        img = _join_batch(Q, images, order)
        img_keys = keys(img)
        stab = sum(1 for k in img_keys if k == point_keys[idx])
        orbit = set(img_keys)
        for k in orbit:
            j = index_of.get(k)
            if j is None:
                raise PropertyViolation("orbit leaves the point set (the set is not GL-stable)")
            seen[j] = True
        if len(orbit) * stab != order:
            raise PropertyViolation("orbit-stabilizer identity fails", expected=order, actual=len(orbit) * stab)
        if stab % (p - 1):
            raise PropertyViolation("stabilizer does not contain the scalar tuples")
        report.orbits.append(Orbit(tuple(int(x) for x in points[idx]), len(orbit), stab, stab // (p - 1)))
    if sum(o.size for o in report.orbits) != len(points):
        raise PropertyViolation("orbit sizes do not add up to the point count")
    return report


# ---------------------------------------------------------------------------
# splitting a representation along the vertex idempotents


@dataclass
class Decomposition:
    alpha: tuple
    base_change: list  # columns: bases of the images of e_1, ..., e_k
    blocks: dict  # arrow name -> d_j x d_i block
    conjugated: dict  # arrow name -> full n x n matrix S^{-1} M S

    def to_json(self, F) -> dict:
        fmt = lambda M: [[F.format(x) for x in r] for r in M]
        return {"alpha": list(self.alpha), "baseChange": fmt(self.base_change),
                "blocks": {k: fmt(v) for k, v in self.blocks.items()}}


def decompose_by_idempotents(Q: QuiverPresentation, idempotents: Sequence, arrows: dict, F: ExactField) -> Decomposition:
    """Conjugate an n-dimensional representation of FQ/I into block form.

    ``idempotents[i]`` is the n x n image of the vertex idempotent e_i and
    ``arrows`` the n x n images of the arrows (each satisfying
    ``M_a = e_j M_a e_i``).
    """
    k = Q.vertex_count
    if len(idempotents) != k:
        raise InputError("one idempotent per vertex")
    n = len(idempotents[0])
    E = [[[F(x) for x in r] for r in e] for e in idempotents]
    for e in E:
        if len(e) != n or any(len(r) != n for r in e):
            raise InputError("idempotents must be square of a common size")
    I = la.identity(F, n)
    total = la.zeros(F, n, n)
    for i, e in enumerate(E):
        for j, f in enumerate(E):
            want = e if i == j else la.zeros(F, n, n)
            if la.matmul(F, e, f) != want:
                raise InputError(f"e_{i + 1} e_{j + 1} violates the idempotent relations")
        total = la.mat_add(F, total, e)
    if total != I:
        raise InputError("idempotents do not sum to the identity")
    cols = []
    alpha = []
    for e in E:
        basis = la.column_space(F, e)
        alpha.append(len(basis))
        cols.extend(basis)
    S = la.transpose(cols)
    Sinv = la.inverse(F, S)
    offs = np.cumsum([0] + alpha).tolist()
    conj, blocks = {}, {}
    for a in Q.arrows:
        M = [[F(x) for x in r] for r in arrows[a.name]]
        if la.matmul(F, la.matmul(F, E[a.target], M), E[a.source]) != M:
            raise InputError(f"arrow {a.name!r} is not supported between its endpoint idempotents")
        C = la.matmul(F, la.matmul(F, Sinv, M), S)
        conj[a.name] = C
        rs, cs = offs[a.target], offs[a.source]
        blocks[a.name] = [row[cs: cs + alpha[a.source]] for row in C[rs: rs + alpha[a.target]]]
    return Decomposition(tuple(alpha), S, blocks, conj)


def recompose(Q: QuiverPresentation, d: Decomposition, F: ExactField) -> tuple[list, dict]:
    """Inverse of :func:`decompose_by_idempotents`: rebuild e_i and the arrows."""
    alpha = d.alpha
    n = sum(alpha)
    offs = np.cumsum([0] + list(alpha)).tolist()
    S = d.base_change
    Sinv = la.inverse(F, S)
    es = []
    for i in range(len(alpha)):
        D = la.zeros(F, n, n)
        for r in range(offs[i], offs[i + 1]):
            D[r][r] = F.one
        es.append(la.matmul(F, la.matmul(F, S, D), Sinv))
    arrows = {}
    for a in Q.arrows:
        B = la.zeros(F, n, n)
        blk = d.blocks[a.name]
        for r, row in enumerate(blk):
            for c, x in enumerate(row):
                B[offs[a.target] + r][offs[a.source] + c] = x
        arrows[a.name] = la.matmul(F, la.matmul(F, S, B), Sinv)
    return es, arrows


def flatten_point_json(point: dict, F: ExactField) -> dict:
    return {k: [[F.format(x) for x in r] for r in M] for k, M in point.items()}

