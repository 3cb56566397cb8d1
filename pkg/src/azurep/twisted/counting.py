"""Groupoid cardinality of representations over F_q, computed two ways.

Left: |rep_alpha(R)(F_q)| / |PGL(alpha)(F_q)|, points counted by scan.
Right: sum of 1/|Aut| over isomorphism classes of twisted representations
with A = M_{d_1}(F_q), P_i = (F_q^{d_1})^{d_i}. The automorphism tuples
(sigma, sigma_2, ..., sigma_k) are enumerated as: sigma inner, one per class
of GL_{d_1} modulo scalars, and sigma_i running over the invertible
sigma-semilinear maps of P_i. Scalars are thereby quotiented exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional

import numpy as np

from .. import modp
from ..errors import BudgetExceeded, InputError, PropertyViolation
from ..exactalg.algebra import inner_automorphism, matrix_algebra
from ..fields import PrimeField
from ..quiverrep.quiver import QuiverPresentation
from ..quiverrep.reps import enumerate_rep_array, orbit_analysis
from .modules import direct_sum, hom_space, regular_module, row_module, semilinear_space
from .reps import TwistedIso, TwistedRep, conjugate_twisted

_CHUNK = 4096


def _np(M) -> np.ndarray:
    return np.array([[int(x) for x in r] for r in M], dtype=np.int64)


def _batched_path(rho: dict, path, N: int, dims, vertex, p):
    if not path:
        return np.broadcast_to(np.eye(dims[vertex], dtype=np.int64), (N, dims[vertex], dims[vertex]))
    M = rho[path[0]]
    for name in path[1:]:
        M = modp.matmul(rho[name], M, p)
    return M


@dataclass
class TwistedSetup:
    quiver: QuiverPresentation
    alpha: tuple
    q: int
    algebra: object
    modules: list  # P_1 .. P_k
    hom_bases: dict  # arrow -> (h, dim_t, dim_s) int array

    @property
    def dims(self):
        return [P.dim for P in self.modules]


def twisted_setup(Q: QuiverPresentation, alpha, q: int) -> TwistedSetup:
    F = PrimeField(q)
    A = matrix_algebra(alpha[0], F)
    mods = [regular_module(A)] + [direct_sum([row_module(A)] * d) for d in alpha[1:]]
    homs = {}
    for a in Q.arrows:
        basis = hom_space(mods[a.source], mods[a.target])
        homs[a.name] = np.array([_np(h) for h in basis], dtype=np.int64).reshape(
            len(basis), mods[a.target].dim, mods[a.source].dim)
    return TwistedSetup(Q, tuple(alpha), q, A, mods, homs)


def enumerate_twisted(setup: TwistedSetup, max_points: int) -> dict:
    """All twisted representations as ``{arrow: (N, dim_t, dim_s) array}``."""
    Q, p = setup.quiver, setup.q
    sizes = [setup.hom_bases[a.name].shape[0] for a in Q.arrows]
    total_vars = sum(sizes)
    count = p ** total_vars
    if count > max_points:
        raise BudgetExceeded("twisted representation scan", count, max_points)
    X = modp.all_vectors(p, total_vars, max_points)
    dims = setup.dims
    kept = {a.name: [] for a in Q.arrows}
    for start in range(0, len(X), _CHUNK):
        chunk = X[start:start + _CHUNK]
        n = len(chunk)
        rho, off = {}, 0
        for a, h in zip(Q.arrows, sizes):
            H = setup.hom_bases[a.name]
            rho[a.name] = np.einsum("nk,krc->nrc", chunk[:, off:off + h], H) % p if h else \
                np.zeros((n, dims[a.target], dims[a.source]), dtype=np.int64)
            off += h
        ok = np.ones(n, dtype=bool)
        for k, rel in enumerate(Q.relations):
            s, t = Q.relation_ends[k]
            acc = np.zeros((n, dims[t], dims[s]), dtype=np.int64)
            for term in rel:
                M = _batched_path(rho, term.path, n, dims, term.vertex, p)
                acc = (acc + int(PrimeField(p)(term.coeff)) * M) % p
            ok &= ~acc.reshape(n, -1).any(axis=1)
        for a in Q.arrows:
            kept[a.name].append(rho[a.name][ok])
    return {a.name: np.concatenate(kept[a.name], axis=0) if kept[a.name] else
            np.zeros((0, dims[a.target], dims[a.source]), dtype=np.int64) for a in Q.arrows}


def automorphism_tuples(setup: TwistedSetup, max_group: int):
    """Per vertex arrays (G, dim, dim) of sigma_i and their inverses, plus the
    exact tuples (for cross-checks through conjugate_twisted)."""
    A, p = setup.algebra, setup.q
    F = A.field
    d1 = setup.alpha[0]
    expected = 1
    for d in setup.alpha:
        expected *= modp.gl_order(d, p)
    expected //= (p - 1)
    if expected > max_group:
        raise BudgetExceeded("PGL(alpha) twisted automorphism group", expected, max_group)
    us, _ = modp.general_linear_group(d1, p, budget=max(max_group, p ** (d1 * d1)))
    sigmas, seen = [], set()
    for u in us:
        uvec = [F(int(x)) for x in u.reshape(-1)]
        s = inner_automorphism(A, uvec)
        key = tuple(tuple(int(x) for x in r) for r in s.matrix)
        if key not in seen:
            seen.add(key)
            sigmas.append(s)
    per_vertex = [[] for _ in setup.modules]
    exact = []
    for s in sigmas:
        options = []
        for P in setup.modules[1:]:
            basis = np.array([_np(h) for h in semilinear_space(P, P, s)], dtype=np.int64)
            coeffs = modp.all_vectors(p, len(basis), max(max_group, p ** len(basis)))
            mats = np.einsum("nk,krc->nrc", coeffs, basis) % p
            mask, _ = modp.gauss_jordan(mats, p)
            options.append(mats[mask])
        for choice in product(*[range(len(o)) for o in options]):
            mats = [_np(s.matrix)] + [o[c] for o, c in zip(options, choice)]
            for i, M in enumerate(mats):
                per_vertex[i].append(M)
            exact.append((s, mats))
    if len(exact) != expected:
        raise PropertyViolation("twisted automorphism group has the wrong order", expected=expected, actual=len(exact))
    G = [np.stack(v) for v in per_vertex]
    Ginv = []
    for g in G:
        mask, inv = modp.gauss_jordan(g, p)
        if not mask.all():
            raise PropertyViolation("non-invertible sigma_i in the automorphism group")
        Ginv.append(inv)
    return G, Ginv, exact


@dataclass
class GroupoidCount:
    lhs: Fraction
    rhs: Fraction
    points: int
    pgl_order: int
    twisted_reps: int
    classes: list = field(default_factory=list)  # stabilizer orders
    classical: Optional[Fraction] = None
    cross_checked: int = 0

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    def to_json(self) -> dict:
        def frac(x):
            return {"num": x.numerator, "den": x.denominator}

        out = {"lhs": frac(self.lhs), "rhs": frac(self.rhs), "equal": self.equal,
               "points": self.points, "pglOrder": self.pgl_order, "twistedReps": self.twisted_reps,
               "automorphismOrders": sorted(self.classes)}
        if self.classical is not None:
            out["classicalOrbitSum"] = frac(self.classical)
        return out


def _exact_rep(setup: TwistedSetup, reps: dict, idx: int) -> TwistedRep:
    rho = {a: [[int(x) for x in r] for r in M[idx]] for a, M in reps.items()}
    return TwistedRep(setup.algebra, setup.modules[1:], rho, setup.quiver)


def groupoid_count(Q: QuiverPresentation, alpha, q: int, *, max_points: int = 1 << 20,
                   max_group: int = 10**5, cross_check: int = 4) -> GroupoidCount:
    """Both sides of the groupoid-cardinality identity over F_q.

    ``cross_check`` orbit representatives are also pushed through
    :func:`conjugate_twisted` for a few group elements and compared with the
    batched action.
    """
    alpha = Q.check_alpha(alpha)
    if not isinstance(q, int) or q < 2:
        raise InputError("q must be a prime")
    F = PrimeField(q)
    p = F.p
    pgl = 1
    for d in alpha:
        pgl *= modp.gl_order(d, p)
    pgl //= (p - 1)

    points = enumerate_rep_array(Q, alpha, p, max_points)
    lhs = Fraction(len(points), pgl)
    classical = None
    if pgl * (p - 1) <= max_group:
        classical = orbit_analysis(Q, alpha, points, p, max_group).groupoid_cardinality()

    setup = twisted_setup(Q, alpha, p)
    reps = enumerate_twisted(setup, max_points)
    n_reps = len(next(iter(reps.values()))) if reps else 1
    G, Ginv, exact = automorphism_tuples(setup, max_group)
    order = len(exact)
    names = [a.name for a in Q.arrows]

    if names:
        flat_reps = np.concatenate([reps[n].reshape(n_reps, -1) for n in names], axis=1)
    else:
        flat_reps = np.zeros((1, 0), dtype=np.int64)
    key_of = {r.tobytes(): i for i, r in enumerate(flat_reps)}
    seen = np.zeros(n_reps, dtype=bool)
    stabs = []
    checked = 0
    for idx in range(n_reps):
        if seen[idx]:
            continue
        images = []
        for a in Q.arrows:
            M = np.broadcast_to(reps[a.name][idx], (order,) + reps[a.name].shape[1:])
            images.append(modp.matmul(modp.matmul(G[a.target], M, p), Ginv[a.source], p).reshape(order, -1))
        img = np.concatenate(images, axis=1) if images else np.zeros((order, 0), dtype=np.int64)
        keys = [r.tobytes() for r in img]
        me = flat_reps[idx].tobytes()
        stab = sum(1 for k in keys if k == me)
        orbit = set(keys)
        for k in orbit:
            j = key_of.get(k)
            if j is None:
                raise PropertyViolation("conjugation leaves the set of twisted representations")
            seen[j] = True
        if len(orbit) * stab != order:
            raise PropertyViolation("orbit-stabilizer identity fails", expected=order, actual=len(orbit) * stab)
        stabs.append(stab)
        if checked < cross_check and names:
            t = _exact_rep(setup, reps, idx)
            for gi in range(0, order, max(1, order // 3))[:3]:
                s, mats = exact[gi]
                iso = TwistedIso(s, [m.tolist() for m in mats], setup.modules, setup.modules)
                t2 = conjugate_twisted(t, iso)
                got = np.concatenate([_np(t2.rho[n]).reshape(-1) for n in names])
                if not np.array_equal(got, img[gi]):
                    raise PropertyViolation("batched action disagrees with conjugate_twisted")
            checked += 1
    rhs = sum((Fraction(1, s) for s in stabs), Fraction(0))
    return GroupoidCount(lhs, rhs, len(points), pgl, n_reps, stabs, classical, checked)
