"""Counting algebra maps R -> B over GF(p) by brute force.

R is a one-vertex presentation; a map is a choice of images of the
generators satisfying the relations. A path ``[a1, ..., al]`` is sent to
``phi(al) ... phi(a1)``, matching how paths act on representations.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .. import modp
from ..errors import BudgetExceeded, InputError
from ..exactalg.algebra import AlgebraMorphism, StructureAlgebra, matrix_algebra
from ..exactalg.tensor import relative_tensor
from ..fields import PrimeField
from .quiver import QuiverPresentation
from .reps import rep_equations

_CHUNK = 8192


def _dense_constants(B: StructureAlgebra) -> np.ndarray:
    d = B.dim
    C = np.zeros((d, d, d), dtype=np.int64)
    for (i, j), entry in B.sparse_constants().items():
        for k, c in entry.items():
            C[i, j, k] = int(c)
    return C


def mul_batch(C: np.ndarray, X: np.ndarray, Y: np.ndarray, p: int) -> np.ndarray:
    """Row-wise products in the algebra with dense constants C."""
    d = C.shape[0]
    T = (X @ C.reshape(d, d * d)).reshape(-1, d, d) % p
    return np.einsum("njk,nj->nk", T, Y) % p


def _prime_of(B: StructureAlgebra) -> int:
    if not isinstance(B.field, PrimeField):
        raise InputError("counting algebra maps needs a prime field")
    modp.check_prime_size(B.field.p)
    return B.field.p


def _relations_hold(R: QuiverPresentation, B: StructureAlgebra, C, images: dict, N: int, p: int) -> np.ndarray:
    F = B.field
    unit = np.array([int(u) for u in B.unit], dtype=np.int64)
    ok = np.ones(N, dtype=bool)
    for rel in R.relations:
        total = np.zeros((N, B.dim), dtype=np.int64)
        for term in rel:
            if not term.path:
                v = np.broadcast_to(unit, (N, B.dim))
            else:
                v = images[term.path[0]]
                for name in term.path[1:]:
                    v = mul_batch(C, images[name], v, p)
            total = (total + F(term.coeff) * v) % p
        ok &= ~total.any(axis=1)
    return ok


def algebra_maps(R: QuiverPresentation, B: StructureAlgebra, cap: int) -> np.ndarray:
    """All maps as rows ``(phi(g_1), ..., phi(g_r))`` of B-coordinates, lexicographic."""
    if not R.is_one_vertex:
        raise InputError("algebra maps are counted for one-vertex presentations")
    p = _prime_of(B)
    r, d = len(R.arrows), B.dim
    total = p ** (d * r)
    if total > cap:
        raise BudgetExceeded(f"scan of {B.name or 'B'}^{r}", total, cap)
    C = _dense_constants(B)
    X = modp.all_vectors(p, d * r, cap)
    if not R.relations:
        return X
    keep = []
    for start in range(0, len(X), _CHUNK):
        chunk = X[start: start + _CHUNK]
        images = {a.name: chunk[:, k * d:(k + 1) * d] for k, a in enumerate(R.arrows)}
        keep.append(chunk[_relations_hold(R, B, C, images, len(chunk), p)])
    return np.concatenate(keep, axis=0)


def count_algebra_maps(R: QuiverPresentation, B: StructureAlgebra, cap: int, *, formula_for_free: bool = True):
    """``(count, method)``; a free presentation is counted as ``|B|^r`` without a scan."""
    p = _prime_of(B)
    if formula_for_free and not R.relations:
        return p ** (B.dim * len(R.arrows)), "formula"
    return len(algebra_maps(R, B, cap)), "scan"


@dataclass
class PointCountCheck:
    equation_count: int
    map_count: int

    @property
    def equal(self) -> bool:
        return self.equation_count == self.map_count

    def to_json(self) -> dict:
        return {"equationPoints": self.equation_count, "algebraMaps": self.map_count, "equal": self.equal}


def point_count_check(R: QuiverPresentation, n: int, q: int, cap: int) -> PointCountCheck:
    """Zeros of rep_equations versus algebra maps into M_n(F_q), both by scan."""
    F = PrimeField(q)
    system = rep_equations(R, (n,), F)
    lhs = system.count_solutions(q, cap)
    rhs = len(algebra_maps(R, matrix_algebra(n, F), cap))
    return PointCountCheck(lhs, rhs)


@dataclass
class TensorCountCheck:
    tensor_count: int
    matrix_count: int
    method: str

    @property
    def equal(self) -> bool:
        return self.tensor_count == self.matrix_count

    def to_json(self) -> dict:
        return {"tensorCount": self.tensor_count, "matrixCount": self.matrix_count,
                "method": self.method, "equal": self.equal}


def split_tensor_count(R: QuiverPresentation, a: int, b: int, q: int, cap: int) -> TensorCountCheck:
    """|Alg(R, M_a (x) M_b)| against |Alg(R, M_ab)| over F_q."""
    from ..exactalg.algebra import full_tensor

    F = PrimeField(q)
    T = full_tensor(matrix_algebra(a, F), matrix_algebra(b, F))
    M = matrix_algebra(a * b, F)
    c1, m1 = count_algebra_maps(R, T, cap)
    c2, _ = count_algebra_maps(R, M, cap)
    return TensorCountCheck(c1, c2, m1)


# ---------------------------------------------------------------------------
# set-level gluing


@dataclass
class GluingReport:
    matched: int
    glued: int
    candidates: int
    section_counts: list
    globals_match: bool

    @property
    def exact(self) -> bool:
        return self.globals_match and self.matched == self.glued

    def to_json(self) -> dict:
        return {"matched": self.matched, "global": self.glued, "candidates": self.candidates,
                "localCounts": self.section_counts, "exact": self.exact}


def sheaf_gluing_check(R: QuiverPresentation, cover: Sequence[AlgebraMorphism], cap: int) -> GluingReport:
    """Exhaustively compare Alg(R, A) with the matching families of local maps.

    A family ``(phi_i)`` with ``phi_i`` in Alg(R, A_i) matches when for every
    pair (i, j), including i = j, the images of each generator agree in
    ``A_i (x)_A A_j`` under ``x -> x (x) 1`` and ``y -> 1 (x) y``.
    """
    if not cover:
        raise InputError("empty cover")
    A = cover[0].source
    r = len(R.arrows)
    local = [algebra_maps(R, f.target, cap) for f in cover]
    candidates = 1
    for L in local:
        candidates *= len(L)
    if candidates > cap:
        raise BudgetExceeded("matching families", candidates, cap)

    p = A.field.p

    def keyed(lin, rows, dim_in):
        M = np.array([[int(v) for v in row] for row in lin], dtype=np.int64).reshape(-1, dim_in)
        out = []
        for row in rows:
            out.append(tuple(tuple((M @ row[g * dim_in:(g + 1) * dim_in]) % p) for g in range(r)))
        return out

    k = len(cover)
    left, right = {}, {}
    for i in range(k):
        for j in range(k):
            T = relative_tensor(cover[i], cover[j])
            left[i, j] = keyed(T.left_linear(), local[i], cover[i].target.dim)
            right[i, j] = keyed(T.right_linear(), local[j], cover[j].target.dim)

    matched = []
    for combo in product(*[range(len(L)) for L in local]):
        if all(left[i, j][combo[i]] == right[i, j][combo[j]] for i in range(k) for j in range(k)):
            matched.append(combo)

    glob = algebra_maps(R, A, cap)
    # each global map must land on a matching family, and distinct ones on distinct families
    images = set()
    for row in glob:
        fam = []
        for i, f in enumerate(cover):
            img = []
            for g in range(r):
                img.extend(f(tuple(f.source.field(int(v)) for v in row[g * A.dim:(g + 1) * A.dim])))
            fam.append(tuple(int(v) for v in img))
        images.add(tuple(fam))
    matched_fams = {tuple(tuple(int(v) for v in local[i][c]) for i, c in enumerate(combo)) for combo in matched}
    return GluingReport(len(matched), len(images), candidates, [len(L) for L in local],
                        images <= matched_fams)
