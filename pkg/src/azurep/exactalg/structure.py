"""Structure theory: traces, centralizers, separability, Skolem-Noether."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from sympy import Poly, symbols
from sympy.polys.domains import GF as SympyGF
from sympy.polys.matrices import DomainMatrix

from .. import linalg as la
from ..errors import InputError, PreconditionError, PropertyViolation, RetryError
from ..fields import ExactField, PrimeField
from .algebra import AlgebraMorphism, StructureAlgebra, is_subspace_closed, matrix_degree, subalgebra


def regular_representation(A: StructureAlgebra, x: Sequence) -> list:
    return A.left_matrix(x)


def degree(A: StructureAlgebra) -> int:
    """Degree of a central algebra of square dimension."""
    n = matrix_degree(A)
    if not A.is_central():
        raise PreconditionError(f"center has dimension {len(A.center)}; algebra is not central")
    return n


def _charpoly_modp(M: Sequence[Sequence], p: int) -> list[int]:
    K = SympyGF(p)
    dm = DomainMatrix([[K(int(v)) for v in row] for row in M], (len(M), len(M)), K)
    return [int(c) % p for c in dm.charpoly()]


def _reduced_charpoly_modp(M, n: int, p: int) -> list[int]:
    """n-th root of the characteristic polynomial of a d x d matrix, d = n^2."""
    t = symbols("t")
    cp = Poly(_charpoly_modp(M, p), t, modulus=p)
    _, factors = cp.factor_list()
    root = Poly(1, t, modulus=p)
    for f, e in factors:
        if e % n:
            raise PropertyViolation("characteristic polynomial of the regular representation is not an n-th power",
                                    expected=n, actual=e)
        root = root * f ** (e // n)
    return [int(c) % p for c in root.all_coeffs()]


def reduced_trace(A: StructureAlgebra, x: Sequence):
    """Reduced trace of ``x`` in a central simple algebra of degree n.

    The left regular representation is n copies of the reduced one, so when
    the characteristic does not divide n the trace is ``tr(L_x) / n``. When it
    does, the reduced characteristic polynomial is recovered as the n-th root
    of the regular one and its subleading coefficient is read off.
    """
    F = A.field
    n = degree(A)
    L = A.left_matrix(x)
    if F.characteristic == 0 or n % F.characteristic:
        return F(la.trace(F, L) * F.inv(n))
    coeffs = _reduced_charpoly_modp(L, n, F.characteristic)
    return F(-coeffs[1]) if len(coeffs) > 1 else F.zero


def reduced_charpoly(A: StructureAlgebra, x: Sequence) -> list:
    """Coefficients of the reduced characteristic polynomial (GF(p) only)."""
    F = A.field
    if not isinstance(F, PrimeField):
        raise InputError("reduced_charpoly is only implemented over prime fields")
    return _reduced_charpoly_modp(A.left_matrix(x), degree(A), F.p)


def center(A: StructureAlgebra) -> list:
    return list(A.center)


def centralizer(A: StructureAlgebra, S: Sequence[Sequence]) -> list:
    """Basis of the common commutant of ``S``; closure is verified."""
    for s in S:
        if len(s) != A.dim:
            raise InputError("element does not lie in the algebra")
    C = A.commutant(S)
    if not is_subspace_closed(A, C):
        raise PropertyViolation("commutant is not closed under multiplication")
    return C


# ---------------------------------------------------------------------------
# separability


@dataclass
class SeparabilityIdempotent:
    """``e = sum_ij coeffs[i][j] b_i (x) b_j`` in A (x) A^op."""

    algebra: StructureAlgebra
    coeffs: list

    def terms(self):
        return [(i, j, c) for i, row in enumerate(self.coeffs) for j, c in enumerate(row) if c]

    def multiplication(self):
        A = self.algebra
        acc = A.zero
        for i, j, c in self.terms():
            acc = A.add(acc, A.scale(c, A.mul(A.basis(i), A.basis(j))))
        return acc

    def commutes_with(self, x) -> bool:
        """x.e == e.x in the bimodule A (x) A."""
        A = self.algebra
        F, d = A.field, A.dim
        Lx, Rx = A.left_matrix(x), A.right_matrix(x)
        for k in range(d):
            for l in range(d):
                v = 0
                for i in range(d):
                    v += Lx[k][i] * self.coeffs[i][l]
                for j in range(d):
                    v -= self.coeffs[k][j] * Rx[l][j]
                if F(v) != 0:
                    return False
        return True

    def verify(self) -> bool:
        A = self.algebra
        return self.multiplication() == A.one and all(
            self.commutes_with(A.basis(i)) for i in range(A.dim)
        )


def separability_idempotent(A: StructureAlgebra) -> Optional[SeparabilityIdempotent]:
    """Solve for a separability idempotent; None if the linear system is inconsistent."""
    F, d = A.field, A.dim
    nvar = d * d
    rows: list[list] = []
    rhs: list = []
    for x in A.generators:
        Lx, Rx = A.left_matrix(x), A.right_matrix(x)
        for k in range(d):
            for l in range(d):
                row = [0] * nvar
                for i in range(d):
                    if Lx[k][i]:
                        row[i * d + l] += Lx[k][i]
                for j in range(d):
                    if Rx[l][j]:
                        row[k * d + j] -= Rx[l][j]
                if any(row):
                    rows.append(row)
                    rhs.append(0)
    for r in range(d):
        row = [0] * nvar
        for i in range(d):
            for j in range(d):
                for k, c in A.product_of_basis(i, j):
                    if k == r:
                        row[i * d + j] += c
        rows.append(row)
        rhs.append(A.unit[r])
    sol = la.solve(F, rows, rhs, nvar)
    if sol is None:
        return None
    e = SeparabilityIdempotent(A, [list(sol[i * d:(i + 1) * d]) for i in range(d)])
    if not e.verify():
        raise PropertyViolation("solved separability idempotent fails verification on the full basis")
    return e


def is_separable(A: StructureAlgebra) -> bool:
    return separability_idempotent(A) is not None


# ---------------------------------------------------------------------------
# Skolem-Noether


def intertwiners(f: AlgebraMorphism, g: AlgebraMorphism) -> list:
    """Basis of ``{u in B : u f(x) = g(x) u for all x}``."""
    if f.source.dim != g.source.dim or f.target.dim != g.target.dim:
        raise InputError("morphisms must share source and target")
    B = f.target
    F = B.field
    eqs = []
    for x in f.source.generators:
        R = B.right_matrix(f(x))
        L = B.left_matrix(g(x))
        eqs.extend([F(a - b) for a, b in zip(ra, rb)] for ra, rb in zip(R, L))
    if not eqs:
        return [B.basis(i) for i in range(B.dim)]
    return la.Span(F, la.nullspace(F, eqs, B.dim), B.dim).basis


def _random_scalar(F: ExactField, rng: random.Random):
    if isinstance(F, PrimeField):
        return rng.randrange(F.p)
    return Fraction(rng.randint(-3, 3))


def verify_conjugator(f: AlgebraMorphism, g: AlgebraMorphism, u) -> bool:
    B = f.target
    try:
        uinv = B.inverse(u)
    except PreconditionError:
        return False
    for j in range(f.source.dim):
        b = f.source.basis(j)
        if B.mul(B.mul(u, f(b)), uinv) != g(b):
            return False
    return True


def skolem_noether(f: AlgebraMorphism, g: AlgebraMorphism, seed: int = 0, attempts: int = 64,
                   exhaustive_limit: int = 10**5):
    """An invertible u with ``g(x) = u f(x) u^{-1}``.

    Candidates, in order: the unit, each basis vector of the intertwiner
    space, ``attempts`` seeded random combinations, then (over a finite field
    with a small enough space) every combination.
    """
    B = f.target
    F = B.field
    V = intertwiners(f, g)
    if not V:
        raise PreconditionError("intertwiner space is zero; the maps are not both unital embeddings")

    def candidates():
        if B.one in la.Span(F, V, B.dim):
            yield B.one
        yield from V
        rng = random.Random(seed)
        for _ in range(attempts):
            yield B.combo([_random_scalar(F, rng) for _ in V], V)
        if F.is_finite() and F.order ** len(V) <= exhaustive_limit:
            for coeffs in product(range(F.order), repeat=len(V)):
                yield B.combo(coeffs, V)

    for u in candidates():
        if B.is_unit(u):
            if not verify_conjugator(f, g, u):
                raise PropertyViolation("intertwiner failed conjugation check")
            return u
    raise RetryError(
        f"no invertible intertwiner among {attempts} random trials in a {len(V)}-dimensional space; "
        "enlarge the attempt budget or extend the base field"
    )


# ---------------------------------------------------------------------------
# double centralizer


@dataclass
class DoubleCentralizerReport:
    holds: bool
    subalgebra_dim: int
    centralizer_dim: int
    double_centralizer_dim: int
    ambient_dim: int
    product_bijective: Optional[bool]

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "subalgebraDim": self.subalgebra_dim,
            "centralizerDim": self.centralizer_dim,
            "doubleCentralizerDim": self.double_centralizer_dim,
            "ambientDim": self.ambient_dim,
            "productBijective": self.product_bijective,
        }


def double_centralizer_check(A: StructureAlgebra, S: Sequence[Sequence]) -> DoubleCentralizerReport:
    F = A.field
    Bsub, _ = subalgebra(A, S)
    if separability_idempotent(Bsub) is None:
        raise PreconditionError("subalgebra is not separable")
    Sspan = la.Span(F, S, A.dim)
    C = centralizer(A, Sspan.basis)
    CC = centralizer(A, C)
    holds = la.Span(F, CC, A.dim) == Sspan
    bij = None
    if Bsub.is_central():
        prods = [A.mul(s, c) for s in Sspan.basis for c in C]
        bij = len(prods) == A.dim and la.rank(F, prods, A.dim) == A.dim
        holds = holds and bij and Sspan.dim * len(C) == A.dim
    return DoubleCentralizerReport(holds, Sspan.dim, len(C), len(CC), A.dim, bij)


# ---------------------------------------------------------------------------
# idempotents


class IdempotentFamily:
    """Complete orthogonal idempotents with their claimed reduced traces."""

    def __init__(self, ambient: StructureAlgebra, elements: Sequence[Sequence], claimed_traces: Sequence[int]):
        if len(elements) != len(claimed_traces):
            raise InputError("one claimed trace per idempotent")
        self.ambient = ambient
        self.elements = [ambient.element(e) for e in elements]
        self.claimed_traces = [int(d) for d in claimed_traces]
        self.verify()

    def __len__(self):
        return len(self.elements)

    def verify(self) -> None:
        B = self.ambient
        es = self.elements
        total = B.zero
        for i, e in enumerate(es):
            for j, f in enumerate(es):
                prod = B.mul(e, f)
                want = e if i == j else B.zero
                if prod != want:
                    raise InputError(f"idempotent relations fail at ({i + 1}, {j + 1})")
            total = B.add(total, e)
        if total != B.one:
            raise InputError("idempotents do not sum to 1")
        n = sum(self.claimed_traces)
        F = B.field
        for i, (e, d) in enumerate(zip(es, self.claimed_traces)):
            # dim e B = n * d over the field: an integer check that also holds
            # where the reduced trace only sees d mod p
            r = la.rank(F, B.left_matrix(e), B.dim)
            if r != n * d:
                raise InputError(f"idempotent {i + 1} has rank {r}, expected {n * d}")
            if reduced_trace(B, e) != F(d):
                raise InputError(f"reduced trace of idempotent {i + 1} is not {d}")

    def traces(self) -> list:
        return [reduced_trace(self.ambient, e) for e in self.elements]


def random_unit(B: StructureAlgebra, rng: random.Random, tries: int = 200):
    F = B.field
    for _ in range(tries):
        u = B.element([_random_scalar(F, rng) for _ in range(B.dim)])
        if B.is_unit(u):
            return u
    raise RetryError("no invertible element found by random sampling")


def seeded_embedding_pairs(n: int, k: int, F: ExactField, count: int, seed: int = 0) -> list:
    """``count`` pairs (f, g) of unital maps M_n -> M_nk: f a random conjugate
    of the block-diagonal embedding, g a random conjugate of x -> x (x) I_k."""
    from .algebra import (block_diagonal_embedding, conjugate_morphism,
                          kronecker_embedding, matrix_algebra)

    rng = random.Random(seed)
    S, T = matrix_algebra(n, F), matrix_algebra(n * k, F)
    blk = block_diagonal_embedding(n, k, F, source=S, target=T)
    kro = kronecker_embedding(n, k, F, source=S, target=T)
    return [(conjugate_morphism(blk, random_unit(T, rng)), conjugate_morphism(kro, random_unit(T, rng)))
            for _ in range(count)]
