"""Index detection for central simple algebras at desk scale.

Over a finite field every central simple algebra is split, and a primitive
idempotent is found by splitting random elements through their minimal
polynomials. Over QQ the same splitting is tried first; a degree-2 corner
that refuses to split is identified with a quaternion algebra (a, b) and
decided by Hilbert symbols at infinity, 2 and the odd primes dividing ab.
Larger anisotropic corners over QQ are out of reach and raise.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import isqrt
from typing import Optional, Sequence

from sympy import Poly, factorint, symbols

from .. import linalg as la
from ..errors import PreconditionError, PropertyViolation
from ..fields import PrimeField
from .algebra import StructureAlgebra, corner
from .structure import degree

_t = symbols("t")


def _sympy_poly(coeffs: Sequence, F) -> Poly:
    if isinstance(F, PrimeField):
        return Poly([int(c) for c in coeffs], _t, modulus=F.p)
    return Poly([Fraction(c) for c in coeffs], _t, domain="QQ")


def _from_sympy(c, F):
    if isinstance(F, PrimeField):
        return F(int(c))
    return F(Fraction(str(c)))


def minimal_polynomial(A: StructureAlgebra, x: Sequence) -> list:
    """Monic minimal polynomial of x, highest coefficient first."""
    F = A.field
    powers = [A.one]
    span = la.IncrementalSpan(F, A.dim)
    span.add(A.one)
    while True:
        nxt = A.mul(powers[-1], x)
        if span.add(nxt):
            powers.append(nxt)
            continue
        # nxt = sum c_k x^k
        M = la.transpose(powers)
        c = la.solve(F, M, nxt, len(powers))
        return [F.one] + [F(-v) for v in reversed(c)]


def _eval_poly(A: StructureAlgebra, coeffs: Sequence, x: Sequence):
    acc = A.zero
    for c in coeffs:
        acc = A.add(A.mul(acc, x), A.scale(c, A.one))
    return acc


def splitting_idempotent(A: StructureAlgebra, x: Sequence):
    """A nontrivial idempotent polynomial in x, when its minimal polynomial has
    two coprime factors; otherwise None."""
    F = A.field
    mu = _sympy_poly(minimal_polynomial(A, x), F)
    _, factors = mu.factor_list()
    if len(factors) < 2:
        return None
    g0, k0 = factors[0]
    g = g0**k0
    h = mu.exquo(g)
    s, t, one = h.gcdex(g)  # s*h + t*g = 1
    e_poly = s * h
    e = _eval_poly(A, [_from_sympy(c, F) for c in e_poly.all_coeffs()], x)
    if A.mul(e, e) != e or e == A.zero or e == A.one:
        raise PropertyViolation("polynomial idempotent failed verification")
    return e


def _candidates(A: StructureAlgebra, rng: random.Random, attempts: int):
    F = A.field
    for i in range(A.dim):
        yield A.basis(i)
    for _ in range(attempts):
        if isinstance(F, PrimeField):
            yield tuple(rng.randrange(F.p) for _ in range(A.dim))
        else:
            yield tuple(F(rng.randint(-2, 2)) for _ in range(A.dim))


def primitive_idempotent(A: StructureAlgebra, seed: int = 0, attempts: int = 64):
    """Descend through corners until no candidate splits further.

    Returns ``(e, C, lift)``: an idempotent e of A, the corner algebra
    ``C = eAe`` and ``lift``, the elements of A forming the basis of C. The
    corner is a division algebra unless the search ran out of candidates.
    """
    rng = random.Random(seed)
    e = A.one
    C = A
    lift = [A.basis(i) for i in range(A.dim)]
    while C.dim > 1:
        found = None
        for x in _candidates(C, rng, attempts):
            found = splitting_idempotent(C, x)
            if found is not None:
                break
        if found is None:
            break
        comp = C.sub(C.one, found)
        pick = found
        if la.rank(C.field, C.left_matrix(comp), C.dim) < la.rank(C.field, C.left_matrix(found), C.dim):
            pick = comp
        sub, sub_basis = corner(C, pick)
        e = A.combo(pick, lift)
        lift = [A.combo(b, lift) for b in sub_basis]
        C = sub
    return e, C, lift


# ---------------------------------------------------------------------------
# quaternion corners over QQ


def _square_free_integer(x: Fraction) -> int:
    """Integer in the square class of a nonzero rational."""
    n = x.numerator * x.denominator
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= p
    return sign * out


def _legendre(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def hilbert_symbol(a: int, b: int, p: int) -> int:
    """Hilbert symbol (a, b)_p for nonzero integers; ``p = 0`` means the real place."""
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol of zero")
    if p == 0:
        return -1 if a < 0 and b < 0 else 1

    def split(x):
        v = 0
        while x % p == 0:
            x //= p
            v += 1
        return v, x

    al, u = split(a)
    be, v = split(b)
    if p == 2:
        eps = lambda x: ((x - 1) // 2) % 2
        omg = lambda x: ((x * x - 1) // 8) % 2
        e = eps(u) * eps(v) + al * omg(v) + be * omg(u)
        return -1 if e % 2 else 1
    sign = -1 if (al * be * ((p - 1) // 2)) % 2 else 1
    return sign * _legendre(u, p) ** be * _legendre(v, p) ** al


def quaternion_is_split(a, b) -> bool:
    """(a, b / QQ) is split iff every local Hilbert symbol is 1."""
    a, b = _square_free_integer(Fraction(a)), _square_free_integer(Fraction(b))
    places = {0, 2} | set(factorint(abs(a))) | set(factorint(abs(b)))
    return all(hilbert_symbol(a, b, p) == 1 for p in places)


@dataclass
class QuaternionBasis:
    """Elements i, j of a degree-2 algebra with i^2 = a, j^2 = b, ij = -ji."""

    a: object
    b: object
    i: tuple
    j: tuple
    zero_divisor: Optional[tuple] = None


def quaternion_basis(D: StructureAlgebra) -> QuaternionBasis:
    """Standard generators of a 4-dimensional central algebra (char != 2).

    When a nonzero square-zero element turns up along the way it is kept as
    ``zero_divisor`` (the algebra is then split).
    """
    F = D.field
    if D.dim != 4 or F.characteristic == 2:
        raise PreconditionError("quaternion analysis needs a 4-dimensional algebra in characteristic != 2")
    # trace-zero part: x with x^2 scalar and x not scalar; tr(L_x) = 0
    rows = [[la.trace(F, D.left_matrix(D.basis(k))) for k in range(4)]]
    pure = la.nullspace(F, rows, 4)

    def scalar_of(x):
        sq = D.mul(x, x)
        c = la.Span(F, [D.one], 4).coordinates(sq)
        if c is None:
            raise PropertyViolation("trace-zero element does not square to a scalar")
        return c[0]

    i = next(x for x in pure)
    a = scalar_of(i)
    if a == 0:
        return QuaternionBasis(a, None, i, None, zero_divisor=i)
    # j: trace zero and anticommuting with i
    anti = [[F(u + v) for u, v in zip(r1, r2)]
            for r1, r2 in zip(D.left_matrix(i), D.right_matrix(i))]
    M = [[sum(anti[r][k] * x[k] for k in range(4)) for x in pure] for r in range(4)]
    sols = la.nullspace(F, M, len(pure))
    cands = [D.combo(s, pure) for s in sols]
    for j in cands:
        b = scalar_of(j)
        if b == 0:
            return QuaternionBasis(a, b, i, j, zero_divisor=j)
        return QuaternionBasis(a, b, i, j)
    raise PropertyViolation("no anticommuting partner found; algebra is not central simple of degree 2")


def isotropic_search(q: QuaternionBasis, D: StructureAlgebra, bound: int = 12):
    """Nonzero x0 + x1 i + x2 j + x3 ij of reduced norm 0, by bounded search."""
    F = D.field
    a, b = q.a, q.b
    ij = D.mul(q.i, q.j)
    for h in range(1, bound + 1):
        for x in product(range(-h, h + 1), repeat=4):
            if max(abs(v) for v in x) != h:
                continue
            if F(x[0] ** 2 - a * x[1] ** 2 - b * x[2] ** 2 + a * b * x[3] ** 2) == 0:
                return D.combo(x, [D.one, q.i, q.j, ij])
    return None


# ---------------------------------------------------------------------------
# index


@dataclass
class IndexResult:
    """Index m of A and, when available, a simple right module given as a
    minimal right ideal of A (basis vectors in A's coordinates)."""

    index: int
    degree: int
    certificate: str
    simple_ideal: Optional[list] = None

    def to_json(self) -> dict:
        return {"index": self.index, "degree": self.degree, "certificate": self.certificate,
                "simpleModuleDim": None if self.simple_ideal is None else len(self.simple_ideal)}


def right_ideal(A: StructureAlgebra, z: Sequence) -> list:
    """Basis of zA."""
    return la.column_space(A.field, A.left_matrix(z))


def index_of(A: StructureAlgebra, seed: int = 0, attempts: int = 64) -> IndexResult:
    n = degree(A)
    F = A.field
    e, C, lift = primitive_idempotent(A, seed, attempts)
    if C.dim == 1:
        return IndexResult(1, n, "primitive idempotent with one-dimensional corner", right_ideal(A, e))
    if isinstance(F, PrimeField):
        raise PreconditionError(
            "splitting search exhausted over a finite field (every such algebra is split); "
            "raise the attempt budget"
        )
    m = isqrt(C.dim)
    if m != 2:
        raise PreconditionError(f"corner of dimension {C.dim} over QQ is beyond the quaternion analysis")
    q = quaternion_basis(C)
    zd = q.zero_divisor
    if zd is None:
        if not quaternion_is_split(q.a, q.b):
            return IndexResult(2, n, f"corner is the division quaternion algebra ({q.a},{q.b})",
                               right_ideal(A, e))
        zd = isotropic_search(q, C)
        if zd is None:
            return IndexResult(1, n, f"({q.a},{q.b}) split by Hilbert symbols; no small isotropic vector")
    z = A.combo(zd, lift)
    ideal = right_ideal(A, z)
    if len(ideal) != n:
        raise PropertyViolation("zero divisor in a split quaternion corner does not cut out a simple module",
                                expected=n, actual=len(ideal))
    return IndexResult(1, n, "zero divisor in a degree-2 corner", ideal)
