"""Sparse polynomials over an exact field, commutative or not.

A monomial is a tuple of variable indices. For commutative polynomials the
tuple is kept sorted (a multiset); for noncommutative ones it is the word as
written. Variable names live in the surrounding :class:`PolynomialSystem`.

Plain-text grammar used for serialization::

    poly   := "0" | term (" + " term)*
    term   := coeff | [coeff "*"] factor ("*" factor)*
    coeff  := ["-"] digits ["/" digits]
    factor := name ["^" digits]

A coefficient of 1 is omitted and -1 is written as a leading "-". Runs of
the same variable collapse to ``name^e`` (for words: consecutive runs only).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError
from .fields import ExactField, PrimeField

Monomial = tuple


class Poly:
    __slots__ = ("field", "commutative", "terms")

    def __init__(self, field: ExactField, terms=None, commutative: bool = True):
        self.field = field
        self.commutative = commutative
        out: dict = {}
        for mono, c in (terms or {}).items():
            mono = tuple(sorted(mono)) if commutative else tuple(mono)
            out[mono] = out.get(mono, 0) + c
        self.terms = {m: field(c) for m, c in out.items() if field(c) != 0}

    @classmethod
    def var(cls, field, index: int, commutative=True):
        return cls(field, {(index,): 1}, commutative)

    @classmethod
    def const(cls, field, c, commutative=True):
        return cls(field, {(): c}, commutative)

    def _new(self, terms):
        p = Poly.__new__(Poly)
        p.field, p.commutative = self.field, self.commutative
        p.terms = {m: c for m, c in terms.items() if c != 0}
        return p

    def __add__(self, other: "Poly") -> "Poly":
        F = self.field
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = F(t.get(m, 0) + c)
        return self._new(t)

    def __neg__(self):
        F = self.field
        return self._new({m: F(-c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Poly":
        F = self.field
        return self._new({m: F(c * x) for m, x in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        F = self.field
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(sorted(m1 + m2)) if self.commutative else m1 + m2
                t[m] = t.get(m, 0) + c1 * c2
        return self._new({m: F(c) for m, c in t.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=-1)

    def abelianize(self) -> "Poly":
        return Poly(self.field, self.terms, commutative=True)

    def rename(self, mapping: Sequence[int]) -> "Poly":
        return Poly(self.field, {tuple(mapping[i] for i in m): c for m, c in self.terms.items()},
                    self.commutative)

    def key(self):
        return (self.commutative, tuple(sorted(self.terms.items())))

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field == other.field and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))

    def format(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            c = Fraction(c)
            factors = []
            i = 0
            while i < len(mono):
                j = i
                while j < len(mono) and mono[j] == mono[i]:
                    j += 1
                e = j - i
                factors.append(names[mono[i]] + (f"^{e}" if e > 1 else ""))
                i = j
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts)

    def evaluate_batch(self, X: np.ndarray, p: int) -> np.ndarray:
        """Values mod p at every row of the (N, nvars) assignment array."""
        out = np.zeros(X.shape[0], dtype=np.int64)
        for mono, c in self.terms.items():
            v = np.full(X.shape[0], int(PrimeField(p)(c)), dtype=np.int64)
            for i in mono:
                v = (v * X[:, i]) % p
            out = (out + v) % p
        return out

    def __repr__(self):
        return f"Poly({self.format([f'v{i}' for i in range(1 + max((max(m, default=0) for m in self.terms), default=0))])})"


_TERM_COEFF = re.compile(r"^-?\d+(/\d+)?$")
_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(\^(\d+))?$")


def parse_poly(text: str, names: Sequence[str], field: ExactField, commutative=True) -> Poly:
    index = {n: i for i, n in enumerate(names)}
    text = text.strip()
    if text == "0":
        return Poly(field, {}, commutative)
    terms: dict = {}
    for raw in text.split("+"):
        raw = raw.strip()
        if not raw:
            raise InputError(f"empty term in {text!r}")
        coeff = Fraction(1)
        mono: list[int] = []
        for k, tok in enumerate(raw.split("*")):
            tok = tok.strip()
            if _TERM_COEFF.match(tok):
                if k != 0:
                    raise InputError(f"coefficient must lead its term: {raw!r}")
                coeff *= Fraction(tok)
                continue
            if tok.startswith("-") and k == 0:
                coeff = -coeff
                tok = tok[1:]
            m = _FACTOR.match(tok)
            if not m or m.group(1) not in index:
                raise InputError(f"bad factor {tok!r} in {text!r}")
            mono.extend([index[m.group(1)]] * int(m.group(3) or 1))
        mono_t = tuple(sorted(mono)) if commutative else tuple(mono)
        terms[mono_t] = terms.get(mono_t, 0) + coeff
    return Poly(field, terms, commutative)


# ---------------------------------------------------------------------------
# matrices with polynomial entries


def generic_matrix(field, first_index: int, rows: int, cols: int, commutative=True):
    """Matrix of fresh variables, row-major from ``first_index``."""
    return [
        [Poly.var(field, first_index + r * cols + c, commutative) for c in range(cols)]
        for r in range(rows)
    ]


def poly_matmul(A, B):
    if not A or not B:
        raise InputError("empty matrix in product")
    n, m, l = len(A), len(B), len(B[0])
    if len(A[0]) != m:
        raise InputError("shape mismatch in polynomial matrix product")
    out = []
    for i in range(n):
        row = []
        for j in range(l):
            acc = A[i][0] * B[0][j]
            for k in range(1, m):
                acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(row)
    return out


def poly_identity(field, n, commutative=True):
    return [[Poly.const(field, 1 if i == j else 0, commutative) for j in range(n)] for i in range(n)]


def poly_matadd(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def poly_matscale(c, A):
    return [[a.scale(c) for a in row] for row in A]


@dataclass
class PolynomialSystem:
    field: ExactField
    variables: list
    polys: list
    commutative: bool = True

    def to_json(self) -> dict:
        return {"vars": list(self.variables), "polys": [p.format(self.variables) for p in self.polys]}

    @classmethod
    def from_json(cls, obj, field, commutative=True) -> "PolynomialSystem":
        names = list(obj["vars"])
        return cls(field, names, [parse_poly(s, names, field, commutative) for s in obj["polys"]], commutative)

    def as_set(self) -> frozenset:
        """Polynomials as a set of canonical strings in this system's variable names."""
        return frozenset(p.format(self.variables) for p in self.polys)

    def abelianize(self) -> "PolynomialSystem":
        return PolynomialSystem(self.field, list(self.variables), [p.abelianize() for p in self.polys], True)

    def count_solutions(self, p: int, budget: int) -> int:
        """Number of common zeros in GF(p)^n by exhaustive scan."""
        from .modp import all_vectors

        X = all_vectors(p, len(self.variables), budget)
        ok = np.ones(len(X), dtype=bool)
        for f in self.polys:
            if f.is_zero():
                continue
            ok &= f.evaluate_batch(X, p) == 0
        return int(ok.sum())

    def __len__(self):
        return len(self.polys)


def same_polynomial_sets(a: PolynomialSystem, b: PolynomialSystem) -> bool:
    return a.field == b.field and list(a.variables) == list(b.variables) and a.as_set() == b.as_set()


def from_terms(field, items: Iterable, commutative=True) -> Poly:
    return Poly(field, dict(items), commutative)
