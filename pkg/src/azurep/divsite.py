"""Sieves and Grothendieck topologies on the divisibility poset.

Objects are positive integers, with a morphism ``m -> n`` whenever ``n | m``.
A sieve on ``n`` is stored by the divisibility-minimal objects it contains
(absolute multiples of ``n``, not cofactors), so the pullback along
``n' -> n`` is literally ``{lcm(n', g)}``.

The ``K_Sigma`` topologies cover a sieve iff some generator has a
``Sigma``-smooth cofactor ``g / base``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Optional, Protocol

import numpy as np
from sympy import isprime

from .errors import InputError

__all__ = [
    "SieveOnObject",
    "TopologySpec",
    "CofactorSetPredicate",
    "replay_counterexample",
    "FragmentBounds",
    "AxiomReport",
    "normalize",
    "member",
    "pullback",
    "multiply",
    "intersect",
    "covers",
    "separating_witness",
    "verify_axioms",
    "jk_matrix_cover",
    "maximal_sieve",
    "empty_sieve",
]


def _check_positive(n, what="value") -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise InputError(f"{what} must be a positive integer, got {n!r}")
    return int(n)


def _antichain(values: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for v in sorted(set(values)):
        if all(v % g for g in out):
            out.append(v)
    return tuple(out)


@dataclass(frozen=True)
class SieveOnObject:
    base: int
    generators: tuple[int, ...] = ()

    def __post_init__(self):
        _check_positive(self.base, "base")
        gens = tuple(_check_positive(g, "generator") for g in self.generators)
        for g in gens:
            if g % self.base:
                raise InputError(f"generator {g} is not a multiple of base {self.base}")
        if tuple(sorted(gens)) != gens or len(set(gens)) != len(gens):
            raise InputError("generators must be strictly increasing")
        if _antichain(gens) != gens:
            raise InputError(f"generators {gens} are not an antichain under divisibility")
        object.__setattr__(self, "generators", gens)

    @property
    def cofactors(self) -> tuple[int, ...]:
        return tuple(g // self.base for g in self.generators)

    @property
    def is_maximal(self) -> bool:
        return self.generators == (self.base,)

    @property
    def is_empty(self) -> bool:
        return not self.generators

    def to_json(self) -> dict:
        return {"base": self.base, "generators": list(self.generators)}

    @classmethod
    def from_json(cls, obj) -> "SieveOnObject":
        try:
            return normalize(obj["base"], obj.get("generators", []))
        except (KeyError, TypeError, AttributeError) as exc:
            raise InputError(f"malformed sieve {obj!r}") from exc

    def __str__(self):
        return f"<{','.join(map(str, self.generators))}> on {self.base}"


def normalize(base: int, raw: Iterable[int]) -> SieveOnObject:
    base = _check_positive(base, "base")
    raw = [_check_positive(g, "generator") for g in raw]
    for g in raw:
        if g % base:
            raise InputError(f"{g} is not a multiple of {base}")
    return SieveOnObject(base, _antichain(raw))


def maximal_sieve(n: int) -> SieveOnObject:
    return SieveOnObject(n, (n,))


def empty_sieve(n: int) -> SieveOnObject:
    return SieveOnObject(n, ())


def member(s: SieveOnObject, m: int) -> bool:
    m = _check_positive(m)
    if m % s.base:
        raise InputError(f"{m} -> {s.base} is not a morphism ({s.base} does not divide {m})")
    return any(m % g == 0 for g in s.generators)


def pullback(s: SieveOnObject, nprime: int) -> SieveOnObject:
    nprime = _check_positive(nprime)
    if nprime % s.base:
        raise InputError(f"{nprime} -> {s.base} is not a morphism")
    return normalize(nprime, (math.lcm(nprime, g) for g in s.generators))


def multiply(s: SieveOnObject, k: int) -> SieveOnObject:
    k = _check_positive(k, "multiplier")
    return SieveOnObject(s.base * k, tuple(g * k for g in s.generators))


def intersect(s1: SieveOnObject, s2: SieveOnObject) -> SieveOnObject:
    if s1.base != s2.base:
        raise InputError(f"sieves live on different objects ({s1.base} vs {s2.base})")
    return normalize(s1.base, (math.lcm(a, b) for a in s1.generators for b in s2.generators))


# ---------------------------------------------------------------------------
# topologies


class CoveringPredicate(Protocol):
    def covers(self, s: SieveOnObject) -> bool: ...


def _prime_support(n: int) -> set[int]:
    out, d = set(), 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


@lru_cache(maxsize=64)
def _smooth_table(primes: frozenset, limit: int) -> np.ndarray:
    rest = np.arange(limit + 1, dtype=np.int64)
    for p in sorted(primes):
        while True:
            hit = (rest % p == 0) & (rest > 0)
            if not hit.any():
                break
            rest[hit] //= p
    return rest == 1


@dataclass(frozen=True)
class TopologySpec:
    """``kind`` is ``"sigma"`` (finite prime set), ``"plus"`` or ``"minus"``."""

    kind: str
    primes: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.kind not in ("sigma", "plus", "minus"):
            raise InputError(f"unknown topology kind {self.kind!r}")
        primes = frozenset(int(p) for p in self.primes)
        bad = [p for p in primes if not isprime(p)]
        if bad:
            raise InputError(f"not prime: {sorted(bad)}")
        if self.kind != "sigma" and primes:
            raise InputError(f"topology {self.kind!r} takes no prime set")
        object.__setattr__(self, "primes", primes)

    @classmethod
    def sigma(cls, primes: Iterable[int] = ()) -> "TopologySpec":
        return cls("sigma", frozenset(primes))

    @classmethod
    def plus(cls) -> "TopologySpec":
        return cls("plus")

    @classmethod
    def minus(cls) -> "TopologySpec":
        return cls("minus")

    def is_smooth(self, cofactor: int) -> bool:
        if self.kind == "plus":
            return True
        if self.kind == "minus":
            return cofactor == 1
        return _prime_support(cofactor) <= self.primes

    def covers(self, s: SieveOnObject) -> bool:
        return any(self.is_smooth(c) for c in s.cofactors)

    def covers_batch(self, base: int, gens: np.ndarray) -> np.ndarray:
        """Vectorised :meth:`covers` for sieves on ``base``; zero entries are padding."""
        present = gens > 0
        if self.kind == "plus":
            return present.any(axis=1)
        cof = np.where(present, gens // base, 0)
        if self.kind == "minus":
            return (present & (cof == 1)).any(axis=1)
        table = _smooth_table(self.primes, int(cof.max(initial=1)))
        return (present & table[cof]).any(axis=1)

    def to_json(self) -> dict:
        if self.kind == "sigma":
            return {"kind": "sigma", "primes": sorted(self.primes)}
        return {"kind": self.kind}

    @classmethod
    def from_json(cls, obj) -> "TopologySpec":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise InputError(f"malformed topology {obj!r}")
        if obj["kind"] == "sigma":
            return cls.sigma(obj.get("primes", []))
        return cls(obj["kind"])

    def __str__(self):
        if self.kind == "sigma":
            return "K_{" + ",".join(map(str, sorted(self.primes))) + "}"
        return "K_+" if self.kind == "plus" else "K_-"


@dataclass(frozen=True)
class CofactorSetPredicate:
    """Covers iff some generator's cofactor lies in a fixed finite set.

    Not a topology in general; with ``{1, 2, 3}`` it keeps the maximal sieve
    and stability but breaks transitivity (``{4}`` pulls back to the maximal
    sieve along ``2``). Used to exercise :func:`verify_axioms`.
    """

    cofactors: frozenset

    def covers(self, s: SieveOnObject) -> bool:
        return any(c in self.cofactors for c in s.cofactors)

    def covers_batch(self, base: int, gens: np.ndarray) -> np.ndarray:
        present = gens > 0
        cof = np.where(present, gens // base, 0)
        return (present & np.isin(cof, list(self.cofactors))).any(axis=1)


def covers(K: CoveringPredicate, s: SieveOnObject) -> bool:
    return K.covers(s)


def separating_witness(sigma: Iterable[int], sigma_prime: Iterable[int]) -> Optional[SieveOnObject]:
    """A sieve on 1 covering in exactly one of ``K_sigma``, ``K_sigma'``."""
    a, b = TopologySpec.sigma(sigma), TopologySpec.sigma(sigma_prime)
    diff = a.primes ^ b.primes
    if not diff:
        return None
    return SieveOnObject(1, (min(diff),))


def jk_matrix_cover(K: CoveringPredicate, n: int, target_degrees: Iterable[int]) -> bool:
    """Does a family of matrix-algebra maps ``M_n -> M_d`` cover under ``K``?

    Only the degrees matter (any two maps ``M_n -> M_d`` are conjugate), so the
    family is read as the sieve on ``n`` generated by the degrees.
    """
    n = _check_positive(n)
    degrees = [_check_positive(d, "degree") for d in target_degrees]
    for d in degrees:
        if d % n:
            raise InputError(f"there is no unital map M_{n} -> M_{d}")
    return K.covers(normalize(n, degrees))


# ---------------------------------------------------------------------------
# exhaustive axiom verification on a finite fragment


@dataclass(frozen=True)
class FragmentBounds:
    max_base: int = 12
    max_generator_value: int = 60
    max_generator_count: int = 4
    max_multiplier: int = 6

    def __post_init__(self):
        for name in ("max_base", "max_generator_value", "max_generator_count", "max_multiplier"):
            _check_positive(getattr(self, name), name)

    def to_json(self) -> dict:
        return {
            "maxBase": self.max_base,
            "maxGeneratorValue": self.max_generator_value,
            "maxGeneratorCount": self.max_generator_count,
            "maxMultiplier": self.max_multiplier,
        }

    @classmethod
    def from_json(cls, obj: dict | None) -> "FragmentBounds":
        obj = obj or {}
        d = cls()
        return cls(
            int(obj.get("maxBase", d.max_base)),
            int(obj.get("maxGeneratorValue", d.max_generator_value)),
            int(obj.get("maxGeneratorCount", d.max_generator_count)),
            int(obj.get("maxMultiplier", d.max_multiplier)),
        )


@dataclass
class AxiomOutcome:
    axiom: str
    passed: bool
    checked: int
    counterexample: Optional[dict] = None

    def to_json(self) -> dict:
        return {
            "axiom": self.axiom,
            "passed": self.passed,
            "checked": self.checked,
            "counterexample": self.counterexample,
        }


@dataclass
class AxiomReport:
    bounds: FragmentBounds
    outcomes: list[AxiomOutcome]
    sieve_count: int

    @property
    def passed(self) -> bool:
        return all(o.passed for o in self.outcomes)

    def outcome(self, axiom: str) -> AxiomOutcome:
        return next(o for o in self.outcomes if o.axiom == axiom)

    def to_json(self) -> dict:
        return {
            "bounds": self.bounds.to_json(),
            "sieves": self.sieve_count,
            "passed": self.passed,
            "axioms": [o.to_json() for o in self.outcomes],
        }


def replay_counterexample(K: CoveringPredicate, cx: dict) -> bool:
    """Re-check a reported counterexample with the scalar operations.

    Returns True when the counterexample really violates its axiom.
    """
    kind = cx["axiom"]
    if kind == "maximal":
        return not K.covers(maximal_sieve(cx["base"]))
    if kind == "stability":
        s = SieveOnObject.from_json(cx["sieve"])
        return K.covers(s) and not K.covers(pullback(s, cx["nprime"]))
    if kind == "transitivity":
        S = SieveOnObject.from_json(cx["S"])
        R = SieveOnObject.from_json(cx["R"])
        return (
            K.covers(S)
            and all(K.covers(pullback(R, g)) for g in S.generators)
            and not K.covers(R)
        )
    raise InputError(f"unknown axiom {kind!r}")


class _BatchAdapter:
    """Gives a scalar-only predicate the batched interface (slow path)."""

    def __init__(self, pred: CoveringPredicate):
        self.pred = pred

    def covers(self, s):
        return self.pred.covers(s)

    def covers_batch(self, base: int, gens: np.ndarray) -> np.ndarray:
        out = np.empty(len(gens), dtype=bool)
        for i, row in enumerate(gens):
            out[i] = self.pred.covers(normalize(base, [int(g) for g in row if g > 0]))
        return out


def _canonical_rows(G: np.ndarray) -> np.ndarray:
    """Sort each row ascending with zero padding moved to the end."""
    big = np.iinfo(np.int64).max
    s = np.sort(np.where(G > 0, G, big), axis=1)
    return np.where(s == big, 0, s)


def _normalize_batch(L: np.ndarray) -> np.ndarray:
    """Drop non-minimal entries (and duplicates) row-wise; keep zero padding."""
    L = L.copy()
    w = L.shape[1]
    drop = np.zeros(L.shape, dtype=bool)
    for a in range(w):
        la = L[:, a]
        for b in range(w):
            if a == b:
                continue
            lb = L[:, b]
            safe = np.where(la > 0, la, 1)
            divides = (la > 0) & (lb > 0) & (lb % safe == 0)
            strictly = divides & ((la != lb) | (a < b))
            drop[:, b] |= strictly
    L[drop] = 0
    return _canonical_rows(L)


def _pullback_batch(G: np.ndarray, nprime: int) -> np.ndarray:
    return _normalize_batch(np.lcm(G, nprime))


@lru_cache(maxsize=8)
def _fragment(base: int, max_value: int, max_count: int) -> np.ndarray:
    """All antichain sieves on ``base`` in the fragment, rows in lexicographic order."""
    cands = np.arange(base, max_value + 1, base, dtype=np.int64)
    blocks = [np.zeros((1, max_count), dtype=np.int64)]
    for r in range(1, min(max_count, len(cands)) + 1):
        idx = np.array(list(combinations(range(len(cands)), r)), dtype=np.int64)
        vals = cands[idx]
        ok = np.ones(len(vals), dtype=bool)
        for a, b in combinations(range(r), 2):
            ok &= vals[:, b] % vals[:, a] != 0
        vals = vals[ok]
        pad = np.zeros((len(vals), max_count - r), dtype=np.int64)
        blocks.append(np.concatenate([vals, pad], axis=1))
    G = np.concatenate(blocks, axis=0)
    order = np.lexsort(G.T[::-1])
    return G[order]


def _row_sieve(base: int, row) -> SieveOnObject:
    return SieveOnObject(base, tuple(int(g) for g in row if g > 0))


def _minimal_covers(G: np.ndarray, flags: np.ndarray, max_value: int) -> np.ndarray:
    """Covering rows none of whose proper sub-antichains cover."""
    w = G.shape[1]
    B = max_value + 1

    def keys(rows):
        k = np.zeros(len(rows), dtype=np.int64)
        for c in range(w):
            k = k * B + rows[:, c]
        return k

    covering = G[flags]
    if len(covering) == 0:
        return covering
    if (covering == 0).all(axis=1).any():
        return covering[(covering == 0).all(axis=1)]
    cover_keys = np.sort(keys(covering))
    sizes = (covering > 0).sum(axis=1)
    minimal = np.ones(len(covering), dtype=bool)
    for r in range(1, w):
        for cols in combinations(range(w), r):
            sub = np.zeros_like(covering)
            sub[:, :r] = covering[:, cols]
            sub = _canonical_rows(sub)
            proper = sizes > (sub > 0).sum(axis=1)
            nonempty = (sub > 0).any(axis=1)
            k = keys(sub)
            pos = np.searchsorted(cover_keys, k)
            pos = np.minimum(pos, len(cover_keys) - 1)
            hit = cover_keys[pos] == k
            minimal &= ~(hit & proper & nonempty)
    return covering[minimal]


def verify_axioms(
    K: CoveringPredicate,
    bounds: FragmentBounds = FragmentBounds(),
) -> AxiomReport:
    """Exhaustively check the three topology axioms on a finite fragment.

    Bases run over ``1..max_base``; sieves over all antichains of at most
    ``max_generator_count`` multiples of the base bounded by
    ``max_generator_value``; stability uses the morphisms ``base*k -> base``
    for ``k <= max_multiplier``.

    Transitivity is tested on generators only: a morphism of a covering sieve
    ``S`` factors as ``g*k -> g -> base`` with ``g`` a generator, and the
    pullback along it is a further pullback of the one along ``g``, which
    stability keeps covering. It also suffices to range ``S`` over the
    inclusion-minimal covering sieves, since the hypothesis only gets weaker
    as ``S`` shrinks. A sieve ``R`` that already covers cannot violate the
    axiom, so only non-covering ``R`` are examined.
    """
    pred = K if hasattr(K, "covers_batch") else _BatchAdapter(K)
    b = bounds
    maximal = AxiomOutcome("maximal", True, 0)
    stability = AxiomOutcome("stability", True, 0)
    transitivity = AxiomOutcome("transitivity", True, 0)
    total = 0

    for base in range(1, b.max_base + 1):
        # (i) maximal sieve
        maximal.checked += 1
        if maximal.passed and not pred.covers_batch(base, np.array([[base]], dtype=np.int64))[0]:
            maximal.passed = False
            maximal.counterexample = {"axiom": "maximal", "base": base}

        G = _fragment(base, b.max_generator_value, b.max_generator_count)
        total += len(G)
        flags = pred.covers_batch(base, G)

        # (ii) stability
        covering = G[flags]
        for k in range(1, b.max_multiplier + 1):
            nprime = base * k
            if len(covering) == 0:
                break
            P = _pullback_batch(covering, nprime)
            pf = pred.covers_batch(nprime, P)
            stability.checked += len(covering)
            bad = np.nonzero(~pf)[0]
            if stability.passed and len(bad):
                i = int(bad[0])
                stability.passed = False
                stability.counterexample = {
                    "axiom": "stability",
                    "sieve": _row_sieve(base, covering[i]).to_json(),
                    "nprime": nprime,
                    "pullback": _row_sieve(nprime, P[i]).to_json(),
                }

        # (iii) transitivity
        R = G[~flags]
        mins = _minimal_covers(G, flags, b.max_generator_value)
        if len(R) == 0 or len(mins) == 0:
            transitivity.checked += len(R) * len(mins)
            continue
        used = sorted({int(g) for g in mins.ravel() if g > 0})
        column = {g: c for c, g in enumerate(used)}
        T = np.zeros((len(R), len(used)), dtype=bool)
        for g, c in column.items():
            T[:, c] = pred.covers_batch(g, _pullback_batch(R, g))
        first_bad: Optional[tuple[int, int]] = None
        for mi, m in enumerate(mins):
            cols = [column[int(g)] for g in m if g > 0]
            ok_all = T[:, cols].all(axis=1) if cols else np.ones(len(R), dtype=bool)
            transitivity.checked += len(R)
            hits = np.nonzero(ok_all)[0]
            if len(hits):
                cand = (int(hits[0]), mi)
                if first_bad is None or cand < first_bad:
                    first_bad = cand
        if transitivity.passed and first_bad is not None:
            ri, mi = first_bad
            Rs = _row_sieve(base, R[ri])
            Ss = _row_sieve(base, mins[mi])
            transitivity.passed = False
            transitivity.counterexample = {
                "axiom": "transitivity",
                "R": Rs.to_json(),
                "S": Ss.to_json(),
                "pullbacks": [pullback(Rs, g).to_json() for g in Ss.generators],
            }

    return AxiomReport(bounds, [maximal, stability, transitivity], total)
