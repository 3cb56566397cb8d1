"""Quivers with uniform relations: presentations of R = FQ/I.

Paths are written in traversal order: ``["a", "b"]`` means first ``a`` then
``b``, so ``target(a) == source(b)``. On a representation the path acts by
``M_b @ M_a``. An empty path must name its vertex and stands for the vertex
idempotent. Vertices are 1-based in JSON and 0-based in code.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ..errors import InputError


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    path: tuple
    vertex: Optional[int] = None  # only for the empty path


def _parse_coeff(c) -> Fraction:
    if isinstance(c, bool) or isinstance(c, float):
        raise InputError(f"coefficient must be an integer or a string like '1/2', got {c!r}")
    try:
        return Fraction(c)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad coefficient {c!r}") from exc


class QuiverPresentation:
    def __init__(self, vertex_count: int, arrows: Sequence[Arrow], relations: Sequence[Sequence[Term]] = ()):
        if not isinstance(vertex_count, int) or vertex_count < 1:
            raise InputError("a quiver needs at least one vertex")
        self.vertex_count = vertex_count
        self.arrows = list(arrows)
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise InputError("arrow names must be unique")
        bad = [n for n in names if not n.isidentifier() or not n.isascii()]
        if bad:
            raise InputError(f"arrow names must be ASCII identifiers: {bad}")
        for a in self.arrows:
            if not (0 <= a.source < vertex_count and 0 <= a.target < vertex_count):
                raise InputError(f"arrow {a.name!r} has an endpoint outside the quiver")
        self._by_name = {a.name: a for a in self.arrows}
        self.relations = [list(r) for r in relations]
        self.relation_ends = [self._check_relation(r, k) for k, r in enumerate(self.relations)]

    def arrow(self, name: str) -> Arrow:
        try:
            return self._by_name[name]
        except KeyError:
            raise InputError(f"unknown arrow {name!r}") from None

    def path_ends(self, term: Term) -> tuple[int, int]:
        if not term.path:
            if term.vertex is None:
                raise InputError("an empty path must name its vertex")
            if not 0 <= term.vertex < self.vertex_count:
                raise InputError(f"vertex {term.vertex + 1} outside the quiver")
            return term.vertex, term.vertex
        arrows = [self.arrow(n) for n in term.path]
        for a, b in zip(arrows, arrows[1:]):
            if a.target != b.source:
                raise InputError(f"path {list(term.path)} is not composable at {a.name!r} -> {b.name!r}")
        return arrows[0].source, arrows[-1].target

    def _check_relation(self, terms: Sequence[Term], k: int) -> tuple[int, int]:
        if not terms:
            raise InputError(f"relation {k + 1} is empty")
        ends = {self.path_ends(t) for t in terms}
        if len(ends) != 1:
            raise InputError(f"relation {k + 1} is not uniform: its paths have endpoints {sorted(ends)}")
        return ends.pop()

    @property
    def is_one_vertex(self) -> bool:
        return self.vertex_count == 1

    def check_alpha(self, alpha: Sequence[int]) -> tuple:
        alpha = tuple(alpha)
        if len(alpha) != self.vertex_count:
            raise InputError(f"dimension vector has {len(alpha)} entries, quiver has {self.vertex_count} vertices")
        if any(not isinstance(d, int) or isinstance(d, bool) or d < 1 for d in alpha):
            raise InputError("dimension vector entries must be positive integers")
        return alpha

    def variable_count(self, alpha) -> int:
        return sum(alpha[a.target] * alpha[a.source] for a in self.arrows)

    # -- JSON --------------------------------------------------------------

    @classmethod
    def from_json(cls, obj) -> "QuiverPresentation":
        if not isinstance(obj, dict):
            raise InputError("quiver must be a JSON object")
        try:
            k = obj["vertices"]
            arrows = [Arrow(str(a["name"]), int(a["from"]) - 1, int(a["to"]) - 1) for a in obj.get("arrows", [])]
            rels = []
            for rel in obj.get("relations", []):
                terms = []
                for t in rel:
                    v = t.get("vertex")
                    terms.append(Term(_parse_coeff(t.get("coeff", 1)), tuple(t.get("path", [])),
                                      None if v is None else int(v) - 1))
                rels.append(terms)
        except (KeyError, TypeError, AttributeError) as exc:
            raise InputError(f"malformed quiver: {exc}") from exc
        return cls(k, arrows, rels)

    def to_json(self) -> dict:
        def term(t: Term):
            out = {"coeff": str(t.coeff), "path": list(t.path)}
            if t.vertex is not None:
                out["vertex"] = t.vertex + 1
            return out

        return {
            "vertices": self.vertex_count,
            "arrows": [{"name": a.name, "from": a.source + 1, "to": a.target + 1} for a in self.arrows],
            "relations": [[term(t) for t in r] for r in self.relations],
        }


def loop_quiver(generators: Sequence[str], relations: Sequence[Sequence[tuple]] = ()) -> QuiverPresentation:
    """One-vertex presentation F<generators>/(relations).

    Each relation is a list of ``(coeff, word)`` pairs; an empty word is the unit.
    """
    arrows = [Arrow(g, 0, 0) for g in generators]
    rels = [[Term(_parse_coeff(c), tuple(w), 0 if not w else None) for c, w in r] for r in relations]
    return QuiverPresentation(1, arrows, rels)


def nilpotent_loop(power: int = 2, name: str = "x") -> QuiverPresentation:
    """F<x>/(x^power)."""
    return loop_quiver([name], [[(1, [name] * power)]])


def free_algebra(generators: Sequence[str] = ("x",)) -> QuiverPresentation:
    return loop_quiver(generators)


def single_arrow() -> QuiverPresentation:
    """1 -> 2 with no relations."""
    return QuiverPresentation(2, [Arrow("a", 0, 1)])

