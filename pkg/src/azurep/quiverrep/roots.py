"""Root algebras of one-vertex presentations in the split case A = M_n.

Each generator s becomes an n x n matrix of fresh noncommuting symbols
``s_i_j``; the relation entries, expanded with the order of the factors
kept, present the root algebra. Abelianizing recovers the coordinate ring of
``rep_(n)``. The symbols are named exactly like the variables of
:func:`rep_equations`, so the comparison needs no renaming.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InputError
from ..fields import ExactField
from ..polynomials import PolynomialSystem
from .quiver import QuiverPresentation
from .reps import evaluate_relations_symbolic, generic_point, variable_names


@dataclass
class RootAlgebraPresentation:
    degree: int
    generators: list  # names z = s_i_j
    relations: PolynomialSystem  # noncommutative

    def abelianize(self) -> PolynomialSystem:
        return self.relations.abelianize()

    def to_json(self) -> dict:
        return {"degree": self.degree, "generators": list(self.generators),
                "relations": [p.format(self.generators) for p in self.relations.polys]}


def root_algebra_presentation(R: QuiverPresentation, n: int, F: ExactField) -> RootAlgebraPresentation:
    if not R.is_one_vertex:
        raise InputError("root algebras are built for one-vertex presentations")
    if not isinstance(n, int) or n < 1:
        raise InputError("degree must be a positive integer")
    alpha = (n,)
    names = variable_names(R, alpha)
    mats = generic_point(R, alpha, F, commutative=False)
    polys = evaluate_relations_symbolic(R, alpha, F, mats, commutative=False)
    return RootAlgebraPresentation(n, names, PolynomialSystem(F, names, polys, commutative=False))
