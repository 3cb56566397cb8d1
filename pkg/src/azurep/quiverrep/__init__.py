"""Quiver presentations, representation equations and root algebras."""

from .counting import (  # noqa: F401
    algebra_maps,
    count_algebra_maps,
    point_count_check,
    sheaf_gluing_check,
    split_tensor_count,
)
from .quiver import Arrow, QuiverPresentation, Term, free_algebra, loop_quiver, nilpotent_loop, single_arrow  # noqa: F401
from .reps import (  # noqa: F401
    decompose_by_idempotents,
    enumerate_rep_array,
    enumerate_reps,
    gl_action,
    is_representation,
    orbit_analysis,
    recompose,
    rep_equations,
    variable_names,
)
from .roots import RootAlgebraPresentation, root_algebra_presentation  # noqa: F401
