import pytest

from azurep.errors import InputError
from azurep.fields import GF, QQ
from azurep.quiverrep.quiver import free_algebra, loop_quiver, nilpotent_loop, single_arrow
from azurep.quiverrep.reps import rep_equations
from azurep.quiverrep.roots import root_algebra_presentation


def test_root_relations_keep_factor_order():
    r = root_algebra_presentation(nilpotent_loop(2), 2, QQ)
    rels = set(r.to_json()["relations"])
    assert "x_2_1*x_1_1 + x_2_2*x_2_1" in rels
    assert r.generators == ["x_1_1", "x_1_2", "x_2_1", "x_2_2"]


@pytest.mark.parametrize("F", [QQ, GF(2)], ids=["Q", "F2"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_abelianized_root_algebra_presents_the_rep_scheme(F, n):
    for R in (nilpotent_loop(2), loop_quiver(["x", "y"], [[(1, ["x", "y"]), (-1, ["y", "x"])]])):
        root = root_algebra_presentation(R, n, F)
        assert root.abelianize().as_set() == rep_equations(R, (n,), F).as_set()


def test_free_algebra_root_has_no_relations():
    # generators: n^2 per letter, relations: none
    r = root_algebra_presentation(free_algebra(("x", "y")), 3, QQ)
    assert len(r.generators) == 18 and len(r.relations) == 0


def test_root_algebra_input_errors():
    with pytest.raises(InputError):
        root_algebra_presentation(single_arrow(), 2, QQ)
    with pytest.raises(InputError):
        root_algebra_presentation(nilpotent_loop(2), 0, QQ)
