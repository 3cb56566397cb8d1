"""Problem-file dispatch: one handler per task name.

Each handler takes the parsed problem and a :class:`Context` and returns
``(status, result)``. Library exceptions are mapped to statuses by
:func:`run_problem`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .. import __version__
from ..divsite import (
    CofactorSetPredicate,
    FragmentBounds,
    SieveOnObject,
    TopologySpec,
    jk_matrix_cover,
    pullback,
    replay_counterexample,
    separating_witness,
    verify_axioms,
)
from ..errors import AzurepError, BudgetExceeded, InputError, PreconditionError, PropertyViolation
from ..exactalg.algebra import (
    AlgebraMorphism,
    algebra_from_json,
    block_diagonal_embedding,
    kronecker_embedding,
    matrix_algebra,
    morphism_from_json,
    unit_embedding,
)
from ..exactalg.structure import seeded_embedding_pairs, skolem_noether, verify_conjugator
from ..exactalg.tensor import amitsur_exactness, relative_tensor
from ..fields import PrimeField, field_from_json
from ..polynomials import same_polynomial_sets
from ..quiverrep.counting import point_count_check, sheaf_gluing_check, split_tensor_count
from ..quiverrep.quiver import QuiverPresentation, free_algebra, nilpotent_loop, single_arrow
from ..quiverrep.reps import enumerate_rep_array, orbit_analysis, rep_equations, variable_names
from ..quiverrep.roots import root_algebra_presentation
from ..twisted.counting import groupoid_count
from ..twisted.endo import (
    dimvec_from_idempotents,
    endo_algebra,
    endo_then_peirce,
    peirce_decompose,
    peirce_then_endo,
    seeded_split_instance,
)
from ..twisted.modules import module_from_json
from ..twisted.reps import module_obstruction

EXIT = {"ok": 0, "property_violated": 1, "infeasible": 1, "input_error": 2, "refused": 2}


@dataclass
class Context:
    seed: int = 0
    max_points: int = 1 << 20
    max_group: int = 10**6
    attempts: int = 64


# ---------------------------------------------------------------------------
# payload parsing


def _get(payload: dict, key: str):
    if key not in payload:
        raise InputError(f"missing field {key!r}")
    return payload[key]


def _pos_int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise InputError(f"{what} must be a positive integer, got {value!r}")
    return value


def _prime(value, what="q") -> int:
    q = _pos_int(value, what)
    PrimeField(q)  # validates primality
    return q


_NAMED_QUIVERS = {
    "nilpotent_loop": lambda: nilpotent_loop(2),
    "free_loop": lambda: free_algebra(("x",)),
    "single_arrow": single_arrow,
    "point": lambda: QuiverPresentation(1, []),
}


def _quiver(payload: dict) -> QuiverPresentation:
    obj = _get(payload, "quiver")
    if isinstance(obj, str):
        if obj not in _NAMED_QUIVERS:
            raise InputError(f"unknown named quiver {obj!r}; known: {sorted(_NAMED_QUIVERS)}")
        return _NAMED_QUIVERS[obj]()
    return QuiverPresentation.from_json(obj)


def _alpha(payload: dict, Q: QuiverPresentation) -> tuple:
    a = _get(payload, "alpha")
    if not isinstance(a, list):
        raise InputError("alpha must be a list of positive integers")
    return Q.check_alpha(a)


def _sieve(obj) -> SieveOnObject:
    if not isinstance(obj, dict):
        raise InputError("sieve must be an object {base, generators}")
    try:
        return SieveOnObject(int(obj["base"]), tuple(int(g) for g in obj["generators"]))
    except KeyError as exc:
        raise InputError(f"sieve is missing {exc}") from None


def _morphism(obj) -> AlgebraMorphism:
    if not isinstance(obj, dict):
        raise InputError("morphism must be an object")
    emb = obj.get("embedding")
    if emb is not None:
        F = field_from_json(obj.get("field", "Q"))
        n = _pos_int(obj.get("n"), "n")
        if emb == "unit":
            return unit_embedding(matrix_algebra(n, F))
        k = _pos_int(obj.get("k"), "k")
        if emb == "block":
            return block_diagonal_embedding(n, k, F)
        if emb == "kronecker":
            return kronecker_embedding(n, k, F)
        raise InputError(f"unknown embedding {emb!r}")
    S = algebra_from_json(_get(obj, "source"))
    T = algebra_from_json(_get(obj, "target"))
    return morphism_from_json(obj, S, T)


def _modules(payload, A):
    mods = payload.get("modules", [])
    if not isinstance(mods, list):
        raise InputError("modules must be a list")
    return [module_from_json(m, A) for m in mods]


# ---------------------------------------------------------------------------
# handlers


def t_covers(p, ctx):
    K = TopologySpec.from_json(_get(p, "topology"))
    s = _sieve(_get(p, "sieve"))
    return "ok", {"covers": K.covers(s)}


def t_pullback(p, ctx):
    s = _sieve(_get(p, "sieve"))
    along = _pos_int(_get(p, "along"), "along")
    return "ok", {"sieve": pullback(s, along).to_json()}


def t_verify_axioms(p, ctx):
    if "predicate" in p:
        cof = _get(p["predicate"], "cofactors")
        K = CofactorSetPredicate(frozenset(_pos_int(c, "cofactor") for c in cof))
        label = {"cofactors": sorted(K.cofactors)}
    else:
        K = TopologySpec.from_json(_get(p, "topology"))
        label = K.to_json()
    bounds = FragmentBounds.from_json(p["bounds"]) if "bounds" in p else FragmentBounds()
    report = verify_axioms(K, bounds)
    result = {"predicate": label, **report.to_json()}
    if report.passed:
        return "ok", result
    failed = [o for o in report.outcomes if not o.passed]
    result["counterexample"] = failed[0].counterexample
    result["replayed"] = replay_counterexample(K, failed[0].counterexample)
    return "property_violated", result


def t_separate(p, ctx):
    if "sets" in p:
        sets = [tuple(sorted(int(x) for x in s)) for s in p["sets"]]
        pairs = list(combinations(sets, 2))
    else:
        pairs = [(tuple(sorted(_get(p, "sigma"))), tuple(sorted(_get(p, "sigmaPrime"))))]
    rows, ok = [], True
    for a, b in pairs:
        w = separating_witness(a, b)
        row = {"sigma": list(a), "sigmaPrime": list(b), "witness": None if w is None else w.to_json()}
        if w is not None:
            ca, cb = TopologySpec.sigma(a).covers(w), TopologySpec.sigma(b).covers(w)
            row.update({"coversSigma": ca, "coversSigmaPrime": cb, "differs": ca != cb})
            ok = ok and ca != cb
        else:
            ok = ok and set(a) == set(b)
        rows.append(row)
    return ("ok" if ok else "property_violated"), {"pairs": rows, "separated": ok}


def t_jk_matrix(p, ctx):
    K = TopologySpec.from_json(_get(p, "topology"))
    n = _pos_int(_get(p, "n"), "n")
    degrees = _get(p, "degrees")
    return "ok", {"covers": jk_matrix_cover(K, n, degrees)}


def _amitsur_case(case):
    f = _morphism(case)
    r = amitsur_exactness(f)
    out = r.to_json()
    out["dimensionMatches"] = r.equalizer_dim == f.source.dim
    return r.exact and out["dimensionMatches"], out


def _tensor_case(case):
    f1, f2 = _morphism(_get(case, "left")), _morphism(_get(case, "right"))
    T = relative_tensor(f1, f2)
    d = f1.source.dim
    expected = Fraction(f1.target.dim * f2.target.dim, d)
    out = {"dim": T.dim, "expected": expected, "lawHolds": T.dim == expected}
    return out["lawHolds"], out


def t_amitsur(p, ctx):
    ok, results = True, {}
    cases = p.get("cases", [] if "tensor" in p else [p])
    rows = []
    for c in cases:
        good, out = _amitsur_case(c)
        ok = ok and good
        rows.append(out)
    results["cases"] = rows
    if "tensor" in p:
        trows = []
        for c in p["tensor"]:
            good, out = _tensor_case(c)
            ok = ok and good
            trows.append(out)
        results["tensor"] = trows
    return ("ok" if ok else "property_violated"), results


def t_skolem_noether(p, ctx):
    if "f" in p:
        pairs = [(_morphism(p["f"]), _morphism(_get(p, "g")))]
    else:
        F = field_from_json(p.get("field", {"p": 5}))
        n, k = _pos_int(p.get("n", 2), "n"), _pos_int(p.get("k", 2), "k")
        pairs = seeded_embedding_pairs(n, k, F, _pos_int(p.get("pairs", 1), "pairs"), ctx.seed)
    verified = 0
    first = None
    for i, (f, g) in enumerate(pairs):
        u = skolem_noether(f, g, seed=ctx.seed + i, attempts=ctx.attempts)
        if verify_conjugator(f, g, u):
            verified += 1
        if first is None:
            first = [f.target.field.format(x) for x in u]
    res = {"pairs": len(pairs), "verified": verified, "firstConjugator": first}
    if verified != len(pairs):
        raise PropertyViolation("a conjugator failed verification", expected=len(pairs), actual=verified)
    return "ok", res


def t_rep_equations(p, ctx):
    Q = _quiver(p)
    alpha = _alpha(p, Q)
    F = field_from_json(p.get("field", "Q"))
    return "ok", rep_equations(Q, alpha, F).to_json()


def t_enumerate(p, ctx):
    Q = _quiver(p)
    alpha = _alpha(p, Q)
    q = _prime(_get(p, "q"))
    pts = enumerate_rep_array(Q, alpha, q, ctx.max_points)
    res = {"count": len(pts), "variables": variable_names(Q, alpha)}
    if len(pts) <= 256:
        res["points"] = pts.tolist()
    return "ok", res


def t_orbits(p, ctx):
    Q = _quiver(p)
    alpha = _alpha(p, Q)
    q = _prime(_get(p, "q"))
    pts = enumerate_rep_array(Q, alpha, q, ctx.max_points)
    rep = orbit_analysis(Q, alpha, pts, q, ctx.max_group)
    res = rep.to_json()
    res["groupoidCardinality"] = rep.groupoid_cardinality()
    return "ok", res


def t_root_algebra(p, ctx):
    Q = _quiver(p)
    n = _pos_int(_get(p, "n"), "n")
    F = field_from_json(p.get("field", "Q"))
    pres = root_algebra_presentation(Q, n, F)
    ab = pres.abelianize()
    eq = rep_equations(Q, (n,), F)
    res = pres.to_json()
    res["abelianization"] = ab.to_json()
    res["matchesRepEquations"] = same_polynomial_sets(ab, eq)
    if not res["matchesRepEquations"]:
        raise PropertyViolation("abelianized root algebra differs from the representation equations",
                                expected=sorted(eq.as_set()), actual=sorted(ab.as_set()))
    return "ok", res


def t_point_count(p, ctx):
    Q = _quiver(p)
    mode = p.get("mode", "equations")
    if mode == "equations":
        r = point_count_check(Q, _pos_int(_get(p, "n"), "n"), _prime(_get(p, "q")), ctx.max_points)
    elif mode == "split_tensor":
        r = split_tensor_count(Q, _pos_int(_get(p, "a"), "a"), _pos_int(_get(p, "b"), "b"),
                               _prime(_get(p, "q")), ctx.max_points)
    elif mode == "gluing":
        cover = [_morphism(c) for c in _get(p, "cover")]
        r = sheaf_gluing_check(Q, cover, ctx.max_points)
        return ("ok" if r.exact else "property_violated"), r.to_json()
    else:
        raise InputError(f"unknown point_count mode {mode!r}")
    return ("ok" if r.equal else "property_violated"), r.to_json()


def _endo_instance(A, mods, alpha):
    D = endo_algebra(A, mods, alpha)
    r1 = endo_then_peirce(A, mods, alpha, D)
    r2 = peirce_then_endo(D)
    out = D.to_json()
    out.update({"endoThenPeirce": r1.ok, "peirceThenEndo": r2.ok})
    return r1.ok and r2.ok, out


def t_endo_algebra(p, ctx):
    if "seeded" in p:
        cfg = p["seeded"]
        count = _pos_int(cfg.get("count", 1), "count")
        q = _prime(cfg.get("p", 5), "p")
        instances = [seeded_split_instance(ctx.seed + i, q) for i in range(count)]
    else:
        A = algebra_from_json(_get(p, "algebra"))
        instances = [(A, _modules(p, A), _alpha_list(p))]
    ok, rows = True, []
    for A, mods, alpha in instances:
        good, out = _endo_instance(A, mods, alpha)
        ok = ok and good
        rows.append(out)
    return ("ok" if ok else "property_violated"), {"instances": rows, "roundTrip": ok}


def _alpha_list(p):
    a = _get(p, "alpha")
    if not isinstance(a, list) or any(isinstance(d, bool) or not isinstance(d, int) or d < 1 for d in a):
        raise InputError("alpha must be a list of positive integers")
    return tuple(a)


def t_peirce(p, ctx):
    B = algebra_from_json(_get(p, "algebra"))
    F = B.field
    idem = [[F(x) for x in e] for e in _get(p, "idempotents")]
    D = dimvec_from_idempotents(B, idem, _alpha_list(p))
    pd = peirce_decompose(D)
    r = peirce_then_endo(D, pd)
    res = pd.to_json()
    res["roundTrip"] = r.ok
    return ("ok" if r.ok else "property_violated"), res


def t_obstruction(p, ctx):
    A = algebra_from_json(_get(p, "algebra"))
    r = module_obstruction(A, _alpha_list(p), seed=ctx.seed, attempts=ctx.attempts)
    return ("ok" if r.feasible else "infeasible"), r.to_json()


def t_groupoid_count(p, ctx):
    Q = _quiver(p)
    alpha = _alpha(p, Q)
    q = _prime(_get(p, "q"))
    r = groupoid_count(Q, alpha, q, max_points=ctx.max_points, max_group=ctx.max_group)
    return ("ok" if r.equal else "property_violated"), r.to_json()


TASKS = {
    "covers": t_covers,
    "pullback": t_pullback,
    "verify_axioms": t_verify_axioms,
    "separate": t_separate,
    "jk_matrix": t_jk_matrix,
    "amitsur": t_amitsur,
    "skolem_noether": t_skolem_noether,
    "rep_equations": t_rep_equations,
    "enumerate": t_enumerate,
    "orbits": t_orbits,
    "root_algebra": t_root_algebra,
    "point_count": t_point_count,
    "endo_algebra": t_endo_algebra,
    "peirce": t_peirce,
    "obstruction": t_obstruction,
    "groupoid_count": t_groupoid_count,
}


# ---------------------------------------------------------------------------
# runner


def _budgets(problem: dict, ctx: Context) -> Context:
    b = problem.get("budgets", {})
    if not isinstance(b, dict):
        raise InputError("budgets must be an object")
    unknown = set(b) - {"maxPoints", "maxGroup", "attempts"}
    if unknown:
        raise InputError(f"unknown budget keys {sorted(unknown)}")
    return Context(
        seed=ctx.seed,
        max_points=_pos_int(b.get("maxPoints", ctx.max_points), "maxPoints"),
        max_group=_pos_int(b.get("maxGroup", ctx.max_group), "maxGroup"),
        attempts=_pos_int(b.get("attempts", ctx.attempts), "attempts"),
    )


def run_problem(problem, *, seed=None, max_points=None, max_group=None, timing=True) -> tuple[dict, int]:
    """Run one parsed problem; returns ``(report, exit code)``."""
    start = time.perf_counter()
    task = problem.get("task") if isinstance(problem, dict) else None
    report = {"task": task}
    used_seed = 0
    try:
        if not isinstance(problem, dict):
            raise InputError("a problem file must hold a JSON object")
        if task not in TASKS:
            raise InputError(f"unknown task {task!r}; known tasks: {sorted(TASKS)}")
        s = problem.get("seed", 0)
        if isinstance(s, bool) or not isinstance(s, int):
            raise InputError("seed must be an integer")
        used_seed = s if seed is None else seed
        ctx = _budgets(problem, Context(seed=used_seed))
        if max_points is not None:
            ctx.max_points = _pos_int(max_points, "--max-points")
        if max_group is not None:
            ctx.max_group = _pos_int(max_group, "--max-group")
        status, result = TASKS[task](problem, ctx)
    except BudgetExceeded as exc:
        status, result = "refused", {"error": str(exc), "required": exc.required, "budget": exc.budget}
    except PropertyViolation as exc:
        status, result = "property_violated", {"error": str(exc), "expected": exc.expected, "actual": exc.actual}
    except PreconditionError as exc:
        status, result = "refused", {"error": str(exc)}
    except (InputError, AzurepError) as exc:
        status, result = "input_error", {"error": str(exc)}
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        status, result = "input_error", {"error": f"{type(exc).__name__}: {exc}"}

    expect = problem.get("expect") if isinstance(problem, dict) else None
    if expect is not None:
        report["expected"] = expect
        report["observed"] = status
        if expect not in EXIT:
            status, result = "input_error", {"error": f"unknown expected status {expect!r}"}
        elif expect == status:
            status = "ok"
        else:
            result = {"error": "status differs from the expected one", "expected": expect, "actual": status,
                      "detail": result}
            status = "property_violated"
    report["status"] = status
    report["result"] = result
    report["provenance"] = {"version": __version__, "seed": used_seed}
    if timing:
        report["timing"] = {"ms": int((time.perf_counter() - start) * 1000)}
    return report, EXIT[status]
