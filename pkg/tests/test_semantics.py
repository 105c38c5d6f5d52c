import random

import pytest
from hypothesis import given, settings, strategies as st

from simpla.correspondence import lem
from simpla.fixtures import CLARIFICATIONS
from simpla.generators import GenParams, random_local_epistemic_model, random_simplicial_model
from simpla.semantics import (InadmissibleAssignment, UnmappedFreeVariable, admissible,
                              eval_kripke, eval_simplicial, holds, is_true, truth_points,
                              valid_on_model)
from simpla.syntax import (Assign, Atom, FormulaGenerator, Know, dual_assign, implies, parse,
                           random_formula)

AGENTS = ("a", "b", "c")


@pytest.mark.parametrize("key", ["i", "ii", "iii", "iv"])
def test_intro_clarifications(intro_model, key):
    text, expected = CLARIFICATIONS[key]
    f = parse(text)
    assert eval_simplicial(intro_model, "F", {}, f) is expected
    assert eval_kripke(lem(intro_model), "F", {}, f) is expected
    assert is_true(intro_model, "F", f) is expected


def test_dead_agent_seen_from_own_facet(intro_model):
    # F is an x-successor of itself and d is dead there
    assert eval_simplicial(intro_model, "F", {}, parse("<x:=a> K{x} <y:=d> top")) is False


def test_universal_knowledge_of_top(intro_model, hex_s, hex_k):
    f = parse("K{} top")
    for m in (intro_model, hex_s, hex_k):
        assert all(holds(m, p, f) for p in m.points)
        assert valid_on_model(m, f) == (True, None)


def test_admissibility(intro_model):
    assert admissible(intro_model, "F", {}, parse("K{} top"))
    assert admissible(intro_model, "F", {"x": "d"}, parse("[x:=a] p(x)"))
    assert not admissible(intro_model, "F", {"x": "d"}, parse("p(x)"))
    assert admissible(intro_model, "F", {"x": "c"}, parse("p(x)"))
    with pytest.raises(UnmappedFreeVariable):
        admissible(intro_model, "F", {}, parse("p(x)"))


def test_inadmissible_assignment_is_an_error(intro_model):
    with pytest.raises(InadmissibleAssignment):
        eval_simplicial(intro_model, "F", {"x": "d"}, parse("p(x)"))
    m = lem(intro_model)
    with pytest.raises(InadmissibleAssignment):
        eval_kripke(m, "F", {"x": "d"}, parse("p(x)"))
    with pytest.raises(InadmissibleAssignment):
        is_true(m, "F", parse("p(x)"), {"x": "d"})


def test_open_formula_values(intro_model):
    assert holds(intro_model, "F", parse("p(x)"), {"x": "c"})
    assert not holds(intro_model, "F", parse("p(x)"), {"x": "a"})
    assert holds(intro_model, "G", parse("~p(x)"), {"x": "c"})


def test_valid_on_model(intro_model):
    t_instance = parse("(K{} [x:=a] bot -> [x:=a] bot)")
    assert valid_on_model(intro_model, t_instance) == (True, None)
    assert valid_on_model(intro_model, parse("<x:=d> top")) == (False, "F")
    with pytest.raises(ValueError):
        valid_on_model(intro_model, parse("p(x)"))


def test_truth_points(intro_model):
    assert truth_points(intro_model, parse("<x:=b> top")) == ["F"]
    assert truth_points(intro_model, parse("<x:=a> K{x} <y:=c> p(y)")) == []


def random_case(seed):
    rng = random.Random(seed)
    c = random_simplicial_model(GenParams(seed=seed, max_facets=5))
    gen = FormulaGenerator(AGENTS, ("p",), rng)
    F = rng.choice(c.points)
    live = sorted(c.live(F))
    sigma = {v: rng.choice(live) for v in ("x", "y", "z")}
    return c, F, sigma, gen.formula(3, frozenset({"x", "y", "z"}))


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_frame_engine_matches_pointwise_clauses(seed):
    c, F, sigma, f = random_case(seed)
    expected = eval_simplicial(c, F, sigma, f)
    assert is_true(c, F, f, sigma) is expected
    m = lem(c)
    assert eval_kripke(m, F, sigma, f) is expected
    assert is_true(m, F, f, sigma) is expected


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_knowledge_implies_truth(seed):
    c, F, sigma, f = random_case(seed)
    rng = random.Random(seed)
    alpha = random_formula(AGENTS, ("p",), 2, seed)
    xs = frozenset(v for v in sigma if rng.random() < 0.5)
    k = Know(xs, alpha)
    if eval_simplicial(c, F, sigma, k):
        assert eval_simplicial(c, F, sigma, alpha)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_assignment_duality_and_determinism(seed):
    c, F, sigma, f = random_case(seed)
    a = random.Random(seed).choice(AGENTS)
    body = f
    diamond = eval_simplicial(c, F, sigma, dual_assign("x", a, body))
    alive = a in c.live(F)
    inner = eval_simplicial(c, F, {**sigma, "x": a}, body) if alive else False
    assert diamond == (alive and inner)
    assert eval_simplicial(c, F, sigma, implies(dual_assign("x", a, body), Assign("x", a, body)))


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_sentence_truth_ignores_assignment(seed):
    m = random_local_epistemic_model(GenParams(seed=seed, max_facets=4))
    alpha = random_formula(AGENTS, ("p",), 3, seed)
    for w in m.points:
        base = eval_kripke(m, w, {}, alpha)
        assert eval_kripke(m, w, {"x": "a", "y": "b"}, alpha) == base
        assert eval_kripke(m, w, {"x": "c"}, alpha) == base


def test_atoms_need_their_variable_bound(intro_model):
    with pytest.raises(UnmappedFreeVariable):
        holds(intro_model, "F", Atom("p", "x"))
