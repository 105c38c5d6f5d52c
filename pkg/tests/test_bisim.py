import random

from hypothesis import given, settings, strategies as st

from simpla.bisim import (bisim_violations, bisimilar, distinguishing_sentence, greatest_bisim,
                          is_bisimulation)
from simpla.correspondence import lem
from simpla.generators import GenParams, duplicate_worlds, random_simplicial_model
from simpla.models import SimplicialModel, properize
from simpla.semantics import eval_simplicial, holds
from simpla.syntax import parse, random_formula


def single(colors, labeling=None):
    verts = {a: a for a in colors}
    return SimplicialModel.build({"a", "b", "c", "d"}, verts, [sorted(verts)], labeling or {})


def test_identity_is_contained(hex_s):
    z = greatest_bisim(hex_s, hex_s)
    assert all((F, F) in z for F in hex_s.points)
    assert is_bisimulation(hex_s, hex_s, z.pairs)


def test_point_vs_itself(intro_model):
    assert bisimilar(intro_model, "F", intro_model, "F")
    assert distinguishing_sentence(intro_model, "F", intro_model, "F") is None


def test_intro_facets_differ(intro_model):
    assert not bisimilar(intro_model, "F", intro_model, "G")
    z = greatest_bisim(intro_model, intro_model)
    assert z.removed[("F", "G")] == 0
    f = distinguishing_sentence(intro_model, "F", intro_model, "G")
    assert holds(intro_model, "F", f) and not holds(intro_model, "G", f)


def test_intro_versus_single_facet(intro_model):
    one = single(["a", "b", "c"], {"p": ["c"]})
    z = greatest_bisim(intro_model, one)
    # same live agents and labels, so the pair survives the invariance check
    # and is removed in the first refinement round (G has no partner)
    assert z.removed[("F", "a,b,c")] == 1
    f = distinguishing_sentence(intro_model, "F", one, "a,b,c")
    assert eval_simplicial(intro_model, "F", {}, f)
    assert not eval_simplicial(one, "a,b,c", {}, f)
    g = distinguishing_sentence(one, "a,b,c", intro_model, "F")
    assert eval_simplicial(one, "a,b,c", {}, g) and not eval_simplicial(intro_model, "F", {}, g)


def test_existence_profile_distinguisher():
    left, right = single(["a"]), single(["a", "b"])
    f = distinguishing_sentence(left, "a", right, "a,b")
    assert f == parse("((((<x:=a> top & [x:=b] bot) & [x:=c] bot) & [x:=d] bot))")
    assert holds(left, "a", f) and not holds(right, "a,b", f)


def test_predicate_profile_distinguisher():
    left, right = single(["a", "b"], {"p": ["a"]}), single(["a", "b"], {"p": ["b"]})
    f = distinguishing_sentence(left, "a,b", right, "a,b")
    assert holds(left, "a,b", f) and not holds(right, "a,b", f)


def test_hex_kripke_against_lem(hex_s, hex_k):
    assert bisimilar(hex_k, "ac", lem(hex_s), "a1,c2")


def test_properization_pairs(hex_k):
    dup, _ = duplicate_worlds(hex_k, {"ab": 2, "bcd": 1})
    pr, cells = properize(dup)
    z = greatest_bisim(dup, pr)
    assert all((w, c) in z for w, c in cells.items())


def test_violations_are_reported(intro_model):
    assert bisim_violations(intro_model, intro_model, [("F", "G")])[0][0] == "inv"
    one = single(["a", "b", "c"], {"p": ["c"]})
    kinds = {v[0] for v in bisim_violations(intro_model, one, [("F", "a,b,c")])}
    assert "zig" in kinds


def random_pair(seed):
    rng = random.Random(seed)
    gp = GenParams(seed=seed, max_facets=4)
    c = random_simplicial_model(gp)
    if rng.random() < 0.4:
        d = c
    else:
        d = random_simplicial_model(gp.with_seed(seed + 1))
    return c, rng.choice(c.points), d, rng.choice(d.points)


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_hennessy_milner_on_small_models(seed):
    c, F, d, G = random_pair(seed)
    f = distinguishing_sentence(c, F, d, G)
    assert (f is None) == bisimilar(c, F, d, G)
    if f is not None:
        assert f.fv == frozenset()
        assert eval_simplicial(c, F, {}, f) and not eval_simplicial(d, G, {}, f)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_greatest_bisim_is_symmetric_and_closed(seed):
    c, _, d, _ = random_pair(seed)
    z = greatest_bisim(c, d)
    back = greatest_bisim(d, c)
    assert {(q, p) for p, q in z.pairs} == set(back.pairs)
    assert is_bisimulation(c, d, z.pairs)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_bisimilar_points_agree_on_sentences(seed):
    c, _, d, _ = random_pair(seed)
    pairs = sorted(greatest_bisim(c, d).pairs)
    for k in range(10):
        alpha = random_formula(("a", "b", "c"), ("p",), 3, seed * 100 + k)
        for F, G in pairs:
            assert eval_simplicial(c, F, {}, alpha) == eval_simplicial(d, G, {}, alpha)
