import random

import pytest
from hypothesis import given, settings, strategies as st

from simpla.correspondence import isomorphic, sc
from simpla.fixtures import CLARIFICATIONS
from simpla.generators import is_impure
from simpla.models import check_local_epistemic, model_to_json, read_model, validate_simplicial
from simpla.semantics import eval_simplicial, frame_of, holds, truth_set, valid_on_model
from simpla.syntax import TOP, Assign, Know, conj, iff, neg, parse, random_formula
from simpla.validity import (DERIVED, ELM, MUTANTS, PRIMARY, SCHEMAS, GenParams, Sat, UnsatUpTo,
                             _Ctx, default_sat_bound, instantiate, random_local_epistemic_model,
                             random_simplicial_model, sat_bounded, schema, soundness_suite,
                             valid_up_to)


class FixedCtx(_Ctx):
    """Always picks the first option, with fixed formula parameters."""

    def __init__(self, agents, phi=TOP, alpha=TOP, varset=frozenset({"x"})):
        super().__init__(random.Random(0), tuple(agents), ("p",), 0)
        self._phi, self._alpha, self._varset = phi, alpha, varset

    def agent(self):
        return self.agents[0]

    def var(self, avoid=()):
        return next(v for v in ("x", "y", "z") if v not in avoid)

    def phi(self, env=None, avoid=()):
        return self._phi

    def alpha(self):
        return self._alpha

    def varset(self):
        return self._varset


def test_schema_inventory():
    assert len(PRIMARY) == 14
    assert {s.name for s in DERIVED} == {"R^[:=]", "KPI", "ANI"}
    assert len(ELM) == 4 and len(MUTANTS) == 1
    with pytest.raises(KeyError):
        schema("NOPE")


def test_epi_instance():
    assert schema("EPI").make(FixedCtx("ab")) == parse("[x:=a] K{x} <x:=a> top")


def test_ui_instance():
    assert schema("UI^[:=]").make(FixedCtx("ab")) == parse("(([x:=a] top & [x:=b] top) -> top)")


def test_t_k_instance_is_closed():
    alpha = parse("[y:=b] bot")
    raw = schema("T^K").make(FixedCtx("ab", alpha=alpha))
    assert raw == parse("(K{x} [y:=b] bot -> [y:=b] bot)")
    closed = instantiate("T^K", 3)
    assert closed.fv == frozenset()


def test_instances_are_closed_and_deterministic():
    for s in SCHEMAS:
        for seed in range(20):
            f = instantiate(s, seed)
            assert f.fv == frozenset(), (s.name, f)
            assert instantiate(s, seed) == f


def test_side_conditions():
    for seed in range(50):
        mono = schema("MONO^K").make(_Ctx(random.Random(seed), ("a", "b"), ("p",), 2))
        assert mono.sub.left.vars <= mono.sub.right.sub.vars
        tr = schema("TR^[:=]").make(_Ctx(random.Random(seed), ("a", "b"), ("p",), 2))
        # (phi -> [x:=a] phi) with x not free in phi
        assign = tr.sub.right.sub
        assert assign.var not in assign.body.fv
    com = schema("COM^[:=]").make(FixedCtx("ab", phi=parse("(p(x) & p(y))")))
    assert com == iff(parse("[x:=a][y:=a] (p(x) & p(y))"), parse("[y:=a][x:=a] (p(x) & p(y))"))


def test_every_schema_valid_on_intro_and_hex(intro_model, hex_s):
    for s in PRIMARY + DERIVED + ELM:
        for seed in range(10):
            f = instantiate(s, seed, agents=("a", "b", "c", "d"))
            assert valid_on_model(intro_model, f)[0], (s.name, f)
            assert valid_on_model(hex_s, f)[0], (s.name, f)


def test_soundness_suite_small_run(tmp_path):
    names = [s.name for s in PRIMARY + DERIVED] + ["ENI-unguarded"]
    report = soundness_suite(names, trials=30, gp=GenParams(seed=1), n_models=15)
    for s in PRIMARY + DERIVED:
        assert report.row(s.name).failures == 0
    assert report.row("ENI-unguarded").failures > 0
    text = report.to_text()
    assert text.splitlines()[0] == "schema,instances,models,failures"
    assert "EPI,30,15,0" in text
    again = soundness_suite(names, trials=30, gp=GenParams(seed=1), n_models=15)
    assert again.to_text() == text
    written = report.dump(tmp_path)
    assert written
    for stem in written:
        m = read_model(f"{stem}.json")
        f = parse(open(f"{stem}.txt").read().splitlines()[0])
        assert not valid_on_model(m, f)[0]


def test_necessitation_preserves_validity():
    models = [random_local_epistemic_model(GenParams(seed=s)) for s in range(20)]
    for s in PRIMARY:
        for seed in range(5):
            f = instantiate(s, seed)
            for m in models:
                assert valid_on_model(m, Know(frozenset(), f))[0]
                assert valid_on_model(m, Assign("x", "b", f))[0]


def test_generator_determinism():
    gp = GenParams(seed=42)
    # models hash by identity, so compare their serialized form
    assert model_to_json(random_simplicial_model(gp)) == model_to_json(random_simplicial_model(gp))
    assert model_to_json(random_local_epistemic_model(gp)) == model_to_json(random_local_epistemic_model(gp))


def test_generator_covers_impure_models():
    impure = sum(is_impure(random_simplicial_model(GenParams(seed=s))) for s in range(1000))
    assert impure >= 100


def test_generated_models_are_local_epistemic():
    for s in range(200):
        gp = GenParams(seed=s)
        m = random_local_epistemic_model(gp)
        report = check_local_epistemic(m)
        assert all(r.ok for _, r in report.items()) and report.proper
        assert isomorphic(sc(m), random_simplicial_model(gp)) is not None


def test_vertex_budget_one():
    c = random_simplicial_model(GenParams(seed=5, max_vertices=1))
    assert validate_simplicial(c) == []
    assert len(c.colors) == 1 and len(c.facets) == 1


def test_gen_params_must_be_positive():
    with pytest.raises(ValueError):
        GenParams(max_facets=0)
    with pytest.raises(ValueError):
        GenParams(agents=5)


def test_sat_examples(intro_model):
    out = sat_bounded(parse("<x:=a> top"))
    assert isinstance(out, Sat)
    assert len(out.model.facets) == 1 and out.model.live(out.point) == {"a"}
    contradiction = parse("(<x:=a> top & [x:=a] bot)")
    for bound in (1, 2, 3):
        assert sat_bounded(contradiction, bound) == UnsatUpTo(bound)


def test_sat_clarification_combination(intro_model):
    alpha = conj([parse(CLARIFICATIONS["ii"][0]), neg(parse(CLARIFICATIONS["iii"][0]))])
    assert holds(intro_model, "F", alpha)
    out = sat_bounded(alpha, 2)
    assert isinstance(out, Sat)
    assert len(out.model.facets) <= 2
    assert eval_simplicial(out.model, out.point, {}, alpha)


def test_sat_rejects_open_formula():
    with pytest.raises(ValueError):
        sat_bounded(parse("p(x)"), 1)


def test_default_bound_is_capped():
    assert default_sat_bound(TOP) == 2
    assert default_sat_bound(parse("[x:=a] K{x} <y:=b> K{} top")) == 3


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_sat_and_validity_agree(seed):
    alpha = random_formula(("a", "b"), ("p",), 2, seed)
    out = sat_bounded(neg(alpha), 2)
    assert valid_up_to(alpha, 2) == isinstance(out, UnsatUpTo)
    if isinstance(out, Sat):
        assert not eval_simplicial(out.model, out.point, {}, alpha)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_instances_hold_on_random_models(seed):
    m = random_local_epistemic_model(GenParams(seed=seed, max_facets=4))
    fr = frame_of(m)
    rng = random.Random(seed)
    s = rng.choice(PRIMARY + DERIVED + ELM)
    f = instantiate(s, seed)
    assert truth_set(fr, f) == fr.full, (s.name, f)
