"""Axiom schemas, empirical soundness checks and bounded satisfiability.

Every schema is instantiated with random parameters that meet its side
conditions, closed with ``[v:=a]`` binders if needed, and evaluated at every
point of a battery of random proper local epistemic models.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, Union

from .generators import (AGENT_NAMES, GenParams, duplicate_worlds, enumerate_simplicial_models,
                         random_duplicated_model, random_local_epistemic_model,
                         random_simplicial_model)
from .models import Model, SimplicialModel, model_to_json
from .semantics import eval_simplicial, frame_of, holds, truth_set
from .syntax import (BOT, TOP, Assign, Atom, Formula, FormulaGenerator, InadmissibleSubstitution,
                     Know, agents_of, assign_prefix, conj, disj, dual_assign, iff, implies, neg,
                     predicates_of, subformulas, substitute, to_text, variables_of)

__all__ = ["AxiomSchema", "SCHEMAS", "PRIMARY", "DERIVED", "ELM", "MUTANTS", "schema",
           "instantiate", "close_formula", "SoundnessRow", "SoundnessReport", "soundness_suite",
           "Sat", "UnsatUpTo", "sat_bounded", "valid_up_to", "default_sat_bound",
           "GenParams", "random_simplicial_model", "random_local_epistemic_model",
           "duplicate_worlds", "random_duplicated_model", "enumerate_simplicial_models"]

VARIABLES = ("x", "y", "z")


@dataclass
class _Ctx:
    rng: random.Random
    agents: tuple
    preds: tuple
    depth: int

    def __post_init__(self):
        self.gen = FormulaGenerator(self.agents, self.preds, self.rng, variables=VARIABLES)

    def agent(self) -> str:
        return self.rng.choice(self.agents)

    def var(self, avoid=()) -> str:
        return self.rng.choice([v for v in VARIABLES if v not in avoid])

    def env(self, avoid=()) -> frozenset:
        return frozenset(v for v in VARIABLES if v not in avoid and self.rng.random() < 0.5)

    def phi(self, env=None, avoid=()) -> Formula:
        """Open formula; free variables within ``env`` (random if omitted)."""
        return self.gen.formula(self.rng.randint(0, self.depth), self.env(avoid) if env is None else env)

    def alpha(self) -> Formula:
        return self.gen.sentence(self.rng.randint(0, self.depth))

    def varset(self) -> frozenset:
        return self.env()

    def prefix(self, min_len: int = 0):
        k = self.rng.randint(min_len, len(VARIABLES))
        xs = self.rng.sample(VARIABLES, k)
        return xs, [self.agent() for _ in xs]


@dataclass(frozen=True)
class AxiomSchema:
    name: str
    group: str           # "primary", "derived", "elm" or "mutant"
    shape: str
    make: Callable = field(repr=False, compare=False)


def _taut(c: _Ctx) -> Formula:
    p, q, r = c.phi(), c.phi(), c.phi()
    templates = [
        lambda: disj(p, neg(p)),
        lambda: implies(p, p),
        lambda: implies(conj([p, q]), p),
        lambda: implies(p, implies(q, p)),
        lambda: implies(conj([implies(p, q), implies(q, r)]), implies(p, r)),
        lambda: iff(neg(neg(p)), p),
        lambda: iff(conj([p, q]), conj([q, p])),
        lambda: implies(implies(p, implies(q, r)), implies(implies(p, q), implies(p, r))),
    ]
    return c.rng.choice(templates)()


def _k_k(c):
    xs, a, b = c.varset(), c.alpha(), c.alpha()
    return implies(Know(xs, implies(a, b)), implies(Know(xs, a), Know(xs, b)))


def _mono_k(c):
    ys = c.varset()
    xs = frozenset(v for v in ys if c.rng.random() < 0.5)
    a = c.alpha()
    return implies(Know(xs, a), Know(ys, a))


def _k_assign(c):
    x, a = c.var(), c.agent()
    p, q = c.phi(), c.phi()
    return implies(Assign(x, a, implies(p, q)), implies(Assign(x, a, p), Assign(x, a, q)))


def _det(c):
    x, a, p = c.var(), c.agent(), c.phi()
    return implies(dual_assign(x, a, p), Assign(x, a, p))


def _tr(c):
    x, a = c.var(), c.agent()
    p = c.phi(avoid={x})
    return implies(p, Assign(x, a, p))


def _sub(c):
    for _ in range(100):
        x, a = c.var(), c.agent()
        y = c.var(avoid={x})
        p = c.phi(env=c.env() | {x})
        if x not in p.fv:
            continue
        try:
            renamed = substitute(p, y, x)
        except InadmissibleSubstitution:
            continue
        return Assign(y, a, implies(Assign(x, a, p), renamed))
    raise RuntimeError("could not draw an admissible substitution")


def _com(c):
    x = c.var()
    y = c.var(avoid={x})
    a, b, p = c.agent(), c.agent(), c.phi()
    return iff(Assign(x, a, Assign(y, b, p)), Assign(y, b, Assign(x, a, p)))


def _ui(c):
    x, p = c.var(), c.phi()
    return implies(conj([Assign(x, a, p) for a in c.agents]), p)


def _t_k(c):
    xs, a = c.varset(), c.alpha()
    return implies(Know(xs, a), a)


def _kni(c):
    xs, ags = c.prefix()
    k = Know(frozenset(xs), c.alpha())
    return assign_prefix(xs, ags, implies(neg(k), Know(frozenset(xs), assign_prefix(xs, ags, neg(k)))))


def _kpi(c):
    xs, ags = c.prefix()
    k = Know(frozenset(xs), c.alpha())
    return assign_prefix(xs, ags, implies(k, Know(frozenset(xs), assign_prefix(xs, ags, k))))


def _epi(c):
    x, a = c.var(), c.agent()
    return Assign(x, a, Know(frozenset({x}), dual_assign(x, a, TOP)))


def _api(c):
    x, a = c.var(), c.agent()
    atom = Atom(c.rng.choice(c.preds), x)
    return Assign(x, a, implies(atom, Know(frozenset({x}), Assign(x, a, atom))))


def _ani(c):
    x, a = c.var(), c.agent()
    atom = neg(Atom(c.rng.choice(c.preds), x))
    return Assign(x, a, implies(atom, Know(frozenset({x}), Assign(x, a, atom))))


def _eni(c):
    xs, ags = c.prefix()
    v = c.var()
    dead = conj([Assign(v, b, BOT) for b in c.agents if b not in ags])
    return assign_prefix(xs, ags, implies(dead, Know(frozenset(xs), dead)))


def _eni_unguarded(c):
    xs, ags = c.prefix()
    v = c.var()
    others = [b for b in c.agents if c.rng.random() < 0.5]
    dead = conj([Assign(v, b, BOT) for b in others])
    return assign_prefix(xs, ags, implies(dead, Know(frozenset(xs), dead)))


def _rename(c):
    x, a = c.var(), c.agent()
    p = c.phi(env=c.env() | {x})
    for _ in range(100):
        if x in p.fv:
            break
        p = c.phi(env=c.env() | {x})
    y = c.rng.choice([v for v in ("u", "v", "w") if v not in variables_of(p)])
    return iff(Assign(x, a, p), Assign(y, a, substitute(p, y, x)))


def _elm_tr(c):
    x, a = c.var(), c.agent()
    chi = c.phi(avoid={x})
    return iff(Assign(x, a, chi), disj(Assign(x, a, BOT), chi))


def _elm_neg(c):
    x, a, p = c.var(), c.agent(), c.phi()
    return iff(Assign(x, a, neg(p)), disj(Assign(x, a, BOT), neg(Assign(x, a, p))))


def _elm_and(c):
    x, a, p, q = c.var(), c.agent(), c.phi(), c.phi()
    return iff(Assign(x, a, conj([p, q])), conj([Assign(x, a, p), Assign(x, a, q)]))


SCHEMAS = [
    AxiomSchema("TAUT", "primary", "propositional tautology", _taut),
    AxiomSchema("K^K", "primary", "K{X}(a -> b) -> (K{X}a -> K{X}b)", _k_k),
    AxiomSchema("MONO^K", "primary", "K{X}a -> K{Y}a, X subset of Y", _mono_k),
    AxiomSchema("K^[:=]", "primary", "[x:=a](f -> g) -> ([x:=a]f -> [x:=a]g)", _k_assign),
    AxiomSchema("DET^[:=]", "primary", "<x:=a>f -> [x:=a]f", _det),
    AxiomSchema("TR^[:=]", "primary", "f -> [x:=a]f, x not free in f", _tr),
    AxiomSchema("SUB^[:=]", "primary", "[y:=a]([x:=a]f -> f[y/x]), admissible", _sub),
    AxiomSchema("COM^[:=]", "primary", "[x:=a][y:=b]f <-> [y:=b][x:=a]f, x != y", _com),
    AxiomSchema("UI^[:=]", "primary", "conjunction over all agents of [x:=a]f -> f", _ui),
    AxiomSchema("T^K", "primary", "K{X}a -> a", _t_k),
    AxiomSchema("KNI", "primary", "[xs:=as](~K{xs}a -> K{xs}[xs:=as]~K{xs}a)", _kni),
    AxiomSchema("EPI", "primary", "[x:=a]K{x}<x:=a>top", _epi),
    AxiomSchema("API", "primary", "[x:=a](p(x) -> K{x}[x:=a]p(x))", _api),
    AxiomSchema("ENI", "primary", "[xs:=as](dead(B) -> K{xs}dead(B)), B = agents not in as", _eni),
    AxiomSchema("R^[:=]", "derived", "[x:=a]f <-> [y:=a]f[y/x], y not in f", _rename),
    AxiomSchema("KPI", "derived", "[xs:=as](K{xs}a -> K{xs}[xs:=as]K{xs}a)", _kpi),
    AxiomSchema("ANI", "derived", "[x:=a](~p(x) -> K{x}[x:=a]~p(x))", _ani),
    AxiomSchema("ELM^TR", "elm", "[x:=a]f <-> ([x:=a]bot | f), x not free in f", _elm_tr),
    AxiomSchema("ELM^~", "elm", "[x:=a]~f <-> ([x:=a]bot | ~[x:=a]f)", _elm_neg),
    AxiomSchema("ELM^&", "elm", "[x:=a](f & g) <-> ([x:=a]f & [x:=a]g)", _elm_and),
    AxiomSchema("ELM^[:=]", "elm", "[x:=a][y:=b]f <-> [y:=b][x:=a]f, x != y", _com),
    AxiomSchema("ENI-unguarded", "mutant", "ENI with B an arbitrary agent set", _eni_unguarded),
]

PRIMARY = [s for s in SCHEMAS if s.group == "primary"]
DERIVED = [s for s in SCHEMAS if s.group == "derived"]
ELM = [s for s in SCHEMAS if s.group == "elm"]
MUTANTS = [s for s in SCHEMAS if s.group == "mutant"]
_BY_NAME = {s.name: s for s in SCHEMAS}


def schema(name: str) -> AxiomSchema:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise KeyError(f"unknown schema {name!r}; known: {', '.join(_BY_NAME)}") from None


def close_formula(f: Formula, rng: random.Random, agents: Sequence[str]) -> Formula:
    """Bind each free variable with an outer ``[v:=a]`` (validity is preserved)."""
    for v in sorted(f.fv, reverse=True):
        f = Assign(v, rng.choice(list(agents)), f)
    return f


def instantiate(s: Union[AxiomSchema, str], seed: int, agents: Sequence[str] = ("a", "b", "c"),
                preds: Sequence[str] = ("p",), depth: int = 2) -> Formula:
    """A closed instance of a schema; the same seed gives the same sentence."""
    s = schema(s) if isinstance(s, str) else s
    rng = random.Random(f"{s.name}/{seed}")
    ctx = _Ctx(rng, tuple(sorted(agents)), tuple(sorted(preds)), depth)
    return close_formula(s.make(ctx), rng, ctx.agents)


# ---------------------------------------------------------------------------
# soundness harness


@dataclass
class SoundnessRow:
    schema: str
    instances: int
    models: int
    failures: int

    def line(self) -> str:
        return f"{self.schema},{self.instances},{self.models},{self.failures}"


@dataclass
class Counterexample:
    schema: str
    seed: int
    formula: Formula
    model: Model
    point: str


@dataclass
class SoundnessReport:
    rows: list = field(default_factory=list)
    counterexamples: list = field(default_factory=list)

    def row(self, name: str) -> SoundnessRow:
        return next(r for r in self.rows if r.schema == name)

    def to_text(self) -> str:
        return "\n".join(["schema,instances,models,failures"] + [r.line() for r in self.rows])

    def dump(self, directory) -> list:
        """Write each counterexample as a model file plus a formula file."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        written = []
        for k, ce in enumerate(self.counterexamples):
            stem = directory / f"{ce.schema.replace('^', '').replace('[:=]', 'assign')}_{k}"
            Path(f"{stem}.json").write_text(json.dumps(model_to_json(ce.model), indent=2) + "\n")
            Path(f"{stem}.txt").write_text(f"{to_text(ce.formula)}\n# point {ce.point}, seed {ce.seed}\n")
            written.append(stem)
        return written


def soundness_suite(schemas: Iterable[Union[AxiomSchema, str]], trials: int = 200,
                    gp: Optional[GenParams] = None, n_models: int = 50, depth: int = 2,
                    keep: int = 5) -> SoundnessReport:
    """Evaluate ``trials`` instances of each schema on ``n_models`` random models."""
    gp = gp or GenParams()
    agents, preds = gp.agent_names, gp.pred_names or ("p",)
    models = [random_local_epistemic_model(gp.with_seed(gp.seed * 100003 + k)) for k in range(n_models)]
    frames = [frame_of(m) for m in models]
    report = SoundnessReport()
    for s in schemas:
        s = schema(s) if isinstance(s, str) else s
        failures = 0
        for t in range(trials):
            f = instantiate(s, gp.seed * 100003 + t, agents, preds, depth)
            for m, fr in zip(models, frames):
                bad = fr.full & ~truth_set(fr, f)
                if not bad:
                    continue
                point = fr.points_of(bad)[0]
                if holds(m, point, f):
                    raise AssertionError(f"evaluators disagree on {f} at {point}")
                failures += 1
                if sum(ce.schema == s.name for ce in report.counterexamples) < keep:
                    report.counterexamples.append(Counterexample(s.name, t, f, m, point))
        report.rows.append(SoundnessRow(s.name, trials, len(models), failures))
    return report


# ---------------------------------------------------------------------------
# bounded satisfiability


@dataclass(frozen=True)
class Sat:
    model: SimplicialModel
    point: str

    def __bool__(self):
        return True


@dataclass(frozen=True)
class UnsatUpTo:
    bound: int

    def __bool__(self):
        return False


def _signature(alpha: Formula):
    """Agents of ``alpha`` plus one spare, and its predicates."""
    agents = sorted(agents_of(alpha))
    pool = list(AGENT_NAMES) + [f"s{k}" for k in range(len(agents) + 1)]
    spare = next(a for a in pool if a not in agents)
    return agents + [spare], sorted(predicates_of(alpha))


def default_sat_bound(alpha: Formula, cap: int = 3) -> int:
    """``2^(agents + K-subformulas)``, capped; a heuristic, not a certificate."""
    agents, _ = _signature(alpha)
    ks = sum(1 for g in subformulas(alpha) if isinstance(g, Know))
    return min(2 ** (len(agents) + ks), cap)


def sat_bounded(alpha: Formula, max_facets: Optional[int] = None):
    """A verified model of ``alpha`` with at most ``max_facets`` facets, or UnsatUpTo."""
    if alpha.fv:
        raise ValueError(f"sat_bounded needs a sentence; free variables {sorted(alpha.fv)}")
    bound = default_sat_bound(alpha) if max_facets is None else max_facets
    agents, preds = _signature(alpha)
    for model in enumerate_simplicial_models(agents, bound, preds):
        fr = frame_of(model)
        hit = truth_set(fr, alpha)
        if hit:
            point = fr.points_of(hit)[0]
            if not eval_simplicial(model, point, {}, alpha):
                raise AssertionError(f"satisfying point failed re-verification: {point}")
            return Sat(model, point)
    return UnsatUpTo(bound)


def valid_up_to(alpha: Formula, max_facets: int) -> bool:
    """Brute force: ``alpha`` holds at every facet of every enumerated model."""
    agents, preds = _signature(alpha)
    for model in enumerate_simplicial_models(agents, max_facets, preds):
        for F in model.points:
            if not eval_simplicial(model, F, {}, alpha):
                return False
    return True
