"""Distributed knowledge of groups described by a formula.

A group formula ``phi`` has at most one free variable; at a point it picks
out the live agents satisfying it.  ``K_phi alpha`` says that this group,
whatever it turns out to be, has distributed knowledge of ``alpha``.  It is
expressible in the base language (:func:`expand_k_phi`) and also has a
direct truth condition (:func:`eval_k_phi_direct`).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .generators import enumerate_simplicial_models
from .models import Model, SimplicialModel
from .semantics import Frame, frame_of, holds, truth_set
from .syntax import (BOT, TOP, And, Assign, Atom, Formula, FormulaGenerator, Know, Neg, assign_prefix, conj, dual_assign,
                     fresh_var, implies, neg, predicates_of, variables_of)

__all__ = ["GroupFormula", "random_group_formula", "group_extension", "characterizer", "expand_k_phi", "eval_k_phi_direct",
           "k_phi_mask", "in_pi_grammar", "IntrospectionReport", "check_pos_introspection",
           "NegIntrospectionWitness", "search_neg_introspection_counterexample", "small_sentences"]


MAX_EXPANSION_AGENTS = 4


@dataclass(frozen=True)
class GroupFormula:
    """A formula whose only free variable (if any) is ``var``."""

    body: Formula
    var: str = "x"

    def __post_init__(self):
        extra = self.body.fv - {self.var}
        if extra:
            raise ValueError(f"group formula may only have {self.var!r} free, found {sorted(extra)}")

    def __str__(self):
        return f"{self.body} (in {self.var})"


def random_group_formula(agents, preds, depth: int, seed: int, var: str = "x") -> GroupFormula:
    """A random formula with at most ``var`` free."""
    gen = FormulaGenerator(agents, preds, random.Random(seed), variables=(var, "y"))
    return GroupFormula(gen.formula(depth, frozenset({var})), var)


def _as_group(phi) -> GroupFormula:
    return phi if isinstance(phi, GroupFormula) else GroupFormula(phi)


def _extension_masks(fr: Frame, phi: GroupFormula, agents) -> dict:
    return {a: truth_set(fr, phi.body, {phi.var: a}) & fr.live_mask(a) for a in agents}


def group_extension(phi, model: Model, point: str) -> frozenset:
    """Live agents at ``point`` that satisfy ``phi``."""
    phi = _as_group(phi)
    return frozenset(a for a in sorted(model.live(point))
                     if holds(model, point, phi.body, {phi.var: a}))


def characterizer(phi, group: Iterable[str], universe: Iterable[str]) -> Formula:
    """Sentence true exactly where ``phi`` defines ``group``."""
    phi = _as_group(phi)
    group = sorted(group)
    rest = sorted(set(universe) - set(group))
    return conj([dual_assign(phi.var, a, phi.body) for a in group]
                + [Assign(phi.var, b, neg(phi.body)) for b in rest])


def _subsets(universe) -> list:
    items = sorted(universe)
    return [c for r in range(len(items) + 1) for c in combinations(items, r)]


def expand_k_phi(phi, alpha: Formula, universe: Iterable[str]) -> Formula:
    """``K_phi alpha`` written out as a conjunction over candidate groups."""
    phi = _as_group(phi)
    if alpha.fv:
        raise ValueError(f"expand_k_phi needs a sentence; free variables {sorted(alpha.fv)}")
    universe = sorted(universe)
    if len(universe) > MAX_EXPANSION_AGENTS:
        raise ValueError(f"expansion is exponential; at most {MAX_EXPANSION_AGENTS} agents, got {len(universe)}")
    avoid = set(variables_of(phi.body)) | set(variables_of(alpha)) | {phi.var}
    names = []
    for _ in universe:
        names.append(fresh_var(avoid | set(names)))
    parts = []
    for group in _subsets(universe):
        xs = names[:len(group)]
        knows = assign_prefix(xs, group, Know(frozenset(xs), alpha))
        parts.append(implies(characterizer(phi, group, universe), knows))
    return conj(parts)


def k_phi_mask(model_or_frame, phi, body_mask: int) -> int:
    """Points where the group defined by ``phi`` knows the set ``body_mask``."""
    fr = model_or_frame if isinstance(model_or_frame, Frame) else frame_of(model_or_frame)
    phi = _as_group(phi)
    ext = _extension_masks(fr, phi, fr.live)
    out = 0
    for i in range(fr.n):
        group = frozenset(a for a, m in ext.items() if m >> i & 1)
        if not fr.succ(group)[i] & ~body_mask:
            out |= 1 << i
    return out


def eval_k_phi_direct(phi, alpha: Formula, model: Model, point: str) -> bool:
    """Truth of ``K_phi alpha`` by quantifying over successors of the extension."""
    group = group_extension(phi, model, point)
    if isinstance(model, SimplicialModel):
        succ = [g for g in model.points if group <= model.shared_agents(point, g)]
    else:
        succ = sorted(model.group_successors(group, point))
    return all(holds(model, g, alpha) for g in succ)


# ---------------------------------------------------------------------------
# introspection


def in_pi_grammar(phi) -> bool:
    """``chi ::= p(x) | K{x} alpha | ~chi | (chi & chi)`` for the designated variable."""
    phi = _as_group(phi)
    x = phi.var

    def ok(f: Formula) -> bool:
        if isinstance(f, Atom):
            return f.var == x
        if isinstance(f, Know):
            return f.vars == frozenset({x})
        if isinstance(f, Neg):
            return ok(f.sub)
        if isinstance(f, And):
            return ok(f.left) and ok(f.right)
        return False

    return ok(phi.body)


@dataclass
class IntrospectionReport:
    phi: GroupFormula
    in_grammar: bool
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self):
        scope = "in grammar" if self.in_grammar else "outside grammar; no guarantee"
        return f"{self.phi.body}: {scope}; {self.checked} points checked, {len(self.failures)} failures"


def check_pos_introspection(phi, alphas: Sequence[Formula], models: Sequence[Model]) -> IntrospectionReport:
    """Evaluate ``K_phi a -> K_phi K_phi a`` via the expansion at every point."""
    phi = _as_group(phi)
    report = IntrospectionReport(phi, in_pi_grammar(phi))
    for k, model in enumerate(models):
        fr = frame_of(model)
        for alpha in alphas:
            once = expand_k_phi(phi, alpha, model.agents)
            twice = expand_k_phi(phi, once, model.agents)
            bad = fr.full & ~truth_set(fr, implies(once, twice))
            report.checked += fr.n
            for p in fr.points_of(bad):
                report.failures.append((k, p, alpha))
    return report


def small_sentences(agents: Sequence[str], preds: Sequence[str]) -> list:
    """Short sentences used as candidate known facts in searches."""
    out = []
    for a in sorted(agents):
        for p in sorted(preds):
            atom = Atom(p, "y")
            out += [dual_assign("y", a, atom), Assign("y", a, atom),
                    dual_assign("y", a, neg(atom)), Assign("y", a, neg(atom))]
        out += [dual_assign("y", a, TOP), Assign("y", a, BOT)]
    return out


@dataclass(frozen=True)
class NegIntrospectionWitness:
    model: SimplicialModel
    point: str
    alpha: Formula

    def __str__(self):
        return f"point {self.point}, alpha = {self.alpha}, facets {dict(self.model.facets)}"


def search_neg_introspection_counterexample(phi, bound: int, agents: Sequence[str] = ("a", "b", "c"),
                                            alphas: Optional[Sequence[Formula]] = None
                                            ) -> Optional[NegIntrospectionWitness]:
    """First model (≤ ``bound`` facets) where ``~K_phi a`` holds but ``K_phi ~K_phi a`` fails."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    phi = _as_group(phi)
    preds = sorted(predicates_of(phi.body)) or ["p"]
    if alphas is None:
        alphas = small_sentences(agents, preds)
    for model in enumerate_simplicial_models(agents, bound, preds):
        fr = frame_of(model)
        for alpha in alphas:
            known = k_phi_mask(fr, phi, truth_set(fr, alpha))
            not_known = fr.full & ~known
            bad = not_known & ~k_phi_mask(fr, phi, not_known)
            if not bad:
                continue
            point = fr.points_of(bad)[0]
            witness = NegIntrospectionWitness(model, point, alpha)
            if not verify_neg_witness(phi, witness):
                raise AssertionError(f"search produced an unverified witness: {witness}")
            return witness
    return None


def verify_neg_witness(phi, w: NegIntrospectionWitness) -> bool:
    """Re-check a witness with the expanded sentence and the pointwise evaluator."""
    phi = _as_group(phi)
    k = expand_k_phi(phi, w.alpha, w.model.agents)
    claim = And(neg(k), neg(expand_k_phi(phi, neg(k), w.model.agents)))
    return holds(w.model, w.point, claim)
