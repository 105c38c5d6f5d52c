"""Greatest bisimulations and distinguishing sentences.

The greatest bisimulation is computed by synchronous refinement: start from
the pairs that agree on live agents and predicates, then delete, round by
round, pairs with an unmatched group successor.  The round in which a pair
is deleted drives the construction of a sentence separating it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .models import Model
from .semantics import Frame, frame_of, truth_set
from .syntax import (TOP, BOT, Atom, Formula, assign_prefix, conj, dual_assign, dual_know,
                     neg)

__all__ = ["BisimRelation", "greatest_bisim", "bisimilar", "distinguishing_sentence",
           "is_bisimulation", "bisim_violations"]


def _subsets(agents) -> list:
    items = sorted(agents)
    return [frozenset(c) for r in range(len(items) + 1) for c in combinations(items, r)]


@dataclass
class _Failure:
    stage: int
    group: frozenset = frozenset()
    side: str = "inv"          # "inv", "zig" or "zag"
    witness: Optional[int] = None


@dataclass(frozen=True)
class BisimRelation:
    """Pairs of point names (left model, right model)."""

    pairs: frozenset
    kind: str
    removed: dict = field(default_factory=dict, compare=False, repr=False)

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))


class _Refinement:
    def __init__(self, left: Model, right: Model):
        if left.kind != right.kind:
            raise ValueError(f"cannot relate a {left.kind} model with a {right.kind} model")
        self.left, self.right = left, right
        self.f1, self.f2 = frame_of(left), frame_of(right)
        self.preds = sorted(self.f1.pred_names | self.f2.pred_names)
        self.universe = sorted(left.agents | right.agents)
        self.failures: dict[tuple, _Failure] = {}
        self._run()

    def _signature(self, fr: Frame, i: int):
        return (fr.live_at(i),
                tuple(frozenset(a for a in self.universe if fr.pred_mask(p, a) >> i & 1) for p in self.preds))

    def _run(self):
        f1, f2 = self.f1, self.f2
        sig1 = [self._signature(f1, i) for i in range(f1.n)]
        sig2 = [self._signature(f2, j) for j in range(f2.n)]
        alive = set()
        for i in range(f1.n):
            for j in range(f2.n):
                if sig1[i] == sig2[j]:
                    alive.add((i, j))
                else:
                    self.failures[(i, j)] = _Failure(0)
        # partner masks: row[i] = bitmask of j with (i, j) still related
        stage = 0
        while True:
            stage += 1
            row = [0] * f1.n
            col = [0] * f2.n
            for i, j in alive:
                row[i] |= 1 << j
                col[j] |= 1 << i
            dropped = {}
            for i, j in sorted(alive):
                fail = self._check(i, j, row, col)
                if fail is not None:
                    fail.stage = stage
                    dropped[(i, j)] = fail
            if not dropped:
                break
            alive -= set(dropped)
            self.failures.update(dropped)
        self.alive = frozenset(alive)

    def _check(self, i, j, row, col) -> Optional[_Failure]:
        f1, f2 = self.f1, self.f2
        for group in _subsets(f1.live_at(i)):
            s1, s2 = f1.succ(group)[i], f2.succ(group)[j]
            for i2 in range(f1.n):
                if s1 >> i2 & 1 and not row[i2] & s2:
                    return _Failure(0, group, "zig", i2)
            for j2 in range(f2.n):
                if s2 >> j2 & 1 and not col[j2] & s1:
                    return _Failure(0, group, "zag", j2)
        return None

    def relation(self) -> BisimRelation:
        p1, p2 = self.f1.points, self.f2.points
        return BisimRelation(frozenset((p1[i], p2[j]) for i, j in self.alive), self.left.kind,
                             {(p1[i], p2[j]): f.stage for (i, j), f in self.failures.items()})

    # -- distinguishers ---------------------------------------------------

    def distinguisher(self, i: int, j: int) -> Formula:
        memo = {}

        def d(i, j):
            key = (i, j)
            if key in memo:
                return memo[key]
            fail = self.failures[key]
            if fail.side == "inv":
                r = self._inv_formula(i, j)
            else:
                group = sorted(fail.group)
                xs = [f"x{k + 1}" for k in range(len(group))]
                if fail.side == "zig":
                    i2 = fail.witness
                    others = self.f2.points_of(self.f2.succ(fail.group)[j])
                    beta = conj([d(i2, self.f2.index[q]) for q in others])
                    r = _diamond_prefix(xs, group, beta)
                else:
                    j2 = fail.witness
                    others = self.f1.points_of(self.f1.succ(fail.group)[i])
                    beta = conj([neg(d(self.f1.index[q], j2)) for q in others])
                    r = neg(_diamond_prefix(xs, group, beta))
            memo[key] = r
            return r

        return d(i, j)

    def _inv_formula(self, i, j) -> Formula:
        s1, s2 = self._signature(self.f1, i), self._signature(self.f2, j)
        if s1[0] != s2[0]:
            return existence_profile(s1[0], self.universe)
        for p, h1, h2 in zip(self.preds, s1[1], s2[1]):
            if h1 != h2:
                return predicate_profile(p, h1, self.universe)
        raise AssertionError("pair failed the invariance check without a difference")


def _diamond_prefix(xs, agents, beta) -> Formula:
    """``<x1:=a1>...<xn:=an> Khat{x1..xn} beta``."""
    return assign_prefix(xs, agents, dual_know(frozenset(xs), beta), dual=True)


def existence_profile(alive, universe, var: str = "x") -> Formula:
    """True exactly where the live agents are ``alive`` (within ``universe``)."""
    return conj([dual_assign(var, a, TOP) for a in sorted(alive)]
                + [_assign(var, b, BOT) for b in sorted(universe) if b not in alive])


def predicate_profile(pred, holders, universe, var: str = "x") -> Formula:
    """True exactly where the agents having ``pred`` are ``holders``."""
    atom = Atom(pred, var)
    return conj([dual_assign(var, a, atom) for a in sorted(holders)]
                + [_assign(var, b, neg(atom)) for b in sorted(universe) if b not in holders])


def _assign(var, agent, body):
    return assign_prefix([var], [agent], body)


def greatest_bisim(left: Model, right: Model) -> BisimRelation:
    return _Refinement(left, right).relation()


def bisimilar(left: Model, p: str, right: Model, q: str) -> bool:
    return (p, q) in greatest_bisim(left, right)


def distinguishing_sentence(left: Model, p: str, right: Model, q: str) -> Optional[Formula]:
    """A sentence true at ``left, p`` and false at ``right, q``; None if they are bisimilar."""
    ref = _Refinement(left, right)
    i, j = ref.f1.index[p], ref.f2.index[q]
    if (i, j) in ref.alive:
        return None
    f = ref.distinguisher(i, j)
    if f.fv:
        raise AssertionError(f"distinguisher is not closed: {f}")
    if not (truth_set(ref.f1, f) >> i & 1) or (truth_set(ref.f2, f) >> j & 1):
        raise AssertionError(f"distinguisher failed verification: {f}")
    return f


# -- independent check of a candidate relation ---------------------------


def _group_succ(model: Model, group, p) -> set:
    if model.kind == "kripke":
        return set(model.group_successors(group, p))
    return {g for g in model.points if set(group) <= model.shared_agents(p, g)}


def bisim_violations(left: Model, right: Model, pairs) -> list:
    """Conditions violated by ``pairs``, read directly off the definition."""
    pairs = {tuple(x) for x in pairs}
    preds = set(left.predicates) | set(right.predicates)
    out = []
    for p, q in sorted(pairs):
        if left.live(p) != right.live(q):
            out.append(("inv", p, q, "live agents differ"))
            continue
        bad = [r for r in sorted(preds) if left.holders(r, p) != right.holders(r, q)]
        if bad:
            out.append(("inv", p, q, f"predicate {bad[0]} differs"))
            continue
        for group in _subsets(left.live(p)):
            s1, s2 = _group_succ(left, group, p), _group_succ(right, group, q)
            for p2 in sorted(s1):
                if not any((p2, q2) in pairs for q2 in s2):
                    out.append(("zig", p, q, f"group {sorted(group)}: {p2} unmatched"))
            for q2 in sorted(s2):
                if not any((p2, q2) in pairs for p2 in s1):
                    out.append(("zag", p, q, f"group {sorted(group)}: {q2} unmatched"))
    return out


def is_bisimulation(left: Model, right: Model, pairs) -> bool:
    return not bisim_violations(left, right, pairs)
