"""Satisfaction for simplicial and first-order Kripke models.

Two evaluation routes are provided:

* :func:`eval_simplicial` / :func:`eval_kripke` follow the satisfaction
  clauses point by point, with an explicit assignment.
* :class:`Frame` compiles either kind of model into bitmasks over its points
  and computes the whole truth set of a formula at once (:func:`truth_set`).
  Batch work (validity, bisimulation, search) goes through frames.

Evaluation is only defined for admissible assignments: every free variable
must be mapped to an agent alive at the point.  Anything else raises.
"""
from __future__ import annotations

import weakref
from typing import Mapping, Optional

from .models import KripkeModel, Model, SimplicialModel
from .syntax import And, Assign, Atom, Formula, Know, Neg, Top

__all__ = [
    "UnmappedFreeVariable", "InadmissibleAssignment", "admissible",
    "eval_simplicial", "eval_kripke", "holds", "Frame", "frame_of",
    "truth_set", "truth_points", "valid_on_model", "is_true",
]


class UnmappedFreeVariable(KeyError):
    def __init__(self, var: str):
        self.var = var
        super().__init__(f"free variable {var!r} has no value in the assignment")

    def __str__(self):
        return self.args[0]


class InadmissibleAssignment(ValueError):
    def __init__(self, var: str, agent: str, point: str):
        self.var, self.agent, self.point = var, agent, point
        super().__init__(f"assignment {var}->{agent} is not admissible at {point}: {agent} is not alive there")


def _lookup(sigma: Mapping[str, str], var: str) -> str:
    try:
        return sigma[var]
    except KeyError:
        raise UnmappedFreeVariable(var) from None


def _live(model: Model, point: str) -> frozenset:
    if point not in model.points:
        raise KeyError(f"{point!r} is not a point of the model")
    return model.live(point)


def admissible(model: Model, point: str, sigma: Mapping[str, str], f: Formula) -> bool:
    """True iff every free variable of ``f`` is sent to an agent alive at ``point``."""
    live = _live(model, point)
    return all(_lookup(sigma, v) in live for v in f.fv)


def _check_admissible(model, point, sigma, f):
    live = _live(model, point)
    for v in sorted(f.fv):
        a = _lookup(sigma, v)
        if a not in live:
            raise InadmissibleAssignment(v, a, point)


def eval_simplicial(c: SimplicialModel, facet: str, sigma: Optional[Mapping[str, str]], f: Formula) -> bool:
    """``C, F, sigma |= f`` by the simplicial clauses."""
    sigma = dict(sigma or {})
    _check_admissible(c, facet, sigma, f)
    memo = {}

    def ev(F: str, s: dict, g: Formula) -> bool:
        key = (F, g, tuple(sorted((v, s[v]) for v in g.fv)))
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(g, Atom):
            r = s[g.var] in c.holders(g.pred, F)
        elif isinstance(g, Top):
            r = True
        elif isinstance(g, Neg):
            r = not ev(F, s, g.sub)
        elif isinstance(g, And):
            r = ev(F, s, g.left) and ev(F, s, g.right)
        elif isinstance(g, Assign):
            if g.agent in c.live(F):
                r = ev(F, {**s, g.var: g.agent}, g.body)
            else:
                r = True
        elif isinstance(g, Know):
            group = {s[v] for v in g.vars}
            r = all(ev(G, {}, g.body) for G in c.points if group <= c.shared_agents(F, G))
        else:
            raise TypeError(g)
        memo[key] = r
        return r

    return ev(facet, sigma, f)


def eval_kripke(m: KripkeModel, world: str, sigma: Optional[Mapping[str, str]], f: Formula) -> bool:
    """``M, w, sigma |= f`` by the first-order Kripke clauses."""
    sigma = dict(sigma or {})
    _check_admissible(m, world, sigma, f)
    memo = {}

    def ev(w: str, s: dict, g: Formula) -> bool:
        key = (w, g, tuple(sorted((v, s[v]) for v in g.fv)))
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(g, Atom):
            r = s[g.var] in m.holders(g.pred, w)
        elif isinstance(g, Top):
            r = True
        elif isinstance(g, Neg):
            r = not ev(w, s, g.sub)
        elif isinstance(g, And):
            r = ev(w, s, g.left) and ev(w, s, g.right)
        elif isinstance(g, Assign):
            r = ev(w, {**s, g.var: g.agent}, g.body) if g.agent in m.domain[w] else True
        elif isinstance(g, Know):
            group = {s[v] for v in g.vars}
            r = all(ev(v, {}, g.body) for v in m.group_successors(group, w))
        else:
            raise TypeError(g)
        memo[key] = r
        return r

    return ev(world, sigma, f)


def holds(model: Model, point: str, f: Formula, sigma: Optional[Mapping[str, str]] = None) -> bool:
    if isinstance(model, SimplicialModel):
        return eval_simplicial(model, point, sigma, f)
    return eval_kripke(model, point, sigma, f)


# ---------------------------------------------------------------------------
# bitmask frames


class Frame:
    """A model compiled to bitmasks over its sorted points.

    ``share[a][i]`` is the set of points ``j`` with ``i R_a j`` (for simplicial
    models: facets sharing the ``a``-vertex of facet ``i``).
    """

    def __init__(self, model: Model):
        self.model = model
        self.points = tuple(model.points)
        self.index = {p: i for i, p in enumerate(self.points)}
        self.n = len(self.points)
        self.full = (1 << self.n) - 1
        self.agents = frozenset(model.agents)
        live = {a: 0 for a in self.agents}
        preds = {}
        share = {a: [0] * self.n for a in self.agents}
        if isinstance(model, SimplicialModel):
            by_vertex = {}
            for i, F in enumerate(self.points):
                for v in model.facets[F]:
                    by_vertex[v] = by_vertex.get(v, 0) | (1 << i)
            for i, F in enumerate(self.points):
                for v in model.facets[F]:
                    a = model.colors[v]
                    live.setdefault(a, 0)
                    live[a] |= 1 << i
                    share.setdefault(a, [0] * self.n)[i] = by_vertex[v]
                for p, lab in model.labeling.items():
                    for v in model.facets[F] & lab:
                        key = (p, model.colors[v])
                        preds[key] = preds.get(key, 0) | (1 << i)
        else:
            for i, w in enumerate(self.points):
                for a in model.domain[w]:
                    live.setdefault(a, 0)
                    live[a] |= 1 << i
                for p, holders in model.interp.get(w, {}).items():
                    for a in holders:
                        preds[(p, a)] = preds.get((p, a), 0) | (1 << i)
            for a, pairs in model.rel.items():
                row = share.setdefault(a, [0] * self.n)
                for w, v in pairs:
                    row[self.index[w]] |= 1 << self.index[v]
        self.live = live
        self.preds = preds
        self.share = share
        self.pred_names = frozenset(p for p, _ in preds) | frozenset(getattr(model, "predicates", ()))
        self._succ = {}

    def live_mask(self, agent: str) -> int:
        return self.live.get(agent, 0)

    def live_at(self, i: int) -> frozenset:
        return frozenset(a for a, m in self.live.items() if m >> i & 1)

    def pred_mask(self, pred: str, agent: str) -> int:
        return self.preds.get((pred, agent), 0)

    def succ(self, group: frozenset) -> list:
        """Successor bitmask of each point for the group modality."""
        hit = self._succ.get(group)
        if hit is None:
            hit = [self.full] * self.n
            for a in group:
                row = self.share.get(a, [0] * self.n)
                hit = [x & y for x, y in zip(hit, row)]
            self._succ[group] = hit
        return hit

    def mask_of(self, pts) -> int:
        m = 0
        for p in pts:
            m |= 1 << self.index[p]
        return m

    def points_of(self, mask: int) -> list:
        return [p for i, p in enumerate(self.points) if mask >> i & 1]


_FRAMES: "weakref.WeakKeyDictionary[object, Frame]" = weakref.WeakKeyDictionary()


def frame_of(model: Model) -> Frame:
    fr = _FRAMES.get(model)
    if fr is None:
        fr = _FRAMES[model] = Frame(model)
    return fr


class _Checker:
    def __init__(self, frame: Frame):
        self.fr = frame
        self.memo = {}

    def adm(self, f: Formula, sigma) -> int:
        m = self.fr.full
        for v in f.fv:
            m &= self.fr.live_mask(_lookup(sigma, v))
        return m

    def ext(self, f: Formula, sigma) -> int:
        """Points where ``sigma`` is admissible for ``f`` and ``f`` holds."""
        key = (f, tuple(sorted((v, _lookup(sigma, v)) for v in f.fv))) if f.fv else f
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        fr = self.fr
        if isinstance(f, Atom):
            a = sigma[f.var]
            r = fr.pred_mask(f.pred, a) & fr.live_mask(a)
        elif isinstance(f, Top):
            r = fr.full
        elif isinstance(f, Neg):
            r = self.adm(f, sigma) & ~self.ext(f.sub, sigma)
        elif isinstance(f, And):
            r = self.ext(f.left, sigma) & self.ext(f.right, sigma)
        elif isinstance(f, Assign):
            adm = self.adm(f, sigma)
            alive = fr.live_mask(f.agent)
            inner = {k: v for k, v in sigma.items() if k in f.fv}
            inner[f.var] = f.agent
            r = adm & (~alive | self.ext(f.body, inner))
        elif isinstance(f, Know):
            group = frozenset(sigma[v] for v in f.vars)
            adm = self.adm(f, sigma)
            body = self.ext(f.body, {})
            succ = fr.succ(group)
            r = 0
            for i in range(fr.n):
                if adm >> i & 1 and not succ[i] & ~body:
                    r |= 1 << i
        else:
            raise TypeError(f)
        self.memo[key] = r
        return r


def truth_set(model_or_frame, f: Formula, sigma: Optional[Mapping[str, str]] = None) -> int:
    """Bitmask of points where ``sigma`` is admissible for ``f`` and ``f`` holds.

    For sentences this is just the set of points where ``f`` is true.
    """
    fr = model_or_frame if isinstance(model_or_frame, Frame) else frame_of(model_or_frame)
    sigma = dict(sigma or {})
    for v in f.fv:
        _lookup(sigma, v)
    return _Checker(fr).ext(f, sigma)


def truth_points(model: Model, f: Formula, sigma=None) -> list:
    fr = frame_of(model)
    return fr.points_of(truth_set(fr, f, sigma))


def is_true(model: Model, point: str, f: Formula, sigma=None) -> bool:
    """Frame-based counterpart of :func:`holds` (admissibility is enforced too)."""
    sigma = dict(sigma or {})
    _check_admissible(model, point, sigma, f)
    fr = frame_of(model)
    return bool(truth_set(fr, f, sigma) >> fr.index[point] & 1)


def valid_on_model(model: Model, alpha: Formula) -> tuple[bool, Optional[str]]:
    """Whether a sentence holds at every point; otherwise the first failing point."""
    if alpha.fv:
        raise ValueError(f"valid_on_model needs a sentence; free variables {sorted(alpha.fv)}")
    fr = frame_of(model)
    bad = fr.full & ~truth_set(fr, alpha)
    if not bad:
        return True, None
    return False, fr.points_of(bad)[0]
