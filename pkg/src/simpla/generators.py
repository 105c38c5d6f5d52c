"""Random and exhaustive generation of small models."""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, product
from typing import Iterator, Optional, Sequence

from .correspondence import lem
from .models import KripkeModel, SimplicialModel

__all__ = ["AGENT_NAMES", "GenParams", "random_simplicial_model", "random_local_epistemic_model",
           "duplicate_worlds", "random_duplicated_model", "enumerate_structures", "vertex_name",
           "enumerate_simplicial_models", "is_impure"]

AGENT_NAMES = ("a", "b", "c", "d")
PRED_NAMES = ("p", "q", "r")


@dataclass(frozen=True)
class GenParams:
    agents: int = 3
    max_vertices: int = 12
    max_facets: int = 6
    preds: int = 1
    seed: int = 0
    join: float = 0.6

    def __post_init__(self):
        if not 1 <= self.agents <= len(AGENT_NAMES):
            raise ValueError(f"agent count must be in 1..{len(AGENT_NAMES)}")
        if self.max_vertices < 1 or self.max_facets < 1 or self.preds < 0:
            raise ValueError("budgets must be positive")

    @property
    def agent_names(self) -> tuple:
        return AGENT_NAMES[:self.agents]

    @property
    def pred_names(self) -> tuple:
        return PRED_NAMES[:self.preds]

    def with_seed(self, seed: int) -> "GenParams":
        return GenParams(self.agents, self.max_vertices, self.max_facets, self.preds, seed, self.join)


def _maximal(facets: list) -> list:
    out = []
    for f in facets:
        if f in out:
            continue
        if any(f < g for g in facets):
            continue
        out.append(f)
    return out


def vertex_name(agent: str, k: int) -> str:
    return f"{agent}_{k}" if agent[-1].isdigit() else f"{agent}{k}"


def _build(agents, facets: list, colors: dict, rng: Optional[random.Random], preds,
           labeled=None) -> SimplicialModel:
    colors = {v: colors[v] for f in facets for v in f}
    if labeled is None:
        labeled = {p: sorted(v for v in colors if rng.random() < 0.5) for p in preds}
    return SimplicialModel.build(agents, colors, facets, labeled)


def _attempt(gp: GenParams, rng: random.Random) -> list:
    agents = gp.agent_names
    n = rng.randint(1, gp.max_facets)
    color_sets = []
    for _ in range(n):
        if rng.random() < 0.4:
            color_sets.append(list(agents))
        else:
            k = rng.randint(1, len(agents))
            color_sets.append(sorted(rng.sample(agents, k)))
    facets = [set() for _ in range(n)]
    colors = {}
    for a in agents:
        made = []
        for i, cs in enumerate(color_sets):
            if a not in cs:
                continue
            if made and rng.random() < gp.join:
                v = rng.choice(made)
            else:
                v = vertex_name(a, len(made))
                colors[v] = a
                made.append(v)
            facets[i].add(v)
    # two facets sharing every vertex collapse; drop non-maximal ones
    return _maximal([frozenset(f) for f in facets]), colors


def random_simplicial_model(gp: GenParams) -> SimplicialModel:
    """A valid, possibly impure, simplicial model; deterministic in ``gp.seed``."""
    rng = random.Random(gp.seed)
    for _ in range(100):
        facets, colors = _attempt(gp, rng)
        nverts = len({v for f in facets for v in f})
        if nverts <= gp.max_vertices:
            return _build(gp.agent_names, facets, colors, rng, gp.pred_names)
    v = vertex_name(gp.agent_names[0], 0)
    return _build(gp.agent_names, [frozenset({v})], {v: gp.agent_names[0]}, rng, gp.pred_names)


def random_local_epistemic_model(gp: GenParams) -> KripkeModel:
    """A proper local epistemic model, obtained through ``lem``."""
    return lem(random_simplicial_model(gp))


def is_impure(c: SimplicialModel) -> bool:
    return len({c.live(f) for f in c.points}) > 1


def duplicate_worlds(m: KripkeModel, copies: dict) -> tuple[KripkeModel, dict]:
    """Add ``copies[w]`` clones of each world ``w``.

    A clone has the domain and predicates of its original and is related
    exactly as the original is (so clones of one world are related to each
    other by every agent alive there).  Returns the model and clone -> original.
    """
    origin = {w: w for w in m.worlds}
    for w, k in copies.items():
        for i in range(1, k + 1):
            origin[f"{w}~{i}"] = w
    domain = {u: m.domain[w] for u, w in origin.items()}
    interp = {u: dict(m.interp.get(w, {})) for u, w in origin.items()}
    rel = {}
    for a in m.agents:
        rel[a] = [(u, v) for u in origin for v in origin if (origin[u], origin[v]) in m.rel.get(a, ())]
    return KripkeModel.build(m.agents, domain, rel, interp), origin


def random_duplicated_model(gp: GenParams) -> tuple[KripkeModel, dict]:
    """A (usually improper) local epistemic model made by cloning worlds of a lem output."""
    rng = random.Random(f"dup-{gp.seed}")
    base = random_local_epistemic_model(gp)
    picks = rng.sample(list(base.worlds), rng.randint(1, len(base.worlds)))
    return duplicate_worlds(base, {w: rng.randint(1, 2) for w in picks})


# ---------------------------------------------------------------------------
# exhaustive enumeration


def _set_partitions(n: int) -> Iterator[tuple]:
    """Restricted growth strings of length n."""
    if n == 0:
        yield ()
        return

    def go(prefix, top):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for b in range(top + 2):
            yield from go(prefix + [b], max(top, b))

    yield from go([0], 0)


def _nonempty_subsets(agents) -> list:
    return [frozenset(c) for r in range(1, len(agents) + 1) for c in combinations(agents, r)]


def enumerate_structures(agents: Sequence[str], n_facets: int) -> Iterator[list]:
    """Unlabelled models with exactly ``n_facets`` facets, as lists of vertex sets.

    Vertex names come from :func:`vertex_name`.

    Colour sets come as a non-decreasing sequence and vertex sharing as a set
    partition per agent, which removes most (not all) isomorphic repeats.
    """
    agents = sorted(agents)
    color_sets = sorted(_nonempty_subsets(agents), key=lambda s: (len(s), sorted(s)))
    for combo in combinations_with_replacement(color_sets, n_facets):
        slots = {a: [i for i, cs in enumerate(combo) if a in cs] for a in agents}
        choices = [list(_set_partitions(len(slots[a]))) for a in agents]
        for parts in product(*choices):
            facets = [set() for _ in combo]
            for a, rgs in zip(agents, parts):
                for i, block in zip(slots[a], rgs):
                    facets[i].add(vertex_name(a, block))
            fs = [frozenset(f) for f in facets]
            if len(set(fs)) != len(fs) or any(f < g for f in fs for g in fs):
                continue
            yield fs


def enumerate_simplicial_models(agents: Sequence[str], max_facets: int, preds: Sequence[str] = ("p",),
                                universe: Optional[Sequence[str]] = None) -> Iterator[SimplicialModel]:
    """All small models, ordered by facet count, vertex count, then labelling bitmask."""
    universe = sorted(universe or agents)
    preds = list(preds)
    colors = {vertex_name(a, k): a for a in agents for k in range(max_facets)}
    for n in range(1, max_facets + 1):
        structures = sorted(enumerate_structures(agents, n), key=lambda fs: len(set().union(*fs)))
        for fs in structures:
            verts = sorted(set().union(*fs))
            slots = [(p, v) for p in preds for v in verts]
            for mask in range(1 << len(slots)):
                labeled = {p: [] for p in preds}
                for k, (p, v) in enumerate(slots):
                    if mask >> k & 1:
                        labeled[p].append(v)
                yield _build(universe, fs, colors, None, preds, labeled)
