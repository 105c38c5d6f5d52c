"""Translations between simplicial models and local epistemic Kripke models.

``lem`` turns facets into worlds; ``sc`` turns agent-labelled
indistinguishability classes into vertices.  ``isomorphic`` decides
isomorphism of two models of the same kind (VF2 from networkx does the
search; :func:`verify_isomorphism` re-checks any mapping independently).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import networkx as nx
from networkx.algorithms import isomorphism as nxiso

from .models import (KripkeModel, Model, NotLocalEpistemic, SimplicialModel,
                     check_local_epistemic, default_facet_name)

__all__ = ["lem", "sc", "sc_with_map", "IsoWitness", "isomorphic", "verify_isomorphism", "cell_vertex_name"]


def lem(c: SimplicialModel) -> KripkeModel:
    """Facets become worlds; ``F R_a G`` iff ``F`` and ``G`` share the ``a``-vertex."""
    domain = {F: c.live(F) for F in c.points}
    rel = {a: set() for a in c.agents}
    for F in c.points:
        for G in c.points:
            for a in c.shared_agents(F, G):
                rel[a].add((F, G))
    interp = {F: {p: c.holders(p, F) for p in c.labeling if c.holders(p, F)} for F in c.points}
    return KripkeModel.build(c.agents, domain, rel, interp)


def cell_vertex_name(agent: str, cell) -> str:
    return f"{agent}:{{{','.join(sorted(cell))}}}"


def sc_with_map(m: KripkeModel) -> tuple[SimplicialModel, dict]:
    """Like :func:`sc` but also returns world -> facet name."""
    report = check_local_epistemic(m)
    if not report.local_epistemic:
        raise NotLocalEpistemic(report)
    colors, labeling, facets, where = {}, {}, {}, {}
    for w in m.worlds:
        verts = []
        for a in sorted(m.domain[w]):
            v = cell_vertex_name(a, m.successors(a, w))
            colors[v] = a
            verts.append(v)
            for p in m.interp.get(w, {}):
                if a in m.holders(p, w):
                    labeling.setdefault(p, set()).add(v)
        name = default_facet_name(verts)
        facets[name] = frozenset(verts)
        where[w] = name
    return SimplicialModel.build(m.agents, colors, facets, labeling), where


def sc(m: KripkeModel) -> SimplicialModel:
    """Vertices are pairs (agent, R_a(w)); each world contributes one facet."""
    return sc_with_map(m)[0]


@dataclass(frozen=True)
class IsoWitness:
    """Bijection on vertices (simplicial) or worlds (Kripke), left to right."""

    mapping: dict
    kind: str

    def __str__(self):
        return "\n".join(f"{k} -> {v}" for k, v in sorted(self.mapping.items()))


def _simplicial_graph(c: SimplicialModel) -> nx.Graph:
    g = nx.Graph()
    for v, a in c.colors.items():
        preds = frozenset(p for p, lab in c.labeling.items() if v in lab)
        g.add_node(("v", v), label=("v", a, preds))
    for F, vs in c.facets.items():
        g.add_node(("f", F), label=("f",))
        for v in vs:
            g.add_edge(("f", F), ("v", v))
    return g


def _kripke_graph(m: KripkeModel) -> nx.DiGraph:
    g = nx.DiGraph()
    for w in m.worlds:
        interp = frozenset((p, hs) for p, hs in m.interp.get(w, {}).items() if hs)
        g.add_node(w, label=(m.domain[w], interp))
    edges = {}
    for a, pairs in m.rel.items():
        for w, v in pairs:
            edges.setdefault((w, v), set()).add(a)
    for (w, v), agents in edges.items():
        g.add_edge(w, v, label=frozenset(agents))
    return g


def _same_label(x, y):
    return x["label"] == y["label"]


def isomorphic(left: Model, right: Model) -> Optional[IsoWitness]:
    """A structure-preserving bijection from ``left`` to ``right``, or None."""
    if left.kind != right.kind:
        raise ValueError(f"cannot compare a {left.kind} model with a {right.kind} model")
    if left.agents != right.agents:
        return None
    if isinstance(left, SimplicialModel):
        g1, g2 = _simplicial_graph(left), _simplicial_graph(right)
        gm = nxiso.GraphMatcher(g1, g2, node_match=_same_label)
    else:
        g1, g2 = _kripke_graph(left), _kripke_graph(right)
        gm = nxiso.DiGraphMatcher(g1, g2, node_match=_same_label, edge_match=_same_label)
    if not gm.is_isomorphic():
        return None
    if isinstance(left, SimplicialModel):
        mapping = {a[1]: b[1] for a, b in gm.mapping.items() if a[0] == "v"}
    else:
        mapping = dict(gm.mapping)
    witness = IsoWitness(mapping, left.kind)
    if not verify_isomorphism(left, right, witness):
        raise AssertionError("graph matcher produced a mapping that fails verification")
    return witness


def verify_isomorphism(left: Model, right: Model, witness: IsoWitness) -> bool:
    """Re-check a witness directly against the model definitions."""
    f = witness.mapping
    if left.agents != right.agents:
        return False
    if isinstance(left, SimplicialModel):
        if set(f) != set(left.colors) or set(f.values()) != set(right.colors) or len(set(f.values())) != len(f):
            return False
        if any(left.colors[v] != right.colors[f[v]] for v in f):
            return False
        if {frozenset(f[v] for v in vs) for vs in left.facets.values()} != set(right.facets.values()):
            return False
        preds = set(left.labeling) | set(right.labeling)
        return all(frozenset(f[v] for v in left.labeling.get(p, ())) == right.labeling.get(p, frozenset())
                   for p in preds)
    if set(f) != set(left.worlds) or set(f.values()) != set(right.worlds) or len(set(f.values())) != len(f):
        return False
    for w in left.worlds:
        if left.domain[w] != right.domain[f[w]]:
            return False
        preds = set(left.interp.get(w, {})) | set(right.interp.get(f[w], {}))
        if any(left.holders(p, w) != right.holders(p, f[w]) for p in preds):
            return False
    for a in left.agents | right.agents:
        mapped = {(f[w], f[v]) for w, v in left.rel.get(a, ())}
        if mapped != set(right.rel.get(a, ())):
            return False
    return True
