"""Simplicial models, first-order Kripke models and local epistemic checks.

Simplicial models store their facets only; faces are the non-empty subsets
of facets and are enumerated on demand by :func:`all_faces`.  Both kinds of
model are plain immutable containers with string identifiers.

JSON formats::

    {"kind": "simplicial", "agents": [...],
     "vertices": [{"id": "v1", "color": "a"}, ...],
     "facets": [["v1", "v2"], ...],          # or [{"id": "F", "vertices": [...]}, ...]
     "labeling": {"p": ["v1", ...]}}

    {"kind": "kripke", "agents": [...],
     "worlds": [{"id": "w1", "domain": ["a", "b"], "interp": {"p": ["a"]}}, ...],
     "relations": {"a": [["w1", "w2"], ...]}}
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Union

__all__ = [
    "SimplicialModel", "KripkeModel", "Model", "ModelError", "ModelFormatError",
    "NotLocalEpistemic", "PropertyResult", "LepReport", "validate_simplicial",
    "validate_kripke", "validate", "facets", "all_faces", "check_local_epistemic",
    "properize", "default_facet_name", "model_from_json", "model_to_json",
    "read_model", "write_model", "points",
]


class ModelError(ValueError):
    """A model violates one of its structural invariants."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class ModelFormatError(ValueError):
    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}")


class NotLocalEpistemic(ValueError):
    def __init__(self, report: "LepReport"):
        self.report = report
        failed = [f"{k} ({r.detail})" for k, r in report.items() if not r.ok and k != "properness"]
        super().__init__("not a local epistemic model: " + "; ".join(failed))


def _frozen_map(d, value=frozenset):
    return MappingProxyType({k: value(v) for k, v in d.items()})


def default_facet_name(vertices: Iterable[str]) -> str:
    return ",".join(sorted(vertices))


@dataclass(frozen=True, eq=False)
class SimplicialModel:
    """Colored vertices, listed facets and a predicate labeling of vertices."""

    agents: frozenset
    colors: Mapping[str, str]
    facets: Mapping[str, frozenset]
    labeling: Mapping[str, frozenset] = field(default_factory=dict)

    kind = "simplicial"

    @classmethod
    def build(cls, agents, colors, facets, labeling=None) -> "SimplicialModel":
        """``facets`` is a mapping name -> vertices or a list of vertex lists."""
        if not isinstance(facets, Mapping):
            facets = {default_facet_name(vs): vs for vs in facets}
        return cls(
            agents=frozenset(agents),
            colors=MappingProxyType(dict(colors)),
            facets=_frozen_map(facets),
            labeling=_frozen_map(labeling or {}),
        )

    @property
    def vertices(self) -> frozenset:
        return frozenset(self.colors)

    @property
    def points(self) -> tuple:
        return tuple(sorted(self.facets))

    @property
    def predicates(self) -> frozenset:
        return frozenset(self.labeling)

    def live(self, facet: str) -> frozenset:
        """Colors of a facet, i.e. the agents alive there."""
        return self._live[facet]

    @cached_property
    def _live(self):
        return {f: frozenset(self.colors[v] for v in vs) for f, vs in self.facets.items()}

    def holders(self, pred: str, facet: str) -> frozenset:
        """Agents having ``pred`` at ``facet``."""
        lab = self.labeling.get(pred, frozenset())
        return frozenset(self.colors[v] for v in self.facets[facet] & lab)

    def vertex_of(self, facet: str, agent: str) -> Optional[str]:
        for v in self.facets[facet]:
            if self.colors[v] == agent:
                return v
        return None

    def shared_agents(self, f: str, g: str) -> frozenset:
        return frozenset(self.colors[v] for v in self.facets[f] & self.facets[g])

    def __repr__(self):
        return (f"SimplicialModel(agents={sorted(self.agents)}, vertices={len(self.colors)}, "
                f"facets={sorted(self.facets)})")


@dataclass(frozen=True, eq=False)
class KripkeModel:
    """Worlds with local agent domains, agent relations and a predicate interpretation."""

    agents: frozenset
    worlds: tuple
    domain: Mapping[str, frozenset]
    rel: Mapping[str, frozenset]
    interp: Mapping[str, Mapping[str, frozenset]] = field(default_factory=dict)

    kind = "kripke"

    @classmethod
    def build(cls, agents, domain, rel, interp=None) -> "KripkeModel":
        agents = frozenset(agents)
        interp = interp or {}
        return cls(
            agents=agents,
            worlds=tuple(sorted(domain)),
            domain=_frozen_map(domain),
            rel=MappingProxyType({a: frozenset(map(tuple, rel.get(a, ()))) for a in sorted(agents | set(rel))}),
            interp=MappingProxyType({w: _frozen_map(interp.get(w, {})) for w in domain}),
        )

    @property
    def points(self) -> tuple:
        return self.worlds

    @cached_property
    def predicates(self) -> frozenset:
        return frozenset(p for w in self.interp.values() for p in w)

    def live(self, world: str) -> frozenset:
        return self.domain[world]

    def holders(self, pred: str, world: str) -> frozenset:
        return self.interp.get(world, {}).get(pred, frozenset())

    @cached_property
    def _succ(self):
        out = {a: {w: set() for w in self.worlds} for a in self.rel}
        for a, pairs in self.rel.items():
            for w, v in pairs:
                if w in out[a]:
                    out[a][w].add(v)
        return {a: {w: frozenset(s) for w, s in m.items()} for a, m in out.items()}

    def successors(self, agent: str, world: str) -> frozenset:
        return self._succ.get(agent, {}).get(world, frozenset())

    def group_successors(self, agents: Iterable[str], world: str) -> frozenset:
        """Intersection of ``R_a(world)`` over ``agents``; all worlds for the empty group."""
        result = frozenset(self.worlds)
        for a in agents:
            result &= self.successors(a, world)
        return result

    def cell(self, world: str) -> frozenset:
        """``[w]`` = intersection of ``R_a(w)`` over the agents alive at ``w``."""
        return self.group_successors(self.domain[world], world)

    def __repr__(self):
        return f"KripkeModel(agents={sorted(self.agents)}, worlds={list(self.worlds)})"


Model = Union[SimplicialModel, KripkeModel]


def points(model: Model) -> tuple:
    return model.points


# ---------------------------------------------------------------------------
# validation


def validate_simplicial(c: SimplicialModel) -> list[str]:
    """Return a list of violated invariants, each with a witness."""
    errors = []
    if not c.agents:
        errors.append("agent universe is empty")
    if not c.colors:
        errors.append("no vertices")
    for v, a in sorted(c.colors.items()):
        if a not in c.agents:
            errors.append(f"vertex {v} has undeclared color {a}")
    if not c.facets:
        errors.append("no facets")
    covered = set()
    for name, vs in sorted(c.facets.items()):
        if not vs:
            errors.append(f"facet {name} is empty")
        unknown = sorted(vs - c.colors.keys())
        if unknown:
            errors.append(f"facet {name} lists undeclared vertices {unknown}")
            continue
        covered |= vs
        seen = {}
        for v in sorted(vs):
            a = c.colors[v]
            if a in seen:
                errors.append(f"coloring not injective on facet {name}: {seen[a]} and {v} both colored {a}")
            seen[a] = v
    for v in sorted(c.colors.keys() - covered):
        errors.append(f"vertex {v} is in no facet")
    names = sorted(c.facets)
    for f, g in itertools.permutations(names, 2):
        if c.facets[f] <= c.facets[g] and (c.facets[f] != c.facets[g] or f < g):
            errors.append(f"facet {f} {sorted(c.facets[f])} is contained in facet {g} {sorted(c.facets[g])}")
    for p, vs in sorted(c.labeling.items()):
        unknown = sorted(vs - c.colors.keys())
        if unknown:
            errors.append(f"labeling of {p} mentions undeclared vertices {unknown}")
    return errors


def validate_kripke(m: KripkeModel) -> list[str]:
    errors = []
    if not m.agents:
        errors.append("agent universe is empty")
    if not m.worlds:
        errors.append("no worlds")
    worlds = set(m.worlds)
    for w in m.worlds:
        d = m.domain[w]
        if not d:
            errors.append(f"world {w} has an empty domain")
        if d - m.agents:
            errors.append(f"world {w} has undeclared agents {sorted(d - m.agents)} in its domain")
        for p, holders in sorted(m.interp.get(w, {}).items()):
            if not holders <= d:
                errors.append(f"interpretation of {p} at {w} contains {sorted(holders - d)} outside the domain")
    for a, pairs in sorted(m.rel.items()):
        if a not in m.agents:
            errors.append(f"relation for undeclared agent {a}")
        for w, v in sorted(pairs):
            if w not in worlds or v not in worlds:
                errors.append(f"R_{a} pair ({w}, {v}) mentions an unknown world")
            elif a not in m.domain[w]:
                errors.append(f"R_{a} has pair ({w}, {v}) but {a} is not in the domain of {w}")
    return errors


def validate(model: Model) -> list[str]:
    if isinstance(model, SimplicialModel):
        return validate_simplicial(model)
    return validate_kripke(model)


def facets(c: SimplicialModel) -> dict:
    return dict(c.facets)


def all_faces(c: SimplicialModel) -> set:
    """The downward closure of the facets (every non-empty subset)."""
    faces = set()
    for vs in c.facets.values():
        vs = sorted(vs)
        for k in range(1, len(vs) + 1):
            faces.update(frozenset(s) for s in itertools.combinations(vs, k))
    return faces


# ---------------------------------------------------------------------------
# local epistemic models


@dataclass(frozen=True)
class PropertyResult:
    ok: bool
    witness: tuple = ()
    detail: str = ""

    def __bool__(self):
        return self.ok


_PASS = PropertyResult(True)


@dataclass(frozen=True)
class LepReport:
    local_s5: PropertyResult
    indiv_increasing: PropertyResult
    local_predicates: PropertyResult
    coll_decreasing: PropertyResult
    properness: PropertyResult

    NAMES = ("local_s5", "indiv_increasing", "local_predicates", "coll_decreasing", "properness")

    def items(self):
        return [(k, getattr(self, k)) for k in self.NAMES]

    @property
    def local_epistemic(self) -> bool:
        return all(r.ok for k, r in self.items() if k != "properness")

    @property
    def proper(self) -> bool:
        return self.local_epistemic and self.properness.ok

    def __str__(self):
        return "\n".join(f"{k}: {'pass' if r.ok else 'FAIL ' + r.detail}" for k, r in self.items())


def _local_s5(m: KripkeModel) -> PropertyResult:
    for a in sorted(m.agents):
        alive = [w for w in m.worlds if a in m.domain[w]]
        alive_set = set(alive)
        succ = {w: m.successors(a, w) & alive_set for w in alive}
        for w in alive:
            if w not in succ[w]:
                return PropertyResult(False, (a, w), f"R_{a} not reflexive at {w}")
        for w in alive:
            for v in sorted(succ[w]):
                if w not in succ[v]:
                    return PropertyResult(False, (a, w, v), f"R_{a} has ({w}, {v}) but not ({v}, {w})")
        for w in alive:
            for v in sorted(succ[w]):
                missing = succ[v] - succ[w]
                if missing:
                    u = min(missing)
                    return PropertyResult(False, (a, w, v, u),
                                          f"R_{a} has ({w}, {v}) and ({v}, {u}) but not ({w}, {u})")
    return _PASS


def check_local_epistemic(m: KripkeModel) -> LepReport:
    """Evaluate the five local-epistemic properties, with witnesses on failure."""
    s5 = _local_s5(m)

    inc = _PASS
    for a in sorted(m.agents):
        for w in m.worlds:
            if a not in m.domain[w]:
                continue
            bad = sorted(v for v in m.successors(a, w) if a not in m.domain[v])
            if bad:
                inc = PropertyResult(False, (a, w, bad[0]), f"{w} R_{a} {bad[0]} but {a} not alive at {bad[0]}")
                break
        if not inc:
            break

    preds = _PASS
    names = sorted({p for w in m.worlds for p in m.interp.get(w, {})})
    for w, a, p in itertools.product(m.worlds, sorted(m.agents), names):
        here = a in m.holders(p, w)
        bad = sorted(v for v in m.successors(a, w) if (a in m.holders(p, v)) != here)
        if bad:
            which = "has" if here else "lacks"
            preds = PropertyResult(False, (p, a, w, bad[0]),
                                   f"{a} {which} {p} at {w} and {w} R_{a} {bad[0]}, but not so at {bad[0]}")
            break

    dec = _PASS
    for w in m.worlds:
        for v in sorted(m.cell(w)):
            if not m.domain[v] <= m.domain[w]:
                dec = PropertyResult(False, (w, v),
                                     f"{v} is in the cell of {w} but has extra agents {sorted(m.domain[v] - m.domain[w])}")
                break
        if not dec:
            break

    proper = _PASS
    for w in m.worlds:
        c = m.cell(w)
        if c != {w}:
            proper = PropertyResult(False, (w,), f"cell of {w} is {sorted(c)}")
            break

    return LepReport(s5, inc, preds, dec, proper)


def _cell_name(cell: Iterable[str]) -> str:
    return ",".join(sorted(cell))


def properize(m: KripkeModel) -> tuple[KripkeModel, dict]:
    """Quotient a local epistemic model by its cells.

    Returns the proper model and the map from each world to its cell name;
    cells are named by their sorted member ids joined with commas.
    """
    report = check_local_epistemic(m)
    if not report.local_epistemic:
        raise NotLocalEpistemic(report)
    quotient = {w: _cell_name(m.cell(w)) for w in m.worlds}
    domain, interp = {}, {}
    for w in m.worlds:
        c = quotient[w]
        if c in domain and domain[c] != m.domain[w]:
            raise AssertionError(f"domain not constant on cell {c}")
        domain[c] = m.domain[w]
        interp[c] = dict(m.interp.get(w, {}))
    rel = {a: {(quotient[w], quotient[v]) for w, v in pairs} for a, pairs in m.rel.items()}
    return KripkeModel.build(m.agents, domain, rel, interp), quotient


# ---------------------------------------------------------------------------
# JSON


def _expect(cond, where, message):
    if not cond:
        raise ModelFormatError(where, message)


def _str_list(value, where) -> list:
    _expect(isinstance(value, list), where, "expected a list of strings")
    for i, x in enumerate(value):
        _expect(isinstance(x, str) and x, f"{where}[{i}]", "expected a non-empty string")
    return value


def model_from_json(doc: dict, check: bool = True) -> Model:
    """Build a model from its JSON document; validates unless ``check`` is false."""
    _expect(isinstance(doc, dict), "$", "expected a JSON object")
    kind = doc.get("kind")
    _expect(kind in ("simplicial", "kripke"), "$.kind", f"expected 'simplicial' or 'kripke', got {kind!r}")
    agents = _str_list(doc.get("agents"), "$.agents")
    if kind == "simplicial":
        verts = doc.get("vertices")
        _expect(isinstance(verts, list), "$.vertices", "expected a list")
        colors = {}
        for i, v in enumerate(verts):
            where = f"$.vertices[{i}]"
            _expect(isinstance(v, dict), where, "expected an object with 'id' and 'color'")
            _expect(isinstance(v.get("id"), str) and v["id"], f"{where}.id", "expected a non-empty string")
            _expect(isinstance(v.get("color"), str), f"{where}.color", "expected an agent name")
            _expect(v["id"] not in colors, f"{where}.id", f"duplicate vertex id {v['id']!r}")
            colors[v["id"]] = v["color"]
        raw = doc.get("facets")
        _expect(isinstance(raw, list), "$.facets", "expected a list")
        fs = {}
        for i, f in enumerate(raw):
            where = f"$.facets[{i}]"
            if isinstance(f, dict):
                _expect(isinstance(f.get("id"), str) and f["id"], f"{where}.id", "expected a non-empty string")
                vs = _str_list(f.get("vertices"), f"{where}.vertices")
                name = f["id"]
            else:
                vs = _str_list(f, where)
                name = default_facet_name(vs)
            for j, v in enumerate(vs):
                _expect(v in colors, f"{where}[{j}]", f"unknown vertex id {v!r}")
            _expect(name not in fs, where, f"duplicate facet {name!r}")
            fs[name] = vs
        labeling = doc.get("labeling", {})
        _expect(isinstance(labeling, dict), "$.labeling", "expected an object")
        for p, vs in labeling.items():
            _str_list(vs, f"$.labeling.{p}")
        model = SimplicialModel.build(agents, colors, fs, labeling)
    else:
        raw = doc.get("worlds")
        _expect(isinstance(raw, list), "$.worlds", "expected a list")
        domain, interp = {}, {}
        for i, w in enumerate(raw):
            where = f"$.worlds[{i}]"
            _expect(isinstance(w, dict) and isinstance(w.get("id"), str) and w["id"], f"{where}.id",
                    "expected a non-empty string")
            _expect(w["id"] not in domain, f"{where}.id", f"duplicate world id {w['id']!r}")
            domain[w["id"]] = _str_list(w.get("domain"), f"{where}.domain")
            ip = w.get("interp", {})
            _expect(isinstance(ip, dict), f"{where}.interp", "expected an object")
            for p, holders in ip.items():
                _str_list(holders, f"{where}.interp.{p}")
            interp[w["id"]] = ip
        rel = doc.get("relations", {})
        _expect(isinstance(rel, dict), "$.relations", "expected an object")
        for a, pairs in rel.items():
            _expect(isinstance(pairs, list), f"$.relations.{a}", "expected a list of pairs")
            for j, pr in enumerate(pairs):
                where = f"$.relations.{a}[{j}]"
                _expect(isinstance(pr, list) and len(pr) == 2, where, "expected a [world, world] pair")
                for k in (0, 1):
                    _expect(pr[k] in domain, f"{where}[{k}]", f"unknown world id {pr[k]!r}")
        model = KripkeModel.build(agents, domain, rel, interp)
    if check:
        errors = validate(model)
        if errors:
            raise ModelError(errors)
    return model


def model_to_json(model: Model) -> dict:
    if isinstance(model, SimplicialModel):
        named = any(name != default_facet_name(vs) for name, vs in model.facets.items())
        fs = [
            {"id": name, "vertices": sorted(vs)} if named else sorted(vs)
            for name, vs in sorted(model.facets.items())
        ]
        return {
            "kind": "simplicial",
            "agents": sorted(model.agents),
            "vertices": [{"id": v, "color": model.colors[v]} for v in sorted(model.colors)],
            "facets": fs,
            "labeling": {p: sorted(vs) for p, vs in sorted(model.labeling.items())},
        }
    return {
        "kind": "kripke",
        "agents": sorted(model.agents),
        "worlds": [
            {
                "id": w,
                "domain": sorted(model.domain[w]),
                "interp": {p: sorted(h) for p, h in sorted(model.interp.get(w, {}).items())},
            }
            for w in model.worlds
        ],
        "relations": {a: sorted([list(p) for p in pairs]) for a, pairs in sorted(model.rel.items())},
    }


def read_model(path, check: bool = True) -> Model:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"{path}:{e.lineno}:{e.colno}", e.msg) from None
    return model_from_json(doc, check=check)


def write_model(model: Model, path) -> None:
    Path(path).write_text(json.dumps(model_to_json(model), indent=2) + "\n", encoding="utf-8")
