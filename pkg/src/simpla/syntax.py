"""Formulas of the term-modal language with assignment operators.

Six primitive constructors make up the abstract syntax::

    p(x)  top  ~f  (f & g)  [x:=a] f  K{x,y} alpha

Everything else (``bot``, ``|``, ``->``, ``<x:=a>``, ``Khat``) is sugar that
is expanded while parsing and folded back by :func:`to_text`.

A ``K`` node only accepts a closed body; this is enforced on construction, so
every :class:`Formula` value in the program is well formed.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

__all__ = [
    "Formula", "Atom", "Top", "Neg", "And", "Assign", "Know",
    "TOP", "BOT", "neg", "conj", "disj", "implies", "iff", "dual_assign",
    "dual_know", "assign_prefix", "FormulaSyntaxError", "FreeVariableUnderK",
    "InadmissibleSubstitution", "parse", "to_text", "free_vars",
    "substitute", "fresh_var", "variables_of", "agents_of", "predicates_of",
    "subformulas", "size", "modal_depth", "random_formula", "FormulaGenerator",
    "TOKEN_RE",
]

TOKEN_RE = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")
RESERVED = frozenset({"top", "bot"})


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class FreeVariableUnderK(FormulaSyntaxError):
    """A knowledge operator was given a body with a free variable."""

    def __init__(self, var: str, position: int | None = None):
        self.var = var
        super().__init__(f"free variable {var!r} under K (K bodies must be sentences)", position)


class InadmissibleSubstitution(ValueError):
    def __init__(self, new: str, old: str, binder: str, path: tuple[int, ...]):
        self.new, self.old, self.binder, self.path = new, old, binder, path
        super().__init__(
            f"substituting {new} for {old} is not admissible: free {old} occurs "
            f"in the scope of {binder} (subterm path {list(path)})"
        )


# ---------------------------------------------------------------------------
# abstract syntax


@dataclass(frozen=True, eq=False)
class Formula:
    """Base class. Nodes are immutable and hash-consed by structure."""

    fv: frozenset = field(init=False, repr=False)
    _key: tuple = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def _setup(self, fv, key):
        object.__setattr__(self, "fv", frozenset(fv))
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Formula) or self._hash != other._hash:
            return False
        return self._key == other._key

    def __str__(self):
        return to_text(self)

    @property
    def is_sentence(self) -> bool:
        return not self.fv


@dataclass(frozen=True, eq=False)
class Atom(Formula):
    pred: str
    var: str

    def __post_init__(self):
        self._setup({self.var}, ("atom", self.pred, self.var))


@dataclass(frozen=True, eq=False)
class Top(Formula):
    def __post_init__(self):
        self._setup((), ("top",))


@dataclass(frozen=True, eq=False)
class Neg(Formula):
    sub: Formula

    def __post_init__(self):
        self._setup(self.sub.fv, ("neg", self.sub))


@dataclass(frozen=True, eq=False)
class And(Formula):
    left: Formula
    right: Formula

    def __post_init__(self):
        self._setup(self.left.fv | self.right.fv, ("and", self.left, self.right))


@dataclass(frozen=True, eq=False)
class Assign(Formula):
    var: str
    agent: str
    body: Formula

    def __post_init__(self):
        self._setup(self.body.fv - {self.var}, ("assign", self.var, self.agent, self.body))


@dataclass(frozen=True, eq=False)
class Know(Formula):
    vars: frozenset
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "vars", frozenset(self.vars))
        if self.body.fv:
            raise FreeVariableUnderK(min(self.body.fv))
        self._setup(self.vars, ("know", self.vars, self.body))


TOP = Top()
BOT = Neg(TOP)


def neg(f: Formula) -> Formula:
    return Neg(f)


def conj(parts: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``top``."""
    result = None
    for p in parts:
        result = p if result is None else And(result, p)
    return TOP if result is None else result


def disj(*parts: Formula) -> Formula:
    if not parts:
        return BOT
    result = parts[0]
    for p in parts[1:]:
        result = Neg(And(Neg(result), Neg(p)))
    return result


def implies(f: Formula, g: Formula) -> Formula:
    return Neg(And(f, Neg(g)))


def iff(f: Formula, g: Formula) -> Formula:
    return And(implies(f, g), implies(g, f))


def dual_assign(var: str, agent: str, f: Formula) -> Formula:
    """``<x:=a> f``, i.e. ``~[x:=a]~f``: the agent is alive and f holds of it."""
    return Neg(Assign(var, agent, Neg(f)))


def dual_know(vars: Iterable[str], f: Formula) -> Formula:
    return Neg(Know(frozenset(vars), Neg(f)))


def assign_prefix(vars, agents, f: Formula, dual: bool = False) -> Formula:
    """``[x1:=a1]...[xn:=an] f`` (or the ``<...>`` chain when ``dual``)."""
    make = dual_assign if dual else Assign
    for v, a in reversed(list(zip(vars, agents))):
        f = make(v, a, f)
    return f


# ---------------------------------------------------------------------------
# traversal helpers


def free_vars(f: Formula) -> frozenset:
    return f.fv


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal (a node before its children, left to right)."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, Neg):
            stack.append(g.sub)
        elif isinstance(g, And):
            stack.append(g.right)
            stack.append(g.left)
        elif isinstance(g, (Assign, Know)):
            stack.append(g.body)


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def modal_depth(f: Formula) -> int:
    """Nesting depth of assignment and knowledge operators."""
    if isinstance(f, (Atom, Top)):
        return 0
    if isinstance(f, Neg):
        return modal_depth(f.sub)
    if isinstance(f, And):
        return max(modal_depth(f.left), modal_depth(f.right))
    return 1 + modal_depth(f.body)


def variables_of(f: Formula) -> frozenset:
    out = set()
    for g in subformulas(f):
        if isinstance(g, (Atom, Assign)):
            out.add(g.var)
        elif isinstance(g, Know):
            out |= g.vars
    return frozenset(out)


def agents_of(f: Formula) -> frozenset:
    return frozenset(g.agent for g in subformulas(f) if isinstance(g, Assign))


def predicates_of(f: Formula) -> frozenset:
    return frozenset(g.pred for g in subformulas(f) if isinstance(g, Atom))


def fresh_var(avoid: Iterable[str], stem: str = "x") -> str:
    """Smallest ``x0, x1, ...`` not in ``avoid``."""
    avoid = set(avoid)
    i = 0
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


def substitute(f: Formula, new: str, old: str) -> Formula:
    """Return ``f[new/old]``: free occurrences of ``old`` become ``new``.

    Raises :class:`InadmissibleSubstitution` when a free ``old`` sits in the
    scope of some ``[new:=a]``.
    """
    if new == old or old not in f.fv:
        return f

    def go(g: Formula, binder: Optional[str], path: tuple) -> Formula:
        if old not in g.fv:
            return g
        if isinstance(g, Atom):
            if binder is not None:
                raise InadmissibleSubstitution(new, old, binder, path)
            return Atom(g.pred, new)
        if isinstance(g, Know):
            if binder is not None:
                raise InadmissibleSubstitution(new, old, binder, path)
            return Know((g.vars - {old}) | {new}, g.body)
        if isinstance(g, Neg):
            return Neg(go(g.sub, binder, path + (0,)))
        if isinstance(g, And):
            return And(go(g.left, binder, path + (0,)), go(g.right, binder, path + (1,)))
        if isinstance(g, Assign):
            inner = binder
            if g.var == new and inner is None:
                inner = f"[{g.var}:={g.agent}]"
            return Assign(g.var, g.agent, go(g.body, inner, path + (0,)))
        raise TypeError(g)

    return go(f, None, ())


# ---------------------------------------------------------------------------
# concrete syntax

_TOKEN_SPEC = re.compile(
    r"""\s*(?:
        (?P<assign>:=) | (?P<arrow>->) |
        (?P<punct>[()\[\]<>{},~&|]) |
        (?P<name>[A-Za-z][A-Za-z0-9_]*)
    )""",
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN_SPEC.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        tokens.append((m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    tokens.append(("<eof>", n))
    return tokens


class _Parser:
    def __init__(self, text: str, agents: Optional[frozenset]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.agents = agents

    def peek(self) -> str:
        return self.tokens[self.i][0]

    @property
    def pos(self) -> int:
        return self.tokens[self.i][1]

    def take(self) -> tuple[str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, want: str) -> int:
        tok, pos = self.take()
        if tok != want:
            raise FormulaSyntaxError(f"expected {want!r}, found {tok!r}", pos)
        return pos

    def name(self, role: str) -> str:
        tok, pos = self.take()
        if not TOKEN_RE.match(tok) or tok in RESERVED:
            raise FormulaSyntaxError(f"expected {role} name, found {tok!r}", pos)
        if self.agents is not None:
            if role == "agent" and tok not in self.agents:
                raise FormulaSyntaxError(f"unknown agent {tok!r}", pos)
            if role in ("variable",) and tok in self.agents:
                raise FormulaSyntaxError(f"agent name {tok!r} used as a variable", pos)
        return tok

    def formula(self) -> Formula:
        tok, pos = self.tokens[self.i]
        if tok == "top":
            self.i += 1
            return TOP
        if tok == "bot":
            self.i += 1
            return BOT
        if tok == "~":
            self.i += 1
            return Neg(self.formula())
        if tok == "(":
            self.i += 1
            left = self.formula()
            op, op_pos = self.take()
            if op == ")":
                return left
            if op not in ("&", "|", "->"):
                raise FormulaSyntaxError(f"expected '&', '|', '->' or ')', found {op!r}", op_pos)
            right = self.formula()
            self.expect(")")
            if op == "&":
                return And(left, right)
            if op == "|":
                return disj(left, right)
            return implies(left, right)
        if tok in ("[", "<"):
            self.i += 1
            var = self.name("variable")
            self.expect(":=")
            agent = self.name("agent")
            self.expect("]" if tok == "[" else ">")
            body = self.formula()
            return Assign(var, agent, body) if tok == "[" else dual_assign(var, agent, body)
        if tok in ("K", "Khat"):
            self.i += 1
            self.expect("{")
            vs = []
            while self.peek() != "}":
                vs.append(self.name("variable"))
                if self.peek() == ",":
                    self.i += 1
            self.expect("}")
            body_pos = self.pos
            body = self.formula()
            if body.fv:
                raise FreeVariableUnderK(min(body.fv), body_pos)
            return Know(frozenset(vs), body) if tok == "K" else dual_know(vs, body)
        if TOKEN_RE.match(tok) and tok not in RESERVED:
            self.i += 1
            self.expect("(")
            var = self.name("variable")
            self.expect(")")
            return Atom(tok, var)
        raise FormulaSyntaxError(f"unexpected token {tok!r}", pos)


def parse(text: str, agents: Optional[Iterable[str]] = None) -> Formula:
    """Parse the concrete syntax.

    When ``agents`` is given, agent names are checked against it and may not
    be used as variables.
    """
    p = _Parser(text, frozenset(agents) if agents is not None else None)
    f = p.formula()
    if p.peek() != "<eof>":
        raise FormulaSyntaxError(f"trailing input {p.peek()!r}", p.pos)
    return f


def _vars_text(vs) -> str:
    return "{" + ",".join(sorted(vs)) + "}"


def to_text(f: Formula) -> str:
    """Print a formula, folding the derived operators back into sugar."""
    if isinstance(f, Atom):
        return f"{f.pred}({f.var})"
    if isinstance(f, Top):
        return "top"
    if isinstance(f, And):
        return f"({to_text(f.left)} & {to_text(f.right)})"
    if isinstance(f, Assign):
        return f"[{f.var}:={f.agent}] {to_text(f.body)}"
    if isinstance(f, Know):
        return f"K{_vars_text(f.vars)} {to_text(f.body)}"
    g = f.sub
    if isinstance(g, Top):
        return "bot"
    if isinstance(g, And) and isinstance(g.right, Neg):
        if isinstance(g.left, Neg):
            return f"({to_text(g.left.sub)} | {to_text(g.right.sub)})"
        return f"({to_text(g.left)} -> {to_text(g.right.sub)})"
    if isinstance(g, Assign) and isinstance(g.body, Neg):
        return f"<{g.var}:={g.agent}> {to_text(g.body.sub)}"
    if isinstance(g, Know) and isinstance(g.body, Neg):
        return f"Khat{_vars_text(g.vars)} {to_text(g.body.sub)}"
    return "~" + to_text(g)


# ---------------------------------------------------------------------------
# random generation


class FormulaGenerator:
    """Seeded random formulas for property suites.

    ``depth`` bounds the nesting of assignment and knowledge operators;
    Boolean structure between them is limited by ``bool_depth``.
    """

    def __init__(self, agents, preds, rng: random.Random | int | None = None,
                 variables=("x", "y", "z"), bool_depth: int = 2):
        self.agents = sorted(agents)
        self.preds = sorted(preds)
        self.rng = rng if isinstance(rng, random.Random) else random.Random(rng)
        self.variables = tuple(variables)
        self.bool_depth = bool_depth
        if not self.agents:
            raise ValueError("need at least one agent")

    def sentence(self, depth: int) -> Formula:
        return self.formula(depth, frozenset())

    def formula(self, depth: int, env=frozenset(), bool_budget: Optional[int] = None) -> Formula:
        """A formula whose free variables lie within ``env``."""
        rng = self.rng
        env = frozenset(env)
        if bool_budget is None:
            bool_budget = self.bool_depth
        r = rng.random()
        if depth <= 0:
            if bool_budget > 0 and r < 0.35:
                return self._boolean(depth, env, bool_budget - 1)
            return self._leaf(env)
        if bool_budget > 0 and r < 0.3:
            return self._boolean(depth, env, bool_budget - 1)
        r = rng.random()
        if r < 0.12:
            return self._leaf(env)
        if r < 0.62:
            v = rng.choice(self.variables)
            a = rng.choice(self.agents)
            body = self.formula(depth - 1, env | {v})
            return Assign(v, a, body) if rng.random() < 0.5 else dual_assign(v, a, body)
        vs = frozenset(v for v in sorted(env) if rng.random() < 0.6)
        body = self.formula(depth - 1, frozenset())
        return Know(vs, body) if rng.random() < 0.6 else dual_know(vs, body)

    def _leaf(self, env) -> Formula:
        rng = self.rng
        if env and self.preds and rng.random() < 0.8:
            return Atom(rng.choice(self.preds), rng.choice(sorted(env)))
        return TOP if rng.random() < 0.6 else BOT

    def _boolean(self, depth, env, budget) -> Formula:
        rng = self.rng
        r = rng.random()
        if r < 0.3:
            return Neg(self.formula(depth, env, budget))
        left = self.formula(depth, env, budget)
        right = self.formula(depth, env, budget)
        if r < 0.65:
            return And(left, right)
        if r < 0.85:
            return disj(left, right)
        return implies(left, right)


def random_formula(agents, preds, depth: int, seed: int) -> Formula:
    """A random sentence with modal/assignment nesting at most ``depth``."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    return FormulaGenerator(agents, preds, random.Random(seed)).sentence(depth)
