"""Assignment normal form.

A sentence is in assignment normal form when every assignment operator sits
directly over an atom on its own variable, over ``bot``, or inside a prefix
``[x1:=a1]...[xn:=an] K{x1..xn}`` whose variables are exactly those of the
knowledge operator::

    g ::= [x:=a]p(x) | [x:=a]bot | top | ~g | (g & g) | [xs:=as] K{xs} g

:func:`nf_step` pushes one operator ``[x:=a]`` into place; :func:`anf` runs
it for every operator of a sentence.
"""
from __future__ import annotations

from typing import Optional

from .syntax import (BOT, TOP, And, Assign, Atom, Formula, Know, Neg, Top, disj,
                     subformulas)

__all__ = ["nf_step", "anf", "is_anf", "is_normal_for", "simplify", "assignment_operators"]


def _is_bot(f: Formula) -> bool:
    return isinstance(f, Neg) and isinstance(f.sub, Top)


def _prefix(f: Formula):
    """Split a maximal chain of assignments: ``([(x, a), ...], body)``."""
    ops = []
    while isinstance(f, Assign):
        ops.append((f.var, f.agent))
        f = f.body
    return ops, f


def _settled_prefix(var: str, chi: Formula) -> Optional[tuple]:
    """If ``[var:=.] chi`` opens a prefix over ``K{Z}`` with distinct variables in Z.

    Such a prefix already has the normal shape up to reordering, so the
    operator is left where it is (otherwise the commutation rule would swap
    neighbouring binders forever).
    """
    ops, body = _prefix(chi)
    if not isinstance(body, Know):
        return None
    names = [var] + [v for v, _ in ops]
    if len(set(names)) != len(names) or not set(names) <= body.vars:
        return None
    return ops, body


def nf_step(f: Formula, x: str, a: str) -> Formula:
    """Translate ``f`` so that every ``[x:=a]`` is in normal position."""

    def nf(g: Formula) -> Formula:
        if isinstance(g, (Atom, Top)):
            return g
        if isinstance(g, Neg):
            return Neg(nf(g.sub))
        if isinstance(g, And):
            return And(nf(g.left), nf(g.right))
        if isinstance(g, Know):
            return Know(g.vars, nf(g.body))
        if g.var != x or g.agent != a:
            return Assign(g.var, g.agent, nf(g.body))
        return push(g.body)

    def push(chi: Formula) -> Formula:
        """Normal form of ``[x:=a] chi``."""
        if x not in chi.fv:
            if _is_bot(chi):
                return Assign(x, a, chi)
            return disj(Assign(x, a, BOT), nf(chi))
        if isinstance(chi, Atom):
            return Assign(x, a, chi)
        if isinstance(chi, Neg):
            return disj(Assign(x, a, BOT), Neg(push(chi.sub)))
        if isinstance(chi, And):
            return And(push(chi.left), push(chi.right))
        if isinstance(chi, Know):
            return Assign(x, a, Know(chi.vars, nf(chi.body)))
        # chi = [y:=b] phi with y != x
        settled = _settled_prefix(x, chi)
        if settled is not None:
            ops, body = settled
            out = Know(body.vars, nf(body.body))
            for v, b in reversed(ops):
                out = Assign(v, b, out)
            return Assign(x, a, out)
        return Assign(chi.var, chi.agent, push(chi.body))

    return nf(f)


def assignment_operators(f: Formula) -> list:
    """Distinct ``(var, agent)`` pairs of assignment operators, in pre-order."""
    seen = {}
    for g in subformulas(f):
        if isinstance(g, Assign):
            seen.setdefault((g.var, g.agent), None)
    return list(seen)


def is_normal_for(f: Formula, x: str, a: str) -> bool:
    """Every ``[x:=a]`` in ``f`` is over ``p(x)``, ``bot`` or a settled K-prefix."""
    for g in subformulas(f):
        if isinstance(g, Assign) and g.var == x and g.agent == a:
            body = g.body
            if isinstance(body, Atom) and body.var == x:
                continue
            if _is_bot(body):
                continue
            if isinstance(body, (Assign, Know)) and _settled_prefix(x, body) is not None:
                continue
            return False
    return True


def is_anf(f: Formula) -> bool:
    """Membership in the assignment-normal-form grammar."""
    if isinstance(f, Top):
        return True
    if isinstance(f, Neg):
        return is_anf(f.sub)
    if isinstance(f, And):
        return is_anf(f.left) and is_anf(f.right)
    if isinstance(f, Know):
        return not f.vars and is_anf(f.body)
    if isinstance(f, Assign):
        ops, body = _prefix(f)
        if len(ops) == 1 and isinstance(body, Atom):
            return body.var == ops[0][0]
        if len(ops) == 1 and _is_bot(body):
            return True
        if isinstance(body, Know):
            names = [v for v, _ in ops]
            return len(set(names)) == len(names) and set(names) == body.vars and is_anf(body.body)
        return False
    return False


def anf(alpha: Formula, max_rounds: int = 16) -> Formula:
    """Assignment normal form of a sentence, equivalent on every model."""
    if alpha.fv:
        raise ValueError(f"anf expects a sentence; free variables {sorted(alpha.fv)}")
    f = alpha
    for _ in range(max_rounds):
        if is_anf(f):
            return f
        for x, a in assignment_operators(f):
            f = nf_step(f, x, a)
    if not is_anf(f):
        raise RuntimeError(f"normal form did not converge after {max_rounds} rounds")
    return f


def simplify(f: Formula) -> Formula:
    """Fold ``top``/``bot`` constants through negation and conjunction."""
    if isinstance(f, Neg):
        sub = simplify(f.sub)
        if isinstance(sub, Neg) and isinstance(sub.sub, Top):
            return TOP
        return Neg(sub)
    if isinstance(f, And):
        left, right = simplify(f.left), simplify(f.right)
        if isinstance(left, Top):
            return right
        if isinstance(right, Top):
            return left
        if _is_bot(left) or _is_bot(right):
            return BOT
        return And(left, right)
    if isinstance(f, Assign):
        return Assign(f.var, f.agent, simplify(f.body))
    if isinstance(f, Know):
        return Know(f.vars, simplify(f.body))
    return f
