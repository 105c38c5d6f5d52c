"""
Pushing assignments inward, and groups picked out by a formula
==============================================================
"""

from simpla.fixtures import intro
from simpla.intensional import (GroupFormula, eval_k_phi_direct, expand_k_phi, group_extension,
                                search_neg_introspection_counterexample)
from simpla.normalform import anf, is_anf, simplify
from simpla.semantics import holds, truth_set
from simpla.syntax import parse

model = intro()

# assignment normal form keeps the truth set
alpha = parse("[x:=a] (K{x} <y:=c> p(y) & ~p(x))")
nf = simplify(anf(alpha))
print(nf, is_anf(nf))
print(truth_set(model, alpha) == truth_set(model, nf))

# the group of agents with p is {c} at F and empty at G
has_p = GroupFormula(parse("p(x)"))
print(group_extension(has_p, model, "F"), group_extension(has_p, model, "G"))

# K_phi by its truth condition, and by the expansion into the base language
alpha = parse("<z:=c> p(z)")
print(eval_k_phi_direct(has_p, alpha, model, "F"))
expanded = expand_k_phi(has_p, alpha, model.agents)
print(holds(model, "F", expanded))

# negative introspection fails for this group; here is the smallest witness found
w = search_neg_introspection_counterexample(has_p, 4)
print(w)
