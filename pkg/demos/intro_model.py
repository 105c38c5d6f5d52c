"""
Who knows what when agents can die
==================================

Two triangles glued at the a-vertex. Agent b is alive only in F, agent d
only in G, and c sits on a different vertex in each.
"""

from simpla.bisim import distinguishing_sentence
from simpla.correspondence import lem
from simpla.fixtures import CLARIFICATIONS, intro
from simpla.semantics import eval_kripke, eval_simplicial, truth_points
from simpla.syntax import parse

model = intro()
print(dict(model.facets))

# the four sample sentences, checked on the complex and on its Kripke image
kripke = lem(model)
for key, (text, _) in CLARIFICATIONS.items():
    f = parse(text)
    print(f"({key}) {text}")
    print("    simplicial:", eval_simplicial(model, "F", {}, f), " kripke:", eval_kripke(kripke, "F", {}, f))

# only F has a live b
print(truth_points(model, parse("<x:=b> top")))

# F and G are told apart by a sentence that is built, then checked
f = distinguishing_sentence(model, "F", model, "G")
print("distinguisher:", f)
print(eval_simplicial(model, "F", {}, f), eval_simplicial(model, "G", {}, f))
