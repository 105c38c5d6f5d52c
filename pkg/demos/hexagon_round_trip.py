"""
Complexes and Kripke models describe the same situations
=========================================================

The hexagon complex turns into a six-world Kripke model and back again.
A model with a duplicated world is not proper, and properization merges
the copy away.
"""

from simpla.bisim import greatest_bisim
from simpla.correspondence import isomorphic, lem, sc
from simpla.fixtures import hex_kripke, hex_simplicial
from simpla.generators import duplicate_worlds
from simpla.models import check_local_epistemic, properize

hs, hk = hex_simplicial(), hex_kripke()

# facets become worlds
m = lem(hs)
print(m.worlds)
print(isomorphic(m, hk))

# and cells of indistinguishable worlds become vertices
print(isomorphic(sc(hk), hs))
print(isomorphic(sc(lem(hs)), hs) is not None, isomorphic(lem(sc(hk)), hk) is not None)

# copy a world: still local epistemic, no longer proper
dup, origin = duplicate_worlds(hk, {"ab": 1})
print(check_local_epistemic(dup))

pr, cells = properize(dup)
print(cells)
z = greatest_bisim(dup, pr)
print(all((w, c) in z for w, c in cells.items()))
