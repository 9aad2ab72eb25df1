"""
Annular homology of a braid closure
===================================

Close the braid word s1^3 around the puncture, then look at its
triply graded homology.
"""

from akh import families as F
from akh.diagram import diagram_wrap, dump_diagram
from akh.homology import homology

# three positive half twists on two strands
d = F.braid_closure([1, 1, 1], 2)
print(dump_diagram(d))

# a meridional arc from the puncture to infinity crosses the diagram twice
print("wrap(D) =", diagram_wrap(d))

# full table over the integers; the Z/2 sits in k = 0
h = homology(d)
print(h)

# the top k-grading is a single copy of Z, as for every braid closure
print("rank at k = 2:", h.rank(k=2))

# forgetting k, the shifted Euler characteristic is the Jones polynomial (times q + 1/q)
chi = {}
for g in h.groups:
    i, q = h.shifted(g)
    chi[q] = chi.get(q, 0) + (-1) ** i * g.rank
print({q: v for q, v in sorted(chi.items()) if v})
