"""
Witness families
================

Chains, belts, cables and earrings come with a known perfectly wrapped
uniform resolution.  The witness settles the wrapping number even when
the cube is too large to scan.
"""

from akh import families as F
from akh.detect import certified_wrap_bounds, count_U
from akh.homology import homology
from akh.resolution import classify, resolve

# two belts around a 2-strand braid: one witness per choice of belt smoothing
d, ws = F.with_belts([("belt", 0, 1), [1], ("belt", 1, 1)], 2)
print(d, len(ws), [classify(d, resolve(d, u), 2).is_pwu for u in ws])
print("PWU count:", count_U(d, 2), " rank at k = 2:", homology(d, k=2).rank(k=2))

# a clasp inserted into the trivial 2-braid
d, u = F.with_chains([], 2, [(0, 1, 2, -1)])
print(d, u, classify(d, resolve(d, u), 2).is_pwu)

# the 2-cable of the trefoil closure has 12 crossings and wraps 4 times
base = F.braid_closure([1, 1, 1], 2)
d, u = F.cable(base, 2, F.layout_of(base).vertical())
print(certified_wrap_bounds(d, max_crossings=8).as_dict())
print(certified_wrap_bounds(d, witnesses=[u], max_crossings=8).as_dict())

# an earring hung on the strand of the sigma_1 closure
base = F.braid_closure([1], 2)
d, u = F.add_earrings(base, F.layout_of(base).vertical(), [(0, 0)])
print(d, classify(d, resolve(d, u), 2).as_dict()["pwu"])
