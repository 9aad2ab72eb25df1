"""
Certifying the wrapping number from one resolution
==================================================

A perfectly wrapped uniform resolution carries a generator that survives
to homology at the top k-grading, so its circle count bounds the
wrapping number of the link from below.
"""

from akh import families as F
from akh.detect import certified_wrap_bounds, find_pwu, gap_template, ki_gap
from akh.resolution import classify, resolve

d = F.braid_closure([1, 1, 1], 2)

# smoothing every crossing top-to-bottom leaves two parallel cores
res = resolve(d, (0, 0, 0))
print(res)
print(classify(d, res, 2).as_dict())

# generators at k = 2 that no differential touches
gap = ki_gap(d, res, 2)
print(sorted(str(g) for g in gap))
print(gap == gap_template(res))

# every such resolution of the diagram
print(find_pwu(d, 2))

# lower bound from the cube scan, upper bound from the diagram itself
cert = certified_wrap_bounds(d, verify_homology=True)
print(cert.as_dict())
