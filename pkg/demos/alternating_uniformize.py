"""
Recolouring an alternating resolution
=====================================

In a reduced alternating diagram every trivial circle has one colour
inside and the other outside.  Flipping the arcs inside one circle at a
time reaches a uniform resolution without losing perfect wrapping.
"""

from akh.diagram import parse_diagram
from akh.resolution import classify, resolve
from akh.transform import to_uniform

d = parse_diagram({
    "crossings": [[1, 4, 2, 3], [4, 1, 5, 2], [7, 5, 8, 6], [6, 8, 3, 7]],
    "star": {"edge": 1, "side": "R"},
    "infinity": {"edge": 1, "side": "R"},
})

# the puncture shares a face with infinity, so the wrapping number is 0
res = resolve(d, (0, 0, 1, 1))
rep = classify(d, res, 0)
print(rep.is_perfectly_wrapped, rep.is_almost_uniform, rep.is_uniform)

# one trivial circle has red arcs inside and blue outside
for c in res.trivial_circles:
    print(c.id, c.abutting_arcs, "type01" if c.type01 else "type10")

steps = []
out = to_uniform(d, res, w=0, steps=steps)
for u in steps:
    print(u, classify(d, resolve(d, u), 0).is_perfectly_wrapped)
print("uniform:", classify(d, out, 0).is_pwu)
