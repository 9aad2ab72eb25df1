"""Turning perfectly wrapped almost uniform resolutions into uniform ones.

Each depth-0 trivial circle W is processed on its own.  If W has red arcs
inside and blue arcs outside, every arc inside W turns blue; in the mirror
case every arc inside turns red.  The circles inside W are then all of one
type, and nothing outside W changes.  Every intermediate resolution is
reclassified, and a step that breaks perfect wrapping raises.
"""

from __future__ import annotations

from .diagram import AnnularDiagram, find_nugatory
from .resolution import Resolution, classify, resolve

__all__ = ["TransformError", "to_uniform", "to_uniform_patchwise", "automatic_patches"]


class TransformError(RuntimeError):
    """A precondition failed, or an intermediate resolution lost perfect wrapping."""


def _circle_key(circ):
    return ("loop", circ.loop) if circ.loop is not None else ("edges", frozenset(circ.edges))


def _find(res: Resolution, key):
    for circ in res.circles:
        if _circle_key(circ) == key:
            return circ
    raise TransformError(f"circle {key} vanished while recolouring another patch")


def _patch_circles(res: Resolution, cid):
    return [cid, *res.circles_inside(cid)]


def _patch_uniform(res, cids):
    return all(res.circles[c].type0 or res.circles[c].type1
               for c in cids if res.circles[c].trivial)


def _patch_almost_uniform(res, cids):
    return all(res.circles[c].type01 or res.circles[c].type10
               for c in cids if res.circles[c].trivial)


def _check_reduced(d):
    removable = [c for c, kind in find_nugatory(d) if kind == "removable"]
    if removable:
        raise TransformError(f"diagram has removable nugatory crossings {removable}")


def _recolor(d, res, key, w, steps):
    """Process one depth-0 circle; returns the new resolution."""
    circ = _find(res, key)
    if circ.type01 and not circ.type10:
        bit = 1
    elif circ.type10 and not circ.type01:
        bit = 0
    elif circ.type01 and circ.type10:
        # an arc-free circle constrains nothing: treat the circles just inside as roots
        children = [_circle_key(c) for c in res.circles
                    if c.trivial and c.depth == circ.depth + 1 and c.id in res.circles_inside(circ.id)]
        for child in children:
            res = _recolor(d, res, child, w, steps)
        return res
    else:
        raise TransformError(f"circle {circ.id} is neither type (0,1) nor type (1,0)")
    inside = res.arcs_inside(circ.id)
    u = list(res.u)
    for c in inside:
        u[c] = bit
    new = resolve(d, u)
    rep = classify(d, new, w)
    if not rep.is_perfectly_wrapped:
        raise TransformError(
            f"recolouring inside circle {sorted(key[1]) if key[0] == 'edges' else key} gave a "
            f"resolution that is not perfectly wrapped (u={new.u}, wrap={rep.wrap_Du}, "
            f"insulation violations at {list(rep.violations)})")
    if steps is not None:
        steps.append(new.u)
    return new


def to_uniform(d: AnnularDiagram, res: Resolution, w: int | None = None,
               steps: list | None = None) -> Resolution:
    """A perfectly wrapped uniform resolution built from ``res``.

    ``res`` must be perfectly wrapped at ``w`` (default: its own wrap) and
    almost uniform, and ``d`` must have no removable nugatory crossings.
    Intermediate bit vectors are appended to ``steps`` when given.
    """
    w = res.wrap if w is None else w
    _check_reduced(d)
    rep = classify(d, res, w)
    if not rep.is_perfectly_wrapped:
        raise TransformError("input resolution is not perfectly wrapped at w")
    if rep.is_uniform:
        return res
    if not rep.is_almost_uniform:
        raise TransformError("input resolution is not almost uniform")
    keys = [_circle_key(c) for c in res.circles if c.trivial and c.depth == 0]
    cur = res
    for key in keys:
        cids = _patch_circles(cur, _find(cur, key).id)
        if _patch_uniform(cur, cids):
            continue
        cur = _recolor(d, cur, key, w, steps)
    final = classify(d, cur, w)
    if not final.is_pwu:
        raise TransformError(f"result u={cur.u} is not perfectly wrapped and uniform")
    return cur


def automatic_patches(res: Resolution) -> list[list[int]]:
    """One patch per depth-0 trivial circle: the circle and everything inside it."""
    return [_patch_circles(res, c.id) for c in res.circles if c.trivial and c.depth == 0]


def to_uniform_patchwise(d: AnnularDiagram, res: Resolution, w: int | None = None,
                         patches=None, steps: list | None = None) -> Resolution:
    """Recolour inside each patch that is almost uniform, leave uniform ones alone.

    ``patches`` is a list of circle-id collections, each holding exactly one
    depth-0 trivial circle and everything inside it; they must be disjoint.
    By default the automatic patches are used.
    """
    w = res.wrap if w is None else w
    _check_reduced(d)
    rep = classify(d, res, w)
    if not rep.is_perfectly_wrapped:
        raise TransformError("input resolution is not perfectly wrapped at w")
    if patches is None:
        patches = automatic_patches(res)
    patches = [sorted(set(p)) for p in patches]
    seen = {}
    for j, p in enumerate(patches):
        for cid in p:
            if cid in seen:
                raise TransformError(f"patches {seen[cid]} and {j} overlap in circle {cid}")
            seen[cid] = j
    roots = []
    for j, p in enumerate(patches):
        tops = [c for c in p if res.circles[c].trivial and res.circles[c].depth == 0]
        if len(tops) != 1:
            raise TransformError(f"patch {j} must contain exactly one depth-0 trivial circle")
        if sorted(_patch_circles(res, tops[0])) != p:
            raise TransformError(f"patch {j} is not a disk around circle {tops[0]} and its interior")
        roots.append(tops[0])
    missing = [c.id for c in res.circles if c.trivial and c.id not in seen]
    if missing:
        raise TransformError(f"trivial circles {missing} lie in no patch")
    todo = []
    for j, (root, p) in enumerate(zip(roots, patches)):
        if _patch_uniform(res, p):
            continue
        if not _patch_almost_uniform(res, p):
            raise TransformError(f"patch {j} is neither uniform nor almost uniform")
        todo.append(_circle_key(res.circles[root]))
    cur = res
    for key in todo:
        cur = _recolor(d, cur, key, w, steps)
    final = classify(d, cur, w)
    if not final.is_pwu:
        raise TransformError(f"result u={cur.u} is not perfectly wrapped and uniform")
    return cur
