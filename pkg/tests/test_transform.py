import itertools

import pytest

from akh import families as F
from akh.detect import find_pwu
from akh.diagram import diagram_wrap
from akh.resolution import classify, resolve
from akh.transform import TransformError, automatic_patches, to_uniform, to_uniform_patchwise

import corpus as C

NESTED = C.hand("nested_red")
PATCHY = C.hand("patchy")


def _exterior_kept(before, after):
    inside = set()
    for c in before.trivial_circles:
        if c.depth == 0:
            inside |= set(before.arcs_inside(c.id))
    return all(after.u[i] == b for i, b in enumerate(before.u) if i not in inside)


def test_uniform_input_is_returned_unchanged():
    d = F.braid_closure([1], 2)
    res = resolve(d, (0,))
    assert to_uniform(d, res) is res


def test_trivial_circle_with_interior_red_arcs():
    res = resolve(NESTED, (0, 0, 1, 1))
    rep = classify(NESTED, res, 0)
    assert rep.is_perfectly_wrapped and rep.is_almost_uniform and not rep.is_uniform
    assert any(col == 0 and loc == "interior"
               for c in res.trivial_circles for _, col, loc in c.abutting_arcs)
    steps = []
    out = to_uniform(NESTED, res, w=0, steps=steps)
    assert classify(NESTED, out, 0).is_pwu
    assert out.u in find_pwu(NESTED, 0)
    assert steps and steps[-1] == out.u
    for u in steps:
        step = classify(NESTED, resolve(NESTED, u), 0)
        assert step.is_perfectly_wrapped and step.wrap_Du == res.wrap
    assert _exterior_kept(res, out)


def test_patchwise_recolouring_is_confined():
    res = resolve(PATCHY, (1, 1, 0, 0, 0, 0))
    patches = automatic_patches(res)
    uniform = [all(res.circles[c].type0 or res.circles[c].type1 for c in p) for p in patches]
    assert uniform.count(False) == 1 and uniform.count(True) >= 1
    out = to_uniform_patchwise(PATCHY, res, w=1)
    assert classify(PATCHY, out, 1).is_pwu
    assert out.u == to_uniform(PATCHY, res, w=1).u
    # arcs of the uniform patches keep their colour
    for p, ok in zip(patches, uniform):
        if ok:
            for cid in p:
                for a in res.arcs_inside(cid):
                    assert out.u[a] == res.u[a]


def test_all_uniform_patches_are_identity():
    d = F.braid_closure([1, 1, 1], 2)
    res = resolve(d, (0, 0, 0))
    assert to_uniform_patchwise(d, res).u == res.u


def test_patch_refusals():
    res = resolve(PATCHY, (1, 1, 0, 0, 0, 0))
    patches = automatic_patches(res)
    with pytest.raises(TransformError, match="overlap"):
        to_uniform_patchwise(PATCHY, res, w=1, patches=patches + [patches[0]])
    with pytest.raises(TransformError, match="lie in no patch"):
        to_uniform_patchwise(PATCHY, res, w=1, patches=patches[1:])
    with pytest.raises(TransformError, match="exactly one"):
        merged = [sorted(set(patches[0]) | set(patches[1]))] + patches[2:]
        to_uniform_patchwise(PATCHY, res, w=1, patches=merged)


def test_precondition_refusals():
    d = C.hand("kinked_core")
    with pytest.raises(TransformError, match="nugatory"):
        to_uniform(d, resolve(d, (0,)))
    with pytest.raises(TransformError, match="not perfectly wrapped"):
        to_uniform(NESTED, resolve(NESTED, (0, 0, 1, 1)), w=2)


@pytest.mark.parametrize("m", C.alternating_members(6), ids=lambda m: m.name)
def test_every_perfectly_wrapped_resolution_uniformizes(m):
    d = m.diagram
    w = diagram_wrap(d)
    for u in itertools.product((0, 1), repeat=d.n_crossings):
        res = resolve(d, u)
        if not classify(d, res, w).is_perfectly_wrapped:
            continue
        out = to_uniform(d, res, w)
        assert classify(d, out, w).is_pwu
        assert _exterior_kept(res, out)
