import pytest

from akh import families as F
from akh.complex import CubeTooLarge
from akh.detect import (certified_wrap_bounds, class_survives, count_U, find_pwu,
                        ki_gap, null_set, target_set)
from akh.homology import homology
from akh.resolution import resolve

import corpus as C

SIGMA1 = F.braid_closure([1], 2)
TREFOIL = F.braid_closure([1, 1, 1], 2)


def _labels(gens):
    return {"⊗".join(g.labels) for g in gens}


def test_null_set_examples():
    assert _labels(null_set(SIGMA1, resolve(SIGMA1, (0,)), 2)) == {"v+⊗v+"}
    assert null_set(SIGMA1, resolve(SIGMA1, (1,)), 2) == set()
    pair = C.hand("loop_pair")
    assert _labels(null_set(pair, resolve(pair, ()), 1)) == {"v+⊗w+", "v+⊗w-"}


def test_target_set_examples():
    assert "w-" in _labels(target_set(SIGMA1, resolve(SIGMA1, (1,)), 0))
    for w in (0, 2):
        assert target_set(SIGMA1, resolve(SIGMA1, (0,)), w) == set()


def test_earring_generator_is_not_a_target():
    base = F.braid_closure([1], 2)
    d, u = F.add_earrings(base, F.layout_of(base).vertical(), [(0, 0)])
    res = resolve(d, u)
    hit = _labels(target_set(d, res, 2))
    plus = "⊗".join("w+" if c.trivial else "v+" for c in res.circles)
    assert "w+" in plus and plus not in hit


def test_gap_examples():
    assert _labels(ki_gap(SIGMA1, resolve(SIGMA1, (0,)), 2)) == {"v+⊗v+"}
    d = C.hand("sigma1_with_trivial_loop")
    assert len(ki_gap(d, resolve(d, (0,)), 2)) == 2


def test_pwu_scan_agrees_with_gap():
    seen = 0
    for m in C.alternating_members()[:40]:
        d = m.diagram
        w = certified_wrap_bounds(d).lower
        for u in find_pwu(d, w, cross_check=True):
            assert ki_gap(d, resolve(d, u), w)
            seen += 1
    assert seen


def test_closed_forms_refuse_non_perfectly_wrapped():
    with pytest.raises(ValueError):
        null_set(SIGMA1, resolve(SIGMA1, (1,)), 2, mode="closed")
    with pytest.raises(ValueError):
        target_set(SIGMA1, resolve(SIGMA1, (1,)), 2, mode="closed")
    with pytest.raises(ValueError):
        null_set(SIGMA1, resolve(SIGMA1, (0,)), 2, mode="fast")


def test_find_pwu_examples():
    assert find_pwu(SIGMA1, 2) == [(0,)]
    assert find_pwu(C.hand("trivial_loop"), 0) == [()]
    assert (0, 0, 0) in find_pwu(TREFOIL, 2)
    assert count_U(SIGMA1, 2) == 1
    assert count_U(TREFOIL, 2) >= 1
    with pytest.raises(CubeTooLarge):
        find_pwu(TREFOIL, 2, max_crossings=2)


def test_certificates():
    cert = certified_wrap_bounds(SIGMA1, verify_homology=True)
    assert (cert.lower, cert.upper, cert.conclusive, cert.homology_verified) == (2, 2, True, True)
    assert cert.conjecture_status == "verified"
    cert = certified_wrap_bounds(C.hand("nontrivial_loop"))
    assert (cert.lower, cert.upper, cert.conclusive) == (1, 1, True)
    cert = certified_wrap_bounds(TREFOIL, verify_homology=True)
    assert (cert.lower, cert.upper, cert.homology_verified) == (2, 2, True)


def test_certificate_beyond_the_cap_uses_witnesses():
    base = F.braid_closure([1, 1, 1], 2)
    d, u = F.cable(base, 2, F.layout_of(base).vertical())
    blind = certified_wrap_bounds(d, max_crossings=8)
    assert blind.lower is None and not blind.conclusive and not blind.scanned
    assert blind.conjecture_status == "open"
    cert = certified_wrap_bounds(d, witnesses=[u], max_crossings=8)
    assert (cert.lower, cert.upper, cert.conclusive) == (4, 4, True)
    assert cert.as_dict()["witness"] == list(u)


def test_class_survives_for_every_pwu_resolution():
    for m in C.family_members():
        d = m.diagram
        if d.n_crossings > 6:
            continue
        for u in find_pwu(d, m.w):
            assert class_survives(d, u, m.w)
    # a resolution with an empty template has nothing to certify
    assert not class_survives(SIGMA1, (1,), 2)


def test_torsion_only_top_grading_forbids_pwu():
    # the corpus has no such diagram yet; the check activates if one appears
    for m in C.exhaustive_corpus(6):
        d = m.diagram
        w = certified_wrap_bounds(d).upper
        h = homology(d, k=w)
        if h.rank(k=w) == 0 and h.torsion(k=w):
            assert count_U(d, w) == 0
