"""Shared test corpus: family members, hand-encoded diagrams, alternating diagrams."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from akh import families as F
from akh.diagram import AnnularDiagram, parse_diagram


@dataclass
class Member:
    name: str
    diagram: AnnularDiagram
    witnesses: list = field(default_factory=list)
    w: int | None = None  # wrap the witnesses are claimed at


HAND = {
    "nontrivial_loop": {
        "crossings": [],
        "free_loops": [{"parent": None, "trivial": False}],
        "star": {"loop_face": {"loop": 0, "side": "in"}},
        "infinity": {"loop_face": {"loop": 0, "side": "out"}},
    },
    "trivial_loop": {
        "crossings": [],
        "free_loops": [{"parent": None, "trivial": True}],
        "star": {"loop_face": {"loop": 0, "side": "out"}},
        "infinity": {"loop_face": {"loop": 0, "side": "out"}},
    },
    "loop_pair": {
        "crossings": [],
        "free_loops": [{"parent": None, "trivial": False},
                       {"parent": {"loop_face": {"loop": 0, "side": "out"}}, "trivial": True}],
        "star": {"loop_face": {"loop": 0, "side": "in"}},
        "infinity": {"loop_face": {"loop": 0, "side": "out"}},
    },
    "kinked_core": {
        "crossings": [[1, 1, 2, 2]],
        "star": {"edge": 1, "side": "L"},
        "infinity": {"edge": 1, "side": "R"},
    },
    "sigma1_kinked": {
        "crossings": [[1, 1, 2, 4], [2, 4, 3, 3]],
        "star": {"edge": 4, "side": "L"},
        "infinity": {"edge": 1, "side": "R"},
    },
    "sigma1_with_trivial_loop": {
        "crossings": [[1, 1, 2, 2]],
        "free_loops": [{"parent": {"edge": 1, "side": "R"}, "trivial": True}],
        "star": {"edge": 2, "side": "L"},
        "infinity": {"edge": 1, "side": "R"},
    },
    "trefoil_unwrapped": {
        "crossings": [[1, 5, 2, 4], [5, 3, 6, 2], [3, 1, 4, 6]],
        "star": {"edge": 1, "side": "R"},
        "infinity": {"edge": 1, "side": "R"},
    },
    # alternating; at u = 0011 a trivial circle has red arcs inside
    "nested_red": {
        "crossings": [[1, 4, 2, 3], [4, 1, 5, 2], [7, 5, 8, 6], [6, 8, 3, 7]],
        "star": {"edge": 1, "side": "R"},
        "infinity": {"edge": 1, "side": "R"},
    },
    # alternating; at u = 110000 one patch needs recolouring and two are uniform
    "patchy": {
        "crossings": [[1, 4, 2, 3], [4, 1, 5, 2], [9, 5, 10, 6], [6, 10, 7, 11], [11, 7, 12, 8],
                      [8, 12, 3, 9]],
        "star": {"edge": 1, "side": "L"},
        "infinity": {"edge": 8, "side": "R"},
    },
}


def hand(name) -> AnnularDiagram:
    return parse_diagram(HAND[name])


def _braid(word, n):
    d = F.braid_closure(word, n)
    return Member(f"braid{n}:{word}", d, [F.layout_of(d).vertical()], n)


@lru_cache(maxsize=None)
def family_members() -> tuple[Member, ...]:
    out = []
    for word, n in [([1], 2), ([1, 1], 2), ([1, 1, 1], 2), ([1, -1], 2), ([1] * 5, 2),
                    ([1, 2], 3), ([1, -2], 3), ([1, -2, 1, -2], 3), ([1, 1, 2, -1, 2], 3),
                    ([1, 2] * 3, 3), ([1, -2, 3], 4), ([], 3), ([-1, -1, 2, 2, -1], 3),
                    ([1, -2] * 5, 3), ([1, 2, 3] * 3, 4), ([1] * 9, 2)]:
        out.append(_braid(word, n))
    for word, n, ins in [([], 2, [(0, 1, 2, -1)]), ([1, 1], 2, [(1, 1, 3, -1)]),
                         ([2], 4, [(0, 1, 2, 1), (1, 3, 3, -1)]),
                         ([1, -2, 1], 3, [(1, 1, 3, 1), (3, 2, 4, -1)])]:
        d, u = F.with_chains(word, n, ins)
        out.append(Member(f"chains{n}:{word}:{ins}", d, [u], n))
    for blocks, n in [([("belt", 0, 2)], 2), ([("belt", 0, 2), [1]], 2),
                      ([("belt", 0, 1), [1], ("belt", 1, 1)], 2), ([[1, -2], ("belt", 1, 2)], 3),
                      ([("belt", 0, 2), ("belt", 0, 2), [1, 1]], 2)]:
        d, ws = F.with_belts(blocks, n)
        out.append(Member(f"belts{n}:{blocks}", d, ws, n))
    for word, n in [([1], 2), ([1, 1], 2)]:
        base = F.braid_closure(word, n)
        d, u = F.cable(base, 2, F.layout_of(base).vertical())
        out.append(Member(f"cable2:{word}", d, [u], 2 * n))
    for word, n, sites in [([], 1, [(0, 0)]), ([1], 2, [(0, 0)]), ([1, 1, 1], 2, [(1, 0), (3, 1)]),
                             ([1, 2] * 3, 3, [(0, 0), (2, 2), (5, 1)])]:
        base = F.braid_closure(word, n)
        d, u = F.add_earrings(base, F.layout_of(base).vertical(), sites)
        out.append(Member(f"earrings:{word}:{sites}", d, [u], n))
    return tuple(out)


@lru_cache(maxsize=None)
def hand_members() -> tuple[Member, ...]:
    return tuple(Member(f"hand:{k}", hand(k)) for k in HAND)


@lru_cache(maxsize=None)
def alternating_members(max_crossings=6) -> tuple[Member, ...]:
    return tuple(Member(f"alt{j}", d) for j, d in enumerate(F.alternating_corpus(max_crossings)))


def exhaustive_corpus(max_crossings=10) -> list[Member]:
    """Every corpus diagram with at most ``max_crossings`` crossings."""
    seen = set()
    out = []
    for m in family_members() + hand_members() + alternating_members():
        if len(m.diagram.crossings) <= max_crossings and m.diagram not in seen:
            seen.add(m.diagram)
            out.append(m)
    return out
