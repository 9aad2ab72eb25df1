"""Complete resolutions of an annular diagram and the predicates on them.

Bit 0 at a crossing pairs slots (0,1) and (2,3); bit 1 pairs (0,3) and
(1,2).  The arc of a crossing is red when its bit is 0 and blue when it is 1.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Sequence

from .diagram import AnnularDiagram, DiagramError, _UnionFind

__all__ = [
    "Arc",
    "Circle",
    "Resolution",
    "ResolutionReport",
    "Cobordism",
    "resolve",
    "classify",
    "cobordism_type",
    "flip",
    "dump_resolution",
    "load_resolution",
]

INTERIOR = "interior"
EXTERIOR = "exterior"

# slot partner at a crossing for each bit
_PARTNER = (
    (1, 0, 3, 2),
    (3, 2, 1, 0),
)


class Cobordism(enum.Enum):
    WW_W = "W⊔W→W"
    VW_V = "V⊔W→V"
    VV_W = "V⊔V→W"
    W_WW = "W→W⊔W"
    V_VW = "V→V⊔W"
    W_VV = "W→V⊔V"

    @property
    def is_merge(self):
        return self in (Cobordism.WW_W, Cobordism.VW_V, Cobordism.VV_W)


ALLOWED_AS_SOURCE = frozenset({Cobordism.WW_W, Cobordism.VW_V, Cobordism.VV_W, Cobordism.W_VV})
ALLOWED_AS_TARGET = frozenset({Cobordism.W_WW, Cobordism.V_VW, Cobordism.W_VV, Cobordism.VV_W})


@dataclass(frozen=True)
class Arc:
    crossing: int
    color: int
    circles: tuple[int, ...]
    loci: tuple[tuple[int, str], ...]
    region: int

    @property
    def id(self):
        return self.crossing

    def locus(self, circle_id):
        for cid, loc in self.loci:
            if cid == circle_id:
                return loc
        return None


@dataclass(frozen=True)
class Circle:
    id: int
    edges: tuple[int, ...]
    loop: int | None
    trivial: bool
    depth: int
    abutting_arcs: tuple[tuple[int, int, str | None], ...]
    type0: bool
    type1: bool
    type01: bool
    type10: bool
    inner_region: int
    outer_region: int

    @property
    def interior_arcs(self):
        return tuple(a for a, _, loc in self.abutting_arcs if loc == INTERIOR)

    @property
    def exterior_arcs(self):
        return tuple(a for a, _, loc in self.abutting_arcs if loc == EXTERIOR)


@dataclass(frozen=True)
class Resolution:
    """A complete resolution D_u.

    Regions are the complementary components of the circles on the sphere.
    They form a tree with the circles as tree edges, rooted at the region
    holding infinity.  ``region_parent[r]`` is the circle between ``r`` and
    its parent region (``None`` at the root); ``inside[c]`` is the set of
    regions enclosed by circle ``c`` as seen from infinity.
    """
    u: tuple[int, ...]
    circles: tuple[Circle, ...]
    arcs: tuple[Arc, ...]
    n_regions: int
    star_region: int
    infinity_region: int
    region_parent: tuple[int | None, ...]
    inside: tuple[frozenset, ...]
    edge_circle: dict

    @property
    def wrap(self):
        """Number of nontrivial circles."""
        return sum(1 for c in self.circles if not c.trivial)

    @property
    def trivial_circles(self):
        return tuple(c for c in self.circles if c.trivial)

    @property
    def nontrivial_circles(self):
        return tuple(c for c in self.circles if not c.trivial)

    def loop_circle(self, j) -> Circle:
        for c in self.circles:
            if c.loop == j:
                return c
        raise KeyError(j)

    def circle_of_edge(self, e) -> Circle:
        return self.circles[self.edge_circle[e]]

    def arcs_inside(self, circle_id) -> tuple[int, ...]:
        """Crossings whose arc lies inside the circle, at any depth."""
        regions = self.inside[circle_id]
        return tuple(a.crossing for a in self.arcs if a.region in regions)

    def circles_inside(self, circle_id) -> tuple[int, ...]:
        regions = self.inside[circle_id]
        return tuple(c.id for c in self.circles
                     if c.id != circle_id and c.outer_region in regions)

    def __repr__(self):
        bits = "".join(map(str, self.u))
        return f"Resolution(u={bits or '()'}, {len(self.circles)} circles, wrap={self.wrap})"


# -- skeleton ------------------------------------------------------------------

def _skeleton(t, crossings, u):
    """Circle and region union-finds for bit vector ``u``.

    Returns ``(edge_uf, region_uf)``; edges are indexed ``e - 1``.
    """
    euf = _UnionFind(2 * t.n)
    ruf = _UnionFind(t.n_local)
    ruf.parent = list(t.base_parent)
    corner = t.corner
    for c, bit in enumerate(u):
        a, b, cc, dd = crossings[c]
        if bit:
            euf.union(a - 1, dd - 1)
            euf.union(b - 1, cc - 1)
            ruf.union(corner[c][0], corner[c][2])
        else:
            euf.union(a - 1, b - 1)
            euf.union(cc - 1, dd - 1)
            ruf.union(corner[c][1], corner[c][3])
    return euf, ruf


def _trace_cycle(crossings, other, occ, u, start):
    seq = [start]
    c, s = occ[start][1]
    while True:
        p = _PARTNER[u[c]][s]
        e = crossings[c][p]
        if e == start:
            return tuple(seq)
        seq.append(e)
        c, s = other[(c, p)]


def _check_u(d, u):
    u = tuple(int(b) for b in u)
    if len(u) != len(d.crossings):
        raise ValueError(f"bit vector has length {len(u)}, diagram has {len(d.crossings)} crossings")
    if any(b not in (0, 1) for b in u):
        raise ValueError("bit vector entries must be 0 or 1")
    return u


def resolve(d: AnnularDiagram, u: Sequence[int], _topology=None) -> Resolution:
    """Resolve every crossing of ``d`` by the bits of ``u``."""
    t = _topology if _topology is not None else d._topology
    u = _check_u(d, u)
    crossings = d.crossings
    euf, ruf = _skeleton(t, crossings, u)

    # circles: edge classes ordered by minimal edge, then free loops
    classes = {}
    for e in range(1, 2 * t.n + 1):
        classes.setdefault(euf.find(e - 1), e)
    starts = sorted(classes.values())
    edge_circle = {}
    cycles = []
    for cid, e0 in enumerate(starts):
        cyc = _trace_cycle(crossings, t.other, t.occ, u, e0)
        cycles.append(cyc)
        for e in cyc:
            edge_circle[e] = cid
    n_edge_circles = len(cycles)
    n_circles = n_edge_circles + t.n_loops

    # regions, renumbered by smallest local face
    rid = {}
    region_of_local = []
    for f in range(t.n_local):
        r = ruf.find(f)
        if r not in rid:
            rid[r] = len(rid)
        region_of_local.append(rid[r])
    n_regions = len(rid)
    if n_regions != n_circles + 1:
        raise DiagramError(f"resolution is not planar: {n_regions} regions for {n_circles} circles")

    sides = []
    for cyc in cycles:
        s = {region_of_local[t.left[e]] for e in cyc} | {region_of_local[t.right[e]] for e in cyc}
        sides.append(s)
    for j in range(t.n_loops):
        sides.append({region_of_local[t.loop_face(j, "in")], region_of_local[t.loop_face(j, "out")]})
    adj = [[] for _ in range(n_regions)]
    for cid, s in enumerate(sides):
        if len(s) != 2:
            raise DiagramError("circle does not separate two regions")
        a, b = sorted(s)
        adj[a].append((b, cid))
        adj[b].append((a, cid))

    star_region = region_of_local[t.star_local]
    inf_region = region_of_local[t.inf_local]
    region_parent = [None] * n_regions
    parent_region = [None] * n_regions
    order = [inf_region]
    seen = {inf_region}
    for r in order:
        for r2, cid in adj[r]:
            if r2 not in seen:
                seen.add(r2)
                region_parent[r2] = cid
                parent_region[r2] = r
                order.append(r2)
    if len(order) != n_regions:
        raise DiagramError("region graph of resolution is not connected")

    inner = [None] * n_circles
    outer = [None] * n_circles
    for r in range(n_regions):
        cid = region_parent[r]
        if cid is not None:
            inner[cid] = r
            outer[cid] = parent_region[r]

    nontrivial = set()
    r = star_region
    while region_parent[r] is not None:
        nontrivial.add(region_parent[r])
        r = parent_region[r]

    inside = [set() for _ in range(n_circles)]
    for r in reversed(order):
        cid = region_parent[r]
        if cid is None:
            continue
        inside[cid].add(r)
        pr = parent_region[r]
        pc = region_parent[pr]
        if pc is not None:
            inside[pc] |= inside[cid]

    depth = [0] * n_circles
    for cid in range(n_circles):
        r = outer[cid]
        k = 0
        while region_parent[r] is not None:
            if region_parent[r] not in nontrivial:
                k += 1
            r = parent_region[r]
        depth[cid] = k

    arcs = []
    abut = [[] for _ in range(n_circles)]
    for c, bit in enumerate(u):
        tup = crossings[c]
        if bit:
            region = region_of_local[t.corner[c][0]]
            pair = (edge_circle[tup[0]], edge_circle[tup[1]])
        else:
            region = region_of_local[t.corner[c][1]]
            pair = (edge_circle[tup[0]], edge_circle[tup[2]])
        circs = tuple(sorted(set(pair)))
        loci = []
        for cid in circs:
            loc = None
            if cid not in nontrivial:
                loc = INTERIOR if region == inner[cid] else EXTERIOR
                loci.append((cid, loc))
            abut[cid].append((c, bit, loc))
        arcs.append(Arc(c, bit, circs, tuple(loci), region))

    circles = []
    for cid in range(n_circles):
        triv = cid not in nontrivial
        ab = tuple(abut[cid])
        colors = [col for _, col, _ in ab]
        type0 = all(col == 0 for col in colors)
        type1 = all(col == 1 for col in colors)
        if triv:
            type01 = all((col == 0) == (loc == INTERIOR) for _, col, loc in ab)
            type10 = all((col == 1) == (loc == INTERIOR) for _, col, loc in ab)
        else:
            type01 = type10 = not ab
        if cid < n_edge_circles:
            edges, loop = cycles[cid], None
        else:
            edges, loop = (), cid - n_edge_circles
        circles.append(Circle(cid, edges, loop, triv, depth[cid], ab, type0, type1, type01,
                              type10, inner[cid], outer[cid]))

    return Resolution(u, tuple(circles), tuple(arcs), n_regions, star_region, inf_region,
                      tuple(region_parent), tuple(frozenset(s) for s in inside), edge_circle)


# -- local moves ---------------------------------------------------------------

def flip(u: Sequence[int], i: int) -> tuple[int, ...]:
    u = list(u)
    u[i] ^= 1
    return tuple(u)


def _arc_circle_kinds(res: Resolution, i):
    arc = res.arcs[i]
    return [res.circles[c].trivial for c in arc.circles]


def _cobordism_from(res_two: Resolution, i) -> Cobordism:
    """Type of the move between a resolution whose arc ``i`` touches two circles
    and one where it touches one, read as a merge from ``res_two``."""
    kinds = _arc_circle_kinds(res_two, i)
    ntriv = sum(kinds)
    if ntriv == 2:
        return Cobordism.WW_W
    if ntriv == 1:
        return Cobordism.VW_V
    return Cobordism.VV_W


_SPLIT_OF = {Cobordism.WW_W: Cobordism.W_WW, Cobordism.VW_V: Cobordism.V_VW,
             Cobordism.VV_W: Cobordism.W_VV}


def cobordism_type(d: AnnularDiagram, u: Sequence[int], i: int,
                   res: Resolution | None = None) -> tuple[Cobordism, str]:
    """Cobordism on the cube edge through ``u`` at crossing ``i``.

    Returns ``(type, role)`` where role is ``'source'`` when bit ``i`` of
    ``u`` is 0 and ``'target'`` otherwise.  The type is read in the cube's
    direction, from the 0-side to the 1-side.
    """
    u = _check_u(d, u)
    if not 0 <= i < len(u):
        raise IndexError(f"crossing {i} does not exist")
    if res is None:
        res = resolve(d, u)
    role = "target" if u[i] else "source"
    if len(res.arcs[i].circles) == 2:
        merge_side = res
        other = None
    else:
        other = resolve(d, flip(u, i))
        merge_side = other
    kind = _cobordism_from(merge_side, i)
    # the 0-side with two arc circles merges; otherwise the move is the reverse split
    source_has_two = (merge_side is res) == (role == "source")
    if source_has_two:
        return kind, role
    return _SPLIT_OF[kind], role


# -- classification ------------------------------------------------------------

@dataclass(frozen=True)
class ResolutionReport:
    u: tuple[int, ...]
    w: int
    wrap_Du: int
    is_exactly_wrapped: bool
    is_insulated: bool
    is_uniform: bool
    is_almost_uniform: bool
    n0: int
    n1: int
    n2: int
    cobordisms: tuple[tuple[str, str], ...]
    violations: tuple[int, ...]

    @property
    def is_perfectly_wrapped(self):
        return self.is_exactly_wrapped and self.is_insulated

    @property
    def is_pwu(self):
        return self.is_perfectly_wrapped and self.is_uniform

    def as_dict(self):
        return {
            "u": list(self.u),
            "w": self.w,
            "wrap_Du": self.wrap_Du,
            "exactly_wrapped": self.is_exactly_wrapped,
            "insulated": self.is_insulated,
            "perfectly_wrapped": self.is_perfectly_wrapped,
            "uniform": self.is_uniform,
            "almost_uniform": self.is_almost_uniform,
            "pwu": self.is_pwu,
            "n0": self.n0,
            "n1": self.n1,
            "n2": self.n2,
            "cobordisms": [list(c) for c in self.cobordisms],
            "insulation_violations": list(self.violations),
        }


def classify(d: AnnularDiagram, res: Resolution, w: int) -> ResolutionReport:
    """Evaluate wrapping, insulation and uniformity predicates at ``w``."""
    if w < 0:
        raise ValueError("w must be nonnegative")
    cobs = []
    bad = []
    for i in range(len(res.u)):
        kind, role = cobordism_type(d, res.u, i, res=res)
        allowed = ALLOWED_AS_SOURCE if role == "source" else ALLOWED_AS_TARGET
        if kind not in allowed:
            bad.append(i)
        cobs.append((kind.value, role))
    triv = res.trivial_circles
    n0 = sum(1 for c in triv if c.type0 and not c.type1)
    n1 = sum(1 for c in triv if c.type1 and not c.type0)
    n2 = sum(1 for c in triv if c.type0 and c.type1)
    return ResolutionReport(
        u=res.u,
        w=w,
        wrap_Du=res.wrap,
        is_exactly_wrapped=res.wrap == w,
        is_insulated=not bad,
        is_uniform=all(c.type0 or c.type1 for c in triv),
        is_almost_uniform=all(c.type01 or c.type10 for c in triv),
        n0=n0,
        n1=n1,
        n2=n2,
        cobordisms=tuple(cobs),
        violations=tuple(bad),
    )


# -- serialization ---------------------------------------------------------------

def resolution_to_json(res: Resolution) -> dict:
    circles = []
    for c in res.circles:
        rec = {
            "id": c.id,
            "edges": list(c.edges),
            "trivial": c.trivial,
            "depth": c.depth,
            "type0": c.type0,
            "type1": c.type1,
            "type01": c.type01,
            "type10": c.type10,
            "arcs": [{"arc": a, "color": col, "locus": loc} for a, col, loc in c.abutting_arcs],
        }
        if c.loop is not None:
            rec["free_loop"] = c.loop
        circles.append(rec)
    arcs = [{"crossing": a.crossing, "color": a.color, "circles": list(a.circles),
             "loci": {str(cid): loc for cid, loc in a.loci}} for a in res.arcs]
    return {"u": list(res.u), "wrap": res.wrap, "circles": circles, "arcs": arcs}


def dump_resolution(res: Resolution) -> str:
    return json.dumps(resolution_to_json(res), sort_keys=True, indent=2) + "\n"


def load_resolution(d: AnnularDiagram, text: str | dict) -> Resolution:
    """Rebuild a resolution from its dump (only ``u`` is authoritative)."""
    obj = json.loads(text) if isinstance(text, (str, bytes)) else text
    if isinstance(obj, list):
        u = obj
    elif isinstance(obj, dict) and "u" in obj:
        u = obj["u"]
    else:
        raise ValueError("resolution file needs a 'u' bit vector")
    res = resolve(d, u)
    if isinstance(obj, dict) and "circles" in obj:
        if len(obj["circles"]) != len(res.circles):
            raise ValueError("resolution file disagrees with the diagram on the circle count")
    return res
