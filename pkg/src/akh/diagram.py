"""
Annular link diagrams
=====================

An annular diagram is a planar-diagram (PD) code together with two marked
faces: the puncture ``*`` and the point at infinity.  Each crossing is a
4-tuple of edge ids listed counterclockwise, starting at the incoming
under-strand.  Crossingless components are stored separately as
:class:`FreeLoop` records, placed inside a face of the rest of the diagram.

Everything downstream (resolutions, nesting, interior/exterior arcs) is
computed from face combinatorics, never from coordinates.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Union

__all__ = [
    "DiagramError",
    "EdgeSide",
    "LoopSide",
    "FreeLoop",
    "AnnularDiagram",
    "FaceSet",
    "parse_diagram",
    "dump_diagram",
    "trace_faces",
    "diagram_wrap",
    "find_nugatory",
    "mirror",
    "canonical",
    "is_alternating",
    "relocate_markers",
]


class DiagramError(ValueError):
    """Raised for malformed or inconsistent diagram input.

    ``location`` names the offending part of the input (a JSON path-like
    string) when one is known.
    """

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class EdgeSide:
    """The face on side ``'L'`` or ``'R'`` of an edge, relative to its orientation."""
    edge: int
    side: str


@dataclass(frozen=True)
class LoopSide:
    """One of the two faces of a free loop, ``'in'`` or ``'out'``."""
    loop: int
    side: str


FaceRef = Union[EdgeSide, LoopSide]


@dataclass(frozen=True)
class FreeLoop:
    """A crossingless circle.

    ``parent`` is the face it sits in (``None`` only for the root of a
    crossingless diagram) and ``attach`` says which of its own sides faces
    that parent.  ``trivial`` is optional; when given it is checked against
    the marker placement.
    """
    trivial: bool | None = None
    parent: FaceRef | None = None
    attach: str = "out"


@dataclass(frozen=True)
class AnnularDiagram:
    crossings: tuple[tuple[int, int, int, int], ...]
    free_loops: tuple[FreeLoop, ...]
    star: FaceRef
    infinity: FaceRef

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(tuple(int(e) for e in c) for c in self.crossings))
        object.__setattr__(self, "free_loops", tuple(self.free_loops))
        self._topology  # validate eagerly

    @property
    def n_crossings(self):
        return len(self.crossings)

    @property
    def n_edges(self):
        return 2 * len(self.crossings)

    @cached_property
    def _topology(self) -> "_Topology":
        return _Topology(self)

    def crossing_signs(self) -> tuple[int, ...]:
        """Sign (+1/-1) of each crossing under the tuple-induced orientation."""
        return self._topology.signs

    @property
    def n_plus(self):
        return sum(1 for s in self.crossing_signs() if s > 0)

    @property
    def n_minus(self):
        return sum(1 for s in self.crossing_signs() if s < 0)

    def __repr__(self):
        return (f"AnnularDiagram({len(self.crossings)} crossings, "
                f"{len(self.free_loops)} free loops)")


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


class _Topology:
    """Precomputed combinatorics of a diagram (faces, orientation, placements).

    Local face ids: block faces ``0..F-1`` followed by two faces per free
    loop (``F + 2j`` is the inside, ``F + 2j + 1`` the outside).
    """

    def __init__(self, d: AnnularDiagram):
        n = len(d.crossings)
        self.n = n
        self.n_loops = len(d.free_loops)
        occ: dict[int, list[tuple[int, int]]] = {}
        for c, tup in enumerate(d.crossings):
            if len(tup) != 4:
                raise DiagramError("crossing must list exactly 4 edges", f"crossings[{c}]")
            for s, e in enumerate(tup):
                if e < 1:
                    raise DiagramError(f"edge id {e} is not a positive integer", f"crossings[{c}]")
                occ.setdefault(e, []).append((c, s))
        for e, where in sorted(occ.items()):
            if len(where) != 2:
                c = where[0][0]
                raise DiagramError(
                    f"edge multiplicity: edge {e} appears {len(where)} time(s), expected 2",
                    f"crossings[{c}]")
        if sorted(occ) != list(range(1, 2 * n + 1)):
            raise DiagramError(f"edge ids must be exactly 1..{2 * n}", "crossings")
        self.occ = occ
        other = {}
        for e, (a, b) in occ.items():
            other[a] = b
            other[b] = a
        self.other = other

        self._orient(d)
        self._check_connected(d)
        self._trace(d)
        self._place(d)

    # -- orientation -------------------------------------------------------
    def _orient(self, d):
        n = self.n
        head: dict[int, tuple[int, int]] = {}
        tail: dict[int, tuple[int, int]] = {}
        seen_slot = set()
        components = []

        def walk(start):
            comp = []
            pos = start
            while True:
                if pos in seen_slot:
                    raise DiagramError("inconsistent orientation along a component",
                                       f"crossings[{pos[0]}]")
                c, s = pos
                out = (c, (s + 2) % 4)
                seen_slot.add(pos)
                seen_slot.add(out)
                e = d.crossings[c][out[1]]
                nxt = self.other[out]
                tail[e] = out
                head[e] = nxt
                comp.append(e)
                pos = nxt
                if pos == start:
                    return comp
                if pos[1] == 2:
                    raise DiagramError(f"edge {e} enters an under-strand at its outgoing slot",
                                       f"crossings[{pos[0]}]")

        for c in range(n):
            if (c, 0) not in seen_slot:
                components.append(walk((c, 0)))
        for c in range(n):
            if (c, 1) not in seen_slot:
                components.append(walk((c, 1)))
        self.head = head
        self.tail = tail
        self.components = components
        # over strand entering at slot 3 makes a positive crossing
        self.signs = tuple(1 if self.over_entry_slot(d, c) == 3 else -1 for c in range(n))

    def over_entry_slot(self, d, c):
        e = d.crossings[c][3]
        return 3 if self.head[e] == (c, 3) else 1

    def _check_connected(self, d):
        n = self.n
        if n == 0:
            return
        adj = [set() for _ in range(n)]
        for e, ((c1, _), (c2, _)) in self.occ.items():
            adj[c1].add(c2)
            adj[c2].add(c1)
        seen = {0}
        todo = [0]
        while todo:
            c = todo.pop()
            for c2 in adj[c]:
                if c2 not in seen:
                    seen.add(c2)
                    todo.append(c2)
        if len(seen) != n:
            raise DiagramError("crossing graph is disconnected; split crossing components "
                               "are not supported (use free loops for crossingless parts)",
                               "crossings")

    # -- faces -------------------------------------------------------------
    def _trace(self, d):
        n = self.n
        dart_face = {}
        faces = []
        for c in range(n):
            for s in range(4):
                if (c, s) in dart_face:
                    continue
                fid = len(faces)
                orbit = []
                pos = (c, s)
                while pos not in dart_face:
                    dart_face[pos] = fid
                    orbit.append(pos)
                    c2, s2 = self.other[pos]
                    pos = (c2, (s2 - 1) % 4)
                faces.append(orbit)
        if n and len(faces) != n + 2:
            raise DiagramError(
                f"rotation system is not planar: V - E + F = {n - 2 * n + len(faces)}, expected 2",
                "crossings")
        self.block_faces = faces
        self.dart_face = dart_face
        self.F = len(faces)
        self.corner = [tuple(dart_face[(c, s)] for s in range(4)) for c in range(n)]
        self.left = {e: dart_face[self.tail[e]] for e in self.occ}
        self.right = {e: dart_face[self.head[e]] for e in self.occ}

    def local_face(self, ref: FaceRef, where="") -> int:
        if isinstance(ref, EdgeSide):
            if ref.edge not in self.occ:
                raise DiagramError(f"unknown edge {ref.edge}", where)
            if ref.side == "L":
                return self.left[ref.edge]
            if ref.side == "R":
                return self.right[ref.edge]
            raise DiagramError(f"edge side must be 'L' or 'R', got {ref.side!r}", where)
        if isinstance(ref, LoopSide):
            if not 0 <= ref.loop < self.n_loops:
                raise DiagramError(f"unknown free loop {ref.loop}", where)
            if ref.side not in ("in", "out"):
                raise DiagramError(f"loop side must be 'in' or 'out', got {ref.side!r}", where)
            return self.F + 2 * ref.loop + (0 if ref.side == "in" else 1)
        raise DiagramError(f"unresolvable face reference {ref!r}", where)

    def loop_face(self, j, side):
        return self.F + 2 * j + (0 if side == "in" else 1)

    def _place(self, d):
        nl = self.n_loops
        self.n_local = self.F + 2 * nl
        uf = _UnionFind(self.n_local)
        roots = []
        loop_parent = {}
        for j, loop in enumerate(d.free_loops):
            where = f"free_loops[{j}]"
            if loop.attach not in ("in", "out"):
                raise DiagramError("attach must be 'in' or 'out'", where)
            if loop.parent is None:
                roots.append(j)
                continue
            pf = self.local_face(loop.parent, where + ".parent")
            if isinstance(loop.parent, LoopSide):
                loop_parent[j] = loop.parent.loop
            uf.union(self.loop_face(j, loop.attach), pf)
        if self.n and roots:
            raise DiagramError("free loop needs a parent face when crossings are present",
                               f"free_loops[{roots[0]}]")
        if not self.n:
            if nl == 0:
                raise DiagramError("empty diagram", "crossings")
            if len(roots) != 1:
                raise DiagramError("crossingless diagram needs exactly one free loop without parent",
                                   "free_loops")
        for j in loop_parent:
            seen = {j}
            k = j
            while k in loop_parent:
                k = loop_parent[k]
                if k in seen:
                    raise DiagramError("free-loop nesting references contain a cycle",
                                       f"free_loops[{j}]")
                seen.add(k)
        self.uf = uf
        self.base_parent = list(uf.parent)
        self.star_local = self.local_face(d.star, "star")
        self.inf_local = self.local_face(d.infinity, "infinity")
        classes = {}
        for f in range(self.n_local):
            classes.setdefault(uf.find(f), []).append(f)
        self.n_global = len(classes)
        expected = (self.F if self.n else 0) + nl + (0 if self.n else 1)
        if self.n_global != expected:
            raise DiagramError("free-loop placements do not form a nesting forest", "free_loops")
        order = sorted(classes, key=lambda r: min(classes[r]))
        self.global_of = {}
        for gi, r in enumerate(order):
            for f in classes[r]:
                self.global_of[f] = gi
        self.global_members = [sorted(classes[r]) for r in order]
        # triviality flags of free loops, checked against marker placement
        from .resolution import resolve  # local import: resolution depends on diagram
        if nl:
            res = resolve(d, (0,) * self.n, _topology=self)
            for j, loop in enumerate(d.free_loops):
                if loop.trivial is None:
                    continue
                circ = res.loop_circle(j)
                if circ.trivial != loop.trivial:
                    raise DiagramError(
                        f"free loop declared trivial={loop.trivial} but the marker placement "
                        f"makes it {'trivial' if circ.trivial else 'nontrivial'}",
                        f"free_loops[{j}]")

    def dual_adjacency(self):
        """Global-face adjacency: list of (face, face, label) for every diagram edge and loop."""
        g = self.global_of
        out = []
        for e in sorted(self.occ):
            out.append((g[self.left[e]], g[self.right[e]], ("edge", e)))
        for j in range(self.n_loops):
            out.append((g[self.loop_face(j, "in")], g[self.loop_face(j, "out")], ("loop", j)))
        return out


# -- faces -------------------------------------------------------------------

@dataclass(frozen=True)
class FaceSet:
    """Faces of a diagram on the sphere, after free-loop placements.

    Each face is a tuple of boundary items ``('edge', e, side)`` or
    ``('loop', j, side)``; ``adjacency[i]`` lists the edge ids on face ``i``
    with multiplicity.
    """
    faces: tuple[tuple[tuple, ...], ...]
    star_face_index: int
    infinity_face_index: int
    adjacency: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.faces)


def trace_faces(d: AnnularDiagram) -> FaceSet:
    t = d._topology
    items: list[list[tuple]] = [[] for _ in range(t.n_global)]
    adjacency: list[list[int]] = [[] for _ in range(t.n_global)]
    for e in sorted(t.occ):
        for side, f in (("L", t.left[e]), ("R", t.right[e])):
            gi = t.global_of[f]
            items[gi].append(("edge", e, side))
            adjacency[gi].append(e)
    for j in range(t.n_loops):
        for side in ("in", "out"):
            items[t.global_of[t.loop_face(j, side)]].append(("loop", j, side))
    return FaceSet(
        faces=tuple(tuple(x) for x in items),
        star_face_index=t.global_of[t.star_local],
        infinity_face_index=t.global_of[t.inf_local],
        adjacency=tuple(tuple(sorted(a)) for a in adjacency),
    )


def _dual_distances(t: _Topology, source: int) -> list[int]:
    adj: list[list[int]] = [[] for _ in range(t.n_global)]
    for a, b, _ in t.dual_adjacency():
        adj[a].append(b)
        adj[b].append(a)
    dist = [-1] * t.n_global
    dist[source] = 0
    queue = deque([source])
    while queue:
        f = queue.popleft()
        for g in adj[f]:
            if dist[g] < 0:
                dist[g] = dist[f] + 1
                queue.append(g)
    return dist


def diagram_wrap(d: AnnularDiagram) -> int:
    """Minimal number of diagram strands met by an arc from ``*`` to infinity."""
    t = d._topology
    dist = _dual_distances(t, t.global_of[t.star_local])
    return dist[t.global_of[t.inf_local]]


# -- nugatory crossings -------------------------------------------------------

def find_nugatory(d: AnnularDiagram) -> list[tuple[int, str]]:
    """Nugatory crossings, each tagged ``'removable'`` or ``'essential'``.

    A crossing is nugatory when two opposite corners lie in the same face.
    The separating curve runs through that face and the crossing; the
    crossing is essential exactly when ``*`` and infinity fall strictly on
    opposite sides of every such curve.
    """
    t = d._topology
    out = []
    for c in range(t.n):
        corners = t.corner[c]
        if corners[0] == corners[2]:
            shared, side_a = corners[0], (1, 2)
        elif corners[1] == corners[3]:
            shared, side_a = corners[1], (2, 3)
        else:
            continue
        faces_a = _faces_beyond(d, t, c, side_a) - {shared}
        sides = []
        for local in (t.star_local, t.inf_local):
            bf = _anchor_block_face(t, t.global_of[local])
            if bf == shared:
                sides.append("F")
            else:
                sides.append("A" if bf in faces_a else "B")
        essential = sides[0] != sides[1] and "F" not in sides
        out.append((c, "essential" if essential else "removable"))
    return out


def _faces_beyond(d, t, c, slots):
    edges = {d.crossings[c][s] for s in slots}
    todo = list(edges)
    while todo:
        e = todo.pop()
        for c2, _ in t.occ[e]:
            if c2 == c:
                continue
            for e2 in d.crossings[c2]:
                if e2 not in edges:
                    edges.add(e2)
                    todo.append(e2)
    faces = set()
    for e in edges:
        faces.add(t.left[e])
        faces.add(t.right[e])
    return faces


def _anchor_block_face(t, g):
    """The block face reached from global face ``g`` crossing only free loops."""
    members = {gi: [f for f in t.global_members[gi] if f < t.F] for gi in range(t.n_global)}
    loop_adj: list[list[int]] = [[] for _ in range(t.n_global)]
    for a, b, label in t.dual_adjacency():
        if label[0] == "loop":
            loop_adj[a].append(b)
            loop_adj[b].append(a)
    seen = {g}
    queue = deque([g])
    while queue:
        x = queue.popleft()
        if members[x]:
            return members[x][0]
        for y in loop_adj[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return None


# -- transformations ------------------------------------------------------------

def mirror(d: AnnularDiagram) -> AnnularDiagram:
    """Swap over and under at every crossing (exchanges the two smoothings)."""
    t = d._topology
    new = []
    for c, (a, b, cc, dd) in enumerate(d.crossings):
        if t.over_entry_slot(d, c) == 1:
            new.append((b, cc, dd, a))
        else:
            new.append((dd, a, b, cc))
    return AnnularDiagram(tuple(new), d.free_loops, d.star, d.infinity)


def canonical(d: AnnularDiagram) -> AnnularDiagram:
    """Relabel edges by order of first appearance in the crossing list."""
    relabel = {}
    for tup in d.crossings:
        for e in tup:
            if e not in relabel:
                relabel[e] = len(relabel) + 1

    def ref(r):
        if isinstance(r, EdgeSide):
            return EdgeSide(relabel[r.edge], r.side)
        return r

    loops = tuple(FreeLoop(l.trivial, None if l.parent is None else ref(l.parent), l.attach)
                  for l in d.free_loops)
    crossings = tuple(tuple(relabel[e] for e in tup) for tup in d.crossings)
    return AnnularDiagram(crossings, loops, ref(d.star), ref(d.infinity))


def is_alternating(d: AnnularDiagram) -> bool:
    """True when every component alternates over/under along its length."""
    t = d._topology
    for comp in t.components:
        passes = []
        for e in comp:
            c, s = t.head[e]
            passes.append(s % 2 == 1)
        for i in range(len(passes)):
            if passes[i] == passes[i - 1]:
                return False
    return True


def face_ref(d: AnnularDiagram, face_index: int) -> FaceRef:
    """A marker reference resolving to the given :func:`trace_faces` index."""
    fs = trace_faces(d)
    kind, x, side = fs.faces[face_index][0]
    return EdgeSide(x, side) if kind == "edge" else LoopSide(x, side)


def relocate_markers(d: AnnularDiagram, star_face: int, infinity_face: int) -> AnnularDiagram:
    """Same diagram with ``*`` and infinity moved to the given face indices."""
    return AnnularDiagram(d.crossings, d.free_loops, face_ref(d, star_face),
                          face_ref(d, infinity_face))


# -- serialization -----------------------------------------------------------

def _ref_to_json(r):
    if r is None:
        return None
    if isinstance(r, EdgeSide):
        return {"edge": r.edge, "side": r.side}
    return {"loop_face": {"loop": r.loop, "side": r.side}}


def _ref_from_json(obj, where):
    if not isinstance(obj, dict):
        raise DiagramError("face reference must be an object", where)
    if "edge" in obj:
        if set(obj) - {"edge", "side"}:
            raise DiagramError(f"unexpected keys {sorted(set(obj) - {'edge', 'side'})}", where)
        if not isinstance(obj["edge"], int) or isinstance(obj["edge"], bool):
            raise DiagramError("edge must be an integer", where)
        return EdgeSide(obj["edge"], obj.get("side"))
    if "loop_face" in obj:
        lf = obj["loop_face"]
        if not isinstance(lf, dict) or not isinstance(lf.get("loop"), int):
            raise DiagramError("loop_face must be {loop: int, side: 'in'|'out'}", where)
        return LoopSide(lf["loop"], lf.get("side"))
    raise DiagramError("face reference needs 'edge' or 'loop_face'", where)


def parse_diagram(text: str | dict) -> AnnularDiagram:
    """Parse the JSON diagram format (see ``docs/format.md``)."""
    if isinstance(text, (str, bytes)):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DiagramError(f"malformed syntax: {exc.msg}", f"line {exc.lineno} col {exc.colno}")
    else:
        obj = text
    if not isinstance(obj, dict):
        raise DiagramError("top level must be an object", "$")
    allowed = {"crossings", "free_loops", "star", "infinity", "orientation"}
    extra = set(obj) - allowed
    if extra:
        raise DiagramError(f"unknown keys {sorted(extra)}", "$")
    for key in ("star", "infinity"):
        if key not in obj:
            raise DiagramError(f"missing '{key}' marker", "$")
    crossings = obj.get("crossings", [])
    if not isinstance(crossings, list):
        raise DiagramError("crossings must be a list", "crossings")
    parsed = []
    for c, tup in enumerate(crossings):
        if (not isinstance(tup, list) or len(tup) != 4
                or not all(isinstance(e, int) and not isinstance(e, bool) for e in tup)):
            raise DiagramError("crossing must be a list of 4 integers", f"crossings[{c}]")
        parsed.append(tuple(tup))
    loops = []
    for j, rec in enumerate(obj.get("free_loops", [])):
        where = f"free_loops[{j}]"
        if not isinstance(rec, dict):
            raise DiagramError("free loop must be an object", where)
        trivial = rec.get("trivial")
        if trivial is not None and not isinstance(trivial, bool):
            raise DiagramError("trivial must be a boolean", where)
        parent = rec.get("parent")
        parent = None if parent is None else _ref_from_json(parent, where + ".parent")
        loops.append(FreeLoop(trivial, parent, rec.get("attach", "out")))
    return AnnularDiagram(tuple(parsed), tuple(loops),
                          _ref_from_json(obj["star"], "star"),
                          _ref_from_json(obj["infinity"], "infinity"))


def diagram_to_json(d: AnnularDiagram) -> dict:
    loops = []
    for loop in d.free_loops:
        rec = {"parent": _ref_to_json(loop.parent)}
        if loop.trivial is not None:
            rec["trivial"] = loop.trivial
        if loop.attach != "out":
            rec["attach"] = loop.attach
        loops.append(rec)
    return {
        "crossings": [list(c) for c in d.crossings],
        "free_loops": loops,
        "star": _ref_to_json(d.star),
        "infinity": _ref_to_json(d.infinity),
    }


def dump_diagram(d: AnnularDiagram) -> str:
    """Canonical serialization: sorted keys, two-space indent, trailing newline."""
    return json.dumps(diagram_to_json(d), sort_keys=True, indent=2) + "\n"
