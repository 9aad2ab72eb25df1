"""Layered tangle words and their annular closures.

A word acts on ``n`` vertical positions read top to bottom:

* ``("x", i, over)``  crossing between positions ``i`` and ``i+1``; ``over``
  is ``"TR"`` when the strand from top-right to bottom-left passes over,
  ``"TL"`` for the other one.
* ``("birth", i)``  a new arc appears with both ends at positions ``i, i+1``.
* ``("cap", i)``    the strands at positions ``i, i+1`` are joined.

The closure joins bottom position ``p`` to top position ``p`` around the
puncture, which sits east of the last position; infinity sits west of
position 0.  Components are oriented downward through the top of the
closure where possible, so a positive braid generator (``over="TR"``) is a
positive crossing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import AnnularDiagram, DiagramError, EdgeSide, FreeLoop, LoopSide

# geometric slot order around a crossing, counterclockwise
BR, TR, TL, BL = range(4)


@dataclass(frozen=True)
class CrossingInfo:
    layer: int
    position: int
    over: str

    @property
    def vertical_bit(self):
        """Bit whose smoothing joins top and bottom ends on each side."""
        return 0 if self.over == "TR" else 1


@dataclass(frozen=True)
class Layout:
    """How a built diagram came from its word.

    ``sites[layer][p]`` is the edge id at position ``p`` just above op
    ``layer`` (the last row is the bottom of the word); ``None`` on
    crossingless strands.
    """
    strands: int
    ops: tuple
    crossings: tuple[CrossingInfo, ...]
    sites: tuple

    def vertical(self):
        """Bit vector smoothing every crossing top-to-bottom."""
        return tuple(info.vertical_bit for info in self.crossings)


def braid_word_ops(word):
    """Layer ops for a signed braid word (generator ``i`` is positions ``i-1, i``)."""
    return [("x", abs(g) - 1, "TR" if g > 0 else "TL") for g in word]


def build(n: int, ops) -> tuple[AnnularDiagram, "Layout"]:
    """Close the layered word into an annular diagram."""
    ops = [tuple(op) for op in ops]
    links = []
    pending = [("t", p) for p in range(n)]
    infos = []
    bend = 0
    site_nodes = []
    for layer, op in enumerate(ops):
        site_nodes.append(list(pending))
        kind = op[0]
        m = len(pending)
        if kind == "x":
            i, over = op[1], op[2]
            if not 0 <= i < m - 1:
                raise DiagramError(f"crossing at position {i} out of range for {m} strands",
                                   f"ops[{layer}]")
            if over not in ("TR", "TL"):
                raise DiagramError("over must be 'TR' or 'TL'", f"ops[{layer}]")
            c = len(infos)
            infos.append(CrossingInfo(layer, i, over))
            links.append((pending[i], ("x", c, TL)))
            links.append((pending[i + 1], ("x", c, TR)))
            pending[i] = ("x", c, BL)
            pending[i + 1] = ("x", c, BR)
        elif kind == "birth":
            i = op[1]
            if not 0 <= i <= m:
                raise DiagramError(f"birth at position {i} out of range", f"ops[{layer}]")
            node = ("b", bend)
            bend += 1
            pending[i:i] = [node, node]
        elif kind == "cap":
            i = op[1]
            if not 0 <= i < m - 1:
                raise DiagramError(f"cap at position {i} out of range", f"ops[{layer}]")
            links.append((pending[i], pending[i + 1]))
            del pending[i:i + 2]
        else:
            raise DiagramError(f"unknown op {kind!r}", f"ops[{layer}]")
    if len(pending) != n:
        raise DiagramError(f"word ends with {len(pending)} strands, expected {n}", "ops")
    site_nodes.append(list(pending))
    for p in range(n):
        links.append((pending[p], ("t", p)))

    # every pass node has two neighbours; for a top node the closure is the second
    nbr = {}
    for a, b in links:
        nbr.setdefault(a, []).append(b)
        nbr.setdefault(b, []).append(a)

    def walk(prev, cur):
        path = []
        while cur[0] != "x":
            path.append((prev, cur))
            prev, cur = cur, _other(nbr[cur], prev)
        return cur, path

    free_tops = []
    for p in range(n):
        comp = _pass_component(("t", p), nbr)
        if all(x[0] != "x" for x in comp):
            if len(comp) != 1:
                raise DiagramError("crossingless component must be a single untouched strand", "ops")
            free_tops.append(p)
    for node in nbr:
        if node[0] == "b" and all(x[0] != "x" for x in _pass_component(node, nbr)):
            raise DiagramError("crossingless component must be a single untouched strand", "ops")

    oriented = {}
    edge_of_node = {}
    edge_of_port = {}
    edge_top = {}  # top position -> (edge id, travels downward)
    n_edges = 0

    def orient_from(port):
        nonlocal n_edges
        while port not in oriented:
            head, path = walk(port, nbr[port][0])
            n_edges += 1
            oriented[port], oriented[head] = "out", "in"
            edge_of_port[port] = edge_of_port[head] = n_edges
            edge_of_node[port] = edge_of_node[head] = n_edges
            for prev, node in path:
                edge_of_node[node] = n_edges
                if node[0] == "t":
                    edge_top[node[1]] = (n_edges, prev == nbr[node][1])
            port = ("x", head[1], (head[2] + 2) % 4)

    for p in range(n):
        if p in free_tops:
            continue
        top = ("t", p)
        upstream, _ = walk(top, nbr[top][1])
        if upstream not in oriented:
            orient_from(upstream)
    for c in range(len(infos)):
        orient_from(("x", c, TL))

    crossings = []
    first_slot = []
    for c, info in enumerate(infos):
        under = (BR, TL) if info.over == "TR" else (TR, BL)
        g0 = next(g for g in under if oriented[("x", c, g)] == "in")
        first_slot.append(g0)
        crossings.append(tuple(edge_of_port[("x", c, (g0 + k) % 4)] for k in range(4)))

    if crossings:
        # sides are read against the orientation the parser infers, which can
        # differ from ours on components that only ever pass over
        probe = AnnularDiagram(tuple(crossings), (), EdgeSide(1, "L"), EdgeSide(1, "L"))
        tail = probe._topology.tail
        for p, (e, down) in list(edge_top.items()):
            c, s = tail[e]
            ours = next(port for port, eid in edge_of_port.items()
                        if eid == e and oriented[port] == "out")
            agree = ours == ("x", c, (first_slot[c] + s) % 4)
            edge_top[p] = (e, down if agree else not down)

    block = [p for p in range(n) if p not in free_tops]
    if crossings and not block:
        raise DiagramError("crossings must lie on a strand that reaches the top of the word", "ops")
    if block and any(block[0] < p < block[-1] for p in free_tops):
        raise DiagramError("untouched strand between crossing blocks leaves the diagram split", "ops")
    left = [p for p in free_tops if not block or p < block[0]]
    right = [p for p in free_tops if block and p > block[-1]]

    def east(p):
        e, down = edge_top[p]
        return EdgeSide(e, "L" if down else "R")

    def west(p):
        e, down = edge_top[p]
        return EdgeSide(e, "R" if down else "L")

    loops = {}
    if not block:
        for p in range(n):
            parent = None if p == 0 else LoopSide(p - 1, "in")
            loops[p] = FreeLoop(False, parent, "out")
        star, inf = LoopSide(n - 1, "in"), LoopSide(0, "out")
        free_index = {p: p for p in range(n)}
    else:
        free_index = {p: j for j, p in enumerate(free_tops)}
        for k, p in enumerate(reversed(left)):
            parent = west(block[0]) if k == 0 else LoopSide(free_index[p + 1], "out")
            loops[p] = FreeLoop(False, parent, "in")
        for k, p in enumerate(right):
            parent = east(block[-1]) if k == 0 else LoopSide(free_index[p - 1], "in")
            loops[p] = FreeLoop(False, parent, "out")
        star = LoopSide(free_index[right[-1]], "in") if right else east(block[-1])
        inf = LoopSide(free_index[left[0]], "out") if left else west(block[0])
    free_loops = tuple(loops[p] for p in free_tops)
    d = AnnularDiagram(tuple(crossings), free_loops, star, inf)
    sites = [[edge_of_node.get(node) for node in row] for row in site_nodes]
    return d, Layout(n, tuple(ops), tuple(infos), tuple(tuple(r) for r in sites))


def _other(pair, x):
    a, b = pair
    return b if a == x else a


def _pass_component(node, nbr):
    comp = {node}
    todo = [node]
    while todo:
        x = todo.pop()
        if x[0] == "x":
            continue
        for y in nbr[x]:
            if y not in comp:
                comp.add(y)
                todo.append(y)
    return comp
