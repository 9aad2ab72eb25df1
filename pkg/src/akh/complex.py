"""The annular Khovanov chain complex of a diagram.

A generator at vertex ``u`` labels every circle of D_u with ``+`` or ``-``
(``v±`` on nontrivial circles, ``w±`` on trivial ones).  Inside a vertex,
generators are indexed by a bitmask over the circles in canonical order:
bit set means ``-`` and the first circle is the most significant bit, so
``+`` comes before ``-`` and the first circle varies slowest.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .diagram import AnnularDiagram
from .resolution import Cobordism, Resolution, resolve

__all__ = [
    "DistinguishedGenerator",
    "CubeTooLarge",
    "GradedChainComplex",
    "DIFFERENTIAL_TABLE",
    "chain_group",
    "edge_map",
    "edge_sign",
    "assemble",
    "restrict_k",
]

DEFAULT_MAX_CROSSINGS = 16


class CubeTooLarge(ValueError):
    """The diagram has more crossings than the configured cube cap."""


@dataclass(frozen=True, order=True)
class DistinguishedGenerator:
    u: tuple[int, ...]
    labels: tuple[str, ...]
    i: int
    q: int
    k: int

    def __str__(self):
        return "⊗".join(self.labels) if self.labels else "1"


def _symbol(trivial, minus):
    return ("w" if trivial else "v") + ("-" if minus else "+")


def _generator(res: Resolution, x: int) -> DistinguishedGenerator:
    c = len(res.circles)
    labels = []
    q = k = 0
    for cid, circ in enumerate(res.circles):
        minus = (x >> (c - 1 - cid)) & 1
        labels.append(_symbol(circ.trivial, minus))
        s = -1 if minus else 1
        q += s
        if not circ.trivial:
            k += s
    i = sum(res.u)
    return DistinguishedGenerator(res.u, tuple(labels), i, q + i, k)


def chain_group(res: Resolution) -> list[DistinguishedGenerator]:
    """All 2^|circles| generators of one vertex, in canonical order."""
    return [_generator(res, x) for x in range(1 << len(res.circles))]


# Local rules on the active circles, in bit form (0 = '+', 1 = '-').
# Merges map (a, b) -> list of target bits; splits map s -> list of (a, b).
# For V⊔W→V and V→V⊔W the V circle comes first.
_MERGE = {
    Cobordism.WW_W: {(0, 0): [0], (1, 0): [1], (0, 1): [1], (1, 1): []},
    Cobordism.VW_V: {(0, 0): [0], (0, 1): [], (1, 0): [1], (1, 1): []},
    Cobordism.VV_W: {(0, 0): [], (1, 0): [1], (0, 1): [1], (1, 1): []},
}
_SPLIT = {
    Cobordism.W_WW: {0: [(1, 0), (0, 1)], 1: [(1, 1)]},
    Cobordism.V_VW: {0: [(0, 1)], 1: [(1, 1)]},
    Cobordism.W_VV: {0: [(1, 0), (0, 1)], 1: []},
}


def _render_table():
    rows = {}
    for cob, rule in _MERGE.items():
        a_kind, b_kind = cob.value[0], cob.value[2]
        out_kind = cob.value[-1]
        for (a, b), outs in rule.items():
            src = f"{a_kind.lower()}{'+-'[a]}{b_kind.lower()}{'+-'[b]}"
            rows[(cob.value, src)] = tuple(f"{out_kind.lower()}{'+-'[t]}" for t in outs)
    for cob, rule in _SPLIT.items():
        s_kind = cob.value[0]
        a_kind, b_kind = cob.value[2], cob.value[4]
        for s, outs in rule.items():
            src = f"{s_kind.lower()}{'+-'[s]}"
            rows[(cob.value, src)] = tuple(
                f"{a_kind.lower()}{'+-'[a]}{b_kind.lower()}{'+-'[b]}" for a, b in outs)
    return rows


#: ``(cobordism, source generator) -> tuple of target generators`` (empty = 0)
DIFFERENTIAL_TABLE = _render_table()


def edge_sign(u, i) -> int:
    """Cube sign: -1 to the number of 1-bits before position ``i``."""
    return -1 if sum(u[:i]) % 2 else 1


def _circle_key(res, cid):
    c = res.circles[cid]
    return ("loop", c.loop) if c.loop is not None else ("edge", min(c.edges))


def _edge_terms(res_u: Resolution, res_v: Resolution, i: int, kind: Cobordism, xs: np.ndarray):
    """Images of source generators ``xs`` along the edge flipping crossing ``i``.

    Returns a list of ``(source_positions, target_index)`` array pairs; each
    term has coefficient +1 before the cube sign.
    """
    cu, cv = len(res_u.circles), len(res_v.circles)
    act_u = res_u.arcs[i].circles
    act_v = res_v.arcs[i].circles
    key_v = {_circle_key(res_v, cid): cid for cid in range(cv) if cid not in act_v}
    base = np.zeros(len(xs), dtype=np.int64)
    for cid in range(cu):
        if cid in act_u:
            continue
        tgt = key_v[_circle_key(res_u, cid)]
        base |= ((xs >> (cu - 1 - cid)) & 1) << (cv - 1 - tgt)

    def bit(res, x, cid, width):
        return (x >> (width - 1 - cid)) & 1

    terms = []
    if kind.is_merge:
        a, b = act_u
        if kind is Cobordism.VW_V and res_u.circles[a].trivial:
            a, b = b, a
        (t,) = act_v
        ba, bb = bit(res_u, xs, a, cu), bit(res_u, xs, b, cu)
        for (sa, sb), outs in _MERGE[kind].items():
            sel = np.nonzero((ba == sa) & (bb == sb))[0]
            for out in outs:
                terms.append((sel, base[sel] | (out << (cv - 1 - t))))
    else:
        (s,) = act_u
        a, b = act_v
        if kind is Cobordism.V_VW and res_v.circles[a].trivial:
            a, b = b, a
        bs = bit(res_u, xs, s, cu)
        for src, outs in _SPLIT[kind].items():
            sel = np.nonzero(bs == src)[0]
            for oa, ob in outs:
                terms.append((sel, base[sel] | (oa << (cv - 1 - a)) | (ob << (cv - 1 - b))))
    return terms


def edge_map(res_u: Resolution, res_v: Resolution) -> sp.csr_matrix:
    """Unsigned matrix of the cobordism map from vertex ``u`` to ``v``.

    Columns index generators of ``u``, rows generators of ``v``, both in
    canonical order.  ``v`` must differ from ``u`` by one bit, 0 in ``u``.
    """
    diff = [j for j, (a, b) in enumerate(zip(res_u.u, res_v.u)) if a != b]
    if len(diff) != 1 or res_u.u[diff[0]] != 0:
        raise ValueError("edge_map needs v obtained from u by flipping one 0-bit to 1")
    i = diff[0]
    kind = _kind_from_pair(res_u, res_v, i)
    xs = np.arange(1 << len(res_u.circles), dtype=np.int64)
    rows, cols = [], []
    for sel, tgt in _edge_terms(res_u, res_v, i, kind, xs):
        cols.append(xs[sel])
        rows.append(tgt)
    rows = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
    cols = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
    shape = (1 << len(res_v.circles), 1 << len(res_u.circles))
    return sp.csr_matrix((np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=shape)


def _kind_from_pair(res_u, res_v, i) -> Cobordism:
    au = [res_u.circles[c].trivial for c in res_u.arcs[i].circles]
    av = [res_v.circles[c].trivial for c in res_v.arcs[i].circles]
    if len(au) == 2 and len(av) == 1:
        return {2: Cobordism.WW_W, 1: Cobordism.VW_V, 0: Cobordism.VV_W}[sum(au)]
    if len(au) == 1 and len(av) == 2:
        if not au[0]:
            return Cobordism.V_VW
        return Cobordism.W_WW if all(av) else Cobordism.W_VV
    raise RuntimeError(f"unrecognized cobordism at crossing {i}: {len(au)} -> {len(av)} circles")


# -- the whole cube ---------------------------------------------------------------

@dataclass
class GradedChainComplex:
    """Generators of the whole cube with one global differential.

    Generators are numbered by (homological degree, vertex ``u`` in
    lexicographic order, label index).  ``D`` is the signed differential as
    a sparse matrix with columns as sources.  ``mask`` selects the
    generators that belong to this (possibly restricted) complex.
    """
    diagram: AnnularDiagram
    resolutions: list
    vertex: np.ndarray
    label: np.ndarray
    degree: np.ndarray
    q: np.ndarray
    k: np.ndarray
    D: sp.csr_matrix
    mask: np.ndarray

    @property
    def n_crossings(self):
        return len(self.diagram.crossings)

    def indices(self, i=None, q=None, k=None) -> np.ndarray:
        sel = self.mask.copy()
        if i is not None:
            sel &= self.degree == i
        if q is not None:
            sel &= self.q == q
        if k is not None:
            sel &= self.k == k
        return np.nonzero(sel)[0]

    def generator(self, idx) -> DistinguishedGenerator:
        return _generator(self.resolutions[self.vertex[idx]], int(self.label[idx]))

    def generators(self, i=None, q=None, k=None) -> list[DistinguishedGenerator]:
        return [self.generator(j) for j in self.indices(i, q, k)]

    def differential(self, i, q=None, k=None) -> sp.csr_matrix:
        """d_i from degree i to degree i+1, restricted to the given gradings."""
        src = self.indices(i, q, k)
        tgt = self.indices(i + 1, q, k)
        return self.D[tgt][:, src].tocsr()

    def gradings(self) -> list[tuple[int, int]]:
        """(q, k) pairs that carry generators, sorted."""
        sel = self.mask
        return sorted(set(zip(self.q[sel].tolist(), self.k[sel].tolist())))

    def k_values(self) -> list[int]:
        return sorted(set(self.k[self.mask].tolist()))

    def degrees(self) -> range:
        return range(0, self.n_crossings + 1)

    def check_d_squared(self) -> bool:
        DD = (self.D @ self.D).tocsr()
        DD.eliminate_zeros()
        return DD.nnz == 0

    def triplets(self, i, q=None, k=None) -> list[tuple[int, int, int]]:
        """Nonzero entries of d_i as sorted (row, col, value) triplets."""
        m = self.differential(i, q, k).tocoo()
        return sorted(zip(m.row.tolist(), m.col.tolist(), m.data.tolist()))

    def dump_triplets(self, k=None, q=None) -> str:
        blocks = []
        for i in self.degrees():
            if i == self.n_crossings:
                break
            m = self.differential(i, q, k)
            blocks.append({"i": i, "shape": list(m.shape), "entries": self.triplets(i, q, k)})
        return json.dumps({"k": k, "q": q, "differentials": blocks}, sort_keys=True, indent=2) + "\n"

    def to_dot(self, k=None) -> str:
        """Dots-and-arrows graph, one node per generator, one arrow per nonzero entry."""
        idx = self.indices(k=k)
        keep = set(idx.tolist())
        lines = ["digraph akh {", "  rankdir=LR;"]
        for j in idx:
            g = self.generator(j)
            bits = "".join(map(str, g.u))
            lines.append(f'  g{j} [label="{bits}: {g} (q={g.q}, k={g.k})"];')
        coo = self.D.tocoo()
        for r, c, v in sorted(zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist())):
            if r in keep and c in keep:
                style = "" if v > 0 else " [style=dashed]"
                lines.append(f"  g{c} -> g{r}{style};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def assemble(d: AnnularDiagram, k: int | None = None,
             max_crossings: int = DEFAULT_MAX_CROSSINGS) -> GradedChainComplex:
    """Build the full cube complex (optionally only the generators at ``k``)."""
    n = len(d.crossings)
    if n > max_crossings:
        raise CubeTooLarge(f"cube too large: {n} crossings exceeds the cap of {max_crossings}")
    verts = sorted(itertools.product((0, 1), repeat=n), key=lambda u: (sum(u), u))
    vindex = {u: j for j, u in enumerate(verts)}
    resolutions = [resolve(d, u) for u in verts]

    offsets = np.zeros(len(verts) + 1, dtype=np.int64)
    for j, res in enumerate(resolutions):
        offsets[j + 1] = offsets[j] + (1 << len(res.circles))
    N = int(offsets[-1])
    vertex = np.repeat(np.arange(len(verts)), np.diff(offsets))
    label = np.arange(N, dtype=np.int64) - offsets[vertex]
    degree = np.zeros(N, dtype=np.int64)
    qarr = np.zeros(N, dtype=np.int64)
    karr = np.zeros(N, dtype=np.int64)
    for j, res in enumerate(resolutions):
        lo, hi = offsets[j], offsets[j + 1]
        xs = label[lo:hi]
        c = len(res.circles)
        ntmask = 0
        for cid, circ in enumerate(res.circles):
            if not circ.trivial:
                ntmask |= 1 << (c - 1 - cid)
        pop = _popcount(xs)
        i = sum(res.u)
        degree[lo:hi] = i
        qarr[lo:hi] = i + c - 2 * pop
        karr[lo:hi] = res.wrap - 2 * _popcount(xs & ntmask)

    rows, cols, vals = [], [], []
    for j, res in enumerate(resolutions):
        u = res.u
        lo = offsets[j]
        xs = label[lo:offsets[j + 1]]
        if k is not None:
            xs = xs[karr[lo:offsets[j + 1]] == k]
        if len(xs) == 0:
            continue
        for i in range(n):
            if u[i]:
                continue
            v = u[:i] + (1,) + u[i + 1:]
            jv = vindex[v]
            res_v = resolutions[jv]
            kind = _kind_from_pair(res, res_v, i)
            sign = edge_sign(u, i)
            for sel, tgt in _edge_terms(res, res_v, i, kind, xs):
                cols.append(lo + xs[sel])
                rows.append(offsets[jv] + tgt)
                vals.append(np.full(len(sel), sign, dtype=np.int64))
    if rows:
        rows, cols, vals = np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)
    else:
        rows = cols = vals = np.zeros(0, dtype=np.int64)
    D = sp.csr_matrix((vals, (rows, cols)), shape=(N, N), dtype=np.int64)
    mask = np.ones(N, dtype=bool) if k is None else (karr == k)
    return GradedChainComplex(d, resolutions, vertex, label, degree, qarr, karr, D, mask)


def restrict_k(c: GradedChainComplex, k: int) -> GradedChainComplex:
    """The subcomplex of generators at annular grading ``k``."""
    return GradedChainComplex(c.diagram, c.resolutions, c.vertex, c.label, c.degree, c.q, c.k,
                              c.D, c.mask & (c.k == k))


def _popcount(xs: np.ndarray) -> np.ndarray:
    xs = xs.astype(np.int64)
    out = np.zeros(len(xs), dtype=np.int64)
    while np.any(xs):
        out += xs & 1
        xs = xs >> 1
    return out
