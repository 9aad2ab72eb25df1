"""Integral homology of the graded chain complex.

Each (q, k) block is reduced by cancelling pairs of generators joined by a
unit entry (Gaussian elimination at the chain level), which leaves a small
complex whose differentials have no unit entries.  Ranks and torsion of
what remains come from the Smith normal form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .complex import DEFAULT_MAX_CROSSINGS, GradedChainComplex, assemble
from .diagram import AnnularDiagram
from .snf import smith_normal_form

__all__ = ["HomologyGroup", "HomologyTable", "homology", "homology_of_complex",
           "reduce_complex", "k_support"]


@dataclass(frozen=True)
class HomologyGroup:
    i: int
    q: int
    k: int
    rank: int
    torsion: tuple[int, ...] = ()

    @property
    def is_zero(self):
        return self.rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


@dataclass
class HomologyTable:
    """Nonzero homology groups indexed by (i, q, k).

    ``n_plus`` / ``n_minus`` give the shifted gradings ``i - n_-`` and
    ``q + n_+ - 2 n_-`` via :meth:`shifted`.
    """
    groups: list[HomologyGroup]
    n_plus: int = 0
    n_minus: int = 0
    k_filter: int | None = None
    q_filter: int | None = None

    def rank(self, i=None, q=None, k=None) -> int:
        return sum(g.rank for g in self._select(i, q, k))

    def torsion(self, i=None, q=None, k=None) -> list[int]:
        return [t for g in self._select(i, q, k) for t in g.torsion]

    def _select(self, i, q, k):
        return [g for g in self.groups
                if (i is None or g.i == i) and (q is None or g.q == q) and (k is None or g.k == k)]

    def k_values(self) -> list[int]:
        return sorted({g.k for g in self.groups})

    def total_rank(self) -> int:
        return sum(g.rank for g in self.groups)

    def shifted(self, g: HomologyGroup) -> tuple[int, int]:
        return g.i - self.n_minus, g.q + self.n_plus - 2 * self.n_minus

    def rows(self):
        for g in self.groups:
            si, sq = self.shifted(g)
            yield {"i": g.i, "q": g.q, "k": g.k, "rank": g.rank, "torsion": list(g.torsion),
                   "i_shifted": si, "q_shifted": sq}

    def to_json(self) -> str:
        return json.dumps({"k": self.k_filter, "q": self.q_filter, "groups": list(self.rows())},
                          sort_keys=True, indent=2) + "\n"

    def __str__(self):
        lines = [f"{'i':>3} {'q':>4} {'k':>4}  group"]
        for g in self.groups:
            lines.append(f"{g.i:>3} {g.q:>4} {g.k:>4}  {g}")
        return "\n".join(lines)


def reduce_complex(gens_by_degree, entries):
    """Cancel unit entries of a chain complex.

    ``gens_by_degree`` maps degree -> list of generator ids; ``entries`` is
    an iterable of ``(source, target, value)``.  Returns the surviving
    generators per degree and the reduced entries as a dict of dicts
    ``fwd[source][target]``.
    """
    fwd: dict[int, dict[int, int]] = {}
    bwd: dict[int, dict[int, int]] = {}
    alive = set()
    degree_of = {}
    for deg, gens in gens_by_degree.items():
        for g in gens:
            fwd[g] = {}
            bwd[g] = {}
            alive.add(g)
            degree_of[g] = deg
    for s, t, v in entries:
        if v:
            fwd[s][t] = fwd[s].get(t, 0) + v
            bwd[t][s] = bwd[t].get(s, 0) + v

    order = sorted(alive, key=lambda g: (degree_of[g], g))
    for x in order:
        while x in alive:
            best = None
            for y, v in fwd[x].items():
                if v in (1, -1) and (best is None or len(bwd[y]) < best[0]):
                    best = (len(bwd[y]), y, v)
            if best is None:
                break
            _, y, v = best
            _cancel(x, y, v, fwd, bwd)
            alive.discard(x)
            alive.discard(y)
    survivors = {deg: [g for g in gens if g in alive] for deg, gens in gens_by_degree.items()}
    return survivors, fwd


def _cancel(x, y, v, fwd, bwd):
    # zig-zag update: every other source w hitting y gets d(w) -= (a_w / v) d(x)
    xs_targets = [(t, c) for t, c in fwd[x].items() if t != y]
    for w, a in list(bwd[y].items()):
        if w == x:
            continue
        f = a * v  # a / v for v = ±1
        fw = fwd[w]
        for t, c in xs_targets:
            nv = fw.get(t, 0) - f * c
            if nv:
                fw[t] = nv
                bwd[t][w] = nv
            else:
                fw.pop(t, None)
                bwd[t].pop(w, None)
    # detach x and y entirely
    for t in fwd[x]:
        if t != y:
            bwd[t].pop(x, None)
    for w in bwd[x]:
        fwd[w].pop(x, None)
    for w in bwd[y]:
        if w != x:
            fwd[w].pop(y, None)
    for t in fwd[y]:
        bwd[t].pop(y, None)
    fwd[x] = {}
    bwd[x] = {}
    fwd[y] = {}
    bwd[y] = {}


def _block_homology(gens_by_degree, entries):
    survivors, fwd = reduce_complex(gens_by_degree, entries)
    degs = sorted(survivors)
    ranks = {}
    factors = {}
    for deg in degs:
        src = survivors[deg]
        tgt = survivors.get(deg + 1, [])
        if not src or not tgt:
            ranks[deg] = 0
            factors[deg] = []
            continue
        pos = {g: j for j, g in enumerate(tgt)}
        M = np.zeros((len(tgt), len(src)), dtype=object)
        any_entry = False
        for j, g in enumerate(src):
            for t, c in fwd[g].items():
                M[pos[t], j] = c
                any_entry = True
        diag = smith_normal_form(M) if any_entry else []
        ranks[deg] = len(diag)
        factors[deg] = diag
    out = {}
    for deg in degs:
        free = len(survivors[deg]) - ranks[deg] - ranks.get(deg - 1, 0)
        tors = tuple(int(f) for f in factors.get(deg - 1, []) if f > 1)
        out[deg] = (free, tors)
    return out


def homology_of_complex(c: GradedChainComplex, q=None, k=None) -> list[HomologyGroup]:
    groups = []
    sel = c.mask.copy()
    if q is not None:
        sel &= c.q == q
    if k is not None:
        sel &= c.k == k
    idx = np.nonzero(sel)[0]
    if len(idx) == 0:
        return groups
    coo = c.D.tocoo()
    keep = np.zeros(len(c.mask), dtype=bool)
    keep[idx] = True
    em = keep[coo.row] & keep[coo.col]
    rows, cols, vals = coo.row[em], coo.col[em], coo.data[em]
    qk_of = {}
    for j in idx.tolist():
        qk_of.setdefault((int(c.q[j]), int(c.k[j])), []).append(j)
    block_entries = {key: [] for key in qk_of}
    for r, s, v in zip(rows.tolist(), cols.tolist(), vals.tolist()):
        block_entries[(int(c.q[s]), int(c.k[s]))].append((s, r, v))
    for key in sorted(qk_of, key=lambda qk: (qk[1], qk[0])):
        by_deg = {}
        for j in qk_of[key]:
            by_deg.setdefault(int(c.degree[j]), []).append(j)
        res = _block_homology(by_deg, block_entries[key])
        for deg, (free, tors) in sorted(res.items()):
            if free or tors:
                groups.append(HomologyGroup(deg, key[0], key[1], free, tors))
    groups.sort(key=lambda g: (g.i, g.q, g.k))
    return groups


def homology(d: AnnularDiagram, k: int | None = None, q: int | None = None,
             max_crossings: int = DEFAULT_MAX_CROSSINGS) -> HomologyTable:
    """Annular Khovanov homology of ``d`` over the integers, by (i, q, k)."""
    c = assemble(d, k=k, max_crossings=max_crossings)
    groups = homology_of_complex(c, q=q, k=k)
    return HomologyTable(groups, d.n_plus, d.n_minus, k, q)


def k_support(d: AnnularDiagram, max_crossings: int = DEFAULT_MAX_CROSSINGS) -> list[int]:
    """The k gradings where homology is nonzero."""
    return homology(d, max_crossings=max_crossings).k_values()
