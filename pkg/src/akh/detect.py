"""Top-k generators that survive to homology, and wrap certificates.

At annular grading ``k = w`` a resolution with exactly ``w`` nontrivial
circles carries generators with every nontrivial circle labelled ``v+``.
The null set holds those killed by every outgoing edge map, the target set
those hit by some incoming edge map; their difference is the gap.  A
resolution that is perfectly wrapped and uniform has a nonempty gap, and a
gap element is a cycle at ``k = w`` that is not a boundary.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .complex import DEFAULT_MAX_CROSSINGS, CubeTooLarge, _generator, \
    assemble, edge_map
from .diagram import AnnularDiagram, diagram_wrap
from .resolution import Resolution, classify, flip, resolve
from .snf import smith_normal_form

__all__ = [
    "WrapCertificate",
    "null_set",
    "target_set",
    "ki_gap",
    "gap_template",
    "find_pwu",
    "count_U",
    "certified_wrap_bounds",
    "class_survives",
]


def _top_labels(res: Resolution, w: int) -> list[int]:
    """Label bitmasks of the generators of ``res`` at ``k = w``."""
    c = len(res.circles)
    out = []
    for x in range(1 << c):
        k = 0
        for cid, circ in enumerate(res.circles):
            if not circ.trivial:
                k += -1 if (x >> (c - 1 - cid)) & 1 else 1
        if k == w:
            out.append(x)
    return out


def _as_generators(res, xs):
    return {_generator(res, x) for x in xs}


def _require_pw(d, res, w, what):
    rep = classify(d, res, w)
    if not rep.is_perfectly_wrapped:
        raise ValueError(f"closed form for the {what} needs a perfectly wrapped resolution "
                         f"(wrap(D_u)={rep.wrap_Du}, w={w}, insulated={rep.is_insulated})")
    return rep


def _free_product(res, fixed):
    """Label bitmasks: circle -> forced bit, circles missing from ``fixed`` are free."""
    c = len(res.circles)
    free = [cid for cid in range(c) if cid not in fixed]
    base = 0
    for cid, b in fixed.items():
        base |= b << (c - 1 - cid)
    out = []
    for bits in itertools.product((0, 1), repeat=len(free)):
        x = base
        for cid, b in zip(free, bits):
            x |= b << (c - 1 - cid)
        out.append(x)
    return out


def null_set(d: AnnularDiagram, res: Resolution, w: int, mode: str = "brute") -> set:
    """Generators of ``res`` at ``k = w`` killed by every outgoing edge map."""
    if mode == "closed":
        _require_pw(d, res, w, "null set")
        fixed = {}
        for circ in res.circles:
            if not circ.trivial:
                fixed[circ.id] = 0
            elif not circ.type1:
                fixed[circ.id] = 1
        return _as_generators(res, _free_product(res, fixed))
    if mode != "brute":
        raise ValueError("mode must be 'brute' or 'closed'")
    xs = _top_labels(res, w)
    if not xs:
        return set()
    alive = set(xs)
    for i, b in enumerate(res.u):
        if b:
            continue
        M = edge_map(res, resolve(d, flip(res.u, i))).tocsc()
        hit = np.diff(M.indptr) > 0
        alive = {x for x in alive if not hit[x]}
    return _as_generators(res, alive)


def target_set(d: AnnularDiagram, res: Resolution, w: int, mode: str = "brute") -> set:
    """Generators of ``res`` at ``k = w`` hit by some incoming edge map."""
    if mode == "closed":
        _require_pw(d, res, w, "target set")
        fixed = {}
        for circ in res.circles:
            if not circ.trivial:
                fixed[circ.id] = 0
            elif not circ.type0:
                fixed[circ.id] = 0
        missed = set(_free_product(res, fixed))
        return _as_generators(res, [x for x in _top_labels(res, w) if x not in missed])
    if mode != "brute":
        raise ValueError("mode must be 'brute' or 'closed'")
    xs = _top_labels(res, w)
    if not xs:
        return set()
    hit = set()
    for i, b in enumerate(res.u):
        if not b:
            continue
        M = edge_map(resolve(d, flip(res.u, i)), res).tocsr()
        rows = np.diff(M.indptr) > 0
        hit |= {x for x in xs if rows[x]}
    return _as_generators(res, hit)


def ki_gap(d: AnnularDiagram, res: Resolution, w: int) -> set:
    """Null set minus target set, both by direct edge-map scans."""
    return null_set(d, res, w) - target_set(d, res, w)


def gap_template(res: Resolution) -> set | None:
    """Generators of the predicted gap: ``v+`` on nontrivial circles, ``w-`` on
    circles that are only type 0, ``w+`` on those only type 1, free on circles
    that are both.  ``None`` when some trivial circle is neither type."""
    fixed = {}
    for circ in res.circles:
        if not circ.trivial:
            fixed[circ.id] = 0
        elif circ.type0 and circ.type1:
            continue
        elif circ.type0:
            fixed[circ.id] = 1
        elif circ.type1:
            fixed[circ.id] = 0
        else:
            return None
    return _as_generators(res, _free_product(res, fixed))


def _cube(n, max_crossings):
    if n > max_crossings:
        raise CubeTooLarge(f"cube too large: {n} crossings exceeds the cap of {max_crossings}")
    return itertools.product((0, 1), repeat=n)


def find_pwu(d: AnnularDiagram, w: int | None = None, max_crossings: int = DEFAULT_MAX_CROSSINGS,
             cross_check: bool = False) -> list[tuple[int, ...]]:
    """All perfectly wrapped uniform resolutions at ``w``, in lexicographic order.

    ``w`` defaults to the certified lower bound.  With ``cross_check`` every
    resolution is also tested through the gap, and a disagreement raises.
    """
    n = len(d.crossings)
    if w is None:
        w = certified_wrap_bounds(d, max_crossings=max_crossings).lower
    out = []
    for u in _cube(n, max_crossings):
        res = resolve(d, u)
        if res.wrap != w and not cross_check:
            continue
        pwu = res.wrap == w and classify(d, res, w).is_pwu
        if cross_check and pwu != bool(ki_gap(d, res, w)):
            raise AssertionError(f"gap and classification disagree at u={u}")
        if pwu:
            out.append(u)
    return out


def count_U(d: AnnularDiagram, w: int, max_crossings: int = DEFAULT_MAX_CROSSINGS) -> int:
    """Number of perfectly wrapped uniform resolutions of ``d`` at ``w``."""
    return len(find_pwu(d, w, max_crossings=max_crossings))


# -- certificates --------------------------------------------------------------------

@dataclass(frozen=True)
class WrapCertificate:
    lower: int | None
    witness: tuple[int, ...] | None
    witness_wrap: int | None
    upper: int
    scanned: bool
    homology_verified: bool | None = None

    @property
    def conclusive(self):
        return self.lower is not None and self.lower == self.upper

    @property
    def conjecture_status(self):
        return "verified" if self.conclusive else "open"

    def as_dict(self):
        return {
            "lower": self.lower,
            "witness": None if self.witness is None else list(self.witness),
            "witness_wrap": self.witness_wrap,
            "upper": self.upper,
            "conclusive": self.conclusive,
            "conjecture_status": self.conjecture_status,
            "cube_scanned": self.scanned,
            "homology_verified": self.homology_verified,
        }


def _insulated_uniform(d, u):
    res = resolve(d, u)
    rep = classify(d, res, res.wrap)
    return rep.is_insulated and rep.is_uniform, res.wrap


def certified_wrap_bounds(d: AnnularDiagram, witnesses=None, verify_homology: bool = False,
                          max_crossings: int = DEFAULT_MAX_CROSSINGS) -> WrapCertificate:
    """Lower and upper bounds on the wrapping number of the link.

    The lower bound is the largest ``wrap(D_u)`` over insulated uniform
    resolutions: such a resolution yields a nonzero class at that ``k``, so
    homology (and hence the link) reaches that far.  The upper bound is the
    diagram's own wrap.  Beyond the cube cap only supplied ``witnesses`` are
    tried.
    """
    n = len(d.crossings)
    upper = diagram_wrap(d)
    best = None
    for u in witnesses or ():
        ok, wr = _insulated_uniform(d, tuple(u))
        if ok and (best is None or wr > best[1]):
            best = (tuple(u), wr)
    scanned = n <= max_crossings
    if scanned:
        by_wrap = {}
        for u in itertools.product((0, 1), repeat=n):
            wr = resolve(d, u).wrap
            by_wrap.setdefault(wr, []).append(u)
        for wr in sorted(by_wrap, reverse=True):
            if best is not None and wr <= best[1]:
                break
            hit = next((u for u in by_wrap[wr] if _insulated_uniform(d, u)[0]), None)
            if hit is not None:
                best = (hit, wr)
                break
    if best is None:
        return WrapCertificate(None, None, None, upper, scanned)
    verified = None
    if verify_homology:
        verified = class_survives(d, best[0], best[1], max_crossings=max_crossings)
    return WrapCertificate(best[1], best[0], best[1], upper, scanned, verified)


def class_survives(d: AnnularDiagram, u, w: int, max_crossings: int = DEFAULT_MAX_CROSSINGS) -> bool:
    """Whether a gap generator at vertex ``u`` is a cycle but not a boundary at ``k = w``.

    Decided by exact integer linear algebra on the ``k = w`` complex.
    """
    res = resolve(d, u)
    gap = gap_template(res)
    if not gap:
        return False
    g = min(gap)
    c = assemble(d, k=w, max_crossings=max_crossings)
    i = sum(u)
    src = c.indices(i=i, k=w)
    pos = None
    for j, idx in enumerate(src):
        if tuple(c.generator(idx).u) == g.u and c.generator(idx).labels == g.labels:
            pos = j
            break
    if pos is None:
        return False
    z = np.zeros(len(src), dtype=object)
    z[pos] = 1
    dz = c.differential(i, k=w) @ np.array(z, dtype=np.int64)
    if np.any(dz):
        return False
    A = c.differential(i - 1, k=w).toarray() if i > 0 else np.zeros((len(src), 0), dtype=np.int64)
    return not _in_integer_image(A, z)


def _in_integer_image(A, z) -> bool:
    if A.shape[1] == 0 or not np.any(A):
        return not any(z)
    S, U, V = smith_normal_form(A, transforms=True)
    y = U.dot(np.asarray(z, dtype=object))
    r = min(S.shape)
    for j in range(len(y)):
        s = S[j, j] if j < r else 0
        if s == 0:
            if y[j] != 0:
                return False
        elif y[j] % s:
            return False
    return True
