"""Constructors for diagram families that carry explicit witness resolutions.

Every constructor works on layered words (see :mod:`akh.tangle`), so the
results can be cabled or decorated further.  A diagram built here remembers
its word; :func:`layout_of` returns it.
"""

from __future__ import annotations

import itertools

from .diagram import AnnularDiagram, find_nugatory, is_alternating, relocate_markers, trace_faces
from .resolution import classify, resolve
from .tangle import Layout, braid_word_ops, build

__all__ = [
    "braid_closure",
    "with_chains",
    "with_belts",
    "belt_ops",
    "cable",
    "add_earrings",
    "alternating_corpus",
    "layout_of",
    "from_ops",
]

_LAYOUTS: dict[AnnularDiagram, Layout] = {}


def _require_pwu(d, u):
    res = resolve(d, u)
    if not classify(d, res, res.wrap).is_pwu:
        raise ValueError(f"witness {''.join(map(str, u))} is not perfectly wrapped uniform")
    return res


def from_ops(n, ops) -> AnnularDiagram:
    d, layout = build(n, ops)
    _LAYOUTS[d] = layout
    return d


def layout_of(d: AnnularDiagram) -> Layout:
    try:
        return _LAYOUTS[d]
    except KeyError:
        raise ValueError("diagram was not built from a layered word") from None


def braid_closure(word, strands: int) -> AnnularDiagram:
    """Annular closure of a braid; generator ``±i`` crosses strands ``i`` and ``i+1``."""
    for g in word:
        if not isinstance(g, int) or g == 0 or not 1 <= abs(g) <= strands - 1:
            raise ValueError(f"bad generator {g!r} for a {strands}-strand braid")
    return from_ops(strands, braid_word_ops(word))


def chain_ops(i, length, sign):
    """A horizontal chain of ``length`` crossings between positions ``i`` and ``i+1``."""
    over = "TR" if sign > 0 else "TL"
    ops = [("birth", i + 1)] * (length - 1)
    ops += [("x", i + 2 * j, over) for j in range(length)]
    ops += [("cap", i + 1)] * (length - 1)
    return ops


def with_chains(word, strands: int, insertions):
    """Braid closure with horizontal chains spliced in.

    ``insertions`` holds ``(position, generator, length, sign)``: a chain of
    ``length`` crossings between strands ``generator`` and ``generator+1``
    inserted before letter ``position`` of the word.  Returns the diagram
    and the witness that smooths every crossing top-to-bottom.
    """
    word = list(word)
    by_pos: dict[int, list] = {}
    for ins in insertions:
        pos, gen, length, sign = ins
        if not 0 <= pos <= len(word):
            raise ValueError(f"insertion position {pos} outside the word")
        if not 1 <= gen <= strands - 1 or length < 1 or sign not in (1, -1):
            raise ValueError(f"bad chain {ins!r}")
        for other in by_pos.get(pos, []):
            if abs(other[1] - gen) <= 1:
                raise ValueError(f"chains {other!r} and {ins!r} overlap")
        by_pos.setdefault(pos, []).append(ins)
    ops = []
    for pos in range(len(word) + 1):
        for _, gen, length, sign in sorted(by_pos.get(pos, []), key=lambda t: t[1]):
            ops += chain_ops(gen - 1, length, sign)
        if pos < len(word):
            ops += braid_word_ops([word[pos]])
    d = from_ops(strands, ops)
    return d, layout_of(d).vertical()


def belt_ops(start, k):
    """A loop around the ``k`` strands at positions ``start..start+k-1``.

    The loop is born just left of the bundle; its right end passes under
    the bundle, its left end passes over, and the ends are capped.
    """
    ops = [("birth", start)]
    ops += [("x", start + 1 + j, "TR") for j in range(k)]
    ops += [("x", start + j, "TL") for j in range(k)]
    ops.append(("cap", start + k))
    return ops


def with_belts(blocks, strands: int):
    """Stack braid words and belts, then close.

    ``blocks`` is a list of braid words (lists of ints) and belt records
    ``("belt", start, k)`` (positions are 0-based).  Braids are smoothed
    top-to-bottom; every belt takes all-0 or all-1 on its crossings, giving
    one witness per choice vector.
    """
    ops = []
    belt_slices = []
    n_cross = 0
    for block in blocks:
        if isinstance(block, tuple) and block and block[0] == "belt":
            _, start, k = block
            if k < 1 or start < 0 or start + k > strands:
                raise ValueError(f"belt {block!r} does not fit {strands} strands")
            part = belt_ops(start, k)
            belt_slices.append(range(n_cross, n_cross + 2 * k))
        else:
            for g in block:
                if not 1 <= abs(g) <= strands - 1:
                    raise ValueError(f"strand mismatch: generator {g} on {strands} strands")
            part = braid_word_ops(block)
        ops += part
        n_cross += sum(1 for op in part if op[0] == "x")
    d = from_ops(strands, ops)
    base = list(layout_of(d).vertical())
    witnesses = []
    for choice in itertools.product((0, 1), repeat=len(belt_slices)):
        u = list(base)
        for bit, sl in zip(choice, belt_slices):
            for c in sl:
                u[c] = bit
        witnesses.append(tuple(u))
    return d, witnesses


def cable(d: AnnularDiagram, n: int, u):
    """Blackboard ``n``-cable of a layered diagram, with the copied witness."""
    if n < 1:
        raise ValueError("cable needs n >= 1")
    layout = layout_of(d)
    u = tuple(u)
    if len(u) != len(layout.crossings):
        raise ValueError("witness length does not match the crossing count")
    _require_pwu(d, u)
    if n == 1:
        return d, u
    ops = []
    bits = []
    c = 0
    for op in layout.ops:
        if op[0] == "x":
            i, over = op[1], op[2]
            for j in range(n):
                for p in range(n + j - 1, j - 1, -1):
                    ops.append(("x", i * n + p, over))
                    bits.append(u[c])
            c += 1
        elif op[0] == "birth":
            ops += [("birth", op[1] * n + k) for k in range(n)]
        else:
            ops += [("cap", op[1] * n + n - 1 - k) for k in range(n)]
    return from_ops(layout.strands * n, ops), tuple(bits)


def add_earrings(d: AnnularDiagram, u, sites):
    """Hang a small linked loop on the strand at each ``(layer, position)`` site.

    The loop's two crossings are smoothed to give a circle of the same type
    as the circle it pierces in ``D_u`` (either type when that circle is
    nontrivial or both types).
    """
    layout = layout_of(d)
    u = tuple(u)
    sites = [tuple(s) for s in sites]
    if len(set(sites)) != len(sites):
        raise ValueError("earring sites must be distinct")
    res = _require_pwu(d, u)
    choice = {}
    for layer, pos in sites:
        if not 0 <= layer < len(layout.sites) or not 0 <= pos < len(layout.sites[layer]):
            raise ValueError(f"no strand at site {(layer, pos)}")
        e = layout.sites[layer][pos]
        if e is None:
            # untouched strands close up into nontrivial free loops
            choice[(layer, pos)] = 0
            continue
        circ = res.circle_of_edge(e)
        if not circ.trivial or circ.type0:
            choice[(layer, pos)] = 0
        elif circ.type1:
            choice[(layer, pos)] = 1
        else:
            raise ValueError(f"pierced circle {circ.id} is neither type 0 nor type 1")
    ops = []
    bits = []
    c = 0
    for layer in range(len(layout.ops) + 1):
        # several earrings on one layer go right to left so positions stay valid
        for (lay, pos) in sorted((s for s in sites if s[0] == layer), key=lambda s: -s[1]):
            ops += belt_ops(pos, 1)
            bits += [choice[(lay, pos)]] * 2
        if layer < len(layout.ops):
            op = layout.ops[layer]
            ops.append(op)
            if op[0] == "x":
                bits.append(u[c])
                c += 1
    return from_ops(layout.strands, ops), tuple(bits)


def _alternating_words(max_crossings):
    words = []
    for m in range(1, max_crossings + 1):
        words.append((2, [1] * m))
    for a in range(1, max_crossings):
        for b in range(1, max_crossings - a + 1):
            words.append((3, [1] * a + [-2] * b))
    for k in range(2, max_crossings // 2 + 1):
        words.append((3, [1, -2] * k))
    for a, b, c, e in itertools.product(range(1, 4), repeat=4):
        if a + b + c + e <= max_crossings:
            words.append((3, [1] * a + [-2] * b + [1] * c + [-2] * e))
    for k in range(1, max_crossings // 3 + 1):
        words.append((4, [1, -2, 3] * k))
        if 4 * k <= max_crossings:
            words.append((4, [1, -2, 3, -2] * k))
    return words


def alternating_corpus(max_crossings: int, relocations: int = 2) -> list[AnnularDiagram]:
    """Reduced alternating annular diagrams with at most ``max_crossings`` crossings.

    Alternating braid closures, each also with the markers moved to up to
    ``relocations`` other pairs of faces; anything with a removable
    nugatory crossing is dropped.
    """
    out = []
    seen = set()
    for strands, word in _alternating_words(max_crossings):
        base = braid_closure(word, strands)
        candidates = [base]
        faces = trace_faces(base)
        pairs = [(s, i) for s in range(len(faces)) for i in range(len(faces))
                 if (s, i) != (faces.star_face_index, faces.infinity_face_index)]
        # spread the relocations over the face pairs deterministically
        if pairs and relocations:
            step = max(1, len(pairs) // relocations)
            for s, i in pairs[::step][:relocations]:
                candidates.append(relocate_markers(base, s, i))
        for d in candidates:
            if d in seen:
                continue
            if not is_alternating(d):
                continue
            if any(kind == "removable" for _, kind in find_nugatory(d)):
                continue
            seen.add(d)
            out.append(d)
    return out
