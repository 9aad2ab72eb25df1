import itertools

import numpy as np
import pytest

from akh import families as F
from akh.complex import (DIFFERENTIAL_TABLE, CubeTooLarge, assemble, chain_group, edge_map,
                         edge_sign, restrict_k)
from akh.diagram import diagram_to_json, diagram_wrap
from akh.resolution import resolve

import corpus as C
import oracles as O

SIGMA1 = F.braid_closure([1], 2)
TREFOIL = F.braid_closure([1, 1, 1], 2)


def test_generators_of_single_circles():
    gens = chain_group(resolve(C.hand("nontrivial_loop"), ()))
    assert [(str(g), g.q, g.k) for g in gens] == [("v+", 1, 1), ("v-", -1, -1)]
    gens = chain_group(resolve(C.hand("trivial_loop"), ()))
    assert [(str(g), g.q, g.k) for g in gens] == [("w+", 1, 0), ("w-", -1, 0)]
    top = chain_group(resolve(SIGMA1, (0,)))[0]
    assert (str(top), top.i, top.q, top.k) == ("v+⊗v+", 0, 2, 2)


def test_table_spot_rows():
    assert DIFFERENTIAL_TABLE[("W⊔W→W", "w-w-")] == ()
    assert DIFFERENTIAL_TABLE[("W→V⊔V", "w+")] == ("v-v+", "v+v-")
    assert DIFFERENTIAL_TABLE[("W→V⊔V", "w-")] == ()
    assert DIFFERENTIAL_TABLE[("V⊔W→V", "v+w-")] == ()


def test_edge_sign():
    assert edge_sign((0, 0, 0), 2) == 1
    assert edge_sign((1, 0, 0), 2) == -1
    assert edge_sign((1, 1, 0), 2) == 1


def test_edge_map_rejects_non_edges():
    with pytest.raises(ValueError):
        edge_map(resolve(TREFOIL, (0, 0, 0)), resolve(TREFOIL, (1, 1, 0)))
    with pytest.raises(ValueError):
        edge_map(resolve(TREFOIL, (1, 0, 0)), resolve(TREFOIL, (0, 0, 0)))


def test_sigma1_complex_at_fixed_k():
    c = assemble(SIGMA1, k=2)
    assert [str(g) for g in c.generators(i=0)] == ["v+⊗v+"] and not c.generators(i=1)
    c0 = assemble(SIGMA1, k=0)
    assert sorted(str(g) for g in c0.generators(i=0)) == ["v+⊗v-", "v-⊗v+"]
    assert sorted(str(g) for g in c0.generators(i=1)) == ["w+", "w-"]
    assert not assemble(TREFOIL, k=diagram_wrap(TREFOIL) + 1).generators()


def test_restrict_matches_direct_assembly():
    full = assemble(TREFOIL)
    for k in full.k_values():
        a, b = restrict_k(full, k), assemble(TREFOIL, k=k)
        for i in range(3):
            assert (a.differential(i) != b.differential(i)).nnz == 0


def test_cube_cap():
    with pytest.raises(CubeTooLarge):
        assemble(TREFOIL, max_crossings=2)


def test_dumps_are_deterministic():
    a, b = assemble(TREFOIL), assemble(TREFOIL)
    assert a.dump_triplets(k=0) == b.dump_triplets(k=0)
    assert a.to_dot(k=2) == b.to_dot(k=2)
    assert a.to_dot(k=2).startswith("digraph")


# -- corpus-wide ---------------------------------------------------------------

CORPUS = C.exhaustive_corpus()


@pytest.mark.parametrize("m", CORPUS, ids=lambda m: m.name)
def test_differential_structure(m):
    c = assemble(m.diagram)
    assert c.check_d_squared()
    coo = c.D.tocoo()
    assert set(np.unique(coo.data).tolist()) <= {-1, 1}
    assert np.all(c.degree[coo.row] == c.degree[coo.col] + 1)
    assert np.all(c.q[coo.row] == c.q[coo.col])
    assert np.all(c.k[coo.row] == c.k[coo.col])
    # k has the parity of the number of nontrivial circles at each vertex
    wraps = np.array([r.wrap for r in c.resolutions])
    assert np.all((c.k - wraps[c.vertex]) % 2 == 0)


@pytest.mark.parametrize("m", [m for m in CORPUS if m.diagram.n_crossings <= 6],
                         ids=lambda m: m.name)
def test_square_faces_anticommute(m):
    d = m.diagram
    n = d.n_crossings
    for u in itertools.product((0, 1), repeat=n):
        for i, j in itertools.combinations([p for p in range(n) if u[p] == 0], 2):
            ui, uj = list(u), list(u)
            ui[i] = 1
            uj[j] = 1
            w = list(ui)
            w[j] = 1
            # exactly one or three negative edges around each face
            signs = [edge_sign(u, i), edge_sign(ui, j), edge_sign(u, j), edge_sign(uj, i)]
            assert signs.count(-1) % 2 == 1
            r = {tuple(x): resolve(d, x) for x in (u, ui, uj, w)}
            via_i = edge_map(r[tuple(ui)], r[tuple(w)]) @ edge_map(r[u], r[tuple(ui)])
            via_j = edge_map(r[tuple(uj)], r[tuple(w)]) @ edge_map(r[u], r[tuple(uj)])
            # the unsigned square commutes
            assert (via_i != via_j).nnz == 0


@pytest.mark.parametrize("m", [m for m in CORPUS if not m.diagram.free_loops
                               and 0 < m.diagram.n_crossings <= 5], ids=lambda m: m.name)
def test_differential_matches_khovanov_derived_maps(m):
    d = m.diagram
    j = diagram_to_json(d)
    gens, entries = O.chain_complex([tuple(x) for x in j["crossings"]], j["star"], j["infinity"])
    where = {(u, labels): idx for idx, (u, labels, *_) in enumerate(gens)}
    c = assemble(d)
    ours = {}
    coo = c.D.tocoo()

    def key(idx):
        g = c.generator(idx)
        return where[(tuple(g.u), tuple(lab[1] for lab in g.labels))]

    for r, col, v in zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()):
        ours[(key(col), key(r))] = v
    assert ours == {k: v for k, v in entries.items() if v}
