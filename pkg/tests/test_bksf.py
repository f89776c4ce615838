import itertools

import numpy as np
import pytest

from latticemap import bksf, linmap, oracle
from latticemap.fermion import FermionSum, MajoranaFactor, Species, create
from latticemap.gf2 import symplectic_rank
from latticemap.pauli import PauliString, commutes, mul_string


def majorana(a):
    return MajoranaFactor(a // 2 + 1, Species.M if a % 2 == 0 else Species.MBAR)


@pytest.mark.parametrize("l1, l2", [(2, 2), (3, 2), (4, 4), (6, 6)])
def test_counts(l1, l2):
    g = bksf.build_bksf(l1, l2)
    assert g.n == 2 * l1 * l2 - l1 - l2
    assert len(g.stabilizers) == (l1 - 1) * (l2 - 1) == g.group.rank
    assert g.n - g.group.rank == l1 * l2 - 1


def test_6x6():
    g = bksf.build_bksf(6, 6)
    assert (g.n, len(g.stabilizers)) == (60, 25)


def test_vertex_weights():
    g = bksf.build_bksf(3, 3)
    w = {g.coord(k): bksf.vertex_operator(g, k).weight for k in range(1, 10)}
    assert w[(1, 1)] == w[(3, 3)] == 2
    assert w[(2, 1)] == 3
    assert w[(2, 2)] == 4


@pytest.mark.parametrize("variant", [1, 2])
def test_local_operator_identities(variant):
    g = bksf.build_bksf(3, 3, variant)
    I = PauliString.identity(g.n)
    for k in range(1, g.N + 1):
        b = bksf.vertex_operator(g, k)
        assert mul_string(b, b) == I
    for j, k in g.edges:
        a = bksf.edge_operator(g, j, k)
        assert mul_string(a, bksf.edge_operator(g, k, j)) == -I
        assert a.is_hermitian()
    for s in g.stabilizers:
        assert mul_string(s, s) == I


@pytest.mark.parametrize("variant", [1, 2])
def test_edge_vertex_relations(variant):
    g = bksf.build_bksf(3, 2, variant)
    for (j, k), (a, b) in itertools.combinations(g.edges, 2):
        shared = len({j, k} & {a, b}) == 1
        assert commutes(bksf.edge_operator(g, j, k), bksf.edge_operator(g, a, b)) is not shared
    for j, k in g.edges:
        for m in range(1, g.N + 1):
            expect = m not in (j, k)
            assert commutes(bksf.edge_operator(g, j, k), bksf.vertex_operator(g, m)) is expect


def test_variant2_horizontal_shape():
    g = bksf.build_bksf(3, 3, 2)
    a = bksf.edge_operator(g, g.index(1, 2), g.index(2, 2))
    assert list(a.ops().values()).count("X") == 1
    assert set(a.ops().values()) <= {"X", "Z"}


def test_one_stabilizer_on_2x2():
    assert len(bksf.loop_stabilizers(bksf.build_bksf(2, 2))) == 1


@pytest.mark.parametrize("variant", [1, 2])
def test_stabilizers_commute(variant):
    stabs = bksf.build_bksf(4, 3, variant).stabilizers
    assert all(commutes(a, b) for a, b in itertools.combinations(stabs, 2))
    assert symplectic_rank(stabs) == len(stabs)


def test_long_range_edge_equivalent_across_paths():
    g = bksf.build_bksf(4, 4)
    a, b = g.index(1, 1), g.index(4, 4)
    ops = [bksf.edge_operator(g, a, b, bksf.mode_path(g, a, b, s)) for s in bksf.PATH_STRATEGIES]
    reps = {g.group.canonical(s) for s in ops}
    assert len(reps) == 1
    assert all(s.is_hermitian() for s in ops)


def test_odd_operator_rejected():
    g = bksf.build_bksf(2, 2)
    with pytest.raises(bksf.SectorError):
        bksf.bksf_transform(g, create(1, 4))


def test_hubbard_qubits():
    assert bksf.hubbard_bksf(2)[0].n == 10
    assert bksf.build_bksf(6, 3).n == 27


@pytest.mark.parametrize("variant", [1, 2])
@pytest.mark.parametrize("sector, parity", [("even", 0), ("odd", 1), (("odd", 3), 1)])
def test_spectrum_2x2(variant, sector, parity):
    g = bksf.build_bksf(2, 2, variant)
    rng = np.random.default_rng(7)
    f = FermionSum(4)
    for a, b in g.edges:
        t = complex(rng.normal(), rng.normal())
        f.add(t, [(a, True), (b, False)])
        f.add(t.conjugate(), [(b, True), (a, False)])
    f.add(0.7, [(1, True), (1, False), (4, True), (4, False)])
    f.add(-0.4, [(2, True), (2, False)])
    f.add(0.5, [(1, True), (4, False)])
    f.add(0.5, [(4, True), (1, False)])
    H = bksf.bksf_transform(g, f, sector)
    ref = oracle.number_parity_projector_spectrum(linmap.transform(linmap.jordan_wigner(4), f), parity)
    got = oracle.restricted_spectrum(H, oracle.codespace_basis(g.stabilizers, g.n))
    assert np.allclose(got, ref, atol=1e-9)


@pytest.mark.parametrize("l1, l2, variant", [(2, 2, 1), (2, 2, 2), (3, 2, 2), (2, 3, 1)])
def test_pair_algebra(l1, l2, variant):
    g = bksf.build_bksf(l1, l2, variant)
    rep = oracle.pair_algebra_check(lambda a, b: bksf.pair_image(g, majorana(a), majorana(b), path="staircase"),
                                    2 * g.N, g.group)
    assert rep.passed, rep.failures[:3]


def test_vacuum_and_configurations():
    g = bksf.build_bksf(2, 2)
    v = bksf.vacuum_state(g)
    for s in g.stabilizers:
        assert np.allclose(oracle.apply_string(s, v), v)
    for k in range(1, g.N + 1):
        b = bksf.vertex_operator(g, k)
        assert np.allclose(oracle.apply_string(b, v), v)


def test_brickwork_tiling_covers_stabilizers():
    for variant, colours in ((2, 3), (1, 4)):
        g = bksf.build_bksf(4, 4, variant)
        tiles = bksf.brickwork_tiling(g)
        assert len(tiles) == len(g.stabilizers)
        assert len({t["colour"] for t in tiles}) <= colours
        for t, u in itertools.combinations(tiles, 2):
            if t["colour"] == u["colour"]:
                assert not set(t["qubits"]) & set(u["qubits"])
