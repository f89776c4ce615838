import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latticemap import linmap, oracle
from latticemap.fermion import FermionSum, hubbard, number
from latticemap.pauli import PauliSum


def fenwick_forest(n):
    return linmap.Forest.from_parents([None if linmap.bk_parent(j, n) is None else linmap.bk_parent(j, n) - 1
                                       for j in range(1, n + 1)])


@st.composite
def forests(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    return linmap.Forest.from_parents([None] + [draw(st.one_of(st.none(), st.integers(0, v - 1)))
                                                for v in range(1, n)])


@pytest.mark.parametrize("site, label", [((4, 1), 4), ((4, 2), 5), ((1, 2), 8)])
def test_s_pattern_labels(site, label):
    assert linmap.jw_s_pattern(4, 3).index(*site) == label


def test_s_pattern_single_column():
    e = linmap.jw_s_pattern(1, 4)
    assert [e.index(1, j) for j in range(1, 5)] == [1, 2, 3, 4]
    assert all(e.coord(e.index(i, j)) == (i, j) for i in (1,) for j in range(1, 5))


@pytest.mark.parametrize("j, flip", [(8, {4, 6, 7, 8}), (16, {8, 12, 14, 15, 16}), (2, {1, 2})])
def test_bk_flip_sets(j, flip):
    assert linmap.bravyi_kitaev(16).sets.flip(j) == flip


def test_bk_two_modes():
    assert linmap.bravyi_kitaev(2).sets.flip(2) == {1, 2}


def test_bk_update_set():
    assert linmap.bravyi_kitaev(16).sets.update(10) == {10, 12, 16}


def test_bk_power_of_two_children():
    f = fenwick_forest(16)
    for j in range(5):
        assert len(f.children[2 ** j - 1]) == j


def test_encoder_from_bk_forest_matches():
    e = linmap.encoder_from_forest(fenwick_forest(16).with_labels(list(range(1, 17))))
    bk = linmap.bravyi_kitaev(16)
    for j in range(1, 17):
        assert (e.sets.flip(j), e.sets.update(j), e.sets.parity(j)) == \
               (bk.sets.flip(j), bk.sets.update(j), bk.sets.parity(j))


def test_label_forest_path():
    assert linmap.label_forest(linmap.Forest.path(3)).labels == [1, 2, 3]


def test_label_forest_singletons_is_jw():
    f = linmap.label_forest(linmap.Forest.singletons(5))
    assert f.labels == [1, 2, 3, 4, 5]
    assert linmap.encoder_from_forest(f).A.is_identity()


def test_path_forest_is_parity_transform():
    e = linmap.encoder_from_forest(linmap.label_forest(linmap.Forest.path(3)))
    assert e.sets.update(1) == {1, 2, 3}
    assert (e.A @ e.Ainv).is_identity()


def test_forest_validation():
    with pytest.raises(ValueError):
        linmap.Forest([[1], [0]], [])
    with pytest.raises(ValueError):
        linmap.encoder_from_forest(linmap.Forest.path(3))


def test_forest_json_round_trip():
    f = fenwick_forest(10)
    g = linmap.Forest.from_json(f.to_json())
    assert g.to_json() == f.to_json()
    assert (g.n, g.tau, g.levels, g.gamma) == (f.n, f.tau, f.levels, f.gamma)


@given(forests())
@settings(max_examples=60, deadline=None)
def test_label_forest_weight_bound(f):
    e = linmap.encoder_from_forest(linmap.label_forest(f))
    assert max(linmap.single_operator_weights(e)) <= 3 * (f.tau + f.levels * f.gamma)


@given(forests(max_n=6))
@settings(max_examples=25, deadline=None)
def test_label_forest_encoders_pass_algebra(f):
    e = linmap.encoder_from_forest(linmap.label_forest(f))
    assert oracle.algebra_check(e.ladder_image, e.n).passed


def test_number_operator():
    e = linmap.jordan_wigner(3)
    assert linmap.transform(e, number(2, 3)).equals(PauliSum.from_labels(3, {"": 0.5, "Z2": -0.5}))


def test_real_hopping():
    f = FermionSum(3)
    f.add(1.0, [(1, True), (3, False)])
    f.add(1.0, [(3, True), (1, False)])
    out = linmap.transform(linmap.jordan_wigner(3), f)
    assert out.equals(PauliSum.from_labels(3, {"X1 Z2 X3": 0.5, "Y1 Z2 Y3": 0.5}))


def test_imaginary_hopping():
    f = FermionSum(2)
    f.add(1j, [(1, True), (2, False)])
    f.add(-1j, [(2, True), (1, False)])
    out = linmap.transform(linmap.jordan_wigner(2), f)
    assert out.equals(PauliSum.from_labels(2, {"Y1 X2": 0.5, "X1 Y2": -0.5}))


@pytest.mark.parametrize("make", [lambda n: linmap.jordan_wigner(n), linmap.bravyi_kitaev, linmap.parity])
def test_encoders_same_spectrum(make):
    f = hubbard(2, eps=0.2, U=1.1)
    ref = np.linalg.eigvalsh(linmap.transform(linmap.jordan_wigner(8), f).to_matrix())
    got = np.linalg.eigvalsh(linmap.transform(make(8), f).to_matrix())
    assert np.allclose(ref, got, atol=1e-9)


@pytest.mark.parametrize("n", [1, 4, 8])
def test_linear_encoders_pass_algebra(n):
    for e in (linmap.jordan_wigner(n), linmap.bravyi_kitaev(n), linmap.parity(n)):
        rep = oracle.algebra_check(e.ladder_image, n)
        assert rep.passed and rep.checked == 2 * n * n
