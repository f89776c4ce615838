import itertools

import numpy as np
import pytest

from latticemap import linmap, oracle, vct
from latticemap.fermion import MajoranaFactor, Species, hubbard
from latticemap.gf2 import symplectic_rank
from latticemap.pauli import PauliString, commutes, mul_string


def test_qubit_count_4x4():
    assert vct.build_vct(4, 4).n == 32


def test_column_pair_loops():
    loops = vct.build_vct(6, 3).loops
    assert len(loops) == 3
    assert all(len(lp) == 6 for lp in loops)


def test_odd_width_last_column_pairs():
    code = vct.build_vct(3, 3)
    assert code.loops[1] == (3, 4)
    assert code.r == 8


@pytest.mark.parametrize("alpha, beta, b, expected", [
    (1, 2, 0, "Z2 Y3 Y4"), (2, 1, 0, "Z2 X3 X4"), (1, 2, 1, "-Z2 Y3 Y4"),
])
def test_edge_stabilizer_formula(alpha, beta, b, expected):
    code = vct.build_vct(2, 1)
    assert vct.vct_stabilizer(code, alpha, beta, b) == PauliString.from_label(expected, 4)


@pytest.mark.parametrize("b", [0, 1])
def test_self_loop(b):
    code = vct.build_vct(2, 1)
    s = vct.vct_stabilizer(code, 1, 1, b)
    assert s.weight == 1 and s.coefficient == (-1) ** (1 + b)


@pytest.mark.parametrize("b1, b2", list(itertools.product((0, 1), repeat=2)))
def test_chained_edges(b1, b2):
    code = vct.build_vct(1, 4)
    lhs = mul_string(vct.vct_stabilizer(code, 1, 2, b1), vct.vct_stabilizer(code, 2, 3, b2))
    rhs = mul_string(vct.vct_stabilizer(code, 1, 3, (b1 + b2) % 2), code.build({}, {2: "Z"}))
    assert lhs == rhs


@pytest.mark.parametrize("l1, l2", [(2, 2), (3, 2), (4, 3), (6, 6)])
def test_stabilizers_commute_and_independent(l1, l2):
    code = vct.build_vct(l1, l2)
    stabs = code.stabilizers
    assert all(commutes(a, b) for a, b in itertools.combinations(stabs, 2))
    assert symplectic_rank(stabs) == code.r


@pytest.mark.parametrize("b_edges", [{}, {(1, 2): 1}, {(1, 2): 1, (3, 4): 1}])
def test_default_chi_meets_loop_parity(b_edges):
    code = vct.build_vct(2, 2, b=b_edges)
    for loop in code.loops:
        assert sum(code.chi[code.W.index(k)] for k in loop) % 2 == vct.loop_parity(code, loop)


def test_interior_tile_weight():
    weights = [s.weight for s in vct.local_tiling(vct.build_vct(6, 6))]
    assert max(weights) == 6
    assert vct.tiling_equivalent(vct.build_vct(6, 6))


def test_checkerboard_colours():
    tiles = vct.checkerboard(vct.build_vct(4, 4))
    assert {t["color"] for t in tiles} == {"dark", "light"}


@pytest.mark.parametrize("L, n", [(1, 6), (2, 20), (3, 42)])
def test_hubbard_qubit_count(L, n):
    assert vct.hubbard_vct(L)[0].n == n == 4 * L * L + 2 * L


def test_hubbard_weights():
    code, _ = vct.hubbard_vct(2)
    _, _, mapping, _ = vct.hubbard_modes(2)
    k = mapping[1]
    z = mul_string(code.majorana_image(MajoranaFactor(k, Species.M)), code.majorana_image(MajoranaFactor(k, Species.MBAR)))
    assert z.weight == 1


def test_route_preserves_logical_action():
    code = vct.build_vct(4, 4)
    a, c = MajoranaFactor(1, Species.M), MajoranaFactor(16, Species.MBAR)
    raw = vct.majorana_pair(code, a, c)
    for strategy in ("col-then-row", "row-then-col", "best"):
        routed = vct.vct_route(code, raw, strategy)
        assert vct.commutes_with_code(code, routed)
        assert code.group.canonical(routed) == code.group.canonical(raw)
    assert vct.vct_route(code, raw, "col-then-row") == vct.vct_route(code, raw, "col-then-row")


def test_route_single_edge_is_local():
    code = vct.build_vct(4, 4)
    raw = vct.majorana_pair(code, MajoranaFactor(code.index(2, 1), Species.M),
                            MajoranaFactor(code.index(2, 2), Species.MBAR))
    assert vct.vct_route(code, raw, "best").weight <= 5


@pytest.mark.parametrize("l1, l2", [(2, 2), (3, 2)])
def test_algebra(l1, l2):
    code = vct.build_vct(l1, l2)
    assert oracle.algebra_check(code.ladder_image, code.N, code.group).passed


def test_hubbard_spectrum_L1():
    code, H = vct.hubbard_vct(1, U=1.3, eps=0.4)
    f = hubbard(1, U=1.3, eps=0.4)
    ref = oracle.full_spectrum(linmap.transform(linmap.jordan_wigner(2), f))
    routed = vct.route_sum(code, H)
    for op in (H, routed):
        got = oracle.restricted_spectrum(op, oracle.codespace_basis(code.stabilizers, code.n))
        assert np.allclose(got, ref, atol=1e-9)


def test_mode_count_mismatch():
    with pytest.raises(ValueError):
        vct.vct_transform(vct.build_vct(2, 2), hubbard(1))
