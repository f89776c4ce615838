import itertools

import numpy as np
import pytest

from latticemap import aqcode, linmap, oracle
from latticemap.fermion import annihilate, create, hubbard
from latticemap.gf2 import BitMatrix, CosetError, span_equal, symplectic_rank
from latticemap.pauli import PauliString, commutes, mul_string

H5 = PauliString.from_label("X1 Z2 Z3 Z4 X5", 5)


def lab(text, n):
    return PauliString.from_label(text, n)


def assert_valid_code(code):
    stabs = code.stabilizers
    assert all(commutes(a, b) for a, b in itertools.combinations(stabs, 2))
    assert symplectic_rank(stabs) == code.r


def test_e_type_caption_stabilizer():
    code = aqcode.build_e_type(4, 5)
    assert code.r == 5
    assert code.stabilizers[3] == lab("Z13 Z14 Z15 Z16 Z24", 25)


def test_e_type_single_row():
    code = aqcode.build_e_type(3, 1)
    assert code.stabilizers == [lab("Z1 Z2 Z3 Z4", 4)]


@pytest.mark.parametrize("l1, l2", [(2, 2), (3, 3), (4, 2), (2, 4), (5, 3)])
def test_lattice_codes_valid(l1, l2):
    for code in (aqcode.build_e_type(l1, l2), aqcode.build_square(l1, l2)):
        assert_valid_code(code)


def test_square_winding_connection():
    assert aqcode.connection_p(2, 2, 2, 1) == lab("Y2 X3", 4)


@pytest.mark.parametrize("kind, l1, l2, period, aux", [
    ("e-type", 4, 4, 1, 4), ("square", 6, 6, 1, 30), ("square", 4, 4, 1, 12),
    ("sparse", 7, 6, 2, 20), ("sparse", 7, 6, 3, 15), ("sparse", 3, 2, 2, 2),
])
def test_aux_counts(kind, l1, l2, period, aux):
    build = {"e-type": lambda: aqcode.build_e_type(l1, l2), "square": lambda: aqcode.build_square(l1, l2),
             "sparse": lambda: aqcode.build_sparse(l1, l2, period)}[kind]
    assert build().r == aux == aqcode.aux_count_formula(kind, l1, l2, period)


def test_sparse_columns():
    assert aqcode.sparse_columns(3, 2) == [1, 3]
    assert [s for s in aqcode.build_sparse(3, 2, 2).aux_sites] == [(1, 1), (3, 1)]


def test_sparse_period_one_is_square():
    a, b = aqcode.build_sparse(4, 3, 1), aqcode.build_square(4, 3)
    assert a.stabilizers == b.stabilizers


def test_sparse_invalid_period():
    with pytest.raises(ValueError):
        aqcode.build_sparse(6, 3, 2)


@pytest.mark.parametrize("row, expected", [([0, 1, 1, 1, 0], H5.extend(6)),
                                           ([1, 1, 1, 0, 0], lab("X1 Z2 Z3 Z4 X5 X6", 6))])
def test_computational_adjustment_table(row, expected):
    code = aqcode.computational_code(BitMatrix.from_lists([row]), encoder=linmap.jordan_wigner(5))
    assert aqcode.adjust_string(code, H5) == expected


@pytest.mark.parametrize("p1, adjusted, deformed", [
    ("Z2 Z3 Z4", "X1 Z2 Z3 Z4 X5", "X1 X5 X6"),
    ("X1 Z2 Z3 X4", "X1 Z2 Z3 Z4 X5 Z6", "-Y4 X5 Y6"),
    ("X1 Z2 Z3 Z4 X5", "X1 Z2 Z3 Z4 X5", "X6"),
])
def test_hadamard_adjustment_table(p1, adjusted, deformed):
    code = aqcode.hadamard_code([lab(p1, 5)])
    adj = aqcode.adjust_string(code, H5)
    assert adj == lab(adjusted, 6)
    assert mul_string(code.stabilizers[0], adj) == lab(deformed, 6)


def test_hadamard_rejects_anticommuting():
    with pytest.raises(ValueError):
        aqcode.hadamard_code([lab("X1", 1), lab("Z1", 1)])


def test_reduce_mod_stabilizers():
    code = aqcode.hadamard_code([H5])
    assert aqcode.reduce_mod_stabilizers(H5.extend(6), code) == lab("X6", 6)
    sq = aqcode.build_square(3, 3)
    for s in sq.stabilizers:
        assert aqcode.reduce_mod_stabilizers(s, sq).is_identity()
    with pytest.raises(CosetError):
        aqcode.reduce_mod_stabilizers(lab("X1", sq.n), sq)


def test_anticommuting_gammas():
    code = aqcode.build_anticommuting([lab("X1", 1), lab("Z1", 1)], encoder=linmap.jordan_wigner(1))
    assert code.aux_strings[1] == lab("Z1 X2", 2)
    assert code.stabilizers[1] == lab("Z1 Z2 X3", 3)


def test_anticommuting_commuting_case_is_bare_x():
    code = aqcode.build_anticommuting([lab("Z1", 2), lab("Z2", 2)])
    assert code.aux_strings == [lab("X1", 2), lab("X2", 2)]


def test_anticommuting_three_single_qubit():
    code = aqcode.build_anticommuting([lab("X1", 1), lab("Y1", 1), lab("Z1", 1)])
    assert_valid_code(code)


def test_square_vertical_hop_is_local():
    code = aqcode.build_square(6, 6)
    a, b = code.data_qubit(2, 3), code.data_qubit(2, 4)
    ops = {k: "Z" for k in range(a + 1, b)}
    ops.update({a: "X", b: "X"})
    s = aqcode.adjust_string(code, PauliString.from_ops(code.N, ops))
    routed = aqcode.route_string(code, s)
    assert routed.weight == 3
    assert sorted(routed.ops().values()) == ["Y", "Z", "Z"]
    assert aqcode.route_string(code, s) == routed
    assert code.group.canonical(routed) == code.group.canonical(s)


@pytest.mark.parametrize("a, b", [((1, 1), (1, 4)), ((2, 2), (2, 5)), ((1, 2), (1, 6))])
def test_column_hop_weight_is_2y_plus_1(a, b):
    code = aqcode.build_square(6, 6)
    qa, qb = sorted((code.data_qubit(*a), code.data_qubit(*b)))
    ops = {k: "Z" for k in range(qa + 1, qb)}
    ops.update({qa: "X", qb: "X"})
    s = aqcode.adjust_string(code, PauliString.from_ops(code.N, ops))
    w = min(aqcode.route_string(code, s, p).weight for p in ("col-then-row", "row-then-col"))
    assert abs(w - 2 * abs(a[1] - b[1])) <= 2


def test_routing_not_defined_for_e_type():
    code = aqcode.build_e_type(2, 2)
    with pytest.raises(aqcode.RoutingError):
        aqcode.route_string(code, lab("X1 X2", code.n))


def test_local_tiling_weights():
    code = aqcode.build_square(6, 6)
    weights = sorted(s.weight for s in aqcode.local_tiling(code))
    assert set(weights) == {3, 6}
    assert weights.count(3) == 5
    assert aqcode.tiling_equivalent(code)
    assert span_equal(aqcode.local_tiling(code), code.stabilizers)


def test_local_tiling_rejects_e_type():
    with pytest.raises(ValueError):
        aqcode.local_tiling(aqcode.build_e_type(3, 3))


@pytest.mark.parametrize("build", [lambda: aqcode.build_square(3, 3), lambda: aqcode.build_e_type(3, 3),
                                   lambda: aqcode.build_sparse(3, 3, 2)])
def test_algebra_suite(build):
    code = build()
    N = code.N

    def image(j, d):
        return aqcode.adjusted_transform(code, None, create(j, N) if d else annihilate(j, N))

    rep = oracle.algebra_check(image, N, code.group)
    assert rep.passed and rep.checked == 2 * N * N


def test_chi_shift_flips_stabilizer_sign():
    a = aqcode.build_square(2, 2)
    b = aqcode.build_square(2, 2, chi=(1, 0))
    assert a.chi == (0, 0)
    assert a.stabilizers[0] == -b.stabilizers[0] and a.stabilizers[1] == b.stabilizers[1]


def test_hubbard_spectrum_matches_jw():
    code, H = aqcode.hubbard_aqm(1, "square", U=1.7, eps=0.2)
    f = hubbard(1, U=1.7, eps=0.2)
    ref = oracle.full_spectrum(linmap.transform(linmap.jordan_wigner(2), f))
    got = oracle.restricted_spectrum(H, oracle.codespace_basis(code.stabilizers, code.n))
    assert np.allclose(ref, got, atol=1e-9)
