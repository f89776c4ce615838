import numpy as np
import pytest

from conftest import random_state
from latticemap import aqcode, bksf, linmap, oracle
from latticemap.fermion import MajoranaFactor, Species, annihilate, create, hubbard
from latticemap.gf2 import StabilizerGroup
from latticemap.pauli import PauliString, PauliSum


def majorana(a):
    return MajoranaFactor(a // 2 + 1, Species(a % 2))


def test_apply_z_on_zero():
    s = oracle.StateVector.basis(3)
    out = oracle.apply(PauliSum.from_labels(3, {"Z1": 1}), s)
    assert np.allclose(out.amplitudes, s.amplitudes)


def test_number_projector_on_occupied():
    s = oracle.StateVector.from_bits([1, 0, 0])
    out = oracle.apply(PauliSum.from_labels(3, {"": 0.5, "Z1": -0.5}), s)
    assert np.allclose(out.amplitudes, s.amplitudes)


def test_apply_matches_dense(rng):
    n = 5
    H = PauliSum.from_terms(n, [(complex(rng.normal(), rng.normal()), PauliString(n, int(x), int(z)))
                                for x, z in rng.integers(0, 2 ** n, size=(12, 2))])
    v = random_state(n, rng)
    got = oracle.apply(H, oracle.StateVector(n, v)).amplitudes
    assert np.max(np.abs(got - H.to_matrix() @ v)) < 1e-12


def test_random_state_normalized(rng):
    assert abs(oracle.StateVector.random(4, rng).norm() - 1) < 1e-12


def test_statevector_limits():
    with pytest.raises(ValueError):
        oracle.StateVector(2, np.ones(3))


def test_codespace_no_stabilizers():
    b = oracle.codespace_basis([], 3)
    assert b.dim == 8


def test_codespace_zz():
    b = oracle.codespace_basis([PauliString.from_label("Z1 Z2", 2)], 2)
    assert b.dim == 2
    P = b.vectors @ b.vectors.conj().T
    assert np.allclose(P, np.diag([1, 0, 0, 1]))


def test_codespace_square_2x2():
    code = aqcode.build_square(2, 2)
    b = oracle.codespace_basis(code.stabilizers, code.n)
    assert b.dim == 16
    V = b.vectors
    assert np.allclose(V.conj().T @ V, np.eye(16), atol=1e-10)
    for s in code.stabilizers:
        for col in V.T:
            assert np.allclose(oracle.apply_string(s, col), col, atol=1e-10)


def test_inconsistent_stabilizers():
    z = PauliString.from_label("Z1", 1)
    with pytest.raises(ValueError):
        oracle.codespace_basis([z, -z], 1)


def test_restricted_identity():
    b = oracle.codespace_basis([PauliString.from_label("Z1 Z2", 2)], 2)
    assert np.allclose(oracle.restricted_spectrum(PauliSum.identity(2), b), [1, 1])


def test_restricted_rejects_anticommuting_terms():
    b = oracle.codespace_basis([PauliString.from_label("Z1 Z2", 2)], 2)
    with pytest.raises(ValueError):
        oracle.restricted_matrix(PauliSum.from_labels(2, {"X1": 1}), b)


def test_e_type_hubbard_L1():
    code, H = aqcode.hubbard_aqm(1, "e-type", U=2.0, eps=0.5)
    ref = oracle.full_spectrum(linmap.transform(linmap.jordan_wigner(2), hubbard(1, U=2.0, eps=0.5)))
    got = oracle.restricted_spectrum(H, oracle.codespace_basis(code.stabilizers, code.n))
    assert len(ref) == 4 and oracle.spectra_equal(got, ref)


def test_spectra_equal_tolerance():
    assert oracle.spectra_equal(np.array([0.0, 1.0]), np.array([0.0, 1.0 + 1e-12]))
    assert not oracle.spectra_equal(np.array([0.0, 1.0]), np.array([0.0, 1.1]))
    assert not oracle.spectra_equal(np.array([0.0]), np.array([0.0, 1.0]))


@pytest.mark.parametrize("n", [1, 3, 6, 8])
def test_jw_algebra_exact(n):
    e = linmap.jordan_wigner(n)
    rep = oracle.algebra_check(e.ladder_image, n)
    assert rep.passed and not rep.failures


def test_square_3x3_algebra_all_pairs():
    code = aqcode.build_square(3, 3)
    image = lambda j, d: aqcode.adjusted_transform(code, None, create(j, 9) if d else annihilate(j, 9))  # noqa: E731
    rep = oracle.algebra_check(image, 9, code.group)
    assert rep.passed and rep.checked == 2 * 81


def test_negative_control_sign_flip():
    e = linmap.jordan_wigner(4)

    def image(j, d):
        out = e.ladder_image(j, d)
        return -out if j == 3 and not d else out

    rep = oracle.algebra_check(image, 4)
    assert not rep.passed
    assert {(i, j) for _, i, j, _ in rep.failures} == {(3, 3)}


def test_negative_control_flipped_stabilizer():
    g = bksf.build_bksf(2, 2)

    def pair(a, b):
        return bksf.pair_image(g, majorana(a), majorana(b), path="staircase")

    assert oracle.pair_algebra_check(pair, 8, g.group).passed
    rep = oracle.pair_algebra_check(pair, 8, StabilizerGroup([-s for s in g.stabilizers]))
    assert not rep.passed
    assert all(r == "P_ab P_bc = P_ac" for r, _, _, _ in rep.failures)


def test_pair_algebra_negative_control():
    e = linmap.jordan_wigner(3)

    def pair(a, b):
        s = e.majorana_image(majorana(a)) * e.majorana_image(majorana(b))
        return -s if (a, b) == (0, 3) else s

    rep = oracle.pair_algebra_check(pair, 6)
    assert not rep.passed
    assert any(r == "P_ab = -P_ba" and (i, j) == (0, 3) for r, i, j, _ in rep.failures)


def test_apply_gate_matches_unitary(rng):
    v = random_state(3, rng)
    out = oracle.apply_gate(("cnot", 0, 2), v, 3)
    idx = np.arange(8)
    expect = v[np.where(idx & 1, idx ^ 4, idx)]
    assert np.allclose(out, expect)
    h = oracle.apply_gate(("h", 1), oracle.apply_gate(("h", 1), v, 3), 3)
    assert np.allclose(h, v)


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("LATTICEMAP_THREADS", "3")
    assert oracle.max_workers() == 3
    monkeypatch.setenv("LATTICEMAP_THREADS", "x")
    assert oracle.max_workers() == 1
