import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import pauli_exp, random_state
from latticemap import aqcode, circuits, oracle, vct
from latticemap._lattice import QubitLayout
from latticemap.circuits import Circuit, bridge_expand, bridge_overhead, bridge_uncompute, circuit_depth
from latticemap.pauli import PauliString


def stabilized(code, c, rng, trials=3):
    for _ in range(trials):
        v = np.zeros(2 ** code.n, complex)
        v[: 2 ** code.N] = random_state(code.N, rng)
        out = c.simulate(v)
        for s in code.stabilizers:
            if abs(np.vdot(out, oracle.apply_string(s, out)) - 1) > 1e-10:
                return False
    return True


def test_depth_disjoint_and_chain():
    assert circuit_depth([("cnot", 0, 1), ("cnot", 2, 3)]) == 1
    assert circuit_depth([("cnot", k, k + 1) for k in range(5)]) == 5


def test_layout_enforced():
    c = Circuit(3, [], QubitLayout.line(3))
    with pytest.raises(circuits.ConnectivityError):
        c.append(("cnot", 0, 2))
    with pytest.raises(ValueError):
        c.append(("cnot", 1, 1))
    with pytest.raises(ValueError):
        c.append(("foo", 1))


def test_json_round_trip_and_inverse(rng):
    c = Circuit(3, [("h", 0), ("s", 1), ("cnot", 0, 1), ("rz", 2, 0.3), ("sdg", 2), ("x", 1)])
    assert Circuit.from_json(c.to_json()).gates == c.gates
    assert c.to_json()["gates"][2] == ["cnot", 1, 2]
    v = random_state(3, rng)
    assert np.allclose((c + c.inverse()).simulate(v), v)
    assert np.allclose(c.unitary() @ v, c.simulate(v))


def test_e_type_row_of_four():
    code = aqcode.build_e_type(4, 1)
    c = circuits.synth_init(code)
    assert c.count("cnot") == 7
    assert circuit_depth(c.gates[:4]) == 4
    assert c.depth == 7


@pytest.mark.parametrize("l1, l2", [(1, 1), (2, 2), (3, 2), (2, 3), (3, 3)])
def test_e_type_init(l1, l2, rng):
    code = aqcode.build_e_type(l1, l2)
    c = circuits.synth_init(code)
    assert c.depth == 2 * l1 - 1 or l1 == 1
    assert stabilized(code, c, rng)


@pytest.mark.parametrize("build", [
    lambda: aqcode.build_square(2, 2), lambda: aqcode.build_square(3, 3), lambda: aqcode.build_square(3, 2),
    lambda: aqcode.build_sparse(3, 3, 2), lambda: aqcode.build_square(2, 2, chi=(1, 1)),
])
def test_lattice_init(build, rng):
    code = build()
    c = circuits.synth_init(code)
    assert c.layout is code.layout
    assert stabilized(code, c, rng)


def test_square_2x2_structure():
    code = aqcode.build_square(2, 2)
    c = circuits.synth_init(code)
    assert sorted(g[1] for g in c.gates[:2] if g[0] == "h") == [4, 5]


def test_generic_hadamard_and_anticommuting_init(rng):
    had = aqcode.hadamard_code([PauliString.from_label("X1 Z2 Z3 X4", 4), PauliString.from_label("Z2 Z3", 4)])
    anti = aqcode.build_anticommuting([PauliString.from_label("X1", 2), PauliString.from_label("Z1 Y2", 2)])
    for code in (had, anti):
        assert stabilized(code, circuits.synth_init(code), rng)


def test_init_rejects_vct():
    with pytest.raises(circuits.UnsupportedCodeError):
        circuits.synth_init(vct.build_vct(2, 2))


def test_square_init_depth_linear_in_l1():
    depths = [circuits.synth_init(aqcode.build_square(l1, 2)).depth for l1 in range(2, 7)]
    slope, intercept = np.polyfit(range(2, 7), depths, 1)
    assert 0 < slope < 20 and abs(intercept) < 40
    assert all(b > a for a, b in zip(depths, depths[1:]))


def test_square_init_depth_flat_in_l2():
    depths = [circuits.synth_init(aqcode.build_square(4, l2)).depth for l2 in range(4, 8)]
    assert max(depths) - min(depths) <= 2


def test_boost_plan_covers_all_auxiliaries():
    code = aqcode.build_square(4, 3)
    plan = circuits.boost_plan(code)
    assert sorted(k for k, _ in plan) == list(range(code.r))


def test_propagator_single_z():
    c = circuits.synth_propagator(PauliString.from_label("Z1", 1), 0.4)
    assert c.gates == [("rz", 0, -0.8)]


def test_propagator_8_qubit_gadget():
    h = PauliString.from_label("X1 Z2 Z3 Z4 Z5 Z6 Z7 X8", 8)
    c = circuits.synth_propagator(h, 0.37, QubitLayout.line(8))
    assert np.allclose(c.unitary(), pauli_exp(h, 0.37), atol=1e-10)
    assert c.count("cnot") == 14
    core = [g for g in c.gates if g[0] in ("cnot", "rz")]
    assert circuit_depth(core) == 9
    assert c.depth == 11


@st.composite
def continuous_strings(draw):
    n = draw(st.integers(1, 8))
    lo = draw(st.integers(0, n - 1))
    hi = draw(st.integers(lo, n - 1))
    ops = {q: draw(st.sampled_from("XYZ")) for q in range(lo, hi + 1)}
    return PauliString.from_ops(n, ops).canonical(), draw(st.floats(-3, 3))


@given(continuous_strings())
@settings(max_examples=40, deadline=None)
def test_propagator_continuous_strings(case):
    h, phi = case
    c = circuits.synth_propagator(h, phi, QubitLayout.line(h.n))
    assert np.allclose(c.unitary(), pauli_exp(h, phi), atol=1e-10)
    assert c.count("cnot") == 2 * (h.weight - 1)


def test_propagator_negative_sign():
    h = -PauliString.from_label("X1 X2", 2)
    c = circuits.synth_propagator(h, 0.2, QubitLayout.line(2))
    assert np.allclose(c.unitary(), pauli_exp(h, 0.2))


def test_propagator_disconnected_needs_bridge():
    h = PauliString.from_label("X1 Z4", 4)
    with pytest.raises(circuits.ConnectivityError):
        circuits.synth_propagator(h, 0.3, QubitLayout.line(4))
    for variant in ("center", "right"):
        c = circuits.synth_propagator(h, 0.3, QubitLayout.line(4), bridge=True, variant=variant)
        assert np.allclose(c.unitary(), pauli_exp(h, 0.3), atol=1e-10)


def test_propagator_rejects_non_hermitian():
    with pytest.raises(ValueError):
        circuits.synth_propagator(PauliString.from_label("X1", 1).times_i(), 0.1)


def test_bridge_m0_single_cnot():
    assert bridge_expand([0, 1], []) == [("cnot", 0, 1)]


@pytest.mark.parametrize("variant", ["center", "right"])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_bridge_overhead(m, variant):
    assert bridge_overhead(m, variant) == 4 * m
    assert len(bridge_expand(list(range(m + 2)), list(range(1, m + 1)), variant)) == 2 * m + 1


@pytest.mark.parametrize("variant", ["center", "right"])
def test_bridge_m4_tail_parity(variant):
    chain = list(range(6))
    gates = bridge_expand(chain, chain[1:-1], variant) + bridge_uncompute(chain, variant)
    c = Circuit(6, gates, QubitLayout.line(6))
    for bits in range(64):
        v = np.zeros(64)
        v[bits] = 1
        out = int(np.argmax(np.abs(c.simulate(v))))
        w = [(bits >> q) & 1 for q in range(6)]
        assert [(out >> q) & 1 for q in range(5)] == w[:5]
        assert (out >> 5) & 1 == w[0] ^ w[5]


def test_bridge_rejects_bad_interior():
    with pytest.raises(ValueError):
        bridge_expand([0, 1, 2], [2])
