"""Initialization and propagator circuits on a layout.

Run: python demos/circuits_tour.py
"""

import numpy as np

from latticemap import aqcode, circuits, oracle
from latticemap._lattice import QubitLayout
from latticemap.pauli import PauliString

rng = np.random.default_rng(0)
code = aqcode.build_square(3, 3)
init = circuits.synth_init(code)
v = np.zeros(2 ** code.n, complex)
psi = rng.normal(size=2 ** code.N) + 1j * rng.normal(size=2 ** code.N)
v[: 2 ** code.N] = psi / np.linalg.norm(psi)
out = init.simulate(v)
worst = max(abs(np.vdot(out, oracle.apply_string(s, out)) - 1) for s in code.stabilizers)
print(f"square 3x3 init: {init.count('cnot')} CNOTs, depth {init.depth}, max |<S>-1| = {worst:.1e}")
for l1 in range(2, 7):
    print(f"  l1={l1}: depth {circuits.synth_init(aqcode.build_square(l1, 2)).depth}")

h = PauliString.from_label("X1 Z2 Z3 Z4 Z5 Z6 Z7 X8", 8)
gadget = circuits.synth_propagator(h, 0.3, QubitLayout.line(8))
target = np.cos(0.3) * np.eye(256) + 1j * np.sin(0.3) * h.to_matrix()
print(f"\nexp(i 0.3 {h.to_label()}): {gadget.count('cnot')} CNOTs, depth {gadget.depth}, "
      f"error {np.linalg.norm(gadget.unitary() - target, 2):.1e}")
print("bridge overhead for m skipped qubits:", {m: circuits.bridge_overhead(m) for m in range(1, 5)})
