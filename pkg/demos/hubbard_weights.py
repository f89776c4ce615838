"""Reproduces the Hubbard string-length table and the qubit-count table.

Run: python demos/hubbard_weights.py
"""

from latticemap import tables

print("interior weights at L=3 (stab | vertical XX|YY|XY|YX | horizontal | hubbard | onsite)")
for mapping in tables.MAPPINGS:
    row = tables.hubbard_weight_table(mapping, 3)
    print(f"  {mapping:5s} {row.format_row()}   read at L={row.source_L}")

print("\nauxiliary qubits on a 6x6 lattice")
for name, c in tables.qubit_counts(6, 6).items():
    print(f"  {name:11s} aux {c['aux']:3d}  total {c['total']:3d}")

print("\nHubbard embeddings (total qubits)")
for L in (1, 2, 3):
    print(f"  L={L}: {tables.hubbard_qubit_totals(L)}")
