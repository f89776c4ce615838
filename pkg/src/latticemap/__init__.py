"""Lattice-aware fermion-to-qubit mappings, circuit synthesis and brute-force oracles."""

from latticemap.fermion import FermionSum, MajoranaFactor, Species, hubbard
from latticemap.pauli import PauliString, PauliSum

__version__ = "0.1.0"

__all__ = ["FermionSum", "MajoranaFactor", "PauliString", "PauliSum", "Species", "hubbard", "__version__"]
