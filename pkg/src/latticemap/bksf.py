"""Bravyi-Kitaev superfast simulation on the square lattice.

Mode ``(i, j)`` is a dark plaquette of a rotated square lattice centred at
``(2i, 2j)``; its corners W, E, N, S sit at ``(2i∓1, 2j)`` and ``(2i, 2j±1)``.
A qubit lives on every corner shared by two plaquettes, i.e. on every edge of
the ``l1 x l2`` mode grid, giving ``2 l1 l2 - l1 - l2`` qubits. Edges point to
``+x`` and ``+y``.

* ``B_k = ⊗ Z`` on the corners of plaquette ``k``;
* ``A_jk = ε_jk X_jk (⊗_{bk ≺_k jk} Z_bk)(⊗_{jc ≺_j jk} Z_jc)``.

Variant 1 orders the corners N, W, E, S and variant 2 orders them S, E, N, W.
Long-range operators use ``A_{k_1 k_l} = i^{e-1} ∏ A_{k_s k_{s+1}}`` over a
path of ``e`` edges, and every white plaquette yields the loop stabilizer
``i^e ∏ A`` (``e = 4``).
"""

from __future__ import annotations

import dataclasses
import functools
import itertools
from collections.abc import Sequence

import numpy as np

from latticemap._lattice import QubitLayout, s_coord, s_index
from latticemap.fermion import FermionSum, MajoranaFactor, Species, hubbard, to_majorana
from latticemap.gf2 import StabilizerGroup
from latticemap.pauli import PauliString, PauliSum, mul_string

__all__ = ["BksfGraph", "build_bksf", "vertex_operator", "edge_operator", "loop_stabilizers",
           "bksf_transform", "hubbard_bksf", "SectorError"]

ORDERINGS = {1: ("N", "W", "E", "S"), 2: ("S", "E", "N", "W")}
_OFFSET = {"W": (-1, 0), "E": (1, 0), "N": (0, 1), "S": (0, -1)}


class SectorError(ValueError):
    """Raised for operators that do not conserve fermionic parity."""


@dataclasses.dataclass(eq=False)
class BksfGraph:
    """Square-lattice BKSF graph.

    Attributes:
        l1: Lattice width.
        l2: Lattice height.
        variant: Corner ordering, 1 or 2.
    """

    l1: int
    l2: int
    variant: int = 2

    def __post_init__(self):
        if self.l1 < 1 or self.l2 < 1:
            raise ValueError("lattice dimensions must be positive")
        if self.variant not in ORDERINGS:
            raise ValueError("variant must be 1 or 2")

    @property
    def N(self) -> int:
        """Number of modes."""
        return self.l1 * self.l2

    def index(self, i: int, j: int) -> int:
        """S-pattern mode of site ``(i, j)``."""
        return s_index(i, j, self.l1)

    def coord(self, k: int) -> tuple[int, int]:
        """Site of mode ``k``."""
        return s_coord(k, self.l1)

    @functools.cached_property
    def edges(self) -> list[tuple[int, int]]:
        """Directed edges ``(j, k)`` with ``ε_jk = +1``, sorted by qubit position."""
        out = []
        for j in range(1, self.l2 + 1):
            for i in range(1, self.l1 + 1):
                if i < self.l1:
                    out.append((self.index(i, j), self.index(i + 1, j)))
                if j < self.l2:
                    out.append((self.index(i, j), self.index(i, j + 1)))
        out.sort(key=lambda e: self._edge_pos(*e)[::-1])
        return out

    def _edge_pos(self, a: int, b: int) -> tuple[int, int]:
        (i1, j1), (i2, j2) = self.coord(a), self.coord(b)
        return (i1 + i2, j1 + j2)

    @functools.cached_property
    def _qubit(self) -> dict[frozenset, int]:
        return {frozenset(e): q for q, e in enumerate(self.edges)}

    @property
    def n(self) -> int:
        """Qubit count ``2 l1 l2 - l1 - l2``."""
        return len(self.edges)

    def qubit(self, j: int, k: int) -> int:
        """Qubit on edge ``jk``."""
        try:
            return self._qubit[frozenset((j, k))]
        except KeyError:
            raise ValueError(f"modes {j} and {k} are not adjacent") from None

    def has_edge(self, j: int, k: int) -> bool:
        """True iff ``jk`` is an edge."""
        return frozenset((j, k)) in self._qubit

    def epsilon(self, j: int, k: int) -> int:
        """Orientation ``ε_jk``."""
        if not self.has_edge(j, k):
            return 0
        return 1 if (j, k) in set(self.edges) else -1

    def corner(self, k: int, side: str) -> int | None:
        """Neighbour of ``k`` through corner ``side`` (W, E, N, S), if any."""
        i, j = self.coord(k)
        di, dj = _OFFSET[side]
        if 1 <= i + di <= self.l1 and 1 <= j + dj <= self.l2:
            return self.index(i + di, j + dj)
        return None

    def side_of(self, k: int, nb: int) -> str:
        """Corner of ``k`` shared with ``nb``."""
        for side in "WENS":
            if self.corner(k, side) == nb:
                return side
        raise ValueError(f"modes {k} and {nb} are not adjacent")

    def earlier(self, k: int, nb: int) -> list[int]:
        """Neighbours ``b`` of ``k`` with ``bk ≺_k nb k``."""
        order = ORDERINGS[self.variant]
        pos = order.index(self.side_of(k, nb))
        return [b for b in (self.corner(k, s) for s in order[:pos]) if b is not None]

    @functools.cached_property
    def layout(self) -> QubitLayout:
        """Rotated lattice: qubits at corner positions, coupled diagonally."""
        pos = {}
        for q, (a, b) in enumerate(self.edges):
            (i1, j1), (i2, j2) = self.coord(a), self.coord(b)
            pos[q] = (float(i1 + i2), float(j1 + j2))
        where = {p: q for q, p in pos.items()}
        edges = set()
        for q, (x, y) in pos.items():
            for dx, dy in ((1, 1), (1, -1)):
                o = where.get((x + dx, y + dy))
                if o is not None:
                    edges.add((min(q, o), max(q, o)))
        return QubitLayout(pos, edges)

    def white_plaquettes(self) -> list[tuple[int, int, int, int]]:
        """Counter-clockwise mode loops around each white plaquette."""
        out = []
        for j in range(1, self.l2):
            for i in range(1, self.l1):
                out.append((self.index(i, j), self.index(i + 1, j),
                            self.index(i + 1, j + 1), self.index(i, j + 1)))
        return out

    @functools.cached_property
    def stabilizers(self) -> list[PauliString]:
        """Loop stabilizers, one per white plaquette."""
        return loop_stabilizers(self)

    @functools.cached_property
    def group(self) -> StabilizerGroup:
        """Stabilizer group."""
        return StabilizerGroup(self.stabilizers)

    def local_tiles(self) -> list[PauliString]:
        """The loop stabilizers are local already."""
        return list(self.stabilizers)

    def describe(self) -> dict:
        """Summary for reports."""
        return {"mapping": "bksf", "l1": self.l1, "l2": self.l2, "variant": self.variant,
                "qubits": self.n, "stabilizers": len(self.stabilizers)}


def build_bksf(l1: int, l2: int, variant: int = 2) -> BksfGraph:
    """Square-lattice BKSF graph on an ``l1 x l2`` mode grid.

    Args:
        l1: Lattice width.
        l2: Lattice height.
        variant: Corner ordering (2 connects long-range strings, 1 does not).

    Returns:
        The graph.
    """
    return BksfGraph(l1, l2, variant)


def vertex_operator(g: BksfGraph, k: int, sign: int = 1) -> PauliString:
    """``B_k``: Z on every qubit of plaquette ``k``."""
    ops = {g.qubit(k, b): "Z" for b in (g.corner(k, s) for s in "WENS") if b is not None}
    return PauliString.from_ops(g.n, ops, 0 if sign > 0 else 2)


def _local_edge(g: BksfGraph, j: int, k: int) -> PauliString:
    ops = {g.qubit(b, k): "Z" for b in g.earlier(k, j)}
    ops.update({g.qubit(j, c): "Z" for c in g.earlier(j, k)})
    ops[g.qubit(j, k)] = "X"
    return PauliString.from_ops(g.n, ops, 0 if g.epsilon(j, k) > 0 else 2)


def mode_path(g: BksfGraph, a: int, b: int, strategy: str = "col-then-row") -> list[int]:
    """Lattice path of modes from ``a`` to ``b``.

    Args:
        g: The graph.
        a: Start mode.
        b: End mode.
        strategy: ``"col-then-row"`` (vertical first), ``"row-then-col"`` or
            ``"staircase"`` (alternating steps, cutting corners).

    Returns:
        Modes along the path, endpoints included.
    """
    (i1, j1), (i2, j2) = g.coord(a), g.coord(b)
    di, dj = (i2 > i1) - (i2 < i1), (j2 > j1) - (j2 < j1)
    steps_i, steps_j = abs(i2 - i1), abs(j2 - j1)
    if strategy == "col-then-row":
        moves = ["j"] * steps_j + ["i"] * steps_i
    elif strategy == "row-then-col":
        moves = ["i"] * steps_i + ["j"] * steps_j
    elif strategy == "staircase":
        moves = []
        while steps_i or steps_j:
            if steps_j >= steps_i and steps_j:
                moves.append("j")
                steps_j -= 1
            if steps_i:
                moves.append("i")
                steps_i -= 1
    else:
        raise ValueError(f"unknown path strategy {strategy!r}")
    path = [(i1, j1)]
    for m in moves:
        i, j = path[-1]
        path.append((i + di, j) if m == "i" else (i, j + dj))
    return [g.index(i, j) for i, j in path]


def edge_operator(g: BksfGraph, j: int, k: int, path: Sequence[int] | str | None = None) -> PauliString:
    """``A_jk`` for neighbours, or the long-range product along a path.

    Args:
        g: The graph.
        j: First mode.
        k: Second mode.
        path: Mode sequence from ``j`` to ``k`` or a :func:`mode_path`
            strategy; required only for non-adjacent modes.

    Returns:
        The Hermitian string; ``A_kj = -A_jk``.

    Raises:
        ValueError: If the path is not a connected lattice walk from ``j`` to ``k``.
    """
    if j == k:
        raise ValueError("edge operator needs two distinct modes")
    if path is None:
        if g.has_edge(j, k):
            return _local_edge(g, j, k)
        path = "col-then-row"
    seq = mode_path(g, j, k, path) if isinstance(path, str) else list(path)
    if seq[0] != j or seq[-1] != k:
        raise ValueError("path must start at j and end at k")
    out = PauliString.identity(g.n)
    for u, v in zip(seq, seq[1:]):
        if not g.has_edge(u, v):
            raise ValueError(f"path step {u}->{v} is not an edge")
        out = mul_string(out, _local_edge(g, u, v))
    return out.times_i(len(seq) - 2)


def loop_stabilizers(g: BksfGraph) -> list[PauliString]:
    """``i^e ∏ A`` around every white plaquette."""
    out = []
    for loop in g.white_plaquettes():
        s = PauliString.identity(g.n)
        for u, v in zip(loop, loop[1:] + loop[:1]):
            s = mul_string(s, _local_edge(g, u, v))
        out.append(s.times_i(len(loop)))
    return out


# -- transform ---------------------------------------------------------------------
def _sector_sign(sector, k: int) -> int:
    if sector == "even":
        return 1
    k0 = sector[1] if isinstance(sector, tuple) else 1
    return -1 if k == k0 else 1


def _normalize_sector(sector):
    if sector in ("even", None):
        return "even"
    if sector == "odd":
        return ("odd", 1)
    if isinstance(sector, tuple) and sector[0] == "odd":
        return ("odd", int(sector[1]))
    raise ValueError(f"unknown sector {sector!r}")


def monomial_image(g: BksfGraph, monomial: Sequence[MajoranaFactor], sector="even",
                   path: str = "col-then-row") -> PauliString:
    """Image of a normal-ordered Majorana monomial of even length.

    ``m_k mbar_k = i B_k``, ``mbar_k = i m_k B_k`` and ``m_a m_b = i A_ab``;
    singles are paired in mode order.

    Raises:
        SectorError: For an odd number of Majoranas.
    """
    sector = _normalize_sector(sector)
    if len(monomial) % 2:
        raise SectorError("BKSF maps parity-conserving operators only")
    phase = 0
    syms: list[tuple[str, int]] = []
    facs = list(monomial)
    idx = 0
    while idx < len(facs):
        f = facs[idx]
        nxt = facs[idx + 1] if idx + 1 < len(facs) else None
        if f.species == Species.M and nxt is not None and nxt.mode == f.mode:
            phase += 1
            syms.append(("B", f.mode))
            idx += 2
            continue
        if f.species == Species.M:
            syms.append(("M", f.mode))
        else:
            phase += 1
            syms += [("M", f.mode), ("B", f.mode)]
        idx += 1
    ms = [k for t, k in syms if t == "M"]
    bs = []
    for p, (t, k) in enumerate(syms):
        if t == "B":
            phase += 2 * sum(1 for t2, k2 in syms[p + 1:] if t2 == "M" and k2 == k)
            bs.append(k)
    out = PauliString.identity(g.n)
    for a, b in zip(ms[0::2], ms[1::2]):
        phase += 1
        out = mul_string(out, edge_operator(g, a, b, None if g.has_edge(a, b) else path))
    for k in bs:
        out = mul_string(out, vertex_operator(g, k, _sector_sign(sector, k)))
    return out.times_i(phase)


def bksf_transform(g: BksfGraph, f: FermionSum, sector="even", path: str = "col-then-row") -> PauliSum:
    """Maps a parity-conserving fermionic operator.

    Args:
        g: The graph.
        f: Operator on ``g.N`` modes.
        sector: ``"even"``, ``"odd"`` (switch plaquette 1) or ``("odd", k0)``.
        path: Path strategy for long-range edge operators, or ``"best"`` to pick
            the lightest image per monomial.

    Returns:
        The logical Pauli sum.

    Raises:
        SectorError: If a term changes fermionic parity.
    """
    if f.n_modes != g.N:
        raise ValueError(f"operator has {f.n_modes} modes, graph {g.N}")
    out = PauliSum(g.n)
    for coeff, mono in to_majorana(f):
        if path == "best":
            img = min((monomial_image(g, mono, sector, st) for st in PATH_STRATEGIES),
                      key=lambda s: s.weight)
        else:
            img = monomial_image(g, mono, sector, path)
        out = out + PauliSum.from_string(img, coeff)
    return out


PATH_STRATEGIES = ("col-then-row", "row-then-col", "staircase")


def hubbard_bksf(L: int, variant: int = 2, sector="even", path: str = "col-then-row",
                 **params) -> tuple[BksfGraph, PauliSum]:
    """Fermi-Hubbard model on the ``2L x L`` mode grid (``4L² - 3L`` qubits)."""
    g = build_bksf(2 * L, L, variant)
    return g, bksf_transform(g, hubbard(L, **params), sector, path)


def pair_image(g: BksfGraph, a: MajoranaFactor, b: MajoranaFactor, sector="even",
               path: str = "col-then-row") -> PauliString:
    """Image of ``a b`` for two Majoranas on different modes (sign from reordering)."""
    if (a.mode, a.species) > (b.mode, b.species):
        return -pair_image(g, b, a, sector, path)
    return monomial_image(g, (a, b), sector, path)


# -- states ------------------------------------------------------------------------
def configuration_state(g: BksfGraph, xi: Sequence[int]) -> np.ndarray:
    """``∏ (1 + S)/√2 |ξ>`` as a normalized amplitude vector."""
    from latticemap.oracle import project

    if len(xi) != g.n:
        raise ValueError("one bit per qubit required")
    v = np.zeros(1 << g.n, dtype=complex)
    v[sum(int(b) << q for q, b in enumerate(xi))] = 1.0
    v = project(g.stabilizers, v)
    return v / np.linalg.norm(v)


def vacuum_state(g: BksfGraph) -> np.ndarray:
    """Encoded vacuum."""
    return configuration_state(g, [0] * g.n)


def occupations(g: BksfGraph, xi: Sequence[int]) -> list[int]:
    """Occupation of each mode: parity of the set qubits around its plaquette."""
    out = []
    for k in range(1, g.N + 1):
        nbs = [g.corner(k, s) for s in "WENS"]
        out.append(sum(int(xi[g.qubit(k, b)]) for b in nbs if b is not None) % 2)
    return out


def iter_pairs(g: BksfGraph):
    """All unordered mode pairs."""
    return itertools.combinations(range(1, g.N + 1), 2)


# -- tiling ------------------------------------------------------------------------
def skip_penalty(g: BksfGraph, s: PauliString) -> int:
    """Two per qubit that a CNOT chain over the support must skip."""
    return 2 * g.layout.bridge_count(s.support)


def brickwork_tiling(g: BksfGraph) -> list[dict]:
    """Loop-stabilizer tiles with a colouring of the overlap graph.

    In variant 2 tiles overlap along a triangular (brickwork) pattern and
    ``(i + j) mod 3`` is a proper three-colouring. Otherwise colours are
    assigned greedily. Each colour class is a layer of disjoint tiles.
    """
    sites = [(i, j) for j in range(1, g.l2) for i in range(1, g.l1)]
    supports = [set(s.support) for s in g.stabilizers]
    colours = [(i + j) % 3 for i, j in sites]

    def clash(a: int, b: int) -> bool:
        return colours[a] == colours[b] and bool(supports[a] & supports[b])

    if any(clash(a, b) for a in range(len(sites)) for b in range(a)):
        colours = []
        for a in range(len(sites)):
            used = {colours[b] for b in range(a) if supports[a] & supports[b]}
            colours.append(min(c for c in range(len(sites) + 1) if c not in used))
    return [{"plaquette": [i, j], "colour": c, "qubits": sorted(q + 1 for q in sup),
             "stabilizer": str(s)}
            for (i, j), c, sup, s in zip(sites, colours, supports, g.stabilizers)]
