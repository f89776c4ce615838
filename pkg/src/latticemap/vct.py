"""Verstraete-Cirac transform as a quantum code on the square lattice.

Data qubit of mode ``k`` comes first (S-pattern order, empty modes removed),
then one primed auxiliary ``k'`` for every ``k`` in ``W`` (sorted). The
stabilizers live on the edges of vertex-disjoint, uniformly directed loops:

* ``α < β``: ``(-1)^b (⊗_{α<j≤β} Z_j) Y_{α'} (⊗_{k∈W, α<k<β} Z_{k'}) Y_{β'}``
* ``α > β``: ``(-1)^b (⊗_{β<j≤α} Z_j) X_{β'} (⊗_{k∈W, β<k<α} Z_{k'}) X_{α'}``

A Majorana ``m_k`` (``mbar_k``) maps to its Jordan-Wigner image times
``⊗_{j∈W, j<k} Z_{j'}`` and the sign ``(-1)^{Σ_{j∈W, j<k} χ_j}``.

In the layout odd rows hold data ``(i, j)`` at ``x = 2i - 2`` and even rows at
``x = 2i``; primed qubits sit at ``x = 2i - 1`` so they align vertically.
"""

from __future__ import annotations

import dataclasses
import functools
from collections import deque
from collections.abc import Mapping, Sequence

from latticemap import fermion
from latticemap._lattice import QubitLayout, s_coord, s_index
from latticemap.fermion import FermionSum, MajoranaFactor, Species
from latticemap.gf2 import StabilizerGroup, span_equal
from latticemap.pauli import PauliString, PauliSum, commutes, mul_string

__all__ = ["VctCode", "build_vct", "build_sparse_vct", "vct_stabilizer", "vct_transform",
           "vct_route", "hubbard_vct"]


class VctRoutingError(ValueError):
    """Raised when a path uses a vertical link without a stabilizer."""


def _loop_edges(loop: Sequence[int]) -> list[tuple[int, int]]:
    if len(loop) == 1:
        return [(loop[0], loop[0])]
    return [(loop[s], loop[(s + 1) % len(loop)]) for s in range(len(loop))]


@dataclasses.dataclass(eq=False)
class VctCode:
    """A VCT quantum code.

    Attributes:
        N: Number of modes (including empty ones).
        l1: Lattice width.
        l2: Lattice height.
        loops: Directed vertex cycles of 1-based modes.
        b: Sign bit per directed edge ``(α, β)``.
        chi: Auxiliary configuration, one bit per member of ``W`` (sorted).
        empty: Modes fixed to the vacuum whose data qubits are removed.
        layout: Qubit layout.
    """

    N: int
    l1: int
    l2: int
    loops: list[tuple[int, ...]]
    b: dict[tuple[int, int], int] = dataclasses.field(default_factory=dict)
    chi: tuple[int, ...] = ()
    empty: frozenset[int] = frozenset()
    layout: QubitLayout | None = None

    def __post_init__(self):
        seen: set[int] = set()
        for loop in self.loops:
            if len(set(loop)) != len(loop) or seen & set(loop):
                raise ValueError("loops must be vertex-disjoint simple cycles")
            seen |= set(loop)
        if not all(1 <= k <= self.N for k in seen):
            raise ValueError("loop vertex outside the mode range")
        self.b = {e: int(self.b.get(e, 0)) % 2 for e in self.edges}
        if not self.chi:
            self.chi = default_chi(self.W, self.loops, self.b)
        self.chi = tuple(int(c) % 2 for c in self.chi)
        if len(self.chi) != len(self.W):
            raise ValueError("chi needs one bit per auxiliary qubit")
        for loop in self.loops:
            if loop_parity(self, loop) != sum(self.chi[self._wpos[k]] for k in loop) % 2:
                raise ValueError(f"chi violates the parity constraint of loop {loop}")
        if self.layout is None:
            self.layout = vct_layout(self)

    # -- registers ------------------------------------------------------------------
    @functools.cached_property
    def W(self) -> tuple[int, ...]:
        """Modes owning a primed auxiliary, sorted."""
        return tuple(sorted(k for loop in self.loops for k in loop))

    @functools.cached_property
    def _wpos(self) -> dict[int, int]:
        return {k: p for p, k in enumerate(self.W)}

    @functools.cached_property
    def edges(self) -> list[tuple[int, int]]:
        """Directed stabilized edges ``(α, β)`` loop by loop."""
        return [e for loop in self.loops for e in _loop_edges(loop)]

    @functools.cached_property
    def _data_modes(self) -> list[int]:
        return [k for k in range(1, self.N + 1) if k not in self.empty]

    @functools.cached_property
    def _dpos(self) -> dict[int, int]:
        return {k: q for q, k in enumerate(self._data_modes)}

    @property
    def r(self) -> int:
        """Auxiliary qubit count."""
        return len(self.W)

    @property
    def n_data(self) -> int:
        """Data qubit count after removing empty modes."""
        return len(self._data_modes)

    @property
    def n(self) -> int:
        """Total qubit count."""
        return self.n_data + self.r

    def data_qubit(self, k: int) -> int:
        """0-based qubit of mode ``k``."""
        if k not in self._dpos:
            raise ValueError(f"mode {k} has no data qubit")
        return self._dpos[k]

    def aux_qubit(self, k: int) -> int:
        """0-based qubit of the primed auxiliary ``k'``."""
        if k not in self._wpos:
            raise ValueError(f"mode {k} has no auxiliary qubit")
        return self.n_data + self._wpos[k]

    def mode_of(self, q: int) -> tuple[int, bool]:
        """``(mode, primed)`` of qubit ``q``."""
        if q < self.n_data:
            return self._data_modes[q], False
        return self.W[q - self.n_data], True

    def index(self, i: int, j: int) -> int:
        """S-pattern mode of site ``(i, j)``."""
        return s_index(i, j, self.l1)

    def coord(self, k: int) -> tuple[int, int]:
        """Site of mode ``k``."""
        return s_coord(k, self.l1)

    def build(self, data: Mapping[int, str], aux: Mapping[int, str], phase: int = 0) -> PauliString:
        """String from mode-labelled data and primed operators.

        Z on an empty mode acts trivially and is dropped.

        Raises:
            ValueError: If X or Y lands on an empty mode.
        """
        ops = {}
        for k, op in data.items():
            if k in self.empty:
                if op != "Z":
                    raise ValueError(f"operator {op} on empty mode {k}")
                continue
            ops[self.data_qubit(k)] = op
        for k, op in aux.items():
            ops[self.aux_qubit(k)] = op
        return PauliString.from_ops(self.n, ops, phase)

    # -- stabilizers ----------------------------------------------------------------
    @functools.cached_property
    def stabilizers(self) -> list[PauliString]:
        """One stabilizer per directed edge."""
        return [vct_stabilizer(self, a, c, self.b[(a, c)]) for a, c in self.edges]

    @functools.cached_property
    def group(self) -> StabilizerGroup:
        """Stabilizer group."""
        return StabilizerGroup(self.stabilizers)

    def edge(self, u: int, v: int) -> tuple[int, int] | None:
        """The stabilized directed edge joining ``u`` and ``v`` (either direction)."""
        if (u, v) in self.b:
            return (u, v)
        if (v, u) in self.b:
            return (v, u)
        return None

    def stabilizer_between(self, u: int, v: int) -> PauliString:
        """Stabilizer on the edge joining ``u`` and ``v``."""
        e = self.edge(u, v)
        if e is None:
            raise VctRoutingError(f"modes {u} and {v} share no stabilized edge")
        return vct_stabilizer(self, e[0], e[1], self.b[e])

    def loop_product(self, loop: Sequence[int]) -> PauliString:
        """Ordered product of the stabilizers around ``loop``."""
        out = PauliString.identity(self.n)
        for a, c in _loop_edges(loop):
            out = mul_string(out, vct_stabilizer(self, a, c, self.b[(a, c)]))
        return out

    # -- logical operators ----------------------------------------------------------
    def majorana_image(self, factor: MajoranaFactor) -> PauliString:
        """Adjusted image of ``m_k`` or ``mbar_k``."""
        k = factor.mode
        if not 1 <= k <= self.N:
            raise ValueError(f"mode {k} outside 1..{self.N}")
        data = {j: "Z" for j in range(1, k)}
        data[k] = "X" if factor.species == Species.M else "Y"
        below = [j for j in self.W if j < k]
        sign = sum(self.chi[self._wpos[j]] for j in below) % 2
        return self.build(data, {j: "Z" for j in below}, 2 * sign)

    def ladder_image(self, k: int, dagger: bool) -> PauliSum:
        """Image of ``c†_k`` (``dagger``) or ``c_k``."""
        m = PauliSum.from_string(self.majorana_image(MajoranaFactor(k, Species.M)))
        mb = PauliSum.from_string(self.majorana_image(MajoranaFactor(k, Species.MBAR)))
        return (m + mb * (-1j if dagger else 1j)) * 0.5

    def local_tiles(self) -> list[PauliString]:
        """Local generators: adjacent vertical products plus already-local edges."""
        return local_tiling(self)

    def describe(self) -> dict:
        """Summary for reports."""
        return {"mapping": "vct", "l1": self.l1, "l2": self.l2, "modes": self.N,
                "data_qubits": self.n_data, "aux_qubits": self.r, "qubits": self.n,
                "loops": [list(lp) for lp in self.loops], "chi": list(self.chi),
                "empty": sorted(self.empty)}


def vct_stabilizer(code: VctCode, alpha: int, beta: int, b: int = 0) -> PauliString:
    """Stabilizer ``P^b_{αβ}`` of a directed edge.

    Args:
        code: The code (for ``W`` and qubit numbering).
        alpha: Tail mode.
        beta: Head mode.
        b: Sign bit.

    Returns:
        The signed string; a self-loop gives ``(-1)^{1+b} Z_{α'}``.

    Raises:
        ValueError: If an endpoint has no primed auxiliary.
    """
    for k in (alpha, beta):
        if k not in code._wpos:
            raise ValueError(f"mode {k} is not in W")
    if alpha == beta:
        return code.build({}, {alpha: "Z"}, 2 * ((1 + b) % 2))
    lo, hi = min(alpha, beta), max(alpha, beta)
    end = "Y" if alpha < beta else "X"
    aux = {k: "Z" for k in code.W if lo < k < hi}
    aux[lo] = aux[hi] = end
    return code.build({j: "Z" for j in range(lo + 1, hi + 1)}, aux, 2 * (b % 2))


def loop_parity(code: VctCode, loop: Sequence[int]) -> int:
    """Required parity of ``χ`` on a loop: ``(1 + Σ b) mod 2``."""
    return (1 + sum(code.b[e] for e in _loop_edges(loop))) % 2


def default_chi(W: Sequence[int], loops: Sequence[Sequence[int]], b: Mapping) -> tuple[int, ...]:
    """Lexicographically smallest configuration meeting every loop parity."""
    pos = {k: p for p, k in enumerate(sorted(W))}
    chi = [0] * len(pos)
    for loop in loops:
        if (1 + sum(b.get(e, 0) for e in _loop_edges(loop))) % 2:
            chi[max(pos[k] for k in loop)] = 1
    return tuple(chi)


# -- construction ------------------------------------------------------------------
def _column_pair_loop(l1: int, l2: int, left: int, right: int) -> tuple[int, ...]:
    up = [s_index(left, j, l1) for j in range(1, l2 + 1)]
    down = [s_index(right, j, l1) for j in range(l2, 0, -1)]
    return tuple(up + down)


def _last_column_loops(l1: int, l2: int, col: int) -> list[tuple[int, ...]]:
    return [(s_index(col, j, l1), s_index(col, j + 1, l1)) for j in range(1, l2, 2)]


def vct_layout(code: VctCode) -> QubitLayout:
    """Planar layout with shifted rows so primed qubits align vertically."""
    pos = {}
    for k in range(1, code.N + 1):
        i, j = s_coord(k, code.l1)
        if k not in code.empty:
            pos[code.data_qubit(k)] = (float(2 * i - 2 if j % 2 else 2 * i), float(j - 1))
        if k in code._wpos:
            pos[code.aux_qubit(k)] = (float(2 * i - 1), float(j - 1))
    layout = QubitLayout.grid(pos)
    # rows with missing primed qubits stay connected along the S-pattern
    rows: dict[float, list[tuple[float, int]]] = {}
    for q, (x, y) in pos.items():
        rows.setdefault(y, []).append((x, q))
    for items in rows.values():
        items.sort()
        for (_, a), (_, c) in zip(items, items[1:]):
            layout.edges.add((min(a, c), max(a, c)))
    layout._adj = None
    return layout


def build_vct(l1: int, l2: int, b: Mapping | None = None, chi: Sequence[int] = (),
              columns: Sequence[int] | None = None, empty: Sequence[int] = ()) -> VctCode:
    """Original VCT graph: loops around pairs of columns spanning the full height.

    For an odd number of columns the last one gets two-vertex loops on the row
    pairs ``(1, 2), (3, 4), ...`` so that every mode keeps its auxiliary (a
    final odd row stays without one).

    Args:
        l1: Lattice width.
        l2: Lattice height.
        b: Optional sign bits per directed edge.
        chi: Optional auxiliary configuration (default: lexicographically smallest).
        columns: Columns owning auxiliaries (default all); paired left to right.
        empty: Modes fixed to the vacuum whose data qubits are removed.

    Returns:
        The code.
    """
    if l1 < 1 or l2 < 1:
        raise ValueError("lattice dimensions must be positive")
    cols = list(range(1, l1 + 1)) if columns is None else sorted(columns)
    if any(not 1 <= c <= l1 for c in cols):
        raise ValueError("column outside the lattice")
    loops = [_column_pair_loop(l1, l2, cols[a], cols[a + 1]) for a in range(0, len(cols) - 1, 2)]
    if len(cols) % 2:
        loops += _last_column_loops(l1, l2, cols[-1])
    return VctCode(l1 * l2, l1, l2, loops, dict(b or {}), tuple(chi), frozenset(empty))


def build_sparse_vct(l1: int, l2: int, period: int, chi: Sequence[int] = ()) -> VctCode:
    """Qubit-economic VCT with auxiliaries every ``period`` columns.

    Raises:
        ValueError: Unless ``(l1 - 1)/period`` is an odd integer.
    """
    if period < 1 or (l1 - 1) % period or ((l1 - 1) // period) % 2 == 0:
        raise ValueError("(l1 - 1)/period must be an odd integer")
    return build_vct(l1, l2, chi=chi, columns=list(range(1, l1 + 1, period)))


def aux_count_sparse_vct(l1: int, l2: int, period: int) -> int:
    """``l2 + (l1 - 1) l2 / period``."""
    return l2 + (l1 - 1) * l2 // period


# -- transforms --------------------------------------------------------------------
def vct_transform(code: VctCode, f: FermionSum) -> PauliSum:
    """Maps a fermionic operator to the logical Pauli sum.

    Raises:
        ValueError: On a mode count mismatch.
    """
    if f.n_modes != code.N:
        raise ValueError(f"operator has {f.n_modes} modes, code {code.N}")
    out = PauliSum(code.n)
    for t in f.terms:
        acc = PauliSum.identity(code.n, t.coeff)
        for m, d in t.factors:
            acc = acc * code.ladder_image(m, d)
            if len(acc) == 0:
                break
        out = out + acc
    return out


def majorana_pair(code: VctCode, a: MajoranaFactor, c: MajoranaFactor) -> PauliString:
    """Image of the product ``a c`` (times ``i`` when Hermiticity needs it)."""
    s = mul_string(code.majorana_image(a), code.majorana_image(c))
    return s if s.is_hermitian() else s.times_i()


def manhattan_path(code: VctCode, a: int, c: int, strategy: str = "col-then-row") -> list[int]:
    """Mode path from ``a`` to ``c`` along lattice edges.

    Args:
        code: The code.
        a: Start mode.
        c: End mode.
        strategy: ``"col-then-row"``, ``"row-then-col"``, ``"shortest"`` (BFS
            over routable links) or ``"via:<column>"`` (row, then the given
            column, then row).

    Returns:
        Modes along the path, endpoints included.
    """
    (i1, j1), (i2, j2) = code.coord(a), code.coord(c)
    if strategy == "shortest":
        return _shortest_routable(code, a, c)
    if strategy == "col-then-row":
        corners = [(i1, j2)]
    elif strategy == "row-then-col":
        corners = [(i2, j1)]
    elif strategy.startswith("via:"):
        col = int(strategy[4:])
        corners = [(col, j1), (col, j2)]
    else:
        raise ValueError(f"unknown routing strategy {strategy!r}")
    path = [(i1, j1)]
    for ti, tj in corners + [(i2, j2)]:
        i, j = path[-1]
        while i != ti:
            i += 1 if ti > i else -1
            path.append((i, j))
        while j != tj:
            j += 1 if tj > j else -1
            path.append((i, j))
    return [code.index(i, j) for i, j in path]


def _routable(code: VctCode, u: int, v: int) -> bool:
    return code.coord(u)[1] == code.coord(v)[1] or abs(u - v) == 1 or code.edge(u, v) is not None


def _shortest_routable(code: VctCode, a: int, c: int) -> list[int]:
    prev = {a: None}
    todo = deque([a])
    while todo:
        u = todo.popleft()
        if u == c:
            break
        i, j = code.coord(u)
        for ii, jj in ((i, j - 1), (i, j + 1), (i - 1, j), (i + 1, j)):
            if 1 <= ii <= code.l1 and 1 <= jj <= code.l2:
                v = code.index(ii, jj)
                if v not in prev and _routable(code, u, v):
                    prev[v] = u
                    todo.append(v)
    if c not in prev:
        raise VctRoutingError(f"no routable path between modes {a} and {c}")
    path = [c]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


def vct_route(code: VctCode, term: PauliString, path="col-then-row",
              windings: bool = True) -> PauliString:
    """Multiplies ``term`` by the stabilizers of the vertical steps of a path.

    The X/Y data endpoints are paired in mode order and each pair is joined by
    its own path. A vertical step with a stabilized edge contributes that
    stabilizer; a step between S-pattern neighbours without one is local
    already.

    Args:
        code: The code.
        term: Logical string commuting with the stabilizers.
        path: A strategy of :func:`manhattan_path`, ``"best"`` (lightest result
            over every column between the endpoints, both winding options and
            the BFS path) or an explicit list of modes (single pair).
        windings: Also multiply at stabilized steps between S-pattern neighbours.

    Returns:
        The deformed string.

    Raises:
        VctRoutingError: If a vertical step is neither stabilized nor local.
    """
    if not isinstance(path, str):
        return _route_modes(code, term, list(path), windings)
    ends = sorted(code.mode_of(q)[0] for q in range(code.n_data) if (term.x >> q) & 1)
    if len(ends) % 2:
        raise VctRoutingError("odd number of X/Y endpoints")
    out = term
    for a, c in zip(ends[0::2], ends[1::2]):
        if path != "best":
            out = _route_modes(code, out, manhattan_path(code, a, c, path), windings)
            continue
        (i1, _), (i2, _) = code.coord(a), code.coord(c)
        options = [f"via:{col}" for col in range(min(i1, i2), max(i1, i2) + 1)] + ["shortest"]
        best = None
        for st in options:
            for w in (True, False):
                try:
                    cand = _route_modes(code, out, manhattan_path(code, a, c, st), w)
                except VctRoutingError:
                    continue
                if best is None or cand.weight < best.weight:
                    best = cand
        if best is None:
            raise VctRoutingError(f"no routable path between modes {a} and {c}")
        out = best
    return out


def _route_modes(code: VctCode, term: PauliString, modes: Sequence[int],
                 windings: bool = True) -> PauliString:
    out = term
    for u, v in zip(modes, modes[1:]):
        (iu, ju), (iv, jv) = code.coord(u), code.coord(v)
        if abs(iu - iv) + abs(ju - jv) != 1:
            raise VctRoutingError(f"path step {u}->{v} is not a lattice edge")
        if ju == jv:
            continue
        local = abs(u - v) == 1
        if code.edge(u, v) is None:
            if local:
                continue
            raise VctRoutingError(f"modes {u} and {v} share no stabilized edge")
        if local and not windings:
            continue
        out = mul_string(out, code.stabilizer_between(u, v))
    return out


def layout_displacement(code: VctCode, a: int, c: int) -> tuple[int, int]:
    """``(x, y)`` between the data qubits of two modes in the shifted layout.

    ``x`` counts data columns (two layout units each).
    """
    def pos(k):
        i, j = code.coord(k)
        return (i - 1 if j % 2 else i), j

    (x1, y1), (x2, y2) = pos(a), pos(c)
    return abs(x1 - x2), abs(y1 - y2)


def route_sum(code: VctCode, H: PauliSum, strategy: str = "best") -> PauliSum:
    """Routes every term of a logical Hamiltonian."""
    return H.map_strings(lambda s: vct_route(code, s, strategy))


# -- tiling ------------------------------------------------------------------------
def local_tiling(code: VctCode) -> list[PauliString]:
    """Local generators of the stabilizer group.

    Per row pair the vertical stabilizers of horizontally adjacent columns are
    multiplied pairwise; the winding stabilizer and all non-vertical edges are
    local already.
    """
    out = []
    vertical: dict[int, list[tuple[int, PauliString]]] = {}
    for (a, c), s in zip(code.edges, code.stabilizers):
        (ia, ja), (ic, jc) = code.coord(a), code.coord(c)
        if ia == ic and abs(ja - jc) == 1:
            vertical.setdefault(min(ja, jc), []).append((ia, s))
        else:
            out.append(s)
    for j, items in sorted(vertical.items()):
        items.sort(key=lambda t: t[0])
        out.append(items[-1][1] if j % 2 else items[0][1])
        out.extend(mul_string(x, y) for (_, x), (_, y) in zip(items, items[1:]))
    return out


def tiling_equivalent(code: VctCode) -> bool:
    """True iff the local tiling spans the stabilizer group."""
    return span_equal(local_tiling(code), code.stabilizers)


def checkerboard(code: VctCode) -> list[dict]:
    """Tiles with a two-coloring by the parity of their leftmost lowest site."""
    out = []
    for s in local_tiling(code):
        sites = [code.layout.positions[q] for q in s.support]
        x, y = min(sites, key=lambda p: (p[1], p[0]))
        out.append({"pauli": s.to_label(), "weight": s.weight,
                    "color": "dark" if (int(x) + int(y)) % 2 else "light"})
    return out


# -- Hubbard -----------------------------------------------------------------------
def hubbard_modes(L: int) -> tuple[int, int, dict[int, int], frozenset[int]]:
    """Placement of the ``L x L`` Hubbard model on an ``(L+1) x 2L`` mode grid.

    Spin up of site ``(x, y)`` sits in row ``2y - 1`` and spin down in row
    ``2y``, both at layout column ``2x``; the perimeter modes are empty.

    Returns:
        ``(l1, l2, mapping, empty)`` where ``mapping`` sends the mode labels of
        :func:`latticemap.fermion.hubbard` to VCT modes.
    """
    l1, l2 = L + 1, 2 * L
    mapping = {}
    for y in range(1, L + 1):
        for x in range(1, L + 1):
            for spin_up, row in ((True, 2 * y - 1), (False, 2 * y)):
                col = x + 1 if row % 2 else x
                old = s_index(2 * x if spin_up else 2 * x - 1, y, 2 * L)
                mapping[old] = s_index(col, row, l1)
    used = set(mapping.values())
    empty = frozenset(k for k in range(1, l1 * l2 + 1) if k not in used)
    return l1, l2, mapping, empty


def hubbard_vct(L: int, **params) -> tuple[VctCode, PauliSum]:
    """Fermi-Hubbard model compiled with the VCT on ``4L² + 2L`` qubits.

    Args:
        L: Side length in sites.
        **params: ``t_h``, ``t_v``, ``eps``, ``U`` as in :func:`latticemap.fermion.hubbard`.

    Returns:
        ``(code, H)`` with ``H`` the unrouted logical Hamiltonian.
    """
    l1, l2, mapping, empty = hubbard_modes(L)
    code = build_vct(l1, l2, empty=sorted(empty))
    f = fermion.relabel(fermion.hubbard(L, **params), mapping, code.N)
    return code, vct_transform(code, f)


def commutes_with_code(code: VctCode, s: PauliString) -> bool:
    """True iff ``s`` commutes with every stabilizer."""
    return all(commutes(s, g) for g in code.stabilizers)
