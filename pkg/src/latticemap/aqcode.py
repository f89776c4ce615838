"""Auxiliary Qubit codes and the lattice Auxiliary Qubit Mappings (AQMs).

Data qubits ``0..N-1`` carry a Jordan-Wigner (or other linear) encoding; the
auxiliary register ``N..N+r-1`` is entangled with it so that every stabilizer
``S_i = p^i ⊗ σ^i`` has eigenvalue +1. Three flavors are supported:

* ``computational``: ``p^i`` is a Z-string given by row ``i`` of ``B`` and
  ``σ^i = Z_{N+i}``;
* ``hadamard``: commuting strings ``p^i`` with ``σ^i = X_{N+i}``;
* ``anticommuting``: arbitrary ``p^i`` with
  ``γ^i = (⊗_{k<i} Z_{N+k}^{i⋆k}) ⊗ X_{N+i}``.

A data string ``h`` is adjusted to ``h ⊗ κ^h``, where ``κ^h`` contains the
auxiliary Pauli that anticommutes with ``σ^k`` for every ``p^k`` that
anticommutes with ``h``.

Lattice sites are ``(i, j)`` with column ``i`` and row ``j`` (1-based). On the
square and sparse AQM the auxiliary qubit of a vertical connection sits at
``(i, j + 1/2)``.
"""

from __future__ import annotations

import dataclasses
import functools
from collections.abc import Iterable, Sequence

from latticemap import linmap
from latticemap._lattice import QubitLayout, s_coord, s_index
from latticemap.fermion import FermionSum
from latticemap.gf2 import BitMatrix, StabilizerGroup, span_equal
from latticemap.linmap import LinearEncoder
from latticemap.pauli import PauliString, PauliSum, commutes, mul_string

COMPUTATIONAL = "computational"
HADAMARD = "hadamard"
ANTICOMMUTING = "anticommuting"

__all__ = [
    "AuxCode", "QubitLayout", "RoutingError", "build_e_type", "build_square", "build_sparse",
    "build_anticommuting", "computational_code", "hadamard_code", "adjusted_transform",
    "adjust_string", "reduce_mod_stabilizers", "route_string", "local_tiling",
]


class RoutingError(ValueError):
    """Raised when a string cannot be routed with the available connections."""


@dataclasses.dataclass(eq=False)
class AuxCode:
    """An Auxiliary Qubit code on ``N`` data and ``r`` auxiliary qubits.

    Attributes:
        flavor: ``computational``, ``hadamard`` or ``anticommuting``.
        N: Data qubit count.
        r: Auxiliary qubit count.
        p_strings: Data-register strings ``p^i`` (on ``N`` qubits, phase 0).
        aux_strings: Auxiliary-register parts ``σ^i`` or ``γ^i`` (on ``r`` qubits).
        chi: Sign bits; stabilizer ``i`` is ``(-1)^chi[i] p^i ⊗ σ^i``.
        encoder: Underlying linear encoder on the data register.
        layout: Qubit layout (``None`` means unconstrained).
        kind: ``generic``, ``e-type``, ``square`` or ``sparse``.
        l1: Lattice width for lattice AQMs.
        l2: Lattice height for lattice AQMs.
        period: Connection periodicity of the sparse AQM.
        aux_sites: For lattice AQMs, the site ``(i, j)`` each auxiliary belongs
            to: a row ``(0, k)`` for the E-type, the connection ``(i, j)``
            between rows ``j`` and ``j+1`` otherwise.
    """

    flavor: str
    N: int
    r: int
    p_strings: list[PauliString]
    aux_strings: list[PauliString]
    chi: tuple[int, ...] = ()
    encoder: LinearEncoder | None = None
    layout: QubitLayout | None = None
    kind: str = "generic"
    l1: int | None = None
    l2: int | None = None
    period: int | None = None
    aux_sites: list[tuple[int, int]] = dataclasses.field(default_factory=list)

    def __post_init__(self):
        if not self.chi:
            self.chi = (0,) * self.r
        if len(self.chi) != self.r or len(self.p_strings) != self.r or len(self.aux_strings) != self.r:
            raise ValueError("inconsistent auxiliary count")
        if self.encoder is None:
            self.encoder = linmap.jordan_wigner(self.N)
        stabs = self.stabilizers
        for a in range(self.r):
            for b in range(a + 1, self.r):
                if not commutes(stabs[a], stabs[b]):
                    raise ValueError(f"stabilizers {a + 1} and {b + 1} anticommute")

    @property
    def n(self) -> int:
        """Total qubit count."""
        return self.N + self.r

    @functools.cached_property
    def stabilizers(self) -> list[PauliString]:
        """Signed stabilizer generators on all ``N + r`` qubits."""
        out = []
        for p, a, c in zip(self.p_strings, self.aux_strings, self.chi):
            s = p.canonical().tensor(a.canonical())
            out.append(-s if c % 2 else s)
        return out

    @functools.cached_property
    def group(self) -> StabilizerGroup:
        """The stabilizer group with its reduced basis."""
        g = StabilizerGroup(self.stabilizers)
        if g.rank != self.r:
            raise ValueError("stabilizer generators are not independent")
        return g

    @functools.cached_property
    def _tau(self) -> list[PauliString]:
        # auxiliary Pauli anticommuting with exactly the k-th auxiliary part
        lab = "X" if self.flavor == COMPUTATIONAL else "Z"
        return [PauliString.single(self.n, self.N + k, lab) for k in range(self.r)]

    # -- matrices of the generic description -------------------------------------
    @property
    def B(self) -> BitMatrix:
        """Z-support matrix of the ``p^i`` (the defining matrix of the computational flavor)."""
        return BitMatrix(self.r, self.N, tuple(p.z & ~p.x for p in self.p_strings))

    @property
    def CX(self) -> BitMatrix:
        """Rows mark qubits where ``p^i`` acts as X."""
        return BitMatrix(self.r, self.N, tuple(p.x & ~p.z for p in self.p_strings))

    @property
    def CY(self) -> BitMatrix:
        """Rows mark qubits where ``p^i`` acts as Y."""
        return BitMatrix(self.r, self.N, tuple(p.x & p.z for p in self.p_strings))

    @property
    def CZ(self) -> BitMatrix:
        """Rows mark qubits where ``p^i`` acts as Z."""
        return self.B

    # -- lattice helpers -------------------------------------------------------------
    def data_qubit(self, i: int, j: int) -> int:
        """0-based data qubit of lattice site ``(i, j)``."""
        return self.encoder.index(i, j) - 1

    def site_of(self, q: int) -> tuple[int, int]:
        """Lattice site of 0-based data qubit ``q``."""
        return s_coord(q + 1, self.l1)

    def aux_qubit(self, site: tuple[int, int]) -> int:
        """0-based qubit index of the auxiliary attached to ``site``."""
        try:
            return self.N + self.aux_sites.index(tuple(site))
        except ValueError:
            raise RoutingError(f"no auxiliary at {site}") from None

    def has_connection(self, i: int, j: int) -> bool:
        """True iff an auxiliary links ``(i, j)`` and ``(i, j+1)``."""
        return self.kind in ("square", "sparse") and (i, j) in self._site_set

    @functools.cached_property
    def _site_set(self) -> set[tuple[int, int]]:
        return set(self.aux_sites)

    def stabilizer_at(self, i: int, j: int) -> PauliString:
        """Stabilizer of the connection ``(i, j + 1/2)``."""
        return self.stabilizers[self.aux_qubit((i, j)) - self.N]

    def describe(self) -> dict:
        """Summary used by the CLI."""
        return {"flavor": self.flavor, "kind": self.kind, "data_qubits": self.N,
                "aux_qubits": self.r, "total_qubits": self.n, "l1": self.l1, "l2": self.l2,
                "periodicity": self.period}


# -- generic constructors ------------------------------------------------------------
def computational_code(B: BitMatrix, chi: Sequence[int] = (), encoder: LinearEncoder | None = None,
                       layout: QubitLayout | None = None) -> AuxCode:
    """Computational-basis code with ``p^i = ⊗_j Z_j^{B_ij}`` and ``σ^i = Z_{N+i}``."""
    r, N = B.rows, B.cols
    p = [PauliString(N, 0, row) for row in B.data]
    aux = [PauliString.single(r, k, "Z") for k in range(r)]
    return AuxCode(COMPUTATIONAL, N, r, p, aux, tuple(chi), encoder, layout)


def hadamard_code(p_strings: Sequence[PauliString], chi: Sequence[int] = (),
                  encoder: LinearEncoder | None = None, layout: QubitLayout | None = None) -> AuxCode:
    """Hadamard-basis code with commuting ``p^i`` and ``σ^i = X_{N+i}``.

    Raises:
        ValueError: If two strings anticommute (use :func:`build_anticommuting`).
    """
    p = [s.canonical() for s in p_strings]
    r = len(p)
    aux = [PauliString.single(r, k, "X") for k in range(r)]
    return AuxCode(HADAMARD, p[0].n, r, p, aux, tuple(chi), encoder, layout)


def star(p_list: Sequence[PauliString], i: int, k: int) -> int:
    """``i ⋆ k``: 1 if ``p^i`` and ``p^k`` anticommute, else 0 (0-based)."""
    return 0 if commutes(p_list[i], p_list[k]) else 1


def build_anticommuting(p_list: Sequence[PauliString], encoder: LinearEncoder | None = None,
                        layout: QubitLayout | None = None) -> AuxCode:
    """Code stabilizing arbitrary strings with ``γ^i = (⊗_{k<i} Z_{N+k}^{i⋆k}) ⊗ X_{N+i}``.

    Args:
        p_list: Data strings, possibly anticommuting.
        encoder: Underlying linear encoder.
        layout: Optional qubit layout.

    Returns:
        The code.
    """
    p = [s.canonical() for s in p_list]
    r = len(p)
    aux = []
    for i in range(r):
        ops = {k: "Z" for k in range(i) if star(p, i, k)}
        ops[i] = "X"
        aux.append(PauliString.from_ops(r, ops))
    return AuxCode(ANTICOMMUTING, p[0].n, r, p, aux, (), encoder, layout)


# -- lattice AQMs ----------------------------------------------------------------------
def _data_positions(l1: int, l2: int) -> dict[int, tuple[float, float]]:
    return {s_index(i, j, l1) - 1: (float(i), float(j)) for j in range(1, l2 + 1)
            for i in range(1, l1 + 1)}


def build_e_type(l1: int, l2: int, chi: Sequence[int] = ()) -> AuxCode:
    """E-type AQM: one computational-basis auxiliary per lattice row.

    Stabilizer ``k`` is ``(⊗_{i ∈ row k} Z_i) ⊗ Z_{N+k}``. Auxiliary ``k`` sits
    at ``(0, k)`` left of its row; the auxiliaries form a vertical spine.

    Args:
        l1: Lattice width.
        l2: Lattice height.
        chi: Optional sign bits.

    Returns:
        The code.
    """
    if l1 < 1 or l2 < 1:
        raise ValueError("lattice dimensions must be positive")
    N = l1 * l2
    rows = [sum(1 << (s_index(i, k, l1) - 1) for i in range(1, l1 + 1)) for k in range(1, l2 + 1)]
    pos = _data_positions(l1, l2)
    for k in range(1, l2 + 1):
        pos[N + k - 1] = (0.0, float(k))
    code = computational_code(BitMatrix(l2, N, tuple(rows)), chi, linmap.jw_s_pattern(l1, l2),
                              QubitLayout.grid(pos))
    code.kind, code.l1, code.l2 = "e-type", l1, l2
    code.aux_sites = [(0, k) for k in range(1, l2 + 1)]
    return code


def connection_p(l1: int, l2: int, i: int, j: int) -> PauliString:
    """Data string ``p^{(i, j+1/2)}`` of the vertical connection at column ``i``.

    Odd ``j``: Z on ``(k, j)`` and ``(k, j+1)`` for ``k > i``, then
    ``Y_{(i,j)} X_{(i,j+1)}``. Even ``j``: Z on ``(k, j)`` and ``(k, j+1)`` for
    ``k < i``, then ``X_{(i,j)} Y_{(i,j+1)}``.
    """
    N = l1 * l2
    q = lambda a, b: s_index(a, b, l1) - 1  # noqa: E731
    ops = {}
    if j % 2:
        for k in range(i + 1, l1 + 1):
            ops[q(k, j)] = "Z"
            ops[q(k, j + 1)] = "Z"
        ops[q(i, j)] = "Y"
        ops[q(i, j + 1)] = "X"
    else:
        for k in range(1, i):
            ops[q(k, j)] = "Z"
            ops[q(k, j + 1)] = "Z"
        ops[q(i, j)] = "X"
        ops[q(i, j + 1)] = "Y"
    return PauliString.from_ops(N, ops)


def _connected_aqm(l1: int, l2: int, columns: list[int], kind: str, period: int,
                   chi: Sequence[int]) -> AuxCode:
    N = l1 * l2
    sites = [(i, j) for j in range(1, l2) for i in columns]
    p = [connection_p(l1, l2, i, j) for i, j in sites]
    pos = _data_positions(l1, l2)
    for k, (i, j) in enumerate(sites):
        pos[N + k] = (float(i), j + 0.5)
    where = {v: q for q, v in pos.items()}
    edges = set()
    for q, (x, y) in pos.items():
        if y == int(y):
            o = where.get((x + 1, y))
            if o is not None:
                edges.add((q, o))
        else:
            for o in (where.get((x, y - 0.5)), where.get((x, y + 0.5)), where.get((x + 1, y))):
                if o is not None:
                    edges.add((min(q, o), max(q, o)))
    r = len(sites)
    aux = [PauliString.single(r, k, "X") for k in range(r)]
    code = AuxCode(HADAMARD, N, r, p, aux, tuple(chi), linmap.jw_s_pattern(l1, l2),
                   QubitLayout(pos, edges), kind, l1, l2, period, sites)
    return code


def build_square(l1: int, l2: int, chi: Sequence[int] = ()) -> AuxCode:
    """Square-lattice AQM with an auxiliary on every vertical connection.

    Args:
        l1: Lattice width.
        l2: Lattice height.
        chi: Optional sign bits.

    Returns:
        The code with ``r = l1 (l2 - 1)``.
    """
    if l1 < 1 or l2 < 1:
        raise ValueError("lattice dimensions must be positive")
    return _connected_aqm(l1, l2, list(range(1, l1 + 1)), "square", 1, chi)


def sparse_columns(l1: int, period: int) -> list[int]:
    """Connection columns ``1, 1+I, ..., l1`` of the sparse AQM."""
    if period < 1 or (l1 > 1 and period > l1 - 1) or (l1 - 1) % period:
        raise ValueError(f"periodicity {period} must divide l1 - 1 = {l1 - 1}")
    return list(range(1, l1 + 1, period))


def build_sparse(l1: int, l2: int, period: int, chi: Sequence[int] = ()) -> AuxCode:
    """Sparse AQM with vertical connections every ``period`` columns.

    Args:
        l1: Lattice width.
        l2: Lattice height.
        period: Connection periodicity; must divide ``l1 - 1``.
        chi: Optional sign bits.

    Returns:
        The code with ``r = (l2 - 1)((l1 - 1)/period + 1)``.

    Raises:
        ValueError: On a divisibility violation.
    """
    if l1 < 1 or l2 < 1:
        raise ValueError("lattice dimensions must be positive")
    return _connected_aqm(l1, l2, sparse_columns(l1, period), "sparse", period, chi)


# -- adjustments -----------------------------------------------------------------------
def adjust_string(code: AuxCode, h: PauliString) -> PauliString:
    """Returns ``h ⊗ κ^h`` for a data string ``h`` (phase kept).

    Args:
        code: The code.
        h: String on the ``N`` data qubits.

    Returns:
        The adjusted string on ``N + r`` qubits.
    """
    if h.n != code.N:
        raise ValueError(f"data string has {h.n} qubits, code has {code.N}")
    out = h.extend(code.n)
    for k, p in enumerate(code.p_strings):
        if not commutes(h, p):
            out = mul_string(out, code._tau[k])
    return out


def adjusted_transform(code: AuxCode, e: LinearEncoder | None, f: FermionSum) -> PauliSum:
    """Maps ``f`` through the encoder and adjusts every term.

    This equals the transform with redefined update, flip and parity sets,
    because the adjustment is multiplicative on Pauli strings.

    Args:
        code: The code.
        e: Linear encoder on the data register (defaults to ``code.encoder``).
        f: Fermionic operator.

    Returns:
        The logical operator on ``N + r`` qubits.
    """
    e = code.encoder if e is None else e
    if e.n != code.N:
        raise ValueError("encoder and code sizes differ")
    return linmap.transform(e, f).map_strings(lambda s: adjust_string(code, s))


def logical_majorana(code: AuxCode, factor) -> PauliString:
    """Adjusted image of a Majorana operator."""
    return adjust_string(code, code.encoder.majorana_image(factor))


def reduce_mod_stabilizers(s: PauliString, code) -> PauliString:
    """Greedy low-weight coset representative of ``s`` modulo the stabilizers.

    Args:
        s: String commuting with every stabilizer.
        code: Any object exposing ``group`` (and optionally ``local_tiles``).

    Returns:
        A member of ``s · <stabilizers>`` with the sign tracked exactly.

    Raises:
        CosetError: If ``s`` anticommutes with a stabilizer.
    """
    tiles = getattr(code, "local_tiles", None)
    extra = tiles() if callable(tiles) else ()
    return code.group.greedy_reduce(s, extra)


# -- routing ---------------------------------------------------------------------------
def _is_s_consecutive(code: AuxCode, a: tuple[int, int], b: tuple[int, int]) -> bool:
    return abs(code.data_qubit(*a) - code.data_qubit(*b)) == 1


def manhattan_path(code: AuxCode, a: tuple[int, int], b: tuple[int, int],
                   strategy: str = "col-then-row") -> list[tuple[int, int]]:
    """Lattice path from site ``a`` to site ``b``.

    ``col-then-row`` walks along the column of ``a`` to the row of ``b`` and
    then along that row; ``row-then-col`` does the opposite. On the sparse AQM
    vertical moves use the connection column minimizing the total length
    (lowest column on ties).
    """
    (i1, j1), (i2, j2) = a, b

    def walk(path, target):
        i, j = path[-1]
        ti, tj = target
        while i != ti:
            i += 1 if ti > i else -1
            path.append((i, j))
        while j != tj:
            j += 1 if tj > j else -1
            path.append((i, j))
        return path

    if j1 == j2:
        return walk([a], b)
    if code.kind == "sparse":
        cols = sorted({i for i, _ in code.aux_sites})
        c = min(cols, key=lambda c: (abs(i1 - c) + abs(i2 - c), c))
        path = walk([a], (c, j1))
        path = walk(path, (c, j2))
        return walk(path, b)
    if strategy == "col-then-row":
        return walk(walk([a], (i1, j2)), b)
    if strategy == "row-then-col":
        return walk(walk([a], (i2, j1)), b)
    raise ValueError(f"unknown routing strategy {strategy!r}")


def route_path(code: AuxCode, adjusted: PauliString, path: Sequence[tuple[int, int]]) -> PauliString:
    """Multiplies ``adjusted`` by the stabilizer of every vertical step of ``path``.

    Steps between S-pattern neighbours need no stabilizer.

    Raises:
        RoutingError: If a vertical step has no auxiliary connection.
    """
    out = adjusted
    for a, b in zip(path, path[1:]):
        if a[1] == b[1] or _is_s_consecutive(code, a, b):
            continue
        if a[0] != b[0] or abs(a[1] - b[1]) != 1:
            raise RoutingError(f"path step {a}->{b} is not a lattice edge")
        site = (a[0], min(a[1], b[1]))
        if not code.has_connection(*site):
            raise RoutingError(f"no vertical connection at {site}")
        out = mul_string(out, code.stabilizer_at(*site))
    return out


def string_endpoints(code: AuxCode, s: PauliString) -> list[int]:
    """Sorted data qubits where ``s`` acts as X or Y."""
    return [q for q in range(code.N) if (s.x >> q) & 1]


def route_string(code: AuxCode, adjusted: PauliString, path="col-then-row") -> PauliString:
    """Deforms an adjusted string into a lattice-local one.

    The X/Y endpoints of the data part are paired in S-pattern order and each
    pair is joined by a Manhattan path; every vertical step contributes its
    stabilizer.

    Args:
        code: A square or sparse AQM.
        adjusted: String on ``N + r`` qubits commuting with the stabilizers.
        path: ``"col-then-row"``, ``"row-then-col"`` or an explicit list of
            lattice sites (one pair of endpoints only).

    Returns:
        The routed string (same logical action on the code space).

    Raises:
        RoutingError: If the path cannot be realized.
    """
    if code.kind not in ("square", "sparse"):
        raise RoutingError("routing is defined for the square and sparse AQM")
    if not isinstance(path, str):
        return route_path(code, adjusted, list(path))
    ends = string_endpoints(code, adjusted)
    if len(ends) % 2:
        raise RoutingError("odd number of X/Y endpoints")
    out = adjusted
    for a, b in zip(ends[0::2], ends[1::2]):
        out = route_path(code, out, manhattan_path(code, code.site_of(a), code.site_of(b), path))
    return out


def route_sum(code: AuxCode, H: PauliSum, strategy: str = "col-then-row") -> PauliSum:
    """Routes every term of a logical Hamiltonian."""
    return H.map_strings(lambda s: route_string(code, s, strategy))


# -- tiling ----------------------------------------------------------------------------
def local_tiling(code: AuxCode) -> list[PauliString]:
    """Geometrically local generators of the stabilizer group.

    Per row pair: the stabilizer closest to the winding (already local) plus
    the products of horizontally adjacent connection stabilizers.

    Raises:
        ValueError: If the code is not a square or sparse AQM.
    """
    if code.kind not in ("square", "sparse"):
        raise ValueError("local tiling is defined for the square and sparse AQM")
    out = []
    for j in range(1, code.l2):
        cols = sorted(i for i, jj in code.aux_sites if jj == j)
        stabs = [code.stabilizer_at(i, j) for i in cols]
        out.append(stabs[-1] if j % 2 else stabs[0])
        out.extend(mul_string(a, b) for a, b in zip(stabs, stabs[1:]))
    return out


def _local_tiles(code: AuxCode) -> list[PauliString]:
    return local_tiling(code) if code.kind in ("square", "sparse") else []


AuxCode.local_tiles = _local_tiles


def tiling_equivalent(code: AuxCode) -> bool:
    """True iff the local tiling spans the original stabilizer group."""
    return span_equal(local_tiling(code), code.stabilizers)


def aux_count_formula(kind: str, l1: int, l2: int, period: int = 1) -> int:
    """Closed-form auxiliary counts per lattice mapping."""
    return {
        "e-type": l2,
        "square": l1 * l2 - l1,
        "sparse": (l2 - 1) * ((l1 - 1) // period + 1),
        "vct": l1 * l2,
        "bksf": l1 * l2 - l1 - l2,
    }[kind]


def hubbard_aqm(L: int, kind: str = "square", period: int = 1, **params) -> tuple[AuxCode, PauliSum]:
    """Fermi-Hubbard model compiled with a lattice AQM on the ``2L x L`` grid."""
    from latticemap.fermion import hubbard
    l1, l2 = 2 * L, L
    code = {"square": lambda: build_square(l1, l2), "e-type": lambda: build_e_type(l1, l2),
            "sparse": lambda: build_sparse(l1, l2, period)}[kind]()
    return code, adjusted_transform(code, None, hubbard(L, **params))


def iter_sites(l1: int, l2: int) -> Iterable[tuple[int, int]]:
    """All lattice sites row by row."""
    for j in range(1, l2 + 1):
        for i in range(1, l1 + 1):
            yield i, j
