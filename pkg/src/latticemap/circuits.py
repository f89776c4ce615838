"""Connectivity-aware synthesis of code initialization and Pauli propagators.

Gates are tuples ``("h", q)``, ``("s", q)``, ``("sdg", q)``, ``("x", q)``,
``("rz", q, angle)`` and ``("cnot", c, t)`` on 0-based qubits, with
``RZ(θ) = diag(e^{-iθ/2}, e^{iθ/2})``. JSON uses 1-based qubits.

A controlled Pauli string is built as in the right-hand pattern of the
controlled-string figure: rotate every target into the Z basis, fan the
parity into a qubit next to the control with a CNOT tree, apply one
controlled-Z, then uncompute.
"""

from __future__ import annotations

import dataclasses
import json
from collections import deque
from collections.abc import Iterable, Sequence

import numpy as np

from latticemap._lattice import QubitLayout
from latticemap.aqcode import ANTICOMMUTING, COMPUTATIONAL, HADAMARD, AuxCode
from latticemap.pauli import PauliString, commutes, mul_string

__all__ = ["Circuit", "ConnectivityError", "UnsupportedCodeError", "circuit_depth", "synth_init",
           "synth_propagator", "bridge_expand", "bridge_uncompute", "controlled_string"]

SINGLE = ("h", "s", "sdg", "x")


class ConnectivityError(ValueError):
    """Raised when a gate or string does not fit the qubit layout."""


class UnsupportedCodeError(ValueError):
    """Raised for codes without a unitary initialization."""


Gate = tuple


@dataclasses.dataclass
class Circuit:
    """Gate list on ``n`` qubits.

    Attributes:
        n: Qubit count.
        gates: Ordered gates.
        layout: Optional connectivity; CNOTs must act on its edges.
    """

    n: int
    gates: list[Gate] = dataclasses.field(default_factory=list)
    layout: QubitLayout | None = None

    def __post_init__(self):
        gates, self.gates = self.gates, []
        self.extend(gates)

    def append(self, gate: Gate) -> None:
        """Adds one gate after validating it."""
        name = gate[0]
        if name == "cnot":
            _, c, t = gate
            if c == t:
                raise ValueError("CNOT needs two distinct qubits")
            if self.layout is not None and not self.layout.adjacent(c, t):
                raise ConnectivityError(f"CNOT({c + 1}, {t + 1}) is not on a layout edge")
            qs = (c, t)
        elif name == "rz":
            qs = (gate[1],)
        elif name in SINGLE:
            qs = (gate[1],)
        else:
            raise ValueError(f"unknown gate {name!r}")
        if any(not 0 <= q < self.n for q in qs):
            raise ValueError(f"gate {gate} outside {self.n} qubits")
        self.gates.append(tuple(gate))

    def extend(self, gates: Iterable[Gate]) -> None:
        """Adds several gates."""
        for g in gates:
            self.append(g)

    def __add__(self, other: Circuit) -> Circuit:
        return Circuit(self.n, self.gates + other.gates, self.layout)

    def __len__(self) -> int:
        return len(self.gates)

    def inverse(self) -> Circuit:
        """The adjoint circuit."""
        inv = {"h": "h", "x": "x", "s": "sdg", "sdg": "s"}
        out = []
        for g in reversed(self.gates):
            if g[0] == "cnot":
                out.append(g)
            elif g[0] == "rz":
                out.append(("rz", g[1], -g[2]))
            else:
                out.append((inv[g[0]], g[1]))
        return Circuit(self.n, out, self.layout)

    def count(self, name: str | None = None) -> int:
        """Number of gates, optionally of one kind."""
        return sum(1 for g in self.gates if name is None or g[0] == name)

    @property
    def depth(self) -> int:
        """ASAP depth, see :func:`circuit_depth`."""
        return circuit_depth(self)

    def to_json(self) -> dict:
        """``{"n": n, "gates": [["cnot", c, t], ["rz", q, angle], ...]}`` (1-based)."""
        gates = []
        for g in self.gates:
            if g[0] == "rz":
                gates.append(["rz", g[1] + 1, float(g[2])])
            else:
                gates.append([g[0]] + [q + 1 for q in g[1:]])
        return {"n": self.n, "gates": gates}

    @classmethod
    def from_json(cls, data: dict | str, layout: QubitLayout | None = None) -> Circuit:
        """Inverse of :meth:`to_json`."""
        if isinstance(data, str):
            data = json.loads(data)
        gates = []
        for g in data["gates"]:
            if g[0] == "rz":
                gates.append(("rz", int(g[1]) - 1, float(g[2])))
            else:
                gates.append((g[0],) + tuple(int(q) - 1 for q in g[1:]))
        return cls(int(data["n"]), gates, layout)

    def to_text(self) -> str:
        """One gate per line, 1-based."""
        lines = []
        for g in self.gates:
            if g[0] == "rz":
                lines.append(f"rz {g[1] + 1} {g[2]:.12g}")
            else:
                lines.append(" ".join([g[0]] + [str(q + 1) for q in g[1:]]))
        return "\n".join(lines)

    def simulate(self, amplitudes: np.ndarray) -> np.ndarray:
        """Applies the circuit to a state vector."""
        from latticemap.oracle import apply_gate

        v = np.asarray(amplitudes, dtype=complex)
        for g in self.gates:
            v = apply_gate(g, v, self.n)
        return v

    def unitary(self) -> np.ndarray:
        """Dense unitary (at most 10 qubits)."""
        if self.n > 10:
            raise ValueError("unitaries are limited to 10 qubits")
        dim = 1 << self.n
        return np.stack([self.simulate(np.eye(dim, dtype=complex)[:, k]) for k in range(dim)], axis=1)


def circuit_depth(c: Circuit | Sequence[Gate]) -> int:
    """Greedy as-soon-as-possible layering; a qubit takes part in one gate per layer."""
    gates = c.gates if isinstance(c, Circuit) else c
    level: dict[int, int] = {}
    depth = 0
    for g in gates:
        qs = g[1:3] if g[0] == "cnot" else g[1:2]
        t = max((level.get(q, 0) for q in qs), default=0) + 1
        for q in qs:
            level[q] = t
        depth = max(depth, t)
    return depth


# -- trees and basis changes ---------------------------------------------------------------
def _layout(layout: QubitLayout | None, n: int) -> QubitLayout:
    return layout if layout is not None else QubitLayout.complete(n)


def _bfs_tree(layout: QubitLayout, nodes: Sequence[int], root: int) -> dict[int, int | None]:
    allowed = set(nodes)
    parent: dict[int, int | None] = {root: None}
    todo = deque([root])
    while todo:
        q = todo.popleft()
        for o in sorted(layout.neighbors(q)):
            if o in allowed and o not in parent:
                parent[o] = q
                todo.append(o)
    if len(parent) != len(allowed):
        raise ConnectivityError(f"support {sorted(q + 1 for q in nodes)} is not connected")
    return parent


def _tree_height(parent: dict[int, int | None]) -> dict[int, int]:
    dist = {}
    for q in parent:
        d, p = 0, q
        while parent[p] is not None:
            p = parent[p]
            d += 1
        dist[q] = d
    return dist


def _fan_in(parent: dict[int, int | None]) -> list[Gate]:
    """CNOTs accumulating the parity of the tree on its root, deepest first."""
    dist = _tree_height(parent)
    order = sorted((q for q in parent if parent[q] is not None), key=lambda q: (-dist[q], q))
    return [("cnot", q, parent[q]) for q in order]


def _to_z(s: PauliString) -> list[Gate]:
    """Single-qubit gates ``V`` with ``V s V† = ±Z-string`` on the support."""
    out = []
    for q, lab in sorted(s.ops().items()):
        if lab == "X":
            out.append(("h", q))
        elif lab == "Y":
            out += [("sdg", q), ("h", q)]
    return out


def _from_z(s: PauliString) -> list[Gate]:
    out = []
    for q, lab in sorted(s.ops().items()):
        if lab == "X":
            out.append(("h", q))
        elif lab == "Y":
            out += [("h", q), ("s", q)]
    return out


def _center(layout: QubitLayout, nodes: Sequence[int], prefer: Sequence[int] | None = None) -> int:
    """Support qubit with the shallowest spanning tree (ties: median index)."""
    cands = list(prefer) if prefer else list(nodes)
    ordered = sorted(nodes)
    median = ordered[(len(ordered) - 1) // 2]
    best = None
    for r in cands:
        h = max(_tree_height(_bfs_tree(layout, nodes, r)).values())
        key = (h, abs(ordered.index(r) - ordered.index(median)) if r in ordered else 0, r)
        if best is None or key < best[0]:
            best = (key, r)
    return best[1]


def _component_trees(layout: QubitLayout, sup: Sequence[int], anchor: int) -> list[tuple[int, list[Gate]]]:
    """Fan-in trees per connected component, each rooted next to ``anchor``."""
    out = []
    for comp in layout.components(sup):
        near = [q for q in comp if layout.adjacent(q, anchor)]
        if not near:
            raise ConnectivityError(f"qubit {anchor + 1} is not adjacent to qubits {[q + 1 for q in comp]}")
        root = _center(layout, comp, near)
        out.append((root, _fan_in(_bfs_tree(layout, comp, root))))
    return out


# -- controlled strings --------------------------------------------------------------
def controlled_string(s: PauliString, control: int, layout: QubitLayout | None = None) -> list[Gate]:
    """Gates applying ``s`` conditioned on ``control`` being ``|1>``.

    Args:
        s: Hermitian string (phase 0 or 2) not acting on ``control``.
        control: Control qubit.
        layout: Connectivity; the support must be connected and touch a
            neighbour of ``control``.

    Returns:
        The gate list.

    Raises:
        ConnectivityError: If the layout does not allow the pattern.
    """
    if (s.x | s.z) >> control & 1:
        raise ValueError("control qubit inside the controlled string")
    if not s.is_hermitian():
        raise ValueError("controlled string must be Hermitian")
    lay = _layout(layout, s.n)
    out: list[Gate] = []
    if s.support:
        trees = _component_trees(lay, s.support, control)
        fan = [g for _, t in trees for g in t]
        link = [g for root, _ in trees for g in (("h", root), ("cnot", control, root), ("h", root))]
        out += _to_z(s) + fan + link + fan[::-1] + _from_z(s)
    if s.phase % 4 == 2:
        out += [("s", control), ("s", control)]
    return out


# -- initialization ------------------------------------------------------------------------
def _computational_init(code: AuxCode) -> Circuit:
    lay = code.layout
    c = Circuit(code.n, [], lay)
    for i, (p, chi) in enumerate(zip(code.p_strings, code.chi)):
        aux = code.N + i
        ext = p.extend(code.n)
        sup = ext.support
        gates: list[Gate] = []
        if sup:
            trees = _component_trees(_layout(lay, code.n), sup, aux)
            fan = [g for _, t in trees for g in t]
            gates = fan + [("cnot", root, aux) for root, _ in trees] + fan[::-1]
        if chi % 2:
            gates.append(("x", aux))
        c.extend(gates)
    return c


def boost_plan(code: AuxCode) -> list[tuple[int, list[int]]]:
    """Order of the controlled strings and the prepared partners multiplied in.

    Strings are prepared lightest first. A string is multiplied by an
    already prepared commuting stabilizer whenever that strictly lowers the
    weight of the conditional string; on the square and sparse AQMs this
    reproduces the sweep from the windings with constant-weight strings.
    The result is grouped by boost depth so that all rows sweep at once.

    Returns:
        ``(i, partners)`` pairs in preparation order.
    """
    r = code.r
    ps = [p for p in code.p_strings]
    order = sorted(range(r), key=lambda i: (ps[i].weight, i))
    done: list[int] = []
    plan = []
    for i in order:
        best_w, best_k = ps[i].weight, None
        for k in done:
            if not commutes(ps[i], ps[k]):
                continue
            w = mul_string(ps[i], ps[k]).weight + 1
            if w < best_w:
                best_w, best_k = w, k
        plan.append((i, [] if best_k is None else [best_k]))
        done.append(i)
    # strings of equal boost depth go out together so that sweeps run in parallel
    rounds: dict[int, int] = {}
    for i, partners in plan:
        rounds[i] = 1 + max((rounds[k] for k in partners), default=-1)
    pos = {i: n for n, (i, _) in enumerate(plan)}
    plan.sort(key=lambda e: (rounds[e[0]], pos[e[0]]))
    # inside a round, disjoint strings share a colour and run in parallel
    sup = {}
    for i, partners in plan:
        mask = ps[i].x | ps[i].z | (1 << (ps[i].n + i))
        for k in partners:
            mask |= ps[k].x | ps[k].z | (1 << (ps[i].n + k))
        sup[i] = mask
    colour: dict[int, int] = {}
    for i, _ in plan:
        used = {colour[k] for k in colour if rounds[k] == rounds[i] and sup[k] & sup[i]}
        colour[i] = min(c for c in range(len(plan) + 1) if c not in used)
    return sorted(plan, key=lambda e: (rounds[e[0]], colour[e[0]], pos[e[0]]))


def _x_init(code: AuxCode) -> Circuit:
    c = Circuit(code.n, [], code.layout)
    N = code.N
    for i in range(code.r):
        if code.chi[i] % 2:
            c.append(("x", N + i))
        c.append(("h", N + i))
    stabs = code.stabilizers
    for i, partners in boost_plan(code):
        u = code.p_strings[i].extend(code.n)
        if code.flavor == ANTICOMMUTING:
            aux = code.aux_strings[i].extend(code.n, N)
            u = mul_string(u, PauliString(code.n, 0, aux.z & ~(1 << (N + i))))
        for k in partners:
            u = mul_string(u, stabs[k])
        c.extend(controlled_string(u, N + i, code.layout))
    return c


def synth_init(code) -> Circuit:
    """Circuit ``V`` with ``V (|φ> ⊗ |0^r>)`` in the code space for every ``|φ>``.

    Args:
        code: An :class:`~latticemap.aqcode.AuxCode`.

    Returns:
        The circuit on ``code.n`` qubits, respecting ``code.layout``.

    Raises:
        UnsupportedCodeError: For VCT and BKSF codes.
    """
    if not isinstance(code, AuxCode):
        raise UnsupportedCodeError(f"no unitary initialization for {type(code).__name__}; "
                                   "use syndrome measurements with the stabilizer tiling")
    if code.flavor == COMPUTATIONAL:
        return _computational_init(code)
    if code.flavor in (HADAMARD, ANTICOMMUTING):
        return _x_init(code)
    raise UnsupportedCodeError(f"unknown flavor {code.flavor!r}")


# -- propagators -----------------------------------------------------------------------------
def _bridged_chain(layout: QubitLayout, sup: Sequence[int]) -> list[int]:
    """Walk through the layout visiting every support qubit, greedy nearest first."""
    left = set(sup)
    start = min(sup, key=lambda q: (len([o for o in layout.neighbors(q) if o in left]), q))
    walk = [start]
    left.discard(start)
    while left:
        best = None
        for t in sorted(left):
            try:
                p = layout.shortest_path(walk[-1], t, allowed=set(range(layout.n)) - set(walk) | {t})
            except ValueError:
                continue
            if any(q in left for q in p[1:-1]):
                continue
            if best is None or len(p) < len(best):
                best = p
        if best is None:
            raise ConnectivityError("support cannot be chained through the layout")
        walk += best[1:]
        left.discard(best[-1])
    return walk


def synth_propagator(h: PauliString, phi: float, layout: QubitLayout | None = None,
                     bridge: bool = False, variant: str = "center") -> Circuit:
    """Circuit for ``exp(i φ h)``.

    Basis changes, a CNOT fan-in to the qubit in the middle of the support,
    ``RZ(-2φ)`` and the uncompute.

    Args:
        h: Hermitian Pauli string.
        phi: Angle in radians.
        layout: Connectivity (``None`` means all-to-all).
        bridge: Allow skipping qubits outside the support.
        variant: Bridge variant, ``"center"`` or ``"right"``.

    Returns:
        The circuit.

    Raises:
        ConnectivityError: If the support is disconnected and ``bridge`` is off.
    """
    if not h.is_hermitian():
        raise ValueError("propagators need a Hermitian string")
    sign = -1.0 if h.phase % 4 == 2 else 1.0
    c = Circuit(h.n, [], layout)
    sup = h.support
    if not sup:
        return c
    lay = _layout(layout, h.n)
    angle = -2.0 * phi * sign
    comps = lay.components(sup)
    if len(comps) == 1:
        root = _center(lay, sup)
        tree = _fan_in(_bfs_tree(lay, sup, root))
        c.extend(_to_z(h) + tree + [("rz", root, angle)] + tree[::-1] + _from_z(h))
        return c
    if not bridge:
        raise ConnectivityError(f"support {[q + 1 for q in sup]} is not connected; enable bridging")
    walk = _bridged_chain(lay, sup)
    involved = [k for k, q in enumerate(walk) if q in set(sup)]
    fan: list[Gate] = []
    for a, b in zip(involved, involved[1:]):
        seg = walk[a:b + 1]
        if len(seg) == 2:
            fan.append(("cnot", seg[0], seg[1]))
        else:
            fan += bridge_expand(seg, seg[1:-1], variant)
    inv = Circuit(h.n, fan).inverse().gates
    c.extend(_to_z(h) + fan + [("rz", walk[-1], angle)] + inv + _from_z(h))
    return c


def bridge_expand(chain: Sequence[int], skipped: Sequence[int], variant: str = "center") -> list[Gate]:
    """CNOT from ``chain[0]`` to ``chain[-1]`` through ``m`` skipped qubits.

    The figure circuits use ``2m + 1`` CNOTs between neighbours and leave the
    skipped qubits scrambled; used twice in a propagator (compute and
    uncompute) the overhead over two plain CNOTs is ``4m``.

    Args:
        chain: Path of adjacent qubits, head first.
        skipped: The interior of the chain.
        variant: ``"center"`` or ``"right"`` panel of the figure.

    Returns:
        The gate list.

    Raises:
        ValueError: If ``skipped`` is not the interior of the chain.
    """
    chain = list(chain)
    if len(chain) < 2:
        raise ValueError("chain needs a head and a tail")
    if sorted(skipped) != sorted(chain[1:-1]):
        raise ValueError("skipped qubits must be exactly the chain interior")
    m = len(chain) - 2
    if m == 0:
        return [("cnot", chain[0], chain[1])]
    q = chain
    if variant == "center":
        out = [("cnot", q[k + 1], q[k]) for k in range(m)]
        out += [("cnot", q[k], q[k + 1]) for k in range(m + 1)]
    elif variant == "right":
        out = [("cnot", q[k], q[k + 1]) for k in range(m, -1, -1)]
        out += [("cnot", q[k], q[k + 1]) for k in range(1, m + 1)]
    else:
        raise ValueError(f"unknown bridge variant {variant!r}")
    return out


def bridge_uncompute(chain: Sequence[int], variant: str = "center") -> list[Gate]:
    """Restores the skipped qubits after :func:`bridge_expand`, keeping the tail."""
    q = list(chain)
    m = len(q) - 2
    if m <= 0:
        return []
    if variant == "center":
        first = [("cnot", q[k + 1], q[k]) for k in range(m)]
        first += [("cnot", q[k], q[k + 1]) for k in range(m)]
        return first[::-1]
    if variant == "right":
        out = [("cnot", q[k], q[k + 1]) for k in range(m - 1, -1, -1)]
        out += [("cnot", q[k], q[k + 1]) for k in range(1, m)]
        return out
    raise ValueError(f"unknown bridge variant {variant!r}")


def bridge_overhead(m: int, variant: str = "center") -> int:
    """Extra gates of a bridged compute/uncompute pair over two plain CNOTs."""
    chain = list(range(m + 2))
    g = bridge_expand(chain, chain[1:-1], variant)
    return 2 * len(g) - 2
