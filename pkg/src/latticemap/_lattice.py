"""Lattice coordinates, the S-pattern order and qubit layouts."""

from __future__ import annotations

import dataclasses
from collections import deque
from collections.abc import Iterable, Mapping


def s_index(i: int, j: int, l1: int) -> int:
    """1-based S-pattern index of lattice site ``(i, j)`` (column, row).

    Row 1 runs left to right, row 2 right to left, and so on.
    """
    if not 1 <= i <= l1 or j < 1:
        raise ValueError(f"site ({i}, {j}) outside a width-{l1} lattice")
    return (j - 1) * l1 + (i if j % 2 else l1 - i + 1)


def s_coord(k: int, l1: int) -> tuple[int, int]:
    """Inverse of :func:`s_index`."""
    if k < 1:
        raise ValueError("mode index must be positive")
    j = (k - 1) // l1 + 1
    off = (k - 1) % l1 + 1
    return (off if j % 2 else l1 - off + 1), j


@dataclasses.dataclass
class QubitLayout:
    """Qubit positions on the plane plus a coupling graph.

    Attributes:
        positions: 0-based qubit index -> (column, row); may be half-integer.
        edges: Undirected couplings as sorted pairs.
    """

    positions: dict[int, tuple[float, float]]
    edges: set[tuple[int, int]] = dataclasses.field(default_factory=set)

    def __post_init__(self):
        self.edges = {tuple(sorted(e)) for e in self.edges}
        self._adj: dict[int, set[int]] | None = None

    @classmethod
    def grid(cls, positions: Mapping[int, tuple[float, float]], step: float = 1.0) -> QubitLayout:
        """Connects qubits whose positions differ by ``step`` along one axis."""
        where = {tuple(p): q for q, p in positions.items()}
        edges = set()
        for q, (x, y) in positions.items():
            for dx, dy in ((step, 0), (0, step)):
                o = where.get((x + dx, y + dy))
                if o is not None:
                    edges.add((min(q, o), max(q, o)))
        return cls(dict(positions), edges)

    @classmethod
    def complete(cls, n: int) -> QubitLayout:
        """All-to-all layout on ``n`` qubits placed on a line."""
        return cls({q: (float(q), 0.0) for q in range(n)},
                   {(a, b) for a in range(n) for b in range(a + 1, n)})

    @classmethod
    def line(cls, n: int) -> QubitLayout:
        """Nearest-neighbour chain."""
        return cls({q: (float(q), 0.0) for q in range(n)}, {(q, q + 1) for q in range(n - 1)})

    @property
    def n(self) -> int:
        """Number of qubits."""
        return len(self.positions)

    def neighbors(self, q: int) -> set[int]:
        """Qubits coupled to ``q``."""
        if self._adj is None:
            adj: dict[int, set[int]] = {k: set() for k in self.positions}
            for a, b in self.edges:
                adj.setdefault(a, set()).add(b)
                adj.setdefault(b, set()).add(a)
            self._adj = adj
        return self._adj.get(q, set())

    def adjacent(self, a: int, b: int) -> bool:
        """True iff ``a`` and ``b`` are coupled."""
        return (min(a, b), max(a, b)) in self.edges

    def is_connected(self, qubits: Iterable[int]) -> bool:
        """True iff ``qubits`` induce a connected subgraph (empty counts as connected)."""
        qs = set(qubits)
        if not qs:
            return True
        start = next(iter(qs))
        seen = {start}
        todo = [start]
        while todo:
            q = todo.pop()
            for o in self.neighbors(q):
                if o in qs and o not in seen:
                    seen.add(o)
                    todo.append(o)
        return seen == qs

    def components(self, qubits: Iterable[int]) -> list[list[int]]:
        """Connected components of the induced subgraph, each sorted."""
        qs = set(qubits)
        out = []
        while qs:
            start = min(qs)
            comp = {start}
            todo = [start]
            while todo:
                q = todo.pop()
                for o in self.neighbors(q):
                    if o in qs and o not in comp:
                        comp.add(o)
                        todo.append(o)
            qs -= comp
            out.append(sorted(comp))
        return out

    def shortest_path(self, a: int, b: int, allowed: Iterable[int] | None = None) -> list[int]:
        """BFS path from ``a`` to ``b`` (lowest-index neighbours first)."""
        ok = None if allowed is None else set(allowed) | {a, b}
        prev = {a: None}
        dq = deque([a])
        while dq:
            q = dq.popleft()
            if q == b:
                break
            for o in sorted(self.neighbors(q)):
                if o not in prev and (ok is None or o in ok):
                    prev[o] = q
                    dq.append(o)
        if b not in prev:
            raise ValueError(f"no path between qubits {a} and {b}")
        path = [b]
        while path[-1] != a:
            path.append(prev[path[-1]])
        return path[::-1]

    def bridge_count(self, qubits: Iterable[int]) -> int:
        """Extra qubits needed to join ``qubits`` into one connected chain (greedy)."""
        comps = self.components(qubits)
        if len(comps) <= 1:
            return 0
        joined = set(comps[0])
        rest = [set(c) for c in comps[1:]]
        extra = 0
        while rest:
            best = None
            for k, comp in enumerate(rest):
                for a in joined:
                    for b in comp:
                        try:
                            p = self.shortest_path(a, b)
                        except ValueError:
                            continue
                        cost = sum(1 for q in p[1:-1] if q not in joined and q not in comp)
                        if best is None or cost < best[0]:
                            best = (cost, k, p)
            if best is None:
                raise ValueError("qubits lie in disconnected parts of the layout")
            cost, k, p = best
            extra += cost
            joined |= rest.pop(k) | set(p)
        return extra

    def to_json(self) -> dict:
        """JSON-ready form with 1-based qubit labels."""
        return {"positions": {str(q + 1): list(p) for q, p in sorted(self.positions.items())},
                "edges": [[a + 1, b + 1] for a, b in sorted(self.edges)]}

    def ascii(self, marks: Mapping[int, str] | None = None) -> str:
        """Renders qubits on a character grid (two cells per unit, top row last)."""
        marks = marks or {}
        xs = [p[0] for p in self.positions.values()]
        ys = [p[1] for p in self.positions.values()]
        if not xs:
            return ""
        x0, y0 = min(xs), min(ys)
        w = int(round((max(xs) - x0) * 2)) + 1
        h = int(round((max(ys) - y0) * 2)) + 1
        grid = [[" "] * w for _ in range(h)]
        for q, (x, y) in self.positions.items():
            cx = int(round((x - x0) * 2))
            cy = int(round((y - y0) * 2))
            grid[cy][cx] = marks.get(q, "o")
        return "\n".join("".join(row).rstrip() for row in reversed(grid))
