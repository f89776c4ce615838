"""Linear encoders without auxiliary qubits and the ladder-to-Pauli compiler.

An encoder is fixed by an invertible binary matrix ``A`` whose row ``j`` is
the flip set of mode ``j``. Qubit states store ``omega = A^-1 nu`` for mode
occupations ``nu``, so ``nu = A omega``. The operator images are

    c†_j = 1/2 (X on U(j)) (I + Z on F(j)) (Z on P(j)),
    c_j  = 1/2 (X on U(j)) (I - Z on F(j)) (Z on P(j)),

with ``U(j)`` the ones of column ``j`` of ``A^-1`` and ``P(j)`` the ones of
row ``j`` of ``R A``, ``R`` being the strictly lower-triangular ones matrix.
"""

from __future__ import annotations

import dataclasses
import functools
from collections.abc import Sequence

from latticemap import gf2
from latticemap._lattice import s_coord, s_index
from latticemap.fermion import FermionSum, MajoranaFactor, Species
from latticemap.gf2 import BitMatrix, IndexSets
from latticemap.pauli import PauliString, PauliSum


def _zs(n: int, modes) -> PauliString:
    return PauliString.from_ops(n, {m - 1: "Z" for m in modes})


def _xs(n: int, modes) -> PauliString:
    return PauliString.from_ops(n, {m - 1: "X" for m in modes})


@dataclasses.dataclass(frozen=True, eq=False)
class LinearEncoder:
    """A linear fermion-to-qubit encoder.

    Attributes:
        A: Matrix whose rows are the flip sets.
        Ainv: Its inverse.
        sets: Update, flip and parity sets.
        n: Number of modes (and qubits).
        l1: Lattice width when lattice-backed, else ``None``.
        l2: Lattice height when lattice-backed, else ``None``.
        name: Short identifier.
    """

    A: BitMatrix
    Ainv: BitMatrix
    sets: IndexSets
    n: int
    l1: int | None = None
    l2: int | None = None
    name: str = "linear"

    @classmethod
    def from_matrix(cls, A: BitMatrix, name: str = "linear", l1: int | None = None,
                    l2: int | None = None) -> LinearEncoder:
        """Builds an encoder from ``A`` (inverse and sets derived)."""
        Ainv = gf2.invert(A)
        return cls(A, Ainv, gf2.derive_sets(A, Ainv), A.rows, l1, l2, name)

    # -- lattice order ------------------------------------------------------------
    def index(self, i: int, j: int) -> int:
        """S-pattern mode index of lattice site ``(i, j)``."""
        if self.l1 is None:
            raise ValueError("encoder is not lattice-backed")
        if not 1 <= j <= self.l2:
            raise ValueError(f"row {j} outside 1..{self.l2}")
        return s_index(i, j, self.l1)

    def coord(self, k: int) -> tuple[int, int]:
        """Lattice site of mode ``k``."""
        if self.l1 is None:
            raise ValueError("encoder is not lattice-backed")
        return s_coord(k, self.l1)

    # -- operator images -------------------------------------------------------
    @functools.cached_property
    def _images(self) -> dict:
        return {}

    def ladder_image(self, j: int, dagger: bool) -> PauliSum:
        """Pauli image of ``c†_j`` (``dagger``) or ``c_j``."""
        key = (j, dagger)
        cache = self._images
        if key not in cache:
            if not 1 <= j <= self.n:
                raise ValueError(f"mode {j} outside 1..{self.n}")
            n = self.n
            u = PauliSum.from_string(_xs(n, self.sets.update(j)))
            f = PauliSum.from_string(_zs(n, self.sets.flip(j)), 1.0 if dagger else -1.0)
            p = PauliSum.from_string(_zs(n, self.sets.parity(j)))
            cache[key] = u * (PauliSum.identity(n) + f) * p * 0.5
        return cache[key]

    def majorana_image(self, factor: MajoranaFactor) -> PauliString:
        """Pauli image of ``m_j`` or ``mbar_j`` (a single Hermitian string)."""
        j = factor.mode
        cd, c = self.ladder_image(j, True), self.ladder_image(j, False)
        img = cd + c if factor.species == Species.M else (cd - c) * 1j
        ((coeff, s),) = list(img)
        return s.times_i({1: 0, 1j: 1, -1: 2, -1j: 3}[complex(round(coeff.real), round(coeff.imag))])


def transform(e: LinearEncoder, f: FermionSum) -> PauliSum:
    """Maps a fermionic operator to a Pauli sum, factor by factor in order.

    Args:
        e: The encoder.
        f: Operator with ``f.n_modes == e.n``.

    Returns:
        The exact image.

    Raises:
        ValueError: On a mode count mismatch.
    """
    if f.n_modes != e.n:
        raise ValueError(f"operator has {f.n_modes} modes, encoder {e.n}")
    out = PauliSum(e.n)
    for t in f.terms:
        acc = PauliSum.identity(e.n, t.coeff)
        for m, d in t.factors:
            acc = acc * e.ladder_image(m, d)
            if len(acc) == 0:
                break
        out = out + acc
    return out


def jordan_wigner(n: int) -> LinearEncoder:
    """Plain Jordan-Wigner on ``n`` modes (``A = I``)."""
    return LinearEncoder.from_matrix(BitMatrix.identity(n), "jw")


def jw_s_pattern(l1: int, l2: int) -> LinearEncoder:
    """Jordan-Wigner with the S-pattern order on an ``l1 x l2`` lattice."""
    if l1 < 1 or l2 < 1:
        raise ValueError("lattice dimensions must be positive")
    return LinearEncoder.from_matrix(BitMatrix.identity(l1 * l2), "jw", l1, l2)


def parity(n: int) -> LinearEncoder:
    """Parity transform: qubit ``j`` stores the parity of modes ``1..j``."""
    return encoder_from_forest(label_forest(Forest.path(n)), name="parity")


def bk_parent(j: int, n: int) -> int | None:
    """Parent of node ``j`` in the Fenwick tree on ``1..n`` (``None`` for roots)."""
    p = j + (j & -j)
    return p if p <= n else None


def bravyi_kitaev(n: int) -> LinearEncoder:
    """Bravyi-Kitaev encoder from the Fenwick tree truncated to ``n`` nodes."""
    if n < 1:
        raise ValueError("n must be positive")
    parents = [None if bk_parent(j, n) is None else bk_parent(j, n) - 1 for j in range(1, n + 1)]
    forest = Forest.from_parents(parents)
    return encoder_from_forest(forest.with_labels(list(range(1, n + 1))), name="bk")


@dataclasses.dataclass
class Forest:
    """A root-ordered forest of rooted trees on nodes ``0..n-1``.

    Attributes:
        children: ``children[v]`` in left-to-right order.
        roots: Tree roots in line order.
        labels: Optional 1-based labels per node.
    """

    children: list[list[int]]
    roots: list[int]
    labels: list[int] | None = None

    def __post_init__(self):
        n = len(self.children)
        parent = [None] * n
        for v, ch in enumerate(self.children):
            for c in ch:
                if not 0 <= c < n or parent[c] is not None:
                    raise ValueError(f"node {c} has an invalid or repeated parent")
                parent[c] = v
        for r in self.roots:
            if parent[r] is not None:
                raise ValueError(f"root {r} has a parent")
        if sorted(r for r in range(n) if parent[r] is None) != sorted(self.roots):
            raise ValueError("roots do not match parentless nodes")
        self.parent = parent
        seen = set()
        for r in self.roots:
            stack = [r]
            while stack:
                v = stack.pop()
                if v in seen:
                    raise ValueError("cycle detected")
                seen.add(v)
                stack.extend(self.children[v])
        if len(seen) != n:
            raise ValueError("forest contains a cycle")
        if self.labels is not None and sorted(self.labels) != list(range(1, n + 1)):
            raise ValueError("labels must be a permutation of 1..n")

    @classmethod
    def from_parents(cls, parents: Sequence[int | None]) -> Forest:
        """Builds from a parent array (``None`` or ``-1`` marks roots)."""
        n = len(parents)
        children: list[list[int]] = [[] for _ in range(n)]
        roots = []
        for v, p in enumerate(parents):
            if p is None or p < 0:
                roots.append(v)
            else:
                children[p].append(v)
        return cls(children, roots)

    @classmethod
    def path(cls, n: int) -> Forest:
        """A vertical line: node ``v`` is the parent of ``v-1``; root ``n-1``."""
        return cls.from_parents([v + 1 if v + 1 < n else None for v in range(n)])

    @classmethod
    def singletons(cls, n: int) -> Forest:
        """``n`` one-node trees."""
        return cls.from_parents([None] * n)

    @classmethod
    def from_json(cls, data: dict) -> Forest:
        """Parses ``{"trees": [{"parent": [...]}, ...]}`` (tree-local, -1 for root)."""
        parents: list[int | None] = []
        for tree in data["trees"]:
            off = len(parents)
            parents.extend(None if p is None or p < 0 else p + off for p in tree["parent"])
        return cls.from_parents(parents)

    def to_json(self) -> dict:
        """Serializes one parent array per tree."""
        trees = []
        for r in self.roots:
            nodes = self.subtree(r)
            local = {v: i for i, v in enumerate(nodes)}
            trees.append({"parent": [-1 if self.parent[v] is None else local[self.parent[v]]
                                     for v in nodes]})
        return {"trees": trees}

    @property
    def n(self) -> int:
        """Node count."""
        return len(self.children)

    def subtree(self, v: int) -> list[int]:
        """Nodes of the subtree at ``v`` in pre-order."""
        out, stack = [], [v]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(reversed(self.children[u]))
        return out

    def ancestors(self, v: int) -> list[int]:
        """Ancestors of ``v`` from parent to root."""
        out = []
        while self.parent[v] is not None:
            v = self.parent[v]
            out.append(v)
        return out

    @property
    def tau(self) -> int:
        """Number of trees."""
        return len(self.roots)

    @property
    def levels(self) -> int:
        """Maximum number of nodes on a root-to-leaf path (Lambda)."""
        return max((len(self.ancestors(v)) + 1 for v in range(self.n)), default=0)

    @property
    def gamma(self) -> int:
        """Maximum number of children (Gamma)."""
        return max((len(c) for c in self.children), default=0)

    def with_labels(self, labels: Sequence[int]) -> Forest:
        """Returns a copy carrying ``labels``."""
        return Forest([list(c) for c in self.children], list(self.roots), list(labels))


def label_forest(f: Forest) -> Forest:
    """Labels nodes ``1..N`` with the leaf-first labeling program.

    Choices are resolved by taking the leftmost eligible node. The result
    labels every subtree before its root and each tree before the next one.

    Args:
        f: Unlabeled forest.

    Returns:
        A labeled copy of ``f``.
    """
    labels: list[int | None] = [None] * f.n
    counter = 1

    def put(v: int) -> None:
        nonlocal counter
        labels[v] = counter
        counter += 1

    def leftmost_leaf(v: int) -> int:
        while f.children[v]:
            v = f.children[v][0]
        return v

    for root in f.roots:                                   # Lines 1 and 6
        cur = leftmost_leaf(root)                          # Line 2
        put(cur)
        while True:
            p = f.parent[cur]
            sibs = [] if p is None else [s for s in f.children[p] if labels[s] is None]
            if sibs:                                       # Lines 3 and 4
                cur = leftmost_leaf(sibs[0])
                put(cur)
                continue
            if p is not None:                              # Line 5
                put(p)
                cur = p
                continue
            break
    return f.with_labels(labels)


def encoder_from_forest(f: Forest, name: str = "tree") -> LinearEncoder:
    """Builds the encoder with ``F(j) = {j} ∪ children(j)``.

    Args:
        f: Labeled forest.
        name: Identifier stored on the encoder.

    Returns:
        The encoder, validated so that ``U(j)`` is ``j`` plus all its ancestors.

    Raises:
        ValueError: If the forest is unlabeled or the labeling is inconsistent.
    """
    if f.labels is None:
        raise ValueError("forest must be labeled")
    lab = f.labels
    n = f.n
    rows = [set() for _ in range(n)]
    for v in range(n):
        rows[lab[v] - 1] = {lab[v]} | {lab[c] for c in f.children[v]}
    try:
        enc = LinearEncoder.from_matrix(BitMatrix.from_sets(n, rows), name)
    except gf2.SingularMatrixError as exc:
        raise ValueError(f"inconsistent labeling: {exc}") from exc
    for v in range(n):
        expect = {lab[v]} | {lab[a] for a in f.ancestors(v)}
        if set(enc.sets.update(lab[v])) != expect:
            raise ValueError(f"inconsistent labeling at node {v}: update set mismatch")
    return enc


def single_operator_weights(e: LinearEncoder) -> list[int]:
    """Max term weight of the image of each ``c†_j`` and ``c_j``."""
    out = []
    for j in range(1, e.n + 1):
        for d in (True, False):
            out.append(e.ladder_image(j, d).max_weight())
    return out
