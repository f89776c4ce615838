"""Binary linear algebra over GF(2) for encoders and stabilizer groups.

:class:`BitMatrix` stores each row as a Python integer with bit ``c`` holding
column ``c`` (0-based). Index sets returned to users are 1-based, matching the
mode labels ``1..N``.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Iterable, Sequence

from latticemap.pauli import PauliString, commutes, mul_string


class SingularMatrixError(ValueError):
    """Raised when inverting a singular matrix."""


class CosetError(ValueError):
    """Raised when a string does not commute with the stabilizer group."""


@dataclasses.dataclass(frozen=True)
class BitMatrix:
    """Dense GF(2) matrix with integer-packed rows.

    Attributes:
        rows: Number of rows.
        cols: Number of columns.
        data: Tuple of row bit masks.
    """

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ValueError("row count mismatch")
        limit = 1 << self.cols
        if any(r < 0 or r >= limit for r in self.data):
            raise ValueError("row wider than column count")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        """All-zero matrix."""
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        """Identity matrix."""
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]]) -> BitMatrix:
        """Builds from nested 0/1 lists, e.g. ``[[1, 0], [1, 1]]``."""
        cols = len(rows[0]) if rows else 0
        data = []
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
            data.append(sum(1 << c for c, v in enumerate(r) if v % 2))
        return cls(len(rows), cols, tuple(data))

    @classmethod
    def from_sets(cls, n: int, sets: Sequence[Iterable[int]], cols: int | None = None) -> BitMatrix:
        """Row ``j`` has ones at the 1-based columns listed in ``sets[j]``."""
        cols = n if cols is None else cols
        return cls(len(sets), cols, tuple(sum(1 << (c - 1) for c in set(s)) for s in sets))

    def to_lists(self) -> list[list[int]]:
        """Nested 0/1 lists."""
        return [[(r >> c) & 1 for c in range(self.cols)] for r in self.data]

    def __getitem__(self, idx: tuple[int, int]) -> int:
        r, c = idx
        return (self.data[r] >> c) & 1

    def row_set(self, r: int) -> frozenset[int]:
        """1-based column indices of the ones in 0-based row ``r``."""
        v = self.data[r]
        return frozenset(c + 1 for c in range(self.cols) if (v >> c) & 1)

    def col_set(self, c: int) -> frozenset[int]:
        """1-based row indices of the ones in 0-based column ``c``."""
        return frozenset(r + 1 for r in range(self.rows) if (self.data[r] >> c) & 1)

    def transpose(self) -> BitMatrix:
        """Matrix transpose."""
        out = [0] * self.cols
        for r, v in enumerate(self.data):
            c = 0
            while v:
                if v & 1:
                    out[c] |= 1 << r
                v >>= 1
                c += 1
        return BitMatrix(self.cols, self.rows, tuple(out))

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for v in self.data:
            acc = 0
            c = 0
            while v:
                if v & 1:
                    acc ^= other.data[c]
                v >>= 1
                c += 1
            out.append(acc)
        return BitMatrix(self.rows, other.cols, tuple(out))

    def __add__(self, other: BitMatrix) -> BitMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return BitMatrix(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.data, other.data)))

    def hstack(self, other: BitMatrix) -> BitMatrix:
        """Horizontal concatenation ``[self | other]``."""
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        return BitMatrix(self.rows, self.cols + other.cols,
                         tuple(a | (b << self.cols) for a, b in zip(self.data, other.data)))

    def matvec(self, v: int) -> int:
        """Product with a column vector given as a bit mask."""
        out = 0
        for r, row in enumerate(self.data):
            if (row & v).bit_count() & 1:
                out |= 1 << r
        return out

    def rank(self) -> int:
        """GF(2) rank."""
        return len(_echelon(list(self.data)))

    def is_identity(self) -> bool:
        """True iff square identity."""
        return self.rows == self.cols and all(v == 1 << i for i, v in enumerate(self.data))


def _echelon(rows: list[int]) -> list[int]:
    basis: list[int] = []
    for v in rows:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return basis


def invert(m: BitMatrix) -> BitMatrix:
    """GF(2) inverse by Gauss-Jordan elimination with lowest-index pivots.

    Args:
        m: Square matrix.

    Returns:
        ``m^-1`` with ``m^-1 m = I``.

    Raises:
        SingularMatrixError: If ``m`` is singular or not square.
    """
    if m.rows != m.cols:
        raise SingularMatrixError("matrix is not square")
    n = m.rows
    a = list(m.data)
    inv = [1 << i for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if (a[r] >> col) & 1), None)
        if piv is None:
            raise SingularMatrixError(f"singular at column {col + 1}")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        for r in range(n):
            if r != col and (a[r] >> col) & 1:
                a[r] ^= a[col]
                inv[r] ^= inv[col]
    return BitMatrix(n, n, tuple(inv))


def build_R(n: int) -> BitMatrix:
    """Strictly lower-triangular all-ones matrix (prefix parity)."""
    if n < 1:
        raise ValueError("n must be positive")
    return BitMatrix(n, n, tuple((1 << r) - 1 for r in range(n)))


@dataclasses.dataclass(frozen=True)
class IndexSets:
    """Update, flip and parity sets, 1-based and indexed by mode ``j``.

    Attributes:
        U: ``U[j-1]`` is the update set of mode ``j``.
        F: ``F[j-1]`` is the flip set of mode ``j``.
        P: ``P[j-1]`` is the parity set of mode ``j``.
    """

    U: tuple[frozenset[int], ...]
    F: tuple[frozenset[int], ...]
    P: tuple[frozenset[int], ...]

    def update(self, j: int) -> frozenset[int]:
        """Update set of 1-based mode ``j``."""
        return self.U[j - 1]

    def flip(self, j: int) -> frozenset[int]:
        """Flip set of 1-based mode ``j``."""
        return self.F[j - 1]

    def parity(self, j: int) -> frozenset[int]:
        """Parity set of 1-based mode ``j``."""
        return self.P[j - 1]


def derive_sets(A: BitMatrix, Ainv: BitMatrix) -> IndexSets:
    """Reads F from rows of ``A``, P from rows of ``R·A``, U from columns of ``A^-1``.

    Args:
        A: Square encoder matrix.
        Ainv: Its GF(2) inverse.

    Returns:
        The index sets.

    Raises:
        ValueError: If ``Ainv`` is not the inverse of ``A``.
    """
    if not (Ainv @ A).is_identity():
        raise ValueError("Ainv is not the inverse of A")
    n = A.rows
    RA = build_R(n) @ A
    return IndexSets(
        U=tuple(Ainv.col_set(j) for j in range(n)),
        F=tuple(A.row_set(j) for j in range(n)),
        P=tuple(RA.row_set(j) for j in range(n)),
    )


def symplectic_vector(s: PauliString) -> int:
    """Packs ``(x | z)`` into one integer of ``2n`` bits."""
    return s.x | (s.z << s.n)


def symplectic_rank(strings: Sequence[PauliString]) -> int:
    """GF(2) rank of the strings' symplectic vectors."""
    return len(_echelon([symplectic_vector(s) for s in strings]))


def span_equal(a: Sequence[PauliString], b: Sequence[PauliString]) -> bool:
    """True iff both generating sets span the same GF(2) space (signs ignored)."""
    ra = symplectic_rank(a)
    return ra == symplectic_rank(b) == symplectic_rank(list(a) + list(b))


class StabilizerGroup:
    """Sign-tracked stabilizer group with a reduced echelon basis.

    The basis elements are genuine group elements (signed products of the
    generators), so reducing a string by them tracks the phase exactly.

    Args:
        generators: Pairwise commuting Hermitian Pauli strings.
    """

    def __init__(self, generators: Sequence[PauliString]):
        self.generators = list(generators)
        self.n = generators[0].n if generators else 0
        basis: list[tuple[int, PauliString]] = []
        for g in self.generators:
            v = symplectic_vector(g)
            for pv, b in basis:
                if (v >> pv) & 1:
                    g = mul_string(g, b)
                    v = symplectic_vector(g)
            if not v:
                if g.phase != 0:
                    raise ValueError("generators are inconsistent (-I in group)")
                continue
            pv = v.bit_length() - 1
            for i, (qv, b) in enumerate(basis):
                if (symplectic_vector(b) >> pv) & 1:
                    basis[i] = (qv, mul_string(b, g))
            basis.append((pv, g))
        basis.sort(key=lambda t: -t[0])
        self._basis = basis

    @property
    def rank(self) -> int:
        """Number of independent generators."""
        return len(self._basis)

    def check_commutes(self, s: PauliString) -> None:
        """Raises :class:`CosetError` if ``s`` anticommutes with a generator."""
        for g in self.generators:
            if not commutes(s, g):
                raise CosetError(f"{s} anticommutes with stabilizer {g}")

    def canonical(self, s: PauliString) -> PauliString:
        """Canonical coset representative of ``s`` (same for every coset member)."""
        for pv, b in self._basis:
            if (symplectic_vector(s) >> pv) & 1:
                s = mul_string(s, b)
        return s

    def membership(self, s: PauliString) -> int:
        """Returns +1 if ``s`` is in the group, -1 if ``-s`` is, 0 otherwise."""
        c = self.canonical(s)
        if not (c.x | c.z):
            if c.phase == 0:
                return 1
            if c.phase == 2:
                return -1
        return 0

    def contains(self, s: PauliString) -> bool:
        """True iff ``s`` (with its sign) is a group element."""
        return self.membership(s) == 1

    def greedy_reduce(self, s: PauliString, extra: Sequence[PauliString] = ()) -> PauliString:
        """Greedy weight descent by single multiplications with group elements.

        Args:
            s: String commuting with the group.
            extra: Additional group elements to try (for example local tiles).

        Returns:
            A coset member whose weight cannot be lowered by one more
            multiplication with a generator, basis element or ``extra`` element.
        """
        self.check_commutes(s)
        moves = list(self.generators) + [b for _, b in self._basis] + list(extra)
        improved = True
        while improved:
            improved = False
            best = None
            for g in moves:
                t = mul_string(s, g)
                if t.weight < s.weight and (best is None or (t.weight, symplectic_vector(t))
                                            < (best.weight, symplectic_vector(best))):
                    best = t
            if best is not None:
                s = best
                improved = True
        return s
