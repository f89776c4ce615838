"""Phase-exact Pauli strings and Pauli sums in symplectic bitmask form.

A :class:`PauliString` stores an ``n``-qubit word as two Python integers
(``x`` and ``z`` bit masks, bit ``q`` for qubit ``q``) plus an exponent
``phase`` so that the operator equals ``i**phase`` times the tensor product of
Hermitian single-qubit labels. A qubit with both bits set carries ``Y``.

Qubits are 0-based internally. The textual form ``"X1 Z2 Y5"`` is 1-based.
"""

from __future__ import annotations

import dataclasses
import re
from collections.abc import Iterable, Iterator, Mapping

import numpy as np

DROP_TOL = 1e-12

_PHASES = (1, 1j, -1, -1j)
_LABEL_RE = re.compile(r"([IXYZ])(\d+)")


class DimensionError(ValueError):
    """Raised when operands act on different qubit counts."""


def _popcount(v: int) -> int:
    return int(v).bit_count()


def _bits(v: int) -> Iterator[int]:
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low


@dataclasses.dataclass(frozen=True)
class PauliString:
    """An ``n``-qubit Pauli word with a global prefactor ``i**phase``.

    Attributes:
        n: Number of qubits.
        x: X bit mask.
        z: Z bit mask.
        phase: Exponent ``k`` of the prefactor ``i**k`` (mod 4).
    """

    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("qubit count must be non-negative")
        limit = 1 << self.n
        if self.x >= limit or self.z >= limit or self.x < 0 or self.z < 0:
            raise ValueError(f"masks exceed {self.n} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- constructors -----------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> PauliString:
        """Returns the identity on ``n`` qubits."""
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, label: str) -> PauliString:
        """Returns a single-qubit Pauli ``label`` on 0-based ``qubit``."""
        return cls.from_ops(n, {qubit: label})

    @classmethod
    def from_ops(cls, n: int, ops: Mapping[int, str] | Iterable[tuple[int, str]],
                 phase: int = 0) -> PauliString:
        """Builds a string from 0-based ``{qubit: 'X'|'Y'|'Z'|'I'}``.

        Args:
            n: Number of qubits.
            ops: Mapping or pairs of qubit index and label.
            phase: Prefactor exponent.

        Returns:
            The Pauli string.
        """
        items = ops.items() if isinstance(ops, Mapping) else ops
        x = z = 0
        for q, lab in items:
            if not 0 <= q < n:
                raise DimensionError(f"qubit {q} outside 0..{n - 1}")
            bit = 1 << q
            if lab == "X":
                x |= bit
            elif lab == "Z":
                z |= bit
            elif lab == "Y":
                x |= bit
                z |= bit
            elif lab != "I":
                raise ValueError(f"bad Pauli label {lab!r}")
        return cls(n, x, z, phase)

    @classmethod
    def from_label(cls, label: str, n: int) -> PauliString:
        """Parses ``"X1 Z2 Y5"`` (1-based; optional leading ``-`` or ``i``)."""
        s = label.strip()
        phase = 0
        for prefix, k in (("-i", 3), ("+i", 1), ("i", 1), ("-", 2), ("+", 0)):
            if s.startswith(prefix) and (len(s) == len(prefix) or not s[len(prefix)].isdigit()):
                s = s[len(prefix):].strip()
                phase = k
                break
        ops = []
        for tok in s.replace("*", " ").split():
            if tok in ("I", "1"):
                continue
            m = _LABEL_RE.fullmatch(tok)
            if not m:
                raise ValueError(f"bad Pauli token {tok!r}")
            ops.append((int(m.group(2)) - 1, m.group(1)))
        return cls.from_ops(n, ops, phase)

    @classmethod
    def from_dense_label(cls, label: str) -> PauliString:
        """Parses a dense label such as ``"XIZY"`` (qubit 0 first)."""
        return cls.from_ops(len(label), enumerate(label))

    # -- basic properties ---------------------------------------------------
    @property
    def weight(self) -> int:
        """Number of qubits acted on non-trivially."""
        return _popcount(self.x | self.z)

    @property
    def support(self) -> list[int]:
        """Sorted 0-based qubits in the support."""
        return list(_bits(self.x | self.z))

    @property
    def coefficient(self) -> complex:
        """The prefactor ``i**phase`` as a complex number."""
        return _PHASES[self.phase]

    def label_at(self, q: int) -> str:
        """Returns ``'I'``, ``'X'``, ``'Y'`` or ``'Z'`` on qubit ``q``."""
        xb = (self.x >> q) & 1
        zb = (self.z >> q) & 1
        return "IXZY"[xb | (zb << 1)]

    def ops(self) -> dict[int, str]:
        """Returns the non-identity labels as a 0-based dict."""
        return {q: self.label_at(q) for q in self.support}

    def canonical(self) -> PauliString:
        """Returns the same word with phase 0."""
        return PauliString(self.n, self.x, self.z, 0) if self.phase else self

    def is_hermitian(self) -> bool:
        """True iff the prefactor is real."""
        return self.phase % 2 == 0

    def is_identity(self) -> bool:
        """True iff no qubit is acted on (any phase)."""
        return not (self.x | self.z)

    # -- algebra ------------------------------------------------------------
    def _check(self, other: PauliString) -> None:
        if self.n != other.n:
            raise DimensionError(f"qubit counts differ: {self.n} vs {other.n}")

    def __mul__(self, other):
        if isinstance(other, PauliString):
            return mul_string(self, other)
        if isinstance(other, PauliSum):
            return PauliSum.from_string(self) * other
        if isinstance(other, (int, float, complex, np.number)):
            return PauliSum.from_string(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return PauliSum.from_string(self, other)
        return NotImplemented

    def __neg__(self) -> PauliString:
        return PauliString(self.n, self.x, self.z, self.phase + 2)

    def times_i(self, k: int = 1) -> PauliString:
        """Returns ``i**k`` times this string."""
        return PauliString(self.n, self.x, self.z, self.phase + k)

    def adjoint(self) -> PauliString:
        """Hermitian conjugate."""
        return PauliString(self.n, self.x, self.z, -self.phase)

    def commutes(self, other: PauliString) -> bool:
        """True iff the two strings commute."""
        return commutes(self, other)

    def extend(self, n: int, offset: int = 0) -> PauliString:
        """Embeds into ``n`` qubits, shifting qubits up by ``offset``."""
        if offset + self.n > n:
            raise DimensionError("extension too small")
        return PauliString(n, self.x << offset, self.z << offset, self.phase)

    def restrict(self, qubits: Iterable[int]) -> PauliString:
        """Drops every qubit not in ``qubits`` (keeps ``n`` and phase)."""
        mask = 0
        for q in qubits:
            mask |= 1 << q
        return PauliString(self.n, self.x & mask, self.z & mask, self.phase)

    def tensor(self, other: PauliString) -> PauliString:
        """Tensor product with ``other`` on qubits ``n..n+other.n-1``."""
        return PauliString(self.n + other.n, self.x | (other.x << self.n),
                           self.z | (other.z << self.n), self.phase + other.phase)

    # -- rendering ----------------------------------------------------------
    def to_label(self, with_phase: bool = True) -> str:
        """Renders as ``"X1 Z2 Y5"`` (1-based); identity renders as ``"I"``."""
        body = " ".join(f"{self.label_at(q)}{q + 1}" for q in self.support) or "I"
        if not with_phase or self.phase == 0:
            return body
        return {1: "i ", 2: "-", 3: "-i "}[self.phase] + body

    def __str__(self) -> str:
        return self.to_label()

    def to_matrix(self) -> np.ndarray:
        """Dense ``2**n`` matrix with qubit 0 as the least significant bit."""
        if self.n > 14:
            raise DimensionError("dense matrices limited to 14 qubits")
        dim = 1 << self.n
        idx = np.arange(dim)
        cols = idx
        rows = idx ^ self.x
        # P|b> = i^{phase + |x&z|} (-1)^{|z&b|} |b^x>
        signs = np.array([(-1) ** _popcount(self.z & b) for b in range(dim)], dtype=complex)
        signs *= _PHASES[(self.phase + _popcount(self.x & self.z)) % 4]
        mat = np.zeros((dim, dim), dtype=complex)
        mat[rows, cols] = signs
        return mat


def mul_string(a: PauliString, b: PauliString) -> PauliString:
    """Exact product ``a·b`` with the phase tracked mod 4.

    Args:
        a: Left factor.
        b: Right factor.

    Returns:
        The product string.

    Raises:
        DimensionError: If the qubit counts differ.
    """
    a._check(b)
    xc = a.x ^ b.x
    zc = a.z ^ b.z
    k = (a.phase + b.phase + _popcount(a.x & a.z) + _popcount(b.x & b.z)
         + 2 * _popcount(a.z & b.x) - _popcount(xc & zc))
    return PauliString(a.n, xc, zc, k)


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff ``a`` and ``b`` commute (symplectic form parity)."""
    a._check(b)
    return (_popcount(a.x & b.z) + _popcount(a.z & b.x)) % 2 == 0


def product(strings: Iterable[PauliString], n: int | None = None) -> PauliString:
    """Ordered product of strings (left to right)."""
    it = iter(strings)
    acc = None
    for s in it:
        acc = s if acc is None else mul_string(acc, s)
    if acc is None:
        if n is None:
            raise ValueError("empty product needs n")
        return PauliString(n)
    return acc


class PauliSum:
    """Complex-weighted sum of Pauli strings keyed by phase-0 masks.

    Args:
        n: Number of qubits.
        terms: Optional mapping ``(x, z) -> coefficient``.
    """

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[tuple[int, int], complex] | None = None):
        self.n = n
        self._terms: dict[tuple[int, int], complex] = {}
        if terms:
            for key, c in terms.items():
                self._add(key, c)
            self._prune()

    # -- construction ---------------------------------------------------------
    @classmethod
    def from_string(cls, s: PauliString, coeff: complex = 1.0) -> PauliSum:
        """Wraps ``coeff * s`` with the string phase folded into the coefficient."""
        out = cls(s.n)
        out._add((s.x, s.z), coeff * s.coefficient)
        out._prune()
        return out

    @classmethod
    def identity(cls, n: int, coeff: complex = 1.0) -> PauliSum:
        """Returns ``coeff`` times the identity."""
        return cls(n, {(0, 0): coeff})

    @classmethod
    def from_terms(cls, n: int, items: Iterable[tuple[complex, PauliString]]) -> PauliSum:
        """Builds a sum from ``(coefficient, string)`` pairs."""
        out = cls(n)
        for c, s in items:
            if s.n != n:
                raise DimensionError("term size mismatch")
            out._add((s.x, s.z), c * s.coefficient)
        out._prune()
        return out

    @classmethod
    def from_labels(cls, n: int, items: Mapping[str, complex]) -> PauliSum:
        """Builds a sum from ``{"X1 Z2": coeff}``."""
        return cls.from_terms(n, ((c, PauliString.from_label(l, n)) for l, c in items.items()))

    def _add(self, key: tuple[int, int], c: complex) -> None:
        self._terms[key] = self._terms.get(key, 0.0) + complex(c)

    def _prune(self) -> None:
        dead = [k for k, c in self._terms.items() if abs(c) < DROP_TOL]
        for k in dead:
            del self._terms[k]

    # -- access -----------------------------------------------------------------
    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[complex, PauliString]]:
        for (x, z), c in self._terms.items():
            yield c, PauliString(self.n, x, z)

    def items(self) -> list[tuple[complex, PauliString]]:
        """Terms sorted by (weight, x, z) for deterministic output."""
        return sorted(self, key=lambda t: (t[1].weight, t[1].x, t[1].z))

    def coeff(self, s: PauliString) -> complex:
        """Coefficient of the Hermitian word underlying ``s`` (phase folded)."""
        return self._terms.get((s.x, s.z), 0.0) / s.coefficient

    def is_zero(self, tol: float = DROP_TOL) -> bool:
        """True iff every coefficient is below ``tol``."""
        return all(abs(c) < tol for c in self._terms.values())

    def copy(self) -> PauliSum:
        """Shallow copy."""
        out = PauliSum(self.n)
        out._terms = dict(self._terms)
        return out

    # -- algebra ------------------------------------------------------------
    def _coerce(self, other) -> PauliSum:
        if isinstance(other, PauliSum):
            if other.n != self.n:
                raise DimensionError(f"qubit counts differ: {self.n} vs {other.n}")
            return other
        if isinstance(other, PauliString):
            if other.n != self.n:
                raise DimensionError(f"qubit counts differ: {self.n} vs {other.n}")
            return PauliSum.from_string(other)
        if isinstance(other, (int, float, complex, np.number)):
            return PauliSum.identity(self.n, other)
        raise TypeError(f"cannot combine PauliSum with {type(other).__name__}")

    def __add__(self, other) -> PauliSum:
        o = self._coerce(other)
        out = self.copy()
        for k, c in o._terms.items():
            out._add(k, c)
        out._prune()
        return out

    __radd__ = __add__

    def __sub__(self, other) -> PauliSum:
        return self + (-1) * self._coerce(other)

    def __rsub__(self, other) -> PauliSum:
        return self._coerce(other) - self

    def __neg__(self) -> PauliSum:
        return (-1) * self

    def __mul__(self, other) -> PauliSum:
        if isinstance(other, (int, float, complex, np.number)):
            out = PauliSum(self.n)
            out._terms = {k: c * other for k, c in self._terms.items()}
            out._prune()
            return out
        return sum_mul(self, self._coerce(other))

    def __rmul__(self, other) -> PauliSum:
        if isinstance(other, (int, float, complex, np.number)):
            return self * other
        return sum_mul(self._coerce(other), self)

    def __truediv__(self, other) -> PauliSum:
        return self * (1.0 / other)

    def adjoint(self) -> PauliSum:
        """Hermitian conjugate (Pauli words are self-adjoint)."""
        out = PauliSum(self.n)
        out._terms = {k: c.conjugate() for k, c in self._terms.items()}
        return out

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        """True iff every coefficient is real to ``tol``."""
        return all(abs(c.imag) <= tol for c in self._terms.values())

    def equals(self, other, tol: float = 1e-10) -> bool:
        """Coefficient-wise equality to ``tol``."""
        return (self - other).is_zero(tol)

    def map_strings(self, fn) -> PauliSum:
        """Applies ``fn`` (string -> string or sum) termwise, linearly."""
        out = None
        for c, s in self:
            img = fn(s)
            img = PauliSum.from_string(img, c) if isinstance(img, PauliString) else img * c
            out = img if out is None else out + img
        return out if out is not None else PauliSum(self.n)

    def extend(self, n: int, offset: int = 0) -> PauliSum:
        """Embeds every term into ``n`` qubits."""
        out = PauliSum(n)
        out._terms = {(x << offset, z << offset): c for (x, z), c in self._terms.items()}
        return out

    def max_weight(self) -> int:
        """Maximum weight over non-identity terms (0 if none)."""
        return max((s.weight for _, s in self), default=0)

    def to_matrix(self) -> np.ndarray:
        """Dense matrix (n ≤ 14)."""
        dim = 1 << self.n
        mat = np.zeros((dim, dim), dtype=complex)
        for c, s in self:
            mat += c * s.to_matrix()
        return mat

    def to_json(self) -> list[dict]:
        """JSON-ready list of ``{"coeff": [re, im], "pauli": "X1 Z2"}``."""
        return [{"coeff": [c.real, c.imag], "pauli": s.to_label()} for c, s in self.items()]

    @classmethod
    def from_json(cls, n: int, data: Iterable[Mapping]) -> PauliSum:
        """Inverse of :meth:`to_json`."""
        return cls.from_terms(n, ((complex(*d["coeff"]), PauliString.from_label(d["pauli"], n))
                                  for d in data))

    def __repr__(self) -> str:
        parts = [f"({c.real:+.6g}{c.imag:+.6g}j) {s.to_label()}" for c, s in self.items()]
        return f"PauliSum(n={self.n}, " + (" ".join(parts) or "0") + ")"


def sum_mul(a: PauliSum, b: PauliSum) -> PauliSum:
    """Distributive product with like-term collection.

    Args:
        a: Left factor.
        b: Right factor.

    Returns:
        ``a·b`` with coefficients below the drop tolerance removed.
    """
    if a.n != b.n:
        raise DimensionError(f"qubit counts differ: {a.n} vs {b.n}")
    out = PauliSum(a.n)
    for (xa, za), ca in a._terms.items():
        ya = _popcount(xa & za)
        for (xb, zb), cb in b._terms.items():
            xc = xa ^ xb
            zc = za ^ zb
            k = (ya + _popcount(xb & zb) + 2 * _popcount(za & xb) - _popcount(xc & zc)) % 4
            out._add((xc, zc), ca * cb * _PHASES[k])
    out._prune()
    return out


def is_hermitian(a: PauliSum) -> bool:
    """True iff ``a`` is Hermitian."""
    return a.is_hermitian()


def anticommutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """Returns ``a·b + b·a``."""
    return sum_mul(a, b) + sum_mul(b, a)
