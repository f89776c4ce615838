"""Second-quantized operators, Majorana expansion and model generators.

Products of ladder operators are kept exactly in the order written. Modes are
1-based. Lattice models label modes by their S-pattern index on an
``l1 x l2`` grid (column ``i``, row ``j``, both 1-based).
"""

from __future__ import annotations

import dataclasses
import enum
import warnings
from collections.abc import Iterable, Sequence

import numpy as np

from latticemap._lattice import s_index

DROP_TOL = 1e-12


class Species(enum.IntEnum):
    """Majorana species: ``M`` is ``c + c†``, ``MBAR`` is ``i(c† - c)``."""

    M = 0
    MBAR = 1


@dataclasses.dataclass(frozen=True)
class MajoranaFactor:
    """One Majorana operator.

    Attributes:
        mode: 1-based mode.
        species: :class:`Species`.
    """

    mode: int
    species: Species

    def __str__(self) -> str:
        return ("m" if self.species == Species.M else "mbar") + str(self.mode)


@dataclasses.dataclass(frozen=True)
class LadderTerm:
    """Coefficient times an ordered product of ladder operators.

    Attributes:
        coeff: Complex coefficient.
        factors: ``(mode, dagger)`` pairs in operator order (leftmost first).
        tag: Optional term class, e.g. ``"hop-h"`` or ``"hubbard"``.
    """

    coeff: complex
    factors: tuple[tuple[int, bool], ...]
    tag: str = ""

    def adjoint(self) -> LadderTerm:
        """Hermitian conjugate."""
        return LadderTerm(complex(self.coeff).conjugate(),
                          tuple((m, not d) for m, d in reversed(self.factors)), self.tag)

    def __str__(self) -> str:
        ops = " ".join(f"c{m}" + ("^" if d else "") for m, d in self.factors)
        return f"({complex(self.coeff):.6g}) {ops}".rstrip()


class FermionSum:
    """A sum of :class:`LadderTerm` on ``n_modes`` modes.

    Args:
        n_modes: Number of fermionic modes.
        terms: Initial terms.

    Raises:
        ValueError: If a term references a mode outside ``1..n_modes``.
    """

    def __init__(self, n_modes: int, terms: Iterable[LadderTerm] = ()):
        self.n_modes = n_modes
        self.terms: list[LadderTerm] = []
        for t in terms:
            self.append(t)

    def append(self, term: LadderTerm) -> None:
        """Adds a term after validating its modes."""
        for m, _ in term.factors:
            if not 1 <= m <= self.n_modes:
                raise ValueError(f"mode {m} outside 1..{self.n_modes}")
        self.terms.append(term)

    def add(self, coeff: complex, factors: Sequence[tuple[int, bool]], tag: str = "") -> None:
        """Appends ``coeff * product(factors)``."""
        self.append(LadderTerm(complex(coeff), tuple((int(m), bool(d)) for m, d in factors), tag))

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __add__(self, other: FermionSum) -> FermionSum:
        if other.n_modes != self.n_modes:
            raise ValueError("mode count mismatch")
        return FermionSum(self.n_modes, self.terms + other.terms)

    def __mul__(self, other) -> FermionSum:
        if isinstance(other, FermionSum):
            if other.n_modes != self.n_modes:
                raise ValueError("mode count mismatch")
            return FermionSum(self.n_modes, (
                LadderTerm(a.coeff * b.coeff, a.factors + b.factors, a.tag or b.tag)
                for a in self.terms for b in other.terms))
        return FermionSum(self.n_modes, (LadderTerm(t.coeff * other, t.factors, t.tag)
                                         for t in self.terms))

    __rmul__ = __mul__

    def adjoint(self) -> FermionSum:
        """Hermitian conjugate, termwise."""
        return FermionSum(self.n_modes, (t.adjoint() for t in self.terms))

    def with_tag(self, tag: str) -> FermionSum:
        """Terms carrying ``tag``."""
        return FermionSum(self.n_modes, (t for t in self.terms if t.tag == tag))

    def is_parity_even(self) -> bool:
        """True iff every term has an even number of ladder operators."""
        return all(len(t.factors) % 2 == 0 for t in self.terms)

    def to_json(self) -> dict:
        """JSON Hamiltonian schema."""
        return {"n_modes": self.n_modes,
                "terms": [{"coeff": [complex(t.coeff).real, complex(t.coeff).imag],
                           "ops": [[m, "+" if d else "-"] for m, d in t.factors],
                           **({"tag": t.tag} if t.tag else {})} for t in self.terms]}

    @classmethod
    def from_json(cls, data: dict) -> FermionSum:
        """Inverse of :meth:`to_json`."""
        out = cls(int(data["n_modes"]))
        for t in data["terms"]:
            re, im = t["coeff"]
            out.add(complex(re, im), [(int(m), s == "+") for m, s in t["ops"]], t.get("tag", ""))
        return out

    def __repr__(self) -> str:
        return f"FermionSum(n_modes={self.n_modes}, terms={len(self.terms)})"


def create(j: int, n_modes: int) -> FermionSum:
    """The creation operator ``c†_j``."""
    return FermionSum(n_modes, [LadderTerm(1.0, ((j, True),))])


def annihilate(j: int, n_modes: int) -> FermionSum:
    """The annihilation operator ``c_j``."""
    return FermionSum(n_modes, [LadderTerm(1.0, ((j, False),))])


def number(j: int, n_modes: int) -> FermionSum:
    """The number operator ``c†_j c_j``."""
    return FermionSum(n_modes, [LadderTerm(1.0, ((j, True), (j, False)))])


def _param(value, shape: tuple[int, ...], name: str) -> np.ndarray:
    arr = np.asarray(value)
    if arr.ndim == 0:
        return np.full(shape, arr.item())
    if arr.shape != shape:
        raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
    return arr


def _hop(out: FermionSum, t: complex, a: int, b: int, tag: str) -> None:
    if abs(t) < DROP_TOL:
        return
    out.add(t, [(a, True), (b, False)], tag)
    out.add(np.conj(t), [(b, True), (a, False)], tag)


def hubbard(L: int, t_h=1.0, t_v=1.0, eps=0.0, U=1.0) -> FermionSum:
    """Open-boundary Fermi-Hubbard model on an ``L x L`` site lattice.

    Site ``(x, y)`` hosts spin up at column ``2x`` and spin down at ``2x-1`` of
    a ``2L x L`` mode lattice. Modes are numbered by the S-pattern.

    Args:
        L: Side length in sites.
        t_h: Horizontal hopping from mode column ``i`` to ``i+2``; scalar or
            array of shape ``(2L-2, L)`` indexed ``[i-1, j-1]``. May be complex.
        t_v: Vertical hopping from row ``j`` to ``j+1``; scalar or shape
            ``(2L, L-1)``. May be complex.
        eps: On-site detuning per mode; scalar or shape ``(2L, L)``.
        U: Interaction per site; scalar or shape ``(L, L)`` indexed ``[x-1, y-1]``.

    Returns:
        The Hamiltonian with term tags ``hop-h``, ``hop-v``, ``onsite`` and ``hubbard``.

    Raises:
        ValueError: If ``L < 1`` or an array has the wrong shape.
    """
    if L < 1:
        raise ValueError("L must be positive")
    l1, l2 = 2 * L, L
    th = _param(t_h, (max(l1 - 2, 0), l2), "t_h")
    tv = _param(t_v, (l1, max(l2 - 1, 0)), "t_v")
    ep = _param(eps, (l1, l2), "eps")
    uu = _param(U, (L, L), "U")
    out = FermionSum(l1 * l2)
    idx = lambda i, j: s_index(i, j, l1)  # noqa: E731
    for j in range(1, l2 + 1):
        for i in range(1, l1 - 1):
            _hop(out, th[i - 1, j - 1], idx(i, j), idx(i + 2, j), "hop-h")
    for j in range(1, l2):
        for i in range(1, l1 + 1):
            _hop(out, tv[i - 1, j - 1], idx(i, j), idx(i, j + 1), "hop-v")
    for j in range(1, l2 + 1):
        for i in range(1, l1 + 1):
            if abs(ep[i - 1, j - 1]) > DROP_TOL:
                out.add(ep[i - 1, j - 1], [(idx(i, j), True), (idx(i, j), False)], "onsite")
    for y in range(1, L + 1):
        for x in range(1, L + 1):
            u = uu[x - 1, y - 1]
            if abs(u) > DROP_TOL:
                up, dn = idx(2 * x, y), idx(2 * x - 1, y)
                out.add(u, [(up, True), (up, False), (dn, True), (dn, False)], "hubbard")
    return out


def generic(h_ij, h_ijkl=None, strict: bool = False) -> FermionSum:
    """``Σ h_ij c†_i c_j + Σ h_ijkl c†_i c†_j c_k c_l``.

    Args:
        h_ij: ``N x N`` complex matrix.
        h_ijkl: Optional ``N x N x N x N`` tensor.
        strict: Raise instead of warn when the input is not Hermitian.

    Returns:
        The Hamiltonian.

    Raises:
        ValueError: On shape errors, or a non-Hermitian input with ``strict``.
    """
    h1 = np.asarray(h_ij, dtype=complex)
    if h1.ndim != 2 or h1.shape[0] != h1.shape[1]:
        raise ValueError("h_ij must be square")
    n = h1.shape[0]
    herm = np.allclose(h1, h1.conj().T, atol=1e-10)
    h2 = None
    if h_ijkl is not None:
        h2 = np.asarray(h_ijkl, dtype=complex)
        if h2.shape != (n,) * 4:
            raise ValueError("h_ijkl must have shape (N, N, N, N)")
        herm = herm and np.allclose(h2, h2.transpose(3, 2, 1, 0).conj(), atol=1e-10)
    if not herm:
        if strict:
            raise ValueError("coefficients are not Hermitian")
        warnings.warn("coefficients are not Hermitian", stacklevel=2)
    out = FermionSum(n)
    for i, j in zip(*np.nonzero(np.abs(h1) > DROP_TOL)):
        out.add(h1[i, j], [(i + 1, True), (j + 1, False)], "one-body")
    if h2 is not None:
        for i, j, k, l in zip(*np.nonzero(np.abs(h2) > DROP_TOL)):
            out.add(h2[i, j, k, l], [(i + 1, True), (j + 1, True), (k + 1, False), (l + 1, False)],
                    "two-body")
    return out


MajoranaMonomial = tuple[MajoranaFactor, ...]


def normal_order_majoranas(coeff: complex, factors: Sequence[MajoranaFactor]
                           ) -> tuple[complex, MajoranaMonomial]:
    """Sorts Majoranas by (mode, species) with anticommutation signs; cancels squares."""
    lst = list(factors)
    sign = 1
    # bubble sort keeps the sign bookkeeping obvious
    for a in range(len(lst)):
        for b in range(len(lst) - 1 - a):
            ka = (lst[b].mode, lst[b].species)
            kb = (lst[b + 1].mode, lst[b + 1].species)
            if ka > kb:
                lst[b], lst[b + 1] = lst[b + 1], lst[b]
                sign = -sign
    out: list[MajoranaFactor] = []
    for f in lst:
        if out and out[-1] == f:
            out.pop()
        else:
            out.append(f)
    return coeff * sign, tuple(out)


def to_majorana(f: FermionSum | LadderTerm) -> list[tuple[complex, MajoranaMonomial]]:
    """Expands into normal-ordered Majorana monomials with collected coefficients.

    Uses ``c† = (m - i mbar)/2`` and ``c = (m + i mbar)/2``.

    Args:
        f: A fermion sum or a single term.

    Returns:
        ``(coefficient, monomial)`` pairs sorted by monomial; zero terms dropped.
    """
    terms = [f] if isinstance(f, LadderTerm) else f.terms
    acc: dict[MajoranaMonomial, complex] = {}
    for t in terms:
        partial: list[tuple[complex, list[MajoranaFactor]]] = [(complex(t.coeff), [])]
        for mode, dag in t.factors:
            nxt = []
            for c, fs in partial:
                nxt.append((c * 0.5, fs + [MajoranaFactor(mode, Species.M)]))
                nxt.append((c * (-0.5j if dag else 0.5j), fs + [MajoranaFactor(mode, Species.MBAR)]))
            partial = nxt
        for c, fs in partial:
            c2, mono = normal_order_majoranas(c, fs)
            acc[mono] = acc.get(mono, 0.0) + c2
    items = [(c, m) for m, c in acc.items() if abs(c) > DROP_TOL]
    items.sort(key=lambda t: (len(t[1]), [(x.mode, x.species) for x in t[1]]))
    return items


def relabel(f: FermionSum, mapping, n_modes: int) -> FermionSum:
    """Renames modes through ``mapping`` (old -> new) keeping operator order.

    Args:
        f: Operator to relabel.
        mapping: Callable or mapping from old to new 1-based modes.
        n_modes: Mode count of the result.

    Returns:
        The relabeled operator.
    """
    get = mapping if callable(mapping) else mapping.__getitem__
    return FermionSum(n_modes, [LadderTerm(t.coeff, tuple((get(m), d) for m, d in t.factors), t.tag)
                                for t in f.terms])
