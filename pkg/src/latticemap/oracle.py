"""Brute-force verification: statevectors, code spaces, spectra and algebra checks.

Qubit ``q`` is bit ``q`` of a computational-basis index. Pauli strings are
applied matrix-free; dense matrices are only built for at most 12 qubits.
"""

from __future__ import annotations

import dataclasses
import os
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from latticemap.gf2 import CosetError, StabilizerGroup
from latticemap.pauli import PauliString, PauliSum, anticommutator, commutes

MAX_QUBITS = 26
DENSE_LIMIT = 12
SPECTRUM_TOL = 1e-9
BASIS_TOL = 1e-8

_PH = np.array([1, 1j, -1, -1j])


def max_workers() -> int:
    """Thread cap from ``LATTICEMAP_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("LATTICEMAP_THREADS", "1")))
    except ValueError:
        return 1


@dataclasses.dataclass
class StateVector:
    """Amplitudes of an ``n``-qubit state.

    Attributes:
        n: Qubit count.
        amplitudes: Complex array of length ``2**n``.
    """

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n > MAX_QUBITS:
            raise ValueError(f"statevectors limited to {MAX_QUBITS} qubits")
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (1 << self.n,):
            raise ValueError("amplitude count must be 2**n")

    @classmethod
    def basis(cls, n: int, index: int = 0) -> StateVector:
        """Computational basis state ``|index>``."""
        a = np.zeros(1 << n, dtype=complex)
        a[index] = 1.0
        return cls(n, a)

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> StateVector:
        """Basis state with ``bits[q]`` on qubit ``q``."""
        return cls.basis(len(bits), sum(int(b) << q for q, b in enumerate(bits)))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> StateVector:
        """Haar-like random normalized state."""
        a = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        return cls(n, a / np.linalg.norm(a))

    def norm(self) -> float:
        """Euclidean norm."""
        return float(np.linalg.norm(self.amplitudes))

    def tensor_zeros(self, r: int) -> StateVector:
        """Returns ``self ⊗ |0^r>`` with the new qubits above the old ones."""
        a = np.zeros(1 << (self.n + r), dtype=complex)
        a[: 1 << self.n] = self.amplitudes
        return StateVector(self.n + r, a)

    def expectation(self, op) -> complex:
        """``<psi|op|psi>`` for a string or sum."""
        return complex(np.vdot(self.amplitudes, apply(op, self).amplitudes))


def _popcount_parity(arr: np.ndarray) -> np.ndarray:
    return np.bitwise_count(arr) & 1


def apply_string(s: PauliString, v: np.ndarray) -> np.ndarray:
    """Applies a Pauli string to a raw amplitude vector."""
    idx = np.arange(v.shape[0], dtype=np.int64)
    signs = 1 - 2 * _popcount_parity(idx & s.z).astype(np.int8)
    k = (s.phase + (s.x & s.z).bit_count()) % 4
    out = np.empty_like(v)
    out[idx ^ s.x] = (_PH[k] * signs) * v
    return out


def apply(op, s: StateVector) -> StateVector:
    """Matrix-free action of a Pauli string or sum on a state.

    Args:
        op: :class:`PauliString` or :class:`PauliSum`.
        s: State with the same qubit count.

    Returns:
        The new (unnormalized) state.

    Raises:
        ValueError: On a size mismatch or above the qubit guardrail.
    """
    if op.n != s.n:
        raise ValueError(f"operator on {op.n} qubits, state on {s.n}")
    if s.n > MAX_QUBITS:
        raise ValueError("qubit guardrail exceeded")
    if isinstance(op, PauliString):
        return StateVector(s.n, apply_string(op, s.amplitudes))
    terms = list(op)
    if not terms:
        return StateVector(s.n, np.zeros_like(s.amplitudes))

    def part(chunk):
        acc = np.zeros_like(s.amplitudes)
        for c, p in chunk:
            acc += c * apply_string(p, s.amplitudes)
        return acc

    workers = min(max_workers(), len(terms))
    if workers == 1:
        return StateVector(s.n, part(terms))
    chunks = [terms[w::workers] for w in range(workers)]
    with ThreadPoolExecutor(workers) as ex:
        return StateVector(s.n, sum(ex.map(part, chunks)))


def dense(op) -> np.ndarray:
    """Dense matrix of a string or sum (at most 12 qubits)."""
    if op.n > DENSE_LIMIT:
        raise ValueError(f"dense matrices are limited to {DENSE_LIMIT} qubits")
    return op.to_matrix()


@dataclasses.dataclass
class CodeBasis:
    """Orthonormal basis of a joint +1 eigenspace.

    Attributes:
        n: Qubit count.
        stabilizers: The generators.
        vectors: ``2**n x d`` matrix whose columns are the basis vectors.
    """

    n: int
    stabilizers: list[PauliString]
    vectors: np.ndarray

    @property
    def r(self) -> int:
        """Number of stabilizer generators."""
        return len(self.stabilizers)

    @property
    def dim(self) -> int:
        """Code space dimension."""
        return self.vectors.shape[1]


def project(stabs: Sequence[PauliString], v: np.ndarray) -> np.ndarray:
    """Applies ``∏ (1 + S)/2``."""
    for s in stabs:
        v = 0.5 * (v + apply_string(s, v))
    return v


def codespace_basis(stabs: Sequence[PauliString], n: int, max_dim_log2: int = 14) -> CodeBasis:
    """Projects computational kets in lexicographic order and orthonormalizes.

    Args:
        stabs: Commuting, independent generators.
        n: Qubit count.
        max_dim_log2: Guardrail on ``n - len(stabs)``.

    Returns:
        The basis with ``2**(n - r)`` vectors.

    Raises:
        ValueError: If the stabilizers are inconsistent or dimensions blow up.
    """
    stabs = list(stabs)
    if n - len(stabs) > max_dim_log2:
        raise ValueError("code space too large")
    for a in range(len(stabs)):
        for b in range(a + 1, len(stabs)):
            if not commutes(stabs[a], stabs[b]):
                raise ValueError("stabilizers do not commute")
    target = 1 << (n - len(stabs))
    dim = 1 << n
    Q = np.zeros((dim, target), dtype=complex)
    k = 0
    for b in range(dim):
        v = np.zeros(dim, dtype=complex)
        v[b] = 1.0
        v = project(stabs, v)
        if k:
            v -= Q[:, :k] @ (Q[:, :k].conj().T @ v)
            v -= Q[:, :k] @ (Q[:, :k].conj().T @ v)
        nv = np.linalg.norm(v)
        if nv > BASIS_TOL:
            Q[:, k] = v / nv
            k += 1
            if k == target:
                break
    if k != target:
        raise ValueError(f"code space has dimension {k}, expected {target} (rank error)")
    return CodeBasis(n, stabs, Q)


def restricted_matrix(H: PauliSum, basis: CodeBasis, check: bool = True) -> np.ndarray:
    """``V† H V`` for the basis isometry ``V``.

    Raises:
        ValueError: If ``check`` and a term anticommutes with a stabilizer.
    """
    if check:
        for _, s in H:
            for g in basis.stabilizers:
                if not commutes(s, g):
                    raise ValueError(f"term {s} anticommutes with stabilizer {g}")
    V = basis.vectors
    HV = np.zeros_like(V)
    for c, s in H:
        for col in range(V.shape[1]):
            HV[:, col] += c * apply_string(s, V[:, col])
    return V.conj().T @ HV


def restricted_spectrum(H: PauliSum, basis: CodeBasis) -> np.ndarray:
    """Ascending eigenvalues of ``H`` on the code space."""
    M = restricted_matrix(H, basis)
    return np.linalg.eigvalsh(0.5 * (M + M.conj().T))


def full_spectrum(H: PauliSum) -> np.ndarray:
    """Ascending eigenvalues of ``H`` on all qubits (dense, at most 12 qubits)."""
    M = dense(H)
    return np.linalg.eigvalsh(0.5 * (M + M.conj().T))


def spectra_equal(a: np.ndarray, b: np.ndarray, tol: float = SPECTRUM_TOL) -> bool:
    """Multiset equality of sorted spectra to ``tol``."""
    a, b = np.sort(np.asarray(a)), np.sort(np.asarray(b))
    return a.shape == b.shape and bool(np.all(np.abs(a - b) < tol))


def number_parity_projector_spectrum(H: PauliSum, parity: int) -> np.ndarray:
    """Spectrum of a JW Hamiltonian restricted to basis states of given number parity."""
    M = dense(H)
    idx = np.arange(M.shape[0])
    keep = (np.bitwise_count(idx) & 1) == parity
    sub = M[np.ix_(keep, keep)]
    return np.linalg.eigvalsh(0.5 * (sub + sub.conj().T))


# -- algebra -----------------------------------------------------------------------
@dataclasses.dataclass
class AlgebraReport:
    """Outcome of an algebra check.

    Attributes:
        passed: True iff no failures.
        checked: Number of relations checked.
        failures: Witnesses ``(relation, i, j, remainder)``.
    """

    passed: bool
    checked: int
    failures: list[tuple[str, int, int, str]]

    def to_json(self) -> dict:
        """JSON-ready dict."""
        return {"passed": self.passed, "checked": self.checked,
                "failures": [{"relation": r, "i": i, "j": j, "remainder": rem}
                             for r, i, j, rem in self.failures]}


def reduce_sum(op: PauliSum, group: StabilizerGroup | None) -> PauliSum:
    """Replaces every term by its canonical coset representative."""
    if group is None or group.rank == 0:
        return op
    out = PauliSum(op.n)
    for c, s in op:
        group.check_commutes(s)
        out = out + PauliSum.from_string(group.canonical(s), c)
    return out


def algebra_check(image: Callable[[int, bool], PauliSum], n_modes: int,
                  group: StabilizerGroup | None = None, tol: float = 1e-10,
                  pairs: Sequence[tuple[int, int]] | None = None) -> AlgebraReport:
    """Checks ``{c_i, c†_j} = δ_ij`` and ``{c_i, c_j} = 0`` modulo stabilizers.

    Args:
        image: ``image(j, dagger)`` returns the qubit image of a ladder operator.
        n_modes: Number of modes.
        group: Stabilizer group (``None`` for exact identities).
        tol: Coefficient tolerance.
        pairs: Optional subset of mode pairs.

    Returns:
        The report with witnesses for every failing relation.
    """
    imgs = {(j, d): image(j, d) for j in range(1, n_modes + 1) for d in (True, False)}
    n = imgs[(1, True)].n
    failures = []
    checked = 0
    pairs = pairs or [(i, j) for i in range(1, n_modes + 1) for j in range(1, n_modes + 1)]
    for i, j in pairs:
        rel1 = anticommutator(imgs[(i, False)], imgs[(j, True)])
        if i == j:
            rel1 = rel1 - PauliSum.identity(n)
        rel2 = anticommutator(imgs[(i, False)], imgs[(j, False)])
        for name, rel in (("{c_i, c_j^dag}", rel1), ("{c_i, c_j}", rel2)):
            checked += 1
            try:
                rem = reduce_sum(rel, group)
            except CosetError as exc:
                failures.append((name, i, j, str(exc)))
                continue
            if not rem.is_zero(tol):
                failures.append((name, i, j, repr(rem)))
    return AlgebraReport(not failures, checked, failures)


def pair_algebra_check(pair: Callable[[int, int], PauliString], n_majoranas: int,
                       group: StabilizerGroup | None = None,
                       triples: Sequence[tuple[int, int, int]] | None = None) -> AlgebraReport:
    """Checks the even Majorana algebra modulo stabilizers.

    For parity-conserving mappings there are no single-mode images. With
    ``P_ab`` the image of ``γ_a γ_b`` (Majoranas ``0..2N-1``), the relations
    ``P_ab² = -1``, ``P_ab = -P_ba`` and ``P_ab P_bc = P_ac`` fix the algebra.

    Args:
        pair: ``pair(a, b)`` returns the image of ``γ_a γ_b`` for ``a != b``.
        n_majoranas: ``2N``.
        group: Stabilizer group, or ``None``.
        triples: Optional subset of ``(a, b, c)``.

    Returns:
        The report; witnesses use the Majorana indices.
    """
    def red(s: PauliString) -> PauliString:
        if group is None or group.rank == 0:
            return s
        return group.canonical(s)

    imgs = {(a, b): pair(a, b) for a in range(n_majoranas) for b in range(n_majoranas) if a != b}
    n = next(iter(imgs.values())).n if imgs else 0
    minus_one = PauliString.identity(n).times_i(2)
    failures = []
    checked = 0
    for (a, b), s in imgs.items():
        checked += 2
        if s * s != minus_one:
            failures.append(("P_ab^2 = -1", a, b, str(s * s)))
        if red(s) != red(-imgs[(b, a)]):
            failures.append(("P_ab = -P_ba", a, b, str(s)))
    if triples is None:
        triples = [(a, b, c) for a in range(n_majoranas) for b in range(n_majoranas)
                   for c in range(n_majoranas) if len({a, b, c}) == 3]
    for a, b, c in triples:
        checked += 1
        try:
            ok = red(imgs[(a, b)] * imgs[(b, c)]) == red(imgs[(a, c)])
        except CosetError as exc:
            failures.append(("P_ab P_bc = P_ac", a, c, str(exc)))
            continue
        if not ok:
            failures.append(("P_ab P_bc = P_ac", a, c, f"via {b}"))
    return AlgebraReport(not failures, checked, failures)


# -- circuits ----------------------------------------------------------------------
_GATES = {
    "h": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "s": np.diag([1, 1j]),
    "sdg": np.diag([1, -1j]),
}


def apply_gate(gate: tuple, v: np.ndarray, n: int) -> np.ndarray:
    """Applies one circuit gate (0-based qubits) to an amplitude vector."""
    name = gate[0]
    if name == "cnot":
        _, c, t = gate
        idx = np.arange(v.shape[0], dtype=np.int64)
        src = np.where((idx >> c) & 1, idx ^ (1 << t), idx)
        return v[src]
    q = gate[1]
    if name == "rz":
        m = np.diag([np.exp(-0.5j * gate[2]), np.exp(0.5j * gate[2])])
    else:
        m = _GATES[name]
    t = v.reshape((1 << (n - q - 1), 2, 1 << q))
    return np.einsum("ab,ibj->iaj", m, t).reshape(-1)
