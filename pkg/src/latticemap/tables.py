"""Reproduction of the Hubbard string-length table and the qubit-count table.

Hopping strings are classified as ``h_dat = A_i Z ... Z B_j`` with
``A, B ∈ {X, Y}``. In Majorana terms ``A = X`` is ``mbar_i`` and ``A = Y`` is
``m_i``; ``B = X`` is ``m_j`` and ``B = Y`` is ``mbar_j``. For the JW-based
codes ``i`` precedes ``j`` in the S-pattern; for BKSF, which has no mode
order, ``i`` is the left (lower) mode.

Only interior terms enter the table: both endpoint modes lie strictly inside
the mapping's mode grid (for AQM vertical hops additionally ``j`` sits in an
even row). A class without interior terms at the requested ``L`` is taken
from the smallest larger ``L`` that has one.
"""

from __future__ import annotations

import dataclasses
from collections import Counter
from collections.abc import Callable

from latticemap import aqcode, bksf, vct
from latticemap._lattice import s_coord, s_index
from latticemap.fermion import MajoranaFactor, Species
from latticemap.pauli import PauliString, mul_string

HOP_TYPES = (("X", "X"), ("Y", "Y"), ("X", "Y"), ("Y", "X"))
MAPPINGS = ("aqm", "vct", "bksf")
PAPER_TABLE = {
    "aqm": {"stabilizer": 6, "vertical": (3, 3, 5, 1), "horizontal": (5, 5, 5, 5), "hubbard": 6, "onsite": 3},
    "vct": {"stabilizer": 6, "vertical": (5, 5, 5, 5), "horizontal": (3, 3, 3, 3), "hubbard": 2, "onsite": 1},
    "bksf": {"stabilizer": 6, "vertical": (2, 6, 5, 4), "horizontal": (8, 4, 5, 7), "hubbard": 6, "onsite": 4,
             "hubbard_penalty": 2},
}
MAX_FALLBACK_L = 6

_FIRST = {"X": Species.MBAR, "Y": Species.M}
_SECOND = {"X": Species.M, "Y": Species.MBAR}


@dataclasses.dataclass
class _Model:
    """Per-mapping weight oracles on Hubbard mode labels (``2L x L`` grid)."""

    grid: tuple[int, int]
    place: Callable[[int], tuple[int, int]]
    hop: Callable[[int, int], tuple[int, ...]]
    zz: Callable[[int, int], int]
    z: Callable[[int], int]
    stabilizer: int
    penalty: Callable[[int, int], int] = lambda a, b: 0


def _aqm_model(L: int) -> _Model:
    l1, l2 = 2 * L, L
    code = aqcode.build_square(l1, l2)
    n = code.N

    def data(ops: dict[int, str]) -> PauliString:
        return aqcode.adjust_string(code, PauliString.from_ops(n, {k - 1: v for k, v in ops.items()}))

    def hop(a: int, b: int) -> tuple[int, ...]:
        lo, hi = min(a, b), max(a, b)
        out = []
        for A, B in HOP_TYPES:
            ops = {k: "Z" for k in range(lo + 1, hi)}
            ops.update({lo: A, hi: B})
            s = data(ops)
            out.append(min(aqcode.route_string(code, s, p).weight for p in ("col-then-row", "row-then-col")))
        return tuple(out)

    return _Model((l1, l2), lambda k: s_coord(k, l1), hop,
                  lambda a, b: data({a: "Z", b: "Z"}).weight, lambda a: data({a: "Z"}).weight,
                  max(t.weight for t in aqcode.local_tiling(code)))


def _vct_model(L: int) -> _Model:
    code, _ = vct.hubbard_vct(L)
    _, _, mapping, _ = vct.hubbard_modes(L)

    def pair(a: MajoranaFactor, b: MajoranaFactor) -> PauliString:
        return mul_string(code.majorana_image(a), code.majorana_image(b))

    def hop(a: int, b: int) -> tuple[int, ...]:
        lo, hi = sorted((mapping[a], mapping[b]))
        return tuple(vct.vct_route(code, pair(MajoranaFactor(lo, _FIRST[A]), MajoranaFactor(hi, _SECOND[B])),
                                   "best").weight for A, B in HOP_TYPES)

    def z(a: int) -> int:
        k = mapping[a]
        return pair(MajoranaFactor(k, Species.M), MajoranaFactor(k, Species.MBAR)).weight

    def zz(a: int, b: int) -> int:
        s = mul_string(pair(MajoranaFactor(mapping[a], Species.M), MajoranaFactor(mapping[a], Species.MBAR)),
                       pair(MajoranaFactor(mapping[b], Species.M), MajoranaFactor(mapping[b], Species.MBAR)))
        return s.weight

    return _Model((code.l1, code.l2), lambda k: code.coord(mapping[k]), hop, zz, z,
                  max(t.weight for t in vct.local_tiling(code)))


def _bksf_model(L: int) -> _Model:
    g = bksf.build_bksf(2 * L, L)

    def first_last(a: int, b: int) -> tuple[int, int]:
        return (a, b) if g.coord(a)[::-1] < g.coord(b)[::-1] else (b, a)

    def hop(a: int, b: int) -> tuple[int, ...]:
        i, j = first_last(a, b)
        return tuple(min(bksf.pair_image(g, MajoranaFactor(i, _FIRST[A]), MajoranaFactor(j, _SECOND[B]), path=p).weight
                         for p in bksf.PATH_STRATEGIES) for A, B in HOP_TYPES)

    def zz_string(a: int, b: int) -> PauliString:
        return mul_string(bksf.vertex_operator(g, a), bksf.vertex_operator(g, b))

    return _Model((g.l1, g.l2), g.coord, hop, lambda a, b: zz_string(a, b).weight,
                  lambda a: bksf.vertex_operator(g, a).weight, max(s.weight for s in g.stabilizers),
                  lambda a, b: bksf.skip_penalty(g, zz_string(a, b)))


_MODELS = {"aqm": _aqm_model, "vct": _vct_model, "bksf": _bksf_model}


def _interior(model: _Model, *modes: int) -> bool:
    l1, l2 = model.grid
    return all(1 < model.place(k)[0] < l1 and 1 < model.place(k)[1] < l2 for k in modes)


def hubbard_classes(L: int) -> dict[str, list[tuple[int, ...]]]:
    """Mode tuples of every term class of the ``L x L`` Hubbard model."""
    l1, l2 = 2 * L, L
    idx = lambda i, j: s_index(i, j, l1)  # noqa: E731
    return {
        "vertical": [(idx(i, j), idx(i, j + 1)) for j in range(1, l2) for i in range(1, l1 + 1)],
        "horizontal": [(idx(i, j), idx(i + 2, j)) for j in range(1, l2 + 1) for i in range(1, l1 - 1)],
        "hubbard": [(idx(2 * x, y), idx(2 * x - 1, y)) for y in range(1, L + 1) for x in range(1, L + 1)],
        "onsite": [(idx(i, j),) for j in range(1, l2 + 1) for i in range(1, l1 + 1)],
    }


def _class_weights(mapping: str, L: int, model: _Model, cls: str, interior: bool) -> Counter:
    out = Counter()
    for modes in hubbard_classes(L)[cls]:
        if interior and not _interior(model, *modes):
            continue
        if interior and mapping == "aqm" and cls == "vertical" and s_coord(modes[1], 2 * L)[1] % 2:
            continue
        if cls in ("vertical", "horizontal"):
            out[model.hop(*modes)] += 1
        elif cls == "hubbard":
            out[(model.zz(*modes), model.penalty(*modes))] += 1
        else:
            out[model.z(*modes)] += 1
    return out


@dataclasses.dataclass
class WeightTable:
    """Interior string weights of one mapping.

    Attributes:
        mapping: ``"aqm"``, ``"vct"`` or ``"bksf"``.
        L: Requested side length.
        cells: Class name to weight (tuple for hoppings).
        source_L: Side length each class was read from.
        histograms: All-term weight histograms at ``L`` per class.
    """

    mapping: str
    L: int
    cells: dict
    source_L: dict
    histograms: dict

    def to_json(self) -> dict:
        """JSON-ready dict."""
        hist = {c: [{"weights": list(k) if isinstance(k, tuple) else k, "count": v} for k, v in sorted(h.items())]
                for c, h in self.histograms.items()}
        return {"mapping": self.mapping, "L": self.L, "cells": {k: list(v) if isinstance(v, tuple) else v
                                                                for k, v in self.cells.items()},
                "source_L": self.source_L, "histograms": hist}

    def format_row(self) -> str:
        """``stab | v v v v | h h h h | hub(+p) | onsite``."""
        c = self.cells
        hub = f"{c['hubbard']}" + (f"(+{c['hubbard_penalty']})" if c.get("hubbard_penalty") else "")
        return (f"{c['stabilizer']} | {'|'.join(map(str, c['vertical']))} | "
                f"{'|'.join(map(str, c['horizontal']))} | {hub} | {c['onsite']}")


def hubbard_weight_table(mapping: str, L: int = 3) -> WeightTable:
    """Interior weights of the Hubbard model compiled with ``mapping``.

    Args:
        mapping: ``"aqm"`` (square lattice AQM), ``"vct"`` or ``"bksf"``.
        L: Side length of the site lattice.

    Returns:
        The table; each cell is the most common interior weight.

    Raises:
        ValueError: For an unknown mapping or if no interior term exists up to
            ``L = 6``.
    """
    if mapping not in _MODELS:
        raise ValueError(f"unknown mapping {mapping!r}")
    models = {L: _MODELS[mapping](L)}
    cells, source, hist = {}, {}, {}
    for cls in ("vertical", "horizontal", "hubbard", "onsite"):
        hist[cls] = _class_weights(mapping, L, models[L], cls, interior=False)
        size = L
        while True:
            if size not in models:
                models[size] = _MODELS[mapping](size)
            found = _class_weights(mapping, size, models[size], cls, interior=True)
            if found:
                break
            size += 1
            if size > max(L, MAX_FALLBACK_L):
                raise ValueError(f"no interior {cls} term for {mapping} up to L={size - 1}")
        value = found.most_common(1)[0][0]
        source[cls] = size
        if cls == "hubbard":
            cells["hubbard"], penalty = value
            if mapping == "bksf":
                cells["hubbard_penalty"] = penalty
        else:
            cells[cls] = value
    cells["stabilizer"] = models[L].stabilizer
    source["stabilizer"] = L
    return WeightTable(mapping, L, cells, source, hist)


def qubit_counts(l1: int, l2: int, period: int = 1) -> dict[str, dict[str, int]]:
    """Auxiliary and total qubit counts per mapping on an ``l1 x l2`` lattice.

    Counts are measured on constructed codes, not read from formulas.
    """
    out = {}
    e = aqcode.build_e_type(l1, l2)
    sq = aqcode.build_square(l1, l2)
    out["aqm-e"] = {"aux": e.n - e.N, "total": e.n}
    out["aqm-square"] = {"aux": sq.n - sq.N, "total": sq.n}
    try:
        sp = aqcode.build_sparse(l1, l2, period)
    except ValueError:
        pass
    else:
        out["aqm-sparse"] = {"aux": sp.n - sp.N, "total": sp.n}
    v = vct.build_vct(l1, l2)
    out["vct"] = {"aux": v.n - v.N, "total": v.n}
    g = bksf.build_bksf(l1, l2)
    out["bksf"] = {"aux": g.n - g.N, "total": g.n}
    return out


def hubbard_qubit_totals(L: int) -> dict[str, int]:
    """Total qubits of the Hubbard embeddings: VCT ``4L²+2L``, BKSF ``4L²-3L``."""
    code, _ = vct.hubbard_vct(L)
    return {"vct": code.n, "bksf": bksf.build_bksf(2 * L, L).n}
