"""Command-line front end.

Subcommands:
    hubbard   emit a Fermi-Hubbard Hamiltonian as FermionSum JSON
    map       compile a FermionSum into a PauliSum under one mapping
    stats     weight histograms, qubit counts and the Hubbard weight table
    tiling    local stabilizer tiles of a code
    circuit   initialization or propagator circuits
    verify    oracle suite (algebra + code-space spectrum); exit 1 on failure

Exit codes: 0 ok, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import statistics
import sys
from collections import Counter
from collections.abc import Callable, Sequence

import numpy as np

from latticemap import aqcode, bksf, circuits, linmap, oracle, tables, vct
from latticemap._lattice import QubitLayout, s_index
from latticemap.fermion import FermionSum, MajoranaFactor, Species, annihilate, create, hubbard
from latticemap.gf2 import StabilizerGroup
from latticemap.pauli import PauliString, PauliSum, commutes

MAPPING_IDS = ("jw", "bk", "parity", "tree", "aqm-e", "aqm-square", "aqm-sparse", "vct", "bksf")
LINEAR_IDS = ("jw", "bk", "parity", "tree")
AQM_IDS = ("aqm-e", "aqm-square", "aqm-sparse")
TABLE_IDS = {"aqm-square": "aqm", "vct": "vct", "bksf": "bksf"}
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SPECTRUM_QUBIT_LIMIT = 16
SPECTRUM_MODE_LIMIT = oracle.DENSE_LIMIT


class UsageError(Exception):
    """Invalid flag combination (exit code 2)."""


@dataclasses.dataclass
class Compiled:
    """A mapping bound to a lattice.

    Attributes:
        mapping: Mapping id.
        n_modes: Number of fermionic modes.
        n_qubits: Number of qubits.
        stabilizers: Stabilizer generators (empty for linear encoders).
        group: Stabilizer group or ``None``.
        meta: Code description for reports.
        transform: Fermion operator to unrouted Pauli sum.
        route: Routing of a mapped sum (identity where not applicable).
        algebra: Runs the algebra suite.
        code: Underlying encoder, code or graph.
        layout: Qubit layout, if any.
    """

    mapping: str
    n_modes: int
    n_qubits: int
    stabilizers: list[PauliString]
    group: StabilizerGroup | None
    meta: dict
    transform: Callable[[FermionSum], PauliSum]
    route: Callable[[PauliSum], PauliSum]
    algebra: Callable[[], oracle.AlgebraReport]
    code: object
    layout: QubitLayout | None = None
    sector: str = "even"


def _heap_forest(n: int) -> linmap.Forest:
    return linmap.Forest.from_parents([None] + [(v - 1) // 2 for v in range(1, n)])


def _best_route(route: Callable[[PauliString, str], PauliString], strategies: Sequence[str]):
    def go(H: PauliSum) -> PauliSum:
        return H.map_strings(lambda s: min((route(s, p) for p in strategies), key=lambda t: t.weight))
    return go


def _majorana(a: int) -> MajoranaFactor:
    return MajoranaFactor(a // 2 + 1, Species.M if a % 2 == 0 else Species.MBAR)


def compile_mapping(mapping: str, lx: int, ly: int, periodicity: int | None = None, variant: int = 2,
                    sector: str = "even", chi: Sequence[int] = (), b_signs: dict | None = None) -> Compiled:
    """Builds the mapping on an ``lx x ly`` mode lattice.

    Raises:
        ValueError: For unknown ids or invalid lattice parameters.
    """
    if lx < 1 or ly < 1:
        raise ValueError("lattice dimensions must be positive")
    N = lx * ly
    if mapping in LINEAR_IDS:
        e = {"jw": lambda: linmap.jw_s_pattern(lx, ly), "bk": lambda: linmap.bravyi_kitaev(N),
             "parity": lambda: linmap.parity(N),
             "tree": lambda: linmap.encoder_from_forest(linmap.label_forest(_heap_forest(N)))}[mapping]()
        return Compiled(mapping, N, N, [], None, {"mapping": mapping, "l1": lx, "l2": ly, "qubits": N},
                        lambda f: linmap.transform(e, f), lambda H: H,
                        lambda: oracle.algebra_check(e.ladder_image, N), e)
    if mapping in AQM_IDS:
        if mapping == "aqm-e":
            code = aqcode.build_e_type(lx, ly, chi)
        elif mapping == "aqm-square":
            code = aqcode.build_square(lx, ly, chi)
        else:
            code = aqcode.build_sparse(lx, ly, periodicity or 2, chi)

        def image(j: int, dagger: bool) -> PauliSum:
            op = create(j, N) if dagger else annihilate(j, N)
            return aqcode.adjusted_transform(code, None, op)

        route = (_best_route(lambda s, p: aqcode.route_string(code, s, p), ("col-then-row", "row-then-col"))
                 if code.kind in ("square", "sparse") else (lambda H: H))
        return Compiled(mapping, N, code.n, code.stabilizers, code.group, code.describe(),
                        lambda f: aqcode.adjusted_transform(code, None, f), route,
                        lambda: oracle.algebra_check(image, N, code.group), code, code.layout)
    if mapping == "vct":
        code = vct.build_vct(lx, ly, b=b_signs, chi=chi)
        return Compiled(mapping, N, code.n, code.stabilizers, code.group, code.describe(),
                        lambda f: vct.vct_transform(code, f), lambda H: vct.route_sum(code, H, "best"),
                        lambda: oracle.algebra_check(code.ladder_image, N, code.group), code, code.layout)
    if mapping == "bksf":
        g = bksf.build_bksf(lx, ly, variant)
        return Compiled(mapping, N, g.n, g.stabilizers, g.group, {**g.describe(), "sector": sector},
                        lambda f: bksf.bksf_transform(g, f, sector, "col-then-row"),
                        lambda H: H,
                        lambda: oracle.pair_algebra_check(
                            lambda a, c: bksf.pair_image(g, _majorana(a), _majorana(c), sector, "staircase"),
                            2 * N, g.group),
                        g, g.layout, sector)
    raise ValueError(f"unknown mapping {mapping!r}")


def _compile_best(c: Compiled, f: FermionSum) -> PauliSum:
    """Routed image; BKSF takes the lightest path strategy per term."""
    if c.mapping == "bksf":
        return bksf.bksf_transform(c.code, f, c.sector, "best")
    return c.route(c.transform(f))


def lattice_model(lx: int, ly: int, rng: np.random.Generator) -> FermionSum:
    """Random nearest-neighbour hopping plus density-density model on the S-pattern grid."""
    f = FermionSum(lx * ly)
    idx = lambda i, j: s_index(i, j, lx)  # noqa: E731
    for j in range(1, ly + 1):
        for i in range(1, lx + 1):
            a = idx(i, j)
            f.add(float(rng.normal()), [(a, True), (a, False)], "onsite")
            for nb in ((i + 1, j), (i, j + 1)):
                if nb[0] > lx or nb[1] > ly:
                    continue
                b = idx(*nb)
                t = complex(rng.normal(), rng.normal())
                f.add(t, [(a, True), (b, False)], "hop")
                f.add(t.conjugate(), [(b, True), (a, False)], "hop")
                f.add(float(rng.normal()), [(a, True), (a, False), (b, True), (b, False)], "density")
    return f


def weight_stats(H: PauliSum) -> dict:
    """Histogram, maximum and mean of the term weights."""
    w = [s.weight for _, s in H.items()]
    return {"terms": len(w), "histogram": {str(k): v for k, v in sorted(Counter(w).items())},
            "max_weight": max(w, default=0), "mean_weight": statistics.fmean(w) if w else 0.0}


def emit_stats(c: Compiled, f: FermionSum) -> dict:
    """Per-class routed and unrouted weight statistics plus qubit counts."""
    classes = {}
    for tag in sorted({t.tag for t in f.terms}):
        part = f.with_tag(tag)
        classes[tag or "untagged"] = {"unrouted": weight_stats(c.transform(part)),
                                      "routed": weight_stats(_compile_best(c, part))}
    return {"mapping": c.mapping, "qubits": {"data": c.n_modes, "aux": c.n_qubits - c.n_modes,
                                              "total": c.n_qubits},
            "stabilizer_weights": weight_stats(PauliSum.from_terms(c.n_qubits, ((1, s) for s in c.stabilizers))),
            "classes": classes, "unrouted": weight_stats(c.transform(f)), "routed": weight_stats(_compile_best(c, f))}


def tiling(c: Compiled) -> list[dict]:
    """Local stabilizer tiles with colours where the mapping defines them."""
    if c.mapping in LINEAR_IDS:
        return []
    if c.mapping == "vct":
        return vct.checkerboard(c.code)
    if c.mapping == "bksf":
        return [{"pauli": t["stabilizer"], "weight": len(t["qubits"]), "color": t["colour"],
                 "plaquette": t["plaquette"]} for t in bksf.brickwork_tiling(c.code)]
    tiles = aqcode.local_tiling(c.code) if c.code.kind in ("square", "sparse") else c.stabilizers
    return [{"pauli": s.to_label(), "weight": s.weight} for s in tiles]


def verify(c: Compiled, f: FermionSum, H: PauliSum | None = None) -> dict:
    """Runs the algebra suite and, at desk scale, the code-space spectrum check."""
    report: dict = {"mapping": c.mapping, "qubits": c.n_qubits}
    alg = c.algebra()
    report["algebra"] = {"passed": alg.passed, "checked": alg.checked,
                         "failures": alg.to_json()["failures"][:10]}
    H = _compile_best(c, f) if H is None else H
    bad = [s.to_label() for s in c.stabilizers if not all(commutes(s, t) for _, t in H.items())]
    report["commutes_with_stabilizers"] = not bad
    report["hermitian"] = H.is_hermitian()
    ok = alg.passed and not bad and report["hermitian"]
    if c.n_qubits <= SPECTRUM_QUBIT_LIMIT and f.n_modes <= SPECTRUM_MODE_LIMIT:
        Hjw = linmap.transform(linmap.jordan_wigner(f.n_modes), f)
        if c.mapping == "bksf":
            ref = oracle.number_parity_projector_spectrum(Hjw, 0 if c.sector == "even" else 1)
        else:
            ref = oracle.full_spectrum(Hjw)
        if c.stabilizers:
            got = oracle.restricted_spectrum(H, oracle.codespace_basis(c.stabilizers, c.n_qubits))
        else:
            got = oracle.full_spectrum(H)
        same = oracle.spectra_equal(got, ref)
        report["spectrum"] = {"passed": same, "dimension": len(ref),
                              "max_deviation": float(np.max(np.abs(np.sort(got) - np.sort(ref))))
                              if len(got) == len(ref) else None}
        ok = ok and same
    else:
        report["spectrum"] = {"passed": None, "skipped": "above desk-scale limit"}
    report["passed"] = ok
    return report


# -- argument handling -----------------------------------------------------------------
def _parse_bits(text: str) -> tuple[int, ...]:
    if not text or set(text) - {"0", "1"}:
        raise argparse.ArgumentTypeError("expected a bitstring such as 0110")
    return tuple(int(ch) for ch in text)


def _parse_edges(text: str) -> dict[tuple[int, int], int]:
    out = {}
    try:
        for item in text.split(","):
            u, v = item.split("-")
            out[(int(u), int(v))] = 1
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected edges like 1-2,3-4") from exc
    return out


def build_parser() -> argparse.ArgumentParser:
    """The argument parser."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mapping", choices=MAPPING_IDS)
    common.add_argument("--lx", type=int, help="lattice width")
    common.add_argument("--ly", type=int, help="lattice height")
    common.add_argument("-L", dest="L", type=int, help="Hubbard side length in sites")
    common.add_argument("--periodicity", type=int, help="auxiliary column period (aqm-sparse)")
    common.add_argument("--variant", type=int, choices=(1, 2), help="BKSF ordering variant")
    common.add_argument("--sector", choices=("even", "odd"), help="BKSF parity sector")
    common.add_argument("--chi", type=_parse_bits, help="auxiliary configuration bits (AQM, VCT)")
    common.add_argument("--b-signs", type=_parse_edges, help="VCT edges with b=1, e.g. 1-2,3-4")
    common.add_argument("--in", dest="inp", help="input JSON path, '-' for stdin")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--seed", type=int, help="RNG seed for random parameters")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--hubbard", action="store_true", help="use the Hubbard embedding (stats)")

    p = argparse.ArgumentParser(prog="latticemap", description="Lattice-aware fermion-to-qubit compiler.")
    sub = p.add_subparsers(dest="command", required=True)
    h = sub.add_parser("hubbard", parents=[common], help="emit a Hubbard Hamiltonian")
    for name, default in (("--t-h", 1.0), ("--t-v", 1.0), ("--eps", 0.0), ("--U", 1.0)):
        h.add_argument(name, type=float, default=default)
    sub.add_parser("map", parents=[common], help="compile a Hamiltonian")
    sub.add_parser("stats", parents=[common], help="weights and qubit counts")
    sub.add_parser("tiling", parents=[common], help="stabilizer tiles")
    c = sub.add_parser("circuit", parents=[common], help="init or propagator circuit")
    c.add_argument("kind", choices=("init", "propagator"))
    c.add_argument("--pauli", help="Hermitian string such as 'X1 Z2 X3'")
    c.add_argument("--phi", type=float, default=0.1)
    c.add_argument("--qubits", type=int, help="register size for a bare propagator")
    c.add_argument("--bridge", action="store_true", help="allow bridging over idle qubits")
    sub.add_parser("verify", parents=[common], help="run the oracle suite")
    return p


def _validate(a: argparse.Namespace) -> None:
    m = a.mapping
    if a.periodicity is not None and m != "aqm-sparse":
        raise UsageError("--periodicity is only valid with --mapping aqm-sparse")
    if a.periodicity is not None and a.periodicity < 1:
        raise UsageError("--periodicity must be positive")
    if (a.variant is not None or a.sector is not None) and m != "bksf":
        raise UsageError("--variant and --sector are only valid with --mapping bksf")
    if a.chi is not None and m not in AQM_IDS + ("vct",):
        raise UsageError("--chi is only valid with AQM and VCT mappings")
    if a.b_signs is not None and m != "vct":
        raise UsageError("--b-signs is only valid with --mapping vct")
    if a.hubbard and a.command != "stats":
        raise UsageError("--hubbard is only valid with stats")
    if a.hubbard and (a.L is None or m not in TABLE_IDS):
        raise UsageError("--hubbard needs -L and one of " + ", ".join(TABLE_IDS))
    for name in ("lx", "ly", "L"):
        v = getattr(a, name)
        if v is not None and v < 1:
            raise UsageError(f"-{'-' if len(name) > 1 else ''}{name} must be positive")


def _read_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _dims(a: argparse.Namespace, data: dict | None = None, n_modes: int | None = None) -> tuple[int, int]:
    if a.lx is not None and a.ly is not None:
        return a.lx, a.ly
    if a.L is not None:
        return 2 * a.L, a.L
    if data and "lattice" in data:
        return tuple(data["lattice"])
    if n_modes is not None and a.mapping in LINEAR_IDS:
        return n_modes, 1
    raise UsageError("lattice dimensions required (--lx and --ly, or -L)")


def _compile(a: argparse.Namespace, lx: int, ly: int) -> Compiled:
    if a.mapping is None:
        raise UsageError("--mapping is required")
    try:
        return compile_mapping(a.mapping, lx, ly, a.periodicity, a.variant or 2, a.sector or "even",
                               a.chi or (), a.b_signs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _config(a: argparse.Namespace) -> dict:
    return {k: v for k, v in (("periodicity", a.periodicity), ("variant", a.variant), ("sector", a.sector),
                              ("chi", list(a.chi) if a.chi else None),
                              ("b_signs", [f"{u}-{v}" for u, v in a.b_signs] if a.b_signs else None))
            if v is not None}


def _load_fermion(a: argparse.Namespace) -> tuple[FermionSum, dict]:
    if a.inp is None:
        raise UsageError("--in is required")
    data = _read_json(a.inp)
    try:
        return FermionSum.from_json(data), data
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"not a FermionSum JSON document: {exc}") from exc


def _cmd_hubbard(a):
    if a.L is None:
        raise UsageError("hubbard needs -L")
    params = {"t_h": a.t_h, "t_v": a.t_v, "eps": a.eps, "U": a.U}
    if a.seed is not None:
        rng = np.random.default_rng(a.seed)
        L = a.L
        params = {"t_h": a.t_h * rng.uniform(0.5, 1.5, (max(2 * L - 2, 0), L)),
                  "t_v": a.t_v * rng.uniform(0.5, 1.5, (2 * L, max(L - 1, 0))),
                  "eps": a.eps + rng.uniform(-0.5, 0.5, (2 * L, L)),
                  "U": a.U * rng.uniform(0.5, 1.5, (L, L))}
    f = hubbard(a.L, **params)
    out = {**f.to_json(), "lattice": [2 * a.L, a.L]}
    text = f"{len(f.terms)} terms on {f.n_modes} modes ({2 * a.L} x {a.L})"
    return out, text, EXIT_OK


def _cmd_map(a):
    f, data = _load_fermion(a)
    lx, ly = _dims(a, data, f.n_modes)
    c = _compile(a, lx, ly)
    if f.n_modes != c.n_modes:
        raise UsageError(f"Hamiltonian has {f.n_modes} modes, lattice {lx} x {ly} has {c.n_modes}")
    H = _compile_best(c, f)
    out = {"mapping": c.mapping, "lattice": [lx, ly], "config": _config(a), "n_modes": c.n_modes,
           "n_qubits": c.n_qubits, "code": c.meta, "stabilizers": [s.to_label() for s in c.stabilizers],
           "fermion": f.to_json(), "hamiltonian": H.to_json()}
    lines = [f"{c.mapping}: {c.n_modes} modes -> {c.n_qubits} qubits, {len(H)} terms"]
    lines += [f"{complex(co).real:+.6g}{complex(co).imag:+.6g}j  {s.to_label()}" for co, s in H.items()]
    return out, "\n".join(lines), EXIT_OK


def _cmd_stats(a):
    if a.mapping is None:
        raise UsageError("--mapping is required")
    if a.hubbard:
        t = tables.hubbard_weight_table(TABLE_IDS[a.mapping], a.L)
        totals = tables.hubbard_qubit_totals(a.L)
        total = totals.get(TABLE_IDS[a.mapping], aqcode.build_square(2 * a.L, a.L).n)
        out = {**t.to_json(), "row": t.format_row(), "qubits": {"total": total, "modes": 2 * a.L * a.L}}
        text = f"{a.mapping} L={a.L}: stab | vertical XX|YY|XY|YX | horizontal | Hubbard | on-site\n"
        return out, text + t.format_row() + f"\nqubits: {total}", EXIT_OK
    if a.inp is not None:
        f, data = _load_fermion(a)
        lx, ly = _dims(a, data, f.n_modes)
        c = _compile(a, lx, ly)
        out = emit_stats(c, f)
        lines = [f"{c.mapping}: aux {out['qubits']['aux']}, total {out['qubits']['total']}"]
        for tag, s in out["classes"].items():
            lines.append(f"{tag}: unrouted max {s['unrouted']['max_weight']}, routed max {s['routed']['max_weight']}"
                         f" hist {s['routed']['histogram']}")
        return out, "\n".join(lines), EXIT_OK
    lx, ly = _dims(a)
    c = _compile(a, lx, ly)
    out = {"mapping": c.mapping, "l1": lx, "l2": ly, "aux": c.n_qubits - c.n_modes, "total": c.n_qubits}
    if a.mapping == "aqm-sparse":
        out["periodicity"] = a.periodicity or 2
    return out, f"{c.mapping} {lx}x{ly}: aux {out['aux']}, total {out['total']}", EXIT_OK


def _cmd_tiling(a):
    lx, ly = _dims(a)
    c = _compile(a, lx, ly)
    tiles = tiling(c)
    text = "\n".join(f"{t['weight']:>2}  {t.get('color', '')!s:>5}  {t['pauli']}" for t in tiles)
    return {"mapping": c.mapping, "l1": lx, "l2": ly, "tiles": tiles}, text, EXIT_OK


def _cmd_circuit(a):
    layout = None
    if a.kind == "init":
        if a.mapping not in AQM_IDS:
            raise UsageError("circuit init supports aqm-e, aqm-square and aqm-sparse")
        c = _compile(a, *_dims(a))
        circ = circuits.synth_init(c.code)
    else:
        if a.pauli is None:
            raise UsageError("circuit propagator needs --pauli")
        if a.mapping is not None:
            c = _compile(a, *_dims(a))
            n, layout = c.n_qubits, c.layout
        else:
            n = a.qubits
        try:
            h = PauliString.from_label(a.pauli, n)
            circ = circuits.synth_propagator(h, a.phi, layout or QubitLayout.line(h.n), bridge=a.bridge)
        except (ValueError, circuits.ConnectivityError) as exc:
            raise UsageError(str(exc)) from exc
    out = {**circ.to_json(), "depth": circ.depth, "cnots": circ.count("cnot")}
    return out, f"# depth {circ.depth}, {circ.count('cnot')} CNOTs\n{circ.to_text()}", EXIT_OK


def _cmd_verify(a):
    H = None
    if a.inp is not None:
        data = _read_json(a.inp)
        if "hamiltonian" in data:
            if a.mapping not in (None, data["mapping"]):
                raise UsageError("--mapping disagrees with the input document")
            cfg = data.get("config", {})
            a.mapping = data["mapping"]
            a.periodicity = cfg.get("periodicity", a.periodicity)
            a.variant = cfg.get("variant", a.variant)
            a.sector = cfg.get("sector", a.sector)
            a.chi = tuple(cfg["chi"]) if "chi" in cfg else a.chi
            a.b_signs = _parse_edges(",".join(cfg["b_signs"])) if "b_signs" in cfg else a.b_signs
            f = FermionSum.from_json(data["fermion"])
            H = PauliSum.from_json(data["n_qubits"], data["hamiltonian"])
        else:
            f = FermionSum.from_json(data)
        lx, ly = _dims(a, data, f.n_modes)
        c = _compile(a, lx, ly)
    else:
        lx, ly = _dims(a)
        c = _compile(a, lx, ly)
        f = lattice_model(lx, ly, np.random.default_rng(a.seed or 0))
    rep = verify(c, f, H)
    spec = rep["spectrum"]
    text = (f"{c.mapping}: algebra {'ok' if rep['algebra']['passed'] else 'FAIL'} "
            f"({rep['algebra']['checked']} relations), spectrum "
            f"{'skipped' if spec['passed'] is None else 'ok' if spec['passed'] else 'FAIL'}, "
            f"{'PASS' if rep['passed'] else 'FAIL'}")
    return rep, text, EXIT_OK if rep["passed"] else EXIT_FAIL


_COMMANDS = {"hubbard": _cmd_hubbard, "map": _cmd_map, "stats": _cmd_stats, "tiling": _cmd_tiling,
             "circuit": _cmd_circuit, "verify": _cmd_verify}


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point; returns the exit code."""
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _validate(a)
        out, text, code = _COMMANDS[a.command](a)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"latticemap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as exc:
        print(f"latticemap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    payload = json.dumps(out, indent=1) if a.format == "json" else text
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
