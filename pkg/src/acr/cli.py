"""Command-line front end: ``acr parse|analyze|simulate|acr|catalog``.

Exit codes: 0 success, 1 inconclusive analysis or failed golden run,
2 input error.  ``ACR_SEED`` sets the default seed.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import AcrOptions, acr_network_sweep, analyze_acr
from .catalog import list_entries, load, run_golden
from .complex_balance import complex_balance_report
from .dynamics import integrate
from .network import MassActionSystem
from .parser import NetworkSource, ParseError, format_network, parse_document
from .report import SCHEMA_VERSION, build_report, dumps, network_json, structure_json, verdict_table
from .structure import structural_report

EXIT_OK, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("ACR_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"ACR_SEED must be an integer, got {raw!r}") from None


def _vector(text: str, what: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise InputError(f"{what}: expected comma-separated numbers, got {text!r}") from None
    if not all(np.isfinite(vals)):
        raise InputError(f"{what}: values must be finite")
    return vals


def _read(path: str) -> NetworkSource:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"{path}: no such file")
    try:
        return parse_document(p.read_text())
    except ParseError as e:
        raise InputError(f"{path}:{e.line}:{e.col}: {e.message}") from None


def _system(src: NetworkSource, rates: str | None) -> tuple[NetworkSource, MassActionSystem]:
    net = src.network
    if rates is not None:
        ks = _vector(rates, "--rates")
        if len(ks) != net.n_reactions:
            raise InputError(f"--rates: {len(ks)} values for {net.n_reactions} reactions")
        if not all(k > 0 for k in ks):
            raise InputError("--rates: rate constants must be positive")
        src = NetworkSource(net, ks, src.name)
    if src.rates is None:
        raise InputError("network has no rate constants; add {k} to every reaction or pass --rates")
    return src, MassActionSystem(net, src.rates)


def _options(args) -> AcrOptions:
    opts = AcrOptions(seed=args.seed)
    if getattr(args, "samples", None) is not None:
        opts = replace(opts, samples=args.samples)
    if getattr(args, "t_end", None) is not None:
        opts = replace(opts, t_end=args.t_end)
    return opts


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _plot_data(directory: str, files: dict[str, str]) -> None:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in sorted(files.items()):
        (out / name).write_text(text)


# commands ------------------------------------------------------------------


def cmd_parse(args) -> int:
    src = _read(args.file)
    _write(None, format_network(src) + "\n")
    return EXIT_OK


def cmd_analyze(args) -> int:
    src = _read(args.file)
    report = structural_report(src.network)
    analysis, opts, cb = None, None, None
    if src.rates is not None or args.rates is not None:
        src, system = _system(src, args.rates)
        opts = _options(args)
        analysis = analyze_acr(system, opts, report=report)
        cb = complex_balance_report(system, report=report)
    else:
        cb = complex_balance_report(src.network, report=report)
    doc = build_report(src, report, cb, analysis, opts, {"seed": args.seed})
    if args.json:
        _write(args.out, dumps(doc))
    else:
        _write(args.out, _analysis_text(src, doc, analysis))
    return EXIT_INCONCLUSIVE if analysis is not None and analysis.inconclusive else EXIT_OK


def _analysis_text(src, doc, analysis) -> str:
    st = doc["structure"]
    lines = [
        doc["network"]["text"],
        "",
        f"complexes {st['complexes']}, linkage classes {st['linkage_classes_count']}, "
        f"rank {st['stoichiometric_rank']}, deficiency {st['deficiency']}",
        f"weakly reversible: {st['weakly_reversible']}; mass conserving: {st['mass_conserving']}",
        f"Shinar-Feinberg species: {', '.join(st['shinar_feinberg']['species']) or '-'}",
        f"unit vectors in S: {', '.join(st['unit_vectors_in_S']) or '-'}",
        f"guaranteed complex balanced: {doc['complex_balance']['guaranteed_complex_balanced']}",
    ]
    if analysis is not None:
        lines += ["", verdict_table(analysis)]
    else:
        lines += ["", "no rate constants: structural analysis only"]
    return "\n".join(lines) + "\n"


def cmd_simulate(args) -> int:
    src, system = _system(_read(args.file), args.rates)
    x0 = _vector(args.x0, "--x0")
    if len(x0) != system.network.n_species:
        raise InputError(f"--x0: {len(x0)} values for {system.network.n_species} species "
                         f"({', '.join(system.network.species_names)})")
    if any(v < 0 for v in x0):
        raise InputError("--x0: concentrations must be nonnegative")
    if not args.t_end > 0:
        raise InputError("--t-end must be positive")
    traj = integrate(system, x0, args.t_end, rtol=args.rtol, atol=args.atol)
    text = traj.to_csv()
    _write(args.out, text)
    if args.plot_data:
        _plot_data(args.plot_data, {"trajectory.csv": text})
    if traj.status != "completed":
        print(f"integration stopped: {traj.status} at t={traj.times[-1]:.6g}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_acr(args) -> int:
    src, system = _system(_read(args.file), args.rates)
    opts = _options(args)
    both = not args.static and not args.dynamic
    run_static, run_dynamic = both or args.static, both or args.dynamic
    report = structural_report(system.network)
    if args.grid:
        sweep = acr_network_sweep(system.network, extra=[system.rates],
                                  opts=AcrOptions.for_sweep(args.seed))
        summary = sweep.summary()
        if args.json:
            doc = {"version": {"schema": SCHEMA_VERSION, "tool": __version__},
                   "network": network_json(src), "grid": summary,
                   "options": {**AcrOptions.for_sweep(args.seed).as_dict(), "grid": True}}
            _write(args.out, dumps(doc))
        else:
            _write(args.out, "\n".join(f"{k}: {v}" for k, v in summary.items()) + "\n")
        return EXIT_INCONCLUSIVE if summary["inconclusive_points"] else EXIT_OK
    analysis = analyze_acr(system, opts, static=run_static, dynamic=run_dynamic, report=report)
    if args.json:
        doc = build_report(src, report, complex_balance_report(system, report=report),
                           analysis, opts, {"static": run_static, "dynamic": run_dynamic})
        _write(args.out, dumps(doc))
    else:
        _write(args.out, verdict_table(analysis) + "\n")
    if args.plot_data:
        _plot_data(args.plot_data, _witness_files(system, analysis))
    undecided = any((run_static and v.static.kind == "inconclusive")
                    or (run_dynamic and v.dynamic.kind == "inconclusive")
                    for v in analysis.verdicts)
    return EXIT_INCONCLUSIVE if undecided else EXIT_OK


def _witness_files(system, analysis) -> dict[str, str]:
    """Re-integrate every dynamic witness so it can be plotted."""
    files = {}
    for v in analysis.verdicts:
        w = v.dynamic.witness
        if not w:
            continue
        traj = integrate(system, w["x0"], w["t"], guard=1e100)
        files[f"{v.species}-{w['reason'].replace(' ', '-')}.csv"] = traj.to_csv()
    return files


def _golden_json(result) -> dict:
    return {
        "name": result.name,
        "status": result.status,
        "mismatches": result.mismatches,
        "limited": result.limited,
        "structure": structure_json(load(result.name).network, result.structure),
        "cases": [
            {"rates": list(c.rates),
             "static": {v.species: v.static.kind for v in c.analysis.verdicts},
             "dynamic": {v.species: v.dynamic.kind for v in c.analysis.verdicts},
             "values": {v.species: v.dynamic.value if v.dynamic.value is not None else v.static.value
                        for v in c.analysis.verdicts},
             "basins": {v.species: v.dynamic.basin for v in c.analysis.verdicts}}
            for c in result.cases
        ],
        "grid": result.grid_summary,
    }


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in list_entries():
            e = load(name)
            print(f"{name:34s} {e.group:9s} {e.description}")
        return EXIT_OK
    if args.action == "show":
        if not args.name:
            raise InputError("catalog show needs an entry name")
        print(_entry_or_error(args.name).crn_text())
        return EXIT_OK
    if args.action == "run":
        if not args.name:
            raise InputError("catalog run needs an entry name")
        _entry_or_error(args.name)
        names = [args.name]
    else:
        names = list_entries()
    opts = AcrOptions(seed=args.seed)
    results = [run_golden(n, opts, grid=args.grid) for n in names]
    doc = {"version": {"schema": SCHEMA_VERSION, "tool": __version__},
           "options": {**opts.as_dict(), "grid": args.grid},
           "entries": [_golden_json(r) for r in results],
           "passed": all(r.passed for r in results)}
    _write(args.out, dumps(doc))
    for r in results:
        print(f"{r.status:8s} {r.name}", file=sys.stderr)
        for m in r.mismatches + r.limited:
            print(f"         {m}", file=sys.stderr)
    return EXIT_OK if doc["passed"] else EXIT_INCONCLUSIVE


def _entry_or_error(name: str):
    try:
        return load(name)
    except KeyError as e:
        raise InputError(str(e.args[0])) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="acr", description="ACR analysis of mass-action networks")
    p.add_argument("--version", action="version", version=f"acr {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def seeded(sp):
        sp.add_argument("--seed", type=int, default=None,
                        help="RNG seed (default: $ACR_SEED or 0)")

    sp = sub.add_parser("parse", help="print the canonical form of a .crn file")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("analyze", help="structure, complex balance and ACR verdicts")
    sp.add_argument("file")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--rates", help="comma-separated rate constants, overriding the file")
    sp.add_argument("--out", help="write the report here instead of stdout")
    seeded(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("simulate", help="integrate and print the trajectory as CSV")
    sp.add_argument("file")
    sp.add_argument("--x0", required=True, help="comma-separated initial concentrations")
    sp.add_argument("--t-end", type=float, default=100.0)
    sp.add_argument("--rates")
    sp.add_argument("--rtol", type=float, default=1e-8)
    sp.add_argument("--atol", type=float, default=1e-10)
    sp.add_argument("--out", help="CSV path (default stdout)")
    sp.add_argument("--plot-data", metavar="DIR", help="also write per-trajectory CSV files here")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("acr", help="static and dynamic ACR verdicts")
    sp.add_argument("file")
    sp.add_argument("--static", action="store_true", help="static detection only")
    sp.add_argument("--dynamic", action="store_true", help="dynamic detection only")
    sp.add_argument("--samples", type=int)
    sp.add_argument("--t-end", type=float)
    sp.add_argument("--grid", action="store_true", help="sweep the default rate grid")
    sp.add_argument("--rates")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--out")
    sp.add_argument("--plot-data", metavar="DIR", help="write witness trajectories as CSV here")
    seeded(sp)
    sp.set_defaults(func=cmd_acr)

    sp = sub.add_parser("catalog", help="built-in example networks and golden checks")
    sp.add_argument("action", choices=["list", "show", "run", "run-all"])
    sp.add_argument("name", nargs="?")
    sp.add_argument("--grid", action="store_true", help="include rate-grid sweeps (slow)")
    sp.add_argument("--out", help="write the JSON here instead of stdout")
    seeded(sp)
    sp.set_defaults(func=cmd_catalog)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if hasattr(args, "seed") and args.seed is None:
            args.seed = _default_seed()
        if getattr(args, "samples", None) is not None and args.samples < 1:
            raise InputError("--samples must be at least 1")
        if getattr(args, "t_end", None) is not None and not args.t_end > 0:
            raise InputError("--t-end must be positive")
        return args.func(args)
    except InputError as e:
        print(f"acr: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
