"""Report assembly and deterministic JSON output.

Floats are written with 17 significant digits, non-finite floats as
``null``; collections that are sets in spirit are sorted before output.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any

import numpy as np

from . import __version__
from .analysis import AcrAnalysis, AcrOptions, DynamicVerdict, StaticVerdict
from .complex_balance import ComplexBalanceReport
from .dynamics import SteadyStateRecord
from .network import MassActionSystem, ReactionNetwork
from .parser import NetworkSource, format_network
from .structure import StructuralReport, unit_vector_in_S

SCHEMA_VERSION = 1


def _num(x) -> Any:
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(x)


def dumps(obj, indent: int = 2) -> str:
    """JSON text with 17-significant-digit floats and stable layout."""
    return _dump(obj, 0, indent) + "\n"


def _dump(obj, level: int, indent: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, Fraction):
        return str(obj.numerator) if obj.denominator == 1 else _dump(float(obj), level, indent)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            return "null"
        text = f"{v:.17g}"
        if "e" not in text and "." not in text and "n" not in text:
            text += ".0"
        return text
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_dump(v, level + 1, indent)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, Fraction, np.integer, np.floating, bool)) or v is None for v in seq):
            return "[" + ", ".join(_dump(v, level + 1, indent) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + _dump(v, level + 1, indent) for v in seq) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def network_json(source: NetworkSource | MassActionSystem | ReactionNetwork,
                 name: str | None = None) -> dict:
    if isinstance(source, NetworkSource):
        name = name or source.name
        obj = source.system
    else:
        obj = source
    net = obj.network if isinstance(obj, MassActionSystem) else obj
    rates = list(obj.rates) if isinstance(obj, MassActionSystem) else None
    return {
        "name": name,
        "species": list(net.species_names),
        "complexes": [net.complex_label(c) for c in net.complexes],
        "reactions": [net.reaction_label(r) for r in range(net.n_reactions)],
        "rates": rates,
        "text": format_network(obj, name=name),
    }


def structure_json(net: ReactionNetwork, rep: StructuralReport) -> dict:
    def label(c: int) -> str:
        return net.complex_label(net.complexes[c])

    names = net.species_names
    return {
        "species": net.n_species,
        "complexes": rep.n,
        "linkage_classes_count": rep.ell,
        "stoichiometric_rank": rep.s,
        "deficiency": rep.deficiency,
        "linkage_classes": [[label(c) for c in comp] for comp in rep.linkage_classes],
        "strong_linkage_classes": [[label(c) for c in comp] for comp in rep.strong_linkage_classes],
        "terminal_strong_linkage_classes": [
            [label(c) for c in rep.strong_linkage_classes[t]] for t in rep.terminal_slcs],
        "non_terminal_complexes": [label(c) for c in rep.non_terminal_complexes],
        "weakly_reversible": rep.weakly_reversible,
        "one_terminal_per_linkage_class": rep.one_terminal_per_linkage,
        "conservation_laws": [list(w) for w in rep.conservation.integer_basis()],
        "mass_conserving": rep.mass_conserving,
        "positive_conservation_law": (list(rep.conservation.positive_certificate)
                                      if rep.conservation.positive_certificate else None),
        "shinar_feinberg": {
            "applicable": rep.sf.applicable,
            "species": [names[i] for i in rep.sf.species],
            "hits": [{"species": names[h.species], "alpha": h.alpha,
                      "complexes": [label(h.pair[0]), label(h.pair[1])]} for h in rep.sf.hits],
            "caveat": rep.sf.caveat,
        },
        "unit_vectors_in_S": [names[i] for i in range(net.n_species)
                              if unit_vector_in_S(net, i).in_span],
    }


def complex_balance_json(cb: ComplexBalanceReport) -> dict:
    out = {
        "guaranteed_complex_balanced": cb.guaranteed_cb,
        "static_acr_species": sorted(cb.static_acr_species),
        "no_acr_certificate": cb.no_acr_certificate,
        "global_attractor_known": cb.global_attractor_known,
        "classification": cb.classification,
        "equivalence_conditional_on_global_attractor": cb.dynamic_equivalence_conditional,
    }
    if cb.cb_verified_at is not None:
        chk = cb.cb_verified_at
        out["verified_at"] = {"x": list(chk.x), "residuals": list(chk.residuals),
                              "balanced": chk.balanced}
    return out


def _static_json(v: StaticVerdict) -> dict:
    return {
        "kind": v.kind,
        "value": v.value,
        "certificate": v.certificate,
        "witnesses": [list(map(_num, w)) for w in v.witnesses],
        "note": v.note,
    }


def _dynamic_json(v: DynamicVerdict) -> dict:
    return {
        "kind": v.kind,
        "value": v.value,
        "basin": v.basin,
        "witness": v.witness,
        "note": v.note,
        "trajectories": v.trajectories,
    }


def steady_state_json(rec: SteadyStateRecord) -> dict:
    eig = sorted(np.asarray(rec.eigenvalues).tolist(), key=lambda z: (z.real, z.imag))
    return {
        "x": [float(v) for v in rec.x],
        "residual": float(rec.residual),
        "stability": rec.stability,
        "eigenvalues": [[float(z.real), float(z.imag)] for z in eig],
    }


def acr_json(analysis: AcrAnalysis) -> dict:
    states = sorted(analysis.static_search.states, key=lambda r: tuple(r.x))
    return {
        "species": [
            {"name": v.species, "static": _static_json(v.static),
             "dynamic": _dynamic_json(v.dynamic), "values_agree": v.values_agree}
            for v in analysis.verdicts
        ],
        "static_species": analysis.static_species,
        "dynamic_species": analysis.dynamic_species,
        "inconclusive": analysis.inconclusive,
        "steady_states": [steady_state_json(r) for r in states],
        "search": {
            "anchors": analysis.static_search.anchors,
            "newton_runs": analysis.static_search.newton_runs,
            "single_compatibility_class": analysis.static_search.single_class,
        },
        "warnings": list(analysis.warnings),
        "evidence": "sampled; a named certificate upgrades a verdict to proof",
    }


def build_report(source, structure: StructuralReport, cb: ComplexBalanceReport | None,
                 analysis: AcrAnalysis | None, options: AcrOptions | None,
                 extra_options: dict | None = None) -> dict:
    net = source.network if not isinstance(source, ReactionNetwork) else source
    opts = options.as_dict() if options is not None else {}
    opts.update(extra_options or {})
    return {
        "version": {"schema": SCHEMA_VERSION, "tool": __version__},
        "network": network_json(source),
        "structure": structure_json(net, structure),
        "complex_balance": complex_balance_json(cb) if cb is not None else None,
        "acr": acr_json(analysis) if analysis is not None else None,
        "options": opts,
    }


def verdict_table(analysis: AcrAnalysis) -> str:
    """Plain-text table, one row per species."""
    rows = [("species", "static", "value", "certificate", "dynamic", "value", "basin")]
    for v in analysis.verdicts:
        rows.append((
            v.species,
            v.static.kind, _fmt(v.static.value), v.static.certificate or "-",
            v.dynamic.kind, _fmt(v.dynamic.value), v.dynamic.basin or "-",
        ))
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
    for w in analysis.warnings:
        lines.append(f"warning: {w}")
    return "\n".join(lines)


def _fmt(x) -> str:
    return "-" if x is None else f"{x:.10g}"
