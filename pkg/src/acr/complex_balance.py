"""Complex balance checks and the ACR classification they certify.

Weakly reversible deficiency-zero networks are complex balanced for every
choice of rates.  For them static ACR in species i is equivalent to
``e_i`` lying in S, and dynamic ACR coincides with it (with a full basin)
whenever the positive steady states are known to be global attractors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import OdeSystem, scale_of
from .network import MassActionSystem, ReactionNetwork
from .structure import StructuralReport, structural_report, unit_vector_in_S

CB_TOL = 1e-8

ATTRACTOR_CONNECTED = "connected-network"
ATTRACTOR_LOW_DIM = "dim S <= 3"
ATTRACTOR_UNKNOWN = "unknown"

STATIC_AND_FULL = "static-and-if-dynamic-then-full"
NO_ACR = "no-acr"


@dataclass(frozen=True)
class BalanceCheck:
    x: tuple[float, ...]
    residuals: tuple[float, ...]  # inflow minus outflow, one per complex
    balanced: bool

    @property
    def max_residual(self) -> float:
        return max((abs(r) for r in self.residuals), default=0.0)


@dataclass(frozen=True)
class ComplexBalanceReport:
    guaranteed_cb: bool
    static_acr_species: tuple[str, ...]
    no_acr_certificate: bool
    global_attractor_known: str
    classification: dict[str, str] | None = None  # None when the network is not guaranteed cb
    cb_verified_at: BalanceCheck | None = None

    @property
    def applicable(self) -> bool:
        return self.guaranteed_cb

    @property
    def dynamic_equivalence_conditional(self) -> bool:
        """True when static-iff-dynamic rests on the global attractor conjecture."""
        return self.guaranteed_cb and self.global_attractor_known == ATTRACTOR_UNKNOWN


def guaranteed_complex_balanced(net: ReactionNetwork, report: StructuralReport | None = None) -> bool:
    report = report or structural_report(net)
    return report.weakly_reversible and report.deficiency == 0


def complex_fluxes(sys: MassActionSystem, x) -> tuple[np.ndarray, np.ndarray]:
    """Per-complex ``(inflow, outflow)`` at ``x``."""
    net = sys.network
    flux = OdeSystem(sys).fluxes(np.asarray(x, dtype=float))
    inflow = np.zeros(net.n_complexes)
    outflow = np.zeros(net.n_complexes)
    for r, (src, prod) in enumerate(net.edges):
        outflow[src] += flux[r]
        inflow[prod] += flux[r]
    return inflow, outflow


def verify_complex_balance_at(sys: MassActionSystem, x_star, tol: float = CB_TOL) -> BalanceCheck:
    x = np.asarray(x_star, dtype=float)
    if x.shape != (sys.network.n_species,):
        raise ValueError(f"expected {sys.network.n_species} concentrations, got shape {x.shape}")
    if not np.all(x > 0):
        raise ValueError("complex balance is checked at positive points only")
    inflow, outflow = complex_fluxes(sys, x)
    res = inflow - outflow
    ok = bool(np.all(np.abs(res) <= tol * scale_of(x)))
    return BalanceCheck(tuple(float(v) for v in x), tuple(float(r) for r in res), ok)


def global_attractor_known(report: StructuralReport) -> str:
    if report.ell == 1:
        return ATTRACTOR_CONNECTED
    if report.s <= 3:
        return ATTRACTOR_LOW_DIM
    return ATTRACTOR_UNKNOWN


def cb_acr_classification(net: ReactionNetwork, report: StructuralReport | None = None
                          ) -> dict[str, str]:
    """Per species: static ACR (full basin if dynamic) or no ACR.

    Raises:
        ValueError: when the network is not weakly reversible with deficiency zero.
    """
    report = report or structural_report(net)
    if not guaranteed_complex_balanced(net, report):
        raise ValueError("inapplicable: network is not weakly reversible with deficiency zero")
    return {name: STATIC_AND_FULL if unit_vector_in_S(net, i).in_span else NO_ACR
            for i, name in enumerate(net.species_names)}


def complex_balance_report(obj, x_star=None, report: StructuralReport | None = None
                           ) -> ComplexBalanceReport:
    """Summary for a network or system; ``x_star`` adds a balance check there."""
    net = obj.network if isinstance(obj, MassActionSystem) else obj
    report = report or structural_report(net)
    cb = guaranteed_complex_balanced(net, report)
    attractor = global_attractor_known(report)
    classes = cb_acr_classification(net, report) if cb else None
    static = tuple(s for s, v in (classes or {}).items() if v == STATIC_AND_FULL)
    check = None
    if x_star is not None and isinstance(obj, MassActionSystem):
        check = verify_complex_balance_at(obj, x_star)
    return ComplexBalanceReport(
        guaranteed_cb=cb,
        static_acr_species=static,
        no_acr_certificate=cb and report.mass_conserving,
        global_attractor_known=attractor,
        classification=classes,
        cb_verified_at=check,
    )
