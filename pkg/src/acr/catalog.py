"""Named example networks with expected structure, verdicts and formulas.

Each entry carries ``.crn`` text, one or more rate cases, and the answers
the analysis pipeline must reproduce.  ``group`` is one of:

- ``patterns``: the nine capacity/network yes-no combinations
- ``networks``: network-level properties checked over the rate grid
- ``worked``: single systems with known behaviour
- ``external``: parse-only entries whose ACR answers are established
  elsewhere; structure is computed but nothing is asserted
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

from .analysis import (
    AcrAnalysis,
    AcrOptions,
    CompatibilityContext,
    acr_network_sweep,
    analyze_acr,
    theorem_consistent,
)
from .network import MassActionSystem
from .parser import NetworkSource, parse_document
from .structure import StructuralReport, structural_report

Value = Union[float, Callable[[tuple], float]]
VALUE_RTOL = 1e-4


@dataclass(frozen=True)
class Static:
    kind: str  # acr | notAcr | noPositiveSteadyState
    value: Value | None = None


@dataclass(frozen=True)
class Dynamic:
    kind: str  # acr | notAcr
    value: Value | None = None
    basin: str | None = None


@dataclass(frozen=True)
class RateCase:
    rates: tuple[float, ...]
    static: dict[str, Static] = field(default_factory=dict)
    dynamic: dict[str, Dynamic] = field(default_factory=dict)
    note: str = ""
    # why an inconclusive dynamic verdict is the expected outcome of the budget
    limitation: str = ""


@dataclass(frozen=True)
class Structure:
    deficiency: int
    ell: int
    weakly_reversible: bool
    sf_hits: tuple[str, ...]
    mass_conserving: bool


@dataclass(frozen=True)
class GridRow:
    capacity_static: bool
    network_static: bool
    capacity_dynamic: bool
    network_dynamic: bool
    static_species: tuple[str, ...] = ()
    dynamic_species: tuple[str, ...] = ()
    extra_points: tuple[tuple[float, ...], ...] = ()


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    source: str
    group: str
    description: str
    structure: Structure | None = None
    cases: tuple[RateCase, ...] = ()
    grid: GridRow | None = None
    # steady state (or limit) formulas in terms of the rate tuple
    formulas: dict[str, Callable[[tuple], float]] = field(default_factory=dict)
    note: str = ""

    @property
    def external(self) -> bool:
        return self.group == "external"

    def parsed(self) -> NetworkSource:
        return parse_document(self.source)

    @property
    def network(self):
        return self.parsed().network

    def system(self, rates=None) -> MassActionSystem:
        rates = rates if rates is not None else self.default_rates
        return MassActionSystem(self.network, tuple(float(k) for k in rates))

    @property
    def default_rates(self) -> tuple[float, ...]:
        if self.cases:
            return self.cases[0].rates
        return (1.0,) * self.network.n_reactions

    def crn_text(self, rates=None) -> str:
        from .parser import format_network
        return format_network(self.system(rates), name=self.name)


def _ratio(i: int, j: int) -> Callable[[tuple], float]:
    return lambda k: k[i] / k[j]


_ENTRIES: tuple[CatalogEntry, ...] = (
    # nine yes/no patterns ------------------------------------------------
    CatalogEntry(
        "inflow-outflow", "0 <-> A", "patterns",
        "reversible inflow of a single species",
        Structure(0, 1, True, (), False),
        (RateCase((1, 1), {"A": Static("acr", _ratio(0, 1))},
                  {"A": Dynamic("acr", _ratio(0, 1), "full")}),
         RateCase((2, 4), {"A": Static("acr", 0.5)}, {"A": Dynamic("acr", 0.5, "full")})),
        GridRow(True, True, True, True, ("A",), ("A",)),
        {"A": _ratio(0, 1)},
    ),
    CatalogEntry(
        "selkov", "0 -> X; X -> Y; Y -> 0; X + 2Y -> 3Y", "patterns",
        "simplified Sel'kov oscillator, rates (rho, sigma, 1, 1)",
        Structure(1, 2, False, (), False),
        (RateCase((1, 1, 1, 1),
                  {"X": Static("acr", 0.5), "Y": Static("acr", 1.0)},
                  {"X": Dynamic("acr", 0.5, "full"), "Y": Dynamic("acr", 1.0, "full")}),
         RateCase((0.5, 0.1, 1, 1),
                  {"X": Static("acr", 0.5 / 0.35), "Y": Static("acr", 0.5)},
                  {"X": Dynamic("notAcr"), "Y": Dynamic("notAcr")},
                  "limit cycle")),
        GridRow(True, True, True, False, ("X", "Y"), (), ((0.5, 0.1, 1, 1),)),
        {"X": lambda k: k[0] / (k[1] + k[0] ** 2), "Y": lambda k: k[0]},
        "the two formulas assume the last two rates are 1",
    ),
    CatalogEntry(
        "autocatalytic-repeller", "2A -> 3A; A -> 0", "patterns",
        "unique repelling positive steady state",
        Structure(1, 2, False, ("A",), False),
        (RateCase((1, 1), {"A": Static("acr", _ratio(1, 0))}, {"A": Dynamic("notAcr")}),),
        GridRow(True, True, False, False, ("A",), ()),
        {"A": _ratio(1, 0)},
    ),
    CatalogEntry(
        "dynamic-not-static", "0 <-> A; A + B -> A; B -> 2B", "patterns",
        "A always tracks k1/k2, steady states need k1/k2 = k4/k3",
        Structure(1, 2, False, ("A",), False),
        (RateCase((1, 1, 1, 1),
                  {"A": Static("acr", 1.0), "B": Static("notAcr")},
                  {"A": Dynamic("acr", 1.0, "full"), "B": Dynamic("notAcr")}),
         RateCase((1, 0.25, 4, 4),
                  {"A": Static("noPositiveSteadyState"), "B": Static("noPositiveSteadyState")},
                  {"A": Dynamic("acr", 4.0, "full"), "B": Dynamic("notAcr")})),
        GridRow(True, False, True, True, (), ("A",)),
        {"A": _ratio(0, 1)},
    ),
    CatalogEntry(
        "cubic-multistable", "0 <-> A; 2A <-> 3A", "patterns",
        "one or three positive steady states depending on rates",
        Structure(1, 2, True, (), False),
        (RateCase((1, 1, 1, 1), {"A": Static("acr", 1.0)}, {"A": Dynamic("acr", 1.0, "full")}),
         RateCase((4, 8, 3.5, 0.4), {"A": Static("notAcr")}, {"A": Dynamic("notAcr")},
                  "three positive steady states")),
        GridRow(True, False, True, False, (), (), ((4, 8, 3.5, 0.4),)),
    ),
    CatalogEntry(
        "knife-edge", "0 <-> A; 2A -> 3A", "patterns",
        "a positive steady state exists only as a double root",
        Structure(1, 2, False, (), False),
        (RateCase((1, 2, 1), {"A": Static("acr", 1.0)}, {"A": Dynamic("notAcr")},
                  "k2^2 = 4 k1 k3, double root"),
         RateCase((1, 1, 1), {"A": Static("noPositiveSteadyState")}, {"A": Dynamic("notAcr")})),
        GridRow(True, False, False, False, (), (), ((1, 2, 1),)),
        {"A": lambda k: k[1] / (2 * k[2])},
    ),
    CatalogEntry(
        "inflow-conversion", "0 -> A + B; A -> B", "patterns",
        "B accumulates without bound while A settles",
        Structure(0, 2, False, (), False),
        (RateCase((1, 1),
                  {"A": Static("noPositiveSteadyState"), "B": Static("noPositiveSteadyState")},
                  {"A": Dynamic("acr", _ratio(0, 1), "full"), "B": Dynamic("notAcr")}),),
        GridRow(False, False, True, True, (), ("A",)),
        {"A": _ratio(0, 1)},
    ),
    CatalogEntry(
        "inflow-conversion-autocatalysis", "0 -> A + B; A -> B; A -> 2A", "patterns",
        "A settles only when conversion beats autocatalysis",
        Structure(1, 2, False, ("A",), False),
        (RateCase((1, 1, 1),
                  {"A": Static("noPositiveSteadyState"), "B": Static("noPositiveSteadyState")},
                  {"A": Dynamic("notAcr"), "B": Dynamic("notAcr")}),
         RateCase((1, 2, 1),
                  {"A": Static("noPositiveSteadyState")},
                  {"A": Dynamic("acr", 1.0, "full"), "B": Dynamic("notAcr")})),
        GridRow(False, False, True, False, (), ()),
        {"A": lambda k: k[0] / (k[1] - k[2])},
    ),
    CatalogEntry(
        "isomerization", "A <-> B", "patterns",
        "mass conserving, complex balanced, no ACR for any rates",
        Structure(0, 1, True, (), True),
        (RateCase((1, 1), {"A": Static("notAcr"), "B": Static("notAcr")},
                  {"A": Dynamic("notAcr"), "B": Dynamic("notAcr")}),),
        GridRow(False, False, False, False),
    ),
    # network-level properties over the grid ------------------------------
    CatalogEntry(
        "sf-unstable", "A + B -> 2B; 2A + B -> 3A", "networks",
        "static ACR in A by deficiency one, every positive steady state repels",
        Structure(1, 2, False, ("A",), True),
        (RateCase((1, 1), {"A": Static("acr", _ratio(0, 1)), "B": Static("notAcr")},
                  {"A": Dynamic("notAcr"), "B": Dynamic("notAcr")}),),
        GridRow(True, True, False, False, ("A",), ()),
        {"A": _ratio(0, 1)},
    ),
    CatalogEntry(
        "lotka-volterra", "A + B -> 2B; B -> 0; A -> 2A", "networks",
        "predator-prey cycles around a unique positive steady state",
        Structure(1, 3, False, ("A", "B"), False),
        (RateCase((1, 1, 1), {"A": Static("acr", _ratio(1, 0)), "B": Static("acr", _ratio(2, 0))},
                  {"A": Dynamic("notAcr"), "B": Dynamic("notAcr")}),),
        GridRow(True, True, False, False, ("A", "B"), ()),
        {"A": _ratio(1, 0), "B": _ratio(2, 0)},
    ),
    CatalogEntry(
        "selkov-tracker", "0 -> X; X -> Y; Y -> 0; X + 2Y -> 3Y; Z + X <-> X", "networks",
        "Sel'kov oscillator with a species Z that tracks k2/k1 regardless",
        Structure(1, 2, False, (), False),
        (RateCase((1, 1, 1, 1, 1, 1),
                  {"X": Static("acr", 0.5), "Y": Static("acr", 1.0), "Z": Static("acr", 1.0)},
                  {"X": Dynamic("acr", 0.5, "full"), "Y": Dynamic("acr", 1.0, "full"),
                   "Z": Dynamic("acr", 1.0, "full")}),
         RateCase((0.5, 0.1, 1, 1, 1, 1),
                  {"X": Static("acr", 0.5 / 0.35), "Y": Static("acr", 0.5), "Z": Static("acr", 1.0)},
                  {"X": Dynamic("notAcr"), "Y": Dynamic("notAcr"), "Z": Dynamic("acr", 1.0, "full")},
                  "X and Y cycle, Z still converges")),
        GridRow(True, True, True, True, ("X", "Y", "Z"), ("Z",), ((0.5, 0.1, 1, 1, 1, 1),)),
        {"X": lambda k: k[0] / (k[1] + k[0] ** 2), "Y": lambda k: k[0], "Z": _ratio(5, 4)},
        "the X and Y formulas assume the third and fourth rates are 1",
    ),
    CatalogEntry(
        "triangle", "A -> A + B; A + B -> B; B -> A", "networks",
        "weakly reversible, deficiency zero, both unit vectors in S",
        Structure(0, 1, True, (), False),
        (RateCase((1, 1, 1), {"A": Static("acr", _ratio(2, 1)), "B": Static("acr", _ratio(0, 1))},
                  {"A": Dynamic("acr", _ratio(2, 1), "full"),
                   "B": Dynamic("acr", _ratio(0, 1), "full")}),
         RateCase((2, 1, 3), {"A": Static("acr", 3.0), "B": Static("acr", 2.0)},
                  {"A": Dynamic("acr", 3.0, "full"), "B": Dynamic("acr", 2.0, "full")})),
        GridRow(True, True, True, True, ("A", "B"), ("A", "B")),
        {"A": _ratio(2, 1), "B": _ratio(0, 1)},
    ),
    CatalogEntry(
        "archetype", "A + B -> 2B; B -> A", "networks",
        "minimal wide basin dynamic ACR network",
        Structure(1, 2, False, ("A",), True),
        (RateCase((1, 1), {"A": Static("acr", _ratio(1, 0)), "B": Static("notAcr")},
                  {"A": Dynamic("acr", _ratio(1, 0), "wide"), "B": Dynamic("notAcr")}),
         RateCase((2, 3), {"A": Static("acr", 1.5)}, {"A": Dynamic("acr", 1.5, "wide")})),
        GridRow(True, True, True, True, ("A",), ("A",)),
        {"A": _ratio(1, 0)},
    ),
    CatalogEntry(
        "narrow-archetype", "A + B -> 0; B -> A + 2B", "networks",
        "minimal narrow basin dynamic ACR network",
        Structure(1, 2, False, ("A",), False),
        (RateCase((1, 1), {"A": Static("acr", _ratio(1, 0)), "B": Static("notAcr")},
                  {"A": Dynamic("acr", _ratio(1, 0), "narrow"), "B": Dynamic("notAcr")}),),
        GridRow(True, True, True, True, ("A",), ("A",)),
        {"A": _ratio(1, 0)},
    ),
    # worked single systems ----------------------------------------------
    CatalogEntry(
        "catalysed-decay", "A + B <-> B", "worked",
        "B catalyses A's decay and regeneration; e_A lies in S",
        Structure(0, 1, True, (), False),
        (RateCase((1, 1), {"A": Static("acr", _ratio(1, 0)), "B": Static("notAcr")},
                  {"A": Dynamic("acr", _ratio(1, 0), "full"), "B": Dynamic("notAcr")}),),
        formulas={"A": _ratio(1, 0)},
    ),
    CatalogEntry(
        "frozen-acr", "A + B -> A; B -> 2B", "worked",
        "A is constant in time, so static ACR cannot become dynamic",
        Structure(1, 2, False, ("A",), False),
        (RateCase((1, 1), {"A": Static("acr", _ratio(1, 0)), "B": Static("notAcr")},
                  {"A": Dynamic("notAcr"), "B": Dynamic("notAcr")}),),
        formulas={"A": _ratio(1, 0)},
    ),
    CatalogEntry(
        "quartic-ray", "A + 2B ->{2} 2A + B; 2A + B ->{1} 3A; 3A + B ->{1} 2A + 2B; "
        "2A + 2B ->{2} A + 3B", "worked",
        "mass conserving, a' = -ab(a+2b)(a-1)",
        Structure(3, 2, False, (), True),
        (RateCase((2, 1, 1, 2), {"A": Static("acr", 1.0), "B": Static("notAcr")},
                  {"A": Dynamic("acr", 1.0, "wide"), "B": Dynamic("notAcr")},
                  "points with a + b <= 1 cannot reach a = 1, so the basin is wide"),),
    ),
    CatalogEntry(
        "quartic-two-branch", "A + B ->{1} 2B; A + 2B ->{2} 2A + B; 2A + B ->{2} 3A; "
        "3A + B ->{1} 2A + 2B; 2A + 2B ->{2} A + 3B", "worked",
        "steady states on a = 1 and on a + 2b = 1; compatible starts still reach a = 1",
        Structure(4, 3, False, (), True),
        (RateCase((1, 2, 2, 1, 2), {"A": Static("notAcr"), "B": Static("notAcr")},
                  {"A": Dynamic("acr", 1.0, "wide"), "B": Dynamic("notAcr")}),),
    ),
    CatalogEntry(
        "quartic-region", "A + B ->{2} 2B; A + 2B ->{2} 2A + B; 2A + B ->{3} 3A; "
        "3A + B ->{1} 2A + 2B; 2A + 2B ->{2} A + 3B", "worked",
        "steady states on a = 1 and on a + 2b = 2; a reaches 1 only when a + b > 2",
        Structure(4, 3, False, (), True),
        (RateCase((2, 2, 3, 1, 2), {"A": Static("notAcr"), "B": Static("notAcr")},
                  {"A": Dynamic("notAcr"), "B": Dynamic("notAcr")},
                  "ACR holds only on the region a + b > 2"),),
    ),
    CatalogEntry(
        "unbounded-complement", "X + Y + Z -> 2X + 2Y; X + Y -> Z", "worked",
        "Z converges to k2/k1 unless min(x+z, y+z) <= k2/k1",
        Structure(1, 2, False, ("Z",), True),
        (RateCase((1, 1), {"Z": Static("acr", _ratio(1, 0)), "X": Static("notAcr"),
                           "Y": Static("notAcr")},
                  {"Z": Dynamic("acr", _ratio(1, 0), "wide"), "X": Dynamic("notAcr"),
                   "Y": Dynamic("notAcr")}),),
        formulas={"Z": _ratio(1, 0)},
    ),
    CatalogEntry(
        "nanotube", "X + Ce <-> Co; X + Co <-> Ce", "worked",
        "electron exchange between even and odd ropes; complex balanced",
        Structure(0, 2, True, (), False),
        (RateCase((1, 4, 1, 1), {"X": Static("acr", 2.0), "Ce": Static("notAcr"),
                                 "Co": Static("notAcr")},
                  {"X": Dynamic("acr", 2.0, "full"), "Ce": Dynamic("notAcr"),
                   "Co": Dynamic("notAcr")}),
         RateCase((1, 1, 1, 1), {"X": Static("acr", 1.0)}, {"X": Dynamic("acr", 1.0, "full")})),
        formulas={"X": lambda k: math.sqrt(k[1] * k[3] / (k[0] * k[2])),
                  "Ce/Co": lambda k: math.sqrt(k[1] * k[2] / (k[0] * k[3]))},
    ),
    CatalogEntry(
        "logistic", "A -> 0; A <-> 2A", "worked",
        "positive steady state (k2 - k1)/k3 exists only when k2 > k1",
        Structure(1, 1, False, ("A",), False),
        (RateCase((1, 2, 1), {"A": Static("acr", 1.0)}, {"A": Dynamic("acr", 1.0, "full")}),
         RateCase((1, 1, 1), {"A": Static("noPositiveSteadyState")}, {"A": Dynamic("notAcr")})),
        formulas={"A": lambda k: (k[1] - k[0]) / k[2]},
    ),
    CatalogEntry(
        "mass-conserving-narrow", "X + 2Z -> 2X + Y; X + Y + 2Z -> 4Z", "worked",
        "x + y + z is conserved and Y is narrow basin dynamic ACR",
        Structure(1, 2, False, ("Y",), True),
        (RateCase((1, 1), {"Y": Static("acr", _ratio(0, 1)), "X": Static("notAcr"),
                           "Z": Static("notAcr")},
                  {"Y": Dynamic("acr", _ratio(0, 1), "narrow"), "X": Dynamic("notAcr"),
                   "Z": Dynamic("notAcr")}),),
        formulas={"Y": _ratio(0, 1)},
    ),
    CatalogEntry(
        "inflow-outflow-plus-inflow", "0 <-> A; 0 -> B", "worked",
        "unrelated inflow of B removes steady states but keeps A's dynamic ACR",
        Structure(0, 1, False, (), False),
        (RateCase((1, 1, 1), {"A": Static("noPositiveSteadyState")},
                  {"A": Dynamic("acr", 1.0, "full"), "B": Dynamic("notAcr")}),),
        formulas={"A": _ratio(0, 1)},
    ),
    CatalogEntry(
        "inflow-outflow-plus-outflow", "0 <-> A; B -> 0", "worked",
        "unrelated outflow of B removes positive steady states, A unaffected",
        Structure(0, 1, False, (), False),
        (RateCase((1, 1, 1), {"A": Static("noPositiveSteadyState")},
                  {"A": Dynamic("acr", 1.0, "full"), "B": Dynamic("notAcr")}),),
        formulas={"A": _ratio(0, 1)},
    ),
    CatalogEntry(
        "inflow-inactivation", "0 -> A; A -> B", "worked",
        "no steady states, yet A converges to k1/k2 from every start",
        Structure(0, 1, False, (), False),
        (RateCase((1, 1), {"A": Static("noPositiveSteadyState"), "B": Static("noPositiveSteadyState")},
                  {"A": Dynamic("acr", _ratio(0, 1), "full"), "B": Dynamic("notAcr")}),),
        formulas={"A": _ratio(0, 1)},
    ),
    CatalogEntry(
        "archetype-with-inflow", "A + B -> 2B; B -> A; 0 -> A", "worked",
        "inflow of A: total mass grows, A still converges to k2/k1",
        Structure(1, 2, False, ("A", "B"), False),
        (RateCase((1, 1, 1), {"A": Static("noPositiveSteadyState")},
                  {"A": Dynamic("acr", _ratio(1, 0), "full"), "B": Dynamic("notAcr")},
                  limitation="a - k2/k1 decays like 1/t while b grows like t; reaching "
                             "conv_tol needs t near 1e4, where the explicit integrator "
                             "is limited by stiffness of order b"),),
        formulas={"A": _ratio(1, 0)},
    ),
    # answers established elsewhere ----------------------------------------
    CatalogEntry("archetype-two-inflows", "0 -> A; 0 -> B; A + B -> 2B; B -> A", "external",
                 "archetype with inflows of both species"),
    CatalogEntry("archetype-two-inflows-outflow", "0 -> A; 0 -> B; B -> 0; A + B -> 2B; B -> A",
                 "external", "archetype with inflows and an outflow of B"),
    CatalogEntry("narrow-archetype-inflow-a", "0 -> A; A + B -> 0; B -> A + 2B", "external",
                 "narrow archetype with inflow of A"),
    CatalogEntry("narrow-archetype-inflow-b", "0 -> B; A + B -> 0; B -> A + 2B", "external",
                 "narrow archetype with inflow of B"),
    CatalogEntry("narrow-archetype-two-inflows", "0 -> A; 0 -> B; A + B -> 0; B -> A + 2B",
                 "external", "narrow archetype with inflows of both species"),
    CatalogEntry("enzyme-futile", "X + E <-> C; C -> Y + E; Y + C -> X + C", "external",
                 "enzyme conversion with product recycling on the complex"),
    CatalogEntry("enzyme-futile-substrate-inflows",
                 "0 -> X; 0 -> Y; X + E <-> C; C -> Y + E; Y + C -> X + C", "external",
                 "enzyme conversion with substrate and product inflows"),
    CatalogEntry("enzyme-futile-all-inflows",
                 "0 -> X; 0 -> Y; 0 -> E; 0 -> C; X + E <-> C; C -> Y + E; Y + C -> X + C",
                 "external", "enzyme conversion with every species flowing in"),
)

_BY_NAME = {e.name: e for e in _ENTRIES}


def list_entries(group: str | None = None) -> list[str]:
    return [e.name for e in _ENTRIES if group is None or e.group == group]


def load(name: str) -> CatalogEntry:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; try one of {', '.join(_BY_NAME)}") from None


def resolve(value: Value | None, rates: tuple) -> float | None:
    if value is None:
        return None
    return float(value(rates)) if callable(value) else float(value)


def _close(a: float, b: float, rtol: float = VALUE_RTOL) -> bool:
    return abs(a - b) <= rtol * max(1.0, abs(b))


@dataclass
class CaseResult:
    rates: tuple[float, ...]
    analysis: AcrAnalysis
    mismatches: list[str]
    limited: list[str] = field(default_factory=list)  # inconclusive, as the case predicts

    @property
    def passed(self) -> bool:
        return not self.mismatches


@dataclass
class GoldenResult:
    name: str
    structure: StructuralReport
    structure_mismatches: list[str]
    cases: list[CaseResult]
    grid_mismatches: list[str] | None = None
    grid_summary: dict | None = None
    external: bool = False

    @property
    def mismatches(self) -> list[str]:
        out = list(self.structure_mismatches)
        for c in self.cases:
            out += [f"rates {list(c.rates)}: {m}" for m in c.mismatches]
        out += [f"grid: {m}" for m in self.grid_mismatches or []]
        return out

    @property
    def limited(self) -> list[str]:
        return [f"rates {list(c.rates)}: {m}" for c in self.cases for m in c.limited]

    @property
    def passed(self) -> bool:
        return not self.mismatches

    @property
    def status(self) -> str:
        if self.external:
            return "external"
        if not self.passed:
            return "fail"
        return "limited" if self.limited else "pass"


def check_structure(entry: CatalogEntry, report: StructuralReport) -> list[str]:
    want = entry.structure
    if want is None:
        return []
    names = entry.network.species_names
    got = Structure(
        report.deficiency, report.ell, report.weakly_reversible,
        tuple(names[i] for i in report.sf.species), report.mass_conserving,
    )
    out = []
    for f in ("deficiency", "ell", "weakly_reversible", "sf_hits", "mass_conserving"):
        a, b = getattr(got, f), getattr(want, f)
        if f == "sf_hits":
            a, b = tuple(sorted(a)), tuple(sorted(b))
        if a != b:
            out.append(f"{f}: got {a}, expected {b}")
    return out


def check_case(entry: CatalogEntry, case: RateCase, analysis: AcrAnalysis,
               ctx: CompatibilityContext) -> tuple[list[str], list[str]]:
    """``(mismatches, limited)``; see :attr:`RateCase.limitation`."""
    out, limited = [], []
    by_name = {v.species: v for v in analysis.verdicts}
    for sp, want in case.static.items():
        got = by_name[sp].static
        if got.kind != want.kind:
            out.append(f"static {sp}: got {got.kind}, expected {want.kind}")
            continue
        value = resolve(want.value, case.rates)
        if value is not None and not _close(got.value, value):
            out.append(f"static {sp}: value {got.value!r}, expected {value!r}")
    for sp, want in case.dynamic.items():
        got = by_name[sp].dynamic
        if got.kind == "inconclusive" and case.limitation:
            limited.append(f"dynamic {sp}: inconclusive ({case.limitation})")
            continue
        if got.kind != want.kind:
            out.append(f"dynamic {sp}: got {got.kind}, expected {want.kind}")
            continue
        value = resolve(want.value, case.rates)
        if value is not None and not _close(got.value, value):
            out.append(f"dynamic {sp}: value {got.value!r}, expected {value!r}")
        if want.basin is not None and got.basin != want.basin:
            out.append(f"dynamic {sp}: basin {got.basin}, expected {want.basin}")
    if not theorem_consistent(analysis, ctx):
        out.append("dynamic verdict contradicts the steady states found")
    return out, limited


def check_grid(entry: CatalogEntry, opts: AcrOptions | None = None) -> tuple[list[str], dict]:
    want = entry.grid
    result = acr_network_sweep(entry.network, extra=want.extra_points, opts=opts)
    summary = result.summary()
    out = []
    for f in ("capacity_static", "network_static", "capacity_dynamic", "network_dynamic"):
        if summary[f] != getattr(want, f):
            out.append(f"{f}: got {summary[f]}, expected {getattr(want, f)}")
    if tuple(summary["static_acr_species"]) != want.static_species:
        out.append(f"static species: got {summary['static_acr_species']}, "
                   f"expected {list(want.static_species)}")
    if tuple(summary["dynamic_acr_species"]) != want.dynamic_species:
        out.append(f"dynamic species: got {summary['dynamic_acr_species']}, "
                   f"expected {list(want.dynamic_species)}")
    return out, summary


def run_golden(name: str, opts: AcrOptions | None = None, grid: bool = False) -> GoldenResult:
    """Run the pipeline on every rate case and diff against the expectations.

    ``grid`` also runs the rate-grid sweep for entries that carry a grid row.
    """
    entry = load(name)
    opts = opts or AcrOptions()
    net = entry.network
    report = structural_report(net)
    if entry.external:
        return GoldenResult(name, report, [], [], external=True)
    ctx = CompatibilityContext.from_network(net, report)
    cases = []
    for case in entry.cases:
        analysis = analyze_acr(entry.system(case.rates), opts, report=report)
        cases.append(CaseResult(case.rates, analysis, *check_case(entry, case, analysis, ctx)))
    result = GoldenResult(name, report, check_structure(entry, report), cases)
    if grid and entry.grid is not None:
        sweep_opts = AcrOptions.for_sweep(opts.seed)
        result.grid_mismatches, result.grid_summary = check_grid(entry, sweep_opts)
    return result
