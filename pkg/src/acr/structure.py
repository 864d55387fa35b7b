"""Exact structural analysis of reaction networks.

Linkage and strong linkage classes, deficiency, weak reversibility,
conservation laws with a positivity certificate, the Shinar-Feinberg
criterion and membership of unit vectors in the stoichiometric subspace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .graphs import connected_components, strongly_connected_components, terminal_components
from .linalg import integer_scale
from .network import ReactionNetwork, reaction_vector, stoichiometric_matrix
from .simplex import feasible_point

SF_CAVEAT = "requires a positive steady state"


@dataclass(frozen=True)
class TerminalStructure:
    strong_classes: tuple[tuple[int, ...], ...]
    terminal: tuple[int, ...]  # indices into strong_classes
    non_terminal_complexes: tuple[int, ...]

    @property
    def terminal_classes(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.strong_classes[i] for i in self.terminal)


@dataclass(frozen=True)
class ConservationLaws:
    basis: tuple[tuple[Fraction, ...], ...]
    mass_conserving: bool
    # strictly positive integer vector orthogonal to every reaction vector
    positive_certificate: tuple[int, ...] | None = None

    def integer_basis(self) -> list[tuple[int, ...]]:
        return [integer_scale(w) for w in self.basis]


@dataclass(frozen=True)
class SFHit:
    species: int
    alpha: int
    pair: tuple[int, int]  # complex indices, first minus second equals alpha * species


@dataclass(frozen=True)
class ShinarFeinberg:
    applicable: bool  # deficiency is exactly one
    hits: tuple[SFHit, ...] = ()
    caveat: str = SF_CAVEAT

    @property
    def species(self) -> tuple[int, ...]:
        return tuple(sorted({h.species for h in self.hits}))


@dataclass(frozen=True)
class UnitVectorCertificate:
    species: int
    in_span: bool
    lambdas: tuple[int, ...] = ()
    alpha: int = 0

    def verify(self, net: ReactionNetwork) -> bool:
        if not self.in_span:
            return True
        total = [0] * net.n_species
        for lam, r in zip(self.lambdas, range(net.n_reactions)):
            for s, v in enumerate(reaction_vector(net, r)):
                total[s] += lam * v
        want = [0] * net.n_species
        want[self.species] = self.alpha
        return self.alpha != 0 and total == want


@dataclass(frozen=True)
class StructuralReport:
    n: int
    ell: int
    s: int
    deficiency: int
    linkage_classes: tuple[tuple[int, ...], ...]
    strong_linkage_classes: tuple[tuple[int, ...], ...]
    terminal_slcs: tuple[int, ...]
    non_terminal_complexes: tuple[int, ...]
    weakly_reversible: bool
    one_terminal_per_linkage: bool
    conservation: ConservationLaws
    sf: ShinarFeinberg
    stoichiometric_basis: tuple[tuple[Fraction, ...], ...] = field(repr=False)

    @property
    def conservation_basis(self):
        return self.conservation.basis

    @property
    def mass_conserving(self) -> bool:
        return self.conservation.mass_conserving

    @property
    def sf_hits(self) -> tuple[SFHit, ...]:
        return self.sf.hits


def linkage_classes(net: ReactionNetwork) -> list[list[int]]:
    return connected_components(net.n_complexes, net.edges)


def terminal_structure(net: ReactionNetwork) -> TerminalStructure:
    slcs = strongly_connected_components(net.n_complexes, net.edges)
    term = terminal_components(slcs, net.edges)
    non_terminal = sorted(c for i, comp in enumerate(slcs) if i not in term for c in comp)
    return TerminalStructure(tuple(map(tuple, slcs)), tuple(term), tuple(non_terminal))


def stoichiometric_rank(net: ReactionNetwork) -> int:
    return stoichiometric_matrix(net).rank()


def deficiency(net: ReactionNetwork) -> int:
    return net.n_complexes - len(linkage_classes(net)) - stoichiometric_rank(net)


def is_weakly_reversible(net: ReactionNetwork) -> bool:
    """Every linkage class is a single strong linkage class."""
    return len(strongly_connected_components(net.n_complexes, net.edges)) == len(
        linkage_classes(net)
    )


def conservation_laws(net: ReactionNetwork) -> ConservationLaws:
    """Left null space of the stoichiometric matrix and mass conservation.

    Mass conservation asks for ``w`` with ``w^T Gamma = 0`` and every
    component of ``w`` at least 1 (any strictly positive solution can be
    scaled to that), which is a phase-one feasibility problem.
    """
    gamma = stoichiometric_matrix(net)
    basis = tuple(gamma.left_nullspace())
    if not basis:
        return ConservationLaws((), False, None)
    gt = gamma.transpose()
    ones = [1] * net.n_species
    rhs = [-v for v in gt.matvec(ones)]
    u = feasible_point(gt.rows, rhs)
    if u is None:
        return ConservationLaws(basis, False, None)
    w = [1 + x for x in u]
    return ConservationLaws(basis, True, integer_scale(w))


def shinar_feinberg(net: ReactionNetwork, delta: int | None = None,
                    terminal: TerminalStructure | None = None) -> ShinarFeinberg:
    """Species singled out by two non-terminal complexes, when deficiency is one."""
    if delta is None:
        delta = deficiency(net)
    if delta != 1:
        return ShinarFeinberg(False)
    if terminal is None:
        terminal = terminal_structure(net)
    hits = []
    for a, b in combinations(terminal.non_terminal_complexes, 2):
        ca = net.complexes[a].vector(net.n_species)
        cb = net.complexes[b].vector(net.n_species)
        diff = [x - y for x, y in zip(ca, cb)]
        support = [s for s, d in enumerate(diff) if d != 0]
        if len(support) == 1:
            s = support[0]
            hits.append(SFHit(s, diff[s], (a, b)))
    hits.sort(key=lambda h: (h.species, h.pair))
    return ShinarFeinberg(True, tuple(hits))


def unit_vector_in_S(net: ReactionNetwork, i: int) -> UnitVectorCertificate:
    """Is ``e_i`` a combination of reaction vectors?  With integer witness if so."""
    if not 0 <= i < net.n_species:
        raise IndexError(f"species index {i} out of range")
    gamma = stoichiometric_matrix(net)
    e = [0] * net.n_species
    e[i] = 1
    lam = gamma.solve(e)
    if lam is None:
        return UnitVectorCertificate(i, False)
    scaled = integer_scale(list(lam) + [Fraction(1)])
    *lambdas, alpha = scaled
    return UnitVectorCertificate(i, True, tuple(lambdas), alpha)


def structural_report(net: ReactionNetwork) -> StructuralReport:
    gamma = stoichiometric_matrix(net)
    links = linkage_classes(net)
    term = terminal_structure(net)
    s = gamma.rank()
    n = net.n_complexes
    delta = n - len(links) - s
    owner = {}
    for li, comp in enumerate(links):
        for c in comp:
            owner[c] = li
    per_link = [0] * len(links)
    for t in term.terminal:
        per_link[owner[term.strong_classes[t][0]]] += 1
    return StructuralReport(
        n=n,
        ell=len(links),
        s=s,
        deficiency=delta,
        linkage_classes=tuple(map(tuple, links)),
        strong_linkage_classes=term.strong_classes,
        terminal_slcs=term.terminal,
        non_terminal_complexes=term.non_terminal_complexes,
        weakly_reversible=len(term.strong_classes) == len(links),
        one_terminal_per_linkage=all(k == 1 for k in per_link),
        conservation=conservation_laws(net),
        sf=shinar_feinberg(net, delta, term),
        stoichiometric_basis=tuple(gamma.column_space_basis()),
    )
