"""Reaction networks and mass-action systems."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .linalg import RationalMatrix


@dataclass(frozen=True)
class Species:
    index: int
    name: str


@dataclass(frozen=True, order=True)
class Complex:
    """Nonnegative integer combination of species.

    ``coeffs`` holds ``(species_index, coefficient)`` pairs sorted by index,
    with zero coefficients omitted; the empty tuple is the zero complex.
    """

    coeffs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        items = tuple(sorted((int(s), int(c)) for s, c in self.coeffs if c != 0))
        if any(c < 0 for _, c in items):
            raise ValueError("stoichiometric coefficients must be nonnegative")
        if len({s for s, _ in items}) != len(items):
            raise ValueError("species repeated within a complex")
        object.__setattr__(self, "coeffs", items)

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int]) -> "Complex":
        return cls(tuple(mapping.items()))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def as_dict(self) -> dict[int, int]:
        return dict(self.coeffs)

    def vector(self, n_species: int) -> tuple[int, ...]:
        v = [0] * n_species
        for s, c in self.coeffs:
            v[s] = c
        return tuple(v)

    def order(self) -> int:
        return sum(c for _, c in self.coeffs)


@dataclass(frozen=True)
class Reaction:
    source: Complex
    product: Complex


@dataclass(frozen=True)
class Violation:
    kind: str  # "zero-reaction-vector" | "orphan-species" | "duplicate-reaction" | ...
    detail: str


@dataclass(frozen=True)
class ReactionNetwork:
    """Species, deduplicated complexes and directed reactions.

    Construction does not enforce the network axioms; call :func:`validate`
    (the parser always does).
    """

    species: tuple[Species, ...]
    reactions: tuple[Reaction, ...]
    complexes: tuple[Complex, ...] = field(init=False)
    edges: tuple[tuple[int, int], ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "species", tuple(self.species))
        object.__setattr__(self, "reactions", tuple(self.reactions))
        complexes: list[Complex] = []
        where: dict[Complex, int] = {}
        edges = []
        for r in self.reactions:
            pair = []
            for c in (r.source, r.product):
                if c not in where:
                    where[c] = len(complexes)
                    complexes.append(c)
                pair.append(where[c])
            edges.append(tuple(pair))
        object.__setattr__(self, "complexes", tuple(complexes))
        object.__setattr__(self, "edges", tuple(edges))

    @classmethod
    def from_names(
        cls,
        reactions: Iterable[tuple[Mapping[str, int], Mapping[str, int]]],
        species: Sequence[str] | None = None,
    ) -> "ReactionNetwork":
        """Build from ``(source, product)`` name->coefficient maps.

        Species are ordered by first appearance unless ``species`` is given.
        """
        reactions = list(reactions)
        names: list[str] = list(species) if species is not None else []
        if species is None:
            for src, prod in reactions:
                for m in (src, prod):
                    for name in m:
                        if name not in names:
                            names.append(name)
        idx = {name: i for i, name in enumerate(names)}
        rxns = []
        for src, prod in reactions:
            rxns.append(
                Reaction(
                    Complex.from_mapping({idx[k]: v for k, v in src.items()}),
                    Complex.from_mapping({idx[k]: v for k, v in prod.items()}),
                )
            )
        return cls(tuple(Species(i, n) for i, n in enumerate(names)), tuple(rxns))

    @property
    def n_species(self) -> int:
        return len(self.species)

    @property
    def n_reactions(self) -> int:
        return len(self.reactions)

    @property
    def n_complexes(self) -> int:
        return len(self.complexes)

    @property
    def species_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.species)

    def species_index(self, name: str) -> int:
        for s in self.species:
            if s.name == name:
                return s.index
        raise KeyError(name)

    def complex_label(self, c: Complex) -> str:
        """Canonical text of a complex: species alphabetical, ``0`` when empty."""
        if c.is_zero:
            return "0"
        terms = sorted(((self.species[s].name, k) for s, k in c.coeffs))
        return " + ".join(name if k == 1 else f"{k}{name}" for name, k in terms)

    def reaction_label(self, r: int) -> str:
        rx = self.reactions[r]
        return f"{self.complex_label(rx.source)} -> {self.complex_label(rx.product)}"

    def reactant_matrix(self):
        """Integer ``reactions x species`` exponents of the source complexes."""
        import numpy as np

        Y = np.zeros((self.n_reactions, self.n_species), dtype=np.int64)
        for r, rx in enumerate(self.reactions):
            for s, c in rx.source.coeffs:
                Y[r, s] = c
        return Y

    def net_change_matrix(self):
        """Float ``reactions x species`` reaction vectors (rows)."""
        import numpy as np

        return np.array(
            [reaction_vector(self, r) for r in range(self.n_reactions)], dtype=float
        ).reshape(self.n_reactions, self.n_species)


@dataclass(frozen=True)
class MassActionSystem:
    network: ReactionNetwork
    rates: tuple[float, ...]

    def __post_init__(self):
        rates = tuple(float(k) for k in self.rates)
        if len(rates) != self.network.n_reactions:
            raise ValueError(
                f"{len(rates)} rate constants for {self.network.n_reactions} reactions"
            )
        if any(not (k > 0) for k in rates):
            raise ValueError("rate constants must be positive")
        object.__setattr__(self, "rates", rates)

    def with_rates(self, rates: Sequence[float]) -> "MassActionSystem":
        return MassActionSystem(self.network, tuple(rates))


def reaction_vector(net: ReactionNetwork, r: int) -> tuple[int, ...]:
    """Product minus source as an integer species vector."""
    if not 0 <= r < net.n_reactions:
        raise IndexError(f"reaction index {r} out of range")
    rx = net.reactions[r]
    v = [0] * net.n_species
    for s, c in rx.product.coeffs:
        v[s] += c
    for s, c in rx.source.coeffs:
        v[s] -= c
    return tuple(v)


def stoichiometric_matrix(net: ReactionNetwork) -> RationalMatrix:
    """``species x reactions`` matrix whose columns are the reaction vectors."""
    return RationalMatrix.from_columns(
        [reaction_vector(net, r) for r in range(net.n_reactions)], net.n_species
    )


def validate(net: ReactionNetwork) -> list[Violation]:
    """Every violated network axiom; an empty list means the network is valid."""
    out: list[Violation] = []
    if not net.reactions:
        out.append(Violation("empty-network", "a network needs at least one reaction"))
    names = [s.name for s in net.species]
    for i, s in enumerate(net.species):
        if s.index != i:
            out.append(Violation("species-index", f"{s.name} has index {s.index}, expected {i}"))
    dupes = sorted({n for n in names if names.count(n) > 1})
    for n in dupes:
        out.append(Violation("duplicate-species", n))
    used = set()
    for rx in net.reactions:
        for c in (rx.source, rx.product):
            for s, _ in c.coeffs:
                if not 0 <= s < net.n_species:
                    out.append(Violation("unknown-species", f"species index {s}"))
                used.add(s)
    for s in net.species:
        if s.index not in used:
            out.append(Violation("orphan-species", s.name))
    seen = {}
    for r, rx in enumerate(net.reactions):
        if rx.source == rx.product:
            out.append(Violation("zero-reaction-vector", f"reaction {r}: {net.reaction_label(r)}"))
        key = (rx.source, rx.product)
        if key in seen:
            out.append(
                Violation(
                    "duplicate-reaction",
                    f"reactions {seen[key]} and {r}: {net.reaction_label(r)}",
                )
            )
        else:
            seen[key] = r
    return out
