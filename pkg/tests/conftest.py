from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from acr.network import Complex, Reaction, ReactionNetwork, Species, validate
from acr.parser import parse_document

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

NAMES = ("A", "B", "C", "D")


@st.composite
def complexes(draw, n_species: int, max_coeff: int = 2):
    coeffs = draw(st.lists(st.integers(0, max_coeff), min_size=n_species, max_size=n_species))
    return Complex(tuple((s, c) for s, c in enumerate(coeffs) if c))


@st.composite
def networks(draw, max_species: int = 4, max_reactions: int = 6, max_coeff: int = 2):
    """Valid networks: every species used, no self-loops, no duplicate reactions."""
    n = draw(st.integers(1, max_species))
    count = draw(st.integers(1, max_reactions))
    reactions, seen = [], set()
    for _ in range(count):
        src = draw(complexes(n, max_coeff))
        prod = draw(complexes(n, max_coeff))
        if src == prod or (src, prod) in seen:
            continue
        seen.add((src, prod))
        reactions.append(Reaction(src, prod))
    used = sorted({s for r in reactions for c in (r.source, r.product) for s, _ in c.coeffs})
    if not reactions or not used:
        reactions = [Reaction(Complex(), Complex(((0, 1),)))]
        used = [0]
    remap = {old: new for new, old in enumerate(used)}

    def re(c):
        return Complex(tuple((remap[s], k) for s, k in c.coeffs))

    net = ReactionNetwork(tuple(Species(i, NAMES[i]) for i in range(len(used))),
                          tuple(Reaction(re(r.source), re(r.product)) for r in reactions))
    assert not validate(net)
    return net


def net_of(text: str) -> ReactionNetwork:
    return parse_document(text).network


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
