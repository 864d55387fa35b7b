from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from acr.catalog import list_entries, load
from acr.network import MassActionSystem, ReactionNetwork, validate
from acr.parser import ParseError, format_network, format_rate, parse_document, parse_network

from conftest import networks


def test_rates_on_arrows_and_reversible_pairs():
    src = parse_document("@name toy\n0 <->{2, 3} A\nA + B ->{0.5} 2B\n")
    assert src.name == "toy"
    assert src.rates == (2.0, 3.0, 0.5)
    assert src.network.species_names == ("A", "B")
    assert src.network.reaction_label(1) == "A -> 0"


def test_unrated_document_gives_bare_network():
    assert isinstance(parse_network("A -> B"), ReactionNetwork)
    assert isinstance(parse_network("A ->{1} B"), MassActionSystem)


def test_comments_semicolons_and_species_directive():
    src = parse_document("@species B, A  # order\nA -> B; B -> A\n")
    assert src.network.species_names == ("B", "A")


@pytest.mark.parametrize("text, line, col, fragment", [
    ("A -> ", 1, 6, "expected species name"),
    ("A + A -> B", 1, 5, "repeated in complex"),
    ("A -> A", 1, 1, "zero reaction vector"),
    ("A -> B\nA -> B", 2, 1, "duplicate reaction"),
    ("A ->{1} B\nB -> A", 1, 1, "every reaction"),
    ("A ->{0} B", 1, 6, "positive"),
    ("A <->{1} B", 1, 6, "expected 2 rate"),
    ("A => B", 1, 3, "expected '->'"),
    ("0A -> B", 1, 1, "zero coefficient"),
    ("@species A\nA -> B", 1, 1, "not in @species"),
    ("@color red\nA -> B", 1, 1, "unknown directive"),
    ("# nothing\n", 1, 1, "no reactions"),
])
def test_diagnostics_carry_positions(text, line, col, fragment):
    with pytest.raises(ParseError) as err:
        parse_document(text)
    assert fragment in err.value.message
    assert (err.value.line, err.value.col) == (line, col)


@pytest.mark.parametrize("name", list_entries())
def test_catalog_round_trip(name):
    entry = load(name)
    src = entry.parsed()
    again = parse_document(format_network(src))
    assert again.network == src.network
    assert again.rates == src.rates
    sys = entry.system()
    assert parse_network(entry.crn_text()) == sys


@given(networks(), st.data())
def test_round_trip_random_networks(net, data):
    rates = tuple(data.draw(st.floats(1e-3, 1e3)) for _ in range(net.n_reactions))
    sys = MassActionSystem(net, rates)
    back = parse_document(format_network(sys))
    assert back.network == net
    assert back.rates == sys.rates


@given(st.text(alphabet="AB02+-<>{}; ,\n.#", max_size=30))
def test_parser_accepts_only_valid_networks(text):
    try:
        src = parse_document(text)
    except ParseError:
        return
    assert validate(src.network) == []


def test_format_rate():
    assert format_rate(2.0) == "2"
    assert float(format_rate(0.1)) == 0.1
