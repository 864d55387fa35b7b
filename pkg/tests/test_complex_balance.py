from __future__ import annotations

import numpy as np
import pytest

from acr.analysis import acr_network_sweep, detect_static_acr
from acr.catalog import list_entries, load
from acr.complex_balance import (
    ATTRACTOR_CONNECTED,
    ATTRACTOR_LOW_DIM,
    NO_ACR,
    STATIC_AND_FULL,
    cb_acr_classification,
    complex_balance_report,
    guaranteed_complex_balanced,
    verify_complex_balance_at,
)
from acr.dynamics import find_steady_state
from acr.network import MassActionSystem
from acr.parser import parse_network

from conftest import net_of

CB = [n for n in list_entries() if guaranteed_complex_balanced(load(n).network)]


def _random_rates(net, rng):
    return tuple(float(k) for k in np.round(10 ** rng.uniform(-0.7, 0.7, net.n_reactions), 3))


def test_catalog_has_complex_balanced_entries():
    assert {"inflow-outflow", "isomerization", "triangle", "nanotube", "catalysed-decay"} <= set(CB)


@pytest.mark.parametrize("name", CB)
def test_classification_matches_static_search(name, rng):
    net = load(name).network
    classes = cb_acr_classification(net)
    want = sorted(s for s, v in classes.items() if v == STATIC_AND_FULL)
    for _ in range(3):
        sys = MassActionSystem(net, _random_rates(net, rng))
        search = detect_static_acr(sys, seed=int(rng.integers(1000)))
        got = sorted(net.species_names[i] for i, v in enumerate(search.verdicts) if v.kind == "acr")
        assert got == want


@pytest.mark.parametrize("name", CB)
def test_balanced_at_every_newton_steady_state(name, rng):
    net = load(name).network
    for _ in range(3):
        sys = MassActionSystem(net, _random_rates(net, rng))
        found = [find_steady_state(sys, 10 ** rng.uniform(-1, 1, net.n_species), rng=rng)
                 for _ in range(3)]
        found = [rec for rec in found if rec is not None]
        assert found
        for rec in found:
            check = verify_complex_balance_at(sys, rec.x)
            assert check.balanced
            assert check.max_residual < 1e-8


@pytest.mark.parametrize("name", [n for n in CB if complex_balance_report(load(n).network).no_acr_certificate])
def test_no_acr_certificate_means_no_acr_on_the_grid(name):
    sweep = acr_network_sweep(load(name).network)
    assert not sweep.capacity_static and not sweep.capacity_dynamic


def test_triangle_is_full_basin_and_connected():
    rep = complex_balance_report(net_of("A -> A + B; A + B -> B; B -> A"))
    assert rep.static_acr_species == ("A", "B")
    assert rep.global_attractor_known == ATTRACTOR_CONNECTED
    assert not rep.dynamic_equivalence_conditional


def test_isomerization_certificate():
    rep = complex_balance_report(net_of("A <-> B"))
    assert rep.no_acr_certificate
    assert rep.classification == {"A": NO_ACR, "B": NO_ACR}


def test_nanotube_balance_and_attractor():
    sys = parse_network("X + Ce ->{1} Co; Co ->{4} X + Ce; X + Co ->{1} Ce; Ce ->{1} X + Co")
    x = 2.0
    ce, co = 4.0 / 3.0, 2.0 / 3.0  # ce/co = sqrt(k2 k3 / (k1 k4)) = 2, ce + co = 2
    rep = complex_balance_report(sys, x_star=[x, ce, co])
    assert rep.cb_verified_at.balanced
    assert rep.static_acr_species == ("X",)
    assert rep.global_attractor_known == ATTRACTOR_LOW_DIM


def test_archetype_is_not_guaranteed_and_unbalanced():
    sys = parse_network("A + B ->{1} 2B; B ->{1} A")
    rep = complex_balance_report(sys, x_star=[1.0, 1.0])
    assert not rep.guaranteed_cb and rep.classification is None
    assert not rep.cb_verified_at.balanced
    with pytest.raises(ValueError, match="inapplicable"):
        cb_acr_classification(sys.network)


def test_verify_rejects_bad_points():
    sys = parse_network("A <->{1, 1} B")
    with pytest.raises(ValueError):
        verify_complex_balance_at(sys, [1.0])
    with pytest.raises(ValueError):
        verify_complex_balance_at(sys, [1.0, 0.0])
