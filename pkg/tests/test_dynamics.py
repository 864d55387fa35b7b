from __future__ import annotations

import numpy as np
import pytest

from acr.catalog import list_entries, load
from acr.dynamics import (
    OdeSystem,
    classify_stability,
    find_positive_zero,
    find_steady_state,
    integrate,
    jacobian,
    restricted_eigenvalues,
    rhs,
    stoichiometric_frame,
)
from acr.network import MassActionSystem
from acr.parser import parse_network
from acr.structure import structural_report

INTERNAL = [n for n in list_entries() if not load(n).external]
ALL = list_entries()


def _rk4(f, x0, t_end, steps):
    x, h = np.array(x0, dtype=float), t_end / steps
    for _ in range(steps):
        k1 = f(x)
        k2 = f(x + h / 2 * k1)
        k3 = f(x + h / 2 * k2)
        k4 = f(x + h * k3)
        x = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return x


def _system(name, rng=None):
    entry = load(name)
    if entry.external:
        rates = tuple(np.round(10 ** rng.uniform(-0.5, 0.5, entry.network.n_reactions), 3))
        return entry.system(rates)
    return entry.system()


def test_rhs_of_archetype():
    sys = parse_network("A + B ->{2} 2B; B ->{3} A")
    assert np.allclose(rhs(sys, [1.0, 2.0]), [-4 + 6, 4 - 6])


@pytest.mark.parametrize("name", ALL)
def test_integrator_matches_fixed_step_rk4(name, rng):
    sys = _system(name, rng)
    x0 = rng.uniform(0.5, 1.5, sys.network.n_species)
    traj = integrate(sys, x0, 1.0)
    assert traj.status == "completed"
    ref = _rk4(OdeSystem(sys), x0, 1.0, 4000)
    assert np.allclose(traj.final, ref, rtol=1e-6, atol=1e-8)


@pytest.mark.parametrize("name", ALL)
def test_conservation_and_forward_invariance(name, rng):
    sys = _system(name, rng)
    laws = structural_report(sys.network).conservation.basis
    for _ in range(3):
        x0 = 10 ** rng.uniform(-2, 1, sys.network.n_species)
        x0[rng.integers(sys.network.n_species)] = 0.0
        traj = integrate(sys, x0, 20.0, guard=1e8)
        assert traj.states.min() >= -1e-10
        if laws:
            assert traj.conservation_drift(laws) < 1e-8


@pytest.mark.parametrize("name", ALL)
def test_jacobian_matches_finite_differences(name, rng):
    sys = _system(name, rng)
    n = sys.network.n_species
    for _ in range(100):
        x = 10 ** rng.uniform(-1, 1, n)
        J = jacobian(sys, x)
        scale = max(1.0, np.abs(x).max())
        fd = np.empty((n, n))
        for j in range(n):
            h = 1e-6 * scale
            e = np.zeros(n)
            e[j] = h
            fd[:, j] = (rhs(sys, x + e) - rhs(sys, x - e)) / (2 * h)
        assert np.allclose(J, fd, rtol=1e-6, atol=1e-6 * max(1.0, np.abs(J).max()))


@pytest.mark.parametrize("name", INTERNAL)
def test_steady_state_keeps_anchor_conservation(name, rng):
    sys = _system(name)
    W = stoichiometric_frame(sys.network).complement
    for _ in range(5):
        anchor = 10 ** rng.uniform(-1, 1, sys.network.n_species)
        rec = find_steady_state(sys, anchor, rng=rng)
        if rec is None:
            continue
        assert np.all(rec.x > 0)
        assert np.allclose(W @ rec.x, W @ anchor, rtol=0, atol=1e-10 * max(1, anchor.max()))
        assert np.abs(rhs(sys, rec.x)).max() < 1e-8 * max(1, rec.x.max())


def test_steady_state_rejects_nonpositive_anchor():
    with pytest.raises(ValueError):
        find_steady_state(parse_network("0 <->{1, 1} A"), [0.0])


def test_integrate_rejects_wrong_shape():
    with pytest.raises(ValueError):
        integrate(parse_network("0 <->{1, 1} A"), [1.0, 2.0], 1.0)


def test_divergence_is_reported_not_raised():
    traj = integrate(parse_network("2A ->{1} 3A"), [2.0], 10.0)
    assert traj.status in ("diverged", "step-failure")
    assert traj.times[-1] < 10.0


def test_stability_labels():
    lv = parse_network("A + B ->{1} 2B; B ->{1} 0; A ->{1} 2A")
    assert classify_stability(lv, np.array([1.0, 1.0])) == "center/inconclusive"
    inflow = parse_network("0 <->{1, 1} A")
    assert classify_stability(inflow, np.array([1.0])) == "attracting"
    rep = parse_network("2A ->{1} 3A; A ->{1} 0")
    assert classify_stability(rep, np.array([1.0])) == "repelling"


def test_restricted_eigenvalues_live_on_S():
    sys = parse_network("A <->{1, 2} B")
    eig = restricted_eigenvalues(sys, [2.0, 1.0])
    assert eig.shape == (1,)
    assert eig[0].real == pytest.approx(-3.0)


def test_free_newton_finds_a_zero():
    sys = parse_network("A + B ->{1} 2B; B ->{2} A")
    rec = find_positive_zero(sys, [1.0, 3.0])
    assert rec is not None and rec.x[0] == pytest.approx(2.0, rel=1e-10)


def test_csv_layout():
    traj = integrate(parse_network("0 <->{1, 1} A"), [0.0], 1.0)
    lines = traj.to_csv().splitlines()
    assert lines[0] == "t,A"
    assert lines[1] == "0,0"


def test_system_with_explicit_rates_matches_catalog_defaults():
    entry = load("selkov")
    assert entry.system() == MassActionSystem(entry.network, (1.0, 1.0, 1.0, 1.0))
