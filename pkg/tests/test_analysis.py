from __future__ import annotations

import itertools

import numpy as np
import pytest

from acr.analysis import (
    AcrOptions,
    CompatibilityContext,
    SweepPoint,
    SweepResult,
    analyze_acr,
    classify_basin,
    compatible,
    compatible_with_hyperplane,
    default_grid,
    detect_dynamic_acr,
    detect_static_acr,
    judge_trajectory,
    theorem_consistent,
)
from acr.catalog import list_entries, load
from acr.dynamics import integrate
from acr.parser import parse_network

from conftest import net_of

INTERNAL = [n for n in list_entries() if not load(n).external]
SMALL = [n for n in list_entries() if load(n).network.n_species <= 3]


def _grid_oracle(x0, i, a, basis, margin):
    """Search x0 + B c with c on a grid in [-10, 10]^s, solving x_i = a for one coordinate."""
    B = np.array([[float(v) for v in b] for b in basis]).T
    n, s = B.shape
    if s == 0 or not B[i].any():
        if abs(x0[i] - a) > 1e-12:
            return False
        others = itertools.product(np.linspace(-10, 10, 201), repeat=s) if s else [()]
        return any((x0 + B @ np.array(c)).min() >= margin for c in others)
    j = int(np.argmax(np.abs(B[i])))
    rest = [k for k in range(s) if k != j]
    pts = 401 if len(rest) <= 1 else 81
    for c_rest in itertools.product(np.linspace(-10, 10, pts), repeat=len(rest)):
        c = np.zeros(s)
        c[rest] = c_rest
        c[j] = (a - x0[i] - B[i] @ c) / B[i, j]
        if (x0 + B @ c).min() >= margin:
            return True
    return False


@pytest.mark.parametrize("name", SMALL)
def test_hyperplane_lp_matches_brute_force(name, rng):
    net = load(name).network
    ctx = CompatibilityContext.from_network(net)
    n = net.n_species
    for _ in range(12):
        x0 = np.round(10 ** rng.uniform(-1, 0.7, n), 3)
        i = int(rng.integers(n))
        a = float(np.round(10 ** rng.uniform(-1, 0.7), 3))
        lp = compatible_with_hyperplane(x0, i, a, ctx)
        if _grid_oracle(x0, i, a, ctx.basis, margin=1e-3):
            assert lp
        if lp:
            assert _grid_oracle(x0, i, a, ctx.basis, margin=-0.1)


@pytest.mark.parametrize("name", [n for n in INTERNAL
                                  if any(CompatibilityContext.from_network(load(n).network).unit_in_S)])
def test_unit_vector_in_S_makes_every_start_compatible(name, rng):
    net = load(name).network
    ctx = CompatibilityContext.from_network(net)
    for i in (k for k, u in enumerate(ctx.unit_in_S) if u):
        for _ in range(1000):
            x0 = 10 ** rng.uniform(-3, 3, net.n_species)
            assert compatible_with_hyperplane(x0, i, 1.0, ctx)


def test_compatible_exact_and_float():
    ctx = CompatibilityContext.from_network(net_of("A <-> B"))
    assert compatible([1, 2], [2, 1], ctx)
    assert not compatible([1, 2], [2, 2], ctx)
    assert compatible([0.1, 0.2], [0.3, 0.0], ctx)
    with pytest.raises(ValueError):
        compatible([1], [1, 2], ctx)


def test_archetype_hyperplane_needs_enough_mass():
    ctx = CompatibilityContext.from_network(net_of("A + B -> 2B; B -> A"))
    assert compatible_with_hyperplane([1.5, 1.0], 0, 2.0, ctx)
    assert not compatible_with_hyperplane([1.0, 0.5], 0, 2.0, ctx)


@pytest.mark.parametrize("name", [n for n in INTERNAL if n != "archetype-with-inflow"])
def test_two_seeds_agree_on_acr_values(name):
    entry = load(name)
    sys = entry.system()
    tol = 2 * AcrOptions().rel_tol
    a = detect_static_acr(sys, seed=1)
    b = detect_static_acr(sys, seed=2)
    for va, vb in zip(a.verdicts, b.verdicts):
        if va.kind == vb.kind == "acr":
            assert abs(va.value - vb.value) <= tol * max(1.0, abs(va.value))
    opts = AcrOptions(samples=8, probe_levels=0)
    for i in range(sys.network.n_species):
        da = detect_dynamic_acr(sys, i, opts=opts, rng=np.random.default_rng(1))
        db = detect_dynamic_acr(sys, i, opts=opts, rng=np.random.default_rng(2))
        if da.kind == db.kind == "acr":
            assert abs(da.value - db.value) <= tol * max(1.0, abs(da.value))


def test_unique_steady_state_per_class_gives_static_acr_everywhere():
    sys = parse_network("0 <->{1, 2} A; 0 <->{3, 1} B")
    search = detect_static_acr(sys, seed=0)
    assert [v.kind for v in search.verdicts] == ["acr", "acr"]
    assert [v.value for v in search.verdicts] == pytest.approx([0.5, 3.0], rel=1e-10)


@pytest.mark.parametrize("extra", ["0 ->{1} B", "B ->{1} 0", "0 <->{2, 1} B"])
def test_disjoint_union_keeps_dynamic_verdict(extra):
    alone = analyze_acr(parse_network("0 <->{1, 1} A"), AcrOptions(samples=10))
    union = analyze_acr(parse_network(f"0 <->{{1, 1}} A; {extra}"), AcrOptions(samples=10))
    a, u = alone.verdicts[0].dynamic, union.verdicts[0].dynamic
    assert a.kind == u.kind == "acr"
    assert u.value == pytest.approx(a.value, rel=1e-6)


@pytest.mark.parametrize("name", INTERNAL)
def test_dynamic_acr_is_consistent_with_steady_states(name):
    entry = load(name)
    sys = entry.system()
    a = analyze_acr(sys, AcrOptions(samples=8, probe_levels=4))
    assert theorem_consistent(a, CompatibilityContext.from_network(sys.network))


def test_judge_trajectory_labels():
    sys = parse_network("0 <->{1, 1} A")
    traj = integrate(sys, [5.0], 200.0)
    assert judge_trajectory(traj, 0, 1.0, 1e-4) == "converged"
    assert judge_trajectory(traj, 0, 2.0, 1e-4) == "elsewhere"
    lv = parse_network("A + B ->{1} 2B; B ->{1} 0; A ->{1} 2A")
    assert judge_trajectory(integrate(lv, [2.0, 1.0], 200.0), 0, 1.0, 1e-4) == "cycle"


def test_basin_labels():
    arch = net_of("A + B -> 2B; B -> A")
    narrow = net_of("A + B -> 0; B -> A + 2B")
    tri = net_of("A -> A + B; A + B -> B; B -> A")
    for net, want in ((arch, "wide"), (narrow, "narrow"), (tri, "full")):
        ctx = CompatibilityContext.from_network(net)
        assert classify_basin(None, 0, 1.0, ctx)[0] == want


def test_sweep_aggregation_treats_open_points_as_no_evidence():
    pts = (SweepPoint((1.0,), ("A",), ("A",)), SweepPoint((2.0,), (), (), ("A",), ("A",)))
    r = SweepResult(pts, ("A", "B"))
    assert r.capacity_dynamic and r.network_dynamic
    assert r.dynamic_acr_species == ("A",)
    r = SweepResult(pts + (SweepPoint((3.0,), (), ()),), ("A", "B"))
    assert r.capacity_dynamic and not r.network_dynamic
    assert r.dynamic_acr_species == ()


def test_default_grid_is_capped():
    assert len(default_grid(2)) == 9
    g = default_grid(8)
    assert len(g) == 729 and g[0] == (0.25,) * 8 and g[-1] == (4.0,) * 8


def test_verdicts_are_deterministic_for_a_seed():
    sys = load("archetype").system()
    a = analyze_acr(sys, AcrOptions(seed=3, samples=6))
    b = analyze_acr(sys, AcrOptions(seed=3, samples=6))
    assert [(v.static, v.dynamic) for v in a.verdicts] == [(v.static, v.dynamic) for v in b.verdicts]
