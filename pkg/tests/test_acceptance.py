"""Acceptance criteria 1-9, one summary line each (see the terminal summary).

Every criterion must also finish inside its 60 s budget.
"""

from __future__ import annotations

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from acr.analysis import AcrOptions, analyze_acr, detect_static_acr
from acr.catalog import list_entries, load, run_golden
from acr.dynamics import find_steady_state, integrate, restricted_eigenvalues, scale_of
from acr.network import MassActionSystem
from acr.parser import parse_network
from acr.structure import structural_report

import test_analysis
import test_complex_balance
import test_dynamics
import test_structure
from conftest import ACCEPTANCE, net_of

BUDGET = 60.0


@pytest.fixture
def criterion(request):
    """Collects failures for one criterion, then records a pass/fail line."""
    n, title = request.param
    failures: list[str] = []
    start = time.perf_counter()
    yield failures
    elapsed = time.perf_counter() - start
    if elapsed > BUDGET:
        failures.append(f"took {elapsed:.1f} s, budget {BUDGET:.0f} s")
    status = "PASS" if not failures else "FAIL"
    detail = "" if not failures else " | " + "; ".join(failures[:4])
    ACCEPTANCE.append(f"criterion {n}: {status}  {title}  ({elapsed:.1f} s){detail}")
    assert not failures, failures


def _check(failures, ok, message):
    if not ok:
        failures.append(message)


def _close(a, b, rtol):
    return abs(a - b) <= rtol * max(abs(b), 1e-300)


@pytest.mark.parametrize("criterion", [(1, "structural goldens")], indirect=True)
def test_criterion_1_structure(criterion):
    for text, want in [
        ("A + B -> 2B; B -> 0; A -> 2A", (6, 3, 2, 1, False)),
        ("X + Ce <-> Co; X + Co <-> Ce", (4, 2, 2, 0, True)),
        ("A -> A + B; A + B -> B; B -> A", (3, 1, 2, 0, True)),
        ("A + B -> 2B; B -> A", (4, 2, 1, 1, False)),
    ]:
        rep = structural_report(net_of(text))
        got = (rep.n, rep.ell, rep.s, rep.deficiency, rep.weakly_reversible)
        _check(criterion, got == want, f"{text}: (n, l, s, delta, WR) = {got}, expected {want}")


@pytest.mark.parametrize("criterion", [(2, "Shinar-Feinberg goldens")], indirect=True)
def test_criterion_2_shinar_feinberg(criterion):
    for text, want in [
        ("A + B -> 2B; 2A + B -> 3A", ["A"]),
        ("A + B -> 2B; B -> 0; A -> 2A", ["A", "B"]),
        ("A <-> B", []),
    ]:
        net = net_of(text)
        got = [net.species_names[i] for i in structural_report(net).sf.species]
        _check(criterion, got == want, f"{text}: hits {got}, expected {want}")


def _steady(sys, anchor):
    rec = find_steady_state(sys, np.asarray(anchor, dtype=float))
    return None if rec is None else rec.x


@pytest.mark.parametrize("criterion", [(3, "steady-state formulas, Newton to 1e-8")], indirect=True)
def test_criterion_3_formulas(criterion):
    cases = []
    for k, kp in [(2.0, 5.0), (0.3, 1.7)]:
        sys = parse_network(f"0 <->{{{k}, {kp}}} A")
        cases.append(("0 <-> A", sys, [1.0], {0: k / kp}))
    for rho, sigma in [(1.0, 1.0), (0.5, 0.1)]:
        sys = parse_network(f"0 ->{{{rho}}} X; X ->{{{sigma}}} Y; Y ->{{1}} 0; X + 2Y ->{{1}} 3Y")
        cases.append(("Sel'kov", sys, [1.0, 1.0], {0: rho / (sigma + rho ** 2), 1: rho}))
    for k1, k2, k3 in [(1.0, 2.0, 1.0), (0.5, 2.0, 0.5)]:
        sys = parse_network(f"A ->{{{k1}}} 0; A <->{{{k2}, {k3}}} 2A")
        cases.append(("logistic", sys, [1.0], {0: (k2 - k1) / k3}))
    for k in [(1.0, 4.0, 1.0, 1.0), (2.0, 1.0, 0.5, 3.0)]:
        sys = parse_network("X + Ce <->{%r, %r} Co; X + Co <->{%r, %r} Ce" % k)
        x_star = math.sqrt(k[1] * k[3] / (k[0] * k[2]))
        ratio = math.sqrt(k[1] * k[2] / (k[0] * k[3]))
        cases.append(("nanotube", sys, [1.0, 2.0, 1.0], {0: x_star, "ratio": ratio}))
    for label, sys, anchor, want in cases:
        x = _steady(sys, anchor)
        if x is None:
            criterion.append(f"{label} {sys.rates}: no steady state found")
            continue
        for key, value in want.items():
            got = x[1] / x[2] if key == "ratio" else x[key]
            _check(criterion, _close(got, value, 1e-8),
                   f"{label} {sys.rates}: {key} = {got!r}, formula {value!r}")


PATTERNS = {
    "inflow-outflow": (True, True, True, True),
    "selkov": (True, True, True, False),
    "autocatalytic-repeller": (True, True, False, False),
    "dynamic-not-static": (True, False, True, True),
    "cubic-multistable": (True, False, True, False),
    "knife-edge": (True, False, False, False),
    "inflow-conversion": (False, False, True, True),
    "inflow-conversion-autocatalysis": (False, False, True, False),
    "isomerization": (False, False, False, False),
}
NETWORK_ROWS = {  # capacity/network static, species; capacity/network dynamic, species
    "sf-unstable": (True, True, ["A"], False, False, []),
    "lotka-volterra": (True, True, ["A", "B"], False, False, []),
    "selkov-tracker": (True, True, ["X", "Y", "Z"], True, True, ["Z"]),
    "triangle": (True, True, ["A", "B"], True, True, ["A", "B"]),
    "archetype": (True, True, ["A"], True, True, ["A"]),
    "narrow-archetype": (True, True, ["A"], True, True, ["A"]),
}
BASINS = {"archetype": "wide", "narrow-archetype": "narrow", "catalysed-decay": "full",
          "mass-conserving-narrow": "narrow"}


@pytest.mark.parametrize("criterion", [(4, "ACR pattern goldens, network classification goldens, basin labels")],
                         indirect=True)
def test_criterion_4_tables(criterion):
    assert len(set(PATTERNS.values())) == 9
    for name, want in PATTERNS.items():
        g = run_golden(name, grid=True).grid_summary
        got = (g["capacity_static"], g["network_static"], g["capacity_dynamic"], g["network_dynamic"])
        _check(criterion, got == want, f"{name}: grid {got}, expected {want}")
    for name, want in NETWORK_ROWS.items():
        g = run_golden(name, grid=True).grid_summary
        got = (g["capacity_static"], g["network_static"], g["static_acr_species"],
               g["capacity_dynamic"], g["network_dynamic"], g["dynamic_acr_species"])
        _check(criterion, got == want, f"{name}: grid {got}, expected {want}")
    for name, basin in BASINS.items():
        entry = load(name)
        a = analyze_acr(entry.system(), AcrOptions())
        got = {v.species: v.dynamic.basin for v in a.verdicts if v.dynamic.kind == "acr"}
        _check(criterion, basin in got.values(), f"{name}: basins {got}, expected {basin}")
    _check(criterion, structural_report(load("mass-conserving-narrow").network).mass_conserving,
           "mass-conserving-narrow is not mass conserving")


@pytest.mark.parametrize("criterion", [(5, "boundary versus ACR convergence")],
                         indirect=True)
def test_criterion_5_boundary_claim(criterion):
    k1, k2 = 1.0, 1.0
    k_star = k2 / k1
    sys = parse_network(f"X + Y + Z ->{{{k1}}} 2X + 2Y; X + Y ->{{{k2}}} Z")
    rng = np.random.default_rng(2024)
    done = 0
    while done < 20:
        c1, c2 = rng.uniform(0.2, 3.0, 2)
        c = min(c1, c2)
        if abs(c - k_star) < 0.1:
            continue
        z0 = rng.uniform(0.05, 0.95) * c
        x0 = np.array([c1 - z0, c2 - z0, z0])
        traj = integrate(sys, x0, 5000.0)
        end = traj.final
        if c <= k_star:
            want, tol = np.array([c1 - c, c2 - c, c]), 1e-4
        else:
            want, tol = np.array([c1 - k_star, c2 - k_star, k_star]), 1e-6
        err = float(np.max(np.abs(end - want)))
        _check(criterion, traj.status == "completed" and err <= tol,
               f"c1={c1:.3f} c2={c2:.3f}: end {end}, expected {want} (err {err:.2e})")
        done += 1


@pytest.mark.parametrize("criterion", [(6, "Sel'kov bifurcation and the Z tracker")], indirect=True)
def test_criterion_6_selkov(criterion):
    selkov = load("selkov")
    tracker = load("selkov-tracker")
    opts = AcrOptions(samples=25, seed=6)
    for entry, rates in ((selkov, (1, 1, 1, 1)), (tracker, (1, 1, 1, 1, 1, 1))):
        a = analyze_acr(entry.system(rates), opts)
        for v in a.verdicts:
            _check(criterion, v.dynamic.kind == "acr" and v.dynamic.basin == "full",
                   f"{entry.name} {rates}: {v.species} {v.dynamic.kind} {v.dynamic.basin}")
    rng = np.random.default_rng(66)
    for entry, rates in ((selkov, (0.5, 0.1, 1, 1)), (tracker, (0.5, 0.1, 1, 1, 1, 1))):
        sys = entry.system(rates)
        for _ in range(5):
            x0 = 10 ** rng.uniform(-1, 1, sys.network.n_species)
            traj = integrate(sys, x0, 400.0)
            tail = traj.states[traj.times >= 320.0]
            for j, name in enumerate(("X", "Y")):
                amp = float(np.ptp(tail[:, j]))
                _check(criterion, amp > 1e-2, f"{entry.name}: {name} tail amplitude {amp:.2e}")
            if entry is tracker:
                err = abs(traj.final[2] - rates[5] / rates[4])
                _check(criterion, err <= 1e-6, f"selkov-tracker: |z - k2/k1| = {err:.2e}")


@pytest.mark.parametrize("criterion", [(7, "knife-edge and multistationarity")], indirect=True)
def test_criterion_7_knife_edge(criterion):
    knife = load("knife-edge")
    search = detect_static_acr(knife.system((1, 2, 1)), seed=7)
    _check(criterion, len(search.states) == 1,
           f"k=(1,2,1): {len(search.states)} positive steady states, expected 1")
    for rec in search.states:
        eig = restricted_eigenvalues(knife.system((1, 2, 1)), rec.x)
        top = float(np.max(eig.real))
        eps = 1e-6 * scale_of(rec.x)
        _check(criterion, top >= -eps and rec.stability != "attracting",
               f"k=(1,2,1): max Re = {top:.2e}, stability {rec.stability}")
        _check(criterion, abs(rec.x[0] - 1.0) <= 1e-4, f"k=(1,2,1): steady state {rec.x}")
    a = analyze_acr(knife.system((1, 2, 1)), AcrOptions(samples=10))
    _check(criterion, a.verdicts[0].dynamic.kind == "notAcr",
           f"k=(1,2,1): dynamic {a.verdicts[0].dynamic.kind}, expected notAcr")
    none = detect_static_acr(knife.system((1, 1, 1)), seed=7)
    _check(criterion, not none.states and none.verdicts[0].kind == "noPositiveSteadyState",
           f"k=(1,1,1): {len(none.states)} steady states, verdict {none.verdicts[0].kind}")
    k = (4.0, 8.0, 3.5, 0.4)
    cubic = detect_static_acr(load("cubic-multistable").system(k), seed=7)
    found = sorted(float(r.x[0]) for r in cubic.states)
    roots = sorted(r.real for r in np.roots([-k[3], k[2], -k[1], k[0]])
                   if abs(r.imag) < 1e-12 and r.real > 0)
    _check(criterion, len(found) >= 3 and len(roots) == 3,
           f"k={k}: found {found}, polynomial roots {roots}")
    distinct = all(abs(a - b) > 1e-6 for a, b in zip(found, found[1:]))
    _check(criterion, distinct, f"k={k}: states not distinct to 1e-6: {found}")
    for r in roots:
        _check(criterion, any(_close(f, r, 1e-8) for f in found), f"k={k}: root {r} missed")


@pytest.mark.parametrize("criterion", [(8, "property suites")], indirect=True)
def test_criterion_8_properties(criterion):
    rng = np.random.default_rng(8)
    suites = [
        ("deficiency >= 0 on 1000 random networks",
         [lambda: test_structure.test_deficiency_nonnegative_and_matches_float_oracle()]),
        ("conservation drift < 1e-8",
         [lambda n=n: test_dynamics.test_conservation_and_forward_invariance(n, rng)
          for n in list_entries()]),
        ("Jacobian versus finite differences",
         [lambda n=n: test_dynamics.test_jacobian_matches_finite_differences(n, rng)
          for n in list_entries()]),
        ("compatibility LP versus brute force",
         [lambda n=n: test_analysis.test_hyperplane_lp_matches_brute_force(n, rng)
          for n in test_analysis.SMALL]),
        ("disjoint-union invariance",
         [lambda e=e: test_analysis.test_disjoint_union_keeps_dynamic_verdict(e)
          for e in ("0 ->{1} B", "B ->{1} 0", "0 <->{2, 1} B")]),
        ("complex-balance residuals < 1e-8",
         [lambda n=n: test_complex_balance.test_balanced_at_every_newton_steady_state(n, rng)
          for n in test_complex_balance.CB]),
        ("two-seed agreement within 2 rel_tol",
         [lambda n=n: test_analysis.test_two_seeds_agree_on_acr_values(n)
          for n in test_analysis.INTERNAL if n != "archetype-with-inflow"]),
    ]
    for label, checks in suites:
        bad = 0
        for check in checks:
            try:
                check()
            except AssertionError:
                bad += 1
        _check(criterion, bad == 0, f"{label}: {bad} of {len(checks)} checks failed")


@pytest.mark.parametrize("criterion", [(9, "byte-identical catalog run-all --seed 7")],
                         indirect=True)
def test_criterion_9_determinism(criterion):
    cmd = [sys.executable, "-m", "acr.cli", "catalog", "run-all", "--seed", "7"]
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    _check(criterion, first.returncode == 0, f"exit code {first.returncode}")
    _check(criterion, len(first.stdout) > 0 and first.stdout == second.stdout,
           "outputs differ")
