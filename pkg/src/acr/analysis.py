"""Compatibility, static and dynamic ACR detection, basin classification.

Static verdicts come from a seeded multi-start steady-state search plus
the structural certificates that apply.  Dynamic verdicts come from
integrating sampled initial conditions that are compatible with the
candidate hyperplane.  Both are evidence, not proof, unless a certificate
is named in the verdict.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dynamics import (
    OdeSystem,
    SteadyStateRecord,
    Trajectory,
    find_positive_zero,
    find_steady_state,
    integrate,
    scale_of,
    segment_in_orthant,
    stoichiometric_frame,
)
from .network import MassActionSystem, ReactionNetwork, stoichiometric_matrix
from .simplex import feasible_point
from .structure import StructuralReport, structural_report, unit_vector_in_S

KINETIC_WARNING = "kinetic subspace may be smaller than the stoichiometric subspace"
SWEEP_TAG = "grid evidence, not proof"
DYNAMIC_GUARD = 1e100


@dataclass(frozen=True)
class AcrOptions:
    classes: int = 24
    starts_per_class: int = 3
    rel_tol: float = 1e-6
    samples: int = 25
    t_end: float = 200.0
    conv_tol: float = 1e-4
    tail_fraction: float = 0.2
    max_extensions: int = 3
    probe_levels: int = 20
    probe_samples: int = 16
    seed: int = 0
    # stop sampling once every undecided species already has an unsettled run
    stop_when_open: bool = False
    # accepted-step cap per integration leg; exhausting it reads as step-failure
    max_steps: int = 2_000_000

    @classmethod
    def for_sweep(cls, seed: int = 0) -> "AcrOptions":
        return cls(classes=10, starts_per_class=2, samples=8, probe_levels=0,
                   max_extensions=2, stop_when_open=True, max_steps=20_000, seed=seed)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass(frozen=True)
class CompatibilityContext:
    """Exact bases of S and its orthogonal complement, plus the kinetic flag."""

    basis: tuple[tuple[Fraction, ...], ...]
    complement: tuple[tuple[Fraction, ...], ...]
    kinetic_equals_stoich: bool
    n_species: int
    unit_in_S: tuple[bool, ...]

    @classmethod
    def from_network(cls, net: ReactionNetwork, report: StructuralReport | None = None):
        report = report or structural_report(net)
        gamma = stoichiometric_matrix(net)
        units = tuple(unit_vector_in_S(net, i).in_span for i in range(net.n_species))
        return cls(
            tuple(gamma.column_space_basis()),
            tuple(gamma.left_nullspace()),
            report.one_terminal_per_linkage,
            net.n_species,
            units,
        )

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def warnings(self) -> list[str]:
        return [] if self.kinetic_equals_stoich else [KINETIC_WARNING]

    def float_basis(self) -> np.ndarray:
        if not self.basis:
            return np.zeros((self.n_species, 0))
        q, _ = np.linalg.qr(np.array([[float(v) for v in b] for b in self.basis]).T)
        return q


def _is_exact(v) -> bool:
    return all(isinstance(t, (int, Fraction)) for t in v)


def compatible(x, y, ctx: CompatibilityContext) -> bool:
    """Is ``y - x`` in S?  Exact for rational input, projected residual otherwise."""
    if len(x) != ctx.n_species or len(y) != ctx.n_species:
        raise ValueError("dimension mismatch")
    if _is_exact(x) and _is_exact(y):
        d = [Fraction(b) - Fraction(a) for a, b in zip(x, y)]
        return all(sum(w * di for w, di in zip(row, d)) == 0 for row in ctx.complement)
    d = np.asarray(y, dtype=float) - np.asarray(x, dtype=float)
    norm = float(np.linalg.norm(d))
    if norm == 0.0:
        return True
    Q = ctx.float_basis()
    resid = d - Q @ (Q.T @ d)
    return float(np.linalg.norm(resid)) < 1e-9 * norm


def compatible_with_hyperplane(x0, i: int, a_star: float, ctx: CompatibilityContext,
                               eps: float | None = None) -> bool:
    """Does the class of ``x0`` meet ``{x >= eps, x_i = a_star}``?

    Strict positivity is approximated by ``eps = 1e-9 * scale``.  Decided by
    exact phase-one feasibility on ``W x = W x0``, ``x_i = a_star``.
    """
    x0 = [Fraction(v) for v in x0]
    a = Fraction(a_star)
    if eps is None:
        scale = max([Fraction(1), a] + [abs(v) for v in x0])
        eps = Fraction(1, 10**9) * scale
    eps = Fraction(eps)
    if a < eps:
        return False
    if ctx.unit_in_S[i]:
        return all(v > 0 for v in x0)
    rows, rhs = [], []
    for w in ctx.complement:
        rows.append(list(w))
        rhs.append(sum(wj * (xj - eps) for wj, xj in zip(w, x0)))
    e = [Fraction(0)] * ctx.n_species
    e[i] = Fraction(1)
    rows.append(e)
    rhs.append(a - eps)
    return feasible_point(rows, rhs) is not None


# static ACR ---------------------------------------------------------------


@dataclass(frozen=True)
class StaticVerdict:
    kind: str  # acr | notAcr | noPositiveSteadyState | inconclusive
    value: float | None = None
    witnesses: tuple[tuple[float, ...], ...] = ()
    certificate: str | None = None
    note: str | None = None


@dataclass
class StaticSearch:
    states: list[SteadyStateRecord]
    anchors: int
    newton_runs: int
    single_class: bool
    verdicts: list[StaticVerdict]


def _anchors(n: int, count: int, rng: np.random.Generator) -> list[np.ndarray]:
    ladder = [np.full(n, t) for t in np.logspace(-2, 2, 9)]
    if count <= len(ladder):
        picks = np.linspace(0, len(ladder) - 1, max(count, 1)).round().astype(int)
        return [ladder[k] for k in sorted(set(picks))]
    out = list(ladder)
    while len(out) < count:
        out.append(10.0 ** rng.uniform(-2, 2, size=n))
    return out


def _add_distinct(states: list[SteadyStateRecord], rec: SteadyStateRecord | None) -> None:
    if rec is None:
        return
    for s in states:
        if np.max(np.abs(s.x - rec.x)) <= 1e-6 * max(scale_of(s.x), scale_of(rec.x)):
            return
    states.append(rec)


def _certificates(report: StructuralReport, ctx: CompatibilityContext) -> dict[int, str]:
    certs: dict[int, str] = {}
    for i in report.sf.species:
        certs[i] = "shinar-feinberg"
    if report.weakly_reversible and report.deficiency == 0:
        for i, ok in enumerate(ctx.unit_in_S):
            if ok:
                certs[i] = "complex-balanced unit vector"
    return certs


def detect_static_acr(sys: MassActionSystem, classes: int = 24, starts_per_class: int = 3,
                      rel_tol: float = 1e-6, seed: int = 0,
                      report: StructuralReport | None = None) -> StaticSearch:
    """Multi-start search for positive steady states and per-species verdicts."""
    net = sys.network
    report = report or structural_report(net)
    ctx = CompatibilityContext.from_network(net, report)
    ode = OdeSystem(sys)
    rng = np.random.default_rng(seed)
    n = net.n_species
    states: list[SteadyStateRecord] = []
    runs = 0
    Q = stoichiometric_frame(net).span
    anchors = _anchors(n, classes, rng)
    for anchor in anchors:
        _add_distinct(states, find_steady_state(ode, anchor, rng=rng, restarts=1))
        _add_distinct(states, find_positive_zero(ode, anchor))
        runs += 2
        for _ in range(max(0, starts_per_class - 1)):
            if Q.shape[1] == 0:
                break
            d = Q @ rng.normal(size=Q.shape[1])
            d /= np.linalg.norm(d)
            lo, hi = segment_in_orthant(anchor, d, cap=10.0 * scale_of(anchor))
            start = anchor + (lo + rng.uniform(0.05, 0.95) * (hi - lo)) * d
            if np.all(start > 0):
                _add_distinct(states, find_steady_state(ode, anchor, start=start, rng=rng,
                                                         restarts=1))
                runs += 1
    single_class = report.s == n
    certs = _certificates(report, ctx)
    verdicts = [_static_verdict(states, i, rel_tol, single_class, certs.get(i)) for i in range(n)]
    return StaticSearch(states, len(anchors), runs, single_class, verdicts)


def _static_verdict(states, i, rel_tol, single_class, cert) -> StaticVerdict:
    if not states:
        return StaticVerdict("noPositiveSteadyState", note="none found within the search budget")
    vals = np.array([s.x[i] for s in states])
    lo, hi = int(np.argmin(vals)), int(np.argmax(vals))
    if vals[hi] - vals[lo] > rel_tol * max(abs(vals[hi]), 1e-300):
        return StaticVerdict("notAcr", witnesses=(tuple(states[lo].x), tuple(states[hi].x)))
    value = float(np.median(vals))
    if len(states) >= 2:
        return StaticVerdict("acr", value, certificate=cert)
    if single_class:
        return StaticVerdict("acr", value, certificate="single compatibility class")
    if cert is not None:
        return StaticVerdict("acr", value, certificate=cert)
    return StaticVerdict("inconclusive", value, note="only one positive steady state found")


# dynamic ACR --------------------------------------------------------------


@dataclass(frozen=True)
class DynamicVerdict:
    kind: str  # acr | notAcr | inconclusive
    value: float | None = None
    basin: str | None = None  # full | wide | narrow | unknown
    witness: dict | None = None
    note: str | None = None
    trajectories: int = 0


def _tail(traj: Trajectory, fraction: float):
    t_end = traj.times[-1]
    mask = traj.times >= t_end * (1.0 - fraction)
    if mask.sum() < 3:
        mask[-3:] = True
    return traj.times[mask], traj.states[mask]


def _blowing_up(traj: Trajectory) -> bool:
    """Step size collapsed while some component grew monotonically past 1e6 times its start."""
    last = traj.states[-8:]
    j = int(np.argmax(last[-1]))
    col = last[:, j]
    return bool(col[-1] > 1e6 * max(1.0, float(traj.states[0].max()))
                and np.all(np.diff(col) > 0))


def judge_trajectory(traj: Trajectory, i: int, a_star: float, tol: float,
                     tail_fraction: float = 0.2) -> str:
    """converged | elsewhere | cycle | diverged | away | pending | failed."""
    xi_all = traj.states[:, i]
    if traj.status == "step-failure":
        if not _blowing_up(traj):
            return "failed"
        big = int(np.argmax(traj.states[-1]))
        if big == i or xi_all[-1] > 1e6 * max(1.0, a_star, xi_all[0]):
            return "diverged"
        return "failed"
    if traj.status == "diverged":
        big = int(np.argmax(traj.states[-1]))
        if big == i or xi_all[-1] > 1e6 * max(1.0, a_star, xi_all[0]):
            return "diverged"
    _, tail = _tail(traj, tail_fraction)
    xi = tail[:, i]
    d = np.abs(xi - a_star)
    dev, d_start, d_end = float(d.max()), float(d[0]), float(d[-1])
    if dev <= tol and d_end <= d_start + 1e-2 * tol:
        return "converged"
    if traj.status == "diverged":
        return "failed"
    amp = float(xi.max() - xi.min())
    if amp <= tol and d_end > tol:
        return "elsewhere"
    half = len(xi) // 2
    amp1 = float(xi[: half + 1].max() - xi[: half + 1].min())
    amp2 = float(xi[half:].max() - xi[half:].min())
    steps = np.diff(xi)
    steps = steps[np.abs(steps) > 1e-12 * max(1.0, float(np.abs(xi).max()))]
    turns = int(np.sum(np.sign(steps[1:]) != np.sign(steps[:-1]))) if steps.size > 1 else 0
    if turns >= 2 and amp2 > tol and amp2 >= 0.9 * amp1:
        return "cycle"
    if turns == 0 and d_end > d_start:
        return "away"
    return "pending"


def _extend(ode: OdeSystem, traj: Trajectory, duration: float, max_steps: int) -> Trajectory:
    more = integrate(ode, traj.final, duration, guard=DYNAMIC_GUARD, max_steps=max_steps)
    times = np.concatenate([traj.times, traj.times[-1] + more.times[1:]])
    states = np.vstack([traj.states, more.states[1:]])
    return Trajectory(times, states, more.status, traj.species)


_UNSETTLED = ("pending", "away", "cycle")
_REFUTING = ("elsewhere", "cycle", "diverged", "away")


def run_and_judge(ode: OdeSystem, x0, targets: dict[int, float], opts: AcrOptions):
    """Integrate once and judge every ``(species, a_star)`` target on it.

    Extends while some target is unsettled; a cycle earns one extension.
    Returns ``({species: label}, trajectory)``.
    """
    def judge(traj):
        return {i: judge_trajectory(traj, i, a, opts.conv_tol * max(1.0, a), opts.tail_fraction)
                for i, a in targets.items()}

    traj = integrate(ode, x0, opts.t_end, guard=DYNAMIC_GUARD, max_steps=opts.max_steps)
    labels = judge(traj)
    for ext in range(opts.max_extensions):
        open_ = [lab for lab in labels.values() if lab in _UNSETTLED]
        if not open_ or (ext >= 1 and all(lab == "cycle" for lab in open_)):
            break
        traj = _extend(ode, traj, traj.times[-1], opts.max_steps)
        labels = judge(traj)
    return labels, traj


def sample_compatible(x_i: float | None, i: int | None, n: int, Q: np.ndarray,
                      rng: np.random.Generator, stratum: tuple[int, int] = (0, 1)) -> np.ndarray:
    """Positive point in the class of a random hyperplane point ``p`` with ``p_i = x_i``.

    ``p`` moves along a random direction of S.  Sample ``k`` of ``total``
    alternates sides and takes a stratified fraction of the room on that
    side, or a log-stratified distance in ``[0.1, 1000] * scale`` when the
    side is unbounded, so far basins are visited on every run.
    """
    p = 10.0 ** rng.uniform(-0.5, 1.0, size=n)
    if i is not None:
        p[i] = x_i
    if Q.shape[1] == 0:
        return p
    d = Q @ rng.normal(size=Q.shape[1])
    d /= np.linalg.norm(d)
    k, total = stratum
    side = 1.0 if k % 2 == 0 else -1.0
    bins = max(1, (total + 1) // 2)
    q = ((k // 2) % bins + rng.uniform()) / bins
    lo, hi = segment_in_orthant(p, d)
    room = hi if side > 0 else -lo
    if np.isfinite(room):
        t = side * room * (0.05 + 0.9 * q)
    else:
        t = side * scale_of(p) * 10.0 ** (-1.0 + 4.0 * q)
    x0 = p + t * d
    return np.where(x0 > 0, x0, p)


def _witness(label: str, traj: Trajectory) -> dict:
    return {
        "reason": label,
        "x0": [float(v) for v in traj.states[0]],
        "t": float(traj.times[-1]),
        "final": [float(v) for v in traj.final],
    }


def _settled(traj: Trajectory, i: int, opts: AcrOptions) -> tuple[bool, float]:
    _, tail = _tail(traj, opts.tail_fraction)
    xi = tail[:, i]
    v = float(xi[-1])
    return bool(xi.max() - xi.min() <= opts.conv_tol * max(1.0, abs(v))), v


def _no_limit(traj: Trajectory, i: int, opts: AcrOptions) -> bool:
    """x_i decays to zero, blows up, grows without bound, or keeps cycling."""
    ok, v = _settled(traj, i, opts)
    if ok:
        return v <= opts.conv_tol
    if traj.status == "diverged" or (traj.status == "step-failure" and _blowing_up(traj)):
        return True
    times, tail = _tail(traj, opts.tail_fraction)
    xi = tail[:, i]
    # power-law test: moving at least like t^(1/2) toward 0 or infinity
    span = float(np.sqrt(times[-1] / max(times[0], 1e-300)))
    steps = np.diff(xi)
    if np.all(steps <= 0) and xi[-1] * span <= xi[0]:
        return True
    if np.all(steps >= 0) and xi[-1] >= span * xi[0]:
        return True
    mid = float(np.median(xi))
    return judge_trajectory(traj, i, mid, opts.conv_tol * max(1.0, mid),
                            opts.tail_fraction) == "cycle"


def _limit_candidates(ode: OdeSystem, idxs: Sequence[int], opts: AcrOptions,
                      rng: np.random.Generator, probes: int = 3):
    """Probe trajectories from random points for a positive limit of each x_i.

    Returns ``({species: limit}, {species: (reason, last probe)})``.  The
    reason is ``"no positive limit"`` when every probe decays to zero or
    blows up in x_i, and ``"unsettled"`` when some probe is still moving.
    """
    n = ode.network.n_species
    found: dict[int, float] = {}
    last: dict[int, tuple[str, Trajectory]] = {}
    for _ in range(probes):
        todo = [i for i in idxs if i not in found]
        if not todo:
            break
        x0 = 10.0 ** rng.uniform(-0.5, 1.0, size=n)
        traj = integrate(ode, x0, opts.t_end, guard=DYNAMIC_GUARD, max_steps=opts.max_steps)
        for _ in range(opts.max_extensions):
            if traj.status != "completed" or all(_settled(traj, i, opts)[0] for i in todo):
                break
            traj = _extend(ode, traj, traj.times[-1], opts.max_steps)
        for i in todo:
            ok, v = _settled(traj, i, opts)
            if traj.status != "step-failure" and ok and v > opts.conv_tol:
                found[i] = v
                continue
            reason = "no positive limit" if _no_limit(traj, i, opts) else "unsettled"
            if last.get(i, ("no positive limit",))[0] == "no positive limit":
                last[i] = (reason, traj)
    return found, {i: r for i, r in last.items() if i not in found}


def detect_dynamic_group(sys, idxs: Sequence[int], hints: dict[int, float] | None = None,
                         opts: AcrOptions = AcrOptions(), rng: np.random.Generator | None = None,
                         shared: bool = False) -> dict[int, DynamicVerdict]:
    """Dynamic verdicts for several species judged on common trajectories.

    With ``shared`` every positive start counts as compatible for every
    species, which holds when each unit vector lies in S.  Otherwise the
    group must hold a single species whose hyperplane the samples respect.
    """
    ode = sys if isinstance(sys, OdeSystem) else OdeSystem(sys)
    net = ode.network
    rng = rng if rng is not None else np.random.default_rng(opts.seed)
    hints = hints or {}
    if not shared and len(idxs) != 1:
        raise ValueError("a non-shared group holds exactly one species")
    out: dict[int, DynamicVerdict] = {}
    runs = 0
    live = []
    for i in idxs:
        if ode.identically_zero(i):
            out[i] = DynamicVerdict("notAcr", note="f_i vanishes identically")
        else:
            live.append(i)
    need = [i for i in live if hints.get(i) is None]
    targets = {i: float(hints[i]) for i in live if hints.get(i) is not None}
    if need:
        found, probes = _limit_candidates(ode, need, opts, rng)
        runs += 3
        targets.update(found)
        for i, (reason, traj) in probes.items():
            if reason == "unsettled":
                out[i] = DynamicVerdict("inconclusive", witness=_witness(reason, traj),
                                        note="probe trajectories did not settle", trajectories=runs)
            else:
                out[i] = DynamicVerdict("notAcr", witness=_witness(reason, traj),
                                        note="probe trajectories found no positive limit",
                                        trajectories=runs)
    Q = stoichiometric_frame(net).span
    pending: dict[int, dict] = {}
    for k in range(opts.samples):
        if not targets:
            break
        if shared:
            x0 = sample_compatible(None, None, net.n_species, Q, rng, (k, opts.samples))
        else:
            (i0, a0), = targets.items()
            x0 = sample_compatible(a0, i0, net.n_species, Q, rng, (k, opts.samples))
        labels, traj = run_and_judge(ode, x0, targets, opts)
        runs += 1
        for i, label in labels.items():
            if label in _REFUTING:
                out[i] = DynamicVerdict("notAcr", targets[i], witness=_witness(label, traj),
                                        trajectories=runs)
            elif label != "converged":
                pending.setdefault(i, _witness(label, traj))
        for i in labels:
            if i in out:
                del targets[i]
        if opts.stop_when_open and targets and all(i in pending for i in targets):
            break
    for i, a in targets.items():
        if i in pending:
            out[i] = DynamicVerdict("inconclusive", a, witness=pending[i],
                                    note="some trajectories did not settle", trajectories=runs)
        else:
            out[i] = DynamicVerdict("acr", a, trajectories=runs)
    return out


def detect_dynamic_acr(sys, i: int, a_star_hint: float | None = None,
                       opts: AcrOptions = AcrOptions(), rng: np.random.Generator | None = None,
                       ctx: CompatibilityContext | None = None) -> DynamicVerdict:
    """Sampled evidence that x_i converges to one value from every compatible start."""
    hints = {} if a_star_hint is None else {i: a_star_hint}
    return detect_dynamic_group(sys, [i], hints, opts, rng)[i]


def classify_basin(sys, i: int, a_star: float, ctx: CompatibilityContext,
                   probe_levels: int = 20, probe_samples: int = 16,
                   rng: np.random.Generator | None = None) -> tuple[str, dict]:
    """full | wide | narrow | unknown, with the probe evidence.

    Levels ``a_star * 2**k`` for ``k`` in ``[-L, L]``; other coordinates are
    log-uniform in ``[1e-3, 1e3]``.  Narrow when incompatible points keep
    turning up at the top levels, wide when they exist but stay bounded.
    """
    if ctx.unit_in_S[i]:
        return "full", {"certificate": "unit vector in S"}
    rng = rng if rng is not None else np.random.default_rng(0)
    n = ctx.n_species
    hits = []
    for k in range(-probe_levels, probe_levels + 1):
        level = a_star * 2.0 ** k
        for _ in range(probe_samples):
            x = 10.0 ** rng.uniform(-3, 3, size=n)
            x[i] = level
            if not compatible_with_hyperplane(x, i, a_star, ctx):
                hits.append(k)
                break
    evidence = {"levels": 2 * probe_levels + 1, "incompatible_levels": hits}
    if not hits:
        return "unknown", {**evidence, "note": "no incompatible point found; leaning full"}
    top = set(range(max(1, probe_levels - 2), probe_levels + 1))
    if probe_levels >= 1 and top <= set(hits):
        return "narrow", evidence
    return "wide", evidence


# whole-system analysis ----------------------------------------------------


@dataclass(frozen=True)
class AcrVerdict:
    species: str
    index: int
    static: StaticVerdict
    dynamic: DynamicVerdict
    warnings: tuple[str, ...] = ()

    @property
    def values_agree(self) -> bool:
        if self.static.kind == "acr" and self.dynamic.kind == "acr":
            a, b = self.static.value, self.dynamic.value
            return abs(a - b) <= 1e-3 * max(1.0, abs(a))
        return True


@dataclass
class AcrAnalysis:
    verdicts: list[AcrVerdict]
    static_search: StaticSearch
    warnings: list[str]
    options: AcrOptions
    structure: StructuralReport = field(repr=False)

    @property
    def static_species(self) -> list[str]:
        return [v.species for v in self.verdicts if v.static.kind == "acr"]

    @property
    def dynamic_species(self) -> list[str]:
        return [v.species for v in self.verdicts if v.dynamic.kind == "acr"]

    @property
    def inconclusive(self) -> bool:
        return any(v.static.kind == "inconclusive" or v.dynamic.kind == "inconclusive"
                   for v in self.verdicts)


def _species_rngs(seed: int, n: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def analyze_acr(sys: MassActionSystem, opts: AcrOptions = AcrOptions(),
                static: bool = True, dynamic: bool = True, basins: bool = True,
                report: StructuralReport | None = None) -> AcrAnalysis:
    net = sys.network
    report = report or structural_report(net)
    ctx = CompatibilityContext.from_network(net, report)
    ode = OdeSystem(sys)
    if static:
        search = detect_static_acr(sys, opts.classes, opts.starts_per_class, opts.rel_tol,
                                   opts.seed, report)
    else:
        skipped = StaticVerdict("inconclusive", note="not run")
        search = StaticSearch([], 0, 0, report.s == net.n_species, [skipped] * net.n_species)
    rngs = _species_rngs(opts.seed + 1, net.n_species + 1)
    dyn: dict[int, DynamicVerdict] = {}
    if dynamic:
        hints = {i: v.value for i, v in enumerate(search.verdicts) if v.kind == "acr"}
        group = [i for i in range(net.n_species) if ctx.unit_in_S[i]]
        if group:
            dyn.update(detect_dynamic_group(ode, group, hints, opts, rngs[-1], shared=True))
        for i in range(net.n_species):
            if i not in dyn:
                dyn[i] = detect_dynamic_acr(ode, i, hints.get(i), opts, rngs[i], ctx)
    verdicts = []
    for i, name in enumerate(net.species_names):
        dv = dyn.get(i, DynamicVerdict("inconclusive", note="not run"))
        if dv.kind == "acr" and basins:
            label, ev = classify_basin(ode, i, dv.value, ctx, opts.probe_levels,
                                       opts.probe_samples, rngs[i])
            dv = replace(dv, basin=label, note=ev.get("note") or ev.get("certificate"))
        verdicts.append(AcrVerdict(name, i, search.verdicts[i], dv, tuple(ctx.warnings)))
    return AcrAnalysis(verdicts, search, ctx.warnings, opts, report)


def theorem_consistent(analysis: AcrAnalysis, ctx: CompatibilityContext) -> bool:
    """Dynamic acr with steady states present forces static acr or an incompatible state."""
    states = analysis.static_search.states
    for v in analysis.verdicts:
        if v.dynamic.kind != "acr" or not states:
            continue
        if v.static.kind == "acr" and v.values_agree:
            continue
        off = [s for s in states if abs(s.x[v.index] - v.dynamic.value) > 1e-6 * max(1.0, v.dynamic.value)]
        if not any(not compatible_with_hyperplane(s.x, v.index, v.dynamic.value, ctx) for s in off):
            return False
    return True


# network sweeps -----------------------------------------------------------

GRID_LEVELS = (0.25, 1.0, 4.0)
GRID_CAP = 3 ** 6


@dataclass(frozen=True)
class SweepPoint:
    rates: tuple[float, ...]
    static_species: tuple[str, ...]
    dynamic_species: tuple[str, ...]
    static_open: tuple[str, ...] = ()  # inconclusive species
    dynamic_open: tuple[str, ...] = ()

    @property
    def inconclusive(self) -> bool:
        return bool(self.static_open or self.dynamic_open)


@dataclass(frozen=True)
class SweepResult:
    """Grid-level ACR.  Inconclusive points count as evidence neither way.

    An existence claim needs a decided point in favour, a for-all claim
    fails only on a decided point against.
    """

    points: tuple[SweepPoint, ...]
    species: tuple[str, ...]
    tag: str = SWEEP_TAG

    def _capacity(self, kind: str) -> bool:
        return any(getattr(p, f"{kind}_species") for p in self.points)

    def _network(self, kind: str) -> bool:
        return all(getattr(p, f"{kind}_species") or getattr(p, f"{kind}_open")
                   for p in self.points)

    def _species(self, kind: str) -> tuple[str, ...]:
        out = []
        for s in self.species:
            hit = [s in getattr(p, f"{kind}_species") for p in self.points]
            open_ = [s in getattr(p, f"{kind}_open") for p in self.points]
            if any(hit) and all(h or o for h, o in zip(hit, open_)):
                out.append(s)
        return tuple(out)

    @property
    def capacity_static(self) -> bool:
        return self._capacity("static")

    @property
    def network_static(self) -> bool:
        return self._network("static")

    @property
    def capacity_dynamic(self) -> bool:
        return self._capacity("dynamic")

    @property
    def network_dynamic(self) -> bool:
        return self._network("dynamic")

    @property
    def static_acr_species(self) -> tuple[str, ...]:
        return self._species("static")

    @property
    def dynamic_acr_species(self) -> tuple[str, ...]:
        return self._species("dynamic")

    def summary(self) -> dict:
        return {
            "capacity_static": self.capacity_static,
            "network_static": self.network_static,
            "capacity_dynamic": self.capacity_dynamic,
            "network_dynamic": self.network_dynamic,
            "static_acr_species": list(self.static_acr_species),
            "dynamic_acr_species": list(self.dynamic_acr_species),
            "points": len(self.points),
            "inconclusive_points": sum(p.inconclusive for p in self.points),
            "tag": self.tag,
        }


def default_grid(n_reactions: int, cap: int = GRID_CAP) -> list[tuple[float, ...]]:
    grid = list(itertools.product(GRID_LEVELS, repeat=n_reactions))
    if len(grid) > cap:
        idx = np.linspace(0, len(grid) - 1, cap).round().astype(int)
        grid = [grid[k] for k in idx]
    return grid


def acr_network_sweep(net: ReactionNetwork, grid: Sequence[Sequence[float]] | None = None,
                      extra: Sequence[Sequence[float]] = (), opts: AcrOptions | None = None
                      ) -> SweepResult:
    """Capacity and network-level ACR over a finite rate grid."""
    opts = opts or AcrOptions.for_sweep()
    report = structural_report(net)
    pts = [tuple(map(float, k)) for k in (grid if grid is not None else default_grid(net.n_reactions))]
    for k in extra:
        k = tuple(map(float, k))
        if k not in pts:
            pts.append(k)
    out = []
    for rates in pts:
        a = analyze_acr(MassActionSystem(net, rates), opts, basins=False, report=report)
        out.append(SweepPoint(
            rates, tuple(a.static_species), tuple(a.dynamic_species),
            tuple(v.species for v in a.verdicts if v.static.kind == "inconclusive"),
            tuple(v.species for v in a.verdicts if v.dynamic.kind == "inconclusive")))
    return SweepResult(tuple(out), net.species_names)
