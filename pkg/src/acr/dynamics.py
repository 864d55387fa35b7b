"""Mass-action ODEs: vector field, Jacobian, integration and steady states."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import _kernels
from .network import MassActionSystem, ReactionNetwork, stoichiometric_matrix

STATUS_NAMES = {
    _kernels.STATUS_COMPLETED: "completed",
    _kernels.STATUS_DIVERGED: "diverged",
    _kernels.STATUS_STEP_FAILURE: "step-failure",
}

DEFAULT_RTOL = 1e-8
DEFAULT_ATOL = 1e-10
DEFAULT_GUARD = 1e12
STEADY_TOL = 1e-10
STABILITY_EPS = 1e-6


def scale_of(x) -> float:
    return max(1.0, float(np.max(np.abs(x)))) if len(x) else 1.0


@dataclass(frozen=True)
class StoichiometricFrame:
    """Orthonormal float bases of the stoichiometric subspace and its complement."""

    span: np.ndarray  # n x s, columns span S
    complement: np.ndarray  # (n - s) x n, rows span S-perp

    @property
    def dim(self) -> int:
        return self.span.shape[1]


def _orthonormal_columns(vectors: Sequence[Sequence], n: int) -> np.ndarray:
    if not vectors:
        return np.zeros((n, 0))
    M = np.array([[float(v) for v in vec] for vec in vectors]).T
    q, _ = np.linalg.qr(M)
    return q


@lru_cache(maxsize=256)
def stoichiometric_frame(net: ReactionNetwork) -> StoichiometricFrame:
    gamma = stoichiometric_matrix(net)
    n = net.n_species
    span = _orthonormal_columns(gamma.column_space_basis(), n)
    comp = _orthonormal_columns(gamma.left_nullspace(), n).T
    return StoichiometricFrame(span, comp.reshape(-1, n))


@dataclass(frozen=True)
class OdeSystem:
    """Monomial and net-change tables of a mass-action system."""

    system: MassActionSystem
    rates: np.ndarray = field(init=False, repr=False)
    reactant: np.ndarray = field(init=False, repr=False)
    net_change: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        net = self.system.network
        object.__setattr__(self, "rates", np.array(self.system.rates, dtype=float))
        object.__setattr__(self, "reactant", net.reactant_matrix())
        object.__setattr__(self, "net_change", net.net_change_matrix())

    @property
    def network(self) -> ReactionNetwork:
        return self.system.network

    def fluxes(self, x: np.ndarray) -> np.ndarray:
        return self.rates * np.prod(np.power(x[None, :], self.reactant), axis=1)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.fluxes(x) @ self.net_change

    def relative_residual(self, x) -> float:
        """Largest ``|f_j|`` over the gross flux through species j.

        Near-boundary points where every flux is tiny have small absolute
        but order-one relative residual; true zeros cancel.
        """
        x = np.asarray(x, dtype=float)
        flux = self.fluxes(x)
        net = flux @ self.net_change
        gross = flux @ np.abs(self.net_change)
        with np.errstate(invalid="ignore", divide="ignore"):
            rel = np.where(gross > 0, np.abs(net) / np.where(gross > 0, gross, 1.0), 0.0)
        return float(rel.max()) if rel.size else 0.0

    def jacobian(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        R, n = self.reactant.shape
        dflux = np.zeros((R, n))
        for j in range(n):
            e = self.reactant[:, j]
            powers = np.power(x[None, :], self.reactant)
            powers[:, j] = np.where(e > 0, e * np.power(x[j], np.maximum(e - 1, 0)), 0.0)
            dflux[:, j] = self.rates * np.prod(powers, axis=1)
        return self.net_change.T @ dflux

    def identically_zero(self, i: int) -> bool:
        """Does the i-th component of the field cancel symbolically?"""
        acc: dict[tuple, float] = {}
        for r in range(self.reactant.shape[0]):
            c = self.net_change[r, i]
            if c != 0:
                key = tuple(self.reactant[r])
                acc[key] = acc.get(key, 0.0) + self.rates[r] * c
        return all(abs(v) <= 1e-14 * max(1.0, float(np.max(self.rates))) for v in acc.values())


def _as_ode(sys) -> OdeSystem:
    return sys if isinstance(sys, OdeSystem) else OdeSystem(sys)


def _checked_state(x, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise ValueError(f"expected a state of length {n}, got shape {x.shape}")
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise ValueError("concentrations must be finite and nonnegative")
    return x


def rhs(sys, x) -> np.ndarray:
    """Mass-action field ``sum_r k_r x^{y_r} (y'_r - y_r)``."""
    ode = _as_ode(sys)
    return ode(_checked_state(x, ode.network.n_species))


def jacobian(sys, x) -> np.ndarray:
    ode = _as_ode(sys)
    return ode.jacobian(_checked_state(x, ode.network.n_species))


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    status: str
    species: tuple[str, ...]

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("t",) + tuple(self.species))
        for t, row in zip(self.times, self.states):
            w.writerow([f"{t:.17g}"] + [f"{v:.17g}" for v in row])
        return buf.getvalue()

    def conservation_drift(self, laws) -> float:
        """Largest relative change of ``w . x`` over the trajectory."""
        worst = 0.0
        for w in laws:
            w = np.array([float(v) for v in w])
            vals = self.states @ w
            ref = abs(vals[0])
            if ref == 0:
                ref = np.abs(self.states[0]) @ np.abs(w) or 1.0
            worst = max(worst, float(np.max(np.abs(vals - vals[0]))) / ref)
        return worst


def integrate(
    sys,
    x0,
    t_end: float,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    max_step: float = np.inf,
    guard: float = DEFAULT_GUARD,
    max_steps: int = 2_000_000,
) -> Trajectory:
    """Adaptive Dormand-Prince 5(4) solution from ``x0`` over ``[0, t_end]``.

    Status is ``diverged`` once a component exceeds ``guard`` and
    ``step-failure`` if the step size underflows; neither raises.
    """
    ode = _as_ode(sys)
    x0 = _checked_state(x0, ode.network.n_species)
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    ts, xs, _, status = _kernels.dopri5(
        x0.copy(), float(t_end), ode.rates, ode.reactant, ode.net_change,
        float(rtol), float(atol), float(max_step), float(guard), int(max_steps), 0.0,
    )
    return Trajectory(ts, xs, STATUS_NAMES[status], ode.network.species_names)


@dataclass(frozen=True)
class SteadyStateRecord:
    x: np.ndarray
    residual: float
    anchor: np.ndarray
    stability: str
    eigenvalues: np.ndarray


def _stability_label(eigs: np.ndarray, scale: float) -> str:
    if eigs.size == 0:
        return "center/inconclusive"
    eps = STABILITY_EPS * scale
    re = eigs.real
    if np.all(re < -eps):
        return "attracting"
    if np.any(re > eps):
        return "saddle" if np.any(re < -eps) else "repelling"
    return "center/inconclusive"


def restricted_eigenvalues(sys, x) -> np.ndarray:
    """Eigenvalues of the Jacobian restricted to the stoichiometric subspace."""
    ode = _as_ode(sys)
    Q = stoichiometric_frame(ode.network).span
    J = ode.jacobian(np.asarray(x, dtype=float))
    eigs = np.linalg.eigvals(Q.T @ J @ Q) if Q.shape[1] else np.zeros(0)
    return np.sort_complex(eigs)


def classify_stability(sys, record) -> str:
    x = record.x if isinstance(record, SteadyStateRecord) else np.asarray(record, dtype=float)
    return _stability_label(restricted_eigenvalues(sys, x), scale_of(x))


def find_steady_state(
    sys,
    anchor,
    start=None,
    tol: float = STEADY_TOL,
    max_iter: int = 200,
    max_halvings: int = 50,
    rng: np.random.Generator | None = None,
    restarts: int = 6,
) -> SteadyStateRecord | None:
    """Damped Newton for a positive steady state in the class of ``anchor``.

    Solves ``Q^T f(x) = 0`` together with ``W (x - anchor) = 0`` where the
    columns of ``Q`` span S and the rows of ``W`` span its complement.
    ``start`` (default: the anchor) must lie in the same class.  On failure
    the same iteration is rerun in log coordinates, then from three points on
    each of ``restarts`` random lines through the class, reaching 10, 100
    and 1000 times the start's scale, before giving up.
    """
    ode = _as_ode(sys)
    anchor = np.asarray(anchor, dtype=float)
    if np.any(anchor <= 0):
        raise ValueError("anchor must be positive")
    x = anchor.copy() if start is None else np.asarray(start, dtype=float).copy()
    for log in (False, True):
        rec = _newton(ode, anchor, x, tol, max_iter, max_halvings, log)
        if rec is not None:
            return rec
    rng = rng if rng is not None else np.random.default_rng(0)
    Q = stoichiometric_frame(ode.network).span
    if Q.shape[1] == 0:
        return None
    for r in range(restarts):
        d = Q @ rng.normal(size=Q.shape[1])
        d /= np.linalg.norm(d)
        # reach out a decade further on each restart
        lo, hi = segment_in_orthant(x, d, cap=10.0 ** (1 + r % 3) * scale_of(x))
        for frac in (0.2, 0.5, 0.8):
            y = x + (lo + frac * (hi - lo)) * d
            if not np.all(y > 0):
                continue
            for log in (False, True):
                rec = _newton(ode, anchor, y, tol, max_iter, max_halvings, log)
                if rec is not None:
                    return rec
    return None


def segment_in_orthant(x, d, cap: float = np.inf) -> tuple[float, float]:
    """Range of ``t`` keeping ``x + t d`` nonnegative, clipped to ``[-cap, cap]``."""
    lo, hi = -cap, cap
    for xi, di in zip(x, d):
        if di > 0:
            lo = max(lo, -xi / di)
        elif di < 0:
            hi = min(hi, -xi / di)
    return lo, hi


def find_positive_zero(sys, start, tol: float = STEADY_TOL, max_iter: int = 200,
                       max_halvings: int = 50) -> SteadyStateRecord | None:
    """Damped minimum-norm Newton on ``f(x) = 0`` alone, ignoring classes.

    Lands on whatever positive steady state is nearest in the Newton sense,
    which reaches classes that carry no steady state for most anchors.
    The record's anchor is the steady state itself.
    """
    ode = _as_ode(sys)
    x = np.asarray(start, dtype=float).copy()
    return (_newton(ode, None, x, tol, max_iter, max_halvings)
            or _newton(ode, None, x, tol, max_iter, max_halvings, log=True))


def _newton(ode: OdeSystem, anchor, x, tol, max_iter, max_halvings, log=False):
    """Run the compiled Newton iteration and vet the result.

    ``anchor=None`` drops the class constraint.  The result must be finite,
    strictly positive, small in absolute and relative residual, and (when
    constrained) on the anchor's conservation values.
    """
    n = ode.network.n_species
    free = anchor is None
    if free:
        Q, W, target = np.eye(n), np.zeros((0, n)), np.zeros(0)
    else:
        frame = stoichiometric_frame(ode.network)
        Q, W = frame.span, frame.complement
        target = W @ anchor
    if np.any(x <= 0) or not np.all(np.isfinite(x)):
        return None
    x = _kernels.newton(
        np.ascontiguousarray(x, dtype=float), ode.rates, ode.reactant, ode.net_change,
        np.ascontiguousarray(Q), np.ascontiguousarray(W), target,
        float(tol), int(max_iter), int(max_halvings), bool(log),
    )
    if not np.all(np.isfinite(x)):
        return None
    residual = float(np.max(np.abs(ode(x))))
    scale = scale_of(x)
    if residual > tol * scale:
        return None
    if np.min(x) <= 1e-9 * scale or ode.relative_residual(x) > 1e-6:
        return None
    if target.size:
        drift = float(np.max(np.abs(W @ x - target)))
        if drift > 1e-10 * max(1.0, float(np.max(np.abs(target)))):
            return None
    eigs = restricted_eigenvalues(ode, x)
    anchor = x.copy() if free else anchor.copy()
    return SteadyStateRecord(x, residual, anchor, _stability_label(eigs, scale), eigs)
