"""Compiled inner loops: mass-action field and Dormand-Prince 5(4) stepping."""

from __future__ import annotations

import numpy as np
from numba import njit

STATUS_COMPLETED = 0
STATUS_DIVERGED = 1
STATUS_STEP_FAILURE = 2

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
# fifth-order minus embedded fourth-order weights
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)


@njit(cache=True)
def mass_action_rhs(x, rates, reactant, net, out):
    n = x.shape[0]
    for s in range(n):
        out[s] = 0.0
    for r in range(rates.shape[0]):
        flux = rates[r]
        for s in range(n):
            e = reactant[r, s]
            if e == 1:
                flux *= x[s]
            elif e > 1:
                flux *= x[s] ** e
        for s in range(n):
            out[s] += flux * net[r, s]


@njit(cache=True)
def _err_norm(y, ynew, err, rtol, atol):
    acc = 0.0
    n = y.shape[0]
    for s in range(n):
        sc = atol + rtol * max(abs(y[s]), abs(ynew[s]))
        q = err[s] / sc
        acc += q * q
    return np.sqrt(acc / n)


@njit(cache=True)
def dopri5(x0, t_end, rates, reactant, net, rtol, atol, max_step, guard, max_steps, h0):
    """Integrate from t=0 to ``t_end``; returns ``(times, states, count, status)``.

    Every accepted step is recorded.  Steps that would push a component
    below ``-atol`` are rejected, tiny negatives are clipped to zero.
    """
    n = x0.shape[0]
    cap = 1024
    ts = np.empty(cap)
    xs = np.empty((cap, n))
    ts[0] = 0.0
    xs[0, :] = x0
    count = 1

    y = x0.copy()
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    k5 = np.empty(n)
    k6 = np.empty(n)
    k7 = np.empty(n)
    tmp = np.empty(n)
    ynew = np.empty(n)
    err = np.empty(n)

    mass_action_rhs(y, rates, reactant, net, k1)
    t = 0.0
    h = h0
    if h <= 0.0:
        d0 = 0.0
        d1 = 0.0
        for s in range(n):
            sc = atol + rtol * abs(y[s])
            d0 += (y[s] / sc) ** 2
            d1 += (k1[s] / sc) ** 2
        d0 = np.sqrt(d0 / n)
        d1 = np.sqrt(d1 / n)
        if d0 < 1e-5 or d1 < 1e-5:
            h = 1e-6
        else:
            h = 0.01 * d0 / d1
    h = min(h, max_step, t_end)
    status = STATUS_COMPLETED
    steps = 0
    while t < t_end:
        if steps >= max_steps:
            status = STATUS_STEP_FAILURE
            break
        steps += 1
        if t + h > t_end:
            h = t_end - t
        if h < 1e-14 * max(1.0, abs(t)):
            status = STATUS_STEP_FAILURE
            break
        for s in range(n):
            tmp[s] = y[s] + h * _A21 * k1[s]
        mass_action_rhs(tmp, rates, reactant, net, k2)
        for s in range(n):
            tmp[s] = y[s] + h * (_A31 * k1[s] + _A32 * k2[s])
        mass_action_rhs(tmp, rates, reactant, net, k3)
        for s in range(n):
            tmp[s] = y[s] + h * (_A41 * k1[s] + _A42 * k2[s] + _A43 * k3[s])
        mass_action_rhs(tmp, rates, reactant, net, k4)
        for s in range(n):
            tmp[s] = y[s] + h * (_A51 * k1[s] + _A52 * k2[s] + _A53 * k3[s] + _A54 * k4[s])
        mass_action_rhs(tmp, rates, reactant, net, k5)
        for s in range(n):
            tmp[s] = y[s] + h * (_A61 * k1[s] + _A62 * k2[s] + _A63 * k3[s]
                                 + _A64 * k4[s] + _A65 * k5[s])
        mass_action_rhs(tmp, rates, reactant, net, k6)
        for s in range(n):
            ynew[s] = y[s] + h * (_B1 * k1[s] + _B3 * k3[s] + _B4 * k4[s]
                                  + _B5 * k5[s] + _B6 * k6[s])
        mass_action_rhs(ynew, rates, reactant, net, k7)
        for s in range(n):
            err[s] = h * (_E1 * k1[s] + _E3 * k3[s] + _E4 * k4[s]
                          + _E5 * k5[s] + _E6 * k6[s] + _E7 * k7[s])
        en = _err_norm(y, ynew, err, rtol, atol)
        finite = np.isfinite(en)
        negative = False
        for s in range(n):
            if not np.isfinite(ynew[s]):
                finite = False
            elif ynew[s] < -atol:
                negative = True
        if not finite:
            h *= 0.25
            continue
        if en <= 1.0 and not negative:
            t = t + h
            for s in range(n):
                y[s] = ynew[s] if ynew[s] > 0.0 else 0.0
                k1[s] = k7[s]
            # clipping changed y, so FSAL derivative must be refreshed
            for s in range(n):
                if ynew[s] < 0.0:
                    mass_action_rhs(y, rates, reactant, net, k1)
                    break
            if count == cap:
                cap *= 2
                ts2 = np.empty(cap)
                xs2 = np.empty((cap, n))
                ts2[:count] = ts[:count]
                xs2[:count, :] = xs[:count, :]
                ts = ts2
                xs = xs2
            ts[count] = t
            xs[count, :] = y
            count += 1
            big = False
            for s in range(n):
                if y[s] > guard:
                    big = True
            if big:
                status = STATUS_DIVERGED
                break
            fac = 5.0 if en == 0.0 else min(5.0, max(0.2, 0.9 * en ** -0.2))
            h = min(h * fac, max_step)
        else:
            if negative and en <= 1.0:
                h *= 0.5
            else:
                h *= max(0.2, 0.9 * en ** -0.2)
    return ts[:count].copy(), xs[:count, :].copy(), count, status


@njit(cache=True)
def mass_action_jacobian(x, rates, reactant, net, out):
    n = x.shape[0]
    for a in range(n):
        for b in range(n):
            out[a, b] = 0.0
    for r in range(rates.shape[0]):
        for j in range(n):
            e = reactant[r, j]
            if e == 0:
                continue
            d = rates[r] * e
            if e > 1:
                d *= x[j] ** (e - 1)
            for s in range(n):
                if s != j:
                    es = reactant[r, s]
                    if es == 1:
                        d *= x[s]
                    elif es > 1:
                        d *= x[s] ** es
            for s in range(n):
                out[s, j] += net[r, s] * d


@njit(cache=True)
def _newton_residual(x, rates, reactant, net, Q, W, target, f, F):
    mass_action_rhs(x, rates, reactant, net, f)
    m = Q.shape[1]
    for a in range(m):
        acc = 0.0
        for s in range(x.shape[0]):
            acc += Q[s, a] * f[s]
        F[a] = acc
    for b in range(W.shape[0]):
        acc = -target[b]
        for s in range(x.shape[0]):
            acc += W[b, s] * x[s]
        F[m + b] = acc
    return np.sqrt(np.sum(F * F))


@njit(cache=True)
def newton(x0, rates, reactant, net, Q, W, target, tol, max_iter, max_halvings, log_coords):
    """Damped minimum-norm Newton on ``[Q^T f(x); W x - target] = 0``.

    Returns the final iterate.  Iteration stops once a step cannot reduce
    the residual, when the iterate slides onto the boundary, or 30
    polishing steps after ``|f|_inf <= tol * scale``.
    """
    n = x0.shape[0]
    m = Q.shape[1] + W.shape[0]
    x = x0.copy()
    y = np.empty(n)
    f = np.empty(n)
    F = np.empty(m)
    Fy = np.empty(m)
    J = np.empty((n, n))
    JF = np.empty((m, n))
    nF = _newton_residual(x, rates, reactant, net, Q, W, target, f, F)
    converged = False
    polish = 0
    for _ in range(max_iter):
        mass_action_rhs(x, rates, reactant, net, f)
        scale = max(1.0, np.max(np.abs(x)))
        if not converged and np.max(np.abs(f)) <= tol * scale:
            converged = True
        if converged:
            polish += 1
            if polish > 30 or nF == 0.0:
                break
        mass_action_jacobian(x, rates, reactant, net, J)
        JF[: Q.shape[1], :] = Q.T @ J
        JF[Q.shape[1]:, :] = W
        if log_coords:
            for b in range(n):
                JF[:, b] *= x[b]
        step = np.linalg.lstsq(JF, -F)[0]
        lam = 1.0
        accepted = False
        for _ in range(max_halvings):
            ok = True
            for s in range(n):
                if log_coords:
                    u = lam * step[s]
                    u = min(50.0, max(-50.0, u))
                    y[s] = x[s] * np.exp(u)
                else:
                    y[s] = x[s] + lam * step[s]
                if not (y[s] > 0.0) or not np.isfinite(y[s]):
                    ok = False
            if ok:
                nFy = _newton_residual(y, rates, reactant, net, Q, W, target, f, Fy)
                if nFy < nF:
                    accepted = True
                    break
            lam *= 0.5
        if not accepted:
            break
        x[:] = y
        F[:] = Fy
        nF = nFy
        if np.min(x) <= 1e-10 * max(1.0, np.max(np.abs(x))):
            break
    return x
