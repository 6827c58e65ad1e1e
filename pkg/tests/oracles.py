"""Independent numerical oracles used to validate the solvers.

Everything here deliberately avoids the library's own relaxation/Newton
machinery: periodic ground actions come from exhaustive grid scans with
local refinement, and connection actions come from shooting on the
stationarity recurrence with bisection.  Agreement between these and the
package is the point of the tests that import them.
"""

from __future__ import annotations

import math

import numpy as np

from twistvar import GeneratingFunction


# ---------------------------------------------------------------------------
# brute-force periodic ground action
# ---------------------------------------------------------------------------


def _refine(fun, point, half, rounds=6, pts=11):
    """Iteratively shrink a grid box around the best point of `fun`."""
    best = np.asarray(point, dtype=float)
    for _ in range(rounds):
        axes = [np.linspace(b - half, b + half, pts) for b in best]
        mesh = np.meshgrid(*axes, indexing="ij")
        vals = fun(*mesh)
        idx = np.unravel_index(np.argmin(vals), vals.shape)
        best = np.array([ax[i] for ax, i in zip(axes, idx)])
        half *= 2.0 / (pts - 1)
    return float(fun(*[np.asarray([b]) for b in best])[0]), best


def dp_periodic_action(h: GeneratingFunction, p: int, q: int) -> float:
    """Exhaustive-scan minimal action of type (p, q), q <= 3.

    Scans a box that contains the ordered minimizer (gaps of a minimal
    configuration of type (p, q) lie within one period), then refines the
    best cell until the grid error is far below 1e-5.
    """
    if q == 1:
        def fun(x0):
            return h(x0, x0 + p)

        grid = np.linspace(0.0, 1.0, 4096, endpoint=False)
        best = grid[np.argmin(fun(grid))]
        value, _ = _refine(fun, (best,), 2.0 / 4096)
        return value

    if q == 2:
        def fun(x0, x1):
            return h(x0, x1) + h(x1, x0 + p)

        m = 192
        g0 = np.linspace(0.0, 1.0, m, endpoint=False)
        g1 = np.linspace(-1.0, 2.0, 3 * m, endpoint=False)
        a0, a1 = np.meshgrid(g0, g1, indexing="ij")
        vals = fun(a0, a1)
        i, j = np.unravel_index(np.argmin(vals), vals.shape)
        value, _ = _refine(fun, (g0[i], g1[j]), 2.0 / m)
        return value

    if q == 3:
        def fun(x0, x1, x2):
            return h(x0, x1) + h(x1, x2) + h(x2, x0 + p)

        m = 48
        g0 = np.linspace(0.0, 1.0, m, endpoint=False)
        g1 = np.linspace(-1.0, 2.0, 3 * m, endpoint=False)
        a0, a1, a2 = np.meshgrid(g0, g1, g1, indexing="ij")
        vals = fun(a0, a1, a2)
        i, j, k = np.unravel_index(np.argmin(vals), vals.shape)
        value, _ = _refine(fun, (g0[i], g1[j], g1[k]), 2.0 / m)
        return value

    raise ValueError(f"oracle supports q <= 3, got q={q}")


# ---------------------------------------------------------------------------
# shooting oracle for increasing 0 -> 1 connections
# ---------------------------------------------------------------------------


def _vprime(h: GeneratingFunction, t: float) -> float:
    # For h(x, x') = (x - x')^2 / 2 + V(x'): d2(t, t) = V'(t).
    return float(h.d2(t, t))


def _pair_action(h: GeneratingFunction, x: float, y: float) -> float:
    return float(h(x, y))


def _shoot_right(h: GeneratingFunction, xi: float) -> float:
    """Action of the minimal increasing tail from xi up to 1 (shooting)."""

    def classify(gap: float) -> int:
        # +1: overshoots 1 (gap too large), -1: stalls (too small)
        x_prev, x = xi, xi + gap
        for _ in range(2000):
            if x > 1.0:
                return 1
            x_next = 2.0 * x - x_prev + _vprime(h, x)
            if x_next - x <= 0.0:
                return -1
            x_prev, x = x, x_next
        return -1  # never overshot: treat as stalled

    lo, hi = 1e-300, 1.0 - xi + 1e-9
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if classify(mid) > 0:
            hi = mid
        else:
            lo = mid
    gap = 0.5 * (lo + hi)

    total = 0.0
    x_prev, x = xi, xi + gap
    last_term = math.inf
    for _ in range(5000):
        term = _pair_action(h, x_prev, x)
        in_tail = 1.0 - x < 1e-6
        if x > 1.0 or x <= x_prev or (in_tail and term > last_term):
            break  # shooting noise dominates: true remainder is negligible
        total += term
        last_term = term
        if term < 1e-18 and 1.0 - x < 1e-9:
            break
        x_prev, x = x, 2.0 * x - x_prev + _vprime(h, x)
    return total


def _shoot_left(h: GeneratingFunction, xi: float) -> float:
    """Action of the minimal increasing tail from 0 up to xi (shooting)."""

    def classify(gap: float) -> int:
        x_next, x = xi, xi - gap
        for _ in range(2000):
            if x < 0.0:
                return 1
            x_prev = 2.0 * x - x_next + _vprime(h, x)
            if x - x_prev <= 0.0:
                return -1
            x_next, x = x, x_prev
        return -1

    lo, hi = 1e-300, xi + 1e-9
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if classify(mid) > 0:
            hi = mid
        else:
            lo = mid
    gap = 0.5 * (lo + hi)

    total = 0.0
    x_next, x = xi, xi - gap
    last_term = math.inf
    for _ in range(5000):
        term = _pair_action(h, x, x_next)
        in_tail = x < 1e-6
        if x < 0.0 or x >= x_next or (in_tail and term > last_term):
            break
        total += term
        last_term = term
        if term < 1e-18 and x < 1e-9:
            break
        x_next, x = x, 2.0 * x - x_next + _vprime(h, x)
    return total


def shooting_connection_action(h: GeneratingFunction, xi: float) -> float:
    """K(xi): minimal action of increasing 0 -> 1 configurations through xi."""
    return _shoot_left(h, xi) + _shoot_right(h, xi)


def shooting_zero_plus(h: GeneratingFunction, xi: float) -> float:
    """Shooting-method value of the 0+ barrier at xi: K(xi) - min K."""
    grid = np.linspace(0.02, 0.98, 49)
    values = [shooting_connection_action(h, float(g)) for g in grid]
    i = int(np.argmin(values))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    # golden-section refinement of the free minimum
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc = shooting_connection_action(h, c)
    fd = shooting_connection_action(h, d)
    for _ in range(60):
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = shooting_connection_action(h, c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = shooting_connection_action(h, d)
    free = min(fc, fd, min(values))
    return max(shooting_connection_action(h, xi) - free, 0.0)


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------


def fd_interior_gradient(h: GeneratingFunction, x: np.ndarray, step: float = 1e-6) -> np.ndarray:
    """Centered finite-difference gradient of the segment action at interior sites."""

    def segment_action(vals: np.ndarray) -> float:
        return float(np.sum(h(vals[:-1], vals[1:])))

    grads = []
    for i in range(1, len(x) - 1):
        up = x.copy()
        dn = x.copy()
        up[i] += step
        dn[i] -= step
        grads.append((segment_action(up) - segment_action(dn)) / (2.0 * step))
    return np.asarray(grads)


def fd_jacobian(step_fun, x: float, y: float, eps: float = 1e-6) -> np.ndarray:
    """Finite-difference Jacobian of a plane map (x, y) -> (x', y')."""
    fxp = np.asarray(step_fun(x + eps, y))
    fxm = np.asarray(step_fun(x - eps, y))
    fyp = np.asarray(step_fun(x, y + eps))
    fym = np.asarray(step_fun(x, y - eps))
    return np.column_stack(((fxp - fxm) / (2 * eps), (fyp - fym) / (2 * eps)))
