"""Minimal and stationary configurations for monotone twist maps.

A configuration is a bi-infinite (here: windowed) sequence (x_i) of lifted
angles; its action over a window is sum h(x_i, x_{i+1}).  Stationary
configurations solve d1 h(x_i, x_{i+1}) + d2 h(x_{i-1}, x_i) = 0 at every
free site, and minimal ones minimize the action against all compactly
supported perturbations.  This module computes three kinds:

  * periodic configurations of type (p, q):  x_{i+q} = x_i + p;
  * pinned chains: both ends (and optionally interior sites) held fixed;
  * advancing / retreating connections between a minimal periodic
    configuration and its unit translate, the raw material for barrier
    computations.

The solver is a projected nonlinear Gauss-Seidel sweep (vectorised over an
independent colour class, each site solved by a safeguarded 1-d Newton step
with a sampling fallback where the local problem loses convexity) followed
by a damped global Newton polish on the tridiagonal (or cyclic) Hessian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import solve_banded

from .generating import GeneratingFunction, TwistFamilyError

__all__ = [
    "Configuration",
    "DegenerateSymbolError",
    "Heteroclinic01",
    "Periodic",
    "PinnedEnds",
    "SolveReport",
    "SolverError",
    "action",
    "count_in_interval",
    "crossing_count",
    "minimize_advancing",
    "minimize_periodic",
    "rotation_number",
    "spacing_profile",
    "stationarity_residual",
]

_RESIDUAL_TOL = 1e-11
_SWITCH_TOL = 10.0
_TAIL_TOL = 1e-9
_DEGENERACY_ACTION_TOL = 1e-9
_CANONICAL_DECIMALS = 8
_PROBE_PHASES = (0.17, 0.55, 0.86)


class SolverError(RuntimeError):
    """A variational solve failed to converge or was ill-posed."""


class DegenerateSymbolError(SolverError):
    """The rotation symbol does not select an isolated minimal orbit.

    Raised when several genuinely distinct periodic configurations share the
    minimal action (the integrable shear is the canonical offender: every
    phase of the rotation is minimal).  Connection-based barrier variants
    are undefined in this situation.
    """


# ---------------------------------------------------------------------------
# boundary descriptors and configurations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Periodic:
    """Type-(p, q) closure: x_{i+q} = x_i + p, gcd-reduced, q >= 1."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 1:
            raise TwistFamilyError(f"period q must be >= 1, got {self.q}")
        if math.gcd(abs(self.p), self.q) != 1:
            raise TwistFamilyError(f"rotation {self.p}/{self.q} is not in lowest terms")


@dataclass(frozen=True)
class PinnedEnds:
    """Open chain with both end values held fixed."""

    left: float
    right: float


@dataclass(frozen=True)
class Heteroclinic01:
    """Connection between a (p, q) minimal configuration and its +1 translate.

    direction "+" runs from the orbit up to orbit + 1 (advancing);
    direction "-" runs from orbit + 1 down to the orbit (retreating).
    """

    p: int
    q: int
    direction: str = "+"

    def __post_init__(self) -> None:
        if self.direction not in ("+", "-"):
            raise TwistFamilyError(f"direction must be '+' or '-', got {self.direction!r}")
        Periodic(self.p, self.q)  # validates the symbol


@dataclass
class Configuration:
    """A windowed configuration: lifted values plus its boundary contract."""

    x: np.ndarray
    boundary: Periodic | PinnedEnds | Heteroclinic01
    first_index: int = 0

    def __post_init__(self) -> None:
        self.x = np.asarray(self.x, dtype=float)
        if isinstance(self.boundary, Periodic) and len(self.x) != self.boundary.q:
            raise TwistFamilyError(
                f"periodic configuration of type (p,q)=({self.boundary.p},{self.boundary.q}) "
                f"needs exactly q={self.boundary.q} values, got {len(self.x)}"
            )

    def __len__(self) -> int:
        return len(self.x)

    def fractional(self) -> np.ndarray:
        return np.mod(self.x, 1.0)


@dataclass
class SolveReport:
    """What the solver did and how well it finished."""

    converged: bool
    sweeps: int
    newton_steps: int
    residual: float
    action: float
    message: str = ""


# ---------------------------------------------------------------------------
# action, residual, and elementary observables
# ---------------------------------------------------------------------------


def _values_and_boundary(config, boundary):
    if isinstance(config, Configuration):
        return config.x, config.boundary
    return np.asarray(config, dtype=float), boundary


def action(h: GeneratingFunction, config, boundary=None) -> float:
    """Window action sum h(x_i, x_{i+1}); periodic types close the loop."""
    x, bc = _values_and_boundary(config, boundary)
    if isinstance(bc, Periodic):
        xs = np.append(x, x[0] + bc.p)
        return float(np.sum(h(xs[:-1], xs[1:])))
    return float(np.sum(h(x[:-1], x[1:])))


def stationarity_residual(h: GeneratingFunction, config, boundary=None) -> np.ndarray:
    """Gradient of the action at each site that has both neighbours.

    Entry i is d1 h(x_i, x_{i+1}) + d2 h(x_{i-1}, x_i).  For periodic
    configurations every site has wrapped neighbours; for open chains the
    two end entries are reported as 0 (they are boundary data, not
    variables).  A pinned interior site's entry is its genuine one-sided
    force, which is exactly the quantity barrier computations differentiate.
    """
    x, bc = _values_and_boundary(config, boundary)
    if isinstance(bc, Periodic):
        xs = np.concatenate(([x[-1] - bc.p], x, [x[0] + bc.p]))
        return np.asarray(h.d1(xs[1:-1], xs[2:]) + h.d2(xs[:-2], xs[1:-1]), dtype=float)
    if len(x) < 3:
        raise TwistFamilyError(
            f"stationarity residual needs at least 3 values on an open chain, got {len(x)}"
        )
    out = np.zeros_like(x)
    out[1:-1] = h.d1(x[1:-1], x[2:]) + h.d2(x[:-2], x[1:-1])
    return out


def rotation_number(config, boundary=None) -> float:
    """Mean advance per step: exact p/q for periodic types, endpoint slope else.

    Heteroclinic connections report the measured endpoint slope of the
    truncated window (which tends to 0 like 1/length for the symbols used
    here), not the rational symbol of the orbits they join.
    """
    x, bc = _values_and_boundary(config, boundary)
    if isinstance(bc, Periodic):
        return bc.p / bc.q
    if len(x) < 10:
        raise TwistFamilyError(
            f"rotation number needs at least 10 values on a non-periodic window, got {len(x)}"
        )
    return float(x[-1] - x[0]) / (len(x) - 1)


def spacing_profile(config, boundary=None, window=None) -> np.ndarray:
    """Rows (x_i, x_{i+1} - x_i); periodic types wrap, giving q rows.

    `window` = (lo, hi) keeps only rows whose left point satisfies
    lo <= x_i <= hi.
    """
    x, bc = _values_and_boundary(config, boundary)
    if isinstance(bc, Periodic):
        xs = np.append(x, x[0] + bc.p)
    else:
        xs = x
    rows = np.column_stack((xs[:-1], np.diff(xs)))
    if window is not None:
        lo, hi = float(window[0]), float(window[1])
        rows = rows[(rows[:, 0] >= lo) & (rows[:, 0] <= hi)]
    return rows


def crossing_count(a, b) -> int:
    """Number of sign changes of a - b (configurations cross where it flips).

    Exact ties are compressed out before counting, so a tangency that does
    not change sign is not a crossing.
    """
    xa, _ = _values_and_boundary(a, None)
    xb, _ = _values_and_boundary(b, None)
    if len(xa) != len(xb):
        raise TwistFamilyError(f"length mismatch: {len(xa)} vs {len(xb)}")
    d = xa - xb
    signs = np.sign(d)
    signs = signs[signs != 0]
    if len(signs) < 2:
        return 0
    return int(np.count_nonzero(np.diff(signs) != 0))


def count_in_interval(config, interval) -> int:
    """How many sites have fractional part in [lo, hi), interval=(lo, hi)."""
    lo, hi = float(interval[0]), float(interval[1])
    x, _ = _values_and_boundary(config, None)
    frac = np.mod(x, 1.0)
    return int(np.count_nonzero((frac >= lo) & (frac < hi)))


# ---------------------------------------------------------------------------
# pinned-chain solver
# ---------------------------------------------------------------------------


def _chain_residual(h, x, free):
    """Action gradient along an open chain; one-sided at a free final site."""
    r = np.zeros_like(x)
    r[1:-1] = h.d1(x[1:-1], x[2:]) + h.d2(x[:-2], x[1:-1])
    if free[-1]:
        r[-1] = float(h.d2(x[-2], x[-1]))
    return r


def _projected_gradient(h, x, free, lo, hi):
    """Residual at free sites with box-KKT screening; max-norm and vector."""
    r = _chain_residual(h, x, free)
    pg = np.where(free, r, 0.0)
    at_lo = free & (x <= lo + 1e-14)
    at_hi = free & (x >= hi - 1e-14)
    pg[at_lo] = np.minimum(pg[at_lo], 0.0)
    pg[at_hi] = np.maximum(pg[at_hi], 0.0)
    return r, pg


def _local_sweep(h, x, idx, lo, hi, monotone):
    """Vectorised single-site minimisation over one independent colour class."""
    if len(idx) == 0:
        return
    xm = x[idx - 1]
    xp = x[idx + 1]
    t = x[idx]
    l = np.maximum(lo[idx], np.minimum(xm, xp)) if monotone else lo[idx].copy()
    u = np.minimum(hi[idx], np.maximum(xm, xp)) if monotone else hi[idx].copy()
    swap = l > u
    if np.any(swap):
        l[swap] = lo[idx][swap]
        u[swap] = hi[idx][swap]
    for _ in range(2):
        g = h.d2(xm, t) + h.d1(t, xp)
        c = h.d22(xm, t) + h.d11(t, xp)
        convex = c > 0.2
        step = np.where(convex, g / np.where(convex, c, 1.0), 0.0)
        t = np.clip(t - step, l, u)
    c = h.d22(xm, t) + h.d11(t, xp)
    rough = c <= 0.2
    if np.any(rough):
        li, ui = l[rough], u[rough]
        samples = li[None, :] + (ui - li)[None, :] * np.linspace(0.0, 1.0, 9)[:, None]
        vals = h(xm[rough][None, :], samples) + h(samples, xp[rough][None, :])
        pick = np.argmin(vals, axis=0)
        t = t.copy()
        t[rough] = samples[pick, np.arange(len(pick))]
    x[idx] = t


def _update_right_end(h, x, lo, hi):
    """Single-site minimisation of h(x[-2], t) for a free final site."""
    xm = x[-2]
    t = x[-1]
    l, u = lo[-1], hi[-1]
    for _ in range(2):
        g = float(h.d2(xm, t))
        c = float(h.d22(xm, t))
        if c > 0.2:
            t = min(max(t - g / c, l), u)
    if float(h.d22(xm, t)) <= 0.2:
        samples = l + (u - l) * np.linspace(0.0, 1.0, 9)
        t = float(samples[np.argmin(h(xm, samples))])
    x[-1] = t


def _free_blocks(free):
    """Contiguous runs of True in the free mask, as (start, stop) pairs."""
    idx = np.flatnonzero(free)
    if len(idx) == 0:
        return []
    cuts = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate(([idx[0]], idx[cuts + 1]))
    stops = np.concatenate((idx[cuts] + 1, [idx[-1] + 1]))
    return list(zip(starts, stops))


def _newton_direction_chain(h, x, free, r, mu=0.0):
    """Block-tridiagonal Newton direction; pinned sites split the chain."""
    delta = np.zeros_like(x)
    for a, b in _free_blocks(free):
        n = b - a
        diag = h.d22(x[a - 1 : b - 1], x[a:b]) + mu
        if b < len(x):
            diag = diag + h.d11(x[a:b], x[a + 1 : b + 1])
        elif n > 1:
            diag[:-1] = diag[:-1] + h.d11(x[a : b - 1], x[a + 1 : b])
        ab = np.zeros((3, n))
        ab[1] = diag
        if n > 1:
            off = h.d12(x[a : b - 1], x[a + 1 : b])
            ab[0, 1:] = off
            ab[2, :-1] = off
        try:
            delta[a:b] = solve_banded((1, 1), ab, -r[a:b])
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(delta[a:b])):
            return None
    return delta


def _solve_chain(
    h: GeneratingFunction,
    x: np.ndarray,
    free: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
    *,
    monotone: bool = False,
    tol: float = _RESIDUAL_TOL,
    max_outer: int = 60,
    label: str = "chain",
) -> SolveReport:
    """Minimise the open-chain action over the free sites, in place.

    x carries the boundary/pinned values already; lo/hi are full-length box
    bounds (+-inf allowed).  Gauss-Seidel sweeps grind the iterate into the
    Newton basin, then damped Newton with a Levenberg fallback finishes to
    tolerance `tol` in the projected-gradient max-norm.
    """
    if free[0]:
        raise ValueError("open-chain solver requires a pinned first site")
    active = np.zeros_like(free)
    active[1:-1] = free[1:-1]
    active[-1] = free[-1]
    end_free = bool(free[-1])
    idx_int = np.flatnonzero(active[:-1])
    idx_all = np.flatnonzero(active)
    colours = [idx_int[idx_int % 2 == 0], idx_int[idx_int % 2 == 1]]
    sweeps = 0
    newton_steps = 0
    message = ""
    pg_max = np.inf
    for outer in range(max_outer):
        n_sw = 12 if outer == 0 else 4
        for _ in range(n_sw):
            for col in colours:
                _local_sweep(h, x, col, lo, hi, monotone)
            if end_free:
                _update_right_end(h, x, lo, hi)
            sweeps += 1
        r, pg = _projected_gradient(h, x, active, lo, hi)
        pg_max = float(np.max(np.abs(pg))) if len(idx_all) else 0.0
        if pg_max < tol:
            break
        if pg_max > _SWITCH_TOL:
            continue
        # Newton polish (backtracking and the Levenberg fallback make this
        # safe to attempt as soon as the sweeps have tamed the rough modes)
        act = action(h, x)
        mu = 0.0
        for _ in range(40):
            delta = _newton_direction_chain(h, x, active, r, mu)
            if delta is None:
                mu = 10.0 * mu if mu > 0 else 1e-6
                continue
            step = 1.0
            accepted = False
            for _ in range(15):
                xt = np.clip(x + step * delta, lo, hi)
                xt[~active] = x[~active]
                act_t = action(h, xt)
                rt, pgt = _projected_gradient(h, xt, active, lo, hi)
                pgt_max = float(np.max(np.abs(pgt))) if len(idx_all) else 0.0
                if act_t < act - 1e-15 or pgt_max < 0.7 * pg_max:
                    x[:] = xt
                    act, r, pg_max = act_t, rt, pgt_max
                    accepted = True
                    break
                step *= 0.5
            newton_steps += 1
            if not accepted:
                mu = 10.0 * mu if mu > 0 else 1e-6
                if mu > 1e6:
                    break
                continue
            mu = 0.0
            if pg_max < tol:
                break
        if pg_max < tol:
            break
    converged = pg_max < tol
    if not converged:
        message = f"{label}: projected gradient {pg_max:.3e} above tol {tol:.1e}"
    return SolveReport(
        converged=converged,
        sweeps=sweeps,
        newton_steps=newton_steps,
        residual=pg_max,
        action=action(h, x),
        message=message,
    )


# ---------------------------------------------------------------------------
# periodic solver
# ---------------------------------------------------------------------------


def _periodic_residual(h, x, p):
    xs = np.concatenate(([x[-1] - p], x, [x[0] + p]))
    return np.asarray(h.d1(xs[1:-1], xs[2:]) + h.d2(xs[:-2], xs[1:-1]), dtype=float)


def _periodic_hessian(h, x, p, q):
    """Edge-accumulated cyclic Hessian; exact for q = 1 and q = 2 as well."""
    xs = np.append(x, x[0] + p)
    H = np.zeros((q, q))
    for i in range(q):
        a, b = xs[i], xs[i + 1]
        j = (i + 1) % q
        H[i, i] += float(h.d11(a, b))
        H[j, j] += float(h.d22(a, b))
        H[i, j] += float(h.d12(a, b))
        H[j, i] += float(h.d12(a, b))
    return H


def _periodic_colours(q):
    if q <= 3:
        return [np.array([i]) for i in range(q)]
    if q % 2 == 0:
        return [np.arange(0, q, 2), np.arange(1, q, 2)]
    return [np.arange(0, q - 1, 2), np.arange(1, q - 1, 2), np.array([q - 1])]


def _periodic_sweep(h, x, p, q, idx, monotone=True):
    xm = x[(idx - 1) % q] - p * (idx == 0)
    xp = x[(idx + 1) % q] + p * (idx == q - 1)
    t = x[idx]
    if monotone:
        l = np.minimum(xm, xp)
        u = np.maximum(xm, xp)
    else:
        l = np.full_like(t, -np.inf)
        u = np.full_like(t, np.inf)
    for _ in range(2):
        g = h.d2(xm, t) + h.d1(t, xp)
        c = h.d22(xm, t) + h.d11(t, xp)
        convex = c > 0.2
        step = np.where(convex, g / np.where(convex, c, 1.0), 0.0)
        t = np.clip(t - step, l, u)
    c = h.d22(xm, t) + h.d11(t, xp)
    rough = c <= 0.2
    if np.any(rough):
        li, ui = l[rough], u[rough]
        bad = ~np.isfinite(li) | ~np.isfinite(ui)
        li = np.where(bad, t[rough] - 0.75, li)
        ui = np.where(bad, t[rough] + 0.75, ui)
        samples = li[None, :] + (ui - li)[None, :] * np.linspace(0.0, 1.0, 9)[:, None]
        vals = h(xm[rough][None, :], samples) + h(samples, xp[rough][None, :])
        pick = np.argmin(vals, axis=0)
        t = t.copy()
        t[rough] = samples[pick, np.arange(len(pick))]
    x[idx] = t


def _minimize_periodic_raw(h, p, q, x0, tol=_RESIDUAL_TOL, max_outer=80):
    """Descent to a stationary (p, q) configuration from the given start."""
    x = np.array(x0, dtype=float)
    if q == 1:
        from scipy.optimize import minimize_scalar

        # One degree of freedom: descend t -> h(t, t + p) from the given
        # phase by repeated bounded line searches (a global scan would erase
        # the multi-start structure the degeneracy probe relies on), then a
        # short Newton polish where the curvature allows it.
        t = float(x[0])
        for _ in range(12):
            fit = minimize_scalar(
                lambda s: float(h(s, s + p)),
                bounds=(t - 0.35, t + 0.35),
                method="bounded",
                options={"xatol": 1e-13},
            )
            t_new = float(fit.x)
            settled = abs(t_new - t) < 0.34
            t = t_new
            if settled:
                break
        for _ in range(8):
            g = float(h.d1(t, t + p) + h.d2(t, t + p))
            c = float(h.d11(t, t + p) + 2.0 * h.d12(t, t + p) + h.d22(t, t + p))
            if abs(g) < 1e-15 or c <= 1e-9:
                break
            t -= g / c
        x = np.array([t])
        r = _periodic_residual(h, x, p)
        res = float(np.max(np.abs(r)))
        return x, SolveReport(res < max(tol, 1e-10), 1, 1, res, action(h, x, Periodic(p, q)))
    colours = _periodic_colours(q)
    sweeps = 0
    newton_steps = 0
    res = np.inf
    bc = Periodic(p, q)
    for outer in range(max_outer):
        for _ in range(12 if outer == 0 else 4):
            for col in colours:
                _periodic_sweep(h, x, p, q, col)
            sweeps += 1
        r = _periodic_residual(h, x, p)
        res = float(np.max(np.abs(r)))
        if res < tol:
            break
        if res > _SWITCH_TOL:
            continue
        act = action(h, x, bc)
        mu = 0.0
        for _ in range(40):
            H = _periodic_hessian(h, x, p, q) + mu * np.eye(q)
            try:
                delta = np.linalg.solve(H, -r)
            except np.linalg.LinAlgError:
                delta = None
            if delta is None or not np.all(np.isfinite(delta)):
                mu = 10.0 * mu if mu > 0 else 1e-6
                continue
            step = 1.0
            accepted = False
            for _ in range(15):
                xt = x + step * delta
                act_t = action(h, xt, bc)
                rt = _periodic_residual(h, xt, p)
                res_t = float(np.max(np.abs(rt)))
                if act_t < act - 1e-15 or res_t < 0.7 * res:
                    x, act, r, res = xt, act_t, rt, res_t
                    accepted = True
                    break
                step *= 0.5
            newton_steps += 1
            if not accepted:
                mu = 10.0 * mu if mu > 0 else 1e-6
                if mu > 1e6:
                    break
                continue
            mu = 0.0
            if res < tol:
                break
        if res < tol:
            break
    return x, SolveReport(res < tol, sweeps, newton_steps, res, action(h, x, bc))


def _canonical_periodic(x, p, q, s: float = 1.0):
    """Representative modulo index rotation and translation by the symmetry step.

    `s` is the map's exact translation symmetry (1 for plain families,
    1/q after rescaling); configurations differing by a multiple of s are
    the same orbit and must canonicalise identically.
    """
    best_key = None
    best = None
    for j in range(q):
        y = np.array([x[(i + j) % q] + p * ((i + j) // q) for i in range(q)], dtype=float)
        y -= s * math.floor(y[0] / s + 1e-9)
        key = tuple(np.round(y, _CANONICAL_DECIMALS))
        if best_key is None or key < best_key:
            best_key, best = key, y
    return best, best_key


def _is_psd(H, scale_tol=1e-8):
    w = np.linalg.eigvalsh(H)
    return bool(w.min() >= -scale_tol * max(1.0, float(np.max(np.abs(H)))))


@lru_cache(maxsize=256)
def _periodic_minima(h: GeneratingFunction, p: int, q: int):
    """All distinct canonical stationary minima found from the probe phases.

    Returns a tuple of (canonical-key, action, canonical-values-tuple),
    sorted by action.  Cached: the probe is reused by every barrier call.

    A family with symmetry period s = 1/m is solved through its equivalent
    unit-period problem (potential upscaled by m, symbol multiplied by m
    and reduced): rigid-rotation probes relax reliably at unit period,
    whereas in the fine-well landscape they routinely lock onto false
    ground states.  The bijection x -> m x maps the minima back exactly.
    """
    s = h.symmetry_period
    if s < 1.0 - 1e-12:
        m = int(round(1.0 / s))
        H = h.upscaled(m)
        g = math.gcd(m * p, q) if p != 0 else q
        sub = _periodic_minima(H, (m * p) // g, q // g)
        q_sub = q // g
        found = {}
        for _, _, vals in sub:
            y = np.asarray(vals, dtype=float)
            i = np.arange(q)
            Y = y[np.mod(i, q_sub)] + ((m * p) // g) * np.floor_divide(i, q_sub)
            x, key = _canonical_periodic(Y / m, p, q, s)
            a = action(h, x, Periodic(p, q))
            if key not in found or a < found[key][0]:
                found[key] = (a, tuple(x))
        items = sorted(((a, key, vals) for key, (a, vals) in found.items()))
        a_min = items[0][0]
        return tuple(
            (key, a, vals) for a, key, vals in items if a <= a_min + _DEGENERACY_ACTION_TOL
        )
    found = {}
    for phase in _PROBE_PHASES:
        x0 = phase * s + np.arange(q) * (p / q)
        x, rep = _minimize_periodic_raw(h, p, q, x0)
        if not rep.converged and rep.residual > 1e-8:
            raise SolverError(
                f"periodic minimisation at {p}/{q} failed from phase {phase}: {rep.message}"
            )
        H = _periodic_hessian(h, x, p, q)
        if not _is_psd(H):
            # saddle: re-seed by perturbing along the most unstable mode
            w, v = np.linalg.eigh(H)
            x2 = x + 1e-3 * v[:, 0]
            x, rep = _minimize_periodic_raw(h, p, q, x2)
            H = _periodic_hessian(h, x, p, q)
            if not _is_psd(H):
                continue
        y, key = _canonical_periodic(x, p, q, s)
        a = action(h, y, Periodic(p, q))
        if key not in found or a < found[key][0]:
            found[key] = (a, tuple(y))
    if not found:
        raise SolverError(f"no periodic minimum found at {p}/{q}")
    items = sorted(((a, key, vals) for key, (a, vals) in found.items()))
    a_min = items[0][0]
    keep = tuple((key, a, vals) for a, key, vals in items if a <= a_min + _DEGENERACY_ACTION_TOL)
    return keep


def require_nondegenerate(h: GeneratingFunction, p: int, q: int) -> None:
    """Raise DegenerateSymbolError when the (p, q) ground state is not isolated.

    Two or more distinct canonical minima within the action tolerance mean
    the symbol's ground state is not unique up to translation, so the
    connection machinery (and hence every barrier built on it) has no
    well-defined background.  Integrable wells, rescaled potentials probed
    at integer symbols, and weakly locked resonances are all caught here.
    """
    minima = _periodic_minima(h, p, q)
    if len(minima) >= 2:
        raise DegenerateSymbolError(
            f"rotation symbol {p}/{q} is degenerate for {h.label}: "
            f"{len(minima)} distinct minimal configurations share the ground action"
        )


def minimize_periodic(
    h: GeneratingFunction,
    p: int,
    q: int,
    init=None,
    *,
    tol: float = _RESIDUAL_TOL,
) -> tuple[Configuration, SolveReport]:
    """Ground state of type (p, q): the minimal periodic configuration.

    Runs the solver from several deterministic phases, keeps the lowest
    action among positive-semidefinite stationary points, and returns the
    canonical representative (x_0 in [0, 1), lexicographically least index
    rotation).  An explicit `init` (q values) seeds the solver instead and
    the minimum reached from it is returned, still canonicalised.
    Degenerate symbols (several distinct ground states) do not raise here;
    they are reported honestly by the connection machinery.
    """
    h.require_twist()
    Periodic(p, q)
    if init is not None:
        x0 = np.asarray(init, dtype=float)
        if len(x0) != q:
            raise TwistFamilyError(f"init needs q={q} values, got {len(x0)}")
        x, rep = _minimize_periodic_raw(h, p, q, x0, tol=tol)
        if not rep.converged:
            raise SolverError(f"periodic minimisation at {p}/{q} from init failed: {rep.message}")
        y, _ = _canonical_periodic(x, p, q, h.symmetry_period)
        rep.action = action(h, y, Periodic(p, q))
        return Configuration(np.asarray(y), Periodic(p, q)), rep
    minima = _periodic_minima(h, p, q)
    key, a, vals = minima[0]
    x = np.array(vals, dtype=float)
    r = _periodic_residual(h, x, p)
    res = float(np.max(np.abs(r)))
    report = SolveReport(res < max(tol, 1e-9), 0, 0, res, a)
    return Configuration(x, Periodic(p, q)), report


# ---------------------------------------------------------------------------
# connections (advancing / retreating configurations)
# ---------------------------------------------------------------------------


def _orbit_lift(z: np.ndarray, p: int, q: int, shift: int, length: int) -> np.ndarray:
    """b_i = z_{(i+shift) mod q} + p * floor((i+shift)/q) for i = 0..length-1."""
    i = np.arange(length) + shift
    return z[np.mod(i, q)] + p * np.floor_divide(i, q)


def _orbit_multiplier(h: GeneratingFunction, z: np.ndarray, p: int, q: int) -> float:
    """Largest multiplier of the q-step linearised recurrence around the orbit.

    The variational equation along a stationary configuration reads
    d12(i) dx_{i+1} = -(d11(i) + d22(i-1)) dx_i - d12(i-1) dx_{i-1};
    the product of its one-step transfer matrices over one period has
    determinant 1, so hyperbolicity is |trace| > 2.
    """
    xs = np.append(z, z[0] + p)
    M = np.eye(2)
    log_scale = 0.0
    for i in range(q):
        b_cur = float(h.d12(xs[i], xs[i + 1]))
        diag = float(h.d22(xs[i - 1] if i > 0 else z[-1] - p, xs[i]) + h.d11(xs[i], xs[i + 1]))
        b_prev = float(h.d12(xs[i - 1] if i > 0 else z[-1] - p, xs[i]))
        T = np.array([[-diag / b_cur, -b_prev / b_cur], [1.0, 0.0]])
        M = T @ M
        # renormalise so long orbits in deep wells cannot overflow the product
        norm = float(np.max(np.abs(M)))
        if norm > 1e100:
            M /= norm
            log_scale += math.log(norm)
    tr = float(np.trace(M))
    if log_scale > 0.0:
        # |tr| >> 2: multiplier ~ |tr|, return it through a capped exponent
        log_lam = math.log(max(abs(tr), 1e-300)) + log_scale
        return math.exp(min(log_lam, 600.0))
    disc = (tr / 2.0) ** 2 - 1.0
    if disc <= 0:
        return 1.0
    return abs(tr) / 2.0 + math.sqrt(disc)


def _transition_span(h: GeneratingFunction, q: int) -> int:
    """Crude upper bound on how many sites an elementary advance occupies.

    On the separatrix the spacing obeys (x_{i+1} - x_{i-1})/2 >= sqrt(V),
    so summing 1/sqrt(V) across one well estimates the crossing time.  The
    well width is the family's symmetry period (1/q after rescaling), and
    the estimate is invariant under the exact rescaling identity.
    """
    xs = h.symmetry_period * np.linspace(0.02, 0.98, 193)
    v = h.potential.deriv(xs, 0)
    floor_v = max(float(np.max(v)) * 1e-4, 1e-300)
    steps = np.sum((xs[1] - xs[0]) / np.sqrt(np.maximum(v, floor_v))) if np.max(v) > 0 else 0.0
    return int(min(4000, 3 * steps + 4 * q + 16))


@lru_cache(maxsize=256)
def _ground_orbit(h: GeneratingFunction, p: int, q: int):
    config, report = minimize_periodic(h, p, q)
    return tuple(config.x), report.action


def minimize_advancing(
    h: GeneratingFunction,
    p: int,
    q: int,
    direction: str = "+",
    *,
    shift: int = 0,
    constraint: tuple[int, float] | None = None,
    width: int | None = None,
    x0: np.ndarray | None = None,
    lift_offset: float = 0.0,
    tol: float = _RESIDUAL_TOL,
) -> tuple[Configuration, SolveReport]:
    """Minimal connection between the (p, q) ground orbit and its translate.

    The elementary translate is the map's symmetry step s (1 for plain
    families, 1/q after rescaling).  direction "+" produces the advancing
    connection (from orbit to orbit + s), "-" the retreating one (orbit
    down to orbit - s; for orbits with crossings this removes a crossing
    and the relative action is negative).  `shift` rotates the background
    orbit indexing by j (the q inequivalent ways a connection can thread
    the orbit's gaps); `lift_offset` raises the whole background by a
    constant (used to address the sub-gaps of a rescaled family);
    `constraint = (offset, value)` pins the site at `mid + offset` to the
    prescribed lift value, which is how barrier values are evaluated.  The
    background is anchored so the midpoint site always carries orbit class
    `shift`: with offset 0 the admissible values are exactly
    [z_shift + lift_offset, z_shift + lift_offset + s] for "+" and the gap
    one step below for "-".  The window half-width is chosen from the
    orbit's multiplier so the connection's tails sit on the orbit to 1e-9
    before the ends; the fit is verified and the window enlarged (twice) if
    needed.

    Returns the windowed configuration (first_index 0) and a report whose
    action field holds the *relative* action: window action of the
    connection minus the same window's background orbit action.
    """
    direction = {"plus": "+", "minus": "-"}.get(direction, direction)
    if direction not in ("+", "-"):
        raise TwistFamilyError(f"direction must be '+'/'plus' or '-'/'minus', got {direction!r}")
    h.require_twist()
    require_nondegenerate(h, p, q)
    z_t, _ = _ground_orbit(h, p, q)
    z = np.array(z_t)
    lam = _orbit_multiplier(h, z, p, q)
    if lam <= 1.0 + 1e-10:
        raise SolverError(
            f"ground orbit at {p}/{q} is not hyperbolic (multiplier {lam:.6f}); "
            "connections do not localise in a finite window"
        )
    tail = int(math.ceil(q * math.log(1e13) / math.log(lam))) + 4
    span = _transition_span(h, q)
    length = width if width is not None else 2 * tail + span
    # A warm start (a previous solution for a nearby constraint, say) fixes
    # the window and skips the multi-start machinery; failure falls through
    # to the standard path.
    if x0 is not None:
        x0 = np.asarray(x0, dtype=float)
        x, report = _solve_connection_window(
            h, p, q, direction, shift, constraint, z, len(x0) - 1, tail, tol, None,
            init_x=x0, lift_offset=lift_offset,
        )
        if report.converged:
            return Configuration(x, Heteroclinic01(p, q, direction)), report
    # A symmetric start can converge onto the symmetric stationary point even
    # when it is the saddle between two asymmetric minima, so the
    # unconstrained solve is run from a site-centred and a bond-centred
    # transition and the lower action wins.  A constrained solve gets its
    # transition centre from the pinned value, plus — for retreating solves
    # on a background with crossings — a start that deletes the crossing
    # nearest the pin, since those two sectors compete for the minimum.
    if constraint is not None:
        phases = (None, "snap") if direction == "-" and p != 0 else (None,)
    else:
        phases = (0.0, 0.5, -0.5)
    best = None
    for attempt in range(3):
        candidates = []
        for phase in phases:
            x, report = _solve_connection_window(
                h, p, q, direction, shift, constraint, z, length, tail, tol, phase,
                lift_offset=lift_offset,
            )
            if report.converged:
                candidates.append((report.action, x, report))
        if candidates:
            candidates.sort(key=lambda c: c[0])
            _, x, report = candidates[0]
            best = (x, report)
            break
        best = (x, report)
        length *= 2
    x, last_report = best
    config = Configuration(x, Heteroclinic01(p, q, direction))
    return config, last_report


def _solve_connection_window(
    h, p, q, direction, shift, constraint, z, length, tail, tol, phase,
    init_x=None, lift_offset=0.0,
):
    L = int(length)
    mid = L // 2
    s = h.symmetry_period
    # anchor the background at the window midpoint: site mid carries orbit
    # class `shift`, whatever the window length, so callers can address gaps
    b = _orbit_lift(z, p, q, shift - mid, L + 1) + lift_offset
    # The advancing connection inserts one extra ascending crossing into the
    # background train (from b up to b + s); the retreating one removes a
    # crossing (from b down to b - s).  Each lives between the background
    # and the corresponding symmetry translate, giving the sitewise boxes.
    if direction == "+":
        lo, hi = b.copy(), b + s
    else:
        lo, hi = b - s, b.copy()
    tau = max(2.0, tail / 6.0)
    # For a background with crossings (p >= 1) the retreating transition must
    # start at an existing crossing or the solver locks onto the spurious
    # inserted-anti-kink minimum in the wrong sector; centre the down-step on
    # the largest background jump near the midpoint.
    if direction == "-" and p != 0:
        jumps = np.diff(b)
        near = np.argsort(np.abs(np.arange(L) + 0.5 - mid), kind="stable")
        c_star = float(near[np.argmax(jumps[near[: max(q, 2)]])]) + 0.5
    else:
        c_star = float(mid)
    if constraint is not None and phase == "snap":
        # alternative sector for retreating solves: keep the pin where it is
        # and remove the background crossing nearest the pinned site
        offset, _ = constraint
        site = mid + int(offset)
        jumps = np.diff(b)
        lo_bond = max(0, site - q)
        hi_bond = min(L, site + q)
        centre = lo_bond + int(np.argmax(jumps[lo_bond:hi_bond])) + 0.5
    elif constraint is not None:
        # place the transition so the sigmoid already passes through the
        # pinned value at the pinned site
        offset, value = constraint
        if direction == "+":
            u = min(max((value - b[mid + int(offset)]) / s, 1e-3), 1.0 - 1e-3)
        else:
            u = min(max((b[mid + int(offset)] - value) / s, 1e-3), 1.0 - 1e-3)
        centre = mid + int(offset) + tau * math.log((1.0 - u) / u)
    else:
        centre = c_star + (phase or 0.0)
    if init_x is not None and len(init_x) == L + 1:
        x = np.clip(np.asarray(init_x, dtype=float).copy(), lo, hi)
    else:
        sig = s / (1.0 + np.exp(-(np.arange(L + 1) - centre) / tau))
        x = b + sig if direction == "+" else b - sig
    if direction == "+":
        x[0], x[L] = b[0], b[L] + s
    else:
        x[0], x[L] = b[0], b[L] - s
    free = np.ones(L + 1, dtype=bool)
    free[0] = free[L] = False
    if constraint is not None:
        offset, value = constraint
        site = mid + int(offset)
        if not 1 <= site <= L - 1:
            raise TwistFamilyError(f"constraint site {site} outside window 1..{L - 1}")
        if not lo[site] - 1e-12 <= value <= hi[site] + 1e-12:
            raise TwistFamilyError(
                f"constraint value {value} outside the gap [{lo[site]}, {hi[site]}]"
            )
        x[site] = value
        free[site] = False
    report = _solve_chain(
        h, x, free, lo, hi, monotone=False, tol=tol, label=f"connection {p}/{q}{direction}"
    )
    # relative action against the background orbit over the same window; the
    # retreating relative action is negative for p >= 1 (a crossing is
    # removed), which barrier differences cancel out.
    rel = action(h, x) - action(h, b)
    report.action = rel
    # tail fit: by the checkpoint the connection must sit on the orbit
    check = max(2, tail // 2)
    shift_right = s if direction == "+" else -s
    left_err = float(np.max(np.abs(x[:check] - b[:check])))
    right_err = float(np.max(np.abs(x[L - check :] - (b[L - check :] + shift_right))))
    if max(left_err, right_err) > _TAIL_TOL * 10:
        report.converged = False
        report.message = (
            f"connection tails not settled (left {left_err:.2e}, right {right_err:.2e})"
        )
    return x, report
