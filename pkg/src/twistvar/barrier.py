"""Peierls barriers and the variational invariant-circle criterion.

The barrier of a rotation symbol measures the extra action a minimal
configuration must pay to pass through a prescribed point.  It vanishes
identically exactly when the minimal configurations of that symbol foliate
the cylinder (an invariant circle); a strictly positive barrier certifies
that no such circle exists.  This module evaluates barriers three ways:

* the exact rational barrier of p/q: the minimal (p, q)-periodic action
  among configurations pinned through the test point, minus the ground
  periodic action — a finite problem, nonnegative by construction because
  pinning only shrinks the feasible set;
* the one-sided barriers of p/q (advancing "+" / retreating "-"), built
  from constrained heteroclinic connections between a ground orbit and its
  integer translate;
* the irrational barrier, stabilised along the continued-fraction
  convergents of the rotation number with the one-sided variant chosen on
  the side the convergent approaches from.

All values are differences of window actions whose tails cancel, so they
are insensitive to the truncation width once the connection tails have
settled (doubling the window moves them below 1e-10).  Values in
(-1e-12, 0) are clamped to 0; anything more negative is reported as is,
because it would signal a solver failure rather than roundoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .generating import (
    GeneratingFunction,
    TwistFamilyError,
    dirichlet_approximants,
)
from .minimizer import (
    DegenerateSymbolError,
    SolverError,
    action,
    minimize_advancing,
    require_nondegenerate,
    _ground_orbit,
)

_CLAMP = 1e-12
_STABLE_FLOOR = 1e-10
_CONVERGENT_CAP = 400

__all__ = [
    "Rational",
    "Irrational",
    "BarrierQuery",
    "HeteroclinicActions",
    "IrrationalBarrier",
    "BarrierProfile",
    "zero_plus_actions",
    "peierls_zero_plus",
    "peierls_rational",
    "peierls_irrational",
    "barrier_profile",
    "invariant_circle_exists",
]


# ---------------------------------------------------------------------------
# rotation symbols and result records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Rational:
    """Rotation symbol p/q with a variant: exact, advancing, or retreating."""

    p: int
    q: int
    variant: str = "exact"

    def __post_init__(self) -> None:
        if self.q < 1:
            raise TwistFamilyError(f"rotation symbol needs q >= 1, got {self.q}")
        if math.gcd(abs(self.p), self.q) != 1:
            raise TwistFamilyError(f"rotation symbol {self.p}/{self.q} is not in lowest terms")
        if self.variant not in ("exact", "plus", "minus"):
            raise TwistFamilyError(
                f"variant must be 'exact', 'plus' or 'minus', got {self.variant!r}"
            )

    @property
    def value(self) -> float:
        return self.p / self.q


@dataclass(frozen=True)
class Irrational:
    """Irrational rotation number, approached through its convergents."""

    omega: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.omega):
            raise TwistFamilyError(f"rotation number must be finite, got {self.omega}")
        # dirichlet_approximants rejects rationals; do the same check eagerly
        # so a bad symbol fails at construction, not at first use.
        from .generating import _looks_rational

        if _looks_rational(self.omega):
            raise TwistFamilyError(
                f"{self.omega} is (numerically) rational; use a Rational symbol"
            )


@dataclass(frozen=True)
class BarrierQuery:
    """A single barrier evaluation: which symbol, where, for which map."""

    symbol: Rational | Irrational
    xi: float
    h: GeneratingFunction

    def value(self) -> float:
        if isinstance(self.symbol, Rational):
            return peierls_rational(self.h, self.symbol.p, self.symbol.q, self.symbol.variant, self.xi)
        return peierls_irrational(self.h, self.symbol.omega, self.xi).value


@dataclass(frozen=True)
class HeteroclinicActions:
    """Truncated-window actions of the advancing connection through 0 -> 1.

    K is the unconstrained minimal window action, K_xi the minimum among
    configurations forced through the test point; their difference is the
    barrier.  Both are computed on the same window so the orbit tails
    cancel exactly.
    """

    K: float
    K_xi: float
    truncation_width: int

    def __post_init__(self) -> None:
        if self.K_xi < self.K - 1e-12:
            raise TwistFamilyError(
                f"constrained action {self.K_xi} below unconstrained {self.K}: "
                "the constrained problem relaxes nothing"
            )

    @property
    def barrier(self) -> float:
        return _clamp(self.K_xi - self.K)


class IrrationalBarrier(NamedTuple):
    """Barrier value stabilised over convergents, with an error estimate.

    `resolution_limited` marks values certified by the fallback stopping
    rule: the remaining convergents were degenerate below the solver's
    action resolution, so the sweep stopped on a two-value Cauchy estimate
    plus a continuity-modulus extrapolation instead of the usual
    three-value rule.
    """

    value: float
    error_estimate: float
    stable: bool
    convergents_used: tuple
    resolution_limited: bool = False


@dataclass
class BarrierProfile:
    """Barrier sampled on a uniform grid of test points in [0, 1)."""

    grid: np.ndarray
    values: np.ndarray
    flags: np.ndarray  # True where the evaluation failed; never dropped
    symbol: Rational | Irrational
    sup_value: float
    metadata: dict = field(default_factory=dict)


def _clamp(v: float) -> float:
    return 0.0 if -_CLAMP < v < 0.0 else float(v)


# ---------------------------------------------------------------------------
# one-sided barriers from constrained connections
# ---------------------------------------------------------------------------


@lru_cache(maxsize=256)
@lru_cache(maxsize=1024)
def _free_connection_action(h: GeneratingFunction, p: int, q: int, direction: str) -> float:
    """Relative action of the unconstrained minimal connection (cached).

    The connection's action relief over defect positions has one local
    minimum per inequivalent gap of the background, and a descent from a
    generic start only reaches the nearest one.  Since the unconstrained
    minimum equals the minimum over through-points of the pinned problem,
    the global value is found by sweeping pins over every inequivalent gap
    class (defect positions repeat after q / gcd(p/s, q) sites, with s the
    symmetry period) and relaxing the best pinned configurations with the
    pin released.  Backgrounds whose positions are all equivalent (p = 0,
    or a single crossing per period) keep the direct multistart result.
    """
    candidates = []
    _, report = minimize_advancing(h, p, q, direction)
    if report.converged:
        candidates.append(report.action)
    s = h.symmetry_period
    steps_per_period = p * max(1, int(round(1.0 / s)))
    positions = q // math.gcd(steps_per_period, q) if steps_per_period else 1
    if steps_per_period > 1 and positions > 1:
        z = np.array(_ground_orbit(h, p, q)[0])
        per_class: dict[int, tuple[float, np.ndarray]] = {}
        for j in range(min(positions, 128)):
            prev = None
            for f in (0.25, 0.5, 0.75):
                v = z[j] + f * s if direction == "+" else z[j] - f * s
                try:
                    cfg, rep = minimize_advancing(
                        h, p, q, direction, shift=j, constraint=(0, float(v)), x0=prev
                    )
                except SolverError:
                    prev = None
                    continue
                if not rep.converged:
                    prev = None
                    continue
                prev = cfg.x
                if j not in per_class or rep.action < per_class[j][0]:
                    per_class[j] = (rep.action, cfg.x)
        # pinned configurations are admissible, so their actions already
        # bound the minimum from above; releasing the pin tightens each
        # class's bound down to its local basin value
        for j, (a_pin, x) in per_class.items():
            candidates.append(a_pin)
            try:
                _, rep = minimize_advancing(h, p, q, direction, shift=int(j), x0=x)
            except SolverError:
                continue
            if rep.converged:
                candidates.append(rep.action)
    if not candidates:
        raise SolverError(
            f"unconstrained connection {p}/{q}{direction} did not converge: {report.message}"
        )
    return min(candidates)


def _advancing_values(h, p, q, variant, xis):
    """One-sided barrier at each xi: min over the gap classes.

    For each gap class j the pinned value is xi lifted into the gap the
    connection traverses — [z_j, z_j + s] for the advancing variant,
    [z_j - s, z_j] for the retreating one, with s the family's symmetry
    period — and consecutive xi in the same sub-gap are solved with a warm
    start from the previous solution.  Returns (values, flags).
    """
    direction = "+" if variant == "plus" else "-"
    s = h.symmetry_period
    sub_gaps = max(1, int(round(1.0 / s)))
    free_action = _free_connection_action(h, p, q, direction)
    z = np.array(_ground_orbit(h, p, q)[0])
    xis = np.asarray(xis, dtype=float)
    best = np.full(len(xis), np.inf)
    solved = np.zeros(len(xis), dtype=bool)
    for j in range(q):
        if direction == "+":
            u = np.mod(xis - z[j], 1.0)
            hatted = z[j] + u
        else:
            u = np.mod(z[j] - xis, 1.0)
            hatted = z[j] - u
        # which symmetry sub-gap of the unit gap each lifted point falls in;
        # warm starts are only shared within a sub-gap (same background lift)
        sub = np.minimum(np.floor(u / s + 1e-12).astype(int), sub_gaps - 1)
        order = np.argsort(hatted, kind="stable")
        for g in range(sub_gaps):
            lift = g * s if direction == "+" else -g * s
            prev = None
            for k in order:
                if sub[k] != g:
                    continue
                try:
                    cfg, rep = minimize_advancing(
                        h, p, q, direction, shift=j,
                        constraint=(0, float(hatted[k])), x0=prev, lift_offset=lift,
                    )
                except SolverError:
                    prev = None
                    continue
                if not rep.converged:
                    prev = None
                    continue
                prev = cfg.x
                solved[k] = True
                if rep.action < best[k]:
                    best[k] = rep.action
    # the pinned actions seen here are themselves admissible, so the free
    # minimum can never exceed their smallest; renormalising keeps the
    # barrier nonnegative even if the cached sweep missed a basin
    if np.any(solved):
        free_action = min(free_action, float(np.min(best[solved])))
    values = np.where(solved, best - free_action, np.nan)
    values = np.array([_clamp(v) if math.isfinite(v) else v for v in values])
    return values, ~solved


# ---------------------------------------------------------------------------
# the exact rational barrier (finite through-point periodic problem)
# ---------------------------------------------------------------------------


def _bracketing_translates(z, p, q, xi, s=1.0):
    """The two neighbouring ground-orbit translates around xi at site 0.

    Translates are indexed by (rotation j, symmetry step m); their site-0
    values z_j + m*s form a ladder, and minimal configurations of one
    symbol never cross, so consecutive ladder points give consistent
    full-window brackets.
    """
    lo_val, lo_jm = -np.inf, None
    hi_val, hi_jm = np.inf, None
    for j in range(q):
        m = math.floor((xi - z[j]) / s)
        for mm in (m, m + 1):
            v = z[j] + mm * s
            if v <= xi and v > lo_val:
                lo_val, lo_jm = v, (j, mm)
            if v >= xi and v < hi_val:
                hi_val, hi_jm = v, (j, mm)
    return (lo_val, lo_jm), (hi_val, hi_jm)


def _translate_window(z, p, q, j, m, length, s=1.0):
    i = np.arange(length) + j
    return z[np.mod(i, q)] + p * np.floor_divide(i, q) + m * s


def _exact_rational(h, p, q, xi):
    """Minimal (p, q)-periodic action through x_0 = xi, minus the ground action.

    One period contributes q bond terms; the through-point problem pins
    x_0 = xi and x_q = xi + p and relaxes the q - 1 interior sites.  Since
    pinning only restricts the periodic minimisation, the difference is
    nonnegative, and it vanishes exactly when xi lies on the ground orbit.
    """
    from .minimizer import _solve_chain

    z = np.array(_ground_orbit(h, p, q)[0])
    ground = action(h, np.append(z, z[0] + p))
    if q == 1:
        # the period action of the single-site configuration is h(t, t + p)
        return _clamp(float(h(xi, xi + p)) - ground)
    s = h.symmetry_period
    (lo_val, lo_jm), (hi_val, hi_jm) = _bracketing_translates(z, p, q, xi, s)
    if xi - lo_val < 1e-12 or hi_val - xi < 1e-12:
        return 0.0  # xi sits on the orbit ladder: the ground orbit passes through it
    L = _translate_window(z, p, q, *lo_jm, q + 1, s)
    U = _translate_window(z, p, q, *hi_jm, q + 1, s)
    ratio = (xi - lo_val) / (hi_val - lo_val)
    free = np.ones(q + 1, dtype=bool)
    free[0] = False
    free[-1] = False
    best = np.inf
    converged_any = False
    for blend in (ratio, 0.25, 0.5, 0.75):
        x = L + blend * (U - L)
        x[0] = xi
        x[-1] = xi + p
        rep = _solve_chain(h, x, free, L.copy(), U.copy(), label=f"exact barrier {p}/{q}")
        if rep.converged:
            converged_any = True
            best = min(best, action(h, x))
    if not converged_any:
        raise SolverError(f"exact barrier solve at {p}/{q}, xi={xi} did not converge")
    return _clamp(best - ground)


# ---------------------------------------------------------------------------
# public evaluators
# ---------------------------------------------------------------------------


def peierls_rational(
    h: GeneratingFunction, p: int, q: int, variant: str, xi: float
) -> float:
    """Barrier of the rational symbol p/q (chosen variant) at the point xi.

    Raises DegenerateSymbolError when the symbol's ground state is not
    unique up to translation (integrable wells being the canonical case):
    the barrier is then not defined by this construction.
    """
    Rational(p, q, variant)
    h.require_twist()
    xi = float(xi) % 1.0
    require_nondegenerate(h, p, q)
    if variant == "exact":
        return _exact_rational(h, p, q, xi)
    values, failed = _advancing_values(h, p, q, variant, [xi])
    if failed[0]:
        raise SolverError(f"one-sided barrier solve at {p}/{q}{variant}, xi={xi} failed")
    return float(values[0])


def zero_plus_actions(h: GeneratingFunction, xi: float, width: int | None = None) -> HeteroclinicActions:
    """Window actions behind the advancing 0 -> 1 barrier at xi.

    Both the unconstrained and the constrained connection are solved on the
    same truncation window so their orbit tails cancel in the difference.

    Needs the potential part h(t, t) to vanish at integers and stay
    nonnegative; otherwise the connection tails have nothing to settle onto
    and the window actions would depend on the truncation.
    """
    h.require_twist()
    xi = float(xi) % 1.0
    probe = np.linspace(0.0, 1.0, 65)
    diag = np.asarray(h(probe, probe), dtype=float)
    if abs(float(diag[0])) > 1e-9 or float(np.min(diag)) < -1e-9:
        raise TwistFamilyError(
            "advancing 0 -> 1 barrier needs the potential part to vanish at "
            "integers and be nonnegative"
        )
    require_nondegenerate(h, 0, 1)
    z = np.array(_ground_orbit(h, 0, 1)[0])
    s = h.symmetry_period
    u = (xi - z[0]) % 1.0
    lift = min(math.floor(u / s + 1e-12), max(1, int(round(1.0 / s))) - 1) * s
    value = z[0] + u
    last_error = None
    for attempt in range(3):
        cfg_free, rep_free = minimize_advancing(h, 0, 1, "+", width=width, lift_offset=lift)
        use_width = len(cfg_free) - 1
        cfg_con, rep_con = minimize_advancing(
            h, 0, 1, "+", constraint=(0, float(value)), width=use_width, lift_offset=lift
        )
        if rep_free.converged and rep_con.converged and len(cfg_con) == len(cfg_free):
            return HeteroclinicActions(
                K=action(h, cfg_free.x),
                K_xi=action(h, cfg_con.x),
                truncation_width=use_width,
            )
        last_error = rep_con.message or rep_free.message
        width = 2 * use_width
    raise SolverError(f"zero-plus actions at xi={xi} did not stabilise: {last_error}")


def peierls_zero_plus(h: GeneratingFunction, xi: float) -> float:
    """Advancing barrier of the symbol 0 at xi: K(xi) - K on a shared window."""
    return zero_plus_actions(h, xi).barrier


def _stability_threshold(h: GeneratingFunction) -> float:
    params = getattr(h, "params", None)
    if params is None:
        return _STABLE_FLOOR
    return max(_STABLE_FLOOR, math.exp(-params.n**params.delta) / 10.0)


def _modulus_extrapolation(values, fractions, omega):
    """Continuity-modulus estimate for the tail beyond the last convergent.

    The barrier varies Hölder-continuously in the rotation symbol, so the
    gap to the limit is bounded by C * sqrt(|omega - p/q|) with C calibrated
    on the last two computed convergents.  Used only by the fallback
    stopping rule when deeper convergents are degenerate at resolution.
    """
    dv = abs(values[-1] - values[-2])
    dw = abs(fractions[-1] - fractions[-2])
    if dw <= 0.0:
        return dv
    c_est = dv / math.sqrt(dw)
    return c_est * math.sqrt(abs(omega - fractions[-1]))


def peierls_irrational(
    h: GeneratingFunction,
    omega: float,
    xi: float,
    convergents: int = 10,
    settle_tol: float | None = None,
) -> IrrationalBarrier:
    """Barrier of an irrational rotation number at xi.

    Convergents p/q of omega are evaluated with the one-sided variant on
    the side they approach from ("plus" when p/q < omega).  The sweep stops
    once three consecutive computable values agree within
    max(1e-10, exp(-n^delta)/10); `settle_tol` overrides that threshold
    when a study needs the sweep pushed further down the convergent tree
    than the family default.

    A convergent whose symbol is degenerate at the solver's action
    resolution (ground states tied below 1e-9) carries no computable
    barrier.  If every convergent is degenerate the family behaves as
    integrable at this symbol and the barrier is 0.  If degeneracy sets in
    after at least two settled values — deeper convergents space crossings
    ever more widely, so their locking only weakens — the sweep stops
    there and reports a resolution-limited stable value whose error
    estimate combines the last Cauchy difference with a continuity-modulus
    extrapolation.
    """
    h.require_twist()
    xi = float(xi) % 1.0
    threshold = _stability_threshold(h) if settle_tol is None else float(settle_tol)
    values: list[float] = []
    used: list[tuple[int, int]] = []
    fractions: list[float] = []
    tried = 0
    degenerate_after_values = False
    for ap in dirichlet_approximants(omega, convergents):
        if ap.q > _CONVERGENT_CAP:
            break
        tried += 1
        variant = "plus" if ap.value < omega else "minus"
        try:
            v = peierls_rational(h, ap.p, ap.q, variant, xi)
        except DegenerateSymbolError:
            if values:
                degenerate_after_values = True
            continue
        values.append(v)
        used.append((ap.p, ap.q))
        fractions.append(ap.value)
        if len(values) >= 3:
            d1 = abs(values[-1] - values[-2])
            d2 = abs(values[-2] - values[-3])
            if d1 < threshold and d2 < threshold:
                return IrrationalBarrier(_clamp(values[-1]), max(d1, d2), True, tuple(used))
    if not values and tried > 0:
        # every convergent is degenerate: an integrable-like family
        return IrrationalBarrier(0.0, 0.0, True, tuple(used))
    if len(values) >= 2:
        last_diff = abs(values[-1] - values[-2])
        if degenerate_after_values and last_diff < threshold:
            err = max(last_diff, _modulus_extrapolation(values, fractions, omega))
            return IrrationalBarrier(
                _clamp(values[-1]), err, True, tuple(used), resolution_limited=True
            )
        err = last_diff
    else:
        err = math.inf
    return IrrationalBarrier(
        _clamp(values[-1]) if values else math.nan, err, False, tuple(used)
    )


# ---------------------------------------------------------------------------
# profiles and the circle criterion
# ---------------------------------------------------------------------------


def _rational_profile_values(h, p, q, variant, grid):
    if variant == "exact":
        vals = np.full(len(grid), np.nan)
        flags = np.zeros(len(grid), dtype=bool)
        require_nondegenerate(h, p, q)
        for i, xi in enumerate(grid):
            try:
                vals[i] = _exact_rational(h, p, q, float(xi) % 1.0)
            except SolverError:
                flags[i] = True
        return vals, flags
    require_nondegenerate(h, p, q)
    return _advancing_values(h, p, q, variant, np.mod(grid, 1.0))


def barrier_profile(h: GeneratingFunction, symbol, grid_size: int = 64) -> BarrierProfile:
    """Sample the barrier of `symbol` on the uniform grid k/grid_size.

    Failed evaluations are flagged in `flags`, never dropped; the sup is
    taken over the points that did evaluate.  For an irrational symbol the
    whole profile is stabilised over convergents at once (same stopping
    rule as peierls_irrational); if it does not stabilise, every point is
    flagged so downstream verdicts refuse to run on incomplete data.
    """
    if grid_size < 8:
        raise TwistFamilyError(f"grid size must be >= 8, got {grid_size}")
    grid = np.arange(grid_size, dtype=float) / grid_size
    metadata: dict = {}
    if isinstance(symbol, Rational):
        values, flags = _rational_profile_values(h, symbol.p, symbol.q, symbol.variant, grid)
        metadata["variant"] = symbol.variant
    elif isinstance(symbol, Irrational):
        threshold = _stability_threshold(h)
        profiles: list[np.ndarray] = []
        prof_flags: list[np.ndarray] = []
        used: list[tuple[int, int]] = []
        sup_diffs: list[float] = []
        stable = False
        resolution_limited = False
        tried = 0
        for ap in dirichlet_approximants(omega=symbol.omega, count=12):
            if ap.q > _CONVERGENT_CAP:
                break
            tried += 1
            variant = "plus" if ap.value < symbol.omega else "minus"
            try:
                vals_m, flags_m = _rational_profile_values(h, ap.p, ap.q, variant, grid)
            except DegenerateSymbolError:
                if len(profiles) >= 2 and sup_diffs and sup_diffs[-1] < threshold:
                    # deeper convergents are degenerate below resolution:
                    # certify on the settled Cauchy difference (see
                    # peierls_irrational for the rationale)
                    stable = True
                    resolution_limited = True
                    break
                continue
            profiles.append(vals_m)
            prof_flags.append(flags_m)
            used.append((ap.p, ap.q))
            if len(profiles) >= 2:
                a, b = profiles[-2], profiles[-1]
                ok = ~prof_flags[-2] & ~prof_flags[-1]
                sup_diffs.append(float(np.max(np.abs(a[ok] - b[ok]))) if ok.any() else math.inf)
            if len(sup_diffs) >= 2 and sup_diffs[-1] < threshold and sup_diffs[-2] < threshold:
                stable = True
                break
        if not profiles:
            if tried > 0:
                values = np.zeros(grid_size)
                flags = np.zeros(grid_size, dtype=bool)
                metadata["degenerate_family"] = True
                stable = True
            else:
                raise TwistFamilyError(f"no convergents available for omega={symbol.omega}")
        else:
            values = profiles[-1]
            flags = prof_flags[-1].copy()
            if not stable:
                flags[:] = True
        metadata.update(
            convergents_used=tuple(used),
            sup_diffs=tuple(sup_diffs),
            stable=stable,
            resolution_limited=resolution_limited,
            threshold=threshold,
        )
    else:
        raise TwistFamilyError(f"unknown rotation symbol type {type(symbol).__name__}")
    usable = ~flags & np.isfinite(values)
    sup_value = float(np.max(values[usable])) if usable.any() else math.nan
    return BarrierProfile(
        grid=grid, values=values, flags=flags, symbol=symbol, sup_value=sup_value, metadata=metadata
    )


def invariant_circle_exists(profile: BarrierProfile, tol: float = 1e-8) -> bool:
    """Mather's criterion on a sampled profile: circle iff the barrier vanishes.

    Refuses to judge an incomplete profile: flagged points mean the sup is
    not trustworthy, and a wrong verdict is worse than no verdict.
    """
    if profile.flags.any():
        raise SolverError(
            f"incomplete profile: {int(np.count_nonzero(profile.flags))} of "
            f"{len(profile.flags)} points failed to evaluate"
        )
    return bool(profile.sup_value <= tol)
