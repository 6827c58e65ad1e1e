"""Desk-scale studies tying the solver stack to the family's hard inequalities.

Each study builds the relevant generating functions, runs the minimizer or
barrier machinery across a range of family indices, and returns a table of
raw numbers together with any log-log fit it performed.  Studies enforce
their hard inequalities by raising :class:`StudyAssertionError`; soft
diagnostics (confidence of a fit, flagged evaluation points) are recorded
in the result instead.  Every study includes an integrable control row so
a reader can see the machinery reporting "nothing to destroy" on the
unperturbed map.

Rows are computed sequentially in the order of the spec's index range and
assembled deterministically: rerunning a study with the same spec produces
an identical table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .barrier import (
    peierls_irrational,
    peierls_rational,
    peierls_zero_plus,
)
from .generating import (
    GOLDEN_MEAN,
    GeneratingFunction,
    PerturbationParams,
    TwistFamilyError,
    cr_norm_estimate,
    make_h0,
    make_hn,
    make_htilde,
    make_un,
    make_vn,
    rescale,
    twist_orbit,
)
from .minimizer import (
    DegenerateSymbolError,
    SolverError,
    count_in_interval,
    minimize_advancing,
    minimize_periodic,
)

__all__ = [
    "ExperimentSpec",
    "FitResult",
    "StudyResult",
    "StudyAssertionError",
    "run_spacing_study",
    "run_lower_bound_study",
    "run_approximation_study",
    "run_counting_study",
    "run_theorem_mr",
    "run_mcor_study",
    "run_lemma_herm_check",
]

_HERM_SEED = 20210480
_WINDOW = (0.25, 0.75)


class StudyAssertionError(RuntimeError):
    """A study's hard inequality failed (or a precondition was violated)."""


@dataclass(frozen=True)
class FitResult:
    """Least-squares line through (log x, log y) points."""

    slope: float
    intercept: float
    r2: float
    point_count: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.r2 <= 1.0:
            raise TwistFamilyError(f"r2 must lie in [0, 1], got {self.r2}")
        if self.point_count < 3:
            raise TwistFamilyError(
                f"a fit needs at least 3 points, got {self.point_count}"
            )


@dataclass(frozen=True)
class ExperimentSpec:
    """What to run: family template, index range, rotation-number rule.

    ``omega_rule`` names how the tested rotation number is derived from the
    family index n (all stay inside the small-rotation window n^(-a/2-delta)):

    - ``golden-half``: golden * n^(-a/2-delta) — the generic default.
    - ``golden-deep``: golden * n^(-a-delta) — well inside the window; the
      circle-destruction verdicts are computed here.
    - ``noble``: 1/(ceil(n^(a/2+delta)/golden) + golden) — a noble number
      just inside the window whose convergent denominators grow golden-slowly,
      giving the approximation study a uniformly convergent ladder.

    An explicit ``omega`` overrides the rule for every row.  ``order`` is the
    derivative order r used by the norm-decay study.
    """

    name: str
    n_range: tuple[int, ...]
    params: PerturbationParams
    omega_rule: str = "golden-half"
    omega: float | None = None
    grid_size: int = 64
    output_path: str | None = None
    order: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "n_range", tuple(int(n) for n in self.n_range))
        if not self.n_range:
            raise TwistFamilyError("n_range must be nonempty")
        if any(b <= a for a, b in zip(self.n_range, self.n_range[1:])):
            raise TwistFamilyError(f"n_range must be increasing, got {self.n_range}")
        if self.omega_rule not in ("golden-half", "golden-deep", "noble"):
            raise TwistFamilyError(f"unknown omega_rule {self.omega_rule!r}")
        if self.grid_size < 2:
            raise TwistFamilyError("grid_size must be at least 2")
        if self.name == "mcor":
            a, delta = self.params.a, self.params.delta
            if a > 2.0 - 2.0 * delta + 1e-12:
                raise TwistFamilyError("a must satisfy a ≤ 2 − 2·delta")

    def omega_for(self, n: int) -> float:
        if self.omega is not None:
            return float(self.omega)
        a, delta = self.params.a, self.params.delta
        if self.omega_rule == "golden-half":
            return GOLDEN_MEAN * float(n) ** (-(a / 2.0 + delta))
        if self.omega_rule == "golden-deep":
            return GOLDEN_MEAN * float(n) ** (-(a + delta))
        m = math.ceil(float(n) ** (a / 2.0 + delta) / GOLDEN_MEAN)
        return 1.0 / (m + GOLDEN_MEAN)


@dataclass
class StudyResult:
    """One study's table: raw rows, the fit (if any), and the verdicts."""

    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    fit: FitResult | None = None
    passed: bool = True
    low_confidence: bool = False
    notes: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        for row in self.rows:
            if len(row) != len(self.columns):
                raise TwistFamilyError(
                    f"row width {len(row)} != column count {len(self.columns)}"
                )


def _loglog_fit(xs, ys) -> FitResult:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if len(xs) < 3:
        raise StudyAssertionError(f"fit needs >= 3 points, got {len(xs)}")
    lx, ly = np.log(xs), np.log(ys)
    return _line_fit(lx, ly)


def _line_fit(lx, ly) -> FitResult:
    A = np.vstack([lx, np.ones_like(lx)]).T
    coef, _, _, _ = np.linalg.lstsq(A, ly, rcond=None)
    pred = A @ coef
    ss_res = float(np.sum((ly - pred) ** 2))
    ss_tot = float(np.sum((ly - np.mean(ly)) ** 2))
    r2 = 1.0 if ss_tot <= 0.0 else max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    return FitResult(float(coef[0]), float(coef[1]), r2, int(len(lx)))


def _advancing_connection(h: GeneratingFunction, n: int):
    try:
        cfg, report = minimize_advancing(h, 0, 1, "+")
    except SolverError as exc:
        raise StudyAssertionError(f"advancing solve failed at n={n}: {exc}") from exc
    if not report.converged:
        raise StudyAssertionError(
            f"advancing minimizer did not converge at n={n} "
            f"(residual {report.residual:.3e})"
        )
    return cfg, report


# ---------------------------------------------------------------------------
# spacing
# ---------------------------------------------------------------------------


def run_spacing_study(spec: ExperimentSpec) -> StudyResult:
    """Gap structure of the advancing connection on the bump-free family.

    For each n the free advancing connection of the n-th bump-free map is
    solved and two hard inequalities are checked: every double gap
    x_{i+1} - x_{i-1} with x_i in [1/4, 3/4] is at least 2 n^(-a/2), and
    every single gap is at most 2*sqrt(2) n^(-a/2).  The scale column is
    the central transition gap — the largest single gap whose midpoint
    falls in [1/4, 3/4].  At desk scale the connection can cross the whole
    window in one step (at n=16, a=1 it has no interior point there), so the
    central gap is the statistic that remains well defined at every n; its
    log-log slope against n recovers the -a/2 law.
    """
    a = spec.params.a
    columns = (
        "family",
        "n",
        "gap_scale",
        "min_double_gap",
        "max_single_gap",
        "double_bound",
        "single_bound",
        "passed",
        "note",
    )
    rows: list[tuple] = []
    scales: list[float] = []
    for n in spec.n_range:
        params = spec.params.with_n(n)
        h = make_hn(params, include_bump=False)
        cfg, _ = _advancing_connection(h, n)
        x = np.asarray(cfg.x)
        gaps = np.diff(x)
        mids = 0.5 * (x[:-1] + x[1:])
        lo, hi = _WINDOW
        dbl_bound = 2.0 * float(n) ** (-a / 2.0)
        single_bound = 2.0 * math.sqrt(2.0) * float(n) ** (-a / 2.0)

        interior = np.arange(1, len(x) - 1)
        in_window = interior[(x[interior] >= lo) & (x[interior] <= hi)]
        doubles = x[in_window + 1] - x[in_window - 1]
        min_double = float(np.min(doubles)) if len(doubles) else math.nan
        if len(doubles) and min_double < dbl_bound - 1e-12:
            raise StudyAssertionError(
                f"double-gap bound violated at n={n}: "
                f"{min_double:.6e} < {dbl_bound:.6e}"
            )
        max_single = float(np.max(gaps))
        if max_single > single_bound + 1e-12:
            raise StudyAssertionError(
                f"single-gap bound violated at n={n}: "
                f"{max_single:.6e} > {single_bound:.6e}"
            )
        central = gaps[(mids >= lo) & (mids <= hi)]
        if not len(central):
            raise StudyAssertionError(f"no gap crosses [1/4, 3/4] at n={n}")
        scale = float(np.max(central))
        scales.append(scale)
        note = "" if len(doubles) else "no interior points in the window at this n"
        rows.append(("hbar_n", n, scale, min_double, max_single, dbl_bound, single_bound, True, note))

    fit = _loglog_fit(spec.n_range, scales)
    slope_tol = 0.05 * max(1.0, a)
    if abs(fit.slope + a / 2.0) > slope_tol:
        raise StudyAssertionError(
            f"gap-scale slope {fit.slope:.4f} outside -a/2 = {-a / 2.0:.3f} "
            f"± {slope_tol}"
        )
    if fit.r2 < 0.98:
        raise StudyAssertionError(f"gap-scale fit r2 {fit.r2:.4f} < 0.98")

    # integrable control: the advancing symbol carries no connection at all
    try:
        minimize_advancing(make_h0(), 0, 1, "+")
        control_note = "unexpected: integrable family produced a connection"
        control_ok = False
    except DegenerateSymbolError:
        control_note = "integrable: advancing symbol degenerate"
        control_ok = True
    rows.append(("h0", 0, math.nan, math.nan, math.nan, math.nan, math.nan, control_ok, control_note))
    if not control_ok:
        raise StudyAssertionError(control_note)

    return StudyResult(
        name="spacing",
        columns=columns,
        rows=tuple(rows),
        fit=fit,
        passed=True,
        low_confidence=fit.r2 < 0.95,
        notes=(f"slope target {-a / 2.0:+.3f} ± {slope_tol}",),
    )


# ---------------------------------------------------------------------------
# lower bound
# ---------------------------------------------------------------------------


def run_lower_bound_study(spec: ExperimentSpec) -> StudyResult:
    """Advancing barrier at the bump centre against the bump-height floor."""
    columns = ("family", "n", "barrier", "floor", "margin", "passed", "note")
    rows: list[tuple] = []
    for n in spec.n_range:
        params = spec.params.with_n(n)
        floor = params.bump_height
        if floor < 1e-12:
            raise StudyAssertionError(
                f"bump height {floor:.3e} at n={n} is below the double-precision "
                "floor 1e-12; the margin would be meaningless"
            )
        h = make_hn(params)
        value = peierls_zero_plus(h, 0.5)
        margin = value - (floor - 1e-10)
        if margin < 0.0:
            raise StudyAssertionError(
                f"advancing barrier below bump height at n={n}: "
                f"{value:.6e} < {floor:.6e} - 1e-10"
            )
        rows.append(("h_n", n, value, floor, margin, True, ""))

    try:
        peierls_zero_plus(make_h0(), 0.5)
        rows.append(("h0", 0, math.nan, math.nan, math.nan, False, "unexpected: integrable family has a barrier path"))
        raise StudyAssertionError("integrable control produced a barrier value")
    except DegenerateSymbolError:
        rows.append(("h0", 0, 0.0, math.nan, math.nan, True, "integrable"))

    return StudyResult(
        name="lowerbound",
        columns=columns,
        rows=tuple(rows),
        fit=None,
        passed=True,
    )


# ---------------------------------------------------------------------------
# approximation
# ---------------------------------------------------------------------------


def _window_grid(n: int, a: float, points: int = 9) -> np.ndarray:
    width = float(n) ** (-a)
    return 0.5 + width * np.linspace(-1.0, 1.0, points)


def run_approximation_study(spec: ExperimentSpec) -> StudyResult:
    """Distance between the small-rotation barrier and its advancing limit.

    For each n the irrational barrier at the spec's rotation number is
    compared with the advancing barrier on a 9-point grid spanning the bump
    window [1/2 - n^-a, 1/2 + n^-a].  The sup of the pointwise discrepancy
    must decrease strictly in n and stay below C exp(-n^delta) with C
    calibrated on the smallest n and then frozen.
    """
    a, delta = spec.params.a, spec.params.delta
    columns = ("family", "n", "omega", "sup_discrepancy", "bound", "flagged_points", "passed", "note")
    rows: list[tuple] = []
    sups: list[float] = []
    omegas: list[float] = []
    flagged_total = 0
    for n in spec.n_range:
        params = spec.params.with_n(n)
        h = make_hn(params)
        omega = spec.omega_for(n)
        if not 0.0 < omega < float(n) ** (-(a / 2.0 + delta)):
            raise StudyAssertionError(
                f"omega {omega:.6e} outside (0, n^(-a/2-delta)) at n={n}"
            )
        sup = 0.0
        flagged = 0
        for xi in _window_grid(n, a):
            ir = peierls_irrational(h, omega, float(xi))
            zp = peierls_zero_plus(h, float(xi))
            if not ir.stable:
                flagged += 1
            sup = max(sup, abs(ir.value - zp))
        omegas.append(omega)
        sups.append(sup)
        flagged_total += flagged
        rows.append(["h_n", n, omega, sup, math.nan, flagged, True, ""])

    c_fit = sups[0] / math.exp(-float(spec.n_range[0]) ** delta)
    for i, n in enumerate(spec.n_range):
        bound = c_fit * math.exp(-float(n) ** delta)
        rows[i][4] = bound
        if sups[i] > bound * (1.0 + 1e-12):
            raise StudyAssertionError(
                f"discrepancy {sups[i]:.3e} above C exp(-n^delta) = {bound:.3e} at n={n}"
            )
    for i in range(1, len(sups)):
        if not sups[i] < sups[i - 1]:
            raise StudyAssertionError(
                f"discrepancy not strictly decreasing: "
                f"{sups[i]:.3e} at n={spec.n_range[i]} vs "
                f"{sups[i - 1]:.3e} at n={spec.n_range[i - 1]}"
            )

    # integrable control: both paths report zero, so the discrepancy vanishes
    h0 = make_h0()
    omega0 = spec.omega_for(spec.n_range[0])
    sup0 = 0.0
    for xi in _window_grid(spec.n_range[0], a):
        ir = peierls_irrational(h0, omega0, float(xi))
        try:
            zp = peierls_zero_plus(h0, float(xi))
        except DegenerateSymbolError:
            zp = 0.0
        sup0 = max(sup0, abs(ir.value - zp))
    if sup0 > 1e-10:
        raise StudyAssertionError(f"integrable control discrepancy {sup0:.3e} > 1e-10")
    rows.append(["h0", 0, omega0, sup0, math.nan, 0, True, "integrable"])

    # decay-rate fit: ln(sup) against n^delta (the bound predicts slope <= -1)
    fit = _line_fit(
        np.asarray([float(n) ** delta for n in spec.n_range]),
        np.log(np.asarray(sups)),
    )
    return StudyResult(
        name="approx",
        columns=columns,
        rows=tuple(tuple(r) for r in rows),
        fit=fit,
        passed=True,
        low_confidence=fit.r2 < 0.95,
        notes=(
            f"C fit at n={spec.n_range[0]}: {c_fit:.6e}",
            f"{flagged_total} flagged evaluation points",
        ),
    )


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------


def run_counting_study(spec: ExperimentSpec) -> StudyResult:
    """Occupation counts: sparse-window growth and the shear-orbit sandwich.

    The first block counts advancing-connection points with fractional part
    in [exp(-n^(delta/2)), 1/2) and fits the growth of log1p(count) against
    log n — counts at desk scale are small integers (possibly zero), so the
    zero-safe transform is used and the fit is reported low-confidence when
    appropriate.  The second block checks the exact k/omega sandwich for
    occupation counts of the integrable shear orbit at the golden rotation
    number, for interval lengths k = 1, 2, 3 at three offsets.
    """
    a, delta = spec.params.a, spec.params.delta
    columns = ("family", "index", "lower", "upper", "count", "bound", "passed", "note")
    rows: list[tuple] = []
    counts: list[int] = []
    for n in spec.n_range:
        params = spec.params.with_n(n)
        eps = math.exp(-float(n) ** (delta / 2.0))
        if eps >= 0.5:
            counts.append(0)
            rows.append(("h_n", n, eps, 0.5, 0, math.nan, True, "empty window"))
            continue
        h = make_hn(params)
        cfg, _ = _advancing_connection(h, n)
        count = count_in_interval(cfg, (eps, 0.5))
        counts.append(count)
        rows.append(["h_n", n, eps, 0.5, count, math.nan, True, ""])

    growth = a / 2.0 + delta / 2.0
    c_fit = (counts[0] + 1.0) / float(spec.n_range[0]) ** growth
    for i, n in enumerate(spec.n_range):
        bound = c_fit * float(n) ** growth
        if isinstance(rows[i], list):
            rows[i][5] = bound
        if counts[i] > bound * (1.0 + 1e-12):
            raise StudyAssertionError(
                f"count {counts[i]} above C n^(a/2+delta/2) = {bound:.3f} at n={n}"
            )

    fit = _line_fit(
        np.log(np.asarray(spec.n_range, dtype=float)),
        np.log1p(np.asarray(counts, dtype=float)),
    )
    if fit.slope > growth + 0.05:
        raise StudyAssertionError(
            f"count growth exponent {fit.slope:.4f} exceeds "
            f"a/2 + delta/2 + 0.05 = {growth + 0.05:.4f}"
        )

    # integrable control for the window count
    try:
        minimize_advancing(make_h0(), 0, 1, "+")
        raise StudyAssertionError("integrable control produced a connection")
    except DegenerateSymbolError:
        rows.append(("h0", 0, math.nan, math.nan, 0, math.nan, True, "integrable"))

    # exact sandwich on the integrable shear orbit at the golden rotation number
    h0 = make_h0()
    omega = GOLDEN_MEAN
    for k in (1, 2, 3):
        for offset in (0.0, 0.37, 0.71):
            steps = int(math.ceil((offset + k) / omega)) + 3
            orbit = twist_orbit(h0, 0.0, omega, steps)
            xs = orbit[:, 0]
            cnt = int(np.count_nonzero((xs >= offset) & (xs < offset + k)))
            lo = k / omega - 1.0
            hi = k / omega + 1.0
            ok = lo <= cnt <= hi
            rows.append(("shear-h0", k, lo, hi, cnt, offset, ok, "sandwich"))
            if not ok:
                raise StudyAssertionError(
                    f"shear sandwich failed: k={k}, offset={offset}, count={cnt} "
                    f"outside [{lo:.4f}, {hi:.4f}]"
                )

    return StudyResult(
        name="counting",
        columns=columns,
        rows=tuple(tuple(r) for r in rows),
        fit=fit,
        passed=True,
        low_confidence=fit.r2 < 0.95,
        notes=(
            f"growth bound a/2 + delta/2 + 0.05 = {growth + 0.05:.4f}",
            "counts are small at desk scale; fit uses log1p",
        ),
    )


# ---------------------------------------------------------------------------
# circle-destruction verdicts
# ---------------------------------------------------------------------------


def _sup_irrational(h: GeneratingFunction, omega: float, grid) -> tuple[float, float, int]:
    """Sup of the irrational barrier over grid; returns (sup, band, flagged)."""
    sup = 0.0
    band = 0.0
    flagged = 0
    for xi in grid:
        ir = peierls_irrational(h, omega, float(xi))
        if not ir.stable:
            flagged += 1
        sup = max(sup, ir.value)
        if math.isfinite(ir.error_estimate):
            band = max(band, ir.error_estimate)
    return sup, band, flagged


def run_theorem_mr(spec: ExperimentSpec) -> StudyResult:
    """Circle-destruction verdicts: barrier sup against the bump-height floor.

    For each n the irrational barrier is evaluated on a 9-point grid around
    the bump centre and its sup is compared with the threshold
    n^-s - C exp(-n^delta), where C is the approximation constant calibrated
    on the smallest n.  A positive margin destroys the circle.  Negative
    rotation numbers are handled by reflecting the family (x -> -x exchanges
    the two one-sided limits), and the verdict must agree with the positive
    run.  Rows whose margin is within twice the evaluation band are reported
    inconclusive rather than silently passed.
    """
    a, delta = spec.params.a, spec.params.delta
    columns = ("family", "n", "omega", "sup_barrier", "threshold", "band", "circle_destroyed", "note")
    rows: list[tuple] = []

    # calibrate the approximation constant on the smallest n
    n0 = spec.n_range[0]
    params0 = spec.params.with_n(n0)
    h_first = make_hn(params0)
    omega0 = spec.omega_for(n0)
    grid0 = _window_grid(n0, a)
    sup_diff = 0.0
    for xi in grid0:
        ir = peierls_irrational(h_first, omega0, float(xi))
        zp = peierls_zero_plus(h_first, float(xi))
        sup_diff = max(sup_diff, abs(ir.value - zp))
    c_fit = sup_diff / math.exp(-float(n0) ** delta)

    for n in spec.n_range:
        params = spec.params.with_n(n)
        h = make_hn(params)
        omega = spec.omega_for(n)
        if not 0.0 < omega < float(n) ** (-(a / 2.0 + delta)):
            raise StudyAssertionError(
                f"omega {omega:.6e} outside (0, n^(-a/2-delta)) at n={n}"
            )
        threshold = params.bump_height - c_fit * math.exp(-float(n) ** delta)
        if threshold <= 0.0:
            raise StudyAssertionError(
                f"threshold n^-s - C exp(-n^delta) = {threshold:.3e} not positive "
                f"at n={n}; the scales cannot be separated"
            )
        grid = _window_grid(n, a)
        sup, band, flagged = _sup_irrational(h, omega, grid)
        note = f"{flagged} flagged" if flagged else ""
        if abs(sup - threshold) <= 2.0 * band:
            rows.append(("h_n", n, omega, sup, threshold, band, "inconclusive",
                         (note + "; " if note else "") + "margin within 2x evaluation band"))
            continue
        destroyed = sup > threshold
        rows.append(("h_n", n, omega, sup, threshold, band, destroyed, note))
        if not destroyed:
            raise StudyAssertionError(
                f"barrier sup {sup:.6e} did not exceed threshold {threshold:.6e} "
                f"at n={n}"
            )

        # mirrored run: reflect the family and test the same |omega|
        reflected = h.reflect()
        sup_m, band_m, flagged_m = _sup_irrational(reflected, omega, 1.0 - grid)
        note_m = f"{flagged_m} flagged" if flagged_m else ""
        if abs(sup_m - threshold) <= 2.0 * band_m:
            rows.append(("h_n", n, -omega, sup_m, threshold, band_m, "inconclusive",
                         (note_m + "; " if note_m else "") + "margin within 2x evaluation band"))
        else:
            destroyed_m = sup_m > threshold
            rows.append(("h_n", n, -omega, sup_m, threshold, band_m, destroyed_m,
                         (note_m + "; " if note_m else "") + "mirrored"))
            if destroyed_m is not destroyed:
                raise StudyAssertionError(
                    f"mirrored verdict disagrees at n={n}: {destroyed_m} vs {destroyed}"
                )

    # integrable control: zero barrier, circle intact for every tested omega
    h0 = make_h0()
    for n in spec.n_range:
        omega = spec.omega_for(n)
        ir = peierls_irrational(h0, omega, 0.5)
        if ir.value > 1e-10:
            raise StudyAssertionError(
                f"integrable control barrier {ir.value:.3e} > 1e-10 at omega={omega}"
            )
        rows.append(("h0", n, omega, ir.value, math.nan, ir.error_estimate, False, "integrable"))

    return StudyResult(
        name="theorem-mr",
        columns=columns,
        rows=tuple(rows),
        fit=None,
        passed=True,
        notes=(f"C fit at n={n0}: {c_fit:.6e}",),
    )


# ---------------------------------------------------------------------------
# norm decay of the compressed family
# ---------------------------------------------------------------------------


def run_mcor_study(spec: ExperimentSpec) -> StudyResult:
    """Differentiability-order norm decay of the compressed perturbation.

    The compressed map at compression q adds q^-2 P(q x) to the integrable
    generating function; its distance to integrable in the order-r norm
    scales like q^(r-a-2).  The study fits that exponent over the spec's
    q range, requires the fitted slope within 15% of r - a - 2, and checks
    the norm sequence decreases strictly toward zero.
    """
    a = spec.params.a
    r = 3.0 if spec.order is None else float(spec.order)
    if r < 0.0:
        raise TwistFamilyError(f"derivative order r must be >= 0, got {r}")
    if r >= a + 2.0:
        raise TwistFamilyError(
            f"r = {r} is outside the decay regime: r must satisfy r < a + 2 = {a + 2.0}"
        )
    expected = r - a - 2.0
    columns = ("family", "q", "order", "norm", "bound", "passed", "note")
    rows: list[tuple] = []
    norms: list[float] = []
    h0 = make_h0()

    for q in spec.n_range:
        params = spec.params.with_n(q)
        ht = make_htilde(params)
        norm = cr_norm_estimate(ht.difference(h0), r)
        norms.append(norm)
        rows.append(["htilde_n", q, r, norm, math.nan, True, ""])

    c_fit = norms[0] / float(spec.n_range[0]) ** expected
    for i, q in enumerate(spec.n_range):
        rows[i][4] = c_fit * float(q) ** expected

    for i in range(1, len(norms)):
        if not norms[i] < norms[i - 1]:
            raise StudyAssertionError(
                f"norm sequence not strictly decreasing at q={spec.n_range[i]}: "
                f"{norms[i]:.6e} vs {norms[i - 1]:.6e}"
            )

    fit = _loglog_fit(spec.n_range, norms)
    tol = 0.15 * abs(expected)
    if abs(fit.slope - expected) > tol:
        raise StudyAssertionError(
            f"norm-decay slope {fit.slope:.4f} outside {expected:.3f} ± {tol:.3f}"
        )

    # zero-perturbation control: the estimator reports exactly zero
    zero = h0.difference(h0)
    for q in spec.n_range:
        norm = cr_norm_estimate(zero, r)
        if norm != 0.0:
            raise StudyAssertionError(f"zero perturbation has nonzero norm {norm}")
    rows.append(("zero", 0, r, 0.0, 0.0, True, "zero-perturbation control"))

    return StudyResult(
        name="mcor",
        columns=columns,
        rows=tuple(tuple(row) for row in rows),
        fit=fit,
        passed=True,
        low_confidence=fit.r2 < 0.95,
        notes=(f"expected slope r - a - 2 = {expected:+.3f} ± {tol:.3f}",),
    )


# ---------------------------------------------------------------------------
# compression/rescaling equivalence
# ---------------------------------------------------------------------------


def _stationarity_residual(
    h: GeneratingFunction, x: np.ndarray, exclude: int | None = None
) -> float:
    """Max interior stationarity defect of `x` under `h`.

    `exclude` skips one site index (a pinned site is stationary for the
    constrained problem, not the free one, so it is not part of the map's
    site-wise guarantee).
    """
    interior = h.d1(x[1:-1], x[2:]) + h.d2(x[:-2], x[1:-1])
    if exclude is not None and 1 <= exclude <= len(x) - 2:
        interior = np.delete(interior, exclude - 1)
    return float(np.max(np.abs(interior))) if len(interior) else 0.0


def run_lemma_herm_check(spec: ExperimentSpec) -> StudyResult:
    """Equivalence of the compressed and plain families under x -> q x.

    The compressed generating function q^-2 P(q x) and the plain one built
    from P are conjugate: scaling a stationary configuration by q maps one
    family's configurations onto the other's and multiplies barriers by q^2.
    For each q the study compares the circle verdict of the compressed
    family at a small rotation number with the plain family's verdict at the
    scaled rotation number (tolerances matched through the q^2 factor), and
    checks the scaling map on 20 pseudo-random stationary segments (each
    pinned at one site to randomize it; the pin is exempt from the site-wise
    guarantee): the mapped segment's stationarity residual under the plain
    family away from the pin must stay below 1e-9.
    """
    columns = (
        "family",
        "q",
        "omega_compressed",
        "sup_compressed",
        "sup_plain",
        "max_residual",
        "passed",
        "note",
    )
    params = spec.params
    n = params.n
    for q in spec.n_range:
        if q < 1 or q > 8:
            raise StudyAssertionError(f"compression q must lie in [1, 8], got {q}")

    pot = make_un(params) + make_vn(params)
    h_plain = make_hn(params)
    omega_plain = spec.omega_for(n)
    a = params.a
    offsets = np.linspace(-1.0, 1.0, 5)
    rng = np.random.default_rng(_HERM_SEED)
    rows: list[tuple] = []

    for q in spec.n_range:
        h_q = GeneratingFunction(
            potential=rescale(pot, q),
            quad=1.0,
            label=f"compressed-{q}",
            params=params,
        )
        omega_q = omega_plain / q
        grid_q = (1.0 / (2 * q)) + (float(n) ** (-a) / q) * offsets
        grid_p = np.mod(q * grid_q, 1.0)

        sup_q, band_q, flagged_q = _sup_irrational(h_q, omega_q, grid_q)
        sup_p, band_p, flagged_p = _sup_irrational(h_plain, omega_plain, grid_p)
        tol_plain = 1e-8
        verdict_q = sup_q > tol_plain / q**2
        verdict_p = sup_p > tol_plain
        both_flagged = flagged_q == len(grid_q) and flagged_p == len(grid_p)
        if both_flagged:
            rows.append((
                "compressed", q, omega_q, sup_q, sup_p, math.nan, True,
                "inconclusive on both sides; flagged",
            ))
            continue
        if verdict_q is not verdict_p:
            raise StudyAssertionError(
                f"verdict mismatch at q={q}: compressed {verdict_q} vs plain {verdict_p} "
                f"(sups {sup_q:.3e} / {sup_p:.3e})"
            )

        # scaling map on stationary segments
        max_residual = 0.0
        seg_symbols = ((0, 1), (1, q + 2), (1, 2))
        for j in range(20):
            p_s, q_s = seg_symbols[j % len(seg_symbols)]
            u = float(rng.uniform(0.05, 0.95)) / q
            try:
                z0 = minimize_periodic(h_q, p_s, q_s)[0].x[0] if (p_s, q_s) != (0, 1) else 0.0
                cfg, rep = minimize_advancing(
                    h_q, p_s, q_s, "+", constraint=(0, float(z0 + u)), tol=1e-9 / (4 * q)
                )
            except (SolverError, DegenerateSymbolError):
                continue
            if not rep.converged:
                continue
            mapped = q * np.asarray(cfg.x)
            pin = (len(mapped) - 1) // 2
            max_residual = max(
                max_residual, _stationarity_residual(h_plain, mapped, exclude=pin)
            )
        if max_residual > 1e-9:
            raise StudyAssertionError(
                f"scaling map residual {max_residual:.3e} > 1e-9 at q={q}"
            )
        rows.append((
            "compressed", q, omega_q, sup_q, sup_p, max_residual,
            True, "verdicts match" + ("; identical systems" if q == 1 else ""),
        ))

    # integrable control: zero perturbation compresses to the integrable map
    h0 = make_h0()
    ir0 = peierls_irrational(h0, omega_plain, 0.25)
    rows.append((
        "h0", 1, omega_plain, ir0.value, ir0.value, 0.0,
        ir0.value <= 1e-10, "integrable",
    ))
    if ir0.value > 1e-10:
        raise StudyAssertionError("integrable control has nonzero barrier")

    return StudyResult(
        name="herm",
        columns=columns,
        rows=tuple(rows),
        fit=None,
        passed=True,
        notes=(f"plain family index n={n}; omega_plain={omega_plain:.6e}",),
    )
