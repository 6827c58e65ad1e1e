"""Generating functions for exact area-preserving monotone twist maps.

Everything here is built around the variational form

    h(x, x') = quad * (x - x')^2 / 2 + V(x'),

where V is a smooth 1-periodic potential assembled from closed-form
primitives: a cosine well amplitude*(1 - cos 2*pi*x), a compactly supported
mollifier bump, and the rescaling q^{-2} V(q x).  All derivatives used by
the solvers (orders 0..4) are analytic; no finite differences enter the
evaluation path.

The perturbation sizes follow one parameter pack: for index n and exponents
(a, k) the well has amplitude n^{-a}, the bump has half-width n^{-a}, height
n^{-s} with s = (k + 2) a, and C^k size of order n^{-s'} with s' = 2 a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np

TWO_PI = 2.0 * math.pi

# Inverse golden mean (sqrt(5)-1)/2; the default frequency seed for studies.
GOLDEN_MEAN = (math.sqrt(5.0) - 1.0) / 2.0

# Points per feature scale when estimating sups on a grid, and the divisor
# turning a feature scale into the divided-difference step for Holder
# seminorms.  64 points per oscillation resolves every primitive used here.
_GRID_PER_FEATURE = 64
_HOLDER_DIVISOR = 64

_MAX_DERIV_ORDER = 4


class TwistFamilyError(ValueError):
    """Raised for parameter combinations outside the supported family."""


# ---------------------------------------------------------------------------
# parameter pack
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PerturbationParams:
    """Exponent bookkeeping for the perturbation family.

    n        perturbation index (well gets shallower as n grows)
    a        well-amplitude exponent, amplitude = n^{-a}
    k        smoothness budget for the bump (C^k norm controlled)
    s        bump height exponent; defaults to (k + 2) * a
    s_prime  bump C^k-norm exponent; defaults to 2 * a (must exceed a)
    delta    small positive exponent entering frequency windows and
             stabilisation thresholds
    """

    n: int
    a: float = 1.9
    k: int = 2
    s: float = -1.0
    s_prime: float = -1.0
    delta: float = 0.1

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise TwistFamilyError(f"index n must be a positive integer, got {self.n!r}")
        if not self.a > 0:
            raise TwistFamilyError(f"exponent a must be positive, got {self.a}")
        if not isinstance(self.k, int) or self.k < 0:
            raise TwistFamilyError(f"smoothness order k must be a nonnegative integer, got {self.k!r}")
        if self.s < 0:
            object.__setattr__(self, "s", (self.k + 2) * self.a)
        if self.s_prime < 0:
            object.__setattr__(self, "s_prime", 2.0 * self.a)
        if not self.s > 0:
            raise TwistFamilyError(f"height exponent s must be positive, got {self.s}")
        if not self.s_prime > self.a:
            raise TwistFamilyError(
                f"norm exponent s_prime must exceed a (got s_prime={self.s_prime}, a={self.a})"
            )
        if not self.delta > 0:
            raise TwistFamilyError(f"delta must be positive, got {self.delta}")

    def with_n(self, n: int) -> "PerturbationParams":
        """Same exponents, different index; s and s_prime re-derive."""
        return replace(self, n=n, s=-1.0, s_prime=-1.0)

    @property
    def well_amplitude(self) -> float:
        return float(self.n) ** (-self.a)

    @property
    def bump_half_width(self) -> float:
        return float(self.n) ** (-self.a)

    @property
    def bump_height(self) -> float:
        return float(self.n) ** (-self.s)


@dataclass(frozen=True)
class BumpSpec:
    """Geometry of the compactly supported bump: where, how wide, how tall."""

    center: float
    half_width: float
    height: float
    profile: str = "exp-reciprocal"

    def __post_init__(self) -> None:
        if not 0.0 < self.half_width <= 0.5:
            raise TwistFamilyError(
                f"bump half-width must lie in (0, 1/2], got {self.half_width}"
            )
        if self.height < 0:
            raise TwistFamilyError(f"bump height must be nonnegative, got {self.height}")


# ---------------------------------------------------------------------------
# mollifier profile (closed-form derivatives)
# ---------------------------------------------------------------------------


def _bump_profile(t: np.ndarray, order: int) -> np.ndarray:
    """Derivative of order `order` of phi(t) = exp(1 - 1/(1 - t^2)) on |t|<1.

    phi is the standard smooth compactly supported profile with phi(0) = 1
    and support [-1, 1].  Derivatives follow the chain w = 1/(1 - t^2),
    phi^(m) = (polynomial in w, t) * phi; the polynomials below are exact
    (checked against symbolic differentiation to round-off).
    """
    if not 0 <= order <= _MAX_DERIV_ORDER:
        raise TwistFamilyError(f"profile derivatives available for orders 0..4, got {order}")
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    if not np.any(inside):
        return out
    ti = t[inside]
    w = 1.0 / (1.0 - ti * ti)
    e = np.exp(1.0 - w)
    if order == 0:
        val = e
    else:
        w1 = 2.0 * ti * w**2
        if order == 1:
            val = -w1 * e
        else:
            w2 = 2.0 * w**2 + 8.0 * ti**2 * w**3
            if order == 2:
                val = (w1 * w1 - w2) * e
            else:
                w3 = 24.0 * ti * w**3 + 48.0 * ti**3 * w**4
                if order == 3:
                    val = (-w3 + 3.0 * w1 * w2 - w1**3) * e
                else:
                    w4 = 24.0 * w**3 + 288.0 * ti**2 * w**4 + 384.0 * ti**4 * w**5
                    val = (-w4 + 4.0 * w1 * w3 + 3.0 * w2 * w2 - 6.0 * w1 * w1 * w2 + w1**4) * e
    out[inside] = val
    return out


@lru_cache(maxsize=None)
def _bump_profile_sup(order: int) -> float:
    t = np.linspace(-1.0, 1.0, 40001)
    return float(np.max(np.abs(_bump_profile(t, order))))


def _periodic_offset(x: np.ndarray, center: float) -> np.ndarray:
    """Signed distance from x to the nearest lift of `center`, in [-1/2, 1/2)."""
    d = np.asarray(x, dtype=float) - center
    return d - np.round(d)


# ---------------------------------------------------------------------------
# potential primitives
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CosineWell:
    """amplitude * (1 - cos(2 pi x)): a single-harmonic well with minimum 0 at x=0."""

    amplitude: float

    feature_scale: float = field(default=1.0, init=False)
    period: float = field(default=1.0, init=False)

    def deriv(self, x, order: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if order == 0:
            return self.amplitude * (1.0 - np.cos(TWO_PI * x))
        # d^m/dx^m [-cos(2 pi x)] = -(2 pi)^m cos(2 pi x + m pi/2)
        return -self.amplitude * TWO_PI**order * np.cos(TWO_PI * x + order * math.pi / 2.0)

    def deriv_sup(self, order: int) -> float:
        if order == 0:
            return 2.0 * abs(self.amplitude)
        return abs(self.amplitude) * TWO_PI**order

    def holder_sup(self, order: int, theta: float) -> float:
        # sup_x |f^(m)(x+eta) - f^(m)(x)| = amp (2 pi)^m * 2 |sin(pi eta)|
        eta = self.feature_scale / _HOLDER_DIVISOR
        amp = abs(self.amplitude) * TWO_PI**order if order > 0 else abs(self.amplitude)
        return amp * 2.0 * abs(math.sin(math.pi * eta)) / eta**theta

    def reflected(self) -> "CosineWell":
        return self


@dataclass(frozen=True)
class MollifierBump:
    """height * phi((x - center)/half_width) with the exp-reciprocal profile.

    Support is [center - half_width, center + half_width] modulo 1; the peak
    value is exactly `height` at `center`.
    """

    height: float
    half_width: float
    center: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 < self.half_width <= 0.5:
            raise TwistFamilyError(
                f"bump half-width must lie in (0, 1/2] to avoid self-overlap, got {self.half_width}"
            )

    @property
    def feature_scale(self) -> float:
        return self.half_width

    period: float = field(default=1.0, init=False)

    def deriv(self, x, order: int = 0) -> np.ndarray:
        t = _periodic_offset(x, self.center) / self.half_width
        return self.height * self.half_width ** (-order) * _bump_profile(t, order)

    def deriv_sup(self, order: int) -> float:
        return abs(self.height) * self.half_width ** (-order) * _bump_profile_sup(order)

    def holder_sup(self, order: int, theta: float) -> float:
        eta = self.half_width / _HOLDER_DIVISOR
        ts = self.center + self.half_width * np.linspace(-1.0, 1.0, 4097)
        hi = self.deriv(ts + eta, order)
        lo = self.deriv(ts, order)
        return float(np.max(np.abs(hi - lo))) / eta**theta

    def reflected(self) -> "MollifierBump":
        return MollifierBump(self.height, self.half_width, (-self.center) % 1.0)


@dataclass(frozen=True)
class Rescaled:
    """q^{-2} * base(q x): period shrinks to 1/q, amplitude by q^{-2}."""

    base: "Potential"
    q: int

    def __post_init__(self) -> None:
        if not isinstance(self.q, int) or self.q == 0:
            raise TwistFamilyError(f"rescaling denominator must be a nonzero integer, got {self.q!r}")

    @property
    def feature_scale(self) -> float:
        return self.base.feature_scale / abs(self.q)

    @property
    def period(self) -> float:
        return self.base.period / abs(self.q)

    def deriv(self, x, order: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return float(self.q) ** (order - 2) * self.base.deriv(self.q * x, order)

    def deriv_sup(self, order: int) -> float:
        return abs(float(self.q)) ** (order - 2) * self.base.deriv_sup(order)

    def holder_sup(self, order: int, theta: float) -> float:
        # With the step tied to the feature scale the rescaling acts exactly
        # as q^{m + theta - 2} on the base seminorm.
        return abs(float(self.q)) ** (order + theta - 2) * self.base.holder_sup(order, theta)

    def reflected(self) -> "Rescaled":
        return Rescaled(self.base.reflected(), self.q)


@dataclass(frozen=True)
class Upscaled:
    """m^2 * base(x / m): the exact inverse of rescaling by m.

    Applied to a 1/m-periodic primitive this restores period 1; it is used
    to pose a finely-periodic family as the equivalent unit-period problem
    (x -> x/m maps stationary configurations to stationary configurations
    and multiplies every action by m^2).
    """

    base: object
    m: int

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or self.m < 1:
            raise TwistFamilyError(f"upscaling factor must be a positive integer, got {self.m!r}")

    @property
    def feature_scale(self) -> float:
        return self.base.feature_scale * self.m

    @property
    def period(self) -> float:
        return self.base.period * self.m

    def deriv(self, x, order: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return float(self.m) ** (2 - order) * self.base.deriv(x / self.m, order)

    def deriv_sup(self, order: int) -> float:
        return float(self.m) ** (2 - order) * self.base.deriv_sup(order)

    def holder_sup(self, order: int, theta: float) -> float:
        return float(self.m) ** (2 - order - theta) * self.base.holder_sup(order, theta)

    def reflected(self) -> "Upscaled":
        return Upscaled(self.base.reflected(), self.m)


@dataclass(frozen=True)
class Potential:
    """Signed sum of periodic primitives; the V in h(x,x') = quad(x-x')^2/2 + V(x')."""

    terms: tuple = ()  # tuple of (coefficient, primitive)

    def __call__(self, x) -> np.ndarray:
        return self.deriv(x, 0)

    def deriv(self, x, order: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for coef, term in self.terms:
            out = out + coef * term.deriv(x, order)
        return out

    def deriv_sup(self, order: int) -> float:
        return float(sum(abs(coef) * term.deriv_sup(order) for coef, term in self.terms))

    def holder_sup(self, order: int, theta: float) -> float:
        return float(sum(abs(coef) * term.holder_sup(order, theta) for coef, term in self.terms))

    @property
    def feature_scale(self) -> float:
        scales = [term.feature_scale for _, term in self.terms]
        return min(scales) if scales else 1.0

    @property
    def period(self) -> float:
        """Smallest common translation period of the terms (1/integer each).

        The sum of 1/m- and 1/m'-periodic functions is 1/gcd(m, m')-periodic;
        anything that does not look like 1/integer falls back to period 1.
        """
        g = 0
        for _, term in self.terms:
            p = term.period
            m = round(1.0 / p) if p > 0 else 1
            if abs(m * p - 1.0) > 1e-9 or m < 1:
                return 1.0
            g = math.gcd(g, m)
        return 1.0 / g if g > 0 else 1.0

    @property
    def is_zero(self) -> bool:
        return all(coef == 0.0 for coef, _ in self.terms) if self.terms else True

    def __add__(self, other: "Potential") -> "Potential":
        return Potential(self.terms + other.terms)

    def __neg__(self) -> "Potential":
        return Potential(tuple((-coef, term) for coef, term in self.terms))

    def __sub__(self, other: "Potential") -> "Potential":
        return self + (-other)

    def reflected(self) -> "Potential":
        return Potential(tuple((coef, term.reflected()) for coef, term in self.terms))

    def upscaled(self, m: int) -> "Potential":
        """m^2 * V(x / m), unwrapping matching rescaled terms exactly."""
        terms = []
        for coef, term in self.terms:
            if isinstance(term, Rescaled) and term.q == m:
                terms.extend((coef * c2, t2) for c2, t2 in term.base.terms)
            else:
                terms.append((coef, Upscaled(term, m)))
        return Potential(tuple(terms))

    def grid_minimum(self, points: int = 4096) -> tuple[float, float]:
        """(argmin, min) over one period, grid scan plus local Newton refinement."""
        xs = np.arange(points) / points
        vals = self.deriv(xs, 0)
        i = int(np.argmin(vals))
        x = float(xs[i])
        for _ in range(40):
            g = float(self.deriv(x, 1))
            hcurv = float(self.deriv(x, 2))
            if hcurv <= 0:
                break
            step = g / hcurv
            x -= step
            if abs(step) < 1e-15:
                break
        x %= 1.0
        candidates = [x, float(xs[i])]
        best = min(candidates, key=lambda u: float(self.deriv(u, 0)))
        return best, float(self.deriv(best, 0))


# ---------------------------------------------------------------------------
# generating function
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratingFunction:
    """h(x, x') = quad * (x - x')^2 / 2 + V(x').

    The twist condition is d2h/dx dx' = -quad < 0, so quad must be positive
    for any dynamical use; quad == 0 appears only for differences fed to the
    norm estimator.  h(x+1, x'+1) = h(x, x') holds by construction.
    """

    potential: Potential = Potential()
    quad: float = 1.0
    label: str = "h"
    params: PerturbationParams | None = None

    def __call__(self, x, xp) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        xp = np.asarray(xp, dtype=float)
        return 0.5 * self.quad * (x - xp) ** 2 + self.potential.deriv(xp, 0)

    def d1(self, x, xp) -> np.ndarray:
        return self.quad * (np.asarray(x, float) - np.asarray(xp, float))

    def d2(self, x, xp) -> np.ndarray:
        return self.quad * (np.asarray(xp, float) - np.asarray(x, float)) + self.potential.deriv(xp, 1)

    def d11(self, x, xp) -> np.ndarray:
        return np.broadcast_to(np.asarray(self.quad, float), np.broadcast(np.asarray(x), np.asarray(xp)).shape).copy()

    def d12(self, x, xp) -> np.ndarray:
        return np.broadcast_to(np.asarray(-self.quad, float), np.broadcast(np.asarray(x), np.asarray(xp)).shape).copy()

    def d22(self, x, xp) -> np.ndarray:
        return self.quad + self.potential.deriv(xp, 2)

    def require_twist(self) -> None:
        if not self.quad > 0:
            raise TwistFamilyError(f"twist condition requires quad > 0, got {self.quad}")

    @property
    def symmetry_period(self) -> float:
        """Exact translation symmetry x -> x + s of the whole map.

        1 for the plain families; 1/q after rescaling.  Ground-state
        uniqueness and connection targets are both understood modulo this
        symmetry (the shear part is translation-invariant at any s).
        """
        return self.potential.period

    def difference(self, other: "GeneratingFunction") -> "GeneratingFunction":
        return GeneratingFunction(
            potential=self.potential - other.potential,
            quad=self.quad - other.quad,
            label=f"{self.label}-{other.label}",
            params=self.params or other.params,
        )

    def upscaled(self, m: int) -> "GeneratingFunction":
        """The equivalent unit-period problem H(y, y') = m^2 h(y/m, y'/m).

        When the potential is 1/m-periodic, x -> m x is an exact bijection
        between the stationary configurations of h and of H that multiplies
        actions by m^2 and rotation symbols by m; the quadratic part is
        invariant because its two scalings cancel.
        """
        return GeneratingFunction(
            potential=self.potential.upscaled(m),
            quad=self.quad,
            label=f"{self.label}*{m}",
            params=self.params,
        )

    def reflect(self) -> "GeneratingFunction":
        """Conjugation x -> -x: stationary configurations map to stationary
        configurations with their rotation symbol negated."""
        return GeneratingFunction(
            potential=self.potential.reflected(),
            quad=self.quad,
            label=f"{self.label}~",
            params=self.params,
        )


# ---------------------------------------------------------------------------
# family constructors
# ---------------------------------------------------------------------------


def make_h0() -> GeneratingFunction:
    """The integrable shear: h(x, x') = (x - x')^2 / 2."""
    return GeneratingFunction(potential=Potential(), quad=1.0, label="h0")


def make_un(params: PerturbationParams) -> Potential:
    """Cosine well n^{-a} (1 - cos 2 pi x); vanishes to second order at 0."""
    return Potential(((1.0, CosineWell(params.well_amplitude)),))


def bump_spec(params: PerturbationParams) -> BumpSpec:
    return BumpSpec(center=0.5, half_width=params.bump_half_width, height=params.bump_height)


def make_vn(params: PerturbationParams) -> Potential:
    """Mollifier bump of height n^{-s} on [1/2 - n^{-a}, 1/2 + n^{-a}].

    The C^k norm is bounded by ||profile||_{C^k} * n^{a k - s}
    = ||profile||_{C^k} * n^{-s'} with s' = 2a, uniformly in n.
    """
    if params.k < 0:
        raise TwistFamilyError(f"negative smoothness order: {params.k}")
    spec = bump_spec(params)
    return Potential(((1.0, MollifierBump(spec.height, spec.half_width, spec.center)),))


def make_hn(params: PerturbationParams, include_bump: bool = True) -> GeneratingFunction:
    """Perturbed generating function h0 + well(x') [+ bump(x')].

    With include_bump=False this is the bump-free comparison function
    (addressable as "hbar_n" from the command line).
    """
    pot = make_un(params)
    if include_bump:
        pot = pot + make_vn(params)
    return GeneratingFunction(
        potential=pot,
        quad=1.0,
        label="hn" if include_bump else "hbar_n",
        params=params,
    )


def rescale(potential: Potential, q: int) -> Potential:
    """q^{-2} potential(q x): the renormalisation that trades amplitude for frequency."""
    if not isinstance(q, int) or q == 0:
        raise TwistFamilyError(f"rescaling denominator must be a nonzero integer, got {q!r}")
    if abs(q) == 1:
        return potential
    return Potential(((1.0, Rescaled(potential, q)),))


def make_htilde(params: PerturbationParams) -> GeneratingFunction:
    """h0 + n^{-2} (well + bump)(n x'): the compressed near-integrable form.

    The compression index equals params.n; studies that walk along a
    sequence of denominators q substitute params.with_n(q).
    """
    inner = make_un(params) + make_vn(params)
    return GeneratingFunction(
        potential=rescale(inner, params.n),
        quad=1.0,
        label="htilde_n",
        params=params,
    )


_BY_NAME = {
    "h0": lambda params: make_h0(),
    "hn": lambda params: make_hn(params, include_bump=True),
    "hbar_n": lambda params: make_hn(params, include_bump=False),
    "htilde_n": lambda params: make_htilde(params),
}


def make_by_name(name: str, params: PerturbationParams | None = None) -> GeneratingFunction:
    """CLI-facing constructor registry: h0, hn, hbar_n, htilde_n."""
    if name not in _BY_NAME:
        raise TwistFamilyError(f"unknown generating function {name!r}; choose from {sorted(_BY_NAME)}")
    if name != "h0" and params is None:
        raise TwistFamilyError(f"generating function {name!r} needs perturbation parameters")
    return _BY_NAME[name](params)


# ---------------------------------------------------------------------------
# Dirichlet approximants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DirichletApproximant:
    """Continued-fraction convergent p/q of omega with |q omega - p| < 1/q."""

    p: int
    q: int
    omega: float

    def __post_init__(self) -> None:
        if self.q < 1:
            raise TwistFamilyError(f"denominator must be positive, got {self.q}")
        if math.gcd(abs(self.p), self.q) not in (0, 1):
            raise TwistFamilyError(f"{self.p}/{self.q} is not in lowest terms")
        if not abs(self.q * self.omega - self.p) < 1.0 / self.q:
            raise TwistFamilyError(
                f"{self.p}/{self.q} fails the Dirichlet inequality for omega={self.omega}"
            )

    @property
    def value(self) -> float:
        return self.p / self.q


def _looks_rational(omega: float, tol: float = 1e-12, max_den: int = 10**6) -> bool:
    frac = Fraction(omega).limit_denominator(max_den)
    return abs(frac.denominator * omega - frac.numerator) <= tol


def dirichlet_approximants(omega: float, count: int) -> list[DirichletApproximant]:
    """First `count` continued-fraction convergents of omega with q >= 2.

    Denominators increase strictly along the list.  Rational input (within
    1e-12 of p/q with q <= 10^6, measured through |q omega - p|) is refused:
    the convergent list would terminate instead of growing.
    """
    if count < 1:
        raise TwistFamilyError(f"count must be positive, got {count}")
    if not math.isfinite(omega):
        raise TwistFamilyError(f"omega must be finite, got {omega}")
    if _looks_rational(omega):
        raise TwistFamilyError(
            f"omega={omega} is rational to working precision; Dirichlet sequence undefined"
        )
    result: list[DirichletApproximant] = []
    # Standard continued-fraction recurrence with float guard rails.
    p_prev, q_prev = 1, 0
    p_cur, q_cur = int(math.floor(omega)), 1
    x = omega - math.floor(omega)
    while len(result) < count:
        if x <= 0 or q_cur > 10**12:
            raise TwistFamilyError(
                f"cannot produce {count} reliable convergents of omega={omega} "
                f"at double precision (got {len(result)})"
            )
        x = 1.0 / x
        a = int(math.floor(x))
        x -= a
        p_cur, p_prev = a * p_cur + p_prev, p_cur
        q_cur, q_prev = a * q_cur + q_prev, q_cur
        if q_cur >= 2:
            result.append(DirichletApproximant(p_cur, q_cur, omega))
    return result


# ---------------------------------------------------------------------------
# C^r norm estimate
# ---------------------------------------------------------------------------


def cr_norm_estimate(f: GeneratingFunction | Potential, r: float) -> float:
    """Upper estimate of the C^r norm of a potential-type difference.

    For integer r this is the max over derivative orders m <= r of the
    per-term grid sups (triangle inequality across terms).  For fractional
    r = m + theta the Holder seminorm of the m-th derivative is added,
    measured by divided differences at one 64th of each term's feature
    scale, which keeps the estimate sharp under rescaling.
    """
    if isinstance(f, GeneratingFunction):
        if f.quad != 0.0:
            raise TwistFamilyError(
                "norm estimate applies to potential-type differences; subtract the shear part first"
            )
        pot = f.potential
    else:
        pot = f
    if not 0.0 <= r <= 4.0:
        raise TwistFamilyError(f"derivative order r must lie in [0, 4], got {r}")
    m = int(math.floor(r))
    theta = r - m
    if theta < 1e-12:
        theta = 0.0
    est = max(pot.deriv_sup(order) for order in range(m + 1))
    if theta > 0.0:
        est = max(est, pot.holder_sup(m, theta))
    return float(est)


# ---------------------------------------------------------------------------
# twist map
# ---------------------------------------------------------------------------


def twist_map_step(h: GeneratingFunction, x: float, y: float) -> tuple[float, float]:
    """One step of the twist map generated by h: y = -d1(x, x'), y' = d2(x, x').

    The quadratic shear part makes the implicit equation linear, so the
    solve is exact; the residual is still checked so a structural change
    in the family cannot pass silently.
    """
    h.require_twist()
    xp = x + y / h.quad
    resid = -float(h.d1(x, xp)) - y
    if abs(resid) > 1e-12 * max(1.0, abs(y)):
        xp = _implicit_step(h, x, y)
    yp = float(h.d2(x, xp))
    return float(xp), yp


def _implicit_step(h: GeneratingFunction, x: float, y: float) -> float:
    """Guarded bracket/Brent solve of -d1(x, x') = y in x' (monotone by twist)."""
    from scipy.optimize import brentq

    def g(t: float) -> float:
        return -float(h.d1(x, t)) - y

    lo = x + y / h.quad - 0.5
    hi = x + y / h.quad + 0.5
    for _ in range(60):
        if g(lo) <= 0.0 <= g(hi) or g(lo) >= 0.0 >= g(hi):
            break
        lo -= (hi - lo) / 2
        hi += (hi - lo) / 2
    else:
        raise TwistFamilyError("implicit twist step failed to bracket")
    return float(brentq(g, lo, hi, xtol=1e-14))


def twist_orbit(h: GeneratingFunction, x0: float, y0: float, steps: int) -> np.ndarray:
    """Orbit segment [(x_0, y_0), ..., (x_steps, y_steps)] of the twist map."""
    if steps < 0:
        raise TwistFamilyError(f"steps must be nonnegative, got {steps}")
    out = np.empty((steps + 1, 2), dtype=float)
    out[0] = (x0, y0)
    x, y = float(x0), float(y0)
    for i in range(1, steps + 1):
        x, y = twist_map_step(h, x, y)
        out[i] = (x, y)
    return out
