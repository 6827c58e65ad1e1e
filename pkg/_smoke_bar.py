import time
import numpy as np
import math
from twistvar.generating import make_hn, make_h0, PerturbationParams, GOLDEN_MEAN as GOLDEN
from twistvar.minimizer import DegenerateSymbolError, SolverError, action, _ground_orbit
from twistvar.barrier import (
    Rational, Irrational, peierls_rational, peierls_zero_plus, zero_plus_actions,
    peierls_irrational, barrier_profile, invariant_circle_exists,
)

h8 = make_hn(PerturbationParams(n=8, a=1.0, k=2, delta=0.05))
h16 = make_hn(PerturbationParams(n=16, a=1.0, k=2, delta=0.05))
h0 = make_h0()

t0 = time.time()

# --- exact variant, q=1: closed form vs potential difference -----------------
z0 = _ground_orbit(h8, 0, 1)[0][0]
for xi in (0.13, 0.5, 0.77):
    got = peierls_rational(h8, 0, 1, "exact", xi)
    want = float(h8(xi, xi)) - float(h8(z0, z0))
    print(f"exact(0,1) xi={xi}: {got:.9e}  oracle diff {abs(got - want):.2e}")

# --- exact variant, q=2: independent 2-variable dense scan oracle ------------
zz = np.array(_ground_orbit(h8, 1, 2)[0])
ground = action(h8, np.array([zz[0], zz[1], zz[0] + 1]))
for xi in (0.1, 0.35, 0.6):
    got = peierls_rational(h8, 1, 2, "exact", xi)
    ys = np.linspace(xi, xi + 1.0, 20001)
    vals = h8(np.full_like(ys, xi), ys) + h8(ys, np.full_like(ys, xi + 1.0))
    k = int(np.argmin(vals))
    # parabolic refine
    y = ys[k]
    for _ in range(60):
        g = float(h8.d2(xi, y) + h8.d1(y, xi + 1.0))
        c = float(h8.d22(xi, y) + h8.d11(y, xi + 1.0))
        if c <= 1e-12 or abs(g) < 2e-15:
            break
        y -= g / c
    want = float(h8(xi, y) + h8(y, xi + 1.0)) - ground
    want = max(want, 0.0)
    print(f"exact(1,2) xi={xi}: {got:.9e}  oracle diff {abs(got - want):.2e}  nonneg={got >= -1e-12}")

# --- dual route: zero_plus vs rational(0,1,plus) ------------------------------
print("\ndual route:")
rng = np.random.default_rng(7)
worst = 0.0
for xi in rng.random(6):
    a_ = peierls_zero_plus(h8, float(xi))
    b_ = peierls_rational(h8, 0, 1, "plus", float(xi))
    worst = max(worst, abs(a_ - b_))
    print(f"  xi={xi:.4f}: zero_plus={a_:.9e} rational={b_:.9e} diff={abs(a_-b_):.2e}")
print(f"  worst diff: {worst:.2e} (must be <= 1e-9)")

# --- key physics anchors -------------------------------------------------------
v = peierls_zero_plus(h8, 0.5)
print(f"\nzero_plus(h8, 1/2) = {v:.6e}  >= 8^-3={8**-3:.3e}: {v >= 8**-3 - 1e-10}")
acts = zero_plus_actions(h8, 0.5)
acts2 = zero_plus_actions(h8, 0.5, width=2 * acts.truncation_width)
print(f"truncation doubling: {abs(acts.barrier - acts2.barrier):.2e} (<1e-10)")

# --- h0 behaviour ---------------------------------------------------------------
for (p, q) in ((0, 1), (1, 2), (1, 3)):
    try:
        peierls_rational(h0, p, q, "plus", 0.3)
        print(f"h0 {p}/{q}: NO RAISE (bad)")
    except DegenerateSymbolError:
        print(f"h0 {p}/{q}: DegenerateSymbolError ok")
r = peierls_irrational(h0, GOLDEN, 0.3)
print(f"h0 irrational: value={r.value} stable={r.stable} used={r.convergents_used}")
prof0 = barrier_profile(h0, Irrational(GOLDEN), 8)
print(f"h0 profile sup={prof0.sup_value:.2e} circle={invariant_circle_exists(prof0, 1e-8)}")

# --- MR stabilisation at n=16 ---------------------------------------------------
omega = GOLDEN * 16 ** (-1.05)
t1 = time.time()
r16 = peierls_irrational(h16, omega, 0.5)
print(f"\nMR n=16 omega={omega:.6f}: value={r16.value:.6e} err={r16.error_estimate:.2e} "
      f"stable={r16.stable} res_lim={r16.resolution_limited} used={r16.convergents_used} "
      f"[{time.time()-t1:.1f}s]")
print(f"  threshold n^-s/2 = {16.0**-3/2:.3e}; exceeds: {r16.value > 16.0**-3/2}")

t1 = time.time()
prof16 = barrier_profile(h16, Irrational(omega), 16)
print(f"MR profile(16pts): sup={prof16.sup_value:.6e} flags={int(prof16.flags.sum())} "
      f"stable={prof16.metadata['stable']} res_lim={prof16.metadata['resolution_limited']} "
      f"used={prof16.metadata['convergents_used']} [{time.time()-t1:.1f}s]")
print(f"  circle_exists(tol=n^-s/2): {invariant_circle_exists(prof16, 16.0**-3/2)} (want False)")

print(f"\nTOTAL {time.time()-t0:.1f}s")
