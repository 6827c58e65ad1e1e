"""Probe the exact-rescaling identity h_Q(x, x') = q^{-2} h_P(qx, qx')."""
import math
import time

import numpy as np

from twistvar.generating import (
    GOLDEN_MEAN,
    GeneratingFunction,
    PerturbationParams,
    make_hn,
    make_un,
    make_vn,
    rescale,
)
from twistvar.minimizer import minimize_periodic, require_nondegenerate
from twistvar.barrier import peierls_irrational, peierls_rational

p8 = PerturbationParams(8, a=1.0, k=2)
hP = make_hn(p8)
Q = 4
hQ = GeneratingFunction(
    potential=rescale(make_un(p8) + make_vn(p8), Q), quad=1.0, label="hQ", params=p8
)
print("symmetry period hQ:", hQ.symmetry_period, " hP:", hP.symmetry_period)

# pointwise identity
rng = np.random.default_rng(7)
xs = rng.uniform(-2, 2, 64)
ys = xs + rng.uniform(-1, 1, 64)
lhs = np.asarray(hQ(xs, ys), dtype=float)
rhs = np.asarray(hP(Q * xs, Q * ys), dtype=float) / Q**2
print("pointwise identity sup diff:", float(np.max(np.abs(lhs - rhs))))

t0 = time.time()
require_nondegenerate(hQ, 1, 6)
print(f"hQ (1,6) nondegenerate ok [{time.time()-t0:.2f}s]")

cfgQ, repQ = minimize_periodic(hQ, 1, 6)
cfgP, repP = minimize_periodic(hP, 2, 3)
# y = 4x is (4,6)-periodic for hP: the (2,3) orbit traversed twice
print(
    "ground action Q(1,6):", repQ.action,
    " 2*P(2,3)/16:", 2 * repP.action / 16,
    " diff:", repQ.action - 2 * repP.action / 16,
)
yy = np.sort(np.mod(4 * np.asarray(cfgQ.x), 1.0))
zz = np.sort(np.mod(np.asarray(cfgP.x), 1.0))
print("mapped orbit values:", np.round(yy, 6), " P orbit:", np.round(zz, 6))

for xi in (0.03, 0.13, 0.37):
    for var in ("plus", "minus"):
        t0 = time.time()
        vQ = peierls_rational(hQ, 1, 6, var, xi)
        vP = peierls_rational(hP, 2, 3, var, (4 * xi) % 1.0)
        print(
            f"  (1,6){var} xi={xi}: Q={vQ:.9e}  P/16={vP/16:.9e} "
            f"diff={vQ - vP/16:+.2e} [{time.time()-t0:.1f}s]"
        )

om = GOLDEN_MEAN / Q
t0 = time.time()
rQ = peierls_irrational(hQ, om, 0.13)
print(
    f"irrational Q omega={om:.6f}: value={rQ.value:.6e} err={rQ.error_estimate:.1e} "
    f"stable={rQ.stable} res_lim={rQ.resolution_limited} used={rQ.convergents_used} "
    f"[{time.time()-t0:.1f}s]"
)
t0 = time.time()
rP = peierls_irrational(hP, GOLDEN_MEAN, (4 * 0.13) % 1.0)
print(
    f"irrational P/16: value={rP.value/16:.6e} stable={rP.stable} "
    f"used={rP.convergents_used} [{time.time()-t0:.1f}s]"
)
print("irrational diff:", rQ.value - rP.value / 16)
print("DONE")
