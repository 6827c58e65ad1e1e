import math
import time

import numpy as np

from twistvar.generating import (
    GOLDEN_MEAN,
    PerturbationParams,
    cr_norm_estimate,
    make_h0,
    make_hn,
    make_htilde,
    twist_orbit,
)
from twistvar.barrier import peierls_irrational, peierls_zero_plus
from twistvar.minimizer import count_in_interval, minimize_advancing

print("== approx-study cost probe ==")
for n in (8, 16, 32):
    params = PerturbationParams(n, a=1.0, k=2, delta=0.05)
    h = make_hn(params)
    om = GOLDEN_MEAN * n ** (-0.55)
    width = n ** (-1.0)
    for xi in (0.5 - width, 0.5, 0.5 + 0.43 * width):
        t0 = time.time()
        ir = peierls_irrational(h, om, xi)
        t1 = time.time()
        zp = peierls_zero_plus(h, xi)
        t2 = time.time()
        print(
            f"n={n} xi={xi:.5f}: P_om={ir.value:.6e} (err {ir.error_estimate:.1e}, "
            f"stable={ir.stable}, rl={ir.resolution_limited}, q={[c[1] for c in ir.convergents_used]}) "
            f"P0+={zp:.6e} diff={abs(ir.value-zp):.3e} [{t1-t0:.1f}s + {t2-t1:.1f}s]"
        )

print("== counting (a=1, delta=0.05, h_n) ==")
counts = []
for n in (16, 32, 64):
    params = PerturbationParams(n, a=1.0, k=2, delta=0.05)
    h = make_hn(params)
    cfg, rep = minimize_advancing(h, 0, 1, "+")
    eps = math.exp(-(n ** (0.05 / 2)))
    c = count_in_interval(cfg, (eps, 0.5))
    counts.append((n, eps, c))
    print(f"n={n}: eps={eps:.4f} count={c}")
ln = np.log([c[0] for c in counts])
lc = np.log1p([c[2] for c in counts])
A = np.vstack([ln, np.ones_like(ln)]).T
coefc, *_ = np.linalg.lstsq(A, lc, rcond=None)
print(f"log1p count slope={coefc[0]:+.4f} (bound {0.5+0.025+0.05})")

print("== shear sandwich ==")
h0 = make_h0()
om = GOLDEN_MEAN
for k in (1, 2, 3):
    for c0 in (0.0, 0.37, 0.71):
        steps = int(math.ceil((c0 + k) / om)) + 3
        orbit = twist_orbit(h0, 0.0, om, steps)
        xs = orbit[:, 0]
        cnt = int(np.count_nonzero((xs >= c0) & (xs < c0 + k)))
        lo, hi = k / om - 1, k / om + 1
        print(f"k={k} c0={c0}: count={cnt} in [{lo:.4f},{hi:.4f}] ok={bool(lo <= cnt <= hi)}")

print("== mcor ==")
for r in (3.0, 0.0):
    rows = []
    for qn in (8, 16, 32, 64):
        params = PerturbationParams(qn, a=1.9, k=2, delta=0.05)
        ht = make_htilde(params)
        norm = cr_norm_estimate(ht.difference(h0), r)
        rows.append((qn, norm))
    ln = np.log([row[0] for row in rows])
    lv = np.log([row[1] for row in rows])
    A = np.vstack([ln, np.ones_like(ln)]).T
    coefm, resm, *_ = np.linalg.lstsq(A, lv, rcond=None)
    ss = float(np.sum((lv - lv.mean()) ** 2))
    r2m = 1.0 - float(resm[0]) / ss if len(resm) else 1.0
    print(f"r={r}: norms={[f'{v:.3e}' for _, v in rows]} slope={coefm[0]:+.4f} r2={r2m:.5f} "
          f"(expect {r - 1.9 - 2:+.2f})")
