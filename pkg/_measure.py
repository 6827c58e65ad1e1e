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
from twistvar.minimizer import count_in_interval, minimize_advancing, spacing_profile

print("== spacing (a=1, hbar_n) ==")
meds = []
for n in (16, 32, 64, 128):
    t0 = time.time()
    params = PerturbationParams(n, a=1.0, k=2, delta=0.05)
    h = make_hn(params, include_bump=False)
    cfg, rep = minimize_advancing(h, 0, 1, "+")
    x = np.asarray(cfg.x)
    rows = spacing_profile(cfg, window=(0.25, 0.75))
    gaps = rows[:, 1]
    med = float(np.median(gaps))
    meds.append((n, med))
    # double gaps for interior points in window
    inside = (x[1:-1] >= 0.25) & (x[1:-1] <= 0.75)
    dbl = (x[2:] - x[:-2])[inside]
    thr = 2 * n ** (-0.5)
    up = 2 * math.sqrt(2) * n ** (-0.5)
    print(
        f"n={n}: conv={rep.converged} rows={len(gaps)} med={med:.6f} "
        f"min_dbl={dbl.min():.6f} thr={thr:.6f} ok={bool(dbl.min() >= thr)} "
        f"max_dbl={dbl.max():.6f} max_single={gaps.max():.6f} "
        f"up={up:.6f} single_ok={bool(gaps.max() <= up)} dbl_ok={bool(dbl.max() <= up)} "
        f"[{time.time()-t0:.2f}s]"
    )
ln = np.log([m[0] for m in meds])
lg = np.log([m[1] for m in meds])
A = np.vstack([ln, np.ones_like(ln)]).T
coef, res, *_ = np.linalg.lstsq(A, lg, rcond=None)
ss_tot = float(np.sum((lg - lg.mean()) ** 2))
r2 = 1.0 - float(res[0]) / ss_tot if len(res) else 1.0
print(f"a=1 slope={coef[0]:+.4f} r2={r2:.6f}")

print("== spacing (a=2) ==")
meds2 = []
for n in (16, 32, 64, 128):
    params = PerturbationParams(n, a=2.0, k=2, delta=0.05)
    h = make_hn(params, include_bump=False)
    cfg, rep = minimize_advancing(h, 0, 1, "+")
    rows = spacing_profile(cfg, window=(0.25, 0.75))
    med = float(np.median(rows[:, 1]))
    meds2.append((n, med))
    x = np.asarray(cfg.x)
    inside = (x[1:-1] >= 0.25) & (x[1:-1] <= 0.75)
    dbl = (x[2:] - x[:-2])[inside]
    thr = 2 * n ** (-1.0)
    print(f"n={n}: med={med:.6f} min_dbl={dbl.min():.6f} thr={thr:.6f} ok={bool(dbl.min() >= thr)}")
ln = np.log([m[0] for m in meds2])
lg = np.log([m[1] for m in meds2])
A = np.vstack([ln, np.ones_like(ln)]).T
coef2, res2, *_ = np.linalg.lstsq(A, lg, rcond=None)
ss_tot = float(np.sum((lg - lg.mean()) ** 2))
r22 = 1.0 - float(res2[0]) / ss_tot if len(res2) else 1.0
print(f"a=2 slope={coef2[0]:+.4f} r2={r22:.6f}")

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
lc = np.log([c[2] for c in counts])
A = np.vstack([ln, np.ones_like(ln)]).T
coefc, *_ = np.linalg.lstsq(A, lc, rcond=None)
print(f"count slope={coefc[0]:+.4f} (bound 0.55)")

print("== shear sandwich ==")
h0 = make_h0()
om = GOLDEN_MEAN
for k in (1, 2, 3):
    orbit = twist_orbit(h0, 0.0, om, int(math.ceil(k / om)) + 5)
    xs = orbit[:, 0]
    cnt = int(np.count_nonzero((xs >= 0.0) & (xs < k)))
    lo, hi = k / om - 1, k / om + 1
    print(f"k={k}: count={cnt} window=[{lo:.4f},{hi:.4f}] ok={bool(lo <= cnt <= hi)}")

print("== mcor (a=1.9) ==")
h0 = make_h0()
for r in (3.0, 0.0):
    rows = []
    for qn in (8, 16, 32, 64):
        params = PerturbationParams(qn, a=1.9, k=2, delta=0.05)
        ht = make_htilde(params)
        norm = cr_norm_estimate(ht.difference(h0), r)
        rows.append((qn, norm))
    ln = np.log([r_[0] for r_ in rows])
    lv = np.log([r_[1] for r_ in rows])
    A = np.vstack([ln, np.ones_like(ln)]).T
    coefm, *_ = np.linalg.lstsq(A, lv, rcond=None)
    print(f"r={r}: norms={[f'{v:.3e}' for _, v in rows]} slope={coefm[0]:+.4f} "
          f"(expect {r - 1.9 - 2:+.2f})")
