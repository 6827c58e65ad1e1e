import numpy as np

from twistvar.generating import PerturbationParams, make_hn
from twistvar.minimizer import minimize_advancing


def fit(ns, meds):
    ln = np.log(np.asarray(ns, dtype=float))
    lg = np.log(np.asarray(meds, dtype=float))
    A = np.vstack([ln, np.ones_like(ln)]).T
    coef, res, *_ = np.linalg.lstsq(A, lg, rcond=None)
    ss = float(np.sum((lg - lg.mean()) ** 2))
    r2 = 1.0 - float(res[0]) / ss if len(res) else 1.0
    return coef[0], r2


ns = (16, 32, 64, 128)
for a in (1.0, 2.0):
    stat_sized = []
    stat_pin05 = []
    for n in ns:
        params = PerturbationParams(n, a=a, k=2, delta=0.05)
        h = make_hn(params, include_bump=False)
        cfg, rep = minimize_advancing(h, 0, 1, "+")
        x = np.asarray(cfg.x)
        # size-biased median: gap containing xi, median over xi-grid in window
        grid = np.array([k / 64 for k in range(16, 49)])
        idx = np.searchsorted(x, grid, side="right") - 1
        g = x[idx + 1] - x[idx]
        stat_sized.append(float(np.median(g)))
        # pinned-at-1/2 configuration's own median gap over window sites
        cfg2, rep2 = minimize_advancing(h, 0, 1, "+", constraint=(0, 0.5))
        y = np.asarray(cfg2.x)
        sel = np.where((y >= 0.25) & (y <= 0.75))[0]
        sel = sel[(sel >= 0) & (sel < len(y) - 1)]
        gaps2 = y[sel + 1] - y[sel]
        stat_pin05.append(float(np.median(gaps2)) if len(gaps2) else float("nan"))
        print(f"a={a} n={n}: sized={stat_sized[-1]:.6f} (r={stat_sized[-1]*n**(a/2):.4f}) "
              f"pin05={stat_pin05[-1]:.6f} (r={stat_pin05[-1]*n**(a/2):.4f}, {len(gaps2)} gaps)")
    s1, r1 = fit(ns, stat_sized)
    print(f"a={a} sized: slope={s1:+.5f} r2={r1:.6f}")
    if not any(np.isnan(stat_pin05)):
        s2, r2_ = fit(ns, stat_pin05)
        print(f"a={a} pin05: slope={s2:+.5f} r2={r2_:.6f}")
