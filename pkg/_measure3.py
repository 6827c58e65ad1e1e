import math
import time

import numpy as np

from twistvar.generating import PerturbationParams, make_hn
from twistvar.minimizer import minimize_advancing


def fit(ns, meds):
    ln = np.log(ns)
    lg = np.log(meds)
    A = np.vstack([ln, np.ones_like(ln)]).T
    coef, res, *_ = np.linalg.lstsq(A, lg, rcond=None)
    ss = float(np.sum((lg - lg.mean()) ** 2))
    r2 = 1.0 - float(res[0]) / ss if len(res) else 1.0
    return coef[0], r2


for a in (1.0, 2.0):
    print(f"== pinned-gap medians, a={a} ==")
    ns = (16, 32, 64, 128)
    med_r: list[float] = []
    med_d: list[float] = []
    t0 = time.time()
    for n in ns:
        params = PerturbationParams(n, a=a, k=2, delta=0.05)
        h = make_hn(params, include_bump=False)
        grid = [k / 64 for k in range(16, 49)]  # [1/4, 3/4]
        right = []
        dbl = []
        for xi in grid:
            cfg, rep = minimize_advancing(h, 0, 1, "+", constraint=(0, xi))
            if not rep.converged:
                print(f"  NOT CONVERGED n={n} xi={xi}")
                continue
            x = np.asarray(cfg.x)
            s = int(np.argmin(np.abs(x - xi)))
            right.append(x[s + 1] - x[s])
            dbl.append(0.5 * (x[s + 1] - x[s - 1]))
        med_r.append(float(np.median(right)))
        med_d.append(float(np.median(dbl)))
        print(f"  n={n}: med_right={med_r[-1]:.6f} med_dbl2={med_d[-1]:.6f} "
              f"ratio_r={med_r[-1] * n ** (a / 2):.4f} [{time.time() - t0:.1f}s cum]")
    sr, r2r = fit(ns, med_r)
    sd, r2d = fit(ns, med_d)
    print(f"  right: slope={sr:+.4f} r2={r2r:.5f}   dbl/2: slope={sd:+.4f} r2={r2d:.5f} "
          f"(want {-a/2:+.2f}±0.05, r2>=0.98)")
