import math

import numpy as np

from twistvar.generating import PerturbationParams, make_hn
from twistvar.minimizer import minimize_advancing, spacing_profile

for n in (16, 32, 64, 128):
    params = PerturbationParams(n, a=1.0, k=2, delta=0.05)
    h = make_hn(params, include_bump=False)
    cfg, rep = minimize_advancing(h, 0, 1, "+")
    x = np.asarray(cfg.x)
    sel = (x > 0.05) & (x < 0.95)
    pts = x[sel]
    print(f"n={n} conv={rep.converged} pts(0.05,0.95)={np.array2string(pts, precision=4)}")
    rows = spacing_profile(cfg, window=(0.25, 0.75))
    print(f"  rows={rows[:, 1] if len(rows) else '[]'}")
    thr = 2 * n ** (-0.5)
    up = 2 * math.sqrt(2) * n ** (-0.5)
    idx = np.where((x >= 0.25) & (x <= 0.75))[0]
    idx = idx[(idx >= 1) & (idx <= len(x) - 2)]
    if len(idx):
        dbl = x[idx + 1] - x[idx - 1]
        sing = x[idx + 1] - x[idx]
        print(f"  dbl_min={dbl.min():.4f} thr={thr:.4f} sing_max={sing.max():.4f} up={up:.4f}")
