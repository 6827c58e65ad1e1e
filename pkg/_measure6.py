import time

import numpy as np

from twistvar.generating import GOLDEN_MEAN, PerturbationParams, make_hn
from twistvar.barrier import peierls_irrational, peierls_zero_plus

for n in (8, 16, 32):
    params = PerturbationParams(n, a=1.0, k=2, delta=0.05)
    h = make_hn(params)
    om = GOLDEN_MEAN * n ** (-0.55)
    width = n ** (-1.0)
    xis = 0.5 + width * np.linspace(-1, 1, 9)
    sup = 0.0
    t0 = time.time()
    for xi in xis:
        ir = peierls_irrational(h, om, float(xi), settle_tol=1e-8)
        zp = peierls_zero_plus(h, float(xi))
        d = abs(ir.value - zp)
        sup = max(sup, d)
    print(
        f"n={n}: om={om:.6f} sup|P_om-P0+|={sup:.3e} "
        f"last q={[c[1] for c in ir.convergents_used]} stable={ir.stable} "
        f"rl={ir.resolution_limited} err={ir.error_estimate:.1e} [{time.time()-t0:.1f}s]"
    )
