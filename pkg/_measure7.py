import math
import time

import numpy as np

from twistvar.generating import GOLDEN_MEAN, PerturbationParams, make_hn, dirichlet_approximants
from twistvar.barrier import peierls_rational, peierls_zero_plus
from twistvar.minimizer import DegenerateSymbolError

for n in (8, 16, 32):
    params = PerturbationParams(n, a=1.0, k=2, delta=0.05)
    h = make_hn(params)
    om = GOLDEN_MEAN * n ** (-0.55)
    width = n ** (-1.0)
    xis = 0.5 + width * np.linspace(-1, 1, 9)
    sup_last = 0.0
    sup_ext = 0.0
    t0 = time.time()
    for xi in xis:
        vals = []
        ds = []
        for ap in dirichlet_approximants(om, 10):
            if ap.q > 100:
                break
            variant = "plus" if ap.value < om else "minus"
            try:
                v = peierls_rational(h, ap.p, ap.q, variant, float(xi))
            except DegenerateSymbolError:
                continue
            vals.append(v)
            ds.append(abs(om - ap.value))
        zp = peierls_zero_plus(h, float(xi))
        d_last = abs(vals[-1] - zp)
        # sqrt-modulus extrapolation using the last two convergents
        s1, s2 = math.sqrt(ds[-2]), math.sqrt(ds[-1])
        c = (vals[-2] - vals[-1]) / (s1 - s2)
        v_ext = vals[-1] - c * s2
        d_ext = abs(v_ext - zp)
        sup_last = max(sup_last, d_last)
        sup_ext = max(sup_ext, d_ext)
    print(
        f"n={n}: sup|last-P0+|={sup_last:.3e}  sup|extrap-P0+|={sup_ext:.3e} "
        f"qs={[ (a.p, a.q) for a in dirichlet_approximants(om, 10) if a.q <= 100 ]} "
        f"[{time.time()-t0:.1f}s]"
    )
