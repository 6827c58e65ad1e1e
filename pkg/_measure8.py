import math
import time

import numpy as np

from twistvar.generating import GOLDEN_MEAN, PerturbationParams, make_hn, dirichlet_approximants
from twistvar.barrier import peierls_irrational, peierls_zero_plus

G = GOLDEN_MEAN

rules = {
    "R1 g*n^-(a/2+d)": lambda n: G * n ** (-0.55),
    "R2 g*n^-(a+d)": lambda n: G * n ** (-1.05),
    "R3 noble": lambda n: 1.0 / (math.ceil(n ** 0.55 / G) + G),
    "R4 half-R1": lambda n: 0.5 * G * n ** (-0.55),
}

for name, rule in rules.items():
    print(f"== {name} ==")
    sups = []
    ok = True
    for n in (8, 16, 32):
        params = PerturbationParams(n, a=1.0, k=2, delta=0.05)
        h = make_hn(params)
        om = rule(n)
        if not (0 < om < n ** (-0.55)):
            print(f"  n={n}: om={om:.6f} OUT OF WINDOW (bound {n**-0.55:.6f})")
            ok = False
            continue
        width = n ** (-1.0)
        xis = 0.5 + width * np.linspace(-1, 1, 9)
        sup = 0.0
        t0 = time.time()
        stable_all = True
        for xi in xis:
            ir = peierls_irrational(h, om, float(xi))
            zp = peierls_zero_plus(h, float(xi))
            sup = max(sup, abs(ir.value - zp))
            stable_all = stable_all and ir.stable
        sups.append(sup)
        qs = [(a.p, a.q) for a in dirichlet_approximants(om, 10) if a.q <= 400][:6]
        print(f"  n={n}: om={om:.6f} sup={sup:.3e} stable={stable_all} qs={qs} [{time.time()-t0:.1f}s]")
    if ok and len(sups) == 3:
        dec = sups[0] > sups[1] > sups[2]
        print(f"  strictly decreasing: {dec}")
