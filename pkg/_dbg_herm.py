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
from twistvar.minimizer import minimize_advancing, minimize_periodic
from twistvar.barrier import peierls_rational, _free_connection_action

p8 = PerturbationParams(8, a=1.0, k=2)
hP = make_hn(p8)
Q = 4
hQ = GeneratingFunction(
    potential=rescale(make_un(p8) + make_vn(p8), Q), quad=1.0, label="hQ", params=p8
)

xiQ, xiP = 0.13, 0.52

for (pq1, pq2, var) in (
    ((1, 6), (2, 3), "minus"),
    ((2, 13), (8, 13), "plus"),
    ((17, 110), (34, 55), "minus"),
):
    t0 = time.time()
    try:
        vQ = peierls_rational(hQ, *pq1, var, xiQ)
    except Exception as e:  # noqa: BLE001
        vQ = float("nan")
        print("  Q fail:", type(e).__name__, e)
    t1 = time.time()
    try:
        vP = peierls_rational(hP, *pq2, var, xiP)
    except Exception as e:  # noqa: BLE001
        vP = float("nan")
        print("  P fail:", type(e).__name__, e)
    print(
        f"{pq1}{var}: Q={vQ:.9e}  P/16={vP/16:.9e}  diff={vQ - vP/16:+.3e} "
        f"[Q {t1-t0:.1f}s P {time.time()-t1:.1f}s]"
    )

# free connection actions: Q vs P/16
for (pq1, pq2, var) in (
    ((2, 13), (8, 13), "+"),
    ((17, 110), (34, 55), "-"),
):
    fQ = _free_connection_action(hQ, *pq1, var)
    fP = _free_connection_action(hP, *pq2, var)
    print(f"free {pq1}{var}: Q={fQ:.9e}  P/16={fP/16:.9e}  diff={fQ - fP/16:+.3e}")
