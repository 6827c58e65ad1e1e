import numpy as np

from twistvar.generating import (
    GeneratingFunction,
    PerturbationParams,
    make_hn,
    make_un,
    make_vn,
    rescale,
)
from twistvar.minimizer import (
    _ground_orbit,
    _orbit_lift,
    _orbit_multiplier,
    _solve_connection_window,
    _transition_span,
    action,
    minimize_advancing,
)

p8 = PerturbationParams(8, a=1.0, k=2)
hP = make_hn(p8)
Q = 4
hQ = GeneratingFunction(
    potential=rescale(make_un(p8) + make_vn(p8), Q), quad=1.0, label="hQ", params=p8
)

import math

for tag, h, p, q in (("Q", hQ, 17, 110), ("P", hP, 34, 55)):
    z = np.array(_ground_orbit(h, p, q)[0])
    lam = _orbit_multiplier(h, z, p, q)
    tail = int(math.ceil(q * math.log(1e13) / math.log(lam))) + 4
    span = _transition_span(h, q)
    L = 2 * tail + span
    print(f"{tag}: lam={lam:.6f} tail={tail} span={span} L={L} z0={z[0]:.6f}")
    scale = 1.0 if tag == "P" else 16.0
    for phase in (0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0):
        x, rep = _solve_connection_window(
            h, p, q, "-", 0, None, z, L, tail, 1e-9, phase
        )
        print(
            f"  phase {phase:+.1f}: conv={rep.converged} rel*scl={rep.action*scale:+.9e} "
            f"({rep.message or 'ok'})"
        )

# map the P free solution down to Q and warm-start
cfgP, repP = minimize_advancing(hP, 34, 55, "-")
print("P free minus:", repP.action, "len", len(cfgP) - 1)
yQ = np.asarray(cfgP.x) / 4.0
# align to the Q background: Q window of the same length, shift 0
zq = np.array(_ground_orbit(hQ, 17, 110)[0])
Lq = len(yQ) - 1
mid = Lq // 2
bq = _orbit_lift(zq, 17, 110, 0 - mid, Lq + 1)
# translate mapped config so its left tail matches the Q background
off = np.median(yQ[:20] - bq[:20])
k = round(off / 0.25)
yQ2 = yQ - k * 0.25
print("left-tail offset after snap:", float(np.max(np.abs(yQ2[:20] - bq[:20]))))
x, rep = _solve_connection_window(
    hQ, 17, 110, "-", 0, None, zq, Lq, 60, 1e-9, None, init_x=yQ2
)
print("warm-from-P: conv", rep.converged, "rel*16", rep.action * 16, rep.message)
