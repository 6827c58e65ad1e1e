import math

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
    _orbit_multiplier,
    _solve_connection_window,
    _transition_span,
)

p8 = PerturbationParams(8, a=1.0, k=2)
hP = make_hn(p8)
Q = 4
hQ = GeneratingFunction(
    potential=rescale(make_un(p8) + make_vn(p8), Q), quad=1.0, label="hQ", params=p8
)

for tag, h, p, q, scale in (("P", hP, 34, 55, 1.0), ("Q", hQ, 17, 110, 16.0)):
    z = np.array(_ground_orbit(h, p, q)[0])
    lam = _orbit_multiplier(h, z, p, q)
    tail = int(math.ceil(q * math.log(1e13) / math.log(lam))) + 4
    span = _transition_span(h, q)
    L = 2 * tail + span
    vals = []
    for j in range(55):
        best = np.inf
        for frac in (0.0, 0.5):
            x, rep = _solve_connection_window(
                h, p, q, "-", 0, None, z, L, tail, 1e-9, j + frac
            )
            if rep.converged:
                best = min(best, rep.action * scale)
        vals.append(best)
    vals = np.array(vals)
    print(f"{tag}: min={np.min(vals):.9e} at j={int(np.argmin(vals))} "
          f"max={np.max(vals):.6e} n_conv={int(np.sum(np.isfinite(vals)))}")
    print("  first 12:", np.round(vals[:12], 6))
