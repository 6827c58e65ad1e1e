import numpy as np

from twistvar.generating import (
    GeneratingFunction,
    PerturbationParams,
    make_hn,
    make_un,
    make_vn,
    rescale,
)
from twistvar.minimizer import _ground_orbit, action, minimize_advancing

p8 = PerturbationParams(8, a=1.0, k=2)
hP = make_hn(p8)
Q = 4
hQ = GeneratingFunction(
    potential=rescale(make_un(p8) + make_vn(p8), Q), quad=1.0, label="hQ", params=p8
)

for tag, h, p, q, s, scale in (("Q", hQ, 17, 110, 0.25, 16.0), ("P", hP, 34, 55, 1.0, 1.0)):
    z = np.array(_ground_orbit(h, p, q)[0])
    rows = []
    for j in range(55):
        best = None
        prev = None
        for f in (0.25, 0.5, 0.75):
            v = z[j] - f * s
            try:
                cfg, rep = minimize_advancing(
                    h, p, q, "-", shift=j, constraint=(0, float(v)), x0=prev
                )
            except Exception:  # noqa: BLE001
                prev = None
                continue
            if not rep.converged:
                prev = None
                continue
            prev = cfg.x
            if best is None or rep.action < best[0]:
                best = (rep.action, cfg.x)
        if best is None:
            rows.append((j, np.nan, np.nan, 0))
            continue
        a_pin, x = best
        try:
            cfg2, rep2 = minimize_advancing(h, p, q, "-", shift=j, x0=x)
            a_rel = rep2.action if rep2.converged else np.nan
            w = len(cfg2) - 1
        except Exception:  # noqa: BLE001
            a_rel, w = np.nan, 0
        rows.append((j, a_pin * scale, a_rel * scale, w))
    arr = np.array([(r[1], r[2]) for r in rows])
    jmin = int(np.nanargmin(arr[:, 0]))
    jrel = int(np.nanargmin(arr[:, 1]))
    print(f"{tag}: min pinned {np.nanmin(arr[:,0]):.9e} at j={jmin}; "
          f"min relaxed {np.nanmin(arr[:,1]):.9e} at j={jrel}")
    print(f"  relaxed values sorted: {np.round(np.sort(arr[:,1])[:8], 6)}")
    # width-stability of the deepest relaxed config
    a_pin, x = None, None
    prev = None
    zj = z[jrel]
    for f in (0.25, 0.5, 0.75):
        v = zj - f * s
        cfg, rep = minimize_advancing(h, p, q, "-", shift=jrel, constraint=(0, float(v)), x0=prev)
        if rep.converged and (a_pin is None or rep.action < a_pin):
            a_pin, x = rep.action, cfg.x
        prev = cfg.x
    cfg2, rep2 = minimize_advancing(h, p, q, "-", shift=jrel, x0=x)
    print(f"  deepest: rel={rep2.action*scale:.9e} width={len(cfg2)-1}")
    cfg3, rep3 = minimize_advancing(h, p, q, "-", shift=jrel, width=2 * (len(cfg2) - 1))
    print(f"  cold at 2x width: rel={rep3.action*scale:.9e} conv={rep3.converged}")
    # re-solve the deepest config embedded in a 2x window
    L = len(cfg2) - 1
    from twistvar.minimizer import _orbit_lift
    mid = L // 2
    b = _orbit_lift(z, p, q, jrel - mid, L + 1)
    d = np.asarray(cfg2.x) - b
    L2 = 2 * L
    mid2 = L2 // 2
    b2 = _orbit_lift(z, p, q, jrel - mid2, L2 + 1)
    pad = (L2 - L) // 2
    d2 = np.concatenate([np.zeros(pad), d, np.full(L2 - L - pad, d[-1])])
    x2 = b2 + d2
    cfg4, rep4 = minimize_advancing(h, p, q, "-", shift=jrel, x0=x2)
    print(f"  warm at 2x width: rel={rep4.action*scale:.9e} conv={rep4.converged} ({rep4.message or 'ok'})")
