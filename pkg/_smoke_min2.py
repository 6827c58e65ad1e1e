import importlib.util
import sys
import time

import numpy as np


def load(name, path):
    spec = importlib.util.spec_from_file_location(name, path)
    mod = importlib.util.module_from_spec(spec)
    sys.modules[spec.name] = mod
    spec.loader.exec_module(mod)
    return mod


g = load("twistvar.generating", "/root/pkg/src/twistvar/generating.py")
m = load("twistvar.minimizer", "/root/pkg/src/twistvar/minimizer.py")

# 1) h0 degeneracy still raised (now >=2 distinct)
h0 = g.make_h0()
for p, q in [(0, 1), (1, 2), (1, 3)]:
    try:
        m.require_nondegenerate(h0, p, q)
        print(f"FAIL: h0 {p}/{q} not flagged")
    except m.DegenerateSymbolError:
        print(f"ok: h0 {p}/{q} degenerate")

# 2) hn symbols still fine
hn = g.make_hn(g.PerturbationParams(n=8, a=1.0, k=2))
for p, q in [(0, 1), (1, 2), (1, 3), (2, 5)]:
    m.require_nondegenerate(hn, p, q)
    c, rep = m.minimize_periodic(hn, p, q)
    print(f"ok: hn {p}/{q} ground action {rep.action:+.9f} res {rep.residual:.1e}")

# init= path
c2, rep2 = m.minimize_periodic(hn, 1, 3, init=np.array([0.1, 0.45, 0.8]))
c3, _ = m.minimize_periodic(hn, 1, 3)
print("init path matches:", np.allclose(c2.x, c3.x, atol=1e-8), rep2.residual)

# 3) connections + warm start
t0 = time.time()
cfg, rep = m.minimize_advancing(hn, 0, 1, "+")
t1 = time.time()
print(f"(0,1)+ len {len(cfg)} rel {rep.action:.6e} conv {rep.converged} [{t1 - t0:.2f}s]")

# constrained at 1/2, then warm-started at a nearby pin
cfg_c, rep_c = m.minimize_advancing(hn, 0, 1, "+", constraint=(0, 0.5))
print(f"pin 0.5: rel {rep_c.action:.6e} conv {rep_c.converged}")
t0 = time.time()
cfg_w, rep_w = m.minimize_advancing(hn, 0, 1, "+", constraint=(0, 0.52), x0=cfg_c.x)
t1 = time.time()
print(f"pin 0.52 warm: rel {rep_w.action:.6e} conv {rep_w.converged} [{t1 - t0:.3f}s]")
cfg_cold, rep_cold = m.minimize_advancing(hn, 0, 1, "+", constraint=(0, 0.52))
print(f"warm vs cold action diff: {abs(rep_w.action - rep_cold.action):.2e}")

# 4) free-right-end chain: minimize h(x0, x1) over x1 in [0, 1], x0 pinned
x = np.array([0.3, 0.9])
free = np.array([False, True])
lo = np.array([0.0, 0.0])
hi = np.array([1.0, 1.0])
repc = m._solve_chain(hn, x, free, lo, hi)
# oracle: dense scan
ygrid = np.linspace(0, 1, 200001)
vals = hn(0.3, ygrid)
print(
    f"free-end: x1 {x[1]:.8f} scan {ygrid[np.argmin(vals)]:.8f} "
    f"act {m.action(hn, x):.10f} scan {vals.min():.10f} conv {repc.converged}"
)

# 5) diagnostics signatures
rows = m.spacing_profile(cfg, window=(0.25, 0.75))
print("spacing rows in [1/4,3/4]:", rows.shape, "min gap", rows[:, 1].min() if len(rows) else None)
print("count_in_interval:", m.count_in_interval(cfg, (0.25, 0.75)))
print("rotation_number connection:", m.rotation_number(cfg))
try:
    m.rotation_number(np.array([0.0, 0.5]), None)
    print("FAIL: short rotation_number did not raise")
except g.TwistFamilyError as e:
    print("ok: short rotation raises:", str(e)[:50])
try:
    m.stationarity_residual(hn, np.array([0.0, 0.5]), None)
    print("FAIL: short residual did not raise")
except g.TwistFamilyError:
    print("ok: short residual raises")

# 6) htilde integer symbol now degenerate (translated wells)
ht = g.make_htilde(g.PerturbationParams(n=8, a=1.9, k=2))
try:
    m.require_nondegenerate(ht, 0, 1)
    print("note: htilde 0/1 NOT flagged")
except m.DegenerateSymbolError:
    print("ok: htilde 0/1 degenerate (translated wells)")
print("ALL DONE")
