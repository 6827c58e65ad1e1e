import numpy as np, math, time
from twistvar.generating import make_hn, PerturbationParams
from twistvar.minimizer import minimize_advancing, action, _ground_orbit
from twistvar.barrier import _free_connection_action, peierls_rational

h16 = make_hn(PerturbationParams(n=16, a=1.0, k=2, delta=0.05))
xi = 0.5

for (p, q) in ((1, 29), (1, 30)):
    for d in ("+", "-"):
        F = _free_connection_action(h16, p, q, d)
        print(f"({p},{q}){d}: free rel action = {F:.9e}")
    z = np.array(_ground_orbit(h16, p, q)[0])
    print(f"  orbit z[:6]={np.round(z[:6],4)} ... max gap={np.max(np.diff(np.sort(z))):.4f}")

# per-class constrained values for (1,29) minus at xi=0.5
p, q, d = 1, 29, "-"
F = _free_connection_action(h16, p, q, d)
z = np.array(_ground_orbit(h16, p, q)[0])
rows = []
for j in range(q):
    hat = z[j] + ((xi - z[j]) % 1.0)
    try:
        cfg, rep = minimize_advancing(h16, p, q, d, shift=j, constraint=(0, float(hat)))
        rows.append((j, hat, rep.converged, rep.action - F, rep.message))
    except Exception as e:
        rows.append((j, hat, False, math.nan, str(e)[:60]))
rows.sort(key=lambda r: (r[3] if math.isfinite(r[3]) else 1e9))
for j, hat, conv, val, msg in rows[:6]:
    print(f"  j={j:2d} hat={hat:.4f} conv={conv} val={val:.6e} {msg or ''}")
nconv = sum(1 for r in rows if r[2])
print(f"  converged classes: {nconv}/{q}")
print(f"  plus variant value: {peierls_rational(h16, 1, 29, 'plus', xi):.6e}")
print(f"  (1,30) minus value: {peierls_rational(h16, 1, 30, 'minus', xi):.6e}")
