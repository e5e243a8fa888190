"""Monogenic F_N built with the CK product, compared with the CK exponential."""

import numpy as np

from cliffosc.superosc import SuperoscSpec, eval_FN_monogenic, monogenic_limit, structured_points

n, K = 3, 24
pts = structured_points(n, 0.5, 64)
print(f"{'N':>4} {'sup error':>12}")
for N in (4, 8, 16, 32):
    spec = SuperoscSpec(N, 2.0, n=n)
    err = np.max(np.abs(eval_FN_monogenic(spec, pts, K) - monogenic_limit(spec, pts, K)))
    print(f"{N:4d} {err:12.4e}")
