"""F_N(x) -> exp(2x) in the slice setting of R_3, next to the a-priori bound."""

import numpy as np

from cliffosc.superosc import SuperoscSpec, error_bound_slice, eval_FN_slice, sample_ball, slice_limit

pts = sample_ball(3, 2.0, 512, seed=0)
print(f"{'N':>4} {'sup error':>12} {'bound':>12} {'ratio':>7}")
prev = None
for N in (4, 8, 16, 32, 64):
    spec = SuperoscSpec(N, 2.0, n=3)
    err = np.linalg.norm(eval_FN_slice(spec, pts) - slice_limit(spec, pts), axis=1)
    bound = error_bound_slice(N, 2.0, pts)
    ratio = "" if prev is None else f"{prev / err.max():7.3f}"
    print(f"{N:4d} {err.max():12.4e} {bound.max():12.4e} {ratio}")
    prev = err.max()
