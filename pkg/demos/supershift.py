"""Supershift of a Bessel-type entire function, slice and monogenic."""

import numpy as np

from cliffosc.superosc import SuperoscSpec, structured_points
from cliffosc.supershift import (
    EntireMonogenicFn,
    EntireSliceFn,
    monogenic_supershift_limit,
    slice_supershift_limit,
    supershift_monogenic,
    supershift_slice,
)

n = 2
pts = structured_points(n, 1.0, 64)
Gs, Gm = EntireSliceFn.bessel(n), EntireMonogenicFn.bessel(n, 30)
print(f"{'N':>4} {'slice':>12} {'monogenic':>12}")
for N in (8, 16, 32, 64):
    spec = SuperoscSpec(N, 2.0, n=n)
    es = np.max(np.abs(supershift_slice(Gs, spec, pts) - slice_supershift_limit(Gs, spec, pts)))
    em = np.max(np.abs(supershift_monogenic(Gm, spec, pts) - monogenic_supershift_limit(Gm, spec, pts)))
    print(f"{N:4d} {es:12.4e} {em:12.4e}")
