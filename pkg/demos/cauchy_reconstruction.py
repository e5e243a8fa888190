"""Recover exp at an interior point from its values on a circle in the slice through it."""

import numpy as np

from cliffosc.clifford import Paravector
from cliffosc.slice import cauchy_reconstruct, exp_paravector

x = Paravector(0.3, (0.2, -0.4, 0.1))
exact = exp_paravector(x).embed()
v = np.array(x.xv)
J = Paravector(0.0, tuple(v / np.linalg.norm(v)))
print(f"{'M':>4} {'error':>12}")
for M in (8, 16, 32, 64, 128):
    rec = cauchy_reconstruct(exp_paravector, 2.0, J, x, M=M)
    print(f"{M:4d} {(rec - exact).norm():12.4e}")
