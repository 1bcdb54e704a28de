"""
Can the unperturbed spectrum hide a potential?
==============================================

For a mean-free admissible q, m^2 (lambda_m - (m pi)^2) tends to
||q||^2 / (4 pi^2).  So the numbers (m pi)^2 can all be eigenvalues only when
q = 0.  We estimate the limit numerically for a few potentials.
"""
import math

from sldirichlet.harness import ambarzumyan_deviation
from sldirichlet.potential import PotentialSpec

cases = {
    "zero": PotentialSpec.zero(),
    "cos 2 pi x": PotentialSpec.cosines({2: 1.0}),
    "cos 2 pi x + cos 4 pi x / 2": PotentialSpec.cosines({2: 1.0, 4: 0.5}),
    "cos pi x - cos 3 pi x": PotentialSpec.cosines({1: 1.0, 3: -1.0}),
}

for name, q in cases.items():
    r = ambarzumyan_deviation(q, m_max=32)
    print(f"{name:30s} limit {r.limit_estimate:.6e}  predicted {r.predicted_limit:.6e}  -> {r.verdict}")

# The convergence for cos 2 pi x, row by row
r = ambarzumyan_deviation(cases["cos 2 pi x"], m_max=32)
print("\n m   m^2 d_m")
for row in r.rows[::4]:
    print(f"{row.m:2d}   {row.m2_d_m:.8f}")
print("1/(8 pi^2) =", 1 / (8 * math.pi**2))
