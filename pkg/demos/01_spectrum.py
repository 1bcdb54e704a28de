"""
Dirichlet eigenvalues two ways
==============================

The sine-basis Galerkin matrix and Pruefer shooting are independent routes to
the eigenvalues of -y'' + q y = lambda y, y(0) = y(1) = 0.  Agreement between
them is the basic sanity check for everything else.
"""
import numpy as np

from sldirichlet.potential import PotentialSpec
from sldirichlet.solver import solve_eigenvalue_shooting, solve_spectrum_galerkin

# Mathieu-type potential q(x) = cos(2 pi x)
q = PotentialSpec.cosines({2: 1.0})

# Galerkin with a doubled-basis error estimate
spec = solve_spectrum_galerkin(q, 8, n_basis=64, estimate_error=True)

print(" m   galerkin              shooting              |diff|     (m pi)^2")
for m in range(1, 9):
    shoot = solve_eigenvalue_shooting(q, m)
    print(f"{m:2d}   {spec[m]:.15f}  {shoot:.15f}  {abs(spec[m] - shoot):.1e}   {(m * np.pi) ** 2:.6f}")

# Rayleigh-Ritz: Galerkin values come down monotonically as the basis grows
for n in (4, 8, 16, 32):
    print(f"n_basis={n:3d}  lambda_1 = {solve_spectrum_galerkin(q, 1, n)[1]:.15f}")

# Adding a constant shifts every eigenvalue by that constant
shifted = solve_spectrum_galerkin(q.shifted(5.0), 8, n_basis=64)
print("shift check:", np.max(np.abs(shifted.eigenvalues - spec.eigenvalues - 5.0)))
