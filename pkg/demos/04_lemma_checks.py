"""
How fast the expansion terms decay
==================================

b1 and b2 pair coefficients 2m apart, so for a cosine polynomial of bandwidth
B they vanish once m is large enough: b1 for m > B, b2 only for m > 3B/2.
For smooth potentials that are not band-limited they decay quickly instead.
a1 carries the leading ||q||^2 / (4 pi^2 m^2) term.
"""
import numpy as np

from sldirichlet.harness import lemma_checks
from sldirichlet.potential import PotentialSpec

q = PotentialSpec.cosines({2: 1.0, 4: 0.5, 8: 0.25})
r = lemma_checks(q, (8, 48), cutoff=96)
print("bandwidth 8:  last nonzero b1 at m =", r.last_nonzero["b1"], " b2 at m =", r.last_nonzero["b2"])
print("a1 ratio for m >= 16:", np.round(r.a1_ratio[r.m >= 16][::8], 4))
print("all checks:", r.checks)

# A smooth potential with matching endpoint values and slopes, sampled on a grid
bump = PotentialSpec.from_function(lambda x: x**2 * (1 - x) ** 2 - 1 / 30, 4097)
r = lemma_checks(bump, (8, 64), cutoff=128)
for name, fit in r.fits.items():
    print(f"{name:6s} fitted exponent {fit.exponent:7.2f}  (r^2 = {fit.r_squared:.4f})")
print("aux endpoint residuals:", r.aux_residuals)
