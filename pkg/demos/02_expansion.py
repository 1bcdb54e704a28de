"""
Second-order expansion of lambda_m
==================================

lambda_m = (m pi)^2 + c_0 - c_2m + a1 - b1 + a2 - b2 + R3, where the c_k are
cosine coefficients of q.  Here we watch each term against the Galerkin
eigenvalue and check that what is left over is the triple-sum remainder R3.
"""
from sldirichlet.asymptotics import lemma1_expansion
from sldirichlet.harness import compare_spectrum_vs_expansion, expansion_coefficients
from sldirichlet.potential import PotentialSpec, cosine_coefficients
from sldirichlet.solver import eigenfunction_sine_coeffs, galerkin_operator

q = PotentialSpec.cosines({2: 1.0, 4: 0.5})

report = compare_spectrum_vs_expansion(q, (8, 16), cutoff=64)
print(" m   first-order residual   second-order residual")
for row in report.rows:
    print(f"{row.m:2d}   {row.residual_first: .3e}            {row.residual_lemma1: .3e}")

# The individual terms at m = 12
coeffs = expansion_coefficients(q, 12, 64)
t = lemma1_expansion(12, coeffs, 64)
print(f"\nm=12: a1={t.a1:.3e}  b1={t.b1:.3e}  a2={t.a2:.3e}  b2={t.b2:.3e}")

# With the exact eigenvalue plugged into the sums, the remainder computed from
# the eigenvector closes the identity to rounding level.
op = galerkin_operator(q, 256)
wide = cosine_coefficients(q, 1024)
for m in (8, 16, 24):
    eig = eigenfunction_sine_coeffs(op, m)
    t = lemma1_expansion(m, wide, 64, lam=eig.eigenvalue, eigenfunction=eig)
    print(f"m={m:2d}  R3={t.r3_estimate: .3e}  total + R3 - lambda = {t.total + t.r3_estimate - eig.eigenvalue: .1e}")
