"""Weighted energies, the exact minimal value, and two independent checks.

The squared H^{k;b} energy of the rescaled profile psi_{s,lam} with the
matched exponents k = ceil(s), b = 1 - 2(s - floor(s)) equals 2 d_s lam^s
exactly, and that value is the minimum of the energy over all even profiles
with unit trace.  The library certifies this from two directions that know
nothing about each other:

 * weighted quadrature of the closed-form profile (this file, first half);
 * a piecewise-linear finite-element minimisation that only sees the
   quadratic form (second half) and converges to the same number from above.
"""

import numpy as np

from fracext import energy_identity, trace_constant, virial_check
from fracext.variational import minimize_profile
from fracext.weighted import trace_inequality

print("energy identity |psi_{s,lam}|^2 = 2 d_s lam^s")
print(f"{'s':>5} {'lam':>5} {'quadrature':>18} {'closed form':>18} {'rel':>9}")
for s in (0.25, 0.5, 1.5, 2.5, 3.5):
    for lam in (1.0, 4.0):
        r = energy_identity(s, lam)
        print(f"{s:5.2f} {lam:5.1f} {r.lhs:18.12f} {r.rhs:18.12f} "
              f"{r.rel_err:9.1e}")

# the virial split: the minimiser divides its energy between the zero-order
# and gradient parts in the exact ratio s : (ceil(s) - s)
for s in (0.5, 2.5):
    zero_part, grad_part = virial_check(s)
    print(f"\nvirial split s={s}: zero-order {zero_part.lhs:.10f} "
          f"(expected {zero_part.rhs:.10f}), gradient {grad_part.lhs:.10f} "
          f"(expected {grad_part.rhs:.10f})")

# trace inequality |f|^2_{H^{1;b}} >= m_b f(0)^2, saturated by the profile
for b in (-0.5, 0.0, 0.4):
    r = trace_inequality(b)
    print(f"trace constant b={b:+.1f}: energy {r.lhs:.10f} = m_b {r.rhs:.10f}"
          f" (rel {r.rel_err:.1e})")

# finite elements rediscover the same minimum from above
print("\nFE minimisation, s = 0.5, lam = 1 (target 2):")
print(f"{'nodes':>6} {'discrete minimum':>18} {'gap':>10}")
for n in (250, 500, 1000, 2000, 4000):
    val, prof = minimize_profile(0.5, 1.0, n_nodes=n)
    print(f"{n:6d} {val:18.12f} {val - 2.0:10.2e}")

target = 2.0 * trace_constant(0.5)
val, prof = minimize_profile(0.5, 1.0, n_nodes=4000)
ys = np.linspace(0.0, 4.0, 9)
print("\ndiscrete minimiser vs closed profile e^{-y}:")
for y in ys:
    print(f"  y={y:4.1f}: fe={prof(y):.8f} exact={np.exp(-y):.8f}")
