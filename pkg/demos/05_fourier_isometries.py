"""Frequency-side identities of the extension transform.

The profile has an explicit unitary Fourier transform,

    psi_s_hat(xi) = sqrt(2) Gamma(s+1/2)/Gamma(s) (1+xi^2)^{-(1+2s)/2},

whose weighted moments are pure Gamma expressions.  Consequently the
extension is, up to constants, an isometry from every ladder space into
weighted or Sobolev-type curve spaces -- including integer orders, where
the rest of the theory does not apply.
"""

import numpy as np

from fracext import (
    ModalVector,
    explicit_spectrum,
    fourier_isometry,
    psi_fourier,
    psi_fourier_numeric,
    seminorm_sq,
    sobolev_norm,
)

# closed form against direct cosine-transform quadrature
print("psi_s_hat: closed form vs direct quadrature")
for s in (0.5, 1.5):
    for xi in (0.0, 0.5, 2.0):
        closed = psi_fourier(s, xi)
        direct = psi_fourier_numeric(s, xi)
        print(f"  s={s} xi={xi:3.1f}: {closed:.12f} vs {direct:.12f} "
              f"(diff {abs(closed - direct):.1e})")

# fractional Sobolev seminorms of the profile are Gamma ratios; the
# divergence threshold alpha = 2s + 1/2 is sharp
print("\nseminorm^2 of psi_s:")
for s, alpha in ((0.5, 0.0), (0.5, 0.5), (1.5, 1.0), (2.5, 2.0)):
    print(f"  s={s} alpha={alpha}: {seminorm_sq(s, alpha):.12f}")
try:
    seminorm_sq(0.5, 1.5)
except ValueError as err:
    print("  alpha at the threshold ->", err)

# curve-level isometries on a 2-mode spectrum
u = ModalVector(np.array([1.0, 1.0]), explicit_spectrum([1.0, 4.0]))

r1 = fourier_isometry(u, 0.5, sigma=0.0, b=0.0)
print(f"\nweighted-L2 isometry: lhs {r1.lhs:.12f} rhs {r1.rhs:.12f} "
      f"(rel {r1.rel_err:.1e})")

r2 = fourier_isometry(u, 0.5, sigma=0.5, alpha=0.5)
print(f"H^1 seminorm of the s=1/2 curve: {r2.lhs:.12f} "
      f"= |u|^2_(1/2) = {sobolev_norm(u, 0.5) ** 2:.12f}")

# integer orders are fine on this side of the theory
r3 = fourier_isometry(u, 2.0, sigma=0.0, alpha=1.3)
print(f"integer order s=2: isometry holds with rel err {r3.rel_err:.1e}")
