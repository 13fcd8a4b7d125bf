"""Fractional powers of a discrete operator act diagonally.

An operator enters the library only through its eigenvalues; vectors are
coefficient arrays in the eigenbasis.  The power L^t multiplies mode j by
lambda_j^t, the sigma-order norm weights mode j by lambda_j^sigma, and the
dual pairing identifies L^s u with a functional of order -s.
"""

import math

import numpy as np

from fracext import (
    ModalVector,
    apply_power,
    build_operator,
    dirichlet_laplacian_1d,
    duality_pairing,
    kernel_split,
    neumann_laplacian_1d,
    sobolev_norm,
    tridiagonal_spectrum,
)

# three ways to make an operator
spec = dirichlet_laplacian_1d(math.pi, 5)
print("Dirichlet eigenvalues on (0, pi):", spec.eigenvalues)

spec_n = neumann_laplacian_1d(math.pi, 4)
print("Neumann eigenvalues (constant mode first):", spec_n.eigenvalues,
      "kernel dim:", spec_n.kernel_dim)

spec_t, basis = tridiagonal_spectrum([2.0, 2.0, 2.0], [-1.0, -1.0])
print("tridiagonal eigenvalues:", np.round(spec_t.eigenvalues, 6))
print("eigenbasis Gram residual:", basis.gram_residual())

# powers and the Sobolev ladder
u = ModalVector(np.array([1.0, 0.0, 1.0, 0.5, -0.25]), spec)
half = apply_power(u, 0.5)
print("\nL^(1/2) u:", np.round(half.coeffs, 6))
print("|u|_{H^1}     :", sobolev_norm(u, 1.0))
print("|L^(1/2)u|_H  :", sobolev_norm(half, 0.0), "(same number)")

# the pairing <L^s u, v> evaluates the quadratic form
s = 0.7
zeta = apply_power(u, s)
print(f"\n<L^{s} u, u> = {duality_pairing(zeta, u):.12f}")
print(f"|u|^2_{{H^{s}}} = {sobolev_norm(u, s) ** 2:.12f}")

# nonnegative operators: the kernel rides along untouched
v = ModalVector(np.array([2.0, 1.0, -1.0, 0.5]), spec_n)
pi_v, v_perp = kernel_split(v)
print("\nkernel part:", pi_v.coeffs, " complement:", v_perp.coeffs)
print("positive powers annihilate the kernel:",
      apply_power(v, 1.5).coeffs)

# negative powers demand a trivial kernel component
try:
    apply_power(v, -0.5)
except ValueError as err:
    print("negative power on the kernel ->", err)

# JSON descriptors travel between processes
spec_json, _ = build_operator("explicit_eigenvalues", values=[1.0, 4.0, 9.0])
print("\nexplicit spectrum descriptor:", spec_json.to_json())
