"""Discrete spectral model: eigendata, Sobolev scale, fractional powers.

A positive (or nonnegative) self-adjoint operator with discrete spectrum is
represented purely through its eigenvalues; vectors live in the eigenbasis
as coefficient arrays.  Fractional powers act diagonally,

    (L^t u)_j = lambda_j^t u_j,

and the sigma-order Sobolev norm is (sum_j lambda_j^sigma u_j^2)^{1/2} over
the non-kernel modes.  Operators with a kernel are handled by splitting off
the zero modes; negative powers touching a nonzero kernel coefficient are a
hard error rather than a NaN.

Spectra and modal vectors are immutable after construction and all
operations are read-only, so everything here is thread-safe.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Spectrum",
    "ModalVector",
    "EigenBasis",
    "dirichlet_laplacian_1d",
    "neumann_laplacian_1d",
    "explicit_spectrum",
    "tridiagonal_spectrum",
    "build_operator",
    "operator_from_json",
    "sobolev_norm",
    "apply_power",
    "kernel_split",
    "duality_pairing",
    "tridiag_eigh",
]


@dataclass(frozen=True)
class Spectrum:
    """Nondecreasing eigenvalues of a nonnegative operator.

    ``kernel_dim`` counts the leading zero eigenvalues (0 for positive
    definite operators); ``label`` records which builder produced it.
    """

    eigenvalues: np.ndarray
    kernel_dim: int = 0
    label: str = ""

    def __post_init__(self):
        vals = np.asarray(self.eigenvalues, dtype=float)
        object.__setattr__(self, "eigenvalues", vals)
        if vals.ndim != 1 or vals.size < 1:
            raise ValueError("spectrum needs at least one eigenvalue")
        if np.any(np.diff(vals) < 0):
            raise ValueError("eigenvalues must be nondecreasing")
        if vals[0] < 0:
            raise ValueError("eigenvalues must be nonnegative")
        kd = int(np.count_nonzero(vals == 0.0))
        if kd != self.kernel_dim:
            object.__setattr__(self, "kernel_dim", kd)
        if self.kernel_dim < vals.size and vals[self.kernel_dim] <= 0:
            raise ValueError("eigenvalues beyond the kernel must be positive")

    @property
    def size(self):
        return self.eigenvalues.size

    @property
    def positive(self):
        """Eigenvalues with the kernel stripped."""
        return self.eigenvalues[self.kernel_dim:]

    def to_json(self) -> str:
        return json.dumps({"kind": "explicit_eigenvalues",
                           "values": self.eigenvalues.tolist()})


@dataclass(frozen=True)
class ModalVector:
    """Coefficients of a vector in the eigenbasis of a given spectrum."""

    coeffs: np.ndarray
    spectrum: Spectrum
    order: float = 0.0  # bookkeeping tag: the space H^order the vector lives in

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        object.__setattr__(self, "coeffs", c)
        if c.shape != (self.spectrum.size,):
            raise ValueError(
                f"coefficient length {c.shape} does not match spectrum size "
                f"{self.spectrum.size}")

    def __len__(self):
        return self.coeffs.size

    def to_json(self) -> str:
        return json.dumps(self.coeffs.tolist())


@dataclass(frozen=True)
class EigenBasis:
    """Orthonormal eigenvectors of a matrix-backed operator (column j <-> lambda_j)."""

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix",
                           np.asarray(self.matrix, dtype=float))

    def gram_residual(self):
        m = self.matrix
        return float(np.max(np.abs(m.T @ m - np.eye(m.shape[1]))))

    def to_modal(self, spectrum: Spectrum, values) -> ModalVector:
        """Expand physical-coordinate values in the eigenbasis."""
        coeffs = self.matrix.T @ np.asarray(values, dtype=float)
        return ModalVector(coeffs, spectrum)


# ---------------------------------------------------------------------------
# builders


def dirichlet_laplacian_1d(length: float, modes: int) -> Spectrum:
    """Eigenvalues (j pi / L)^2, j = 1..modes, of -d^2/dx^2 with zero BCs."""
    if length <= 0:
        raise ValueError("interval length must be positive")
    if modes < 1:
        raise ValueError("need at least one mode")
    j = np.arange(1, modes + 1)
    return Spectrum((j * math.pi / length) ** 2, 0,
                    label=f"dirichlet_laplacian_1d(L={length}, J={modes})")


def neumann_laplacian_1d(length: float, modes: int) -> Spectrum:
    """Eigenvalues 0, (pi/L)^2, (2 pi/L)^2, ... with the constant mode first."""
    if length <= 0:
        raise ValueError("interval length must be positive")
    if modes < 1:
        raise ValueError("need at least one mode")
    j = np.arange(0, modes)
    return Spectrum((j * math.pi / length) ** 2, 1,
                    label=f"neumann_laplacian_1d(L={length}, J={modes})")


def explicit_spectrum(values, label: str = "explicit_eigenvalues") -> Spectrum:
    vals = np.sort(np.asarray(values, dtype=float))
    if vals.size and vals[0] < 0:
        raise ValueError("explicit spectrum contains a negative eigenvalue")
    return Spectrum(vals, label=label)


def tridiag_eigh(diag, off):
    """Eigen-decomposition of a symmetric tridiagonal matrix.

    Implicit-shift QL iteration with plane rotations accumulated into the
    eigenvector matrix (the classic tql2 scheme).  Returns ``(w, v)`` with
    eigenvalues ``w`` sorted nondecreasing (stable, so exact ties keep their
    input order) and orthonormal eigenvectors in the columns of ``v``.
    """
    d = np.array(diag, dtype=float)
    n = d.size
    e = np.zeros(n)
    off = np.asarray(off, dtype=float)
    if off.shape != (max(n - 1, 0),):
        raise ValueError("off-diagonal must have length n - 1")
    e[: n - 1] = off
    z = np.eye(n)
    eps = np.finfo(float).eps
    for low in range(n):
        for _ in range(64):
            # look for a negligible off-diagonal element to split at
            m = low
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == low:
                break
            # implicit shift from the 2x2 block at the low end
            g = (d[low + 1] - d[low]) / (2.0 * e[low])
            r = math.hypot(g, 1.0)
            g = d[m] - d[low] + e[low] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            for i in range(m - 1, low - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi = z[:, i].copy()
                z[:, i + 1], z[:, i] = s * zi + c * z[:, i + 1], \
                    c * zi - s * z[:, i + 1]
            else:
                d[low] -= p
                e[low] = g
                e[m] = 0.0
        else:
            raise RuntimeError("QL iteration failed to converge")
    order = np.argsort(d, kind="stable")
    return d[order], z[:, order]


def tridiagonal_spectrum(diag, off):
    """Spectrum plus eigenbasis of a symmetric tridiagonal operator."""
    w, v = tridiag_eigh(diag, off)
    if w[0] < -1e-12 * max(1.0, abs(w[-1])):
        raise ValueError("tridiagonal operator is not nonnegative")
    w = np.maximum(w, 0.0)
    spec = Spectrum(w, label=f"tridiagonal(n={len(w)})")
    return spec, EigenBasis(v)


_BUILDERS = ("dirichlet_laplacian_1d", "neumann_laplacian_1d",
             "tridiagonal", "explicit_eigenvalues")


def build_operator(kind: str, **params):
    """Dispatch on the operator descriptor kind.

    Returns ``(Spectrum, EigenBasis | None)``; only the matrix-backed
    ``tridiagonal`` kind carries a basis.
    """
    if kind == "dirichlet_laplacian_1d":
        return dirichlet_laplacian_1d(params["length"], params["modes"]), None
    if kind == "neumann_laplacian_1d":
        return neumann_laplacian_1d(params["length"], params["modes"]), None
    if kind == "explicit_eigenvalues":
        return explicit_spectrum(params["values"]), None
    if kind == "tridiagonal":
        return tridiagonal_spectrum(params["diag"], params["off"])
    raise ValueError(f"unknown operator kind {kind!r}; expected one of "
                     f"{_BUILDERS}")


def operator_from_json(text: str):
    """Build an operator from its JSON descriptor (string or parsed dict)."""
    desc = json.loads(text) if isinstance(text, str) else dict(text)
    kind = desc.pop("kind")
    return build_operator(kind, **desc)


# ---------------------------------------------------------------------------
# fractional calculus on modal vectors


def _check_kernel_use(u: ModalVector, power: float, what: str):
    kd = u.spectrum.kernel_dim
    if power < 0 and kd > 0:
        bad = np.nonzero(u.coeffs[:kd])[0]
        if bad.size:
            raise ValueError(
                f"{what} with negative power touches kernel mode "
                f"{bad[0]} (zero eigenvalue, nonzero coefficient)")


def sobolev_norm(u: ModalVector, sigma: float) -> float:
    """Norm of u in the sigma-order ladder space of its spectrum.

    sigma = 0 is the plain Euclidean norm (kernel mass included); for
    sigma != 0 the kernel modes contribute nothing when sigma > 0 and make
    negative orders undefined unless their coefficients vanish.
    """
    if sigma == 0.0:
        return float(np.linalg.norm(u.coeffs))
    _check_kernel_use(u, sigma, "sobolev_norm")
    kd = u.spectrum.kernel_dim
    lam = u.spectrum.positive
    c = u.coeffs[kd:]
    return float(math.sqrt(np.sum(lam ** sigma * c ** 2)))


def apply_power(u: ModalVector, t: float) -> ModalVector:
    """Coefficient-wise fractional power: (L^t u)_j = lambda_j^t u_j.

    t = 0 is the identity; kernel modes are annihilated for t > 0 and
    rejected (if populated) for t < 0.
    """
    if t == 0.0:
        return ModalVector(u.coeffs.copy(), u.spectrum, u.order)
    _check_kernel_use(u, t, "apply_power")
    kd = u.spectrum.kernel_dim
    out = np.zeros_like(u.coeffs)
    out[kd:] = u.spectrum.positive ** t * u.coeffs[kd:]
    return ModalVector(out, u.spectrum, u.order - 2.0 * t)


def kernel_split(u: ModalVector):
    """Orthogonal split u = Pi u + u_perp along the kernel of the operator."""
    kd = u.spectrum.kernel_dim
    pi_u = np.zeros_like(u.coeffs)
    pi_u[:kd] = u.coeffs[:kd]
    perp = u.coeffs - pi_u
    return (ModalVector(pi_u, u.spectrum, u.order),
            ModalVector(perp, u.spectrum, u.order))


def duality_pairing(zeta: ModalVector, v: ModalVector) -> float:
    """Dual pairing <zeta, v> = sum_j zeta_j v_j for compatible spectra."""
    if len(zeta) != len(v):
        raise ValueError("duality_pairing needs vectors of equal length")
    return float(np.dot(zeta.coeffs, v.coeffs))
