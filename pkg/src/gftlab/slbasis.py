"""Sturm-Liouville eigenbases: plane-wave kernel, hydrogen radial functions,
cylindrical Bessel modes and spherical sine modes.

All lengths are in Bohr radii and hbar = 1.  Radial eigenfunctions are
indexed from n = 1 and are orthonormal under the weight r**w, where w is the
basis' ``measure_exponent``.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .numerics import (
    DomainError, bessel_j, bessel_zeros, coulomb_cutoff, gauss_legendre,
    laguerre_assoc,
)


class BasisKind(enum.Enum):
    PLANE_WAVE = "plane-wave"
    HYDROGEN = "hydrogen"
    CYLINDER = "cylinder"
    SPHERE = "sphere"
    CONFINED_HYDROGEN = "confined-hydrogen"


_MEASURE = {
    BasisKind.PLANE_WAVE: 0,
    BasisKind.HYDROGEN: 2,
    BasisKind.CYLINDER: 1,
    BasisKind.SPHERE: 2,
    BasisKind.CONFINED_HYDROGEN: 2,
}


@dataclass(frozen=True)
class BasisFamily:
    """One eigenbasis family and its physical parameters.

    Only the parameters relevant to ``kind`` are meaningful.  ``lam`` is the
    axial eigenvalue of the cylinder problem; it is carried but held at 0.
    """

    kind: BasisKind
    h_tilde: float = 1.0
    a_B: float = 1.0
    r0: float = 1.0
    l: int = 0
    r_c: float = 1.0
    lam: float = 0.0

    def __post_init__(self):
        for name in ("h_tilde", "a_B", "r0", "r_c"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.kind in (BasisKind.CYLINDER, BasisKind.SPHERE) and self.l != 0:
            raise DomainError("only zero angular momentum is supported")

    @classmethod
    def plane_wave(cls, h_tilde=1.0):
        return cls(BasisKind.PLANE_WAVE, h_tilde=h_tilde)

    @classmethod
    def hydrogen(cls):
        return cls(BasisKind.HYDROGEN)

    @classmethod
    def cylinder(cls, r0=1.0):
        return cls(BasisKind.CYLINDER, r0=r0)

    @classmethod
    def sphere(cls, r0=1.0):
        return cls(BasisKind.SPHERE, r0=r0)

    @classmethod
    def confined_hydrogen(cls, r_c):
        return cls(BasisKind.CONFINED_HYDROGEN, r_c=r_c)


@dataclass(frozen=True)
class RadialBasis:
    """A truncated radial eigenbasis with its integration weight r**w."""

    family: BasisFamily
    n_max: int = 200

    def __post_init__(self):
        if self.n_max < 1:
            raise DomainError("n_max must be positive")

    @property
    def kind(self):
        return self.family.kind

    @property
    def measure_exponent(self):
        return _MEASURE[self.kind]

    @property
    def bounded(self):
        """True when the eigenfunctions live on the finite interval [0, r0]."""
        return self.kind in (BasisKind.CYLINDER, BasisKind.SPHERE)

    def with_n_max(self, n_max):
        return RadialBasis(self.family, n_max)

    def eigenvalues(self, n_max=None):
        n_max = self.n_max if n_max is None else n_max
        n = np.arange(1, n_max + 1)
        if self.kind is BasisKind.HYDROGEN:
            return -0.5 / n ** 2
        if self.kind is BasisKind.CYLINDER:
            return bessel_zeros(0, n_max) / self.family.r0
        if self.kind is BasisKind.SPHERE:
            return n * math.pi / self.family.r0
        raise NotImplementedError(
            f"{self.kind.value} has no tabulated spectrum here; "
            "see gftlab.confined for the caged hydrogen levels")

    def functions(self, r, n_max=None):
        """Matrix of eigenfunction values, shape (n_max, len(r))."""
        n_max = self.n_max if n_max is None else n_max
        r = np.asarray(r, dtype=float)
        if self.kind is BasisKind.HYDROGEN:
            return np.array([hydrogen_radial(n, r) for n in range(1, n_max + 1)])
        if self.kind is BasisKind.CYLINDER:
            r0 = self.family.r0
            z = bessel_zeros(0, n_max)
            norm = math.sqrt(2.0) / (r0 * np.abs(bessel_j(1, z)))
            return norm[:, None] * bessel_j(0, np.outer(z, r / r0))
        if self.kind is BasisKind.SPHERE:
            return np.array([sphere_radial(n, r, self.family.r0)
                             for n in range(1, n_max + 1)])
        raise NotImplementedError(f"no eigenfunctions for {self.kind.value}")

    def support(self, n_max=None):
        """Interval beyond which every eigenfunction up to n_max is negligible."""
        n_max = self.n_max if n_max is None else n_max
        if self.bounded:
            return 0.0, self.family.r0
        if self.kind is BasisKind.HYDROGEN:
            return 0.0, coulomb_cutoff(n_max, self.family.a_B)
        raise NotImplementedError(f"no radial support for {self.kind.value}")


def plane_wave_kernel(xi1, xi2, h_tilde=1.0, alpha1=1.0, alpha2=0.0):
    """General plane-wave solution a1 exp(i xi1 xi2 / h) + a2 exp(-i xi1 xi2 / h)."""
    if not h_tilde > 0:
        raise DomainError("h_tilde must be positive")
    phase = np.multiply(xi1, xi2) / h_tilde
    return alpha1 * np.exp(1j * phase) + alpha2 * np.exp(-1j * phase)


def hydrogen_radial(n, r):
    """Normalized s-wave hydrogen radial function R_n(r) in atomic units."""
    if n < 1:
        raise DomainError("principal quantum number starts at 1")
    r = np.asarray(r, dtype=float)
    norm = math.sqrt((2.0 / n) ** 3 / (2.0 * n * n))
    out = norm * np.exp(-r / n) * laguerre_assoc(n - 1, 1, 2.0 * r / n)
    return out if out.ndim else float(out)


def hydrogen_energy(n):
    """Energy eigenvalue -1 / (2 n^2) in hartree."""
    if n < 1:
        raise DomainError("principal quantum number starts at 1")
    return -0.5 / n ** 2


def cylinder_radial(n, r, r0=1.0):
    """Zero-angular-momentum Bessel mode vanishing at the wall r = r0."""
    z = bessel_zeros(0, n)[-1]
    norm = math.sqrt(2.0) / (r0 * abs(bessel_j(1, z)))
    return norm * bessel_j(0, z * np.asarray(r, dtype=float) / r0)


def cylinder_momentum(n, r0=1.0):
    """Radial momentum eigenvalue z_0^n / r0 (axial eigenvalue neglected)."""
    return bessel_zeros(0, n)[-1] / r0


def sphere_radial(n, r, r0=1.0):
    """Spherical s-wave sqrt(2/r0) sin(n pi r / r0) / r, extended to r = 0."""
    if n < 1:
        raise DomainError("mode index starts at 1")
    k = n * math.pi / r0
    # sin(k r) / r == k * sinc(k r / pi)
    out = math.sqrt(2.0 / r0) * k * np.sinc(k * np.asarray(r, dtype=float) / math.pi)
    return out if np.ndim(out) else float(out)


def sphere_momentum(n, r0=1.0):
    """Radial momentum eigenvalue n pi / r0."""
    if n < 1:
        raise DomainError("mode index starts at 1")
    return n * math.pi / r0


def gram_matrix(basis, count, panels=None, order=64):
    """Overlap integrals of the first `count` eigenfunctions under r**w."""
    a, b = basis.support(count)
    if panels is None:
        panels = max(32, 4 * count)
    r, w = gauss_legendre(a, b, panels, order)
    f = basis.functions(r, count)
    weighted = f * (w * r ** basis.measure_exponent)
    return weighted @ f.T


def orthonormality_check(basis, n_pairs):
    """Largest |<R_n, R_m> - delta_nm| over all pairs n, m <= n_pairs."""
    g = gram_matrix(basis, n_pairs)
    return float(np.max(np.abs(g - np.eye(n_pairs))))
