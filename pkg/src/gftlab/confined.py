"""Hydrogen in a hard-walled spherical cage.

The s-wave radial equation u'' = -2 (E + 1/r) u is integrated outward from
the regular solution at the origin with a fixed-step RK4 scheme; levels are
the energies at which u(r_c) = 0.  The stepping loop is compiled with numba.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .numerics import ConvergenceError, DomainError
from .units import BOHR_NM, BOLTZMANN_EV_PER_K, HARTREE_EV, RYDBERG_EV
from .uncertainty import uvur_lhs

STEP = 1e-3
E_WINDOW = (-1.0, 1.0)
GRID_STEPS = 4000
E_TOL = 1e-10


class Branch(enum.Enum):
    DECAYING = "decaying"
    GROWING = "growing"


@dataclass(frozen=True)
class Level:
    n_index: int
    energy: float
    """Energy in eV."""
    branch: Branch
    richardson_error: float = 0.0
    """Estimated step-size error of ``energy`` in eV."""


@dataclass(frozen=True)
class ConfinedSpectrum:
    r_c: float
    """Cage radius in bohr."""
    levels: tuple
    missing: tuple = field(default=())
    """Level indices requested but not found in the energy window."""

    @property
    def r_c_nm(self):
        return self.r_c * BOHR_NM

    @property
    def energies(self):
        return np.array([lv.energy for lv in self.levels])

    @property
    def ground(self):
        if not self.levels:
            raise DomainError("empty spectrum")
        return self.levels[0].energy

    def branch(self, branch):
        return [lv for lv in self.levels if lv.branch is branch]


@njit(cache=False)
def _rk4_kernel(energy, r_start, h, count):
    # regular solution from its series at r_start, RK4 out to r_start + count h
    out = np.empty(energy.size)
    peak = np.empty(energy.size)
    for j in range(energy.size):
        e = energy[j]
        r = r_start
        u = r - r * r + (1.0 - e) * r ** 3 / 3.0
        v = 1.0 - 2.0 * r + (1.0 - e) * r * r
        top = abs(u)
        for k in range(count):
            k1u = v
            k1v = -2.0 * (e + 1.0 / r) * u
            rm = r + 0.5 * h
            k2u = v + 0.5 * h * k1v
            k2v = -2.0 * (e + 1.0 / rm) * (u + 0.5 * h * k1u)
            k3u = v + 0.5 * h * k2v
            k3v = -2.0 * (e + 1.0 / rm) * (u + 0.5 * h * k2u)
            r = r_start + (k + 1) * h
            k4u = v + h * k3v
            k4v = -2.0 * (e + 1.0 / r) * (u + h * k3u)
            u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
            v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
            top = max(top, abs(u))
        out[j] = u
        peak[j] = top
    return out, peak


def shoot(energy, r_c, step=STEP, return_peak=False):
    """u(r_c) of the regular solution normalized by u'(0) = 1.

    ``energy`` (hartree) may be an array; the result has the same shape.
    With ``return_peak`` the running maximum of |u| is returned as well.
    """
    if not r_c > 0:
        raise DomainError("cage radius must be positive")
    if not step > 0:
        raise DomainError("step must be positive")
    energy = np.asarray(energy, dtype=float)
    r_start = min(step, 0.5 * r_c)
    count = max(1, math.ceil((r_c - r_start) / step))
    h = (r_c - r_start) / count
    u, peak = _rk4_kernel(energy.ravel(), r_start, h, count)
    u, peak = u.reshape(energy.shape), peak.reshape(energy.shape)
    if energy.ndim == 0:
        u, peak = float(u), float(peak)
    return (u, peak) if return_peak else u


def _refine(lo, hi, f_lo, r_c, step, tol=E_TOL, max_iter=200):
    # vectorized Illinois regula falsi on all brackets at once
    lo, hi, f_lo = lo.copy(), hi.copy(), f_lo.copy()
    f_hi = shoot(hi, r_c, step)
    side = np.zeros(lo.shape, dtype=int)
    for _ in range(max_iter):
        mid = (lo * f_hi - hi * f_lo) / (f_hi - f_lo)
        bad = ~np.isfinite(mid) | (mid <= lo) | (mid >= hi)
        mid[bad] = 0.5 * (lo[bad] + hi[bad])
        f_mid = shoot(mid, r_c, step)
        left = np.sign(f_mid) == np.sign(f_lo)
        lo = np.where(left, mid, lo)
        f_lo = np.where(left, f_mid, f_lo)
        hi = np.where(left, hi, mid)
        f_hi = np.where(left, f_hi, f_mid)
        # halve the stale endpoint when the same side moves twice
        f_hi = np.where(left & (side == 1), 0.5 * f_hi, f_hi)
        f_lo = np.where(~left & (side == -1), 0.5 * f_lo, f_lo)
        side = np.where(left, 1, -1)
        if np.all(hi - lo <= tol) or np.all(f_mid == 0.0):
            return np.where(np.abs(f_lo) <= np.abs(f_hi), lo, hi)
    raise ConvergenceError("eigenvalue refinement did not converge")


def _roots(r_c, step, window, grid_steps, count):
    grid = np.linspace(window[0], window[1], grid_steps + 1)
    values = shoot(grid, r_c, step)
    idx = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0][:count]
    if idx.size == 0:
        return np.empty(0)
    return _refine(grid[idx], grid[idx + 1], values[idx], r_c, step)


def _richardson(roots, r_c, step):
    # re-solve at half step from a tight bracket around each root; RK4 error ~ h^4
    if roots.size == 0:
        return roots
    width = 1e-4 + 1e-4 * np.abs(roots)
    lo, hi = roots - width, roots + width
    f_lo = shoot(lo, r_c, 0.5 * step)
    f_hi = shoot(hi, r_c, 0.5 * step)
    if np.any(np.sign(f_lo) == np.sign(f_hi)):
        raise ConvergenceError("half-step root left its bracket")
    fine = _refine(lo, hi, f_lo, r_c, 0.5 * step)
    return np.abs(fine - roots) / 15.0


def confined_hydrogen_eigenvalues(r_c, count=4, *, step=STEP, window=E_WINDOW,
                                  grid_steps=GRID_STEPS, richardson=True):
    """Lowest `count` s-wave levels with u(r_c) = 0, `r_c` in bohr.

    Levels below zero energy are labeled ``DECAYING`` and levels above it
    ``GROWING``.  Indices requested but not found inside the energy window
    (hartree) are listed in ``missing``.
    """
    if count < 1:
        raise DomainError("count must be positive")
    if grid_steps < 1:
        raise DomainError("the bracketing grid needs at least one step")
    roots = _roots(r_c, step, window, grid_steps, count)
    errors = _richardson(roots, r_c, step) if richardson else np.zeros_like(roots)
    levels = tuple(
        Level(n_index=i + 1, energy=float(e) * HARTREE_EV,
              branch=Branch.DECAYING if e < 0 else Branch.GROWING,
              richardson_error=float(err) * HARTREE_EV)
        for i, (e, err) in enumerate(zip(roots, errors)))
    missing = tuple(range(len(levels) + 1, count + 1))
    return ConfinedSpectrum(r_c=float(r_c), levels=levels, missing=missing)


def wall_residual(energy_ev, r_c, step=STEP):
    """|u(r_c)| / max |u| for a level, a scale-free measure of the wall condition."""
    u, peak = shoot(energy_ev / HARTREE_EV, r_c, step, return_peak=True)
    return float(abs(u) / peak)


def thermal_energy_spread(temperature):
    """k_B T in eV."""
    if not temperature > 0:
        raise DomainError("temperature must be positive")
    return BOLTZMANN_EV_PER_K * temperature


def max_excitation_spread(spectrum):
    """Highest minus lowest level in eV; accepts a spectrum or a sequence of energies."""
    energies = (spectrum.energies if isinstance(spectrum, ConfinedSpectrum)
                else np.asarray(spectrum, dtype=float))
    if energies.size == 0:
        raise DomainError("empty spectrum")
    return float(energies.max() - energies.min())


VACUUM_VALUES_EV = (-13.62, -3.41, -1.51, -0.85)
CAGE_SOL1_EV = (-13.62, -1.14, None, None)
CAGE_SOL2_EV = (-13.62, -1.14, 1.14, 13.62)
CAGE_RADIUS_NM = 0.36


def table1_rows(spectrum, count=4):
    """Rows (n, E_vacuum, E_cage_sol1, E_cage_sol2) in eV.

    Bound cage levels appear in both cage columns; levels above zero only in
    the second.  Cells with no computed level are None.
    """
    decaying = [lv.energy for lv in spectrum.branch(Branch.DECAYING)]
    every = [lv.energy for lv in spectrum.levels]
    rows = []
    for i in range(count):
        n = i + 1
        rows.append((n, -RYDBERG_EV / n ** 2,
                     decaying[i] if i < len(decaying) else None,
                     every[i] if i < len(every) else None))
    return rows


@dataclass(frozen=True)
class UncertaintyBudget:
    """Widths in nm and eV; products in eV nm, recomputed on access."""

    sigma_r: float
    sigma_E: float
    delta_r: float
    delta_E: float
    rydberg_ev: float = RYDBERG_EV
    bohr_nm: float = BOHR_NM

    def __post_init__(self):
        for name in ("sigma_r", "sigma_E", "delta_r", "delta_E"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")

    @property
    def deltaE_sigma_r(self):
        return self.delta_E * self.sigma_r

    @property
    def sigmaE_delta_r(self):
        return self.sigma_E * self.delta_r

    @property
    def deltaE_delta_r(self):
        return self.delta_E * self.delta_r

    @property
    def reference(self):
        """a_B E_0 / 2 with E_0 the hydrogen binding energy."""
        return self.bohr_nm * self.rydberg_ev / 2.0

    @property
    def products(self):
        return {"deltaE_sigma_r": self.deltaE_sigma_r,
                "sigmaE_delta_r": self.sigmaE_delta_r,
                "deltaE_delta_r": self.deltaE_delta_r,
                "reference": self.reference}

    @property
    def heisenberg_reduced(self):
        """The disturbance pair alone falls below the reference value."""
        return self.deltaE_delta_r < self.reference

    @property
    def uvur(self):
        """Left side sigma_r delta_E + delta_r sigma_E + delta_r delta_E against the reference."""
        return uvur_lhs(self.sigma_r, self.sigma_E, self.delta_r, self.delta_E,
                        h_tilde=2.0 * self.reference)


def uncertainty_budget(sigma_r=5.29e-2, sigma_E=4.31e-3, delta_r=1e-2,
                       delta_E=27.24):
    return UncertaintyBudget(sigma_r=sigma_r, sigma_E=sigma_E,
                             delta_r=delta_r, delta_E=delta_E)
