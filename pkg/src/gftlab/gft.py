"""Generalized Fourier transforms of Gaussian states.

A state is projected onto a radial eigenbasis, phi_n = int r^w psi R_n dr,
and the spectrum {phi_n} is read as a distribution over the eigenvalue axis
(energy or radial momentum).  Closed-form coefficient formulas for the three
radial problems live here too, for cross-checking the quadrature.
"""

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from .numerics import (
    DEFAULT_TOL, DomainError, NumericsError, Tolerance, bessel_j,
    bessel_zeros, gauss_legendre, gaussian_cutoff, kummer_m, tricomi_u,
)
from .slbasis import BasisKind, RadialBasis


class TruncationError(NumericsError):
    """The spectrum still carries too much weight beyond the last mode kept."""


class RegimeWarning(UserWarning):
    """A small-width approximation was used outside its validity range."""


class Domain(enum.Enum):
    FULL_LINE = "full-line"
    HALF_LINE = "half-line"


@dataclass(frozen=True)
class GaussianState:
    """Gaussian amplitude (2 pi sigma^2)^(-1/4) exp(-(x - mu)^2 / (4 sigma^2))."""

    sigma: float
    mu: float = 0.0
    domain: Domain = Domain.HALF_LINE

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma!r}")

    def amplitude(self, x):
        x = np.asarray(x, dtype=float)
        return ((2.0 * math.pi * self.sigma ** 2) ** -0.25
                * np.exp(-((x - self.mu) ** 2) / (4.0 * self.sigma ** 2)))

    def density(self, x):
        return self.amplitude(x) ** 2


@dataclass(frozen=True)
class SpectralCoefficients:
    """Projection of a state onto the first N eigenfunctions of a basis.

    ``raw`` holds the plain projections of the (normalized) input state;
    ``values`` rescales them to unit sum of squares.
    """

    raw: np.ndarray
    eigenvalues: np.ndarray
    basis: RadialBasis
    state_norm2: float
    tail_mass: float
    upper: float

    normalized = True

    @property
    def n_max(self):
        return len(self.raw)

    @property
    def values(self):
        return self.raw / math.sqrt(float(np.sum(self.raw ** 2)))

    def weights(self, mode="squared"):
        """Probability weights on the eigenvalue axis.

        ``squared`` gives phi_n^2 / sum phi_m^2.  ``literal`` uses the
        unit-norm amplitudes phi_n themselves and requires them all to be
        non-negative once round-off-level values are zeroed.
        """
        if mode == "squared":
            w = self.raw ** 2
            return w / w.sum()
        if mode == "literal":
            v = self.values
            # coefficients at quadrature round-off carry no sign information
            v = np.where(np.abs(v) <= 1e-13 * np.max(np.abs(v)), 0.0, v)
            if np.any(v < 0):
                raise DomainError(
                    "literal weights need non-negative coefficients; "
                    f"{int(np.sum(v < 0))} of {len(v)} are negative")
            return v
        raise ValueError(f"unknown weight mode {mode!r}")


def _prepare(state, basis, upper=None):
    """Return (amplitude callable, integration upper limit, is_gaussian)."""
    if isinstance(state, GaussianState):
        if state.domain is not Domain.HALF_LINE:
            raise DomainError("radial bases need a half-line state")
        if basis.bounded:
            upper = basis.family.r0
        elif upper is None:
            upper = gaussian_cutoff(state.mu, state.sigma)
        return state.amplitude, upper, True
    if not callable(state):
        raise TypeError("state must be a GaussianState or a callable amplitude")
    if basis.bounded:
        upper = basis.family.r0
    elif upper is None:
        raise DomainError("pass `upper` for a general amplitude on an unbounded basis")
    return state, upper, False


def _quadrature(basis, upper, state):
    # resolve both the state scale and the fastest basis oscillation
    scale = state.sigma if isinstance(state, GaussianState) else upper / 64.0
    k_max = 2.0
    if basis.bounded:
        k_max = float(np.max(basis.eigenvalues()))
    panels = int(max(64, math.ceil(4.0 * upper / scale),
                     math.ceil(k_max * upper / math.pi)))
    return gauss_legendre(0.0, upper, panels, 32)


def _tail_mass(basis, raw):
    n = len(raw)
    if basis.kind is BasisKind.HYDROGEN:
        # Rydberg tail: R_n ~ n^(-3/2) near the origin, so phi_n ~ c n^(-3/2)
        c2 = raw[-1] ** 2 * n ** 3
        return float(c2 * special.zeta(3.0, n + 1))
    last, prev = raw[-1] ** 2, raw[-2] ** 2
    if last <= (1e-13 * np.max(np.abs(raw))) ** 2:
        # coefficients have decayed into quadrature round-off
        return float(last)
    q = last / prev if prev > 0 else math.inf
    return float(last * q / (1.0 - q)) if q < 1.0 else math.inf


def _project(amp, basis, upper, state, n):
    r, w = _quadrature(basis.with_n_max(n), upper, state)
    psi = amp(r)
    weight = w * r ** basis.measure_exponent
    norm2 = float(np.sum(weight * psi * psi))
    return basis.functions(r, n) @ (weight * psi), norm2


def gft_forward(state, basis, n_max=None, *, upper=None, tail_tol=1e-8,
                tail_target=1e-10, n_cap=None):
    """Project `state` onto `basis`.

    Gaussian states are renormalized numerically under the basis measure
    r**w on the projection interval.  Starting from ``n_max`` the number of
    modes is doubled until the estimated tail mass falls below
    ``tail_target`` or ``n_cap`` (default 4 * n_max) is reached; a remaining
    tail above ``tail_tol`` raises `TruncationError`.
    """
    n = basis.n_max if n_max is None else n_max
    n_cap = 4 * n if n_cap is None else max(n_cap, n)
    amp, upper, is_gaussian = _prepare(state, basis, upper)
    while True:
        raw, norm2 = _project(amp, basis, upper, state, n)
        if is_gaussian:
            raw = raw / math.sqrt(norm2)
            norm2 = 1.0
        tail = _tail_mass(basis, raw)
        if tail <= tail_target or 2 * n > n_cap:
            break
        n *= 2
    if not tail <= tail_tol:
        raise TruncationError(
            f"estimated tail mass {tail:.3g} beyond n = {n} exceeds {tail_tol:g}")
    sized = basis.with_n_max(n)
    return SpectralCoefficients(raw=raw, eigenvalues=sized.eigenvalues(),
                                basis=sized, state_norm2=norm2,
                                tail_mass=tail, upper=upper)


def gft_inverse(coeffs, r):
    """Reconstruct sum_i phi_i R_i(r) from raw coefficients."""
    r = np.asarray(r, dtype=float)
    out = coeffs.raw @ coeffs.basis.functions(np.atleast_1d(r), coeffs.n_max)
    return out if r.ndim else float(out[0])


def parseval_check(state, coeffs):
    """|sum phi_n^2 - int r^w psi^2 dr| for the state the coefficients came from."""
    amp, upper, is_gaussian = _prepare(state, coeffs.basis, coeffs.upper)
    r, w = _quadrature(coeffs.basis, upper, state)
    psi = amp(r)
    norm2 = float(np.sum(w * r ** coeffs.basis.measure_exponent * psi * psi))
    if is_gaussian:
        psi = psi / math.sqrt(norm2)
        norm2 = float(np.sum(w * r ** coeffs.basis.measure_exponent * psi * psi))
    return abs(float(np.sum(coeffs.raw ** 2)) - norm2)


def plane_wave_dual(state, mu2=0.0, h_tilde=1.0):
    """Dual Gaussian of a full-line Gaussian under the ordinary Fourier kernel."""
    if state.domain is not Domain.FULL_LINE:
        raise DomainError("the plane-wave transform acts on full-line states")
    if not h_tilde > 0:
        raise DomainError("h_tilde must be positive")
    return GaussianState(sigma=h_tilde / (2.0 * state.sigma), mu=mu2,
                         domain=Domain.FULL_LINE)


def plane_wave_amplitude(xi1, mu1, sigma1, mu2, h_tilde=1.0):
    """Prepared amplitude carrying mean mu2 of the dual variable as a phase."""
    xi1 = np.asarray(xi1, dtype=float)
    return ((2.0 * math.pi * sigma1 ** 2) ** -0.25
            * np.exp(-((xi1 - mu1) ** 2) / (4.0 * sigma1 ** 2)
                     + 1j * mu2 * (xi1 - mu1) / h_tilde))


def plane_wave_dual_amplitude(xi2, mu1, sigma1, mu2, h_tilde=1.0):
    """Closed-form Fourier image of `plane_wave_amplitude`."""
    xi2 = np.asarray(xi2, dtype=float)
    return (np.sqrt(math.sqrt(2.0 / math.pi) * sigma1 / h_tilde)
            * np.exp(-((xi2 - mu2) ** 2) * sigma1 ** 2 / h_tilde ** 2
                     - 1j * xi2 * mu1 / h_tilde))


def _log_sum(log_mags, signs):
    top = np.max(log_mags)
    return float(np.sum(signs * np.exp(log_mags - top))), top


def hydrogen_coeff_closed_form(n, sigma_r, variant="complete"):
    """Projection of the Gaussian amplitude onto R_n, as a finite sum over
    the Laguerre terms (atomic units, no normalization constant applied).

    Each term needs int_0^inf r^(s-1) exp(-r^2/(4 sigma^2) - r/n) dr, which
    equals Gamma(s) sigma^s U(s/2, 1/2, sigma^2/n^2).  ``variant="printed"``
    keeps only the leading 1F1(s/2; 1/2; sigma^2/n^2) piece of U with the
    published prefactors; it does not match the quadrature and is provided
    for comparison only.
    """
    if n < 1:
        raise DomainError("principal quantum number starts at 1")
    if not sigma_r > 0:
        raise DomainError("sigma_r must be positive")
    m = np.arange(n)
    x = (sigma_r / n) ** 2
    if variant == "complete":
        s = m + 3.0
        u = np.array([tricomi_u(si / 2.0, 0.5, x) for si in s])
        log_mag = (special.gammaln(n + 1) - special.gammaln(n - m)
                   - special.gammaln(m + 2) + m * math.log(2.0 / n)
                   - special.gammaln(m + 1) + special.gammaln(s)
                   + s * math.log(sigma_r) + np.log(u))
        total, top = _log_sum(log_mag, (-1.0) ** m)
        prefactor = (math.sqrt((2.0 / n) ** 3 / (2.0 * n * n))
                     * (2.0 * math.pi * sigma_r ** 2) ** -0.25)
        return prefactor * total * math.exp(top)
    if variant == "printed":
        tol = Tolerance(max_iter=max(200, int(20 * x) + 200))
        f = np.array([kummer_m((mi + 3) / 2.0, 0.5, x, tol) for mi in m])
        log_mag = ((1.25 + m) * math.log(2.0) + np.log(m + 2.0)
                   + special.gammaln(n) - 0.25 * math.log(math.pi)
                   - special.gammaln(m + 1) - special.gammaln(n - m)
                   - (1.5 + m) * math.log(n) + np.log(f)
                   + (2.5 + m) * math.log(sigma_r))
        total, top = _log_sum(log_mag, (-1.0) ** m)
        return total * math.exp(top)
    raise ValueError(f"unknown variant {variant!r}")


def _check_regime(sigma, r0):
    # sigma << r0 is assumed by both small-width formulas
    if sigma > 0.1 * r0:
        warnings.warn(f"sigma = {sigma:g} exceeds 0.1 * r0 = {0.1 * r0:g}",
                      RegimeWarning, stacklevel=3)


def cylinder_coeff_approx(n, sigma_R, r0=1.0):
    """Small-width coefficient of a Gaussian beam on the n-th Bessel mode."""
    _check_regime(sigma_R, r0)
    z = bessel_zeros(0, int(np.max(n)))[np.asarray(n) - 1]
    return (4.0 * sigma_R ** 1.5
            / ((2.0 * math.pi) ** 0.25 * r0 * np.abs(bessel_j(1, z)))
            * np.exp(-(sigma_R * z / r0) ** 2))


def sphere_coeff_approx(n, sigma_R, r0=1.0):
    """Small-width coefficient of a Gaussian field on the n-th sine mode."""
    _check_regime(sigma_R, r0)
    n = np.asarray(n, dtype=float)
    return (2.0 ** 2.25 * math.pi ** 1.25 / r0 ** 1.5 * n * sigma_R ** 2.5
            * np.exp(-(n * math.pi * sigma_R / r0) ** 2))


@dataclass(frozen=True)
class DualWidth:
    sigma_dual: float
    mean_dual: float
    degenerate: bool
    fit_sigma: float = None
    fit_mean: float = None


def _gaussian(e, amp, mean, width):
    return amp * np.exp(-((e - mean) ** 2) / (2.0 * width ** 2))


def gaussian_fit(x, y, guess=None):
    """Least-squares fit of amp * exp(-(x - mean)^2 / (2 width^2)) to samples."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if guess is None:
        w = y / y.sum()
        mean = float(np.sum(w * x))
        guess = (float(y.max()), mean, math.sqrt(float(np.sum(w * (x - mean) ** 2))))
    with warnings.catch_warnings():
        # the parameter covariance is not used
        warnings.simplefilter("ignore", optimize.OptimizeWarning)
        popt, _ = optimize.curve_fit(_gaussian, x, y, p0=guess, maxfev=20000)
    return float(popt[0]), float(popt[1]), abs(float(popt[2]))


def dual_width(coeffs, mode="squared", fit=False):
    """Mean and standard deviation of the eigenvalue axis under the spectral
    weights; optionally also a Gaussian-fit width."""
    p = coeffs.weights(mode)
    if mode == "literal":
        p = p / p.sum()
    e = coeffs.eigenvalues
    mean = float(np.sum(p * e))
    sigma = math.sqrt(max(float(np.sum(p * (e - mean) ** 2)), 0.0))
    degenerate = bool(p.max() > 1.0 - 1e-12)
    if degenerate:
        return DualWidth(0.0, mean, True)
    if not fit:
        return DualWidth(sigma, mean, False)
    _, fmean, fsigma = gaussian_fit(e, p, (float(p.max()), mean, sigma))
    return DualWidth(sigma, mean, False, fsigma, fmean)
