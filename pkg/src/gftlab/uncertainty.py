"""Uncertainty-relation calculus: Kennard-Robertson products, generalized
bound factors, the hydrogen energy-minimization model and the relation with
measurement disturbances."""

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .gft import GaussianState, dual_width, gft_forward
from .numerics import DomainError
from .slbasis import BasisFamily, RadialBasis

FACTOR_MEASURED = 1.72
FACTOR_MODEL = math.sqrt(3.0)


class BoundKind(enum.Enum):
    KR = "kennard-robertson"
    GENERALIZED = "generalized"
    UVUR = "uvur"


@dataclass(frozen=True)
class UncertaintyReport:
    sigma1: float
    sigma2: float
    delta1: float = 0.0
    delta2: float = 0.0
    h_tilde: float = 1.0
    bound_kind: BoundKind = BoundKind.KR
    factor: float = 2.0
    """Bound is h_tilde / factor; 2 for the Kennard-Robertson case."""
    atol: float = 1e-12

    def __post_init__(self):
        if not (self.sigma1 >= 0 and self.sigma2 >= 0):
            raise DomainError("widths must be non-negative")
        if not (self.delta1 >= 0 and self.delta2 >= 0):
            raise DomainError("disturbances must be non-negative")
        if not (self.h_tilde > 0 and self.factor > 0):
            raise DomainError("h_tilde and factor must be positive")

    @property
    def product(self):
        if self.bound_kind is BoundKind.UVUR:
            return (self.sigma1 * self.delta2 + self.delta1 * self.sigma2
                    + self.delta1 * self.delta2)
        return self.sigma1 * self.sigma2

    @property
    def bound(self):
        return self.h_tilde / self.factor

    @property
    def slack(self):
        return self.product - self.bound

    @property
    def satisfied(self):
        return self.slack >= -self.atol

    @property
    def equality(self):
        return abs(self.slack) <= self.atol

    @property
    def disturbance_product(self):
        return self.delta1 * self.delta2


def kr_check(sigma1, sigma2, h_tilde=1.0):
    if not (sigma1 > 0 and sigma2 > 0):
        raise DomainError("widths must be positive")
    return UncertaintyReport(sigma1, sigma2, h_tilde=h_tilde)


@dataclass(frozen=True)
class ScanSummary:
    reports: tuple
    dual_widths: tuple

    @property
    def products(self):
        return np.array([r.product for r in self.reports])

    @property
    def mean(self):
        return float(self.products.mean())

    @property
    def spread(self):
        """max / min of the product over the grid."""
        p = self.products
        return float(p.max() / p.min())

    @property
    def measured_factor(self):
        """f such that the mean product equals 1 / f."""
        return 1.0 / self.mean

    reference_factors = {"measured": FACTOR_MEASURED, "model": FACTOR_MODEL}


def _hydrogen_point(sigma, n_max, tail_tol, n_cap):
    basis = RadialBasis(BasisFamily.hydrogen(), n_max)
    coeffs = gft_forward(GaussianState(sigma), basis, tail_tol=tail_tol,
                         n_cap=n_cap)
    return dual_width(coeffs)


def hydrogen_uncertainty_scan(sigma_grid, n_max=200, *, tail_tol=1e-4,
                              n_cap=None, executor=None):
    """sigma_r * sigma_E on the hydrogen basis for each width in the grid.

    The reports carry the generalized bound with the measured factor 1.72;
    `ScanSummary.measured_factor` gives the value the scan itself implies.
    ``n_cap`` defaults to ``n_max`` so the basis size stays fixed.
    """
    grid = [float(s) for s in sigma_grid]
    if any(not s > 0 for s in grid):
        raise DomainError("widths must be positive")
    n_cap = n_max if n_cap is None else n_cap
    args = [(s, n_max, tail_tol, n_cap) for s in grid]
    if executor is None:
        widths = [_hydrogen_point(*a) for a in args]
    else:
        widths = list(executor.map(lambda a: _hydrogen_point(*a), args))
    reports = tuple(
        UncertaintyReport(s, w.sigma_dual, bound_kind=BoundKind.GENERALIZED,
                          factor=FACTOR_MEASURED)
        for s, w in zip(grid, widths))
    return ScanSummary(reports=reports, dual_widths=tuple(widths))


def hydrogen_model_energy(r0, f_u):
    """3 p^2 / 2 - 1 / r0 with p = f_u / r0, in hartree."""
    if not r0 > 0:
        raise DomainError("r0 must be positive")
    return 1.5 * f_u ** 2 / r0 ** 2 - 1.0 / r0


def hydrogen_model_radius(f_u):
    """Minimizer of `hydrogen_model_energy` over r0."""
    if not f_u > 0:
        raise DomainError("f_u must be positive")
    return 3.0 * f_u ** 2


def uvur_lhs(sigma1, sigma2, delta1, delta2, h_tilde=1.0):
    """sigma1 delta2 + delta1 sigma2 + delta1 delta2 compared with h_tilde / 2."""
    return UncertaintyReport(sigma1, sigma2, delta1, delta2, h_tilde=h_tilde,
                             bound_kind=BoundKind.UVUR, atol=1e-10)


def disturbed_variance_product(delta1, sigma1, sigma2, h_tilde=1.0):
    """(sigma1^2 + delta1^2)(sigma2^2 + h^2 / (4 delta1^2)) for a
    minimum-uncertainty disturbance pair delta1 delta2 = h / 2."""
    delta1 = np.asarray(delta1, dtype=float)
    return (sigma1 ** 2 + delta1 ** 2) * (sigma2 ** 2 + h_tilde ** 2 / (4.0 * delta1 ** 2))


def disturbed_variance_derivative(delta1, sigma1, sigma2, h_tilde=1.0):
    """d/d delta1 of `disturbed_variance_product`."""
    delta1 = np.asarray(delta1, dtype=float)
    return 2.0 * delta1 * sigma2 ** 2 - h_tilde ** 2 * sigma1 ** 2 / (2.0 * delta1 ** 3)


@dataclass(frozen=True)
class Disturbance:
    delta1_star: float
    delta2_star: float
    stationarity: float
    """Derivative of the disturbed product at the optimum, relative to its terms."""


def optimal_disturbance(sigma1, sigma2, h_tilde=1.0):
    """Stationary disturbance of the post-measurement product."""
    if not (sigma1 > 0 and sigma2 > 0 and h_tilde > 0):
        raise DomainError("inputs must be positive")
    d1 = math.sqrt(h_tilde * sigma1 / (2.0 * sigma2))
    d2 = h_tilde / (2.0 * d1)
    scale = 2.0 * d1 * sigma2 ** 2
    resid = float(disturbed_variance_derivative(d1, sigma1, sigma2, h_tilde)) / scale
    return Disturbance(d1, d2, resid)


def numeric_optimal_disturbance(sigma1, sigma2, h_tilde=1.0):
    """Root of the derivative of the disturbed product, by bracketing."""
    d1 = math.sqrt(h_tilde * sigma1 / (2.0 * sigma2))
    return optimize.brentq(disturbed_variance_derivative, d1 * 1e-3, d1 * 1e3,
                           args=(sigma1, sigma2, h_tilde), xtol=1e-15,
                           rtol=4 * np.finfo(float).eps)


@dataclass(frozen=True)
class MinProduct:
    value: float
    scan_min: float
    certified: bool


def post_measurement_min_product(sigma1, sigma2, h_tilde=1.0, *,
                                 scan=(1e-3, 1e3, 20001), atol=1e-9):
    """sigma1 sigma2 + h / 2, certified against a log-grid scan over delta1."""
    if not (sigma1 > 0 and sigma2 > 0 and h_tilde > 0):
        raise DomainError("inputs must be positive")
    value = sigma1 * sigma2 + 0.5 * h_tilde
    grid = np.geomspace(scan[0], scan[1], int(scan[2]))
    scanned = np.sqrt(disturbed_variance_product(grid, sigma1, sigma2, h_tilde))
    scan_min = float(scanned.min())
    return MinProduct(value, scan_min, scan_min >= value - atol)
