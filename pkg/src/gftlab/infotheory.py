"""Estimation-theory layer: scores, Fisher information, the Cramer-Rao
comparison, best estimators on sampled data, and entropies."""

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .numerics import DEFAULT_TOL, DomainError, erf_fn, gaussian_cutoff, integrate


@dataclass(frozen=True)
class MeasurementSample:
    """n i.i.d. draws of a two-component observable, shape (n, 2)."""

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2 or data.shape[1] != 2:
            raise ValueError("sample data must have shape (n, 2)")
        object.__setattr__(self, "data", data)

    @property
    def n(self):
        return self.data.shape[0]


@dataclass(frozen=True)
class FisherReport:
    fim: np.ndarray
    covariance: np.ndarray
    cr_satisfied: bool
    slack: np.ndarray
    equality: bool


@dataclass(frozen=True)
class Estimate:
    theta_hat: np.ndarray
    eps_sq: np.ndarray


def gaussian_log_density(x, mu, sigma):
    return -0.5 * ((x - mu) / sigma) ** 2 - math.log(math.sqrt(2.0 * math.pi) * sigma)


def score(log_density, x, theta):
    """Gradient of log f(x; theta) in theta by central differences.

    The step for component i is 1e-6 * max(1, |theta_i|).
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    grad = np.empty_like(theta)
    for i in range(theta.size):
        h = 1e-6 * max(1.0, abs(theta[i]))
        up, down = theta.copy(), theta.copy()
        up[i] += h
        down[i] -= h
        fu, fd = log_density(x, up), log_density(x, down)
        if not (np.all(np.isfinite(fu)) and np.all(np.isfinite(fd))):
            raise DomainError("log density is not finite near theta")
        grad[i] = (fu - fd) / (2.0 * h)
    return grad


def sample_score(log_density, xs, theta):
    """Score of an i.i.d. sample: the sum of the single-draw scores."""
    return sum(score(log_density, x, theta) for x in xs)


def expected_score(log_density, theta, a, b, tol=DEFAULT_TOL):
    """E[V] = int f(x; theta) V(x; theta) dx over [a, b] for each component."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    out = []
    for i in range(theta.size):
        def integrand(x, i=i):
            return math.exp(log_density(x, theta)) * score(log_density, x, theta)[i]
        out.append(integrate(integrand, a, b, tol))
    return np.array(out)


def fisher_information_gaussian_pair(sigma1, sigma2, n=1):
    """FIM for the means of two independent Gaussians from n draws."""
    if not (sigma1 > 0 and sigma2 > 0):
        raise DomainError("standard deviations must be positive")
    return np.diag([n / sigma1 ** 2, n / sigma2 ** 2])


def best_estimator(sample):
    """Sample means and the 1/n mean squared deviations of each component."""
    data = sample.data if isinstance(sample, MeasurementSample) else np.asarray(sample)
    if data.shape[0] == 0:
        raise ValueError("empty sample")
    theta = data.mean(axis=0)
    return Estimate(theta_hat=theta, eps_sq=((data - theta) ** 2).mean(axis=0))


def estimator_covariance(sample):
    """Covariance of the mean estimator implied by the data, eps^2 / n."""
    est = best_estimator(sample)
    return np.diag(est.eps_sq / sample.n)


def cramer_rao_check(covariance, fim, atol=1e-9):
    """Elementwise comparison of an estimator covariance with FIM^-1."""
    covariance = np.asarray(covariance, dtype=float)
    fim = np.asarray(fim, dtype=float)
    if abs(np.linalg.det(fim)) < 1e-300:
        raise DomainError("Fisher information matrix is singular")
    slack = covariance - np.linalg.inv(fim)
    return FisherReport(
        fim=fim, covariance=covariance,
        cr_satisfied=bool(np.all(slack >= -atol)), slack=slack,
        equality=bool(np.all(np.abs(slack) <= atol)))


def sample_measurements(mu, sigma, n, seed):
    """n i.i.d. draws from the product Gaussian, reproducible from `seed`."""
    if not all(s > 0 for s in sigma):
        raise DomainError("standard deviations must be positive")
    rng = np.random.default_rng(seed)
    data = rng.normal(loc=mu, scale=sigma, size=(n, 2))
    return MeasurementSample(data)


def spectral_entropy(coeffs, mode="squared"):
    """-sum p log p of a spectrum, in nats.

    ``coeffs`` is a `SpectralCoefficients` or an array of weights that is
    already a distribution (squared mode) or a unit-norm amplitude vector
    (literal mode, where the weights are the amplitudes themselves).
    """
    if hasattr(coeffs, "weights"):
        p = coeffs.weights(mode)
    else:
        p = np.asarray(coeffs, dtype=float)
        if mode == "literal" and np.any(p < 0):
            raise DomainError("literal entropy needs non-negative amplitudes")
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def default_delta(h_tilde=1.0):
    """Integration-measure constant making S_x + S_p = 0 at sigma_x sigma_p = h/2."""
    return -0.5 * math.log(math.e * math.pi * h_tilde)


def differential_entropy_gaussian(sigma, delta=0.0):
    """(1/2) log(2 pi e sigma^2) + delta."""
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    return 0.5 * math.log(2.0 * math.pi * math.e * sigma * sigma) + delta


def entropy_to_uncertainty(s_sum, h_tilde=1.0):
    """Width product implied by an entropy sum: (h/2) exp(S_x + S_p)."""
    return 0.5 * h_tilde * math.exp(s_sum)


def truncated_gaussian_entropy(sigma, r0, tol=DEFAULT_TOL):
    """-int_{-r0}^{r0} f log f for the zero-mean Gaussian density f."""
    if not (sigma > 0 and r0 > 0):
        raise DomainError("sigma and r0 must be positive")
    log_norm = -math.log(math.sqrt(2.0 * math.pi) * sigma)

    def integrand(r):
        log_f = log_norm - 0.5 * (r / sigma) ** 2
        return -math.exp(log_f) * log_f

    edge = min(r0, gaussian_cutoff(0.0, sigma, 40.0))
    return 2.0 * integrate(integrand, 0.0, edge, tol)


def contained_information(r0, sigma):
    """Mass of the Gaussian density inside |r| < r0: erf(r0 / (sqrt(2) sigma))."""
    if not (r0 > 0 and sigma > 0):
        raise DomainError("r0 and sigma must be positive")
    return erf_fn(r0 / (math.sqrt(2.0) * sigma))


def boundary_entropy(r0, sigma):
    """-I log I for the contained information I."""
    info = contained_information(r0, sigma)
    return -info * math.log(info) if info > 0 else 0.0


def boundary_entropy_argmax(sigma, tol=DEFAULT_TOL):
    """Radius maximizing `boundary_entropy`, where the contained mass is 1/e."""
    target = math.exp(-1.0)
    return optimize.brentq(
        lambda r0: contained_information(r0, sigma) - target,
        1e-12 * sigma, 10.0 * sigma, xtol=tol.abs_tol * sigma,
        rtol=4 * np.finfo(float).eps, maxiter=tol.max_iter)
