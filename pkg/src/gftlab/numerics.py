"""Special functions and numerical primitives.

Everything here is a pure function of its arguments.  Scalar routines accept
numpy arrays wherever the underlying formula vectorizes cleanly.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _integrate
from scipy import special as _special


class NumericsError(Exception):
    """Base class for numerical failures raised by this package."""


class DomainError(NumericsError, ValueError):
    """An argument lies outside the domain of a function."""


class ConvergenceError(NumericsError, RuntimeError):
    """An iterative procedure failed to converge within its budget."""


@dataclass(frozen=True)
class Tolerance:
    """Convergence budget shared by quadrature, series and root finding."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_iter: int = 200

    def __post_init__(self):
        if not self.abs_tol > 0 or not self.rel_tol > 0:
            raise ValueError("tolerances must be positive")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValueError("max_iter must be a positive integer")


DEFAULT_TOL = Tolerance()
_EPS = float(np.finfo(float).eps)


def gamma_fn(x):
    """Gamma function for positive real arguments."""
    if not x > 0:
        raise DomainError(f"gamma_fn requires x > 0, got {x!r}")
    return math.gamma(x)


def erf_fn(x):
    """Error function; accepts scalars or arrays."""
    if np.ndim(x) == 0:
        return math.erf(float(x))
    return _special.erf(np.asarray(x, dtype=float))


def laguerre_assoc(n, k, x):
    """Associated Laguerre polynomial L_n^k(x).

    Uses the normalization with L_n^k(0) = binom(n + k, n), i.e. the
    Rodrigues form with a 1/n! prefactor.  Evaluated by the upward
    three-term recurrence, which is stable for x >= 0.
    """
    if n < 0 or k < 0:
        raise DomainError("laguerre_assoc requires n >= 0 and k >= 0")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if x.ndim else float(prev)
    cur = 1.0 + k - x
    for j in range(1, n):
        prev, cur = cur, ((2 * j + 1 + k - x) * cur - (j + k) * prev) / (j + 1)
    return cur if x.ndim else float(cur)


def bessel_j(l, x):
    """Bessel function of the first kind J_l(x) for integer l >= 0, x >= 0."""
    if l < 0:
        raise DomainError("negative Bessel orders are not supported")
    if np.any(np.asarray(x) < 0):
        raise DomainError("bessel_j requires x >= 0")
    out = _special.jv(l, x)
    return float(out) if np.ndim(out) == 0 else out


def _mcmahon(l, n):
    # asymptotic expansion for the n-th zero of J_l
    mu = 4.0 * l * l
    beta = (n + 0.5 * l - 0.25) * math.pi
    b8 = 8.0 * beta
    return (beta - (mu - 1.0) / b8
            - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8 ** 3))


def bessel_zeros(l, count, tol=DEFAULT_TOL):
    """First `count` positive zeros of J_l as an array (Newton from McMahon)."""
    if l < 0 or count < 0:
        raise DomainError("bessel_zeros requires l >= 0 and count >= 0")
    n = np.arange(1, count + 1)
    z = np.array([_mcmahon(l, k) for k in n], dtype=float)
    for _ in range(tol.max_iter):
        jl = _special.jv(l, z)
        djl = l / z * jl - _special.jv(l + 1, z)
        step = jl / djl
        z = z - step
        if np.all(np.abs(step) <= tol.abs_tol + tol.rel_tol * np.abs(z)):
            break
    else:
        raise ConvergenceError(f"Bessel zeros of order {l} did not converge")
    if count > 1 and np.any(np.diff(z) <= 0):
        raise ConvergenceError("Newton iteration jumped between Bessel zeros")
    return z


def bessel_zero(l, n, tol=DEFAULT_TOL):
    """The n-th positive zero z_l^n of J_l."""
    if n < 1:
        raise DomainError("zero index n starts at 1")
    return float(bessel_zeros(l, n, tol)[-1])


def kummer_m(a, b, x, tol=DEFAULT_TOL):
    """Confluent hypergeometric series M(a, b; x) = 1F1(a; b; x).

    Summed term by term until the geometric bound on the remaining tail
    drops below double-precision round-off of the partial sum; ``tol``
    supplies the term budget.  Negative arguments go through Kummer's
    transformation so that every summed term is positive whenever a and b
    are.
    """
    if b <= 0 and float(b).is_integer():
        raise DomainError(f"kummer_m undefined for b = {b!r}")
    if x < 0:
        return math.exp(x) * kummer_m(b - a, b, -x, tol)
    term = 1.0
    total = 1.0
    for k in range(tol.max_iter):
        term *= (a + k) / (b + k) * x / (k + 1)
        total += term
        if term == 0.0:
            return total
        nxt = abs((a + k + 1) / (b + k + 1) * x / (k + 2))
        if nxt < 1.0:
            tail = abs(term) * nxt / (1.0 - nxt)
            if tail <= _EPS * abs(total):
                return total
    raise ConvergenceError(
        f"kummer_m({a}, {b}, {x}) needs more than {tol.max_iter} terms")


def tricomi_u(a, b, x):
    """Confluent hypergeometric function of the second kind U(a, b, x)."""
    if x <= 0:
        raise DomainError("tricomi_u requires x > 0")
    return float(_special.hyperu(a, b, x))


def integrate(f, a, b, tol=DEFAULT_TOL, points=None):
    """Adaptive Gauss-Kronrod quadrature of f over the finite interval [a, b].

    Infinite ranges must be replaced by a cutoff (see `gaussian_cutoff` and
    `coulomb_cutoff`).
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("integrate needs finite limits; apply a cutoff")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _integrate.IntegrationWarning)
        value, _err, info, *msg = _integrate.quad(
            f, a, b, epsabs=tol.abs_tol, epsrel=tol.rel_tol,
            limit=tol.max_iter, points=points, full_output=1)
    # a message is only returned on failure; roundoff-limited results are kept
    failed = bool(msg) and "roundoff" not in str(msg[0])
    if failed or not math.isfinite(value):
        raise ConvergenceError(
            f"quadrature on [{a}, {b}] did not converge "
            f"({info['last']} subintervals)")
    return value


def gauss_legendre(a, b, panels=32, order=64):
    """Nodes and weights of a composite Gauss-Legendre rule on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def gaussian_cutoff(mu, sigma, width=10.0):
    """Upper limit standing in for infinity for a Gaussian integrand."""
    return mu + width * sigma


def coulomb_cutoff(n, a_B=1.0):
    """Upper limit standing in for infinity for the n-th Coulomb radial state.

    exp(-r / (a_B n)) alone would suggest 50 a_B n, but the Laguerre factor
    pushes the bulk of |R_n|^2 out to the turning point 2 a_B n^2.
    """
    return a_B * (50.0 * n + 2.0 * n * n)
