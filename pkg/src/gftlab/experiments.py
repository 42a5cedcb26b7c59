"""Named experiments: each maps a parameter dict to a table of results.

Parameters carry a canonical unit; the CLI converts suffixed input such as
``0.36nm`` into it before calling the experiment.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import confined, infotheory, uncertainty
from .gft import GaussianState, dual_width, gaussian_fit, gft_forward
from .slbasis import BasisFamily, RadialBasis
from .units import BOHR_NM, HARTREE_EV, nm_to_bohr


@dataclass(frozen=True)
class Param:
    default: object
    kind: type = float
    unit: str = ""
    """Canonical unit; empty for dimensionless values."""
    positive: bool = True
    help: str = ""


@dataclass
class Table:
    columns: list
    units: list
    rows: list
    notes: list = field(default_factory=list)


@dataclass(frozen=True)
class Experiment:
    name: str
    description: str
    params: dict
    run: object
    checks: object = None


def _grid(p):
    if p["points"] == 1:
        return np.array([p["sigma_min"]])
    return np.geomspace(p["sigma_min"], p["sigma_max"], p["points"])


def _map(executor, fn, items):
    items = list(items)
    return list(executor.map(fn, items)) if executor else [fn(x) for x in items]


def _grid_checks(p):
    out = []
    if p["sigma_min"] > p["sigma_max"]:
        out.append(("error", "sigma_min exceeds sigma_max"))
    return out


def _bounded_checks(p):
    out = _grid_checks(p)
    if p["sigma_max"] > 0.1 * p["r0"]:
        out.append(("warning", f"sigma_max = {p['sigma_max']:g} lies outside the "
                               f"small-width approximation regime (> 0.1 * r0)"))
    return out


def _hydrogen_coeffs(sigma, p):
    basis = RadialBasis(BasisFamily.hydrogen(), p["n_max"])
    return gft_forward(GaussianState(sigma), basis, tail_tol=p["tail_tol"],
                       n_cap=p["n_max"])


def _fig1(p, executor=None):
    c = _hydrogen_coeffs(p["sigma"], p)
    weights = c.weights()
    amp, mean, width = gaussian_fit(c.eigenvalues, weights)
    fit = amp * np.exp(-((c.eigenvalues - mean) ** 2) / (2.0 * width ** 2))
    rows = [(n + 1, float(e), float(v), float(w), float(f))
            for n, (e, v, w, f) in enumerate(zip(c.eigenvalues, c.values, weights, fit))]
    return Table(["n", "E_n", "phi_n", "p_n", "gaussian_fit"],
                 ["", "hartree", "", "", ""], rows,
                 [f"fit mean = {mean!r} hartree", f"fit width = {width!r} hartree"])


def _fig2(p, executor=None):
    summary = uncertainty.hydrogen_uncertainty_scan(
        _grid(p), p["n_max"], tail_tol=p["tail_tol"], executor=executor)
    rows = [(r.sigma1, r.sigma2, r.product) for r in summary.reports]
    return Table(["sigma_r", "sigma_E", "product"], ["bohr", "hartree", "hartree bohr"],
                 rows, [f"mean product = {summary.mean!r}",
                        f"max/min = {summary.spread!r}",
                        f"measured factor = {summary.measured_factor!r}",
                        f"reference factors = {uncertainty.FACTOR_MEASURED!r}, "
                        f"{uncertainty.FACTOR_MODEL!r}"])


def _fig3(p, executor=None):
    delta = p["delta"]

    def point(s):
        c = _hydrogen_coeffs(s, p)
        return (float(s), infotheory.spectral_entropy(c),
                infotheory.differential_entropy_gaussian(s, delta))

    rows = _map(executor, point, _grid(p))
    best = min(rows, key=lambda r: r[1])
    return Table(["sigma_r", "S_E", "S_r"], ["bohr", "nat", "nat"], rows,
                 [f"argmin S_E = {best[0]!r} bohr"])


def _bounded_basis(p, family):
    return RadialBasis(family(p["r0"]), p["n_max"])


def _product_scan(p, executor, family):
    basis = _bounded_basis(p, family)

    def point(s):
        c = gft_forward(GaussianState(s), basis, tail_tol=p["tail_tol"],
                        n_cap=p["n_max"])
        w = dual_width(c)
        return (float(s), w.sigma_dual, float(s) * w.sigma_dual)

    return Table(["sigma_R", "sigma_P", "product"], ["bohr", "hbar/bohr", "hbar"],
                 _map(executor, point, _grid(p)))


def _fig4(p, executor=None):
    return _product_scan(p, executor, BasisFamily.cylinder)


def _fig6(p, executor=None):
    return _product_scan(p, executor, BasisFamily.sphere)


def _fig5(p, executor=None):
    basis = _bounded_basis(p, BasisFamily.cylinder)

    def point(s):
        c = gft_forward(GaussianState(s), basis, tail_tol=p["tail_tol"],
                        n_cap=p["n_max"])
        s_r = infotheory.truncated_gaussian_entropy(s, p["r0"])
        s_p = infotheory.spectral_entropy(c)
        return (float(s), s_r, s_p, s_r + s_p)

    rows = _map(executor, point, _grid(p))
    sums = np.array([r[3] for r in rows])
    return Table(["sigma_R", "S_radial", "S_momentum", "sum"],
                 ["bohr", "nat", "nat", "nat"], rows,
                 [f"sum range / mean = {float(np.ptp(sums) / sums.mean())!r}"])


def _table1(p, executor=None):
    r_c = nm_to_bohr(p["r_c"])
    spectrum = confined.confined_hydrogen_eigenvalues(r_c, p["count"])
    notes = [f"r_c = {r_c!r} bohr"]
    for lv in spectrum.levels:
        notes.append(f"level {lv.n_index}: {lv.branch.value}, "
                     f"step error {lv.richardson_error:.2e} eV")
    if spectrum.missing:
        notes.append("no level in the energy window for index "
                     + ", ".join(str(i) for i in spectrum.missing))
    return Table(["n", "E_vacuum", "E_cage_sol1", "E_cage_sol2"],
                 ["", "eV", "eV", "eV"], confined.table1_rows(spectrum, p["count"]),
                 notes)


def _budget(p, executor=None):
    sigma_e = p["sigma_E"]
    if p["T"] > 0:
        sigma_e = confined.thermal_energy_spread(p["T"])
    b = confined.uncertainty_budget(p["sigma_r"], sigma_e, p["delta_r"], p["delta_E"])
    rows = [(k, v) for k, v in b.products.items()]
    rows.append(("uvur_lhs", b.uvur.product))
    rows.append(("heisenberg_reduced", int(b.heisenberg_reduced)))
    return Table(["quantity", "value"], ["", "eV nm"], rows,
                 [f"sigma_E = {sigma_e!r} eV"])


def _uvur(p, executor=None):
    s1, s2, h = p["sigma1"], p["sigma2"], p["h_tilde"]
    grid = np.geomspace(p["delta_min"], p["delta_max"], p["points"])
    var = uncertainty.disturbed_variance_product(grid, s1, s2, h)
    bound = s1 * s2 + 0.5 * h
    rows = [(float(d), h / (2.0 * d), float(v), math.sqrt(v), bound)
            for d, v in zip(grid, var)]
    opt = uncertainty.optimal_disturbance(s1, s2, h)
    return Table(["delta1", "delta2", "variance_product", "width_product", "bound"],
                 ["", "", "", "", ""], rows,
                 [f"optimal delta1 = {opt.delta1_star!r}",
                  f"scan minimum = {float(np.sqrt(var.min()))!r}"])


def _cramer_rao(p, executor=None):
    mu = (p["mu1"], p["mu2"])
    sigma = (p["sigma1"], p["sigma2"])
    n = p["n"]
    rng = np.random.default_rng(p["seed"])
    draws = rng.normal(loc=mu, scale=sigma, size=(p["repeats"], n, 2))
    theta = draws.mean(axis=1)
    mc_var = theta.var(axis=0)
    eps_sq = ((draws - theta[:, None, :]) ** 2).mean(axis=1).mean(axis=0)
    fim = infotheory.fisher_information_gaussian_pair(sigma[0], sigma[1], n)
    inv = np.diag(np.linalg.inv(fim))
    rows = [(i + 1, float(inv[i]), float(mc_var[i]), float(eps_sq[i] / n),
             float(mc_var[i] / inv[i])) for i in range(2)]
    return Table(["component", "fim_inverse", "mc_variance", "eps_sq_over_n", "ratio"],
                 ["", "", "", "", ""], rows)


def _uvur_checks(p):
    if p["delta_min"] > p["delta_max"]:
        return [("error", "delta_min exceeds delta_max")]
    return []


_HYDROGEN = {"n_max": Param(200, int), "tail_tol": Param(1e-4)}
_BOUNDED = {"r0": Param(1.0, unit="bohr"), "n_max": Param(200, int),
            "tail_tol": Param(1e-4)}


def _scan(lo, hi, points, unit="bohr"):
    return {"sigma_min": Param(lo, unit=unit), "sigma_max": Param(hi, unit=unit),
            "points": Param(points, int)}


EXPERIMENTS = {e.name: e for e in [
    Experiment("fig1", "hydrogen spectrum of one Gaussian width",
               {"sigma": Param(10.0, unit="bohr"), **_HYDROGEN}, _fig1),
    Experiment("fig2", "hydrogen width product scan",
               {**_scan(2.0, 40.0, 20), **_HYDROGEN}, _fig2, _grid_checks),
    Experiment("fig3", "hydrogen spectral entropy scan",
               {**_scan(0.2, 5.0, 25), **_HYDROGEN,
                "delta": Param(infotheory.default_delta(), unit="nat", positive=False)},
               _fig3, _grid_checks),
    Experiment("fig4", "cylinder width product scan",
               {**_scan(0.02, 0.1, 9), **_BOUNDED}, _fig4, _bounded_checks),
    Experiment("fig5", "cylinder entropy balance scan",
               {**_scan(0.02, 0.2, 10), **_BOUNDED}, _fig5, _grid_checks),
    Experiment("fig6", "sphere width product scan",
               {**_scan(0.02, 0.1, 9), **_BOUNDED}, _fig6, _bounded_checks),
    Experiment("table1", "confined hydrogen levels",
               {"r_c": Param(0.36, unit="nm"), "count": Param(4, int)}, _table1),
    Experiment("budget", "caged hydrogen uncertainty budget",
               {"sigma_r": Param(5.29e-2, unit="nm"), "sigma_E": Param(4.31e-3, unit="eV"),
                "delta_r": Param(1e-2, unit="nm"), "delta_E": Param(27.24, unit="eV"),
                "T": Param(0.0, unit="K", positive=False,
                           help="if > 0, sigma_E is replaced by k_B T")},
               _budget),
    Experiment("uvur", "disturbed variance product over delta1",
               {"sigma1": Param(1.0), "sigma2": Param(0.5), "h_tilde": Param(1.0),
                "delta_min": Param(1e-3), "delta_max": Param(1e3),
                "points": Param(601, int)}, _uvur, _uvur_checks),
    Experiment("cramer-rao", "Monte-Carlo estimator variance against the Fisher bound",
               {"mu1": Param(0.0, positive=False), "mu2": Param(0.0, positive=False),
                "sigma1": Param(1.0), "sigma2": Param(2.0), "n": Param(10, int),
                "repeats": Param(10000, int), "seed": Param(0, int, positive=False)},
               _cramer_rao),
]}


# conversions into each canonical unit
UNIT_FACTORS = {
    "bohr": {"bohr": 1.0, "au": 1.0, "a.u.": 1.0, "nm": 1.0 / BOHR_NM},
    "nm": {"nm": 1.0, "bohr": BOHR_NM, "au": BOHR_NM, "a.u.": BOHR_NM},
    "eV": {"eV": 1.0, "hartree": HARTREE_EV, "Ha": HARTREE_EV},
    "K": {"K": 1.0},
    "nat": {"nat": 1.0},
}


def check(experiment, params):
    """Range diagnostics as (severity, message) pairs."""
    out = []
    for key, spec in experiment.params.items():
        value = params[key]
        if spec.positive and not value > 0:
            out.append(("error", f"{key} must be positive, got {value!r}"))
    if any(sev == "error" for sev, _ in out):
        return out
    if experiment.checks is not None:
        out.extend(experiment.checks(params))
    return out

