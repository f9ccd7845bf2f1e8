"""Likelihood evaluation and estimation.

The full mixture model is fitted in two stages: the rectangle side d is
plugged in from the origin cluster found by DBSCAN, then the remaining
parameters are maximized by Nelder-Mead in an unconstrained transformed
space. Comparison models: M1 (independent exponential margins, closed
form) and M2 (FGM-coupled exponential margins).
"""

import json
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, stats
from scipy.special import expit, logit, ndtr

from .bivariate import BivariateWeibull, bvw_pdf
from .clustering import ClusterLabels, DbscanParams, dbscan, origin_cluster_mask, select_eps
from .copulas import GaussianCopulaParams, GfgmParams
from .errors import (
    ConvergenceError,
    DegenerateDataError,
    DomainError,
    SingularityError,
)
from .mixture import MbwParams
from .univariate import RectUniform, WeibullParams

__all__ = [
    "FitResult",
    "ParamTransform",
    "loglik_mbw",
    "estimate_d",
    "fit_mbw",
    "fit_m1",
    "fit_m2",
    "compute_se",
    "bootstrap",
    "d_confidence_interval",
    "aic",
    "deviance_test",
]

_GAUSS_RHO_CAP = 1.0 - 1e-8


@dataclass
class FitResult:
    """Estimates plus fit diagnostics for one model on one dataset."""

    model: str
    estimates: dict
    loglik: float
    k: int
    std_errors: dict = field(default_factory=dict)
    p_values: dict = field(default_factory=dict)
    converged: bool = True
    iterations: int = 0
    n_evals: int = 0
    boundary_flags: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict, repr=False)

    @property
    def aic(self) -> float:
        return aic(self.loglik, self.k)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "estimates": self.estimates,
            "loglik": self.loglik,
            "aic": self.aic,
            "k": self.k,
            "std_errors": self.std_errors,
            "p_values": self.p_values,
            "converged": self.converged,
            "iterations": self.iterations,
            "n_evals": self.n_evals,
            "boundary_flags": self.boundary_flags,
            "diagnostics": self.diagnostics,
        }

    def to_json(self, **kwargs) -> str:
        kwargs.setdefault("sort_keys", True)
        kwargs.setdefault("indent", 2)
        return json.dumps(self.to_dict(), **kwargs)


class ParamTransform:
    """Bijection between the constrained model space and the optimizer's
    unconstrained space: log for positive parameters, atanh for rho in
    (-1, 1), log-odds for p in (0, 1)."""

    def __init__(self, kinds):
        self.kinds = list(kinds)

    def to_unconstrained(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.empty_like(theta)
        for i, kind in enumerate(self.kinds):
            if kind == "log":
                out[i] = np.log(theta[i])
            elif kind == "tanh":
                out[i] = np.arctanh(theta[i])
            elif kind == "logit":
                out[i] = logit(theta[i])
            else:
                raise ValueError(f"unknown transform kind {kind!r}")
        return out

    def from_unconstrained(self, z):
        z = np.asarray(z, dtype=float)
        out = np.empty_like(z)
        for i, kind in enumerate(self.kinds):
            if kind == "log":
                out[i] = np.exp(z[i])
            elif kind == "tanh":
                out[i] = np.tanh(z[i])
            elif kind == "logit":
                out[i] = expit(z[i])
        return out


def _as_data(data) -> np.ndarray:
    data = np.asarray(data, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2 or len(data) == 0:
        raise DomainError("data must be a nonempty (n, 2) array")
    return data


def loglik_mbw(data, m: MbwParams) -> float:
    """Log-likelihood of the mixture model.

    Points in the closed rectangle with both coordinates strictly above
    the anchor contribute log(p/d^2 + q f_XY); points past the rectangle
    contribute log(q f_XY). Observations sitting exactly on the anchor
    axes (ties at zero in the origin case) carry no density information
    in the continuous formulation and are excluded, matching the strict
    inequalities of the estimation procedure. Returns -inf when an
    outside point sits where the bulk density vanishes.
    """
    data = _as_data(data)
    x, y = data[:, 0], data[:, 1]
    r = m.rect
    positive = (x > r.x0) & (y > r.y0)
    inside = positive & (x <= r.x0 + r.d) & (y <= r.y0 + r.d)
    outside = (x > r.x0 + r.d) | (y > r.y0 + r.d)
    f2 = np.asarray(bvw_pdf(x, y, m.base))
    out_f = m.q * f2[outside]
    if np.any(out_f <= 0):
        return -np.inf
    with np.errstate(divide="ignore"):
        ll = np.sum(np.log(m.p / r.d**2 + m.q * f2[inside])) + np.sum(np.log(out_f))
    return float(ll)


def estimate_d(data, p: DbscanParams):
    """Plug-in estimate of the rectangle side: the largest coordinate in
    the cluster nearest the origin. Returns (d_hat, C1 points)."""
    data = _as_data(data)
    labels = dbscan(data, p)
    mask = origin_cluster_mask(data, labels)
    c1 = data[mask]
    d_hat = float(c1.max())
    if d_hat <= 0:
        raise DegenerateDataError("origin cluster has no positive coordinate")
    return d_hat, c1


def aic(loglik: float, k: int) -> float:
    """Akaike information criterion, 2k - 2 loglik."""
    if k < 1:
        raise DomainError("k must be >= 1")
    return 2.0 * k - 2.0 * loglik


def _spearman(x, y) -> float:
    rx = stats.rankdata(x)
    ry = stats.rankdata(y)
    sx, sy = rx.std(), ry.std()
    if sx == 0 or sy == 0:
        return 0.0
    return float(np.corrcoef(rx, ry)[0, 1])


def _make_mbw(theta, d, copula_family, a, b) -> MbwParams:
    a1, b1, a2, b2, rho, p = theta
    if copula_family == "gfgm":
        cop = GfgmParams(rho=rho, a=a, b=b)
    else:
        cop = GaussianCopulaParams(rho=np.clip(rho, -_GAUSS_RHO_CAP, _GAUSS_RHO_CAP))
    return MbwParams(
        base=BivariateWeibull(WeibullParams(a1, b1), WeibullParams(a2, b2), cop),
        rect=RectUniform(0.0, 0.0, d),
        p=p,
    )


def _safe_loglik_mbw(data, theta, d, copula_family, a, b) -> float:
    try:
        ll = loglik_mbw(data, _make_mbw(theta, d, copula_family, a, b))
    except (SingularityError, DomainError, FloatingPointError):
        return -np.inf
    return ll if np.isfinite(ll) else -np.inf


def _nelder_mead(fn, z0, max_evals, fatol=1e-8):
    # fixed initial simplex: +0.1 along each transformed coordinate
    n = len(z0)
    simplex = np.vstack([z0, z0 + 0.1 * np.eye(n)])
    res = optimize.minimize(
        fn,
        z0,
        method="Nelder-Mead",
        options={
            "maxfev": max_evals,
            "fatol": fatol,
            "xatol": 1e-6,
            "initial_simplex": simplex,
        },
    )
    return res


def fit_mbw(
    data,
    copula_family: str = "gfgm",
    a: float = 1.0,
    b: float = 1.0,
    min_pts: int = 4,
    eps: float | None = None,
    max_evals: int = 5000,
    compute_ses: bool = True,
) -> FitResult:
    """Two-stage fit of the mixture model (model M3).

    Stage 1 fixes d from the DBSCAN origin cluster; stage 2 maximizes the
    log-likelihood over the six remaining parameters by Nelder-Mead in
    transformed space. d counts as an estimated parameter in k.
    """
    data = _as_data(data)
    if len(data) < 10:
        raise DomainError("fit_mbw needs at least 10 observations")
    if copula_family not in ("gfgm", "gaussian"):
        raise DomainError(f"unknown copula family {copula_family!r}")
    if eps is None:
        eps = select_eps(data, min_pts)
    d_hat, c1 = estimate_d(data, DbscanParams(min_pts=min_pts, eps=eps))

    x, y = data[:, 0], data[:, 1]
    n = len(data)
    p0 = np.clip(len(c1) / n, 1e-3, 1 - 1e-3)
    rho0 = float(np.clip(_spearman(x, y), -0.95, 0.95))
    theta0 = np.array([1.5, x.mean() or 1.0, 1.5, y.mean() or 1.0, rho0, p0])
    transform = ParamTransform(["log", "log", "log", "log", "tanh", "logit"])

    def neg(z):
        return -_safe_loglik_mbw(
            data, transform.from_unconstrained(z), d_hat, copula_family, a, b
        )

    z0 = transform.to_unconstrained(theta0)
    if not np.isfinite(neg(z0)):
        # shape start of 1.5 can be rejected only in pathological data;
        # retry from shapes just above 1
        theta0[[0, 2]] = 1.05
        z0 = transform.to_unconstrained(theta0)
    res = _nelder_mead(neg, z0, max_evals)
    theta = transform.from_unconstrained(res.x)
    names = ["alpha1", "beta1", "alpha2", "beta2", "rho", "p"]
    estimates = dict(zip(names, theta.tolist()))
    estimates["d"] = d_hat
    ll = -res.fun

    result = FitResult(
        model="m3",
        estimates=estimates,
        loglik=float(ll),
        k=7,
        converged=bool(res.success and np.isfinite(ll)),
        iterations=int(res.nit),
        n_evals=int(res.nfev),
        diagnostics={
            "d_hat": d_hat,
            "eps": float(eps),
            "min_pts": int(min_pts),
            "n_c1": int(len(c1)),
            "copula_family": copula_family,
            "copula_a": a,
            "copula_b": b,
        },
        extras={"c1_points": c1},
    )
    if abs(estimates["p"]) > 1 - 1e-4 or estimates["p"] < 1e-4:
        result.boundary_flags.append("p")
    if abs(estimates["rho"]) > 1 - 1e-4:
        result.boundary_flags.append("rho")
    if not result.converged:
        result.diagnostics["message"] = str(res.message)
    if compute_ses:
        compute_se(data, result)
    return result


def fit_m1(data) -> FitResult:
    """Independent exponential margins; the MLE is the pair of sample
    means, in closed form."""
    data = _as_data(data)
    x, y = data[:, 0], data[:, 1]
    n = len(data)
    b1, b2 = float(x.mean()), float(y.mean())
    if b1 <= 0 or b2 <= 0:
        raise DegenerateDataError("a margin has zero mean")
    ll = -n * (np.log(b1) + 1.0) - n * (np.log(b2) + 1.0)
    se = {"beta1": b1 / np.sqrt(n), "beta2": b2 / np.sqrt(n)}
    pv = {k: _wald_p(est, se[k]) for k, est in (("beta1", b1), ("beta2", b2))}
    return FitResult(
        model="m1",
        estimates={"beta1": b1, "beta2": b2},
        loglik=float(ll),
        k=2,
        std_errors=se,
        p_values=pv,
        converged=True,
    )


def _m2_loglik(data, theta) -> float:
    b1, b2, rho = theta
    if b1 <= 0 or b2 <= 0 or not -1 <= rho <= 1:
        return -np.inf
    x, y = data[:, 0], data[:, 1]
    A = x / b1
    B = y / b2
    dens = (1 + rho * (2 * np.exp(-A) - 1) * (2 * np.exp(-B) - 1)) / (b1 * b2)
    f = dens * np.exp(-(A + B))
    if np.any(f <= 0):
        return -np.inf
    return float(np.sum(np.log(f)))


def fit_m2(data, max_evals: int = 5000, compute_ses: bool = True) -> FitResult:
    """FGM-coupled exponential margins (a = b = 1, shapes fixed at 1),
    fitted over (beta1, beta2, rho)."""
    data = _as_data(data)
    x, y = data[:, 0], data[:, 1]
    theta0 = np.array(
        [x.mean(), y.mean(), np.clip(_spearman(x, y), -0.95, 0.95)]
    )
    transform = ParamTransform(["log", "log", "tanh"])

    def neg(z):
        return -_m2_loglik(data, transform.from_unconstrained(z))

    res = _nelder_mead(neg, transform.to_unconstrained(theta0), max_evals)
    theta = transform.from_unconstrained(res.x)
    estimates = dict(zip(["beta1", "beta2", "rho"], theta.tolist()))
    result = FitResult(
        model="m2",
        estimates=estimates,
        loglik=float(-res.fun),
        k=3,
        converged=bool(res.success),
        iterations=int(res.nit),
        n_evals=int(res.nfev),
    )
    if abs(estimates["rho"]) > 1 - 1e-3:
        result.boundary_flags.append("rho")
    if compute_ses:
        compute_se(data, result)
    return result


def _wald_p(est, se) -> float:
    if not (np.isfinite(se) and se > 0):
        return float("nan")
    return float(2.0 * ndtr(-abs(est / se)))


def _num_hessian(fn, x0, steps):
    n = len(x0)
    H = np.empty((n, n))
    f0 = fn(x0)
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = steps[i]
        H[i, i] = (fn(x0 + ei) - 2 * f0 + fn(x0 - ei)) / steps[i] ** 2
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = steps[j]
            H[i, j] = H[j, i] = (
                fn(x0 + ei + ej) - fn(x0 + ei - ej) - fn(x0 - ei + ej) + fn(x0 - ei - ej)
            ) / (4 * steps[i] * steps[j])
    return H


def compute_se(data, result: FitResult) -> dict:
    """Observed-information standard errors from a central-difference
    Hessian of the log-likelihood at the optimum (d held fixed for the
    mixture model). Boundary parameters are flagged, not reported.

    Updates ``result.std_errors`` / ``result.p_values`` in place and
    returns the standard-error dict.
    """
    data = _as_data(data)
    if result.model == "m1":
        n = len(data)
        result.std_errors = {
            "beta1": result.estimates["beta1"] / np.sqrt(n),
            "beta2": result.estimates["beta2"] / np.sqrt(n),
        }
        result.p_values = {
            k: _wald_p(result.estimates[k], result.std_errors[k])
            for k in result.std_errors
        }
        return result.std_errors

    if result.model == "m2":
        names = ["beta1", "beta2", "rho"]
        theta = np.array([result.estimates[k] for k in names])

        def ll(t):
            return _m2_loglik(data, t)

        bounds_gap = [np.inf, np.inf, 1.0 - abs(theta[2])]
    elif result.model == "m3":
        names = ["alpha1", "beta1", "alpha2", "beta2", "rho", "p"]
        theta = np.array([result.estimates[k] for k in names])
        d = result.estimates["d"]
        fam = result.diagnostics.get("copula_family", "gfgm")
        a = result.diagnostics.get("copula_a", 1.0)
        b = result.diagnostics.get("copula_b", 1.0)

        def ll(t):
            return _safe_loglik_mbw(data, t, d, fam, a, b)

        bounds_gap = [
            np.inf,
            np.inf,
            theta[2] - 1.0 if theta[2] > 1 else np.inf,  # alpha2 can hug 1
            np.inf,
            1.0 - abs(theta[4]),
            min(theta[5], 1.0 - theta[5]),
        ]
        # alpha1 may also sit against 1 when the data holds exact zeros
        if theta[0] > 1:
            bounds_gap[0] = theta[0] - 1.0
    else:
        raise DomainError(f"unknown model {result.model!r}")

    steps = np.array(
        [
            min(1e-4 * max(abs(t), 1.0), g / 4) if np.isfinite(g) else 1e-4 * max(abs(t), 1.0)
            for t, g in zip(theta, bounds_gap)
        ]
    )
    near_boundary = [nm for nm, g in zip(names, bounds_gap) if g < 1e-3]
    se = {}
    H = _num_hessian(ll, theta, steps)
    info = -H
    try:
        cov = np.linalg.inv(info)
        diag = np.diag(cov)
        if np.any(diag <= 0):
            raise np.linalg.LinAlgError("non-positive variance")
        for nm, v in zip(names, diag):
            se[nm] = float(np.sqrt(v))
    except np.linalg.LinAlgError:
        result.diagnostics["hessian"] = "not positive definite"
        se = {nm: float("nan") for nm in names}
    for nm in near_boundary:
        if nm not in result.boundary_flags:
            result.boundary_flags.append(nm)
    result.std_errors = se
    result.p_values = {nm: _wald_p(result.estimates[nm], se[nm]) for nm in names}
    return se


def bootstrap(data, fitter, B: int, seed: int, level: float = 0.95):
    """Nonparametric case-resampling bootstrap.

    ``fitter`` maps a dataset to a dict of estimates. Returns per-parameter
    bootstrap standard errors and percentile confidence intervals.
    """
    data = _as_data(data)
    if B < 100:
        raise DomainError("bootstrap needs B >= 100")
    n = len(data)
    rows = []
    failures = 0
    for r in range(B):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=[int(seed), r]))
        sample = data[rng.integers(0, n, size=n)]
        try:
            est = fitter(sample)
        except Exception:
            failures += 1
            continue
        rows.append(est)
    if failures > 0.2 * B:
        raise ConvergenceError(f"{failures}/{B} bootstrap replicates failed")
    keys = rows[0].keys()
    alpha = 100 * (1 - level) / 2
    bse = {}
    bci = {}
    for k in keys:
        vals = np.array([r[k] for r in rows])
        bse[k] = float(vals.std(ddof=1))
        bci[k] = (
            float(np.percentile(vals, alpha)),
            float(np.percentile(vals, 100 - alpha)),
        )
    return {"bse": bse, "bci": bci, "failures": failures, "B": B}


def d_confidence_interval(c1_points, level: float = 0.95):
    """Interval for the rectangle side from the origin-cluster coordinates.

    Pools the 2|C1| coordinates, which are uniform on [0, d] under the
    model, and pivots on their maximum M: [M, M * gamma^(-1/(2|C1|))]
    with gamma = 1 - level.
    """
    c1_points = np.asarray(c1_points, dtype=float)
    if c1_points.size == 0:
        raise DomainError("origin cluster is empty")
    if not 0 < level < 1:
        raise DomainError("level must be in (0, 1)")
    coords = c1_points.ravel()
    m = coords.max()
    if m <= 0:
        raise DegenerateDataError("all origin-cluster coordinates are zero")
    gamma = 1.0 - level
    return float(m), float(m * gamma ** (-1.0 / coords.size))


def deviance_test(full: FitResult, reduced: FitResult) -> dict:
    """Likelihood-ratio (deviance) comparison of two fitted models."""
    if reduced.k >= full.k:
        raise DomainError("reduced model must have fewer free parameters")
    statistic = 2.0 * (full.loglik - reduced.loglik)
    df = full.k - reduced.k
    out = {
        "statistic": float(statistic),
        "df": int(df),
        "p_value": float(stats.chi2.sf(max(statistic, 0.0), df)),
    }
    if statistic < 0:
        out["warning"] = "negative deviance: models non-nested or misconverged"
    return out
