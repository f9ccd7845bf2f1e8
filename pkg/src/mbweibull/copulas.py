"""Bivariate copulas: the generalized Farlie-Gumbel-Morgenstern (GFGM)
family and the Gaussian family.

Each family provides the copula CDF, its density, the conditional
distribution C_u(v) = dC/du, and the conditional quantile (quasi-inverse)
used for conditional sampling.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import ndtr, ndtri, owens_t

from .errors import ConvergenceError, DomainError

__all__ = [
    "GfgmParams",
    "GaussianCopulaParams",
    "CopulaSpec",
    "copula_cdf",
    "copula_density",
    "conditional_cdf",
    "conditional_quantile",
    "std_bivariate_normal_cdf",
]


@dataclass(frozen=True)
class GfgmParams:
    """GFGM copula C(u,v) = uv + rho u^b v^b (1-u)^a (1-v)^a."""

    rho: float
    a: float = 1.0
    b: float = 1.0

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise DomainError("GFGM requires a >= 1 and b >= 1")
        if not -1 <= self.rho <= 1:
            raise DomainError("GFGM requires -1 <= rho <= 1")


@dataclass(frozen=True)
class GaussianCopulaParams:
    """Gaussian copula with latent correlation rho, |rho| < 1."""

    rho: float

    def __post_init__(self):
        if not -1 < self.rho < 1:
            raise DomainError("Gaussian copula requires |rho| < 1")


CopulaSpec = Union[GfgmParams, GaussianCopulaParams]


def _check_unit_square(u, v):
    if np.any((u < 0) | (u > 1) | (v < 0) | (v > 1)):
        raise DomainError("copula arguments must lie in the unit square")


def _scalar(*inputs) -> bool:
    return all(np.ndim(v) == 0 for v in inputs)


def _out(arr, scalar):
    return float(np.asarray(arr).reshape(())) if scalar else arr


# ---------------------------------------------------------------------------
# bivariate standard normal CDF

def std_bivariate_normal_cdf(z1, z2, rho):
    """P(Z1 <= z1, Z2 <= z2) for standard normals with correlation rho.

    Uses Owen's T function, which is deterministic and accurate to well
    below 1e-10 over the whole plane.
    """
    scalar = _scalar(z1, z2)
    if not -1 < rho < 1:
        raise DomainError("requires |rho| < 1")
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    if rho == 0.0:
        return _out(ndtr(z1) * ndtr(z2), scalar)

    z1, z2 = np.broadcast_arrays(z1, z2)
    s = np.sqrt(1.0 - rho * rho)
    with np.errstate(divide="ignore", invalid="ignore"):
        a1 = np.where(z1 != 0, (z2 - rho * z1) / (z1 * s), 0.0)
        a2 = np.where(z2 != 0, (z1 - rho * z2) / (z2 * s), 0.0)
    # limits of the slope arguments as a coordinate passes through zero
    with np.errstate(invalid="ignore"):
        a1 = np.where(z1 == 0, np.sign(z2) * np.inf, a1)
        a2 = np.where(z2 == 0, np.sign(z1) * np.inf, a2)
    beta = np.where((z1 * z2 > 0) | ((z1 * z2 == 0) & (z1 + z2 >= 0)), 0.0, 0.5)
    val = 0.5 * (ndtr(z1) + ndtr(z2)) - owens_t(z1, a1) - owens_t(z2, a2) - beta
    both_zero = (z1 == 0) & (z2 == 0)
    if np.any(both_zero):
        val = np.where(both_zero, 0.25 + np.arcsin(rho) / (2 * np.pi), val)
    return _out(np.clip(val, 0.0, 1.0), scalar)


# ---------------------------------------------------------------------------
# GFGM internals

def _gfgm_cdf(u, v, c: GfgmParams):
    return u * v + c.rho * u**c.b * v**c.b * (1 - u) ** c.a * (1 - v) ** c.a


def _gfgm_density(u, v, c: GfgmParams):
    a, b, rho = c.a, c.b, c.rho
    # second mixed derivative of the CDF, grouped as
    # 1 + rho u^(b-1) v^(b-1) (1-u)^(a-1) (1-v)^(a-1) [b(1-u)-au][b(1-v)-av]
    fu = u ** (b - 1) * (1 - u) ** (a - 1)
    fv = v ** (b - 1) * (1 - v) ** (a - 1)
    return 1 + rho * fu * fv * (b * (1 - u) - a * u) * (b * (1 - v) - a * v)


def _gfgm_conditional_cdf(v, u, c: GfgmParams):
    a, b, rho = c.a, c.b, c.rho
    return (
        v
        + rho * b * u ** (b - 1) * v**b * (1 - u) ** a * (1 - v) ** a
        - rho * a * u**b * v**b * (1 - u) ** (a - 1) * (1 - v) ** a
    )


def _gfgm_conditional_quantile(t, u, c: GfgmParams, tol=1e-10, max_iter=200):
    # Safeguarded Newton: start at v = t, derivative is the copula density;
    # any step that leaves the current bracket falls back to bisection,
    # which is sound because C_u is monotone in v.
    t = np.asarray(t, dtype=float)
    u = np.asarray(u, dtype=float)
    t, u = np.broadcast_arrays(t, u)
    v = np.array(t, dtype=float, copy=True)
    lo = np.zeros_like(v)
    hi = np.ones_like(v)
    for _ in range(max_iter):
        r = _gfgm_conditional_cdf(v, u, c) - t
        done = np.abs(r) <= tol
        if done.all():
            break
        hi = np.where((r > 0) & ~done, v, hi)
        lo = np.where((r <= 0) & ~done, v, lo)
        dr = _gfgm_density(u, v, c)
        with np.errstate(divide="ignore", invalid="ignore"):
            vn = v - r / dr
        bad = (
            ~np.isfinite(vn)
            | (vn <= lo)
            | (vn >= hi)
            | (np.abs(dr) < 1e-14)
        )
        vn = np.where(bad, 0.5 * (lo + hi), vn)
        v = np.where(done, v, vn)
    else:
        r = _gfgm_conditional_cdf(v, u, c) - t
        if np.any(np.abs(r) > tol):
            raise ConvergenceError(
                "conditional quantile did not reach tolerance "
                f"{tol} within {max_iter} iterations"
            )
    return v


# ---------------------------------------------------------------------------
# public dispatch

def copula_cdf(u, v, c: CopulaSpec):
    """Copula CDF C(u, v) for either family."""
    scalar = _scalar(u, v)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    _check_unit_square(u, v)
    if isinstance(c, GfgmParams):
        return _out(_gfgm_cdf(u, v, c), scalar)
    u, v = np.atleast_1d(*np.broadcast_arrays(u, v))
    # closed edges of the unit square resolve exactly
    with np.errstate(divide="ignore"):
        z1 = ndtri(u)
        z2 = ndtri(v)
    interior = (u > 0) & (u < 1) & (v > 0) & (v < 1)
    val = np.zeros(u.shape)
    if np.any(interior):
        val[interior] = std_bivariate_normal_cdf(z1[interior], z2[interior], c.rho)
    val = np.where((u == 0) | (v == 0), 0.0, val)
    val = np.where(u == 1, v, val)
    val = np.where(v == 1, np.where(u == 1, 1.0, u), val)
    return _out(val, scalar)


def copula_density(u, v, c: CopulaSpec):
    """Copula density c(u, v)."""
    scalar = _scalar(u, v)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if isinstance(c, GfgmParams):
        _check_unit_square(u, v)
        return _out(_gfgm_density(u, v, c), scalar)
    if np.any((u <= 0) | (u >= 1) | (v <= 0) | (v >= 1)):
        raise DomainError("Gaussian copula density requires (u,v) in (0,1)^2")
    z1 = ndtri(u)
    z2 = ndtri(v)
    rho = c.rho
    one_m = 1.0 - rho * rho
    expo = -(rho * rho * (z1 * z1 + z2 * z2) - 2 * rho * z1 * z2) / (2 * one_m)
    return _out(np.exp(expo) / np.sqrt(one_m), scalar)


def conditional_cdf(v, u, c: CopulaSpec):
    """Conditional distribution C_u(v) = P(V <= v | U = u) = dC/du."""
    scalar = _scalar(u, v)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.any((u <= 0) | (u >= 1)):
        raise DomainError("conditioning value u must lie in (0, 1)")
    if np.any((v < 0) | (v > 1)):
        raise DomainError("v must lie in [0, 1]")
    if isinstance(c, GfgmParams):
        return _out(_gfgm_conditional_cdf(v, u, c), scalar)
    with np.errstate(divide="ignore"):
        zv = ndtri(v)
    zu = ndtri(u)
    s = np.sqrt(1.0 - c.rho**2)
    return _out(ndtr((zv - c.rho * zu) / s), scalar)


def conditional_quantile(t, u, c: CopulaSpec, tol=1e-10, max_iter=200):
    """Quasi-inverse of C_u: the v with C_u(v) = t.

    Closed form for the Gaussian family; safeguarded Newton-Raphson with
    bisection fallback for GFGM.
    """
    scalar = _scalar(t, u)
    t = np.asarray(t, dtype=float)
    u = np.asarray(u, dtype=float)
    if np.any((t <= 0) | (t >= 1)) or np.any((u <= 0) | (u >= 1)):
        raise DomainError("conditional quantile requires t, u in (0, 1)")
    if isinstance(c, GfgmParams):
        return _out(_gfgm_conditional_quantile(t, u, c, tol=tol, max_iter=max_iter), scalar)
    s = np.sqrt(1.0 - c.rho**2)
    return _out(ndtr(c.rho * ndtri(u) + s * ndtri(t)), scalar)
