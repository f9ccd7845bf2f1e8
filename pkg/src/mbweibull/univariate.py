"""Two-parameter Weibull primitives and the rectangle-uniform early-failure
component (density, survival, hazard)."""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError

__all__ = [
    "WeibullParams",
    "RectUniform",
    "weibull_cdf",
    "weibull_pdf",
    "weibull_quantile",
    "rect_pdf",
    "rect_survival",
    "rect_hazard",
]


@dataclass(frozen=True)
class WeibullParams:
    """Shape/scale pair of a two-parameter Weibull margin."""

    shape: float
    scale: float

    def __post_init__(self):
        if not (self.shape > 0 and self.scale > 0):
            raise DomainError(
                f"Weibull shape and scale must be positive, got "
                f"shape={self.shape}, scale={self.scale}"
            )


@dataclass(frozen=True)
class RectUniform:
    """Uniform distribution on the square [x0, x0+d] x [y0, y0+d]."""

    x0: float
    y0: float
    d: float

    def __post_init__(self):
        if not self.d > 0:
            raise DomainError(f"rectangle side d must be positive, got {self.d}")
        if self.x0 < 0 or self.y0 < 0:
            raise DomainError("rectangle anchor must be nonnegative")


def _scalar(x, *inputs) -> bool:
    return all(np.ndim(v) == 0 for v in inputs) if inputs else True


def _out(arr, scalar):
    return float(arr) if scalar else arr


def weibull_cdf(x, p: WeibullParams):
    """Weibull CDF, 1 - exp(-(x/scale)^shape).

    Accepts scalars or arrays; raises DomainError for negative lifetimes.
    """
    scalar = _scalar(x, x)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("lifetime must be nonnegative")
    return _out(-np.expm1(-((x / p.scale) ** p.shape)), scalar)


def weibull_pdf(x, p: WeibullParams):
    """Weibull density.

    Unbounded at x = 0 when shape < 1; that point raises SingularityError
    instead of returning an infinity.
    """
    scalar = _scalar(x, x)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("lifetime must be nonnegative")
    if p.shape < 1 and np.any(x == 0):
        raise SingularityError("Weibull pdf is unbounded at 0 for shape < 1")
    z = x / p.scale
    with np.errstate(divide="ignore"):
        val = (p.shape / p.scale) * z ** (p.shape - 1) * np.exp(-(z**p.shape))
    return _out(val, scalar)


def weibull_quantile(u, p: WeibullParams):
    """Inverse Weibull CDF: scale * (-log(1-u))^(1/shape) for u in [0, 1)."""
    scalar = _scalar(u, u)
    u = np.asarray(u, dtype=float)
    if np.any((u < 0) | (u >= 1)):
        raise DomainError("quantile level must be in [0, 1)")
    return _out(p.scale * (-np.log1p(-u)) ** (1.0 / p.shape), scalar)


def rect_pdf(x, y, r: RectUniform):
    """Density of the rectangle uniform: 1/d^2 on the closed square, else 0."""
    scalar = _scalar(x, x, y)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    inside = (
        (x >= r.x0)
        & (x <= r.x0 + r.d)
        & (y >= r.y0)
        & (y <= r.y0 + r.d)
    )
    return _out(np.where(inside, 1.0 / r.d**2, 0.0), scalar)


def rect_survival(x, y, r: RectUniform):
    """Joint survival P(X > x, Y > y) of the rectangle uniform.

    Equals the product of clamped linear ramps, which reproduces every
    branch of the piecewise form (1 before the rectangle, linear along a
    single overlapping axis, bilinear inside, 0 past either far edge).
    """
    scalar = _scalar(x, x, y)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    sx = np.clip((r.x0 + r.d - x) / r.d, 0.0, 1.0)
    sy = np.clip((r.y0 + r.d - y) / r.d, 0.0, 1.0)
    return _out(sx * sy, scalar)


def rect_hazard(x, y, r: RectUniform):
    """Hazard of the rectangle uniform.

    1/((x0+d-x)(y0+d-y)) on the half-open square, +inf past either far
    edge, 0 before the rectangle.
    """
    scalar = _scalar(x, x, y)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    beyond = (x >= r.x0 + r.d) | (y >= r.y0 + r.d)
    inside = (x >= r.x0) & (y >= r.y0) & ~beyond
    with np.errstate(divide="ignore", invalid="ignore"):
        finite = 1.0 / ((r.x0 + r.d - x) * (r.y0 + r.d - y))
    out = np.where(beyond, np.inf, np.where(inside, finite, 0.0))
    return _out(out, scalar)
