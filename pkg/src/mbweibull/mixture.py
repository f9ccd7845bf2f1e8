"""The modified bivariate Weibull mixture: a rectangle-uniform early
failure component mixed with a copula-based bivariate Weibull bulk."""

import io
from dataclasses import dataclass

import numpy as np

from .bivariate import BivariateWeibull, bvw_pdf, bvw_survival
from .errors import DomainError, SurvivalUnderflowError
from .univariate import RectUniform, rect_survival

__all__ = [
    "MbwParams",
    "mbw_pdf",
    "mbw_cdf",
    "mbw_survival",
    "mbw_hazard",
    "mixture_weight",
    "hazard_grid",
    "hazard_grid_csv",
]


@dataclass(frozen=True)
class MbwParams:
    """Full parameter set of the mixture model.

    ``p`` is the weight of the uniform early-failure component; the
    bivariate Weibull bulk carries weight q = 1 - p.
    """

    base: BivariateWeibull
    rect: RectUniform
    p: float

    def __post_init__(self):
        if not 0 < self.p < 1:
            raise DomainError(f"mixing weight p must be in (0, 1), got {self.p}")

    @property
    def q(self) -> float:
        return 1.0 - self.p


def _scalar(*inputs) -> bool:
    return all(np.ndim(v) == 0 for v in inputs)


def _out(arr, scalar):
    return float(arr) if scalar else arr


def _inside(x, y, r: RectUniform):
    return (
        (x >= r.x0)
        & (x <= r.x0 + r.d)
        & (y >= r.y0)
        & (y <= r.y0 + r.d)
    )


def mbw_pdf(x, y, m: MbwParams):
    """Mixture density: p/d^2 + q f_XY inside the rectangle, q f_XY outside."""
    scalar = _scalar(x, y)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    f2 = bvw_pdf(x, y, m.base)
    plateau = np.where(_inside(x, y, m.rect), m.p / m.rect.d**2, 0.0)
    return _out(plateau + m.q * np.asarray(f2), scalar)


def mbw_cdf(x, y, m: MbwParams):
    """Mixture CDF p F1 + q F2 with F1 the product of clamped ramps."""
    from .bivariate import bvw_cdf

    scalar = _scalar(x, y)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r = m.rect
    f1 = np.clip((x - r.x0) / r.d, 0.0, 1.0) * np.clip((y - r.y0) / r.d, 0.0, 1.0)
    return _out(m.p * f1 + m.q * np.asarray(bvw_cdf(x, y, m.base)), scalar)


def mbw_survival(x, y, m: MbwParams):
    """Mixture survival p R1 + q R2."""
    scalar = _scalar(x, y)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    val = m.p * np.asarray(rect_survival(x, y, m.rect)) + m.q * np.asarray(
        bvw_survival(x, y, m.base)
    )
    return _out(val, scalar)


def mbw_hazard(x, y, m: MbwParams):
    """Mixture hazard f/R."""
    scalar = _scalar(x, y)
    f = np.asarray(mbw_pdf(x, y, m))
    R = np.asarray(mbw_survival(x, y, m))
    if np.any(R <= 0):
        raise SurvivalUnderflowError("mixture survival is not positive")
    return _out(f / R, scalar)


def mixture_weight(x, y, m: MbwParams):
    """Weight w = p R1 / R of the uniform component in the hazard mix."""
    scalar = _scalar(x, y)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    R = np.asarray(mbw_survival(x, y, m))
    if np.any(R <= 0):
        raise SurvivalUnderflowError("mixture survival is not positive")
    return _out(m.p * np.asarray(rect_survival(x, y, m.rect)) / R, scalar)


def hazard_grid(m: MbwParams, x_start, x_stop, y_start, y_stop, step):
    """Evaluate (x, y, f, R, h) on a row-major rectangular grid.

    Returns an (n, 5) array, one row per grid node, y varying fastest.
    """
    if step <= 0 or x_stop < x_start or y_stop < y_start:
        raise DomainError("invalid grid specification")
    xs = np.arange(x_start, x_stop + 0.5 * step, step)
    ys = np.arange(y_start, y_stop + 0.5 * step, step)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    gx = gx.ravel()
    gy = gy.ravel()
    f = np.asarray(mbw_pdf(gx, gy, m))
    R = np.asarray(mbw_survival(gx, gy, m))
    with np.errstate(divide="ignore", invalid="ignore"):
        h = np.where(R > 0, f / R, np.inf)
    return np.column_stack([gx, gy, f, R, h])


def hazard_grid_csv(grid: np.ndarray) -> str:
    """Serialize a hazard grid to CSV with full double precision."""
    buf = io.StringIO()
    buf.write("x,y,f,R,h\n")
    for row in grid:
        buf.write(",".join(f"{v:.17g}" for v in row) + "\n")
    return buf.getvalue()
