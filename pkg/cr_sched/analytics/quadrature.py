# cr_sched/analytics/quadrature.py

"""
Adaptive quadrature of the selection integral for any K.

    Pr(user k) = int_0^inf f_k(y) * prod_{j != k} F_j(y) dy

The half line is mapped onto [0, 1) with y = t/(1-t), dy = dt/(1-t)^2, and the
result is handed to QUADPACK's adaptive Gauss-Kronrod routine (scipy.integrate.quad),
whose embedded Kronrod estimate drives the subdivision.
"""

import math
from typing import Callable, Sequence

from scipy.integrate import quad

from cr_sched.core.config import settings
from cr_sched.core.errors import ConvergenceFailure, DomainError
from cr_sched.core.logger import logger
from cr_sched.schemas import AlphaVector, QuadratureConfig


def default_config() -> QuadratureConfig:
    """QuadratureConfig populated from settings."""
    return QuadratureConfig(
        abs_tol=settings.quad_abs_tol,
        rel_tol=settings.quad_rel_tol,
        max_subdivisions=settings.quad_max_subdivisions,
    )


def _integrate_unit(
    g: Callable[..., float],
    args: tuple,
    cfg: QuadratureConfig,
    points: Sequence[float] = (),
) -> tuple[float, float]:
    # QUADPACK rejects more breakpoints than the subdivision limit allows
    inner = sorted({p for p in points if 0.0 < p < 1.0})
    if len(inner) + 2 > cfg.max_subdivisions:
        inner = []
    result = quad(
        g,
        0.0,
        1.0,
        args=args,
        points=inner or None,
        epsabs=cfg.abs_tol,
        epsrel=cfg.rel_tol,
        limit=cfg.max_subdivisions,
        full_output=1,
    )
    value, abserr, info = result[0], result[1], result[2]
    # A fourth element is only present when QUADPACK reports a problem
    if len(result) > 3:
        logger.error("Quadrature failed: %s (estimate=%r, error=%.3e)", result[3], value, abserr)
        raise ConvergenceFailure(value, abserr, int(info.get("last", cfg.max_subdivisions)), str(result[3]))
    logger.debug("Quadrature %.12g +- %.2e with %d subintervals", value, abserr, info.get("last", 0))
    return value, abserr


def semi_infinite_quad(f: Callable[[float], float], cfg: QuadratureConfig | None = None) -> float:
    """int_0^inf f(y) dy through the substitution y = t/(1-t)."""
    cfg = cfg or default_config()

    def mapped(t: float) -> float:
        s = 1.0 - t
        return f(t / s) / (s * s)

    value, _ = _integrate_unit(mapped, (), cfg)
    return value


def _selection_integrand(t: float, alpha_k: float, others: tuple) -> float:
    # f_k(y) dy and F_j(y) after y = t/(1-t): every (1-t) factor cancels,
    # leaving 1 + alpha*y -> (1 - t + alpha*t)/(1 - t)
    value = alpha_k / (1.0 - t + alpha_k * t) ** 2
    for a in others:
        value *= a * t / (1.0 - t + a * t)
    return value


def quadrature_selection(
    alphas: AlphaVector | Sequence[float],
    k: int,
    cfg: QuadratureConfig | None = None,
) -> float:
    """
    Probability that user k has the largest metric, by adaptive quadrature.

    Works for any K >= 2 and for coincident alphas. Raises ConvergenceFailure,
    carrying the best estimate and its error bound, when the subdivision cap is hit.
    """
    vector = alphas if isinstance(alphas, AlphaVector) else AlphaVector(alphas=list(alphas))
    values = vector.alphas
    if not 0 <= k < len(values):
        raise DomainError(f"user index {k} out of range for K = {len(values)}")
    # The probability only depends on the ratios alpha_j / alpha_k, so user k is
    # integrated at alpha = 1 and every other CDF switches on near t = 1/(1 + alpha_j)
    scale = values[k]
    others = tuple(a / scale for j, a in enumerate(values) if j != k)
    breakpoints = [1.0 / (1.0 + a) for a in others]
    value, _ = _integrate_unit(_selection_integrand, (1.0, others), cfg or default_config(), breakpoints)
    if not math.isfinite(value):
        raise ConvergenceFailure(value, math.inf, 0, "non-finite result")
    return value
