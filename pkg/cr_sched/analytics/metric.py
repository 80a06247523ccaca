# cr_sched/analytics/metric.py

"""
Distribution of one user's selection metric G = g_sd / g_sp.

With exponential g_sd and g_sp of means delta_sd^2 and delta_sp^2, G has
CDF 1 - 1/(1 + alpha*y) and density alpha/(1 + alpha*y)^2, alpha being
delta_sp^2 / delta_sd^2. A smaller alpha means a stochastically larger metric.
"""

import math

from cr_sched.core.errors import DomainError


def _check_alpha(alpha: float) -> None:
    if not math.isfinite(alpha) or alpha <= 0:
        raise DomainError(f"alpha must be finite and > 0, got {alpha!r}")


def cdf_metric(y: float, alpha: float) -> float:
    """P(G <= y)."""
    _check_alpha(alpha)
    if y <= 0:
        return 0.0
    ay = alpha * y
    # 1 - 1/(1+ay) written without the subtraction
    return ay / (1.0 + ay)


def pdf_metric(y: float, alpha: float) -> float:
    """Density of G at y."""
    _check_alpha(alpha)
    if y < 0:
        return 0.0
    return alpha / (1.0 + alpha * y) ** 2
