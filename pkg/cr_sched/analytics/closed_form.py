# cr_sched/analytics/closed_form.py

"""
Closed-form selection probabilities for K = 2 and K = 3.

For user k the selection integral expands by inclusion-exclusion into
alpha_k * [I1 - sum_j I2(alpha_k, alpha_j) + I3(alpha_k, others)] (the I3 term
only for K = 3), which is evaluated with the stable identities. The second
user's K = 3 probability is the first user's expression with indices 1 and 2
swapped; the last user always takes the complement, so each vector sums to one.
"""

import math
from typing import Sequence

from cr_sched.analytics.identities import _i2, _i3, relative_gap
from cr_sched.analytics.quadrature import quadrature_selection
from cr_sched.core.config import settings
from cr_sched.core.errors import DomainError
from cr_sched.core.logger import logger
from cr_sched.schemas import AlphaVector, Method, QuadratureConfig, SelectionProbabilities


def _as_list(alphas: AlphaVector | Sequence[float], k: int) -> list[float]:
    vector = alphas if isinstance(alphas, AlphaVector) else AlphaVector(alphas=list(alphas))
    if len(vector) != k:
        raise DomainError(f"expected {k} alphas, got {len(vector)}")
    return list(vector.alphas)


def _clamp(p: float) -> float:
    return min(1.0, max(0.0, p))


def pr_user(alphas: Sequence[float], k: int) -> float:
    """
    Selection probability of user k for K in {2, 3}, parameters assumed well separated.
    """
    a_k = alphas[k]
    others = [a for j, a in enumerate(alphas) if j != k]
    value = 1.0 - a_k * sum(_i2(a_k, a_j) for a_j in others)
    if len(others) == 2:
        value += a_k * _i3(a_k, others[0], others[1])
    return value


def _fallback(alphas: list[float], cfg: QuadratureConfig | None) -> list[float]:
    head = [quadrature_selection(alphas, k, cfg) for k in range(len(alphas) - 1)]
    return head + [1.0 - math.fsum(head)]


def closed_form_k2(
    alphas: AlphaVector | Sequence[float],
    tau_rel: float | None = None,
    fallback: str | None = None,
    cfg: QuadratureConfig | None = None,
) -> SelectionProbabilities:
    """
    Selection probabilities of two users.

    Near-equal alphas (relative gap <= tau_rel) return the symmetric limit
    (fallback="limit") or a quadrature evaluation (fallback="quadrature").
    """
    a = _as_list(alphas, 2)
    tau_rel = settings.tau_rel if tau_rel is None else tau_rel
    fallback = fallback or settings.degenerate_fallback

    if relative_gap(a[0], a[1]) <= tau_rel:
        logger.info("Near-equal alphas %s, using %s fallback", a, fallback)
        probs = [0.5, 0.5] if fallback == "limit" else _fallback(a, cfg)
        return SelectionProbabilities(probs=[_clamp(p) for p in probs], method=Method.CLOSED_FORM, fallback=True)

    p1 = _clamp(pr_user(a, 0))
    return SelectionProbabilities(probs=[p1, 1.0 - p1], method=Method.CLOSED_FORM)


def closed_form_k3(
    alphas: AlphaVector | Sequence[float],
    tau_rel: float | None = None,
    cfg: QuadratureConfig | None = None,
) -> SelectionProbabilities:
    """
    Selection probabilities of three users.

    All three alphas within tau_rel of each other give (1/3, 1/3, 1/3); any
    other near-equal pair is delegated to quadrature.
    """
    a = _as_list(alphas, 3)
    tau_rel = settings.tau_rel if tau_rel is None else tau_rel

    gaps = [relative_gap(a[0], a[1]), relative_gap(a[0], a[2]), relative_gap(a[1], a[2])]
    if max(gaps) <= tau_rel:
        return SelectionProbabilities(probs=[1 / 3, 1 / 3, 1 / 3], method=Method.CLOSED_FORM, fallback=True)
    if min(gaps) <= tau_rel:
        logger.info("Near-equal pair in alphas %s, delegating to quadrature", a)
        probs = _fallback(a, cfg)
        return SelectionProbabilities(probs=[_clamp(p) for p in probs], method=Method.CLOSED_FORM, fallback=True)

    p1 = _clamp(pr_user(a, 0))
    p2 = _clamp(pr_user(a, 1))
    return SelectionProbabilities(probs=[p1, p2, _clamp(1.0 - p1 - p2)], method=Method.CLOSED_FORM)


def printed_pr_first_k2(a1: float, a2: float) -> float:
    """First user's K = 2 probability exactly as usually printed (no stabilisation)."""
    d = a1 - a2
    return 1.0 - a1 / d * (1.0 - a2 * math.log(a1) / d + a2 * math.log(a2) / d)


def printed_pr_first_k3(a1: float, a2: float, a3: float) -> float:
    """First user's K = 3 probability exactly as usually printed (no stabilisation)."""
    d12, d13, d23 = a1 - a2, a1 - a3, a2 - a3
    return (
        1.0
        - a1 / d12 * (1.0 - a2 * math.log(a1) / d12 + a2 * math.log(a2) / d12)
        - a1 / d13 * (1.0 - a3 * math.log(a1) / d13 + a3 * math.log(a3) / d13)
        + a1 ** 2 / (d12 * d13)
        - a1 ** 2 * (a1 * a2 + a1 * a3 - 2 * a2 * a3) * math.log(a1) / (d12 ** 2 * d13 ** 2)
        + a1 * a2 ** 2 * math.log(a2) / (d12 ** 2 * d23)
        + a1 * a3 ** 2 * math.log(a3) / (d13 ** 2 * (a3 - a2))
    )


__all__ = [
    "closed_form_k2",
    "closed_form_k3",
    "pr_user",
    "printed_pr_first_k2",
    "printed_pr_first_k3",
]
