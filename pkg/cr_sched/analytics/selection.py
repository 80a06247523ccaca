# cr_sched/analytics/selection.py

"""
Dispatch between the closed forms, quadrature and Monte Carlo, plus the
fairness helpers applied to the resulting probability vectors.
"""

import math
from typing import Sequence

from cr_sched.analytics.closed_form import closed_form_k2, closed_form_k3
from cr_sched.analytics.quadrature import default_config, quadrature_selection
from cr_sched.core.errors import DomainError, UnsupportedK
from cr_sched.core.logger import logger
from cr_sched.schemas import AlphaVector, Method, QuadratureConfig, SelectionProbabilities, UserLink


def selection_probabilities(
    alphas: AlphaVector | Sequence[float],
    method: Method | str = Method.CLOSED_FORM,
    cfg: QuadratureConfig | None = None,
    tau_rel: float | None = None,
    trials: int | None = None,
    seed: int | None = None,
) -> SelectionProbabilities:
    """
    Selection probability of every user under the requested method.

    Closed form covers K = 2, 3 (UnsupportedK otherwise). Quadrature covers
    any K and keeps the raw sum; a defect larger than abs_tol is renormalised
    with a warning. Monte Carlo simulates ratio variates with the given alphas.
    """
    vector = alphas if isinstance(alphas, AlphaVector) else AlphaVector(alphas=list(alphas))
    method = Method(method)
    k = len(vector)

    if method is Method.CLOSED_FORM:
        if k == 2:
            return closed_form_k2(vector, tau_rel=tau_rel, cfg=cfg)
        if k == 3:
            return closed_form_k3(vector, tau_rel=tau_rel, cfg=cfg)
        raise UnsupportedK(k)

    if method is Method.QUADRATURE:
        cfg = cfg or default_config()
        raw = [quadrature_selection(vector, i, cfg) for i in range(k)]
        raw_sum = math.fsum(raw)
        probs = [min(1.0, max(0.0, p)) for p in raw]
        renormalized = False
        if abs(raw_sum - 1.0) > cfg.abs_tol:
            logger.warning("Quadrature probabilities sum to %.15g, renormalising", raw_sum)
            total = math.fsum(probs)
            probs = [p / total for p in probs]
            renormalized = True
        return SelectionProbabilities(probs=probs, method=method, raw_sum=raw_sum, renormalized=renormalized)

    # Local import: the simulator depends on this module for its comparisons
    from cr_sched.simulator import simulate_alphas

    report = simulate_alphas(vector, trials=trials, seed=seed)
    return SelectionProbabilities(probs=report.freqs, method=method, raw_sum=math.fsum(report.freqs))


def fairness_index(probs: SelectionProbabilities | Sequence[float]) -> float:
    """
    Jain's index of a probability vector, on a normalised copy.

    1.0 means every user is selected equally often, 1/K means one user always wins.
    """
    values = list(probs.probs if isinstance(probs, SelectionProbabilities) else probs)
    if not values:
        raise DomainError("fairness_index needs at least one probability")
    total = math.fsum(values)
    if total <= 0:
        raise DomainError("fairness_index needs a positive total probability")
    normalised = [p / total for p in values]
    return 1.0 / (len(normalised) * math.fsum(p * p for p in normalised))


def is_ratio_fair(links: Sequence[UserLink], rtol: float = 1e-9) -> bool:
    """True when every user has the same d_sd / d_sp, the condition for equal selection chances."""
    ratios = [link.d_sd / link.d_sp for link in links]
    return all(math.isclose(r, ratios[0], rel_tol=rtol) for r in ratios[1:])
