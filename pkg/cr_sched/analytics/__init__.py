from .metric import cdf_metric, pdf_metric
from .identities import (
    excess,
    identity_i1,
    identity_i2,
    identity_i3,
    printed_i2,
    printed_i3,
    relative_gap,
)
from .quadrature import default_config, quadrature_selection, semi_infinite_quad
from .closed_form import closed_form_k2, closed_form_k3, printed_pr_first_k2, printed_pr_first_k3
from .selection import fairness_index, is_ratio_fair, selection_probabilities

__all__ = [
    "cdf_metric",
    "pdf_metric",
    "excess",
    "identity_i1",
    "identity_i2",
    "identity_i3",
    "printed_i2",
    "printed_i3",
    "relative_gap",
    "default_config",
    "quadrature_selection",
    "semi_infinite_quad",
    "closed_form_k2",
    "closed_form_k3",
    "printed_pr_first_k2",
    "printed_pr_first_k3",
    "fairness_index",
    "is_ratio_fair",
    "selection_probabilities",
]
