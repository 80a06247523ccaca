# cr_sched/analytics/identities.py

"""
Integral identities behind the closed-form selection probabilities.

    I1(a)       = int_0^inf (1+ay)^-2 dy                         = 1/a
    I2(a, b)    = int_0^inf (1+ay)^-2 (1+by)^-1 dy               , a != b
    I3(a, b, c) = int_0^inf (1+ay)^-2 (1+by)^-1 (1+cy)^-1 dy     , a, b, c distinct

The textbook forms of I2 and I3 divide log differences by (a-b)^2 and lose
most of their digits when the parameters approach each other. Here I2 is
written as excess(d)/b with d = (a-b)/b and excess(d) = (d - log1p(d))/d^2,
and I3 as the divided difference (b*I2(a,b) - c*I2(a,c))/(b-c). Both are
algebraically identical to the textbook forms; the printed_* functions keep
the textbook forms for cross-checking.
"""

import math

from cr_sched.core.config import settings
from cr_sched.core.errors import DomainError, NearDegenerate

# Below this |d| the excess is summed as a power series
_SERIES_CUTOFF = 0.05
_SERIES_TERMS = 24


def _check_positive(**params: float) -> None:
    for name, value in params.items():
        if not math.isfinite(value) or value <= 0:
            raise DomainError(f"{name} must be finite and > 0, got {value!r}")


def relative_gap(a: float, b: float) -> float:
    """|a - b| / max(a, b)."""
    return abs(a - b) / max(a, b)


def excess(d: float) -> float:
    """
    (d - log1p(d)) / d^2 for d > -1, continuous at d = 0 where it equals 1/2.
    """
    if d <= -1.0:
        raise DomainError(f"excess() needs d > -1, got {d!r}")
    if abs(d) < _SERIES_CUTOFF:
        # sum_{n>=0} (-d)^n / (n+2), Horner from the tail
        total = 0.0
        for n in range(_SERIES_TERMS - 1, -1, -1):
            total = total * (-d) + 1.0 / (n + 2)
        return total
    return (d - math.log1p(d)) / (d * d)


def _i2(a: float, b: float) -> float:
    return excess((a - b) / b) / b


def _guard(tau_rel: float, **params: float) -> None:
    names = list(params)
    for i, x in enumerate(names):
        for y in names[i + 1:]:
            gap = relative_gap(params[x], params[y])
            if gap <= tau_rel:
                raise NearDegenerate(params[x], params[y], gap, tau_rel)


def identity_i1(a: float) -> float:
    _check_positive(a=a)
    return 1.0 / a


def identity_i2(a: float, b: float, tau_rel: float | None = None) -> float:
    """
    int_0^inf (1+ay)^-2 (1+by)^-1 dy for a != b.

    Raises NearDegenerate when |a-b|/max(a,b) <= tau_rel; callers fall back
    to quadrature in that case.
    """
    _check_positive(a=a, b=b)
    _guard(settings.tau_rel if tau_rel is None else tau_rel, a=a, b=b)
    return _i2(a, b)


def identity_i3(a: float, b: float, c: float, tau_rel: float | None = None) -> float:
    """
    int_0^inf (1+ay)^-2 (1+by)^-1 (1+cy)^-1 dy for pairwise distinct a, b, c.

    Symmetric in (b, c). Raises NearDegenerate when any pair is within tau_rel.
    """
    _check_positive(a=a, b=b, c=c)
    _guard(settings.tau_rel if tau_rel is None else tau_rel, a=a, b=b, c=c)
    return _i3(a, b, c)


def _i3(a: float, b: float, c: float) -> float:
    # Keep b > c so the divided difference has a fixed orientation
    if b < c:
        b, c = c, b
    return (b * _i2(a, b) - c * _i2(a, c)) / (b - c)


def printed_i2(a: float, b: float) -> float:
    """Textbook form of I2 with direct log subtraction."""
    return (1.0 - b * math.log(a) / (a - b) + b * math.log(b) / (a - b)) / (a - b)


def printed_i3(a: float, b: float, c: float) -> float:
    """Textbook form of I3 with direct log subtraction."""
    return (
        a / ((a - b) * (a - c))
        - a * (a * b + a * c - 2 * b * c) * math.log(a) / ((a - b) ** 2 * (a - c) ** 2)
        + b ** 2 * math.log(b) / ((a - b) ** 2 * (b - c))
        + c ** 2 * math.log(c) / ((a - c) ** 2 * (c - b))
    )
