# cr_sched/channel.py

"""
Physical-layer model of the underlay secondary network.

Distances map to average link gains through the path-loss law, the
instantaneous gains of Rayleigh links are exponential with those means,
the secondary transmitter obeys the interference-power rule and the
eNodeB sees the resulting SNR. Every function is pure given its arguments;
randomness only enters through an explicit numpy Generator.
"""

from __future__ import annotations

from enum import Enum
from typing import TYPE_CHECKING

import numpy as np
from numpy.typing import ArrayLike

from cr_sched.core.errors import DomainError
from cr_sched.core.logger import logger

if TYPE_CHECKING:
    from cr_sched.schemas import PrimarySide, UserLink


class PowerMode(str, Enum):
    """How the SU-TX transmit power is derived from its interference-link gain."""

    EXACT = "exact"    # min(P_M, P_A / g_sp)
    APPROX = "approx"  # P_A / g_sp, the high-P_M assumption the analytics rely on


def _require_positive(name: str, value: ArrayLike) -> None:
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        logger.error("%s must be positive and finite, got %s", name, value)
        raise DomainError(f"{name} must be positive and finite, got {value!r}")


def gains_from_distance(d: float, beta: float) -> float:
    """Average link gain d^(-beta) of a link of length d."""
    _require_positive("distance", d)
    _require_positive("path-loss exponent", beta)
    return float(d) ** (-float(beta))


def alpha_of(link: UserLink, beta: float | None = None) -> float:
    """
    Ratio of the average interference-link gain to the average direct-link gain.

    Equals (d_sd / d_sp)^beta. When beta is omitted the link's own exponent is used.
    """
    beta = link.beta if beta is None else beta
    delta_sd_sq = gains_from_distance(link.d_sd, beta)
    delta_sp_sq = gains_from_distance(link.d_sp, beta)
    # Same value as delta_sp_sq / delta_sd_sq without the two powers underflowing
    alpha = (link.d_sd / link.d_sp) ** beta
    if not np.isfinite(alpha) or alpha <= 0:
        raise DomainError(
            f"alpha is not representable for d_sd={link.d_sd}, d_sp={link.d_sp}, beta={beta} "
            f"(gains {delta_sd_sq!r}, {delta_sp_sq!r})"
        )
    return alpha


def transmit_power(g_sp: ArrayLike, p: PrimarySide, mode: PowerMode = PowerMode.APPROX):
    """
    Power of a secondary transmitter whose link to the PU-RX has gain g_sp.

    Exact mode caps the interference-limited power P_A / g_sp at P_M.
    Accepts scalars or numpy arrays and returns the same shape.
    """
    _require_positive("g_sp", g_sp)
    power = p.p_a / np.asarray(g_sp, dtype=float)
    if PowerMode(mode) is PowerMode.EXACT:
        power = np.minimum(power, p.p_m)
    return float(power) if np.ndim(power) == 0 else power


def cap_binds(g_sp: ArrayLike, p: PrimarySide):
    """True where the P_M cap is the binding constraint (g_sp < P_A / P_M)."""
    return np.asarray(g_sp, dtype=float) < p.p_a / p.p_m


def instantaneous_snr(
    g_sd: ArrayLike,
    g_sp: ArrayLike,
    g_pd: ArrayLike,
    p: PrimarySide,
    mode: PowerMode = PowerMode.APPROX,
):
    """
    SNR at the eNodeB when the secondary transmitter with gains (g_sd, g_sp) is active
    while the primary transmitter interferes through a link of gain g_pd.
    """
    _require_positive("g_sd", g_sd)
    _require_positive("g_pd", g_pd)
    power = transmit_power(g_sp, p, mode)
    snr = power * np.asarray(g_sd, dtype=float) / (p.eta0 + p.p_u * np.asarray(g_pd, dtype=float))
    return float(snr) if np.ndim(snr) == 0 else snr


def sample_exponential(mean: float, rng: np.random.Generator, size: int | None = None):
    """
    Exponential variate(s) with the given mean by inversion, -mean * ln(U).

    U is drawn on (0, 1] so the logarithm never sees zero.
    """
    _require_positive("mean", mean)
    u = 1.0 - rng.random(size)
    draws = -mean * np.log(u)
    return float(draws) if size is None else draws
