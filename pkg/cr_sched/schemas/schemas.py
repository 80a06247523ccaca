# cr_sched/schemas/schemas.py
"""Pydantic models shared by the channel, analytics, simulator and cli modules"""
import math
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from cr_sched.channel import PowerMode, alpha_of, gains_from_distance

# ========== Method enum ==========

class Method(str, Enum):
    """Where a probability vector came from."""
    CLOSED_FORM = "closed-form"
    QUADRATURE = "quadrature"
    MONTE_CARLO = "monte-carlo"

# ========== Channel Schemas ==========

class UserLink(BaseModel):
    """
    One secondary transmitter: its two distances and the gains derived from them.

    The derived fields are recomputed from (d_sd, d_sp, beta) on validation,
    so values supplied for them are ignored.
    """
    model_config = ConfigDict(extra="forbid")

    d_sd: float = Field(..., gt=0, allow_inf_nan=False)   # SU-TX -> eNodeB
    d_sp: float = Field(..., gt=0, allow_inf_nan=False)   # SU-TX -> PU-RX
    beta: float = Field(3.0, gt=0, allow_inf_nan=False)

    delta_sd_sq: float = 0.0
    delta_sp_sq: float = 0.0
    alpha: float = 0.0

    @model_validator(mode="after")
    def _derive_gains(self) -> "UserLink":
        self.delta_sd_sq = gains_from_distance(self.d_sd, self.beta)
        self.delta_sp_sq = gains_from_distance(self.d_sp, self.beta)
        self.alpha = alpha_of(self)
        return self

    def with_beta(self, beta: float) -> "UserLink":
        return UserLink(d_sd=self.d_sd, d_sp=self.d_sp, beta=beta)


class PrimarySide(BaseModel):
    """
    Primary-system and power-rule parameters (linear units).

    Selection probabilities do not depend on these; they only feed SNR reporting
    and the exact power mode.
    """
    model_config = ConfigDict(extra="forbid")

    p_u: float = Field(1.0, ge=0, allow_inf_nan=False)          # PU-TX power
    p_a: float = Field(1.0, gt=0, allow_inf_nan=False)          # Interference threshold at PU-RX
    p_m: float = Field(1e3, gt=0, allow_inf_nan=False)          # SU-TX power cap
    eta0: float = Field(1.0, gt=0, allow_inf_nan=False)         # Noise power
    delta_pd_sq: float = Field(1.0, gt=0, allow_inf_nan=False)  # PU-TX -> eNodeB average gain

# ========== Scenario ==========

class Scenario(BaseModel):
    """
    Full system description for one experiment.
    """
    model_config = ConfigDict(extra="forbid")

    users: List[UserLink] = Field(..., min_length=2)
    beta: float = Field(3.0, gt=0, allow_inf_nan=False)
    primary: PrimarySide = Field(default_factory=PrimarySide)
    power_mode: PowerMode = PowerMode.APPROX
    trials: int = Field(1_000_000, ge=1)
    seed: int = Field(0, ge=0, lt=2**64)
    record_snr: bool = False
    label: Optional[str] = None

    @model_validator(mode="after")
    def _apply_beta(self) -> "Scenario":
        # Every link carries the scenario's exponent
        self.users = [u if u.beta == self.beta else u.with_beta(self.beta) for u in self.users]
        return self

    @property
    def k(self) -> int:
        return len(self.users)

    @property
    def alphas(self) -> List[float]:
        return [u.alpha for u in self.users]

# ========== Analytics Schemas ==========

class AlphaVector(BaseModel):
    """
    Ordered per-user ratios alpha_1..alpha_K, K >= 2.
    """
    model_config = ConfigDict(frozen=True)

    alphas: List[float] = Field(..., min_length=2)

    @field_validator("alphas")
    @classmethod
    def _positive_finite(cls, v: List[float]) -> List[float]:
        for i, a in enumerate(v):
            if not math.isfinite(a) or a <= 0:
                raise ValueError(f"alpha[{i}] must be finite and > 0, got {a!r}")
        return v

    @classmethod
    def of(cls, *alphas: float) -> "AlphaVector":
        return cls(alphas=list(alphas))

    @classmethod
    def from_scenario(cls, scenario: Scenario) -> "AlphaVector":
        return cls(alphas=scenario.alphas)

    def __len__(self) -> int:
        return len(self.alphas)


class QuadratureConfig(BaseModel):
    """
    Tolerances for the adaptive quadrature of the selection integral.
    """
    abs_tol: float = Field(1e-10, gt=0)
    rel_tol: float = Field(1e-9, gt=0)
    max_subdivisions: int = Field(2000, ge=1)


class SelectionProbabilities(BaseModel):
    """
    Probability vector over users with its provenance.

    raw_sum is the sum before any renormalisation; sum_defect = raw_sum - 1.
    """
    probs: List[float]
    method: Method
    raw_sum: float = 1.0
    renormalized: bool = False
    fallback: bool = False   # closed form delegated to quadrature or to the symmetric limit

    @property
    def sum_defect(self) -> float:
        return self.raw_sum - 1.0

    def __len__(self) -> int:
        return len(self.probs)

    def __getitem__(self, k: int) -> float:
        return self.probs[k]

# ========== Simulator Schemas ==========

class BlockTally(BaseModel):
    """
    Tallies of one trial block; blocks are merged in index order.
    """
    block: int
    trials: int
    counts: List[int]
    cap_binding: List[int]
    snr_db_sum: Optional[List[float]] = None


class McReport(BaseModel):
    """
    Monte Carlo selection tallies under a fixed seed.
    """
    counts: List[int]
    freqs: List[float]
    ci95_halfwidth: List[float]
    mean_snr_db: Optional[List[Optional[float]]] = None
    cap_binding_counts: Optional[List[int]] = None
    power_mode: PowerMode = PowerMode.APPROX
    seed: int
    trials: int
    block_size: int


class ComparisonRow(BaseModel):
    """
    Analytic versus empirical selection probability of one user.
    """
    user: int
    analytic: float
    empirical: float
    abs_diff: float
    ci95: float
    bound: float   # 3-sigma binomial bound around the analytic value
    passed: bool


class Comparison(BaseModel):
    method: Method
    rows: List[ComparisonRow]
    passed: bool
    trials: int
    seed: int

# ========== Report Schemas ==========

class ReportRow(BaseModel):
    """
    One user's line in a run report (user is 1-based).
    """
    user: int
    d_sd: float
    d_sp: float
    alpha: float
    p_closed: Optional[float] = None
    p_quad: Optional[float] = None
    p_mc: Optional[float] = None
    ci95: Optional[float] = None


class RunMetadata(BaseModel):
    label: Optional[str] = None
    seed: int
    trials: int
    beta: float
    power_mode: PowerMode
    methods: List[Method]
    sum_defect_closed: Optional[float] = None
    sum_defect_quad: Optional[float] = None
    closed_form_fallback: Optional[bool] = None
    fairness_index: Optional[float] = None
    ratio_fair: bool
    check_passed: Optional[bool] = None
    cap_binding_rate: Optional[float] = None
    mean_snr_db: Optional[List[Optional[float]]] = None
    wall_time_s: float


class RunReport(BaseModel):
    """
    Everything one `cr-sched run` produces.
    """
    rows: List[ReportRow]
    metadata: RunMetadata


class SweepPoint(BaseModel):
    """
    Selection probabilities at one position of a location sweep.
    """
    value: float
    user: int
    field: str
    probs: List[float]
    method: Method
