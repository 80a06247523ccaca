# cr_sched/simulator.py

"""
Seeded Monte Carlo engine for the selection frequencies.

Trials are split into fixed-size blocks. Every (block, user, link) triple owns
its own numpy stream derived from the master seed, so a block's draws do not
depend on which worker runs it or in what order; tallies are merged in block
order, which makes the report bit-identical for any worker count or backend.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

from cr_sched.channel import PowerMode, cap_binds, instantaneous_snr, sample_exponential
from cr_sched.core.config import settings
from cr_sched.core.errors import DomainError
from cr_sched.core.logger import logger
from cr_sched.schemas import (
    AlphaVector,
    BlockTally,
    Comparison,
    ComparisonRow,
    McReport,
    Method,
    QuadratureConfig,
    Scenario,
    UserLink,
)

# Link identifiers used in the stream derivation
LINK_SD = 0
LINK_SP = 1
LINK_PD = 2


def stream(seed: int, block: int, user: int, link: int) -> np.random.Generator:
    """Independent generator for one (block, user, link) of a run."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(block, user, link)))


def select_user(gains_sd: Sequence[float], gains_sp: Sequence[float]) -> int:
    """
    Index of the user with the largest g_sd / g_sp; ties go to the smallest index.
    """
    sd = np.asarray(gains_sd, dtype=float)
    sp = np.asarray(gains_sp, dtype=float)
    if sd.ndim != 1 or sd.shape != sp.shape:
        raise DomainError(f"gain lists must have equal length, got {sd.shape} and {sp.shape}")
    if sd.size < 2:
        raise DomainError("selection needs at least two users")
    if np.any(sd <= 0) or np.any(sp <= 0):
        raise DomainError("all gains must be positive")
    return int(np.argmax(sd / sp))


def _draw_gains(scenario: Scenario, block: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    k = scenario.k
    g_sd = np.empty((k, n))
    g_sp = np.empty((k, n))
    for i, user in enumerate(scenario.users):
        g_sd[i] = sample_exponential(user.delta_sd_sq, stream(scenario.seed, block, i, LINK_SD), size=n)
        g_sp[i] = sample_exponential(user.delta_sp_sq, stream(scenario.seed, block, i, LINK_SP), size=n)
    return g_sd, g_sp


def _draw_interference(scenario: Scenario, block: int, n: int) -> np.ndarray:
    return sample_exponential(scenario.primary.delta_pd_sq, stream(scenario.seed, block, 0, LINK_PD), size=n)


def run_block(scenario: Scenario, block: int, n: int) -> BlockTally:
    """Simulate n trials of one block and tally the winners."""
    k = scenario.k
    g_sd, g_sp = _draw_gains(scenario, block, n)
    # np.argmax keeps the first maximum, i.e. the smallest index on ties
    winners = np.argmax(g_sd / g_sp, axis=0)
    counts = np.bincount(winners, minlength=k)

    cols = np.arange(n)
    winner_sp = g_sp[winners, cols]
    cap = np.zeros(k, dtype=np.int64)
    if scenario.power_mode is PowerMode.EXACT:
        cap = np.bincount(winners[cap_binds(winner_sp, scenario.primary)], minlength=k)

    snr_db_sum = None
    if scenario.record_snr:
        g_pd = _draw_interference(scenario, block, n)
        snr = instantaneous_snr(g_sd[winners, cols], winner_sp, g_pd, scenario.primary, scenario.power_mode)
        snr_db_sum = np.bincount(winners, weights=10.0 * np.log10(snr), minlength=k).tolist()

    return BlockTally(
        block=block,
        trials=n,
        counts=counts.tolist(),
        cap_binding=cap.tolist(),
        snr_db_sum=snr_db_sum,
    )


def block_layout(trials: int, block_size: int) -> list[tuple[int, int]]:
    """(block index, trials in block) pairs covering all trials."""
    full, rest = divmod(trials, block_size)
    layout = [(b, block_size) for b in range(full)]
    if rest:
        layout.append((full, rest))
    return layout


def _run_local(scenario: Scenario, layout: list[tuple[int, int]], workers: int) -> list[BlockTally]:
    if workers <= 1 or len(layout) <= 1:
        return [run_block(scenario, b, n) for b, n in layout]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map() yields in submission order
        return list(pool.map(lambda bn: run_block(scenario, *bn), layout))


def _run_celery(scenario: Scenario, layout: list[tuple[int, int]]) -> list[BlockTally]:
    from cr_sched.tasks.simulate import simulate_block

    payload = scenario.model_dump(mode="json")
    pending = [simulate_block.delay(payload, b, n) for b, n in layout]
    logger.info("Dispatched %d blocks to Celery", len(pending))
    return [BlockTally.model_validate(r.get(timeout=settings.celery_task_timeout)) for r in pending]


def _merge(scenario: Scenario, tallies: list[BlockTally], block_size: int) -> McReport:
    k = scenario.k
    trials = scenario.trials
    counts = [0] * k
    cap = [0] * k
    snr_sum = [0.0] * k if scenario.record_snr else None
    for tally in sorted(tallies, key=lambda t: t.block):
        for i in range(k):
            counts[i] += tally.counts[i]
            cap[i] += tally.cap_binding[i]
            if snr_sum is not None:
                snr_sum[i] += tally.snr_db_sum[i]

    if sum(counts) != trials:
        raise DomainError(f"tally conservation violated: {sum(counts)} != {trials}")

    freqs = [c / trials for c in counts]
    ci95 = [1.96 * math.sqrt(f * (1.0 - f) / trials) for f in freqs]
    mean_snr = None
    if snr_sum is not None:
        mean_snr = [s / c if c else None for s, c in zip(snr_sum, counts)]

    return McReport(
        counts=counts,
        freqs=freqs,
        ci95_halfwidth=ci95,
        mean_snr_db=mean_snr,
        cap_binding_counts=cap if scenario.power_mode is PowerMode.EXACT else None,
        power_mode=scenario.power_mode,
        seed=scenario.seed,
        trials=trials,
        block_size=block_size,
    )


def run_monte_carlo(
    scenario: Scenario,
    workers: int | None = None,
    backend: str | None = None,
    block_size: int | None = None,
) -> McReport:
    """
    Tally how often each user is selected over scenario.trials independent trials.

    The result depends only on (seed, trials, users, block_size), never on
    workers or backend.
    """
    if scenario.trials < 1:
        raise DomainError(f"trials must be >= 1, got {scenario.trials}")
    workers = workers or settings.workers
    backend = backend or settings.simulation_backend
    block_size = block_size or settings.block_size

    layout = block_layout(scenario.trials, block_size)
    started = time.perf_counter()
    logger.info(
        "Monte Carlo: K=%d trials=%d seed=%d blocks=%d backend=%s workers=%d",
        scenario.k, scenario.trials, scenario.seed, len(layout), backend, workers,
    )
    if backend == "celery":
        tallies = _run_celery(scenario, layout)
    elif backend == "local":
        tallies = _run_local(scenario, layout, workers)
    else:
        raise DomainError(f"unknown simulation backend {backend!r}")

    report = _merge(scenario, tallies, block_size)
    logger.info("Monte Carlo finished in %.2fs: freqs=%s", time.perf_counter() - started, report.freqs)
    if report.cap_binding_counts is not None:
        rate = sum(report.cap_binding_counts) / report.trials
        if rate > 0.01:
            logger.warning("P_M cap bound in %.2f%% of trials; the approx-mode analytics do not model this", 100 * rate)
    return report


def simulate_alphas(
    alphas: AlphaVector | Sequence[float],
    trials: int | None = None,
    seed: int | None = None,
    beta: float | None = None,
) -> McReport:
    """Monte Carlo for bare alphas, realised as links with d_sp = 1 and d_sd = alpha^(1/beta)."""
    vector = alphas if isinstance(alphas, AlphaVector) else AlphaVector(alphas=list(alphas))
    beta = beta or settings.default_beta
    scenario = Scenario(
        users=[UserLink(d_sd=a ** (1.0 / beta), d_sp=1.0, beta=beta) for a in vector.alphas],
        beta=beta,
        trials=trials or settings.default_trials,
        seed=settings.default_seed if seed is None else seed,
    )
    return run_monte_carlo(scenario)


def check_metric_equivalence(scenario: Scenario, trials: int = 10_000) -> float:
    """
    Fraction of trials in which the user maximising g_sd/g_sp is also the user
    maximising the instantaneous SNR (approx power mode).
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    g_sd, g_sp = _draw_gains(scenario, 0, trials)
    g_pd = _draw_interference(scenario, 0, trials)
    by_metric = np.argmax(g_sd / g_sp, axis=0)
    snr = instantaneous_snr(g_sd, g_sp, g_pd[np.newaxis, :], scenario.primary, PowerMode.APPROX)
    by_snr = np.argmax(snr, axis=0)
    agreement = float(np.mean(by_metric == by_snr))
    logger.debug("Metric/SNR argmax agreement %.6f over %d trials", agreement, trials)
    return agreement


def mc_vs_analytic(
    scenario: Scenario,
    method: Method | str = Method.CLOSED_FORM,
    report: McReport | None = None,
    analytic_alphas: Sequence[float] | None = None,
    cfg: QuadratureConfig | None = None,
) -> Comparison:
    """
    Compare analytic probabilities with simulated frequencies user by user.

    A user passes when |analytic - empirical| <= 3 * sqrt(p (1 - p) / trials)
    with p the analytic value. analytic_alphas overrides the scenario's alphas
    (for negative controls).
    """
    from cr_sched.analytics import selection_probabilities

    alphas = list(analytic_alphas) if analytic_alphas is not None else scenario.alphas
    analytic = selection_probabilities(alphas, method, cfg=cfg)
    report = report or run_monte_carlo(scenario)
    if len(analytic.probs) != len(report.freqs):
        raise DomainError("analytic and simulated vectors have different lengths")

    rows = []
    for i, (p, f, ci) in enumerate(zip(analytic.probs, report.freqs, report.ci95_halfwidth)):
        bound = 3.0 * math.sqrt(p * (1.0 - p) / report.trials)
        diff = abs(p - f)
        rows.append(ComparisonRow(user=i, analytic=p, empirical=f, abs_diff=diff, ci95=ci, bound=bound, passed=diff <= bound))

    passed = all(r.passed for r in rows)
    if not passed:
        logger.warning("Monte Carlo disagrees with %s beyond 3 sigma: %s", analytic.method.value,
                       [(r.user, r.abs_diff, r.bound) for r in rows if not r.passed])
    return Comparison(method=analytic.method, rows=rows, passed=passed, trials=report.trials, seed=report.seed)
