import pytest

from cr_sched.channel import PowerMode
from cr_sched.core.errors import DomainError
from cr_sched.schemas import Method, Scenario, UserLink
from cr_sched.simulator import (
    block_layout,
    check_metric_equivalence,
    mc_vs_analytic,
    run_monte_carlo,
    select_user,
    simulate_alphas,
)


def test_select_user_picks_largest_ratio():
    assert select_user([1.0, 3.0, 2.0], [1.0, 1.0, 1.0]) == 1
    assert select_user([1.0, 1.0], [0.5, 2.0]) == 0


def test_select_user_ties_go_to_first():
    assert select_user([2.0, 1.0, 2.0], [1.0, 0.5, 1.0]) == 0


def test_select_user_is_scale_invariant():
    sd, sp = [0.3, 0.9, 0.4], [0.2, 0.5, 0.1]
    assert select_user([x * 1e6 for x in sd], [x * 1e6 for x in sp]) == select_user(sd, sp) == 2


@pytest.mark.parametrize("sd, sp", [([1.0], [1.0]), ([1.0, 2.0], [1.0]), ([1.0, 0.0], [1.0, 1.0]), ([1.0, 2.0], [-1.0, 1.0])])
def test_select_user_rejects_bad_input(sd, sp):
    with pytest.raises(DomainError):
        select_user(sd, sp)


def test_block_layout_covers_all_trials():
    layout = block_layout(10, 4)
    assert layout == [(0, 4), (1, 4), (2, 2)]
    assert block_layout(8, 4) == [(0, 4), (1, 4)]


def test_fig1_is_fair(fig_scenario):
    report = run_monte_carlo(fig_scenario("fig1"))
    assert sum(report.counts) == report.trials == 1_000_000
    assert report.freqs == pytest.approx([1 / 3] * 3, abs=0.002)


def test_fig2_favours_the_closer_user(fig_scenario):
    report = run_monte_carlo(fig_scenario("fig2"))
    assert report.freqs[1] == pytest.approx(0.692, abs=0.003)
    assert report.freqs[0] == pytest.approx(report.freqs[2], abs=0.003)


def test_equal_ratio_pair_is_even(two_user_scenario):
    report = run_monte_carlo(two_user_scenario)
    assert report.freqs == pytest.approx([0.5, 0.5], abs=0.002)
    assert report.ci95_halfwidth[0] == pytest.approx(1.96 * 0.5 / 1000, rel=1e-2)


def test_zero_trials_is_a_domain_error(two_user_scenario):
    with pytest.raises(DomainError):
        run_monte_carlo(two_user_scenario.model_copy(update={"trials": 0}))


def test_unknown_backend(two_user_scenario):
    with pytest.raises(DomainError):
        run_monte_carlo(two_user_scenario, backend="mpi")


def test_same_seed_same_report_for_any_worker_count(fig_scenario):
    scenario = fig_scenario("fig3", trials=50_000, seed=123)
    serial = run_monte_carlo(scenario, workers=1, block_size=4096)
    threaded = run_monte_carlo(scenario, workers=4, block_size=4096)
    assert serial == threaded


def test_celery_backend_matches_local(fig_scenario, celery_eager):
    scenario = fig_scenario("fig2", trials=20_000, seed=5)
    local = run_monte_carlo(scenario, backend="local", block_size=4096)
    distributed = run_monte_carlo(scenario, backend="celery", block_size=4096)
    assert local == distributed


def test_different_seeds_differ(fig_scenario):
    a = run_monte_carlo(fig_scenario("fig1", trials=20_000, seed=1))
    b = run_monte_carlo(fig_scenario("fig1", trials=20_000, seed=2))
    assert a.counts != b.counts


def test_record_snr_gives_per_user_means(fig_scenario):
    scenario = fig_scenario("fig2", trials=20_000).model_copy(update={"record_snr": True})
    report = run_monte_carlo(scenario)
    assert report.mean_snr_db is not None
    assert len(report.mean_snr_db) == 3
    assert all(v is not None for v in report.mean_snr_db)
    assert report.cap_binding_counts is None


def test_exact_mode_counts_cap_binding():
    scenario = Scenario(
        users=[UserLink(d_sd=2.0, d_sp=2.0), UserLink(d_sd=2.0, d_sp=2.5)],
        power_mode=PowerMode.EXACT,
        trials=200_000,
        seed=3,
    )
    report = run_monte_carlo(scenario)
    assert report.power_mode is PowerMode.EXACT
    assert report.cap_binding_counts is not None
    assert 0 < sum(report.cap_binding_counts) < report.trials
    assert all(c <= n for c, n in zip(report.cap_binding_counts, report.counts))


def test_metric_and_snr_pick_the_same_user(fig_scenario):
    assert check_metric_equivalence(fig_scenario("fig2")) == 1.0


def test_fig2_agrees_with_closed_form(fig_scenario):
    comparison = mc_vs_analytic(fig_scenario("fig2"), Method.CLOSED_FORM)
    assert comparison.passed
    assert all(r.abs_diff <= r.bound for r in comparison.rows)


def test_fig3_agrees_with_quadrature(fig_scenario):
    comparison = mc_vs_analytic(fig_scenario("fig3"), Method.QUADRATURE)
    assert comparison.passed
    assert comparison.method is Method.QUADRATURE


def test_wrong_alphas_fail_the_check(fig_scenario):
    fig2 = fig_scenario("fig2")
    comparison = mc_vs_analytic(fig2, Method.CLOSED_FORM, analytic_alphas=fig_scenario("fig3").alphas)
    assert not comparison.passed


def test_simulate_alphas_matches_closed_form():
    report = simulate_alphas([1.0, 0.125], trials=400_000, seed=9)
    assert report.freqs[0] == pytest.approx(0.1966435170, abs=0.003)
