import logging

import numpy as np
import pytest

from cr_sched.analytics import (
    closed_form_k2,
    fairness_index,
    is_ratio_fair,
    quadrature_selection,
    selection_probabilities,
)
from cr_sched.core.errors import ConvergenceFailure, DomainError, UnsupportedK
from cr_sched.schemas import Method, QuadratureConfig, UserLink


@pytest.mark.parametrize("alphas", [(1.0, 0.125), (2.0, 3.0), (0.01, 50.0)])
def test_k2_quadrature_matches_closed_form(alphas):
    closed = closed_form_k2(alphas)
    for k in range(2):
        assert quadrature_selection(alphas, k) == pytest.approx(closed[k], abs=1e-8)


@pytest.mark.parametrize("k", [2, 3, 5])
def test_equal_alphas_share_evenly(k):
    probs = selection_probabilities([2.5] * k, Method.QUADRATURE)
    assert probs.probs == pytest.approx([1 / k] * k, abs=1e-9)
    assert abs(probs.sum_defect) < 1e-9
    assert not probs.renormalized


def test_user_index_out_of_range():
    with pytest.raises(DomainError):
        quadrature_selection([1.0, 2.0], 2)
    with pytest.raises(DomainError):
        quadrature_selection([1.0, 2.0], -1)


def test_invalid_alphas_are_rejected():
    with pytest.raises(ValueError):
        quadrature_selection([1.0, 0.0], 0)
    with pytest.raises(ValueError):
        quadrature_selection([1.0, float("inf")], 0)


def test_subdivision_cap_raises_convergence_failure():
    cfg = QuadratureConfig(abs_tol=1e-14, rel_tol=1e-14, max_subdivisions=1)
    with pytest.raises(ConvergenceFailure) as excinfo:
        quadrature_selection([1e-4, 1e4], 0, cfg)
    assert excinfo.value.best_estimate == excinfo.value.best_estimate  # not NaN
    assert excinfo.value.error_bound >= 0


def test_closed_form_rejects_k4():
    with pytest.raises(UnsupportedK):
        selection_probabilities([1.0, 2.0, 3.0, 4.0], Method.CLOSED_FORM)


def test_k4_quadrature_equal_ratios():
    probs = selection_probabilities([1.0] * 4, "quadrature")
    assert probs.probs == pytest.approx([0.25] * 4, abs=1e-9)


def test_k4_quadrature_sums_to_one():
    probs = selection_probabilities([0.5, 1.0, 2.0, 8.0], Method.QUADRATURE)
    assert sum(probs.probs) == pytest.approx(1.0, abs=1e-9)
    # Smaller alpha means a stochastically larger metric
    assert probs.probs == sorted(probs.probs, reverse=True)


def test_loose_tolerance_renormalises_with_warning(caplog, monkeypatch):
    import cr_sched.analytics.selection as selection

    def off_by_a_bit(alphas, k, cfg=None):
        return 0.26

    monkeypatch.setattr(selection, "quadrature_selection", off_by_a_bit)
    with caplog.at_level(logging.WARNING, logger="cr_sched"):
        probs = selection_probabilities([1.0, 2.0, 3.0, 4.0], Method.QUADRATURE)
    assert probs.renormalized
    assert probs.raw_sum == pytest.approx(1.04)
    assert sum(probs.probs) == pytest.approx(1.0)
    assert "renormalising" in caplog.text


def test_closed_form_dispatch():
    probs = selection_probabilities([1.0, 0.125], "closed-form")
    assert probs.method is Method.CLOSED_FORM
    assert probs[0] == pytest.approx(0.1966435170, abs=1e-9)


def test_fairness_index():
    assert fairness_index([0.25] * 4) == pytest.approx(1.0)
    assert fairness_index([1.0, 0.0, 0.0]) == pytest.approx(1 / 3)
    assert 1 / 3 < fairness_index(selection_probabilities([1.0, 0.5, 2.0])) < 1.0
    with pytest.raises(DomainError):
        fairness_index([])
    with pytest.raises(DomainError):
        fairness_index([0.0, 0.0])


def test_is_ratio_fair():
    fair = [UserLink(d_sd=2.0, d_sp=1.0), UserLink(d_sd=4.0, d_sp=2.0), UserLink(d_sd=1.0, d_sp=0.5)]
    assert is_ratio_fair(fair)
    assert not is_ratio_fair(fair[:2] + [UserLink(d_sd=1.0, d_sp=1.0)])


def test_tiny_alphas_converge():
    alphas = [4.52378e-05, 2.16508e-05, 0.00039275, 0.0353064, 0.00120779, 4.42004e-05]
    probs = selection_probabilities(alphas, Method.QUADRATURE)
    expected = [0.252688, 0.439415, 0.037458, 0.000441, 0.012633, 0.257366]
    assert probs.probs == pytest.approx(expected, abs=2e-6)
    assert sum(probs.probs) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("scale", [1e-12, 1e-6, 1.0, 1e6, 1e12])
def test_extreme_common_scale(scale):
    base = [0.7, 3.0, 0.2, 11.0]
    probs = selection_probabilities([a * scale for a in base], Method.QUADRATURE)
    assert probs.probs == pytest.approx(selection_probabilities(base, Method.QUADRATURE).probs, abs=1e-10)


def test_quadrature_permutation_and_scale_on_random_vectors():
    rng = np.random.default_rng(2024)
    for _ in range(500):
        k = int(rng.integers(2, 7))
        alphas = 10.0 ** rng.uniform(-2, 2, size=k)
        base = selection_probabilities(alphas.tolist(), Method.QUADRATURE).probs

        order = rng.permutation(k)
        permuted = selection_probabilities(alphas[order].tolist(), Method.QUADRATURE).probs
        assert permuted == pytest.approx([base[i] for i in order], abs=1e-10)

        c = 10.0 ** rng.uniform(-3, 3)
        scaled = selection_probabilities((alphas * c).tolist(), Method.QUADRATURE).probs
        assert scaled == pytest.approx(base, abs=1e-10)


@pytest.mark.parametrize("method", [Method.CLOSED_FORM, Method.QUADRATURE])
def test_smaller_alpha_never_lowers_own_probability(method):
    previous = 0.0
    # Decreasing alpha_1 over a grid, the others fixed
    for a1 in np.logspace(2, -2, 41):
        p1 = selection_probabilities([a1, 1.0, 3.0], method)[0]
        assert p1 >= previous - 1e-12
        previous = p1


def test_monotonicity_grid_for_larger_k():
    others = [0.5, 2.0, 4.0, 9.0]
    previous = 0.0
    for a1 in np.logspace(1.5, -1.5, 31):
        p1 = selection_probabilities([a1, *others], Method.QUADRATURE)[0]
        assert p1 >= previous - 1e-12
        previous = p1
