import numpy as np
import pytest

from cr_sched.analytics import (
    closed_form_k2,
    closed_form_k3,
    printed_pr_first_k2,
    printed_pr_first_k3,
    quadrature_selection,
    relative_gap,
)
from cr_sched.core.errors import DomainError
from cr_sched.schemas import AlphaVector, Method

# 1 - 8 * (7 - ln 8) / 49
PR_FIRST_1_EIGHTH = 0.1966435170089528


def test_k2_equal_alphas_give_half():
    probs = closed_form_k2([1.0, 1.0])
    assert probs.probs == pytest.approx([0.5, 0.5], abs=1e-9)
    assert probs.fallback
    assert probs.method is Method.CLOSED_FORM


def test_k2_limit_fallback():
    probs = closed_form_k2([1.0, 1.0 + 1e-8], fallback="limit")
    assert probs.probs == [0.5, 0.5]


def test_k2_worked_example_and_mirror():
    probs = closed_form_k2(AlphaVector.of(1.0, 0.125))
    assert probs[0] == pytest.approx(PR_FIRST_1_EIGHTH, abs=1e-12)
    assert probs[1] == pytest.approx(1 - PR_FIRST_1_EIGHTH, abs=1e-12)
    assert sum(probs.probs) == 1.0

    mirror = closed_form_k2([0.125, 1.0])
    assert mirror.probs == pytest.approx(probs.probs[::-1], abs=1e-12)


@pytest.mark.parametrize("a1, a2", [(1.0, 2.0), (0.3, 5.0), (40.0, 0.02), (1.0, 1.01)])
def test_k2_matches_printed_expression(a1, a2):
    assert closed_form_k2([a1, a2])[0] == pytest.approx(printed_pr_first_k2(a1, a2), abs=1e-9)


@pytest.mark.parametrize("alphas", [(1.0, 2.0, 3.0), (0.3, 5.0, 0.05), (7.0, 1.0, 2.5), (1.0, 0.125, 1.5)])
def test_k3_matches_printed_expression(alphas):
    probs = closed_form_k3(alphas)
    assert probs[0] == pytest.approx(printed_pr_first_k3(*alphas), abs=1e-9)
    # The second entry is the first expression with users 1 and 2 swapped
    a1, a2, a3 = alphas
    assert probs[1] == pytest.approx(printed_pr_first_k3(a2, a1, a3), abs=1e-9)


def test_k3_all_equal_gives_thirds():
    assert closed_form_k3([1.0, 1.0, 1.0]).probs == pytest.approx([1 / 3] * 3, abs=1e-15)


def test_k3_near_equal_pair_falls_back_to_quadrature():
    alphas = [1.0, 1.0 + 1e-9, 2.0]
    probs = closed_form_k3(alphas)
    assert probs.fallback
    assert sum(probs.probs) == pytest.approx(1.0, abs=1e-12)
    for k in range(3):
        assert probs[k] == pytest.approx(quadrature_selection(alphas, k), abs=1e-8)


def test_fig2_probabilities(fig_scenario):
    probs = closed_form_k3(fig_scenario("fig2").alphas)
    assert not probs.fallback
    assert probs.probs == pytest.approx([0.1538, 0.6924, 0.1538], abs=0.005)
    assert sum(probs.probs) == pytest.approx(1.0, abs=1e-15)


def test_fig3_probabilities(fig_scenario):
    probs = closed_form_k3(fig_scenario("fig3").alphas)
    assert probs.probs == pytest.approx([0.4565, 0.087, 0.4565], abs=0.005)


@pytest.mark.parametrize("name", ["fig1", "fig4"])
def test_fair_figures_are_near_thirds(fig_scenario, name):
    assert closed_form_k3(fig_scenario(name).alphas).probs == pytest.approx([1 / 3] * 3, abs=0.01)


def test_k3_third_entry_agrees_with_quadrature():
    # Validates the index-swapped second entry through the complement
    alphas = [0.7, 3.0, 0.2]
    probs = closed_form_k3(alphas)
    assert probs[2] == pytest.approx(quadrature_selection(alphas, 2), abs=1e-9)


def test_wrong_length_is_rejected():
    with pytest.raises(DomainError):
        closed_form_k2([1.0, 2.0, 3.0])
    with pytest.raises(DomainError):
        closed_form_k3([1.0, 2.0])


def test_closed_form_agrees_with_quadrature_on_random_vectors():
    rng = np.random.default_rng(17)
    checked = 0
    while checked < 200:
        k = int(rng.integers(2, 4))
        alphas = (10.0 ** rng.uniform(-2, 2, size=k)).tolist()
        if min(relative_gap(a, b) for i, a in enumerate(alphas) for b in alphas[i + 1:]) <= 1e-6:
            continue
        closed = closed_form_k2(alphas) if k == 2 else closed_form_k3(alphas)
        for i in range(k):
            assert closed[i] == pytest.approx(quadrature_selection(alphas, i), abs=1e-8)
        checked += 1


def test_coalescence_is_continuous_and_tends_to_half():
    previous = None
    for eps in np.logspace(-3, -9, 61):
        alphas = [1.0, 1.0 + eps]
        closed = closed_form_k2(alphas)[0]
        quadrature = quadrature_selection(alphas, 0)
        assert closed == pytest.approx(quadrature, abs=1e-6)
        if previous is not None:
            assert abs(closed - previous) < 1e-3 * 0.2
        previous = closed
    assert previous == pytest.approx(0.5, abs=1e-6)


def test_switching_threshold_has_no_jump():
    tau = 1e-6
    just_above = closed_form_k2([1.0, 1.0 + 1.0001 * tau])[0]
    just_below = closed_form_k2([1.0, 1.0 + 0.9999 * tau])[0]
    assert abs(just_above - just_below) < 1e-6
