import pytest

from cr_sched.cli.scenario import load_scenario
from cr_sched.schemas import Scenario, UserLink


@pytest.fixture
def fig_scenario():
    """Factory: preset scenario with its own trial count and seed."""

    def _make(name: str, trials: int = 1_000_000, seed: int = 7) -> Scenario:
        return load_scenario(name, {"trials": trials, "seed": seed})

    return _make


@pytest.fixture
def two_user_scenario() -> Scenario:
    return Scenario(
        users=[UserLink(d_sd=2.0, d_sp=2.0), UserLink(d_sd=1.5, d_sp=1.5)],
        trials=1_000_000,
        seed=11,
    )


@pytest.fixture
def celery_eager():
    """Run Celery tasks in-process."""
    from cr_sched.celery import celery_app

    celery_app.conf.task_always_eager = True
    yield celery_app
    celery_app.conf.task_always_eager = False
