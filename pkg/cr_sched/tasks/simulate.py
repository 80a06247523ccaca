'''
Celery task running one Monte Carlo trial block on a worker.
'''

from cr_sched.celery import celery_app
from cr_sched.core.logger import logger
from cr_sched.schemas import Scenario
from cr_sched.simulator import run_block


@celery_app.task(name='cr_sched.tasks.simulate_block')
def simulate_block(scenario: dict, block: int, trials: int) -> dict:
    """
    Celery task entry point: rebuilds the scenario and returns the block's tallies.
    """
    tally = run_block(Scenario.model_validate(scenario), block, trials)
    logger.debug("Block %d finished (%d trials)", block, trials)
    return tally.model_dump(mode="json")
