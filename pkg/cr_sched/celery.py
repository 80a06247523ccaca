# cr_sched/celery.py

'''
Configure the Celery application that executes Monte Carlo trial blocks:
- Broker and result backend from settings (CR_SCHED_CELERY_*)
- Connection retry policy for broker failures
- Late acknowledgement and prefetch of one block per worker
- JSON-only serialisation so tallies travel as plain lists
'''
from celery import Celery

from cr_sched.core.config import settings

celery_app = Celery(
    'cr_sched',
    broker=str(settings.celery_broker_url),
    backend=str(settings.celery_result_backend),
    broker_connection_retry=True,          # Retry connecting to broker on startup
    broker_connection_max_retries=5,       # Maximum connection retry attempts
)

celery_app.conf.task_serializer = 'json'
celery_app.conf.result_serializer = 'json'
celery_app.conf.accept_content = ['json']

# A block is pure given its inputs, so re-running it after a worker crash is safe
celery_app.conf.task_acks_late = True
celery_app.conf.worker_prefetch_multiplier = 1
celery_app.conf.task_default_max_retries = 3

celery_app.conf.timezone = 'UTC'

# Import tasks to register them with Celery
import cr_sched.tasks.simulate  # noqa: E402,F401
