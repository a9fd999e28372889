from django.tasks import task
import logging

from catalog.registry import resolve
from utils.config import RunConfig

from .runner import run_case

logger = logging.getLogger(__name__)


@task()
def run_case_task(selector, config):
    """
    Native Django task running one catalog case.
    Takes the selector and a RunConfig dump so the arguments stay JSON-serializable.
    """
    report = run_case(resolve(selector), RunConfig(**config))
    return report.as_dict()
