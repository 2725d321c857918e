import logging

from pykka import ThreadingActor

from elitenet.solver.domain import RunChain, RunCriterion
from elitenet.solver.mcmc import run_chain

logger = logging.getLogger(__name__)


class Worker(ThreadingActor):
    """Runs one independent job per message: a chain, or one criterion of a robustness sweep."""

    def __init__(self, name: str):
        super().__init__()
        self.name = name
        self.handled = []

    def on_receive(self, message):
        """
        Mail box of actor.

        :param message: job to run
        :return: job result, exceptions are handed back to the asking side
        """
        if isinstance(message, RunChain):
            self.handled.append('chain-{}'.format(message.index))
            logger.info('%s: chain %d started', self.name, message.index)
            return run_chain(message.graph, message.model, message.mcmc, message.init, seed=message.seed)
        elif isinstance(message, RunCriterion):
            self.handled.append('criterion-{}'.format(message.criterion_id))
            logger.info('%s: criterion %s started', self.name, message.criterion_id)
            return message.job(message.criterion_id, message.criterion)
        raise TypeError('unexpected message {!r}'.format(type(message).__name__))
