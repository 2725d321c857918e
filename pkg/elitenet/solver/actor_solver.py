import logging
from collections import OrderedDict
from typing import *

import numpy as np

from elitenet.exceptions import DomainError, StageError
from elitenet.model.domain import ModelConfig
from elitenet.network.domain import DirectedGraph
from elitenet.seeding import derive_seed
from elitenet.solver.actor import Worker
from elitenet.solver.bic import bic_terms
from elitenet.solver.domain import *
from elitenet.solver.initialize import initialize
from elitenet.solver.posterior import align_draws, canonical_partition, diagnostics, relabel_components, summarize

logger = logging.getLogger(__name__)


def run_all(messages: List[Any], threads: int = 1, name: str = 'worker') -> List[Any]:
    """
    Run jobs on at most `threads` concurrent actors.

    :param messages: RunChain or RunCriterion messages
    :param threads: number of actors alive at the same time
    :param name: actor name prefix
    :return: results in message order, whatever the completion order
    """
    threads = max(1, threads)
    results = []
    for start in range(0, len(messages), threads):
        batch = messages[start:start + threads]
        workers = [Worker.start(name='{}-{}'.format(name, start + k)) for k in range(len(batch))]
        try:
            futures = [w.ask(m, block=False) for w, m in zip(workers, batch)]
            results += [f.get() for f in futures]
        finally:
            for w in workers:
                w.stop()
    return results


def fit(g: DirectedGraph, model: ModelConfig, mcmc: McmcConfig, seed: int, threads: int = 1) -> FitResult:
    """
    Fit the model: initialize, run chains concurrently, align, relabel, summarize and score.

    :param g: follow network without isolates
    :param model: model settings
    :param mcmc: sampler settings
    :param seed: master seed, per-chain seeds are derived from it
    :param threads: concurrent chains
    :return: posterior summary with BIC, raw chains and the initial state
    """
    if model.K > g.n:
        raise DomainError('K={} exceeds the number of nodes {}'.format(model.K, g.n))
    init = initialize(g, model, derive_seed(seed, 'init'))
    messages = [RunChain(index=k, graph=g, model=model, mcmc=mcmc, init=init, seed=derive_seed(seed, 'chain-{}'.format(k)))
                for k in range(mcmc.n_chains)]
    chains = run_all(messages, threads, name='chain')

    draws = [d for c in chains for d in c.draws]
    posteriors = [lp for c in chains for lp in c.log_posteriors]
    if not draws:
        raise DomainError('no draws retained, check n_iterations, burn_in and thinning')
    best = int(np.argmax(posteriors))

    aligned, _ = align_draws(draws, log_posteriors=posteriors)
    relabelled = relabel_components(aligned, canonical_partition(draws[best].memberships))
    summary = summarize(relabelled, g.nodes)
    summary.acceptance_rates = {b: float(np.mean([c.acceptance_rates[b] for c in chains]))
                                for b in sorted(chains[0].acceptance_rates)}
    summary.diagnostics = diagnostics([[d.beta0 for d in c.draws] for c in chains],
                                      [c.log_likelihoods for c in chains])

    terms = bic_terms(g, summary, model, derive_seed(seed, 'mixture-bic'))
    summary.bic = terms.total
    return FitResult(summary=summary, chains=chains, init=init, bic_terms=terms, aligned_draws=relabelled)


def select_k(g: DirectedGraph, base: ModelConfig, k_range: Iterable[int], mcmc: McmcConfig, seed: int,
             threads: int = 1) -> Tuple[int, Dict[int, float]]:
    """
    Choose the number of clusters by approximate BIC.

    Every K is fitted with the same master seed.

    :return: best K (smallest BIC, ties to the smaller K) and the K -> BIC table
    """
    ks = sorted(set(k_range))
    if not ks:
        raise DomainError('empty K range')
    table = OrderedDict()
    for k in ks:
        try:
            table[k] = fit(g, base.model_copy(update={'K': k}), mcmc, seed, threads).summary.bic
        except Exception as e:
            raise StageError('K={}'.format(k), e) from e
    best = min(ks, key=lambda k: (table[k], k))
    logger.info('selected K=%d', best)
    return best, table
