import functools
import logging
from collections import OrderedDict
from typing import *

from elitenet.analysis.confusion import adjusted_rand, confusion_matrix
from elitenet.analysis.domain import CriterionReport, Labeling, Overlap
from elitenet.exceptions import DomainError, StageError
from elitenet.model.domain import ModelConfig
from elitenet.network.domain import EliteCriterion, TweetRecord
from elitenet.network.elite import select_elites
from elitenet.network.graph import induced_subgraph, network_stats, remove_isolates
from elitenet.seeding import derive_seed
from elitenet.solver.actor_solver import fit, run_all
from elitenet.solver.domain import McmcConfig, RunCriterion

logger = logging.getLogger(__name__)


def run_criterion(criterion_id: str, criterion: EliteCriterion, records: List[TweetRecord],
                  edges: List[Tuple[str, str]], model: ModelConfig, mcmc: McmcConfig, seed: int) -> CriterionReport:
    """
    Extract elites with one criterion, build their follow network and fit the model on it.

    :return: report without comparison to the baseline
    """
    try:
        selection = select_elites(records, criterion)
        build = induced_subgraph(edges, selection.authors)
        g, removed = remove_isolates(build.graph)
        logger.info('criterion %s: %d elites, %d nodes after removing %d isolates',
                    criterion_id, len(selection.authors), g.n, len(removed))
        result = fit(g, model, mcmc, derive_seed(seed, 'criterion-{}'.format(criterion_id)))
        return CriterionReport(criterion_id=criterion_id, criterion=criterion, n_elites=len(selection.authors),
                               n_qualifying_tweets=len(selection.qualifying_tweets), stats=network_stats(g),
                               removed_isolates=removed, summary=result.summary, graph=g)
    except StageError:
        raise
    except Exception as e:
        raise StageError('criterion={}'.format(criterion_id), e) from e


def compare(baseline: CriterionReport, report: CriterionReport) -> CriterionReport:
    a = Labeling.from_summary(baseline.summary)
    b = Labeling.from_summary(report.summary)
    report.overlap = Overlap.between(a.assignments, b.assignments)
    if report.overlap.common:
        report.confusion = confusion_matrix(a, b)
        report.adjusted_rand = adjusted_rand(a, b)
    else:
        logger.warning('criterion %s shares no node with baseline %s', report.criterion_id, baseline.criterion_id)
    return report


def robustness_sweep(records: List[TweetRecord], edges: List[Tuple[str, str]],
                     criteria: Mapping[str, EliteCriterion], model: ModelConfig, mcmc: McmcConfig,
                     seed: int, baseline: str = 'main', threads: int = 1) -> Dict[str, CriterionReport]:
    """
    Repeat extraction and fit for every criterion and compare each classification with the baseline one.

    :param records: tweet records
    :param edges: follow rows over all users
    :param criteria: criterion id -> criterion, the baseline included
    :param model: model settings shared by all criteria
    :param mcmc: sampler settings shared by all criteria
    :param seed: master seed
    :param baseline: id of the reference criterion
    :param threads: criteria fitted at the same time
    :return: reports in criterion order
    """
    if baseline not in criteria:
        raise DomainError('baseline criterion {!r} is not among {}'.format(baseline, ', '.join(criteria)))
    job = functools.partial(_job, records=records, edges=edges, model=model, mcmc=mcmc, seed=seed)
    messages = [RunCriterion(criterion_id=cid, criterion=c, job=job) for cid, c in criteria.items()]
    reports = OrderedDict((r.criterion_id, r) for r in run_all(messages, threads, name='criterion'))

    reference = reports[baseline]
    for cid, report in reports.items():
        if cid != baseline:
            compare(reference, report)
    return reports


def _job(criterion_id, criterion, records, edges, model, mcmc, seed):
    return run_criterion(criterion_id, criterion, records, edges, model, mcmc, seed)
