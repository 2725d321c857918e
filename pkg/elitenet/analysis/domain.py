from typing import *

import numpy as np

from elitenet.exceptions import DomainError
from elitenet.network.domain import DTO, DirectedGraph, EliteCriterion, NetworkStats
from elitenet.solver.domain import PosteriorSummary


class Labeling(DTO):
    """Hard classification of nodes, components numbered 1..K."""

    def __init__(self, assignments: Mapping[str, int], K: int):
        if K < 1:
            raise DomainError('K must be at least 1')
        bad = [label for label, g in assignments.items() if not 1 <= g <= K]
        if bad:
            raise DomainError('components must be in 1..{}, offending nodes: {}'.format(K, ', '.join(sorted(bad)[:5])))
        self.assignments = dict(assignments)
        self.K = K

    @staticmethod
    def from_summary(summary: PosteriorSummary) -> 'Labeling':
        components = summary.map_memberships() + 1
        return Labeling({label: int(g) for label, g in zip(summary.labels, components)}, summary.K)


class ConfusionMatrix(DTO):
    """
    Rows follow the first labeling, columns the second after its components were permuted.
    """

    def __init__(self, counts: np.ndarray, permutation: Tuple[int, ...]):
        self.counts = np.asarray(counts, dtype=int)
        self.permutation = tuple(permutation)
        self.common_node_count = int(self.counts.sum())

    __hash__ = None

    def __eq__(self, other):
        return isinstance(other, ConfusionMatrix) and np.array_equal(self.counts, other.counts) \
            and self.permutation == other.permutation

    @property
    def fractions(self) -> np.ndarray:
        return self.counts / self.common_node_count

    @property
    def agreement(self) -> float:
        return float(np.trace(self.counts) / self.common_node_count)

    def to_dict(self) -> Dict[str, Any]:
        return {'counts': self.counts.tolist(), 'fractions': self.fractions.tolist(),
                'common_node_count': self.common_node_count, 'agreement': self.agreement,
                'permutation': [p + 1 for p in self.permutation]}


class Overlap(DTO):
    """Node sets of two labelings, each sorted by label."""

    def __init__(self, common: Sequence[str], only_baseline: Sequence[str], only_criterion: Sequence[str]):
        self.common = sorted(common)
        self.only_baseline = sorted(only_baseline)
        self.only_criterion = sorted(only_criterion)

    @staticmethod
    def between(baseline: Iterable[str], criterion: Iterable[str]) -> 'Overlap':
        a, b = set(baseline), set(criterion)
        return Overlap(common=a & b, only_baseline=a - b, only_criterion=b - a)

    def counts(self) -> Tuple[int, int, int]:
        return len(self.common), len(self.only_baseline), len(self.only_criterion)

    def to_dict(self) -> Dict[str, Any]:
        common, only_baseline, only_criterion = self.counts()
        return {'common': common, 'only_baseline': only_baseline, 'only_criterion': only_criterion,
                'nodes': {'common': self.common, 'only_baseline': self.only_baseline,
                          'only_criterion': self.only_criterion}}


class CriterionReport(DTO):
    def __init__(self, criterion_id: str, criterion: EliteCriterion, n_elites: int, n_qualifying_tweets: int,
                 stats: NetworkStats, removed_isolates: List[str], summary: PosteriorSummary,
                 confusion: ConfusionMatrix = None, overlap: Overlap = None, adjusted_rand: float = None,
                 graph: DirectedGraph = None):
        self.criterion_id = criterion_id
        self.criterion = criterion
        self.n_elites = n_elites
        self.n_qualifying_tweets = n_qualifying_tweets
        self.stats = stats
        self.removed_isolates = removed_isolates
        self.summary = summary
        self.confusion = confusion
        self.overlap = overlap
        self.adjusted_rand = adjusted_rand
        self.graph = graph

    __hash__ = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'criterion_id': self.criterion_id,
            'criterion': self.criterion.to_dict(),
            'description': self.criterion.describe(),
            'n_elites': self.n_elites,
            'n_qualifying_tweets': self.n_qualifying_tweets,
            'network': self.stats.to_dict(),
            'removed_isolates': self.removed_isolates,
            'bic': self.summary.bic,
            'confusion': self.confusion.to_dict() if self.confusion is not None else None,
            'overlap': self.overlap.to_dict() if self.overlap is not None else None,
            'adjusted_rand': self.adjusted_rand,
        }
