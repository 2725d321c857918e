import itertools
from typing import *

import numpy as np
import pandas as pd
from sklearn.metrics import adjusted_rand_score

from elitenet.analysis.domain import ConfusionMatrix, Labeling
from elitenet.exceptions import DomainError


def common_nodes(a: Labeling, b: Labeling) -> List[str]:
    return sorted(set(a.assignments) & set(b.assignments))


def confusion_matrix(a: Labeling, b: Labeling) -> ConfusionMatrix:
    """
    Compare two classifications on the nodes they share.

    The components of b are permuted to put as much mass as possible on the diagonal, trying every
    permutation; the identity wins ties.

    :param a: reference labeling, rows
    :param b: compared labeling, columns
    :return: counts over common nodes
    """
    if a.K != b.K:
        raise DomainError('labelings have different K ({} vs {})'.format(a.K, b.K))
    nodes = common_nodes(a, b)
    if not nodes:
        raise DomainError('labelings share no node')

    K = a.K
    raw = np.zeros((K, K), dtype=int)
    for label in nodes:
        raw[a.assignments[label] - 1, b.assignments[label] - 1] += 1

    best, best_trace = None, -1
    for perm in itertools.permutations(range(K)):
        # column perm[g] of the result holds b's component g
        trace = sum(raw[perm[g], g] for g in range(K))
        if trace > best_trace:
            best, best_trace = perm, trace
    counts = np.zeros_like(raw)
    for g in range(K):
        counts[:, best[g]] = raw[:, g]
    return ConfusionMatrix(counts=counts, permutation=best)


def adjusted_rand(a: Labeling, b: Labeling) -> float:
    nodes = common_nodes(a, b)
    if not nodes:
        raise DomainError('labelings share no node')
    return float(adjusted_rand_score([a.assignments[x] for x in nodes], [b.assignments[x] for x in nodes]))


def confusion_frame(matrix: ConfusionMatrix) -> pd.DataFrame:
    """Long-form table: one row per cell with count and fraction."""
    K = matrix.counts.shape[0]
    rows = [(r + 1, c + 1, int(matrix.counts[r, c]), float(matrix.fractions[r, c]))
            for r in range(K) for c in range(K)]
    return pd.DataFrame(rows, columns=['baseline_component', 'criterion_component', 'count', 'fraction'])


def read_labeling_csv(path, K: int = None) -> Labeling:
    """
    Read a `node,component` CSV.

    :param path: file path
    :param K: number of components, defaults to the largest component found
    :return: labeling
    """
    frame = pd.read_csv(path, dtype={'node': str, 'component': int})
    assignments = dict(zip(frame['node'], frame['component'].astype(int)))
    return Labeling(assignments, K if K is not None else int(frame['component'].max()))
