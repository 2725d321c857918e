import logging
from typing import *

import numpy as np
from scipy.special import logit
from sklearn.cluster import KMeans

from elitenet.exceptions import DomainError
from elitenet.model.domain import ModelConfig, ParameterState
from elitenet.model.likelihood import distance_matrix
from elitenet.network.domain import DirectedGraph
from elitenet.network.graph import geodesic_matrix

logger = logging.getLogger(__name__)

KMEANS_RESTARTS = 10


def classical_mds(D: np.ndarray, d: int) -> np.ndarray:
    """
    Classical (Torgerson) multidimensional scaling.

    :param D: symmetric n x n distance matrix
    :param d: number of output dimensions
    :return: n x d configuration; dimensions beyond the number of positive eigenvalues are zero
    """
    n = len(D)
    H = np.eye(n) - np.ones((n, n)) / n
    B = -H.dot(D ** 2).dot(H) / 2

    evals, evecs = np.linalg.eigh(B)
    idx = np.argsort(evals)[::-1]
    evals = evals[idx]
    evecs = evecs[:, idx]

    Y = np.zeros((n, d))
    k = min(d, int((evals > 1e-10).sum()))
    if k:
        Y[:, :k] = evecs[:, :k] * np.sqrt(evals[:k])
    # eigenvector signs are arbitrary, fix them so the largest entry is positive
    for j in range(k):
        if Y[np.argmax(np.abs(Y[:, j])), j] < 0:
            Y[:, j] = -Y[:, j]
    return Y


def kmeans_partition(Z: np.ndarray, K: int, seed: int) -> np.ndarray:
    """
    Best of several seeded k-means runs by within-cluster sum of squares.

    :return: 0-based labels
    """
    if K == 1:
        return np.zeros(len(Z), dtype=int)
    km = KMeans(n_clusters=K, n_init=KMEANS_RESTARTS, random_state=seed % (2 ** 32))
    return km.fit_predict(Z).astype(int)


def mixture_from_partition(Z: np.ndarray, labels: np.ndarray, K: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Weights, means and spherical variances of a hard partition.

    Empty or single-point components take the pooled spherical variance.
    """
    n, d = Z.shape
    pooled = float(((Z - Z.mean(axis=0)) ** 2).sum() / max(n * d, 1))
    pooled = pooled if pooled > 0 else 1.0

    weights = np.zeros(K)
    means = np.zeros((K, d))
    variances = np.full(K, pooled)
    for g in range(K):
        members = Z[labels == g]
        weights[g] = len(members) / n
        if len(members):
            means[g] = members.mean(axis=0)
        if len(members) > 1:
            var = float(((members - means[g]) ** 2).sum() / (len(members) * d))
            if var > 0:
                variances[g] = var
    return weights, means, variances


def initialize(g: DirectedGraph, c: ModelConfig, seed: int) -> ParameterState:
    """
    Starting state: MDS of the geodesic matrix, k-means memberships, zero random effects and an
    intercept matching the observed density at the mean latent distance.

    :param g: follow network
    :param c: model settings
    :param seed: k-means seed
    :return: initial state
    """
    if g.n < c.K:
        raise DomainError('need at least K={} nodes, graph has {}'.format(c.K, g.n))

    Z = classical_mds(geodesic_matrix(g), c.d)
    labels = kmeans_partition(Z, c.K, seed)
    weights, means, variances = mixture_from_partition(Z, labels, c.K)

    n = g.n
    pairs = n * (n - 1)
    if pairs:
        observed = len(g.edges) / pairs
        observed = min(max(observed, 0.5 / pairs), 1 - 0.5 / pairs)
        mean_distance = float(distance_matrix(Z)[~np.eye(n, dtype=bool)].mean())
        beta0 = float(logit(observed)) + mean_distance
    else:
        beta0 = c.beta_mean

    logger.info('initialized n=%d d=%d K=%d beta0=%.3f', n, c.d, c.K, beta0)
    return ParameterState(beta0=beta0, Z=Z, delta=np.zeros(n), gamma=np.zeros(n),
                          sigma2_delta=1.0, sigma2_gamma=1.0,
                          weights=weights, means=means, variances=variances, memberships=labels)
