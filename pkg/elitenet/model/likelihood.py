import math
from typing import *

import numpy as np
from scipy.spatial.distance import cdist
from scipy.special import expit, gammaln, xlogy
from scipy.stats import invgamma, norm

from elitenet.exceptions import DomainError, ShapeError
from elitenet.model.domain import ModelConfig, ParameterState
from elitenet.network.domain import DirectedGraph

NEG_INF = float('-inf')


def edge_logit(s: ParameterState, i: int, j: int) -> float:
    """
    Log-odds of an edge i -> j: beta0 - |z_i - z_j| + delta_i + gamma_j.
    """
    if i == j:
        raise DomainError('edge_logit undefined for i == j ({})'.format(i))
    if not (0 <= i < s.n and 0 <= j < s.n):
        raise DomainError('node index out of range')
    return s.beta0 - float(np.linalg.norm(s.Z[i] - s.Z[j])) + s.delta[i] + s.gamma[j]


def distance_matrix(Z: np.ndarray) -> np.ndarray:
    return cdist(Z, Z)


def logit_matrix(s: ParameterState, distances: np.ndarray = None) -> np.ndarray:
    """Matrix of edge log-odds for every ordered pair; the diagonal is meaningless."""
    if distances is None:
        distances = distance_matrix(s.Z)
    return s.beta0 - distances + s.delta[:, None] + s.gamma[None, :]


def dyad_terms(y: np.ndarray, eta: np.ndarray) -> np.ndarray:
    """Bernoulli log-likelihood y*eta - log(1 + exp(eta)), stable for any eta."""
    return y * eta - np.logaddexp(0.0, eta)


def log_likelihood(s: ParameterState, g: DirectedGraph) -> float:
    """
    Bernoulli log-likelihood of the directed graph over all ordered pairs i != j.

    :param s: model state
    :param g: follow network with the same number of nodes
    :return: log-likelihood
    """
    if s.n != g.n:
        raise ShapeError('state has {} nodes, graph has {}'.format(s.n, g.n))
    terms = dyad_terms(g.adjacency(), logit_matrix(s))
    return float(terms[~np.eye(s.n, dtype=bool)].sum())


def spherical_normal_logpdf(x: np.ndarray, mean: np.ndarray, var) -> np.ndarray:
    """
    Row-wise log-density of N(mean, var * I).

    :param x: points, shape (m, d)
    :param mean: centers, shape (m, d) or (d,)
    :param var: variances, scalar or shape (m,)
    :return: log-densities, shape (m,)
    """
    x = np.atleast_2d(x)
    d = x.shape[1]
    var = np.asarray(var, dtype=float)
    sq = ((x - mean) ** 2).sum(axis=1)
    return -0.5 * d * np.log(2 * math.pi * var) - 0.5 * sq / var


def log_prior_terms(s: ParameterState, c: ModelConfig) -> Dict[str, float]:
    """
    Log prior density split by block.

    :param s: model state
    :param c: model settings holding the hyperparameters
    :return: mapping block name -> log-density, possibly -inf
    """
    if s.d != c.d or s.K != c.K:
        raise ShapeError('state has d={}, K={} but config has d={}, K={}'.format(s.d, s.K, c.d, c.K))
    if (s.variances <= 0).any() or s.sigma2_delta <= 0 or s.sigma2_gamma <= 0:
        raise DomainError('all variances must be positive')

    K, d = s.K, s.d
    with np.errstate(divide='ignore'):
        log_weights = np.log(s.weights)
        terms = {
            'positions': float(spherical_normal_logpdf(s.Z, s.means[s.memberships], s.variances[s.memberships]).sum()),
            'memberships': float(log_weights[s.memberships].sum()) if s.n else 0.0,
            'weights': float(gammaln(K * c.dirichlet) - K * gammaln(c.dirichlet)
                             + xlogy(c.dirichlet - 1.0, s.weights).sum()),
            'means': float(spherical_normal_logpdf(s.means, np.zeros(d), c.mean_prior_scale * s.variances).sum()),
            'variances': float(invgamma.logpdf(s.variances, c.mixture_var_shape, scale=c.mixture_var_scale).sum()),
            'delta': float(norm.logpdf(s.delta, 0.0, math.sqrt(s.sigma2_delta)).sum()),
            'gamma': float(norm.logpdf(s.gamma, 0.0, math.sqrt(s.sigma2_gamma)).sum()),
            'sigma2_delta': float(invgamma.logpdf(s.sigma2_delta, c.sender_var_shape, scale=c.sender_var_scale)),
            'sigma2_gamma': float(invgamma.logpdf(s.sigma2_gamma, c.receiver_var_shape, scale=c.receiver_var_scale)),
            'beta0': float(norm.logpdf(s.beta0, c.beta_mean, math.sqrt(c.beta_var))),
        }
    return terms


def log_prior(s: ParameterState, c: ModelConfig) -> float:
    terms = log_prior_terms(s, c)
    if any(v == NEG_INF for v in terms.values()):
        return NEG_INF
    return float(sum(terms.values()))


def log_posterior(s: ParameterState, g: DirectedGraph, c: ModelConfig) -> float:
    lp = log_prior(s, c)
    if lp == NEG_INF:
        return NEG_INF
    return log_likelihood(s, g) + lp


def sample_network(s: ParameterState, rng_seed: int, labels: Sequence[str] = None) -> DirectedGraph:
    """
    Draw a follow network from the model, every ordered pair independently.

    :param s: generating state
    :param rng_seed: seed of the Bernoulli draws
    :param labels: node labels, defaults to v0..v{n-1}
    :return: sampled graph
    """
    rng = np.random.default_rng(rng_seed)
    p = expit(logit_matrix(s))
    draws = rng.random((s.n, s.n)) < p
    np.fill_diagonal(draws, False)
    rows, cols = np.nonzero(draws)
    labels = labels if labels is not None else ['v{}'.format(i) for i in range(s.n)]
    return DirectedGraph(labels, zip(rows.tolist(), cols.tolist()))
