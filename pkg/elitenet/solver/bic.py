"""
Approximate BIC of a fitted latent cluster random effects model.

The criterion adds a BIC for the edge model, evaluated at the posterior point estimate of positions and
random effects with the intercept maximized, to a BIC of a spherical Gaussian mixture fitted to those
point positions. A BIC of the sender and receiver effect distributions is added; it does not depend on K.
Smaller values are better.
"""
import logging
import math
from typing import *

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.stats import norm
from sklearn.mixture import GaussianMixture

from elitenet.model.domain import ModelConfig
from elitenet.model.likelihood import distance_matrix, dyad_terms
from elitenet.network.domain import DirectedGraph
from elitenet.solver.domain import BicTerms, PosteriorSummary

logger = logging.getLogger(__name__)

MIXTURE_REG_COVAR = 1e-6
MIXTURE_RESTARTS = 5
EFFECT_VAR_FLOOR = 1e-12


def logit_parameter_count(n: int, d: int) -> int:
    """Intercept plus positions up to a rigid motion."""
    return max(1, 1 + n * d - d * (d + 1) // 2)


def mixture_parameter_count(K: int, d: int) -> int:
    """Weights, means and one spherical variance per component."""
    return (K - 1) + K * d + K


def max_intercept_log_likelihood(g: DirectedGraph, positions: np.ndarray, delta: np.ndarray,
                                 gamma: np.ndarray) -> Tuple[float, float]:
    """
    Bernoulli log-likelihood of the graph maximized over the intercept, everything else fixed.

    :return: (maximizing beta0, log-likelihood)
    """
    y = g.adjacency()
    offset = -distance_matrix(positions) + delta[:, None] + gamma[None, :]
    mask = ~np.eye(g.n, dtype=bool)

    def negative(beta):
        return -float(dyad_terms(y, beta + offset)[mask].sum())

    res = minimize_scalar(negative, bracket=(-10.0, 10.0), method='brent')
    return float(res.x), -float(res.fun)


def mixture_bic(positions: np.ndarray, K: int, seed: int = 0) -> float:
    """
    BIC of a spherical Gaussian mixture fitted by EM to the point positions.

    :param positions: n x d points
    :param K: number of components
    :param seed: EM initialization seed
    :return: -2 log-likelihood + parameter count * log n
    """
    n, d = positions.shape
    gm = GaussianMixture(n_components=K, covariance_type='spherical', reg_covar=MIXTURE_REG_COVAR,
                         n_init=MIXTURE_RESTARTS, random_state=seed % (2 ** 32))
    gm.fit(positions)
    log_likelihood = float(gm.score(positions)) * n
    return -2 * log_likelihood + mixture_parameter_count(K, d) * math.log(n)


def effects_bic(effects: np.ndarray) -> float:
    n = len(effects)
    var = float(np.mean(effects ** 2)) if n else 0.0
    if var <= EFFECT_VAR_FLOOR:
        return math.log(n) if n else 0.0
    return -2 * float(norm.logpdf(effects, 0.0, math.sqrt(var)).sum()) + math.log(n)


def bic_terms(g: DirectedGraph, summary: PosteriorSummary, c: ModelConfig, seed: int = 0) -> BicTerms:
    n = g.n
    _, ll = max_intercept_log_likelihood(g, summary.point_positions, summary.delta_mean, summary.gamma_mean)
    logit = -2 * ll + logit_parameter_count(n, c.d) * math.log(n * (n - 1))
    mixture = mixture_bic(summary.point_positions, c.K, seed)
    effects = effects_bic(summary.delta_mean) + effects_bic(summary.gamma_mean)
    terms = BicTerms(logit=logit, mixture=mixture, effects=effects)
    logger.info('BIC K=%d: logit=%.2f mixture=%.2f effects=%.2f total=%.2f',
                c.K, logit, mixture, effects, terms.total)
    return terms


def bic_for(g: DirectedGraph, summary: PosteriorSummary, c: ModelConfig, seed: int = 0) -> float:
    """Approximate BIC, smaller is better."""
    return bic_terms(g, summary, c, seed).total
