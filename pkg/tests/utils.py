import os
import unittest
from typing import *

import numpy as np

from elitenet.model.domain import ModelConfig, ParameterState
from elitenet.model.likelihood import sample_network
from elitenet.network.domain import DirectedGraph, TweetRecord
from elitenet.solver.domain import McmcConfig, PosteriorSummary

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures', 'published')

slow = unittest.skipUnless(os.environ.get('ELITENET_SLOW') == '1', 'set ELITENET_SLOW=1 to run statistical studies')


def fixture(name: str) -> str:
    return os.path.join(FIXTURES, name)


def requires_fixture(*names: str):
    missing = [n for n in names if not os.path.exists(fixture(n))]
    return unittest.skipIf(missing, 'published fixture missing: {}'.format(', '.join(missing)))


def random_state(n: int = 5, d: int = 2, K: int = 2, seed: int = 0) -> ParameterState:
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.full(K, 3.0))
    return ParameterState(beta0=float(rng.normal()), Z=rng.normal(size=(n, d)),
                          delta=rng.normal(scale=0.5, size=n), gamma=rng.normal(scale=0.5, size=n),
                          sigma2_delta=float(rng.uniform(0.5, 2)), sigma2_gamma=float(rng.uniform(0.5, 2)),
                          weights=weights / weights.sum(), means=rng.normal(size=(K, d)),
                          variances=rng.uniform(0.5, 2, size=K), memberships=rng.integers(0, K, size=n))


def homogeneous_state(n: int, d: int = 2, beta0: float = 0.0) -> ParameterState:
    """All nodes at the origin, no random effects, one component."""
    return ParameterState(beta0=beta0, Z=np.zeros((n, d)), delta=np.zeros(n), gamma=np.zeros(n),
                          sigma2_delta=1.0, sigma2_gamma=1.0, weights=np.ones(1), means=np.zeros((1, d)),
                          variances=np.ones(1), memberships=np.zeros(n, dtype=int))


def two_cluster_state(n_per: int = 10, separation: float = 6.0, spread: float = 0.5, beta0: float = 2.0,
                      seed: int = 0) -> ParameterState:
    """Two well separated groups of positions on the first axis."""
    rng = np.random.default_rng(seed)
    n = 2 * n_per
    memberships = np.repeat([0, 1], n_per)
    means = np.array([[-separation / 2, 0.0], [separation / 2, 0.0]])
    Z = means[memberships] + spread * rng.standard_normal((n, 2))
    return ParameterState(beta0=beta0, Z=Z, delta=np.zeros(n), gamma=np.zeros(n),
                          sigma2_delta=1.0, sigma2_gamma=1.0, weights=np.array([0.5, 0.5]), means=means,
                          variances=np.full(2, spread ** 2), memberships=memberships)


def two_cluster_graph(n_per: int = 10, seed: int = 0) -> DirectedGraph:
    s = two_cluster_state(n_per, seed=seed)
    labels = ['a{}'.format(i) for i in range(n_per)] + ['b{}'.format(i) for i in range(n_per)]
    return sample_network(s, seed, labels)


def clique(prefix: str, size: int) -> List[Tuple[str, str]]:
    labels = ['{}{}'.format(prefix, i) for i in range(size)]
    return [(a, b) for a in labels for b in labels if a != b]


def quick_mcmc(n_iterations: int = 300, burn_in: int = 100, thinning: int = 2, n_chains: int = 2) -> McmcConfig:
    return McmcConfig(n_iterations=n_iterations, burn_in=burn_in, thinning=thinning, n_chains=n_chains,
                      adapt_window=25)


def record(tweet_id, author, likes=0, replies=0, retweets=0, created_at='2021-03-01T12:00:00Z') -> TweetRecord:
    return TweetRecord(tweet_id=str(tweet_id), author=author, likes=likes, replies=replies, retweets=retweets,
                       language='de', created_at=created_at)


def summary_for(labels: Sequence[str], probs: Sequence[Sequence[float]], positions=None) -> PosteriorSummary:
    n = len(labels)
    return PosteriorSummary(labels=labels,
                            point_positions=positions if positions is not None else np.arange(2 * n).reshape(n, 2),
                            membership_probs=np.asarray(probs, dtype=float), beta0_mean=0.0,
                            beta0_interval=(-1.0, 1.0), delta_mean=np.zeros(n), gamma_mean=np.zeros(n),
                            draw_count=10)


def assert_state(self, expected: ParameterState, result: ParameterState, places: int = 9):
    self.assertAlmostEqual(expected.beta0, result.beta0, places, 'beta0 differs')
    for name in ('Z', 'delta', 'gamma', 'weights', 'means', 'variances'):
        np.testing.assert_allclose(getattr(result, name), getattr(expected, name), atol=10 ** -places,
                                   err_msg='{} differs'.format(name))
    np.testing.assert_array_equal(expected.memberships, result.memberships, 'memberships differ')
