import math
import unittest

import numpy as np
from scipy.special import expit
from scipy.stats import dirichlet, invgamma, norm

from elitenet.exceptions import DomainError, ParseError, ShapeError
from elitenet.model.domain import ModelConfig, ParameterState
from elitenet.model.likelihood import *
from elitenet.network.domain import DirectedGraph
from tests.utils import assert_state, homogeneous_state, random_state


def random_graph(n: int, seed: int) -> DirectedGraph:
    rng = np.random.default_rng(seed)
    edges = [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < 0.4]
    return DirectedGraph(['v{}'.format(i) for i in range(n)], edges)


class TestEdgeLogit(unittest.TestCase):

    def test_identity_case(self):
        s = homogeneous_state(2)
        self.assertEqual(0.0, edge_logit(s, 0, 1))

    def test_substitution(self):
        s = homogeneous_state(2).replace(beta0=1.5, Z=np.array([[0.0, 0.0], [3.0, 4.0]]),
                                         delta=np.array([0.2, 0.0]), gamma=np.array([0.0, -0.1]))
        self.assertAlmostEqual(-3.4, edge_logit(s, 0, 1), places=12)

    def test_matches_raw_fields(self):
        s = random_state(5, seed=3)
        for i in range(5):
            for j in range(5):
                if i != j:
                    expected = s.beta0 - math.dist(s.Z[i], s.Z[j]) + s.delta[i] + s.gamma[j]
                    self.assertAlmostEqual(expected, edge_logit(s, i, j), places=12)

    def test_undefined_on_diagonal(self):
        with self.assertRaises(DomainError):
            edge_logit(random_state(3), 1, 1)


class TestLogLikelihood(unittest.TestCase):

    def test_all_half(self):
        g = DirectedGraph(['a', 'b', 'c'], [(0, 1), (2, 0)])
        self.assertAlmostEqual(6 * math.log(0.5), log_likelihood(homogeneous_state(3), g), places=6)

    def test_brute_force(self):
        s = random_state(4, seed=11)
        g = random_graph(4, 11)
        y = g.adjacency()
        expected = 0.0
        for i in range(4):
            for j in range(4):
                if i != j:
                    p = expit(edge_logit(s, i, j))
                    expected += math.log(p) if y[i, j] else math.log(1 - p)
        self.assertAlmostEqual(expected, log_likelihood(s, g), delta=1e-10)

    def test_extreme_logit_is_stable(self):
        s = homogeneous_state(2, beta0=-1000.0)
        res = log_likelihood(s, DirectedGraph(['a', 'b']))
        self.assertTrue(math.isfinite(res))
        self.assertAlmostEqual(0.0, res, places=12)

    def test_shape_mismatch(self):
        with self.assertRaises(ShapeError):
            log_likelihood(random_state(4), DirectedGraph(['a', 'b']))

    def test_rigid_motion_invariance(self):
        # Input
        s = random_state(8, d=3, seed=5)
        g = random_graph(8, 5)
        rng = np.random.default_rng(17)

        # Expected
        expected = log_likelihood(s, g)

        # Test
        for _ in range(100):
            Q, R = np.linalg.qr(rng.normal(size=(3, 3)))
            Q = Q * np.sign(np.diag(R))
            if rng.random() < 0.5:
                Q[:, 0] = -Q[:, 0]
            moved = s.replace(Z=s.Z @ Q + rng.normal(scale=5.0, size=3))
            self.assertAlmostEqual(expected, log_likelihood(moved, g), delta=1e-9)

    def test_intercept_and_sender_effects_alias(self):
        s = random_state(6, seed=8)
        g = random_graph(6, 8)
        for c in (-2.5, 0.3, 4.0):
            shifted = s.replace(beta0=s.beta0 + c, delta=s.delta - c)
            self.assertAlmostEqual(log_likelihood(s, g), log_likelihood(shifted, g), delta=1e-9)

    def test_monotone_in_intercept(self):
        s = random_state(5, seed=9)
        complete = DirectedGraph(['v{}'.format(i) for i in range(5)],
                                 [(i, j) for i in range(5) for j in range(5) if i != j])
        empty = DirectedGraph(['v{}'.format(i) for i in range(5)])
        betas = np.linspace(-4, 4, 17)
        on_complete = [log_likelihood(s.replace(beta0=float(b)), complete) for b in betas]
        on_empty = [log_likelihood(s.replace(beta0=float(b)), empty) for b in betas]
        self.assertTrue(all(a < b for a, b in zip(on_complete, on_complete[1:])))
        self.assertTrue(all(a > b for a, b in zip(on_empty, on_empty[1:])))


class TestLogPrior(unittest.TestCase):

    def test_position_at_mean(self):
        s = homogeneous_state(3)
        terms = log_prior_terms(s, ModelConfig(K=1))
        self.assertAlmostEqual(-3 * math.log(2 * math.pi), terms['positions'], places=12)

    def test_term_by_term(self):
        s = random_state(6, d=2, K=3, seed=5)
        c = ModelConfig(K=3)
        terms = log_prior_terms(s, c)

        positions = sum(norm.logpdf(s.Z[i], s.means[s.memberships[i]], math.sqrt(s.variances[s.memberships[i]])).sum()
                        for i in range(6))
        self.assertAlmostEqual(positions, terms['positions'], places=9)
        self.assertAlmostEqual(np.log(s.weights[s.memberships]).sum(), terms['memberships'], places=9)
        self.assertAlmostEqual(dirichlet.logpdf(s.weights, [3.0] * 3), terms['weights'], places=9)
        means = sum(norm.logpdf(s.means[g], 0, math.sqrt(10 * s.variances[g])).sum() for g in range(3))
        self.assertAlmostEqual(means, terms['means'], places=9)
        self.assertAlmostEqual(invgamma.logpdf(s.variances, 2, scale=1).sum(), terms['variances'], places=9)
        self.assertAlmostEqual(norm.logpdf(s.delta, 0, math.sqrt(s.sigma2_delta)).sum(), terms['delta'], places=9)
        self.assertAlmostEqual(norm.logpdf(s.gamma, 0, math.sqrt(s.sigma2_gamma)).sum(), terms['gamma'], places=9)
        self.assertAlmostEqual(norm.logpdf(s.beta0, 0, 3), terms['beta0'], places=9)
        self.assertAlmostEqual(sum(terms.values()), log_prior(s, c), places=9)

    def test_zero_weight_on_occupied_component(self):
        s = random_state(4, K=2, seed=1).replace(weights=np.array([1.0, 0.0]), memberships=np.array([0, 1, 0, 1]))
        self.assertEqual(NEG_INF, log_prior(s, ModelConfig()))
        self.assertEqual(NEG_INF, log_posterior(s, random_graph(4, 0), ModelConfig()))

    def test_nonpositive_variance(self):
        s = random_state(4).replace(variances=np.array([1.0, 0.0]))
        with self.assertRaises(DomainError):
            log_prior(s, ModelConfig())

    def test_config_mismatch(self):
        with self.assertRaises(ShapeError):
            log_prior(random_state(4, K=2), ModelConfig(K=3))

    def test_posterior_is_sum(self):
        s, g, c = random_state(5, seed=2), random_graph(5, 2), ModelConfig()
        self.assertAlmostEqual(log_likelihood(s, g) + log_prior(s, c), log_posterior(s, g, c), places=9)


class TestSampleNetwork(unittest.TestCase):

    def test_empty(self):
        g = sample_network(homogeneous_state(6, beta0=-60.0), 0)
        self.assertEqual(0, len(g.edges))
        self.assertEqual(('v0', 'v1', 'v2', 'v3', 'v4', 'v5'), g.nodes)

    def test_complete(self):
        g = sample_network(homogeneous_state(6, beta0=50.0), 0)
        self.assertEqual(30, len(g.edges))

    def test_density_near_half(self):
        s = homogeneous_state(20)
        densities = [len(sample_network(s, seed).edges) / 380 for seed in range(100)]
        stderr = math.sqrt(0.25 / (380 * 100))
        self.assertLess(abs(np.mean(densities) - 0.5), 3 * stderr)

    def test_seeded(self):
        s = random_state(8, seed=4)
        self.assertEqual(sample_network(s, 7), sample_network(s, 7))


class TestParameterState(unittest.TestCase):

    def test_json_round_trip(self):
        s = random_state(5, K=3, seed=9)
        doc = s.to_dict()
        self.assertEqual((s.memberships + 1).tolist(), doc['memberships'])
        assert_state(self, s, ParameterState.from_json(s.to_json()))

    def test_bad_schema(self):
        doc = random_state().to_dict()
        doc['schema'] = 'other'
        with self.assertRaises(ParseError):
            ParameterState.from_dict(doc)

    def test_missing_field(self):
        doc = random_state().to_dict()
        del doc['beta0']
        with self.assertRaises(ParseError):
            ParameterState.from_dict(doc)

    def test_invariants(self):
        s = random_state(4, K=2)
        self.assertRaises(DomainError, s.replace, weights=np.array([0.7, 0.7]))
        self.assertRaises(DomainError, s.replace, memberships=np.array([0, 1, 2, 0]))
        self.assertRaises(DomainError, s.replace, delta=np.zeros(3))

    def test_copy_is_independent(self):
        s = random_state(4)
        c = s.copy()
        c.Z[0, 0] += 1
        self.assertNotEqual(s, c)
