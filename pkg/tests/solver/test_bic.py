import math
import unittest

import numpy as np

from elitenet.model.domain import ModelConfig
from elitenet.network.domain import DirectedGraph
from elitenet.network.graph import build_from_edge_list
from elitenet.solver.bic import *
from tests.utils import summary_for, two_cluster_graph, two_cluster_state


class TestParameterCounts(unittest.TestCase):

    def test_logit(self):
        self.assertEqual(1 + 20 * 2 - 3, logit_parameter_count(20, 2))
        self.assertEqual(1 + 5 - 1, logit_parameter_count(5, 1))

    def test_mixture_penalty_grows_with_K(self):
        for d in (1, 2, 3):
            for K in range(1, 6):
                self.assertLess(mixture_parameter_count(K, d), mixture_parameter_count(K + 1, d))
        self.assertEqual(1 + 4 + 2, mixture_parameter_count(2, 2))


class TestTerms(unittest.TestCase):

    def test_mixture_closed_form(self):
        n, d = 10, 2
        points = np.tile([1.5, -2.0], (n, 1))
        var = MIXTURE_REG_COVAR
        log_likelihood = n * (-0.5 * d * math.log(2 * math.pi * var))
        expected = -2 * log_likelihood + mixture_parameter_count(1, d) * math.log(n)
        self.assertAlmostEqual(expected, mixture_bic(points, 1, seed=0), delta=1e-4)

    def test_max_intercept(self):
        g = DirectedGraph(['a', 'b', 'c', 'd'], [(0, 1), (1, 0), (2, 3), (3, 2), (0, 2), (3, 1)])
        beta, ll = max_intercept_log_likelihood(g, np.zeros((4, 2)), np.zeros(4), np.zeros(4))
        self.assertAlmostEqual(0.0, beta, places=5)
        self.assertAlmostEqual(12 * math.log(0.5), ll, places=8)

    def test_effects_without_variation(self):
        self.assertAlmostEqual(math.log(5), effects_bic(np.zeros(5)))

    def test_effects_normal(self):
        x = np.array([-1.0, 1.0, -1.0, 1.0])
        expected = -2 * 4 * (-0.5 * math.log(2 * math.pi)) + 4 + math.log(4)
        self.assertAlmostEqual(expected, effects_bic(x), places=9)

    def test_two_clusters_preferred(self):
        # Input
        state = two_cluster_state(n_per=10, separation=8.0, seed=1)
        g = two_cluster_graph(n_per=10, seed=1)
        probs = np.eye(2)[state.memberships]
        summary = summary_for(list(g.nodes), probs, positions=state.Z)

        # Test
        one = bic_terms(g, summary, ModelConfig(K=1), seed=0)
        two = bic_terms(g, summary, ModelConfig(K=2), seed=0)

        # Only the mixture term depends on K
        self.assertAlmostEqual(one.logit, two.logit)
        self.assertAlmostEqual(one.effects, two.effects)
        self.assertLess(two.total, one.total)
        self.assertEqual(two.total, bic_for(g, summary, ModelConfig(K=2), seed=0))
