import logging
import time
import unittest
from unittest.mock import MagicMock, patch

import numpy as np
from sklearn.metrics import adjusted_rand_score

from elitenet.exceptions import DomainError, StageError
from elitenet.model.domain import ModelConfig
from elitenet.network.domain import SingleTweetThreshold
from elitenet.solver.actor import Worker
from elitenet.solver.actor_solver import *
from elitenet.solver.domain import RunCriterion
from tests.utils import quick_mcmc, slow, two_cluster_graph

logging.basicConfig(level=logging.INFO)
logging.getLogger('pykka').setLevel(logging.WARNING)


class TestRunAll(unittest.TestCase):

    def test_results_in_message_order(self):
        def job(cid, criterion):
            time.sleep(0.05 if cid == 'first' else 0.0)
            return cid, criterion.threshold

        messages = [RunCriterion(criterion_id=cid, criterion=SingleTweetThreshold(t), job=job)
                    for cid, t in (('first', 1), ('second', 2), ('third', 3))]
        for threads in (1, 2, 3, 8):
            self.assertEqual([('first', 1), ('second', 2), ('third', 3)], run_all(messages, threads))

    def test_error_reaches_caller(self):
        job = MagicMock(side_effect=DomainError('boom'))
        with self.assertRaises(DomainError):
            run_all([RunCriterion(criterion_id='x', criterion=SingleTweetThreshold(1), job=job)])
        job.assert_called_once_with('x', SingleTweetThreshold(1))

    def test_unexpected_message(self):
        with self.assertRaises(TypeError):
            run_all(['not a job'])

    def test_worker_records_jobs(self):
        worker = Worker(name='w')
        worker.on_receive(RunCriterion(criterion_id='a', criterion=SingleTweetThreshold(1), job=lambda c, k: None))
        self.assertEqual(['criterion-a'], worker.handled)


class TestFit(unittest.TestCase):

    def setUp(self):
        self.g = two_cluster_graph(n_per=6, seed=3)
        self.model = ModelConfig(K=2)
        self.mcmc = quick_mcmc(n_iterations=60, burn_in=20, thinning=4)

    def test_summary_shape(self):
        res = fit(self.g, self.model, self.mcmc, seed=1)
        s = res.summary
        self.assertEqual(list(self.g.nodes), s.labels)
        self.assertEqual((12, 2), s.point_positions.shape)
        self.assertEqual(2 * self.mcmc.draws_per_chain, s.draw_count)
        np.testing.assert_allclose(1.0, s.membership_probs.sum(axis=1), atol=1e-9)
        self.assertAlmostEqual(res.bic_terms.total, s.bic)
        self.assertIn('rhat_beta0', s.diagnostics)
        self.assertEqual(2, len(res.chains))

    def test_thread_count_does_not_change_result(self):
        one = fit(self.g, self.model, self.mcmc, seed=5, threads=1)
        two = fit(self.g, self.model, self.mcmc, seed=5, threads=2)
        self.assertEqual(one.summary.to_json(), two.summary.to_json())

    def test_K_larger_than_n(self):
        with self.assertRaises(DomainError):
            fit(self.g, ModelConfig(K=13), self.mcmc, seed=0)

    def test_no_draws(self):
        with self.assertRaises(DomainError):
            fit(self.g, self.model, quick_mcmc(n_iterations=0, burn_in=0), seed=0)

    @slow
    def test_recovers_memberships_and_intercept(self):
        recovered, covered = 0, 0
        truth = [0] * 30 + [1] * 30
        for seed in range(10):
            g = two_cluster_graph(n_per=30, seed=seed)
            s = fit(g, self.model, quick_mcmc(20000, 5000, 10, 2), seed=seed, threads=2).summary
            recovered += adjusted_rand_score(truth, s.map_memberships()) >= 0.9
            low, high = s.beta0_interval
            covered += low <= 2.0 <= high
        self.assertGreaterEqual(recovered, 9)
        self.assertGreaterEqual(covered, 8)


class TestSelectK(unittest.TestCase):

    def test_single_k(self):
        g = two_cluster_graph(n_per=5, seed=0)
        best, table = select_k(g, ModelConfig(), [3], quick_mcmc(40, 10, 5, 1), seed=0)
        self.assertEqual(3, best)
        self.assertEqual([3], list(table))

    def test_ties_to_smaller_K(self):
        g = two_cluster_graph(n_per=5, seed=0)
        fake = MagicMock()
        fake.return_value.summary.bic = 10.0
        with patch('elitenet.solver.actor_solver.fit', fake):
            best, table = select_k(g, ModelConfig(), [3, 1, 2], quick_mcmc(), seed=0)
        self.assertEqual(1, best)
        self.assertEqual([1, 2, 3], list(table))
        self.assertEqual([1, 2, 3], [c.args[1].K for c in fake.call_args_list])

    def test_error_annotated_with_K(self):
        g = two_cluster_graph(n_per=2, seed=0)
        with self.assertRaises(StageError) as ctx:
            select_k(g, ModelConfig(), [1, 9], quick_mcmc(20, 5, 5, 1), seed=0)
        self.assertEqual('K=9', ctx.exception.stage)
        self.assertIsInstance(ctx.exception.cause, DomainError)

    @slow
    def test_recovers_two_clusters(self):
        hits = 0
        for seed in range(10):
            g = two_cluster_graph(n_per=15, seed=seed)
            best, _ = select_k(g, ModelConfig(), range(1, 5), quick_mcmc(6000, 2000, 10, 2), seed=seed, threads=2)
            hits += best == 2
        self.assertGreaterEqual(hits, 9)
