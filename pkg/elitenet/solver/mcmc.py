import logging
import math
from typing import *

import numpy as np
from scipy.special import logsumexp

from elitenet.exceptions import InitializationError
from elitenet.model.domain import ModelConfig, ParameterState
from elitenet.model.likelihood import distance_matrix, dyad_terms, log_likelihood, log_prior, \
    spherical_normal_logpdf
from elitenet.network.domain import DirectedGraph
from elitenet.solver.domain import ChainResult, McmcConfig

logger = logging.getLogger(__name__)

TARGET_VECTOR = 0.234
TARGET_SCALAR = 0.44
BLOCKS = ('z', 'beta0', 'delta', 'gamma')


# Incremental log-posterior differences. Each equals log_posterior(new) - log_posterior(old)
# for a state differing only in the named block.

def position_log_ratio(y: np.ndarray, s: ParameterState, i: int, z_new: np.ndarray,
                       distances: np.ndarray = None) -> float:
    """
    Log-posterior change from moving z_i to z_new.

    :param y: adjacency matrix
    :param s: current state
    :param i: node index
    :param z_new: proposed position
    :param distances: current distance matrix, computed if missing
    :return: log acceptance ratio of the symmetric proposal
    """
    d_old = distances[i] if distances is not None else np.sqrt(((s.Z - s.Z[i]) ** 2).sum(axis=1))
    d_new = np.sqrt(((s.Z - z_new) ** 2).sum(axis=1))
    mask = np.ones(s.n, dtype=bool)
    mask[i] = False

    base_out = s.beta0 + s.delta[i] + s.gamma
    base_in = s.beta0 + s.delta + s.gamma[i]
    ratio = (dyad_terms(y[i], base_out - d_new) - dyad_terms(y[i], base_out - d_old))[mask].sum()
    ratio += (dyad_terms(y[:, i], base_in - d_new) - dyad_terms(y[:, i], base_in - d_old))[mask].sum()

    k = s.memberships[i]
    ratio += spherical_normal_logpdf(z_new, s.means[k], s.variances[k])[0] \
        - spherical_normal_logpdf(s.Z[i], s.means[k], s.variances[k])[0]
    return float(ratio)


def _logits(s: ParameterState, distances: np.ndarray) -> np.ndarray:
    return s.beta0 - distances + s.delta[:, None] + s.gamma[None, :]


def sender_log_ratios(y: np.ndarray, s: ParameterState, delta_new: np.ndarray,
                      distances: np.ndarray = None) -> np.ndarray:
    """
    Per-node log-posterior changes from replacing delta_i by delta_new[i], one node at a time.
    Sender effects touch disjoint rows, so the ratios are independent.
    """
    distances = distance_matrix(s.Z) if distances is None else distances
    eta = _logits(s, distances)
    step = delta_new - s.delta
    diff = dyad_terms(y, eta + step[:, None]) - dyad_terms(y, eta)
    np.fill_diagonal(diff, 0.0)
    prior = (s.delta ** 2 - delta_new ** 2) / (2 * s.sigma2_delta)
    return diff.sum(axis=1) + prior


def receiver_log_ratios(y: np.ndarray, s: ParameterState, gamma_new: np.ndarray,
                        distances: np.ndarray = None) -> np.ndarray:
    distances = distance_matrix(s.Z) if distances is None else distances
    eta = _logits(s, distances)
    step = gamma_new - s.gamma
    diff = dyad_terms(y, eta + step[None, :]) - dyad_terms(y, eta)
    np.fill_diagonal(diff, 0.0)
    prior = (s.gamma ** 2 - gamma_new ** 2) / (2 * s.sigma2_gamma)
    return diff.sum(axis=0) + prior


def intercept_log_ratio(y: np.ndarray, s: ParameterState, c: ModelConfig, beta_new: float,
                        distances: np.ndarray = None) -> float:
    distances = distance_matrix(s.Z) if distances is None else distances
    eta = _logits(s, distances)
    diff = dyad_terms(y, eta + (beta_new - s.beta0)) - dyad_terms(y, eta)
    np.fill_diagonal(diff, 0.0)
    prior = ((s.beta0 - c.beta_mean) ** 2 - (beta_new - c.beta_mean) ** 2) / (2 * c.beta_var)
    return float(diff.sum() + prior)


class Sampler:
    """
    Metropolis-within-Gibbs sampler for one chain.

    Positions, random effects and the intercept are updated by random-walk Metropolis-Hastings,
    the mixture, memberships and variance parameters by their conjugate full conditionals.
    """

    def __init__(self, graph: DirectedGraph, model: ModelConfig, mcmc: McmcConfig, init: ParameterState, seed: int):
        self.y = graph.adjacency()
        self.model = model
        self.mcmc = mcmc
        self.state = init.copy()
        self.rng = np.random.default_rng(seed)
        self.distances = distance_matrix(self.state.Z)

        self.log_scales = {'z': math.log(mcmc.z_scale), 'beta0': math.log(mcmc.beta0_scale),
                           'delta': math.log(mcmc.delta_scale), 'gamma': math.log(mcmc.gamma_scale)}
        self.targets = {'z': TARGET_VECTOR if model.d > 1 else TARGET_SCALAR, 'beta0': TARGET_SCALAR,
                        'delta': TARGET_SCALAR, 'gamma': TARGET_SCALAR}
        self.window = {b: [0, 0] for b in BLOCKS}
        self.totals = {b: [0, 0] for b in BLOCKS}
        self.adaptations = 0

    def scale(self, block: str) -> float:
        return math.exp(self.log_scales[block])

    def _count(self, block: str, accepted: int, attempted: int, adapting: bool):
        counter = self.window[block] if adapting else self.totals[block]
        counter[0] += accepted
        counter[1] += attempted

    def update_positions(self, adapting: bool):
        s = self.state
        scale = self.scale('z')
        for i in range(s.n):
            z_new = s.Z[i] + scale * self.rng.standard_normal(s.d)
            ratio = position_log_ratio(self.y, s, i, z_new, self.distances)
            accepted = math.log(self.rng.random()) < ratio
            if accepted:
                s.Z[i] = z_new
                row = np.sqrt(((s.Z - z_new) ** 2).sum(axis=1))
                self.distances[i, :] = row
                self.distances[:, i] = row
            self._count('z', int(accepted), 1, adapting)

    def update_senders(self, adapting: bool):
        s = self.state
        proposal = s.delta + self.scale('delta') * self.rng.standard_normal(s.n)
        ratios = sender_log_ratios(self.y, s, proposal, self.distances)
        accepted = np.log(self.rng.random(s.n)) < ratios
        s.delta[accepted] = proposal[accepted]
        self._count('delta', int(accepted.sum()), s.n, adapting)

    def update_receivers(self, adapting: bool):
        s = self.state
        proposal = s.gamma + self.scale('gamma') * self.rng.standard_normal(s.n)
        ratios = receiver_log_ratios(self.y, s, proposal, self.distances)
        accepted = np.log(self.rng.random(s.n)) < ratios
        s.gamma[accepted] = proposal[accepted]
        self._count('gamma', int(accepted.sum()), s.n, adapting)

    def update_intercept(self, adapting: bool):
        s = self.state
        beta_new = s.beta0 + self.scale('beta0') * self.rng.standard_normal()
        accepted = math.log(self.rng.random()) < intercept_log_ratio(self.y, s, self.model, beta_new, self.distances)
        if accepted:
            s.beta0 = beta_new
        self._count('beta0', int(accepted), 1, adapting)

    def update_memberships(self):
        s = self.state
        with np.errstate(divide='ignore'):
            log_p = np.log(s.weights)[None, :] + np.stack(
                [spherical_normal_logpdf(s.Z, s.means[g], s.variances[g]) for g in range(s.K)], axis=1)
        probs = np.exp(log_p - logsumexp(log_p, axis=1, keepdims=True))
        cumulative = probs.cumsum(axis=1)
        u = self.rng.random(s.n)
        s.memberships = np.minimum((u[:, None] > cumulative).sum(axis=1), s.K - 1)

    def update_mixture(self):
        s, c = self.state, self.model
        counts = np.bincount(s.memberships, minlength=s.K)
        s.weights = self.rng.dirichlet(c.dirichlet + counts)
        s.weights /= s.weights.sum()

        # normal-inverse-gamma update: sigma2_g from its marginal, then mu_g given sigma2_g
        for g in range(s.K):
            members = s.Z[s.memberships == g]
            total = members.sum(axis=0)
            v = 1.0 / (len(members) + 1.0 / c.mean_prior_scale)
            shape = c.mixture_var_shape + len(members) * s.d / 2
            rate = c.mixture_var_scale + 0.5 * ((members ** 2).sum() - v * (total ** 2).sum())
            s.variances[g] = rate / self.rng.gamma(shape)
            s.means[g] = v * total + math.sqrt(v * s.variances[g]) * self.rng.standard_normal(s.d)

    def update_effect_variances(self):
        s, c = self.state, self.model
        s.sigma2_delta = (c.sender_var_scale + 0.5 * (s.delta ** 2).sum()) \
            / self.rng.gamma(c.sender_var_shape + s.n / 2)
        s.sigma2_gamma = (c.receiver_var_scale + 0.5 * (s.gamma ** 2).sum()) \
            / self.rng.gamma(c.receiver_var_shape + s.n / 2)

    def step(self, adapting: bool):
        self.update_positions(adapting)
        self.update_senders(adapting)
        self.update_receivers(adapting)
        self.update_intercept(adapting)
        self.update_memberships()
        self.update_mixture()
        self.update_effect_variances()

    def adapt(self):
        """Robbins-Monro step of every proposal scale toward its target acceptance rate."""
        self.adaptations += 1
        gain = 1.0 / math.sqrt(self.adaptations)
        for block, (accepted, attempted) in self.window.items():
            if attempted:
                rate = accepted / attempted
                self.log_scales[block] += gain * (rate - self.targets[block])
                logger.debug('adapt %s rate=%.3f scale=%.4f', block, rate, self.scale(block))
            self.window[block] = [0, 0]

    def acceptance_rates(self) -> Dict[str, float]:
        return {b: (a / n if n else 0.0) for b, (a, n) in self.totals.items()}

    def run(self, graph: DirectedGraph) -> ChainResult:
        m = self.mcmc
        draws, lls, lps = [], [], []
        for t in range(m.n_iterations):
            adapting = t < m.burn_in
            self.step(adapting)
            if adapting and (t + 1) % m.adapt_window == 0:
                self.adapt()
            if not adapting and (t - m.burn_in + 1) % m.thinning == 0:
                ll = log_likelihood(self.state, graph)
                draws.append(self.state.copy())
                lls.append(ll)
                lps.append(ll + log_prior(self.state, self.model))
        return ChainResult(draws=draws, log_likelihoods=lls, log_posteriors=lps,
                           acceptance_rates=self.acceptance_rates(),
                           proposal_scales={b: self.scale(b) for b in BLOCKS})


def run_chain(g: DirectedGraph, c: ModelConfig, m: McmcConfig, init: ParameterState, seed: int = None) -> ChainResult:
    """
    Run one chain. Proposal scales adapt during burn-in only.

    :param g: follow network
    :param c: model settings
    :param m: sampler settings
    :param init: starting state
    :param seed: chain seed, defaults to m.rng_seed
    :return: retained draws with their log-likelihoods and log-posteriors
    """
    start = log_likelihood(init, g) + log_prior(init, c)
    if not math.isfinite(start):
        raise InitializationError('log-posterior at the initial state is {}'.format(start))

    sampler = Sampler(g, c, m, init, m.rng_seed if seed is None else seed)
    result = sampler.run(g)
    logger.info('chain done: %d draws, acceptance %s', len(result.draws),
                ', '.join('{}={:.2f}'.format(b, r) for b, r in sorted(result.acceptance_rates.items())))
    return result
