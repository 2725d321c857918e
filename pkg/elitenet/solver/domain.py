import json
from typing import *

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from elitenet.exceptions import DomainError
from elitenet.model.domain import ModelConfig, ParameterState
from elitenet.network.domain import DTO, DirectedGraph, EliteCriterion

SUMMARY_SCHEMA = 'elitenet.posterior-summary/1'


class McmcConfig(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)

    n_iterations: int = Field(20000, ge=0)
    burn_in: int = Field(5000, ge=0)
    thinning: int = Field(10, ge=1)
    n_chains: int = Field(2, ge=1)
    z_scale: float = Field(0.5, gt=0)
    beta0_scale: float = Field(0.1, gt=0)
    delta_scale: float = Field(0.3, gt=0)
    gamma_scale: float = Field(0.3, gt=0)
    adapt_window: int = Field(50, ge=1)
    rng_seed: int = 0

    @model_validator(mode='after')
    def check_burn_in(self):
        if not (self.burn_in < self.n_iterations or self.n_iterations == self.burn_in == 0):
            raise ValueError('burn_in ({}) must be smaller than n_iterations ({})'.format(self.burn_in, self.n_iterations))
        return self

    @property
    def draws_per_chain(self) -> int:
        return (self.n_iterations - self.burn_in) // self.thinning


class FitConfig(BaseModel):
    """Content of a fit configuration file."""
    model_config = ConfigDict(extra='forbid', frozen=True)

    model: ModelConfig = ModelConfig()
    mcmc: McmcConfig = McmcConfig()


class ChainResult(DTO):
    def __init__(self, draws: List[ParameterState], log_likelihoods: List[float], log_posteriors: List[float],
                 acceptance_rates: Dict[str, float], proposal_scales: Dict[str, float]):
        self.draws = draws
        self.log_likelihoods = log_likelihoods
        self.log_posteriors = log_posteriors
        self.acceptance_rates = acceptance_rates
        self.proposal_scales = proposal_scales

    def __eq__(self, other):
        return isinstance(other, ChainResult) and self.draws == other.draws \
            and self.log_posteriors == other.log_posteriors

    __hash__ = None


class PosteriorSummary(DTO):
    """
    Aligned, relabelled draws reduced to point estimates. `membership_probs` columns follow 0-based
    component order; serialized output numbers components from 1.
    """

    def __init__(self, labels: Sequence[str], point_positions: np.ndarray, membership_probs: np.ndarray,
                 beta0_mean: float, beta0_interval: Tuple[float, float],
                 delta_mean: np.ndarray, gamma_mean: np.ndarray, draw_count: int,
                 acceptance_rates: Dict[str, float] = None, bic: float = None,
                 diagnostics: Dict[str, float] = None):
        self.labels = list(labels)
        self.point_positions = np.asarray(point_positions, dtype=float)
        self.membership_probs = np.asarray(membership_probs, dtype=float)
        self.beta0_mean = float(beta0_mean)
        self.beta0_interval = (float(beta0_interval[0]), float(beta0_interval[1]))
        self.delta_mean = np.asarray(delta_mean, dtype=float)
        self.gamma_mean = np.asarray(gamma_mean, dtype=float)
        self.draw_count = draw_count
        self.acceptance_rates = acceptance_rates or {}
        self.bic = bic
        self.diagnostics = diagnostics or {}

    __hash__ = None

    def __eq__(self, other):
        return isinstance(other, PosteriorSummary) and self.to_json() == other.to_json()

    @property
    def K(self) -> int:
        return self.membership_probs.shape[1]

    def map_memberships(self) -> np.ndarray:
        """0-based component with the highest posterior probability, ties to the lower index."""
        return self.membership_probs.argmax(axis=1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'schema': SUMMARY_SCHEMA,
            'bic_note': 'smaller is better',
            'labels': self.labels,
            'point_positions': self.point_positions.tolist(),
            'membership_probs': self.membership_probs.tolist(),
            'map_component': (self.map_memberships() + 1).tolist(),
            'beta0_mean': self.beta0_mean,
            'beta0_interval': list(self.beta0_interval),
            'delta_mean': self.delta_mean.tolist(),
            'gamma_mean': self.gamma_mean.tolist(),
            'draw_count': self.draw_count,
            'acceptance_rates': self.acceptance_rates,
            'bic': self.bic,
            'diagnostics': self.diagnostics,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + '\n'

    @staticmethod
    def from_dict(doc: Dict[str, Any]) -> 'PosteriorSummary':
        if doc.get('schema') != SUMMARY_SCHEMA:
            raise DomainError('unsupported summary schema {!r}'.format(doc.get('schema')))
        return PosteriorSummary(labels=doc['labels'], point_positions=doc['point_positions'],
                                membership_probs=doc['membership_probs'], beta0_mean=doc['beta0_mean'],
                                beta0_interval=doc['beta0_interval'], delta_mean=doc['delta_mean'],
                                gamma_mean=doc['gamma_mean'], draw_count=doc['draw_count'],
                                acceptance_rates=doc['acceptance_rates'], bic=doc['bic'],
                                diagnostics=doc['diagnostics'])

    @staticmethod
    def from_json(text: str) -> 'PosteriorSummary':
        return PosteriorSummary.from_dict(json.loads(text))


class BicTerms(DTO):
    def __init__(self, logit: float, mixture: float, effects: float):
        self.logit = logit
        self.mixture = mixture
        self.effects = effects

    @property
    def total(self) -> float:
        return self.logit + self.mixture + self.effects


class FitResult(DTO):
    def __init__(self, summary: PosteriorSummary, chains: List[ChainResult], init: ParameterState,
                 bic_terms: BicTerms, aligned_draws: List[ParameterState] = None):
        self.summary = summary
        self.chains = chains
        self.init = init
        self.bic_terms = bic_terms
        self.aligned_draws = aligned_draws or []

    __hash__ = None


# Actor messages

class RunChain(DTO):
    def __init__(self, index: int, graph: DirectedGraph, model: ModelConfig, mcmc: McmcConfig,
                 init: ParameterState, seed: int):
        self.index = index
        self.graph = graph
        self.model = model
        self.mcmc = mcmc
        self.init = init
        self.seed = seed

    __hash__ = None


class RunCriterion(DTO):
    def __init__(self, criterion_id: str, criterion: EliteCriterion, job: Callable[[str, EliteCriterion], Any]):
        self.criterion_id = criterion_id
        self.criterion = criterion
        self.job = job

    __hash__ = None

