import json
from typing import *

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from elitenet.exceptions import DomainError, ParseError

STATE_SCHEMA = 'elitenet.parameter-state/1'


class ModelConfig(BaseModel):
    """Latent cluster random effects model settings. Prior defaults are scaled to hop-count distances."""
    model_config = ConfigDict(extra='forbid', frozen=True)

    d: int = Field(2, ge=1, description='latent dimension')
    K: int = Field(2, ge=1, description='number of mixture components')
    beta_mean: float = 0.0
    beta_var: float = Field(9.0, gt=0)
    mixture_var_shape: float = Field(2.0, gt=0)
    mixture_var_scale: float = Field(1.0, gt=0)
    mean_prior_scale: float = Field(10.0, gt=0, description='mu_g | sigma2_g ~ N(0, scale * sigma2_g * I)')
    dirichlet: float = Field(3.0, gt=0)
    sender_var_shape: float = Field(2.0, gt=0)
    sender_var_scale: float = Field(1.0, gt=0)
    receiver_var_shape: float = Field(2.0, gt=0)
    receiver_var_scale: float = Field(1.0, gt=0)


class ParameterState:
    """
    One full model state. Component indices in `memberships` are 0-based.
    Variances are not validated here; log_prior rejects nonpositive ones.
    """

    def __init__(self, beta0: float, Z: np.ndarray, delta: np.ndarray, gamma: np.ndarray,
                 sigma2_delta: float, sigma2_gamma: float,
                 weights: np.ndarray, means: np.ndarray, variances: np.ndarray, memberships: np.ndarray):
        self.beta0 = float(beta0)
        self.Z = np.asarray(Z, dtype=float)
        self.delta = np.asarray(delta, dtype=float)
        self.gamma = np.asarray(gamma, dtype=float)
        self.sigma2_delta = float(sigma2_delta)
        self.sigma2_gamma = float(sigma2_gamma)
        self.weights = np.asarray(weights, dtype=float)
        self.means = np.asarray(means, dtype=float)
        self.variances = np.asarray(variances, dtype=float)
        self.memberships = np.asarray(memberships, dtype=int)
        self.check()

    @property
    def n(self) -> int:
        return self.Z.shape[0]

    @property
    def d(self) -> int:
        return self.Z.shape[1]

    @property
    def K(self) -> int:
        return self.weights.shape[0]

    def check(self):
        if self.Z.ndim != 2:
            raise DomainError('Z must be an n x d matrix')
        n, d = self.Z.shape
        K = self.weights.shape[0]
        if self.delta.shape != (n,) or self.gamma.shape != (n,) or self.memberships.shape != (n,):
            raise DomainError('delta, gamma and memberships must have length n={}'.format(n))
        if self.means.shape != (K, d) or self.variances.shape != (K,):
            raise DomainError('mixture means must be K x d and variances length K')
        if self.weights.size and abs(self.weights.sum() - 1.0) > 1e-12 or (self.weights < 0).any():
            raise DomainError('mixture weights must lie on the simplex')
        if n and (self.memberships.min() < 0 or self.memberships.max() >= K):
            raise DomainError('memberships must be in 1..K')

    def copy(self) -> 'ParameterState':
        return ParameterState(beta0=self.beta0, Z=self.Z.copy(), delta=self.delta.copy(), gamma=self.gamma.copy(),
                              sigma2_delta=self.sigma2_delta, sigma2_gamma=self.sigma2_gamma,
                              weights=self.weights.copy(), means=self.means.copy(),
                              variances=self.variances.copy(), memberships=self.memberships.copy())

    def replace(self, **fields) -> 'ParameterState':
        values = dict(beta0=self.beta0, Z=self.Z, delta=self.delta, gamma=self.gamma,
                      sigma2_delta=self.sigma2_delta, sigma2_gamma=self.sigma2_gamma,
                      weights=self.weights, means=self.means, variances=self.variances,
                      memberships=self.memberships)
        values.update(fields)
        return ParameterState(**values)

    def __eq__(self, other):
        if not isinstance(other, ParameterState):
            return False
        return (self.beta0 == other.beta0 and self.sigma2_delta == other.sigma2_delta
                and self.sigma2_gamma == other.sigma2_gamma
                and all(np.array_equal(getattr(self, k), getattr(other, k))
                        for k in ('Z', 'delta', 'gamma', 'weights', 'means', 'variances', 'memberships')))

    def __repr__(self):
        return 'ParameterState(n={}, d={}, K={}, beta0={:.4f})'.format(self.n, self.d, self.K, self.beta0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'schema': STATE_SCHEMA,
            'beta0': self.beta0,
            'Z': self.Z.tolist(),
            'delta': self.delta.tolist(),
            'gamma': self.gamma.tolist(),
            'sigma2_delta': self.sigma2_delta,
            'sigma2_gamma': self.sigma2_gamma,
            'mixture': {
                'weights': self.weights.tolist(),
                'means': self.means.tolist(),
                'variances': self.variances.tolist(),
            },
            'memberships': (self.memberships + 1).tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(',', ':'))

    @staticmethod
    def from_dict(doc: Dict[str, Any]) -> 'ParameterState':
        if doc.get('schema') != STATE_SCHEMA:
            raise ParseError('unsupported parameter state schema {!r}'.format(doc.get('schema')))
        try:
            mixture = doc['mixture']
            return ParameterState(beta0=doc['beta0'], Z=doc['Z'],
                                  delta=doc['delta'], gamma=doc['gamma'],
                                  sigma2_delta=doc['sigma2_delta'], sigma2_gamma=doc['sigma2_gamma'],
                                  weights=mixture['weights'], means=mixture['means'], variances=mixture['variances'],
                                  memberships=np.asarray(doc['memberships'], dtype=int) - 1)
        except KeyError as e:
            raise ParseError('parameter state missing field {}'.format(e)) from e

    @staticmethod
    def from_json(text: str) -> 'ParameterState':
        return ParameterState.from_dict(json.loads(text))
