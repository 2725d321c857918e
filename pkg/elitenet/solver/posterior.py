import itertools
import logging
from typing import *

import numpy as np
from scipy.linalg import orthogonal_procrustes

from elitenet.exceptions import DomainError
from elitenet.model.domain import ParameterState
from elitenet.solver.domain import PosteriorSummary

logger = logging.getLogger(__name__)

MAX_PERMUTATION_K = 10
DEGENERATE_NORM = 1e-12


def procrustes_transform(X: np.ndarray, reference: np.ndarray) -> Optional[Tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """
    Rigid motion (translation plus rotation or reflection) taking X closest to reference.

    :return: (source centroid, orthogonal matrix, reference centroid), None if either configuration is a single point
    """
    cx = X.mean(axis=0)
    cr = reference.mean(axis=0)
    Xc = X - cx
    Rc = reference - cr
    if np.linalg.norm(Xc) < DEGENERATE_NORM or np.linalg.norm(Rc) < DEGENERATE_NORM:
        return None
    R, _ = orthogonal_procrustes(Xc, Rc)
    return cx, R, cr


def align_draws(draws: List[ParameterState], reference: np.ndarray = None,
                log_posteriors: Sequence[float] = None) -> Tuple[List[ParameterState], List[int]]:
    """
    Map every draw's positions and mixture means onto the reference configuration.

    :param draws: posterior draws
    :param reference: n x d reference positions, defaults to the positions of the highest log-posterior draw
    :param log_posteriors: one value per draw, required when reference is None
    :return: aligned draws and indices of draws left unaligned because of a degenerate configuration
    """
    if reference is None:
        if log_posteriors is None or len(log_posteriors) != len(draws) or not draws:
            raise DomainError('a reference or one log posterior per draw is required')
        reference = draws[int(np.argmax(log_posteriors))].Z
    aligned, skipped = [], []
    for k, draw in enumerate(draws):
        if draw.Z.shape != reference.shape:
            raise DomainError('draw {} has shape {}, reference {}'.format(k, draw.Z.shape, reference.shape))
        transform = procrustes_transform(draw.Z, reference)
        if transform is None:
            skipped.append(k)
            aligned.append(draw)
            continue
        cx, R, cr = transform
        aligned.append(draw.replace(Z=(draw.Z - cx) @ R + cr, means=(draw.means - cx) @ R + cr))
    if skipped:
        logger.warning('skipped Procrustes alignment of %d degenerate draws', len(skipped))
    return aligned, skipped


def canonical_partition(memberships: np.ndarray) -> np.ndarray:
    """Renumber components by order of first appearance in node order."""
    order = {}
    for m in memberships:
        if m not in order:
            order[m] = len(order)
    return np.array([order[m] for m in memberships], dtype=int)


def best_permutation(memberships: np.ndarray, reference: np.ndarray, K: int) -> Tuple[int, ...]:
    """
    Component permutation maximizing agreement with the reference partition.

    Ties go to the permutation whose relabelled membership vector is lexicographically smallest,
    which does not depend on the labels the draw came with.

    :return: perm such that component g becomes perm[g]
    """
    best, best_key = None, None
    for perm in itertools.permutations(range(K)):
        relabelled = np.asarray(perm)[memberships]
        key = (-int((relabelled == reference).sum()), tuple(relabelled.tolist()))
        if best_key is None or key < best_key:
            best, best_key = perm, key
    return best


def permute_components(draw: ParameterState, perm: Sequence[int]) -> ParameterState:
    perm = np.asarray(perm)
    inverse = np.argsort(perm)
    return draw.replace(memberships=perm[draw.memberships], weights=draw.weights[inverse],
                        means=draw.means[inverse], variances=draw.variances[inverse])


def relabel_components(draws: List[ParameterState], reference: np.ndarray) -> List[ParameterState]:
    """
    Undo label switching by exhaustive permutation search against a reference partition.

    :param draws: draws sharing K
    :param reference: 0-based reference memberships
    :return: relabelled draws
    """
    if not draws:
        return []
    K = draws[0].K
    if K > MAX_PERMUTATION_K:
        raise DomainError('exhaustive relabelling supports K <= {}, got {}'.format(MAX_PERMUTATION_K, K))
    identity = tuple(range(K))
    res = []
    for draw in draws:
        perm = best_permutation(draw.memberships, reference, K)
        res.append(draw if perm == identity else permute_components(draw, perm))
    return res


def summarize(draws: List[ParameterState], labels: Sequence[str] = None) -> PosteriorSummary:
    """
    Reduce aligned, relabelled draws to point estimates.

    :param draws: aligned draws
    :param labels: node labels, defaults to positional indices
    :return: posterior means, membership probabilities and a central 95% interval for beta0
    """
    if not draws:
        raise DomainError('cannot summarize an empty set of draws')
    n, K = draws[0].n, draws[0].K
    Z = np.stack([s.Z for s in draws])
    memberships = np.stack([s.memberships for s in draws])
    probs = np.stack([(memberships == g).mean(axis=0) for g in range(K)], axis=1)
    beta = np.array([s.beta0 for s in draws])
    return PosteriorSummary(labels=labels if labels is not None else [str(i) for i in range(n)],
                            point_positions=Z.mean(axis=0),
                            membership_probs=probs,
                            beta0_mean=float(beta.mean()),
                            beta0_interval=tuple(np.quantile(beta, [0.025, 0.975]).tolist()),
                            delta_mean=np.mean([s.delta for s in draws], axis=0),
                            gamma_mean=np.mean([s.gamma for s in draws], axis=0),
                            draw_count=len(draws))


def gelman_rubin(chains: np.ndarray) -> Optional[float]:
    """
    Potential scale reduction factor of a (chains x draws) array, None when undefined.
    """
    m, n = chains.shape
    if m < 2 or n < 2:
        return None
    W = np.mean(np.var(chains, axis=1, ddof=1))
    if W <= 0:
        return None
    B = n * np.var(np.mean(chains, axis=1), ddof=1)
    var_hat = ((n - 1) / n) * W + B / n
    return float(np.sqrt(var_hat / W))


def effective_sample_ratio(chain: np.ndarray, max_lag: int = 1000) -> Optional[float]:
    """ESS / n, autocorrelation sum truncated at the first non-positive lag."""
    n = len(chain)
    var = np.var(chain)
    if n < 3 or var <= 0:
        return None
    centered = chain - chain.mean()
    total = 0.0
    for lag in range(1, min(max_lag, n - 1)):
        rho = float((centered[:-lag] * centered[lag:]).mean() / var)
        if rho <= 0:
            break
        total += 2 * rho
    return 1.0 / (1.0 + total)


def diagnostics(beta_chains: List[List[float]], ll_chains: List[List[float]]) -> Dict[str, Optional[float]]:
    res = {}
    size = min((len(c) for c in beta_chains), default=0)
    if size:
        res['rhat_beta0'] = gelman_rubin(np.array([c[:size] for c in beta_chains]))
        res['rhat_log_likelihood'] = gelman_rubin(np.array([c[:size] for c in ll_chains]))
        for k, chain in enumerate(beta_chains):
            res['ess_ratio_beta0_chain_{}'.format(k)] = effective_sample_ratio(np.asarray(chain))
    return res
