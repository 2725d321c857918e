"""
Multilevel spring-electrical layout with Barnes-Hut repulsion.

Forces on the symmetrized graph: every pair repels with C*k^2/dist, neighbours attract with dist^2/k,
so two connected nodes settle at distance C^(1/3)*k. Nodes move by a fixed step along their force,
the step adapting to the system energy; a level has converged once the step falls under tolerance*k.
"""
import logging
import math
from functools import cached_property
from typing import *

import numpy as np

from elitenet.exceptions import DomainError
from elitenet.network.domain import DirectedGraph
from elitenet.network.graph import undirected_neighbours
from elitenet.viewer.domain import LayoutConfig, LayoutResult

logger = logging.getLogger(__name__)

MAX_DEPTH = 32
PROGRESS_STEPS = 5
COARSEN_MIN_SHRINK = 0.75


class QuadTree:
    """
    Square cell of a quadtree over 2D points. A cell holds the point count and centroid of its subtree.
    Children split the cell in half-open quadrants, points on a split line go to the upper quadrant.
    """

    def __init__(self, positions: np.ndarray, indices: np.ndarray = None,
                 origin: Tuple[float, float] = None, size: float = None, depth: int = 0):
        if indices is None:
            indices = np.arange(len(positions))
            lo = positions.min(axis=0)
            size = float((positions.max(axis=0) - lo).max())
            size = size * 1.1 if size > 0 else 1.0
            origin = (float(lo[0]) - 0.05 * size, float(lo[1]) - 0.05 * size)
        self.origin = origin
        self.size = size
        self.indices = indices
        self.mass = len(indices)
        self.center = positions[indices].mean(axis=0)
        self.children = []
        if self.mass > 1 and depth < MAX_DEPTH:
            half = size / 2
            right = positions[indices, 0] >= origin[0] + half
            top = positions[indices, 1] >= origin[1] + half
            for qx, mx in ((0, ~right), (1, right)):
                for qy, my in ((0, ~top), (1, top)):
                    mask = mx & my
                    if mask.any():
                        self.children.append(QuadTree(positions, indices[mask],
                                                      (origin[0] + qx * half, origin[1] + qy * half),
                                                      half, depth + 1))

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @cached_property
    def members(self) -> Set[int]:
        return set(self.indices.tolist())

    def repulsion(self, i: int, positions: np.ndarray, theta: float, strength: float) -> np.ndarray:
        """
        Repulsive force on point i from every other point in the cell.

        :param i: point index
        :param positions: all points
        :param theta: opening criterion, a cell acts as one body when size / distance < theta
        :param strength: C*k^2
        :return: force vector
        """
        p = positions[i]
        if self.is_leaf:
            d = p - positions[self.indices[self.indices != i]]
            dist2 = (d ** 2).sum(axis=1)
            keep = dist2 > 0
            return strength * (d[keep] / dist2[keep, None]).sum(axis=0)
        if i not in self.members:
            d = p - self.center
            dist2 = float(d @ d)
            if dist2 > 0 and self.size < theta * math.sqrt(dist2):
                return strength * self.mass * d / dist2
        force = np.zeros(2)
        for child in self.children:
            force += child.repulsion(i, positions, theta, strength)
        return force


def coarsen(neighbours: List[List[int]]) -> Tuple[List[List[int]], np.ndarray]:
    """
    Collapse a maximal matching, visiting nodes and neighbours in index order.

    :return: coarse adjacency lists and, per fine node, the index of its coarse node
    """
    n = len(neighbours)
    mate = [-1] * n
    for i in range(n):
        if mate[i] < 0:
            for j in neighbours[i]:
                if j != i and mate[j] < 0:
                    mate[i], mate[j] = j, i
                    break
    parent = np.full(n, -1, dtype=int)
    count = 0
    for i in range(n):
        if parent[i] < 0:
            parent[i] = count
            if mate[i] >= 0:
                parent[mate[i]] = count
            count += 1
    coarse = [set() for _ in range(count)]
    for i in range(n):
        for j in neighbours[i]:
            if parent[i] != parent[j]:
                coarse[parent[i]].add(int(parent[j]))
    return [sorted(s) for s in coarse], parent


def relax(neighbours: List[List[int]], positions: np.ndarray, k: float, config: LayoutConfig,
          max_iter: int) -> Tuple[np.ndarray, int, bool]:
    """
    Move nodes along their net force until the step falls under tolerance.

    :return: positions, iterations run and whether the level converged
    """
    pos = positions.copy()
    n = len(pos)
    if n == 1:
        return pos, 0, True
    strength = config.C * k * k
    step = k
    energy = math.inf
    progress = 0
    for it in range(max_iter):
        tree = QuadTree(pos)
        forces = np.empty_like(pos)
        for i in range(n):
            f = tree.repulsion(i, pos, config.theta, strength)
            if neighbours[i]:
                d = pos[i] - pos[neighbours[i]]
                f -= (np.linalg.norm(d, axis=1)[:, None] * d).sum(axis=0) / k
            forces[i] = f
        norms = np.linalg.norm(forces, axis=1)
        moving = norms > 0
        pos[moving] += step * forces[moving] / norms[moving, None]

        previous, energy = energy, float((norms ** 2).sum())
        if energy < previous:
            progress += 1
            if progress >= PROGRESS_STEPS:
                progress = 0
                step = min(k, step / config.step_ratio)
        else:
            progress = 0
            step *= config.step_ratio
        if step < config.tolerance * k:
            return pos, it + 1, True
    return pos, max_iter, False


def force_layout(g: DirectedGraph, seed: int = 0, max_iter: int = 500, config: LayoutConfig = None) -> LayoutResult:
    """
    Lay out the follow network, edge direction ignored.

    :param g: graph with at least one node
    :param seed: seed of the initial coarse positions and of the prolongation jitter
    :param max_iter: iteration cap per level
    :param config: force constants
    :return: centered positions per node label
    """
    config = config or LayoutConfig()
    n = g.n
    if n < 1:
        raise DomainError('cannot lay out an empty graph')
    if n == 1:
        return LayoutResult({g.nodes[0]: (0.0, 0.0)}, iterations_run=0, converged=True)

    k = math.sqrt((config.area if config.area is not None else n) / n)
    levels = [undirected_neighbours(g)]
    parents = []
    while len(levels[-1]) > config.min_coarse_size:
        coarse, parent = coarsen(levels[-1])
        if len(coarse) > COARSEN_MIN_SHRINK * len(levels[-1]):
            break
        levels.append(coarse)
        parents.append(parent)
    logger.debug('layout levels: %s', [len(level) for level in levels])

    rng = np.random.default_rng(seed)
    top = len(levels[-1])
    pos = rng.uniform(-1.0, 1.0, size=(top, 2)) * k * math.sqrt(top)
    total, converged = 0, True
    for level in range(len(levels) - 1, -1, -1):
        pos, iterations, converged = relax(levels[level], pos, k, config, max_iter)
        total += iterations
        if level > 0:
            parent = parents[level - 1]
            pos = pos[parent] + rng.uniform(-0.1, 0.1, size=(len(parent), 2)) * k

    pos -= pos.mean(axis=0)
    logger.info('layout of %d nodes: %d iterations, converged=%s', n, total, converged)
    return LayoutResult({label: (float(x), float(y)) for label, (x, y) in zip(g.nodes, pos)},
                        iterations_run=total, converged=converged)
