from functools import cached_property
from typing import *

import numpy as np

from elitenet.exceptions import DomainError, UnknownNodeError


class DTO:

    def __hash__(self):
        return hash(tuple(sorted((k, _freeze(v)) for k, v in self.__dict__.items())))

    def __eq__(self, other):
        return isinstance(other, type(self)) and self.__dict__ == other.__dict__

    def __str__(self):
        return "{}({})".format(type(self).__name__, ", ".join(["{}={}".format(k, str(self.__dict__[k])) for k in sorted(self.__dict__)]))

    def __repr__(self):
        return self.__str__()


def _freeze(value):
    if isinstance(value, dict):
        return tuple(sorted((k, _freeze(v)) for k, v in value.items()))
    if isinstance(value, (list, set)):
        return tuple(_freeze(v) for v in value)
    return value


class DirectedGraph(DTO):
    """
    Follow network. Node order is the order of first appearance, edges are (follower, followed) index pairs.
    Instances are never mutated after construction.
    """

    def __init__(self, nodes: Sequence[str], edges: Iterable[Tuple[int, int]] = ()):
        self.nodes = tuple(nodes)
        if len(set(self.nodes)) != len(self.nodes):
            raise DomainError('duplicate node labels')
        n = len(self.nodes)
        edges = frozenset((int(i), int(j)) for i, j in edges)
        for i, j in edges:
            if i == j:
                raise DomainError('self-loop on node {!r}'.format(self.nodes[i]))
            if not (0 <= i < n and 0 <= j < n):
                raise DomainError('edge ({}, {}) out of range for {} nodes'.format(i, j, n))
        self.edges = edges

    def __eq__(self, other):
        return isinstance(other, DirectedGraph) and self.nodes == other.nodes and self.edges == other.edges

    def __hash__(self):
        return hash((self.nodes, self.edges))

    def __str__(self):
        return 'DirectedGraph(n={}, edges={})'.format(self.n, len(self.edges))

    @property
    def n(self) -> int:
        return len(self.nodes)

    @cached_property
    def _index(self) -> Dict[str, int]:
        return {label: i for i, label in enumerate(self.nodes)}

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownNodeError(label) from None

    def sorted_edges(self) -> List[Tuple[int, int]]:
        return sorted(self.edges)

    def labelled_edges(self) -> List[Tuple[str, str]]:
        return [(self.nodes[i], self.nodes[j]) for i, j in self.sorted_edges()]

    def adjacency(self) -> np.ndarray:
        """
        Dense adjacency matrix, y[i, j] = 1 if i follows j.

        :return: n x n float array with zero diagonal, read-only
        """
        return self._adjacency

    @cached_property
    def _adjacency(self) -> np.ndarray:
        y = np.zeros((self.n, self.n), dtype=float)
        if self.edges:
            rows, cols = zip(*self.edges)
            y[list(rows), list(cols)] = 1.0
        y.setflags(write=False)
        return y

    def out_degrees(self) -> np.ndarray:
        return self.adjacency().sum(axis=1).astype(int)

    def in_degrees(self) -> np.ndarray:
        return self.adjacency().sum(axis=0).astype(int)

    def total_degrees(self) -> np.ndarray:
        return self.out_degrees() + self.in_degrees()


class EdgeListBuild(DTO):
    def __init__(self, graph: DirectedGraph, dropped_self_loops: int = 0, duplicate_edges: int = 0):
        self.graph = graph
        self.dropped_self_loops = dropped_self_loops
        self.duplicate_edges = duplicate_edges


class NetworkStats(DTO):
    def __init__(self, n_nodes: int, n_edges: int, density: float, reciprocity: float, mean_degree: float):
        self.n_nodes = n_nodes
        self.n_edges = n_edges
        self.density = density
        self.reciprocity = reciprocity
        self.mean_degree = mean_degree

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)


class TweetRecord(DTO):
    def __init__(self, tweet_id: str, author: str, likes: int = 0, replies: int = 0, retweets: int = 0,
                 language: str = '', created_at: str = ''):
        if min(likes, replies, retweets) < 0:
            raise DomainError('negative engagement count on tweet {}'.format(tweet_id))
        self.tweet_id = tweet_id
        self.author = author
        self.likes = likes
        self.replies = replies
        self.retweets = retweets
        self.language = language
        self.created_at = created_at


class EliteCriterion(DTO):
    """Rule turning tweet records into an elite user set."""

    def describe(self) -> str:
        raise NotImplementedError()

    def to_dict(self) -> Dict[str, Any]:
        return dict(variant=type(self).__name__, **self.__dict__)


class SingleTweetThreshold(EliteCriterion):
    def __init__(self, threshold: int):
        if threshold <= 0:
            raise DomainError('threshold must be positive')
        self.threshold = threshold

    def describe(self) -> str:
        return 'at least one tweet with popularity >= {}'.format(self.threshold)


class MinCountAtThreshold(EliteCriterion):
    def __init__(self, count: int, threshold: int):
        if count < 1:
            raise DomainError('count must be at least 1')
        if threshold <= 0:
            raise DomainError('threshold must be positive')
        self.count = count
        self.threshold = threshold

    def describe(self) -> str:
        return 'at least {} tweets with popularity >= {}'.format(self.count, self.threshold)


class CumulativeThreshold(EliteCriterion):
    def __init__(self, total: int):
        if total <= 0:
            raise DomainError('total must be positive')
        self.total = total

    def describe(self) -> str:
        return 'total popularity over all tweets >= {}'.format(self.total)


class EliteSelection(DTO):
    def __init__(self, authors: Set[str], qualifying_tweets: List[str]):
        self.authors = authors
        self.qualifying_tweets = qualifying_tweets

    def __iter__(self):
        return iter((self.authors, self.qualifying_tweets))
