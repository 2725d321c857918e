import logging
from typing import *

import networkx as nx
import numpy as np
import pandas as pd

from elitenet.exceptions import DomainError, ParseError
from elitenet.network.domain import *

logger = logging.getLogger(__name__)

EDGE_COLUMNS = ['follower', 'followed']


def build_from_edge_list(rows: Iterable[Sequence[str]], nodes: Sequence[str] = None) -> EdgeListBuild:
    """
    Build a follow network from (follower, followed) rows.

    :param rows: edge rows, one (follower, followed) pair per row
    :param nodes: optional labels to place first, in this order, even if they have no edge
    :return: deduplicated graph with the number of dropped self-loops and duplicate rows
    """
    index = {}
    labels = []

    def node(label):
        if label not in index:
            index[label] = len(labels)
            labels.append(label)
        return index[label]

    for label in nodes or ():
        if not isinstance(label, str) or not label:
            raise DomainError('node labels must be non-empty strings')
        node(label)

    edges = set()
    self_loops = 0
    duplicates = 0
    for number, row in enumerate(rows, start=1):
        if len(row) != 2:
            raise ParseError('expected 2 columns (follower, followed), got {}'.format(len(row)), row=number)
        follower, followed = row
        if not isinstance(follower, str) or not isinstance(followed, str) or not follower or not followed:
            raise ParseError('labels must be non-empty strings', row=number)
        i, j = node(follower), node(followed)
        if i == j:
            self_loops += 1
            continue
        if (i, j) in edges:
            duplicates += 1
        edges.add((i, j))

    if self_loops:
        logger.warning('dropped %d self-loop rows', self_loops)
    return EdgeListBuild(graph=DirectedGraph(labels, edges), dropped_self_loops=self_loops, duplicate_edges=duplicates)


def induced_subgraph(rows: Iterable[Sequence[str]], labels: Iterable[str]) -> EdgeListBuild:
    """
    Follow network among a given user set.

    :param rows: follow rows over any users
    :param labels: users to keep, every one becomes a node
    :return: build with nodes in sorted label order
    """
    keep = sorted(set(labels))
    members = set(keep)
    kept = [(a, b) for a, b in rows if a in members and b in members]
    return build_from_edge_list(kept, nodes=keep)


def remove_isolates(g: DirectedGraph) -> Tuple[DirectedGraph, List[str]]:
    degrees = g.total_degrees()
    kept = [i for i in range(g.n) if degrees[i] > 0]
    removed = [g.nodes[i] for i in range(g.n) if degrees[i] == 0]
    if not removed:
        return g, []
    remap = {old: new for new, old in enumerate(kept)}
    edges = [(remap[i], remap[j]) for i, j in g.edges]
    return DirectedGraph([g.nodes[i] for i in kept], edges), removed


def density(g: DirectedGraph) -> float:
    if g.n < 2:
        raise DomainError('density needs at least 2 nodes, got {}'.format(g.n))
    return len(g.edges) / (g.n * (g.n - 1))


def total_degree(g: DirectedGraph, node: str) -> int:
    return int(g.total_degrees()[g.index(node)])


def reciprocity(g: DirectedGraph) -> float:
    """Fraction of edges whose reverse edge is also present."""
    if not g.edges:
        return 0.0
    return float(nx.overall_reciprocity(as_networkx(g)))


def network_stats(g: DirectedGraph) -> NetworkStats:
    return NetworkStats(n_nodes=g.n,
                        n_edges=len(g.edges),
                        density=density(g) if g.n >= 2 else 0.0,
                        reciprocity=reciprocity(g),
                        mean_degree=float(g.total_degrees().mean()) if g.n else 0.0)


def as_networkx(g: DirectedGraph) -> nx.DiGraph:
    """Directed networkx view keyed by node index."""
    res = nx.DiGraph()
    res.add_nodes_from(range(g.n))
    res.add_edges_from(g.sorted_edges())
    return res


def undirected_neighbours(g: DirectedGraph) -> List[List[int]]:
    sym = as_networkx(g).to_undirected()
    return [sorted(sym.adj[i]) for i in range(g.n)]


def geodesic_matrix(g: DirectedGraph) -> np.ndarray:
    """
    Hop distances on the symmetrized graph.

    Unreachable pairs are set to the largest finite distance plus one.

    :param g: follow network
    :return: n x n symmetric float matrix with zero diagonal
    """
    dist = np.full((g.n, g.n), -1, dtype=int)
    for source, lengths in nx.all_pairs_shortest_path_length(as_networkx(g).to_undirected()):
        for target, hops in lengths.items():
            dist[source, target] = hops

    unreachable = dist < 0
    if unreachable.any():
        dist[unreachable] = dist.max() + 1
    return dist.astype(float)


def read_edge_csv(path) -> EdgeListBuild:
    """
    Read a `follower,followed` CSV.

    :param path: file path or buffer
    :return: graph build
    """
    frame = _read_csv(path, EDGE_COLUMNS)
    rows = []
    for number, (follower, followed) in enumerate(frame[EDGE_COLUMNS].itertuples(index=False), start=1):
        if pd.isna(follower) or pd.isna(followed):
            raise ParseError('missing label', row=number)
        rows.append((follower, followed))
    return build_from_edge_list(rows)


def read_edge_rows(path) -> List[Tuple[str, str]]:
    frame = _read_csv(path, EDGE_COLUMNS)
    return [(a, b) for a, b in frame[EDGE_COLUMNS].itertuples(index=False)]


def write_edge_csv(g: DirectedGraph, path):
    pd.DataFrame(g.labelled_edges(), columns=EDGE_COLUMNS).to_csv(path, index=False, lineterminator='\n')


def _read_csv(path, columns: List[str]) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, na_values=[''], encoding='utf-8')
    except pd.errors.ParserError as e:
        raise ParseError(str(e)) from e
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise ParseError('missing column(s) {}'.format(', '.join(missing)), row=0)
    return frame
