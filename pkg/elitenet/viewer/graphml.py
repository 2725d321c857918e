from typing import *

import networkx as nx

from elitenet.exceptions import DomainError, ParseError
from elitenet.network.domain import DirectedGraph
from elitenet.solver.domain import PosteriorSummary


def to_networkx(g: DirectedGraph, summary: PosteriorSummary = None) -> nx.DiGraph:
    """
    Directed networkx graph keyed by node label. With a summary, nodes also carry the most probable
    component (1-based), one `prob_<g>` attribute per component and the point position `Z1`, `Z2`.
    """
    if summary is not None and set(summary.labels) != set(g.nodes):
        raise DomainError('summary and graph have different node sets')
    res = nx.DiGraph()
    degrees = g.total_degrees()
    for i, label in enumerate(g.nodes):
        res.add_node(label, label=label, degree=int(degrees[i]))
    if summary is not None:
        components = summary.map_memberships() + 1
        for i, label in enumerate(summary.labels):
            attrs = res.nodes[label]
            attrs['component'] = int(components[i])
            for k in range(summary.K):
                attrs['prob_{}'.format(k + 1)] = float(summary.membership_probs[i, k])
            for k in range(min(2, summary.point_positions.shape[1])):
                attrs['Z{}'.format(k + 1)] = float(summary.point_positions[i, k])
    res.add_edges_from(g.labelled_edges())
    return res


def export_graphml(g: DirectedGraph, summary: PosteriorSummary = None) -> str:
    return '\n'.join(nx.generate_graphml(to_networkx(g, summary))) + '\n'


def read_graphml_edges(text: str) -> List[Tuple[str, str]]:
    """(follower, followed) rows of a GraphML document."""
    try:
        graph = nx.parse_graphml(text, force_multigraph=False)
    except Exception as e:
        raise ParseError('invalid GraphML: {}'.format(e)) from e
    if not graph.is_directed():
        raise ParseError('GraphML graph is not directed')
    return [(str(u), str(v)) for u, v in graph.edges()]
