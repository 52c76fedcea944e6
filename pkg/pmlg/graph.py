'''labeled graphs: immutable representation, the line-oriented file format
and the structural analyses the reduction relies on.
'''
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from . import constants

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


class GraphFormatError(ValueError):
    def __init__(self, lineno, message):
        super().__init__(f'line {lineno}: {message}')
        self.lineno = lineno


class Role(str, Enum):
    BEGIN = 'Begin'
    END = 'End'
    CLAUSE = 'Clause'
    DUMMY = 'Dummy'
    TREE_DUMMY = 'TreeDummy'
    PAIR_DUMMY = 'PairDummy'
    BIT_CHAIN = 'BitChain'


class Gadget(str, Enum):
    GF = 'GF'
    GU1 = 'GU1'
    GU2 = 'GU2'
    EXTREMAL = 'Extremal'


DUMMY_ROLES = (Role.DUMMY, Role.TREE_DUMMY, Role.PAIR_DUMMY)


@dataclass(frozen=True)
class NodeRole:
    '''what a node stands for in the reduction.
    j is the row (G_F) or copy index (G_U), h the clause column.
    '''
    role: Role
    gadget: Gadget
    j: Optional[int] = None
    h: Optional[int] = None

    def __post_init__(self):
        if self.role == Role.CLAUSE and (self.j is None or self.h is None or self.h < 1):
            raise ValueError(f'clause role needs coordinates (j, h >= 1), got ({self.j}, {self.h})')

    def to_line(self, node_id):
        parts = ['role', str(node_id), self.role.value]
        if self.j is not None:
            parts += [str(self.j), '-' if self.h is None else str(self.h)]
        parts.append(self.gadget.value)
        return ' '.join(parts)


@dataclass(frozen=True)
class LabeledGraph:
    '''a node-labeled graph with dense ids 0..N-1.

    edges are canonicalized on construction: undirected edges as (u, v) with
    u < v, the whole list sorted. self-loops and duplicates are rejected.
    '''
    labels: Tuple[str, ...]
    edges: Tuple[Edge, ...] = ()
    directed: bool = False

    def __post_init__(self):
        labels = tuple(self.labels)
        for v, label in enumerate(labels):
            if not isinstance(label, str) or not label or any(ch.isspace() for ch in label):
                raise ValueError(f'node {v} has an invalid label {label!r}')
        num_nodes = len(labels)
        canon = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if not (0 <= u < num_nodes and 0 <= v < num_nodes):
                raise ValueError(f'edge ({u}, {v}) has an endpoint outside [0, {num_nodes})')
            if u == v:
                raise ValueError(f'self-loop on node {u}')
            if not self.directed and u > v:
                u, v = v, u
            if (u, v) in canon:
                raise ValueError(f'duplicate edge ({u}, {v})')
            canon.add((u, v))
        object.__setattr__(self, 'labels', labels)
        object.__setattr__(self, 'edges', tuple(sorted(canon)))

    @property
    def num_nodes(self):
        return len(self.labels)

    @property
    def num_edges(self):
        return len(self.edges)

    @cached_property
    def alphabet(self):
        return tuple(sorted(set(''.join(self.labels))))

    @cached_property
    def is_unit(self):
        return all(len(label) == 1 for label in self.labels)

    @cached_property
    def label_array(self):
        return np.array(self.labels, dtype=str) if self.labels else np.zeros(0, dtype='<U1')

    @cached_property
    def arcs(self):
        '''(src, dst) index arrays of every traversable direction.
        '''
        if not self.edges:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        pairs = np.array(self.edges, dtype=np.int64)
        if self.directed:
            return pairs[:, 0], pairs[:, 1]
        return (np.concatenate([pairs[:, 0], pairs[:, 1]]),
                np.concatenate([pairs[:, 1], pairs[:, 0]]))

    @cached_property
    def successors(self):
        out = [[] for _ in range(self.num_nodes)]
        for u, v in zip(*self.arcs):
            out[u].append(int(v))
        return tuple(tuple(sorted(x)) for x in out)

    @cached_property
    def predecessors(self):
        into = [[] for _ in range(self.num_nodes)]
        for u, v in zip(*self.arcs):
            into[v].append(int(u))
        return tuple(tuple(sorted(x)) for x in into)

    def degrees(self):
        '''per-node (degree in the underlying undirected graph, indegree + outdegree).
        '''
        if not self.edges:
            zeros = np.zeros(self.num_nodes, dtype=np.int64)
            return zeros, zeros.copy()
        pairs = np.array(self.edges, dtype=np.int64)
        total = np.bincount(pairs.ravel(), minlength=self.num_nodes)
        if not self.directed:
            return total, total.copy()
        simple = np.array(sorted({(min(u, v), max(u, v)) for u, v in self.edges}), dtype=np.int64)
        return np.bincount(simple.ravel(), minlength=self.num_nodes), total

    def undirected(self):
        return LabeledGraph(self.labels, {(min(u, v), max(u, v)) for u, v in self.edges}, directed=False)

    def relabel(self, perm):
        '''move node v to id perm[v].
        '''
        labels = [None] * self.num_nodes
        for v, label in enumerate(self.labels):
            labels[perm[v]] = label
        return LabeledGraph(labels, [(perm[u], perm[v]) for u, v in self.edges], self.directed)

    def to_networkx(self):
        nxg = nx.DiGraph() if self.directed else nx.Graph()
        nxg.add_nodes_from((v, {'label': label}) for v, label in enumerate(self.labels))
        nxg.add_edges_from(self.edges)
        return nxg


def parse_graph(text):
    '''read the line-oriented graph format, reporting problems with line numbers.
    '''
    if isinstance(text, (bytes, bytearray)):
        text = text.decode('utf-8')
    lines = [(i, line.strip()) for i, line in enumerate(text.splitlines(), 1)]
    lines = [(i, line) for i, line in lines if line and not line.startswith(constants.COMMENT)]
    last = len(text.splitlines()) + 1
    if not lines:
        raise GraphFormatError(1, 'missing header')

    lineno, header = lines[0]
    parts = header.split()
    if (len(parts) != 3 or parts[0] != constants.GRAPH_MAGIC or parts[1] != constants.GRAPH_VERSION
            or parts[2] not in (constants.DIRECTED, constants.UNDIRECTED)):
        raise GraphFormatError(lineno, f'malformed header {header!r}')
    directed = parts[2] == constants.DIRECTED

    if len(lines) < 2:
        raise GraphFormatError(last, 'missing node/edge count line')
    lineno, counts = lines[1]
    try:
        num_nodes, num_edges = (int(x) for x in counts.split())
    except ValueError:
        raise GraphFormatError(lineno, f'expected "<num_nodes> <num_edges>", got {counts!r}') from None
    if num_nodes < 0 or num_edges < 0:
        raise GraphFormatError(lineno, 'negative count')

    body = lines[2:]
    if len(body) < num_nodes + num_edges:
        raise GraphFormatError(last, f'expected {num_nodes} node and {num_edges} edge lines, found {len(body)}')
    if len(body) > num_nodes + num_edges:
        raise GraphFormatError(body[num_nodes + num_edges][0], 'unexpected trailing line')

    labels = [None] * num_nodes
    for lineno, line in body[:num_nodes]:
        parts = line.split()
        if not parts or parts[0] != 'n':
            raise GraphFormatError(lineno, f'expected a node line, got {line!r}')
        if len(parts) == 2:
            raise GraphFormatError(lineno, 'empty label')
        if len(parts) != 3:
            raise GraphFormatError(lineno, f'malformed node line {line!r}')
        node = _parse_id(parts[1], lineno)
        if node >= num_nodes:
            raise GraphFormatError(lineno, f'node id {node} outside [0, {num_nodes})')
        if labels[node] is not None:
            raise GraphFormatError(lineno, f'duplicate node id {node}')
        labels[node] = parts[2]

    edges = []
    seen = set()
    for lineno, line in body[num_nodes:]:
        parts = line.split()
        if len(parts) != 3 or parts[0] != 'e':
            raise GraphFormatError(lineno, f'expected an edge line, got {line!r}')
        u, v = _parse_id(parts[1], lineno), _parse_id(parts[2], lineno)
        for x in (u, v):
            if x >= num_nodes:
                raise GraphFormatError(lineno, f'dangling edge endpoint {x}')
        if u == v:
            raise GraphFormatError(lineno, f'self-loop on node {u}')
        key = (u, v) if directed else (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(lineno, f'duplicate edge ({u}, {v})')
        seen.add(key)
        edges.append((u, v))
    return LabeledGraph(labels, edges, directed)


def _parse_id(token, lineno):
    try:
        value = int(token)
    except ValueError:
        raise GraphFormatError(lineno, f'invalid node id {token!r}') from None
    if value < 0:
        raise GraphFormatError(lineno, f'invalid node id {token!r}')
    return value


def serialize_graph(g):
    kind = constants.DIRECTED if g.directed else constants.UNDIRECTED
    lines = [f'{constants.GRAPH_MAGIC} {constants.GRAPH_VERSION} {kind}', f'{g.num_nodes} {g.num_edges}']
    lines += [f'n {v} {label}' for v, label in enumerate(g.labels)]
    lines += [f'e {u} {v}' for u, v in g.edges]
    return ('\n'.join(lines) + '\n').encode('utf-8')


def find_bridges(g) -> Set[Edge]:
    if g.directed:
        raise ValueError('find_bridges needs an undirected graph')
    return {(min(u, v), max(u, v)) for u, v in nx.bridges(g.to_networkx())}


def max_degree(g):
    '''(max degree of the underlying undirected graph, max indegree + outdegree).
    '''
    if g.num_nodes == 0:
        return 0, 0
    simple, total = g.degrees()
    return int(simple.max()), int(total.max())


def is_dag(g):
    if not g.directed:
        raise ValueError('is_dag needs a directed graph')
    return nx.is_directed_acyclic_graph(g.to_networkx())


def expand_to_unit_labels(g, order: Optional[Sequence[int]] = None):
    '''replace every node labeled with a string of length L by a chain of L
    single-symbol nodes, read from head to tail.

    returns the new graph and a map (node, 1-based offset) -> new node id.

    a directed edge u->v becomes tail(u)->head(v). an undirected graph whose
    labels all have length one is returned as is. otherwise, without `order`,
    an undirected graph turns into a directed one (chains head->tail, every
    edge {u,v} as tail(u)->head(v) and tail(v)->head(u)), which keeps the
    occurrences exactly. with `order` (a rank per node) the result stays
    undirected and each edge joins the tail of its lower-ranked endpoint to
    the head of the other one.
    '''
    mapping: Dict[Tuple[int, int], int] = {}
    labels = []
    for v, label in enumerate(g.labels):
        for t, symbol in enumerate(label, 1):
            mapping[(v, t)] = len(labels)
            labels.append(symbol)
    if g.is_unit and not g.directed:
        return LabeledGraph(labels, g.edges, directed=False), mapping

    heads = [mapping[(v, 1)] for v in range(g.num_nodes)]
    tails = [mapping[(v, len(label))] for v, label in enumerate(g.labels)]
    edges = [(mapping[(v, t)], mapping[(v, t + 1)])
             for v, label in enumerate(g.labels) for t in range(1, len(label))]
    if g.directed:
        edges += [(tails[u], heads[v]) for u, v in g.edges]
        directed = True
    elif order is not None:
        for u, v in g.edges:
            if order[u] > order[v]:
                u, v = v, u
            edges.append((tails[u], heads[v]))
        directed = False
    else:
        for u, v in g.edges:
            edges.append((tails[u], heads[v]))
            edges.append((tails[v], heads[u]))
        directed = True
    return LabeledGraph(labels, edges, directed), mapping
