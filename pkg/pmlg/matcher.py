'''exact pattern matching in labeled graphs (walk semantics).

match_exact runs the product dynamic program: layer i holds the nodes where
a walk spelling P[1..i] can end. on graphs whose labels are longer than one
symbol it runs on the unit-label expansion and maps the results back.
'''
import logging
from dataclasses import dataclass
from typing import Iterator, Tuple

import numpy as np

from . import constants
from .graph import expand_to_unit_labels
from .utils import check_guard

logger = logging.getLogger(__name__)

DECISION = 'decision'
REPORT = 'report'


@dataclass(frozen=True)
class Pattern:
    text: str

    def __post_init__(self):
        if not self.text:
            raise ValueError('empty pattern')
        if any(ch.isspace() for ch in self.text):
            raise ValueError('pattern must not contain whitespace')

    @property
    def m(self):
        return len(self.text)

    @property
    def symbols(self):
        return tuple(self.text)

    def __str__(self):
        return self.text


@dataclass(frozen=True)
class Occurrence:
    '''a walk u_1..u_j, starting at 1-based position `offset` of L(u_1)
    and ending at 1-based position `end_offset` of L(u_j) (inclusive).
    '''
    nodes: Tuple[int, ...]
    offset: int
    end_offset: int

    @property
    def start(self):
        return self.nodes[0]

    @property
    def end(self):
        return self.nodes[-1]

    def to_line(self):
        return f'match {self.start} {self.offset} {",".join(map(str, self.nodes))} {self.end_offset}'


def as_pattern(p):
    return p if isinstance(p, Pattern) else Pattern(str(p))


def spell(g, occ):
    labels = g.labels
    if len(occ.nodes) == 1:
        return labels[occ.start][occ.offset - 1:occ.end_offset]
    middle = ''.join(labels[v] for v in occ.nodes[1:-1])
    return labels[occ.start][occ.offset - 1:] + middle + labels[occ.end][:occ.end_offset]


def validate_occurrence(g, p, occ):
    p = as_pattern(p)
    if not occ.nodes or any(not 0 <= v < g.num_nodes for v in occ.nodes):
        return False
    if not 1 <= occ.offset <= len(g.labels[occ.start]):
        return False
    if not 1 <= occ.end_offset <= len(g.labels[occ.end]):
        return False
    if len(occ.nodes) == 1 and occ.end_offset < occ.offset:
        return False
    for u, v in zip(occ.nodes, occ.nodes[1:]):
        if v not in g.successors[u]:
            return False
    return spell(g, occ) == p.text


def _unit_view(g):
    '''the graph itself when every label is a single symbol, otherwise its
    expansion plus the map from expanded node to (node, offset).
    '''
    if g.is_unit:
        return g, None
    unit, mapping = expand_to_unit_labels(g)
    back = [None] * unit.num_nodes
    for key, x in mapping.items():
        back[x] = key
    return unit, back


def advance(g, layer, symbol):
    '''next DP layer on a unit-label graph: nodes labeled `symbol` with an
    in-neighbor in `layer`.
    '''
    src, dst = g.arcs
    nxt = np.zeros(g.num_nodes, dtype=bool)
    nxt[dst[layer[src]]] = True
    nxt &= g.label_array == symbol
    return nxt


def reachability_layers(g, p):
    '''all m layers of the DP on a unit-label graph, shape (m, |V|).
    '''
    p = as_pattern(p)
    if not g.is_unit:
        raise ValueError('reachability_layers needs a unit-label graph')
    layers = np.zeros((p.m, g.num_nodes), dtype=bool)
    layers[0] = g.label_array == p.text[0]
    for i in range(1, p.m):
        layers[i] = advance(g, layers[i - 1], p.text[i])
    return layers


def match_exact(g, p, mode=DECISION):
    '''decision: whether P occurs in G. report: one witness Occurrence per end
    state, reconstructed from the DP layers.

    O(m |E| + m |V|) time; two rolling layers in decision mode.
    '''
    p = as_pattern(p)
    if mode not in (DECISION, REPORT):
        raise ValueError(f'unknown mode {mode!r}')
    if not set(p.text) <= set(g.alphabet):
        return False if mode == DECISION else []

    unit, back = _unit_view(g)
    if mode == DECISION:
        layer = unit.label_array == p.text[0]
        for symbol in p.text[1:]:
            if not layer.any():
                return False
            layer = advance(unit, layer, symbol)
        return bool(layer.any())

    layers = reachability_layers(unit, p)
    occurrences = []
    for v in np.flatnonzero(layers[-1]):
        walk = [int(v)]
        for i in range(p.m - 1, 0, -1):
            walk.append(next(u for u in unit.predecessors[walk[-1]] if layers[i - 1][u]))
        walk.reverse()
        occurrences.append(_translate(walk, back))
    logger.debug('%d end states for pattern of length %d', len(occurrences), p.m)
    return occurrences


def _translate(walk, back):
    if back is None:
        return Occurrence(tuple(walk), 1, 1)
    start, offset = back[walk[0]]
    nodes = [start]
    for x in walk[1:]:
        v, t = back[x]
        # chain steps stay inside a node; an edge always lands on a head
        if t == 1:
            nodes.append(v)
    return Occurrence(tuple(nodes), offset, back[walk[-1]][1])


def count_occurrences(g, p):
    '''number of distinct (start node, offset, end node, end offset) quadruples
    with a match; start sets are carried as integer bitsets.
    '''
    p = as_pattern(p)
    if not set(p.text) <= set(g.alphabet):
        return 0
    unit, _ = _unit_view(g)
    starts = [1 << v if label == p.text[0] else 0 for v, label in enumerate(unit.labels)]
    for symbol in p.text[1:]:
        nxt = [0] * unit.num_nodes
        for v, label in enumerate(unit.labels):
            if label != symbol:
                continue
            acc = 0
            for u in unit.predecessors[v]:
                acc |= starts[u]
            nxt[v] = acc
        starts = nxt
    return sum(bin(s).count('1') for s in starts)


def enumerate_walks(g, p) -> Iterator[Occurrence]:
    '''every walk spelling P, depth first from every start node and offset.
    no memoization: exponential in m, use on small inputs only.
    '''
    p = as_pattern(p)
    text = p.text
    last = p.m - 1

    def extend(path, t, i):
        node = path[-1]
        label = g.labels[node]
        if label[t] != text[i]:
            return
        if i == last:
            yield path, t
            return
        if t + 1 < len(label):
            yield from extend(path, t + 1, i + 1)
        else:
            for w in g.successors[node]:
                yield from extend(path + [w], 0, i + 1)

    for v, label in enumerate(g.labels):
        for t in range(len(label)):
            for path, end in extend([v], t, 0):
                yield Occurrence(tuple(path), t + 1, end + 1)


def match_bruteforce(g, p):
    p = as_pattern(p)
    check_guard('m', p.m, constants.BRUTEFORCE_MAX_M)
    check_guard('|V|', g.num_nodes, constants.BRUTEFORCE_MAX_NODES)
    return next(enumerate_walks(g, p), None) is not None
