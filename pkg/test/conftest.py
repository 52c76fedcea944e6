import itertools

import numpy as np
import pytest

from pmlg.graph import LabeledGraph
from pmlg.reduction import SatisfactionMatrix
from pmlg.sat import CnfFormula


@pytest.fixture
def xor_formula():
    # (v1 or v2) and (not v1 or not v2)
    return CnfFormula(2, ((1, 2), (-1, -2)))


@pytest.fixture
def contradiction():
    return CnfFormula(2, ((1,), (-1,)))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def four_row_matrix():
    # y_1 |= c_2, c_3; y_2 |= c_1, c_2; y_3 |= c_2; y_4 |= c_1
    return SatisfactionMatrix(3, (frozenset({2, 3}), frozenset({1, 2}), frozenset({2}), frozenset({1})))


def random_graph(rng, num_nodes, alphabet='ab', directed=False, p_edge=0.3, max_label=1):
    labels = [''.join(rng.choice(list(alphabet), size=int(rng.integers(1, max_label + 1))))
              for _ in range(num_nodes)]
    if directed:
        pairs = [(u, v) for u in range(num_nodes) for v in range(num_nodes) if u != v]
    else:
        pairs = list(itertools.combinations(range(num_nodes), 2))
    edges = [e for e in pairs if rng.random() < p_edge]
    return LabeledGraph(labels, edges, directed)


def random_pattern(rng, length, alphabet='ab'):
    return ''.join(rng.choice(list(alphabet), size=length))


def all_small_graphs(max_nodes, alphabet='ab', directed=False):
    for num_nodes in range(1, max_nodes + 1):
        if directed:
            pairs = [(u, v) for u in range(num_nodes) for v in range(num_nodes) if u != v]
        else:
            pairs = list(itertools.combinations(range(num_nodes), 2))
        for labels in itertools.product(alphabet, repeat=num_nodes):
            for mask in range(1 << len(pairs)):
                edges = [e for i, e in enumerate(pairs) if mask >> i & 1]
                yield LabeledGraph(labels, edges, directed)


def all_patterns(max_len, alphabet='ab'):
    for length in range(1, max_len + 1):
        for p in itertools.product(alphabet, repeat=length):
            yield ''.join(p)
