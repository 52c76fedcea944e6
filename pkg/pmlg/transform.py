'''the variant pipeline after the base reduction: degree-3 rewiring with the
revised pattern, binary encoding with bit chains, and DAG orientation.
'''
import itertools
import logging
from dataclasses import dataclass, field, replace
from typing import List

from . import constants
from .constants import B, C, D, E
from .graph import LabeledGraph, NodeRole, Role, expand_to_unit_labels
from .matcher import Pattern
from .reduction import InvariantError, assemble, block_strings, build_full_graph, build_satisfaction_matrix
from .sat import mirror_clauses

logger = logging.getLogger(__name__)


def encode_string(s):
    return ''.join(constants.ENCODING[ch] for ch in s)


def revise_block(w, half):
    '''P'_x = d^{n/2} a_1 dd a_2 dd ... dd a_k d^{n/2}.'''
    pad = D * half
    return pad + (D * 2).join(w) + pad


def build_revised_pattern(f):
    half = f.n // 2
    return Pattern(E + ''.join(B + revise_block(w, half) + E for w in block_strings(f)) + B)


def to_degree3(art, check=True):
    '''the degree-3 instance of the formula behind a Base artifact.

    only `art.formula` is read: the degree-3 graph and the revised pattern are
    rebuilt from it, so the Base graph itself is never rewired.
    '''
    if art.variant != constants.VARIANT_BASE:
        raise ValueError(f'to_degree3 expects a {constants.VARIANT_BASE} artifact, got {art.variant}')
    return assemble(art.formula, build_revised_pattern(art.formula), constants.VARIANT_DEGREE3,
                    degree3=True, check=check)


def is_mirrored(f):
    return f.clauses == f.clauses[::-1]


def reverse_reading_cover(f):
    '''some block read backwards fits some row of the satisfaction matrix.

    an undirected bit-chain graph can be walked right to left, and such a walk
    spells alpha(P') exactly when a reversed block P_x[k] .. P_x[1] is covered.
    '''
    matrix = build_satisfaction_matrix(f)
    return any(matrix.covers(f.k + 1 - h for h, a in enumerate(w, 1) if a == C) for w in block_strings(f))


def encode_binary(art, check=True, mirror=True):
    '''relabel with alpha and split every label into a chain of single bits.
    chain heads keep the node's role, the other chain nodes become BitChain.

    bit chains can be read in either direction, and the reversed reading of
    alpha(P') pairs clause column h with pattern column k + 1 - h. with
    `mirror` the instance is rebuilt from `mirror_clauses(art.formula)` first,
    whose clause order is a palindrome, so both readings test the same cover.
    `mirror=False` encodes `art` as given; that graph also matches whenever
    `reverse_reading_cover(art.formula)` holds.
    '''
    if art.variant != constants.VARIANT_DEGREE3:
        raise ValueError(f'encode_binary expects a {constants.VARIANT_DEGREE3} artifact, got {art.variant}')
    if mirror and not is_mirrored(art.formula):
        f = mirror_clauses(art.formula)
        logger.debug('mirrored clause order: k %d -> %d', art.formula.k, f.k)
        art = assemble(f, build_revised_pattern(f), constants.VARIANT_DEGREE3, degree3=True, check=check)
    encoded = [encode_string(label) for label in art.graph.labels]
    widths = {}
    for v, bits in enumerate(encoded):
        width = widths.setdefault(art.layers[v], len(bits))
        if width != len(bits):
            raise InvariantError(f'layer {art.layers[v]} mixes label widths {width} and {len(bits)}')
    start, acc = {}, 0
    for layer in sorted(widths):
        start[layer] = acc
        acc += widths[layer]

    relabeled = LabeledGraph(encoded, art.graph.edges, directed=False)
    unit, mapping = expand_to_unit_labels(relabeled, order=art.layers)
    roles = [None] * unit.num_nodes
    layers = [None] * unit.num_nodes
    for (v, t), x in mapping.items():
        r = art.roles[v]
        roles[x] = r if t == 1 else NodeRole(Role.BIT_CHAIN, r.gadget, r.j, r.h)
        layers[x] = start[art.layers[v]] + t - 1
    boundary = tuple((mapping[(u, len(encoded[u]))], mapping[(v, 1)]) for u, v in art.boundary)

    out = replace(art, pattern=Pattern(encode_string(art.pattern.text)), graph=unit, roles=tuple(roles),
                  layers=tuple(layers), boundary=boundary, variant=constants.VARIANT_BINARY)
    if check:
        out.check()
    logger.debug('binary encoding: |V| %d -> %d, m %d -> %d', art.graph.num_nodes, unit.num_nodes,
                 art.pattern.m, out.pattern.m)
    return out


def orient_dag(art, check=True):
    '''every edge becomes one arc from its lower layer to its higher layer.'''
    variants = {constants.VARIANT_DEGREE3: constants.VARIANT_DEGREE3_DAG,
                constants.VARIANT_BINARY: constants.VARIANT_BINARY_DAG}
    if art.variant not in variants:
        raise ValueError(f'orient_dag expects a Degree3 or Binary artifact, got {art.variant}')
    arcs = []
    for u, v in art.graph.edges:
        if art.layers[u] == art.layers[v]:
            raise InvariantError(f'edge ({u}, {v}) inside layer {art.layers[u]}')
        arcs.append((u, v) if art.layers[u] < art.layers[v] else (v, u))
    out = replace(art, graph=LabeledGraph(art.graph.labels, arcs, directed=True), variant=variants[art.variant])
    if check:
        out.check()
    return out


def build_variant(f, variant, check=True):
    '''run the pipeline Base -> Degree3 -> Binary -> DAG up to `variant`.'''
    art = build_full_graph(f, check=check)
    if variant == constants.VARIANT_BASE:
        return art
    art = to_degree3(art, check=check)
    if variant == constants.VARIANT_DEGREE3:
        return art
    if variant == constants.VARIANT_DEGREE3_DAG:
        return orient_dag(art, check=check)
    art = encode_binary(art, check=check)
    if variant == constants.VARIANT_BINARY:
        return art
    if variant == constants.VARIANT_BINARY_DAG:
        return orient_dag(art, check=check)
    raise ValueError(f'unknown variant {variant!r}')


def pattern_triples():
    '''the length-3 windows a revised pattern can contain around block edges.'''
    cd = (C, D)
    shapes = [(B, x, E) for x in cd]
    shapes += [(E, B, x) for x in cd]
    shapes += [(x, E, B) for x in cd]
    shapes += [(B, x, y) for x in cd for y in cd]
    shapes += [(x, y, E) for x in cd for y in cd]
    shapes += [t for t in itertools.product(cd, repeat=3)]
    return [''.join(t) for t in shapes]


@dataclass
class EncodingReport:
    sync_checked: int = 0
    sync_violations: List[str] = field(default_factory=list)
    shape_checked: int = 0
    shape_violations: List[str] = field(default_factory=list)

    @property
    def ok(self):
        return not self.sync_violations and not self.shape_violations

    def to_lines(self):
        return [
            f'encoding sync {self.sync_checked - len(self.sync_violations)}/{self.sync_checked}'
            + (f' violations {",".join(self.sync_violations)}' if self.sync_violations else ''),
            f'encoding shapes {self.shape_checked - len(self.shape_violations)}/{self.shape_checked}'
            + (f' violations {",".join(self.shape_violations)}' if self.shape_violations else ''),
        ]


def verify_encoding_table():
    report = EncodingReport()
    for t in itertools.product(constants.REDUCTION_ALPHABET, repeat=3):
        triple = ''.join(t)
        report.sync_checked += 1
        if (constants.SYNC_WORD in encode_string(triple)) != (E + B in triple):
            report.sync_violations.append(triple)
    for triple in pattern_triples():
        report.shape_checked += 1
        if B + E in triple or constants.FORBIDDEN_WORD in encode_string(triple):
            report.shape_violations.append(triple)
    return report
