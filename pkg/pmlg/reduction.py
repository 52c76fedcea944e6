'''SAT -> PMLG reduction.

pattern P = e b P_{x_1} e b P_{x_2} e ... b P_{x_R} e b with R = 2^{n/2}, and
graph G = G_U^(1) + G_F + G_U^(2) + {u, z}, joined by e-b bridges.

every node carries a layer (its left-to-right depth): u sits at layer 0 and
each edge joins two consecutive layers. a block b..e spans `width` layers.
'''
import logging
from dataclasses import dataclass, field
from typing import FrozenSet, List, Tuple

from . import constants
from .constants import B, C, D, E
from .graph import (DUMMY_ROLES, Gadget, LabeledGraph, NodeRole, Role,
                    find_bridges)
from .matcher import Pattern
from .sat import Half, enumerate_half_assignments, half_satisfies
from .utils import check_guard

logger = logging.getLogger(__name__)


class InvariantError(AssertionError):
    pass


@dataclass(frozen=True)
class SatisfactionMatrix:
    '''row j lists the clauses h with y_j |= c_h.
    '''
    k: int
    rows: Tuple[FrozenSet[int], ...]

    def __post_init__(self):
        rows = tuple(frozenset(row) for row in self.rows)
        if not rows or len(rows) & (len(rows) - 1):
            raise ValueError(f'row count must be a power of two, got {len(rows)}')
        for j, row in enumerate(rows, 1):
            bad = [h for h in row if not 1 <= h <= self.k]
            if bad:
                raise ValueError(f'row {j} has columns {bad} outside [1, {self.k}]')
        object.__setattr__(self, 'rows', rows)

    @property
    def entries(self):
        return sum(len(row) for row in self.rows)

    def column(self, h):
        return sum(1 for row in self.rows if h in row)

    def covers(self, needed):
        '''some row holds every clause in `needed`.'''
        needed = set(needed)
        return any(needed <= row for row in self.rows)


@dataclass(frozen=True)
class ReductionStats:
    n: int
    k: int
    m: int
    nodes: int
    edges: int
    clause_nodes: int
    dummy_nodes: int
    bridges: Tuple[Tuple[int, int], ...]
    variant: str

    def to_lines(self):
        keys = ['n', 'k', 'm', 'nodes', 'edges', 'clause_nodes', 'dummy_nodes', 'variant']
        return [f'stat {key} {getattr(self, key)}' for key in keys]


@dataclass(frozen=True)
class ReductionArtifacts:
    formula: object
    matrix: SatisfactionMatrix
    pattern: Pattern
    graph: LabeledGraph
    roles: Tuple[NodeRole, ...]
    layers: Tuple[int, ...]
    boundary: Tuple[Tuple[int, int], ...]  # (e side, b side)
    variant: str

    @property
    def stats(self):
        return ReductionStats(
            n=self.formula.n,
            k=self.formula.k,
            m=self.pattern.m,
            nodes=self.graph.num_nodes,
            edges=self.graph.num_edges,
            clause_nodes=sum(1 for r in self.roles if r.role == Role.CLAUSE),
            dummy_nodes=sum(1 for r in self.roles if r.role in DUMMY_ROLES),
            bridges=tuple(sorted((min(u, v), max(u, v)) for u, v in self.boundary)),
            variant=self.variant,
        )

    def gadget_nodes(self, gadget):
        return [v for v, r in enumerate(self.roles) if r.gadget == gadget]

    def check(self):
        '''recount sizes against the closed forms, check layering and that
        every boundary edge is a bridge.
        '''
        g = self.graph
        if not len(self.roles) == len(self.layers) == g.num_nodes:
            raise InvariantError('roles/layers do not cover the graph')
        for u, v in g.edges:
            if abs(self.layers[u] - self.layers[v]) != 1:
                raise InvariantError(f'edge ({u}, {v}) does not join consecutive layers')
        stats = self.stats
        expected = expected_sizes(self.matrix, self.formula.n, self.variant)
        for key, value in expected.items():
            if getattr(stats, key) != value:
                raise InvariantError(f'{key}: built {getattr(stats, key)}, closed form {value}')
        bridges = find_bridges(g if not g.directed else g.undirected())
        missing = [e for e in stats.bridges if e not in bridges]
        if missing:
            raise InvariantError(f'boundary edges {missing} are not bridges')
        return stats


def _require_even(f):
    if f.n % 2:
        raise ValueError(f'n must be even, got {f.n}; apply make_even first')
    check_guard('n', f.n, constants.MAX_REDUCTION_N)


def block_strings(f):
    '''P_{x_i} for every x_i in canonical order: c where x_i does not satisfy c_h.
    '''
    xs = enumerate_half_assignments(f.n, Half.FIRST)
    return [''.join(D if half_satisfies(x, clause, f.n) else C for clause in f.clauses) for x in xs]


def build_pattern(f):
    _require_even(f)
    return Pattern(E + ''.join(B + w + E for w in block_strings(f)) + B)


def build_satisfaction_matrix(f):
    _require_even(f)
    ys = enumerate_half_assignments(f.n, Half.SECOND)
    rows = [frozenset(h for h, clause in enumerate(f.clauses, 1) if half_satisfies(y, clause, f.n)) for y in ys]
    return SatisfactionMatrix(f.k, tuple(rows))


@dataclass(frozen=True)
class Geometry:
    '''layer offsets inside one block, relative to its b node.
    the degree-3 layout pads n/2 dummies after b and before e and puts two
    pair dummies between consecutive columns.
    '''
    k: int
    half: int
    degree3: bool = False

    @property
    def pad(self):
        return self.half if self.degree3 else 0

    @property
    def stride(self):
        return 3 if self.degree3 else 1

    def column(self, h):
        return self.pad + 1 + (h - 1) * self.stride

    @property
    def width(self):
        return self.column(self.k) + self.pad + 2


@dataclass
class _Builder:
    labels: List[str] = field(default_factory=list)
    roles: List[NodeRole] = field(default_factory=list)
    layers: List[int] = field(default_factory=list)
    edges: List[Tuple[int, int]] = field(default_factory=list)
    boundary: List[Tuple[int, int]] = field(default_factory=list)

    def node(self, label, role, layer):
        self.labels.append(label)
        self.roles.append(role)
        self.layers.append(layer)
        return len(self.labels) - 1

    def edge(self, u, v):
        self.edges.append((u, v))

    def bridge(self, u, v):
        self.edges.append((u, v))
        self.boundary.append((u, v))

    def graph(self):
        return LabeledGraph(self.labels, self.edges, directed=False)


def _add_row(b, geo, base, gadget, j, clause_columns):
    '''d_{j,h} for every column, c_{j,h} where h is in clause_columns, with
    all four links (or the pair dummies) between consecutive columns.
    returns the column-1 and column-k nodes.
    '''
    first = prev = None
    for h in range(1, geo.k + 1):
        if prev is not None and geo.degree3:
            layer = base + geo.column(h - 1)
            f1 = b.node(D, NodeRole(Role.PAIR_DUMMY, gadget, j, h - 1), layer + 1)
            f2 = b.node(D, NodeRole(Role.PAIR_DUMMY, gadget, j, h - 1), layer + 2)
            for x in prev:
                b.edge(x, f1)
            b.edge(f1, f2)
            prev = [f2]
        layer = base + geo.column(h)
        col = [b.node(D, NodeRole(Role.DUMMY, gadget, j, h), layer)]
        if h in clause_columns:
            col.append(b.node(C, NodeRole(Role.CLAUSE, gadget, j, h), layer))
        if prev is None:
            first = col
        else:
            for x in prev:
                for y in col:
                    b.edge(x, y)
        prev = col
    return first, prev


def _add_tree(b, root, depth, gadget, towards_root):
    '''complete binary tree of d dummies hanging off root, 2^depth leaves.
    towards_root=+1 grows to the right (b side), -1 to the left (e side).
    '''
    level = [root]
    root_layer = b.layers[root]
    for t in range(1, depth + 1):
        nxt = []
        for parent in level:
            for _ in range(2):
                child = b.node(D, NodeRole(Role.TREE_DUMMY, gadget), root_layer + towards_root * t)
                if towards_root > 0:
                    b.edge(parent, child)
                else:
                    b.edge(child, parent)
                nxt.append(child)
        level = nxt
    return level


def _add_gf(b, matrix, geo, base):
    rows = len(matrix.rows)
    if geo.degree3 and rows != 1 << geo.half:
        raise ValueError(f'degree-3 G_F needs 2^{geo.half} rows, got {rows}')
    begin = b.node(B, NodeRole(Role.BEGIN, Gadget.GF), base)
    left = _add_tree(b, begin, geo.half, Gadget.GF, 1) if geo.degree3 else None
    ends = []
    for j, row in enumerate(matrix.rows, 1):
        first, last = _add_row(b, geo, base, Gadget.GF, j, row)
        for y in first:
            b.edge(left[j - 1] if geo.degree3 else begin, y)
        ends.append(last)
    end = b.node(E, NodeRole(Role.END, Gadget.GF), base + geo.width - 1)
    right = _add_tree(b, end, geo.half, Gadget.GF, -1) if geo.degree3 else None
    for j, last in enumerate(ends):
        for x in last:
            b.edge(x, right[j] if geo.degree3 else end)
    return begin, end


def _add_gu_copy(b, geo, base, gadget, i):
    begin = b.node(B, NodeRole(Role.BEGIN, gadget, i), base)
    left = begin
    for t in range(1, geo.pad + 1):
        x = b.node(D, NodeRole(Role.TREE_DUMMY, gadget, i), base + t)
        b.edge(left, x)
        left = x
    first, right = _add_row(b, geo, base, gadget, i, range(1, geo.k + 1))
    for y in first:
        b.edge(left, y)
    last_layer = base + geo.width - 1
    for t in range(geo.pad, 0, -1):
        x = b.node(D, NodeRole(Role.TREE_DUMMY, gadget, i), last_layer - t)
        for y in right:
            b.edge(y, x)
        right = [x]
    end = b.node(E, NodeRole(Role.END, gadget, i), last_layer)
    for y in right:
        b.edge(y, end)
    return begin, end


def _add_gu(b, geo, base, gadget, copies):
    first = prev = None
    for i in range(1, copies + 1):
        begin, end = _add_gu_copy(b, geo, base + (i - 1) * geo.width, gadget, i)
        if prev is None:
            first = begin
        else:
            b.bridge(prev, begin)
        prev = end
    return first, prev


def gadget_gf_from_matrix(matrix, half=None, degree3=False):
    '''G_F alone, from an explicit satisfaction matrix.
    '''
    half = (len(matrix.rows).bit_length() - 1) if half is None else half
    b = _Builder()
    _add_gf(b, matrix, Geometry(matrix.k, half, degree3), 0)
    return b.graph(), tuple(b.roles)


def build_gadget_gf(f, degree3=False):
    return gadget_gf_from_matrix(build_satisfaction_matrix(f), f.n // 2, degree3)


def build_gadget_gu(f, copies=None, gadget=Gadget.GU1, degree3=False):
    _require_even(f)
    half = f.n // 2
    copies = (1 << half) - 1 if copies is None else copies
    if copies < 1:
        raise ValueError(f'need at least one copy, got {copies}')
    b = _Builder()
    _add_gu(b, Geometry(f.k, half, degree3), 0, gadget, copies)
    return b.graph(), tuple(b.roles)


def assemble(f, pattern, variant, degree3=False, check=True):
    '''G_U^(1), then u, G_F, G_U^(2) and z, in that id order.
    '''
    _require_even(f)
    matrix = build_satisfaction_matrix(f)
    geo = Geometry(f.k, f.n // 2, degree3)
    copies = (1 << geo.half) - 1
    b = _Builder()
    gu1_begin, gu1_end = _add_gu(b, geo, 1, Gadget.GU1, copies)
    u = b.node(E, NodeRole(Role.END, Gadget.EXTREMAL), 0)
    gf_begin, gf_end = _add_gf(b, matrix, geo, 1 + copies * geo.width)
    gu2_begin, gu2_end = _add_gu(b, geo, 1 + (copies + 1) * geo.width, Gadget.GU2, copies)
    z = b.node(B, NodeRole(Role.BEGIN, Gadget.EXTREMAL), 1 + (2 * copies + 1) * geo.width)
    b.bridge(u, gu1_begin)
    b.bridge(gu1_end, gf_begin)
    b.bridge(gf_end, gu2_begin)
    b.bridge(gu2_end, z)
    art = ReductionArtifacts(
        formula=f,
        matrix=matrix,
        pattern=pattern,
        graph=b.graph(),
        roles=tuple(b.roles),
        layers=tuple(b.layers),
        boundary=tuple(b.boundary),
        variant=variant,
    )
    if check:
        art.check()
    logger.debug('built %s instance: n=%d k=%d m=%d |V|=%d |E|=%d', variant, f.n, f.k,
                 art.pattern.m, art.graph.num_nodes, art.graph.num_edges)
    return art


def build_full_graph(f, check=True):
    return assemble(f, build_pattern(f), constants.VARIANT_BASE, degree3=False, check=check)


def expected_sizes(matrix, n, variant=constants.VARIANT_BASE):
    '''closed-form m, |V|, |E|, clause and dummy node counts of a variant.
    '''
    k = matrix.k
    half = n // 2
    rows = 1 << half
    copies = rows - 1
    entries = matrix.entries
    ends = matrix.column(1) + matrix.column(k)
    has = [[h in row for h in range(1, k + 2)] for row in matrix.rows]
    clause_nodes = 2 * copies * k + entries
    begin_end = 4 * copies + 4

    if variant == constants.VARIANT_BASE:
        links = sum((1 + has[j][h]) * (1 + has[j][h + 1]) for j in range(rows) for h in range(k - 1))
        gf_nodes = 2 + k * rows + entries
        gf_edges = 2 * rows + ends + links
        nodes = 2 * copies * (2 * k + 2) + gf_nodes + 2
        edges = 2 * (copies * 4 * k + copies - 1) + gf_edges + 4
        m = (k + 2) * rows + 2
        return dict(m=m, nodes=nodes, edges=edges, clause_nodes=clause_nodes,
                    dummy_nodes=nodes - clause_nodes - begin_end)

    links = sum(3 + has[j][h] + has[j][h + 1] for j in range(rows) for h in range(k - 1))
    trees = 2 * (2 * rows - 2)
    gf_nodes = 2 + trees + k * rows + entries + 2 * (k - 1) * rows
    gf_edges = trees + 2 * rows + ends + links
    nodes = 2 * copies * (2 * k + 2 * (k - 1) + n + 2) + gf_nodes + 2
    edges = 2 * (copies * (n + 5 * k - 1) + copies - 1) + gf_edges + 4
    m = (n + 3 * k) * rows + 2
    dummy_nodes = nodes - clause_nodes - begin_end
    if variant in (constants.VARIANT_DEGREE3, constants.VARIANT_DEGREE3_DAG):
        return dict(m=m, nodes=nodes, edges=edges, clause_nodes=clause_nodes, dummy_nodes=dummy_nodes)
    if variant in (constants.VARIANT_BINARY, constants.VARIANT_BINARY_DAG):
        wide = nodes - begin_end
        return dict(
            m=4 * (rows + 1) + 4 * (m - 2 * (rows + 1)),
            nodes=2 * begin_end + 4 * wide,
            edges=edges + begin_end + 3 * wide,
            clause_nodes=clause_nodes,
            dummy_nodes=dummy_nodes,
        )
    raise ValueError(f'unknown variant {variant!r}')


def size_bound_holds(stats, constant=64):
    '''|E| and m within constant * (k + 2) * 2^{n/2}, n/2 and k folded into the
    degree-3 and binary widths.
    '''
    budget = constant * (stats.k + 2) * (stats.n // 2 + 1) * (1 << stats.n // 2)
    return stats.edges <= budget and stats.m <= budget


def write_manifest(art):
    stats = art.stats
    lines = stats.to_lines()
    lines += [role.to_line(v) for v, role in enumerate(art.roles)]
    lines += [f'bridge {u} {v}' for u, v in stats.bridges]
    return '\n'.join(lines) + '\n'
