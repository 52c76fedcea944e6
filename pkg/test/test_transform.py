import networkx as nx
import pytest

from pmlg import constants
from pmlg.evaluator import build_variants
from pmlg.graph import Role, is_dag, max_degree
from pmlg.matcher import match_exact
from pmlg.reduction import build_full_graph, build_gadget_gf, expected_sizes
from pmlg.sat import CnfFormula, brute_force_sat, enumerate_formulas, mirror_clauses, random_formula
from pmlg.transform import (build_revised_pattern, build_variant, encode_binary, encode_string, orient_dag,
                            pattern_triples, reverse_reading_cover, revise_block, to_degree3,
                            verify_encoding_table)


def test_encoding_words():
    assert encode_string('eb') == '0110'
    assert encode_string('be') == '1001'
    assert encode_string('ceb') == '00000110'
    assert encode_string('ccc') == '0' * 12


def test_revised_block():
    assert 'b' + revise_block('cd', 1) + 'e' == 'bdcdddde'
    assert revise_block('c', 2) == 'ddcdd'


def test_revised_pattern_of_xor(xor_formula):
    p = build_revised_pattern(xor_formula)
    assert p.text == 'ebdcddddebddddcdeb'
    assert p.m == (2 + 3 * 2) * 2 + 2


def test_wrong_input_variants(xor_formula):
    base = build_full_graph(xor_formula)
    deg3 = to_degree3(base)
    with pytest.raises(ValueError):
        to_degree3(deg3)
    with pytest.raises(ValueError):
        encode_binary(base)
    with pytest.raises(ValueError):
        orient_dag(base)
    with pytest.raises(ValueError):
        orient_dag(orient_dag(deg3))


def test_degree3_sizes_of_xor(xor_formula):
    deg3 = to_degree3(build_full_graph(xor_formula))
    s = deg3.stats
    assert s.variant == constants.VARIANT_DEGREE3
    assert (s.nodes, s.edges, s.m) == (38, 44, 18)
    literal = encode_binary(deg3, mirror=False).stats
    assert (literal.k, literal.nodes, literal.edges, literal.m) == (2, 136, 142, 60)
    # clause order (1 2) (-1 -2) (1 2)
    binary = encode_binary(deg3)
    s = binary.stats
    assert binary.formula == mirror_clauses(xor_formula)
    assert (s.k, s.nodes, s.edges, s.m) == (3, 196, 205, 84)


def test_to_degree3_reads_only_the_formula(xor_formula):
    base = build_full_graph(xor_formula)
    deg3 = to_degree3(base)
    assert deg3.formula is base.formula
    assert deg3.matrix == base.matrix
    assert deg3.pattern == build_revised_pattern(xor_formula)
    assert deg3.graph.num_nodes != base.graph.num_nodes


def test_degree_bound(rng):
    for _ in range(30):
        n = int(rng.choice([2, 4, 6]))
        f = random_formula(n, int(rng.integers(1, 7)), rng)
        deg3 = to_degree3(build_full_graph(f))
        assert max_degree(deg3.graph)[0] <= 3
        assert max_degree(encode_binary(deg3).graph)[0] <= 3


def test_degree3_roles(rng):
    f = random_formula(4, 3, rng)
    deg3 = to_degree3(build_full_graph(f))
    roles = [r.role for r in deg3.roles]
    rows = 4
    copies = rows - 1
    # G_F trees plus the G_U chains
    assert roles.count(Role.TREE_DUMMY) == 2 * (2 * rows - 2) + 2 * copies * 4
    assert roles.count(Role.PAIR_DUMMY) == 2 * (3 - 1) * (rows + 2 * copies)


def test_shortest_block_path_in_degree3_gf(rng):
    for n in (2, 4):
        f = random_formula(n, 3, rng)
        gf, roles = build_gadget_gf(f, degree3=True)
        begin = next(v for v, r in enumerate(roles) if r.role == Role.BEGIN)
        end = next(v for v, r in enumerate(roles) if r.role == Role.END)
        nodes = nx.shortest_path_length(gf.to_networkx(), begin, end) + 1
        assert nodes == n + 3 * f.k


def test_binary_alphabet_and_pattern(rng):
    f = random_formula(4, 3, rng)
    deg3 = to_degree3(build_full_graph(f))
    binary = encode_binary(deg3)
    mirrored = to_degree3(build_full_graph(mirror_clauses(f)))
    assert set(binary.graph.labels) <= set(constants.BINARY_ALPHABET)
    assert binary.graph.is_unit
    assert not binary.graph.directed
    assert binary.pattern.text == encode_string(mirrored.pattern.text)
    assert constants.FORBIDDEN_WORD not in binary.pattern.text
    assert 'be' not in deg3.pattern.text
    heads = [r for r in binary.roles if r.role != Role.BIT_CHAIN]
    assert heads == list(mirrored.roles)
    assert binary.stats.clause_nodes == mirrored.stats.clause_nodes
    literal = encode_binary(deg3, mirror=False)
    assert literal.pattern.text == encode_string(deg3.pattern.text)
    assert [r for r in literal.roles if r.role != Role.BIT_CHAIN] == list(deg3.roles)


def test_mirrored_formula_is_encoded_as_given(rng):
    f = mirror_clauses(random_formula(4, 3, rng))
    deg3 = to_degree3(build_full_graph(f))
    first, second = encode_binary(deg3), encode_binary(deg3, mirror=False)
    assert first.formula == f
    assert first.pattern == second.pattern
    assert first.graph.labels == second.graph.labels and first.graph.edges == second.graph.edges


def test_binary_sizes_match_closed_forms(rng):
    for _ in range(10):
        f = random_formula(4, int(rng.integers(1, 5)), rng)
        binary = encode_binary(to_degree3(build_full_graph(f)))
        s = binary.stats
        expected = expected_sizes(binary.matrix, 4, constants.VARIANT_BINARY)
        assert {key: getattr(s, key) for key in expected} == expected


def test_dag_orientation(rng):
    for _ in range(20):
        n = int(rng.choice([2, 4]))
        f = random_formula(n, int(rng.integers(1, 5)), rng)
        deg3 = to_degree3(build_full_graph(f))
        for art in (orient_dag(deg3), orient_dag(encode_binary(deg3))):
            assert art.graph.directed
            assert is_dag(art.graph)
            assert max_degree(art.graph)[1] <= 3
            for u, v in art.graph.edges:
                assert art.layers[v] == art.layers[u] + 1


def test_dag_variants(xor_formula):
    deg3 = to_degree3(build_full_graph(xor_formula))
    assert orient_dag(deg3).variant == constants.VARIANT_DEGREE3_DAG
    assert orient_dag(encode_binary(deg3)).variant == constants.VARIANT_BINARY_DAG


def test_build_variant(xor_formula):
    for variant in (constants.VARIANT_BASE, constants.VARIANT_DEGREE3, constants.VARIANT_DEGREE3_DAG,
                    constants.VARIANT_BINARY, constants.VARIANT_BINARY_DAG):
        assert build_variant(xor_formula, variant).variant == variant
    with pytest.raises(ValueError):
        build_variant(xor_formula, 'Ternary')


VARIANTS = (constants.VARIANT_DEGREE3, constants.VARIANT_DEGREE3_DAG,
            constants.VARIANT_BINARY, constants.VARIANT_BINARY_DAG)


def test_variants_agree_with_sat_exhaustively():
    for f in enumerate_formulas(2, 2):
        sat = brute_force_sat(f) is not None
        for variant in VARIANTS:
            art = build_variant(f, variant)
            assert match_exact(art.graph, art.pattern) == sat, (f, variant)


def test_variants_agree_with_sat_three_clauses():
    formulas = list(enumerate_formulas(2, 3))
    assert len(formulas) == 512
    for f in formulas:
        sat = brute_force_sat(f) is not None
        arts = build_variants(f, VARIANTS)
        assert set(arts) == set(VARIANTS)
        for variant, art in arts.items():
            assert match_exact(art.graph, art.pattern) == sat, (f, variant)


def test_unmirrored_binary_reads_blocks_backwards():
    # unsat, but x = (v1 false) leaves only c_1 open and y = (v2 true) covers c_3
    f = CnfFormula(2, ((1,), (-1,), (-1, 2)))
    assert brute_force_sat(f) is None
    assert reverse_reading_cover(f)
    deg3 = to_degree3(build_full_graph(f))
    literal = encode_binary(deg3, mirror=False)
    assert match_exact(literal.graph, literal.pattern)
    swapped = deg3.pattern.text[::-1].translate(str.maketrans('be', 'eb'))
    assert encode_string(swapped) == literal.pattern.text[::-1]
    assert match_exact(deg3.graph, swapped)
    assert not match_exact(deg3.graph, deg3.pattern)
    assert not match_exact(orient_dag(literal).graph, literal.pattern)
    binary = encode_binary(deg3)
    assert not match_exact(binary.graph, binary.pattern)


def test_unmirrored_binary_answers_sat_or_reverse_cover():
    wrong = 0
    for f in enumerate_formulas(2, 3):
        sat = brute_force_sat(f) is not None
        literal = encode_binary(to_degree3(build_full_graph(f)), mirror=False)
        hit = match_exact(literal.graph, literal.pattern)
        assert hit == (sat or reverse_reading_cover(f)), f
        wrong += hit != sat
    assert wrong == 32


def test_variants_agree_with_sat_random(rng):
    for _ in range(40):
        f = random_formula(4, int(rng.integers(1, 5)), rng)
        sat = brute_force_sat(f) is not None
        for variant in VARIANTS:
            art = build_variant(f, variant)
            assert match_exact(art.graph, art.pattern) == sat


@pytest.mark.slow
def test_variants_agree_with_sat_many(rng):
    for _ in range(200):
        n = int(rng.choice([2, 4, 6]))
        f = random_formula(n, int(rng.integers(1, 7)), rng)
        sat = brute_force_sat(f) is not None
        for variant in VARIANTS:
            art = build_variant(f, variant)
            assert match_exact(art.graph, art.pattern) == sat


def test_encoding_table():
    report = verify_encoding_table()
    assert report.ok
    assert report.sync_checked == 64
    assert report.shape_checked == len(pattern_triples()) == 22
    assert report.to_lines() == ['encoding sync 64/64', 'encoding shapes 22/22']
