import itertools

import numpy as np
import pytest

from pmlg.sat import (CnfFormula, DimacsFormatError, Half, HalfAssignment, brute_force_sat,
                      enumerate_formulas, enumerate_half_assignments, evaluate, half_satisfies,
                      make_even, mirror_clauses, parse_dimacs, random_formula, write_dimacs)
from pmlg.utils import GuardError


def test_parse_dimacs():
    f = parse_dimacs(b'p cnf 2 2\n1 2 0\n-1 -2 0\n')
    assert f.n == 2
    assert f.clauses == ((1, 2), (-1, -2))
    assert f.k == 2


def test_parse_dimacs_comments_and_layout():
    text = 'c a formula\nc\np cnf 3 2\n1 -3\n2 0 -1\n0\n%\n0\n'
    f = parse_dimacs(text)
    assert f.clauses == ((1, -3, 2), (-1,))


def test_parse_dimacs_drops_duplicate_literals():
    assert parse_dimacs('p cnf 2 1\n1 1 2 0\n').clauses == ((1, 2),)


@pytest.mark.parametrize('text, lineno, message', [
    ('p cnf 2 1\n1 -1 0\n', 2, 'tautological'),
    ('p cnf 4 3\n1 2 0\n3 4 0\n', 1, 'declares 3'),
    ('1 2 0\n', 1, 'header'),
    ('c nothing\n', 1, 'missing'),
    ('p cnf 2 1\n3 0\n', 2, 'out of range'),
    ('p cnf 2 2\n1 0\n0\n', 3, 'empty'),
    ('p cnf 2 1\n1 x 0\n', 2, 'invalid literal'),
    ('p cnf two 1\n', 1, 'invalid problem line'),
])
def test_parse_dimacs_errors(text, lineno, message):
    with pytest.raises(DimacsFormatError) as err:
        parse_dimacs(text)
    assert err.value.lineno == lineno
    assert message in str(err.value)


def test_formula_invariants():
    with pytest.raises(ValueError):
        CnfFormula(2, ())
    with pytest.raises(ValueError):
        CnfFormula(2, ((1, -1),))
    with pytest.raises(ValueError):
        CnfFormula(2, ((3,),))
    with pytest.raises(ValueError):
        CnfFormula(2, ((),))


def test_write_dimacs_round_trip(rng):
    for _ in range(20):
        f = random_formula(int(rng.integers(1, 8)), int(rng.integers(1, 6)), rng)
        assert parse_dimacs(write_dimacs(f)) == f


def test_make_even():
    f = CnfFormula(4, ((1, 2), (-3,)))
    assert make_even(f) is f
    g = make_even(CnfFormula(3, ((1, 2), (-3,))))
    assert g.n == 4
    assert g.clauses == ((1, 2), (-3,))


def test_mirror_clauses():
    f = CnfFormula(3, ((1,), (-2, 3), (2,)))
    g = mirror_clauses(f)
    assert g.n == 3
    assert g.clauses == ((1,), (-2, 3), (2,), (-2, 3), (1,))
    assert g.clauses == g.clauses[::-1]
    single = CnfFormula(2, ((1, -2),))
    assert mirror_clauses(single) == single


def test_mirror_clauses_keeps_satisfiability(rng):
    for _ in range(100):
        f = random_formula(4, int(rng.integers(1, 7)), rng)
        assert (brute_force_sat(mirror_clauses(f)) is None) == (brute_force_sat(f) is None)


def test_make_even_keeps_satisfiability(rng):
    for _ in range(200):
        n = int(rng.choice([1, 3, 5, 7]))
        f = random_formula(n, int(rng.integers(1, 8)), rng)
        witness = brute_force_sat(f)
        padded = brute_force_sat(make_even(f))
        assert (witness is None) == (padded is None)
        if witness is not None:
            assert padded == witness + (False,)


def test_half_assignments_counting_order():
    xs = enumerate_half_assignments(2, Half.FIRST)
    assert [x.bits for x in xs] == [(False,), (True,)]
    xs = enumerate_half_assignments(4, Half.FIRST)
    assert [x.bits for x in xs] == [(False, False), (True, False), (False, True), (True, True)]
    assert [x.index for x in xs] == [1, 2, 3, 4]


@pytest.mark.parametrize('n', [2, 4, 6, 8])
def test_half_assignment_count_and_bijection(n):
    for which in Half:
        assignments = enumerate_half_assignments(n, which)
        assert len(assignments) == 2 ** (n // 2)
        assert len({a.bits for a in assignments}) == len(assignments)
        for a in assignments:
            assert HalfAssignment.from_bits(which, a.bits) == a


@pytest.mark.parametrize('n', [0, 1, 3])
def test_half_assignments_reject_odd_n(n):
    with pytest.raises(ValueError):
        enumerate_half_assignments(n, Half.FIRST)


def test_half_satisfies_examples():
    x = HalfAssignment.from_index(Half.FIRST, 2, 1)
    assert x.bits == (True,)
    assert half_satisfies(x, (1, 2), 2)
    y = HalfAssignment.from_index(Half.SECOND, 1, 1)
    assert not half_satisfies(y, (1, 2), 2)
    # literals over the other half never count
    assert not half_satisfies(HalfAssignment.from_index(Half.SECOND, 2, 1), (1,), 2)


def test_half_decomposition(rng):
    for _ in range(50):
        f = random_formula(4, int(rng.integers(1, 6)), rng)
        for x, y in itertools.product(enumerate_half_assignments(4, Half.FIRST),
                                      enumerate_half_assignments(4, Half.SECOND)):
            full = x.bits + y.bits
            for clause in f.clauses:
                single = CnfFormula(4, (clause,))
                assert evaluate(single, full) == (half_satisfies(x, clause, 4) or half_satisfies(y, clause, 4))


def test_brute_force_sat_examples(xor_formula):
    assert brute_force_sat(CnfFormula(1, ((1,), (-1,)))) is None
    assert brute_force_sat(xor_formula) == (True, False)


def test_brute_force_sat_matches_truth_table(rng):
    for _ in range(100):
        f = random_formula(int(rng.integers(1, 7)), int(rng.integers(1, 10)), rng)
        table = [bits for bits in itertools.product((False, True), repeat=f.n)
                 if evaluate(f, bits[::-1])]
        witness = brute_force_sat(f)
        if not table:
            assert witness is None
        else:
            assert witness is not None and evaluate(f, witness)
            # counting order: bit t of the counter is v_{t+1}
            assert witness == min(table)[::-1]


def test_brute_force_sat_guard():
    with pytest.raises(GuardError):
        brute_force_sat(CnfFormula(25, ((1,),)))


def test_brute_force_sat_crosses_chunks():
    # only v1..v17 all true satisfies, row 2^17 - 1 sits in the second chunk
    f = CnfFormula(17, tuple((v,) for v in range(1, 18)))
    assert brute_force_sat(f) == (True,) * 17


def test_random_formula_shape(rng):
    for _ in range(100):
        n = int(rng.integers(1, 9))
        f = random_formula(n, 5, rng)
        assert f.k == 5
        for clause in f.clauses:
            assert 1 <= len(clause) <= min(3, n)
            assert len({abs(lit) for lit in clause}) == len(clause)


def test_enumerate_formulas_counts():
    assert sum(1 for _ in enumerate_formulas(2, 2)) == 64
    assert sum(1 for _ in enumerate_formulas(2, 1, width=(1, 1))) == 4
    both = [brute_force_sat(f) is not None for f in enumerate_formulas(2, 2)]
    assert any(both) and not all(both)


def test_set_random_seed_is_reproducible():
    from pmlg.utils import set_random_seed
    a = set_random_seed(7).integers(0, 1000, size=5)
    b = set_random_seed(7).integers(0, 1000, size=5)
    assert np.array_equal(a, b)
