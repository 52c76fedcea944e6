'''CNF formulas: DIMACS input/output, half assignments and a truth-table oracle.
'''
import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from . import constants
from .utils import check_guard

logger = logging.getLogger(__name__)

Clause = Tuple[int, ...]


class DimacsFormatError(ValueError):
    def __init__(self, lineno, message):
        super().__init__(f'line {lineno}: {message}')
        self.lineno = lineno


@dataclass(frozen=True)
class CnfFormula:
    '''n variables v_1..v_n and k clauses of signed 1-based literals.
    duplicate literals inside a clause are dropped, tautologies rejected.
    '''
    n: int
    clauses: Tuple[Clause, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f'number of variables must be positive, got {self.n}')
        clauses = []
        for idx, clause in enumerate(self.clauses, 1):
            clause = tuple(dict.fromkeys(int(lit) for lit in clause))
            if not clause:
                raise ValueError(f'clause {idx} is empty')
            for lit in clause:
                if lit == 0 or abs(lit) > self.n:
                    raise ValueError(f'clause {idx}: literal {lit} outside [1, {self.n}]')
                if -lit in clause:
                    raise ValueError(f'clause {idx} {list(clause)} is tautological')
            clauses.append(clause)
        if not clauses:
            raise ValueError('a formula needs at least one clause')
        object.__setattr__(self, 'clauses', tuple(clauses))

    @property
    def k(self):
        return len(self.clauses)


class Half(str, Enum):
    FIRST = 'FirstHalf'
    SECOND = 'SecondHalf'


@dataclass(frozen=True)
class HalfAssignment:
    '''values of v_1..v_{n/2} (first half) or v_{n/2+1}..v_n (second half).
    index is 1-based; bits[t] is bit t of index-1.
    '''
    which: Half
    bits: Tuple[bool, ...]
    index: int

    @classmethod
    def from_index(cls, which, index, half):
        if not 1 <= index <= 1 << half:
            raise ValueError(f'index {index} outside [1, {1 << half}]')
        return cls(which, tuple(bool((index - 1) >> t & 1) for t in range(half)), index)

    @classmethod
    def from_bits(cls, which, bits):
        return cls(which, tuple(bits), 1 + sum(1 << t for t, bit in enumerate(bits) if bit))

    def offset(self):
        '''number of variables preceding this half.'''
        return 0 if self.which == Half.FIRST else len(self.bits)


def parse_dimacs(text):
    if isinstance(text, (bytes, bytearray)):
        text = text.decode('utf-8')
    n = expected = None
    header_line = None
    clauses = []
    current = []
    current_start = None
    lineno = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith('c'):
            continue
        if line.startswith('%'):
            break
        if line.startswith('p'):
            parts = line.split()
            if header_line is not None:
                raise DimacsFormatError(lineno, 'second problem line')
            if len(parts) != 4 or parts[1] != 'cnf':
                raise DimacsFormatError(lineno, f'invalid problem line {line!r}')
            try:
                n, expected = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsFormatError(lineno, f'invalid problem line {line!r}') from None
            if n < 1 or expected < 1:
                raise DimacsFormatError(lineno, 'variable and clause counts must be positive')
            header_line = lineno
            continue
        if header_line is None:
            raise DimacsFormatError(lineno, 'clause before the "p cnf" header')
        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise DimacsFormatError(lineno, f'invalid literal {token!r}') from None
            if current_start is None:
                current_start = lineno
            if lit == 0:
                _close_clause(current, len(clauses) + 1, current_start, n)
                clauses.append(tuple(dict.fromkeys(current)))
                current, current_start = [], None
            elif abs(lit) > n:
                raise DimacsFormatError(lineno, f'literal {lit} out of range [1, {n}]')
            else:
                current.append(lit)
    if header_line is None:
        raise DimacsFormatError(max(lineno, 1), 'missing "p cnf" header')
    if current:
        # last clause without its terminating 0
        _close_clause(current, len(clauses) + 1, current_start, n)
        clauses.append(tuple(dict.fromkeys(current)))
    if len(clauses) != expected:
        raise DimacsFormatError(header_line, f'header declares {expected} clauses, found {len(clauses)}')
    f = CnfFormula(n, tuple(clauses))
    logger.debug('parsed formula with n=%d k=%d', f.n, f.k)
    return f


def _close_clause(literals, idx, lineno, n):
    if not literals:
        raise DimacsFormatError(lineno, f'clause {idx} is empty')
    for lit in literals:
        if -lit in literals:
            raise DimacsFormatError(lineno, f'clause {idx} {literals} is tautological')


def write_dimacs(f):
    lines = [f'p cnf {f.n} {f.k}']
    lines += [' '.join(str(lit) for lit in clause) + ' 0' for clause in f.clauses]
    return '\n'.join(lines) + '\n'


def make_even(f):
    '''pad with an unused variable v_{n+1} when n is odd.
    '''
    if f.n % 2 == 0:
        return f
    return CnfFormula(f.n + 1, f.clauses)


def mirror_clauses(f):
    '''c_1 .. c_{k-1} c_k c_{k-1} .. c_1: the same formula up to repeated clauses,
    with a clause order that reads the same from either end.
    '''
    return CnfFormula(f.n, f.clauses + f.clauses[-2::-1])


def enumerate_half_assignments(n, which):
    if n < 2 or n % 2:
        raise ValueError(f'n must be even and at least 2, got {n}')
    half = n // 2
    which = Half(which)
    return [HalfAssignment.from_index(which, i, half) for i in range(1, (1 << half) + 1)]


def half_satisfies(a, clause, n):
    '''true iff a literal of clause over a's half is satisfied by a.
    '''
    half = n // 2
    offset = a.offset()
    for lit in clause:
        var = abs(lit)
        if offset < var <= offset + half and a.bits[var - offset - 1] == (lit > 0):
            return True
    return False


def evaluate(f, assignment: Sequence[bool]):
    return all(any(assignment[abs(lit) - 1] == (lit > 0) for lit in clause) for clause in f.clauses)


def brute_force_sat(f) -> Optional[Tuple[bool, ...]]:
    '''first satisfying assignment in counting order (bit t of the counter is
    v_{t+1}), or None if the formula is unsatisfiable.
    '''
    check_guard('n', f.n, constants.MAX_ORACLE_N)
    shifts = np.arange(f.n, dtype=np.int64)
    total = 1 << f.n
    for start in range(0, total, constants.ORACLE_CHUNK):
        rows = np.arange(start, min(total, start + constants.ORACLE_CHUNK), dtype=np.int64)
        values = (rows[:, None] >> shifts) & 1 == 1
        ok = np.ones(len(rows), dtype=bool)
        for clause in f.clauses:
            lits = np.array(clause)
            cols = values[:, np.abs(lits) - 1]
            ok &= (cols == (lits > 0)).any(axis=1)
        hits = np.flatnonzero(ok)
        if len(hits):
            row = int(rows[hits[0]])
            return tuple(bool(row >> t & 1) for t in range(f.n))
    return None


def random_formula(n, k, rng, width=constants.CLAUSE_WIDTH):
    '''k clauses, each over 1..3 (by default) distinct variables with random signs.
    '''
    lo, hi = width
    clauses = []
    for _ in range(k):
        size = int(rng.integers(lo, min(hi, n) + 1))
        variables = rng.choice(n, size=size, replace=False) + 1
        signs = rng.integers(0, 2, size=size) * 2 - 1
        clauses.append(tuple(int(v * s) for v, s in zip(variables, signs)))
    return CnfFormula(n, tuple(clauses))


def enumerate_formulas(n, k, width=constants.CLAUSE_WIDTH):
    '''every formula with k ordered non-tautological clauses over n variables.
    '''
    lo, hi = width
    clauses = []
    for size in range(lo, min(hi, n) + 1):
        for variables in itertools.combinations(range(1, n + 1), size):
            for signs in itertools.product((1, -1), repeat=size):
                clauses.append(tuple(v * s for v, s in zip(variables, signs)))
    for combo in itertools.product(clauses, repeat=k):
        yield CnfFormula(n, combo)
