'''scaling benchmark of match_exact on reduction instances of growing n.
'''
import logging
import timeit
from dataclasses import asdict, dataclass

import numpy as np
import pandas as pd
from tqdm import tqdm

from . import constants
from .matcher import match_exact
from .reduction import InvariantError, build_full_graph, expected_sizes
from .sat import CnfFormula
from .utils import check_guard, set_random_seed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BenchRecord:
    n: int
    k: int
    m: int
    edges: int
    sat: bool
    micros: float
    repeats: int


def bench_formulas(n, k, rng):
    '''a satisfiable formula (positive literals only) and an unsatisfiable one
    ((v1) and (not v1) followed by k - 2 random clauses).'''
    if k < 2:
        raise ValueError(f'bench needs k >= 2, got {k}')

    def clause(sign):
        size = int(rng.integers(1, min(3, n) + 1))
        variables = rng.choice(n, size=size, replace=False) + 1
        if sign is None:
            signs = rng.integers(0, 2, size=size) * 2 - 1
        else:
            signs = np.full(size, sign)
        return tuple(int(v * s) for v, s in zip(variables, signs))

    sat = CnfFormula(n, tuple(clause(1) for _ in range(k)))
    unsat = CnfFormula(n, ((1,), (-1,)) + tuple(clause(None) for _ in range(k - 2)))
    return sat, unsat


def time_match(art, repeats):
    times = []
    found = None
    for _ in range(repeats):
        start = timeit.default_timer()
        found = match_exact(art.graph, art.pattern)
        times.append((timeit.default_timer() - start) * 1e6)
    return found, float(np.median(times))


def run_bench(n_min=8, n_max=14, k=8, repeats=5, seed=42, show_progress_bar=True):
    if n_min % 2 or n_max % 2 or n_min < 2 or n_min > n_max:
        raise ValueError(f'need even 2 <= n_min <= n_max, got {n_min}..{n_max}')
    check_guard('n_max', n_max, constants.MAX_BENCH_N)
    if repeats < 1:
        raise ValueError(f'repeats must be at least 1, got {repeats}')
    rng = set_random_seed(seed)
    records = []
    for n in tqdm(range(n_min, n_max + 1, 2), desc='Bench', disable=not show_progress_bar):
        for f in bench_formulas(n, k, rng):
            art = build_full_graph(f, check=False)
            expected = expected_sizes(art.matrix, n)
            if (art.pattern.m, art.graph.num_edges) != (expected['m'], expected['edges']):
                raise InvariantError(f'n={n}: built m={art.pattern.m} |E|={art.graph.num_edges}, '
                                     f'closed form m={expected["m"]} |E|={expected["edges"]}')
            found, micros = time_match(art, repeats)
            records.append(BenchRecord(n, k, art.pattern.m, art.graph.num_edges, found, micros, repeats))
            logger.info('n=%d k=%d m=%d |E|=%d sat=%s median %.0f us', n, k, art.pattern.m,
                        art.graph.num_edges, found, micros)
    return pd.DataFrame([asdict(r) for r in records], columns=constants.BENCH_COLUMNS)


def closed_form_m(n, k):
    return (k + 2) * (1 << n // 2) + 2


def in_time_band(n, ratio):
    '''None below TIME_BAND_MIN_N or without a previous timing.'''
    if n < constants.TIME_BAND_MIN_N or np.isnan(ratio):
        return None
    lo, hi = constants.TIME_RATIO_BAND
    return bool(lo <= ratio <= hi)


def scaling_ratios(df):
    '''ratios between consecutive n for the satisfiable and unsatisfiable rows.

    m_expected comes from the closed form of m. |E| depends on the drawn
    formulas and run_bench already held every row to its closed form.
    '''
    out = []
    for sat, group in df.groupby('sat', sort=True):
        group = group.sort_values('n')
        for prev, cur in zip(group.itertuples(), group.iloc[1:].itertuples()):
            time_ratio = cur.micros / prev.micros if prev.micros else float('nan')
            out.append({
                'sat': sat,
                'n': cur.n,
                'm_ratio': cur.m / prev.m,
                'm_expected': closed_form_m(cur.n, cur.k) / closed_form_m(prev.n, prev.k),
                'edges_ratio': cur.edges / prev.edges,
                'time_ratio': time_ratio,
                'in_band': in_time_band(cur.n, time_ratio),
            })
    return pd.DataFrame(out, columns=constants.RATIO_COLUMNS)
