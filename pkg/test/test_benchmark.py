import pytest

from pmlg import constants
from pmlg.benchmark import bench_formulas, in_time_band, run_bench, scaling_ratios
from pmlg.reduction import build_full_graph, build_satisfaction_matrix, expected_sizes
from pmlg.sat import brute_force_sat
from pmlg.utils import GuardError, set_random_seed


def test_bench_formulas_have_both_answers(rng):
    for n in (2, 4, 6):
        sat, unsat = bench_formulas(n, 5, rng)
        assert sat.k == unsat.k == 5
        assert brute_force_sat(sat) is not None
        assert brute_force_sat(unsat) is None
        assert all(lit > 0 for clause in sat.clauses for lit in clause)


def test_bench_formulas_need_two_clauses(rng):
    with pytest.raises(ValueError):
        bench_formulas(4, 1, rng)


def test_run_bench_rows():
    df = run_bench(n_min=2, n_max=6, k=4, repeats=2, seed=1, show_progress_bar=False)
    assert list(df.columns) == constants.BENCH_COLUMNS
    assert len(df) == 6
    assert sorted(df['sat'].unique()) == [False, True]
    for row in df.itertuples():
        assert row.m == (row.k + 2) * 2 ** (row.n // 2) + 2
        assert row.repeats == 2
        assert row.micros >= 0


def test_bench_edges_follow_closed_form(rng):
    for f in bench_formulas(4, 4, rng):
        art = build_full_graph(f)
        assert art.graph.num_edges == expected_sizes(art.matrix, 4)['edges']


def test_scaling_ratios():
    df = run_bench(n_min=2, n_max=6, k=3, repeats=1, seed=2, show_progress_bar=False)
    ratios = scaling_ratios(df)
    assert list(ratios.columns) == constants.RATIO_COLUMNS
    assert len(ratios) == 4
    assert (ratios['m_ratio'] == ratios['m_expected']).all()
    assert list(ratios['m_expected']) == [22 / 12, 42 / 22] * 2

    rng = set_random_seed(2)
    expected = {}
    for n in (2, 4, 6):
        for f in bench_formulas(n, 3, rng):
            sizes = expected_sizes(build_satisfaction_matrix(f), n)
            expected[n, brute_force_sat(f) is not None] = sizes
    for row in df.itertuples():
        assert (row.m, row.edges) == (expected[row.n, row.sat]['m'], expected[row.n, row.sat]['edges'])
    for row in ratios.itertuples():
        cur, prev = expected[row.n, row.sat], expected[row.n - 2, row.sat]
        assert row.edges_ratio == cur['edges'] / prev['edges']
    # below TIME_BAND_MIN_N the band is not judged
    assert ratios['in_band'].isna().all()


@pytest.mark.parametrize('n, ratio, expected', [
    (10, 4.0, True),
    (12, 2.5, True),
    (12, 6.0, True),
    (12, 2.4, False),
    (14, 6.5, False),
    (8, 4.0, None),
    (10, float('nan'), None),
])
def test_in_time_band(n, ratio, expected):
    assert in_time_band(n, ratio) is expected


@pytest.mark.parametrize('n_min, n_max', [(3, 6), (4, 2), (0, 4)])
def test_run_bench_rejects_ranges(n_min, n_max):
    with pytest.raises(ValueError):
        run_bench(n_min=n_min, n_max=n_max, show_progress_bar=False)


def test_run_bench_guard():
    with pytest.raises(GuardError):
        run_bench(n_min=2, n_max=18, show_progress_bar=False)
