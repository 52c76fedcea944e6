import itertools
import logging
import os
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from . import constants
from .graph import Gadget, Role, find_bridges, is_dag, max_degree, serialize_graph
from .matcher import enumerate_walks, match_exact
from .reduction import (InvariantError, build_full_graph, build_gadget_gf,
                        block_strings, size_bound_holds)
from .sat import (brute_force_sat, enumerate_formulas, make_even, mirror_clauses,
                  random_formula, write_dimacs)
from .transform import (build_revised_pattern, encode_binary, encode_string, orient_dag, reverse_reading_cover,
                        to_degree3, verify_encoding_table)
from .utils import check_guard, digest, set_random_seed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CampaignConfig:
    '''n_values may hold odd sizes, they are padded with make_even.
    variants are the pipeline stages that get matched against the SAT oracle.
    '''
    n_values: Tuple[int, ...] = (4,)
    k_range: Tuple[int, int] = (3, 3)
    trials: int = 100
    seed: int = 42
    variants: Tuple[str, ...] = tuple(constants.VARIANT_COLUMNS)
    width: Tuple[int, int] = constants.CLAUSE_WIDTH
    exhaustive: bool = False
    workers: int = 1
    dump_dir: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, 'n_values', tuple(int(n) for n in self.n_values))
        object.__setattr__(self, 'k_range', tuple(int(k) for k in self.k_range))
        object.__setattr__(self, 'variants', tuple(self.variants))
        object.__setattr__(self, 'width', tuple(int(w) for w in self.width))
        if not self.n_values:
            raise ValueError('no n values given')
        for n in self.n_values:
            if n < 1:
                raise ValueError(f'n must be positive, got {n}')
            check_guard('n', n + n % 2, constants.MAX_CAMPAIGN_N)
        lo, hi = self.k_range
        if not 1 <= lo <= hi:
            raise ValueError(f'invalid k range {self.k_range}')
        if self.trials < 1:
            raise ValueError(f'trials must be at least 1, got {self.trials}')
        unknown = [v for v in self.variants if v not in constants.VARIANT_COLUMNS]
        if unknown:
            raise ValueError(f'unknown variants {unknown}')
        if not 1 <= self.width[0] <= self.width[1]:
            raise ValueError(f'invalid clause width {self.width}')
        if self.workers < 1:
            raise ValueError(f'workers must be at least 1, got {self.workers}')

    def groups(self):
        lo, hi = self.k_range
        return [(n, k) for n in self.n_values for k in range(lo, hi + 1)]


def build_variants(f, variants):
    '''every requested stage of the pipeline, reusing the stages in between.'''
    arts = {}
    base = build_full_graph(f)
    if constants.VARIANT_BASE in variants:
        arts[constants.VARIANT_BASE] = base
    later = [v for v in variants if v != constants.VARIANT_BASE]
    if later:
        deg3 = to_degree3(base)
        if constants.VARIANT_DEGREE3 in variants:
            arts[constants.VARIANT_DEGREE3] = deg3
        if constants.VARIANT_DEGREE3_DAG in variants:
            arts[constants.VARIANT_DEGREE3_DAG] = orient_dag(deg3)
        if constants.VARIANT_BINARY in variants or constants.VARIANT_BINARY_DAG in variants:
            binary = encode_binary(deg3)
            if constants.VARIANT_BINARY in variants:
                arts[constants.VARIANT_BINARY] = binary
            if constants.VARIANT_BINARY_DAG in variants:
                arts[constants.VARIANT_BINARY_DAG] = orient_dag(binary)
    return arts


def structural_problems(art):
    '''forbidden words, degree bounds, acyclicity and the G_U copy layout.'''
    problems = []
    text = art.pattern.text
    if art.variant in (constants.VARIANT_BINARY, constants.VARIANT_BINARY_DAG):
        if constants.FORBIDDEN_WORD in text:
            problems.append(f'{art.variant}: pattern contains {constants.FORBIDDEN_WORD}')
    elif constants.B + constants.E in text:
        problems.append(f'{art.variant}: pattern contains be')
    if art.variant != constants.VARIANT_BASE:
        simple, total = max_degree(art.graph)
        if simple > 3 or total > 3:
            problems.append(f'{art.variant}: max degree ({simple}, {total}) above 3')
    if art.graph.directed and not is_dag(art.graph):
        problems.append(f'{art.variant}: directed graph has a cycle')
    if art.variant == constants.VARIANT_BASE:
        f = art.formula
        rows = 1 << f.n // 2
        if text.count(constants.E) != rows + 1 or text.count(constants.B) != rows + 1:
            problems.append('Base: pattern does not hold 2^{n/2}+1 symbols e and b')
        for gadget in (Gadget.GU1, Gadget.GU2):
            nodes = art.gadget_nodes(gadget)
            copies = {art.roles[v].j for v in nodes}
            if len(copies) != rows - 1 or len(nodes) != (rows - 1) * (2 * f.k + 2):
                problems.append(f'Base: {gadget.value} has {len(copies)} copies and {len(nodes)} nodes')
    return problems


def run_trial(trial, f, variants, dump_dir=None):
    '''one formula through the oracle and every selected variant.'''
    record = {'trial': trial, 'n': f.n, 'k': f.k, 'digest': digest(write_dimacs(f)),
              'sat': brute_force_sat(f) is not None}
    for variant, column in constants.VARIANT_COLUMNS.items():
        record[column] = None
    record.update(m=None, edges=None, micros_match=0, agree=True, problems='', error='')
    arts = {}
    try:
        arts = build_variants(f, variants)
        micros = 0
        for variant, art in arts.items():
            start = time.perf_counter()
            found = match_exact(art.graph, art.pattern)
            micros += (time.perf_counter() - start) * 1e6
            record[constants.VARIANT_COLUMNS[variant]] = found
            if found != record['sat']:
                record['agree'] = False
        if arts:
            first = next(iter(arts.values()))
            record.update(m=first.pattern.m, edges=first.graph.num_edges, micros_match=int(round(micros)))
        record['problems'] = '; '.join(p for art in arts.values() for p in structural_problems(art))
    except (InvariantError, ValueError) as exc:
        logger.error('trial %d (%s) failed: %s', trial, record['digest'], exc)
        record.update(agree=False, error=str(exc))
    if dump_dir and (not record['agree'] or record['problems']):
        _dump_instance(dump_dir, trial, f, arts)
    return record


def _dump_instance(dump_dir, trial, f, arts):
    os.makedirs(dump_dir, exist_ok=True)
    prefix = os.path.join(dump_dir, f'trial_{trial:05d}')
    with open(prefix + '.cnf', 'w') as fh:
        fh.write(write_dimacs(f))
    for variant, art in arts.items():
        with open(f'{prefix}_{variant}.graph', 'wb') as fh:
            fh.write(serialize_graph(art.graph))
        with open(f'{prefix}_{variant}.pattern', 'w') as fh:
            fh.write(art.pattern.text + '\n')
    logger.warning('dumped trial %d to %s', trial, prefix)


def _run_trial_args(args):
    return run_trial(*args)


@dataclass
class LemmaCheck:
    name: str
    checked: int = 0
    failures: List[str] = field(default_factory=list)

    def record(self, ok, what):
        self.checked += 1
        if not ok:
            self.failures.append(what)

    @property
    def passed(self):
        return not self.failures

    def to_line(self):
        status = 'ok' if self.passed else 'FAIL'
        line = f'lemma {self.name} {self.checked - len(self.failures)}/{self.checked} {status}'
        if self.failures:
            line += ' ' + ' | '.join(self.failures[:10])
        return line


@dataclass
class LemmaReport:
    checks: Dict[str, LemmaCheck] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def check(self, name):
        return self.checks.setdefault(name, LemmaCheck(name))

    @property
    def passed(self):
        return all(c.passed for c in self.checks.values())

    def to_text(self):
        lines = [f'note {note}' for note in self.notes]
        lines += [c.to_line() for c in self.checks.values()]
        lines.append(f'lemmas {"PASS" if self.passed else "FAIL"}')
        return '\n'.join(lines) + '\n'


@dataclass
class CampaignReport:
    config: CampaignConfig
    records: pd.DataFrame
    notes: List[str] = field(default_factory=list)
    lemmas: Optional[LemmaReport] = None

    @property
    def disagreements(self):
        return self.records[~self.records['agree'].astype(bool)]

    @property
    def structure_failures(self):
        return self.records[self.records['problems'] != '']

    @property
    def agreement_rate(self):
        if not len(self.records):
            return 1.0
        return float(self.records['agree'].astype(bool).mean())

    @property
    def passed(self):
        ok = self.agreement_rate == 1.0 and not len(self.structure_failures)
        return ok and (self.lemmas is None or self.lemmas.passed)

    def to_text(self):
        '''deterministic summary: no timings.'''
        cfg = self.config
        df = self.records
        lines = [
            f'campaign seed={cfg.seed} n={",".join(map(str, cfg.n_values))} k={cfg.k_range[0]}..{cfg.k_range[1]} '
            f'trials={cfg.trials} exhaustive={cfg.exhaustive} width={cfg.width[0]}..{cfg.width[1]}',
            f'variants {",".join(cfg.variants) if cfg.variants else "none"}',
        ]
        lines += [f'note {note}' for note in self.notes]
        sat = int(df['sat'].sum()) if len(df) else 0
        lines.append(f'trials {len(df)} sat {sat} unsat {len(df) - sat}')
        for (n, k), group in df.groupby(['n', 'k'], sort=True):
            g_sat = int(group['sat'].sum())
            g_agree = int(group['agree'].astype(bool).sum())
            lines.append(f'group n={n} k={k} trials={len(group)} sat={g_sat} unsat={len(group) - g_sat} '
                         f'agree={g_agree}/{len(group)}')
        agree = int(df['agree'].astype(bool).sum()) if len(df) else 0
        lines.append(f'agreement {self.agreement_rate:.6f} ({agree}/{len(df)})')
        for _, row in self.disagreements.iterrows():
            answers = ' '.join(f'{col}={row[col]}' for col in constants.VARIANT_COLUMNS.values()
                               if row[col] is not None and not pd.isna(row[col]))
            lines.append(f'disagreement trial={row["trial"]} digest={row["digest"]} sat={row["sat"]} {answers} '
                         f'{row["error"]}'.rstrip())
        for _, row in self.structure_failures.iterrows():
            lines.append(f'structure trial={row["trial"]} digest={row["digest"]} {row["problems"]}')
        if self.lemmas is not None:
            lines += self.lemmas.to_text().splitlines()
        lines.append(f'result {"PASS" if self.passed else "FAIL"}')
        return '\n'.join(lines) + '\n'

    def write(self, out_dir):
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, constants.REPORT_NAME), 'w') as f:
            f.write(self.to_text())
        self.records[constants.CAMPAIGN_COLUMNS].to_csv(os.path.join(out_dir, constants.TRIALS_NAME), index=False)
        if self.lemmas is not None:
            with open(os.path.join(out_dir, constants.LEMMAS_NAME), 'w') as f:
                f.write(self.lemmas.to_text())
        logger.info('report saved to %s', out_dir)


class Evaluator:
    '''runs the SAT-vs-match campaign and the lemma suite for one config.
    '''
    def __init__(self, cfg, show_progress_bar=True) -> None:
        self.cfg = cfg
        self.show_progress_bar = show_progress_bar
        self.notes = []

    def formulas(self, limit=None):
        '''(n, k) groups in config order; formulas drawn from one seeded generator.'''
        cfg = self.cfg
        rng = set_random_seed(cfg.seed)
        out = []
        for n, k in cfg.groups():
            if n % 2:
                self._note(f'n={n} padded to n={n + 1} with an unused variable')
            if cfg.exhaustive:
                group = list(itertools.islice(enumerate_formulas(n, k, cfg.width), limit))
            else:
                group = self._draw_group(n, k, rng, cfg.trials if limit is None else min(limit, cfg.trials))
            out += [make_even(f) for f in group]
        return out

    def _note(self, note):
        if note not in self.notes:
            self.notes.append(note)

    def _draw_group(self, n, k, rng, trials):
        cfg = self.cfg
        group = [random_formula(n, k, rng, cfg.width) for _ in range(trials)]
        answers = {brute_force_sat(f) is not None for f in group}
        if trials >= 2 and len(answers) == 1:
            missing = not answers.pop()
            for _ in range(constants.MAX_REDRAWS):
                f = random_formula(n, k, rng, cfg.width)
                if (brute_force_sat(f) is not None) == missing:
                    group[-1] = f
                    break
            else:
                kind = 'satisfiable' if missing else 'unsatisfiable'
                self._note(f'n={n} k={k}: no {kind} formula within {constants.MAX_REDRAWS} redraws')
        return group

    def evaluate(self):
        cfg = self.cfg
        formulas = self.formulas()
        jobs = [(i, f, cfg.variants, cfg.dump_dir) for i, f in enumerate(formulas, 1)]
        if cfg.workers > 1:
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                results = pool.map(_run_trial_args, jobs, chunksize=8)
                records = list(tqdm(results, total=len(jobs), desc='Campaign', disable=not self.show_progress_bar))
        else:
            records = [run_trial(*job) for job in tqdm(jobs, desc='Campaign', disable=not self.show_progress_bar)]
        df = pd.DataFrame.from_records(records) if records else pd.DataFrame(columns=_RECORD_COLUMNS)
        report = CampaignReport(cfg, df, list(self.notes))
        if not report.passed:
            logger.error('campaign failed: agreement %.6f, %d structure failures',
                         report.agreement_rate, len(report.structure_failures))
        else:
            logger.info('campaign passed: %d trials', len(df))
        return report

    def run_lemmas(self):
        cfg = self.cfg
        report = LemmaReport()
        table = verify_encoding_table()
        report.check('encoding-sync').record(not table.sync_violations, ','.join(table.sync_violations))
        report.check('encoding-shapes').record(not table.shape_violations, ','.join(table.shape_violations))
        big = sorted({n + n % 2 for n in cfg.n_values if n + n % 2 > constants.MAX_LEMMA_N})
        if big:
            report.notes.append(f'lemma checks skipped for n={",".join(map(str, big))}')
        small = CampaignConfig(
            n_values=[n for n in cfg.n_values if n + n % 2 <= constants.MAX_LEMMA_N] or [2],
            k_range=cfg.k_range, trials=cfg.trials, seed=cfg.seed, width=cfg.width, exhaustive=cfg.exhaustive)
        formulas = Evaluator(small, show_progress_bar=False).formulas(limit=constants.LEMMA_TRIALS)
        for f in tqdm(formulas, desc='Lemma suite', disable=not self.show_progress_bar):
            check_formula_lemmas(f, report)
        report.notes[:0] = [f'lemma formulas {len(formulas)}']
        return report


_RECORD_COLUMNS = constants.CAMPAIGN_COLUMNS + ['digest', 'agree', 'problems', 'error']


def revised_pattern_regex(n, k, rows):
    half = n // 2
    block = f"bd{{{half}}}[cd](?:dd[cd]){{{k - 1}}}d{{{half}}}e"
    return re.compile(f'e(?:{block}){{{rows}}}b')


def check_formula_lemmas(f, report):
    '''the lemma-level properties of one (even-n) formula.'''
    tag = digest(write_dimacs(f))
    k = f.k
    sat = brute_force_sat(f) is not None
    gf, roles = build_gadget_gf(f)
    base = build_full_graph(f)
    matrix = base.matrix
    blocks = block_strings(f)

    same_row = report.check('same-row-walks')
    for w in map(''.join, itertools.product((constants.C, constants.D), repeat=k)):
        for occ in enumerate_walks(gf, 'b' + w + 'e'):
            inner = [roles[v] for v in occ.nodes[1:-1]]
            ok = (len(set(occ.nodes)) == k + 2 and len({r.j for r in inner}) == 1
                  and [r.h for r in inner] == list(range(1, k + 1)))
            same_row.record(ok, f'{tag} block {w} walk {occ.nodes}')

    row_cover = report.check('block-iff-row-cover')
    block_hits = []
    for i, w in enumerate(blocks, 1):
        hit = match_exact(gf, 'b' + w + 'e')
        block_hits.append(hit)
        needed = {h for h, a in enumerate(w, 1) if a == constants.C}
        row_cover.record(hit == matrix.covers(needed), f'{tag} x_{i}')

    full = match_exact(base.graph, base.pattern)
    report.check('full-iff-some-block').record(full == any(block_hits), tag)
    report.check('match-iff-sat').record(full == sat, tag)

    bridges = find_bridges(base.graph)
    chaining = sum(1 for u, v in base.boundary
                   if base.roles[u].gadget == base.roles[v].gadget and base.roles[u].role == Role.END)
    report.check('bridges').record(
        set(base.stats.bridges) <= bridges and chaining == 2 * ((1 << f.n // 2) - 2), tag)

    deg3 = to_degree3(base)
    binary = encode_binary(deg3)
    dag = orient_dag(binary)
    rows = 1 << f.n // 2
    words = report.check('pattern-words')
    words.record('be' not in base.pattern.text and 'be' not in deg3.pattern.text, f'{tag} be')
    words.record(constants.FORBIDDEN_WORD not in binary.pattern.text, f'{tag} 1001')
    words.record(base.pattern.text.count('e') == rows + 1 and base.pattern.text.count('b') == rows + 1, f'{tag} e/b')
    words.record(revised_pattern_regex(f.n, k, rows).fullmatch(deg3.pattern.text) is not None, f'{tag} shape')
    mirrored = build_revised_pattern(mirror_clauses(f))
    words.record(encode_string(mirrored.text) == binary.pattern.text, f'{tag} alpha')

    deg3_match = match_exact(deg3.graph, deg3.pattern)
    bin_match = match_exact(binary.graph, binary.pattern)
    report.check('degree3-preserves-match').record(deg3_match == full, tag)
    report.check('encoding-preserves-match').record(bin_match == deg3_match, tag)
    report.check('dag-preserves-match').record(match_exact(dag.graph, dag.pattern) == bin_match, tag)
    literal = encode_binary(deg3, mirror=False)
    report.check('reverse-reading').record(
        match_exact(literal.graph, literal.pattern) == (full or reverse_reading_cover(f)), tag)

    degree = report.check('degree-at-most-3')
    for art in (deg3, binary):
        degree.record(max_degree(art.graph)[0] <= 3, f'{tag} {art.variant}')
    report.check('dag').record(is_dag(dag.graph) and max_degree(dag.graph)[1] <= 3, tag)

    sizes = report.check('sizes')
    for art in (base, deg3, binary, dag):
        sizes.record(size_bound_holds(art.stats), f'{tag} {art.variant}')
    sizes.record(base.pattern.m == (k + 2) * rows + 2, f'{tag} m')
    sizes.record(np.all(np.diff(sorted(base.layers)) <= 1), f'{tag} layers')


def run_campaign(cfg, show_progress_bar=True):
    return Evaluator(cfg, show_progress_bar).evaluate()


def run_lemma_suite(cfg, show_progress_bar=True):
    return Evaluator(cfg, show_progress_bar).run_lemmas()
