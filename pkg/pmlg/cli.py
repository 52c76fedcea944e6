import argparse
import logging
import os
import sys

from . import constants
from .evaluator import CampaignConfig, Evaluator
from .benchmark import run_bench, scaling_ratios
from .graph import parse_graph, serialize_graph
from .matcher import REPORT, Pattern, count_occurrences, match_exact
from .reduction import build_full_graph, write_manifest
from .sat import brute_force_sat, make_even, parse_dimacs
from .transform import encode_binary, orient_dag, to_degree3
from .utils import setup_logging

logger = logging.getLogger(__name__)


def positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f'expected a positive integer, got {text}')
    return value


def int_list(text):
    try:
        return [int(x) for x in text.split(',') if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected comma separated integers, got {text!r}') from None


def variant_list(text):
    names = [x.strip().lower() for x in text.split(',') if x.strip()]
    unknown = [x for x in names if x not in constants.CAMPAIGN_VARIANTS]
    if unknown:
        raise argparse.ArgumentTypeError(
            f'unknown variants {unknown}, choose from {",".join(constants.CAMPAIGN_VARIANTS)}')
    return [constants.CAMPAIGN_VARIANTS[x] for x in names]


def read_formula(path):
    with open(path, 'rb') as f:
        formula = parse_dimacs(f.read())
    logger.info('load formula from %s: n=%d k=%d', path, formula.n, formula.k)
    return formula


def read_pattern(path):
    with open(path) as f:
        lines = [line.strip() for line in f if line.strip()]
    if len(lines) != 1:
        raise ValueError(f'{path}: a pattern file holds exactly one line, found {len(lines)}')
    return Pattern(lines[0])


def cmd_reduce(args):
    if (args.binary or args.dag) and not args.degree3:
        args.parser.error('--binary and --dag need --degree3')
    formula = read_formula(args.cnf)
    if formula.n % 2:
        logger.info('n=%d is odd, padding with v_%d', formula.n, formula.n + 1)
        formula = make_even(formula)
    art = build_full_graph(formula)
    if args.degree3:
        art = to_degree3(art)
    if args.binary:
        art = encode_binary(art)
    if args.dag:
        art = orient_dag(art)

    out = args.out or os.path.splitext(args.cnf)[0]
    with open(out + '.graph', 'wb') as f:
        f.write(serialize_graph(art.graph))
    with open(out + '.pattern', 'w') as f:
        f.write(art.pattern.text + '\n')
    with open(out + '.manifest', 'w') as f:
        f.write(write_manifest(art))
    logger.info('%s instance saved to %s.{graph,pattern,manifest}', art.variant, out)
    s = art.stats
    print(f'variant={s.variant} n={s.n} k={s.k} m={s.m} nodes={s.nodes} edges={s.edges} '
          f'clause_nodes={s.clause_nodes} dummy_nodes={s.dummy_nodes} bridges={len(s.bridges)}')
    return constants.EXIT_MATCH


def cmd_match(args):
    with open(args.graph, 'rb') as f:
        g = parse_graph(f.read())
    p = read_pattern(args.pattern)
    if not args.all:
        found = match_exact(g, p)
        print('match' if found else 'no match')
        return constants.EXIT_MATCH if found else constants.EXIT_NO_MATCH
    occurrences = match_exact(g, p, mode=REPORT)
    for occ in occurrences:
        print(occ.to_line())
    print(f'count {count_occurrences(g, p)}')
    return constants.EXIT_MATCH if occurrences else constants.EXIT_NO_MATCH


def cmd_verify(args):
    lo = args.k
    hi = args.k_max if args.k_max is not None else args.k
    if hi < lo:
        args.parser.error(f'--k-max {hi} is below --k {lo}')
    try:
        cfg = CampaignConfig(n_values=tuple(args.n), k_range=(lo, hi), trials=args.trials, seed=args.seed,
                             variants=tuple(args.variants), exhaustive=args.exhaustive, workers=args.workers,
                             dump_dir=os.path.join(args.out, 'instances'))
    except ValueError as exc:
        args.parser.error(str(exc))
    evaluator = Evaluator(cfg, show_progress_bar=not args.quiet)
    report = evaluator.evaluate()
    report.lemmas = evaluator.run_lemmas()
    report.write(args.out)
    sys.stdout.write(report.to_text())
    return constants.EXIT_MATCH if report.passed else constants.EXIT_NO_MATCH


def cmd_sat(args):
    formula = read_formula(args.cnf)
    witness = brute_force_sat(formula)
    if witness is None:
        print('s UNSATISFIABLE')
        return constants.EXIT_NO_MATCH
    print('s SATISFIABLE')
    print('v ' + ' '.join(str(i if value else -i) for i, value in enumerate(witness, 1)) + ' 0')
    return constants.EXIT_MATCH


def cmd_bench(args):
    df = run_bench(args.n_min, args.n_max, args.k, args.repeats, args.seed, show_progress_bar=not args.quiet)
    if args.out:
        df.to_csv(args.out, index=False)
        logger.info('bench records saved to %s', args.out)
    else:
        df.to_csv(sys.stdout, index=False)
    lo, hi = constants.TIME_RATIO_BAND
    for row in scaling_ratios(df).itertuples():
        in_band = None if row.in_band is None else bool(row.in_band)
        band = {None: 'band n/a', True: f'in band [{lo}, {hi}]', False: f'OUTSIDE band [{lo}, {hi}]'}[in_band]
        log = logger.warning if in_band is False else logger.info
        log('n=%d sat=%s m x%.3f (closed form x%.3f) |E| x%.3f time x%.2f %s', row.n, row.sat, row.m_ratio,
            row.m_expected, row.edges_ratio, row.time_ratio, band)
    return constants.EXIT_MATCH


def build_parser():
    parser = argparse.ArgumentParser(prog='pmlg', description='pattern matching in labeled graphs and the '
                                     'SAT reduction behind its quadratic lower bound')
    parser.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('reduce', help='build the pattern, graph and manifest of a DIMACS formula')
    p.add_argument('--cnf', required=True)
    p.add_argument('--degree3', action='store_true')
    p.add_argument('--binary', action='store_true')
    p.add_argument('--dag', action='store_true')
    p.add_argument('--out', help='output prefix, defaults to the cnf path without extension')
    p.set_defaults(func=cmd_reduce, parser=p)

    p = sub.add_parser('match', help='exit 0 if the pattern occurs in the graph, 1 otherwise')
    p.add_argument('--graph', required=True)
    p.add_argument('--pattern', required=True)
    p.add_argument('--all', action='store_true', help='print one witness per end node')
    p.set_defaults(func=cmd_match, parser=p)

    p = sub.add_parser('verify', help='match answers against the SAT oracle on random formulas')
    p.add_argument('--n', type=int_list, default=[4], help='comma separated variable counts')
    p.add_argument('--k', type=positive_int, default=3)
    p.add_argument('--k-max', type=positive_int, default=None)
    p.add_argument('--trials', type=positive_int, default=100)
    p.add_argument('--seed', type=int, default=42)
    p.add_argument('--variants', type=variant_list, default=list(constants.VARIANT_COLUMNS),
                   help='comma separated subset of base,degree3,binary,dag')
    p.add_argument('--exhaustive', action='store_true', help='every formula instead of random draws')
    p.add_argument('--workers', type=positive_int, default=1)
    p.add_argument('--out', default='verify_out')
    p.add_argument('--quiet', action='store_true', help='no progress bars')
    p.set_defaults(func=cmd_verify, parser=p)

    p = sub.add_parser('sat', help='truth-table satisfiability of a DIMACS formula')
    p.add_argument('--cnf', required=True)
    p.set_defaults(func=cmd_sat, parser=p)

    p = sub.add_parser('bench', help='time match_exact on growing reduction instances')
    p.add_argument('--n-min', type=positive_int, default=8)
    p.add_argument('--n-max', type=positive_int, default=14)
    p.add_argument('--k', type=positive_int, default=8)
    p.add_argument('--repeats', type=positive_int, default=5)
    p.add_argument('--seed', type=int, default=42)
    p.add_argument('--out', help='csv path, defaults to stdout')
    p.add_argument('--quiet', action='store_true', help='no progress bars')
    p.set_defaults(func=cmd_bench, parser=p)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        logger.error('%s', exc)
        return constants.EXIT_ERROR
