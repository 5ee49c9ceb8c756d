#!/usr/bin/env python3

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from . import iter_set_cover
from . import util as u
from .classes import verify_cover
from .errors import AllGuessesFailed, BudgetExceeded, Infeasible, StreamCoverError, TooLarge
from .experiments import FORMATTERS, bench, directory_instances, generated_instances
from .generator import generate_instance
from .geometry import generate_disc_instance, geom_solve, load_geo, save_geo
from .oracle import MAX_SETS, brute_force_optimal
from .parser import load_instance, save_instance
from .reduction import build_gadget, chase, load_isc, random_isc, save_gadget, save_isc, verify_equivalence
from .recovery import is_intersecting, run_recovery_trials
from .run_many import default_jobs
from .sampling import check_relative_approx, draw_sample, make_spec, relative_approx_sample_size
from .sc_types import SolveParams
from .stream import PassStream, SpaceLedger, open_source

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_FAILED = 3

GEN_KINDS = {
    'uniform': 'uniform-random',
    'planted': 'planted-cover',
    'sparse': 'sparse',
}


class UsageError(StreamCoverError):
    pass


def exit_code(e: Exception) -> int:
    if isinstance(e, Infeasible):
        return EXIT_INFEASIBLE
    if isinstance(e, (BudgetExceeded, AllGuessesFailed, TooLarge)):
        return EXIT_FAILED
    return EXIT_INPUT


def resolve_seed(args) -> int:
    """An explicit --seed, or a fresh one (refused under --ci)"""
    if args.seed is not None:
        return args.seed
    if args.ci:
        raise UsageError(f'{args.command} is randomized: --ci requires an explicit --seed')
    seed = int(np.random.SeedSequence().entropy) & u.SEED_MASK
    log.warning(f'no --seed given, using {seed}')
    return seed


def emit(report: Dict, fmt: str, out=None):
    out = out or sys.stdout
    if fmt == 'json':
        print(json.dumps(report), file=out)
    elif fmt == 'csv':
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(report.keys())
        writer.writerow(['-' if v is None else v for v in report.values()])
    else:
        for key, value in report.items():
            print(f'{key}: {"-" if value is None else value}', file=out)


def write_or_print(text: str, output: Optional[str]):
    if output:
        with open(output, 'w') as f:
            f.write(text)
    else:
        sys.stdout.write(text)


# Subcommands
def cmd_gen(args) -> int:
    seed = resolve_seed(args)
    if args.kind == 'discs':
        inst = generate_disc_instance(args.opt or 1, args.n, args.m, seed)
        save_geo(inst, args.output)
    elif args.kind == 'isc':
        isc = random_isc(args.n, args.p, u.substream(seed, 0), nonempty=not args.allow_empty_images)
        save_isc(isc, args.output)
    else:
        sys_ = generate_instance(GEN_KINDS[args.kind], args.n, args.m, seed, density=args.density,
                                 opt_size=args.opt, s_cap=args.s_cap, ensure_feasible=args.feasible)
        save_instance(sys_, args.output)
    print(f'wrote {args.output}')
    return EXIT_OK


def cmd_solve(args) -> int:
    seed = resolve_seed(args)
    params = SolveParams(delta=args.delta, c=args.sample_c, rho_mode=args.offline, seed=seed,
                         geom_threshold=args.geom_threshold)
    ledger = SpaceLedger()
    if Path(args.path).suffix == '.geo':
        inst = load_geo(args.path)
        sys_ = inst.to_set_system()
        cover = geom_solve(inst.points, PassStream(open_source(args.path)), params, ledger)
    else:
        sys_ = load_instance(args.path, args.allow_empty)
        cover = iter_set_cover.solve(PassStream(open_source(args.path, args.allow_empty)), sys_.n, params, ledger)
    stats = cover.stats
    report = {
        'instance': args.path,
        'n': sys_.n,
        'm': sys_.m,
        'size': len(cover),
        'cover': ' '.join(map(str, cover.chosen)),
        'passes': stats.passes,
        'peak_space_units': stats.peak_space_units,
        'ground_units': stats.ground_units,
        'guess_k': stats.guess_k,
        'valid': verify_cover(sys_, cover),
        'seed': seed,
    }
    if args.oracle:
        if sys_.m > MAX_SETS:
            raise TooLarge(f'--oracle handles at most {MAX_SETS} sets, got {sys_.m}')
        opt = brute_force_optimal(sys_).opt_size
        report['oracle_opt'] = opt
        report['ratio'] = round(len(cover) / opt, 4)
    emit(report, args.format)
    return EXIT_OK if report['valid'] else EXIT_FAILED


def cmd_bench(args) -> int:
    seed = resolve_seed(args)
    if args.dir:
        instances = directory_instances(args.dir, args.allow_empty)
    else:
        kwargs = {'opt_size': args.opt} if args.kind == 'planted' else {'density': args.density}
        if args.kind == 'sparse':
            kwargs['s_cap'] = args.s_cap
        instances = generated_instances(GEN_KINDS[args.kind], args.count, args.n, args.m, seed, **kwargs)
    rows = bench(instances, args.deltas, args.algorithms, args.sample_c, seed, args.oracle, args.jobs)
    write_or_print(FORMATTERS[args.format](rows), args.output)
    return EXIT_OK


def cmd_oracle(args) -> int:
    sys_ = load_instance(args.path, args.allow_empty)
    result = brute_force_optimal(sys_)
    emit({'instance': args.path, 'opt': result.opt_size, 'witness': ' '.join(map(str, result.witness)),
          'method': result.method}, args.format)
    return EXIT_OK


def cmd_reduce(args) -> int:
    if args.isc:
        isc = load_isc(args.isc)
    else:
        isc = random_isc(args.n, args.p, u.substream(resolve_seed(args), 0))
    gadget = build_gadget(isc)
    report = {'n': isc.n, 'p': isc.p, 'elements': gadget.set_system.n, 'sets': gadget.set_system.m,
              'chase': chase(isc), 'lower_bound': gadget.lower_bound()}
    if args.output:
        save_gadget(gadget, args.output)
    status = EXIT_OK
    if args.verify:
        equivalence = verify_equivalence(isc)
        report['opt'] = equivalence.opt
        report['equivalence'] = 'PASS' if equivalence.passed else 'FAIL'
        report['tight'] = equivalence.tight
        status = EXIT_OK if equivalence.passed else EXIT_FAILED
    emit(report, args.format)
    return status


def cmd_recover(args) -> int:
    seed = resolve_seed(args)
    runs = run_recovery_trials(args.n, args.m, args.c1, args.trials, seed, args.budget, args.oracle_error_rate, args.jobs)
    rows = [{'trial': i, 'success': r.success, 'queries_used': r.queries_used, 'recovered': len(r.recovered),
             'intersecting': is_intersecting(r.recovered)} for i, r in enumerate(runs)]
    if args.format == 'json':
        write_or_print(json.dumps(rows, indent=1) + '\n', args.output)
    else:
        out = io.StringIO()
        writer = csv.DictWriter(out, fieldnames=['trial', 'success', 'queries_used', 'recovered', 'intersecting'],
                                lineterminator='\n')
        writer.writeheader()
        writer.writerows(rows)
        write_or_print(out.getvalue(), args.output)
    return EXIT_OK


def cmd_check_sample(args) -> int:
    seed = resolve_seed(args)
    if args.path:
        sys_ = load_instance(args.path, args.allow_empty)
    else:
        sys_ = generate_instance('uniform-random', args.n, args.m, seed, density=args.density)
    spec = make_spec(args.p, args.eps, args.q, sys_.m)
    size = args.sample_size or relative_approx_sample_size(args.p, args.eps, args.q, sys_.m, args.c_prime)
    sample = draw_sample(range(sys_.n), size, u.substream(seed, 1))
    report = check_relative_approx(sys_, sample, spec)
    emit({'n': sys_.n, 'm': sys_.m, 'sample_size': len(sample.elements), 'capped': size >= sys_.n,
          'failures': report.failures, 'passed': report.passed, 'seed': seed}, args.format)
    for check in report.checks:
        if not check.ok:
            print(f'failed set {check.set_id}: |R|={check.size} hits={check.hits} heavy={check.heavy}')
    return EXIT_OK


def delta_list(text: str) -> List[float]:
    """'1,1/2,0.25' -> [1.0, 0.5, 0.25]"""
    values = []
    for part in text.split(','):
        num, _, den = part.strip().partition('/')
        try:
            values.append(float(num) / float(den) if den else float(num))
        except (ValueError, ZeroDivisionError):
            raise argparse.ArgumentTypeError(f'bad delta {part!r}') from None
    return values


def create_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=None, help='Master PRNG seed')
    common.add_argument('--jobs', type=int, default=default_jobs(), help='Parallel workers for rows/trials (ray)')
    common.add_argument('--ci', action='store_true', help='Refuse randomized commands without an explicit --seed')
    common.add_argument('--format', choices=['text', 'csv', 'json'], default=None,
                        help='Report format (default: csv for bench and recover, text otherwise)')
    common.add_argument('--allow-empty', action='store_true', help='Accept empty sets in instance files')
    common.add_argument('-v', '--verbose', action='count', default=0, help='-v for INFO, -vv for DEBUG logging')

    parser = argparse.ArgumentParser(prog='streamcover', description='Multi-pass streaming set cover.')
    sub = parser.add_subparsers(dest='command', required=True)

    gen = sub.add_parser('gen', parents=[common], help='Generate an instance file')
    gen.add_argument('kind', choices=list(GEN_KINDS) + ['discs', 'isc'])
    gen.add_argument('--n', type=int, required=True)
    gen.add_argument('--m', type=int, default=None, help='Set (or disc) count')
    gen.add_argument('--p', type=int, default=1, help='ISC depth')
    gen.add_argument('--opt', type=int, default=None, help='Planted cover size')
    gen.add_argument('--density', type=float, default=0.5)
    gen.add_argument('--s-cap', type=int, default=None, help='Sparsity cap')
    gen.add_argument('--feasible', action='store_true', help='Patch uncoverable elements into random sets')
    gen.add_argument('--allow-empty-images', action='store_true', help='ISC images may be empty')
    gen.add_argument('-o', '--output', required=True)
    gen.set_defaults(func=cmd_gen)

    solve = sub.add_parser('solve', parents=[common], help='Solve a .ssc, .bin or .geo instance')
    solve.add_argument('path')
    solve.add_argument('--delta', type=float, default=0.5)
    solve.add_argument('--sample-c', type=float, default=2.0)
    solve.add_argument('--offline', choices=['exact', 'greedy'], default='greedy')
    solve.add_argument('--geom-threshold', choices=['original', 'leftover'], default='original')
    solve.add_argument('--oracle', action='store_true', help='Cross-check against the brute-force optimum')
    solve.set_defaults(func=cmd_solve)

    bench_ = sub.add_parser('bench', parents=[common], help='Benchmark sweep, one row per (instance, algorithm, delta)')
    bench_.add_argument('--dir', default=None, help='Directory of instance files (instead of generating)')
    bench_.add_argument('--kind', choices=list(GEN_KINDS), default='planted')
    bench_.add_argument('--count', type=int, default=10)
    bench_.add_argument('--n', type=int, default=64)
    bench_.add_argument('--m', type=int, default=32)
    bench_.add_argument('--opt', type=int, default=4)
    bench_.add_argument('--density', type=float, default=0.5)
    bench_.add_argument('--s-cap', type=int, default=None)
    bench_.add_argument('--deltas', type=delta_list, default=[1.0, 0.5])
    bench_.add_argument('--algorithms', nargs='+', choices=['exact', 'greedy'], default=['exact'])
    bench_.add_argument('--sample-c', type=float, default=2.0)
    bench_.add_argument('--oracle', action='store_true')
    bench_.add_argument('-o', '--output', default=None)
    bench_.set_defaults(func=cmd_bench, default_format='csv')

    oracle = sub.add_parser('oracle', parents=[common], help='Brute-force optimum (m <= 26)')
    oracle.add_argument('path')
    oracle.set_defaults(func=cmd_oracle)

    reduce = sub.add_parser('reduce', parents=[common], help='Build the set cover gadget of an ISC instance')
    reduce.add_argument('--isc', default=None, help='.isc file (otherwise random)')
    reduce.add_argument('--n', type=int, default=2)
    reduce.add_argument('--p', type=int, default=1)
    reduce.add_argument('--verify', action='store_true', help='Solve exactly and check the equivalence')
    reduce.add_argument('-o', '--output', default=None, help='Write the gadget .ssc and its name map')
    reduce.set_defaults(func=cmd_reduce)

    recover = sub.add_parser('recover', parents=[common], help='Recover random families with a disjointness oracle')
    recover.add_argument('--n', type=int, default=64)
    recover.add_argument('--m', type=int, default=8)
    recover.add_argument('--c1', type=float, default=2.0)
    recover.add_argument('--trials', type=int, default=10)
    recover.add_argument('--budget', type=int, default=None, help='Probe budget (default m^(c1+3) log2 m)')
    recover.add_argument('--oracle-error-rate', type=float, default=0.0)
    recover.add_argument('-o', '--output', default=None)
    recover.set_defaults(func=cmd_recover, default_format='csv')

    check = sub.add_parser('check-sample', parents=[common], help='Check a uniform sample for relative (p, eps)-approximation')
    check.add_argument('path', nargs='?', default=None)
    check.add_argument('--n', type=int, default=512)
    check.add_argument('--m', type=int, default=64)
    check.add_argument('--density', type=float, default=0.5)
    check.add_argument('--p', type=float, default=0.1)
    check.add_argument('--eps', type=float, default=0.5)
    check.add_argument('--q', type=float, default=0.01)
    check.add_argument('--c-prime', type=float, default=4.0)
    check.add_argument('--sample-size', type=int, default=None, help='Override the computed sample size')
    check.set_defaults(func=cmd_check_sample)
    return parser


def parse_args(parser: argparse.ArgumentParser, argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parses argv and fills in the subcommand's own report format when --format is absent"""
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = getattr(args, 'default_format', 'text')
    return args


def main(argv: Optional[List[str]] = None) -> int:
    parser = create_parser()
    args = parse_args(parser, argv)
    logging.basicConfig(level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
                        format='%(levelname)s %(name)s: %(message)s')
    if args.command == 'gen' and args.kind != 'isc' and args.m is None:
        parser.error('gen needs --m')
    try:
        return args.func(args)
    except (StreamCoverError, OSError) as e:
        print(f'error: {type(e).__name__}: {e}', file=sys.stderr)
        return exit_code(e)


if __name__ == '__main__':
    sys.exit(main())
