#!/usr/bin/env python3

import csv
import io
import json
import logging
import time
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from . import iter_set_cover
from .classes import SetSystem, verify_cover
from .errors import StreamCoverError
from .generator import generate_instance
from .geometry import GeoInstance, geom_solve, load_geo
from .oracle import MAX_SETS, brute_force_optimal
from .parser import load_instance
from .run_many import run_parallel
from .sc_types import BenchRow, SolveParams
from .stream import PassStream, SpaceLedger

log = logging.getLogger(__name__)

Instance = Union[SetSystem, GeoInstance]
ALGORITHMS = ('exact', 'greedy')
INSTANCE_SUFFIXES = ('.ssc', '.bin', '.geo')


def generated_instances(kind: str, count: int, n: int, m: int, seed: int, **kwargs) -> List[Tuple[str, SetSystem]]:
    log.info(f'Generating {count} {kind} instances')
    return [(f'{kind}-{seed}-{i}', generate_instance(kind, n, m, seed + i, ensure_feasible=True, **kwargs))
            for i in range(count)]


def directory_instances(folder: Union[str, Path], allow_empty: bool = False) -> List[Tuple[str, Instance]]:
    instances = []
    for path in sorted(Path(folder).iterdir()):
        if path.suffix == '.geo':
            instances.append((path.name, load_geo(path)))
        elif path.suffix in INSTANCE_SUFFIXES:
            instances.append((path.name, load_instance(path, allow_empty)))
    return instances


def solve_instance(inst: Instance, params: SolveParams, ledger: Optional[SpaceLedger] = None):
    if isinstance(inst, GeoInstance):
        return geom_solve(inst.points, inst.stream(), params, ledger)
    return iter_set_cover.solve(PassStream(inst), inst.n, params, ledger)


def bench_row(name: str, inst: Instance, algorithm: str, delta: float, c: float, seed: int, with_oracle: bool) -> BenchRow:
    """One solve; errors are caught and reported in the status column"""
    sys = inst.to_set_system() if isinstance(inst, GeoInstance) else inst
    label = ('geom-' if isinstance(inst, GeoInstance) else 'iter-') + algorithm
    params = SolveParams(delta=delta, c=c, rho_mode=algorithm, seed=seed)
    try:
        start = time.perf_counter()
        cover = solve_instance(inst, params)
        wall_ms = (time.perf_counter() - start) * 1000
        if not verify_cover(sys, cover):
            return BenchRow(name, sys.n, sys.m, label, delta, None, None, None, None, None, None, seed, 'failed:InvalidCover')
        opt = brute_force_optimal(sys).opt_size if with_oracle and sys.m <= MAX_SETS else None
        ratio = len(cover) / opt if opt else None
        return BenchRow(name, sys.n, sys.m, label, delta, len(cover), opt, ratio, cover.stats.passes,
                        cover.stats.peak_space_units, round(wall_ms, 3), seed)
    except StreamCoverError as e:
        log.warning(f'{name} / {label} / delta={delta}: {type(e).__name__}: {e}')
        return BenchRow(name, sys.n, sys.m, label, delta, None, None, None, None, None, None, seed,
                        f'failed:{type(e).__name__}')


def bench(instances: Sequence[Tuple[str, Instance]],
          deltas: Iterable[float] = (1.0, 0.5),
          algorithms: Iterable[str] = ('exact',),
          c: float = 2.0,
          seed: int = 0,
          with_oracle: bool = False,
          jobs: int = 1
          ) -> List[BenchRow]:
    """One row per (instance, algorithm, delta), in that nesting order"""
    args = [(name, inst, algorithm, delta, c, seed, with_oracle)
            for name, inst in instances for algorithm in algorithms for delta in deltas]
    return run_parallel(bench_row, args, jobs)


def _cell(value) -> str:
    return '-' if value is None else str(value)


def rows_to_csv(rows: Iterable[BenchRow]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(BenchRow._fields)
    for row in rows:
        writer.writerow([_cell(value) for value in row])
    return out.getvalue()


def rows_to_json(rows: Iterable[BenchRow]) -> str:
    return json.dumps([row._asdict() for row in rows], indent=1)


def rows_to_text(rows: Iterable[BenchRow]) -> str:
    lines = ['  '.join(BenchRow._fields)]
    lines.extend('  '.join(_cell(value) for value in row) for row in rows)
    return '\n'.join(lines) + '\n'


FORMATTERS = {
    'csv': rows_to_csv,
    'json': rows_to_json,
    'text': rows_to_text,
}
