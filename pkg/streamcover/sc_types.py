#!/usr/bin/env python3

from typing import FrozenSet, NamedTuple, Optional, Tuple

ElementId = int
SetId = int


class SetRecord(NamedTuple):
    set_id: SetId
    elements: Tuple[ElementId, ...]  # strictly increasing


class SolveParams(NamedTuple):
    delta: float = 0.5
    c: float = 2.0               # sampling constant
    rho_mode: str = 'greedy'     # 'exact' (rho=1) or 'greedy' (rho=ceil(ln n))
    seed: int = 0
    geom_threshold: str = 'original'  # size test of pass A against n/k or |leftover|/k


class RunStats(NamedTuple):
    passes: int
    peak_space_units: int
    valid: bool
    guess_k: int
    seed: int
    ground_units: int = 0
    capped_samples: int = 0
    residuals: Tuple[Tuple[int, Tuple[int, ...]], ...] = ()  # (k, uncovered count after each iteration)


class SampleSpec(NamedTuple):
    p: float
    eps: float
    q: float
    family_log: float  # log2 of the range-family size bound


class SetCheck(NamedTuple):
    set_id: SetId
    size: int
    hits: int
    heavy: bool
    ok: bool


class ApproxReport(NamedTuple):
    checks: Tuple[SetCheck, ...]
    failures: int
    passed: bool


class Point2(NamedTuple):
    x: int  # scaled integer coordinates
    y: int


class Disc(NamedTuple):
    center: Point2
    radius: int
    shape_id: int


class Shape(NamedTuple):
    kind: str  # 'r' or 't', parsed but not solvable
    shape_id: int
    coords: Tuple[int, ...]


class CanonicalEntry(NamedTuple):
    projection: Tuple[int, ...]  # sorted point indices
    witness: int                 # shape_id of a disc with exactly this projection


class RecoveryRun(NamedTuple):
    recovered: Tuple[FrozenSet[int], ...]
    queries_used: int
    success: bool
    positive_probes: int


class EquivalenceReport(NamedTuple):
    n: int
    p: int
    opt: int
    chase: bool
    lower_bound: int
    passed: bool
    tight: bool = True  # OPT exceeds the bound by exactly one when the chases miss


class BenchRow(NamedTuple):
    instance: str
    n: int
    m: int
    algorithm: str
    delta: float
    size: Optional[int]
    opt: Optional[int]
    ratio: Optional[float]
    passes: Optional[int]
    peak_space_units: Optional[int]
    wall_ms: Optional[float]
    seed: int
    status: str = 'ok'


class Sample(NamedTuple):
    elements: FrozenSet[int]
    source_size: int  # size of the ground the sample was drawn from
