#!/usr/bin/env python3

import logging
import math
from typing import Iterable

import numpy as np

from . import util as u
from .classes import SetSystem
from .errors import BadParams, EmptySample
from .generator import generate_instance
from .sc_types import ApproxReport, Sample, SampleSpec, SetCheck

log = logging.getLogger(__name__)

TOLERANCE = 1e-12


def _check_size_args(rho: int, k: int, n: int, m: int, delta: float, c: float):
    if rho < 1 or k < 1 or c <= 0:
        raise BadParams(f'rho, k and c must be positive, got rho={rho} k={k} c={c}')
    if n < 2 or m < 2:
        raise BadParams(f'sample-size formulas need n >= 2 and m >= 2, got n={n} m={m}')
    if not 0 < delta <= 1:
        raise BadParams(f'delta must lie in (0, 1], got {delta}')


def iter_sample_size(rho: int, k: int, n: int, m: int, delta: float, c: float) -> int:
    """ceil(c * rho * k * n^delta * log2 m * log2 n), uncapped"""
    _check_size_args(rho, k, n, m, delta, c)
    return u.safe_ceil(c * rho * k * n ** delta * math.log2(m) * math.log2(n))


def geom_sample_size(rho: int, k: int, n: int, m: int, delta: float, c: float) -> int:
    """ceil(c * rho * k * (n/k)^delta * log2 m * log2 n), uncapped"""
    _check_size_args(rho, k, n, m, delta, c)
    return u.safe_ceil(c * rho * k * (n / k) ** delta * math.log2(m) * math.log2(n))


def draw_sample(ground: Iterable[int], size: int, rng: np.random.Generator) -> Sample:
    """Uniform without replacement; the whole ground when size >= |ground|"""
    if size < 0:
        raise BadParams(f'sample size must be non-negative, got {size}')
    ground = sorted(ground)
    if size >= len(ground):
        return Sample(frozenset(ground), len(ground))
    picked = rng.choice(len(ground), size, replace=False)
    return Sample(frozenset(ground[i] for i in picked.tolist()), len(ground))


def passes_size_test(hits: int, sample_size: int, k: int) -> bool:
    """|R ∩ L| >= |S| / k, compared in integers; a set hitting nothing never passes"""
    return hits > 0 and hits * k >= sample_size


# Relative (p, eps)-approximations
def make_spec(p: float, eps: float, q: float, family_size: int) -> SampleSpec:
    for name, value in (('p', p), ('eps', eps), ('q', q)):
        if not 0 < value < 1:
            raise BadParams(f'{name} must lie in (0, 1), got {value}')
    if family_size < 1:
        raise BadParams(f'family size must be positive, got {family_size}')
    return SampleSpec(p, eps, q, math.log2(family_size))


def relative_approx_sample_size(p: float, eps: float, q: float, family_size: int, c_prime: float = 4.0) -> int:
    """(c'/(eps^2 p)) * (log2|F| * log2(1/p) + log2(1/q)), the size at which a uniform sample is a
    relative (p, eps)-approximation with probability at least 1 - q"""
    spec = make_spec(p, eps, q, family_size)
    return u.safe_ceil(c_prime / (eps ** 2 * p) * (spec.family_log * math.log2(1 / p) + math.log2(1 / q)))


def check_relative_approx(sys: SetSystem, sample: Sample, spec: SampleSpec) -> ApproxReport:
    z = len(sample.elements)
    if z == 0:
        raise EmptySample('cannot estimate densities from an empty sample')
    n = sys.n
    checks = []
    for record in sys:
        size = len(record.elements)
        hits = len(sample.elements.intersection(record.elements))
        density, estimate = size / n, hits / z
        heavy = size >= spec.p * n
        if heavy:
            ok = (1 - spec.eps) * density - TOLERANCE <= estimate <= (1 + spec.eps) * density + TOLERANCE
        else:
            ok = abs(estimate - density) <= spec.eps * spec.p + TOLERANCE
        checks.append(SetCheck(record.set_id, size, hits, heavy, ok))
    failures = sum(not check.ok for check in checks)
    return ApproxReport(tuple(checks), failures, failures == 0)


def size_test_false_positive_rate(n: int,
                                  m: int,
                                  k: int,
                                  delta: float = 0.5,
                                  c: float = 4.0,
                                  density: float = 0.1,
                                  runs: int = 100,
                                  seed: int = 0
                                  ) -> float:
    """Fraction of runs in which some set smaller than n/(c*k) passes the size test on a fresh
    uniform sample of iter_sample_size elements"""
    bad_runs = 0
    for run in range(runs):
        sys = generate_instance('uniform-random', n, m, seed=int(u.substream(seed, run).integers(2 ** 63)), density=density)
        rng = u.substream(seed, run, 1)
        size = min(n, iter_sample_size(1, k, max(n, 2), max(m, 2), delta, c))
        sample = draw_sample(range(n), size, rng)
        for record in sys:
            if len(record.elements) * c * k < n:
                hits = len(sample.elements.intersection(record.elements))
                if passes_size_test(hits, len(sample.elements), k):
                    bad_runs += 1
                    break
    rate = bad_runs / runs
    log.info(f'size test false positives: {bad_runs}/{runs} runs')
    return rate
