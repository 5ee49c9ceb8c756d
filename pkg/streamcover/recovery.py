#!/usr/bin/env python3

import logging
import math
from itertools import combinations
from typing import FrozenSet, Iterable, List, Optional, Sequence

import numpy as np

from . import util as u
from .errors import BadParams
from .run_many import run_parallel
from .sc_types import RecoveryRun

log = logging.getLogger(__name__)

UNIQUENESS_CHUNK = 10 ** 4


class DisjointnessOracle:
    """Answers whether some hidden set is disjoint from a query, optionally flipping answers at error_rate"""

    def __init__(self, family: Sequence[Iterable[int]], error_rate: float = 0.0, rng: Optional[np.random.Generator] = None):
        if not 0 <= error_rate < 1:
            raise BadParams(f'error rate must lie in [0, 1), got {error_rate}')
        self._family = [frozenset(s) for s in family]
        self._masks = [u.mask_of(s) for s in self._family]
        self._error_rate = error_rate
        self._rng = rng if rng is not None else np.random.default_rng(0)
        self._query_count = 0

    @property
    def query_count(self) -> int:
        return self._query_count

    def exists_disjoint(self, query: int) -> bool:
        """query is a bitmask over [0, n)"""
        self._query_count += 1
        answer = any(not mask & query for mask in self._masks)
        if self._error_rate and self._rng.random() < self._error_rate:
            return not answer
        return answer

    def confirms(self, recovered: Iterable[FrozenSet[int]]) -> bool:
        """Scoring hook: whether recovered equals the hidden family as a set of sets; not a query"""
        return set(recovered) == set(self._family)


def is_intersecting(family: Iterable[Iterable[int]]) -> bool:
    """No member contained in another"""
    members = list({frozenset(s) for s in family})
    return not any(a <= b or b <= a for a, b in combinations(members, 2))


def query_size(m: int, c1: float) -> int:
    return max(1, math.ceil(c1 * u.ceil_log2(m)))


def default_budget(m: int, c1: float) -> int:
    return max(1, u.safe_ceil(m ** (c1 + 3) * math.log2(max(m, 1))))


def recover_family(oracle: DisjointnessOracle,
                   n: int,
                   m: int,
                   c1: float = 2.0,
                   budget: Optional[int] = None,
                   rng: Optional[np.random.Generator] = None
                   ) -> RecoveryRun:
    """Random probes of size c1*ceil(log2 m); every positive probe Q is expanded element by element into
    the set of elements whose addition makes Q meet every hidden set. Only maximal sets are kept."""
    q = query_size(m, c1)
    if n < q:
        raise BadParams(f'need n >= {q} for queries of size c1*ceil(log2 m), got n={n}')
    budget = default_budget(m, c1) if budget is None else budget
    rng = rng if rng is not None else np.random.default_rng(0)
    recovered = []  # type: List[int]
    positive = 0
    for _ in range(budget):
        query = u.mask_of(rng.choice(n, q, replace=False).tolist())
        if not oracle.exists_disjoint(query):
            continue
        positive += 1
        found = 0
        for e in range(n):
            bit = 1 << e
            if not query & bit and not oracle.exists_disjoint(query | bit):
                found |= bit
        # keep maximal sets only
        if any(found & kept == found for kept in recovered):
            continue
        recovered = [kept for kept in recovered if kept & found != kept]
        recovered.append(found)
    family = tuple(sorted((frozenset(u.elements_of(mask)) for mask in recovered), key=sorted))
    success = oracle.confirms(family)
    log.debug(f'recovery: {len(family)} sets, {positive} positive probes, {oracle.query_count} queries, success={success}')
    return RecoveryRun(family, oracle.query_count, success, positive)


def random_family(n: int, m: int, rng: np.random.Generator, density: float = 0.5) -> List[FrozenSet[int]]:
    return [frozenset(np.flatnonzero(row).tolist()) for row in rng.random((m, n)) < density]


def recovery_trial(n: int, m: int, c1: float, seed: int, trial: int,
                   budget: Optional[int] = None, error_rate: float = 0.0) -> RecoveryRun:
    family = random_family(n, m, u.substream(seed, trial, 0))
    oracle = DisjointnessOracle(family, error_rate, u.substream(seed, trial, 1))
    return recover_family(oracle, n, m, c1, budget, u.substream(seed, trial, 2))


def run_recovery_trials(n: int, m: int, c1: float, trials: int, seed: int,
                        budget: Optional[int] = None, error_rate: float = 0.0, jobs: int = 1) -> List[RecoveryRun]:
    args = [(n, m, c1, seed, trial, budget, error_rate) for trial in range(trials)]
    runs = run_parallel(recovery_trial, args, jobs)
    log.info(f'recovery: {sum(r.success for r in runs)}/{trials} trials fully recovered')
    return runs


def uniqueness_stats(n: int, m: int, c: float, trials: int, rng: np.random.Generator) -> float:
    """Frequency with which a random query of size c*ceil(log2 m) is disjoint from exactly one set of a
    fresh random family (each element in each set with probability 1/2)"""
    if trials < 1:
        raise BadParams(f'trials must be positive, got {trials}')
    q = min(n, math.ceil(c * u.ceil_log2(m)))
    hits = 0
    done = 0
    while done < trials:
        chunk = min(UNIQUENESS_CHUNK, trials - done)
        family = rng.random((chunk, m, n)) < 0.5
        query = np.zeros((chunk, n), dtype=bool)
        if q:
            picked = np.argsort(rng.random((chunk, n)), axis=1)[:, :q]
            np.put_along_axis(query, picked, True, axis=1)
        disjoint = ~(family & query[:, None, :]).any(axis=2)
        hits += int((disjoint.sum(axis=1) == 1).sum())
        done += chunk
    return hits / trials
