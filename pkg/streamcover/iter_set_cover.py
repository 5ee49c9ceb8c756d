#!/usr/bin/env python3

import logging
from typing import Callable, Dict, Iterable, List, Optional, Set

import numpy as np
from ordered_set import OrderedSet

from . import util as u
from .classes import Cover, ProjectedInstance
from .errors import AllGuessesFailed, BudgetExceeded, Infeasible
from .offline import offline_solve
from .sampling import draw_sample, iter_sample_size, passes_size_test
from .sc_types import RunStats, Sample, SetRecord, SolveParams
from .stream import PassStream, SpaceLedger

log = logging.getLogger(__name__)

Solver = Callable[[ProjectedInstance, Optional[int]], Cover]


class GuessState:
    """One parallel execution of the algorithm for a guessed optimum k"""

    def __init__(self, k: int, n: int, ledger: SpaceLedger, sample_size: Optional[int] = None):
        self._k = k
        self._sample_size = n if sample_size is None else sample_size
        self._sol = OrderedSet()
        self._uncovered = set(range(n))  # type: Set[int]
        self._sample = Sample(frozenset(), 0)
        self._leftover = set()  # type: Set[int]
        self._projections = {}  # type: Dict[int, frozenset]
        self._picked = set()  # type: Set[int]
        self._alive = True
        self._charged = {}  # type: Dict[str, int]
        self._residuals = []  # type: List[int]
        self._capped = 0
        self._charge(ledger, n + 2, 'guess')  # uncovered ids + k + iteration counter

    def __repr__(self):
        return f'GuessState(k={self._k}, alive={self._alive}, |sol|={len(self._sol)}, |uncovered|={len(self._uncovered)})'

    @property
    def k(self) -> int:
        return self._k

    @property
    def sample_size(self) -> int:
        return self._sample_size

    @property
    def sol(self) -> List[int]:
        return list(self._sol)

    @property
    def uncovered(self) -> Set[int]:
        return self._uncovered

    @property
    def sample(self) -> Sample:
        return self._sample

    @property
    def leftover(self) -> Set[int]:
        return self._leftover

    @property
    def projections(self) -> Dict[int, frozenset]:
        return self._projections

    @property
    def alive(self) -> bool:
        return self._alive

    @property
    def residuals(self) -> List[int]:
        return self._residuals

    @property
    def capped_samples(self) -> int:
        return self._capped

    def _charge(self, ledger: SpaceLedger, units: int, line: str):
        if units:
            ledger.charge(units, line)
            self._charged[line] = self._charged.get(line, 0) + units

    def _release(self, ledger: SpaceLedger, line: str):
        self._charge(ledger, -self._charged.get(line, 0), line)

    def release_all(self, ledger: SpaceLedger):
        for line in list(self._charged):
            self._release(ledger, line)

    def kill(self, ledger: SpaceLedger, reason: str):
        log.warning(f'guess k={self._k} failed: {reason}')
        self._alive = False
        self.release_all(ledger)

    def begin_iteration(self, rng: np.random.Generator, ledger: SpaceLedger):
        if self._sample_size >= len(self._uncovered) and self._uncovered:
            self._capped += 1
        self._sample = draw_sample(self._uncovered, min(self._sample_size, len(self._uncovered)), rng)
        self._leftover = set(self._sample.elements)
        self._projections = {}
        self._picked = set()
        self._charge(ledger, len(self._sample.elements), 'sample')

    def offer(self, record: SetRecord, ledger: SpaceLedger):
        """Pass 1: size test, then store the projection of shallow sets"""
        if record.set_id in self._sol or not self._leftover:
            return
        inter = self._leftover.intersection(record.elements)
        if passes_size_test(len(inter), len(self._sample.elements), self._k):
            self._add(record.set_id, ledger)
            self._leftover -= inter
        elif inter:
            self._projections[record.set_id] = frozenset(inter)
            self._charge(ledger, len(inter), 'projection')

    def _add(self, set_id: int, ledger: SpaceLedger):
        self._sol.add(set_id)
        self._picked.add(set_id)
        self._charge(ledger, 1, 'solution')

    def solve_offline(self, solver: Solver, ledger: SpaceLedger):
        """Covers the leftover with the stored projections; kills the guess when the budget k is too small"""
        leftover = self._leftover
        inst = ProjectedInstance(leftover, ((set_id, proj & leftover) for set_id, proj in self._projections.items()
                                            if proj & leftover))
        missing = inst.uncoverable()
        if missing is not None:
            raise Infeasible('element in no set', missing)
        try:
            chosen = solver(inst, self._k)
        except BudgetExceeded as e:
            self.kill(ledger, str(e))
            return
        for set_id in chosen:
            self._add(set_id, ledger)
        self._leftover = set()
        self._projections = {}
        self._release(ledger, 'projection')

    def absorb(self, record: SetRecord, ledger: SpaceLedger):
        """Pass 2: remove the elements of sets picked this iteration"""
        if record.set_id in self._picked:
            before = len(self._uncovered)
            self._uncovered.difference_update(record.elements)
            self._charge(ledger, len(self._uncovered) - before, 'guess')

    def end_iteration(self, ledger: SpaceLedger):
        self._release(ledger, 'sample')
        self._sample = Sample(frozenset(), 0)
        self._picked = set()
        self._residuals.append(len(self._uncovered))


def make_solver(rho_mode: str) -> Solver:
    def solver(inst: ProjectedInstance, budget: Optional[int]) -> Cover:
        return offline_solve(inst, rho_mode, budget)
    return solver


def guess_sample_size(k: int, n: int, m: int, params: SolveParams) -> int:
    rho = u.rho(params.rho_mode, n)
    return iter_sample_size(rho, k, max(n, 2), max(m, 2), params.delta, params.c)


# Steps shared by the single-guess round and the parallel driver
def size_test_pass(states: List[GuessState], records: Iterable[SetRecord], ledger: SpaceLedger):
    for record in records:
        for state in states:
            state.offer(record, ledger)


def offline_step(states: List[GuessState], solver: Solver, ledger: SpaceLedger) -> List[GuessState]:
    """Solves each guess's leftover and returns the guesses still alive"""
    for state in states:
        state.solve_offline(solver, ledger)
    return [state for state in states if state.alive]


def residual_pass(states: List[GuessState], records: Iterable[SetRecord], ledger: SpaceLedger):
    for record in records:
        for state in states:
            state.absorb(record, ledger)
    for state in states:
        state.end_iteration(ledger)


def run_iteration(state: GuessState,
                  pass1: Iterable[SetRecord],
                  pass2: Iterable[SetRecord],
                  solver: Solver,
                  rng: np.random.Generator,
                  ledger: SpaceLedger
                  ) -> GuessState:
    """Drives a single guess through one sample / size test / offline solve / residual round"""
    state.begin_iteration(rng, ledger)
    size_test_pass([state], pass1, ledger)
    if offline_step([state], solver, ledger):
        residual_pass([state], pass2, ledger)
    return state


def solve(stream: PassStream, n: int, params: SolveParams = SolveParams(), ledger: Optional[SpaceLedger] = None) -> Cover:
    """Parallel guesses k = 1, 2, 4, ..., 2^ceil(log2 n), all driven by the same 2*ceil(1/delta) scans.

    Returns the smallest cover among the guesses that covered everything, ties to the smaller k.
    """
    ledger = ledger or SpaceLedger()
    iterations = u.iteration_count(params.delta)
    solver = make_solver(params.rho_mode)
    m = stream.m
    start_passes = stream.pass_count
    ledger.charge(n, 'ground')
    guesses = []  # type: List[GuessState]
    try:
        for i in range(u.ceil_log2(n) + 1):
            guesses.append(GuessState(1 << i, n, ledger, guess_sample_size(1 << i, n, m, params)))
        log.info(f'IterSetCover: n={n} m={m} delta={params.delta} iterations={iterations} guesses={len(guesses)}')

        for iteration in range(iterations):
            live = [g for g in guesses if g.alive]
            for index, g in enumerate(guesses):
                if g.alive:
                    g.begin_iteration(u.substream(params.seed, index, iteration), ledger)
            with stream.scan() as records:
                size_test_pass(live, records, ledger)
            live = offline_step(live, solver, ledger)
            with stream.scan() as records:
                residual_pass(live, records, ledger)
            for g in live:
                log.debug(f'iteration {iteration}: k={g.k} |sol|={len(g.sol)} |uncovered|={len(g.uncovered)}')

        alive = [g for g in guesses if g.alive]
        if not alive:
            raise AllGuessesFailed(f'every guess exceeded its offline budget (k up to {guesses[-1].k})')
        successful = [g for g in alive if not g.uncovered]
        if not successful:
            residual = min(min(g.uncovered) for g in alive)
            raise Infeasible('no guess covered the ground set', residual)
        winner = min(successful, key=lambda g: (len(g.sol), g.k))
        stats = RunStats(passes=stream.pass_count - start_passes,
                         peak_space_units=ledger.peak_units,
                         valid=True,
                         guess_k=winner.k,
                         seed=params.seed,
                         ground_units=n,
                         capped_samples=winner.capped_samples,
                         residuals=tuple((g.k, tuple(g.residuals)) for g in guesses))
    finally:
        for g in guesses:
            g.release_all(ledger)
        ledger.charge(-n, 'ground')
    log.info(f'IterSetCover: cover of {len(winner.sol)} sets from k={winner.k}, '
             f'{stats.passes} passes, peak {stats.peak_space_units} units')
    return Cover(winner.sol, stats)
