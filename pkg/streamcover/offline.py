#!/usr/bin/env python3

import logging
from typing import Dict, List, Optional

from . import util as u
from .classes import Cover, ProjectedInstance
from .errors import BadParams, BudgetExceeded, Infeasible

log = logging.getLogger(__name__)


def _check_feasible(inst: ProjectedInstance):
    missing = inst.uncoverable()
    if missing is not None:
        raise Infeasible('universe element in no stored set', missing)


def greedy_cover(inst: ProjectedInstance) -> Cover:
    """Most newly covered elements first, ties to the smallest set id"""
    _check_feasible(inst)
    uncovered = u.mask_of(inst.universe)
    candidates = sorted((set_id, u.mask_of(projection)) for set_id, projection in inst.sets)
    chosen = []
    while uncovered:
        best_id, best_gain, best_mask = None, 0, 0
        for set_id, mask in candidates:
            gain = u.popcount(mask & uncovered)
            if gain > best_gain:
                best_id, best_gain, best_mask = set_id, gain, mask
        chosen.append(best_id)
        uncovered &= ~best_mask
    return Cover(chosen)


class _BranchAndBound:
    def __init__(self, ids: List[int], masks: List[int], bound: int, incumbent: Optional[List[int]]):
        self._ids = ids
        self._masks = masks
        self._bound = bound
        self._best = incumbent
        self._containing = {}  # type: Dict[int, List[int]]
        self.nodes = 0

    @property
    def best(self) -> Optional[List[int]]:
        return self._best

    def sets_holding(self, element: int) -> List[int]:
        return self._sets_containing(1 << element)

    def _sets_containing(self, low: int) -> List[int]:
        if low not in self._containing:
            self._containing[low] = [i for i, mask in enumerate(self._masks) if mask & low]
        return self._containing[low]

    def search(self, uncovered: int, chosen: List[int]):
        self.nodes += 1
        if not uncovered:
            if len(chosen) < self._bound:
                self._best = [self._ids[i] for i in chosen]
                self._bound = len(chosen)
            return
        max_gain = max(u.popcount(mask & uncovered) for mask in self._masks)
        remaining = u.popcount(uncovered)
        if len(chosen) + -(-remaining // max_gain) >= self._bound:
            return
        low = uncovered & -uncovered
        branches = sorted(self._sets_containing(low), key=lambda i: (-u.popcount(self._masks[i] & uncovered), self._ids[i]))
        for i in branches:
            chosen.append(i)
            self.search(uncovered & ~self._masks[i], chosen)
            chosen.pop()


def exact_cover(inst: ProjectedInstance, budget: Optional[int] = None) -> Cover:
    """Minimum-cardinality cover by branch-and-bound on the lowest uncovered element.

    With a budget the search only looks for covers of at most budget sets and raises
    BudgetExceeded when the optimum is larger.
    """
    _check_feasible(inst)
    if budget is not None and budget < 0:
        raise BadParams(f'budget must be non-negative, got {budget}')
    universe = u.mask_of(inst.universe)
    if not universe:
        return Cover()
    ids, masks = [], []
    seen = set()
    for set_id, projection in sorted(inst.sets):
        mask = u.mask_of(projection)
        if mask and mask not in seen:
            seen.add(mask)
            ids.append(set_id)
            masks.append(mask)
    greedy = greedy_cover(inst).chosen
    if budget is None or len(greedy) <= budget:
        solver = _BranchAndBound(ids, masks, len(greedy), greedy)
    else:
        solver = _BranchAndBound(ids, masks, budget + 1, None)
    # sets holding an element no other set has belong to every cover
    forced = sorted({holders[0] for holders in (solver.sets_holding(e) for e in u.elements_of(universe)) if len(holders) == 1})
    for i in forced:
        universe &= ~masks[i]
    solver.search(universe, forced)
    log.debug(f'exact cover: {solver.nodes} nodes, |universe|={len(inst.universe)}, {len(ids)} distinct sets')
    if solver.best is None:
        raise BudgetExceeded(f'optimum exceeds budget {budget}')
    return Cover(sorted(solver.best))


def offline_solve(inst: ProjectedInstance, rho_mode: str, budget: Optional[int] = None) -> Cover:
    if rho_mode == 'exact':
        return exact_cover(inst, budget)
    elif rho_mode == 'greedy':
        return greedy_cover(inst)
    raise BadParams(f'unknown offline solver {rho_mode!r}')
