#!/usr/bin/env python3

import logging
from itertools import combinations
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

from .classes import Cover, ProjectedInstance, SetSystem
from .errors import Infeasible, TooLarge

log = logging.getLogger(__name__)

MAX_SETS = 26


class OracleResult(NamedTuple):
    opt_size: int
    witness: Cover
    method: str


def brute_force_masks(universe: int, masks: Sequence[int], max_size: Optional[int] = None
                      ) -> Optional[Tuple[int, ...]]:
    """Indices of a minimum cover of the universe bitmask, enumerating subsets by cardinality"""
    limit = len(masks) if max_size is None else min(max_size, len(masks))
    for size in range(limit + 1):
        for combo in combinations(range(len(masks)), size):
            union = 0
            for i in combo:
                union |= masks[i]
            if union & universe == universe:
                return combo
    return None


def brute_force_optimal(sys: Union[SetSystem, ProjectedInstance], max_size: Optional[int] = None) -> OracleResult:
    if isinstance(sys, SetSystem):
        universe = (1 << sys.n) - 1
        ids = [r.set_id for r in sys]
        masks = sys.to_masks()
    else:
        universe = 0
        for e in sys.universe:
            universe |= 1 << e
        ids, masks = [], []  # type: List[int], List[int]
        for set_id, projection in sys.sets:
            mask = 0
            for e in projection:
                mask |= 1 << e
            ids.append(set_id)
            masks.append(mask)
    if len(masks) > MAX_SETS:
        raise TooLarge(f'brute force handles at most {MAX_SETS} sets, got {len(masks)}')
    union = 0
    for mask in masks:
        union |= mask
    if union & universe != universe:
        raise Infeasible('instance has an uncoverable element', (universe & ~union).bit_length() - 1)
    combo = brute_force_masks(universe, masks, max_size)
    if combo is None:
        raise TooLarge(f'no cover with at most {max_size} sets')
    log.debug(f'oracle: optimum {len(combo)} over {len(masks)} sets')
    return OracleResult(len(combo), Cover(ids[i] for i in combo), 'exhaustive-2^m')
