#!/usr/bin/env python3

import logging
import math
from typing import List, Optional

import numpy as np

from . import util as u
from .classes import SetSystem
from .errors import BadParams
from .sc_types import SetRecord

log = logging.getLogger(__name__)

KINDS = ('uniform-random', 'planted-cover', 'sparse')


def generate_instance(kind: str,
                      n: int,
                      m: int,
                      seed: int,
                      density: float = 0.5,
                      opt_size: Optional[int] = None,
                      s_cap: Optional[int] = None,
                      ensure_feasible: bool = False
                      ) -> SetSystem:
    """Deterministic in (kind, n, m, seed, kind parameters). Generated sets are never empty.

    planted-cover partitions a random permutation of the ground set into opt_size blocks placed at
    random positions among m - opt_size small noise sets, so a cover of opt_size sets exists.
    """
    if n < 1 or m < 1:
        raise BadParams(f'need n >= 1 and m >= 1, got n={n} m={m}')
    if kind not in KINDS:
        raise BadParams(f'unknown instance kind {kind!r}, expected one of {KINDS}')
    rng = u.substream(seed, KINDS.index(kind))
    log.info(f'Generating {kind} instance n={n} m={m} seed={seed}')
    planted = None
    if kind == 'planted-cover':
        if opt_size is None or not 1 <= opt_size <= min(m, n):
            raise BadParams(f'planted-cover needs 1 <= opt_size <= min(m, n), got {opt_size}')
        sets, planted = planted_sets(n, m, opt_size, rng)
    else:
        if not 0 < density <= 1:
            raise BadParams(f'density must lie in (0, 1], got {density}')
        sets = random_sets(n, m, density, rng)
        if kind == 'sparse':
            if s_cap is None or s_cap < 1:
                raise BadParams(f'sparse needs s_cap >= 1, got {s_cap}')
            sets = [s if len(s) <= s_cap else rng.choice(s, s_cap, replace=False).tolist() for s in sets]
    if ensure_feasible:
        patch_uncovered(sets, n, rng, s_cap if kind == 'sparse' else None)
    records = [SetRecord(i, u.normalize_elements(s)) for i, s in enumerate(sets)]
    return SetSystem(n, records, planted=planted)


def random_sets(n: int, m: int, density: float, rng: np.random.Generator) -> List[List[int]]:
    membership = rng.random((m, n)) < density
    sets = []
    for row in membership:
        elements = np.flatnonzero(row).tolist()
        if not elements:
            elements = [int(rng.integers(n))]
        sets.append(elements)
    return sets


def planted_sets(n: int, m: int, opt_size: int, rng: np.random.Generator):
    order = rng.permutation(n)
    cuts = np.sort(rng.choice(np.arange(1, n), opt_size - 1, replace=False)) if opt_size > 1 else []
    blocks = [block.tolist() for block in np.split(order, cuts)]
    planted = sorted(rng.choice(m, opt_size, replace=False).tolist())
    noise_cap = max(1, math.ceil(n / (2 * opt_size)))
    sets = []
    blocks_iter = iter(blocks)
    for set_id in range(m):
        if set_id in planted:
            sets.append(next(blocks_iter))
        else:
            size = int(rng.integers(1, noise_cap + 1))
            sets.append(rng.choice(n, size, replace=False).tolist())
    return sets, planted


def patch_uncovered(sets: List[List[int]], n: int, rng: np.random.Generator, s_cap: Optional[int] = None):
    """Adds every element no set contains to a random set, preferring sets below s_cap"""
    covered = set()
    for s in sets:
        covered.update(s)
    missing = [e for e in range(n) if e not in covered]
    if missing:
        log.debug(f'patching {len(missing)} uncoverable element(s)')
    for e in missing:
        candidates = [i for i, s in enumerate(sets) if s_cap is None or len(s) < s_cap] or list(range(len(sets)))
        sets[candidates[int(rng.integers(len(candidates)))]].append(e)
