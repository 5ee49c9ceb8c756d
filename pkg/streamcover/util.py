#!/usr/bin/env python3

from __future__ import annotations

import logging
import math
import os
from typing import Iterable, List

import numpy as np

from .errors import BadParams
from .sc_types import SetRecord

log = logging.getLogger(__name__)

SEED_MASK = (1 << 64) - 1


# Bitmasks
def mask_of(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        mask |= 1 << e
    return mask


def elements_of(mask: int) -> List[int]:
    result = []
    while mask:
        low = mask & -mask
        result.append(low.bit_length() - 1)
        mask ^= low
    return result


def popcount(mask: int) -> int:
    return bin(mask).count('1')


# Arithmetic
def ceil_log2(n: int) -> int:
    """Smallest i with 2**i >= n (0 for n <= 1)"""
    return max(0, (n - 1).bit_length())


def safe_ceil(x: float) -> int:
    # pow/log results like 1024 ** 0.3 land a few ulps off integers
    return math.ceil(x - 1e-9)


def iteration_count(delta: float) -> int:
    if not 0 < delta <= 1:
        raise BadParams(f'delta must lie in (0, 1], got {delta}')
    return safe_ceil(1 / delta)


def rho(rho_mode: str, n: int) -> int:
    if rho_mode == 'exact':
        return 1
    elif rho_mode == 'greedy':
        return max(1, math.ceil(math.log(max(n, 2))))
    raise BadParams(f'unknown rho mode {rho_mode!r}')


# Randomness
def substream(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator for (seed, keys...), stable regardless of call order"""
    return np.random.default_rng(np.random.SeedSequence([seed & SEED_MASK, *keys]))


# SetRecord
def record2str(record: SetRecord) -> str:
    return '{0}: {1}'.format(record.set_id, ' '.join(map(str, record.elements))).rstrip()


def normalize_elements(elements: Iterable[int]) -> tuple:
    return tuple(sorted(set(elements)))


# Environment
DEFAULT_BUFFER = 1 << 20


def read_buffer_size() -> int:
    """Read-buffer size for file-backed streams, from STREAMCOVER_BUFFER"""
    raw = os.environ.get('STREAMCOVER_BUFFER')
    if raw is None:
        return DEFAULT_BUFFER
    try:
        size = int(raw)
    except ValueError:
        size = 0
    if size <= 0:
        log.warning(f'ignoring invalid STREAMCOVER_BUFFER={raw!r}, using {DEFAULT_BUFFER}')
        return DEFAULT_BUFFER
    return size
