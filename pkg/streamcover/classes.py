#!/usr/bin/env python3

from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from ordered_set import OrderedSet

from . import util as u
from .errors import BadParams, IdOutOfRange, UnknownSetId
from .sc_types import ElementId, RunStats, SetId, SetRecord


class SetSystem:
    """Ground set [0, n) and an ordered family of m sets (stream order = id order)"""

    def __init__(self,
                 n: int,
                 records: Sequence[SetRecord],
                 allow_empty: bool = False,
                 dup_warnings: int = 0,
                 planted: Optional[Sequence[SetId]] = None
                 ):
        if n < 1:
            raise BadParams(f'ground set must be non-empty, got n={n}')
        self._n = n
        self._records = tuple(records)
        self._allow_empty = allow_empty
        self._dup_warnings = dup_warnings
        self._planted = tuple(planted) if planted is not None else None
        self._masks = None
        for i, record in enumerate(self._records):
            if record.set_id != i:
                raise BadParams(f'set ids must be 0..m-1 in order, found {record.set_id} at position {i}')
            if not record.elements and not allow_empty:
                raise BadParams(f'set {i} is empty')
            prev = -1
            for e in record.elements:
                if e <= prev:
                    raise BadParams(f'set {i} elements are not strictly increasing')
                if e >= n:
                    raise IdOutOfRange(f'element {e} of set {i} is not below n={n}')
                prev = e
        self._feasible = self.union_mask() == (1 << n) - 1

    def __iter__(self) -> Iterator[SetRecord]:
        return iter(self._records)

    def __len__(self) -> int:
        return len(self._records)

    def __eq__(self, other):
        return isinstance(other, SetSystem) and self.n == other.n and self.records == other.records

    def __repr__(self):
        return f'SetSystem(n={self._n}, m={self.m}, feasible={self._feasible})'

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._records)

    @property
    def records(self) -> Tuple[SetRecord, ...]:
        return self._records

    @property
    def feasible(self) -> bool:
        return self._feasible

    @property
    def allow_empty(self) -> bool:
        return self._allow_empty

    @property
    def dup_warnings(self) -> int:
        return self._dup_warnings

    @property
    def planted(self) -> Optional[Tuple[SetId, ...]]:
        return self._planted

    def record(self, set_id: SetId) -> SetRecord:
        if not 0 <= set_id < self.m:
            raise UnknownSetId(f'no set with id {set_id} (m={self.m})')
        return self._records[set_id]

    def to_masks(self) -> List[int]:
        if self._masks is None:
            self._masks = [u.mask_of(r.elements) for r in self._records]
        return self._masks

    def union_mask(self) -> int:
        union = 0
        for mask in self.to_masks():
            union |= mask
        return union

    def uncoverable(self) -> List[ElementId]:
        return u.elements_of(((1 << self._n) - 1) & ~self.union_mask())

    def set_sizes(self) -> List[int]:
        return [len(r.elements) for r in self._records]


class Cover:
    def __init__(self, chosen: Iterable[SetId] = (), stats: Optional[RunStats] = None):
        chosen = list(chosen)
        self._chosen = OrderedSet(chosen)
        if len(self._chosen) != len(chosen):
            raise BadParams('cover lists a set id twice')
        self._stats = stats

    def __len__(self) -> int:
        return len(self._chosen)

    def __iter__(self) -> Iterator[SetId]:
        return iter(self._chosen)

    def __repr__(self):
        return f'Cover({list(self._chosen)})'

    @property
    def chosen(self) -> List[SetId]:
        return list(self._chosen)

    @property
    def size(self) -> int:
        return len(self._chosen)

    @property
    def stats(self) -> Optional[RunStats]:
        return self._stats

    def with_stats(self, stats: RunStats) -> 'Cover':
        return Cover(self._chosen, stats)


class ProjectedInstance:
    """Sampled leftover universe plus the stored projections R ∩ universe"""

    def __init__(self, universe: Iterable[ElementId], sets: Iterable[Tuple[SetId, Iterable[ElementId]]]):
        self._universe = tuple(sorted(set(universe)))
        universe_set = set(self._universe)
        self._sets = []
        for set_id, projection in sets:
            projection = u.normalize_elements(projection)
            if not universe_set.issuperset(projection):
                raise BadParams(f'projection of set {set_id} leaves the universe')
            self._sets.append((set_id, projection))

    @classmethod
    def from_set_system(cls, sys: SetSystem) -> 'ProjectedInstance':
        return cls(range(sys.n), ((r.set_id, r.elements) for r in sys))

    @property
    def universe(self) -> Tuple[ElementId, ...]:
        return self._universe

    @property
    def sets(self) -> List[Tuple[SetId, Tuple[ElementId, ...]]]:
        return self._sets

    def units(self) -> int:
        return sum(len(projection) for _, projection in self._sets)

    def uncoverable(self) -> Optional[ElementId]:
        covered = set()
        for _, projection in self._sets:
            covered.update(projection)
        for e in self._universe:
            if e not in covered:
                return e
        return None


def verify_cover(sys: SetSystem, cover: Iterable[SetId]) -> bool:
    union = 0
    masks = sys.to_masks()
    for set_id in cover:
        if not 0 <= set_id < sys.m:
            raise UnknownSetId(f'no set with id {set_id} (m={sys.m})')
        union |= masks[set_id]
    return union == (1 << sys.n) - 1
