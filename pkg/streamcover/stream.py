#!/usr/bin/env python3

import logging
import threading
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, Iterator, Union

from . import parser
from . import util as u
from .classes import SetSystem
from .errors import NegativeBalance, NestedPass
from .sc_types import Point2

log = logging.getLogger(__name__)

LEDGER_LINES = ('ground', 'guess', 'sample', 'projection', 'solution', 'canonical')


class InMemorySource:
    def __init__(self, sys: SetSystem):
        self._sys = sys

    @property
    def n(self) -> int:
        return self._sys.n

    @property
    def m(self) -> int:
        return self._sys.m

    def records(self) -> Iterator:
        return iter(self._sys.records)


class SscFileSource:
    """Re-reads and re-validates the .ssc file on every pass"""

    def __init__(self, path: Union[str, Path], allow_empty: bool = False):
        self._path = path
        self._allow_empty = allow_empty
        with open(path) as f:
            self._n, self._m, _ = parser.read_ssc(f, allow_empty)

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return self._m

    def records(self) -> Iterator:
        with open(self._path, buffering=u.read_buffer_size()) as f:
            _, _, records = parser.read_ssc(f, self._allow_empty)
            for record, _ in records:
                yield record


class BinaryFileSource:
    def __init__(self, path: Union[str, Path], allow_empty: bool = False):
        self._path = path
        self._allow_empty = allow_empty
        with open(path, 'rb') as f:
            self._n, self._m, _ = parser.read_binary(f.read(12), allow_empty)

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return self._m

    def records(self) -> Iterator:
        with open(self._path, 'rb', buffering=u.read_buffer_size()) as f:
            raw = f.read()
        _, _, records = parser.read_binary(raw, self._allow_empty)
        for record, _ in records:
            yield record


class GeoFileSource:
    """Streams the shapes of a .geo file; points are read once by the caller"""

    def __init__(self, path: Union[str, Path]):
        self._path = path
        with open(path) as f:
            (self._n, self._m, self._scale), _ = parser.read_geo_items(f)

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return self._m

    def records(self) -> Iterator:
        with open(self._path, buffering=u.read_buffer_size()) as f:
            _, items = parser.read_geo_items(f)
            for _, item in items:
                if not isinstance(item, Point2):
                    yield item


class ListSource:
    """In-memory sequence of arbitrary records (shapes for the geometric solver)"""

    def __init__(self, items, n: int):
        self._items = tuple(items)
        self._n = n

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._items)

    def records(self) -> Iterator:
        return iter(self._items)


def open_source(path: Union[str, Path], allow_empty: bool = False):
    if parser.is_binary(path):
        return BinaryFileSource(path, allow_empty)
    if Path(path).suffix == '.geo':
        return GeoFileSource(path)
    return SscFileSource(path, allow_empty)


class PassStream:
    """Re-scannable record sequence counting physical passes"""

    def __init__(self, source):
        if isinstance(source, SetSystem):
            source = InMemorySource(source)
        self._source = source
        self._pass_count = 0
        self._in_pass = False

    @property
    def source(self):
        return self._source

    @property
    def n(self) -> int:
        return self._source.n

    @property
    def m(self) -> int:
        return self._source.m

    @property
    def pass_count(self) -> int:
        return self._pass_count

    @property
    def in_pass(self) -> bool:
        return self._in_pass

    def begin_pass(self) -> Iterator:
        if self._in_pass:
            raise NestedPass(f'pass {self._pass_count + 1} started while another is open')
        self._in_pass = True
        return self._source.records()

    def end_pass(self):
        if not self._in_pass:
            raise NestedPass('end_pass without begin_pass')
        self._in_pass = False
        self._pass_count += 1
        log.debug(f'pass {self._pass_count} done')

    @contextmanager
    def scan(self):
        """An aborted scan (exception or early break) still counts as one pass"""
        records = self.begin_pass()
        try:
            yield records
        finally:
            if hasattr(records, 'close'):
                records.close()
            self.end_pass()


class SpaceLedger:
    """Semantic space accounting: one unit per stored element index, set id or sampled element id"""

    def __init__(self):
        self._lock = threading.Lock()
        self._current = 0
        self._peak = 0
        self._lines = {line: 0 for line in LEDGER_LINES}

    @property
    def current_units(self) -> int:
        return self._current

    @property
    def peak_units(self) -> int:
        return self._peak

    def balance(self, line: str) -> int:
        return self._lines.get(line, 0)

    def charge(self, units: int, line: str = 'guess'):
        with self._lock:
            line_balance = self._lines.get(line, 0) + units
            if self._current + units < 0 or line_balance < 0:
                raise NegativeBalance(f'charging {units} to {line!r} would leave a negative balance')
            self._lines[line] = line_balance
            self._current += units
            self._peak = max(self._peak, self._current)

    def snapshot(self) -> Dict[str, int]:
        with self._lock:
            snap = {'current': self._current, 'peak': self._peak}
            snap.update(self._lines)
            return snap


def charge(ledger: SpaceLedger, units: int, line: str = 'guess'):
    ledger.charge(units, line)
