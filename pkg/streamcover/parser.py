#!/usr/bin/env python3

import logging
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

import numpy as np
import pyparsing as pp

from . import util as u
from .classes import SetSystem
from .errors import IdOutOfRange, ParseError
from .sc_types import Disc, Point2, SetRecord, Shape

log = logging.getLogger(__name__)

SSC1_MAGIC = b'SSC1'
SHAPE_ARITY = {'d': 3, 'r': 4, 't': 6}


def create_parsers():
    integer = pp.Word(pp.nums).set_parse_action(lambda t: int(t[0]))
    decimal = pp.Regex(r'[+-]?\d+(\.\d+)?')

    # n=<int> m=<int>
    ssc_header = (pp.Suppress('n') + pp.Suppress('=') + integer.copy().set_results_name('n') +
                  pp.Suppress('m') + pp.Suppress('=') + integer.copy().set_results_name('m'))
    # <set_id>: <e1> <e2> ...
    ssc_set = (integer.copy().set_results_name('set_id') + pp.Suppress(':') +
               pp.Group(pp.ZeroOrMore(integer)).set_results_name('elements'))

    # n=<int> m=<int> scale=<int>
    geo_header = ssc_header + pp.Suppress('scale') + pp.Suppress('=') + integer.copy().set_results_name('scale')
    # p <x> <y> | d <cx> <cy> <r> | r ... | t ...
    geo_item = (pp.one_of('p d r t').set_results_name('tag') +
                pp.Group(pp.OneOrMore(decimal)).set_results_name('coords'))

    # n=<int> p=<int>
    isc_header = (pp.Suppress('n') + pp.Suppress('=') + integer.copy().set_results_name('n') +
                  pp.Suppress('p') + pp.Suppress('=') + integer.copy().set_results_name('p'))
    # f <i> <j>: <l1> <l2> ...
    isc_map = (pp.one_of('f g').set_results_name('tag') + integer.copy().set_results_name('i') +
               integer.copy().set_results_name('j') + pp.Suppress(':') +
               pp.Group(pp.ZeroOrMore(integer)).set_results_name('image'))

    return {
        'ssc_header': ssc_header,
        'ssc_set': ssc_set,
        'geo_header': geo_header,
        'geo_item': geo_item,
        'isc_header': isc_header,
        'isc_map': isc_map,
    }


grammars = create_parsers()


def parse_line(grammar: str, text: str, line_no: Optional[int] = None) -> pp.ParseResults:
    try:
        return grammars[grammar].parse_string(text, parse_all=True)
    except pp.ParseException as e:
        raise ParseError(f'malformed line {text!r} ({e.msg})', line_no) from None


def content_lines(lines: Iterable[str]) -> Iterator[Tuple[int, str]]:
    """Yields (1-based line number, stripped text), skipping blanks and # comments"""
    for line_no, line in enumerate(lines, start=1):
        text = line.strip()
        if text and not text.startswith('#'):
            yield line_no, text


def _first_line(content: Iterator[Tuple[int, str]], what: str) -> Tuple[int, str]:
    try:
        return next(content)
    except StopIteration:
        raise ParseError(f'missing {what} header') from None


# .ssc text format
def read_ssc(lines: Iterable[str], allow_empty: bool = False) -> Tuple[int, int, Iterator[Tuple[SetRecord, int]]]:
    """Parses the header eagerly; returns (n, m, lazy iterator of (record, duplicates dropped))"""
    content = content_lines(lines)
    line_no, text = _first_line(content, 'n=<int> m=<int>')
    header = parse_line('ssc_header', text, line_no)
    n, m = header.n, header.m
    if n < 1:
        raise ParseError(f'n must be positive, got {n}', line_no)
    return n, m, _ssc_records(content, n, m, allow_empty)


def _ssc_records(content: Iterator[Tuple[int, str]], n: int, m: int, allow_empty: bool
                 ) -> Iterator[Tuple[SetRecord, int]]:
    expected = 0
    for line_no, text in content:
        parsed = parse_line('ssc_set', text, line_no)
        if parsed.set_id != expected:
            raise ParseError(f'expected set id {expected}, found {parsed.set_id}', line_no)
        if expected >= m:
            raise ParseError(f'more sets than the declared m={m}', line_no)
        yield checked_record(expected, list(parsed.elements), n, allow_empty, line_no)
        expected += 1
    if expected != m:
        raise ParseError(f'header declares m={m} but found {expected} sets')


def checked_record(set_id: int, raw: List[int], n: int, allow_empty: bool, line_no: Optional[int] = None
                   ) -> Tuple[SetRecord, int]:
    elements = u.normalize_elements(raw)
    if elements and elements[-1] >= n:
        raise IdOutOfRange(f'element {elements[-1]} of set {set_id} is not below n={n}', line_no)
    if not elements and not allow_empty:
        raise ParseError(f'set {set_id} is empty (pass allow_empty to accept)', line_no)
    return SetRecord(set_id, elements), len(raw) - len(elements)


# SSC1 binary format
def read_binary(raw: bytes, allow_empty: bool = False) -> Tuple[int, int, Iterator[Tuple[SetRecord, int]]]:
    if raw[:4] != SSC1_MAGIC:
        raise ParseError('missing SSC1 magic')
    if (len(raw) - 4) % 4 or len(raw) < 12:
        raise ParseError('truncated SSC1 file')
    words = np.frombuffer(raw, dtype='<u4', offset=4)
    n, m = int(words[0]), int(words[1])
    if n < 1:
        raise ParseError(f'n must be positive, got {n}')
    return n, m, _binary_records(words, n, m, allow_empty)


def _binary_records(words: np.ndarray, n: int, m: int, allow_empty: bool) -> Iterator[Tuple[SetRecord, int]]:
    pos = 2
    for expected in range(m):
        if pos + 2 > len(words):
            raise ParseError(f'truncated SSC1 file at set {expected}')
        set_id, size = int(words[pos]), int(words[pos + 1])
        if set_id != expected:
            raise ParseError(f'expected set id {expected}, found {set_id}')
        if pos + 2 + size > len(words):
            raise ParseError(f'truncated SSC1 file at set {expected}')
        yield checked_record(set_id, words[pos + 2:pos + 2 + size].tolist(), n, allow_empty)
        pos += 2 + size
    if pos != len(words):
        raise ParseError('trailing data after the declared m sets')


def encode_binary(sys: SetSystem) -> bytes:
    words = [sys.n, sys.m]
    for record in sys:
        words.extend((record.set_id, len(record.elements)))
        words.extend(record.elements)
    return SSC1_MAGIC + np.asarray(words, dtype='<u4').tobytes()


# Loading and saving set systems
def is_binary(path: Union[str, Path]) -> bool:
    with open(path, 'rb') as f:
        return f.read(4) == SSC1_MAGIC


def build_set_system(n: int, m: int, records: Iterator[Tuple[SetRecord, int]], allow_empty: bool,
                     source: str = '<memory>') -> SetSystem:
    kept = []
    dups = 0
    for record, dropped in records:
        kept.append(record)
        dups += dropped
    if dups:
        log.warning(f'{source}: dropped {dups} duplicate element(s)')
    return SetSystem(n, kept, allow_empty=allow_empty, dup_warnings=dups)


def load_instance(path: Union[str, Path], allow_empty: bool = False) -> SetSystem:
    log.info(f'Loading {path}')
    if is_binary(path):
        with open(path, 'rb') as f:
            n, m, records = read_binary(f.read(), allow_empty)
        return build_set_system(n, m, records, allow_empty, str(path))
    with open(path, buffering=u.read_buffer_size()) as f:
        n, m, records = read_ssc(f, allow_empty)
        return build_set_system(n, m, records, allow_empty, str(path))


def loads_instance(text: str, allow_empty: bool = False) -> SetSystem:
    n, m, records = read_ssc(text.splitlines(), allow_empty)
    return build_set_system(n, m, records, allow_empty)


def dumps_instance(sys: SetSystem) -> str:
    lines = [f'n={sys.n} m={sys.m}']
    lines.extend(u.record2str(record) for record in sys)
    return '\n'.join(lines) + '\n'


def save_instance(sys: SetSystem, path: Union[str, Path]):
    if Path(path).suffix == '.bin':
        with open(path, 'wb') as f:
            f.write(encode_binary(sys))
    else:
        with open(path, 'w') as f:
            f.write(dumps_instance(sys))


# .geo format
def scaled(text: str, scale: int, line_no: int) -> int:
    try:
        value = Decimal(text) * scale
    except InvalidOperation:
        raise ParseError(f'bad coordinate {text!r}', line_no) from None
    if value != value.to_integral_value():
        raise ParseError(f'coordinate {text} is not a multiple of 1/{scale}', line_no)
    return int(value)


def read_geo_items(lines: Iterable[str]) -> Tuple[Tuple[int, int, int], Iterator[Tuple[int, Union[Point2, Disc, Shape]]]]:
    """Returns ((n, m, scale), lazy iterator of (line number, point or shape)); shape ids count shape lines"""
    content = content_lines(lines)
    line_no, text = _first_line(content, 'n=<int> m=<int> scale=<int>')
    header = parse_line('geo_header', text, line_no)
    if header.scale < 1:
        raise ParseError('scale must be positive', line_no)
    return (header.n, header.m, header.scale), _geo_items(content, header.scale)


def _geo_items(content: Iterator[Tuple[int, str]], scale: int) -> Iterator[Tuple[int, Union[Point2, Disc, Shape]]]:
    shape_id = 0
    for line_no, text in content:
        parsed = parse_line('geo_item', text, line_no)
        coords = [scaled(c, scale, line_no) for c in parsed.coords]
        arity = 2 if parsed.tag == 'p' else SHAPE_ARITY[parsed.tag]
        if len(coords) != arity:
            raise ParseError(f"'{parsed.tag}' takes {arity} coordinates, got {len(coords)}", line_no)
        if parsed.tag == 'p':
            yield line_no, Point2(*coords)
            continue
        if parsed.tag == 'd':
            if coords[2] < 0:
                raise ParseError('negative radius', line_no)
            yield line_no, Disc(Point2(coords[0], coords[1]), coords[2], shape_id)
        else:
            yield line_no, Shape(parsed.tag, shape_id, tuple(coords))
        shape_id += 1


def read_geo(lines: Iterable[str]) -> Tuple[int, List[Point2], List[Union[Disc, Shape]]]:
    (n, m, scale), items = read_geo_items(lines)
    points, shapes = [], []
    for _, item in items:
        (points if isinstance(item, Point2) else shapes).append(item)
    if len(points) != n or len(shapes) != m:
        raise ParseError(f'header declares n={n} m={m} but found {len(points)} points and {len(shapes)} shapes')
    return scale, points, shapes


def fmt_coord(value: int, scale: int) -> str:
    text = format(Decimal(value) / scale, 'f')
    return text.rstrip('0').rstrip('.') if '.' in text else text


def dumps_geo(scale: int, points: List[Point2], shapes: List[Union[Disc, Shape]]) -> str:
    lines = [f'n={len(points)} m={len(shapes)} scale={scale}']
    lines.extend(f'p {fmt_coord(p.x, scale)} {fmt_coord(p.y, scale)}' for p in points)
    for shape in shapes:
        if isinstance(shape, Disc):
            coords = (shape.center.x, shape.center.y, shape.radius)
            tag = 'd'
        else:
            coords, tag = shape.coords, shape.kind
        lines.append(' '.join([tag] + [fmt_coord(c, scale) for c in coords]))
    return '\n'.join(lines) + '\n'


# .isc format, layers and vertices 1-based in the file, 0-based in memory
IscTables = Dict[str, List[List[Tuple[int, ...]]]]


def read_isc(lines: Iterable[str]) -> Tuple[int, int, IscTables]:
    content = content_lines(lines)
    line_no, text = _first_line(content, 'n=<int> p=<int>')
    header = parse_line('isc_header', text, line_no)
    n, p = header.n, header.p
    if n < 1 or p < 1:
        raise ParseError('n and p must be positive', line_no)
    tables = {tag: [[() for _ in range(n)] for _ in range(p)] for tag in ('f', 'g')}
    seen = set()
    for line_no, text in content:
        parsed = parse_line('isc_map', text, line_no)
        key = (parsed.tag, parsed.i, parsed.j)
        if key in seen:
            raise ParseError(f'{parsed.tag} {parsed.i} {parsed.j} defined twice', line_no)
        seen.add(key)
        if not (1 <= parsed.i <= p and 1 <= parsed.j <= n):
            raise IdOutOfRange(f'layer {parsed.i} / vertex {parsed.j} outside p={p} n={n}', line_no)
        image = u.normalize_elements(parsed.image)
        if image and (image[0] < 1 or image[-1] > n):
            raise IdOutOfRange(f'image vertex outside 1..{n}', line_no)
        tables[parsed.tag][parsed.i - 1][parsed.j - 1] = tuple(v - 1 for v in image)
    return n, p, tables


def dumps_isc(n: int, p: int, tables: IscTables) -> str:
    lines = [f'n={n} p={p}']
    for tag in ('f', 'g'):
        for i, layer in enumerate(tables[tag], start=1):
            for j, image in enumerate(layer, start=1):
                lines.append(f'{tag} {i} {j}: ' + ' '.join(str(v + 1) for v in sorted(image)))
    return '\n'.join(line.rstrip() for line in lines) + '\n'
