#!/usr/bin/env python3

import json
import logging
from itertools import combinations, product
from pathlib import Path
from typing import Dict, FrozenSet, Iterator, List, Sequence, Tuple, Union

import numpy as np

from . import parser
from .classes import ProjectedInstance, SetSystem
from .errors import BadParams, TooLarge
from .offline import exact_cover
from .sc_types import EquivalenceReport, SetRecord

log = logging.getLogger(__name__)

MAX_GADGET_ELEMENTS = 128

Layer = Tuple[FrozenSet[int], ...]


class IscInstance:
    """Intersection Set Chasing input: forward functions f_1..f_p and backward functions f'_1..f'_p.

    f[i - 1][j] is the image of vertex j of layer i + 1 in layer i; vertices are 0-based in memory,
    so the chase starts from vertex 0.
    """

    def __init__(self, n: int, p: int, f: Sequence[Sequence[Sequence[int]]], f_prime: Sequence[Sequence[Sequence[int]]]):
        if n < 1 or p < 1:
            raise BadParams(f'need n >= 1 and p >= 1, got n={n} p={p}')
        self._n = n
        self._p = p
        self._f = self._check(f, 'f')
        self._f_prime = self._check(f_prime, "f'")

    def _check(self, tables, name: str) -> Tuple[Layer, ...]:
        if len(tables) != self._p or any(len(layer) != self._n for layer in tables):
            raise BadParams(f'{name} must hold {self._p} layers of {self._n} images')
        checked = tuple(tuple(frozenset(image) for image in layer) for layer in tables)
        for layer in checked:
            for image in layer:
                if any(not 0 <= v < self._n for v in image):
                    raise BadParams(f'{name} image {sorted(image)} leaves [0, {self._n})')
        return checked

    def __eq__(self, other):
        return (isinstance(other, IscInstance) and self._n == other.n and self._p == other.p and
                self._f == other.f and self._f_prime == other.f_prime)

    def __repr__(self):
        return f'IscInstance(n={self._n}, p={self._p})'

    @property
    def n(self) -> int:
        return self._n

    @property
    def p(self) -> int:
        return self._p

    @property
    def f(self) -> Tuple[Layer, ...]:
        return self._f

    @property
    def f_prime(self) -> Tuple[Layer, ...]:
        return self._f_prime


def chase_from_start(tables: Sequence[Layer]) -> FrozenSet[int]:
    """f_1(f_2(...f_p({0})...)) with f applied to sets as the union of images"""
    current = frozenset([0])
    for layer in reversed(tables):
        current = frozenset().union(*(layer[v] for v in current))
    return current


def chase(isc: IscInstance) -> bool:
    return bool(chase_from_start(isc.f) & chase_from_start(isc.f_prime))


class GadgetInstance:
    def __init__(self, isc: IscInstance, sys: SetSystem, element_names: List[str], set_names: List[str]):
        self._isc = isc
        self._sys = sys
        self._element_names = element_names
        self._set_names = set_names

    @property
    def isc(self) -> IscInstance:
        return self._isc

    @property
    def set_system(self) -> SetSystem:
        return self._sys

    @property
    def element_names(self) -> List[str]:
        return self._element_names

    @property
    def set_names(self) -> List[str]:
        return self._set_names

    def lower_bound(self) -> int:
        return (2 * self._isc.p + 1) * self._isc.n + 1

    def sets_named(self, prefix: str) -> List[int]:
        return [i for i, name in enumerate(self._set_names) if name.startswith(prefix)]


def gadget_size(n: int, p: int) -> int:
    return (2 * p + 1) * 2 * n + 2 * p


class _GadgetBuilder:
    """Numbers elements layer by layer: merged layer 1 and v layers 2..p+1, then u layers 2..p+1,
    then e_1..e_2p; each vertex contributes its in element then its out element"""

    def __init__(self, n: int, p: int):
        self.n, self.p = n, p
        self.names = []  # type: List[str]
        self.index = {}  # type: Dict[Tuple, int]
        for j in range(n):
            self._add(('in', 'v', 1, j), f'in(v_1^{j + 1})=out(u_1^{j + 1})')
            self._add(('out', 'v', 1, j), f'out(v_1^{j + 1})=in(u_1^{j + 1})')
        for side in ('v', 'u'):
            for i in range(2, p + 2):
                for j in range(n):
                    self._add(('in', side, i, j), f'in({side}_{i}^{j + 1})')
                    self._add(('out', side, i, j), f'out({side}_{i}^{j + 1})')
        for i in range(1, 2 * p + 1):
            self._add(('e', i), f'e_{i}')
        self.sets = []  # type: List[Tuple[str, Tuple[int, ...]]]

    def _add(self, key: Tuple, name: str):
        self.index[key] = len(self.names)
        self.names.append(name)

    def element(self, kind: str, side: str, i: int, j: int) -> int:
        if i == 1:
            # in(u_1^j) = out(v_1^j) and out(u_1^j) = in(v_1^j)
            if side == 'u':
                kind = 'out' if kind == 'in' else 'in'
            side = 'v'
        return self.index[(kind, side, i, j)]

    def e(self, i: int) -> int:
        return self.index[('e', i)]

    def add_set(self, name: str, elements):
        self.sets.append((name, tuple(sorted(set(elements)))))


def build_gadget(isc: IscInstance) -> GadgetInstance:
    n, p = isc.n, isc.p
    b = _GadgetBuilder(n, p)
    # forward chase: S_i^j joins out(v_{i+1}^j) to the in elements of f_i(j); layer p+1 only starts at vertex 1
    for i in range(1, p + 1):
        for j in (range(n) if i < p else [0]):
            b.add_set(f'S_{i}^{j + 1}', [b.element('out', 'v', i + 1, j), b.e(i)] +
                      [b.element('in', 'v', i, l) for l in isc.f[i - 1][j]])
    for i in range(2, p + 2):
        for j in range(n):
            b.add_set(f'R_{i}^{j + 1}', [b.element('in', 'v', i, j), b.element('out', 'v', i, j)])
    for j in range(n):
        b.add_set(f'T_1^{j + 1}', [b.element('in', 'v', 1, j), b.element('out', 'v', 1, j)])
    # backward chase: S_{p+i}^j joins in(u_i^j) to out(u_{i+1}^l) for every l with j in f'_i(l)
    for i in range(1, p):
        for j in range(n):
            sources = [l for l in range(n) if j in isc.f_prime[i - 1][l]]
            b.add_set(f'S_{p + i}^{j + 1}', [b.element('in', 'u', i, j), b.e(p + i)] +
                      [b.element('out', 'u', i + 1, l) for l in sources])
    last = sorted(isc.f_prime[p - 1][0])
    for j in last:
        b.add_set(f'S_{2 * p}^{j + 1}', [b.element('in', 'u', p, j), b.element('out', 'u', p + 1, 0), b.e(2 * p)])
    for i in range(2, p + 2):
        for j in range(n):
            b.add_set(f'T_{p + i}^{j + 1}', [b.element('in', 'u', i, j), b.element('out', 'u', i, j)])
    if not last:
        b.add_set('E', [b.e(2 * p)])
    records = [SetRecord(set_id, elements) for set_id, (_, elements) in enumerate(b.sets)]
    sys = SetSystem(len(b.names), records)
    log.debug(f'gadget for n={n} p={p}: {sys.n} elements, {sys.m} sets')
    return GadgetInstance(isc, sys, b.names, [name for name, _ in b.sets])


def verify_equivalence(isc: IscInstance) -> EquivalenceReport:
    """Exact optimum of the gadget against the chase output.

    Passes when OPT >= (2p+1)n+1 and OPT equals that bound exactly when the chases meet. Whether a miss costs
    exactly one more set is reported separately as `tight`; empty images can push OPT further up.
    """
    if gadget_size(isc.n, isc.p) > MAX_GADGET_ELEMENTS:
        raise TooLarge(f'gadget with {gadget_size(isc.n, isc.p)} elements is beyond the exact solver range')
    gadget = build_gadget(isc)
    opt = len(exact_cover(ProjectedInstance.from_set_system(gadget.set_system)))
    meets = chase(isc)
    lower_bound = gadget.lower_bound()
    passed = opt >= lower_bound and (opt == lower_bound) == meets
    tight = opt == lower_bound + (0 if meets else 1)
    if not passed:
        log.warning(f'equivalence fails for {isc}: OPT={opt}, chase={meets}, bound={lower_bound}')
    return EquivalenceReport(isc.n, isc.p, opt, meets, lower_bound, passed, tight)


# Instances
def random_isc(n: int, p: int, rng: np.random.Generator, nonempty: bool = True) -> IscInstance:
    def image():
        chosen = np.flatnonzero(rng.random(n) < 0.5).tolist()
        if nonempty and not chosen:
            chosen = [int(rng.integers(n))]
        return chosen

    f = [[image() for _ in range(n)] for _ in range(p)]
    f_prime = [[image() for _ in range(n)] for _ in range(p)]
    return IscInstance(n, p, f, f_prime)


def all_isc(n: int, p: int) -> Iterator[IscInstance]:
    """Every function table; (2^n)^(2pn) instances"""
    subsets = [c for size in range(n + 1) for c in combinations(range(n), size)]
    for images in product(subsets, repeat=2 * p * n):
        f = [list(images[i * n:(i + 1) * n]) for i in range(p)]
        f_prime = [list(images[(p + i) * n:(p + i + 1) * n]) for i in range(p)]
        yield IscInstance(n, p, f, f_prime)


def load_isc(path: Union[str, Path]) -> IscInstance:
    with open(path) as f:
        n, p, tables = parser.read_isc(f)
    return IscInstance(n, p, tables['f'], tables['g'])


def save_isc(isc: IscInstance, path: Union[str, Path]):
    tables = {'f': [list(layer) for layer in isc.f], 'g': [list(layer) for layer in isc.f_prime]}
    with open(path, 'w') as f:
        f.write(parser.dumps_isc(isc.n, isc.p, tables))


def save_gadget(gadget: GadgetInstance, path: Union[str, Path]):
    """Writes the .ssc and a <path>.names.json sidecar mapping ids to element and set names"""
    parser.save_instance(gadget.set_system, path)
    with open(f'{path}.names.json', 'w') as f:
        json.dump({'elements': gadget.element_names, 'sets': gadget.set_names}, f, indent=1)
