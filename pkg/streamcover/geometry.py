#!/usr/bin/env python3

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np
from ordered_set import OrderedSet

from . import parser
from . import util as u
from .classes import Cover, ProjectedInstance, SetSystem
from .errors import AllGuessesFailed, BadParams, BudgetExceeded, Infeasible, Overflow, UnsupportedShape
from .iter_set_cover import Solver, make_solver
from .sampling import draw_sample, geom_sample_size
from .sc_types import CanonicalEntry, Disc, Point2, RunStats, SetRecord, Shape, SolveParams
from .stream import ListSource, PassStream, SpaceLedger

log = logging.getLogger(__name__)

COORD_LIMIT = 1 << 30
RADIUS_LIMIT = 1 << 31
THRESHOLDS = ('original', 'leftover')


class GeoInstance:
    """Points and shapes in scaled integer coordinates (value = text * scale)"""

    def __init__(self, points: Sequence[Point2], shapes: Sequence[Union[Disc, Shape]], scale: int = 1):
        self._points = tuple(points)
        self._shapes = tuple(shapes)
        self._scale = scale

    @property
    def points(self) -> Tuple[Point2, ...]:
        return self._points

    @property
    def shapes(self) -> Tuple[Union[Disc, Shape], ...]:
        return self._shapes

    @property
    def scale(self) -> int:
        return self._scale

    @property
    def n(self) -> int:
        return len(self._points)

    @property
    def m(self) -> int:
        return len(self._shapes)

    def stream(self) -> PassStream:
        return PassStream(ListSource(self._shapes, self.n))

    def to_set_system(self) -> SetSystem:
        """Disc projections as a set system over the point indices, for verification"""
        xs, ys = point_arrays(self._points)
        records = []
        for shape in self._shapes:
            disc = require_disc(shape)
            records.append(SetRecord(disc.shape_id, tuple(_inside(xs, ys, disc).tolist())))
        return SetSystem(self.n, records, allow_empty=True)


def load_geo(path: Union[str, Path]) -> GeoInstance:
    with open(path) as f:
        scale, points, shapes = parser.read_geo(f)
    return GeoInstance(points, shapes, scale)


def save_geo(inst: GeoInstance, path: Union[str, Path]):
    with open(path, 'w') as f:
        f.write(parser.dumps_geo(inst.scale, list(inst.points), list(inst.shapes)))


def require_disc(shape: Union[Disc, Shape]) -> Disc:
    if not isinstance(shape, Disc):
        raise UnsupportedShape(f"shape {shape.shape_id} of kind '{shape.kind}' has no canonical representation here")
    if abs(shape.center.x) >= COORD_LIMIT or abs(shape.center.y) >= COORD_LIMIT or shape.radius >= RADIUS_LIMIT:
        raise Overflow(f'disc {shape.shape_id} exceeds the exact-arithmetic range')
    return shape


def point_arrays(points: Sequence[Point2]) -> Tuple[np.ndarray, np.ndarray]:
    xs = np.array([p.x for p in points], dtype=np.int64)
    ys = np.array([p.y for p in points], dtype=np.int64)
    if len(points) and (np.abs(xs).max() >= COORD_LIMIT or np.abs(ys).max() >= COORD_LIMIT):
        raise Overflow(f'point coordinates must stay below {COORD_LIMIT} in absolute value')
    return xs, ys


def _inside(xs: np.ndarray, ys: np.ndarray, disc: Disc) -> np.ndarray:
    dx = xs - disc.center.x
    dy = ys - disc.center.y
    return np.flatnonzero(dx * dx + dy * dy <= disc.radius * disc.radius)


def points_in_disc(points: Sequence[Point2], d: Disc) -> List[int]:
    """Indices of the points in the closed disc, in exact integer arithmetic"""
    xs, ys = point_arrays(points)
    return _inside(xs, ys, require_disc(d)).tolist()


class CanonicalBuilder:
    """Keeps one witness per distinct non-empty projection of at most w points"""

    def __init__(self, w_times_k: int, k: int, ledger: SpaceLedger):
        # w = w_times_k / k, compared as len * k <= w_times_k
        self._w_times_k = w_times_k
        self._k = k
        self._ledger = ledger
        self._entries = {}  # type: Dict[Tuple[int, ...], int]
        self._charged = 0
        self.skipped_deep = 0

    def offer(self, projection: Tuple[int, ...], shape_id: int):
        if not projection:
            return
        if len(projection) * self._k > self._w_times_k:
            self.skipped_deep += 1
            return
        if projection not in self._entries:
            self._entries[projection] = shape_id
            self._ledger.charge(len(projection) + 1, 'canonical')
            self._charged += len(projection) + 1

    @property
    def entries(self) -> List[CanonicalEntry]:
        return [CanonicalEntry(projection, witness) for projection, witness in self._entries.items()]

    def release(self):
        self._ledger.charge(-self._charged, 'canonical')
        self._charged = 0


def canonical_discs(points: Sequence[Point2], disc_stream: PassStream, w: int,
                    ledger: Optional[SpaceLedger] = None) -> List[CanonicalEntry]:
    """One pass: the distinct projections onto points of discs holding at most w of them"""
    ledger = ledger or SpaceLedger()
    xs, ys = point_arrays(points)
    builder = CanonicalBuilder(w, 1, ledger)
    with disc_stream.scan() as shapes:
        for shape in shapes:
            disc = require_disc(shape)
            builder.offer(tuple(_inside(xs, ys, disc).tolist()), disc.shape_id)
    if builder.skipped_deep:
        log.debug(f'canonical pass skipped {builder.skipped_deep} disc(s) holding more than {w} points')
    return builder.entries


class GeoGuess:
    def __init__(self, index: int, k: int, n: int, ledger: SpaceLedger):
        self.index = index
        self.k = k
        self.sol = OrderedSet()
        self.leftover = set(range(n))  # type: Set[int]
        self.alive = True
        self.residuals = []  # type: List[int]
        self.skipped_deep = 0
        self.capped = 0
        self.sample = frozenset()
        self.builder = None  # type: Optional[CanonicalBuilder]
        self.chosen = []  # type: List[Tuple[int, ...]]
        self._ledger = ledger
        self._charged = {}  # type: Dict[str, int]
        self.charge(n + 2, 'guess')

    def charge(self, units: int, line: str):
        if units:
            self._ledger.charge(units, line)
            self._charged[line] = self._charged.get(line, 0) + units

    def release(self, line: str):
        self.charge(-self._charged.get(line, 0), line)

    def release_all(self):
        if self.builder is not None:
            self.builder.release()
        for line in list(self._charged):
            self.release(line)

    def pick(self, shape_id: int, inside: Iterable[int]):
        if shape_id not in self.sol:
            self.sol.add(shape_id)
            self.charge(1, 'solution')
        before = len(self.leftover)
        self.leftover.difference_update(inside)
        self.charge(len(self.leftover) - before, 'guess')


def geom_solve(points: Sequence[Point2],
               disc_stream: PassStream,
               params: SolveParams = SolveParams(),
               ledger: Optional[SpaceLedger] = None
               ) -> Cover:
    """Disc cover in 3*ceil(1/delta) + 1 passes: per iteration a size test pass on the leftover, a
    canonical-representation pass over a sample, and a pass replacing chosen canonical entries by
    superset discs; a final pass picks a disc for every point still uncovered."""
    if params.geom_threshold not in THRESHOLDS:
        raise BadParams(f'geom threshold must be one of {THRESHOLDS}, got {params.geom_threshold!r}')
    ledger = ledger or SpaceLedger()
    iterations = u.iteration_count(params.delta)
    solver = make_solver(params.rho_mode)
    xs, ys = point_arrays(points)
    n, m = len(points), disc_stream.m
    rho = u.rho(params.rho_mode, n)
    start_passes = disc_stream.pass_count
    ledger.charge(n, 'ground')
    guesses = [GeoGuess(i, 1 << i, n, ledger) for i in range(u.ceil_log2(n) + 1)]
    log.info(f'GeomSetCover: n={n} m={m} delta={params.delta} iterations={iterations} guesses={len(guesses)}')

    def scan():
        with disc_stream.scan() as shapes:
            for shape in shapes:
                disc = require_disc(shape)
                yield disc, _inside(xs, ys, disc).tolist()

    for iteration in range(iterations):
        live = [g for g in guesses if g.alive]
        # pass A: size test against n/k (or the leftover at iteration start)
        base = {g.k: (n if params.geom_threshold == 'original' else len(g.leftover)) for g in live}
        for disc, inside in scan():
            for g in live:
                if disc.shape_id in g.sol:
                    continue
                hits = len(g.leftover.intersection(inside))
                if hits and hits * g.k >= base[g.k]:
                    g.pick(disc.shape_id, inside)
        for g in live:
            size = geom_sample_size(rho, g.k, max(n, 2), max(m, 2), params.delta, params.c)
            if g.leftover and size >= len(g.leftover):
                g.capped += 1
            rng = u.substream(params.seed, g.index, iteration)
            g.sample = draw_sample(g.leftover, min(size, len(g.leftover)), rng).elements
            g.charge(len(g.sample), 'sample')
            g.builder = CanonicalBuilder(3 * len(g.sample), g.k, ledger)
        # pass B: canonical representation of shallow discs over the sample
        for disc, inside in scan():
            for g in live:
                g.builder.offer(tuple(sorted(g.sample.intersection(inside))), disc.shape_id)
        for g in live:
            _solve_canonical(g, solver)
        live = [g for g in live if g.alive]
        # pass C: replace every chosen entry by a disc whose sample projection contains it
        for disc, inside in scan():
            for g in live:
                if not g.chosen:
                    continue
                on_sample = g.sample.intersection(inside)
                replaced = [entry for entry in g.chosen if on_sample.issuperset(entry)]
                if replaced:
                    g.chosen = [entry for entry in g.chosen if not on_sample.issuperset(entry)]
                    g.pick(disc.shape_id, inside)
        for g in live:
            g.release('sample')
            g.builder.release()
            g.builder = None
            g.sample = frozenset()
            g.residuals.append(len(g.leftover))
            log.debug(f'iteration {iteration}: k={g.k} |sol|={len(g.sol)} |leftover|={len(g.leftover)}')

    # final pass: any disc hitting the leftover
    live = [g for g in guesses if g.alive]
    for disc, inside in scan():
        for g in live:
            if g.leftover and g.leftover.intersection(inside):
                g.pick(disc.shape_id, inside)

    if not live:
        raise AllGuessesFailed(f'every guess exceeded its offline budget (k up to {guesses[-1].k})')
    successful = [g for g in live if not g.leftover]
    if not successful:
        raise Infeasible('point in no disc', min(live[0].leftover))
    winner = min(successful, key=lambda g: (len(g.sol), g.k))
    if winner.skipped_deep:
        log.warning(f"guess k={winner.k} skipped {winner.skipped_deep} disc(s) deeper than w in canonical passes")
    stats = RunStats(passes=disc_stream.pass_count - start_passes,
                     peak_space_units=ledger.peak_units,
                     valid=True,
                     guess_k=winner.k,
                     seed=params.seed,
                     ground_units=n,
                     capped_samples=winner.capped,
                     residuals=tuple((g.k, tuple(g.residuals)) for g in guesses))
    for g in live:
        g.release_all()
    ledger.charge(-n, 'ground')
    log.info(f'GeomSetCover: cover of {len(winner.sol)} discs from k={winner.k}, {stats.passes} passes')
    return Cover(winner.sol, stats)


def _solve_canonical(g: GeoGuess, solver: Solver):
    """Offline cover of the sample points some shallow disc reaches; the rest is left to later passes"""
    g.skipped_deep += g.builder.skipped_deep
    entries = g.builder.entries
    reachable = set()
    for entry in entries:
        reachable.update(entry.projection)
    inst = ProjectedInstance(reachable, ((i, entry.projection) for i, entry in enumerate(entries)))
    try:
        chosen = solver(inst, g.k)
    except BudgetExceeded as e:
        log.warning(f'guess k={g.k} failed: {e}')
        g.alive = False
        g.release_all()
        return
    g.chosen = [entries[i].projection for i in chosen]


def generate_disc_instance(opt: int, n: int, m: int, seed: int, radius: int = 100) -> GeoInstance:
    """opt far-apart clusters of points, each owned by one disc, plus small noise discs inside clusters;
    no disc reaches two clusters so the optimum is exactly opt"""
    if not 1 <= opt <= min(n, m):
        raise BadParams(f'need 1 <= opt <= min(n, m), got opt={opt} n={n} m={m}')
    rng = u.substream(seed, 7)
    spacing = 10 * radius
    centers = [Point2(i * spacing, 0) for i in range(opt)]
    sizes = [n // opt + (1 if i < n % opt else 0) for i in range(opt)]
    points = []  # type: List[Point2]
    for center, size in zip(centers, sizes):
        while size:
            dx, dy = rng.integers(-radius, radius + 1, size=2).tolist()
            if dx * dx + dy * dy <= radius * radius:
                points.append(Point2(center.x + dx, center.y + dy))
                size -= 1
    owning_slots = sorted(rng.choice(m, opt, replace=False).tolist())
    shapes = []
    cluster_iter = iter(range(opt))
    for shape_id in range(m):
        if shape_id in owning_slots:
            shapes.append(Disc(centers[next(cluster_iter)], radius, shape_id))
        else:
            anchor = points[int(rng.integers(len(points)))]
            shapes.append(Disc(anchor, int(rng.integers(1, max(2, radius // 4))), shape_id))
    log.info(f'Generated disc instance: {opt} clusters, {n} points, {m} discs')
    return GeoInstance(points, shapes)
