#!/usr/bin/env python3

import contextlib
import io
import json
import math
import os
import tempfile
import unittest
from unittest import mock

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from streamcover import experiments as x
from streamcover import generator as g
from streamcover import geometry as geo
from streamcover import iter_set_cover as isc
from streamcover import offline as off
from streamcover import oracle as o
from streamcover import parser as p
from streamcover import reduction as red
from streamcover import recovery as rec
from streamcover import sampling as s
from streamcover import stream as ps
from streamcover import util as u
from streamcover.classes import Cover, ProjectedInstance, SetSystem, verify_cover
from streamcover.errors import (BadParams, BudgetExceeded, EmptySample, IdOutOfRange, Infeasible, NegativeBalance,
                                NestedPass, Overflow, ParseError, TooLarge, UnknownSetId, UnsupportedShape)
from streamcover.main import create_parser, main, parse_args
from streamcover.sc_types import Disc, Point2, Sample, SampleSpec, SetRecord, Shape, SolveParams


def make_system(n, sets, **kwargs):
    return SetSystem(n, [SetRecord(i, tuple(sorted(set(elements)))) for i, elements in enumerate(sets)], **kwargs)


@st.composite
def feasible_systems(draw, max_n=10, max_m=8):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    sets = draw(st.lists(st.frozensets(st.integers(0, n - 1), min_size=1), min_size=m, max_size=m))
    covered = frozenset().union(*sets)
    sets[-1] = sets[-1] | frozenset(range(n)) - covered
    return make_system(n, sets)


def random_feasible(seed, max_n=20, max_m=20, min_n=2):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(min_n, max_n + 1))
    m = int(rng.integers(1, max_m + 1))
    density = float(rng.uniform(0.2, 0.5))
    return g.generate_instance('uniform-random', n, m, seed, density=density, ensure_feasible=True)


class TestUtil(unittest.TestCase):
    def test_masks(self):
        self.assertEqual(u.mask_of([0, 3]), 9)
        self.assertEqual(u.elements_of(9), [0, 3])
        self.assertEqual(u.elements_of(0), [])
        self.assertEqual(u.popcount(0b10110), 3)

    def test_ceil_log2(self):
        for n, expected in [(1, 0), (2, 1), (3, 2), (16, 4), (17, 5)]:
            self.assertEqual(u.ceil_log2(n), expected, n)

    def test_iteration_count(self):
        for delta, expected in [(1, 1), (0.5, 2), (0.25, 4), (1 / 3, 3), (0.3, 4)]:
            self.assertEqual(u.iteration_count(delta), expected, delta)
        for delta in (0, -0.5, 1.5):
            with self.assertRaises(BadParams):
                u.iteration_count(delta)

    def test_rho(self):
        self.assertEqual(u.rho('exact', 1000), 1)
        self.assertEqual(u.rho('greedy', 16), 3)
        self.assertEqual(u.rho('greedy', 1), 1)
        with self.assertRaises(BadParams):
            u.rho('lp', 10)

    def test_substream(self):
        a = u.substream(5, 1, 2).integers(1000, size=5)
        b = u.substream(5, 1, 2).integers(1000, size=5)
        c = u.substream(5, 2, 1).integers(1000, size=5)
        self.assertEqual(a.tolist(), b.tolist())
        self.assertNotEqual(a.tolist(), c.tolist())

    def test_record2str(self):
        self.assertEqual(u.record2str(SetRecord(3, (1, 2))), '3: 1 2')
        self.assertEqual(u.record2str(SetRecord(3, ())), '3:')

    def test_read_buffer_size(self):
        with mock.patch.dict(os.environ, {'STREAMCOVER_BUFFER': '4096'}):
            self.assertEqual(u.read_buffer_size(), 4096)
        with mock.patch.dict(os.environ, {'STREAMCOVER_BUFFER': 'lots'}):
            self.assertEqual(u.read_buffer_size(), u.DEFAULT_BUFFER)


class TestClasses(unittest.TestCase):
    def test_load_feasible(self):
        sys_ = p.loads_instance('n=3 m=2\n0: 0 1\n1: 2\n')
        self.assertEqual((sys_.n, sys_.m, sys_.feasible), (3, 2, True))

    def test_load_infeasible(self):
        sys_ = p.loads_instance('n=3 m=1\n0: 0 1\n')
        self.assertFalse(sys_.feasible)
        self.assertEqual(sys_.uncoverable(), [2])

    def test_duplicates_dropped(self):
        sys_ = p.loads_instance('n=3 m=1\n0: 1 1 2\n')
        self.assertEqual(sys_.records[0].elements, (1, 2))
        self.assertEqual(sys_.dup_warnings, 1)

    def test_set_system_validation(self):
        with self.assertRaises(IdOutOfRange):
            make_system(2, [[0, 2]])
        with self.assertRaises(BadParams):
            SetSystem(2, [SetRecord(1, (0,))])
        with self.assertRaises(BadParams):
            make_system(2, [[]])
        self.assertEqual(make_system(2, [[], [0, 1]], allow_empty=True).set_sizes(), [0, 2])

    def test_verify_cover(self):
        self.assertTrue(verify_cover(make_system(2, [[0, 1]]), [0]))
        self.assertFalse(verify_cover(make_system(2, [[0], [1]]), [0]))
        self.assertTrue(verify_cover(make_system(2, [[0], [1]]), Cover([0, 1])))
        with self.assertRaises(UnknownSetId):
            verify_cover(make_system(2, [[0, 1]]), [1])

    def test_verify_cover_oracle_witness(self):
        sys_ = random_feasible(11, max_n=20, max_m=20)
        result = o.brute_force_optimal(sys_)
        self.assertTrue(verify_cover(sys_, result.witness))

    @given(feasible_systems(), st.data())
    @settings(max_examples=100, deadline=None)
    def test_verify_cover_matches_union(self, sys_, data):
        chosen = data.draw(st.lists(st.integers(0, sys_.m - 1), unique=True))
        union = set()
        for set_id in chosen:
            union.update(sys_.records[set_id].elements)
        self.assertEqual(verify_cover(sys_, chosen), union == set(range(sys_.n)))

    def test_cover(self):
        cover = Cover([3, 1])
        self.assertEqual(cover.chosen, [3, 1])
        self.assertEqual(len(cover), 2)
        with self.assertRaises(BadParams):
            Cover([1, 1])

    def test_projected_instance(self):
        inst = ProjectedInstance([0, 2], [(0, [0]), (1, [2, 0])])
        self.assertEqual(inst.universe, (0, 2))
        self.assertEqual(inst.sets, [(0, (0,)), (1, (0, 2))])
        self.assertEqual(inst.units(), 3)
        self.assertIsNone(inst.uncoverable())
        self.assertEqual(ProjectedInstance([0, 1], [(0, [0])]).uncoverable(), 1)
        with self.assertRaises(BadParams):
            ProjectedInstance([0], [(0, [1])])


class TestParser(unittest.TestCase):
    def test_comments_and_blank_lines(self):
        sys_ = p.loads_instance('# generated\nn=2 m=1\n\n# set zero\n0: 0 1\n')
        self.assertEqual(sys_.records, (SetRecord(0, (0, 1)),))

    def test_malformed_line(self):
        with self.assertRaises(ParseError) as cm:
            p.loads_instance('n=3 m=1\n0: a\n')
        self.assertEqual(cm.exception.line, 2)
        with self.assertRaises(ParseError):
            p.loads_instance('m=3 n=1\n0: 0\n')
        with self.assertRaises(ParseError):
            p.loads_instance('')

    def test_id_out_of_range(self):
        with self.assertRaises(IdOutOfRange) as cm:
            p.loads_instance('n=2 m=1\n0: 0 5\n')
        self.assertEqual(cm.exception.line, 2)

    def test_empty_sets(self):
        text = 'n=2 m=2\n0: 0 1\n1:\n'
        with self.assertRaises(ParseError):
            p.loads_instance(text)
        self.assertEqual(p.loads_instance(text, allow_empty=True).records[1].elements, ())

    def test_set_ids_and_count(self):
        with self.assertRaises(ParseError):
            p.loads_instance('n=2 m=2\n1: 0\n0: 1\n')
        with self.assertRaises(ParseError):
            p.loads_instance('n=2 m=3\n0: 0\n1: 1\n')
        with self.assertRaises(ParseError):
            p.loads_instance('n=2 m=1\n0: 0\n1: 1\n')

    def test_save_canonical_file_unchanged(self):
        text = 'n=4 m=3\n0: 0 1\n1: 2\n2: 1 3\n'
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'a.ssc')
            with open(path, 'w') as f:
                f.write(text)
            p.save_instance(p.load_instance(path), path)
            with open(path) as f:
                self.assertEqual(f.read(), text)

    def test_binary_format(self):
        sys_ = p.loads_instance('n=4 m=3\n0: 0 1\n1: 2\n2: 1 3\n')
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'a.bin')
            p.save_instance(sys_, path)
            self.assertTrue(p.is_binary(path))
            with open(path, 'rb') as f:
                raw = f.read()
            self.assertEqual(raw[:4], b'SSC1')
            self.assertEqual(np.frombuffer(raw[4:12], dtype='<u4').tolist(), [4, 3])
            self.assertEqual(p.load_instance(path), sys_)
        with self.assertRaises(ParseError):
            list(p.read_binary(b'SSC1' + np.asarray([2, 1, 0, 5], dtype='<u4').tobytes())[2])

    def test_geo(self):
        text = 'n=2 m=2 scale=10\np 0.5 1\np -1 0\nd 0 0 1.5\nr 0 0 1 1\n'
        scale, points, shapes = p.read_geo(text.splitlines())
        self.assertEqual(scale, 10)
        self.assertEqual(points, [Point2(5, 10), Point2(-10, 0)])
        self.assertEqual(shapes, [Disc(Point2(0, 0), 15, 0), Shape('r', 1, (0, 0, 10, 10))])
        self.assertEqual(p.dumps_geo(scale, points, shapes), text)

    def test_geo_errors(self):
        with self.assertRaises(ParseError):
            p.read_geo('n=1 m=0 scale=1\np 0.5 1\n'.splitlines())
        with self.assertRaises(ParseError):
            p.read_geo('n=1 m=1 scale=1\np 0 1\nd 0 0\n'.splitlines())
        with self.assertRaises(ParseError):
            p.read_geo('n=2 m=0 scale=1\np 0 1\n'.splitlines())

    def test_isc(self):
        n, p_, tables = p.read_isc('n=2 p=1\nf 1 1: 2\ng 1 1: 1 2\n'.splitlines())
        self.assertEqual((n, p_), (2, 1))
        self.assertEqual(tables['f'][0], [(1,), ()])
        self.assertEqual(tables['g'][0], [(0, 1), ()])
        with self.assertRaises(IdOutOfRange):
            p.read_isc('n=2 p=1\nf 1 1: 3\n'.splitlines())
        with self.assertRaises(ParseError):
            p.read_isc('n=2 p=1\nf 1 1: 1\nf 1 1: 2\n'.splitlines())


class TestGenerator(unittest.TestCase):
    def test_deterministic(self):
        a = g.generate_instance('uniform-random', 20, 10, seed=3, density=0.3)
        b = g.generate_instance('uniform-random', 20, 10, seed=3, density=0.3)
        c = g.generate_instance('uniform-random', 20, 10, seed=4, density=0.3)
        self.assertEqual(a, b)
        self.assertNotEqual(a, c)

    def test_planted_example(self):
        sys_ = g.generate_instance('planted-cover', 30, 10, seed=7, opt_size=3)
        self.assertEqual(len(sys_.planted), 3)
        self.assertTrue(sys_.feasible)
        self.assertLessEqual(o.brute_force_optimal(sys_).opt_size, 3)

    def test_planted_cover_always_present(self):
        for seed in range(100):
            sys_ = g.generate_instance('planted-cover', 30, 10, seed=seed, opt_size=3)
            self.assertTrue(verify_cover(sys_, sys_.planted), seed)
        for seed in range(20):
            sys_ = g.generate_instance('planted-cover', 24, 12, seed=seed, opt_size=4)
            self.assertLessEqual(o.brute_force_optimal(sys_).opt_size, 4, seed)

    def test_sparse(self):
        sys_ = g.generate_instance('sparse', 16, 16, seed=1, s_cap=4)
        self.assertTrue(all(1 <= size <= 4 for size in sys_.set_sizes()))
        sys_ = g.generate_instance('sparse', 40, 8, seed=1, s_cap=5, density=0.2, ensure_feasible=True)
        self.assertTrue(sys_.feasible)

    def test_uniform(self):
        sys_ = g.generate_instance('uniform-random', 8, 4, seed=0, density=0.5)
        self.assertEqual((sys_.n, sys_.m), (8, 4))
        self.assertTrue(all(size >= 1 for size in sys_.set_sizes()))
        big = g.generate_instance('uniform-random', 200, 50, seed=0, density=0.5)
        self.assertAlmostEqual(sum(big.set_sizes()) / (200 * 50), 0.5, delta=0.03)
        self.assertTrue(g.generate_instance('uniform-random', 50, 3, seed=0, density=0.05, ensure_feasible=True).feasible)

    def test_bad_params(self):
        with self.assertRaises(BadParams):
            g.generate_instance('planted-cover', 10, 2, seed=0, opt_size=3)
        with self.assertRaises(BadParams):
            g.generate_instance('weighted', 10, 2, seed=0)
        with self.assertRaises(BadParams):
            g.generate_instance('sparse', 10, 2, seed=0)
        with self.assertRaises(BadParams):
            g.generate_instance('uniform-random', 0, 2, seed=0)


class TestStream(unittest.TestCase):
    def setUp(self):
        self.sys = make_system(4, [[0, 1], [2], [1, 3]])

    def test_pass_count(self):
        stream = ps.PassStream(self.sys)
        for _ in range(2):
            with stream.scan() as records:
                self.assertEqual(list(records), list(self.sys.records))
        self.assertEqual(stream.pass_count, 2)

    def test_aborted_scan_counts(self):
        stream = ps.PassStream(self.sys)
        with stream.scan() as records:
            for _ in records:
                break
        self.assertEqual(stream.pass_count, 1)
        self.assertFalse(stream.in_pass)

    def test_nested_pass(self):
        stream = ps.PassStream(self.sys)
        stream.begin_pass()
        with self.assertRaises(NestedPass):
            stream.begin_pass()
        stream.end_pass()
        with self.assertRaises(NestedPass):
            stream.end_pass()

    def test_file_sources(self):
        with tempfile.TemporaryDirectory() as folder:
            for name in ('a.ssc', 'a.bin'):
                path = os.path.join(folder, name)
                p.save_instance(self.sys, path)
                stream = ps.PassStream(ps.open_source(path))
                self.assertEqual((stream.n, stream.m), (4, 3))
                for _ in range(2):
                    with stream.scan() as records:
                        self.assertEqual(list(records), list(self.sys.records))
                self.assertEqual(stream.pass_count, 2)

    def test_ledger(self):
        ledger = ps.SpaceLedger()
        ps.charge(ledger, 5)
        ps.charge(ledger, -3)
        self.assertEqual((ledger.current_units, ledger.peak_units), (2, 5))
        ledger.charge(10, 'projection')
        ledger.charge(-10, 'projection')
        self.assertEqual((ledger.current_units, ledger.peak_units), (2, 12))
        with self.assertRaises(NegativeBalance):
            ledger.charge(-3)
        with self.assertRaises(NegativeBalance):
            ledger.charge(-1, 'sample')
        self.assertEqual(ledger.snapshot()['guess'], 2)

    @given(st.lists(st.integers(0, 20), max_size=30))
    @settings(max_examples=50, deadline=None)
    def test_ledger_peak_is_running_max(self, charges):
        ledger = ps.SpaceLedger()
        running, peak = 0, 0
        for units in charges:
            ledger.charge(units)
            running += units
            peak = max(peak, running)
        for units in charges:
            ledger.charge(-units)
        self.assertEqual(ledger.peak_units, peak)
        self.assertEqual(ledger.current_units, 0)


class TestSampling(unittest.TestCase):
    def test_iter_sample_size(self):
        self.assertEqual(s.iter_sample_size(1, 2, 16, 8, 0.5, 2), 192)
        self.assertEqual(s.iter_sample_size(1, 1, 2, 2, 1, 1), 2)
        self.assertEqual(s.iter_sample_size(5, 4, 1024, 1024, 0.3, 2), 32000)
        with self.assertRaises(BadParams):
            s.iter_sample_size(1, 1, 1, 2, 0.5, 2)
        with self.assertRaises(BadParams):
            s.iter_sample_size(1, 1, 4, 4, 0, 2)

    def test_geom_sample_size(self):
        self.assertEqual(s.geom_sample_size(1, 4, 64, 16, 0.25, 1), 192)
        self.assertEqual(s.geom_sample_size(1, 64, 64, 16, 0.25, 1), math.ceil(64 * 4 * 6))
        for n, m in [(16, 8), (100, 30), (1024, 64)]:
            self.assertEqual(s.geom_sample_size(2, 1, n, m, 0.5, 2), s.iter_sample_size(2, 1, n, m, 0.5, 2))

    @given(st.integers(1, 4), st.integers(1, 64), st.integers(2, 512), st.integers(2, 256),
           st.sampled_from([0.25, 0.5, 1.0]))
    @settings(max_examples=100, deadline=None)
    def test_iter_sample_size_monotone(self, rho, k, n, m, delta):
        base = s.iter_sample_size(rho, k, n, m, delta, 2)
        self.assertLessEqual(base, s.iter_sample_size(rho + 1, k, n, m, delta, 2))
        self.assertLessEqual(base, s.iter_sample_size(rho, k + 1, n, m, delta, 2))
        self.assertLessEqual(base, s.iter_sample_size(rho, k, n + 1, m, delta, 2))
        self.assertLessEqual(base, s.iter_sample_size(rho, k, n, m + 1, delta, 2))
        self.assertLessEqual(base, s.iter_sample_size(rho, k, n, m, delta, 3))

    def test_draw_sample(self):
        rng = np.random.default_rng(0)
        self.assertEqual(s.draw_sample(range(10), 0, rng).elements, frozenset())
        self.assertEqual(s.draw_sample(range(10), 12, rng), Sample(frozenset(range(10)), 10))
        a = s.draw_sample(range(100), 10, np.random.default_rng(4))
        b = s.draw_sample(set(range(100)), 10, np.random.default_rng(4))
        self.assertEqual(a, b)
        self.assertEqual(len(a.elements), 10)
        with self.assertRaises(BadParams):
            s.draw_sample(range(10), -1, rng)

    def test_draw_sample_uniform(self):
        rng = np.random.default_rng(1)
        counts = [0] * 10
        for _ in range(10000):
            (e,) = s.draw_sample(range(10), 1, rng).elements
            counts[e] += 1
        for count in counts:
            self.assertTrue(800 <= count <= 1200, counts)

    def test_passes_size_test(self):
        self.assertFalse(s.passes_size_test(0, 0, 1))
        self.assertTrue(s.passes_size_test(3, 6, 2))
        self.assertFalse(s.passes_size_test(2, 6, 2))

    def test_full_sample_is_exact(self):
        sys_ = random_feasible(5, max_n=30, max_m=10)
        report = s.check_relative_approx(sys_, Sample(frozenset(range(sys_.n)), sys_.n), SampleSpec(0.3, 0.0, 0.1, 3))
        self.assertTrue(report.passed)
        self.assertEqual(report.failures, 0)

    def test_skewed_sample_fails(self):
        sys_ = make_system(20, [range(10), range(10, 20)])
        report = s.check_relative_approx(sys_, Sample(frozenset(range(10)), 20), s.make_spec(0.1, 0.5, 0.1, 2))
        self.assertFalse(report.passed)
        self.assertEqual([c.ok for c in report.checks], [False, False])
        self.assertTrue(all(c.heavy for c in report.checks))

    def test_empty_range_is_light(self):
        sys_ = make_system(20, [[], range(20)], allow_empty=True)
        report = s.check_relative_approx(sys_, Sample(frozenset(range(5)), 20), s.make_spec(0.5, 0.1, 0.1, 2))
        self.assertFalse(report.checks[0].heavy)
        self.assertTrue(report.checks[0].ok)

    def test_empty_sample(self):
        with self.assertRaises(EmptySample):
            s.check_relative_approx(make_system(2, [[0, 1]]), Sample(frozenset(), 2), s.make_spec(0.1, 0.5, 0.1, 1))

    def test_relative_approx_sample_size(self):
        self.assertEqual(s.relative_approx_sample_size(0.1, 0.5, 0.01, 64), 4253)
        with self.assertRaises(BadParams):
            s.relative_approx_sample_size(0, 0.5, 0.01, 64)

    def test_relative_approx_failure_rate(self):
        spec = s.make_spec(0.1, 0.5, 0.01, 64)
        size = s.relative_approx_sample_size(0.1, 0.5, 0.01, 64, c_prime=0.25)
        self.assertLess(size, 512)
        failures = 0
        for seed in range(200):
            sys_ = g.generate_instance('uniform-random', 512, 64, seed=seed, density=float(np.random.default_rng(seed).uniform(0.02, 0.6)))
            sample = s.draw_sample(range(512), size, u.substream(seed, 99))
            failures += not s.check_relative_approx(sys_, sample, spec).passed
        self.assertLessEqual(failures, 10)

    def test_size_test_false_positive_rate(self):
        self.assertLessEqual(s.size_test_false_positive_rate(256, 16, 2, runs=20, seed=1), 0.05)


class TestOffline(unittest.TestCase):
    def test_greedy_example(self):
        inst = ProjectedInstance([0, 1, 2], [(0, [0, 1]), (1, [1, 2]), (2, [2])])
        self.assertEqual(off.greedy_cover(inst).chosen, [0, 1])
        self.assertEqual(len(off.greedy_cover(ProjectedInstance([0, 1], [(4, [0, 1])]))), 1)

    def test_exact_example(self):
        inst = ProjectedInstance(range(4), [(0, [0, 1]), (1, [2, 3]), (2, [0, 2]), (3, [1, 3])])
        self.assertEqual(len(off.exact_cover(inst)), 2)
        self.assertEqual(len(off.exact_cover(inst, budget=2)), 2)
        with self.assertRaises(BudgetExceeded):
            off.exact_cover(inst, budget=1)

    def test_infeasible(self):
        inst = ProjectedInstance([0, 1], [(0, [0])])
        with self.assertRaises(Infeasible):
            off.greedy_cover(inst)
        with self.assertRaises(Infeasible):
            off.exact_cover(inst)

    def test_empty_universe(self):
        self.assertEqual(len(off.exact_cover(ProjectedInstance([], []))), 0)
        self.assertEqual(len(off.greedy_cover(ProjectedInstance([], []))), 0)

    def test_exact_on_planted(self):
        sys_ = g.generate_instance('planted-cover', 30, 12, seed=2, opt_size=3)
        self.assertEqual(len(off.exact_cover(ProjectedInstance.from_set_system(sys_))),
                         o.brute_force_optimal(sys_).opt_size)

    def test_against_oracle(self):
        for seed in range(500):
            sys_ = random_feasible(seed)
            inst = ProjectedInstance.from_set_system(sys_)
            exact = off.exact_cover(inst)
            greedy = off.greedy_cover(inst)
            opt = o.brute_force_optimal(sys_).opt_size
            self.assertTrue(verify_cover(sys_, exact))
            self.assertTrue(verify_cover(sys_, greedy))
            self.assertEqual(len(exact), opt, seed)
            self.assertLessEqual(len(greedy), max(1, math.ceil(math.log(sys_.n))) * opt, seed)

    @given(feasible_systems(max_n=12, max_m=12))
    @settings(max_examples=100, deadline=None)
    def test_exact_le_greedy(self, sys_):
        inst = ProjectedInstance.from_set_system(sys_)
        self.assertLessEqual(len(off.exact_cover(inst)), len(off.greedy_cover(inst)))
        self.assertEqual(off.greedy_cover(inst).chosen, off.greedy_cover(inst).chosen)

    def test_offline_solve(self):
        inst = ProjectedInstance([0], [(0, [0])])
        self.assertEqual(off.offline_solve(inst, 'greedy').chosen, [0])
        with self.assertRaises(BadParams):
            off.offline_solve(inst, 'lp')


class TestOracle(unittest.TestCase):
    def test_small(self):
        self.assertEqual(o.brute_force_optimal(make_system(3, [[0, 1], [2], [0, 2]])).opt_size, 2)

    def test_partition(self):
        sys_ = make_system(12, [range(0, 3), range(3, 7), range(7, 12)])
        result = o.brute_force_optimal(sys_)
        self.assertEqual(result.opt_size, 3)
        self.assertEqual(result.witness.chosen, [0, 1, 2])

    def test_limits(self):
        with self.assertRaises(TooLarge):
            o.brute_force_optimal(make_system(1, [[0]] * 27))
        with self.assertRaises(Infeasible):
            o.brute_force_optimal(make_system(3, [[0, 1]]))

    def test_monotone(self):
        for seed in range(30):
            sys_ = random_feasible(seed, max_n=12, max_m=10)
            bigger = make_system(sys_.n, [r.elements for r in sys_] + [[0]])
            self.assertLessEqual(o.brute_force_optimal(bigger).opt_size, o.brute_force_optimal(sys_).opt_size)

    def test_gadget(self):
        isc_ = red.IscInstance(2, 1, [[[0], [1]]], [[[0], [1]]])
        self.assertEqual(o.brute_force_optimal(red.build_gadget(isc_).set_system).opt_size, 7)


class TestIterSetCover(unittest.TestCase):
    def solve(self, sys_, **kwargs):
        stream = ps.PassStream(sys_)
        cover = isc.solve(stream, sys_.n, SolveParams(**kwargs))
        self.assertEqual(cover.stats.passes, stream.pass_count)
        return cover

    def test_single_element(self):
        cover = self.solve(make_system(1, [[0]]), delta=1)
        self.assertEqual(cover.chosen, [0])
        self.assertEqual(cover.stats.passes, 2)

    def test_pass_count(self):
        for seed in range(5):
            sys_ = random_feasible(seed, max_n=40, max_m=30)
            for delta, passes in [(1, 2), (0.5, 4), (0.25, 8), (1 / 3, 6)]:
                cover = self.solve(sys_, delta=delta, seed=seed)
                self.assertEqual(cover.stats.passes, passes)
                self.assertTrue(verify_cover(sys_, cover))

    def test_planted(self):
        sys_ = g.generate_instance('planted-cover', 256, 64, seed=1, opt_size=4)
        cover = self.solve(sys_, delta=0.5, rho_mode='exact', seed=1)
        self.assertTrue(verify_cover(sys_, cover))
        self.assertEqual(cover.stats.passes, 4)
        self.assertLessEqual(len(cover), 16 * 4)
        self.assertGreaterEqual(cover.stats.peak_space_units, len(cover))

    def test_random_valid(self):
        for seed in range(100):
            sys_ = random_feasible(seed, max_n=200, max_m=200)
            cover = self.solve(sys_, delta=0.5, rho_mode='greedy', seed=seed)
            self.assertTrue(verify_cover(sys_, cover), seed)
            self.assertGreaterEqual(cover.stats.peak_space_units, len(cover))

    def test_approximation(self):
        good = 0
        for seed in range(100):
            opt = (2, 4, 8)[seed % 3]
            sys_ = g.generate_instance('planted-cover', 128, 48, seed=seed, opt_size=opt)
            cover = self.solve(sys_, delta=0.5, rho_mode='exact', seed=seed)
            self.assertTrue(verify_cover(sys_, cover), seed)
            good += len(cover) <= 16 * opt
        self.assertGreaterEqual(good, 95)

    def test_space_bound(self):
        c_space = 4
        for n in (64, 256):
            sys_ = g.generate_instance('planted-cover', n, n, seed=n, opt_size=4)
            cover = self.solve(sys_, delta=0.5, seed=n)
            bound = c_space * n * n ** 0.5 * math.log2(n) * math.log2(n) ** 2
            self.assertLessEqual(cover.stats.peak_space_units, bound)
            self.assertEqual(cover.stats.ground_units, n)

    def test_space_scaling(self):
        sizes, ratios = [], []
        for n in (64, 256, 1024):
            sys_ = g.generate_instance('planted-cover', n, n, seed=n, opt_size=4)
            cover = self.solve(sys_, delta=0.5, seed=n)
            sizes.append(math.log(n))
            ratios.append(math.log(cover.stats.peak_space_units / (n * math.log2(n) * math.log2(n))))
        exponent = np.polyfit(sizes, ratios, 1)[0]
        self.assertGreaterEqual(exponent, 0.35)
        self.assertLessEqual(exponent, 0.65)

    def test_residual_shrink(self):
        n, good = 64, 0
        for seed in range(50):
            sys_ = g.generate_instance('planted-cover', n, 32, seed=seed, opt_size=4)
            cover = self.solve(sys_, delta=0.5, c=4, rho_mode='exact', seed=seed)
            residuals = dict(cover.stats.residuals)
            good += residuals[4][0] <= n / n ** 0.5
        self.assertGreaterEqual(good, 45)

    def test_infeasible(self):
        with self.assertRaises(Infeasible):
            self.solve(make_system(3, [[0, 1]]))

    def test_infeasible_releases_ledger(self):
        ledger = ps.SpaceLedger()
        with self.assertRaises(Infeasible):
            isc.solve(ps.PassStream(make_system(3, [[0, 1]])), 3, SolveParams(), ledger)
        self.assertEqual(ledger.current_units, 0)
        self.assertGreater(ledger.peak_units, 0)

    def test_ledger_returns_to_baseline(self):
        ledger = ps.SpaceLedger()
        sys_ = random_feasible(3, max_n=30, max_m=20)
        isc.solve(ps.PassStream(sys_), sys_.n, SolveParams(), ledger)
        self.assertEqual(ledger.current_units, 0)

    def test_deterministic(self):
        sys_ = random_feasible(8, max_n=100, max_m=60)
        self.assertEqual(self.solve(sys_, seed=5).chosen, self.solve(sys_, seed=5).chosen)

    def test_huge_sets_picked_by_size_test(self):
        sys_ = make_system(8, [range(8)] * 3)
        ledger = ps.SpaceLedger()
        state = isc.GuessState(1, 8, ledger, sample_size=8)
        isc.run_iteration(state, sys_.records, sys_.records, isc.make_solver('exact'), np.random.default_rng(0), ledger)
        self.assertEqual(state.sol, [0])
        self.assertEqual(state.uncovered, set())
        self.assertEqual(state.residuals, [0])

    def test_tiny_sets_left_to_offline_solver(self):
        sys_ = make_system(8, [[0, 1], [2, 3], [4, 5], [6, 7], [1, 2], [3, 4]])
        ledger = ps.SpaceLedger()
        state = isc.GuessState(3, 8, ledger, sample_size=8)
        unbudgeted = lambda inst, budget: off.exact_cover(inst)
        isc.run_iteration(state, sys_.records, sys_.records, unbudgeted, np.random.default_rng(0), ledger)
        self.assertEqual(len(state.sol), o.brute_force_optimal(sys_).opt_size)
        self.assertEqual(state.uncovered, set())

    def test_budget_kills_guess(self):
        sys_ = make_system(4, [[0], [1], [2], [3]])
        ledger = ps.SpaceLedger()
        state = isc.GuessState(2, 4, ledger, sample_size=4)
        isc.run_iteration(state, sys_.records, sys_.records, isc.make_solver('exact'), np.random.default_rng(0), ledger)
        self.assertFalse(state.alive)
        self.assertEqual(ledger.current_units, 0)


class TestGeometry(unittest.TestCase):
    def test_points_in_disc(self):
        points = [Point2(0, 0), Point2(3, 4), Point2(3, 5)]
        self.assertEqual(geo.points_in_disc(points, Disc(Point2(0, 0), 5, 0)), [0, 1])
        self.assertEqual(geo.points_in_disc(points, Disc(Point2(0, 0), 0, 0)), [0])
        with self.assertRaises(Overflow):
            geo.points_in_disc([Point2(1 << 30, 0)], Disc(Point2(0, 0), 1, 0))
        with self.assertRaises(UnsupportedShape):
            geo.points_in_disc(points, Shape('t', 0, (0, 0, 1, 0, 0, 1)))

    def test_points_in_disc_brute_force(self):
        rng = np.random.default_rng(3)
        points = [Point2(*rng.integers(-1000, 1000, size=2).tolist()) for _ in range(50)]
        for i in range(20):
            cx, cy = rng.integers(-1000, 1000, size=2).tolist()
            disc = Disc(Point2(cx, cy), int(rng.integers(0, 800)), i)
            expected = [j for j, q in enumerate(points) if (q.x - cx) ** 2 + (q.y - cy) ** 2 <= disc.radius ** 2]
            self.assertEqual(geo.points_in_disc(points, disc), expected)

    def test_canonical_dedup(self):
        points = [Point2(0, 0), Point2(10, 0)]
        discs = [Disc(Point2(0, 0), 1, 0), Disc(Point2(0, 0), 2, 1)]
        family = geo.canonical_discs(points, ps.PassStream(ps.ListSource(discs, 2)), 5)
        self.assertEqual(len(family), 1)
        self.assertEqual(family[0].projection, (0,))
        empty = [Disc(Point2(50, 50), 1, 0), Disc(Point2(-50, 5), 2, 1)]
        self.assertEqual(geo.canonical_discs(points, ps.PassStream(ps.ListSource(empty, 2)), 5), [])

    def test_canonical_random(self):
        rng = np.random.default_rng(8)
        points = [Point2(*rng.integers(0, 100, size=2).tolist()) for _ in range(100)]
        discs = [Disc(Point2(*rng.integers(0, 100, size=2).tolist()), int(rng.integers(0, 16)), i) for i in range(500)]
        ledger = ps.SpaceLedger()
        family = geo.canonical_discs(points, ps.PassStream(ps.ListSource(discs, 100)), 10, ledger)
        expected = {tuple(geo.points_in_disc(points, d)) for d in discs}
        expected = {proj for proj in expected if 0 < len(proj) <= 10}
        self.assertEqual(len(family), len(expected))
        self.assertEqual({entry.projection for entry in family}, expected)
        for entry in family:
            self.assertEqual(tuple(geo.points_in_disc(points, discs[entry.witness])), entry.projection)
        self.assertEqual(ledger.peak_units, sum(len(e.projection) + 1 for e in family))

    def test_one_disc_covers_all(self):
        points = [Point2(i, i) for i in range(10)]
        discs = [Disc(Point2(100, 100), 1, 0), Disc(Point2(5, 5), 10, 1), Disc(Point2(0, 0), 2, 2)]
        inst = geo.GeoInstance(points, discs)
        cover = geo.geom_solve(inst.points, inst.stream(), SolveParams(delta=0.5))
        self.assertEqual(cover.chosen, [1])
        self.assertEqual(cover.stats.passes, 7)

    def test_pass_count(self):
        inst = geo.generate_disc_instance(3, 60, 12, seed=1)
        for delta, passes in [(1, 4), (0.5, 7), (0.25, 13)]:
            stream = inst.stream()
            cover = geo.geom_solve(inst.points, stream, SolveParams(delta=delta, rho_mode='exact'))
            self.assertEqual(cover.stats.passes, passes)
            self.assertEqual(stream.pass_count, passes)

    def test_planted(self):
        for seed in range(50):
            opt = 1 + seed % 5
            inst = geo.generate_disc_instance(opt, 40 + 9 * seed, 10 + seed % 20, seed=seed)
            sys_ = inst.to_set_system()
            if sys_.m <= 12:
                self.assertEqual(o.brute_force_optimal(sys_).opt_size, opt)
            cover = geo.geom_solve(inst.points, inst.stream(), SolveParams(delta=0.25, rho_mode='exact', seed=seed))
            self.assertTrue(verify_cover(sys_, cover), seed)
            self.assertLessEqual(len(cover), 2 * opt, seed)
            self.assertTrue(set(cover.chosen) <= set(range(inst.m)))

    def test_leftover_threshold(self):
        inst = geo.generate_disc_instance(4, 80, 16, seed=2)
        cover = geo.geom_solve(inst.points, inst.stream(), SolveParams(delta=0.5, rho_mode='exact', geom_threshold='leftover'))
        self.assertTrue(verify_cover(inst.to_set_system(), cover))
        with self.assertRaises(BadParams):
            geo.geom_solve(inst.points, inst.stream(), SolveParams(geom_threshold='median'))

    def test_errors(self):
        points = [Point2(0, 0), Point2(100, 100)]
        inst = geo.GeoInstance(points, [Disc(Point2(0, 0), 1, 0)])
        with self.assertRaises(Infeasible):
            geo.geom_solve(inst.points, inst.stream(), SolveParams(rho_mode='exact'))
        inst = geo.GeoInstance(points, [Shape('r', 0, (0, 0, 100, 100))])
        with self.assertRaises(UnsupportedShape):
            geo.geom_solve(inst.points, inst.stream())

    def test_geo_file(self):
        inst = geo.generate_disc_instance(2, 20, 6, seed=4)
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'a.geo')
            geo.save_geo(inst, path)
            loaded = geo.load_geo(path)
            self.assertEqual(loaded.points, inst.points)
            self.assertEqual(loaded.shapes, inst.shapes)
            stream = ps.PassStream(ps.open_source(path))
            cover = geo.geom_solve(loaded.points, stream, SolveParams(delta=1, rho_mode='exact'))
            self.assertTrue(verify_cover(inst.to_set_system(), cover))


class TestReduction(unittest.TestCase):
    def test_chase_examples(self):
        self.assertTrue(red.chase(red.IscInstance(1, 1, [[[0]]], [[[0]]])))
        self.assertFalse(red.chase(red.IscInstance(3, 1, [[[1], [], []]], [[[2], [], []]])))

    def test_chase_matches_layer_walk(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            isc_ = red.random_isc(4, 2, rng, nonempty=False)
            ends = []
            for tables in (isc_.f, isc_.f_prime):
                layer = {0}
                for i in (2, 1):
                    nxt = set()
                    for v in layer:
                        nxt |= set(tables[i - 1][v])
                    layer = nxt
                ends.append(layer)
            self.assertEqual(red.chase(isc_), bool(ends[0] & ends[1]))

    def test_counts(self):
        rng = np.random.default_rng(1)
        for n, p_ in [(1, 1), (2, 1), (3, 2), (2, 3)]:
            gadget = red.build_gadget(red.random_isc(n, p_, rng))
            self.assertEqual(gadget.set_system.n, (2 * p_ + 1) * 2 * n + 2 * p_)
            self.assertEqual(gadget.set_system.n, red.gadget_size(n, p_))
            self.assertLessEqual(gadget.set_system.m, (2 * p_ + 1) * n + 2 * p_ * n)
            self.assertTrue(gadget.set_system.feasible)
        self.assertEqual(red.build_gadget(red.IscInstance(1, 1, [[[0]]], [[[0]]])).set_system.n, 8)

    def test_e_membership(self):
        rng = np.random.default_rng(2)
        n, p_ = 3, 3
        gadget = red.build_gadget(red.random_isc(n, p_, rng))
        holders = {}
        for record in gadget.set_system:
            for e in record.elements:
                holders.setdefault(gadget.element_names[e], []).append(gadget.set_names[record.set_id])
        for i in range(1, 2 * p_ + 1):
            names = holders[f'e_{i}']
            if i == p_:
                self.assertEqual(names, [f'S_{p_}^1'])
            elif i == 2 * p_:
                self.assertEqual(names, [f'S_{2 * p_}^{j + 1}' for j in sorted(gadget.isc.f_prime[p_ - 1][0])])
            else:
                self.assertEqual(names, [f'S_{i}^{j}' for j in range(1, n + 1)])
        start = f'out(u_{p_ + 1}^1)'
        for name in gadget.set_names:
            if name.startswith(f'S_{2 * p_}^'):
                self.assertIn(name, holders[start])

    def test_equivalence_examples(self):
        meets = red.IscInstance(2, 1, [[[0], [1]]], [[[0], [1]]])
        report = red.verify_equivalence(meets)
        self.assertEqual((report.opt, report.chase, report.passed), (7, True, True))
        misses = red.IscInstance(2, 1, [[[0], [1]]], [[[1], [0]]])
        report = red.verify_equivalence(misses)
        self.assertEqual((report.opt, report.chase, report.passed), (8, False, True))

    def test_equivalence_exhaustive(self):
        count = 0
        for isc_ in red.all_isc(2, 1):
            report = red.verify_equivalence(isc_)
            self.assertTrue(report.passed, (isc_.f, isc_.f_prime, report))
            self.assertGreaterEqual(report.opt, report.lower_bound)
            count += 1
        self.assertEqual(count, 256)

    def test_equivalence_empty_images(self):
        report = red.verify_equivalence(red.IscInstance(1, 2, [[[]], [[]]], [[[0]], [[0]]]))
        self.assertEqual((report.opt, report.chase, report.lower_bound), (8, False, 6))
        self.assertTrue(report.passed)
        self.assertFalse(report.tight)
        for p_, total in [(2, 16), (3, 64)]:
            count = 0
            for isc_ in red.all_isc(1, p_):
                report = red.verify_equivalence(isc_)
                self.assertTrue(report.passed, (isc_.f, isc_.f_prime, report))
                self.assertEqual(report.opt == report.lower_bound, report.chase)
                count += 1
            self.assertEqual(count, total)
        for n, p_ in [(2, 2), (2, 3)]:
            rng = u.substream(1, n, p_)
            for _ in range(150):
                isc_ = red.random_isc(n, p_, rng, nonempty=False)
                report = red.verify_equivalence(isc_)
                self.assertTrue(report.passed, (n, p_, isc_.f, isc_.f_prime, report))
                self.assertGreaterEqual(report.opt, report.lower_bound)

    def test_equivalence_random(self):
        for n, p_ in [(3, 1), (2, 2), (3, 2)]:
            rng = u.substream(0, n, p_)
            for _ in range(200):
                isc_ = red.random_isc(n, p_, rng)
                report = red.verify_equivalence(isc_)
                self.assertTrue(report.passed, (n, p_, isc_.f, isc_.f_prime, report))

    def test_too_large(self):
        with self.assertRaises(TooLarge):
            red.verify_equivalence(red.random_isc(10, 5, np.random.default_rng(0)))

    def test_files(self):
        isc_ = red.random_isc(3, 2, np.random.default_rng(5), nonempty=False)
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'a.isc')
            red.save_isc(isc_, path)
            self.assertEqual(red.load_isc(path), isc_)
            gadget = red.build_gadget(isc_)
            out = os.path.join(folder, 'gadget.ssc')
            red.save_gadget(gadget, out)
            self.assertEqual(p.load_instance(out), gadget.set_system)
            with open(out + '.names.json') as f:
                names = json.load(f)
            self.assertEqual(names['sets'], gadget.set_names)
            self.assertEqual(len(names['elements']), gadget.set_system.n)


class TestRecovery(unittest.TestCase):
    def test_is_intersecting(self):
        self.assertTrue(rec.is_intersecting([{1, 2}, {2, 3}]))
        self.assertFalse(rec.is_intersecting([{1}, {1, 2}]))

    def test_random_families_intersecting(self):
        rng = np.random.default_rng(0)
        hits = sum(rec.is_intersecting(rec.random_family(64, 8, rng)) for _ in range(1000))
        self.assertGreaterEqual(hits, 990)

    def test_empty_set_family(self):
        oracle = rec.DisjointnessOracle([set()])
        run = rec.recover_family(oracle, 8, 1)
        self.assertTrue(run.success)
        self.assertEqual(run.recovered, (frozenset(),))

    def test_full_set_family(self):
        oracle = rec.DisjointnessOracle([range(8)])
        run = rec.recover_family(oracle, 8, 1, budget=50, rng=np.random.default_rng(0))
        self.assertFalse(run.success)
        self.assertEqual(run.recovered, ())
        self.assertEqual(run.queries_used, 50)

    def test_recovery_success_rate(self):
        budget = 8 ** 4 * 3
        runs = rec.run_recovery_trials(64, 8, 2, trials=50, seed=0, budget=budget, jobs=1)
        self.assertGreaterEqual(sum(r.success for r in runs), 45)
        for run in runs:
            self.assertTrue(rec.is_intersecting(run.recovered))
            self.assertLessEqual(run.queries_used, budget + 64 * run.positive_probes)

    def test_noisy_oracle_keeps_antichain(self):
        runs = rec.run_recovery_trials(32, 4, 2, trials=5, seed=1, budget=500, error_rate=0.05)
        for run in runs:
            self.assertTrue(rec.is_intersecting(run.recovered))

    def test_query_size_and_budget(self):
        self.assertEqual(rec.query_size(8, 2), 6)
        self.assertEqual(rec.query_size(1, 2), 1)
        self.assertEqual(rec.default_budget(8, 2), 8 ** 5 * 3)
        with self.assertRaises(BadParams):
            rec.recover_family(rec.DisjointnessOracle([{0}]), 4, 8)

    def test_uniqueness_frequency(self):
        n, m, c, trials = 64, 8, 2, 10 ** 5
        freq = rec.uniqueness_stats(n, m, c, trials, np.random.default_rng(0))
        bound = m ** -(c + 1)
        sigma = math.sqrt(bound * (1 - bound) / trials)
        self.assertGreaterEqual(freq, bound - 3 * sigma)

    def test_uniqueness_degenerate(self):
        self.assertEqual(rec.uniqueness_stats(8, 1, 2, 100, np.random.default_rng(0)), 1.0)
        self.assertEqual(rec.uniqueness_stats(64, 8, 100, 1000, np.random.default_rng(0)), 0.0)


class TestExperiments(unittest.TestCase):
    def test_delta_sweep(self):
        instances = x.generated_instances('planted-cover', 20, 30, 10, seed=0, opt_size=3)
        rows = x.bench(instances, deltas=[1, 0.5, 1 / 3], algorithms=['exact'], seed=0)
        self.assertEqual(len(rows), 60)
        self.assertEqual({row.passes for row in rows}, {2, 4, 6})
        self.assertTrue(all(row.status == 'ok' for row in rows))

    def test_exact_vs_greedy(self):
        instances = x.generated_instances('planted-cover', 5, 30, 10, seed=3, opt_size=3)
        rows = x.bench(instances, deltas=[1], algorithms=['exact', 'greedy'], seed=0, with_oracle=True)
        for exact, greedy in zip(rows[0::2], rows[1::2]):
            self.assertEqual(exact.instance, greedy.instance)
            self.assertLessEqual(exact.ratio, greedy.ratio)
            self.assertEqual(exact.size / exact.opt, exact.ratio)

    def test_empty_directory(self):
        with tempfile.TemporaryDirectory() as folder:
            rows = x.bench(x.directory_instances(folder))
        self.assertEqual(rows, [])
        self.assertEqual(x.rows_to_csv(rows), ','.join(x.BenchRow._fields) + '\n')

    def test_failed_row(self):
        rows = x.bench([('bad', make_system(3, [[0, 1]]))], deltas=[1])
        self.assertEqual(rows[0].status, 'failed:Infeasible')
        self.assertIn(',-,', x.rows_to_csv(rows))

    def test_directory(self):
        with tempfile.TemporaryDirectory() as folder:
            p.save_instance(g.generate_instance('planted-cover', 20, 8, seed=1, opt_size=2), os.path.join(folder, 'a.ssc'))
            geo.save_geo(geo.generate_disc_instance(2, 20, 6, seed=1), os.path.join(folder, 'b.geo'))
            rows = x.bench(x.directory_instances(folder), deltas=[0.5], algorithms=['greedy'])
        self.assertEqual([(r.instance, r.algorithm, r.status) for r in rows],
                         [('a.ssc', 'iter-greedy', 'ok'), ('b.geo', 'geom-greedy', 'ok')])
        self.assertEqual(rows[1].passes, 7)


class TestMain(unittest.TestCase):
    def run_main(self, *argv):
        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            code = main(list(argv))
        return code, out.getvalue()

    def test_gen_and_solve(self):
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'a.ssc')
            code, _ = self.run_main('gen', 'planted', '--opt', '4', '--n', '64', '--m', '32', '--seed', '1', '-o', path)
            self.assertEqual(code, 0)
            self.assertTrue(p.load_instance(path).feasible)
            code, out = self.run_main('solve', '--delta', '0.5', '--offline', 'exact', '--seed', '0', path)
            self.assertEqual(code, 0)
            self.assertIn('passes: 4', out)
            self.assertIn('valid: True', out)
            code, out = self.run_main('solve', '--seed', '0', '--format', 'json', path)
            self.assertEqual(json.loads(out)['passes'], 4)

    def test_solve_oracle(self):
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'a.ssc')
            self.run_main('gen', 'planted', '--opt', '3', '--n', '15', '--m', '10', '--seed', '2', '-o', path)
            code, out = self.run_main('solve', '--oracle', '--seed', '0', path)
            self.assertEqual(code, 0)
            self.assertIn('ratio: ', out)
            code, out = self.run_main('oracle', path)
            self.assertIn('opt: ', out)

    def test_exit_codes(self):
        with tempfile.TemporaryDirectory() as folder:
            infeasible = os.path.join(folder, 'bad.ssc')
            with open(infeasible, 'w') as f:
                f.write('n=3 m=1\n0: 0 1\n')
            self.assertEqual(self.run_main('solve', '--seed', '0', infeasible)[0], 2)
            broken = os.path.join(folder, 'broken.ssc')
            with open(broken, 'w') as f:
                f.write('n=3 m=1\n0: x\n')
            self.assertEqual(self.run_main('solve', '--seed', '0', broken)[0], 1)
            self.assertEqual(self.run_main('solve', '--ci', infeasible)[0], 1)

    def test_solve_geo(self):
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'a.geo')
            self.assertEqual(self.run_main('gen', 'discs', '--opt', '2', '--n', '20', '--m', '6', '--seed', '1', '-o', path)[0], 0)
            code, out = self.run_main('solve', '--delta', '0.25', '--offline', 'exact', '--seed', '0', path)
            self.assertEqual(code, 0)
            self.assertIn('passes: 13', out)

    def test_reduce(self):
        code, out = self.run_main('reduce', '--n', '2', '--p', '1', '--seed', '3', '--verify')
        self.assertEqual(code, 0)
        self.assertIn('equivalence: PASS', out)
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'a.isc')
            self.run_main('gen', 'isc', '--n', '2', '--p', '2', '--seed', '0', '-o', path)
            code, out = self.run_main('reduce', '--isc', path, '--verify', '-o', os.path.join(folder, 'g.ssc'))
            self.assertEqual(code, 0)
            self.assertTrue(os.path.exists(os.path.join(folder, 'g.ssc.names.json')))

    def test_format_defaults(self):
        parser = create_parser()
        self.assertEqual(parser.parse_args(['solve', 'x.ssc']).format, None)
        for argv, expected in [(['solve', 'x.ssc'], 'text'), (['oracle', 'x.ssc'], 'text'), (['reduce'], 'text'),
                               (['bench'], 'csv'), (['recover'], 'csv'), (['solve', '--format', 'json', 'x.ssc'], 'json'),
                               (['bench', '--format', 'json'], 'json')]:
            self.assertEqual(parse_args(parser, argv).format, expected, argv)

    def test_reduce_empty_images(self):
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'a.isc')
            with open(path, 'w') as f:
                f.write('n=1 p=2\nf 1 1:\nf 2 1:\ng 1 1: 1\ng 2 1: 1\n')
            code, out = self.run_main('reduce', '--isc', path, '--verify')
            self.assertEqual(code, 0)
            self.assertIn('equivalence: PASS', out)
            self.assertIn('tight: False', out)

    def test_recover(self):
        code, out = self.run_main('recover', '--n', '16', '--m', '2', '--trials', '2', '--budget', '50',
                                  '--jobs', '1', '--seed', '0')
        self.assertEqual(code, 0)
        lines = out.splitlines()
        self.assertEqual(lines[0], 'trial,success,queries_used,recovered,intersecting')
        self.assertEqual(len(lines), 3)

    def test_check_sample(self):
        code, out = self.run_main('check-sample', '--p', '0.1', '--eps', '0.5', '--q', '0.01', '--n', '128',
                                  '--m', '16', '--sample-size', '64', '--seed', '0')
        self.assertEqual(code, 0)
        self.assertIn('failures: ', out)

    def test_bench(self):
        code, out = self.run_main('bench', '--count', '2', '--n', '30', '--m', '10', '--opt', '3', '--deltas', '1,1/2',
                                  '--jobs', '1', '--seed', '0')
        self.assertEqual(code, 0)
        lines = out.splitlines()
        self.assertEqual(lines[0], ','.join(x.BenchRow._fields))
        self.assertEqual(len(lines), 5)


if __name__ == '__main__':
    unittest.main()
