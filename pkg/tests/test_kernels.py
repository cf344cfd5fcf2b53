"""Behavioral tests for the pure-Python kernel lane."""

import math

import numpy as np
import pytest

import driftlab._core_py as K
from driftlab.rng import Xoshiro256pp, derive_seed, to_u01
from driftlab import kernels


def stderr(a):
    return a.std(ddof=1) / math.sqrt(len(a))


# ---------------------------------------------------------------------------
# frozen environment
# ---------------------------------------------------------------------------

class TestFrozen:
    def test_all_occupied_drift(self):
        pos, at, jumps = K.ct_walk_frozen(1.0, 2.0, 1.0, 20.0, 200, 11)
        assert abs(pos.mean() - 20.0) < 3 * stderr(pos.astype(float))
        assert np.allclose(at, 20.0, atol=1e-9)
        j = jumps.astype(float)
        assert abs(j.mean() - 60.0) < 3 * stderr(j)

    def test_all_vacant_drift(self):
        pos, at, _ = K.ct_walk_frozen(0.0, 2.0, 1.0, 20.0, 200, 12)
        assert abs(pos.mean() + 20.0) < 3 * stderr(pos.astype(float))
        assert np.all(at == 0.0)

    def test_deterministic(self):
        a = K.ct_walk_frozen(0.7, 3.0, 1.0, 5.0, 50, 99)
        b = K.ct_walk_frozen(0.7, 3.0, 1.0, 5.0, 50, 99)
        for x, y in zip(a, b):
            assert np.array_equal(x, y)

    def test_pinned_env_seed_changes_law(self):
        eseed = derive_seed(1234, 77)
        pos, _, _ = K.ct_walk_frozen(0.7, 3.0, 1.0, 5.0, 50, 99, env_seed=eseed)
        pos2, _, _ = K.ct_walk_frozen(0.7, 3.0, 1.0, 5.0, 50, 99)
        assert not np.array_equal(pos, pos2)

    def test_path_matches_batch_replica(self):
        pos, at, jumps = K.ct_walk_frozen(0.7, 3.0, 1.0, 8.0, 6, 42)
        times, xs, occs, acc = K.ct_path_frozen(0.7, 3.0, 1.0, 8.0, 42,
                                                replica=3)
        assert len(times) == jumps[3]
        assert xs[-1] == pos[3]
        assert acc == pytest.approx(at[3], abs=1e-12)
        assert np.all(np.diff(times) > 0)
        assert np.all(np.abs(np.diff(xs)) == 1)


# ---------------------------------------------------------------------------
# flip environment
# ---------------------------------------------------------------------------

class TestFlip:
    def test_fast_flips_occupation_fraction(self):
        g01, g10 = 8.0, 2.0
        pos, at, _ = K.ct_walk_flip(g01, g10, 2.0, 1.0, 10.0, 300, 21)
        frac = at / 10.0
        assert abs(frac.mean() - 0.8) < 3 * stderr(frac)

    def test_path_matches_batch_replica(self):
        pos, at, jumps = K.ct_walk_flip(1.0, 1.0, 2.0, 1.0, 6.0, 5, 77)
        times, xs, occs, acc = K.ct_path_flip(1.0, 1.0, 2.0, 1.0, 6.0, 77,
                                              replica=2)
        assert len(times) == jumps[2]
        assert xs[-1] == pos[2]
        assert acc == pytest.approx(at[2], abs=1e-12)

    def test_occupied_time_bounds(self):
        _, at, _ = K.ct_walk_flip(1.0, 3.0, 2.0, 1.0, 7.0, 100, 5)
        assert np.all(at >= 0.0)
        assert np.all(at <= 7.0 + 1e-12)

    def test_trajectories_match_lazy_chain_from_zero(self):
        es = derive_seed(31337, 1)
        g01, g10, tmax = 0.7, 1.3, 9.0
        init, ptr, times = K.build_flip_trajectories(es, -3, 3, g01, g10, tmax)
        for j, x in enumerate(range(-3, 4)):
            site = K._FlipSite(es, x, 0.0, g01, g10)
            assert init[j] == site.state
            got = list(times[ptr[j]:ptr[j + 1]])
            expect = []
            while site.next_flip <= tmax:
                expect.append(site.next_flip)
                site.state ^= 1
                site.k += 1
                site.next_flip += site._hold()
            assert got == pytest.approx(expect, abs=0)

    def test_shared_env_exact_hist_agreement(self):
        es = derive_seed(9, 9)
        init, ptr, times = K.build_flip_trajectories(es, -200, 200, 2.0, 1.0,
                                                     5.0)
        pos, at, jumps, aborted = K.ct_walk_flip_shared(
            init, ptr, times, -200, 2.0, 1.0, 5.0, 150, 55)
        assert not aborted.any()
        counts, nab = K.shared_flip_position_hist(
            init, ptr, times, -200, 2.0, 1.0, 5.0, 150, 55)
        assert nab == 0
        expect = np.zeros_like(counts)
        for p in pos:
            expect[p + 200] += 1
        assert np.array_equal(counts, expect)

    def test_shared_want_atime_false_same_positions(self):
        es = derive_seed(10, 4)
        init, ptr, times = K.build_flip_trajectories(es, -100, 100, 1.0, 1.0,
                                                     3.0)
        a = K.ct_walk_flip_shared(init, ptr, times, -100, 2.0, 1.0, 3.0, 80, 3)
        b = K.ct_walk_flip_shared(init, ptr, times, -100, 2.0, 1.0, 3.0, 80, 3,
                                  want_atime=False)
        assert np.array_equal(a[0], b[0])
        assert np.all(b[1] == 0.0)
        assert np.array_equal(a[2], b[2])

    def test_shared_abort_flagged(self):
        es = derive_seed(6, 6)
        init, ptr, times = K.build_flip_trajectories(es, -2, 2, 1.0, 1.0, 50.0)
        pos, _, _, aborted = K.ct_walk_flip_shared(
            init, ptr, times, -2, 2.0, 1.0, 50.0, 40, 8)
        assert aborted.all()
        assert np.all(np.abs(pos[aborted == 1]) == 3)


# ---------------------------------------------------------------------------
# exclusion environment
# ---------------------------------------------------------------------------

class TestSse:
    def test_full_torus_reduces_to_homogeneous(self):
        pos, at, _, pruned = K.ct_walk_sse(1.0, 2.0, 1.0, 15.0, 150, 31,
                                           torus_L=32)
        assert abs(pos.mean() - 15.0) < 3 * stderr(pos.astype(float))
        assert np.allclose(at, 15.0, atol=1e-9)
        assert not pruned.any()

    def test_full_window_reduces_to_homogeneous(self):
        pos, at, _, _ = K.ct_walk_sse(1.0, 2.0, 1.0, 15.0, 150, 32,
                                      half_width=40)
        assert abs(pos.mean() - 15.0) < 3 * stderr(pos.astype(float))
        assert np.allclose(at, 15.0, atol=1e-9)

    def test_half_density_symmetric(self):
        pos, _, _, _ = K.ct_walk_sse(0.5, 2.0, 1.0, 10.0, 200, 33,
                                     half_width=60)
        assert abs(pos.mean()) < 3 * stderr(pos.astype(float))

    def test_path_matches_batch_replica(self):
        args = (0.5, 2.0, 1.0, 6.0, 5, 44)
        pos, at, jumps, _ = K.ct_walk_sse(*args, torus_L=16)
        times, xs, occs, acc = K.ct_path_sse(0.5, 2.0, 1.0, 6.0, 44,
                                             replica=4, torus_L=16)
        assert len(times) == jumps[4]
        assert xs[-1] == pos[4]
        assert acc == pytest.approx(at[4], abs=1e-12)

    def test_path_matches_batch_replica_window(self):
        pos, at, jumps, _ = K.ct_walk_sse(0.6, 2.0, 1.0, 6.0, 4, 45,
                                          half_width=30)
        times, xs, occs, acc = K.ct_path_sse(0.6, 2.0, 1.0, 6.0, 45,
                                             replica=2, half_width=30)
        assert len(times) == jumps[2]
        assert xs[-1] == pos[2]
        assert acc == pytest.approx(at[2], abs=1e-12)

    def test_prune_disabled_equals_huge_band(self):
        a = K.ct_walk_sse(0.5, 2.0, 1.0, 8.0, 60, 46, half_width=40)
        b = K.ct_walk_sse(0.5, 2.0, 1.0, 8.0, 60, 46, half_width=40,
                          prune_pos=10 ** 9)
        assert np.array_equal(a[0], b[0])
        assert np.array_equal(a[1], b[1])
        assert not b[3].any()

    def test_prune_fires_for_ballistic_walkers(self):
        pos, _, _, pruned = K.ct_walk_sse(1.0, 7.0, 3.0, 40.0, 60, 47,
                                          half_width=40, prune_pos=-150)
        assert pruned.mean() > 0.5
        assert np.all(pos[pruned == 1] > -150)

    def test_deterministic(self):
        a = K.ct_walk_sse(0.5, 2.0, 1.0, 5.0, 30, 48, half_width=30)
        b = K.ct_walk_sse(0.5, 2.0, 1.0, 5.0, 30, 48, half_width=30)
        for x, y in zip(a, b):
            assert np.array_equal(x, y)


class TestCoupled:
    def test_zero_gap_identical(self):
        pa, pb, v = K.ct_coupled_sse(0.5, 2.0, 1.0, 10.0, 60, 51, 0,
                                     half_width=40)
        assert np.array_equal(pa, pb)
        assert not v.any()

    def test_even_gap_ordered_window(self):
        pa, pb, v = K.ct_coupled_sse(0.5, 2.0, 1.0, 15.0, 80, 52, 2,
                                     half_width=40)
        assert not v.any()
        assert np.all(pa <= pb)

    def test_even_gap_ordered_torus(self):
        pa, pb, v = K.ct_coupled_sse(0.5, 2.0, 1.0, 15.0, 80, 53, 4,
                                     torus_L=32)
        assert not v.any()
        assert np.all(pa <= pb)

    def test_odd_gap_rejected(self):
        with pytest.raises(ValueError):
            K.ct_coupled_sse(0.5, 2.0, 1.0, 1.0, 1, 1, 1)
        with pytest.raises(ValueError):
            K.ct_coupled_sse(0.5, 2.0, 1.0, 1.0, 1, 1, -2)


class TestBlocks:
    def test_time_zero_vacant_product(self):
        alive = K.sse_blocks_survival(0.5, [0], [3], [0], 0.0, 4000, 61, 20)
        m = alive.mean()
        sd = math.sqrt(0.125 * 0.875 / 4000)
        assert abs(m - 0.125) < 3 * sd

    def test_time_zero_occupied_product(self):
        alive = K.sse_blocks_survival(0.3, [0], [2], [1], 0.0, 4000, 62, 20)
        m = alive.mean()
        sd = math.sqrt(0.09 * 0.91 / 4000)
        assert abs(m - 0.09) < 3 * sd

    def test_time_zero_two_blocks(self):
        alive = K.sse_blocks_survival(0.5, [0, 10], [2, 2], [1, 0], 0.0,
                                      4000, 63, 20)
        m = alive.mean()
        p = 0.5 ** 4
        sd = math.sqrt(p * (1 - p) / 4000)
        assert abs(m - p) < 3 * sd

    def test_survival_decays_in_time(self):
        a1 = K.sse_blocks_survival(0.5, [0], [2], [0], 0.5, 3000, 64, 25)
        a2 = K.sse_blocks_survival(0.5, [0], [2], [0], 4.0, 3000, 65, 25)
        se = math.sqrt(a1.mean() / 3000) + math.sqrt(max(a2.mean(), 1e-4) / 3000)
        assert a1.mean() - a2.mean() > 3 * se

    def test_deterministic(self):
        a = K.sse_blocks_survival(0.5, [0], [3], [0], 2.0, 500, 66, 20)
        b = K.sse_blocks_survival(0.5, [0], [3], [0], 2.0, 500, 66, 20)
        assert np.array_equal(a, b)


class TestSrwRange:
    def test_no_jumps_range_one(self):
        r = K.srw_range(1e-6, 300, 71)
        assert np.all(r == 1)

    def test_sqrt_growth(self):
        r1 = K.srw_range(25.0, 800, 72).astype(float)
        r2 = K.srw_range(100.0, 800, 73).astype(float)
        ratio = r2.mean() / r1.mean()
        assert 1.6 < ratio < 2.4


# ---------------------------------------------------------------------------
# discrete-time lane
# ---------------------------------------------------------------------------

class TestDtTriple:
    def test_all_occupied_three_lanes_agree(self):
        ds, dd, da = K.dt_triple(1.0, 0.8, 128, 100, 100, 81)
        assert np.array_equal(ds, dd)
        assert np.array_equal(ds, da)
        m = ds.astype(float)
        assert abs(m.mean() - 0.6 * 100) < 3 * stderr(m)

    def test_half_density_symmetric(self):
        ds, dd, da = K.dt_triple(0.5, 0.7, 128, 200, 150, 82)
        for d in (dd, da):
            f = d.astype(float)
            assert abs(f.mean()) < 3 * stderr(f)

    def test_averaged_speed_formula(self):
        ds, dd, da = K.dt_triple(0.8, 0.7, 128, 300, 200, 83)
        f = da.astype(float) / 300.0
        assert abs(f.mean() - 0.24) < 3 * stderr(f)

    def test_deterministic(self):
        a = K.dt_triple(0.6, 0.7, 128, 50, 40, 84)
        b = K.dt_triple(0.6, 0.7, 128, 50, 40, 84)
        for x, y in zip(a, b):
            assert np.array_equal(x, y)

    def test_length_validation(self):
        with pytest.raises(ValueError):
            K.dt_triple(0.5, 0.7, 64, 10, 1, 1)


class TestParallelSweep:
    def test_particle_conservation(self):
        rng = Xoshiro256pp(derive_seed(5, 5))
        crng = Xoshiro256pp(derive_seed(5, 6))
        L = 128
        cfg = 0
        for s in range(L):
            if crng.u01() < 0.5:
                cfg |= 1 << s
        n0 = bin(cfg).count("1")
        for step in range(40):
            cfg = K._parallel_sweep(cfg, L, step & 1, rng)
            assert bin(cfg).count("1") == n0

    def test_single_particle_two_sweep_law(self):
        L = 128
        counts = {-1: 0, 0: 0, 1: 0, 2: 0}
        rng = Xoshiro256pp(derive_seed(8, 8))
        n = 2000
        for _ in range(n):
            cfg = 1 << 4
            cfg = K._parallel_sweep(cfg, L, 0, rng)
            cfg = K._parallel_sweep(cfg, L, 1, rng)
            newpos = cfg.bit_length() - 1
            counts[newpos - 4] += 1
        sd = 3 * math.sqrt(0.25 * 0.75 / n)
        for d in (-1, 0, 1, 2):
            assert abs(counts[d] / n - 0.25) < sd


class TestHelpers:
    def test_stir_margin_monotone(self):
        vals = [kernels.stir_margin(t) for t in (1, 10, 100, 1000, 2000)]
        assert vals == sorted(vals)
        assert kernels.stir_margin(2000) < 600

    def test_flip_margin_covers_mean(self):
        assert kernels.flip_margin(80.0, 7.0, 3.0) > 800

    def test_slowdown_band_value(self):
        assert kernels.slowdown_band(2000.0) == pytest.approx(
            2.0 * math.sqrt(2000.0 * math.log(2000.0)))
        with pytest.raises(ValueError):
            kernels.slowdown_band(0.5)

    def test_lane_name(self):
        assert kernels.lane_name() in ("compiled", "pure")
