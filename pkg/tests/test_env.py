import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from driftlab.env import (
    FLIP,
    LINK,
    Boundary,
    EventSchedule,
    Occupancy,
    SpinFlipSpec,
    WindowTooSmallError,
    bernoulli_init,
    build_sse_schedule,
    check_attractive,
    compute_M_epsilon,
    parallel_exclusion_step,
    spinflip_evolve,
    sse_evolve,
)

seeds = st.integers(min_value=0, max_value=2**63)


class TestOccupancy:
    def test_rejects_non_binary(self):
        with pytest.raises(ValueError):
            Occupancy(cells=np.array([0, 2, 1]), offset=0)

    def test_torus_wraps_and_frozen_raises(self):
        occ = Occupancy(cells=np.array([1, 0, 0, 1]), offset=-1, boundary=Boundary.TORUS)
        assert occ.get(-1) == 1
        assert occ.get(3) == occ.get(-1)
        frozen = Occupancy(cells=occ.cells, offset=-1, boundary=Boundary.FROZEN)
        with pytest.raises(WindowTooSmallError):
            frozen.get(3)

    def test_dump_load_roundtrip(self):
        occ = Occupancy(cells=np.array([1, 0, 1, 1, 0]), offset=-2)
        text = occ.dumps()
        assert text == "-2\n10110\n"
        back = Occupancy.loads(text)
        assert back.offset == -2
        assert np.array_equal(back.cells, occ.cells)

    def test_load_rejects_garbage(self):
        with pytest.raises(ValueError):
            Occupancy.loads("0\n10120\n")


class TestBernoulliInit:
    def test_degenerate_densities(self):
        zeros = bernoulli_init(0.0, range(0, 20), Boundary.TORUS, seed=1)
        ones = bernoulli_init(1.0, range(0, 20), Boundary.TORUS, seed=1)
        assert zeros.particle_count() == 0
        assert ones.particle_count() == 20

    def test_density_matches_within_binomial_bound(self):
        occ = bernoulli_init(0.5, range(0, 10**4), Boundary.TORUS, seed=42)
        mean = occ.particle_count() / 10**4
        assert abs(mean - 0.5) < 3.0 * math.sqrt(0.25 / 10**4)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            bernoulli_init(1.5, range(0, 4), Boundary.TORUS, seed=0)
        with pytest.raises(ValueError):
            bernoulli_init(0.5, range(0, 0), Boundary.TORUS, seed=0)

    @given(seeds)
    def test_reproducible_and_window_consistent(self, seed):
        a = bernoulli_init(0.4, range(-8, 9), Boundary.TORUS, seed=seed)
        b = bernoulli_init(0.4, range(-8, 9), Boundary.TORUS, seed=seed)
        assert np.array_equal(a.cells, b.cells)
        # the same sites sampled through a wider window agree cell by cell
        wide = bernoulli_init(0.4, range(-20, 21), Boundary.TORUS, seed=seed)
        assert np.array_equal(wide.cells[12:29], a.cells)


class TestBuildSchedule:
    def test_zero_horizon_is_empty(self):
        sched = build_sse_schedule(range(0, 10), 0.0, seed=5)
        assert sched.times.size == 0

    def test_event_count_matches_poisson_mean(self):
        lam = 10.0  # 10 torus edges, horizon 1
        counts = [build_sse_schedule(range(0, 10), 1.0, seed=s).times.size for s in range(1000)]
        mean = np.mean(counts)
        assert abs(mean - lam) < 3.0 * math.sqrt(lam / 1000)

    def test_frozen_boundary_has_one_less_edge(self):
        sched = build_sse_schedule(range(0, 6), 4.0, seed=9, boundary=Boundary.FROZEN)
        assert sched.n_edges == 5
        assert sched.targets.max() < 5

    @given(seeds)
    def test_sorted_and_in_range(self, seed):
        sched = build_sse_schedule(range(-3, 5), 2.5, seed=seed)
        assert np.all(np.diff(sched.times) >= 0)
        if sched.times.size:
            assert sched.times[0] >= 0 and sched.times[-1] <= 2.5
            assert sched.targets.min() >= 0 and sched.targets.max() < 8


class TestSseEvolve:
    def test_single_link_swaps(self):
        occ = Occupancy(cells=np.array([1, 0]), offset=0, boundary=Boundary.FROZEN)
        sched = EventSchedule(
            horizon=1.0, window_start=0, n_sites=2, boundary=Boundary.FROZEN,
            times=np.array([0.5]), targets=np.array([0]), kinds=np.array([LINK]), seed=0,
        )
        out = sse_evolve(occ, sched, 1.0)
        assert list(out.cells) == [0, 1]
        assert out.time == 1.0

    def test_out_of_horizon_rejected(self):
        occ = bernoulli_init(0.5, range(0, 6), Boundary.TORUS, seed=3)
        sched = build_sse_schedule(range(0, 6), 1.0, seed=3)
        with pytest.raises(ValueError):
            sse_evolve(occ, sched, 1.5)

    @given(seeds)
    @settings(max_examples=40)
    def test_particle_count_conserved_on_torus(self, seed):
        occ = bernoulli_init(0.5, range(0, 12), Boundary.TORUS, seed=seed)
        sched = build_sse_schedule(range(0, 12), 2.0, seed=seed + 1)
        out = sse_evolve(occ, sched, 2.0)
        assert out.particle_count() == occ.particle_count()

    @given(seeds)
    @settings(max_examples=40)
    def test_replay_is_a_semigroup(self, seed):
        occ = bernoulli_init(0.5, range(0, 10), Boundary.TORUS, seed=seed)
        sched = build_sse_schedule(range(0, 10), 2.0, seed=seed + 1)
        direct = sse_evolve(occ, sched, 2.0)
        stepped = sse_evolve(sse_evolve(occ, sched, 1.3), sched, 2.0)
        assert np.array_equal(direct.cells, stepped.cells)

    def test_bernoulli_marginal_is_stationary(self):
        rho, t, n = 0.3, 0.7, 10**4
        hits = 0
        for i in range(n):
            occ = bernoulli_init(rho, range(0, 8), Boundary.TORUS, seed=2 * i)
            sched = build_sse_schedule(range(0, 8), t, seed=2 * i + 1)
            hits += sse_evolve(occ, sched, t).get(0)
        assert abs(hits / n - rho) < 3.0 * math.sqrt(rho * (1 - rho) / n)


class TestSpinflipEvolve:
    def test_constant_rate_flip_probability(self):
        # a single site flips an odd number of times by t with
        # probability (1 - exp(-2 gamma t)) / 2
        gamma, t, n = 0.8, 0.6, 10**4
        expected = (1.0 - math.exp(-2.0 * gamma * t)) / 2.0
        spec = SpinFlipSpec.constant(gamma)
        flips = 0
        for i in range(n):
            occ = bernoulli_init(0.5, range(0, 5), Boundary.TORUS, seed=i)
            out = spinflip_evolve(occ, spec, t, seed=i + 7)
            flips += int(out.get(2) != occ.get(2))
        assert abs(flips / n - expected) < 3.0 * math.sqrt(expected * (1 - expected) / n)

    def test_all_zero_rates_freeze(self):
        occ = bernoulli_init(0.5, range(0, 9), Boundary.TORUS, seed=4)
        spec = SpinFlipSpec(radius=0, rates=np.zeros(2))
        out = spinflip_evolve(occ, spec, 50.0, seed=11)
        assert np.array_equal(out.cells, occ.cells)
        assert out.time == 50.0

    def test_neighbor_blind_rates_give_independent_sites(self):
        n = 4000
        spec = SpinFlipSpec.biased_flip(1.0, 0.5)
        x0, x5 = np.empty(n), np.empty(n)
        for i in range(n):
            occ = bernoulli_init(0.5, range(0, 8), Boundary.TORUS, seed=3 * i)
            out = spinflip_evolve(occ, spec, 0.5, seed=3 * i + 1)
            x0[i], x5[i] = out.get(0), out.get(5)
        cov = np.mean(x0 * x5) - np.mean(x0) * np.mean(x5)
        assert abs(cov) < 3.0 * math.sqrt(3.0 / 16.0 / n)

    def test_recorded_schedule_replays_to_same_state(self):
        occ = bernoulli_init(0.5, range(0, 8), Boundary.TORUS, seed=21)
        out, sched = spinflip_evolve(occ, SpinFlipSpec.voter(), 3.0, seed=22, record=True)
        assert np.all(sched.kinds == FLIP)
        replayed = sse_evolve(occ, sched, 3.0)
        assert np.array_equal(replayed.cells, out.cells)


class TestParallelStep:
    def test_all_ones_is_fixed_point(self):
        occ = Occupancy(cells=np.ones(8, dtype=np.uint8), offset=0)
        out = parallel_exclusion_step(occ, "even", seed=1)
        assert np.array_equal(out.cells, occ.cells)

    def test_rejects_odd_length_and_frozen(self):
        with pytest.raises(ValueError):
            parallel_exclusion_step(Occupancy(cells=np.zeros(7, dtype=np.uint8), offset=0), "even", 1)
        frozen = Occupancy(cells=np.zeros(8, dtype=np.uint8), offset=0, boundary=Boundary.FROZEN)
        with pytest.raises(ValueError):
            parallel_exclusion_step(frozen, "even", 1)

    @given(seeds, st.sampled_from(["even", "odd"]))
    @settings(max_examples=40)
    def test_particle_count_conserved(self, seed, parity):
        occ = bernoulli_init(0.5, range(0, 14), Boundary.TORUS, seed=seed)
        out = parallel_exclusion_step(occ, parity, seed=seed + 5)
        assert out.particle_count() == occ.particle_count()

    def test_single_particle_two_sweep_law(self):
        # one particle at even position 4: the even sweep sends it to 5
        # w.p. 1/2, then the odd sweep sends 4 -> 3 and 5 -> 6 each w.p.
        # 1/2, so the two-sweep displacement is uniform on {-1, 0, 1, 2}:
        # mean 1/2, second moment 3/2.
        n = 4000
        disp = np.empty(n)
        for i in range(n):
            cells = np.zeros(12, dtype=np.uint8)
            cells[4] = 1
            occ = Occupancy(cells=cells, offset=0)
            out = parallel_exclusion_step(occ, "even", seed=2 * i)
            out = parallel_exclusion_step(out, "odd", seed=2 * i + 1)
            disp[i] = int(np.flatnonzero(out.cells)[0]) - 4
        assert abs(disp.mean() - 0.5) < 3.0 * math.sqrt(1.25 / n)
        assert abs(np.mean(disp**2) - 1.5) < 3.0 * math.sqrt(2.25 / n)


class TestAttractiveness:
    def test_constant_rates_attractive(self):
        assert check_attractive(SpinFlipSpec.constant(0.7)) is True

    def test_voter_attractive(self):
        assert check_attractive(SpinFlipSpec.voter()) is True

    def test_anti_voter_not_attractive(self):
        assert check_attractive(SpinFlipSpec.anti_voter()) is False

    def test_biased_flip_attractive(self):
        assert check_attractive(SpinFlipSpec.biased_flip(2.0, 0.8)) is True


def brute_force_M_epsilon(spec):
    # literal transcription of the definitions, kept independent of the
    # vectorized implementation
    width = spec.width
    M = 0.0
    for pos in range(width):
        if pos == spec.radius:
            continue
        bit = 1 << (width - 1 - pos)
        worst = 0.0
        for idx in range(1 << width):
            worst = max(worst, abs(spec.rates[idx] - spec.rates[idx ^ bit]))
        M += worst
    center = 1 << spec.radius
    eps = min(spec.rates[idx] + spec.rates[idx ^ center] for idx in range(1 << width))
    return M, eps


class TestStructureReport:
    def test_constant_rates(self):
        report = compute_M_epsilon(SpinFlipSpec.constant(0.9))
        assert report.M == 0.0
        assert report.epsilon == pytest.approx(1.8)
        assert report.attractive is True

    def test_biased_flip(self):
        report = compute_M_epsilon(SpinFlipSpec.biased_flip(3.0, 0.8))
        assert report.M == 0.0
        assert report.epsilon == pytest.approx(3.0)

    def test_glauber_style_table_matches_brute_force(self):
        rates = np.empty(8)
        for idx in range(8):
            left, center, right = (idx >> 2) & 1, (idx >> 1) & 1, idx & 1
            field = (2 * left - 1) + (2 * right - 1)
            rates[idx] = math.exp(-0.5 * (2 * center - 1) * field)
        spec = SpinFlipSpec(radius=1, rates=rates)
        report = compute_M_epsilon(spec)
        M, eps = brute_force_M_epsilon(spec)
        assert report.M == pytest.approx(M)
        assert report.epsilon == pytest.approx(eps)

    @given(st.lists(st.floats(min_value=0.0, max_value=5.0), min_size=8, max_size=8))
    def test_nonnegative_for_any_table(self, rates):
        report = compute_M_epsilon(SpinFlipSpec(radius=1, rates=np.array(rates)))
        assert report.M >= 0.0
        assert report.epsilon >= 0.0


class TestSpinFlipSpecSerialization:
    def test_roundtrip(self):
        spec = SpinFlipSpec.voter()
        back = SpinFlipSpec.from_text(spec.to_text())
        assert back.radius == 1
        assert np.array_equal(back.rates, spec.rates)

    def test_pattern_index_reads_left_to_right(self):
        spec = SpinFlipSpec.voter()
        assert spec.pattern_index([1, 0, 1]) == 0b101

    def test_rejects_incomplete_table(self):
        with pytest.raises(ValueError):
            SpinFlipSpec.from_text("0 1.0\n")

    def test_rejects_even_width(self):
        with pytest.raises(ValueError):
            SpinFlipSpec.from_text("00 1.0\n01 1.0\n10 1.0\n11 1.0\n")

    def test_rejects_negative_rate(self):
        with pytest.raises(ValueError):
            SpinFlipSpec(radius=0, rates=np.array([1.0, -0.5]))
