"""Pure-Python simulation kernels.

This is the fallback lane and the readable reference for the compiled
kernels in ``_core``.  Both lanes consume the same random streams in the
same order, so for equal arguments they produce bit-identical output
arrays.  Any change here must be mirrored there; the cross-lane equality
tests enforce it.

Stream layout per replica i of a batch with master seed m:
  environment stream        Xoshiro256pp(derive_seed(m, ENV, i))
  walker stream             Xoshiro256pp(derive_seed(m, WALK, i))
  discrete env sweeps       Xoshiro256pp(derive_seed(m, ENVUPD, i))
Frozen-environment cells and flip-chain draws are stateless hashes of
(seed, site) or (seed, site, k), so they do not depend on visit order:
  frozen cell               site_uniform(env_seed, x) < rho
  flip chain of site x      to_u01(derive_seed(env_seed, x, k)),
                            k = 0 the initial state, k >= 1 the holds.

Sliding-window exclusion kernels simulate the stirring dynamics exactly
on a finite window of cells kept at least `half_width` sites wide on
each side of the walker.  Cells beyond the window are replaced by their
stationary product law: extension draws fresh Bernoulli(rho) cells and
the aggregate swap clock is redrawn whenever the edge count changes.
The error of this truncation decays like exp(-half_width**2 / (4 t)),
so callers choose half_width from the horizon via kernels.stir_margin.

Tie convention: the walker reads the environment's left limit.  An
environment event at exactly a walker jump time applies after the jump,
so event selection uses a strict comparison (env first only when
strictly earlier) and flip chains advance through flip times strictly
below the query time.
"""

from __future__ import annotations

import math

import numpy as np

from .rng import Xoshiro256pp, derive_seed, site_uniform, to_u01

ENV = 1
WALK = 2
ENVUPD = 3

_CHUNK = 64


def _expo_from(u, rate):
    return -math.log(1.0 - u) / rate


# ---------------------------------------------------------------------------
# frozen Bernoulli environment
# ---------------------------------------------------------------------------

def ct_walk_frozen(rho, alpha, beta, t_max, n_rep, master_seed, env_seed=-1):
    """Continuous-time walk on hash-frozen Bernoulli(rho) cells.

    env_seed >= 0 pins one shared environment for every replica; -1
    derives a fresh environment per replica.  Returns (pos, a_time,
    jumps): final positions, occupied-site occupation times and jump
    counts.
    """
    ab = alpha + beta
    p_occ = alpha / ab
    p_vac = beta / ab
    pos = np.empty(n_rep, dtype=np.int64)
    a_time = np.empty(n_rep, dtype=np.float64)
    jumps = np.empty(n_rep, dtype=np.int64)
    for i in range(n_rep):
        es = env_seed if env_seed >= 0 else derive_seed(master_seed, ENV, i)
        w = Xoshiro256pp(derive_seed(master_seed, WALK, i))
        x = 0
        t = 0.0
        acc = 0.0
        nj = 0
        occ = site_uniform(es, x) < rho
        while True:
            dt = _expo_from(w.u01(), ab)
            tn = t + dt
            if tn > t_max:
                if occ:
                    acc += t_max - t
                break
            if occ:
                acc += dt
            t = tn
            u = w.u01()
            x += 1 if u < (p_occ if occ else p_vac) else -1
            nj += 1
            occ = site_uniform(es, x) < rho
        pos[i] = x
        a_time[i] = acc
        jumps[i] = nj
    return pos, a_time, jumps


def ct_path_frozen(rho, alpha, beta, t_max, master_seed, replica=0,
                   env_seed=-1):
    """Path-recorded twin of one ct_walk_frozen batch replica.

    Returns (times, positions, occs, a_time) with one row per jump; occs
    holds the occupancy of the site just jumped to.
    """
    ab = alpha + beta
    p_occ = alpha / ab
    p_vac = beta / ab
    es = env_seed if env_seed >= 0 else derive_seed(master_seed, ENV, replica)
    w = Xoshiro256pp(derive_seed(master_seed, WALK, replica))
    x = 0
    t = 0.0
    acc = 0.0
    occ = site_uniform(es, x) < rho
    times = []
    positions = []
    occs = []
    while True:
        dt = _expo_from(w.u01(), ab)
        tn = t + dt
        if tn > t_max:
            if occ:
                acc += t_max - t
            break
        if occ:
            acc += dt
        t = tn
        u = w.u01()
        x += 1 if u < (p_occ if occ else p_vac) else -1
        occ = site_uniform(es, x) < rho
        times.append(t)
        positions.append(x)
        occs.append(1 if occ else 0)
    return (np.array(times, dtype=np.float64),
            np.array(positions, dtype=np.int64),
            np.array(occs, dtype=np.uint8), acc)


# ---------------------------------------------------------------------------
# independently flipping sites
# ---------------------------------------------------------------------------

class _FlipSite:
    """One site's two-state chain, materialized lazily from first visit.

    Started in the stationary law: state Bernoulli(g01/(g01+g10)) from
    the k = 0 hash, successive holds from k = 1, 2, ...  Memorylessness
    makes starting the holds at the first-visit time equal in law to the
    stationary chain observed from that time on.
    """

    __slots__ = ("state", "next_flip", "k", "g01", "g10", "env_seed", "x")

    def __init__(self, env_seed, x, tau, g01, g10):
        self.env_seed = env_seed
        self.x = x
        self.g01 = g01
        self.g10 = g10
        pi = g01 / (g01 + g10)
        self.state = 1 if to_u01(derive_seed(env_seed, x, 0)) < pi else 0
        self.k = 1
        self.next_flip = tau + self._hold()

    def _hold(self):
        rate = self.g10 if self.state else self.g01
        u = to_u01(derive_seed(self.env_seed, self.x, self.k))
        return _expo_from(u, rate)

    def advance_to(self, t):
        while self.next_flip < t:
            self.state ^= 1
            self.k += 1
            self.next_flip += self._hold()

    def occupied_in(self, t0, t1):
        """Occupied time over [t0, t1], advancing the chain to t1.

        The chain must already be advanced to t0.
        """
        acc = 0.0
        cur = t0
        while self.next_flip < t1:
            if self.state:
                acc += self.next_flip - cur
            cur = self.next_flip
            self.state ^= 1
            self.k += 1
            self.next_flip += self._hold()
        if self.state:
            acc += t1 - cur
        return acc


def ct_walk_flip(g01, g10, alpha, beta, t_max, n_rep, master_seed):
    """Walk over sites flipping independently, vacant -> occupied at rate
    g01 and occupied -> vacant at g10, one fresh environment per replica.

    Site chains are built lazily on first visit in their stationary law,
    which is valid only because each replica owns its environment.
    Returns (pos, a_time, jumps).
    """
    ab = alpha + beta
    p_occ = alpha / ab
    p_vac = beta / ab
    pos = np.empty(n_rep, dtype=np.int64)
    a_time = np.empty(n_rep, dtype=np.float64)
    jumps = np.empty(n_rep, dtype=np.int64)
    for i in range(n_rep):
        es = derive_seed(master_seed, ENV, i)
        w = Xoshiro256pp(derive_seed(master_seed, WALK, i))
        sites = {}
        x = 0
        t = 0.0
        acc = 0.0
        nj = 0
        rec = _FlipSite(es, 0, 0.0, g01, g10)
        sites[0] = rec
        while True:
            dt = _expo_from(w.u01(), ab)
            tn = t + dt
            if tn > t_max:
                acc += rec.occupied_in(t, t_max)
                break
            acc += rec.occupied_in(t, tn)
            t = tn
            u = w.u01()
            x += 1 if u < (p_occ if rec.state else p_vac) else -1
            nj += 1
            rec = sites.get(x)
            if rec is None:
                rec = _FlipSite(es, x, t, g01, g10)
                sites[x] = rec
            else:
                rec.advance_to(t)
        pos[i] = x
        a_time[i] = acc
        jumps[i] = nj
    return pos, a_time, jumps


def ct_path_flip(g01, g10, alpha, beta, t_max, master_seed, replica=0):
    """Path-recorded twin of one ct_walk_flip batch replica."""
    ab = alpha + beta
    p_occ = alpha / ab
    p_vac = beta / ab
    es = derive_seed(master_seed, ENV, replica)
    w = Xoshiro256pp(derive_seed(master_seed, WALK, replica))
    sites = {}
    x = 0
    t = 0.0
    acc = 0.0
    rec = _FlipSite(es, 0, 0.0, g01, g10)
    sites[0] = rec
    times = []
    positions = []
    occs = []
    while True:
        dt = _expo_from(w.u01(), ab)
        tn = t + dt
        if tn > t_max:
            acc += rec.occupied_in(t, t_max)
            break
        acc += rec.occupied_in(t, tn)
        t = tn
        u = w.u01()
        x += 1 if u < (p_occ if rec.state else p_vac) else -1
        rec = sites.get(x)
        if rec is None:
            rec = _FlipSite(es, x, t, g01, g10)
            sites[x] = rec
        else:
            rec.advance_to(t)
        times.append(t)
        positions.append(x)
        occs.append(rec.state)
    return (np.array(times, dtype=np.float64),
            np.array(positions, dtype=np.int64),
            np.array(occs, dtype=np.uint8), acc)


def build_flip_trajectories(env_seed, x_lo, x_hi, g01, g10, t_max):
    """Materialize flip chains of sites x_lo..x_hi over [0, t_max].

    Returns (init, ptr, times): initial states, per-site index ranges
    into the flat flip-time array.  Site x_lo + j owns times[ptr[j] :
    ptr[j+1]], strictly increasing.  The draws are the same stateless
    hashes the lazy construction uses from time zero, so a chain built
    here equals the lazy chain of a replica whose first visit happens at
    time zero.
    """
    n = x_hi - x_lo + 1
    init = np.empty(n, dtype=np.uint8)
    ptr = np.zeros(n + 1, dtype=np.int64)
    all_times = []
    pi = g01 / (g01 + g10)
    for j in range(n):
        x = x_lo + j
        state = 1 if to_u01(derive_seed(env_seed, x, 0)) < pi else 0
        init[j] = state
        t = 0.0
        k = 1
        count = 0
        while True:
            rate = g10 if state else g01
            t += _expo_from(to_u01(derive_seed(env_seed, x, k)), rate)
            if t > t_max:
                break
            all_times.append(t)
            count += 1
            state ^= 1
            k += 1
        ptr[j + 1] = ptr[j] + count
    return init, ptr, np.array(all_times, dtype=np.float64)


def _bisect_left(times, lo, hi, t):
    """First index in [lo, hi) whose value is >= t, so the count of flip
    times strictly below t (the left-limit state index)."""
    while lo < hi:
        mid = (lo + hi) // 2
        if times[mid] < t:
            lo = mid + 1
        else:
            hi = mid
    return lo


def ct_walk_flip_shared(init, ptr, flip_times, x_lo, alpha, beta, t_max,
                        n_rep, master_seed, want_atime=True):
    """Independent walkers on ONE materialized flip environment.

    Every replica reads the same (init, ptr, flip_times) chains from
    build_flip_trajectories, so the environment is genuinely shared.
    Returns (pos, a_time, jumps, aborted); a replica is flagged aborted
    and stopped if its walker leaves the materialized site range.  With
    want_atime False the a_time entries stay zero and the occupied-time
    bookkeeping is skipped.
    """
    ab = alpha + beta
    p_occ = alpha / ab
    p_vac = beta / ab
    n_sites = len(init)
    x_hi = x_lo + n_sites - 1
    pos = np.empty(n_rep, dtype=np.int64)
    a_time = np.zeros(n_rep, dtype=np.float64)
    jumps = np.empty(n_rep, dtype=np.int64)
    aborted = np.zeros(n_rep, dtype=np.uint8)

    def occupied_in(j, t0, t1):
        i = _bisect_left(flip_times, ptr[j], ptr[j + 1], t0)
        s = int(init[j]) ^ ((i - ptr[j]) & 1)
        acc = 0.0
        cur = t0
        end = ptr[j + 1]
        while i < end and flip_times[i] < t1:
            if s:
                acc += flip_times[i] - cur
            cur = flip_times[i]
            s ^= 1
            i += 1
        if s:
            acc += t1 - cur
        return acc

    for r in range(n_rep):
        w = Xoshiro256pp(derive_seed(master_seed, WALK, r))
        x = 0
        t = 0.0
        acc = 0.0
        nj = 0
        while True:
            dt = _expo_from(w.u01(), ab)
            tn = t + dt
            if tn > t_max:
                if want_atime:
                    acc += occupied_in(x - x_lo, t, t_max)
                break
            if want_atime:
                acc += occupied_in(x - x_lo, t, tn)
            t = tn
            j = x - x_lo
            i = _bisect_left(flip_times, ptr[j], ptr[j + 1], t)
            occ = int(init[j]) ^ ((i - ptr[j]) & 1)
            u = w.u01()
            x += 1 if u < (p_occ if occ else p_vac) else -1
            nj += 1
            if x < x_lo or x > x_hi:
                aborted[r] = 1
                break
        pos[r] = x
        a_time[r] = acc
        jumps[r] = nj
    return pos, a_time, jumps, aborted


def shared_flip_position_hist(init, ptr, flip_times, x_lo, alpha, beta,
                              t_max, n_rep, master_seed):
    """Histogram of final walker positions on one shared flip environment.

    Same walk law and streams as ct_walk_flip_shared with want_atime
    False, but only position counts are kept, so memory stays flat in
    n_rep.  Returns (counts, aborted_count): counts[k] is the number of
    replicas finishing at position x_lo + k; aborted replicas stop at
    the range edge and are excluded from counts.
    """
    ab = alpha + beta
    p_occ = alpha / ab
    p_vac = beta / ab
    n_sites = len(init)
    x_hi = x_lo + n_sites - 1
    counts = np.zeros(n_sites, dtype=np.int64)
    aborted_count = 0
    for r in range(n_rep):
        w = Xoshiro256pp(derive_seed(master_seed, WALK, r))
        x = 0
        t = 0.0
        aborted = False
        while True:
            dt = _expo_from(w.u01(), ab)
            tn = t + dt
            if tn > t_max:
                break
            t = tn
            j = x - x_lo
            i = _bisect_left(flip_times, ptr[j], ptr[j + 1], t)
            occ = int(init[j]) ^ ((i - ptr[j]) & 1)
            u = w.u01()
            x += 1 if u < (p_occ if occ else p_vac) else -1
            if x < x_lo or x > x_hi:
                aborted = True
                break
        if aborted:
            aborted_count += 1
        else:
            counts[x - x_lo] += 1
    return counts, aborted_count


# ---------------------------------------------------------------------------
# stirred exclusion environment
# ---------------------------------------------------------------------------

class _Window:
    """Open window of exclusion cells [lo, hi) around the walker.

    Extension draws fresh Bernoulli(rho) cells from the environment
    stream in ascending site order, chunked by _CHUNK sites.  Trimming
    drops a window edge that has fallen more than 2 * _CHUNK beyond the
    required half-width back to half_width + _CHUNK, so an edge never
    sits closer than half_width to the walker and extension/trim cycles
    cannot thrash.
    """

    __slots__ = ("cells", "lo", "hi", "rho", "rng")

    def __init__(self, rho, rng, lo, hi):
        self.rho = rho
        self.rng = rng
        self.lo = lo
        self.hi = hi
        self.cells = [1 if rng.u01() < rho else 0 for _ in range(hi - lo)]

    def n_edges(self):
        return self.hi - self.lo - 1

    def ensure_span(self, x_lo, x_hi, half_width):
        """Keep [x_lo - half_width, x_hi + half_width] inside; returns
        True if the edge count changed."""
        changed = False
        while x_hi + half_width >= self.hi:
            self.cells.extend(1 if self.rng.u01() < self.rho else 0
                              for _ in range(_CHUNK))
            self.hi += _CHUNK
            changed = True
        while x_lo - half_width < self.lo:
            fresh = [1 if self.rng.u01() < self.rho else 0
                     for _ in range(_CHUNK)]
            self.cells[:0] = fresh
            self.lo -= _CHUNK
            changed = True
        lo_keep = x_lo - half_width - _CHUNK
        if self.lo < lo_keep - _CHUNK:
            del self.cells[: lo_keep - self.lo]
            self.lo = lo_keep
            changed = True
        hi_keep = x_hi + half_width + 1 + _CHUNK
        if self.hi > hi_keep + _CHUNK:
            del self.cells[hi_keep - self.hi:]
            self.hi = hi_keep
            changed = True
        return changed


def ct_walk_sse(rho, alpha, beta, t_max, n_rep, master_seed, torus_L=0,
                half_width=0, prune_pos=None):
    """Walk on the stirred exclusion environment.

    torus_L > 0 runs on a torus of that length (the walker's absolute
    displacement is returned; cells are read modulo torus_L).  torus_L
    = 0 runs on a sliding window of half-width half_width around the
    walker.  prune_pos, if given, stops a replica early once even a
    jump-count burst ten sigma above its mean could not return the
    walker to prune_pos by t_max; such replicas are flagged pruned and
    report their state at the stopping moment.

    Returns (pos, a_time, jumps, pruned).
    """
    ab = alpha + beta
    p_occ = alpha / ab
    p_vac = beta / ab
    do_prune = prune_pos is not None
    band = float(prune_pos) if do_prune else 0.0
    pos = np.empty(n_rep, dtype=np.int64)
    a_time = np.empty(n_rep, dtype=np.float64)
    jumps = np.empty(n_rep, dtype=np.int64)
    pruned = np.zeros(n_rep, dtype=np.uint8)
    for i in range(n_rep):
        erng = Xoshiro256pp(derive_seed(master_seed, ENV, i))
        w = Xoshiro256pp(derive_seed(master_seed, WALK, i))
        x = 0
        t = 0.0
        acc = 0.0
        nj = 0
        if torus_L > 0:
            cells = [1 if erng.u01() < rho else 0 for _ in range(torus_L)]
            n_edges = torus_L
            occ = cells[0]
            win = None
        else:
            win = _Window(rho, erng, -(half_width + _CHUNK),
                          half_width + _CHUNK + 1)
            n_edges = win.n_edges()
            occ = win.cells[-win.lo]
        next_env = _expo_from(erng.u01(), float(n_edges))
        next_walk = _expo_from(w.u01(), ab)
        while True:
            env_first = next_env < next_walk
            t_next = next_env if env_first else next_walk
            if t_next > t_max:
                if occ:
                    acc += t_max - t
                break
            if occ:
                acc += t_next - t
            t = t_next
            if env_first:
                if torus_L > 0:
                    e = erng.randbelow(torus_L)
                    f = e + 1 if e + 1 < torus_L else 0
                    cells[e], cells[f] = cells[f], cells[e]
                    xi = x % torus_L
                    if e == xi or f == xi:
                        occ = cells[xi]
                else:
                    e = win.lo + erng.randbelow(n_edges)
                    c = win.cells
                    j = e - win.lo
                    c[j], c[j + 1] = c[j + 1], c[j]
                    if e == x or e + 1 == x:
                        occ = c[x - win.lo]
                next_env = t + _expo_from(erng.u01(), float(n_edges))
            else:
                u = w.u01()
                x += 1 if u < (p_occ if occ else p_vac) else -1
                nj += 1
                if torus_L > 0:
                    occ = cells[x % torus_L]
                else:
                    if win.ensure_span(x, x, half_width):
                        n_edges = win.n_edges()
                        next_env = t + _expo_from(erng.u01(), float(n_edges))
                    occ = win.cells[x - win.lo]
                if do_prune:
                    mean_left = ab * (t_max - t)
                    if x > band + mean_left + 10.0 * math.sqrt(mean_left) + 20.0:
                        pruned[i] = 1
                        break
                next_walk = t + _expo_from(w.u01(), ab)
        pos[i] = x
        a_time[i] = acc
        jumps[i] = nj
    return pos, a_time, jumps, pruned


def ct_path_sse(rho, alpha, beta, t_max, master_seed, replica=0, torus_L=0,
                half_width=0):
    """Path-recorded twin of one ct_walk_sse batch replica (no pruning).

    Returns (times, positions, occs, a_time) with one row per walker
    jump; occs holds the occupancy of the site just jumped to.
    """
    ab = alpha + beta
    p_occ = alpha / ab
    p_vac = beta / ab
    erng = Xoshiro256pp(derive_seed(master_seed, ENV, replica))
    w = Xoshiro256pp(derive_seed(master_seed, WALK, replica))
    x = 0
    t = 0.0
    acc = 0.0
    if torus_L > 0:
        cells = [1 if erng.u01() < rho else 0 for _ in range(torus_L)]
        n_edges = torus_L
        occ = cells[0]
        win = None
    else:
        win = _Window(rho, erng, -(half_width + _CHUNK),
                      half_width + _CHUNK + 1)
        n_edges = win.n_edges()
        occ = win.cells[-win.lo]
    next_env = _expo_from(erng.u01(), float(n_edges))
    next_walk = _expo_from(w.u01(), ab)
    times = []
    positions = []
    occs = []
    while True:
        env_first = next_env < next_walk
        t_next = next_env if env_first else next_walk
        if t_next > t_max:
            if occ:
                acc += t_max - t
            break
        if occ:
            acc += t_next - t
        t = t_next
        if env_first:
            if torus_L > 0:
                e = erng.randbelow(torus_L)
                f = e + 1 if e + 1 < torus_L else 0
                cells[e], cells[f] = cells[f], cells[e]
                xi = x % torus_L
                if e == xi or f == xi:
                    occ = cells[xi]
            else:
                e = win.lo + erng.randbelow(n_edges)
                c = win.cells
                j = e - win.lo
                c[j], c[j + 1] = c[j + 1], c[j]
                if e == x or e + 1 == x:
                    occ = c[x - win.lo]
            next_env = t + _expo_from(erng.u01(), float(n_edges))
        else:
            u = w.u01()
            x += 1 if u < (p_occ if occ else p_vac) else -1
            if torus_L > 0:
                occ = cells[x % torus_L]
            else:
                if win.ensure_span(x, x, half_width):
                    n_edges = win.n_edges()
                    next_env = t + _expo_from(erng.u01(), float(n_edges))
                occ = win.cells[x - win.lo]
            next_walk = t + _expo_from(w.u01(), ab)
            times.append(t)
            positions.append(x)
            occs.append(occ)
    return (np.array(times, dtype=np.float64),
            np.array(positions, dtype=np.int64),
            np.array(occs, dtype=np.uint8), acc)


def ct_coupled_sse(rho, alpha, beta, t_max, n_pairs, master_seed, gap,
                   torus_L=0, half_width=0):
    """Two walkers coupled through one exclusion environment per pair.

    Both walkers share the jump clock and the same uniform at each jump,
    walker A starting at 0 and walker B at gap.  gap must be even and
    nonnegative: a shared jump changes the gap by 0 or +-2, and a zero
    gap forces identical moves, so A <= B holds forever.  Returns
    (pos_a, pos_b, violations) where violations counts events after
    which A sat strictly right of B (must stay zero).
    """
    if gap < 0 or gap % 2 != 0:
        raise ValueError("gap must be even and nonnegative")
    ab = alpha + beta
    p_occ = alpha / ab
    p_vac = beta / ab
    pos_a = np.empty(n_pairs, dtype=np.int64)
    pos_b = np.empty(n_pairs, dtype=np.int64)
    violations = np.zeros(n_pairs, dtype=np.int64)
    for i in range(n_pairs):
        erng = Xoshiro256pp(derive_seed(master_seed, ENV, i))
        w = Xoshiro256pp(derive_seed(master_seed, WALK, i))
        xa = 0
        xb = gap
        t = 0.0
        if torus_L > 0:
            cells = [1 if erng.u01() < rho else 0 for _ in range(torus_L)]
            n_edges = torus_L
            win = None
        else:
            win = _Window(rho, erng, -(half_width + _CHUNK),
                          gap + half_width + _CHUNK + 1)
            n_edges = win.n_edges()
        next_env = _expo_from(erng.u01(), float(n_edges))
        next_walk = _expo_from(w.u01(), ab)
        while True:
            env_first = next_env < next_walk
            t_next = next_env if env_first else next_walk
            if t_next > t_max:
                break
            t = t_next
            if env_first:
                if torus_L > 0:
                    e = erng.randbelow(torus_L)
                    f = e + 1 if e + 1 < torus_L else 0
                    cells[e], cells[f] = cells[f], cells[e]
                else:
                    e = win.lo + erng.randbelow(n_edges)
                    c = win.cells
                    j = e - win.lo
                    c[j], c[j + 1] = c[j + 1], c[j]
                next_env = t + _expo_from(erng.u01(), float(n_edges))
            else:
                if torus_L > 0:
                    oa = cells[xa % torus_L]
                    ob = cells[xb % torus_L]
                else:
                    oa = win.cells[xa - win.lo]
                    ob = win.cells[xb - win.lo]
                u = w.u01()
                xa += 1 if u < (p_occ if oa else p_vac) else -1
                xb += 1 if u < (p_occ if ob else p_vac) else -1
                if xa > xb:
                    violations[i] += 1
                if torus_L == 0:
                    span_lo = xa if xa < xb else xb
                    span_hi = xb if xb > xa else xa
                    if win.ensure_span(span_lo, span_hi, half_width):
                        n_edges = win.n_edges()
                        next_env = t + _expo_from(erng.u01(), float(n_edges))
                next_walk = t + _expo_from(w.u01(), ab)
        pos_a[i] = xa
        pos_b[i] = xb
    return pos_a, pos_b, violations


def sse_blocks_survival(rho, starts, lengths, states, t_max, n_rep,
                        master_seed, half_width):
    """Do site blocks hold their required states throughout stirring?

    Block b is the interval [starts[b], starts[b] + lengths[b]) and must
    show state states[b] (0 vacant, 1 occupied) at every time in
    [0, t_max].  Each replica draws a fresh Bernoulli(rho) window (all
    cells drawn before the time-zero check, so the stream position is
    data-independent), then runs the stirring dynamics; the replica dies
    the moment any block cell shows the wrong state.  The window is
    fixed at [min(starts) - half_width, max(block end) + half_width);
    nothing moves it, so it never extends.  Returns alive flags (uint8).
    """
    starts = [int(s) for s in starts]
    lengths = [int(l) for l in lengths]
    states = [int(s) for s in states]
    lo = min(starts) - half_width
    hi = max(s + l for s, l in zip(starts, lengths)) + half_width
    n_cells = hi - lo
    n_edges = n_cells - 1
    req = [-1] * n_cells
    for s, l, st in zip(starts, lengths, states):
        for x in range(s, s + l):
            req[x - lo] = st
    alive = np.zeros(n_rep, dtype=np.uint8)
    for i in range(n_rep):
        erng = Xoshiro256pp(derive_seed(master_seed, ENV, i))
        cells = [1 if erng.u01() < rho else 0 for _ in range(n_cells)]
        dead = False
        for j in range(n_cells):
            if req[j] >= 0 and cells[j] != req[j]:
                dead = True
                break
        if dead:
            continue
        t = 0.0
        while True:
            t += _expo_from(erng.u01(), float(n_edges))
            if t > t_max:
                alive[i] = 1
                break
            e = erng.randbelow(n_edges)
            cells[e], cells[e + 1] = cells[e + 1], cells[e]
            if req[e] >= 0 and cells[e] != req[e]:
                break
            if req[e + 1] >= 0 and cells[e + 1] != req[e + 1]:
                break
    return alive


def srw_range(t_max, n_rep, master_seed):
    """Range (number of distinct visited sites) of a rate-1 symmetric
    walk over [0, t_max], one value per replica."""
    ranges = np.empty(n_rep, dtype=np.int64)
    for i in range(n_rep):
        w = Xoshiro256pp(derive_seed(master_seed, WALK, i))
        x = 0
        mn = 0
        mx = 0
        t = 0.0
        while True:
            t += _expo_from(w.u01(), 1.0)
            if t > t_max:
                break
            x += 1 if w.u01() < 0.5 else -1
            if x < mn:
                mn = x
            elif x > mx:
                mx = x
        ranges[i] = mx - mn + 1
    return ranges


# ---------------------------------------------------------------------------
# discrete-time lane (parallel-update exclusion, bit-packed)
# ---------------------------------------------------------------------------

def _parallel_sweep(cfg, L, parity, rng):
    """One parallel update of a bit-packed exclusion ring of length L (a
    multiple of 128): each edge of the chosen parity swaps with
    probability 1/2.

    parity 0 swaps edges (0,1),(2,3),...; parity 1 swaps (1,2),(3,4),
    ...,(L-1,0).  Bit x of cfg is the cell at site x.  Random bits come
    as L/64 next_u64 words (ascending word order) assembled into one
    selector integer; the low bit of each even-position pair selects it.
    The compiled lane draws the same words for its uint64 array, so the
    configurations match bit for bit.
    """
    r = 0
    for wi in range(L // 64):
        r |= rng.next_u64() << (64 * wi)
    full = (1 << L) - 1
    even = full // 3
    if parity == 0:
        d = r & even
        diff = (cfg ^ (cfg >> 1)) & d
        return cfg ^ (diff | (diff << 1))
    y = (cfg >> 1) | ((cfg & 1) << (L - 1))
    d = r & even
    diff = (y ^ (y >> 1)) & d
    y ^= diff | (diff << 1)
    return ((y << 1) | (y >> (L - 1))) & full


def dt_triple(rho, p, L, steps, n_rep, master_seed):
    """Paired discrete-time speed experiment: three walkers per replica.

    All three share the per-step direction uniform.  The static walker
    reads the initial Bernoulli(rho) ring frozen forever; the dynamic
    walker reads the same ring evolving by parallel stirring (each step
    the walker moves first, then every edge of one parity class swaps
    with probability 1/2); the averaged walker reads a fresh
    Bernoulli(rho) cell every step.  On occupied cells a walker steps
    right with probability p, on vacant cells with probability 1 - p.

    The parity class updated each step is a fresh fair coin (one word
    from the update stream, taken before the sweep words).  A
    deterministic even/odd alternation would phase-lock the walker to
    the sweep: with even edges first, a right-moving walker always sits
    on the right end of the edge about to be stirred, so the particle
    it just rode follows it with probability 1/2 at every step.  That
    ratchet drags the dynamic speed above the averaged-environment
    speed and breaks the reflection symmetry that forces zero speed at
    rho = 1/2; the random parity restores both.

    L must be a multiple of 128 so both sweep parities align to whole
    64-bit words.  Returns (disp_static, disp_dyn, disp_avg).
    """
    if L % 128 != 0:
        raise ValueError("L must be a multiple of 128")
    q = 1.0 - p
    disp_s = np.empty(n_rep, dtype=np.int64)
    disp_d = np.empty(n_rep, dtype=np.int64)
    disp_a = np.empty(n_rep, dtype=np.int64)
    for i in range(n_rep):
        erng = Xoshiro256pp(derive_seed(master_seed, ENV, i))
        w = Xoshiro256pp(derive_seed(master_seed, WALK, i))
        urng = Xoshiro256pp(derive_seed(master_seed, ENVUPD, i))
        cfg0 = 0
        for s in range(L):
            if erng.u01() < rho:
                cfg0 |= 1 << s
        cfg = cfg0
        xs = 0
        xd = 0
        xa = 0
        for n in range(steps):
            cell_a = 1 if erng.u01() < rho else 0
            u = w.u01()
            cs = (cfg0 >> (xs % L)) & 1
            xs += 1 if u < (p if cs else q) else -1
            cd = (cfg >> (xd % L)) & 1
            xd += 1 if u < (p if cd else q) else -1
            xa += 1 if u < (p if cell_a else q) else -1
            parity = urng.next_u64() & 1
            cfg = _parallel_sweep(cfg, L, parity, urng)
        disp_s[i] = xs
        disp_d[i] = xd
        disp_a[i] = xa
    return disp_s, disp_d, disp_a
