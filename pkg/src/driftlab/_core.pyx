"""Compiled simulation kernels.

Mirrors ``driftlab._core_py`` word for word: both lanes draw from the same
xoshiro256++ streams in the same order, so equal seeds give bit-identical
histories.  Keep the two files in sync; the cross-lane equality tests fail
on any divergence.
"""

from libc.math cimport log, sqrt
from libc.stdint cimport int8_t, int64_t, uint8_t, uint64_t

import numpy as np

cdef extern from *:
    """
    #include <stdint.h>
    static inline uint64_t mulshift64(uint64_t a, uint64_t n) {
        return (uint64_t)(((__uint128_t)a * n) >> 64);
    }
    """
    uint64_t mulshift64(uint64_t a, uint64_t n) nogil


cdef double U01_SCALE = 2.0 ** -53
cdef uint64_t GOLDEN = <uint64_t>0x9E3779B97F4A7C15
cdef uint64_t DERIVE_SALT = <uint64_t>0xD1B54A32D192ED03

ENV = 1
WALK = 2
ENVUPD = 3

cdef int64_t T_ENV = 1
cdef int64_t T_WALK = 2
cdef int64_t T_ENVUPD = 3

cdef Py_ssize_t CHUNK = 64


# ---------------------------------------------------------------------------
# random streams
# ---------------------------------------------------------------------------

cdef struct Rng:
    uint64_t s0, s1, s2, s3


cdef inline uint64_t _mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline uint64_t _derive1(uint64_t master, uint64_t i0) noexcept nogil:
    cdef uint64_t z = _mix64(master ^ DERIVE_SALT)
    return _mix64(z ^ (i0 * GOLDEN))


cdef inline uint64_t _derive2(uint64_t master, uint64_t i0, uint64_t i1) noexcept nogil:
    cdef uint64_t z = _mix64(master ^ DERIVE_SALT)
    z = _mix64(z ^ (i0 * GOLDEN))
    return _mix64(z ^ (i1 * GOLDEN))


cdef inline uint64_t _derive3(uint64_t master, uint64_t i0, uint64_t i1, uint64_t i2) noexcept nogil:
    cdef uint64_t z = _mix64(master ^ DERIVE_SALT)
    z = _mix64(z ^ (i0 * GOLDEN))
    z = _mix64(z ^ (i1 * GOLDEN))
    return _mix64(z ^ (i2 * GOLDEN))


cdef inline void _rng_init(Rng* r, uint64_t seed) noexcept nogil:
    cdef uint64_t state = seed
    state = state + GOLDEN
    r.s0 = _mix64(state)
    state = state + GOLDEN
    r.s1 = _mix64(state)
    state = state + GOLDEN
    r.s2 = _mix64(state)
    state = state + GOLDEN
    r.s3 = _mix64(state)


cdef inline uint64_t _rng_next(Rng* r) noexcept nogil:
    cdef uint64_t x = r.s0 + r.s3
    cdef uint64_t result = ((x << 23) | (x >> 41)) + r.s0
    cdef uint64_t t = r.s1 << 17
    r.s2 ^= r.s0
    r.s3 ^= r.s1
    r.s1 ^= r.s2
    r.s0 ^= r.s3
    r.s2 ^= t
    r.s3 = (r.s3 << 45) | (r.s3 >> 19)
    return result


cdef inline double _u01(Rng* r) noexcept nogil:
    return <double>(_rng_next(r) >> 11) * U01_SCALE


cdef inline double _expo(Rng* r, double rate) noexcept nogil:
    return -log(1.0 - _u01(r)) / rate


cdef inline uint64_t _randbelow(Rng* r, uint64_t n) noexcept nogil:
    return mulshift64(_rng_next(r), n)


cdef inline double _site_uniform(uint64_t seed, int64_t site) noexcept nogil:
    return <double>(_derive1(seed, <uint64_t>site) >> 11) * U01_SCALE


cdef inline double _hash_u01(uint64_t h) noexcept nogil:
    return <double>(h >> 11) * U01_SCALE


# ---------------------------------------------------------------------------
# python-visible shims for the cross-lane equality tests
# ---------------------------------------------------------------------------

def rng_u64_sequence(seed, n):
    cdef Rng r
    _rng_init(&r, <uint64_t>seed)
    cdef int64_t i
    out = np.empty(n, dtype=np.uint64)
    cdef uint64_t[::1] view = out
    for i in range(n):
        view[i] = _rng_next(&r)
    return out


def rng_u01_sequence(seed, n):
    cdef Rng r
    _rng_init(&r, <uint64_t>seed)
    cdef int64_t i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] view = out
    for i in range(n):
        view[i] = _u01(&r)
    return out


def derive_seed(master, ids):
    cdef uint64_t z = _mix64(<uint64_t>master ^ DERIVE_SALT)
    for i in ids:
        z = _mix64(z ^ ((<uint64_t>(i & 0xFFFFFFFFFFFFFFFF)) * GOLDEN))
    return z


def site_uniform(seed, site):
    return _site_uniform(<uint64_t>seed, <int64_t>site)


# ---------------------------------------------------------------------------
# frozen Bernoulli environment
# ---------------------------------------------------------------------------

def ct_walk_frozen(double rho, double alpha, double beta, double t_max,
                   Py_ssize_t n_rep, master_seed, env_seed=-1):
    """Continuous-time walk on hash-frozen Bernoulli(rho) cells.

    env_seed >= 0 pins one shared environment for every replica; -1
    derives a fresh environment per replica.  Returns (pos, a_time,
    jumps): final positions, occupied-site occupation times and jump
    counts.
    """
    cdef uint64_t ms = <uint64_t>master_seed
    cdef bint pinned = env_seed >= 0
    cdef uint64_t es_pin = <uint64_t>env_seed if pinned else 0
    cdef double ab = alpha + beta
    cdef double p_occ = alpha / ab
    cdef double p_vac = beta / ab
    pos_arr = np.empty(n_rep, dtype=np.int64)
    at_arr = np.empty(n_rep, dtype=np.float64)
    jm_arr = np.empty(n_rep, dtype=np.int64)
    cdef int64_t[::1] pos = pos_arr
    cdef double[::1] a_time = at_arr
    cdef int64_t[::1] jumps = jm_arr
    cdef Py_ssize_t i
    cdef uint64_t es
    cdef Rng w
    cdef int64_t x, nj
    cdef double t, acc, dt, tn, u
    cdef bint occ
    for i in range(n_rep):
        es = es_pin if pinned else _derive2(ms, <uint64_t>T_ENV, <uint64_t>i)
        _rng_init(&w, _derive2(ms, <uint64_t>T_WALK, <uint64_t>i))
        x = 0
        t = 0.0
        acc = 0.0
        nj = 0
        occ = _site_uniform(es, x) < rho
        while True:
            dt = _expo(&w, ab)
            tn = t + dt
            if tn > t_max:
                if occ:
                    acc += t_max - t
                break
            if occ:
                acc += dt
            t = tn
            u = _u01(&w)
            x += 1 if u < (p_occ if occ else p_vac) else -1
            nj += 1
            occ = _site_uniform(es, x) < rho
        pos[i] = x
        a_time[i] = acc
        jumps[i] = nj
    return pos_arr, at_arr, jm_arr


def ct_path_frozen(double rho, double alpha, double beta, double t_max,
                   master_seed, replica=0, env_seed=-1):
    """Path-recorded twin of one ct_walk_frozen batch replica.

    Returns (times, positions, occs, a_time) with one row per jump; occs
    holds the occupancy of the site just jumped to.
    """
    cdef uint64_t ms = <uint64_t>master_seed
    cdef double ab = alpha + beta
    cdef double p_occ = alpha / ab
    cdef double p_vac = beta / ab
    cdef uint64_t es
    if env_seed >= 0:
        es = <uint64_t>env_seed
    else:
        es = _derive2(ms, <uint64_t>T_ENV, <uint64_t>(<int64_t>replica))
    cdef Rng w
    _rng_init(&w, _derive2(ms, <uint64_t>T_WALK, <uint64_t>(<int64_t>replica)))
    cdef int64_t x = 0
    cdef double t = 0.0
    cdef double acc = 0.0
    cdef double dt, tn, u
    cdef bint occ = _site_uniform(es, x) < rho
    times = []
    positions = []
    occs = []
    while True:
        dt = _expo(&w, ab)
        tn = t + dt
        if tn > t_max:
            if occ:
                acc += t_max - t
            break
        if occ:
            acc += dt
        t = tn
        u = _u01(&w)
        x += 1 if u < (p_occ if occ else p_vac) else -1
        occ = _site_uniform(es, x) < rho
        times.append(t)
        positions.append(x)
        occs.append(1 if occ else 0)
    return (np.array(times, dtype=np.float64),
            np.array(positions, dtype=np.int64),
            np.array(occs, dtype=np.uint8), acc)


# ---------------------------------------------------------------------------
# independently flipping sites
# ---------------------------------------------------------------------------

cdef inline double _flip_hold(uint64_t es, int64_t x, int64_t k,
                              uint8_t state, double g01, double g10) noexcept nogil:
    cdef double rate = g10 if state else g01
    cdef double u = _hash_u01(_derive2(es, <uint64_t>x, <uint64_t>k))
    return -log(1.0 - u) / rate


cdef inline void _flip_make(uint8_t[::1] st, int64_t[::1] kk, double[::1] nf,
                            Py_ssize_t j, uint64_t es, int64_t x, double tau,
                            double g01, double g10) noexcept nogil:
    cdef double pi = g01 / (g01 + g10)
    cdef uint8_t state = 1 if _hash_u01(_derive2(es, <uint64_t>x, 0)) < pi else 0
    st[j] = state
    kk[j] = 1
    nf[j] = tau + _flip_hold(es, x, 1, state, g01, g10)


cdef inline void _flip_advance(uint8_t[::1] st, int64_t[::1] kk, double[::1] nf,
                               Py_ssize_t j, uint64_t es, int64_t x, double t,
                               double g01, double g10) noexcept nogil:
    while nf[j] < t:
        st[j] ^= 1
        kk[j] += 1
        nf[j] += _flip_hold(es, x, kk[j], st[j], g01, g10)


cdef inline double _flip_occupied_in(uint8_t[::1] st, int64_t[::1] kk,
                                     double[::1] nf, Py_ssize_t j, uint64_t es,
                                     int64_t x, double t0, double t1,
                                     double g01, double g10) noexcept nogil:
    cdef double acc = 0.0
    cdef double cur = t0
    while nf[j] < t1:
        if st[j]:
            acc += nf[j] - cur
        cur = nf[j]
        st[j] ^= 1
        kk[j] += 1
        nf[j] += _flip_hold(es, x, kk[j], st[j], g01, g10)
    if st[j]:
        acc += t1 - cur
    return acc


def ct_walk_flip(double g01, double g10, double alpha, double beta,
                 double t_max, Py_ssize_t n_rep, master_seed):
    """Walk over sites flipping independently, vacant -> occupied at rate
    g01 and occupied -> vacant at g10, one fresh environment per replica.

    Site chains are built lazily on first visit in their stationary law,
    which is valid only because each replica owns its environment.
    Returns (pos, a_time, jumps).
    """
    cdef uint64_t ms = <uint64_t>master_seed
    cdef double ab = alpha + beta
    cdef double p_occ = alpha / ab
    cdef double p_vac = beta / ab
    pos_arr = np.empty(n_rep, dtype=np.int64)
    at_arr = np.empty(n_rep, dtype=np.float64)
    jm_arr = np.empty(n_rep, dtype=np.int64)
    cdef int64_t[::1] pos = pos_arr
    cdef double[::1] a_time = at_arr
    cdef int64_t[::1] jumps = jm_arr

    cdef Py_ssize_t cap = 512
    cdef int64_t a_lo = -256
    st_arr = np.empty(cap, dtype=np.uint8)
    kk_arr = np.empty(cap, dtype=np.int64)
    nf_arr = np.empty(cap, dtype=np.float64)
    cdef uint8_t[::1] st = st_arr
    cdef int64_t[::1] kk = kk_arr
    cdef double[::1] nf = nf_arr

    cdef Py_ssize_t i, j, d, src_lo, src_hi
    cdef uint64_t es
    cdef Rng w
    cdef int64_t x, nj, v_lo, v_hi, new_a_lo
    cdef double t, acc, dt, tn, u
    for i in range(n_rep):
        es = _derive2(ms, <uint64_t>T_ENV, <uint64_t>i)
        _rng_init(&w, _derive2(ms, <uint64_t>T_WALK, <uint64_t>i))
        x = 0
        t = 0.0
        acc = 0.0
        nj = 0
        v_lo = 0
        v_hi = 0
        j = <Py_ssize_t>(0 - a_lo)
        _flip_make(st, kk, nf, j, es, 0, 0.0, g01, g10)
        while True:
            dt = _expo(&w, ab)
            tn = t + dt
            if tn > t_max:
                acc += _flip_occupied_in(st, kk, nf, j, es, x, t, t_max,
                                         g01, g10)
                break
            acc += _flip_occupied_in(st, kk, nf, j, es, x, t, tn, g01, g10)
            t = tn
            u = _u01(&w)
            x += 1 if u < (p_occ if st[j] else p_vac) else -1
            nj += 1
            if x < v_lo or x > v_hi:
                if x - a_lo < 0 or x - a_lo >= <int64_t>cap:
                    new_a_lo = a_lo - <int64_t>(cap // 2)
                    new_st = np.empty(cap * 2, dtype=np.uint8)
                    new_kk = np.empty(cap * 2, dtype=np.int64)
                    new_nf = np.empty(cap * 2, dtype=np.float64)
                    d = <Py_ssize_t>(a_lo - new_a_lo)
                    src_lo = <Py_ssize_t>(v_lo - a_lo)
                    src_hi = <Py_ssize_t>(v_hi - a_lo) + 1
                    new_st[src_lo + d:src_hi + d] = st_arr[src_lo:src_hi]
                    new_kk[src_lo + d:src_hi + d] = kk_arr[src_lo:src_hi]
                    new_nf[src_lo + d:src_hi + d] = nf_arr[src_lo:src_hi]
                    st_arr, kk_arr, nf_arr = new_st, new_kk, new_nf
                    st = st_arr
                    kk = kk_arr
                    nf = nf_arr
                    cap = cap * 2
                    a_lo = new_a_lo
                j = <Py_ssize_t>(x - a_lo)
                _flip_make(st, kk, nf, j, es, x, t, g01, g10)
                if x < v_lo:
                    v_lo = x
                else:
                    v_hi = x
            else:
                j = <Py_ssize_t>(x - a_lo)
                _flip_advance(st, kk, nf, j, es, x, t, g01, g10)
        pos[i] = x
        a_time[i] = acc
        jumps[i] = nj
    return pos_arr, at_arr, jm_arr


def ct_path_flip(double g01, double g10, double alpha, double beta,
                 double t_max, master_seed, replica=0):
    """Path-recorded twin of one ct_walk_flip batch replica."""
    cdef uint64_t ms = <uint64_t>master_seed
    cdef double ab = alpha + beta
    cdef double p_occ = alpha / ab
    cdef double p_vac = beta / ab
    cdef uint64_t es = _derive2(ms, <uint64_t>T_ENV,
                                <uint64_t>(<int64_t>replica))
    cdef Rng w
    _rng_init(&w, _derive2(ms, <uint64_t>T_WALK, <uint64_t>(<int64_t>replica)))

    cdef Py_ssize_t cap = 512
    cdef int64_t a_lo = -256
    st_arr = np.empty(cap, dtype=np.uint8)
    kk_arr = np.empty(cap, dtype=np.int64)
    nf_arr = np.empty(cap, dtype=np.float64)
    cdef uint8_t[::1] st = st_arr
    cdef int64_t[::1] kk = kk_arr
    cdef double[::1] nf = nf_arr

    cdef Py_ssize_t j, d, src_lo, src_hi
    cdef int64_t x = 0
    cdef int64_t v_lo = 0
    cdef int64_t v_hi = 0
    cdef int64_t new_a_lo
    cdef double t = 0.0
    cdef double acc = 0.0
    cdef double dt, tn, u
    j = <Py_ssize_t>(0 - a_lo)
    _flip_make(st, kk, nf, j, es, 0, 0.0, g01, g10)
    times = []
    positions = []
    occs = []
    while True:
        dt = _expo(&w, ab)
        tn = t + dt
        if tn > t_max:
            acc += _flip_occupied_in(st, kk, nf, j, es, x, t, t_max, g01, g10)
            break
        acc += _flip_occupied_in(st, kk, nf, j, es, x, t, tn, g01, g10)
        t = tn
        u = _u01(&w)
        x += 1 if u < (p_occ if st[j] else p_vac) else -1
        if x < v_lo or x > v_hi:
            if x - a_lo < 0 or x - a_lo >= <int64_t>cap:
                new_a_lo = a_lo - <int64_t>(cap // 2)
                new_st = np.empty(cap * 2, dtype=np.uint8)
                new_kk = np.empty(cap * 2, dtype=np.int64)
                new_nf = np.empty(cap * 2, dtype=np.float64)
                d = <Py_ssize_t>(a_lo - new_a_lo)
                src_lo = <Py_ssize_t>(v_lo - a_lo)
                src_hi = <Py_ssize_t>(v_hi - a_lo) + 1
                new_st[src_lo + d:src_hi + d] = st_arr[src_lo:src_hi]
                new_kk[src_lo + d:src_hi + d] = kk_arr[src_lo:src_hi]
                new_nf[src_lo + d:src_hi + d] = nf_arr[src_lo:src_hi]
                st_arr, kk_arr, nf_arr = new_st, new_kk, new_nf
                st = st_arr
                kk = kk_arr
                nf = nf_arr
                cap = cap * 2
                a_lo = new_a_lo
            j = <Py_ssize_t>(x - a_lo)
            _flip_make(st, kk, nf, j, es, x, t, g01, g10)
            if x < v_lo:
                v_lo = x
            else:
                v_hi = x
        else:
            j = <Py_ssize_t>(x - a_lo)
            _flip_advance(st, kk, nf, j, es, x, t, g01, g10)
        times.append(t)
        positions.append(x)
        occs.append(st[j])
    return (np.array(times, dtype=np.float64),
            np.array(positions, dtype=np.int64),
            np.array(occs, dtype=np.uint8), acc)


def build_flip_trajectories(env_seed, x_lo, x_hi, double g01, double g10,
                            double t_max):
    """Materialize flip chains of sites x_lo..x_hi over [0, t_max].

    Returns (init, ptr, times): initial states, per-site index ranges
    into the flat flip-time array.  Site x_lo + j owns times[ptr[j] :
    ptr[j+1]], strictly increasing.  The draws are the same stateless
    hashes the lazy construction uses from time zero, so a chain built
    here equals the lazy chain of a replica whose first visit happens at
    time zero.
    """
    cdef uint64_t es = <uint64_t>env_seed
    cdef int64_t lo = <int64_t>x_lo
    cdef int64_t hi = <int64_t>x_hi
    cdef Py_ssize_t n = <Py_ssize_t>(hi - lo + 1)
    init_arr = np.empty(n, dtype=np.uint8)
    ptr_arr = np.zeros(n + 1, dtype=np.int64)
    cdef uint8_t[::1] init = init_arr
    cdef int64_t[::1] ptr = ptr_arr
    cdef double pi = g01 / (g01 + g10)
    cdef Py_ssize_t tcap = 1024
    times_arr = np.empty(tcap, dtype=np.float64)
    cdef double[::1] times = times_arr
    cdef Py_ssize_t total = 0
    cdef Py_ssize_t j, count
    cdef int64_t x, k
    cdef uint8_t state
    cdef double t, rate, u
    for j in range(n):
        x = lo + <int64_t>j
        state = 1 if _hash_u01(_derive2(es, <uint64_t>x, 0)) < pi else 0
        init[j] = state
        t = 0.0
        k = 1
        count = 0
        while True:
            rate = g10 if state else g01
            u = _hash_u01(_derive2(es, <uint64_t>x, <uint64_t>k))
            t += -log(1.0 - u) / rate
            if t > t_max:
                break
            if total == tcap:
                new_times = np.empty(tcap * 2, dtype=np.float64)
                new_times[:tcap] = times_arr
                times_arr = new_times
                times = times_arr
                tcap = tcap * 2
            times[total] = t
            total += 1
            count += 1
            state ^= 1
            k += 1
        ptr[j + 1] = ptr[j] + <int64_t>count
    return init_arr, ptr_arr, times_arr[:total].copy()


cdef inline int64_t _bisect_left(double[::1] times, int64_t lo, int64_t hi,
                                 double t) noexcept nogil:
    """First index in [lo, hi) whose value is >= t, so the count of flip
    times strictly below t (the left-limit state index)."""
    cdef int64_t mid
    while lo < hi:
        mid = (lo + hi) // 2
        if times[mid] < t:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline double _sched_occupied_in(uint8_t[::1] init, int64_t[::1] ptr,
                                      double[::1] ft, Py_ssize_t j,
                                      double t0, double t1) noexcept nogil:
    cdef int64_t i = _bisect_left(ft, ptr[j], ptr[j + 1], t0)
    cdef int64_t s = (<int64_t>init[j]) ^ ((i - ptr[j]) & 1)
    cdef double acc = 0.0
    cdef double cur = t0
    cdef int64_t end = ptr[j + 1]
    while i < end and ft[i] < t1:
        if s:
            acc += ft[i] - cur
        cur = ft[i]
        s ^= 1
        i += 1
    if s:
        acc += t1 - cur
    return acc


def ct_walk_flip_shared(init, ptr, flip_times, x_lo, double alpha,
                        double beta, double t_max, Py_ssize_t n_rep,
                        master_seed, want_atime=True):
    """Independent walkers on ONE materialized flip environment.

    Every replica reads the same (init, ptr, flip_times) chains from
    build_flip_trajectories, so the environment is genuinely shared.
    Returns (pos, a_time, jumps, aborted); a replica is flagged aborted
    and stopped if its walker leaves the materialized site range.  With
    want_atime False the a_time entries stay zero and the occupied-time
    bookkeeping is skipped.
    """
    cdef uint8_t[::1] init_v = np.ascontiguousarray(init, dtype=np.uint8)
    cdef int64_t[::1] ptr_v = np.ascontiguousarray(ptr, dtype=np.int64)
    cdef double[::1] ft = np.ascontiguousarray(flip_times, dtype=np.float64)
    cdef uint64_t ms = <uint64_t>master_seed
    cdef bint watime = bool(want_atime)
    cdef double ab = alpha + beta
    cdef double p_occ = alpha / ab
    cdef double p_vac = beta / ab
    cdef int64_t lo = <int64_t>x_lo
    cdef Py_ssize_t n_sites = init_v.shape[0]
    cdef int64_t hi = lo + <int64_t>n_sites - 1
    pos_arr = np.empty(n_rep, dtype=np.int64)
    at_arr = np.zeros(n_rep, dtype=np.float64)
    jm_arr = np.empty(n_rep, dtype=np.int64)
    ab_arr = np.zeros(n_rep, dtype=np.uint8)
    cdef int64_t[::1] pos = pos_arr
    cdef double[::1] a_time = at_arr
    cdef int64_t[::1] jumps = jm_arr
    cdef uint8_t[::1] aborted = ab_arr
    cdef Py_ssize_t r, j
    cdef Rng w
    cdef int64_t x, nj, i, occ
    cdef double t, acc, dt, tn, u
    for r in range(n_rep):
        _rng_init(&w, _derive2(ms, <uint64_t>T_WALK, <uint64_t>r))
        x = 0
        t = 0.0
        acc = 0.0
        nj = 0
        while True:
            dt = _expo(&w, ab)
            tn = t + dt
            if tn > t_max:
                if watime:
                    acc += _sched_occupied_in(init_v, ptr_v, ft,
                                              <Py_ssize_t>(x - lo), t, t_max)
                break
            if watime:
                acc += _sched_occupied_in(init_v, ptr_v, ft,
                                          <Py_ssize_t>(x - lo), t, tn)
            t = tn
            j = <Py_ssize_t>(x - lo)
            i = _bisect_left(ft, ptr_v[j], ptr_v[j + 1], t)
            occ = (<int64_t>init_v[j]) ^ ((i - ptr_v[j]) & 1)
            u = _u01(&w)
            x += 1 if u < (p_occ if occ else p_vac) else -1
            nj += 1
            if x < lo or x > hi:
                aborted[r] = 1
                break
        pos[r] = x
        a_time[r] = acc
        jumps[r] = nj
    return pos_arr, at_arr, jm_arr, ab_arr


def shared_flip_position_hist(init, ptr, flip_times, x_lo, double alpha,
                              double beta, double t_max, Py_ssize_t n_rep,
                              master_seed):
    """Histogram of final walker positions on one shared flip environment.

    Same walk law and streams as ct_walk_flip_shared with want_atime
    False, but only position counts are kept, so memory stays flat in
    n_rep.  Returns (counts, aborted_count): counts[k] is the number of
    replicas finishing at position x_lo + k; aborted replicas stop at
    the range edge and are excluded from counts.
    """
    cdef uint8_t[::1] init_v = np.ascontiguousarray(init, dtype=np.uint8)
    cdef int64_t[::1] ptr_v = np.ascontiguousarray(ptr, dtype=np.int64)
    cdef double[::1] ft = np.ascontiguousarray(flip_times, dtype=np.float64)
    cdef uint64_t ms = <uint64_t>master_seed
    cdef double ab = alpha + beta
    cdef double p_occ = alpha / ab
    cdef double p_vac = beta / ab
    cdef int64_t lo = <int64_t>x_lo
    cdef Py_ssize_t n_sites = init_v.shape[0]
    cdef int64_t hi = lo + <int64_t>n_sites - 1
    counts_arr = np.zeros(n_sites, dtype=np.int64)
    cdef int64_t[::1] counts = counts_arr
    cdef int64_t aborted_count = 0
    cdef Py_ssize_t r, j
    cdef Rng w
    cdef int64_t x, i, occ
    cdef double t, dt, tn, u
    cdef bint ab_flag
    for r in range(n_rep):
        _rng_init(&w, _derive2(ms, <uint64_t>T_WALK, <uint64_t>r))
        x = 0
        t = 0.0
        ab_flag = False
        while True:
            dt = _expo(&w, ab)
            tn = t + dt
            if tn > t_max:
                break
            t = tn
            j = <Py_ssize_t>(x - lo)
            i = _bisect_left(ft, ptr_v[j], ptr_v[j + 1], t)
            occ = (<int64_t>init_v[j]) ^ ((i - ptr_v[j]) & 1)
            u = _u01(&w)
            x += 1 if u < (p_occ if occ else p_vac) else -1
            if x < lo or x > hi:
                ab_flag = True
                break
        if ab_flag:
            aborted_count += 1
        else:
            counts[x - lo] += 1
    return counts_arr, int(aborted_count)


# ---------------------------------------------------------------------------
# stirred exclusion environment
# ---------------------------------------------------------------------------

cdef class _CWin:
    """Open window of exclusion cells [lo, hi) around the walker.

    Extension draws fresh Bernoulli(rho) cells from the environment
    stream in ascending site order, chunked by CHUNK sites.  Trimming
    drops a window edge that has fallen more than 2 * CHUNK beyond the
    required half-width back to half_width + CHUNK, so an edge never
    sits closer than half_width to the walker and extension/trim cycles
    cannot thrash.  Cells live in a flat buffer; site x sits at buffer
    index base + (x - lo).
    """
    cdef object arr
    cdef uint8_t[::1] buf
    cdef Py_ssize_t base
    cdef int64_t lo, hi
    cdef double rho

    cdef void _recenter(self, Py_ssize_t min_cap):
        cdef Py_ssize_t span = <Py_ssize_t>(self.hi - self.lo)
        cdef Py_ssize_t cap = self.buf.shape[0]
        cdef Py_ssize_t new_cap = cap
        if new_cap < min_cap:
            new_cap = 2 * min_cap
        new_arr = np.empty(new_cap, dtype=np.uint8)
        cdef uint8_t[::1] nb = new_arr
        cdef Py_ssize_t new_base = (new_cap - span) // 2
        nb[new_base:new_base + span] = self.buf[self.base:self.base + span]
        self.arr = new_arr
        self.buf = nb
        self.base = new_base

    cdef bint ensure_span(self, int64_t x_lo, int64_t x_hi, int64_t hw,
                          Rng* er):
        """Keep [x_lo - hw, x_hi + hw] inside; returns True if the edge
        count changed."""
        cdef bint changed = False
        cdef Py_ssize_t j, span
        cdef int64_t lo_keep, hi_keep
        while x_hi + hw >= self.hi:
            span = <Py_ssize_t>(self.hi - self.lo)
            if self.base + span + CHUNK > self.buf.shape[0]:
                self._recenter(span + 4 * CHUNK)
            for j in range(CHUNK):
                self.buf[self.base + span + j] = 1 if _u01(er) < self.rho else 0
            self.hi += CHUNK
            changed = True
        while x_lo - hw < self.lo:
            if self.base < CHUNK:
                self._recenter(<Py_ssize_t>(self.hi - self.lo) + 4 * CHUNK)
            for j in range(CHUNK):
                self.buf[self.base - CHUNK + j] = 1 if _u01(er) < self.rho else 0
            self.base -= CHUNK
            self.lo -= CHUNK
            changed = True
        lo_keep = x_lo - hw - CHUNK
        if self.lo < lo_keep - CHUNK:
            self.base += <Py_ssize_t>(lo_keep - self.lo)
            self.lo = lo_keep
            changed = True
        hi_keep = x_hi + hw + 1 + CHUNK
        if self.hi > hi_keep + CHUNK:
            self.hi = hi_keep
            changed = True
        return changed


cdef _CWin _win_new(double rho, Rng* er, int64_t lo, int64_t hi):
    cdef _CWin w = _CWin.__new__(_CWin)
    cdef Py_ssize_t span = <Py_ssize_t>(hi - lo)
    cdef Py_ssize_t cap = span + 8 * CHUNK
    w.arr = np.empty(cap, dtype=np.uint8)
    w.buf = w.arr
    w.base = 4 * CHUNK
    w.lo = lo
    w.hi = hi
    w.rho = rho
    cdef Py_ssize_t j
    for j in range(span):
        w.buf[w.base + j] = 1 if _u01(er) < rho else 0
    return w


def ct_walk_sse(double rho, double alpha, double beta, double t_max,
                Py_ssize_t n_rep, master_seed, torus_L=0, half_width=0,
                prune_pos=None):
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
    cdef uint64_t ms = <uint64_t>master_seed
    cdef double ab = alpha + beta
    cdef double p_occ = alpha / ab
    cdef double p_vac = beta / ab
    cdef int64_t L = <int64_t>torus_L
    cdef int64_t hw = <int64_t>half_width
    cdef bint do_prune = prune_pos is not None
    cdef double band = <double>prune_pos if do_prune else 0.0
    pos_arr = np.empty(n_rep, dtype=np.int64)
    at_arr = np.empty(n_rep, dtype=np.float64)
    jm_arr = np.empty(n_rep, dtype=np.int64)
    pr_arr = np.zeros(n_rep, dtype=np.uint8)
    cdef int64_t[::1] pos = pos_arr
    cdef double[::1] a_time = at_arr
    cdef int64_t[::1] jumps = jm_arr
    cdef uint8_t[::1] pruned = pr_arr
    cells_arr = np.empty(L if L > 0 else 1, dtype=np.uint8)
    cdef uint8_t[::1] cells = cells_arr
    cdef Py_ssize_t i, j
    cdef Rng er, w
    cdef _CWin win
    cdef int64_t x, nj, n_edges, e, f, xi
    cdef double t, acc, next_env, next_walk, t_next, u, mean_left
    cdef bint occ, env_first
    for i in range(n_rep):
        _rng_init(&er, _derive2(ms, <uint64_t>T_ENV, <uint64_t>i))
        _rng_init(&w, _derive2(ms, <uint64_t>T_WALK, <uint64_t>i))
        x = 0
        t = 0.0
        acc = 0.0
        nj = 0
        win = None
        if L > 0:
            for j in range(L):
                cells[j] = 1 if _u01(&er) < rho else 0
            n_edges = L
            occ = cells[0]
        else:
            win = _win_new(rho, &er, -(hw + CHUNK), hw + CHUNK + 1)
            n_edges = win.hi - win.lo - 1
            occ = win.buf[win.base + (0 - win.lo)]
        next_env = _expo(&er, <double>n_edges)
        next_walk = _expo(&w, ab)
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
                if L > 0:
                    e = <int64_t>_randbelow(&er, <uint64_t>L)
                    f = e + 1 if e + 1 < L else 0
                    cells[e], cells[f] = cells[f], cells[e]
                    xi = x % L
                    if xi < 0:
                        xi += L
                    if e == xi or f == xi:
                        occ = cells[xi]
                else:
                    e = win.lo + <int64_t>_randbelow(&er, <uint64_t>n_edges)
                    j = win.base + <Py_ssize_t>(e - win.lo)
                    win.buf[j], win.buf[j + 1] = win.buf[j + 1], win.buf[j]
                    if e == x or e + 1 == x:
                        occ = win.buf[win.base + <Py_ssize_t>(x - win.lo)]
                next_env = t + _expo(&er, <double>n_edges)
            else:
                u = _u01(&w)
                x += 1 if u < (p_occ if occ else p_vac) else -1
                nj += 1
                if L > 0:
                    xi = x % L
                    if xi < 0:
                        xi += L
                    occ = cells[xi]
                else:
                    if win.ensure_span(x, x, hw, &er):
                        n_edges = win.hi - win.lo - 1
                        next_env = t + _expo(&er, <double>n_edges)
                    occ = win.buf[win.base + <Py_ssize_t>(x - win.lo)]
                if do_prune:
                    mean_left = ab * (t_max - t)
                    if x > band + mean_left + 10.0 * sqrt(mean_left) + 20.0:
                        pruned[i] = 1
                        break
                next_walk = t + _expo(&w, ab)
        pos[i] = x
        a_time[i] = acc
        jumps[i] = nj
    return pos_arr, at_arr, jm_arr, pr_arr


def ct_path_sse(double rho, double alpha, double beta, double t_max,
                master_seed, replica=0, torus_L=0, half_width=0):
    """Path-recorded twin of one ct_walk_sse batch replica (no pruning).

    Returns (times, positions, occs, a_time) with one row per walker
    jump; occs holds the occupancy of the site just jumped to.
    """
    cdef uint64_t ms = <uint64_t>master_seed
    cdef double ab = alpha + beta
    cdef double p_occ = alpha / ab
    cdef double p_vac = beta / ab
    cdef int64_t L = <int64_t>torus_L
    cdef int64_t hw = <int64_t>half_width
    cdef Rng er, w
    _rng_init(&er, _derive2(ms, <uint64_t>T_ENV, <uint64_t>(<int64_t>replica)))
    _rng_init(&w, _derive2(ms, <uint64_t>T_WALK, <uint64_t>(<int64_t>replica)))
    cells_arr = np.empty(L if L > 0 else 1, dtype=np.uint8)
    cdef uint8_t[::1] cells = cells_arr
    cdef _CWin win = None
    cdef Py_ssize_t j
    cdef int64_t x = 0
    cdef int64_t n_edges, e, f, xi
    cdef double t = 0.0
    cdef double acc = 0.0
    cdef double next_env, next_walk, t_next, u
    cdef bint occ, env_first
    if L > 0:
        for j in range(L):
            cells[j] = 1 if _u01(&er) < rho else 0
        n_edges = L
        occ = cells[0]
    else:
        win = _win_new(rho, &er, -(hw + CHUNK), hw + CHUNK + 1)
        n_edges = win.hi - win.lo - 1
        occ = win.buf[win.base + (0 - win.lo)]
    next_env = _expo(&er, <double>n_edges)
    next_walk = _expo(&w, ab)
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
            if L > 0:
                e = <int64_t>_randbelow(&er, <uint64_t>L)
                f = e + 1 if e + 1 < L else 0
                cells[e], cells[f] = cells[f], cells[e]
                xi = x % L
                if xi < 0:
                    xi += L
                if e == xi or f == xi:
                    occ = cells[xi]
            else:
                e = win.lo + <int64_t>_randbelow(&er, <uint64_t>n_edges)
                j = win.base + <Py_ssize_t>(e - win.lo)
                win.buf[j], win.buf[j + 1] = win.buf[j + 1], win.buf[j]
                if e == x or e + 1 == x:
                    occ = win.buf[win.base + <Py_ssize_t>(x - win.lo)]
            next_env = t + _expo(&er, <double>n_edges)
        else:
            u = _u01(&w)
            x += 1 if u < (p_occ if occ else p_vac) else -1
            if L > 0:
                xi = x % L
                if xi < 0:
                    xi += L
                occ = cells[xi]
            else:
                if win.ensure_span(x, x, hw, &er):
                    n_edges = win.hi - win.lo - 1
                    next_env = t + _expo(&er, <double>n_edges)
                occ = win.buf[win.base + <Py_ssize_t>(x - win.lo)]
            next_walk = t + _expo(&w, ab)
            times.append(t)
            positions.append(x)
            occs.append(1 if occ else 0)
    return (np.array(times, dtype=np.float64),
            np.array(positions, dtype=np.int64),
            np.array(occs, dtype=np.uint8), acc)


def ct_coupled_sse(double rho, double alpha, double beta, double t_max,
                   Py_ssize_t n_pairs, master_seed, gap, torus_L=0,
                   half_width=0):
    """Two walkers coupled through one exclusion environment per pair.

    Both walkers share the jump clock and the same uniform at each jump,
    walker A starting at 0 and walker B at gap.  gap must be even and
    nonnegative: a shared jump changes the gap by 0 or +-2, and a zero
    gap forces identical moves, so A <= B holds forever.  Returns
    (pos_a, pos_b, violations) where violations counts events after
    which A sat strictly right of B (must stay zero).
    """
    cdef int64_t g = <int64_t>gap
    if g < 0 or g % 2 != 0:
        raise ValueError("gap must be even and nonnegative")
    cdef uint64_t ms = <uint64_t>master_seed
    cdef double ab = alpha + beta
    cdef double p_occ = alpha / ab
    cdef double p_vac = beta / ab
    cdef int64_t L = <int64_t>torus_L
    cdef int64_t hw = <int64_t>half_width
    pa_arr = np.empty(n_pairs, dtype=np.int64)
    pb_arr = np.empty(n_pairs, dtype=np.int64)
    vi_arr = np.zeros(n_pairs, dtype=np.int64)
    cdef int64_t[::1] pos_a = pa_arr
    cdef int64_t[::1] pos_b = pb_arr
    cdef int64_t[::1] violations = vi_arr
    cells_arr = np.empty(L if L > 0 else 1, dtype=np.uint8)
    cdef uint8_t[::1] cells = cells_arr
    cdef Py_ssize_t i, j
    cdef Rng er, w
    cdef _CWin win
    cdef int64_t xa, xb, n_edges, e, f, xi, span_lo, span_hi
    cdef double t, next_env, next_walk, t_next, u
    cdef bint oa, ob, env_first
    for i in range(n_pairs):
        _rng_init(&er, _derive2(ms, <uint64_t>T_ENV, <uint64_t>i))
        _rng_init(&w, _derive2(ms, <uint64_t>T_WALK, <uint64_t>i))
        xa = 0
        xb = g
        t = 0.0
        win = None
        if L > 0:
            for j in range(L):
                cells[j] = 1 if _u01(&er) < rho else 0
            n_edges = L
        else:
            win = _win_new(rho, &er, -(hw + CHUNK), g + hw + CHUNK + 1)
            n_edges = win.hi - win.lo - 1
        next_env = _expo(&er, <double>n_edges)
        next_walk = _expo(&w, ab)
        while True:
            env_first = next_env < next_walk
            t_next = next_env if env_first else next_walk
            if t_next > t_max:
                break
            t = t_next
            if env_first:
                if L > 0:
                    e = <int64_t>_randbelow(&er, <uint64_t>L)
                    f = e + 1 if e + 1 < L else 0
                    cells[e], cells[f] = cells[f], cells[e]
                else:
                    e = win.lo + <int64_t>_randbelow(&er, <uint64_t>n_edges)
                    j = win.base + <Py_ssize_t>(e - win.lo)
                    win.buf[j], win.buf[j + 1] = win.buf[j + 1], win.buf[j]
                next_env = t + _expo(&er, <double>n_edges)
            else:
                if L > 0:
                    xi = xa % L
                    if xi < 0:
                        xi += L
                    oa = cells[xi]
                    xi = xb % L
                    if xi < 0:
                        xi += L
                    ob = cells[xi]
                else:
                    oa = win.buf[win.base + <Py_ssize_t>(xa - win.lo)]
                    ob = win.buf[win.base + <Py_ssize_t>(xb - win.lo)]
                u = _u01(&w)
                xa += 1 if u < (p_occ if oa else p_vac) else -1
                xb += 1 if u < (p_occ if ob else p_vac) else -1
                if xa > xb:
                    violations[i] += 1
                if L == 0:
                    span_lo = xa if xa < xb else xb
                    span_hi = xb if xb > xa else xa
                    if win.ensure_span(span_lo, span_hi, hw, &er):
                        n_edges = win.hi - win.lo - 1
                        next_env = t + _expo(&er, <double>n_edges)
                next_walk = t + _expo(&w, ab)
        pos_a[i] = xa
        pos_b[i] = xb
    return pa_arr, pb_arr, vi_arr


def sse_blocks_survival(double rho, starts, lengths, states, double t_max,
                        Py_ssize_t n_rep, master_seed, half_width):
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
    starts_a = np.asarray(starts, dtype=np.int64)
    lengths_a = np.asarray(lengths, dtype=np.int64)
    states_a = np.asarray(states, dtype=np.int64)
    cdef int64_t hw = <int64_t>half_width
    cdef int64_t lo = int(starts_a.min()) - hw
    cdef int64_t hi = int((starts_a + lengths_a).max()) + hw
    cdef Py_ssize_t n_cells = <Py_ssize_t>(hi - lo)
    cdef Py_ssize_t n_edges = n_cells - 1
    req_arr = np.full(n_cells, -1, dtype=np.int8)
    cdef int8_t[::1] req = req_arr
    cdef Py_ssize_t b, j
    cdef int64_t s0, l0, st0
    for b in range(starts_a.shape[0]):
        s0 = starts_a[b]
        l0 = lengths_a[b]
        st0 = states_a[b]
        for j in range(<Py_ssize_t>(s0 - lo), <Py_ssize_t>(s0 - lo + l0)):
            req[j] = <int8_t>st0
    cdef uint64_t ms = <uint64_t>master_seed
    alive_arr = np.zeros(n_rep, dtype=np.uint8)
    cdef uint8_t[::1] alive = alive_arr
    cells_arr = np.empty(n_cells, dtype=np.uint8)
    cdef uint8_t[::1] cells = cells_arr
    cdef Py_ssize_t i
    cdef Rng er
    cdef int64_t e
    cdef double t
    cdef bint dead
    for i in range(n_rep):
        _rng_init(&er, _derive2(ms, <uint64_t>T_ENV, <uint64_t>i))
        for j in range(n_cells):
            cells[j] = 1 if _u01(&er) < rho else 0
        dead = False
        for j in range(n_cells):
            if req[j] >= 0 and cells[j] != req[j]:
                dead = True
                break
        if dead:
            continue
        t = 0.0
        while True:
            t += _expo(&er, <double>n_edges)
            if t > t_max:
                alive[i] = 1
                break
            e = <int64_t>_randbelow(&er, <uint64_t>n_edges)
            cells[e], cells[e + 1] = cells[e + 1], cells[e]
            if req[e] >= 0 and cells[e] != req[e]:
                break
            if req[e + 1] >= 0 and cells[e + 1] != req[e + 1]:
                break
    return alive_arr


def srw_range(double t_max, Py_ssize_t n_rep, master_seed):
    """Range (number of distinct visited sites) of a rate-1 symmetric
    walk over [0, t_max], one value per replica."""
    cdef uint64_t ms = <uint64_t>master_seed
    ranges_arr = np.empty(n_rep, dtype=np.int64)
    cdef int64_t[::1] ranges = ranges_arr
    cdef Py_ssize_t i
    cdef Rng w
    cdef int64_t x, mn, mx
    cdef double t
    for i in range(n_rep):
        _rng_init(&w, _derive2(ms, <uint64_t>T_WALK, <uint64_t>i))
        x = 0
        mn = 0
        mx = 0
        t = 0.0
        while True:
            t += _expo(&w, 1.0)
            if t > t_max:
                break
            x += 1 if _u01(&w) < 0.5 else -1
            if x < mn:
                mn = x
            elif x > mx:
                mx = x
        ranges[i] = mx - mn + 1
    return ranges_arr


# ---------------------------------------------------------------------------
# discrete-time lane (parallel-update exclusion, bit-packed)
# ---------------------------------------------------------------------------

cdef uint64_t EVEN_BITS = <uint64_t>0x5555555555555555


cdef inline void _sweep_words(uint64_t* cfg, uint64_t* y, Py_ssize_t nw,
                              int parity, Rng* ur) noexcept nogil:
    """One parallel update of a bit-packed ring stored as nw 64-bit
    words: each edge of the chosen parity swaps with probability 1/2.

    The even-edge mask keeps every touched bit pair inside one word, so
    parity 0 is word-local; parity 1 rotates the ring right by one bit,
    applies the same word-local step, and rotates back.  Random selector
    words are drawn in ascending word order, matching the pure lane's
    assembly of one big selector integer.
    """
    cdef Py_ssize_t wi
    cdef uint64_t d, diff
    if parity == 0:
        for wi in range(nw):
            d = _rng_next(ur) & EVEN_BITS
            diff = (cfg[wi] ^ (cfg[wi] >> 1)) & d
            cfg[wi] ^= diff | (diff << 1)
        return
    for wi in range(nw - 1):
        y[wi] = (cfg[wi] >> 1) | ((cfg[wi + 1] & 1) << 63)
    y[nw - 1] = (cfg[nw - 1] >> 1) | ((cfg[0] & 1) << 63)
    for wi in range(nw):
        d = _rng_next(ur) & EVEN_BITS
        diff = (y[wi] ^ (y[wi] >> 1)) & d
        y[wi] ^= diff | (diff << 1)
    cfg[0] = (y[0] << 1) | (y[nw - 1] >> 63)
    for wi in range(1, nw):
        cfg[wi] = (y[wi] << 1) | (y[wi - 1] >> 63)


def dt_triple(double rho, double p, Py_ssize_t L, Py_ssize_t steps,
              Py_ssize_t n_rep, master_seed):
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
    cdef uint64_t ms = <uint64_t>master_seed
    cdef double q = 1.0 - p
    cdef Py_ssize_t nw = L // 64
    ds_arr = np.empty(n_rep, dtype=np.int64)
    dd_arr = np.empty(n_rep, dtype=np.int64)
    da_arr = np.empty(n_rep, dtype=np.int64)
    cdef int64_t[::1] disp_s = ds_arr
    cdef int64_t[::1] disp_d = dd_arr
    cdef int64_t[::1] disp_a = da_arr
    cfg0_arr = np.empty(nw, dtype=np.uint64)
    cfg_arr = np.empty(nw, dtype=np.uint64)
    y_arr = np.empty(nw, dtype=np.uint64)
    cdef uint64_t[::1] cfg0 = cfg0_arr
    cdef uint64_t[::1] cfg = cfg_arr
    cdef uint64_t[::1] y = y_arr
    cdef Py_ssize_t i, s, n
    cdef Rng er, w, ur
    cdef int64_t xs, xd, xa, xi
    cdef int parity
    cdef bint cs, cd, cell_a
    cdef double u
    cdef int64_t Ls = <int64_t>L
    for i in range(n_rep):
        _rng_init(&er, _derive2(ms, <uint64_t>T_ENV, <uint64_t>i))
        _rng_init(&w, _derive2(ms, <uint64_t>T_WALK, <uint64_t>i))
        _rng_init(&ur, _derive2(ms, <uint64_t>T_ENVUPD, <uint64_t>i))
        for s in range(nw):
            cfg0[s] = 0
        for s in range(L):
            if _u01(&er) < rho:
                cfg0[s >> 6] |= (<uint64_t>1) << (s & 63)
        for s in range(nw):
            cfg[s] = cfg0[s]
        xs = 0
        xd = 0
        xa = 0
        for n in range(steps):
            cell_a = _u01(&er) < rho
            u = _u01(&w)
            xi = xs % Ls
            if xi < 0:
                xi += Ls
            cs = (cfg0[xi >> 6] >> (xi & 63)) & 1
            xs += 1 if u < (p if cs else q) else -1
            xi = xd % Ls
            if xi < 0:
                xi += Ls
            cd = (cfg[xi >> 6] >> (xi & 63)) & 1
            xd += 1 if u < (p if cd else q) else -1
            xa += 1 if u < (p if cell_a else q) else -1
            parity = <int>(_rng_next(&ur) & 1)
            _sweep_words(&cfg[0], &y[0], nw, parity, &ur)
        disp_s[i] = xs
        disp_d[i] = xd
        disp_a[i] = xa
    return ds_arr, dd_arr, da_arr
