"""Binary site environments on a window of the integer lattice.

An environment is a row of 0/1 cells evolving by one of two mechanisms:
nearest-neighbor state swaps driven by a Poisson link schedule (the
conserved exclusion dynamics), or single-site flips driven by a local rate
table (spin-flip dynamics).  The module also provides the static structure
report for a rate table: the dependence bound M, the flip-floor epsilon,
and the attractiveness check, all exact by enumeration.

The infinite lattice is represented by a finite window.  Boundary policy
is either Torus (the window wraps) or Frozen (sites outside the window
never change; pattern reads past the edge see vacant padding).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .rng import Xoshiro256pp, derive_seed, site_uniform


class Boundary(enum.Enum):
    TORUS = "torus"
    FROZEN = "frozen"


class WindowTooSmallError(RuntimeError):
    """A walker or a requested read left the represented window."""


LINK = 0
FLIP = 1


@dataclass
class Occupancy:
    """A window of binary site states at a fixed environment time."""

    cells: np.ndarray
    offset: int
    boundary: Boundary = Boundary.TORUS
    time: float = 0.0

    def __post_init__(self):
        self.cells = np.ascontiguousarray(self.cells, dtype=np.uint8)
        if self.cells.ndim != 1 or self.cells.size == 0:
            raise ValueError("cells must be a nonempty 1-d array")
        if not np.all((self.cells == 0) | (self.cells == 1)):
            raise ValueError("cells must be 0/1 valued")

    def __len__(self) -> int:
        return int(self.cells.size)

    @property
    def rightmost(self) -> int:
        return self.offset + len(self) - 1

    def particle_count(self) -> int:
        return int(self.cells.sum())

    def index_of(self, site: int) -> int:
        """Array index of a lattice site, wrapping on a torus."""
        i = site - self.offset
        n = len(self)
        if self.boundary is Boundary.TORUS:
            return i % n
        if 0 <= i < n:
            return i
        raise WindowTooSmallError(f"site {site} outside window [{self.offset}, {self.rightmost}]")

    def get(self, site: int) -> int:
        return int(self.cells[self.index_of(site)])

    def dumps(self) -> str:
        """Text snapshot: offset on the first line, the 0/1 string on the second."""
        bits = "".join("1" if c else "0" for c in self.cells)
        return f"{self.offset}\n{bits}\n"

    @classmethod
    def loads(cls, text: str, boundary: Boundary = Boundary.TORUS, time: float = 0.0) -> "Occupancy":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        if len(lines) != 2:
            raise ValueError("expected two lines: offset and bit string")
        offset = int(lines[0])
        bits = lines[1].strip()
        if set(bits) - {"0", "1"}:
            raise ValueError("bit string may contain only 0 and 1")
        cells = np.frombuffer(bits.encode(), dtype=np.uint8) - ord("0")
        return cls(cells=cells, offset=offset, boundary=boundary, time=time)


def bernoulli_init(rho: float, window: range, boundary: Boundary, seed: int) -> Occupancy:
    """Independent Bernoulli(rho) cells over the window, hash-addressed.

    Cell states come from the stateless per-site hash, so the same seed
    gives the same state for a site no matter which window contains it;
    this is also exactly the frozen-environment law the simulation kernels
    sample from.
    """
    if not (0.0 <= rho <= 1.0):
        raise ValueError(f"rho must lie in [0, 1], got {rho}")
    if len(window) == 0:
        raise ValueError("window must be nonempty")
    if window.step != 1:
        raise ValueError("window must have unit step")
    cells = np.fromiter(
        (1 if site_uniform(seed, x) < rho else 0 for x in window),
        dtype=np.uint8,
        count=len(window),
    )
    return Occupancy(cells=cells, offset=window.start, boundary=boundary)


@dataclass
class EventSchedule:
    """Time-sorted environment events over a window.

    targets holds an edge index for link events (edge k joins window
    positions k and k+1; on a torus the last edge wraps) and a window
    position for flip events.
    """

    horizon: float
    window_start: int
    n_sites: int
    boundary: Boundary
    times: np.ndarray
    targets: np.ndarray
    kinds: np.ndarray
    seed: int

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=np.float64)
        self.targets = np.asarray(self.targets, dtype=np.int64)
        self.kinds = np.asarray(self.kinds, dtype=np.uint8)
        if not (self.times.shape == self.targets.shape == self.kinds.shape):
            raise ValueError("times, targets and kinds must have equal length")
        if self.times.size and (np.any(np.diff(self.times) < 0) or self.times[0] < 0
                                or self.times[-1] > self.horizon):
            raise ValueError("event times must be sorted within [0, horizon]")

    @property
    def n_edges(self) -> int:
        return self.n_sites if self.boundary is Boundary.TORUS else self.n_sites - 1

    def edge_sites(self, k: int) -> tuple[int, int]:
        """Lattice sites joined by edge index k."""
        a = self.window_start + k
        b = self.window_start + (k + 1) % self.n_sites
        return a, b


def build_sse_schedule(window: range, t_max: float, seed: int,
                       boundary: Boundary = Boundary.TORUS) -> EventSchedule:
    """Poisson link schedule: every nearest-neighbor edge of the window
    rings at rate 1, merged into one time-sorted stream.

    Drawn as an aggregate process (exponential gaps at the total edge
    rate, then a uniform edge index per event), which is the same law as
    merging per-edge processes.
    """
    if t_max < 0:
        raise ValueError("t_max must be nonnegative")
    if len(window) < 2 or window.step != 1:
        raise ValueError("window must contain at least two sites with unit step")
    n_sites = len(window)
    n_edges = n_sites if boundary is Boundary.TORUS else n_sites - 1
    rng = Xoshiro256pp(derive_seed(seed, 0x5C4ED))
    times = []
    targets = []
    t = 0.0
    while True:
        t += rng.expo(float(n_edges))
        if t > t_max:
            break
        times.append(t)
        targets.append(rng.randbelow(n_edges))
    n = len(times)
    return EventSchedule(
        horizon=float(t_max),
        window_start=window.start,
        n_sites=n_sites,
        boundary=boundary,
        times=np.array(times, dtype=np.float64),
        targets=np.array(targets, dtype=np.int64),
        kinds=np.zeros(n, dtype=np.uint8),
        seed=seed,
    )


def sse_evolve(env: Occupancy, schedule: EventSchedule, t: float) -> Occupancy:
    """Replay scheduled events with times in (env.time, t] and advance the
    clock to t.  Link events swap the edge's endpoint states; flip events
    toggle one site.  Replay is a semigroup: evolving to s and then to t
    equals evolving to t directly.
    """
    if t < env.time:
        raise ValueError(f"cannot evolve backwards from {env.time} to {t}")
    if t > schedule.horizon:
        raise ValueError(f"query time {t} beyond schedule horizon {schedule.horizon}")
    if len(env) != schedule.n_sites or env.offset != schedule.window_start:
        raise ValueError("schedule window does not match the occupancy window")
    cells = env.cells.copy()
    lo = int(np.searchsorted(schedule.times, env.time, side="right"))
    hi = int(np.searchsorted(schedule.times, t, side="right"))
    n = schedule.n_sites
    for i in range(lo, hi):
        k = int(schedule.targets[i])
        if schedule.kinds[i] == LINK:
            a = k
            b = (k + 1) % n
            cells[a], cells[b] = cells[b], cells[a]
        else:
            cells[k] ^= 1
    return Occupancy(cells=cells, offset=env.offset, boundary=env.boundary, time=float(t))


# ---------------------------------------------------------------------------
# spin-flip systems
# ---------------------------------------------------------------------------

MAX_RADIUS = 6


@dataclass
class SpinFlipSpec:
    """Translation-invariant single-site flip rates with finite range.

    rates[i] is the flip rate of the center site when the width-(2R+1)
    neighborhood pattern encodes to integer i; the leftmost site is the
    most significant bit, so the binary string of i reads left to right.
    """

    radius: int
    rates: np.ndarray

    def __post_init__(self):
        if not (0 <= self.radius <= MAX_RADIUS):
            raise ValueError(f"radius must lie in [0, {MAX_RADIUS}]")
        self.rates = np.ascontiguousarray(self.rates, dtype=np.float64)
        if self.rates.shape != (1 << self.width,):
            raise ValueError(f"rate table must have length {1 << self.width}")
        if not np.all(np.isfinite(self.rates)) or np.any(self.rates < 0):
            raise ValueError("rates must be finite and nonnegative")

    @property
    def width(self) -> int:
        return 2 * self.radius + 1

    @property
    def center_bit(self) -> int:
        return 1 << self.radius

    def pattern_index(self, bits) -> int:
        """Encode a left-to-right run of 0/1 values to a table index."""
        idx = 0
        for b in bits:
            idx = (idx << 1) | int(b)
        return idx

    @classmethod
    def constant(cls, gamma: float) -> "SpinFlipSpec":
        """Independent flips at a single rate, blind to the configuration."""
        return cls(radius=0, rates=np.full(2, float(gamma)))

    @classmethod
    def biased_flip(cls, gamma: float, rho: float) -> "SpinFlipSpec":
        """Independent single-site chains with equilibrium density rho:
        vacant sites flip at gamma*rho, occupied at gamma*(1-rho)."""
        return cls(radius=0, rates=np.array([gamma * rho, gamma * (1.0 - rho)]))

    @classmethod
    def voter(cls) -> "SpinFlipSpec":
        """Flip rate equal to the fraction of disagreeing nearest neighbors."""
        rates = np.empty(8)
        for idx in range(8):
            left, center, right = (idx >> 2) & 1, (idx >> 1) & 1, idx & 1
            rates[idx] = ((left != center) + (right != center)) / 2.0
        return cls(radius=1, rates=rates)

    @classmethod
    def anti_voter(cls) -> "SpinFlipSpec":
        """Flip rate equal to the fraction of agreeing nearest neighbors."""
        rates = np.empty(8)
        for idx in range(8):
            left, center, right = (idx >> 2) & 1, (idx >> 1) & 1, idx & 1
            rates[idx] = ((left == center) + (right == center)) / 2.0
        return cls(radius=1, rates=rates)

    def to_text(self) -> str:
        width = self.width
        lines = [f"{idx:0{width}b} {float(self.rates[idx])!r}" for idx in range(len(self.rates))]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SpinFlipSpec":
        entries = {}
        width = None
        for ln in text.strip().splitlines():
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            parts = ln.split()
            if len(parts) != 2:
                raise ValueError(f"expected '<pattern> <rate>', got {ln!r}")
            pattern, rate = parts
            if set(pattern) - {"0", "1"}:
                raise ValueError(f"pattern must be a binary string, got {pattern!r}")
            if width is None:
                width = len(pattern)
                if width % 2 != 1:
                    raise ValueError("pattern width must be odd (center site included)")
            elif len(pattern) != width:
                raise ValueError("inconsistent pattern widths")
            entries[int(pattern, 2)] = float(rate)
        if width is None:
            raise ValueError("empty rate table")
        if len(entries) != 1 << width:
            raise ValueError(f"need all {1 << width} patterns, got {len(entries)}")
        rates = np.empty(1 << width)
        for idx, rate in entries.items():
            rates[idx] = rate
        return cls(radius=(width - 1) // 2, rates=rates)


def _pattern_at(cells: np.ndarray, i: int, radius: int, boundary: Boundary) -> int:
    """Table index of the neighborhood pattern around window position i."""
    n = cells.size
    idx = 0
    for j in range(i - radius, i + radius + 1):
        if boundary is Boundary.TORUS:
            b = cells[j % n]
        elif 0 <= j < n:
            b = cells[j]
        else:
            b = 0
        idx = (idx << 1) | int(b)
    return idx


def spinflip_evolve(env: Occupancy, spec: SpinFlipSpec, t: float, seed: int,
                    record: bool = False):
    """Exact event-driven simulation of the flip dynamics up to time t.

    Flip times come from the total-rate exponential clock; the flipped
    site is chosen proportionally to the per-site rates, and rates within
    the dependency radius are recomputed after each flip.  With record=True
    also returns the EventSchedule of flips, replayable via sse_evolve.
    """
    if t < env.time:
        raise ValueError(f"cannot evolve backwards from {env.time} to {t}")
    cells = env.cells.copy()
    n = cells.size
    radius = spec.radius
    rates = np.empty(n, dtype=np.float64)
    for i in range(n):
        rates[i] = spec.rates[_pattern_at(cells, i, radius, env.boundary)]
    rng = Xoshiro256pp(derive_seed(seed, 0xF11B))
    now = env.time
    times = []
    flipped = []
    while True:
        total = float(rates.sum())
        if total <= 0.0:
            break
        now += rng.expo(total)
        if now > t:
            break
        cum = np.cumsum(rates)
        i = int(np.searchsorted(cum, rng.u01() * total, side="right"))
        if i >= n:
            i = n - 1
        cells[i] ^= 1
        for j in range(i - radius, i + radius + 1):
            if env.boundary is Boundary.TORUS:
                jj = j % n
            elif 0 <= j < n:
                jj = j
            else:
                continue
            rates[jj] = spec.rates[_pattern_at(cells, jj, radius, env.boundary)]
        if record:
            times.append(now)
            flipped.append(i)
    out = Occupancy(cells=cells, offset=env.offset, boundary=env.boundary, time=float(t))
    if not record:
        return out
    schedule = EventSchedule(
        horizon=float(t),
        window_start=env.offset,
        n_sites=n,
        boundary=env.boundary,
        times=np.array(times, dtype=np.float64),
        targets=np.array(flipped, dtype=np.int64),
        kinds=np.full(len(times), FLIP, dtype=np.uint8),
        seed=seed,
    )
    return out, schedule


def parallel_exclusion_step(env: Occupancy, parity: str, seed: int) -> Occupancy:
    """One sweep of the discrete-time exclusion update on a torus.

    Every edge of the given parity ('even' joins window positions (0,1),
    (2,3), ...; 'odd' joins (1,2), (3,4), ... and the wrap edge) swaps its
    endpoints independently with probability 1/2.
    """
    if env.boundary is not Boundary.TORUS:
        raise ValueError("parallel update needs a torus")
    n = len(env)
    if n % 2 != 0:
        raise ValueError("parallel update needs an even torus length")
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    start = 0 if parity == "even" else 1
    rng = Xoshiro256pp(derive_seed(seed, 0xA17))
    cells = env.cells.copy()
    for a in range(start, n, 2):
        b = (a + 1) % n
        if rng.u01() < 0.5:
            cells[a], cells[b] = cells[b], cells[a]
    return Occupancy(cells=cells, offset=env.offset, boundary=env.boundary, time=env.time)


# ---------------------------------------------------------------------------
# static structure of a rate table
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StructureReport:
    """Exact enumeration results for a rate table: the summed dependence
    bound M, the flip floor epsilon, and attractiveness."""

    M: float
    epsilon: float
    attractive: bool


def check_attractive(spec: SpinFlipSpec) -> bool:
    """True iff the rates are monotone for the componentwise pattern order:
    comparing patterns that agree at the center, the rate rises with the
    pattern on vacant centers and falls on occupied centers.

    Enumerates every ordered pattern pair via submask iteration, so the
    answer is exact.
    """
    width = spec.width
    center = spec.center_bit
    rates = spec.rates
    full = (1 << width) - 1
    for zeta in range(1 << width):
        # iterate submasks eta of zeta's non-center bits, keeping the center equal
        others = zeta & ~center
        sub = others
        while True:
            eta = sub | (zeta & center)
            if rates[zeta] != rates[eta]:
                if zeta & center:
                    if rates[eta] < rates[zeta]:
                        return False
                else:
                    if rates[eta] > rates[zeta]:
                        return False
            if sub == 0:
                break
            sub = (sub - 1) & others
    return True


def compute_M_epsilon(spec: SpinFlipSpec) -> StructureReport:
    """Exact structure report for a rate table.

    M sums, over every non-center position, the worst-case rate change
    from flipping that position; epsilon is the minimum over patterns of
    the rate plus the rate after flipping the center.
    """
    rates = spec.rates
    idx = np.arange(rates.size)
    M = 0.0
    for j in range(spec.width):
        bit = 1 << j
        if bit == spec.center_bit:
            continue
        M += float(np.max(np.abs(rates - rates[idx ^ bit])))
    epsilon = float(np.min(rates + rates[idx ^ spec.center_bit]))
    return StructureReport(M=M, epsilon=epsilon, attractive=check_attractive(spec))
