"""Kernel lane selection and window-sizing helpers.

The simulation kernels exist twice: a compiled extension (_core) and a
pure-Python fallback (_core_py) that consume identical random streams.
Import preference goes to the compiled lane; setting DRIFTLAB_PURE=1 in
the environment forces the pure lane.  `lane_name` reports which one is
active and the benchmark script compares their throughput.

The sizing helpers centralize the window rules so every caller (tests,
estimators, CLI) derives identical windows:

  stir_margin(t)   half-width shielding a site from stirring boundary
                   effects over horizon t.  Information reaches distance
                   m through the symmetric stirring only with
                   probability ~exp(-m^2/(4t)); the margin solves
                   exp(-m^2/(4t)) = 1e-9/(1+t), plus a flat pad.
  flip_margin(t, alpha, beta)
                   site range certainly covering a rate-(alpha+beta)
                   walker over [0, t] (jump-count mean plus ten sigma
                   plus a pad), used to size materialized flip
                   environments.
  slowdown_band(t) the slow-down event half-width 2*sqrt(t*log t).
"""

from __future__ import annotations

import math
import os

_KERNEL_NAMES = (
    "ct_walk_frozen",
    "ct_path_frozen",
    "ct_walk_flip",
    "ct_path_flip",
    "build_flip_trajectories",
    "ct_walk_flip_shared",
    "shared_flip_position_hist",
    "ct_walk_sse",
    "ct_path_sse",
    "ct_coupled_sse",
    "sse_blocks_survival",
    "srw_range",
    "dt_triple",
)


def _pick_lane():
    if os.environ.get("DRIFTLAB_PURE") == "1":
        from . import _core_py
        return _core_py, "pure"
    try:
        from . import _core
    except ImportError:
        _core = None
    if _core is not None and all(hasattr(_core, n) for n in _KERNEL_NAMES):
        return _core, "compiled"
    from . import _core_py
    return _core_py, "pure"


_lane, LANE = _pick_lane()

ct_walk_frozen = _lane.ct_walk_frozen
ct_path_frozen = _lane.ct_path_frozen
ct_walk_flip = _lane.ct_walk_flip
ct_path_flip = _lane.ct_path_flip
build_flip_trajectories = _lane.build_flip_trajectories
ct_walk_flip_shared = _lane.ct_walk_flip_shared
shared_flip_position_hist = _lane.shared_flip_position_hist
ct_walk_sse = _lane.ct_walk_sse
ct_path_sse = _lane.ct_path_sse
ct_coupled_sse = _lane.ct_coupled_sse
sse_blocks_survival = _lane.sse_blocks_survival
srw_range = _lane.srw_range
dt_triple = _lane.dt_triple

ENV = _lane.ENV
WALK = _lane.WALK
ENVUPD = _lane.ENVUPD


def lane_name() -> str:
    """Name of the active kernel lane: 'compiled' or 'pure'."""
    return LANE


def stir_margin(t: float) -> int:
    """Window half-width making stirring boundary effects negligible
    over horizon t (see module docstring for the rule)."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    return int(math.ceil(math.sqrt(4.0 * t * (20.7 + math.log1p(t))))) + 16


def flip_margin(t: float, alpha: float, beta: float) -> int:
    """Half-range of sites a rate-(alpha+beta) walker can plausibly
    reach by time t: jump-count mean plus ten standard deviations plus
    a pad.  Exceeding it has probability below exp(-40) per replica."""
    mean = (alpha + beta) * t
    return int(math.ceil(mean + 10.0 * math.sqrt(mean))) + 50


def slowdown_band(t: float) -> float:
    """Half-width 2*sqrt(t*log t) of the slow-down event at horizon t."""
    if t <= 1.0:
        raise ValueError("slow-down band needs t > 1")
    return 2.0 * math.sqrt(t * math.log(t))
