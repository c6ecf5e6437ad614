"""Kernel backend selection.

Imports the compiled extension when available, otherwise the pure-Python
twin. Set CHAOSLAB_PURE=1 to force the fallback (used by the parity tests
and the benchmark). Both backends implement the same functions with the same
operation order; results are bit-identical.
"""

from __future__ import annotations

import os

if os.environ.get("CHAOSLAB_PURE") == "1":
    from chaoslab import _purepy as impl
else:
    try:
        from chaoslab import _kernels as impl  # type: ignore[attr-defined]
    except ImportError:
        from chaoslab import _purepy as impl

BACKEND = impl.BACKEND_NAME

# Scalar interval maps.
MAP_TENT = 0
MAP_LOGISTIC_UNIT = 1
MAP_LOGISTIC_SYM = 2
MAP_FOLDED_LOGISTIC = 3
MAP_CIRCLE = 4
MAP_CIRCLE_SHIFTED = 5
MAP_DP = 6
# Plane maps.
MAP_HENON = 7
MAP_LOZI = 8

iterate_coupled_f64 = impl.iterate_coupled_f64
iterate_coupled_f32 = impl.iterate_coupled_f32
minmax_coupled_f64 = impl.minmax_coupled_f64
minmax_coupled_f32 = impl.minmax_coupled_f32
traj_coupled_f64 = impl.traj_coupled_f64
traj_coupled_f32 = impl.traj_coupled_f32
hist_coupled_f64 = impl.hist_coupled_f64
hist_coupled_f32 = impl.hist_coupled_f32
iterate_plane_f64 = impl.iterate_plane_f64
iterate_plane_f32 = impl.iterate_plane_f32
traj_plane_f64 = impl.traj_plane_f64
traj_plane_f32 = impl.traj_plane_f32
brent_coupled_f64 = impl.brent_coupled_f64
brent_coupled_f32 = impl.brent_coupled_f32
brent_plane_f64 = impl.brent_plane_f64
brent_plane_f32 = impl.brent_plane_f32
cycle_min_coupled_f64 = impl.cycle_min_coupled_f64
cycle_min_coupled_f32 = impl.cycle_min_coupled_f32
cycle_min_plane_f64 = impl.cycle_min_plane_f64
cycle_min_plane_f32 = impl.cycle_min_plane_f32
lattice_next_f64 = impl.lattice_next_f64
enumerate_range = impl.enumerate_range
lattice_apply_f64 = impl.lattice_apply_f64
iterate_lattice_f64 = impl.iterate_lattice_f64
cycle_min_lattice_f64 = impl.cycle_min_lattice_f64
brent_lattice_f64 = impl.brent_lattice_f64
scalar_hits_value_f64 = impl.scalar_hits_value_f64
scalar_hits_value_f32 = impl.scalar_hits_value_f32

# Brent state-machine phases (ctl[0] of the brent_* kernels).
PH_INIT = 0
PH_SEARCH = 1
PH_ADV = 2
PH_WALK = 3
PH_FOUND = 4
PH_BUDGET = 5
