"""Exact orbit structure of discretized maps.

Every binary32/binary64/lattice system is a function on a finite state set,
so each orbit ends in a cycle: after a tail of mu transient states it closes
with minimal period lambda. This module finds (lambda, mu) with Brent's
algorithm (bit-exact state comparison, budget-bounded, resumable for
checkpointing), decomposes whole lattices into basins exactly, samples basin
structure from random seeds in the float modes, and names period magnitudes.

A search that exhausts its budget returns None: not finding a cycle within
max_iter applications is a result, not an error, and certifies
mu + lambda > (budget - 2) / 3 (Brent detects any cycle with
3*(mu+lambda) + 2 <= budget applications).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from chaoslab import backend
from chaoslab import maps
from chaoslab.arithmetic import LatticePoint, require_lattice_map
from chaoslab.coupling import CouplingMatrix

DEFAULT_CHUNK = 1 << 24
MAX_TABLE_POINTS = 1 << 26  # successor-table enumeration cap (memory guard)

_BAND_NAMES = (
    "megaperiodic",
    "gigaperiodic",
    "teraperiodic",
    "petaperiodic",
    "exaperiodic",
    "zettaperiodic",
    "yottaperiodic",
)


class EnumerationTooLarge(RuntimeError):
    """Lattice too large for exact successor-table enumeration."""


@dataclass(frozen=True)
class CycleReport:
    """Minimal period, tail length, one on-cycle state, and the map
    applications spent finding them."""

    period: int
    tail: int
    witness: object
    iterations: int

    @property
    def classification(self) -> str:
        return classify_period(self.period)


def classify_period(lam: int) -> str:
    """Magnitude band of a period: sub-mega below 1e6, then megaperiodic
    [1e6, 1e9), gigaperiodic [1e9, 1e12), ... yottaperiodic [1e24, 1e27),
    beyond-yotta above."""
    lam = int(lam)
    if lam < 1:
        raise ValueError("periods are >= 1")
    if lam < 10 ** 6:
        return "sub-mega"
    for i, name in enumerate(_BAND_NAMES):
        if lam < 10 ** (9 + 3 * i):
            return name
    return "beyond-yotta"


# ---------------------------------------------------------------------------
# generic Brent over any deterministic step function
# ---------------------------------------------------------------------------

def _default_key(s):
    if isinstance(s, float):
        return struct.pack("<d", s)
    if isinstance(s, (int, np.integer)):
        return int(s)
    if isinstance(s, np.floating):
        return np.asarray(s).tobytes()
    if isinstance(s, np.ndarray):
        return (s.dtype.str, s.tobytes())
    if isinstance(s, (tuple, list)):
        return tuple(_default_key(v) for v in s)
    if isinstance(s, LatticePoint):
        return (s.j, s.n)
    return s


def detect_cycle(step, x0, max_iter: int, key=None) -> CycleReport | None:
    """Brent cycle search over an arbitrary step function.

    States are compared by bit pattern (floats via their IEEE encodings, so
    -0.0 != 0.0), or by a caller-supplied key. max_iter caps the map
    applications of the search phase; None means no cycle was certified
    within the budget. The recovery pass that pins down the tail runs to
    completion (at most lambda + 2*mu further applications).
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    kf = key if key is not None else _default_key
    tort = x0
    hare = step(x0)
    steps = 1
    power = 1
    lam = 1
    while kf(tort) != kf(hare):
        if lam == power:
            tort = hare
            power *= 2
            lam = 0
        if steps >= max_iter:
            return None
        hare = step(hare)
        lam += 1
        steps += 1
    lamf = lam
    tort = x0
    hare = x0
    for _ in range(lamf):
        hare = step(hare)
        steps += 1
    mu = 0
    while kf(tort) != kf(hare):
        tort = step(tort)
        hare = step(hare)
        mu += 1
        steps += 2
    return CycleReport(period=lamf, tail=mu, witness=tort, iterations=steps)


# ---------------------------------------------------------------------------
# kernel-backed resumable hunts
# ---------------------------------------------------------------------------

def _hexlist(arr) -> list[str]:
    return [float(v).hex() for v in arr]


def _unhex(vals, dtype) -> np.ndarray:
    return np.array([float.fromhex(v) for v in vals], dtype=dtype)


def _drive(call, on_chunk, snapshot):
    while True:
        phase = call()
        if on_chunk is not None:
            on_chunk(snapshot())
        if phase >= backend.PH_FOUND:
            return phase


def _rearm(ctl: np.ndarray, budget: int) -> None:
    # a budget-exhausted snapshot stops exactly at the search-loop boundary,
    # so raising the budget and flipping back to the search phase continues
    # bit-identically to a run that had the larger budget from the start
    if ctl[0] == backend.PH_BUDGET and budget > ctl[3]:
        ctl[0] = backend.PH_SEARCH


def hunt_coupled(spec: maps.MapSpec, matrix: CouplingMatrix, x0, budget: int,
                 chunk: int = DEFAULT_CHUNK, on_chunk=None,
                 resume: dict | None = None) -> CycleReport | None:
    """Cycle of the coupled system's orbit from x0, within `budget` search
    applications. on_chunk(snapshot) fires after every kernel chunk; feed the
    last snapshot back as `resume` to continue an interrupted search."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    dt = matrix.entries.dtype
    x0a = np.asarray(x0, dtype=dt).copy()
    if x0a.shape != (matrix.p,):
        raise ValueError(f"initial state must have length p={matrix.p}")
    if resume is not None:
        ctl = np.array(resume["ctl"], dtype=np.int64)
        tort = _unhex(resume["tortoise"], dt)
        hare = _unhex(resume["hare"], dt)
        _rearm(ctl, budget)
    else:
        ctl = np.zeros(8, dtype=np.int64)
        tort = np.zeros_like(x0a)
        hare = np.zeros_like(x0a)
    fn = (backend.brent_coupled_f64 if dt == np.float64
          else backend.brent_coupled_f32)

    def call():
        return fn(spec.map_id, spec.a, spec.l, matrix.entries, x0a, tort,
                  hare, ctl, budget, chunk)

    def snapshot():
        return {"ctl": [int(v) for v in ctl], "tortoise": _hexlist(tort),
                "hare": _hexlist(hare)}

    phase = _drive(call, on_chunk, snapshot)
    if phase == backend.PH_BUDGET:
        return None
    return CycleReport(period=int(ctl[5]), tail=int(ctl[4]),
                       witness=tuple(float(v) for v in tort),
                       iterations=int(ctl[3]))


def hunt_plane(spec: maps.MapSpec, xy0, budget: int,
               chunk: int = DEFAULT_CHUNK, dtype=np.float64, on_chunk=None,
               resume: dict | None = None) -> CycleReport | None:
    """Cycle of a henon/lozi orbit."""
    if not spec.is_plane:
        raise ValueError("hunt_plane is for henon/lozi")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    dt = np.dtype(dtype).type
    x0a = np.asarray(xy0, dtype=dt).copy()
    if x0a.shape != (2,):
        raise ValueError("plane state is (x, y)")
    if resume is not None:
        ctl = np.array(resume["ctl"], dtype=np.int64)
        tort = _unhex(resume["tortoise"], dt)
        hare = _unhex(resume["hare"], dt)
        _rearm(ctl, budget)
    else:
        ctl = np.zeros(8, dtype=np.int64)
        tort = np.zeros_like(x0a)
        hare = np.zeros_like(x0a)
    fn = (backend.brent_plane_f64 if dt == np.float64
          else backend.brent_plane_f32)

    def call():
        return fn(spec.map_id, spec.a, spec.b, x0a, tort, hare, ctl, budget,
                  chunk)

    def snapshot():
        return {"ctl": [int(v) for v in ctl], "tortoise": _hexlist(tort),
                "hare": _hexlist(hare)}

    phase = _drive(call, on_chunk, snapshot)
    if phase == backend.PH_BUDGET:
        return None
    return CycleReport(period=int(ctl[5]), tail=int(ctl[4]),
                       witness=(float(tort[0]), float(tort[1])),
                       iterations=int(ctl[3]))


def hunt_lattice(spec: maps.MapSpec, n_lattice: int, j0: int, budget: int,
                 chunk: int = DEFAULT_CHUNK, on_chunk=None,
                 resume: dict | None = None) -> CycleReport | None:
    """Cycle of the lattice orbit of index j0 (no successor table needed)."""
    require_lattice_map(spec)
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if not 0 <= j0 < n_lattice:
        raise ValueError(f"lattice index {j0} outside [0, {n_lattice})")
    if resume is not None:
        ctl = np.array(resume["ctl"], dtype=np.int64)
        state = np.array(resume["state"], dtype=np.int64)
        _rearm(ctl, budget)
    else:
        ctl = np.zeros(8, dtype=np.int64)
        state = np.array([j0, 0, 0], dtype=np.int64)

    def call():
        return backend.brent_lattice_f64(spec.map_id, spec.a, spec.l,
                                         n_lattice, state, ctl, budget, chunk)

    def snapshot():
        return {"ctl": [int(v) for v in ctl], "state": [int(v) for v in state]}

    phase = _drive(call, on_chunk, snapshot)
    if phase == backend.PH_BUDGET:
        return None
    return CycleReport(period=int(ctl[5]), tail=int(ctl[4]),
                       witness=int(state[1]), iterations=int(ctl[3]))


# ---------------------------------------------------------------------------
# exact lattice decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitRecord:
    cycle_id: int  # 1-based rank after the canonical sort
    period: int
    basin: int
    min_index: int


@dataclass
class OrbitTable:
    n: int
    records: list[OrbitRecord]

    def relative(self, rec: OrbitRecord) -> float:
        return rec.basin / self.n


def build_next_table(spec: maps.MapSpec, n_lattice: int,
                     max_points: int = MAX_TABLE_POINTS) -> np.ndarray:
    """int32 successor table out[j] = lattice image of j."""
    require_lattice_map(spec)
    if n_lattice < 2:
        raise ValueError("lattice size must be >= 2")
    if n_lattice > max_points:
        raise EnumerationTooLarge(
            f"lattice of {n_lattice} points exceeds the table cap "
            f"{max_points}; raise the cap explicitly if you have the memory")
    out = np.empty(n_lattice, dtype=np.int32)
    backend.lattice_next_f64(spec.map_id, spec.a, spec.l, n_lattice, out)
    return out


def enumerate_table(nxt: np.ndarray, workers: int = 1) -> OrbitTable:
    """Exact functional-graph decomposition of a successor table.

    Every index is visited once; each record reports a cycle's minimal
    period, its total basin size (cycle states included), and the smallest
    lattice index on the cycle. Basins partition the lattice, so basins sum
    to N exactly. `workers` shards the start indices into that many
    contiguous ranges; shard composition is associative, so the output is
    identical for any worker count (records come back canonically sorted:
    basin descending, then period, then min_index).
    """
    nxt = np.ascontiguousarray(nxt, dtype=np.int32)
    n = nxt.shape[0]
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if n == 0:
        return OrbitTable(0, [])
    if nxt.min() < 0 or nxt.max() >= n:
        raise ValueError("successor table has out-of-range entries")
    color = np.zeros(n, dtype=np.uint8)
    cycle_of = np.full(n, -1, dtype=np.int32)
    path = np.empty(n, dtype=np.int32)
    per = np.zeros(1024, dtype=np.int64)
    bas = np.zeros(1024, dtype=np.int64)
    mni = np.zeros(1024, dtype=np.int64)
    ncyc = 0
    bounds = np.linspace(0, n, workers + 1).astype(np.int64)
    for w in range(workers):
        ncyc, per, bas, mni = backend.enumerate_range(
            nxt, color, cycle_of, path, per, bas, mni, ncyc,
            int(bounds[w]), int(bounds[w + 1]))
    per = per[:ncyc]
    bas = bas[:ncyc]
    mni = mni[:ncyc]
    total = int(bas.sum())
    if total != n:
        raise AssertionError(f"basins sum to {total}, expected {n}")
    order = np.lexsort((mni, per, -bas))
    records = [OrbitRecord(cycle_id=rank + 1, period=int(per[i]),
                           basin=int(bas[i]), min_index=int(mni[i]))
               for rank, i in enumerate(order)]
    return OrbitTable(n, records)


def enumerate_lattice(spec: maps.MapSpec, n_lattice: int, workers: int = 1,
                      max_points: int = MAX_TABLE_POINTS) -> OrbitTable:
    """Build the successor table for the map and decompose it."""
    return enumerate_table(build_next_table(spec, n_lattice, max_points),
                           workers=workers)


# ---------------------------------------------------------------------------
# sampled orbit structure (float modes and huge lattices)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CycleGroup:
    period: int
    hits: int
    witness: object  # canonical on-cycle state: lexicographic minimum


@dataclass
class SampleResult:
    groups: list[CycleGroup]
    not_found: int
    seeds: int

    def relative(self, g: CycleGroup) -> float:
        return g.hits / self.seeds


def _grouped(found, not_found, seeds):
    tally: dict = {}
    for key, period, witness in found:
        if key in tally:
            tally[key][1] += 1
        else:
            tally[key] = [period, 1, witness]
    groups = [CycleGroup(period=v[0], hits=v[1], witness=v[2])
              for v in tally.values()]
    groups.sort(key=lambda g: (-g.hits, g.period, repr(g.witness)))
    return SampleResult(groups=groups, not_found=not_found, seeds=seeds)


def sample_coupled(spec: maps.MapSpec, matrix: CouplingMatrix, seeds,
                   budget: int, chunk: int = DEFAULT_CHUNK) -> SampleResult:
    """Hunt a cycle from every seed state and group the finds by cycle.

    Two seeds land in the same group iff they reach the same cycle: each
    found cycle is canonicalized to its lexicographically smallest state,
    compared bit for bit. Budget-exhausted seeds go to the overflow count.
    """
    dt = matrix.entries.dtype
    fn_min = (backend.cycle_min_coupled_f64 if dt == np.float64
              else backend.cycle_min_coupled_f32)
    found = []
    not_found = 0
    total = 0
    for x0 in seeds:
        total += 1
        rep = hunt_coupled(spec, matrix, x0, budget, chunk)
        if rep is None:
            not_found += 1
            continue
        canon = np.asarray(rep.witness, dtype=dt).copy()
        fn_min(spec.map_id, spec.a, spec.l, matrix.entries, canon, rep.period)
        found.append(((rep.period, canon.tobytes()), rep.period,
                      tuple(float(v) for v in canon)))
    return _grouped(found, not_found, total)


def sample_plane(spec: maps.MapSpec, seeds, budget: int,
                 chunk: int = DEFAULT_CHUNK, dtype=np.float64) -> SampleResult:
    dt = np.dtype(dtype).type
    fn_min = (backend.cycle_min_plane_f64 if np.dtype(dtype) == np.float64
              else backend.cycle_min_plane_f32)
    found = []
    not_found = 0
    total = 0
    for xy0 in seeds:
        total += 1
        rep = hunt_plane(spec, xy0, budget, chunk, dtype=dt)
        if rep is None:
            not_found += 1
            continue
        canon = np.asarray(rep.witness, dtype=dt).copy()
        fn_min(spec.map_id, spec.a, spec.b, canon, rep.period)
        found.append(((rep.period, canon.tobytes()), rep.period,
                      (float(canon[0]), float(canon[1]))))
    return _grouped(found, not_found, total)


def sample_lattice(spec: maps.MapSpec, n_lattice: int, seeds, budget: int,
                   chunk: int = DEFAULT_CHUNK) -> SampleResult:
    """Sampled basin structure of a lattice too large to enumerate."""
    require_lattice_map(spec)
    found = []
    not_found = 0
    total = 0
    for j0 in seeds:
        total += 1
        rep = hunt_lattice(spec, n_lattice, int(j0), budget, chunk)
        if rep is None:
            not_found += 1
            continue
        mn = backend.cycle_min_lattice_f64(spec.map_id, spec.a, spec.l,
                                           n_lattice, rep.witness, rep.period)
        found.append(((rep.period, int(mn)), rep.period, int(mn)))
    return _grouped(found, not_found, total)
