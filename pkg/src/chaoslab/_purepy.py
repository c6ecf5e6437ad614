"""Pure-Python twin of the compiled kernels.

Same function names, same signatures, same operation order and rounding
points as ``_kernels``; every result is bit-identical (the parity tests
enforce this). Binary64 paths use Python floats (IEEE double, one rounding
per operation); binary32 paths use numpy float32 scalars, which stay float32
under arithmetic with Python-float operands.

Orders of magnitude slower than the extension; it exists so the package
works without a C toolchain and as an executable specification of the
kernels.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "pure"

MAP_TENT = 0
MAP_LOGISTIC_UNIT = 1
MAP_LOGISTIC_SYM = 2
MAP_FOLDED_LOGISTIC = 3
MAP_CIRCLE = 4
MAP_CIRCLE_SHIFTED = 5
MAP_DP = 6
MAP_HENON = 7
MAP_LOZI = 8

PH_INIT = 0
PH_SEARCH = 1
PH_ADV = 2
PH_WALK = 3
PH_FOUND = 4
PH_BUDGET = 5

_F32 = np.float32
_ONE = _F32(1.0)
_TWO = _F32(2.0)
_HALF = _F32(0.5)
_ZERO = _F32(0.0)


# ---------------------------------------------------------------------------
# scalar map evaluation
# ---------------------------------------------------------------------------

def eval1d_f64(map_id: int, a: float, l: float, x: float) -> float:
    if map_id == MAP_TENT:
        t = abs(x)
        t = a * t
        return 1.0 - t
    if map_id == MAP_LOGISTIC_UNIT:
        u = 1.0 - x
        u = x * u
        return a * u
    if map_id == MAP_LOGISTIC_SYM:
        u = x * x
        u = 2.0 * u
        return 1.0 - u
    if map_id == MAP_FOLDED_LOGISTIC:
        u = x * x
        u = 2.0 * u
        u = 1.0 - u
        return abs(u)
    if map_id == MAP_CIRCLE:
        t = 2.0 * x
        u = 1.0 - x
        u = x * u
        u = 0.5 * u
        v = t + u
        w = v - math.floor(v)
        if w == 1.0:
            w = 0.0
        return w
    if map_id == MAP_CIRCLE_SHIFTED:
        t = 2.0 * x
        u = x - 1.0
        v = 2.0 - x
        u = x * u
        u = u * v
        u = 0.5 * u
        v = t + u
        w = v - math.floor(v)
        if w == 1.0:
            w = 0.0
        return 1.0 + w
    t = 2.0 * x
    t = 1.0 - t
    t = abs(t)
    t = math.pow(t, l)
    return 1.0 - t


def eval1d_f32(map_id, a, l, x):
    # All operands are np.float32; NEP 50 keeps every op in float32.
    if map_id == MAP_TENT:
        t = abs(x)
        t = a * t
        return _ONE - t
    if map_id == MAP_LOGISTIC_UNIT:
        u = _ONE - x
        u = x * u
        return a * u
    if map_id == MAP_LOGISTIC_SYM:
        u = x * x
        u = _TWO * u
        return _ONE - u
    if map_id == MAP_FOLDED_LOGISTIC:
        u = x * x
        u = _TWO * u
        u = _ONE - u
        return abs(u)
    if map_id == MAP_CIRCLE:
        t = _TWO * x
        u = _ONE - x
        u = x * u
        u = _HALF * u
        v = t + u
        w = v - np.floor(v)
        if w == _ONE:
            w = _ZERO
        return w
    if map_id == MAP_CIRCLE_SHIFTED:
        t = _TWO * x
        u = x - _ONE
        v = _TWO - x
        u = x * u
        u = u * v
        u = _HALF * u
        v = t + u
        w = v - np.floor(v)
        if w == _ONE:
            w = _ZERO
        return _ONE + w
    t = _TWO * x
    t = _ONE - t
    t = abs(t)
    # pinned: double pow, one rounding back to binary32
    t = np.float32(math.pow(float(t), float(l)))
    return _ONE - t


def _step_plane_f64(map_id, a, b, x, y):
    if map_id == MAP_HENON:
        t = x * x
    else:
        t = abs(x)
    t = a * t
    s = y + 1.0
    s = s - t
    return s, b * x


def _step_plane_f32(map_id, a, b, x, y):
    if map_id == MAP_HENON:
        t = x * x
    else:
        t = abs(x)
    t = a * t
    s = y + _ONE
    s = s - t
    return s, b * x


def _step_coupled_f64(map_id, a, l, p, a_flat, x):
    fx = [eval1d_f64(map_id, a, l, x[i]) for i in range(p)]
    out = []
    for i in range(p):
        s = a_flat[i * p] * fx[0]
        for j in range(1, p):
            s = s + a_flat[i * p + j] * fx[j]
        out.append(s)
    return out


def _step_coupled_f32(map_id, a, l, p, a_flat, x):
    fx = [eval1d_f32(map_id, a, l, x[i]) for i in range(p)]
    out = []
    for i in range(p):
        s = a_flat[i * p] * fx[0]
        for j in range(1, p):
            s = s + a_flat[i * p + j] * fx[j]
        out.append(s)
    return out


def _as_lists_f64(A, x):
    p = A.shape[0]
    return p, [float(v) for v in np.asarray(A).ravel()], [float(v) for v in x]


def _as_lists_f32(A, x):
    p = A.shape[0]
    return p, [_F32(v) for v in np.asarray(A).ravel()], [_F32(v) for v in x]


# ---------------------------------------------------------------------------
# iteration, trajectory, histogram
# ---------------------------------------------------------------------------

def iterate_coupled_f64(map_id, a, l, A, x, n):
    p, a_flat, cur = _as_lists_f64(A, x)
    for _ in range(n):
        cur = _step_coupled_f64(map_id, a, l, p, a_flat, cur)
    x[:] = cur


def iterate_coupled_f32(map_id, a, l, A, x, n):
    a = _F32(a)
    l = _F32(l)
    p, a_flat, cur = _as_lists_f32(A, x)
    for _ in range(n):
        cur = _step_coupled_f32(map_id, a, l, p, a_flat, cur)
    x[:] = cur


def minmax_coupled_f64(map_id, a, l, A, x, n):
    p, a_flat, cur = _as_lists_f64(A, x)
    lo = hi = cur[0]
    for _ in range(n):
        cur = _step_coupled_f64(map_id, a, l, p, a_flat, cur)
        for v in cur:
            if v < lo:
                lo = v
            if v > hi:
                hi = v
    x[:] = cur
    return lo, hi


def minmax_coupled_f32(map_id, a, l, A, x, n):
    a = _F32(a)
    l = _F32(l)
    p, a_flat, cur = _as_lists_f32(A, x)
    lo = hi = cur[0]
    for _ in range(n):
        cur = _step_coupled_f32(map_id, a, l, p, a_flat, cur)
        for v in cur:
            if v < lo:
                lo = v
            if v > hi:
                hi = v
    x[:] = cur
    return float(lo), float(hi)


def traj_coupled_f64(map_id, a, l, A, x, n, q, out, component):
    p, a_flat, cur = _as_lists_f64(A, x)
    w = 0
    for k in range(q + n):
        cur = _step_coupled_f64(map_id, a, l, p, a_flat, cur)
        if k >= q:
            if component >= 0:
                out[w] = cur[component]
                w += 1
            else:
                for i in range(p):
                    out[w] = cur[i]
                    w += 1
    x[:] = cur


def traj_coupled_f32(map_id, a, l, A, x, n, q, out, component):
    a = _F32(a)
    l = _F32(l)
    p, a_flat, cur = _as_lists_f32(A, x)
    w = 0
    for k in range(q + n):
        cur = _step_coupled_f32(map_id, a, l, p, a_flat, cur)
        if k >= q:
            if component >= 0:
                out[w] = cur[component]
                w += 1
            else:
                for i in range(p):
                    out[w] = cur[i]
                    w += 1
    x[:] = cur


def hist_coupled_f64(map_id, a, l, A, x, n, q, counts, component):
    p, a_flat, cur = _as_lists_f64(A, x)
    m = counts.shape[0]
    half_m = 0.5 * float(m)
    rng = range(component, component + 1) if component >= 0 else range(p)
    for k in range(q + n):
        cur = _step_coupled_f64(map_id, a, l, p, a_flat, cur)
        if k >= q:
            for i in rng:
                v = cur[i]
                if v < -1.0 or v > 1.0:
                    x[:] = cur
                    return 1
                t = (v + 1.0) * half_m
                idx = int(t)
                if idx >= m:
                    idx = m - 1
                counts[idx] += 1
    x[:] = cur
    return 0


def hist_coupled_f32(map_id, a, l, A, x, n, q, counts, component):
    a = _F32(a)
    l = _F32(l)
    p, a_flat, cur = _as_lists_f32(A, x)
    m = counts.shape[0]
    half_m = 0.5 * float(m)
    rng = range(component, component + 1) if component >= 0 else range(p)
    for k in range(q + n):
        cur = _step_coupled_f32(map_id, a, l, p, a_flat, cur)
        if k >= q:
            for i in rng:
                v = float(cur[i])
                if v < -1.0 or v > 1.0:
                    x[:] = cur
                    return 1
                t = (v + 1.0) * half_m
                idx = int(t)
                if idx >= m:
                    idx = m - 1
                counts[idx] += 1
    x[:] = cur
    return 0


def iterate_plane_f64(map_id, a, b, xy, n):
    x, y = float(xy[0]), float(xy[1])
    for _ in range(n):
        x, y = _step_plane_f64(map_id, a, b, x, y)
    xy[0] = x
    xy[1] = y


def iterate_plane_f32(map_id, a, b, xy, n):
    a = _F32(a)
    b = _F32(b)
    x, y = _F32(xy[0]), _F32(xy[1])
    for _ in range(n):
        x, y = _step_plane_f32(map_id, a, b, x, y)
    xy[0] = x
    xy[1] = y


def traj_plane_f64(map_id, a, b, xy, n, q, out):
    x, y = float(xy[0]), float(xy[1])
    w = 0
    for k in range(q + n):
        x, y = _step_plane_f64(map_id, a, b, x, y)
        if k >= q:
            out[w, 0] = x
            out[w, 1] = y
            w += 1
    xy[0] = x
    xy[1] = y


def traj_plane_f32(map_id, a, b, xy, n, q, out):
    a = _F32(a)
    b = _F32(b)
    x, y = _F32(xy[0]), _F32(xy[1])
    w = 0
    for k in range(q + n):
        x, y = _step_plane_f32(map_id, a, b, x, y)
        if k >= q:
            out[w, 0] = x
            out[w, 1] = y
            w += 1
    xy[0] = x
    xy[1] = y


# ---------------------------------------------------------------------------
# Brent cycle detection (resumable state machine, see _kernels docstring)
# ---------------------------------------------------------------------------

def _brent(step, bits, x0_s, tortoise, hare, ctl, budget, chunk, write_back):
    """Shared driver; step/bits operate on opaque state values."""
    phase, power, lam, steps = int(ctl[0]), int(ctl[1]), int(ctl[2]), int(ctl[3])
    mu, lamf, k = int(ctl[4]), int(ctl[5]), int(ctl[6])
    t_s, h_s = tortoise, hare
    used = 0

    if phase == PH_INIT:
        t_s = x0_s
        h_s = step(x0_s)
        steps = 1
        used = 1
        power = 1
        lam = 1
        phase = PH_SEARCH

    while phase == PH_SEARCH and used < chunk:
        if bits(t_s) == bits(h_s):
            lamf = lam
            t_s = x0_s
            h_s = x0_s
            k = 0
            mu = 0
            phase = PH_ADV
            break
        if lam == power:
            t_s = h_s
            power *= 2
            lam = 0
        if steps >= budget:
            phase = PH_BUDGET
            break
        h_s = step(h_s)
        lam += 1
        steps += 1
        used += 1

    while phase == PH_ADV and used < chunk:
        if k >= lamf:
            phase = PH_WALK
            break
        h_s = step(h_s)
        k += 1
        steps += 1
        used += 1

    while phase == PH_WALK and used < chunk:
        if bits(t_s) == bits(h_s):
            phase = PH_FOUND
            break
        t_s = step(t_s)
        h_s = step(h_s)
        mu += 1
        steps += 2
        used += 2

    ctl[0], ctl[1], ctl[2], ctl[3] = phase, power, lam, steps
    ctl[4], ctl[5], ctl[6] = mu, lamf, k
    write_back(t_s, h_s)
    return phase


def brent_coupled_f64(map_id, a, l, A, x0, tortoise, hare, ctl, budget, chunk):
    p, a_flat, x0_l = _as_lists_f64(A, x0)

    def step(s):
        return tuple(_step_coupled_f64(map_id, a, l, p, a_flat, s))

    def bits(s):
        return np.asarray(s, dtype=np.float64).tobytes()

    def write_back(t_s, h_s):
        tortoise[:] = t_s
        hare[:] = h_s

    return _brent(step, bits, tuple(x0_l), [float(v) for v in tortoise],
                  [float(v) for v in hare], ctl, budget, chunk, write_back)


def brent_coupled_f32(map_id, a, l, A, x0, tortoise, hare, ctl, budget, chunk):
    a = _F32(a)
    l = _F32(l)
    p, a_flat, x0_l = _as_lists_f32(A, x0)

    def step(s):
        return tuple(_step_coupled_f32(map_id, a, l, p, a_flat, s))

    def bits(s):
        return np.asarray(s, dtype=np.float32).tobytes()

    def write_back(t_s, h_s):
        tortoise[:] = t_s
        hare[:] = h_s

    return _brent(step, bits, tuple(x0_l), [_F32(v) for v in tortoise],
                  [_F32(v) for v in hare], ctl, budget, chunk, write_back)


def brent_plane_f64(map_id, a, b, x0, tortoise, hare, ctl, budget, chunk):
    def step(s):
        return _step_plane_f64(map_id, a, b, s[0], s[1])

    def bits(s):
        return np.asarray(s, dtype=np.float64).tobytes()

    def write_back(t_s, h_s):
        tortoise[:] = t_s
        hare[:] = h_s

    return _brent(step, bits, (float(x0[0]), float(x0[1])),
                  (float(tortoise[0]), float(tortoise[1])),
                  (float(hare[0]), float(hare[1])), ctl, budget, chunk,
                  write_back)


def brent_plane_f32(map_id, a, b, x0, tortoise, hare, ctl, budget, chunk):
    a = _F32(a)
    b = _F32(b)

    def step(s):
        return _step_plane_f32(map_id, a, b, s[0], s[1])

    def bits(s):
        return np.asarray(s, dtype=np.float32).tobytes()

    def write_back(t_s, h_s):
        tortoise[:] = t_s
        hare[:] = h_s

    return _brent(step, bits, (_F32(x0[0]), _F32(x0[1])),
                  (_F32(tortoise[0]), _F32(tortoise[1])),
                  (_F32(hare[0]), _F32(hare[1])), ctl, budget, chunk,
                  write_back)


# ---------------------------------------------------------------------------
# canonical cycle representative
# ---------------------------------------------------------------------------

def cycle_min_coupled_f64(map_id, a, l, A, state, lam):
    p, a_flat, cur = _as_lists_f64(A, state)
    best = list(cur)
    for _ in range(lam - 1):
        cur = _step_coupled_f64(map_id, a, l, p, a_flat, cur)
        if cur < best:
            best = list(cur)
    state[:] = best


def cycle_min_coupled_f32(map_id, a, l, A, state, lam):
    a = _F32(a)
    l = _F32(l)
    p, a_flat, cur = _as_lists_f32(A, state)
    best = list(cur)
    for _ in range(lam - 1):
        cur = _step_coupled_f32(map_id, a, l, p, a_flat, cur)
        if cur < best:
            best = list(cur)
    state[:] = best


def cycle_min_plane_f64(map_id, a, b, state, lam):
    x, y = float(state[0]), float(state[1])
    bx, by = x, y
    for _ in range(lam - 1):
        x, y = _step_plane_f64(map_id, a, b, x, y)
        if x < bx or (x == bx and y < by):
            bx, by = x, y
    state[0] = bx
    state[1] = by


def cycle_min_plane_f32(map_id, a, b, state, lam):
    a = _F32(a)
    b = _F32(b)
    x, y = _F32(state[0]), _F32(state[1])
    bx, by = x, y
    for _ in range(lam - 1):
        x, y = _step_plane_f32(map_id, a, b, x, y)
        if x < bx or (x == bx and y < by):
            bx, by = x, y
    state[0] = bx
    state[1] = by


# ---------------------------------------------------------------------------
# lattice
# ---------------------------------------------------------------------------

def lattice_next_f64(map_id, a, l, n_lattice, out):
    nd = float(n_lattice)
    for j in range(n_lattice):
        x = float(j) / nd
        v = eval1d_f64(map_id, a, l, x)
        v = v - math.floor(v)
        if v == 1.0:
            v = 0.0
        t = v * nd
        r = round(t)  # round-half-even on the binary64 value, like nearbyint
        if r >= n_lattice:
            r -= n_lattice
        out[j] = r


def enumerate_range(nxt, color, cycle_of, path, per_arr, bas_arr, mni_arr,
                    ncyc, start_lo, start_hi):
    cap = per_arr.shape[0]
    for s in range(start_lo, start_hi):
        if color[s] != 0:
            continue
        top = 0
        u = s
        while color[u] == 0:
            color[u] = 1
            path[top] = u
            top += 1
            u = int(nxt[u])
        if color[u] == 1:
            if ncyc == cap:
                cap *= 2
                per_arr = np.resize(per_arr, cap)
                bas_arr = np.resize(bas_arr, cap)
                mni_arr = np.resize(mni_arr, cap)
            cid = ncyc
            period = 1
            mn = u
            v = int(nxt[u])
            while v != u:
                if v < mn:
                    mn = v
                period += 1
                v = int(nxt[v])
            color[u] = 2
            cycle_of[u] = cid
            v = int(nxt[u])
            while v != u:
                color[v] = 2
                cycle_of[v] = cid
                v = int(nxt[v])
            per_arr[ncyc] = period
            bas_arr[ncyc] = period
            mni_arr[ncyc] = mn
            ncyc += 1
        else:
            cid = int(cycle_of[u])
        extra = 0
        while top > 0:
            top -= 1
            w = path[top]
            if color[w] == 1:
                color[w] = 2
                cycle_of[w] = cid
                extra += 1
        bas_arr[cid] += extra
    return ncyc, per_arr, bas_arr, mni_arr


# ---------------------------------------------------------------------------
# lattice stepping without a successor table
# ---------------------------------------------------------------------------

def _lat_step(map_id, a, l, nd, n, j):
    x = float(j) / nd
    v = eval1d_f64(map_id, a, l, x)
    v = v - math.floor(v)
    if v == 1.0:
        v = 0.0
    v = v * nd
    r = round(v)
    if r >= n:
        r -= n
    return r


def lattice_apply_f64(map_id, a, l, n_lattice, j):
    return _lat_step(map_id, a, l, float(n_lattice), n_lattice, j)


def iterate_lattice_f64(map_id, a, l, n_lattice, j, n):
    nd = float(n_lattice)
    for _ in range(n):
        j = _lat_step(map_id, a, l, nd, n_lattice, j)
    return j


def cycle_min_lattice_f64(map_id, a, l, n_lattice, j, lam):
    nd = float(n_lattice)
    best = j
    for _ in range(lam - 1):
        j = _lat_step(map_id, a, l, nd, n_lattice, j)
        if j < best:
            best = j
    return best


def brent_lattice_f64(map_id, a, l, n_lattice, state, ctl, budget, chunk):
    nd = float(n_lattice)

    def step(j):
        return _lat_step(map_id, a, l, nd, n_lattice, j)

    def bits(j):
        return j

    def write_back(t_s, h_s):
        state[1] = t_s
        state[2] = h_s

    return _brent(step, bits, int(state[0]), int(state[1]), int(state[2]),
                  ctl, budget, chunk, write_back)


# ---------------------------------------------------------------------------
# misc
# ---------------------------------------------------------------------------

def scalar_hits_value_f64(map_id, a, l, x0, target, limit):
    x = x0
    if x == target:
        return 0
    for k in range(1, limit + 1):
        x = eval1d_f64(map_id, a, l, x)
        if x == target:
            return k
    return -1


def scalar_hits_value_f32(map_id, a, l, x0, target, limit):
    a = _F32(a)
    l = _F32(l)
    x = _F32(x0)
    target = _F32(target)
    if x == target:
        return 0
    for k in range(1, limit + 1):
        x = eval1d_f32(map_id, a, l, x)
        if x == target:
            return k
    return -1
