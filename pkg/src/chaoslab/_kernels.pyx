# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: coupled-map iteration, cycle hunting, lattice enumeration.

Every function here has a pure-Python twin in ``_purepy`` with the identical
operation order and rounding points; ``backend`` exposes whichever is
importable. Keep the two in lockstep — the parity tests compare outputs bit
for bit.

Arithmetic contract: one IEEE-754 rounding per written operation, no fused
multiply-add (the build passes -ffp-contract=off), binary32 paths round after
every operation by staying in C float throughout.
"""

from libc.math cimport fabs, floor, pow, nearbyint
from libc.math cimport fabsf, floorf, powf
from libc.string cimport memcmp, memcpy
from libc.stdint cimport int32_t, int64_t, uint8_t

import numpy as np

BACKEND_NAME = "compiled"

# Map codes shared with backend.py (keep both tables in sync).
cdef enum:
    MAP_TENT = 0
    MAP_LOGISTIC_UNIT = 1
    MAP_LOGISTIC_SYM = 2
    MAP_FOLDED_LOGISTIC = 3
    MAP_CIRCLE = 4
    MAP_CIRCLE_SHIFTED = 5
    MAP_DP = 6
    MAP_HENON = 7
    MAP_LOZI = 8

# Brent state-machine phases (ctl[0]).
cdef enum:
    PH_INIT = 0
    PH_SEARCH = 1
    PH_ADV = 2
    PH_WALK = 3
    PH_FOUND = 4
    PH_BUDGET = 5


# ---------------------------------------------------------------------------
# scalar map evaluation
# ---------------------------------------------------------------------------

cdef inline double frac_f64(double v) noexcept nogil:
    cdef double w = v - floor(v)
    if w == 1.0:
        w = 0.0
    return w


cdef inline float frac_f32(float v) noexcept nogil:
    cdef float w = v - floorf(v)
    if w == <float>1.0:
        w = <float>0.0
    return w


cdef inline double eval1d_f64(int map_id, double a, double l, double x) noexcept nogil:
    cdef double t, u, v
    if map_id == MAP_TENT:
        t = fabs(x)
        t = a * t
        return 1.0 - t
    elif map_id == MAP_LOGISTIC_UNIT:
        u = 1.0 - x
        u = x * u
        return a * u
    elif map_id == MAP_LOGISTIC_SYM:
        u = x * x
        u = 2.0 * u
        return 1.0 - u
    elif map_id == MAP_FOLDED_LOGISTIC:
        u = x * x
        u = 2.0 * u
        u = 1.0 - u
        return fabs(u)
    elif map_id == MAP_CIRCLE:
        t = 2.0 * x
        u = 1.0 - x
        u = x * u
        u = 0.5 * u
        v = t + u
        return frac_f64(v)
    elif map_id == MAP_CIRCLE_SHIFTED:
        t = 2.0 * x
        u = x - 1.0
        v = 2.0 - x
        u = x * u
        u = u * v
        u = 0.5 * u
        v = t + u
        return 1.0 + frac_f64(v)
    else:
        t = 2.0 * x
        t = 1.0 - t
        t = fabs(t)
        t = pow(t, l)
        return 1.0 - t


cdef inline float eval1d_f32(int map_id, float a, float l, float x) noexcept nogil:
    cdef float t, u, v
    if map_id == MAP_TENT:
        t = fabsf(x)
        t = a * t
        return <float>1.0 - t
    elif map_id == MAP_LOGISTIC_UNIT:
        u = <float>1.0 - x
        u = x * u
        return a * u
    elif map_id == MAP_LOGISTIC_SYM:
        u = x * x
        u = <float>2.0 * u
        return <float>1.0 - u
    elif map_id == MAP_FOLDED_LOGISTIC:
        u = x * x
        u = <float>2.0 * u
        u = <float>1.0 - u
        return fabsf(u)
    elif map_id == MAP_CIRCLE:
        t = <float>2.0 * x
        u = <float>1.0 - x
        u = x * u
        u = <float>0.5 * u
        v = t + u
        return frac_f32(v)
    elif map_id == MAP_CIRCLE_SHIFTED:
        t = <float>2.0 * x
        u = x - <float>1.0
        v = <float>2.0 - x
        u = x * u
        u = u * v
        u = <float>0.5 * u
        v = t + u
        return <float>1.0 + frac_f32(v)
    else:
        t = <float>2.0 * x
        t = <float>1.0 - t
        t = fabsf(t)
        # binary32 power is pinned to the double pow rounded once; powf
        # differs from it in the last ulp on some libms
        t = <float>pow(<double>t, <double>l)
        return <float>1.0 - t


cdef inline void step_plane_f64(int map_id, double a, double b,
                                double* x, double* y) noexcept nogil:
    cdef double t, s
    if map_id == MAP_HENON:
        t = x[0] * x[0]
    else:
        t = fabs(x[0])
    t = a * t
    s = y[0] + 1.0
    s = s - t
    y[0] = b * x[0]
    x[0] = s


cdef inline void step_plane_f32(int map_id, float a, float b,
                                float* x, float* y) noexcept nogil:
    cdef float t, s
    if map_id == MAP_HENON:
        t = x[0] * x[0]
    else:
        t = fabsf(x[0])
    t = a * t
    s = y[0] + <float>1.0
    s = s - t
    y[0] = b * x[0]
    x[0] = s


# ---------------------------------------------------------------------------
# coupled step: out = A @ f(x), row-major A, accumulation left to right
# ---------------------------------------------------------------------------

cdef inline void step_coupled_f64(int map_id, double a, double l, int p,
                                  const double* A, const double* x,
                                  double* fx, double* out) noexcept nogil:
    cdef int i, j
    cdef double s
    for i in range(p):
        fx[i] = eval1d_f64(map_id, a, l, x[i])
    for i in range(p):
        s = A[i * p] * fx[0]
        for j in range(1, p):
            s = s + A[i * p + j] * fx[j]
        out[i] = s


cdef inline void step_coupled_f32(int map_id, float a, float l, int p,
                                  const float* A, const float* x,
                                  float* fx, float* out) noexcept nogil:
    cdef int i, j
    cdef float s
    for i in range(p):
        fx[i] = eval1d_f32(map_id, a, l, x[i])
    for i in range(p):
        s = A[i * p] * fx[0]
        for j in range(1, p):
            s = s + A[i * p + j] * fx[j]
        out[i] = s


# ---------------------------------------------------------------------------
# iteration, trajectory and histogram drivers
# ---------------------------------------------------------------------------

def iterate_coupled_f64(int map_id, double a, double l, double[:, ::1] A,
                        double[::1] x, int64_t n):
    """Advance the coupled system n steps; x is updated in place."""
    cdef int p = A.shape[0]
    w1 = np.empty(p, dtype=np.float64)
    w2 = np.empty(p, dtype=np.float64)
    wf = np.empty(p, dtype=np.float64)
    cdef double[::1] v1 = w1, v2 = w2, vf = wf
    cdef double* cur = &v1[0]
    cdef double* nxt = &v2[0]
    cdef double* fx = &vf[0]
    cdef double* Ap = &A[0, 0]
    cdef double* tmp
    cdef int64_t k
    memcpy(cur, &x[0], <size_t>p * sizeof(double))
    for k in range(n):
        step_coupled_f64(map_id, a, l, p, Ap, cur, fx, nxt)
        tmp = cur; cur = nxt; nxt = tmp
    memcpy(&x[0], cur, <size_t>p * sizeof(double))


def iterate_coupled_f32(int map_id, float a, float l, float[:, ::1] A,
                        float[::1] x, int64_t n):
    cdef int p = A.shape[0]
    w1 = np.empty(p, dtype=np.float32)
    w2 = np.empty(p, dtype=np.float32)
    wf = np.empty(p, dtype=np.float32)
    cdef float[::1] v1 = w1, v2 = w2, vf = wf
    cdef float* cur = &v1[0]
    cdef float* nxt = &v2[0]
    cdef float* fx = &vf[0]
    cdef float* Ap = &A[0, 0]
    cdef float* tmp
    cdef int64_t k
    memcpy(cur, &x[0], <size_t>p * sizeof(float))
    for k in range(n):
        step_coupled_f32(map_id, a, l, p, Ap, cur, fx, nxt)
        tmp = cur; cur = nxt; nxt = tmp
    memcpy(&x[0], cur, <size_t>p * sizeof(float))


def minmax_coupled_f64(int map_id, double a, double l, double[:, ::1] A,
                       double[::1] x, int64_t n):
    """n steps; returns (min, max) over every component of every visited state."""
    cdef int p = A.shape[0]
    w1 = np.empty(p, dtype=np.float64)
    w2 = np.empty(p, dtype=np.float64)
    wf = np.empty(p, dtype=np.float64)
    cdef double[::1] v1 = w1, v2 = w2, vf = wf
    cdef double* cur = &v1[0]
    cdef double* nxt = &v2[0]
    cdef double* fx = &vf[0]
    cdef double* Ap = &A[0, 0]
    cdef double* tmp
    cdef int64_t k
    cdef int i
    cdef double lo, hi
    memcpy(cur, &x[0], <size_t>p * sizeof(double))
    lo = cur[0]
    hi = cur[0]
    for k in range(n):
        step_coupled_f64(map_id, a, l, p, Ap, cur, fx, nxt)
        tmp = cur; cur = nxt; nxt = tmp
        for i in range(p):
            if cur[i] < lo:
                lo = cur[i]
            if cur[i] > hi:
                hi = cur[i]
    memcpy(&x[0], cur, <size_t>p * sizeof(double))
    return lo, hi


def minmax_coupled_f32(int map_id, float a, float l, float[:, ::1] A,
                       float[::1] x, int64_t n):
    cdef int p = A.shape[0]
    w1 = np.empty(p, dtype=np.float32)
    w2 = np.empty(p, dtype=np.float32)
    wf = np.empty(p, dtype=np.float32)
    cdef float[::1] v1 = w1, v2 = w2, vf = wf
    cdef float* cur = &v1[0]
    cdef float* nxt = &v2[0]
    cdef float* fx = &vf[0]
    cdef float* Ap = &A[0, 0]
    cdef float* tmp
    cdef int64_t k
    cdef int i
    cdef float lo, hi
    memcpy(cur, &x[0], <size_t>p * sizeof(float))
    lo = cur[0]
    hi = cur[0]
    for k in range(n):
        step_coupled_f32(map_id, a, l, p, Ap, cur, fx, nxt)
        tmp = cur; cur = nxt; nxt = tmp
        for i in range(p):
            if cur[i] < lo:
                lo = cur[i]
            if cur[i] > hi:
                hi = cur[i]
    memcpy(&x[0], cur, <size_t>p * sizeof(float))
    return float(lo), float(hi)


def traj_coupled_f64(int map_id, double a, double l, double[:, ::1] A,
                     double[::1] x, int64_t n, int64_t q, double[::1] out,
                     int component):
    """Skip q steps, then record n post-step states into out.

    component >= 0 records that component (out length n); component == -1
    records all p components interleaved per step (out length n*p).
    """
    cdef int p = A.shape[0]
    w1 = np.empty(p, dtype=np.float64)
    w2 = np.empty(p, dtype=np.float64)
    wf = np.empty(p, dtype=np.float64)
    cdef double[::1] v1 = w1, v2 = w2, vf = wf
    cdef double* cur = &v1[0]
    cdef double* nxt = &v2[0]
    cdef double* fx = &vf[0]
    cdef double* Ap = &A[0, 0]
    cdef double* tmp
    cdef int64_t k, w = 0
    cdef int i
    memcpy(cur, &x[0], <size_t>p * sizeof(double))
    for k in range(q + n):
        step_coupled_f64(map_id, a, l, p, Ap, cur, fx, nxt)
        tmp = cur; cur = nxt; nxt = tmp
        if k >= q:
            if component >= 0:
                out[w] = cur[component]
                w += 1
            else:
                for i in range(p):
                    out[w] = cur[i]
                    w += 1
    memcpy(&x[0], cur, <size_t>p * sizeof(double))


def traj_coupled_f32(int map_id, float a, float l, float[:, ::1] A,
                     float[::1] x, int64_t n, int64_t q, float[::1] out,
                     int component):
    cdef int p = A.shape[0]
    w1 = np.empty(p, dtype=np.float32)
    w2 = np.empty(p, dtype=np.float32)
    wf = np.empty(p, dtype=np.float32)
    cdef float[::1] v1 = w1, v2 = w2, vf = wf
    cdef float* cur = &v1[0]
    cdef float* nxt = &v2[0]
    cdef float* fx = &vf[0]
    cdef float* Ap = &A[0, 0]
    cdef float* tmp
    cdef int64_t k, w = 0
    cdef int i
    memcpy(cur, &x[0], <size_t>p * sizeof(float))
    for k in range(q + n):
        step_coupled_f32(map_id, a, l, p, Ap, cur, fx, nxt)
        tmp = cur; cur = nxt; nxt = tmp
        if k >= q:
            if component >= 0:
                out[w] = cur[component]
                w += 1
            else:
                for i in range(p):
                    out[w] = cur[i]
                    w += 1
    memcpy(&x[0], cur, <size_t>p * sizeof(float))


def hist_coupled_f64(int map_id, double a, double l, double[:, ::1] A,
                     double[::1] x, int64_t n, int64_t q, int64_t[::1] counts,
                     int component):
    """Skip q steps, then bin n post-step states over [-1, 1] into counts.

    counts has M boxes of width 2/M, the last box closed. component as in
    traj_coupled_f64 (-1 bins all components: n*p samples). Returns 0, or 1
    if a value left [-1, 1] (state at the offending step is left in x).
    """
    cdef int p = A.shape[0]
    cdef int M = <int>counts.shape[0]
    cdef double half_m = 0.5 * <double>M
    w1 = np.empty(p, dtype=np.float64)
    w2 = np.empty(p, dtype=np.float64)
    wf = np.empty(p, dtype=np.float64)
    cdef double[::1] v1 = w1, v2 = w2, vf = wf
    cdef double* cur = &v1[0]
    cdef double* nxt = &v2[0]
    cdef double* fx = &vf[0]
    cdef double* Ap = &A[0, 0]
    cdef double* tmp
    cdef int64_t k, idx
    cdef int i, lo_c, hi_c
    cdef double v, t
    memcpy(cur, &x[0], <size_t>p * sizeof(double))
    if component >= 0:
        lo_c = component
        hi_c = component + 1
    else:
        lo_c = 0
        hi_c = p
    for k in range(q + n):
        step_coupled_f64(map_id, a, l, p, Ap, cur, fx, nxt)
        tmp = cur; cur = nxt; nxt = tmp
        if k >= q:
            for i in range(lo_c, hi_c):
                v = cur[i]
                if v < -1.0 or v > 1.0:
                    memcpy(&x[0], cur, <size_t>p * sizeof(double))
                    return 1
                t = (v + 1.0) * half_m
                idx = <int64_t>t
                if idx >= M:
                    idx = M - 1
                counts[idx] += 1
    memcpy(&x[0], cur, <size_t>p * sizeof(double))
    return 0


def hist_coupled_f32(int map_id, float a, float l, float[:, ::1] A,
                     float[::1] x, int64_t n, int64_t q, int64_t[::1] counts,
                     int component):
    cdef int p = A.shape[0]
    cdef int M = <int>counts.shape[0]
    cdef double half_m = 0.5 * <double>M
    w1 = np.empty(p, dtype=np.float32)
    w2 = np.empty(p, dtype=np.float32)
    wf = np.empty(p, dtype=np.float32)
    cdef float[::1] v1 = w1, v2 = w2, vf = wf
    cdef float* cur = &v1[0]
    cdef float* nxt = &v2[0]
    cdef float* fx = &vf[0]
    cdef float* Ap = &A[0, 0]
    cdef float* tmp
    cdef int64_t k, idx
    cdef int i, lo_c, hi_c
    cdef double v, t
    memcpy(cur, &x[0], <size_t>p * sizeof(float))
    if component >= 0:
        lo_c = component
        hi_c = component + 1
    else:
        lo_c = 0
        hi_c = p
    for k in range(q + n):
        step_coupled_f32(map_id, a, l, p, Ap, cur, fx, nxt)
        tmp = cur; cur = nxt; nxt = tmp
        if k >= q:
            for i in range(lo_c, hi_c):
                v = <double>cur[i]
                if v < -1.0 or v > 1.0:
                    memcpy(&x[0], cur, <size_t>p * sizeof(float))
                    return 1
                t = (v + 1.0) * half_m
                idx = <int64_t>t
                if idx >= M:
                    idx = M - 1
                counts[idx] += 1
    memcpy(&x[0], cur, <size_t>p * sizeof(float))
    return 0


def iterate_plane_f64(int map_id, double a, double b, double[::1] xy, int64_t n):
    cdef double x = xy[0], y = xy[1]
    cdef int64_t k
    for k in range(n):
        step_plane_f64(map_id, a, b, &x, &y)
    xy[0] = x
    xy[1] = y


def iterate_plane_f32(int map_id, float a, float b, float[::1] xy, int64_t n):
    cdef float x = xy[0], y = xy[1]
    cdef int64_t k
    for k in range(n):
        step_plane_f32(map_id, a, b, &x, &y)
    xy[0] = x
    xy[1] = y


def traj_plane_f64(int map_id, double a, double b, double[::1] xy,
                   int64_t n, int64_t q, double[:, ::1] out):
    cdef double x = xy[0], y = xy[1]
    cdef int64_t k, w = 0
    for k in range(q + n):
        step_plane_f64(map_id, a, b, &x, &y)
        if k >= q:
            out[w, 0] = x
            out[w, 1] = y
            w += 1
    xy[0] = x
    xy[1] = y


def traj_plane_f32(int map_id, float a, float b, float[::1] xy,
                   int64_t n, int64_t q, float[:, ::1] out):
    cdef float x = xy[0], y = xy[1]
    cdef int64_t k, w = 0
    for k in range(q + n):
        step_plane_f32(map_id, a, b, &x, &y)
        if k >= q:
            out[w, 0] = x
            out[w, 1] = y
            w += 1
    xy[0] = x
    xy[1] = y


# ---------------------------------------------------------------------------
# Brent cycle detection, resumable
#
# ctl (int64, length 8): phase, power, lam, steps, mu, lam_found, k, unused.
# Start with ctl zeroed, tortoise/hare same length as x0. Call repeatedly
# until the returned phase is PH_FOUND (4) or PH_BUDGET (5); each call spends
# at most `chunk` map applications, so callers can checkpoint between calls.
# budget caps applications during the search phase; the recovery phases run
# to completion. On PH_FOUND: lam = ctl[5], mu = ctl[4], witness = tortoise
# (the state at iteration mu), steps used = ctl[3].
# ---------------------------------------------------------------------------

def brent_coupled_f64(int map_id, double a, double l, double[:, ::1] A,
                      double[::1] x0, double[::1] tortoise, double[::1] hare,
                      int64_t[::1] ctl, int64_t budget, int64_t chunk):
    cdef int p = A.shape[0]
    cdef size_t nb = <size_t>p * sizeof(double)
    wf = np.empty(p, dtype=np.float64)
    wo = np.empty(p, dtype=np.float64)
    cdef double[::1] vf = wf, vo = wo
    cdef double* fx = &vf[0]
    cdef double* onx = &vo[0]
    cdef double* Ap = &A[0, 0]
    cdef double* tp = &tortoise[0]
    cdef double* hp = &hare[0]
    cdef double* x0p = &x0[0]
    cdef int64_t phase = ctl[0], power = ctl[1], lam = ctl[2], steps = ctl[3]
    cdef int64_t mu = ctl[4], lamf = ctl[5], k = ctl[6]
    cdef int64_t used = 0

    if phase == PH_INIT:
        memcpy(tp, x0p, nb)
        step_coupled_f64(map_id, a, l, p, Ap, x0p, fx, onx)
        memcpy(hp, onx, nb)
        steps = 1
        used = 1
        power = 1
        lam = 1
        phase = PH_SEARCH

    while phase == PH_SEARCH and used < chunk:
        if memcmp(tp, hp, nb) == 0:
            lamf = lam
            memcpy(tp, x0p, nb)
            memcpy(hp, x0p, nb)
            k = 0
            mu = 0
            phase = PH_ADV
            break
        if lam == power:
            memcpy(tp, hp, nb)
            power = power * 2
            lam = 0
        if steps >= budget:
            phase = PH_BUDGET
            break
        step_coupled_f64(map_id, a, l, p, Ap, hp, fx, onx)
        memcpy(hp, onx, nb)
        lam += 1
        steps += 1
        used += 1

    while phase == PH_ADV and used < chunk:
        if k >= lamf:
            phase = PH_WALK
            break
        step_coupled_f64(map_id, a, l, p, Ap, hp, fx, onx)
        memcpy(hp, onx, nb)
        k += 1
        steps += 1
        used += 1

    while phase == PH_WALK and used < chunk:
        if memcmp(tp, hp, nb) == 0:
            phase = PH_FOUND
            break
        step_coupled_f64(map_id, a, l, p, Ap, tp, fx, onx)
        memcpy(tp, onx, nb)
        step_coupled_f64(map_id, a, l, p, Ap, hp, fx, onx)
        memcpy(hp, onx, nb)
        mu += 1
        steps += 2
        used += 2

    ctl[0] = phase; ctl[1] = power; ctl[2] = lam; ctl[3] = steps
    ctl[4] = mu; ctl[5] = lamf; ctl[6] = k
    return phase


def brent_coupled_f32(int map_id, float a, float l, float[:, ::1] A,
                      float[::1] x0, float[::1] tortoise, float[::1] hare,
                      int64_t[::1] ctl, int64_t budget, int64_t chunk):
    cdef int p = A.shape[0]
    cdef size_t nb = <size_t>p * sizeof(float)
    wf = np.empty(p, dtype=np.float32)
    wo = np.empty(p, dtype=np.float32)
    cdef float[::1] vf = wf, vo = wo
    cdef float* fx = &vf[0]
    cdef float* onx = &vo[0]
    cdef float* Ap = &A[0, 0]
    cdef float* tp = &tortoise[0]
    cdef float* hp = &hare[0]
    cdef float* x0p = &x0[0]
    cdef int64_t phase = ctl[0], power = ctl[1], lam = ctl[2], steps = ctl[3]
    cdef int64_t mu = ctl[4], lamf = ctl[5], k = ctl[6]
    cdef int64_t used = 0

    if phase == PH_INIT:
        memcpy(tp, x0p, nb)
        step_coupled_f32(map_id, a, l, p, Ap, x0p, fx, onx)
        memcpy(hp, onx, nb)
        steps = 1
        used = 1
        power = 1
        lam = 1
        phase = PH_SEARCH

    while phase == PH_SEARCH and used < chunk:
        if memcmp(tp, hp, nb) == 0:
            lamf = lam
            memcpy(tp, x0p, nb)
            memcpy(hp, x0p, nb)
            k = 0
            mu = 0
            phase = PH_ADV
            break
        if lam == power:
            memcpy(tp, hp, nb)
            power = power * 2
            lam = 0
        if steps >= budget:
            phase = PH_BUDGET
            break
        step_coupled_f32(map_id, a, l, p, Ap, hp, fx, onx)
        memcpy(hp, onx, nb)
        lam += 1
        steps += 1
        used += 1

    while phase == PH_ADV and used < chunk:
        if k >= lamf:
            phase = PH_WALK
            break
        step_coupled_f32(map_id, a, l, p, Ap, hp, fx, onx)
        memcpy(hp, onx, nb)
        k += 1
        steps += 1
        used += 1

    while phase == PH_WALK and used < chunk:
        if memcmp(tp, hp, nb) == 0:
            phase = PH_FOUND
            break
        step_coupled_f32(map_id, a, l, p, Ap, tp, fx, onx)
        memcpy(tp, onx, nb)
        step_coupled_f32(map_id, a, l, p, Ap, hp, fx, onx)
        memcpy(hp, onx, nb)
        mu += 1
        steps += 2
        used += 2

    ctl[0] = phase; ctl[1] = power; ctl[2] = lam; ctl[3] = steps
    ctl[4] = mu; ctl[5] = lamf; ctl[6] = k
    return phase


def brent_plane_f64(int map_id, double a, double b,
                    double[::1] x0, double[::1] tortoise, double[::1] hare,
                    int64_t[::1] ctl, int64_t budget, int64_t chunk):
    cdef size_t nb = 2 * sizeof(double)
    cdef double* tp = &tortoise[0]
    cdef double* hp = &hare[0]
    cdef double* x0p = &x0[0]
    cdef int64_t phase = ctl[0], power = ctl[1], lam = ctl[2], steps = ctl[3]
    cdef int64_t mu = ctl[4], lamf = ctl[5], k = ctl[6]
    cdef int64_t used = 0

    if phase == PH_INIT:
        memcpy(tp, x0p, nb)
        memcpy(hp, x0p, nb)
        step_plane_f64(map_id, a, b, &hp[0], &hp[1])
        steps = 1
        used = 1
        power = 1
        lam = 1
        phase = PH_SEARCH

    while phase == PH_SEARCH and used < chunk:
        if memcmp(tp, hp, nb) == 0:
            lamf = lam
            memcpy(tp, x0p, nb)
            memcpy(hp, x0p, nb)
            k = 0
            mu = 0
            phase = PH_ADV
            break
        if lam == power:
            memcpy(tp, hp, nb)
            power = power * 2
            lam = 0
        if steps >= budget:
            phase = PH_BUDGET
            break
        step_plane_f64(map_id, a, b, &hp[0], &hp[1])
        lam += 1
        steps += 1
        used += 1

    while phase == PH_ADV and used < chunk:
        if k >= lamf:
            phase = PH_WALK
            break
        step_plane_f64(map_id, a, b, &hp[0], &hp[1])
        k += 1
        steps += 1
        used += 1

    while phase == PH_WALK and used < chunk:
        if memcmp(tp, hp, nb) == 0:
            phase = PH_FOUND
            break
        step_plane_f64(map_id, a, b, &tp[0], &tp[1])
        step_plane_f64(map_id, a, b, &hp[0], &hp[1])
        mu += 1
        steps += 2
        used += 2

    ctl[0] = phase; ctl[1] = power; ctl[2] = lam; ctl[3] = steps
    ctl[4] = mu; ctl[5] = lamf; ctl[6] = k
    return phase


def brent_plane_f32(int map_id, float a, float b,
                    float[::1] x0, float[::1] tortoise, float[::1] hare,
                    int64_t[::1] ctl, int64_t budget, int64_t chunk):
    cdef size_t nb = 2 * sizeof(float)
    cdef float* tp = &tortoise[0]
    cdef float* hp = &hare[0]
    cdef float* x0p = &x0[0]
    cdef int64_t phase = ctl[0], power = ctl[1], lam = ctl[2], steps = ctl[3]
    cdef int64_t mu = ctl[4], lamf = ctl[5], k = ctl[6]
    cdef int64_t used = 0

    if phase == PH_INIT:
        memcpy(tp, x0p, nb)
        memcpy(hp, x0p, nb)
        step_plane_f32(map_id, a, b, &hp[0], &hp[1])
        steps = 1
        used = 1
        power = 1
        lam = 1
        phase = PH_SEARCH

    while phase == PH_SEARCH and used < chunk:
        if memcmp(tp, hp, nb) == 0:
            lamf = lam
            memcpy(tp, x0p, nb)
            memcpy(hp, x0p, nb)
            k = 0
            mu = 0
            phase = PH_ADV
            break
        if lam == power:
            memcpy(tp, hp, nb)
            power = power * 2
            lam = 0
        if steps >= budget:
            phase = PH_BUDGET
            break
        step_plane_f32(map_id, a, b, &hp[0], &hp[1])
        lam += 1
        steps += 1
        used += 1

    while phase == PH_ADV and used < chunk:
        if k >= lamf:
            phase = PH_WALK
            break
        step_plane_f32(map_id, a, b, &hp[0], &hp[1])
        k += 1
        steps += 1
        used += 1

    while phase == PH_WALK and used < chunk:
        if memcmp(tp, hp, nb) == 0:
            phase = PH_FOUND
            break
        step_plane_f32(map_id, a, b, &tp[0], &tp[1])
        step_plane_f32(map_id, a, b, &hp[0], &hp[1])
        mu += 1
        steps += 2
        used += 2

    ctl[0] = phase; ctl[1] = power; ctl[2] = lam; ctl[3] = steps
    ctl[4] = mu; ctl[5] = lamf; ctl[6] = k
    return phase


# ---------------------------------------------------------------------------
# canonical cycle representative: lexicographically smallest state on the
# cycle through `state` (numeric component order), walking lam steps
# ---------------------------------------------------------------------------

def cycle_min_coupled_f64(int map_id, double a, double l, double[:, ::1] A,
                          double[::1] state, int64_t lam):
    cdef int p = A.shape[0]
    cdef size_t nb = <size_t>p * sizeof(double)
    wc = np.empty(p, dtype=np.float64)
    wb = np.array(state, dtype=np.float64, copy=True)
    wf = np.empty(p, dtype=np.float64)
    wo = np.empty(p, dtype=np.float64)
    cdef double[::1] vc = wc, vb = wb, vf = wf, vo = wo
    cdef double* cur = &vc[0]
    cdef double* best = &vb[0]
    cdef double* fx = &vf[0]
    cdef double* onx = &vo[0]
    cdef double* Ap = &A[0, 0]
    cdef int64_t k
    cdef int i, cmp
    memcpy(cur, &state[0], nb)
    for k in range(lam - 1):
        step_coupled_f64(map_id, a, l, p, Ap, cur, fx, onx)
        memcpy(cur, onx, nb)
        cmp = 0
        for i in range(p):
            if cur[i] < best[i]:
                cmp = 1
                break
            if cur[i] > best[i]:
                break
        if cmp:
            memcpy(best, cur, nb)
    memcpy(&state[0], best, nb)


def cycle_min_coupled_f32(int map_id, float a, float l, float[:, ::1] A,
                          float[::1] state, int64_t lam):
    cdef int p = A.shape[0]
    cdef size_t nb = <size_t>p * sizeof(float)
    wc = np.empty(p, dtype=np.float32)
    wb = np.array(state, dtype=np.float32, copy=True)
    wf = np.empty(p, dtype=np.float32)
    wo = np.empty(p, dtype=np.float32)
    cdef float[::1] vc = wc, vb = wb, vf = wf, vo = wo
    cdef float* cur = &vc[0]
    cdef float* best = &vb[0]
    cdef float* fx = &vf[0]
    cdef float* onx = &vo[0]
    cdef float* Ap = &A[0, 0]
    cdef int64_t k
    cdef int i, cmp
    memcpy(cur, &state[0], nb)
    for k in range(lam - 1):
        step_coupled_f32(map_id, a, l, p, Ap, cur, fx, onx)
        memcpy(cur, onx, nb)
        cmp = 0
        for i in range(p):
            if cur[i] < best[i]:
                cmp = 1
                break
            if cur[i] > best[i]:
                break
        if cmp:
            memcpy(best, cur, nb)
    memcpy(&state[0], best, nb)


def cycle_min_plane_f64(int map_id, double a, double b, double[::1] state,
                        int64_t lam):
    cdef double x = state[0], y = state[1]
    cdef double bx = x, by = y
    cdef int64_t k
    for k in range(lam - 1):
        step_plane_f64(map_id, a, b, &x, &y)
        if x < bx or (x == bx and y < by):
            bx = x
            by = y
    state[0] = bx
    state[1] = by


def cycle_min_plane_f32(int map_id, float a, float b, float[::1] state,
                        int64_t lam):
    cdef float x = state[0], y = state[1]
    cdef float bx = x, by = y
    cdef int64_t k
    for k in range(lam - 1):
        step_plane_f32(map_id, a, b, &x, &y)
        if x < bx or (x == bx and y < by):
            bx = x
            by = y
    state[0] = bx
    state[1] = by


# ---------------------------------------------------------------------------
# lattice: next-index table and functional-graph decomposition
# ---------------------------------------------------------------------------

def lattice_next_f64(int map_id, double a, double l, int64_t n_lattice,
                     int32_t[::1] out):
    """out[j] = lattice successor of j: evaluate f at fl(j/N) in binary64,
    reduce mod 1 (exact 1.0 -> 0.0), round to the nearest lattice index with
    ties to even, wrap N -> 0."""
    cdef double nd = <double>n_lattice
    cdef int64_t j, r
    cdef double x, v, t
    for j in range(n_lattice):
        x = (<double>j) / nd
        v = eval1d_f64(map_id, a, l, x)
        v = v - floor(v)
        if v == 1.0:
            v = 0.0
        t = v * nd
        r = <int64_t>nearbyint(t)
        if r >= n_lattice:
            r -= n_lattice
        out[j] = <int32_t>r


def enumerate_range(int32_t[::1] nxt, uint8_t[::1] color, int32_t[::1] cycle_of,
                    int32_t[::1] path, per_arr, bas_arr, mni_arr,
                    int64_t ncyc, int64_t start_lo, int64_t start_hi):
    """Walk every unvisited start index in [start_lo, start_hi); returns
    (ncyc, per_arr, bas_arr, mni_arr), the arrays possibly reallocated.

    color: 0 unvisited, 1 on current path, 2 finalized. cycle_of maps a
    finalized node to its cycle id. Shards over disjoint start ranges with
    shared state compose to the same decomposition in any order.
    """
    cdef int64_t[::1] per = per_arr
    cdef int64_t[::1] bas = bas_arr
    cdef int64_t[::1] mni = mni_arr
    cdef int64_t cap = per.shape[0]
    cdef int64_t s, top, extra, period, mn
    cdef int32_t u, v, w, cid
    for s in range(start_lo, start_hi):
        if color[s] != 0:
            continue
        top = 0
        u = <int32_t>s
        while color[u] == 0:
            color[u] = 1
            path[top] = u
            top += 1
            u = nxt[u]
        if color[u] == 1:
            if ncyc == cap:
                cap = cap * 2
                per_arr = np.resize(per_arr, cap)
                bas_arr = np.resize(bas_arr, cap)
                mni_arr = np.resize(mni_arr, cap)
                per = per_arr
                bas = bas_arr
                mni = mni_arr
            cid = <int32_t>ncyc
            period = 1
            mn = u
            v = nxt[u]
            while v != u:
                if v < mn:
                    mn = v
                period += 1
                v = nxt[v]
            color[u] = 2
            cycle_of[u] = cid
            v = nxt[u]
            while v != u:
                color[v] = 2
                cycle_of[v] = cid
                v = nxt[v]
            per[ncyc] = period
            bas[ncyc] = period
            mni[ncyc] = mn
            ncyc += 1
        else:
            cid = cycle_of[u]
        extra = 0
        while top > 0:
            top -= 1
            w = path[top]
            if color[w] == 1:
                color[w] = 2
                cycle_of[w] = cid
                extra += 1
        bas[cid] += extra
    return ncyc, per_arr, bas_arr, mni_arr


# ---------------------------------------------------------------------------
# lattice stepping without a successor table (N can exceed table memory)
# ---------------------------------------------------------------------------

cdef inline int64_t lat_step(int map_id, double a, double l, double nd,
                             int64_t n, int64_t j) noexcept nogil:
    cdef double x = (<double>j) / nd
    cdef double v = eval1d_f64(map_id, a, l, x)
    cdef int64_t r
    v = v - floor(v)
    if v == 1.0:
        v = 0.0
    v = v * nd
    r = <int64_t>nearbyint(v)
    if r >= n:
        r -= n
    return r


def lattice_apply_f64(int map_id, double a, double l, int64_t n_lattice,
                      int64_t j):
    return lat_step(map_id, a, l, <double>n_lattice, n_lattice, j)


def iterate_lattice_f64(int map_id, double a, double l, int64_t n_lattice,
                        int64_t j, int64_t n):
    cdef double nd = <double>n_lattice
    cdef int64_t k
    for k in range(n):
        j = lat_step(map_id, a, l, nd, n_lattice, j)
    return j


def cycle_min_lattice_f64(int map_id, double a, double l, int64_t n_lattice,
                          int64_t j, int64_t lam):
    cdef double nd = <double>n_lattice
    cdef int64_t best = j, k
    for k in range(lam - 1):
        j = lat_step(map_id, a, l, nd, n_lattice, j)
        if j < best:
            best = j
    return best


def brent_lattice_f64(int map_id, double a, double l, int64_t n_lattice,
                      int64_t[::1] state, int64_t[::1] ctl,
                      int64_t budget, int64_t chunk):
    """Brent over lattice indices; state = [x0, tortoise, hare]."""
    cdef double nd = <double>n_lattice
    cdef int64_t x0 = state[0], tort = state[1], hare = state[2]
    cdef int64_t phase = ctl[0], power = ctl[1], lam = ctl[2], steps = ctl[3]
    cdef int64_t mu = ctl[4], lamf = ctl[5], k = ctl[6]
    cdef int64_t used = 0

    if phase == PH_INIT:
        tort = x0
        hare = lat_step(map_id, a, l, nd, n_lattice, x0)
        steps = 1
        used = 1
        power = 1
        lam = 1
        phase = PH_SEARCH

    while phase == PH_SEARCH and used < chunk:
        if tort == hare:
            lamf = lam
            tort = x0
            hare = x0
            k = 0
            mu = 0
            phase = PH_ADV
            break
        if lam == power:
            tort = hare
            power = power * 2
            lam = 0
        if steps >= budget:
            phase = PH_BUDGET
            break
        hare = lat_step(map_id, a, l, nd, n_lattice, hare)
        lam += 1
        steps += 1
        used += 1

    while phase == PH_ADV and used < chunk:
        if k >= lamf:
            phase = PH_WALK
            break
        hare = lat_step(map_id, a, l, nd, n_lattice, hare)
        k += 1
        steps += 1
        used += 1

    while phase == PH_WALK and used < chunk:
        if tort == hare:
            phase = PH_FOUND
            break
        tort = lat_step(map_id, a, l, nd, n_lattice, tort)
        hare = lat_step(map_id, a, l, nd, n_lattice, hare)
        mu += 1
        steps += 2
        used += 2

    state[0] = x0; state[1] = tort; state[2] = hare
    ctl[0] = phase; ctl[1] = power; ctl[2] = lam; ctl[3] = steps
    ctl[4] = mu; ctl[5] = lamf; ctl[6] = k
    return phase


# ---------------------------------------------------------------------------
# misc scalar helpers
# ---------------------------------------------------------------------------

def scalar_hits_value_f64(int map_id, double a, double l, double x0,
                          double target, int64_t limit):
    """First n in [0, limit] with f^n(x0) == target (numeric equality),
    else -1."""
    cdef double x = x0
    cdef int64_t k
    if x == target:
        return 0
    for k in range(1, limit + 1):
        x = eval1d_f64(map_id, a, l, x)
        if x == target:
            return k
    return -1


def scalar_hits_value_f32(int map_id, float a, float l, float x0,
                          float target, int64_t limit):
    cdef float x = x0
    cdef int64_t k
    if x == target:
        return 0
    for k in range(1, limit + 1):
        x = eval1d_f32(map_id, a, l, x)
        if x == target:
            return k
    return -1
