"""Shared test helpers.

The naive orbit oracle here is deliberately independent of the package's
enumeration kernels: it walks every start index with visit stamps and
Python dicts. Slow, obviously correct, used to cross-check the fast path.
"""

import numpy as np
import pytest

from chaoslab import backend, maps


def naive_orbit_structure(spec, n):
    """(period, basin, min_index) rows in canonical order, by brute force."""
    nxt = [backend.lattice_apply_f64(spec.map_id, spec.a, spec.l, n, j)
           for j in range(n)]
    return naive_table_structure(nxt)


def naive_table_structure(nxt):
    """Same decomposition for a raw successor list."""
    n = len(nxt)
    state = [0] * n            # 0 unseen, 1 on path, 2 resolved
    cyc_of = [-1] * n
    cycles = []                # (period, min index)
    for s in range(n):
        if state[s] == 2:
            continue
        path = []
        j = s
        while state[j] == 0:
            state[j] = 1
            path.append(j)
            j = nxt[j]
        if state[j] == 1:
            # closed a fresh cycle at j
            members = path[path.index(j):]
            cid = len(cycles)
            cycles.append((len(members), min(members)))
            for q in members:
                cyc_of[q] = cid
        cid = cyc_of[j]
        for q in path:
            if cyc_of[q] == -1:
                cyc_of[q] = cid
            state[q] = 2
    basin = [0] * len(cycles)
    for cid in cyc_of:
        basin[cid] += 1
    rows = [(per, basin[cid], mi) for cid, (per, mi) in enumerate(cycles)]
    rows.sort(key=lambda r: (-r[1], r[0], r[2]))
    return rows


def orbit_rows(table):
    return [(r.period, r.basin, r.min_index) for r in table.records]


@pytest.fixture
def rng():
    return np.random.default_rng(20260819)


def two_backends():
    """(module, name) pairs; compiled only when the extension built."""
    import chaoslab._purepy as pure
    out = [(pure, "pure")]
    try:
        import chaoslab._kernels as comp
        out.append((comp, "compiled"))
    except ImportError:
        pass
    return out


def domain_samples(spec, rng, k, dtype=np.float64):
    lo, hi = spec.domain
    xs = rng.uniform(lo, hi, k).astype(dtype)
    if dtype == np.float32:
        # rounding can push just past an open edge
        xs = xs[(xs >= lo) & (xs <= hi)]
    return xs
