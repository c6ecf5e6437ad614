"""Invariant-distribution measurement: box histograms, density estimates,
and discrepancies against reference densities.

The sample interval (default [-1, 1]) is split into M boxes of equal width;
the last box is closed so the right endpoint bins. A density estimate scales
counts by (M/N)/(hi-lo), i.e. (1/2)(M/N) on the default interval, so a
perfectly uniform sample has density 1/(hi-lo) everywhere and total mass 1.

Discrepancies against a reference density (sampled at box midpoints):

    E1       sum_i |P_i - ref(mid_i)| * width      (L1)
    E2^2     sum_i (P_i - ref(mid_i))^2 * width    (squared L2)
    E1_trunc E1 restricted to boxes wholly inside [-cut, cut]

Per-box terms are accumulated with math.fsum (exactly rounded), so sums do
not depend on summation order and the truncated E1 can never exceed E1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from chaoslab import backend
from chaoslab import maps
from chaoslab.coupling import CouplingMatrix

C_L2_IID = 0.5  # E[E2^2] = C * M / N for an iid uniform sample (exact)


class MeasureDomainError(ValueError):
    """A sample fell outside the histogram interval."""


@dataclass
class Histogram:
    m: int
    counts: np.ndarray  # int64, length m
    samples: int
    lo: float = -1.0
    hi: float = 1.0

    def edges(self) -> np.ndarray:
        """m+1 box edges s_i = lo + (hi-lo)*i/M (exact order: ((hi-lo)*i)/M)."""
        i = np.arange(self.m + 1, dtype=np.float64)
        return self.lo + ((self.hi - self.lo) * i) / self.m

    def midpoints(self) -> np.ndarray:
        e = self.edges()
        return 0.5 * (e[:-1] + e[1:])

    @property
    def width(self) -> float:
        return (self.hi - self.lo) / self.m


@dataclass
class DensityEstimate:
    m: int
    values: np.ndarray  # per-box density, length m
    samples: int
    lo: float = -1.0
    hi: float = 1.0

    def edges(self) -> np.ndarray:
        i = np.arange(self.m + 1, dtype=np.float64)
        return self.lo + ((self.hi - self.lo) * i) / self.m

    def midpoints(self) -> np.ndarray:
        e = self.edges()
        return 0.5 * (e[:-1] + e[1:])

    @property
    def width(self) -> float:
        return (self.hi - self.lo) / self.m

    def total_mass(self) -> float:
        return math.fsum(float(v) * self.width for v in self.values)


def _check_box_count(m: int) -> None:
    if m < 1:
        raise ValueError(f"need at least one box, got {m}")


def bin_index(x: float, m: int, lo: float = -1.0, hi: float = 1.0) -> int:
    """Box index of x: floor((x - lo) * (M/(hi-lo))), last box closed."""
    _check_box_count(m)
    if not (lo <= x <= hi):
        raise MeasureDomainError(f"sample {x!r} outside [{lo}, {hi}]")
    factor = float(m) / (hi - lo)
    t = (x - lo) * factor
    idx = int(t)
    if idx >= m:
        idx = m - 1
    return idx


def accumulate(stream: Iterable[float] | np.ndarray, m: int,
               transient: int = 0, lo: float = -1.0,
               hi: float = 1.0) -> Histogram:
    """Histogram of a value stream, skipping the first `transient` values."""
    _check_box_count(m)
    counts = np.zeros(m, dtype=np.int64)
    if isinstance(stream, np.ndarray):
        xs = np.asarray(stream, dtype=np.float64).ravel()[transient:]
        if xs.size and (xs.min() < lo or xs.max() > hi):
            bad = xs[(xs < lo) | (xs > hi)][0]
            raise MeasureDomainError(f"sample {bad!r} outside [{lo}, {hi}]")
        factor = float(m) / (hi - lo)
        idx = ((xs - lo) * factor).astype(np.int64)
        np.minimum(idx, m - 1, out=idx)
        counts += np.bincount(idx, minlength=m).astype(np.int64)
        return Histogram(m, counts, int(xs.size), lo, hi)
    n = 0
    for k, x in enumerate(stream):
        if k < transient:
            continue
        counts[bin_index(float(x), m, lo, hi)] += 1
        n += 1
    return Histogram(m, counts, n, lo, hi)


def accumulate_coupled(spec: maps.MapSpec, matrix: CouplingMatrix, x0,
                       n: int, m: int, transient: int = 0,
                       component: int | None = 0) -> Histogram:
    """Histogram of a coupled-system run on [-1, 1], kernel-fused.

    Advances transient + n steps from x0 and bins the post-transient states:
    one component per step (component=i), or all p interleaved per step
    (component=None, the mixed sequence, n*p samples).
    """
    _check_box_count(m)
    if n < 0 or transient < 0:
        raise ValueError("counts must be >= 0")
    dt = matrix.entries.dtype
    x = np.asarray(x0, dtype=dt).copy()
    if x.shape != (matrix.p,):
        raise ValueError(f"initial state must have length p={matrix.p}")
    comp = -1 if component is None else int(component)
    if comp >= 0 and not comp < matrix.p:
        raise ValueError(f"component {comp} outside 0..{matrix.p - 1}")
    counts = np.zeros(m, dtype=np.int64)
    fn = (backend.hist_coupled_f64 if dt == np.float64
          else backend.hist_coupled_f32)
    err = fn(spec.map_id, spec.a, spec.l, matrix.entries, x, n, transient,
             counts, comp)
    if err:
        raise MeasureDomainError(
            f"trajectory left [-1, 1] (state {x.tolist()})")
    samples = n * matrix.p if comp < 0 else n
    return Histogram(m, counts, samples, -1.0, 1.0)


def merge(h1: Histogram, h2: Histogram) -> Histogram:
    """Combine two histograms of the same geometry (shard merging)."""
    if (h1.m, h1.lo, h1.hi) != (h2.m, h2.lo, h2.hi):
        raise ValueError("histograms have different geometry")
    return Histogram(h1.m, h1.counts + h2.counts, h1.samples + h2.samples,
                     h1.lo, h1.hi)


def density(hist: Histogram) -> DensityEstimate:
    """Counts scaled to a piecewise-constant density: (M/N)/(hi-lo) each."""
    if hist.samples < 1:
        raise ValueError("empty histogram has no density")
    t = float(hist.m) / float(hist.samples)
    factor = t / (hist.hi - hist.lo)
    values = hist.counts * factor
    return DensityEstimate(hist.m, values, hist.samples, hist.lo, hist.hi)


# ---------------------------------------------------------------------------
# reference densities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReferenceDensity:
    name: str
    fn: Callable[[np.ndarray], np.ndarray]

    def pdf(self, xs) -> np.ndarray:
        return self.fn(np.asarray(xs, dtype=np.float64))

    def at_midpoints(self, dens: DensityEstimate) -> np.ndarray:
        return self.pdf(dens.midpoints())


def lebesgue(lo: float = -1.0, hi: float = 1.0) -> ReferenceDensity:
    h = 1.0 / (hi - lo)
    return ReferenceDensity("lebesgue", lambda xs: np.full_like(xs, h))


def arcsine_sym() -> ReferenceDensity:
    """Invariant density 1/(pi sqrt(1-x^2)) of 1 - 2x^2 on (-1, 1)."""
    return ReferenceDensity(
        "arcsine", lambda xs: 1.0 / (np.pi * np.sqrt(1.0 - xs * xs)))


def arcsine_unit() -> ReferenceDensity:
    """Invariant density 1/(pi sqrt(x(1-x))) of the logistic map on (0, 1)."""
    return ReferenceDensity(
        "arcsine-unit", lambda xs: 1.0 / (np.pi * np.sqrt(xs * (1.0 - xs))))


def arcsine_sym_pdf(x: float) -> float:
    return 1.0 / (math.pi * math.sqrt(1.0 - x * x))


def arcsine_unit_pdf(x: float) -> float:
    return 1.0 / (math.pi * math.sqrt(x * (1.0 - x)))


def logistic_to_uniform(x):
    """Conjugacy arccos(-x)/pi: pushes the arcsine law of 1 - 2x^2 on
    [-1, 1] to the uniform law on [0, 1]. Accepts scalars or arrays."""
    if isinstance(x, np.ndarray):
        return np.arccos(-x) / np.pi
    return math.acos(-float(x)) / math.pi


def mix_components(states: np.ndarray) -> np.ndarray:
    """Interleave an (n, p) trajectory into the length n*p mixed sequence
    x^1_1, ..., x^p_1, x^1_2, ..."""
    states = np.asarray(states)
    if states.ndim != 2:
        raise ValueError("expected an (n, p) trajectory")
    return states.reshape(-1)


# ---------------------------------------------------------------------------
# discrepancies
# ---------------------------------------------------------------------------

def _terms_l1(dens: DensityEstimate, ref: ReferenceDensity) -> list[float]:
    rv = ref.at_midpoints(dens)
    w = dens.width
    out = []
    for v, r in zip(dens.values, rv):
        d = float(v) - float(r)
        out.append(abs(d) * w)
    return out


def err_l1(dens: DensityEstimate, ref: ReferenceDensity) -> float:
    """L1 discrepancy between the estimate and the reference."""
    return math.fsum(_terms_l1(dens, ref))


def err_l2_sq(dens: DensityEstimate, ref: ReferenceDensity) -> float:
    """Squared L2 discrepancy."""
    rv = ref.at_midpoints(dens)
    w = dens.width
    terms = []
    for v, r in zip(dens.values, rv):
        d = float(v) - float(r)
        terms.append((d * d) * w)
    return math.fsum(terms)


def err_l1_truncated(dens: DensityEstimate, ref: ReferenceDensity,
                     cut: float = 0.98) -> float:
    """E1 over the boxes lying wholly inside [-cut, cut].

    Discounts the arcsine edge singularities; with the same per-box terms
    and exact summation this is <= err_l1 by construction.
    """
    if cut <= 0.0:
        raise ValueError("cut must be positive")
    terms = _terms_l1(dens, ref)
    edges = dens.edges()
    kept = [t for i, t in enumerate(terms)
            if edges[i] >= -cut and edges[i + 1] <= cut]
    return math.fsum(kept)


def iid_l1_reference(m: int, n: int) -> float:
    """Expected E1 of n iid uniform samples against their own law:
    sqrt(2M/(pi N)) in the large-count regime (independent of the interval)."""
    return math.sqrt((2.0 * m) / (math.pi * n))


def iid_l2_sq_reference(m: int, n: int) -> float:
    """Expected E2^2 of n iid uniform samples: C_L2_IID * M / N exactly."""
    return C_L2_IID * m / n


def ks_two_sample(a: np.ndarray, b: np.ndarray) -> float:
    """Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|."""
    a = np.sort(np.asarray(a, dtype=np.float64).ravel())
    b = np.sort(np.asarray(b, dtype=np.float64).ravel())
    if a.size == 0 or b.size == 0:
        raise ValueError("need nonempty samples")
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))
