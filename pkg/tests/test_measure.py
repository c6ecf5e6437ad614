"""Histograms, density estimates, reference laws, and discrepancies.

scipy supplies the independent oracles (quad for the arcsine integrals,
ks_2samp for the two-sample statistic); exact-summation claims are checked
against Fraction arithmetic.
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats
from scipy.integrate import quad

from chaoslab import arithmetic as ar
from chaoslab import coupling, maps, measure
from chaoslab.coupling import CouplingConfig
from chaoslab.measure import Histogram, MeasureDomainError


# ---------------------------------------------------------------------------
# binning
# ---------------------------------------------------------------------------

def test_bin_index_edges():
    assert measure.bin_index(-1.0, 8) == 0
    assert measure.bin_index(1.0, 8) == 7          # right endpoint closed
    assert measure.bin_index(np.nextafter(1.0, -2.0), 8) == 7
    assert measure.bin_index(0.0, 8) == 4
    assert measure.bin_index(-0.25, 8) == 3
    assert measure.bin_index(0.5, 10, lo=0.0, hi=1.0) == 5
    assert measure.bin_index(0.0, 1) == 0


def test_bin_index_domain_and_count_errors():
    with pytest.raises(MeasureDomainError):
        measure.bin_index(1.0000001, 8)
    with pytest.raises(MeasureDomainError):
        measure.bin_index(-1.0000001, 8)
    with pytest.raises(ValueError):
        measure.bin_index(0.0, 0)


def test_accumulate_vectorized_equals_scalar_loop(rng):
    xs = rng.uniform(-1.0, 1.0, 5000)
    hv = measure.accumulate(xs, 64)
    hs = measure.accumulate(list(xs), 64)
    assert np.array_equal(hv.counts, hs.counts)
    assert hv.samples == hs.samples == 5000
    assert int(hv.counts.sum()) == 5000


def test_accumulate_transient_skips_prefix(rng):
    xs = rng.uniform(-1.0, 1.0, 3000)
    ha = measure.accumulate(xs, 32, transient=500)
    hb = measure.accumulate(xs[500:], 32)
    assert np.array_equal(ha.counts, hb.counts)
    assert ha.samples == 2500
    hc = measure.accumulate(iter(list(xs)), 32, transient=500)
    assert np.array_equal(ha.counts, hc.counts)


def test_accumulate_domain_error_on_both_paths():
    bad = np.array([0.0, 1.5, 0.2])
    with pytest.raises(MeasureDomainError):
        measure.accumulate(bad, 8)
    with pytest.raises(MeasureDomainError):
        measure.accumulate(list(bad), 8)


def test_accumulate_custom_interval(rng):
    xs = rng.uniform(0.0, 1.0, 2000)
    h = measure.accumulate(xs, 16, lo=0.0, hi=1.0)
    assert int(h.counts.sum()) == 2000
    d = measure.density(h)
    assert abs(d.total_mass() - 1.0) < 1e-12
    e1 = measure.err_l1(d, measure.lebesgue(0.0, 1.0))
    assert e1 < 5 * measure.iid_l1_reference(16, 2000)


def test_merge_equals_whole(rng):
    xs = rng.uniform(-1.0, 1.0, 4000)
    whole = measure.accumulate(xs, 50)
    parts = measure.merge(measure.accumulate(xs[:1500], 50),
                          measure.accumulate(xs[1500:], 50))
    assert np.array_equal(whole.counts, parts.counts)
    assert whole.samples == parts.samples
    with pytest.raises(ValueError):
        measure.merge(whole, measure.accumulate(xs, 51))


def test_density_normalization_and_empty():
    h = Histogram(4, np.array([1, 2, 3, 4], dtype=np.int64), 10)
    d = measure.density(h)
    assert abs(d.total_mass() - 1.0) < 1e-12
    # uniform counts on [-1, 1] give density 1/2 in every box
    hu = Histogram(5, np.full(5, 7, dtype=np.int64), 35)
    assert np.allclose(measure.density(hu).values, 0.5, rtol=0, atol=1e-15)
    with pytest.raises(ValueError):
        measure.density(Histogram(4, np.zeros(4, dtype=np.int64), 0))


def test_histogram_geometry():
    h = Histogram(4, np.zeros(4, dtype=np.int64), 0)
    assert np.array_equal(h.edges(), [-1.0, -0.5, 0.0, 0.5, 1.0])
    assert np.array_equal(h.midpoints(), [-0.75, -0.25, 0.25, 0.75])
    assert h.width == 0.5


# ---------------------------------------------------------------------------
# discrepancies and exact summation
# ---------------------------------------------------------------------------

def test_err_l1_is_exactly_rounded_sum(rng):
    counts = rng.integers(0, 50, 64)
    h = Histogram(64, counts.astype(np.int64), int(counts.sum()))
    d = measure.density(h)
    ref = measure.lebesgue()
    terms = measure._terms_l1(d, ref)
    # fsum equals the correctly rounded exact (Fraction) sum, in any order
    exact = float(sum(Fraction(t) for t in terms))
    assert measure.err_l1(d, ref) == exact
    assert math.fsum(sorted(terms)) == exact
    assert math.fsum(sorted(terms, reverse=True)) == exact


def test_err_l2_sq_matches_direct_formula(rng):
    counts = rng.integers(0, 50, 32)
    h = Histogram(32, counts.astype(np.int64), int(counts.sum()))
    d = measure.density(h)
    ref = measure.arcsine_sym()
    rv = ref.at_midpoints(d)
    want = math.fsum((float(v) - float(r)) ** 2 * d.width
                     for v, r in zip(d.values, rv))
    assert measure.err_l2_sq(d, ref) == want


def test_truncated_l1_never_exceeds_full(rng):
    for _ in range(20):
        counts = rng.integers(0, 30, 40)
        h = Histogram(40, counts.astype(np.int64), max(1, int(counts.sum())))
        if counts.sum() == 0:
            continue
        d = measure.density(h)
        ref = measure.arcsine_sym()
        full = measure.err_l1(d, ref)
        for cut in (0.5, 0.9, 0.98, 1.0):
            assert measure.err_l1_truncated(d, ref, cut) <= full
    with pytest.raises(ValueError):
        measure.err_l1_truncated(d, ref, 0.0)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 1000), min_size=1, max_size=80))
def test_count_conservation_and_mass_property(raw):
    counts = np.array(raw, dtype=np.int64)
    n = int(counts.sum())
    if n == 0:
        return
    h = Histogram(len(raw), counts, n)
    assert int(h.counts.sum()) == h.samples
    assert abs(measure.density(h).total_mass() - 1.0) < 1e-12


# ---------------------------------------------------------------------------
# reference densities
# ---------------------------------------------------------------------------

def test_arcsine_densities_integrate_to_one():
    v, err = quad(measure.arcsine_sym_pdf, -1.0, 1.0)
    assert abs(v - 1.0) < 1e-8 and err < 1e-8
    v, err = quad(measure.arcsine_unit_pdf, 0.0, 1.0)
    assert abs(v - 1.0) < 1e-8 and err < 1e-8


def test_reference_pdf_vector_scalar_agree():
    xs = np.linspace(-0.95, 0.95, 101)
    sym = measure.arcsine_sym()
    assert np.array_equal(sym.pdf(xs),
                          [measure.arcsine_sym_pdf(x) for x in xs])
    us = np.linspace(0.05, 0.95, 91)
    unit = measure.arcsine_unit()
    assert np.array_equal(unit.pdf(us),
                          [measure.arcsine_unit_pdf(x) for x in us])
    h = Histogram(10, np.ones(10, dtype=np.int64), 10)
    d = measure.density(h)
    assert np.array_equal(sym.at_midpoints(d), sym.pdf(d.midpoints()))


def test_lebesgue_reference_height():
    assert np.array_equal(measure.lebesgue().pdf([0.0, 0.5]), [0.5, 0.5])
    assert np.array_equal(measure.lebesgue(0.0, 1.0).pdf([0.3]), [1.0])


def test_iid_reference_values():
    assert measure.iid_l1_reference(10 ** 5, 10 ** 8) == pytest.approx(
        0.025231325220201602, rel=0, abs=1e-15)
    assert measure.iid_l2_sq_reference(100, 10 ** 5) == 0.5 * 100 / 10 ** 5
    assert measure.C_L2_IID == 0.5


def test_iid_uniform_calibration(rng):
    # one seeded draw; an iid sample should land near both references
    xs = rng.uniform(-1.0, 1.0, 100_000)
    d = measure.density(measure.accumulate(xs, 100))
    ref = measure.lebesgue()
    e1 = measure.err_l1(d, ref)
    assert 0.6 < e1 / measure.iid_l1_reference(100, 100_000) < 1.5
    e2 = measure.err_l2_sq(d, ref)
    assert 0.5 < e2 / measure.iid_l2_sq_reference(100, 100_000) < 1.8


# ---------------------------------------------------------------------------
# conjugacy pushforward and mixing
# ---------------------------------------------------------------------------

def test_logistic_to_uniform_inverts_arcsine_synthesis(rng):
    u = rng.uniform(0.0, 1.0, 10_000)
    xs = -np.cos(np.pi * u)      # exact arcsine-law synthesis
    back = measure.logistic_to_uniform(xs)
    assert np.allclose(back, u, rtol=0, atol=1e-12)
    assert measure.logistic_to_uniform(0.0) == 0.5
    assert abs(measure.logistic_to_uniform(-0.5) - 1.0 / 3.0) < 1e-15


def test_logistic_iterates_push_to_uniform():
    spec = maps.make_map("logistic-sym")
    m1 = coupling.build_matrix(CouplingConfig(p=1), ar.BINARY64)
    traj = coupling.trajectory_component(spec, m1, (0.3,), 200_000)
    u = measure.logistic_to_uniform(traj)
    ks = measure.ks_two_sample(u, np.linspace(0.0, 1.0, 100_001))
    assert ks < 0.01


def test_mix_components():
    states = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
    assert np.array_equal(measure.mix_components(states),
                          [1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
    with pytest.raises(ValueError):
        measure.mix_components(np.arange(4.0))


# ---------------------------------------------------------------------------
# fused coupled accumulation
# ---------------------------------------------------------------------------

def test_accumulate_coupled_matches_trajectory_path():
    spec = maps.make_map("tent")
    mat = coupling.build_matrix(CouplingConfig(p=3, eps1=1e-3), ar.BINARY64)
    x0 = (0.3, 0.4, 0.5)
    n, m, q = 4096, 128, 64
    fused = measure.accumulate_coupled(spec, mat, x0, n, m, transient=q)
    traj = coupling.trajectory_component(spec, mat, x0, n, transient=q)
    assert np.array_equal(fused.counts,
                          measure.accumulate(traj, m).counts)
    assert fused.samples == n


def test_accumulate_coupled_mixed_components():
    spec = maps.make_map("tent")
    mat = coupling.build_matrix(CouplingConfig(p=3, eps1=1e-3), ar.BINARY64)
    x0 = (0.3, 0.4, 0.5)
    n, m = 2048, 64
    fused = measure.accumulate_coupled(spec, mat, x0, n, m, component=None)
    states = coupling.trajectory(spec, mat, x0, n)
    mixed = measure.mix_components(states)
    assert np.array_equal(fused.counts, measure.accumulate(mixed, m).counts)
    assert fused.samples == n * 3


def test_accumulate_coupled_f32_and_validation():
    spec = maps.make_map("tent")
    mat = coupling.build_matrix(CouplingConfig(p=2, eps1=1e-7), ar.BINARY32)
    x0 = (np.float32(0.33), np.float32(0.34))
    fused = measure.accumulate_coupled(spec, mat, x0, 1000, 32)
    traj = coupling.trajectory_component(spec, mat, x0, 1000)
    assert np.array_equal(fused.counts, measure.accumulate(
        traj.astype(np.float64), 32).counts)
    with pytest.raises(ValueError):
        measure.accumulate_coupled(spec, mat, (0.1,), 10, 8)
    with pytest.raises(ValueError):
        measure.accumulate_coupled(spec, mat, x0, 10, 8, component=2)
    with pytest.raises(ValueError):
        measure.accumulate_coupled(spec, mat, x0, -1, 8)


def test_accumulate_coupled_flags_domain_escape():
    # tent from 2.0 maps to -3, outside the histogram interval
    spec = maps.make_map("tent")
    m1 = coupling.build_matrix(CouplingConfig(p=1), ar.BINARY64)
    with pytest.raises(MeasureDomainError):
        measure.accumulate_coupled(spec, m1, (2.0,), 10, 8)


# ---------------------------------------------------------------------------
# two-sample statistic
# ---------------------------------------------------------------------------

def test_ks_two_sample_extremes():
    a = np.array([0.1, 0.2, 0.3])
    assert measure.ks_two_sample(a, a.copy()) == 0.0
    b = np.array([2.0, 3.0])
    assert measure.ks_two_sample(a, b) == 1.0
    with pytest.raises(ValueError):
        measure.ks_two_sample(a, np.array([]))


def test_ks_two_sample_matches_scipy(rng):
    a = rng.normal(0.0, 1.0, 500)
    b = rng.normal(0.3, 1.2, 700)
    ours = measure.ks_two_sample(a, b)
    assert ours == pytest.approx(
        stats.ks_2samp(a, b, method="asymp").statistic, rel=0, abs=1e-12)
