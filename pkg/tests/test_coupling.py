"""Coupling matrices and coupled iteration."""

import math

import numpy as np
import pytest

from chaoslab import arithmetic as ar
from chaoslab import coupling, maps
from chaoslab.coupling import CouplingConfig, InfeasibleCouplingError


def test_linear_ratio_matrix_entries_exact():
    # eps1=0.1, p=2, linear ratios: row i has 1-eps_i on the diagonal and
    # eps_i everywhere else.  1-0.1 / 1-0.2 round to the literals 0.9 / 0.8.
    m = coupling.build_matrix(CouplingConfig(p=2, eps1=0.1), ar.BINARY64)
    want = np.array([[0.9, 0.1], [0.2, 0.8]])
    assert np.array_equal(m.entries, want)
    assert m.entries.dtype == np.float64


def test_boundary_zero_diagonal_builds():
    # eps1=0.5, p=2: second row diagonal is exactly 0 (stochastic boundary)
    m = coupling.build_matrix(CouplingConfig(p=2, eps1=0.5), ar.BINARY64)
    want = np.array([[0.5, 0.5], [1.0, 0.0]])
    assert np.array_equal(m.entries, want)


def test_infeasible_coupling_raises():
    with pytest.raises(InfeasibleCouplingError):
        coupling.build_matrix(CouplingConfig(p=2, eps1=0.6), ar.BINARY64)
    with pytest.raises(InfeasibleCouplingError):
        coupling.build_matrix(CouplingConfig(p=3, eps1=0.3), ar.BINARY64)
    # custom ratios pushing any diagonal negative (eps2 = 1.2 here)
    with pytest.raises(InfeasibleCouplingError):
        coupling.build_matrix(
            CouplingConfig(p=2, eps1=0.2, ratios=(1.0, 6.0)), ar.BINARY64)


def test_matrix_built_in_target_precision():
    m32 = coupling.build_matrix(CouplingConfig(p=2, eps1=1e-7), ar.BINARY32)
    assert m32.entries.dtype == np.float32
    assert m32.entries[0, 1] == np.float32(1e-7)
    # f32 rounding happens before the diagonal subtraction
    assert m32.entries[0, 0] == np.float32(1.0) - np.float32(1e-7)


def test_row_sum_defect_small():
    for p in (1, 2, 3, 5, 7):
        m = coupling.build_matrix(CouplingConfig(p=p, eps1=1e-14),
                                  ar.BINARY64)
        assert m.row_sum_defect() <= 2 * np.finfo(np.float64).eps


def test_lattice_mode_rejected():
    with pytest.raises(ValueError):
        coupling.build_matrix(CouplingConfig(p=2, eps1=0.1), ar.lattice(100))


def test_config_validation():
    with pytest.raises(ValueError):
        CouplingConfig(p=0)
    with pytest.raises(ValueError):
        CouplingConfig(p=2, eps1=-1e-3)
    with pytest.raises(ValueError):
        CouplingConfig(p=2, eps1=1e-3, ratios=(1.0,))    # wrong length
    cfg = CouplingConfig(p=3, eps1=1e-7)
    assert cfg.effective_ratios() == (1.0, 2.0, 3.0)


def test_p1_equals_bare_map_orbit():
    spec = maps.make_map("tent")
    m = coupling.build_matrix(CouplingConfig(p=1), ar.BINARY64)
    x = 0.37
    xs = coupling.iterate(spec, m, (x,), 200)
    for _ in range(200):
        x = maps.eval_map(spec, x)
    assert xs[0] == x


def test_zero_coupling_components_independent():
    spec = maps.make_map("tent")
    m = coupling.build_matrix(CouplingConfig(p=3, eps1=0.0), ar.BINARY64)
    seeds = (0.330, 0.3387564, 0.3313534)
    got = coupling.iterate(spec, m, seeds, 150)
    m1 = coupling.build_matrix(CouplingConfig(p=1), ar.BINARY64)
    for i, s in enumerate(seeds):
        solo = coupling.iterate(spec, m1, (s,), 150)
        assert got[i] == solo[0]


def test_step_matches_hand_rolled_row_products():
    spec = maps.make_map("tent")
    m = coupling.build_matrix(CouplingConfig(p=2, eps1=0.1), ar.BINARY64)
    x = (0.330, 0.3387564)
    fx = [maps.eval_map(spec, v) for v in x]
    want = []
    for i in range(2):
        s = m.entries[i, 0] * fx[0]
        s = s + m.entries[i, 1] * fx[1]
        want.append(s)
    got = coupling.step(spec, m, x)
    assert list(got) == want


def test_trajectory_and_iterate_agree():
    spec = maps.make_map("tent")
    m = coupling.build_matrix(CouplingConfig(p=3, eps1=1e-14), ar.BINARY64)
    seeds = (0.330, 0.3387564, 0.3313534)
    traj = coupling.trajectory(spec, m, seeds, 500)
    assert traj.shape == (500, 3)
    end = coupling.iterate(spec, m, seeds, 500)
    assert np.array_equal(traj[-1], end)
    # transient: trajectory after q steps equals the tail of the full one
    tail = coupling.trajectory(spec, m, seeds, 400, transient=100)
    assert np.array_equal(tail, traj[100:])


def test_iterate_minmax_matches_trajectory_extrema():
    spec = maps.make_map("tent")
    m = coupling.build_matrix(CouplingConfig(p=2, eps1=1e-7), ar.BINARY32)
    seeds = (0.330, 0.3387564)
    traj = coupling.trajectory(spec, m, seeds, 2000)
    x, lo, hi = coupling.iterate_minmax(spec, m, seeds, 2000)
    assert np.array_equal(x, traj[-1])
    assert lo == float(traj.min())
    assert hi == float(traj.max())


def test_trajectory_component_slices_full_trajectory():
    spec = maps.make_map("tent")
    m = coupling.build_matrix(CouplingConfig(p=3, eps1=1e-14), ar.BINARY64)
    seeds = (0.330, 0.3387564, 0.3313534)
    traj = coupling.trajectory(spec, m, seeds, 300)
    for c in range(3):
        comp = coupling.trajectory_component(spec, m, seeds, 300, component=c)
        assert np.array_equal(comp, traj[:, c])


def test_interleaved_component_order():
    spec = maps.make_map("tent")
    m = coupling.build_matrix(CouplingConfig(p=2, eps1=1e-7), ar.BINARY64)
    seeds = (0.330, 0.3387564)
    traj = coupling.trajectory(spec, m, seeds, 100)
    mixed = coupling.trajectory_component(spec, m, seeds, 100, component=None)
    assert mixed.shape == (200,)
    assert np.array_equal(mixed.reshape(100, 2), traj)


def test_domain_and_shape_validation():
    spec = maps.make_map("tent")
    m = coupling.build_matrix(CouplingConfig(p=2, eps1=0.1), ar.BINARY64)
    with pytest.raises(ValueError):
        coupling.iterate(spec, m, (0.1,), 10)           # wrong length
    with pytest.raises(ValueError):
        coupling.iterate(spec, m, (0.1, 1.5), 10)       # outside [-1, 1]
    with pytest.raises(ValueError):
        coupling.iterate(maps.make_map("henon"), m, (0.1, 0.1), 10)


def test_f32_seeds_rounded_once():
    spec = maps.make_map("tent")
    m = coupling.build_matrix(CouplingConfig(p=2, eps1=1e-7), ar.BINARY32)
    one = coupling.iterate(spec, m, (0.330, 0.3387564), 1)
    f = np.float32
    fx0 = f(1.0) - f(2.0) * abs(f(0.330))
    fx1 = f(1.0) - f(2.0) * abs(f(0.3387564))
    want0 = m.entries[0, 0] * fx0 + m.entries[0, 1] * fx1
    assert one[0] == f(want0)
