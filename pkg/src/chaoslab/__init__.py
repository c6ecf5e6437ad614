"""chaoslab: a deterministic laboratory for discretized chaotic maps.

Weakly coupled tent/logistic generators, exact orbit structure under
binary32/binary64/lattice arithmetic, invariant-measure discrepancies and
their scaling laws, and a reproducible chaotic number stream.
"""

from chaoslab.backend import BACKEND
from chaoslab.arithmetic import (ArithMode, BINARY32, BINARY64, LatticePoint,
                                 cast_real, lattice, lattice_map, parse_arith,
                                 parse_count, round_to_lattice)
from chaoslab.coupling import (CouplingConfig, CouplingMatrix,
                               InfeasibleCouplingError, build_matrix, iterate,
                               step, trajectory, trajectory_component)
from chaoslab.maps import (MapSpec, circle_map, circle_map_shifted, dp_family,
                           eval_map, eval_map32, eval_map_array, eval_plane,
                           folded_logistic, henon, henon_fixed_points,
                           logistic, logistic_sym, lozi, make_map, tent)
from chaoslab.measure import (DensityEstimate, Histogram, MeasureDomainError,
                              ReferenceDensity, accumulate, accumulate_coupled,
                              arcsine_sym, arcsine_unit, bin_index, density,
                              err_l1, err_l1_truncated, err_l2_sq,
                              ks_two_sample, lebesgue, logistic_to_uniform,
                              merge, mix_components)
from chaoslab.fit import FitResult, PlaneFit, linfit, planefit, scaling_fit
from chaoslab.orbits import (CycleGroup, CycleReport, EnumerationTooLarge,
                             OrbitRecord, OrbitTable, SampleResult,
                             classify_period, detect_cycle, enumerate_lattice,
                             enumerate_table, hunt_coupled, hunt_lattice,
                             hunt_plane, sample_coupled, sample_lattice,
                             sample_plane)
from chaoslab.stream import ChaoticStream, GeneratorConfig

__version__ = "0.1.0"

__all__ = [
    "ArithMode", "BACKEND", "BINARY32", "BINARY64", "ChaoticStream",
    "CouplingConfig", "CouplingMatrix", "CycleGroup", "CycleReport",
    "DensityEstimate", "EnumerationTooLarge", "FitResult", "GeneratorConfig",
    "Histogram", "InfeasibleCouplingError", "LatticePoint", "MapSpec",
    "MeasureDomainError", "OrbitRecord", "OrbitTable", "PlaneFit",
    "ReferenceDensity", "SampleResult", "accumulate", "accumulate_coupled",
    "arcsine_sym", "arcsine_unit", "bin_index", "build_matrix", "cast_real",
    "circle_map", "circle_map_shifted", "classify_period", "density",
    "detect_cycle", "dp_family", "enumerate_lattice", "enumerate_table",
    "err_l1", "err_l1_truncated", "err_l2_sq", "eval_map", "eval_map32",
    "eval_map_array", "eval_plane", "folded_logistic", "henon",
    "henon_fixed_points", "hunt_coupled", "hunt_lattice", "hunt_plane",
    "iterate", "ks_two_sample", "lattice", "lattice_map", "lebesgue",
    "linfit", "logistic", "logistic_sym", "logistic_to_uniform", "lozi",
    "make_map", "merge", "mix_components", "parse_arith", "parse_count",
    "planefit", "round_to_lattice", "sample_coupled", "sample_lattice",
    "sample_plane", "scaling_fit", "step", "tent", "trajectory",
    "trajectory_component", "__version__",
]
