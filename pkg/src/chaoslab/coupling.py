"""Weak coupling of p identical interval maps through a stochastic matrix.

One step is X' = A f(X): apply the map to every component, then mix with the
p x p matrix A. Row i of A has 1 - (p-1) eps_i on the diagonal and eps_i
elsewhere, so each row sums to one and the unit cube of the map's domain is
carried into itself. The default rule grows the couplings linearly,
eps_i = i * eps1; custom per-row multipliers are accepted.

Matrix entries are built in the target arithmetic (binary32 entries are
float32 from the start), so a binary32 run never touches a double.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from chaoslab import backend
from chaoslab import maps
from chaoslab.arithmetic import ArithMode, BINARY64


class InfeasibleCouplingError(ValueError):
    """Raised when 1 - (p-1) eps_p would go negative."""


@dataclass(frozen=True)
class CouplingConfig:
    """p generators coupled with base strength eps1.

    ratios: per-component multipliers c_i with eps_i = c_i * eps1;
    None means the linear rule c_i = i.
    """

    p: int
    eps1: float = 0.0
    ratios: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"p must be >= 1, got {self.p}")
        if not np.isfinite(self.eps1) or self.eps1 < 0.0:
            raise ValueError(f"eps1 must be finite and >= 0, got {self.eps1}")
        if self.ratios is not None:
            if len(self.ratios) != self.p:
                raise ValueError(
                    f"need {self.p} ratios, got {len(self.ratios)}")
            for c in self.ratios:
                if not np.isfinite(c) or c < 0.0:
                    raise ValueError(f"ratios must be finite and >= 0: {c}")

    def effective_ratios(self) -> tuple[float, ...]:
        if self.ratios is not None:
            return tuple(float(c) for c in self.ratios)
        return tuple(float(i) for i in range(1, self.p + 1))


@dataclass
class CouplingMatrix:
    config: CouplingConfig
    mode: ArithMode
    entries: np.ndarray = field(repr=False)

    @property
    def p(self) -> int:
        return self.config.p

    def row_sum_defect(self) -> float:
        """max_i |sum_j A_ij - 1|, computed exactly (fsum in binary64)."""
        import math
        worst = 0.0
        for row in self.entries:
            s = math.fsum(float(v) for v in row)
            worst = max(worst, abs(s - 1.0))
        return worst


def build_matrix(config: CouplingConfig, mode: ArithMode = BINARY64) -> CouplingMatrix:
    """Coupling matrix in the target arithmetic.

    Row i: eps_i everywhere, 1 - (p-1) eps_i on the diagonal, both computed
    in the mode's precision. Raises InfeasibleCouplingError if any diagonal
    would be negative (boundary zero is allowed).
    """
    if mode.kind == "lattice":
        raise ValueError("coupled systems are defined in float arithmetic only")
    dt = mode.dtype
    p = config.p
    one = dt(1.0)
    pm1 = dt(p - 1)
    eps1 = dt(config.eps1)
    ratios = config.effective_ratios()
    a = np.zeros((p, p), dtype=dt)
    for i in range(p):
        eps_i = dt(ratios[i]) * eps1
        t = pm1 * eps_i
        d = one - t
        if d < 0.0:
            raise InfeasibleCouplingError(
                f"row {i + 1}: 1 - (p-1)*eps = {float(d)} < 0 "
                f"(eps1={config.eps1}, ratio={ratios[i]}, p={p})")
        a[i, :] = eps_i
        a[i, i] = d
    return CouplingMatrix(config=config, mode=mode, entries=a)


def _check_system(spec: maps.MapSpec, matrix: CouplingMatrix, x0) -> np.ndarray:
    if spec.is_plane:
        raise ValueError("coupling applies to interval maps; "
                         "plane maps iterate through the orbits module")
    x = np.asarray(x0, dtype=matrix.entries.dtype).copy()
    if x.ndim != 1 or x.shape[0] != matrix.p:
        raise ValueError(f"initial state must have length p={matrix.p}")
    lo, hi = spec.domain
    for v in x:
        if not np.isfinite(v) or v < lo or v > hi:
            raise ValueError(f"initial component {float(v)} outside "
                             f"[{lo}, {hi}] domain of {spec.kind}")
    return x


def _kernel(matrix: CouplingMatrix, name64: str, name32: str):
    if matrix.entries.dtype == np.float64:
        return getattr(backend, name64)
    return getattr(backend, name32)


def step(spec: maps.MapSpec, matrix: CouplingMatrix, x) -> np.ndarray:
    """One coupled step X -> A f(X); returns a new state array."""
    x = _check_system(spec, matrix, x)
    out = x.copy()
    fn = _kernel(matrix, "iterate_coupled_f64", "iterate_coupled_f32")
    fn(spec.map_id, spec.a, spec.l, matrix.entries, out, 1)
    return out


def iterate(spec: maps.MapSpec, matrix: CouplingMatrix, x0, n: int,
            sink=None) -> np.ndarray:
    """n coupled steps from x0; returns the final state.

    sink, if given, receives a copy of every post-step state (python-loop
    path, meant for modest n; the fast kernels run when sink is None).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    x = _check_system(spec, matrix, x0)
    if sink is None:
        fn = _kernel(matrix, "iterate_coupled_f64", "iterate_coupled_f32")
        fn(spec.map_id, spec.a, spec.l, matrix.entries, x, n)
        return x
    fn = _kernel(matrix, "iterate_coupled_f64", "iterate_coupled_f32")
    for _ in range(n):
        fn(spec.map_id, spec.a, spec.l, matrix.entries, x, 1)
        sink(x.copy())
    return x


def iterate_minmax(spec: maps.MapSpec, matrix: CouplingMatrix, x0,
                   n: int) -> tuple[np.ndarray, float, float]:
    """n steps; returns (final state, min, max) over all visited components."""
    x = _check_system(spec, matrix, x0)
    fn = _kernel(matrix, "minmax_coupled_f64", "minmax_coupled_f32")
    lo, hi = fn(spec.map_id, spec.a, spec.l, matrix.entries, x, n)
    return x, float(lo), float(hi)


def trajectory(spec: maps.MapSpec, matrix: CouplingMatrix, x0, n: int,
               transient: int = 0) -> np.ndarray:
    """(n, p) array of the post-step states after skipping `transient`.

    The initial state itself is not recorded. Final state is row -1.
    """
    x = _check_system(spec, matrix, x0)
    out = np.empty(n * matrix.p, dtype=matrix.entries.dtype)
    fn = _kernel(matrix, "traj_coupled_f64", "traj_coupled_f32")
    fn(spec.map_id, spec.a, spec.l, matrix.entries, x, n, transient, out, -1)
    return out.reshape(n, matrix.p)


def trajectory_component(spec: maps.MapSpec, matrix: CouplingMatrix, x0,
                         n: int, transient: int = 0,
                         component: int | None = 0) -> np.ndarray:
    """Length-n array of one component of the post-step states.

    component=None interleaves all p components step by step (length n*p).
    """
    x = _check_system(spec, matrix, x0)
    if component is None:
        comp = -1
        out = np.empty(n * matrix.p, dtype=matrix.entries.dtype)
    else:
        if not 0 <= component < matrix.p:
            raise ValueError(
                f"component {component} outside 0..{matrix.p - 1}")
        comp = component
        out = np.empty(n, dtype=matrix.entries.dtype)
    fn = _kernel(matrix, "traj_coupled_f64", "traj_coupled_f32")
    fn(spec.map_id, spec.a, spec.l, matrix.entries, x, n, transient, out,
       comp)
    return out
