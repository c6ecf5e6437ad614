"""Interval and plane map definitions.

Each map has a pinned evaluation order (documented in `_purepy`, mirrored by
the compiled kernels), so a given input produces the same bit pattern on
every backend and platform. Scalar helpers here delegate to the pure
reference implementation; bulk evaluation goes through the selected backend.

Interval maps:
    tent             x -> 1 - a|x|            on [-1, 1], 0 < a <= 2
    logistic         x -> a x (1 - x)         on [0, 1],  0 < a <= 4
    logistic-sym     x -> 1 - 2 x^2           on [-1, 1]
    folded-logistic  x -> |1 - 2 x^2|         on [-1, 1] (image [0, 1])
    circle           x -> frac(2x + x(1-x)/2)         on [0, 1)
    circle-shifted   x -> 1 + frac(2x + x(x-1)(2-x)/2) on [1, 2)
    dp               x -> 1 - |1 - 2x|^l      on [0, 1], 1 < l <= 2

Plane maps:
    henon  (x, y) -> (y + 1 - a x^2, b x)
    lozi   (x, y) -> (y + 1 - a|x|,  b x)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from chaoslab import _purepy as _ref

INTERVAL_KINDS = (
    "tent",
    "logistic",
    "logistic-sym",
    "folded-logistic",
    "circle",
    "circle-shifted",
    "dp",
)
PLANE_KINDS = ("henon", "lozi")

# kind -> backend map code
MAP_IDS = {
    "tent": 0,
    "logistic": 1,
    "logistic-sym": 2,
    "folded-logistic": 3,
    "circle": 4,
    "circle-shifted": 5,
    "dp": 6,
    "henon": 7,
    "lozi": 8,
}

_DEFAULTS = {
    "tent": {"a": 2.0},
    "logistic": {"a": 4.0},
    "henon": {"a": 1.4, "b": 0.3},
    "lozi": {"a": 1.7, "b": 0.5},
    "dp": {"l": 2.0},
}

# closed invariant interval of each interval map (at admissible parameters)
_DOMAINS = {
    "tent": (-1.0, 1.0),
    "logistic": (0.0, 1.0),
    "logistic-sym": (-1.0, 1.0),
    "folded-logistic": (-1.0, 1.0),
    "circle": (0.0, 1.0),
    "circle-shifted": (1.0, 2.0),
    "dp": (0.0, 1.0),
}

# maps whose domain is [0,1] and which therefore admit the j/N lattice
LATTICE_KINDS = ("logistic", "folded-logistic", "circle", "dp")


@dataclass(frozen=True)
class MapSpec:
    """A map plus its parameters, validated; build with make_map()."""

    kind: str
    a: float = 0.0
    b: float = 0.0
    l: float = 0.0

    @property
    def map_id(self) -> int:
        return MAP_IDS[self.kind]

    @property
    def is_plane(self) -> bool:
        return self.kind in PLANE_KINDS

    @property
    def domain(self) -> tuple[float, float]:
        if self.is_plane:
            raise ValueError(f"{self.kind} has no interval domain")
        return _DOMAINS[self.kind]

    def label(self) -> str:
        parts = [self.kind]
        if self.kind in ("tent", "logistic"):
            parts.append(f"a={self.a!r}")
        elif self.kind == "dp":
            parts.append(f"l={self.l!r}")
        elif self.is_plane:
            parts.append(f"a={self.a!r}")
            parts.append(f"b={self.b!r}")
        return " ".join(parts)


def make_map(kind: str, a: float | None = None, b: float | None = None,
             l: float | None = None) -> MapSpec:
    """Build a validated MapSpec, filling per-map default parameters.

    Parameter ranges enforce range closure of the interval maps (so long
    iterations cannot leave the stated domain): tent needs 0 < a <= 2,
    logistic 0 < a <= 4, dp 1 < l <= 2. Plane maps accept any real a, b.
    """
    if kind not in MAP_IDS:
        raise ValueError(f"unknown map kind {kind!r}")
    d = _DEFAULTS.get(kind, {})
    av = float(a) if a is not None else float(d.get("a", 0.0))
    bv = float(b) if b is not None else float(d.get("b", 0.0))
    lv = float(l) if l is not None else float(d.get("l", 0.0))
    if kind == "tent" and not 0.0 < av <= 2.0:
        raise ValueError(f"tent slope a={av} outside (0, 2]")
    if kind == "logistic" and not 0.0 < av <= 4.0:
        raise ValueError(f"logistic parameter a={av} outside (0, 4]")
    if kind == "dp" and not 1.0 < lv <= 2.0:
        raise ValueError(f"dp exponent l={lv} outside (1, 2]")
    if kind not in ("tent", "logistic") and kind not in PLANE_KINDS and a is not None:
        raise ValueError(f"map {kind!r} takes no parameter a")
    if kind != "dp" and l is not None:
        raise ValueError(f"map {kind!r} takes no parameter l")
    if kind not in PLANE_KINDS and b is not None:
        raise ValueError(f"map {kind!r} takes no parameter b")
    return MapSpec(kind, av, bv, lv)


# ---------------------------------------------------------------------------
# scalar evaluation (binary64); these are the reference semantics
# ---------------------------------------------------------------------------

def tent(x: float, a: float = 2.0) -> float:
    return _ref.eval1d_f64(0, a, 0.0, x)


def logistic(x: float, a: float = 4.0) -> float:
    return _ref.eval1d_f64(1, a, 0.0, x)


def logistic_sym(x: float) -> float:
    return _ref.eval1d_f64(2, 0.0, 0.0, x)


def folded_logistic(x: float) -> float:
    return _ref.eval1d_f64(3, 0.0, 0.0, x)


def circle_map(x: float) -> float:
    return _ref.eval1d_f64(4, 0.0, 0.0, x)


def circle_map_shifted(x: float) -> float:
    return _ref.eval1d_f64(5, 0.0, 0.0, x)


def dp_family(x: float, l: float) -> float:
    if not 1.0 < l <= 2.0:
        raise ValueError(f"dp exponent l={l} outside (1, 2]")
    return _ref.eval1d_f64(6, 0.0, l, x)


def henon(x: float, y: float, a: float = 1.4, b: float = 0.3) -> tuple[float, float]:
    return _ref._step_plane_f64(7, a, b, x, y)


def lozi(x: float, y: float, a: float = 1.7, b: float = 0.5) -> tuple[float, float]:
    return _ref._step_plane_f64(8, a, b, x, y)


def eval_map(spec: MapSpec, x: float) -> float:
    """One binary64 application of an interval map."""
    if spec.is_plane:
        raise ValueError("eval_map is for interval maps; use eval_plane")
    return _ref.eval1d_f64(spec.map_id, spec.a, spec.l, x)


def eval_map32(spec: MapSpec, x) -> np.float32:
    """One binary32 application (every operation rounded to float32)."""
    if spec.is_plane:
        raise ValueError("eval_map32 is for interval maps")
    return _ref.eval1d_f32(spec.map_id, np.float32(spec.a), np.float32(spec.l),
                           np.float32(x))


def eval_plane(spec: MapSpec, x: float, y: float) -> tuple[float, float]:
    if not spec.is_plane:
        raise ValueError("eval_plane is for henon/lozi")
    return _ref._step_plane_f64(spec.map_id, spec.a, spec.b, x, y)


def eval_map_array(spec: MapSpec, xs: np.ndarray) -> np.ndarray:
    """Vectorized interval-map application, preserving dtype (f32 or f64).

    Uses the same operation order as the scalar paths, so results agree bit
    for bit with repeated scalar evaluation.
    """
    if spec.is_plane:
        raise ValueError("eval_map_array is for interval maps")
    xs = np.asarray(xs)
    dt = xs.dtype.type
    one = dt(1.0)
    two = dt(2.0)
    half = dt(0.5)
    kind = spec.kind
    if kind == "tent":
        t = np.abs(xs)
        t = dt(spec.a) * t
        return one - t
    if kind == "logistic":
        u = one - xs
        u = xs * u
        return dt(spec.a) * u
    if kind == "logistic-sym":
        u = xs * xs
        u = two * u
        return one - u
    if kind == "folded-logistic":
        u = xs * xs
        u = two * u
        u = one - u
        return np.abs(u)
    if kind == "circle":
        t = two * xs
        u = one - xs
        u = xs * u
        u = half * u
        v = t + u
        w = v - np.floor(v)
        return np.where(w == one, dt(0.0), w)
    if kind == "circle-shifted":
        t = two * xs
        u = xs - one
        v = two - xs
        u = xs * u
        u = u * v
        u = half * u
        v = t + u
        w = v - np.floor(v)
        w = np.where(w == one, dt(0.0), w)
        return one + w
    # dp: the power goes through libm pow in double, one rounding back.
    # numpy's vectorized pow is a different implementation (off by an ulp
    # on some inputs) and would break parity with the scalar/kernel paths.
    t = two * xs
    t = one - t
    t = np.abs(t)
    ex = float(dt(spec.l))  # the exponent is a working-precision constant
    p64 = np.array([math.pow(v, ex) for v in
                    t.astype(np.float64).tolist()], dtype=np.float64)
    t = p64.astype(dt) if dt == np.float32 else p64
    return one - t


def henon_fixed_points(a: float, b: float) -> tuple[tuple[float, float], ...]:
    """Fixed points of the henon map: roots of a x^2 + (1-b) x - 1 = 0.

    Returns () when the discriminant is negative, else the (x, b*x) pairs
    sorted by x. Uses the cancellation-free quadratic formula so each root
    satisfies the fixed-point equation to a few ulp.
    """
    if a == 0.0:
        raise ValueError("a must be nonzero")
    c1 = 1.0 - b
    disc = c1 * c1 + 4.0 * a
    if disc < 0.0:
        return ()
    sd = math.sqrt(disc)
    q = -0.5 * (c1 + math.copysign(sd, c1))
    if q != 0.0:
        roots = [q / a, -1.0 / q]
    else:
        roots = [0.0, 0.0]  # only when c1 == 0 and disc == 0, i.e. a == 0
    roots.sort()
    return tuple((x, b * x) for x in roots)
