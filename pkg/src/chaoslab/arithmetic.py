"""Arithmetic modes: binary64, binary32, and the regular lattice j/N.

The three modes make discretization explicit. Binary64 is plain IEEE double
with one rounding per operation. Binary32 rounds after *every* operation (the
working values themselves are float32). Lattice(N) restricts states to the N
points j/N in [0, 1): maps are evaluated at fl64(j/N) in binary64 and the
image is rounded back to the lattice in one step.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from chaoslab import maps


@dataclass(frozen=True)
class ArithMode:
    kind: str  # "binary32" | "binary64" | "lattice"
    n: int = 0

    def __post_init__(self):
        if self.kind not in ("binary32", "binary64", "lattice"):
            raise ValueError(f"unknown arithmetic mode {self.kind!r}")
        if self.kind == "lattice":
            if self.n < 2:
                raise ValueError("lattice size must be >= 2")
        elif self.n:
            raise ValueError("only lattice mode takes a size")

    @property
    def dtype(self):
        if self.kind == "binary32":
            return np.float32
        if self.kind == "binary64":
            return np.float64
        raise ValueError("lattice mode has no float dtype")

    def label(self) -> str:
        if self.kind == "binary32":
            return "f32"
        if self.kind == "binary64":
            return "f64"
        return f"lattice:{self.n}"


BINARY32 = ArithMode("binary32")
BINARY64 = ArithMode("binary64")


def lattice(n: int) -> ArithMode:
    return ArithMode("lattice", int(n))


_ARITH_RE = re.compile(r"^lattice:(.+)$")


def parse_arith(text: str) -> ArithMode:
    """Parse 'f32' | 'f64' | 'lattice:N' (N in plain, scientific or 2^k form)."""
    if text == "f32":
        return BINARY32
    if text == "f64":
        return BINARY64
    m = _ARITH_RE.match(text)
    if m:
        return lattice(parse_count(m.group(1)))
    raise ValueError(f"unknown arithmetic mode {text!r}")


def parse_count(text: str) -> int:
    """Integer in plain ('16777216'), scientific ('1e8'), or power ('2^24',
    '2^24-1', '10^6') notation."""
    text = text.strip()
    m = re.match(r"^(\d+)\^(\d+)(?:-(\d+))?$", text)
    if m:
        base, exp, minus = int(m.group(1)), int(m.group(2)), m.group(3)
        return base ** exp - (int(minus) if minus else 0)
    if re.match(r"^\d+$", text):
        return int(text)
    v = float(text)
    iv = int(v)
    if iv != v:
        raise ValueError(f"{text!r} is not an integer count")
    return iv


@dataclass(frozen=True)
class LatticePoint:
    """State j/N on the N-point lattice of [0, 1)."""

    j: int
    n: int

    def __post_init__(self):
        if not 0 <= self.j < self.n:
            raise ValueError(f"lattice index {self.j} outside [0, {self.n})")

    @property
    def value(self) -> float:
        return self.j / self.n


def cast_real(v: float, mode: ArithMode):
    """Represent v in the given mode: float (binary64), float rounded through
    float32 (binary32), or the nearest LatticePoint."""
    if mode.kind == "binary64":
        return float(v)
    if mode.kind == "binary32":
        return float(np.float32(v))
    return round_to_lattice(v, mode.n)


def round_to_lattice(v: float, n: int) -> LatticePoint:
    """Nearest lattice point to v after reduction mod 1.

    The reduction maps an exact 1.0 to 0.0; the index is nearbyint(fl(v*N))
    with ties to even, and an index of N wraps to 0. Identical to the kernel
    and numpy (np.rint) conventions.
    """
    if n < 2:
        raise ValueError("lattice size must be >= 2")
    if not math.isfinite(v):
        raise ValueError(f"cannot place {v!r} on the lattice")
    u = v - math.floor(v)
    if u == 1.0:
        u = 0.0
    j = round(u * float(n))  # CPython round() is half-even on the double
    if j >= n:
        j -= n
    return LatticePoint(j, n)


def lattice_map(spec: maps.MapSpec, pt: LatticePoint) -> LatticePoint:
    """One lattice step: evaluate the map at fl64(j/N) in binary64, then
    round the image back to the lattice.

    Only unit-interval maps live on the lattice (domain [0, 1]).
    """
    require_lattice_map(spec)
    x = pt.j / pt.n
    return round_to_lattice(maps.eval_map(spec, x), pt.n)


def require_lattice_map(spec: maps.MapSpec) -> None:
    if spec.kind not in maps.LATTICE_KINDS:
        raise ValueError(
            f"map {spec.kind!r} does not act on the unit-interval lattice "
            f"(supported: {', '.join(maps.LATTICE_KINDS)})")
