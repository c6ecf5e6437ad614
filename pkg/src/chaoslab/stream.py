"""Deterministic chaotic number stream from weakly coupled maps.

Uncoupled binary64 tent/logistic orbits collapse onto fixed points or short
cycles, so the stream couples p copies with a tiny eps (default 1e-14): the
coupling is far below the resolution of any statistical test but pushes the
orbit onto cycles with astronomically long periods. Output is component 1 of
the state after each step, or all p components interleaved (mixed mode).

Values can be passed through the measure-preserving conjugacy
arccos(-x)/pi (logistic-sym only) or rescaled by (x+1)/2 into [0, 1);
fill_bytes packs the top 16 significand bits of each unit value, two bytes
per value, most significant first.

Everything is reproducible: same config, same output, on every backend and
platform. This is a laboratory object, not a cryptographic generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from chaoslab import backend
from chaoslab import coupling
from chaoslab import maps
from chaoslab.arithmetic import ArithMode, BINARY64

DEFAULT_SEEDS = (0.330, 0.3387564, 0.3313534, 0.3332135, 0.3387325,
                 0.3438542, 0.3654218)
DEFAULT_EPS1 = 1e-14

_ONE_BELOW = math.nextafter(1.0, 0.0)
STREAM_KINDS = ("tent", "logistic-sym")


@dataclass(frozen=True)
class GeneratorConfig:
    map_kind: str = "tent"
    p: int = 3
    eps1: float = DEFAULT_EPS1
    ratios: tuple[float, ...] | None = None
    mode: ArithMode = BINARY64
    seeds: tuple[float, ...] | None = None  # None: default list, first p
    mixed: bool = False
    uniformize: bool = False

    def __post_init__(self):
        if self.map_kind not in STREAM_KINDS:
            raise ValueError(
                f"stream maps are {STREAM_KINDS}, got {self.map_kind!r}")
        if self.mode.kind == "lattice":
            raise ValueError("streams run in float arithmetic")
        if self.uniformize and self.map_kind != "logistic-sym":
            raise ValueError(
                "uniformize uses the arccos conjugacy of logistic-sym")
        if self.seeds is not None and len(self.seeds) != self.p:
            raise ValueError(f"need {self.p} seeds, got {len(self.seeds)}")
        if self.seeds is None and self.p > len(DEFAULT_SEEDS):
            raise ValueError(
                f"p={self.p} needs explicit seeds (defaults cover "
                f"{len(DEFAULT_SEEDS)})")

    def effective_seeds(self) -> tuple[float, ...]:
        if self.seeds is not None:
            return tuple(float(s) for s in self.seeds)
        return DEFAULT_SEEDS[:self.p]


class ChaoticStream:
    """Stateful value stream over a coupled-map system."""

    def __init__(self, config: GeneratorConfig):
        self.config = config
        self.spec = maps.make_map(config.map_kind)
        cfg = coupling.CouplingConfig(p=config.p, eps1=config.eps1,
                                      ratios=config.ratios)
        self.matrix = coupling.build_matrix(cfg, config.mode)
        dt = self.matrix.entries.dtype
        seeds = config.effective_seeds()
        lo, hi = self.spec.domain
        for s in seeds:
            if not lo <= s <= hi:
                raise ValueError(f"seed {s} outside [{lo}, {hi}]")
        self._state = np.asarray(seeds, dtype=dt)
        self._traj = (backend.traj_coupled_f64 if dt == np.float64
                      else backend.traj_coupled_f32)
        self._dt = dt
        self._pending = np.empty(0, dtype=dt)
        self._drawn = 0

    def system(self):
        """(map spec, coupling matrix, current state copy) for orbit tools."""
        return self.spec, self.matrix, self._state.copy()

    @property
    def position(self) -> int:
        """Raw values drawn so far."""
        return self._drawn

    def _draw_raw(self, k: int) -> np.ndarray:
        if k < 0:
            raise ValueError("k must be >= 0")
        p = self.matrix.p
        take = min(k, self._pending.size)
        head = self._pending[:take]
        self._pending = self._pending[take:]
        need = k - take
        if need == 0:
            self._drawn += k
            return head.copy()
        if self.config.mixed:
            steps = -(-need // p)  # ceil
            buf = np.empty(steps * p, dtype=self._dt)
            self._traj(self.spec.map_id, self.spec.a, self.spec.l,
                       self.matrix.entries, self._state, steps, 0, buf, -1)
            out = np.concatenate([head, buf[:need]])
            self._pending = buf[need:]
        else:
            buf = np.empty(need, dtype=self._dt)
            self._traj(self.spec.map_id, self.spec.a, self.spec.l,
                       self.matrix.entries, self._state, need, 0, buf, 0)
            out = np.concatenate([head, buf])
        self._drawn += k
        return out

    def take(self, k: int) -> np.ndarray:
        """k raw values in [-1, 1] (binary64; uniformized if configured)."""
        raw = self._draw_raw(k).astype(np.float64)
        if self.config.uniformize:
            return np.arccos(-raw) / np.pi
        return raw

    def next_value(self) -> float:
        """One value in [-1, 1] (or [0, 1] when uniformized)."""
        return float(self.take(1)[0])

    def fill_units(self, k: int) -> np.ndarray:
        """k values in [0, 1): uniformized values pass through, otherwise the
        affine rescale (x + 1)/2; exact 1.0 clamps to the double below 1."""
        v = self.take(k)
        if not self.config.uniformize:
            t = v + 1.0
            v = t / 2.0
        return np.minimum(v, _ONE_BELOW)

    def fill_bytes(self, buffer) -> None:
        """Fill a writable byte buffer: each unit value contributes its top
        16 bits, most significant byte first; an odd final byte takes just
        the high byte."""
        view = memoryview(buffer)
        if view.readonly:
            raise ValueError("buffer must be writable")
        view = view.cast("B")
        nbytes = view.nbytes
        k = (nbytes + 1) // 2
        u = self.fill_units(k)
        w = (u * 65536.0).astype(np.int64)  # trunc; exact, *2^16 is lossless
        pairs = np.empty(2 * k, dtype=np.uint8)
        pairs[0::2] = (w >> 8).astype(np.uint8)
        pairs[1::2] = (w & 0xFF).astype(np.uint8)
        view[:] = pairs[:nbytes].tobytes()

    def make_bytes(self, nbytes: int) -> bytes:
        buf = bytearray(nbytes)
        self.fill_bytes(buf)
        return bytes(buf)
