"""Command-line interface.

Subcommands:
    iterate    advance a system; dump the trajectory or a summary
    hist       histogram a coupled run; optionally score it against a
               reference density (error-summary output)
    cycle      Brent cycle hunt with optional checkpoint/resume
    enumerate  exact basin decomposition of a lattice map
    sample     sampled basin structure from random seeds
    fit        least-squares scaling fits over a CSV
    rng        emit stream values or bytes

All tabular output is CSV preceded by '# key = value' lines echoing the
effective configuration. Exit codes: 0 success (a cycle search that ends in
"not found" is a success), 2 configuration/usage error, 3 refused resource
request (e.g. a lattice too large to enumerate).
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import os
import sys

import numpy as np

from chaoslab import backend
from chaoslab import coupling
from chaoslab import fit as fitmod
from chaoslab import maps
from chaoslab import measure
from chaoslab import orbits
from chaoslab import stream as streammod
from chaoslab.arithmetic import (ArithMode, parse_arith, parse_count,
                                 round_to_lattice)

DUMP_LIMIT = 1_000_000  # trajectory rows we are willing to dump
BINS_LIMIT = 100_000_000

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RESOURCE = 3


class ResourceRefusal(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# small formatting/io helpers
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return ",".join(_fmt(x) for x in v)
    return str(v)


def _header(fh, pairs):
    fh.write(f"# backend = {backend.BACKEND}\n")
    for k, v in pairs:
        fh.write(f"# {k} = {_fmt(v)}\n")


@contextlib.contextmanager
def _out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def _parse_x0(text):
    return tuple(float(t) for t in text.split(",") if t.strip() != "")


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _add_map_args(p):
    p.add_argument("--map", default="tent", choices=sorted(maps.MAP_IDS),
                   help="map kind (default tent)")
    p.add_argument("--a", type=float, default=None, help="map parameter a")
    p.add_argument("--b", type=float, default=None,
                   help="plane map parameter b")
    p.add_argument("--l", type=float, default=None, help="dp exponent l")


def _add_coupling_args(p):
    p.add_argument("--p", type=parse_count, default=1, dest="p",
                   help="number of coupled components (default 1)")
    p.add_argument("--eps1", type=float, default=0.0,
                   help="base coupling strength (default 0)")
    p.add_argument("--ratio", default="linear",
                   help="'linear' (eps_i = i*eps1) or comma list of p "
                        "multipliers")


def _add_common(p, arith=True):
    if arith:
        p.add_argument("--arith", default="f64",
                       help="f32 | f64 | lattice:N (default f64)")
    p.add_argument("--x0", default=None,
                   help="comma-separated initial state (lattice: a bare "
                        "integer is an index, a decimal is rounded on)")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--config", default=None,
                   help="JSON file of flag defaults (explicit flags win)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="chaoslab",
        description="deterministic laboratory for discretized chaotic maps")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("iterate", help="advance a system")
    _add_map_args(p)
    _add_coupling_args(p)
    _add_common(p)
    p.add_argument("--n", type=parse_count, default=None,
                   help="steps to advance")
    p.add_argument("--transient", type=parse_count, default=0,
                   help="steps to skip before dumping")
    p.add_argument("--summary", action="store_true",
                   help="emit final state plus min/max instead of every step")

    p = sub.add_parser("hist", help="histogram a coupled run")
    _add_map_args(p)
    _add_coupling_args(p)
    _add_common(p)
    p.add_argument("--n", type=parse_count, default=None,
                   help="post-transient steps to bin")
    p.add_argument("--transient", type=parse_count, default=0)
    p.add_argument("--bins", type=parse_count, default=1000)
    p.add_argument("--component", type=parse_count, default=0,
                   help="component to bin (default 1st)")
    p.add_argument("--mixed", action="store_true",
                   help="bin all p components interleaved")
    p.add_argument("--ref", default=None,
                   choices=["lebesgue", "arcsine", "arcsine-unit"],
                   help="score against this density: output becomes an "
                        "error-summary row")
    p.add_argument("--trunc", type=float, default=0.98,
                   help="truncation cut for E1_trunc (default 0.98)")

    p = sub.add_parser("cycle", help="Brent cycle hunt")
    _add_map_args(p)
    _add_coupling_args(p)
    _add_common(p)
    p.add_argument("--budget", type=parse_count, default=10 ** 9,
                   help="max search-phase map applications (default 1e9)")
    p.add_argument("--checkpoint", default=None,
                   help="JSON sidecar; resumes automatically if it exists")
    p.add_argument("--checkpoint-every", type=parse_count, default=1 << 24,
                   help="map applications between checkpoints")

    p = sub.add_parser("enumerate", help="exact lattice basin decomposition")
    _add_map_args(p)
    _add_common(p, arith=False)
    p.add_argument("--lattice", type=parse_count, default=None,
                   help="lattice size N (alias for --arith lattice:N)")
    p.add_argument("--arith", default=None, help="lattice:N")
    p.add_argument("--workers", type=parse_count, default=1,
                   help="start-index shards (output is identical for any "
                        "count)")
    p.add_argument("--max-lattice", type=parse_count,
                   default=orbits.MAX_TABLE_POINTS,
                   help="largest N the successor table may have")

    p = sub.add_parser("sample", help="sampled basin structure")
    _add_map_args(p)
    _add_coupling_args(p)
    _add_common(p)
    p.add_argument("--k", type=parse_count, default=1000,
                   help="number of random seeds (default 1000)")
    p.add_argument("--budget", type=parse_count, default=10 ** 6,
                   help="per-seed search budget (default 1e6)")
    p.add_argument("--rng-seed", type=parse_count, default=0,
                   help="seed of the seed-drawing RNG")

    p = sub.add_parser("fit", help="least-squares scaling fits")
    p.add_argument("--in", dest="infile", required=True,
                   help="CSV with named columns ('#' lines ignored)")
    p.add_argument("--model", default="loglog",
                   choices=["line", "loglog", "plane"])
    p.add_argument("--x", required=True, help="x column name")
    p.add_argument("--y", required=True, help="y column name")
    p.add_argument("--z", default=None, help="z column name (plane)")
    p.add_argument("--out", default=None)
    p.add_argument("--config", default=None)

    p = sub.add_parser("rng", help="emit stream values or bytes")
    p.add_argument("--map", default="tent", choices=sorted(streammod.STREAM_KINDS))
    _add_coupling_args(p)
    p.set_defaults(p=3, eps1=streammod.DEFAULT_EPS1)
    _add_common(p)
    p.add_argument("--n", type=parse_count, default=None,
                   help="values (or bytes, for byte formats) to emit")
    p.add_argument("--mixed", action="store_true")
    p.add_argument("--uniformize", action="store_true")
    p.add_argument("--format", default="real",
                   choices=["real", "unit", "hex", "raw"],
                   help="one value per line (real/unit), hex byte pairs, or "
                        "raw bytes (raw requires --out)")
    return ap


def _apply_config(args, argv):
    if not getattr(args, "config", None):
        return
    with open(args.config, encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config file must hold a JSON object")
    explicit = set()
    for tok in argv:
        if tok.startswith("--"):
            explicit.add(tok[2:].split("=", 1)[0].replace("-", "_"))
    for key, val in cfg.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ValueError(f"config key {key!r} is not a {args.command} flag")
        if attr in explicit:
            continue
        if attr in ("n", "budget", "bins", "transient", "workers", "k",
                    "p", "lattice", "max_lattice", "checkpoint_every",
                    "rng_seed", "component"):
            val = parse_count(str(val))
        setattr(args, attr, val)


# ---------------------------------------------------------------------------
# system construction
# ---------------------------------------------------------------------------

def _map_spec(args) -> maps.MapSpec:
    return maps.make_map(args.map, a=args.a, b=args.b, l=args.l)


def _ratios(args):
    if args.ratio == "linear":
        return None
    return tuple(float(t) for t in args.ratio.split(","))


def _arith(args) -> ArithMode:
    return parse_arith(args.arith)


def _default_interval_x0(spec: maps.MapSpec, p: int):
    lo, hi = spec.domain
    seeds = streammod.DEFAULT_SEEDS[:p] if p <= len(streammod.DEFAULT_SEEDS) \
        else None
    if seeds is None or not all(lo <= s <= hi for s in seeds):
        raise ValueError(
            f"no default initial state for {spec.kind} with p={p}; pass --x0")
    return seeds


def _build_system(args):
    """Returns (kind, payload): kind in {'coupled', 'plane', 'lattice'}."""
    spec = _map_spec(args)
    mode = _arith(args)
    p = getattr(args, "p", 1)
    if spec.is_plane:
        if mode.kind == "lattice":
            raise ValueError("plane maps do not run on the lattice")
        if p != 1:
            raise ValueError("plane maps do not couple; drop --p")
        x0 = _parse_x0(args.x0) if args.x0 else (0.0, 0.0)
        if len(x0) != 2:
            raise ValueError("plane initial state is x,y")
        return "plane", (spec, mode, x0)
    if mode.kind == "lattice":
        if p != 1:
            raise ValueError("lattice arithmetic supports p=1 only")
        if args.x0 is None:
            j0 = 1
        else:
            tok = args.x0.strip()
            if "," in tok:
                raise ValueError("lattice initial state is a single value")
            if "." in tok or "e" in tok or "E" in tok:
                j0 = round_to_lattice(float(tok), mode.n).j
            else:
                j0 = int(tok)
        if not 0 <= j0 < mode.n:
            raise ValueError(f"lattice index {j0} outside [0, {mode.n})")
        return "lattice", (spec, mode, j0)
    cfg = coupling.CouplingConfig(p=p, eps1=args.eps1, ratios=_ratios(args))
    matrix = coupling.build_matrix(cfg, mode)
    x0 = _parse_x0(args.x0) if args.x0 else _default_interval_x0(spec, p)
    if len(x0) != p:
        raise ValueError(f"--x0 needs {p} components")
    return "coupled", (spec, matrix, x0)


def _common_pairs(args, kind, payload):
    pairs = [("command", args.command)]
    if kind == "coupled":
        spec, matrix, x0 = payload
        pairs += [("map", spec.label()), ("p", matrix.p),
                  ("eps1", matrix.config.eps1),
                  ("ratio", args.ratio), ("arith", matrix.mode.label()),
                  ("x0", list(x0))]
    elif kind == "plane":
        spec, mode, x0 = payload
        pairs += [("map", spec.label()), ("arith", mode.label()),
                  ("x0", list(x0))]
    else:
        spec, mode, j0 = payload
        pairs += [("map", spec.label()), ("arith", mode.label()),
                  ("x0", j0)]
    return pairs


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_iterate(args) -> int:
    kind, payload = _build_system(args)
    pairs = _common_pairs(args, kind, payload)
    pairs += [("n", args.n), ("transient", args.transient)]
    dump = not args.summary
    if dump and args.n > DUMP_LIMIT:
        raise ResourceRefusal(
            f"refusing to dump {args.n} rows (limit {DUMP_LIMIT}); "
            f"use --summary")
    with _out(args.out) as fh:
        _header(fh, pairs + [("output", "trajectory" if dump else "summary")])
        if kind == "coupled":
            spec, matrix, x0 = payload
            if dump:
                traj = coupling.trajectory(spec, matrix, x0, args.n,
                                           transient=args.transient)
                cols = ",".join(f"x_{i+1}" for i in range(matrix.p))
                fh.write(f"step,{cols}\n")
                for k, row in enumerate(traj):
                    vals = ",".join(_fmt(float(v)) for v in row)
                    fh.write(f"{args.transient + k + 1},{vals}\n")
            else:
                x, lo, hi = coupling.iterate_minmax(
                    spec, matrix, x0, args.transient + args.n)
                cols = ",".join(f"x_{i+1}" for i in range(matrix.p))
                fh.write(f"n,min,max,{cols}\n")
                vals = ",".join(_fmt(float(v)) for v in x)
                fh.write(f"{args.transient + args.n},{_fmt(lo)},{_fmt(hi)},"
                         f"{vals}\n")
        elif kind == "plane":
            spec, mode, x0 = payload
            dt = mode.dtype
            xy = np.asarray(x0, dtype=dt)
            total = args.transient + args.n
            if dump:
                fn = (backend.traj_plane_f64 if dt == np.float64
                      else backend.traj_plane_f32)
                out = np.empty((args.n, 2), dtype=dt)
                fn(spec.map_id, spec.a, spec.b, xy, args.n, args.transient,
                   out)
                fh.write("step,x,y\n")
                for k, (x, y) in enumerate(out):
                    fh.write(f"{args.transient + k + 1},{_fmt(float(x))},"
                             f"{_fmt(float(y))}\n")
            else:
                fn = (backend.iterate_plane_f64 if dt == np.float64
                      else backend.iterate_plane_f32)
                fn(spec.map_id, spec.a, spec.b, xy, total)
                fh.write("n,x,y\n")
                fh.write(f"{total},{_fmt(float(xy[0]))},"
                         f"{_fmt(float(xy[1]))}\n")
        else:
            spec, mode, j0 = payload
            if dump:
                fh.write("step,j\n")
                j = j0
                for k in range(args.transient + args.n):
                    j = backend.lattice_apply_f64(spec.map_id, spec.a, spec.l,
                                                  mode.n, j)
                    if k >= args.transient:
                        fh.write(f"{k + 1},{j}\n")
            else:
                total = args.transient + args.n
                j = backend.iterate_lattice_f64(spec.map_id, spec.a, spec.l,
                                                mode.n, j0, total)
                fh.write("n,j\n")
                fh.write(f"{total},{j}\n")
    return EXIT_OK


def cmd_hist(args) -> int:
    kind, payload = _build_system(args)
    if kind != "coupled":
        raise ValueError("hist runs on interval maps in float arithmetic")
    if args.bins > BINS_LIMIT:
        raise ResourceRefusal(f"{args.bins} boxes exceeds limit {BINS_LIMIT}")
    spec, matrix, x0 = payload
    component = None if args.mixed else args.component
    hist = measure.accumulate_coupled(spec, matrix, x0, args.n, args.bins,
                                      transient=args.transient,
                                      component=component)
    dens = measure.density(hist)
    pairs = _common_pairs(args, kind, payload)
    pairs += [("n", args.n), ("transient", args.transient),
              ("bins", args.bins),
              ("component", "mixed" if args.mixed else args.component),
              ("samples", hist.samples)]
    with _out(args.out) as fh:
        if args.ref is None:
            _header(fh, pairs)
            edges = hist.edges()
            fh.write("box_index,s_left,s_right,count,density\n")
            for i in range(hist.m):
                fh.write(f"{i},{_fmt(float(edges[i]))},"
                         f"{_fmt(float(edges[i + 1]))},"
                         f"{int(hist.counts[i])},"
                         f"{_fmt(float(dens.values[i]))}\n")
        else:
            ref = {"lebesgue": measure.lebesgue(),
                   "arcsine": measure.arcsine_sym(),
                   "arcsine-unit": measure.arcsine_unit()}[args.ref]
            e1 = measure.err_l1(dens, ref)
            e2 = measure.err_l2_sq(dens, ref)
            e1t = measure.err_l1_truncated(dens, ref, cut=args.trunc)
            _header(fh, pairs + [("ref", ref.name), ("trunc", args.trunc)])
            fh.write("M,N,eps1,p,map,precision,E1,E2sq,E1_trunc\n")
            fh.write(f"{hist.m},{hist.samples},{_fmt(matrix.config.eps1)},"
                     f"{matrix.p},{spec.kind},{matrix.mode.label()},"
                     f"{_fmt(e1)},{_fmt(e2)},{_fmt(e1t)}\n")
    return EXIT_OK


def _checkpoint_writer(path, config_pairs, budget):
    def write(snapshot):
        payload = {"config": {k: _fmt(v) for k, v in config_pairs},
                   "budget": budget, "snapshot": snapshot}
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)
        os.replace(tmp, path)
    return write


def _load_checkpoint(path, config_pairs, budget):
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    # budget is allowed to differ: raising it resumes an exhausted search
    want = {k: _fmt(v) for k, v in config_pairs if k != "budget"}
    have = dict(payload.get("config") or {})
    have.pop("budget", None)
    if have != want:
        raise ValueError(
            f"checkpoint {path} was written by a different configuration")
    return payload["snapshot"]


def cmd_cycle(args) -> int:
    kind, payload = _build_system(args)
    pairs = _common_pairs(args, kind, payload)
    pairs += [("budget", args.budget)]
    on_chunk = None
    resume = None
    if args.checkpoint:
        if os.path.exists(args.checkpoint):
            resume = _load_checkpoint(args.checkpoint, pairs, args.budget)
        on_chunk = _checkpoint_writer(args.checkpoint, pairs, args.budget)
    chunk = max(1, args.checkpoint_every)

    if kind == "coupled":
        spec, matrix, x0 = payload
        rep = orbits.hunt_coupled(spec, matrix, x0, args.budget, chunk,
                                  on_chunk=on_chunk, resume=resume)
        wit_cols = [f"witness_{i+1}" for i in range(matrix.p)]
    elif kind == "plane":
        spec, mode, x0 = payload
        rep = orbits.hunt_plane(spec, x0, args.budget, chunk,
                                dtype=mode.dtype, on_chunk=on_chunk,
                                resume=resume)
        wit_cols = ["witness_x", "witness_y"]
    else:
        spec, mode, j0 = payload
        rep = orbits.hunt_lattice(spec, mode.n, j0, args.budget, chunk,
                                  on_chunk=on_chunk, resume=resume)
        wit_cols = ["witness_index"]

    if args.checkpoint and rep is not None and os.path.exists(args.checkpoint):
        os.remove(args.checkpoint)

    with _out(args.out) as fh:
        _header(fh, pairs)
        fh.write("status,period,tail,iterations,classification,"
                 + ",".join(wit_cols) + "\n")
        if rep is None:
            fh.write(f"not-found,0,0,{args.budget},unresolved"
                     + "," * len(wit_cols) + "\n")
        else:
            wit = rep.witness if isinstance(rep.witness, tuple) \
                else (rep.witness,)
            vals = ",".join(_fmt(v) for v in wit)
            fh.write(f"found,{rep.period},{rep.tail},{rep.iterations},"
                     f"{rep.classification},{vals}\n")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    if args.lattice is None and args.arith is None:
        raise ValueError("pass --lattice N (or --arith lattice:N)")
    if args.lattice is not None:
        n_lattice = args.lattice
    else:
        mode = parse_arith(args.arith)
        if mode.kind != "lattice":
            raise ValueError("enumerate needs lattice arithmetic")
        n_lattice = mode.n
    spec = _map_spec(args)
    try:
        table = orbits.enumerate_lattice(spec, n_lattice,
                                         workers=args.workers,
                                         max_points=args.max_lattice)
    except orbits.EnumerationTooLarge as exc:
        raise ResourceRefusal(str(exc)) from exc
    pairs = [("command", args.command), ("map", spec.label()),
             ("arith", f"lattice:{n_lattice}"), ("workers", args.workers),
             ("cycles", len(table.records))]
    with _out(args.out) as fh:
        _header(fh, pairs)
        fh.write("cycle_id,period,basin_size,relative_size,min_index\n")
        for rec in table.records:
            fh.write(f"{rec.cycle_id},{rec.period},{rec.basin},"
                     f"{_fmt(table.relative(rec))},{rec.min_index}\n")
    return EXIT_OK


def cmd_sample(args) -> int:
    kind, payload = _build_system(args)
    rng = np.random.default_rng(args.rng_seed)
    if kind == "coupled":
        spec, matrix, _ = payload
        lo, hi = spec.domain
        seeds = [rng.uniform(lo, hi, size=matrix.p) for _ in range(args.k)]
        res = orbits.sample_coupled(spec, matrix, seeds, args.budget)
        wit_cols = [f"witness_{i+1}" for i in range(matrix.p)]
        pairs = _common_pairs(args, kind, payload)[:-1]  # x0 is irrelevant
    elif kind == "plane":
        spec, mode, _ = payload
        seeds = [rng.uniform(-1.0, 1.0, size=2) for _ in range(args.k)]
        res = orbits.sample_plane(spec, seeds, args.budget, dtype=mode.dtype)
        wit_cols = ["witness_x", "witness_y"]
        pairs = _common_pairs(args, kind, payload)[:-1]
    else:
        spec, mode, _ = payload
        seeds = rng.integers(0, mode.n, size=args.k)
        res = orbits.sample_lattice(spec, mode.n, seeds, args.budget)
        wit_cols = ["min_index"]
        pairs = _common_pairs(args, kind, payload)[:-1]
    pairs += [("k", args.k), ("budget", args.budget),
              ("rng_seed", args.rng_seed), ("not_found", res.not_found)]
    with _out(args.out) as fh:
        _header(fh, pairs)
        fh.write("cycle_id,period,basin_size,relative_size,"
                 + ",".join(wit_cols) + "\n")
        for i, g in enumerate(res.groups):
            wit = g.witness if isinstance(g.witness, tuple) else (g.witness,)
            vals = ",".join(_fmt(v) for v in wit)
            fh.write(f"{i + 1},{g.period},{g.hits},"
                     f"{_fmt(res.relative(g))},{vals}\n")
        if res.not_found:
            fh.write(f"-1,0,{res.not_found},"
                     f"{_fmt(res.not_found / res.seeds)}"
                     + "," * len(wit_cols) + "\n")
    return EXIT_OK


def cmd_fit(args) -> int:
    # strip full-line comments by hand: genfromtxt(names=True) would read
    # the first commented line as the header row
    with open(args.infile, encoding="utf-8") as fh:
        body = "".join(ln for ln in fh if not ln.lstrip().startswith("#"))
    if not body.strip():
        raise ValueError(f"{args.infile} has no data rows")
    data = np.genfromtxt(io.StringIO(body), delimiter=",", names=True)
    if data.dtype.names is None:
        raise ValueError(f"{args.infile} has no header row")

    def col(name):
        if name not in data.dtype.names:
            raise ValueError(f"column {name!r} not in {data.dtype.names}")
        return np.atleast_1d(data[name]).astype(np.float64)

    pairs = [("command", "fit"), ("in", args.infile), ("model", args.model),
             ("x", args.x), ("y", args.y)]
    results = []
    if args.model == "plane":
        if not args.z:
            raise ValueError("plane fit needs --z")
        pairs.append(("z", args.z))
        pf = fitmod.planefit(col(args.x), col(args.y), col(args.z))
        results = [pf.full, pf.constrained]
    elif args.model == "loglog":
        results = [fitmod.scaling_fit(col(args.x), col(args.y))]
    else:
        results = [fitmod.linfit(col(args.x), col(args.y))]
    with _out(args.out) as fh:
        _header(fh, pairs)
        fh.write("model,coefficients,r,n_points\n")
        for res in results:
            coeff = ";".join(_fmt(c) for c in res.coefficients)
            fh.write(f"{res.model},{coeff},{_fmt(res.r)},{res.n_points}\n")
    return EXIT_OK


def cmd_rng(args) -> int:
    mode = parse_arith(args.arith)
    seeds = _parse_x0(args.x0) if args.x0 else None
    cfg = streammod.GeneratorConfig(
        map_kind=args.map, p=args.p, eps1=args.eps1, ratios=_ratios(args),
        mode=mode, seeds=seeds, mixed=args.mixed,
        uniformize=args.uniformize)
    gen = streammod.ChaoticStream(cfg)
    pairs = [("command", "rng"), ("map", args.map), ("p", args.p),
             ("eps1", args.eps1), ("ratio", args.ratio),
             ("arith", mode.label()), ("x0", list(cfg.effective_seeds())),
             ("mixed", args.mixed), ("uniformize", args.uniformize),
             ("n", args.n), ("format", args.format)]
    chunk = 1 << 20
    if args.format == "raw":
        if not args.out or args.out == "-":
            raise ValueError("raw byte output needs --out FILE")
        with open(args.out, "wb") as fh:
            left = args.n
            while left > 0:
                take = min(left, chunk)
                fh.write(gen.make_bytes(take))
                left -= take
        return EXIT_OK
    with _out(args.out) as fh:
        _header(fh, pairs)
        if args.format == "hex":
            fh.write("bytes_hex\n")
            left = args.n
            while left > 0:
                take = min(left, chunk)
                fh.write(gen.make_bytes(take).hex() + "\n")
                left -= take
        else:
            fh.write("value\n")
            left = args.n
            while left > 0:
                take = min(left, chunk)
                vals = (gen.fill_units(take) if args.format == "unit"
                        else gen.take(take))
                for v in vals:
                    fh.write(_fmt(float(v)) + "\n")
                left -= take
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------

_COMMANDS = {
    "iterate": cmd_iterate,
    "hist": cmd_hist,
    "cycle": cmd_cycle,
    "enumerate": cmd_enumerate,
    "sample": cmd_sample,
    "fit": cmd_fit,
    "rng": cmd_rng,
}


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _apply_config(args, argv)
        # --n is required but may come from the config file, so it cannot
        # be enforced at parse time
        if getattr(args, "n", 0) is None:
            raise ValueError("--n is required (flag or config file)")
        return _COMMANDS[args.command](args)
    except ResourceRefusal as exc:
        print(f"chaoslab: refused: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"chaoslab: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
