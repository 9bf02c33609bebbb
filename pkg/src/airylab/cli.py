"""Experiment runner: config parsing, field I/O, synthetic inputs, and
subcommands covering propagation, norms, concentration, Whitney checks,
extraction, separation scoring, maximizer search, baselines, the embedding
sweep, and the dichotomy report.

Exit codes: 0 success, 1 numeric/structural failure (a structured JSON
error record goes to stderr), 2 usage error.  All outputs are written
atomically (temp file then rename).
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import os
import sys
import tempfile

import numpy as np

from . import bubbles as bubbles_mod
from . import extremal, refined, separation
from .errors import AirylabError
from .grid import (
    Field,
    GridSpec,
    gaussian_field,
    random_band_limited_field,
    read_field,
    write_field,
)
from .norms import StrichartzExponents, l2_norm, strichartz_functional
from .spectral import SymmetryParams, airy_propagate, schrodinger_propagate

DEFAULT_GRID = dict(n_points=1024, domain_length=64.0, t_count=129,
                    t_span=20.0, band_fraction=0.5)


class UsageError(Exception):
    pass


def _atomic_write(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic_write_text(path: str, text: str) -> None:
    _atomic_write(path, text.encode("utf-8"))


def _atomic_write_field(path: str, f: Field) -> None:
    # serialize with the canonical writer, then land the bytes atomically
    fd, tmp = tempfile.mkstemp(prefix=".tmp-fld-")
    os.close(fd)
    try:
        write_field(tmp, f)
        with open(tmp, "rb") as fh:
            data = fh.read()
    finally:
        os.unlink(tmp)
    _atomic_write(path, data)


def load_config(path: str | None) -> configparser.ConfigParser:
    cp = configparser.ConfigParser()
    if path is None:
        return cp
    if not os.path.exists(path):
        raise UsageError(f"config file not found: {path}")
    read = cp.read(path)
    if not read or not cp.sections():
        raise UsageError(f"config file is empty or unreadable: {path}")
    return cp


def grid_from_config(cp: configparser.ConfigParser) -> GridSpec:
    g = dict(DEFAULT_GRID)
    if cp.has_section("grid"):
        section = cp["grid"]
        for key in g:
            if key in section:
                g[key] = type(DEFAULT_GRID[key])(section[key])
    return GridSpec(int(g["n_points"]), float(g["domain_length"]),
                    t_count=int(g["t_count"]), t_span=float(g["t_span"]),
                    band_fraction=float(g["band_fraction"]))


def _load_field(path: str, grid: GridSpec) -> Field:
    return read_field(path, t_count=grid.t_count, t_span=grid.t_span,
                      band_fraction=grid.band_fraction)


def _out_path(args, name: str) -> str:
    return os.path.join(args.out, name)


def _emit(args, name: str, text: str) -> None:
    _atomic_write_text(_out_path(args, name), text)


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------


def cmd_propagate(args, cp) -> int:
    grid = grid_from_config(cp)
    f = _load_field(args.field, grid)
    prop = airy_propagate if args.dispersion == "airy" else schrodinger_propagate
    out = prop(f, args.t)
    _atomic_write_field(_out_path(args, "propagated.fld"), out)
    print(json.dumps({"t": args.t, "dispersion": args.dispersion,
                      "l2": l2_norm(out), "warnings": list(out.warnings)}))
    return 0


def cmd_norm(args, cp) -> int:
    grid = grid_from_config(cp)
    f = _load_field(args.field, grid)
    e = StrichartzExponents(args.alpha, args.q, args.r)
    value = strichartz_functional(f, e, dispersion=args.dispersion)
    record = {"alpha": args.alpha, "q": args.q, "r": args.r,
              "l2": l2_norm(f), "strichartz": value}
    print(json.dumps(record))
    _emit(args, "norm.json", json.dumps(record) + "\n")
    return 0


def cmd_concentrate(args, cp) -> int:
    grid = grid_from_config(cp)
    f = _load_field(args.field, grid)
    iv = refined.concentration_functional(f, args.p)
    ratio = refined.refined_ratio(f, args.p)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["field_id", "p", "interval_lo", "interval_hi", "value", "ratio"])
    writer.writerow([os.path.basename(args.field), args.p, iv.lo, iv.hi,
                     iv.value, ratio])
    _emit(args, "concentration.csv", buf.getvalue())
    print(buf.getvalue().strip().splitlines()[-1])
    return 0


def cmd_whitney_check(args, cp) -> int:
    region = refined.DyadicInterval(args.scale, args.index)
    pairs = refined.whitney_pairs(region, args.min_scale)
    bounds_ok = all(
        4 * p.I.length <= p.separation <= 10 * p.I.length for p in pairs
    )
    mult: dict = {}
    for p in pairs:
        mult[p.I] = mult.get(p.I, 0) + 1
    record = {
        "pairs": len(pairs),
        "scales": sorted({p.I.scale for p in pairs}),
        "bounds_ok": bounds_ok,
        "max_multiplicity": max(mult.values()) if mult else 0,
    }
    print(json.dumps(record))
    _emit(args, "whitney.json", json.dumps(record) + "\n")
    if not bounds_ok:
        raise AirylabError("whitney pair outside distance bounds")
    return 0


def cmd_extract(args, cp) -> int:
    grid = grid_from_config(cp)
    f = _load_field(args.field, grid)
    cfg = bubbles_mod.ExtractionConfig(
        delta=args.delta, p=args.p, c_thresh=args.c_thresh,
        max_pieces=args.max_pieces)
    extractor = bubbles_mod.extract_bubbles_real if args.real \
        else bubbles_mod.extract_bubbles
    report = extractor(f, cfg)
    lines = []
    for b in report.pieces:
        lines.append(json.dumps({
            "rho": b.rho, "xi0": b.xi0,
            "support_lo": b.support.lo, "support_hi": b.support.hi,
            "l2_mass": b.mass,
        }))
    lines.append(json.dumps({
        "remainder_l2": l2_norm(report.remainder),
        "remainder_strichartz": report.strichartz_of_remainder,
        "parseval_defect": report.parseval_defect,
        "iterations": report.iterations,
        "termination": report.termination,
    }))
    _emit(args, "extraction.jsonl", "\n".join(lines) + "\n")
    _atomic_write_field(_out_path(args, "remainder.fld"), report.remainder)
    print(lines[-1])
    return 0


def _parse_params(text: str) -> SymmetryParams:
    vals = [float(v) for v in text.split(",")]
    if len(vals) != 5:
        raise UsageError("symmetry params need 5 comma-separated values h,xi,x0,t0,theta")
    return SymmetryParams(h=vals[0], xi=vals[1], x0=vals[2], t0=vals[3],
                          theta=vals[4])


def cmd_separation(args, cp) -> int:
    a = _parse_params(args.a)
    b = _parse_params(args.b)
    score = separation.separation_score(a, b, tol=args.tol)
    record = {"branch": score.branch, "score": score.value}
    grid = grid_from_config(cp)
    if args.profile:
        phi = _load_field(args.profile, grid)
        value, warnings = separation.profile_inner_product((a, phi), (b, phi))
        record["inner_product_abs"] = abs(value)
        record["l6_defect"] = separation.l6_additivity_defect([(a, phi), (b, phi)])
        record["warnings"] = list(warnings)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["pair_id", "branch", "score", "inner_product_abs", "l6_defect"])
    writer.writerow([0, score.branch, score.value,
                     record.get("inner_product_abs", ""),
                     record.get("l6_defect", "")])
    _emit(args, "separation.csv", buf.getvalue())
    print(json.dumps(record))
    return 0


def cmd_maximize(args, cp) -> int:
    grid = grid_from_config(cp)
    if args.field:
        init = _load_field(args.field, grid)
    else:
        rng = np.random.default_rng(args.seed)
        init = random_band_limited_field(grid, rng)
    opts = extremal.AscentOptions(max_iters=args.iters,
                                  dispersion=args.dispersion)
    trace = extremal.maximize(init, opts)
    lines = [
        json.dumps({"iter": i, "objective": obj, "step": step, "centroid": cen})
        for i, (obj, step, cen) in enumerate(trace.iterates)
    ]
    _emit(args, "trace.jsonl", "\n".join(lines) + "\n")
    _atomic_write_field(_out_path(args, "maximizer.fld"), trace.final_field)
    record = {"objective": trace.final_objective,
              "classification": trace.classification,
              "accepted_steps": trace.accepted_steps}
    _emit(args, "maximize.json", json.dumps(record) + "\n")
    print(json.dumps(record))
    return 0


def cmd_baseline(args, cp) -> int:
    grid = grid_from_config(cp)
    base = extremal.schrodinger_baseline(grid)
    record = {"s_schr": base.s_schr_estimate, "warnings": list(base.warnings)}
    _emit(args, "baseline.json", json.dumps(record) + "\n")
    _atomic_write_field(_out_path(args, "baseline.fld"), base.gaussian_profile)
    print(json.dumps(record))
    return 0


def cmd_embed(args, cp) -> int:
    grid = grid_from_config(cp)
    if args.field:
        u0 = _load_field(args.field, grid)
    else:
        u0 = gaussian_field(grid)
    n_list = [float(v) for v in args.n_list.split(",")]
    table = extremal.embedding_experiment(u0, n_list, mode=args.mode)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["N", "status", "mass", "strichartz", "ratio", "mass_fraction"])
    for row in table["rows"]:
        writer.writerow([row["N"], row["status"], row["mass"],
                         row.get("strichartz"), row.get("ratio"),
                         row.get("mass_fraction")])
    _emit(args, "embedding.csv", buf.getvalue())
    print(json.dumps({"target_ratio": table["target_ratio"],
                      "max_admissible_N": table["max_admissible_N"]}))
    return 0


def cmd_dichotomy(args, cp) -> int:
    grid = grid_from_config(cp)
    base = extremal.schrodinger_baseline(grid)
    if args.field:
        init = _load_field(args.field, grid)
    else:
        init = gaussian_field(grid, modulation=args.modulation)
    opts = extremal.AscentOptions(max_iters=args.iters)
    trace = extremal.maximize(init, opts)
    report = extremal.dichotomy_report(trace, base, mode=args.mode)
    _emit(args, "dichotomy.json", json.dumps(report) + "\n")
    print(json.dumps(report))
    if not report["bound_ok"]:
        raise AirylabError("one-sided sharp-constant bound violated")
    return 0


def cmd_synth(args, cp) -> int:
    grid = grid_from_config(cp)
    rng = np.random.default_rng(args.seed)
    samples = np.zeros(grid.n_points, dtype=np.complex128)
    specs = []
    if cp.has_section("synth"):
        for key, val in cp["synth"].items():
            if key.startswith("bubble"):
                specs.append(val)
    if args.bubble:
        specs.extend(args.bubble)
    if not specs:
        raise UsageError("synth needs at least one bubble (config [synth] or --bubble)")
    planted = []
    for spec_text in specs:
        vals = [float(v) for v in spec_text.split(",")]
        if len(vals) != 4:
            raise UsageError("bubble spec needs h,xi,x0,amplitude")
        h, xi, x0, amp = vals
        g = gaussian_field(grid, width=h, center=x0, modulation=xi)
        samples += amp * g.samples
        planted.append({"h": h, "xi": xi, "x0": x0, "amplitude": amp})
    field = Field(grid, samples)
    if args.noise > 0:
        noise = random_band_limited_field(grid, rng)
        field = Field(grid, field.samples
                      + args.noise * l2_norm(field) * noise.samples)
    norm = l2_norm(field)
    if args.normalize and norm > 0:
        field = Field(grid, field.samples / norm)
    _atomic_write_field(_out_path(args, "synth.fld"), field)
    _emit(args, "synth.json",
          json.dumps({"planted": planted, "noise": args.noise,
                      "l2": l2_norm(field)}) + "\n")
    print(json.dumps({"planted": len(planted), "l2": l2_norm(field)}))
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="INI-style experiment config")
    common.add_argument("--seed", type=int, default=0, help="RNG seed")
    common.add_argument("--out", default=".", help="output directory")

    parser = argparse.ArgumentParser(
        prog="airylab",
        description="pseudospectral experiments for the Airy Strichartz problem")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("propagate", parents=[common])
    p.add_argument("field")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--dispersion", choices=["airy", "schrodinger"], default="airy")
    p.set_defaults(fn=cmd_propagate)

    p = sub.add_parser("norm", parents=[common])
    p.add_argument("field")
    p.add_argument("--alpha", type=float, default=1.0 / 6.0)
    p.add_argument("--q", type=float, default=6.0)
    p.add_argument("--r", type=float, default=6.0)
    p.add_argument("--dispersion", choices=["airy", "schrodinger"], default="airy")
    p.set_defaults(fn=cmd_norm)

    p = sub.add_parser("concentrate", parents=[common])
    p.add_argument("field")
    p.add_argument("--p", type=float, default=4.0 / 3.0)
    p.set_defaults(fn=cmd_concentrate)

    p = sub.add_parser("whitney-check", parents=[common])
    p.add_argument("--scale", type=int, required=True)
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--min-scale", type=int, required=True)
    p.set_defaults(fn=cmd_whitney_check)

    p = sub.add_parser("extract", parents=[common])
    p.add_argument("field")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--p", type=float, default=4.0 / 3.0)
    p.add_argument("--c-thresh", type=float, default=4.0)
    p.add_argument("--max-pieces", type=int, default=64)
    p.add_argument("--real", action="store_true")
    p.set_defaults(fn=cmd_extract)

    p = sub.add_parser("separation", parents=[common])
    p.add_argument("--a", required=True, help="h,xi,x0,t0,theta")
    p.add_argument("--b", required=True, help="h,xi,x0,t0,theta")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--profile", default=None, help="optional field file")
    p.set_defaults(fn=cmd_separation)

    p = sub.add_parser("maximize", parents=[common])
    p.add_argument("--field", default=None)
    p.add_argument("--iters", type=int, default=200)
    p.add_argument("--dispersion", choices=["airy", "schrodinger"], default="airy")
    p.set_defaults(fn=cmd_maximize)

    p = sub.add_parser("baseline", parents=[common])
    p.set_defaults(fn=cmd_baseline)

    p = sub.add_parser("embed", parents=[common])
    p.add_argument("--field", default=None)
    p.add_argument("--n-list", default="4,8,16,32")
    p.add_argument("--mode", choices=["complex", "real"], default="complex")
    p.set_defaults(fn=cmd_embed)

    p = sub.add_parser("dichotomy", parents=[common])
    p.add_argument("--field", default=None)
    p.add_argument("--iters", type=int, default=100)
    p.add_argument("--mode", choices=["complex", "real"], default="complex")
    p.add_argument("--modulation", type=float, default=0.0)
    p.set_defaults(fn=cmd_dichotomy)

    p = sub.add_parser("synth", parents=[common])
    p.add_argument("--bubble", action="append", default=None,
                   help="h,xi,x0,amplitude (repeatable)")
    p.add_argument("--noise", type=float, default=0.0,
                   help="band-limited noise, fraction of signal mass")
    p.add_argument("--normalize", action="store_true")
    p.set_defaults(fn=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cp = load_config(args.config)
        return args.fn(args, cp)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except AirylabError as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(record), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
