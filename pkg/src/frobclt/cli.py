"""Command-line entry point: ``frobclt <command> [options]``.

Every command prints comma-separated data to stdout and nothing else, so a
rerun with the same options is byte-identical.  ``--report FILE`` writes a JSON
record with the resolved configuration, content hashes of the inputs and
wall-clock timing.  ``--config FILE`` reads ``key=value`` lines; explicit
flags override them.  Errors go to stderr as one JSON object and the exit code
is nonzero (2 for bad arguments, 1 for everything else).

Output formats:

    enumerate   degree,c0,c1,c2,1,d_K,r2           (field table lines)
    frobscan    field_id,p,symbol,a                 (or a binary cache via --cache)
    clt         r,empirical,reference,deviation,stderr
    satotate    parameter,value,reference,deviation
    densities   symbol,numerator,denominator
    hecke       j,h_n(j)   or   N,k,dimension
    ingest      field table lines, duplicates dropped
    cache       export: as frobscan; verify: group,x,series,entries
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import logging
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import cubic, densities, fieldstore, frobenius, hecke, moments, satotate
from .errors import FrobCLTError
from .symchar import trivial_multiplicity

log = logging.getLogger("frobclt")

COMMANDS = ("enumerate", "frobscan", "clt", "satotate", "densities", "hecke", "ingest", "cache")
DEFAULT_POLY = "-1,-1,0,1"  # x^3 - x - 1


class UsageError(ValueError):
    """Bad or inconsistent arguments (exit status 2)."""


@dataclass
class ExperimentConfig:
    command: str = "densities"
    group: str = "s3"
    X: int = 10**4
    x: int = 1000
    R: int = 4
    mode: str = "empirical"
    seed: int = 0
    samples: int = 10**4
    signature: str = "all"
    include_ramified: bool = True
    p: str = "2"
    r: int = 2
    poly: str = DEFAULT_POLY
    input: str | None = None
    out: str | None = None
    cache: str | None = None
    checkpoint: str | None = None
    report: str | None = None
    config: str | None = None
    action: str | None = None
    expand: int | None = None
    dim: tuple | None = None
    prime_cap: int = frobenius.PRIME_CAP
    unresolved_cap: float = moments.UNRESOLVED_CAP
    se_multiplier: float = 4.0

    def echo(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in dataclasses.asdict(self).items()}


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}


def _coerce(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    if kind in ("int", "int | None"):
        return int(float(raw)) if "e" in raw.lower() else int(raw)
    if kind == "float":
        return float(raw)
    if kind == "bool":
        low = raw.strip().lower()
        if low not in ("1", "0", "true", "false", "yes", "no"):
            raise UsageError(f"{key} expects a boolean, got {raw!r}")
        return low in ("1", "true", "yes")
    if kind == "tuple | None":
        return tuple(int(t) for t in raw.replace(",", " ").split())
    return raw


def read_config_file(path) -> dict:
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, raw = (t.strip() for t in line.split("=", 1))
        if key not in _FIELD_TYPES:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _coerce(key, raw)
    return out


# ---------------------------------------------------------------------------
# commands; each returns the stdout text


def _prime_arg(raw) -> float | int:
    if str(raw).lower() in ("inf", "infinity"):
        return math.inf
    return int(raw)


def _cubic_records(cfg: ExperimentConfig):
    return cubic.enumerate_fields(cfg.X, cfg.signature, cfg.checkpoint)


def _load_table(cfg: ExperimentConfig, group=None):
    if not cfg.input:
        raise UsageError("--input is required")
    with open(cfg.input, encoding="utf-8") as fh:
        return fieldstore.parse_field_table(fh, group=group)


def _family(cfg: ExperimentConfig):
    """Empirical family: an ingested table if given, otherwise enumerated cubic fields."""
    group = densities.normalize_group(cfg.group)
    if cfg.input:
        records, _ = fieldstore.ingest(_load_table(cfg, group))
        if not records:
            raise UsageError(f"no fields in {cfg.input}")
        primes = frobenius.sieve_primes(cfg.x)
        series = [frobenius.trace_series(r, cfg.x, primes) for r in records]
        return series
    if group != "S3":
        raise UsageError(f"empirical {group} families need --input")
    fields = _cubic_records(cfg)
    if not fields:
        raise UsageError(f"no cubic fields with |d_K| < {cfg.X}")
    forms = [f.form.coeffs for f in fields]
    return frobenius.cubic_trace_family(forms, [f.d_K for f in fields], cfg.x, field_ids=[f.field_id for f in fields])


def cmd_enumerate(cfg: ExperimentConfig) -> str:
    if densities.normalize_group(cfg.group) != "S3":
        raise UsageError("only cubic (s3) fields can be enumerated")
    buf = io.StringIO()
    for rec in _cubic_records(cfg):
        buf.write(",".join(map(str, (3, *rec.poly, rec.d_K, 1 if rec.d_K < 0 else 0))) + "\n")
    return buf.getvalue()


def cmd_frobscan(cfg: ExperimentConfig) -> str:
    records = _load_table(cfg, cfg.group)
    if cfg.x > cfg.prime_cap:
        raise UsageError(f"x={cfg.x} exceeds prime cap {cfg.prime_cap}")
    series = fieldstore.compute_series(records, cfg.x)
    if cfg.cache:
        fieldstore.write_trace_cache(cfg.cache, series, cfg.x, cfg.group)
        return ""
    return fieldstore.export_trace_text(series)


def cmd_clt(cfg: ExperimentConfig) -> str:
    if cfg.mode == "montecarlo":
        sc = moments.SamplerConfig(cfg.group, cfg.x, cfg.samples, cfg.seed, cfg.include_ramified)
        stats = moments.sample_statistics(sc)
    elif cfg.mode == "empirical":
        stats = moments.family_statistics(_family(cfg), cfg.unresolved_cap)
    else:
        raise UsageError(f"clt mode must be empirical or montecarlo, got {cfg.mode!r}")
    if stats.size == 0:
        raise UsageError("family is empty")
    reports = moments.moments_from_statistics(stats, cfg.R, cfg.x)
    return "".join(rep.csv() + "\n" for rep in reports)


def _row(parameter, value, reference) -> str:
    return f"{parameter},{value:.10g},{float(reference):.10g},{abs(value - float(reference)):.10g}\n"


def cmd_satotate(cfg: ExperimentConfig) -> str:
    group = densities.normalize_group(cfg.group)
    buf = io.StringIO()
    if cfg.mode == "horizontal":
        if cfg.input:
            records = _load_table(cfg, group)
        else:
            coeffs = tuple(int(t) for t in cfg.poly.split(","))
            if len(coeffs) != 4:
                raise UsageError("--poly takes c0,c1,c2,1 for a cubic; use --input otherwise")
            form = cubic.maximal_form((1, coeffs[2], coeffs[1], coeffs[0]))
            records = [frobenius.FieldData(coeffs, form.disc, form.coeffs, f"3:{form.disc}:" + "/".join(map(str, coeffs)))]
        primes = frobenius.sieve_primes(cfg.x)
        for rec in records:
            s = frobenius.trace_series(rec, cfg.x, primes)
            for r in range(1, cfg.R + 1):
                ref = trivial_multiplicity(s.degree, r)
                buf.write(_row(f"{s.field_id}:r={r}", satotate.horizontal_moment(s, r, cfg.unresolved_cap), ref))
    elif cfg.mode == "vertical":
        p = int(cfg.p)
        if cfg.input or group == "S3":
            cfg = dataclasses.replace(cfg, x=max(cfg.x, p))
            fam = _family(cfg)
        else:
            sc = moments.SamplerConfig(group, p, cfg.samples, cfg.seed, cfg.include_ramified)
            fam = moments.sample_frobenius_family(sc)
        for r in range(1, cfg.R + 1):
            buf.write(_row(f"p={p}:r={r}", satotate.vertical_moment(fam, p, r), satotate.vertical_reference(group, p, r)))
    elif cfg.mode == "measure":
        p = _prime_arg(cfg.p)
        for n in range(0, cfg.R + 1, 2):
            buf.write(_row(f"p={cfg.p}:n={n}", satotate.cdf_measure_moment(p, n), satotate.semicircle_moment(n)))
    else:
        raise UsageError(f"satotate mode must be horizontal, vertical or measure, got {cfg.mode!r}")
    return buf.getvalue()


def cmd_densities(cfg: ExperimentConfig) -> str:
    rows = densities.density_table(cfg.group, int(cfg.p))
    return "".join(f"{sym},{q.numerator},{q.denominator}\n" for sym, q in rows)


def cmd_hecke(cfg: ExperimentConfig) -> str:
    if cfg.expand is not None:
        h = hecke.hecke_power_expand(cfg.expand)
        return "".join(f"{j},{c}\n" for j, c in enumerate(h.coeffs))
    if cfg.dim:
        N, k = cfg.dim
        return f"{N},{k},{hecke.dimension_main_term(N, k):.10g}\n"
    raise UsageError("hecke needs --expand n or --dim N k")


def cmd_ingest(cfg: ExperimentConfig) -> str:
    kept, collisions = fieldstore.ingest(_load_table(cfg, cfg.group))
    for first, dup in collisions:
        log.warning("line %s duplicates line %s (d_K=%s)", dup.lineno, first.lineno, dup.d_K)
    return fieldstore.serialize_field_table(kept)


def cmd_cache(cfg: ExperimentConfig) -> str:
    if not cfg.input:
        raise UsageError("cache needs a file")
    group, x, series = fieldstore.read_trace_cache(cfg.input)
    if cfg.action == "export":
        return fieldstore.export_trace_text(series)
    if cfg.action == "verify":
        return f"{group},{x},{len(series)},{sum(len(s) for s in series)}\n"
    raise UsageError("cache action must be export or verify")


HANDLERS = {
    "enumerate": cmd_enumerate,
    "frobscan": cmd_frobscan,
    "clt": cmd_clt,
    "satotate": cmd_satotate,
    "densities": cmd_densities,
    "hecke": cmd_hecke,
    "ingest": cmd_ingest,
    "cache": cmd_cache,
}


def _input_hashes(cfg: ExperimentConfig) -> dict:
    out = {}
    for key in ("input", "config"):
        path = getattr(cfg, key, None)
        if path and Path(path).is_file():
            out[path] = fieldstore.git_blob_hash(Path(path).read_bytes())
    return out


def run_experiment(config: ExperimentConfig, stdout=None) -> int:
    """Run one command; returns the exit status.  Errors become a JSON record on stderr."""
    stdout = stdout or sys.stdout
    start = time.perf_counter()
    try:
        if config.command not in HANDLERS:
            raise UsageError(f"unknown command {config.command!r}")
        text = HANDLERS[config.command](config)
    except UsageError as exc:
        _error(config, exc)
        return 2
    except (FrobCLTError, ValueError, ArithmeticError, OSError, RuntimeError) as exc:
        _error(config, exc)
        return 1
    if config.out and text:
        header = "config " + json.dumps(config.echo(), sort_keys=True)
        fieldstore.atomic_write(config.out, f"# {header}\n" + text if config.command in ("enumerate", "ingest") else text)
    else:
        stdout.write(text)
    if config.report:
        report = {
            "config": config.echo(),
            "inputs": _input_hashes(config),
            "output_hash": fieldstore.git_blob_hash(text.encode("utf-8")),
            "seconds": round(time.perf_counter() - start, 6),
        }
        fieldstore.atomic_write(config.report, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0


def _error(config: ExperimentConfig, exc: BaseException) -> None:
    record = {"command": config.command, "error": type(exc).__name__, "message": str(exc)}
    sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        sys.stderr.write(json.dumps({"command": None, "error": "UsageError", "message": message}) + "\n")
        raise SystemExit(2)


def _common(sp):
    sp.add_argument("--config", help="key=value file; flags override it")
    sp.add_argument("--report", help="write a JSON run report here")
    sp.add_argument("--out", help="write output here (atomically) instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    # defaults are None so that only explicit flags override the config file
    ap = _Parser(prog="frobclt", description=__doc__.splitlines()[0], argument_default=None)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("enumerate", help="cubic fields by discriminant")
    sp.add_argument("--group")
    sp.add_argument("--bound", dest="X", type=int)
    sp.add_argument("--signature", choices=["r", "c", "all"])
    sp.add_argument("--checkpoint")
    _common(sp)

    sp = sub.add_parser("frobscan", help="splitting symbols and traces for a field table")
    sp.add_argument("--input", required=True)
    sp.add_argument("--group")
    sp.add_argument("--x", type=int)
    sp.add_argument("--cache", help="write the binary cache instead of text")
    _common(sp)

    sp = sub.add_parser("clt", help="moments of the normalized trace sum")
    sp.add_argument("--group")
    sp.add_argument("--mode", choices=["empirical", "montecarlo"])
    sp.add_argument("--X", type=int)
    sp.add_argument("--x", type=int)
    sp.add_argument("--R", type=int)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--signature", choices=["r", "c", "all"])
    sp.add_argument("--input")
    sp.add_argument("--exclude-ramified", dest="include_ramified", action="store_const", const=False)
    _common(sp)

    sp = sub.add_parser("satotate", help="horizontal, vertical and measure moments")
    sp.add_argument("--mode", choices=["horizontal", "vertical", "measure"])
    sp.add_argument("--group")
    sp.add_argument("--X", type=int)
    sp.add_argument("--x", type=int)
    sp.add_argument("--p")
    sp.add_argument("--R", type=int)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--signature", choices=["r", "c", "all"])
    sp.add_argument("--poly", help="c0,c1,c2,1 of a cubic for horizontal mode")
    sp.add_argument("--input")
    sp.add_argument("--exclude-ramified", dest="include_ramified", action="store_const", const=False)
    _common(sp)

    sp = sub.add_parser("densities", help="local density table at one prime")
    sp.add_argument("group")
    sp.add_argument("p")
    _common(sp)

    sp = sub.add_parser("hecke", help="Hecke power expansion or dimension main term")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--expand", type=int, metavar="n")
    g.add_argument("--dim", type=int, nargs=2, metavar=("N", "k"))
    _common(sp)

    sp = sub.add_parser("ingest", help="validate and deduplicate a field table")
    sp.add_argument("--input", required=True)
    sp.add_argument("--group")
    _common(sp)

    sp = sub.add_parser("cache", help="inspect a binary trace cache")
    sp.add_argument("action", choices=["export", "verify"])
    sp.add_argument("input")
    _common(sp)
    return ap


def config_from_args(argv=None) -> ExperimentConfig:
    ns = build_parser().parse_args(argv)
    values = read_config_file(ns.config) if ns.config else {}
    for key, val in vars(ns).items():
        if key in _FIELD_TYPES and val is not None:
            values[key] = tuple(val) if isinstance(val, list) else val
    values["command"] = ns.command
    return ExperimentConfig(**values)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = config_from_args(argv)
    except UsageError as exc:
        _error(ExperimentConfig(command=""), exc)
        return 2
    return run_experiment(cfg)


if __name__ == "__main__":
    sys.exit(main())
