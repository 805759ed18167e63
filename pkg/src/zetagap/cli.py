"""Command-line driver: exact configurations in, deterministic reports out.

Subcommands wrap the library layers one-to-one — `verify` checks the built-in
reference table, `ratio` evaluates the functional at one point, `scan`
tabulates it over a bracket, `optimize` searches a family, `euler` evaluates
the prime-product constant. Configuration files are a flat `key = value`
format with exact rational values; every report embeds the fully resolved
configuration so a result file is self-describing. Reports are written
atomically (temp file, then rename) with fixed field order and LF line
endings, so identical inputs produce byte-identical files.

Exit codes: 0 success, 1 user/configuration error or verification failure,
2 internal error. No other codes are used.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import mpmath
from gmpy2 import mpq

from .euler_product import EulerProductResult, a_const
from .gap_ratio import RatioReport, f_series
from .moment_integrals import GapConfig
from .optimizer import FamilySpec, SearchResult, optimize
from .poly_core import Polynomial, Rat, as_rat, format_poly, parse_poly

EXIT_OK = 0
EXIT_USER = 1
EXIT_INTERNAL = 2

DEFAULT_TOLERANCE = "2e-6"


class UserError(ValueError):
    """Invalid input or configuration: reported on stderr, exit code 1."""


class InternalError(RuntimeError):
    """Broken internal state: reported on stderr, exit code 2."""


# Built-in reference rows: (label, config key, c as a multiple of pi, expected
# leading digits, gating). The expected digits for the weighted configuration
# are attained near c/pi = 61/20, not at 384/125 where its reference row pins
# them; both rows are kept so every report shows the discrepancy and where the
# value actually occurs. Only gating rows decide the exit status.
VERIFY_TABLE: tuple[tuple[str, str, str, str, bool], ...] = (
    ("p0-only@c/pi=3", "p0-only", "3", "0.999481", True),
    ("p0-plus-p2@c/pi=384/125", "p0-plus-p2", "384/125", "0.999846", True),
    ("p0-plus-p2@c/pi=61/20", "p0-plus-p2", "61/20", "0.999846", False),
)


def builtin_configs() -> dict[str, GapConfig]:
    """The two reference configurations the verify table rows point into."""
    return {
        "p0-only": GapConfig(
            r=2,
            eta=mpq(1, 2),
            p0=Polynomial.monomial(30, 1),
            p2=Polynomial.zero(),
            J=30,
            precision=50,
        ),
        "p0-plus-p2": GapConfig(
            r=2,
            eta=mpq(1, 2),
            p0=Polynomial.monomial(30, 1),
            p2=Polynomial.monomial(165, mpq(-157, 5)),
            J=30,
            precision=50,
        ),
    }


def _validate_verify_table(table: object) -> None:
    """Schema-check the reference table; any defect is an internal error."""
    try:
        assert isinstance(table, tuple) and table, "table must be a nonempty tuple"
        configs = builtin_configs()
        gating_rows = 0
        labels = set()
        for row in table:
            label, key, c_str, expected, gating = row
            assert isinstance(label, str) and label, "row label must be nonempty"
            assert label not in labels, f"duplicate label {label!r}"
            labels.add(label)
            assert key in configs, f"unknown config key {key!r}"
            c_mult = as_rat(c_str)
            assert c_mult > 0, "c multiplier must be positive"
            value = mpmath.mpf(expected)
            assert 0 < value < 2, "expected value out of range"
            assert isinstance(gating, bool), "gating flag must be a bool"
            gating_rows += gating
        assert gating_rows >= 2, "need at least two gating rows"
    except Exception as exc:
        raise InternalError(f"built-in verification table is corrupted: {exc}") from exc


# ---------------------------------------------------------------------------
# configuration files: flat `key = value`, exact rationals, round-trippable


def _parse_flat(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UserError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise UserError(f"line {lineno}: empty key")
        if key in out:
            raise UserError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value.strip()
    return out


def _require_keys(kv: dict[str, str], required: set[str], optional: set[str]) -> None:
    missing = sorted(required - kv.keys())
    if missing:
        raise UserError(f"missing keys: {', '.join(missing)}")
    unknown = sorted(kv.keys() - required - optional)
    if unknown:
        raise UserError(f"unknown keys: {', '.join(unknown)}")


def parse_config_text(text: str) -> GapConfig:
    """Parse a flat `key = value` configuration into a GapConfig."""
    kv = _parse_flat(text)
    _require_keys(kv, {"r", "eta", "J", "precision", "p0"}, {"p2"})
    try:
        return GapConfig(
            r=int(kv["r"]),
            eta=as_rat(kv["eta"]),
            p0=parse_poly(kv["p0"]),
            p2=parse_poly(kv.get("p2", "")),
            J=int(kv["J"]),
            precision=int(kv["precision"]),
        )
    except (ValueError, TypeError) as exc:
        raise UserError(f"invalid configuration: {exc}") from exc


def format_config_text(cfg: GapConfig) -> str:
    """Serialize a GapConfig so parse_config_text returns an identical value."""
    lines = [
        f"r = {cfg.r}",
        f"eta = {cfg.eta}",
        f"J = {cfg.J}",
        f"precision = {cfg.precision}",
        f"p0 = {format_poly(cfg.p0)}".rstrip(),
        f"p2 = {format_poly(cfg.p2)}".rstrip(),
    ]
    return "\n".join(lines) + "\n"


def _int_list(value: str, label: str) -> list[int]:
    try:
        return [int(tok.strip()) for tok in value.split(",") if tok.strip()]
    except ValueError as exc:
        raise UserError(f"{label}: expected comma-separated integers") from exc


def parse_family_text(text: str) -> FamilySpec:
    """Parse a flat `key = value` family description into a FamilySpec."""
    kv = _parse_flat(text)
    required = {"r_values", "p0_degrees", "p2_degrees", "coeff_lo", "coeff_hi", "budget"}
    optional = {
        "eta",
        "J",
        "precision",
        "c_lo_mult",
        "c_hi_mult",
        "scan_tol_mult",
        "coeff_tol",
    }
    _require_keys(kv, required, optional)
    kwargs = dict(
        p0_degrees=_int_list(kv["p0_degrees"], "p0_degrees"),
        p2_degrees=_int_list(kv["p2_degrees"], "p2_degrees"),
        r_values=_int_list(kv["r_values"], "r_values"),
    )
    try:
        kwargs["p2_coeff_range"] = (as_rat(kv["coeff_lo"]), as_rat(kv["coeff_hi"]))
        kwargs["budget"] = int(kv["budget"])
        for key in ("J", "precision"):
            if key in kv:
                kwargs[key] = int(kv[key])
        for key in ("eta", "c_lo_mult", "c_hi_mult", "scan_tol_mult", "coeff_tol"):
            if key in kv:
                kwargs[key] = as_rat(kv[key])
        return FamilySpec(**kwargs)
    except (ValueError, TypeError) as exc:
        raise UserError(f"invalid family: {exc}") from exc


# ---------------------------------------------------------------------------
# serialization: fixed field order, numbers as exact decimal strings


def _fmt_real(x: Optional[mpmath.mpf], digits: int) -> Optional[str]:
    if x is None:
        return None
    if not isinstance(x, mpmath.mpf):  # never re-wrap an mpf: that would
        x = mpmath.mpf(x)  # round it to the ambient working precision
    return mpmath.nstr(x, digits)


def config_dict(cfg: GapConfig) -> dict:
    return {
        "r": cfg.r,
        "eta": str(cfg.eta),
        "J": cfg.J,
        "precision": cfg.precision,
        "p0": format_poly(cfg.p0),
        "p2": format_poly(cfg.p2),
    }


def _config_compact(cfg: GapConfig) -> str:
    parts = [f"{k}={v}" for k, v in config_dict(cfg).items()]
    return " ".join(parts)


def report_dict(rep: RatioReport) -> dict:
    digits = rep.precision
    return {
        "c": _fmt_real(rep.c, digits),
        "c_over_pi": _fmt_real(rep.c_over_pi, digits),
        "f_value": _fmt_real(rep.f_value, digits),
        "truncation_J": rep.truncation_J,
        "tail_bound": _fmt_real(rep.tail_bound, digits),
        "tail_h_bound": _fmt_real(rep.tail_h_bound, digits),
        "tail_k_bound": _fmt_real(rep.tail_k_bound, digits),
        "admissible": rep.admissible,
        "lambda_bound": _fmt_real(rep.lambda_bound, digits),
        "d_value": _fmt_real(rep.d_value, digits),
        "bracketing_ok": rep.bracketing_ok,
        "precision": rep.precision,
    }


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _csv_text(comments: Sequence[str], header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    for comment in comments:
        buf.write(f"# {comment}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if cell is None else cell for cell in row])
    return buf.getvalue()


def _csv_bool(flag: bool) -> str:
    return "true" if flag else "false"


def _atomic_write(path: str, data: str) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(data)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# commands


@dataclass(frozen=True)
class RunManifest:
    """What a single CLI run is about to do, fixed before any computation."""

    command: str  # verify | ratio | scan | optimize | euler
    config_path: Optional[str]
    output_path: str
    format: str  # json | csv


def _c_from_mult(mult: Rat, precision: int) -> mpmath.mpf:
    with mpmath.workdps(precision + 15):
        return mpmath.pi * mpmath.mpf(mult.numerator) / mpmath.mpf(mult.denominator)


def cmd_verify(manifest: RunManifest, tol_str: str) -> int:
    _validate_verify_table(VERIFY_TABLE)
    try:
        tolerance = mpmath.mpf(tol_str)
    except ValueError as exc:
        raise UserError(f"invalid tolerance {tol_str!r}") from exc
    if not tolerance > 0:
        raise UserError(f"tolerance must be positive, got {tol_str}")
    configs = builtin_configs()
    rows = []
    gating_pass = True
    for label, key, c_str, expected_str, gating in VERIFY_TABLE:
        cfg = configs[key]
        rep = f_series(cfg, _c_from_mult(as_rat(c_str), cfg.precision))
        with mpmath.workdps(cfg.precision + 15):
            expected = mpmath.mpf(expected_str)
            difference = abs(rep.f_value - expected)
            ok = bool(difference <= tolerance)
        if gating and not ok:
            gating_pass = False
        rows.append(
            {
                "label": label,
                "config": config_dict(cfg),
                "c_over_pi": c_str,
                "c": _fmt_real(rep.c, cfg.precision),
                "f_value": _fmt_real(rep.f_value, cfg.precision),
                "expected": expected_str,
                "difference": _fmt_real(difference, 6),
                "tail_bound": _fmt_real(rep.tail_bound, 6),
                "admissible": rep.admissible,
                "gating": gating,
                "status": "PASS" if ok else "FAIL",
            }
        )
    payload = {
        "command": "verify",
        "tolerance": tol_str,
        "rows": rows,
        "gating_pass": gating_pass,
        "status": "PASS" if gating_pass else "FAIL",
    }
    if manifest.format == "json":
        text = _json_text(payload)
    else:
        header = (
            "label",
            "c_over_pi",
            "c",
            "f_value",
            "expected",
            "difference",
            "tail_bound",
            "admissible",
            "gating",
            "status",
        )
        comments = [f"tolerance: {tol_str}"]
        seen = []
        for _, key, *_rest in VERIFY_TABLE:
            if key not in seen:
                seen.append(key)
                comments.append(f"config {key}: {_config_compact(configs[key])}")
        csv_rows = [
            (
                row["label"],
                row["c_over_pi"],
                row["c"],
                row["f_value"],
                row["expected"],
                row["difference"],
                row["tail_bound"],
                _csv_bool(row["admissible"]),
                _csv_bool(row["gating"]),
                row["status"],
            )
            for row in rows
        ]
        text = _csv_text(comments, header, csv_rows)
    _atomic_write(manifest.output_path, text)
    for row in rows:
        print(f"{row['status']}  {row['label']}  f={row['f_value']}")
    print(f"verify: {payload['status']}  (report: {manifest.output_path})")
    return EXIT_OK if gating_pass else EXIT_USER


def cmd_ratio(manifest: RunManifest, cfg: GapConfig, c_mult: Rat) -> int:
    rep = f_series(cfg, _c_from_mult(c_mult, cfg.precision))
    payload = {
        "command": "ratio",
        "config": config_dict(cfg),
        "report": report_dict(rep),
    }
    if manifest.format == "json":
        text = _json_text(payload)
    else:
        body = report_dict(rep)
        header = tuple(body.keys())
        row = [
            _csv_bool(v) if isinstance(v, bool) else v for v in body.values()
        ]
        text = _csv_text([f"config: {_config_compact(cfg)}"], header, [row])
    _atomic_write(manifest.output_path, text)
    print(
        f"f({mpmath.nstr(rep.c_over_pi, 8)}*pi) = {report_dict(rep)['f_value']}"
        f"  admissible={_csv_bool(rep.admissible)}  (report: {manifest.output_path})"
    )
    return EXIT_OK


def cmd_scan(
    manifest: RunManifest, cfg: GapConfig, lo_mult: Rat, hi_mult: Rat, steps: int
) -> int:
    if steps < 2:
        raise UserError(f"steps must be >= 2, got {steps}")
    if not lo_mult < hi_mult:
        raise UserError(f"need c_lo < c_hi, got [{lo_mult}, {hi_mult}]")
    grid = [
        lo_mult + (hi_mult - lo_mult) * mpq(i, steps - 1) for i in range(steps)
    ]
    rows = []
    for mult in grid:
        rep = f_series(cfg, _c_from_mult(mult, cfg.precision))
        rows.append(
            {
                "c": _fmt_real(rep.c, cfg.precision),
                "c_over_pi": _fmt_real(rep.c_over_pi, cfg.precision),
                "f_value": _fmt_real(rep.f_value, cfg.precision),
                "tail_bound": _fmt_real(rep.tail_bound, 6),
                "admissible": rep.admissible,
            }
        )
    payload = {
        "command": "scan",
        "config": config_dict(cfg),
        "c_lo_over_pi": str(lo_mult),
        "c_hi_over_pi": str(hi_mult),
        "steps": steps,
        "rows": rows,
    }
    if manifest.format == "json":
        text = _json_text(payload)
    else:
        header = ("c", "c_over_pi", "f_value", "tail_bound", "admissible")
        csv_rows = [
            (
                row["c"],
                row["c_over_pi"],
                row["f_value"],
                row["tail_bound"],
                _csv_bool(row["admissible"]),
            )
            for row in rows
        ]
        text = _csv_text([f"config: {_config_compact(cfg)}"], header, csv_rows)
    _atomic_write(manifest.output_path, text)
    admissible_count = sum(1 for row in rows if row["admissible"])
    print(
        f"scan: {steps} points on [{lo_mult}, {hi_mult}]*pi, "
        f"{admissible_count} admissible  (report: {manifest.output_path})"
    )
    return EXIT_OK


def cmd_optimize(manifest: RunManifest, spec: FamilySpec) -> int:
    try:
        result: SearchResult = optimize(spec)
    except ValueError as exc:
        raise UserError(str(exc)) from exc
    digits = spec.precision
    trace_rows = [
        {
            "config": entry.config_summary,
            "c_star": _fmt_real(entry.c_star, digits),
            "lambda_bound": _fmt_real(entry.lambda_bound, digits),
            "best_lambda": _fmt_real(entry.best_lambda, digits),
        }
        for entry in result.trace
    ]
    payload = {
        "command": "optimize",
        "family": {
            "r_values": list(spec.r_values),
            "p0_degrees": list(spec.p0_degrees),
            "p2_degrees": list(spec.p2_degrees),
            "coeff_lo": str(spec.p2_coeff_range[0]),
            "coeff_hi": str(spec.p2_coeff_range[1]),
            "budget": spec.budget,
            "eta": str(spec.eta),
            "J": spec.J,
            "precision": spec.precision,
        },
        "best_config": config_dict(result.best_config),
        "best_report": report_dict(result.best_report),
        "evaluations": result.evaluations,
        "trace": trace_rows,
    }
    if manifest.format == "json":
        text = _json_text(payload)
    else:
        header = ("config", "c_star", "lambda_bound", "best_lambda")
        comments = [
            f"best config: {_config_compact(result.best_config)}",
            f"best lambda: {_fmt_real(result.best_report.lambda_bound, digits)}",
            f"evaluations: {result.evaluations}",
        ]
        csv_rows = [
            (row["config"], row["c_star"], row["lambda_bound"], row["best_lambda"])
            for row in trace_rows
        ]
        text = _csv_text(comments, header, csv_rows)
    _atomic_write(manifest.output_path, text)
    print(
        f"optimize: best lambda >= {_fmt_real(result.best_report.lambda_bound, 12)} "
        f"after {result.evaluations} evaluations  (report: {manifest.output_path})"
    )
    return EXIT_OK


def cmd_euler(
    manifest: RunManifest, r: int, cutoff: int, precision: int, jobs: int
) -> int:
    try:
        result: EulerProductResult = a_const(r, cutoff, precision=precision, jobs=jobs)
    except ValueError as exc:
        raise UserError(str(exc)) from exc
    payload = {
        "command": "euler",
        "r": r,
        "prime_cutoff": result.prime_cutoff,
        "precision": precision,
        "value": _fmt_real(result.value, precision),
        "tail_estimate": _fmt_real(result.tail_estimate, 6),
    }
    if manifest.format == "json":
        text = _json_text(payload)
    else:
        header = ("r", "prime_cutoff", "precision", "value", "tail_estimate")
        row = [
            payload["r"],
            payload["prime_cutoff"],
            payload["precision"],
            payload["value"],
            payload["tail_estimate"],
        ]
        text = _csv_text([], header, [row])
    _atomic_write(manifest.output_path, text)
    print(f"a_{r} = {payload['value']}  (report: {manifest.output_path})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing and dispatch


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; we use 1
        raise UserError(message)


def _add_output_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--out", help="report file path (default: zetagap-<command>.<format>)")
    sub.add_argument(
        "--format", choices=("json", "csv"), default="json", help="report format"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="zetagap",
        description="Certified evaluation and search for the zero-gap functional.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check the built-in reference table")
    _add_output_flags(p)
    p.add_argument(
        "--tol",
        default=DEFAULT_TOLERANCE,
        help=f"match tolerance for reference digits (default {DEFAULT_TOLERANCE})",
    )

    p = sub.add_parser("ratio", help="evaluate the functional at one point")
    _add_output_flags(p)
    p.add_argument("--config", required=True, help="configuration file")
    p.add_argument("--c", required=True, help="c as a multiple of pi (exact rational)")
    p.add_argument("--precision", type=int, help="override the config's output digits")

    p = sub.add_parser("scan", help="tabulate the functional over a bracket")
    _add_output_flags(p)
    p.add_argument("--config", required=True, help="configuration file")
    p.add_argument("--c-lo", required=True, help="lower c, as a multiple of pi")
    p.add_argument("--c-hi", required=True, help="upper c, as a multiple of pi")
    p.add_argument("--steps", type=int, default=64, help="number of grid points")
    p.add_argument("--precision", type=int, help="override the config's output digits")

    p = sub.add_parser("optimize", help="search a polynomial family")
    _add_output_flags(p)
    p.add_argument("--config", required=True, help="family description file")

    p = sub.add_parser("euler", help="evaluate the prime-product constant")
    _add_output_flags(p)
    p.add_argument("--r", type=int, required=True, help="moment order r >= 1")
    p.add_argument("--cutoff", type=int, default=10**6, help="prime cutoff")
    p.add_argument("--precision", type=int, default=50, help="output digits")
    p.add_argument(
        "--jobs", type=int, default=0, help="worker processes (0 = all cores)"
    )

    return parser


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UserError(f"cannot read {path}: {exc}") from exc


def _with_precision(cfg: GapConfig, precision: Optional[int]) -> GapConfig:
    if precision is None:
        return cfg
    try:
        return GapConfig(
            r=cfg.r, eta=cfg.eta, p0=cfg.p0, p2=cfg.p2, J=cfg.J, precision=precision
        )
    except ValueError as exc:
        raise UserError(f"invalid precision: {exc}") from exc


def _parse_mult(text: str, label: str) -> Rat:
    try:
        value = as_rat(text)
    except ValueError as exc:
        raise UserError(f"{label}: {exc}") from exc
    if value <= 0:
        raise UserError(f"{label} must be positive, got {text}")
    return value


def _plan(args: argparse.Namespace) -> tuple[RunManifest, Callable[[], int]]:
    """Resolve the manifest and a runner; configs parse before any computation."""
    out_path = args.out or f"zetagap-{args.command}.{args.format}"
    config_path = getattr(args, "config", None)
    manifest = RunManifest(
        command=args.command,
        config_path=config_path,
        output_path=out_path,
        format=args.format,
    )
    if args.command == "verify":
        return manifest, lambda: cmd_verify(manifest, args.tol)
    if args.command == "ratio":
        cfg = _with_precision(
            parse_config_text(_read_file(config_path)), args.precision
        )
        c_mult = _parse_mult(args.c, "--c")
        return manifest, lambda: cmd_ratio(manifest, cfg, c_mult)
    if args.command == "scan":
        cfg = _with_precision(
            parse_config_text(_read_file(config_path)), args.precision
        )
        lo = _parse_mult(args.c_lo, "--c-lo")
        hi = _parse_mult(args.c_hi, "--c-hi")
        return manifest, lambda: cmd_scan(manifest, cfg, lo, hi, args.steps)
    if args.command == "optimize":
        spec = parse_family_text(_read_file(config_path))
        return manifest, lambda: cmd_optimize(manifest, spec)
    if args.command == "euler":
        jobs = args.jobs if args.jobs > 0 else (os.cpu_count() or 1)
        return manifest, lambda: cmd_euler(
            manifest, args.r, args.cutoff, args.precision, jobs
        )
    raise InternalError(f"unhandled command {args.command!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        manifest, runner = _plan(args)
    except UserError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER
    try:
        return runner()
    except UserError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # computation failure: exit 2, never a traceback
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
