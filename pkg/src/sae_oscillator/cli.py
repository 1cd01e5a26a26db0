"""
Command-line interface.

    sae-oscillator derive       --m 0.5 --v0 0.09 --g 0.5
    sae-oscillator spectrum     --v0 0.09 --tau -1 --count 5
    sae-oscillator scan-tau     --v0 0.09 --tau-grid auto --out scan/
    sae-oscillator wavefunction --v0 0.09 --tau -1 --level 0
    sae-oscillator verify       --only orthogonality

Physical parameters come from ``--config`` (flat JSON with keys ``m``,
``V0``, ``g``, ``l``, ``tau``, ``count``, ``format``, ``out``) overridden by
flags. Floats are written with 17 significant digits so the files
round-trip exactly.

Exit codes: 0 ok, 1 usage, 2 regime rejection, 3 solver error,
4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from . import checks, spectrum, wavefn
from .errors import (
    DomainError,
    FallToCenterError,
    NoSignChange,
    PhysicalityWarning,
    RegimeError,
    SolverError,
)
from .model import (
    ExtensionParameter,
    PhysicalParams,
    Regime,
    additional_to_standard_ratio,
    derive,
)
from .spectrum import SpectralProblem

__all__ = ["JobConfig", "main", "build_parser", "format_float", "dumps_json"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_REGIME = 2
EXIT_SOLVER = 3
EXIT_VERIFY = 4

_DEFAULTS = {"m": 0.5, "V0": None, "g": 1.0, "l": 0, "tau": "0", "count": 5,
             "format": None, "out": None}


class UsageError(Exception):
    """Bad flags, bad config file or inconsistent options."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------

def format_float(x: float) -> str:
    """17 significant digits in scientific notation; ``inf``/``-inf``/``nan`` spelled out."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.16e}"


def _json_value(v, indent: int) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        # JSON has no infinities; the projective tau point is the string "inf"
        return format_float(v) if math.isfinite(v) else json.dumps(format_float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return json.dumps(v, ensure_ascii=False)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_json_value(val, indent + 1)}" for k, val in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(v, (list, tuple)):
        if not v:
            return "[]"
        if all(not isinstance(x, (dict, list, tuple)) for x in v):
            return "[" + ", ".join(_json_value(x, indent + 1) for x in v) + "]"
        return "[\n" + ",\n".join(pad + _json_value(x, indent + 1) for x in v) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def dumps_json(obj) -> str:
    """JSON text with insertion-ordered keys and fixed float formatting."""
    return _json_value(obj, 0) + "\n"


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(x) if isinstance(x, (float, np.floating)) else
                         ("" if x is None else x) for x in row])
    return buf.getvalue()


def _emit(text: str, out_dir: str | None, filename: str) -> None:
    if out_dir is None:
        sys.stdout.write(text)
        return
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, filename), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _tau_text(tau: ExtensionParameter) -> str:
    return "inf" if tau.is_infinite else format_float(tau.value)


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JobConfig:
    """Everything a subcommand needs: parameters, tau, level count and output options."""

    params: PhysicalParams
    tau: ExtensionParameter
    count: int
    format: str
    out: str | None

    @classmethod
    def from_mapping(cls, values: dict, default_format: str = "csv") -> "JobConfig":
        if values.get("V0") is None:
            raise UsageError("V0 is required (flag --v0 or config key 'V0')")
        try:
            params = PhysicalParams(m=float(values["m"]), V0=float(values["V0"]),
                                    g=float(values["g"]), l=_as_int(values["l"], "l"))
            tau = ExtensionParameter.parse(values["tau"])
            count = _as_int(values["count"], "count")
        except (TypeError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
        if count < 0:
            raise UsageError("count must be non-negative")
        fmt = values["format"] or default_format
        if fmt not in ("csv", "json"):
            raise UsageError(f"format must be csv or json, got {fmt!r}")
        return cls(params=params, tau=tau, count=count, format=fmt, out=values["out"])


def _as_int(v, name: str) -> int:
    if isinstance(v, bool):
        raise UsageError(f"{name} must be an integer")
    if isinstance(v, float) and not v.is_integer():
        raise UsageError(f"{name} must be an integer, got {v!r}")
    try:
        return int(v)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{name} must be an integer, got {v!r}") from exc


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config must be a flat JSON object")
    if "v0" in data and "V0" not in data:
        data["V0"] = data.pop("v0")
    unknown = set(data) - set(_DEFAULTS)
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return data


def _job(args, default_format: str = "csv") -> JobConfig:
    values = dict(_DEFAULTS)
    values.update(_load_config(args.config))
    flags = {"m": args.m, "V0": args.v0, "g": args.g, "l": args.l, "tau": args.tau,
             "count": args.count, "format": args.format, "out": args.out}
    values.update({k: v for k, v in flags.items() if v is not None})
    return JobConfig.from_mapping(values, default_format)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_derive(cfg: JobConfig) -> int:
    d = derive(cfg.params)
    report = {
        "m": cfg.params.m, "V0": cfg.params.V0, "g": cfg.params.g, "l": cfg.params.l,
        "P": d.P, "s": d.s, "omega": d.omega, "kappa_scale": d.kappa_scale,
        "defect": d.defect, "regime": d.regime.value,
    }
    if d.regime is Regime.SAE_REQUIRED:
        report["tau_lower_bound"] = spectrum.tau_lower_bound(d)
        report["additional_to_standard_per_tau"] = additional_to_standard_ratio(1.0, d)
    if cfg.format == "csv":
        rows = [[k, v] for k, v in report.items()]
        _emit(_csv_text(["quantity", "value"], rows), cfg.out, "derive.csv")
    else:
        _emit(dumps_json(report), cfg.out, "derive.json")
    return EXIT_OK


def _solve(problem: SpectralProblem, count: int, search_floor: float) -> tuple[list, bool]:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PhysicalityWarning)
        levels = spectrum.solve_spectrum(problem, count, search_floor=search_floor)
    flagged = any(issubclass(c.category, PhysicalityWarning) for c in caught)
    return levels, flagged


def cmd_spectrum(cfg: JobConfig, search_floor: float) -> int:
    d = derive(cfg.params)
    problem = SpectralProblem(d, cfg.tau)
    levels, flagged = _solve(problem, cfg.count, search_floor)
    w = d.omega
    header = ["n_r", "E", "E/omega", "branch", "bracket_lo", "bracket_hi", "spacing/omega"]
    if problem.unphysical:
        header.append("physicality_warning")
    rows = []
    for i, lev in enumerate(levels):
        spacing = (lev.energy - levels[i - 1].energy) / w if i > 0 else None
        row = [lev.n_r, lev.energy, lev.energy / w, lev.branch.value,
               lev.bracket[0], lev.bracket[1], spacing]
        if problem.unphysical:
            row.append("true" if flagged else "false")
        rows.append(row)
    if cfg.format == "csv":
        _emit(_csv_text(header, rows), cfg.out, "spectrum.csv")
    else:
        doc = {"P": d.P, "omega": d.omega, "tau": _tau_text(cfg.tau)}
        if problem.unphysical:
            doc["physicality_warning"] = flagged
        doc["levels"] = [dict(zip(header, row)) for row in rows]
        _emit(dumps_json(doc), cfg.out, "spectrum.json")
    return EXIT_OK


def _parse_tau_grid(spec: str | None, d) -> list[ExtensionParameter]:
    """``auto`` (50 points inside the negative-level window), ``lo:hi:n`` or a comma list."""
    if spec is None or spec.strip() == "":
        return []
    spec = spec.strip()
    try:
        if spec == "auto":
            lb = spectrum.tau_lower_bound(d)
            return [ExtensionParameter(lb * (j + 0.5) / 50.0) for j in range(50)]
        if ":" in spec:
            lo, hi, n = spec.split(":")
            n = int(n)
            if n < 0:
                raise ValueError("grid size must be non-negative")
            return [ExtensionParameter(float(x)) for x in np.linspace(float(lo), float(hi), n)]
        return [ExtensionParameter.parse(t) for t in spec.split(",") if t.strip()]
    except RegimeError:
        raise
    except ValueError as exc:
        raise UsageError(f"bad --tau-grid {spec!r}: {exc}") from exc


def cmd_scan_tau(cfg: JobConfig, grid_spec: str | None, search_floor: float) -> int:
    d = derive(cfg.params)
    grid = _parse_tau_grid(grid_spec, d)
    per_level: list[list[tuple[ExtensionParameter, float]]] = [[] for _ in range(cfg.count)]
    census = []
    any_flag = False
    for tau in grid:
        problem = SpectralProblem(d, tau)
        levels, flagged = _solve(problem, cfg.count, search_floor)
        any_flag |= flagged
        for lev in levels:
            per_level[lev.n_r].append((tau, lev.energy))
        entry = {"tau": _tau_text(tau), "negative_levels": sum(lev.energy < 0.0 for lev in levels)}
        if tau.is_generic and tau.value < 0.0 and d.regime is Regime.SAE_REQUIRED:
            entry["negative_level_exists"] = spectrum.negative_level_exists(problem)
        census.append(entry)
    summary = {"P": d.P, "omega": d.omega, "count": cfg.count, "grid_size": len(grid)}
    if d.regime is Regime.SAE_REQUIRED:
        summary["tau_lower_bound"] = spectrum.tau_lower_bound(d)
    summary["physicality_warning"] = any_flag
    summary["census"] = census
    if cfg.out is None:
        summary["levels"] = [{"n_r": n, "tau": [_tau_text(t) for t, _ in pts],
                              "E": [e for _, e in pts]} for n, pts in enumerate(per_level) if grid]
        _emit(dumps_json(summary), None, "")
        return EXIT_OK
    if grid:
        for n, pts in enumerate(per_level):
            if cfg.format == "csv":
                text = _csv_text(["tau", "E"], [[_tau_text(t), e] for t, e in pts])
                _emit(text, cfg.out, f"level_{n}.csv")
            else:
                text = dumps_json({"n_r": n, "tau": [_tau_text(t) for t, _ in pts],
                                   "E": [e for _, e in pts]})
                _emit(text, cfg.out, f"level_{n}.json")
    _emit(dumps_json(summary), cfg.out, "summary.json")
    return EXIT_OK


def _parse_r_grid(spec: str | None, d) -> np.ndarray:
    """``rmin:rmax:n`` (uniform); default 200 points up to r_max where kappa = 50."""
    r_hi = wavefn.r_max(d)
    if spec is None:
        return np.linspace(r_hi / 200.0, r_hi, 200)
    try:
        lo, hi, n = spec.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError as exc:
        raise UsageError(f"bad --r-grid {spec!r}; expected rmin:rmax:n") from exc
    if not (0.0 < lo <= hi) or n < 1:
        raise UsageError("--r-grid needs 0 < rmin <= rmax and n >= 1")
    return np.linspace(lo, hi, n)


def cmd_wavefunction(cfg: JobConfig, level_index: int, r_spec: str | None,
                     search_floor: float) -> int:
    d = derive(cfg.params)
    if level_index < 0:
        raise UsageError("--level must be non-negative")
    problem = SpectralProblem(d, cfg.tau)
    levels, flagged = _solve(problem, level_index + 1, search_floor)
    lev = levels[level_index]
    w0 = wavefn.build(problem, lev)
    try:
        method = "closed_form" if wavefn.normalization_constant(w0) > 0.0 else "quadrature"
    except ValueError:
        method = "quadrature"
    w = wavefn.normalized(w0)
    r = _parse_r_grid(r_spec, d)
    # the two-Kummer form cancels for generic tau at large kappa: left blank there
    valid = np.array([wavefn.general_form_valid(w, float(x)) for x in r], dtype=bool)
    R_gen = np.array([wavefn.eval_general(w, float(x)) if ok else math.nan
                      for x, ok in zip(r, valid)])
    R_uni = wavefn.sample(wavefn.eval_unified, w, r)
    R_wht = wavefn.sample(wavefn.eval_whittaker, w, r)
    peak = float(np.max(np.abs(R_uni))) if r.size else 0.0
    floor = 1e-12 * peak
    diff = np.abs(R_wht - R_uni)
    diff[valid] = np.maximum(diff[valid], np.abs(R_gen[valid] - R_uni[valid]))
    dev = diff / np.maximum(np.abs(R_uni), floor)
    header = ["r", "R_general", "R_unified", "R_whittaker", "u", "max_rel_dev"]
    rows = [[float(r[i]), float(R_gen[i]) if valid[i] else None, float(R_uni[i]),
             float(R_wht[i]), float(r[i] * R_uni[i]), float(dev[i])] for i in range(r.size)]
    if cfg.format == "csv":
        _emit(_csv_text(header, rows), cfg.out, f"wavefunction_{level_index}.csv")
    else:
        doc = {"P": d.P, "tau": _tau_text(cfg.tau), "n_r": lev.n_r, "energy": lev.energy,
               "normalization": method, "c_coeff": w.c_coeff, "d_coeff": w.d_coeff}
        if problem.unphysical:
            doc["physicality_warning"] = flagged
        doc["rows"] = [dict(zip(header, row)) for row in rows]
        _emit(dumps_json(doc), cfg.out, f"wavefunction_{level_index}.json")
    return EXIT_OK


def cmd_verify(only: list[str] | None, tol_scale: float, out: str | None, fmt: str) -> int:
    names = None
    if only:
        names = [n.strip() for item in only for n in item.split(",") if n.strip()]
        unknown = set(names) - set(checks.CHECKS)
        if unknown:
            raise UsageError(f"unknown check(s) {sorted(unknown)}; choose from {list(checks.CHECKS)}")
    results = []
    for name in (names or list(checks.CHECKS)):
        res = checks.CHECKS[name](tol_scale)
        print(res.line(), flush=True)
        results.append(res)
    failed = [r.name for r in results if not (r.passed and r.within_budget)]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed"
          + (f"; failing: {', '.join(failed)}" if failed else ""))
    if out is not None:
        doc = {"tol_scale": tol_scale, "checks": [
            {"name": r.name, "passed": r.passed, "within_budget": r.within_budget,
             "value": r.value, "tolerance": r.tolerance, "runtime": r.runtime,
             "budget": r.budget, "detail": r.detail} for r in results]}
        if fmt == "csv":
            rows = [[r.name, "true" if r.passed else "false", "true" if r.within_budget else "false",
                     r.value, r.tolerance, r.runtime, r.budget, r.detail] for r in results]
            _emit(_csv_text(["name", "passed", "within_budget", "value", "tolerance", "runtime",
                             "budget", "detail"], rows), out, "verify.csv")
        else:
            _emit(dumps_json(doc), out, "verify.json")
    return EXIT_VERIFY if failed else EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m", type=float, help="particle mass (default 0.5)")
    p.add_argument("--v0", type=float, help="strength of the -V0/r^2 attraction")
    p.add_argument("--g", type=float, help="oscillator coupling in g r^2 (default 1)")
    p.add_argument("--l", type=int, help="orbital quantum number (default 0)")
    p.add_argument("--tau", type=str, help="extension parameter: number, 'inf' or '-inf' (default 0)")
    p.add_argument("--count", type=int, help="number of levels (default 5)")
    p.add_argument("--config", type=str, help="flat JSON config; flags override it")
    p.add_argument("--format", choices=("csv", "json"),
                   help="output format (default json for derive, csv otherwise)")
    p.add_argument("--out", type=str, help="output directory (default: stdout)")
    p.add_argument("--search-floor", type=float, default=None,
                   help="lowest energy for the negative-level search, in units of omega "
                        "(default -1e6; scan-tau searches without bound)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sae-oscillator",
                     description="Spectrum and wavefunctions of the singular oscillator "
                                 "-V0/r^2 + g r^2 for every self-adjoint extension.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("derive", help="index P, frequency, quantum defect, regime")
    _common(p)
    p = sub.add_parser("spectrum", help="lowest levels for one tau")
    _common(p)
    p = sub.add_parser("scan-tau", help="levels and negative-level census over a tau grid")
    _common(p)
    p.add_argument("--tau-grid", type=str, default=None,
                   help="'auto', 'lo:hi:n' or comma list (may include inf)")
    p = sub.add_parser("wavefunction", help="tabulate one normalized eigenfunction")
    _common(p)
    p.add_argument("--level", type=int, default=0, help="level index n_r (default 0)")
    p.add_argument("--r-grid", type=str, default=None, help="rmin:rmax:n (default up to kappa = 50)")
    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--only", action="append", default=None,
                   help=f"check name(s), repeatable or comma separated: {', '.join(checks.CHECKS)}")
    p.add_argument("--tol-scale", type=float, default=1.0,
                   help="multiply every tolerance (0 forces failures)")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", type=str, default=None, help="directory for the report file")
    return parser


_VALUE_FLAGS = frozenset({"--m", "--v0", "--g", "--l", "--tau", "--count", "--config", "--format",
                          "--out", "--search-floor", "--tau-grid", "--level", "--r-grid",
                          "--only", "--tol-scale"})


def _glue_values(argv: list[str]) -> list[str]:
    """Turn ``--tau -1e-6`` into ``--tau=-1e-6``.

    argparse takes values such as ``-inf`` or ``-1e-6`` for options.
    """
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and argv[i + 1] not in _VALUE_FLAGS:
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_glue_values(argv))
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        if args.command == "verify":
            if not (args.tol_scale >= 0.0):
                raise UsageError("--tol-scale must be non-negative")
            return cmd_verify(args.only, args.tol_scale, args.out, args.format)
        cfg = _job(args, "json" if args.command == "derive" else "csv")
        floor_units = args.search_floor
        if args.command == "spectrum":
            floor = (spectrum.DEFAULT_SEARCH_FLOOR if floor_units is None else floor_units)
            return cmd_spectrum(cfg, floor * derive(cfg.params).omega)
        if args.command == "derive":
            return cmd_derive(cfg)
        if args.command == "scan-tau":
            floor = -math.inf if floor_units is None else floor_units * derive(cfg.params).omega
            return cmd_scan_tau(cfg, args.tau_grid, floor)
        if args.command == "wavefunction":
            floor = (spectrum.DEFAULT_SEARCH_FLOOR if floor_units is None else floor_units)
            return cmd_wavefunction(cfg, args.level, args.r_grid, floor * derive(cfg.params).omega)
    except UsageError as exc:
        print(f"sae-oscillator: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FallToCenterError, RegimeError) as exc:
        print(f"sae-oscillator: regime rejected: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except DomainError as exc:
        print(f"sae-oscillator: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, NoSignChange) as exc:
        print(f"sae-oscillator: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    raise AssertionError(f"unhandled command {args.command!r}")  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
