"""
Command-line front end.

    qutrit-ent point     --J -1 --K 0 --Delta -1 --B 0 --T 0.2
    qutrit-ent sweep     --J -1 --B 0 --T 0.2 --axis1 K:-3:3:61 --axis2 Delta:-3:3:61 --out fig3a.csv
    qutrit-ent spectrum  --J 0 --K 1 --Delta 0 --B 0
    qutrit-ent threshold --J -1 --K 0 --Delta -1 --B 0 --lo 0.5 --hi 3

Every command prints one JSON record on stdout and a readable table on
stderr. Values come from flags, then from ``--config FILE`` (a flat JSON
object keyed by flag name), then from built-in defaults.

Exit codes: 0 success, 1 numeric failure, 2 usage error, 3 threshold not
bracketed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import analysis
from .analysis import Axis, SweepSpec
from .errors import NotBracketed, QutritError
from .io import write_sweep_csv
from .spin import HamiltonianParams, compare_spectrum

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE, EXIT_BRACKET = 0, 1, 2, 3

LOG_BASES = {"e": math.e, "2": 2.0, "10": 10.0}

BUILTIN = {
    "J": 0.0, "K": 0.0, "Delta": 0.0, "B": 0.0, "T": 1.0,
    "log_base": "e",
    "axis1": None, "axis2": None, "out": None, "parallelism": 1,
    "detectors": "negativity,realignment",
    "case": "auto", "flag_tol": 1e-8,
    "lo": None, "hi": None, "tol": 1e-4, "grid_check": False,
}


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


def _common(parser: argparse.ArgumentParser, with_t: bool = True) -> None:
    parser.add_argument("--config", help="flat JSON file of flag defaults")
    parser.add_argument("--log-base", dest="log_base", choices=sorted(LOG_BASES), default=None)
    for name in ("J", "K", "Delta", "B"):
        parser.add_argument(f"--{name}", type=float, default=None)
    if with_t:
        parser.add_argument("--T", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qutrit-ent", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", help="evaluate N and R at one parameter point")
    _common(p)

    p = sub.add_parser("sweep", help="evaluate N and R over a 1-D or 2-D grid, write CSV")
    _common(p)
    p.add_argument("--axis1", default=None, help="name:min:max:steps")
    p.add_argument("--axis2", default=None, help="name:min:max:steps")
    p.add_argument("--out", default=None, help="CSV output path")
    p.add_argument("--parallelism", type=int, default=None)
    p.add_argument("--detectors", default=None, help="comma list of negativity,realignment")

    p = sub.add_parser("spectrum", help="compare closed-form and numeric eigenpairs")
    _common(p, with_t=False)
    p.add_argument("--case", choices=["auto", "1", "2"], default=None)
    p.add_argument("--flag-tol", dest="flag_tol", type=float, default=None)

    p = sub.add_parser("threshold", help="bisect for the temperature where a detector vanishes")
    _common(p)
    p.add_argument("--lo", type=float, default=None)
    p.add_argument("--hi", type=float, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--detectors", default=None, help="comma list of negativity,realignment")
    p.add_argument("--grid-check", dest="grid_check", action="store_const", const=True, default=None,
                   help="also report the largest threshold over a 13x13 (Delta, B) grid")
    return parser


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError("--config", str(exc)) from exc
    if not isinstance(data, dict):
        raise UsageError("--config", "config file must hold a JSON object")
    return {k.lstrip("-").replace("-", "_"): v for k, v in data.items()}


def resolve(args: argparse.Namespace) -> dict:
    """Merge flags over config file over built-ins."""
    file_values = load_config(args.config)
    merged = {}
    for key, default in BUILTIN.items():
        if getattr(args, key, None) is not None:
            merged[key] = getattr(args, key)
        elif key in file_values:
            merged[key] = file_values[key]
        else:
            merged[key] = default
    return merged


def _flag(key: str) -> str:
    return "--" + key.replace("_", "-")


def _number(cfg: dict, key: str) -> float:
    try:
        value = float(cfg[key])
    except (TypeError, ValueError):
        raise UsageError(_flag(key), f"expected a number, got {cfg[key]!r}") from None
    if not math.isfinite(value):
        raise UsageError(_flag(key), f"must be finite, got {value}")
    return value


def _params(cfg: dict) -> HamiltonianParams:
    return HamiltonianParams(**{k: _number(cfg, k) for k in ("J", "K", "Delta", "B")})


def _temperature(cfg: dict) -> float:
    T = _number(cfg, "T")
    if T <= 0:
        raise UsageError("--T", f"temperature must be > 0, got {T}")
    return T


def _log_base(cfg: dict) -> tuple[str, float]:
    name = str(cfg["log_base"])
    if name not in LOG_BASES:
        raise UsageError("--log-base", f"must be one of {sorted(LOG_BASES)}, got {name!r}")
    return name, LOG_BASES[name]


def _detectors(cfg: dict) -> tuple[str, ...]:
    names = tuple(d.strip() for d in str(cfg["detectors"]).split(",") if d.strip())
    if not names or set(names) - set(analysis.DETECTORS):
        raise UsageError("--detectors", f"expected a comma list drawn from {analysis.DETECTORS}")
    return names


def _axis(cfg: dict, key: str) -> Axis | None:
    if cfg[key] is None:
        return None
    try:
        return Axis.parse(str(cfg[key]))
    except ValueError as exc:
        raise UsageError(_flag(key), str(exc)) from None


def _emit(record: dict, table: list[str]) -> None:
    for line in table:
        print(line, file=sys.stderr)
    print(json.dumps(record, sort_keys=False, default=_json_default))


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(type(obj).__name__)


def _record_dict(rec: analysis.PointRecord) -> dict:
    return {
        "J": rec.J, "K": rec.K, "Delta": rec.Delta, "B": rec.B, "T": rec.T,
        "negativity": rec.negativity, "trace_norm": rec.trace_norm, "R": rec.R,
        "pt_min_eig": rec.pt_min_eig,
        "entangled_by_N": rec.entangled_by_N, "entangled_by_R": rec.entangled_by_R,
    }


def cmd_point(cfg: dict) -> int:
    p, T = _params(cfg), _temperature(cfg)
    base_name, base = _log_base(cfg)
    rec = analysis.evaluate_point(p, T, base)
    out = _record_dict(rec)
    out["log_base"] = base_name
    table = [f"{k:>15} = {v}" for k, v in out.items()]
    _emit({"command": "point", **out}, table)
    return EXIT_OK


def cmd_sweep(cfg: dict) -> int:
    p, T = _params(cfg), _temperature(cfg)
    base_name, base = _log_base(cfg)
    axis1, axis2 = _axis(cfg, "axis1"), _axis(cfg, "axis2")
    if axis1 is None:
        raise UsageError("--axis1", "a sweep needs at least --axis1")
    if axis2 is not None and axis2.name == axis1.name:
        raise UsageError("--axis2", f"must differ from --axis1 (both {axis1.name})")
    if not cfg["out"]:
        raise UsageError("--out", "a CSV output path is required")
    try:
        parallelism = int(cfg["parallelism"])
    except (TypeError, ValueError):
        raise UsageError("--parallelism", f"expected an integer, got {cfg['parallelism']!r}") from None
    if parallelism < 1:
        raise UsageError("--parallelism", "must be >= 1")
    spec = SweepSpec(params=p, temperature=T, axis1=axis1, axis2=axis2,
                     detectors=_detectors(cfg), log_base=base)
    result = analysis.run_sweep(spec, parallelism=parallelism)
    write_sweep_csv(result, cfg["out"])
    report = analysis.peak_report(result)

    def peak(pk):
        return None if pk is None else {"value": pk.value, "index": list(pk.index), "point": pk.point}

    summary = {
        "command": "sweep", "out": str(cfg["out"]), "rows": len(result.records),
        "axis1": str(axis1), "axis2": None if axis2 is None else str(axis2),
        "fixed": {**p.as_dict(), "T": T}, "detectors": list(spec.detectors),
        "log_base": base_name, "thresholds": result.thresholds,
        "max_negativity": peak(report.negativity), "max_R": peak(report.realignment),
        "resolution": report.resolution, "timestamp": result.timestamp,
    }
    table = [f"wrote {len(result.records)} rows to {cfg['out']}"]
    for label, pk in (("max N", report.negativity), ("max R", report.realignment)):
        if pk is not None:
            table.append(f"{label:>6} = {pk.value:.6g} at {pk.point}")
    _emit(summary, table)
    return EXIT_OK


def cmd_spectrum(cfg: dict) -> int:
    p = _params(cfg)
    base_name, _ = _log_base(cfg)
    case = None if str(cfg["case"]) == "auto" else int(cfg["case"])
    if case == 1 and p.K != 0:
        raise UsageError("--case", "case 1 requires --K 0")
    flag_tol = _number(cfg, "flag_tol")
    rows = compare_spectrum(p, case, flag_tol=flag_tol)
    used_case = case if case is not None else (1 if p.K == 0 else 2)
    table = [f"{'label':<8} {'analytic':>14} {'numeric':>14} {'<v|H|v>':>14} {'residual':>11}"]
    for r in rows:
        mark = "  <-- FLAGGED" if r.flagged else ""
        table.append(f"{r.label:<8} {r.analytic:>14.9f} {r.nearest_numeric:>14.9f} "
                     f"{r.rayleigh:>14.9f} {r.residual:>11.3e}{mark}")
    record = {
        "command": "spectrum", "case": used_case, **p.as_dict(), "log_base": base_name,
        "flag_tol": flag_tol, "flagged": [r.label for r in rows if r.flagged],
        "rows": [vars(r) for r in rows],
    }
    _emit(record, table)
    return EXIT_OK


def cmd_threshold(cfg: dict) -> int:
    p = _params(cfg)
    base_name, base = _log_base(cfg)
    if cfg["lo"] is None or cfg["hi"] is None:
        raise UsageError("--lo" if cfg["lo"] is None else "--hi", "both --lo and --hi are required")
    lo, hi, tol = _number(cfg, "lo"), _number(cfg, "hi"), _number(cfg, "tol")
    if not 0 < lo < hi:
        raise UsageError("--lo", f"need 0 < lo < hi, got lo={lo}, hi={hi}")
    if tol <= 0:
        raise UsageError("--tol", "must be > 0")
    results, table, failed = {}, [], None
    for det in _detectors(cfg):
        try:
            res = analysis.threshold_temperature(p, det, lo, hi, tol=tol, log_base=base)
        except NotBracketed as exc:
            failed = exc
            results[det] = {"error": "not bracketed", "value_lo": exc.value_lo, "value_hi": exc.value_hi}
            table.append(f"{det:>12}: not bracketed; value at T={lo} is {exc.value_lo:.6g}, "
                         f"at T={hi} is {exc.value_hi:.6g}")
            continue
        entry = {"t_c": res.t_c, "bracket": [res.t_lo, res.t_hi], "tol": tol}
        if cfg["grid_check"]:
            grid = Axis("Delta", -3.0, 3.0, 13), Axis("B", -3.0, 3.0, 13)
            rep = analysis.max_threshold_over_grid(p, det, *grid, lo, hi, reference=res.t_c,
                                                   tol=tol, log_base=base)
            entry["grid_max_t_c"] = rep.t_c_max
            entry["grid_argmax"] = rep.argmax
            entry["grid_flagged"] = rep.flagged
        results[det] = entry
        table.append(f"{det:>12}: T_c = {res.t_c:.6f} (bracket [{res.t_lo:.6f}, {res.t_hi:.6f}], tol {tol:g})")
    record = {"command": "threshold", **p.as_dict(), "lo": lo, "hi": hi, "log_base": base_name,
              "results": results}
    _emit(record, table)
    return EXIT_BRACKET if failed is not None else EXIT_OK


COMMANDS = {"point": cmd_point, "sweep": cmd_sweep, "spectrum": cmd_spectrum, "threshold": cmd_threshold}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QutritError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"{parser.prog} {args.command}: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
