"""Command-line surface and deterministic report emission.

Exit codes: 0 success, 1 input or model error, 2 refusal (a status was
requested for a linearization that does not sanction the sign test and
no --allow-numerical override was given).

Reports are JSON by default (sorted keys, two-space indent, trailing
newline) and byte-identical across runs and thread counts; --emit csv
gives a flat projection.  Rationals are emitted as "p/q" strings in
lowest terms; floats appear only alongside their exact certificates.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .core import LinCombo, ModelError, SanctionError, SceneError, Status, m_function, mu, status
from .hilb import NoFiniteThreshold, convergence_report, mu_Linf, mu_Lm_normalized, status_Linf, status_Lm, status_threshold
from .polyhedra import InputError
from .scene_io import LoadedScene, format_rational, load_scene, parse_rational
from .strata import audit_finiteness, fingerprint, is_closed_orbit_stratum, subtorus_basis
from .vgit import chamber_decomposition, check_semicontinuity, m_profile

PLUS_INFINITY_TOKEN = "+infinity"


class CLIError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); 2 is reserved for refusals
        raise CLIError(message)


def worker_count() -> int:
    raw = os.environ.get("VGITKIT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def pmap(fn, items):
    """Order-preserving map, threaded when VGITKIT_THREADS > 1.

    Results are reassembled positionally, so output never depends on the
    schedule.
    """
    items = list(items)
    n = worker_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return "sha256:" + hashlib.sha256(fh.read()).hexdigest()


def _parse_lambda(text: str) -> tuple:
    try:
        return tuple(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise CLIError(f"malformed --lambda value {text!r}") from None


def _combo_from_args(args) -> LinCombo:
    if args.lin is not None:
        if args.from_lin or args.to_lin or args.t is not None:
            raise CLIError("--lin excludes --from/--to/--t")
        return LinCombo.single(args.lin)
    if args.from_lin and args.to_lin:
        t = parse_rational(args.t, "--t") if args.t is not None else Fraction(0)
        return LinCombo.segment(args.from_lin, args.to_lin, t)
    raise CLIError("need --lin NAME or --from L0 --to L1 [--t p/q]")


def _fr(q) -> str:
    return format_rational(Fraction(q))


def _mu_json(value):
    if value == float("inf"):
        return PLUS_INFINITY_TOKEN
    return _fr(value)


def _mvalue_json(mv):
    if mv.infinite:
        return {"kind": "plus_infinity"}
    return {
        "kind": "finite",
        "value": mv.value,
        "mu_star": _fr(mv.mu_star),
        "norm_sq": _fr(mv.norm_sq),
        "minimizer": list(mv.minimizer),
    }


def _sample_json(sample):
    return {
        "t": _fr(sample.t),
        "statuses": {name: str(st) for name, st in sample.statuses},
        "semistable": list(sample.semistable),
        "stable": list(sample.stable),
    }


def build_parser() -> _Parser:
    parser = _Parser(prog="vgitkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, point=False, lam=False, segment=True, grid=False, mmax=False, ts=False):
        p.add_argument("--scene", required=True, help="scene file (JSON, schema 1)")
        p.add_argument("--emit", choices=("json", "csv"), default="json")
        p.add_argument("--allow-numerical", action="store_true",
                       help="compute numerical-criterion statuses for unsanctioned linearizations")
        if point:
            p.add_argument("--point", required=False, help="point name (default: all points)")
        if lam:
            p.add_argument("--lambda", dest="lam", required=True,
                           help="direction, comma-separated rationals")
        if segment:
            p.add_argument("--lin", help="single linearization")
            p.add_argument("--from", dest="from_lin", help="segment start linearization")
            p.add_argument("--to", dest="to_lin", help="segment end linearization")
            p.add_argument("--t", help="segment parameter p/q in [0,1]")
        if grid:
            p.add_argument("--grid", type=int, required=True, help="grid denominator D")
        if mmax:
            p.add_argument("--m-max", dest="m_max", type=int, default=6)
        if ts:
            p.add_argument("--ts", help="profile parameters, comma-separated rationals")

    common(sub.add_parser("mu", help="weight of a direction"), point=True, lam=True)
    common(sub.add_parser("mfunc", help="normalized minimum (certificate) or profile"),
           point=True, ts=True)
    common(sub.add_parser("status", help="stability statuses"), point=True)
    common(sub.add_parser("strata", help="stratum analysis and fingerprints"), segment=False)
    p = sub.add_parser("walls", help="exact wall positions on a segment")
    common(p, segment=False)
    p.add_argument("--from", dest="from_lin", required=True)
    p.add_argument("--to", dest="to_lin", required=True)
    p = sub.add_parser("chambers", help="chamber decomposition of a segment")
    common(p, segment=False)
    p.add_argument("--from", dest="from_lin", required=True)
    p.add_argument("--to", dest="to_lin", required=True)
    p = sub.add_parser("semicont", help="semi-continuity inclusions near t=0")
    common(p, segment=False)
    p.add_argument("--from", dest="from_lin", required=True)
    p.add_argument("--to", dest="to_lin", required=True)
    p = sub.add_parser("audit", help="distinct loci on a rational grid")
    common(p, segment=False, grid=True)
    p.add_argument("--from", dest="from_lin", required=True)
    p.add_argument("--to", dest="to_lin", required=True)
    common(sub.add_parser("hilb-check", help="degeneration statuses, thresholds, residuals"),
           segment=False, mmax=True)
    return parser


def _points_for(args, loaded: LoadedScene):
    if getattr(args, "point", None):
        return [loaded.scene.point(args.point)]
    return list(loaded.scene.points)


def run_command(args) -> dict:
    loaded = load_scene(args.scene)
    scene = loaded.scene
    results: dict
    if args.command == "mu":
        combo = _combo_from_args(args)
        lam = _parse_lambda(args.lam)
        rows = pmap(lambda p: (p.name, mu(scene, p, combo, lam)), _points_for(args, loaded))
        results = {"mu": {name: _mu_json(v) for name, v in rows}, "lambda": [_fr(x) for x in lam]}
    elif args.command == "mfunc":
        combo_args_present = args.lin or (args.from_lin and args.to_lin)
        if args.ts is not None:
            if not (args.from_lin and args.to_lin):
                raise CLIError("--ts needs --from and --to")
            if args.point is None:
                raise CLIError("--ts needs --point")
            ts = [parse_rational(tok.strip(), "--ts") for tok in args.ts.split(",")]
            prof = m_profile(scene, scene.point(args.point), args.from_lin, args.to_lin,
                             ts, allow_numerical=args.allow_numerical)
            results = {
                "profile": [
                    {"t": _fr(pt.t), "m": _mvalue_json(pt.m)} for pt in prof.points
                ],
                "interpolation_defects": [
                    {"t_mid": _fr(t), "defect": d} for t, d in prof.interpolation_defects
                ],
                "point": args.point,
            }
        elif combo_args_present:
            combo = _combo_from_args(args)
            rows = pmap(
                lambda p: (p.name, m_function(scene, p, combo, allow_numerical=args.allow_numerical)),
                _points_for(args, loaded),
            )
            results = {"m": {name: _mvalue_json(mv) for name, mv in rows}}
        else:
            raise CLIError("need --lin/--from/--to, or --ts for a profile")
    elif args.command == "status":
        combo = _combo_from_args(args)
        rows = pmap(
            lambda p: (p.name, status(scene, p, combo, allow_numerical=args.allow_numerical)),
            _points_for(args, loaded),
        )
        results = {"statuses": {name: str(st) for name, st in rows}}
    elif args.command == "strata":
        results = _strata_results(loaded)
    elif args.command == "walls":
        report = chamber_decomposition(scene, args.from_lin, args.to_lin,
                                       allow_numerical=args.allow_numerical)
        results = {
            "walls": [_fr(t) for t in report.walls],
            "spurious_candidates": [_fr(t) for t in report.spurious_candidates],
        }
    elif args.command == "chambers":
        report = chamber_decomposition(scene, args.from_lin, args.to_lin,
                                       allow_numerical=args.allow_numerical)
        results = {
            "walls": [_fr(t) for t in report.walls],
            "spurious_candidates": [_fr(t) for t in report.spurious_candidates],
            "chambers": [
                {
                    "lo": _fr(c.lo),
                    "hi": _fr(c.hi),
                    "statuses": {name: str(st) for name, st in c.statuses},
                    "semistable": list(c.semistable),
                    "stable": list(c.stable),
                }
                for c in report.chambers
            ],
            "wall_data": [_sample_json(w) for w in report.wall_data],
            "endpoint_data": {
                "0": _sample_json(report.endpoint_data[0]),
                "1": _sample_json(report.endpoint_data[1]),
            },
        }
    elif args.command == "semicont":
        rep = check_semicontinuity(scene, args.from_lin, args.to_lin,
                                   allow_numerical=args.allow_numerical)
        results = {
            "holds": rep.holds,
            "t_used": _fr(rep.t_used),
            "witness_chamber": [_fr(rep.witness_chamber[0]), _fr(rep.witness_chamber[1])],
            "violations": [{"inclusion": inc, "point": name} for inc, name in rep.violations],
        }
    elif args.command == "audit":
        rep = audit_finiteness(scene, args.from_lin, args.to_lin, args.grid,
                               allow_numerical=args.allow_numerical)
        results = {
            "grid": rep.grid,
            "stabilized": rep.stabilized,
            "loci": [
                {"semistable": list(ss), "stable": list(s)}
                for ss, s in sorted(rep.loci)
            ],
        }
    elif args.command == "hilb-check":
        results = _hilb_results(loaded, args.m_max)
    else:  # pragma: no cover - argparse restricts the command set
        raise CLIError(f"unknown command {args.command!r}")
    return results


def _strata_results(loaded: LoadedScene) -> dict:
    scene = loaded.scene
    lin_names = sorted(l.name for l in scene.linearizations)
    strata = {}
    for p in scene.points:
        strata.setdefault(p.stratum, [])
    stratum_rows = []
    for stratum in sorted(strata):
        chars = [list(scene.base_weights[i]) for i in stratum]
        stratum_rows.append({
            "indices": list(stratum),
            "characters": chars,
            "closed_orbit": is_closed_orbit_stratum(scene, stratum),
            "subtorus_basis": [list(v) for v in subtorus_basis(scene, stratum)],
        })
    keys = {}
    point_rows = []
    for p in scene.points:
        key = fingerprint(scene, p, lin_names)
        keys.setdefault(key, []).append(p.name)
    class_list = sorted(sorted(names) for names in keys.values())
    class_of = {name: i for i, names in enumerate(class_list) for name in names}
    for p in scene.points:
        point_rows.append({
            "name": p.name,
            "stratum": list(p.stratum),
            "fingerprint_class": class_of[p.name],
        })
    return {
        "strata": stratum_rows,
        "points": sorted(point_rows, key=lambda r: r["name"]),
        "classes": class_list,
    }


def _hilb_results(loaded: LoadedScene, m_max: int) -> dict:
    out = []
    for z in loaded.hilb_points:
        lams = sorted({g for s in z.scenarios for g in s.cone.generators()})
        entry = {
            "name": z.name,
            "d": z.d,
            "status_limit": str(status_Linf(z)),
            "status_by_m": {str(m): str(status_Lm(z, m)) for m in range(1, m_max + 1)},
        }
        try:
            entry["threshold"] = status_threshold(z)
        except NoFiniteThreshold as exc:
            entry["threshold"] = None
            entry["threshold_note"] = str(exc)
        residuals = []
        for row in convergence_report(z, lams, list(range(1, m_max + 1))):
            residuals.append({
                "lambda": list(row.lam),
                "m": row.m,
                "mu_normalized": _mu_json(row.mu_norm),
                "mu_limit": _mu_json(row.mu_limit),
                "residual": None if row.residual is None else _fr(row.residual),
            })
        entry["residuals"] = residuals
        out.append(entry)
    return {"hilb_points": out}


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------

def _emit_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _flat_rows(prefix: str, obj, rows: list) -> None:
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flat_rows(f"{prefix}.{k}" if prefix else str(k), obj[k], rows)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flat_rows(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, "" if obj is None else str(obj)))


def _emit_csv(report: dict) -> str:
    # flat projection: one key,value row per leaf, canonical order
    rows: list = []
    _flat_rows("", report, rows)
    lines = ["key,value"]
    for key, value in rows:
        if any(ch in value for ch in ",\"\n"):
            value = '"' + value.replace('"', '""') + '"'
        lines.append(f"{key},{value}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        results = run_command(args)
        report = {
            "command": args.command,
            "input_digest": _digest(args.scene),
            "args": _echo_args(args),
            "results": results,
        }
        text = _emit_json(report) if args.emit == "json" else _emit_csv(report)
        sys.stdout.write(text)
        return 0
    except SanctionError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except (CLIError, SceneError, ModelError, InputError, NoFiniteThreshold, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


_ECHO_NAMES = {"lam": "lambda", "from_lin": "from", "to_lin": "to", "m_max": "m-max"}


def _echo_args(args) -> dict:
    echo = {}
    for key, value in sorted(vars(args).items()):
        if key in ("command",) or value in (None, False):
            continue
        name = _ECHO_NAMES.get(key, key.replace("_", "-"))
        echo[name] = value if not isinstance(value, bool) else True
    return echo


if __name__ == "__main__":
    sys.exit(main())
