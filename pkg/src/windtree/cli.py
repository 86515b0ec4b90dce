"""Command-line front end: ``windtree <subcommand> ...``.

Every JSON payload carries ``"schema": "windtree/1"`` and a ``"verdict"``.
Exit codes: 0 success, 2 refused certificate, 3 failed check, 4 bad input.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .billiard import (
    KAPPA_NAMES,
    TableParams,
    compare_with_cocycle,
    language_level_for,
    trace,
    trajectory_rows,
)
from .cocycle import CERTIFIED, FAILED, REFUSED, bounding_box, certify_divergence, prefix_positions
from .errors import (
    BudgetExceededError,
    CapacityError,
    CornerHitError,
    DegenerateError,
    InternalError,
    LabelingMismatchError,
    UndecidedError,
    WindtreeError,
)
from .exact import Quadratic, as_scalar, parse_scalar, refine, to_json
from .iet import parse_letter
from .render import box_rectangles, read_trajectory_csv, render_svg, write_trajectory_csv
from .renorm import (
    TRUNCATED,
    LengthQuadruple,
    admissibility_warnings,
    check_admissible,
    convergents,
    parse_pairs,
)
from .veech import (
    MultiTwist,
    SlopeExpansion,
    convergents_from_expansion,
    cotangent_from_expansion,
    length_quadruple,
    multitwist_from_ab,
    params_from_multitwist,
)
from .words import DEFAULT_CAP_BYTES, expand

SCHEMA = "windtree/1"

EXIT_OK = 0
EXIT_REFUSED = 2
EXIT_FAILED = 3
EXIT_INPUT = 4

# errors meaning the computation ran but could not conclude
_RUNTIME_ERRORS = (
    UndecidedError,
    BudgetExceededError,
    CapacityError,
    CornerHitError,
    DegenerateError,
    InternalError,
    LabelingMismatchError,
)


class InputError(Exception):
    """Bad command-line input; maps to exit code 4."""


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, "%s: error: %s\n" % (self.prog, message))


# -- argument helpers -------------------------------------------------------------


def _scalars(text: str, count: Optional[int] = None) -> List[Quadratic]:
    parts = [p for p in text.split(",") if p.strip()]
    if count is not None and len(parts) != count:
        raise InputError("expected %d comma-separated values, got %r" % (count, text))
    try:
        return [parse_scalar(p) for p in parts]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError("cannot parse %r: %s" % (text, exc)) from exc


def _ints(text: str) -> List[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise InputError("expected comma-separated integers, got %r" % text) from exc


def _pairs(text: str) -> List[Tuple[int, int]]:
    """Convergents from a JSON file or inline ``"m,n;m,n"``."""
    if os.path.exists(text):
        with open(text) as fh:
            obj = json.load(fh)
        if isinstance(obj, dict):
            obj = obj.get("entries", obj.get("convergents"))
        if obj is None:
            raise InputError("%s holds no convergent list" % text)
        return parse_pairs(obj)
    try:
        return parse_pairs([_ints(chunk) for chunk in text.split(";") if chunk.strip()])
    except (ValueError, TypeError) as exc:
        raise InputError("cannot parse convergents %r: %s" % (text, exc)) from exc


def _expansion(args, widths) -> Optional[SlopeExpansion]:
    if args.expansion is not None:
        if args.coeffs is not None:
            raise InputError("give either --expansion or --coeffs")
        return SlopeExpansion.finite(_ints(args.expansion), widths)
    if args.coeffs is None:
        return None
    coeffs = _ints(args.coeffs)
    prefix = _ints(args.prefix) if args.prefix else []
    if args.periodic:
        return SlopeExpansion.periodic(coeffs, widths, prefix)
    return SlopeExpansion.finite(prefix + coeffs, widths)


def _multitwist(args) -> Optional[MultiTwist]:
    given = [args.mh, args.nh, args.mv, args.nv]
    if all(v is None for v in given):
        return None
    if any(v is None for v in given):
        raise InputError("--mh, --nh, --mv and --nv go together")
    return MultiTwist(args.mh, args.nh, args.mv, args.nv)


# -- output ---------------------------------------------------------------------


def _meta() -> dict:
    return {
        "version": __version__,
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
    }


def _emit(args, command: str, verdict: str, payload: dict, path: Optional[str] = None) -> None:
    doc = {"schema": SCHEMA, "command": command, "verdict": verdict}
    doc.update(payload)
    if not args.no_meta:
        doc["meta"] = _meta()
    text = json.dumps(doc, indent=2) + "\n"
    _write(path if path is not None else args.out, text)


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _scalar_out(v, bits: int) -> dict:
    v = as_scalar(v)
    if isinstance(v, Quadratic):
        return to_json(v)
    return to_json(refine(v, Fraction(1, 1 << bits)))


# -- subcommands ----------------------------------------------------------------


def cmd_params(args) -> int:
    if args.source == "veech":
        mt = _multitwist(args)
        if mt is None:
            raise InputError("params veech needs --mh --nh --mv --nv")
        _emit(args, "params", "ok", params_from_multitwist(mt).to_json())
        return EXIT_OK
    if args.a is None or args.b is None:
        raise InputError("params ab needs --a and --b")
    a, b = _scalars(args.a, 1)[0], _scalars(args.b, 1)[0]
    mt = multitwist_from_ab(a, b)
    payload = {"a": to_json(a), "b": to_json(b), "multitwist": list(mt.as_tuple()) if mt else None}
    if mt is not None:
        payload.update(params_from_multitwist(mt).to_json())
    _emit(args, "params", "ok", payload)
    return EXIT_OK


def cmd_slope(args) -> int:
    widths = _scalars(args.widths, 2)
    se = _expansion(args, widths)
    if se is None:
        raise InputError("slope needs --coeffs or --expansion")
    precision = Fraction(args.precision) if args.precision else Fraction(1, 1 << args.precision_bits)
    x = cotangent_from_expansion(se, exact=True if args.exact else None)
    t = 1 / x
    if not isinstance(as_scalar(t), Quadratic):
        x, t = refine(x, precision), refine(t, precision)
    _emit(
        args,
        "slope",
        "ok",
        {"expansion": se.to_json(), "cotangent": to_json(x), "slope": to_json(t)},
    )
    return EXIT_OK


def cmd_renorm(args) -> int:
    z = LengthQuadruple.of(*_scalars(args.Z, 4))
    seq = convergents(z, args.steps, variant=args.variant)
    payload = seq.to_json()
    payload["admissible"] = check_admissible(seq.entries, strict_initial=False)
    payload["warnings"] = admissibility_warnings(seq.entries)
    _emit(args, "renorm", "ok", payload)
    return EXIT_OK


def _convergent_source(args, level: int) -> List[Tuple[int, int]]:
    conv = _pairs(args.convergents)
    if args.periodic and conv:
        conv = [conv[k % len(conv)] for k in range(max(level, len(conv)))]
    if len(conv) < level:
        raise InputError("level %d needs %d convergents, got %d" % (level, level, len(conv)))
    return conv


def cmd_words(args) -> int:
    conv = _convergent_source(args, args.level)
    ws = expand(conv, args.level, args.cap_bytes)
    _emit(args, "words", "ok", ws.to_json(stats_only=args.stats_only))
    return EXIT_OK


def cmd_certify(args) -> int:
    mt = _multitwist(args)
    if mt is not None and (args.a is not None or args.b is not None):
        raise InputError("give either the multi-twist or --a/--b, not both")
    if mt is not None:
        vp = params_from_multitwist(mt)
        a, b, widths = vp.a, vp.b, (vp.s_h, vp.s_v)
        parameters = vp.to_json()
    elif args.a is not None and args.b is not None:
        a, b = _scalars(args.a, 1)[0], _scalars(args.b, 1)[0]
        mt = multitwist_from_ab(a, b)
        widths = None
        parameters = {"a": to_json(a), "b": to_json(b), "multitwist": None}
        if mt is not None:
            vp = params_from_multitwist(mt)
            widths = (vp.s_h, vp.s_v)
            parameters = vp.to_json()
    else:
        raise InputError("certify needs the multi-twist or --a and --b")

    have_expansion = args.coeffs is not None or args.expansion is not None
    if have_expansion == (args.slope is not None):
        raise InputError("give exactly one slope source: --coeffs/--expansion or --slope")
    predicted = None
    if have_expansion:
        if widths is None:
            raise InputError("an expansion needs Veech parameters with rational twist ratios")
        se = _expansion(args, widths)
        slope = 1 / cotangent_from_expansion(se)
        predicted = convergents_from_expansion(se, mt, args.depth)
        slope_info = {"expansion": se.to_json(), "value": _scalar_out(slope, args.precision_bits)}
    else:
        slope = _scalars(args.slope, 1)[0]
        slope_info = {"value": to_json(slope)}

    pattern_level = args.pattern_level if args.pattern_level is not None else min(8, args.depth)
    if args.depth < 2 or not 2 <= pattern_level <= args.depth:
        raise InputError("need depth >= 2 and 2 <= pattern level <= depth")

    def failed(reason: str, entries=()) -> int:
        payload = {
            "parameters": parameters,
            "slope": slope_info,
            "depth": args.depth,
            "pattern_level": pattern_level,
            "convergents": [list(p) for p in entries],
            "checks": {},
            "reason": reason,
        }
        _emit(args, "certify", FAILED, payload)
        return EXIT_FAILED

    try:
        seq = convergents(LengthQuadruple.of(*length_quadruple(a, b, slope)), args.depth)
    except (UndecidedError, BudgetExceededError) as exc:
        return failed("renormalization undecided: %s" % exc)
    if seq.status != TRUNCATED or len(seq.entries) < args.depth:
        return failed(
            "renormalization stopped after %d steps (%s)" % (len(seq.entries), seq.status),
            seq.entries,
        )
    agreement = None
    if predicted is not None:
        agreement = list(seq.entries[: len(predicted)]) == list(predicted)
        if not agreement:
            return failed("renormalization disagrees with the expansion formula", seq.entries)

    cert = certify_divergence(
        seq.entries, args.depth, pattern_level, parameters, slope_info, args.cap_bytes
    )
    cert.checks["formula_agreement"] = agreement
    doc = cert.to_json()
    verdict = doc.pop("verdict")
    _emit(args, "certify", verdict, doc)
    return {CERTIFIED: EXIT_OK, REFUSED: EXIT_REFUSED}.get(verdict, EXIT_FAILED)


def _table_and_slope(args) -> Tuple[TableParams, Quadratic]:
    a, b = _scalars(args.a, 1)[0], _scalars(args.b, 1)[0]
    return TableParams(a, b), _scalars(args.slope, 1)[0]


def _kappa(name: str):
    for k, v in KAPPA_NAMES.items():
        if v == name:
            return k
    raise InputError("unknown kappa %r" % name)


def _csv_header(args, tp: TableParams, slope) -> str:
    fields = ["schema=" + SCHEMA, "a=%s" % tp.a, "b=%s" % tp.b, "slope=%s" % slope]
    if not args.no_meta:
        fields.append("version=" + __version__)
    return "# " + " ".join(fields) + "\n"


def cmd_trace(args) -> int:
    tp, slope = _table_and_slope(args)
    start = _scalars(args.start, 2)
    traj = trace(tp, start, slope, args.crossings, _kappa(args.kappa))
    text = _csv_header(args, tp, slope) + write_trajectory_csv(trajectory_rows(traj))
    _write(args.out, text)
    if args.out not in (None, "-"):
        summary = {
            "events": len(traj.events),
            "terminated": traj.terminated,
            "free_flight": traj.free_flight,
            "max_displacement": traj.max_displacement(),
            "csv": args.out,
        }
        _emit(args, "trace", "ok", summary, path="-")
    return EXIT_OK


def _csv_params(text: str) -> dict:
    out = {}
    for line in text.splitlines():
        if not line.startswith("#"):
            break
        for item in line[1:].split():
            key, _, value = item.partition("=")
            out[key] = value
    return out


class _CsvTrajectory:
    """Trajectory rebuilt from CSV rows; positions are exact decimal rationals."""

    def __init__(self, rows):
        start = [r for r in rows if r.event_type == "start"]
        if not start:
            raise InputError("trajectory CSV has no start row")
        self.start = (Fraction(repr(start[0].x)), Fraction(repr(start[0].y)))
        self.events = [r for r in rows if r.event_type != "start"]
        self.letters = [parse_letter(r.letter) for r in self.events]

    def displacement_squared(self, k: int):
        e = self.events[k]
        dx, dy = Fraction(repr(e.x)) - self.start[0], Fraction(repr(e.y)) - self.start[1]
        return Quadratic(dx * dx + dy * dy)


def _read_csv(path: str):
    with open(path) as fh:
        text = fh.read()
    return _csv_params(text), read_trajectory_csv(text)


def cmd_compare(args) -> int:
    if args.csv:
        params, rows = _read_csv(args.csv)
        for key in ("a", "b", "slope"):
            if getattr(args, key) is None:
                if key not in params:
                    raise InputError("%s not given and not recorded in %s" % (key, args.csv))
                setattr(args, key, params[key])
        tp, slope = _table_and_slope(args)
        traj = _CsvTrajectory(rows)
    else:
        if None in (args.a, args.b, args.slope, args.start):
            raise InputError("compare needs --csv or --a --b --slope --start")
        tp, slope = _table_and_slope(args)
        traj = trace(tp, _scalars(args.start, 2), slope, args.crossings, _kappa(args.kappa))

    conv = None
    seq = convergents(LengthQuadruple.of(*length_quadruple(tp.a, tp.b, slope)), args.language_depth)
    if seq.status == TRUNCATED and seq.entries:
        conv = seq.entries
    payload = {"a": to_json(tp.a), "b": to_json(tp.b), "slope": to_json(slope)}
    try:
        level = language_level_for(conv) if conv else None
        rep = compare_with_cocycle(
            traj, traj.letters, conv, window=args.window, language_level=level, bits=args.precision_bits
        )
    except LabelingMismatchError as exc:
        payload["error"] = {"code": exc.code, "message": str(exc)}
        _emit(args, "compare", FAILED, payload)
        return EXIT_FAILED
    payload.update(rep.to_json())
    ok = rep.bound_ok
    _emit(args, "compare", "ok" if ok else FAILED, payload)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_render(args) -> int:
    params, rows = _read_csv(args.csv)
    a = _scalars(args.a or params.get("a", "1/2"), 1)[0]
    b = _scalars(args.b or params.get("b", "1/2"), 1)[0]
    points = [(r.x, r.y) for r in rows]
    rects = []
    if args.boxes:
        levels = _ints(args.boxes)
        if args.convergents:
            conv = _convergent_source(args, max(levels))
        else:
            slope = args.slope or params.get("slope")
            if slope is None:
                raise InputError("boxes need --convergents or a recorded slope")
            seq = convergents(
                LengthQuadruple.of(*length_quadruple(a, b, _scalars(slope, 1)[0])), max(levels)
            )
            conv = seq.entries
            if len(conv) < max(levels):
                raise InputError("only %d convergents available" % len(conv))
        anchor = (rows[0].cell_i, rows[0].cell_j) if rows else (0, 0)
        cell_boxes = []
        for level in levels:
            ws = expand(conv, level, args.cap_bytes)
            box = bounding_box(p for w in ws.words for p in prefix_positions(w))
            cell_boxes.append(box.as_tuple())
        rects = box_rectangles(levels, cell_boxes, anchor)
    window = tuple(float(v) for v in _scalars(args.window, 4)) if args.window else None
    header = None if args.no_meta else "%s render, version %s" % (SCHEMA, __version__)
    svg = render_svg(points, float(a), float(b), rects, window=window, size=args.size, header=header)
    _write(args.out, svg)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--precision-bits", type=int, default=64, help="bits for interval output")
    common.add_argument("--cap-bytes", type=int, default=DEFAULT_CAP_BYTES, help="memory cap for words")
    common.add_argument("--no-meta", action="store_true", help="omit version/timestamp fields")
    common.add_argument("--out", help="output path (default stdout)")

    parser = ArgumentParser(prog="windtree", description="Wind-tree billiards and their renormalization.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    def twist(p):
        for flag in ("--mh", "--nh", "--mv", "--nv"):
            p.add_argument(flag, type=int)

    def expansion(p):
        p.add_argument("--coeffs", help="coefficients a_k (the period with --periodic)")
        p.add_argument("--prefix", help="coefficients before the period")
        p.add_argument("--periodic", action="store_true")
        p.add_argument("--expansion", help="a finite expansion a0,a1,...")

    p = sub.add_parser("params", parents=[common], help="Veech parameters")
    p.add_argument("source", choices=("veech", "ab"))
    twist(p)
    p.add_argument("--a")
    p.add_argument("--b")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("slope", parents=[common], help="slope from an expansion")
    p.add_argument("--widths", required=True, help="s_h,s_v")
    expansion(p)
    p.add_argument("--exact", action="store_true", help="insist on an exact value")
    p.add_argument("--precision", help="interval width, e.g. 1e-12")
    p.set_defaults(func=cmd_slope)

    p = sub.add_parser("renorm", parents=[common], help="F-convergents of a length quadruple")
    p.add_argument("--Z", required=True, help="x1,x2,y1,y2")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--variant", choices=("corrected", "intro"), default="corrected")
    p.set_defaults(func=cmd_renorm)

    p = sub.add_parser("words", parents=[common], help="level-k words")
    p.add_argument("--convergents", required=True, help="JSON file or inline m,n;m,n")
    p.add_argument("--periodic", action="store_true", help="repeat the convergents as needed")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--stats-only", action="store_true")
    p.set_defaults(func=cmd_words)

    p = sub.add_parser("certify", parents=[common], help="finite-depth divergence certificate")
    twist(p)
    p.add_argument("--a")
    p.add_argument("--b")
    expansion(p)
    p.add_argument("--slope", help="an exact slope instead of an expansion")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--pattern-level", type=int)
    p.set_defaults(func=cmd_certify)

    def table(p, required):
        p.add_argument("--a", required=required)
        p.add_argument("--b", required=required)
        p.add_argument("--slope", required=required)
        p.add_argument("--start", required=required, help="x,y")
        p.add_argument("--kappa", default="id", choices=sorted(KAPPA_NAMES.values()))

    p = sub.add_parser("trace", parents=[common], help="trace a billiard trajectory to CSV")
    table(p, True)
    p.add_argument("--crossings", type=int, required=True)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("compare", parents=[common], help="billiard versus cocycle bound")
    table(p, False)
    p.add_argument("--csv", help="trajectory CSV instead of tracing")
    p.add_argument("--crossings", type=int, default=10_000)
    p.add_argument("--window", type=int, default=8, help="factor length for the language check")
    p.add_argument("--language-depth", type=int, default=40)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("render", parents=[common], help="SVG of a trajectory CSV")
    p.add_argument("--csv", required=True)
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--slope")
    p.add_argument("--boxes", help="levels, e.g. 4,6,8")
    p.add_argument("--convergents", help="JSON file or inline m,n;m,n")
    p.add_argument("--periodic", action="store_true")
    p.add_argument("--window", help="x0,y0,x1,y1")
    p.add_argument("--size", type=int, default=800)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _RUNTIME_ERRORS as exc:
        print(json.dumps({"schema": SCHEMA, "verdict": FAILED, "error": {"code": exc.code, "message": str(exc)}}), file=sys.stderr)
        return EXIT_FAILED
    except (InputError, WindtreeError, ValueError, TypeError, OSError) as exc:
        code = getattr(exc, "code", "INPUT")
        print(json.dumps({"schema": SCHEMA, "verdict": "error", "error": {"code": code, "message": str(exc)}}), file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
