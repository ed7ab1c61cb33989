"""Command-line front end.

Exit codes: 0 for definitive verdicts (covered or not), 2 for rejected
input (malformed JSON, invalid bodies, bad options), 3 for verdicts that
are only window-relative.  All output is deterministic, byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import jsonio
from .bodies import BodyError, SFreeBody, is_maximal, is_s_free
from .covering import (CoveringUnsupportedError, InvalidBodyError,
                       check_covering, grid_oracle, minimal_lifting,
                       build_covering_setup)
from .cuts import CoveringRequired, generate_cut, validate_cut
from .gallery import entry_by_name, standard_entries
from .jsonio import SchemaError
from .lattices import NotLatticeSubspaceError, validate_window
from .linalg import QMatrix, QVector
from .polyhedra import EmptyPolyhedronError, UnboundedError
from .rationals import rat, rat_str
from .transforms import (AffineMap, OriginNotInteriorError, affine_transform,
                         coproduct, verify_limit)

EXIT_OK = 0
EXIT_REJECTED = 2
EXIT_INCONCLUSIVE = 3


class CliError(Exception):
    def __init__(self, message, code=EXIT_REJECTED):
        super().__init__(message)
        self.code = code


def _read_doc(path: str, what: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return jsonio.loads(fh.read())
    except OSError as exc:
        raise CliError(f"cannot read {what} from {path}: {exc}")
    except SchemaError as exc:
        raise CliError(f"{what} at {path}: {exc}")


def _load_body(path: str) -> SFreeBody:
    try:
        return jsonio.body_from_obj(_read_doc(path, "body"))
    except SchemaError as exc:
        raise CliError(f"body at {path}: {exc}")


def _load_lattice(path: str):
    try:
        return jsonio.lattice_from_obj(_read_doc(path, "lattice"))
    except SchemaError as exc:
        raise CliError(f"lattice at {path}: {exc}")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _threads() -> int:
    raw = os.environ.get("LIFTCOVER_THREADS", "1")
    try:
        val = int(raw)
    except ValueError:
        raise CliError(f"LIFTCOVER_THREADS must be an integer, got {raw!r}")
    if val < 1:
        raise CliError("LIFTCOVER_THREADS must be at least 1")
    return val


def _envelope(command: str, args, payload: dict) -> dict:
    return {
        "command": command,
        "options": {
            "window": args.window,
            "oracle_resolution": args.oracle_resolution,
            "threads": _threads(),
        },
        **payload,
    }


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--window", type=int, default=5,
                   help="validation window radius (default 5)")
    p.add_argument("--oracle-resolution", type=int, default=64,
                   help="grid oracle pitch denominator (default 64)")
    p.add_argument("--out", help="write the main output here instead of stdout")


def cmd_check_covering(args) -> int:
    body = _load_body(args.body)
    s = _load_lattice(args.lattice)
    validation = validate_window(s, args.window)
    report = check_covering(s, body)
    payload = {"input_validation": validation,
               "report": jsonio.covering_report_to_obj(report)}
    if args.with_oracle:
        oracle = grid_oracle(s, body, args.oracle_resolution)
        payload["oracle"] = jsonio.oracle_report_to_obj(oracle)
    _emit(jsonio.dumps(_envelope("check-covering", args, payload)), args.out)
    window_relative = any("window" in note for note in report.notes)
    return EXIT_INCONCLUSIVE if window_relative else EXIT_OK


def _parse_map(spec: str, dim: int) -> AffineMap:
    if spec.strip().startswith("{"):
        doc = jsonio.loads(spec)
    else:
        doc = _read_doc(spec, "affine map")
    try:
        mrows = doc["M"]
        mvec = doc["m"]
        mat = QMatrix([[rat(x) for x in row] for row in mrows], ncols=dim)
        vec = QVector([rat(x) for x in mvec])
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"affine map: expected {{\"M\": rows, \"m\": vector}} ({exc})")
    try:
        return AffineMap(mat, vec)
    except ValueError as exc:
        raise CliError(f"affine map: {exc}")


def cmd_transform(args) -> int:
    body = _load_body(args.body)
    s = _load_lattice(args.lattice)
    t = _parse_map(args.map, body.dim)
    s2, b2 = affine_transform(s, body, t)
    payload = {"body": jsonio.body_to_obj(b2),
               "lattice": jsonio.lattice_to_obj(s2)}
    _emit(jsonio.dumps(_envelope("transform", args, payload)), args.out)
    return EXIT_OK


def cmd_coproduct(args) -> int:
    b1 = _load_body(args.b1)
    b2 = _load_body(args.b2)
    try:
        mu = rat(args.mu)
    except ValueError:
        raise CliError(f"--mu: bad rational {args.mu!r}")
    try:
        body = coproduct(b1, b2, mu)
    except ValueError as exc:
        raise CliError(str(exc))
    payload = {"body": jsonio.body_to_obj(body)}
    if args.s1 and args.s2:
        from .lattices import product
        payload["lattice"] = jsonio.lattice_to_obj(
            product(_load_lattice(args.s1), _load_lattice(args.s2)))
    _emit(jsonio.dumps(_envelope("coproduct", args, payload)), args.out)
    return EXIT_OK


def cmd_verify_limit(args) -> int:
    doc = _read_doc(args.instance, "limit instance")
    try:
        inst = jsonio.limit_instance_from_obj(doc)
    except SchemaError as exc:
        raise CliError(str(exc))
    rep = verify_limit(inst)
    payload = {"report": {
        "samples": [{
            "s_free": c.s_free,
            "maximal": c.maximal,
            "covering": jsonio.covering_report_to_obj(c.covering)
            if c.covering else None,
        } for c in rep.sample_checks],
        "limit": {
            "s_free": rep.limit_check.s_free,
            "maximal": rep.limit_check.maximal,
            "covering": jsonio.covering_report_to_obj(rep.limit_check.covering)
            if rep.limit_check.covering else None,
        },
        "limit_intersection_polytope": rep.limit_intersection_polytope,
        "all_samples_covered": rep.all_samples_covered,
        "limit_covered": rep.limit_covered,
        "consistent": rep.consistent,
    }}
    _emit(jsonio.dumps(_envelope("verify-limit", args, payload)), args.out)
    return EXIT_OK


def cmd_lift(args) -> int:
    body = _load_body(args.body)
    s = _load_lattice(args.lattice)
    try:
        doc = json.loads(args.point)
        point = QVector([rat(x) for x in doc])
    except (json.JSONDecodeError, TypeError, ValueError) as exc:
        raise CliError(f"--point: expected a JSON list of rationals ({exc})")
    lv = minimal_lifting(s, body, point)
    payload = {"lift": {
        "point": [rat_str(x) for x in point],
        "value": rat_str(lv.value),
        "w": [rat_str(x) for x in lv.w],
    }}
    _emit(jsonio.dumps(_envelope("lift", args, payload)), args.out)
    return EXIT_OK


def cmd_cut(args) -> int:
    body = _load_body(args.body)
    s = _load_lattice(args.lattice)
    try:
        inst = jsonio.instance_from_obj(_read_doc(args.instance, "instance"))
    except SchemaError as exc:
        raise CliError(str(exc))
    cut = generate_cut(s, body, inst,
                       allow_uncertified=args.allow_uncertified)
    payload = {"cut": jsonio.cut_to_obj(cut)}
    code = EXIT_OK
    if args.validate:
        ell = inst.ell
        val = validate_cut(s, inst, cut,
                           y_lo=[args.y_lo] * ell, y_hi=[args.y_hi] * ell,
                           window=args.window)
        payload["validation"] = jsonio.cut_validation_to_obj(val)
        if val.status == "inconclusive":
            code = EXIT_INCONCLUSIVE
    _emit(jsonio.dumps(_envelope("cut", args, payload)), args.out)
    return code


def cmd_gallery(args) -> int:
    if args.action == "list":
        payload = {"entries": [jsonio.gallery_entry_to_obj(e)["name"]
                               for e in standard_entries()]}
        _emit(jsonio.dumps(_envelope("gallery", args, payload)), args.out)
        return EXIT_OK
    try:
        entry = entry_by_name(args.name)
    except KeyError as exc:
        raise CliError(str(exc))
    payload = {"entry": jsonio.gallery_entry_to_obj(entry)}
    if entry.limit_instance is not None:
        payload["limit_instance"] = jsonio.limit_instance_to_obj(
            entry.limit_instance)
    _emit(jsonio.dumps(_envelope("gallery", args, payload)), args.out)
    if args.out_body:
        _emit(jsonio.dumps(jsonio.body_to_obj(entry.body)), args.out_body)
    if args.out_lattice:
        _emit(jsonio.dumps(jsonio.lattice_to_obj(entry.s)), args.out_lattice)
    return EXIT_OK


def cmd_plot(args) -> int:
    from .svgplot import render_covering
    body = _load_body(args.body)
    s = _load_lattice(args.lattice)
    try:
        svg = render_covering(s, body)
    except ValueError as exc:
        raise CliError(str(exc))
    _emit(svg, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="liftcover",
        description="exact covering certification and cut generation for "
                    "lattice-free polyhedra")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-covering", help="decide the covering property")
    p.add_argument("--body", required=True)
    p.add_argument("--lattice", required=True)
    p.add_argument("--with-oracle", action="store_true",
                   help="also run the grid-sampling oracle")
    _add_common(p)
    p.set_defaults(func=cmd_check_covering)

    p = sub.add_parser("transform", help="apply an invertible affine map")
    p.add_argument("--body", required=True)
    p.add_argument("--lattice", required=True)
    p.add_argument("--map", required=True,
                   help="JSON file or inline JSON {\"M\": rows, \"m\": vec}")
    _add_common(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("coproduct", help="weighted coproduct of two bodies")
    p.add_argument("--b1", required=True)
    p.add_argument("--b2", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--s1", help="optional lattice of the first factor")
    p.add_argument("--s2", help="optional lattice of the second factor")
    _add_common(p)
    p.set_defaults(func=cmd_coproduct)

    p = sub.add_parser("verify-limit", help="verify a limit family")
    p.add_argument("--instance", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_verify_limit)

    p = sub.add_parser("lift", help="minimal lifting value at a point")
    p.add_argument("--body", required=True)
    p.add_argument("--lattice", required=True)
    p.add_argument("--point", required=True,
                   help='JSON list of rationals, e.g. \'["3/10"]\'')
    _add_common(p)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("cut", help="generate (and optionally validate) a cut")
    p.add_argument("--body", required=True)
    p.add_argument("--lattice", required=True)
    p.add_argument("--instance", required=True)
    p.add_argument("--validate", action="store_true")
    p.add_argument("--allow-uncertified", action="store_true")
    p.add_argument("--y-lo", type=int, default=0)
    p.add_argument("--y-hi", type=int, default=2)
    _add_common(p)
    p.set_defaults(func=cmd_cut)

    p = sub.add_parser("gallery", help="list or emit built-in entries")
    p.add_argument("action", choices=["list", "emit"])
    p.add_argument("name", nargs="?")
    p.add_argument("--out-body")
    p.add_argument("--out-lattice")
    _add_common(p)
    p.set_defaults(func=cmd_gallery)

    p = sub.add_parser("plot", help="render a 2-d covering picture as SVG")
    p.add_argument("--body", required=True)
    p.add_argument("--lattice", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "gallery" and args.action == "emit" and not args.name:
        ap.error("gallery emit requires a name")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (SchemaError, BodyError, InvalidBodyError, OriginNotInteriorError,
            NotLatticeSubspaceError, CoveringRequired, EmptyPolyhedronError,
            UnboundedError, CoveringUnsupportedError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REJECTED


if __name__ == "__main__":
    sys.exit(main())
