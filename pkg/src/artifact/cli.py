"""Command-line driver: arrangement and sheaf files in, JSON reports out.

Exit status 0 on success, 1 on domain errors, 2 on I/O or format errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import calculus
from .arrangement import (Arrangement, ArrangementError, double_dual_contains,
                          dual_arrangement, enumerate_faces, make_flat, monotone_cones_check,
                          parse_signs)
from .hypsheaf import HyperbolicSheaf, SheafFormatError, sheaf_from_json, validate, write_sheaf
from .qlinalg import ComplexError, parse_rational


class UsageError(ValueError):
    pass


def _load(path: str) -> tuple[dict, str]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise SheafFormatError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SheafFormatError(f"{path}: not JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise SheafFormatError(f"{path}: expected a JSON object")
    return data, hashlib.sha256(raw).hexdigest()


def load_arrangement(data: dict) -> Arrangement:
    if "arrangement" in data:
        data = data["arrangement"]
    try:
        return Arrangement.from_json(data)
    except ArrangementError as exc:
        raise SheafFormatError(str(exc)) from exc


def load_sheaf(data: dict) -> HyperbolicSheaf:
    if "dims" not in data:
        raise SheafFormatError("expected a sheaf file (with 'arrangement' and 'dims')")
    return sheaf_from_json(data)


def face_arg(poset, text: str) -> int:
    return poset.face_id(parse_signs(text))


def covector_arg(text: str) -> list:
    try:
        return [parse_rational(x.strip()) for x in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad covector {text!r}: {exc}") from exc


def flat_arg(arr: Arrangement, text: str | None):
    idx = [] if not text or text.strip() in ("", "-") else [int(x) for x in text.split(",")]
    return make_flat(arr, idx)


def _report(rep) -> dict:
    return {"ranks": {str(k): v for k, v in sorted(rep.ranks.items())},
            "nonzero": {str(k): v for k, v in sorted(rep.nonzero().items())},
            "euler_consistent": rep.euler_consistent()}


def _write(args, q: HyperbolicSheaf, result: dict) -> None:
    if args.output:
        write_sheaf(q, args.output)
        result["written"] = args.output
    else:
        result["sheaf"] = q.to_json()


# ---------------------------------------------------------------- subcommands

def cmd_faces(args, data):
    poset = enumerate_faces(load_arrangement(data))
    out = poset.to_json()
    out["count"] = len(poset)
    return out


def cmd_dual(args, data):
    arr = load_arrangement(data)
    dual = dual_arrangement(arr)
    return {"dual": dual.to_json(), "faces": len(enumerate_faces(dual)),
            "double_dual_contains_original": double_dual_contains(arr) if arr.is_essential() else None}


def cmd_validate(args, data):
    rep = validate(load_sheaf(data))
    out = rep.to_json()
    out["_exit"] = 0 if rep.ok else 1
    return out


def cmd_rgamma(args, data):
    q = load_sheaf(data)
    if args.full:
        return {"variant": "full", "cohomology": _report(calculus.rgamma_full(q))}
    return {"variant": "compact", "cohomology": _report(calculus.rgamma_compact(q))}


def cmd_stalk(args, data):
    q = load_sheaf(data)
    a = face_arg(q.poset, args.face)
    return {"face": q.label(a), "ordinary_stalk": _report(calculus.ordinary_stalk(q, a)),
            "hyperbolic_from_stalks": calculus.hyperbolic_from_stalks_check(q, a, check=False)}


def cmd_vanish(args, data):
    q = load_sheaf(data)
    res = calculus.vanishing_cycles(q, covector_arg(args.f), face_arg(q.poset, args.face))
    return res.to_json()


def cmd_specialize(args, data):
    q = load_sheaf(data)
    res = calculus.specialize_full(q, flat_arg(q.arrangement, args.flat))
    out = {"flat": res.data.flat.label(), "dims": res.sheaf.dims,
           "validates": validate(res.sheaf).ok,
           "plain_transport_agrees": sum(res.naive_transport_agrees.values()),
           "faces": len(res.sheaf.dims)}
    _write(args, res.sheaf, out)
    return out


def cmd_bispec(args, data):
    q = load_sheaf(data)
    rep = calculus.bispecialize(q, flat_arg(q.arrangement, args.flatN), flat_arg(q.arrangement, args.flatM))
    out = rep.to_json()
    out["_exit"] = 0 if rep.consistent else 1
    return out


def cmd_fourier(args, data):
    q = load_sheaf(data)
    res = calculus.fourier_full(q)
    origin = q.poset.minimal
    out = {"dims": res.sheaf.dims, "validates": validate(res.sheaf).ok,
           "zero_dual_face_matches_origin": res.sheaf.dims[res.dual_poset.minimal] == q.dims[origin]}
    _write(args, res.sheaf, out)
    return out


def _cross_one(payload):
    data, c = payload
    q = load_sheaf(data)
    return calculus.fourier_cross_check(q, c, check=False)


def cmd_fourier_check(args, data):
    q = load_sheaf(data)
    res = calculus.fourier_full(q)
    faces = range(len(res.dual_poset))
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            flags = list(pool.map(_cross_one, [(data, c) for c in faces]))
    else:
        flags = [calculus.fourier_cross_check(q, c, check=False, transform=res) for c in faces]
    per_face = {res.dual_poset.faces[c].label: ok for c, ok in zip(faces, flags)}
    return {"per_dual_face": per_face, "all": all(flags), "_exit": 0 if all(flags) else 1}


def cmd_microlocalize(args, data):
    q = load_sheaf(data)
    res = calculus.microlocalize_experimental(q, flat_arg(q.arrangement, args.flat))
    out = {"experimental": True, **res.report}
    if res.sheaf is not None:
        _write(args, res.sheaf, out)
    return out


def cmd_check_identities(args, data):
    arr = load_arrangement(data)
    poset = enumerate_faces(arr)
    out = {"faces": len(poset), "euler_sum": poset.euler_sum(),
           "euler_relation": poset.euler_sum() == (-1) ** arr.dim,
           "diamonds": poset.diamond_check()[0], "essential": arr.is_essential()}
    if arr.is_essential():
        dposet = enumerate_faces(dual_arrangement(arr))
        out["inclusion_exclusion"] = calculus.inclusion_exclusion_report(arr)
        out["monotone_cones"] = monotone_cones_check(poset, dposet)
        out["double_dual_contains_original"] = double_dual_contains(arr)
    return out


COMMANDS = {
    "faces": cmd_faces, "dual": cmd_dual, "validate": cmd_validate, "rgamma": cmd_rgamma,
    "stalk": cmd_stalk, "vanish": cmd_vanish, "specialize": cmd_specialize, "bispec": cmd_bispec,
    "fourier": cmd_fourier, "fourier-check": cmd_fourier_check, "microlocalize": cmd_microlocalize,
    "check-identities": cmd_check_identities,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write the derived sheaf here")
    common.add_argument("--pretty", action="store_true", help="indented output")
    common.add_argument("--jobs", type=int, default=1)
    parser = argparse.ArgumentParser(prog="artifact", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        p.add_argument("input")
        if name == "rgamma":
            g = p.add_mutually_exclusive_group()
            g.add_argument("--compact", action="store_true")
            g.add_argument("--full", action="store_true")
        elif name == "stalk":
            p.add_argument("--face", required=True)
        elif name == "vanish":
            p.add_argument("--f", required=True, help="covector, comma-separated rationals")
            p.add_argument("--face", required=True)
        elif name in ("specialize", "microlocalize"):
            p.add_argument("--flat", default="", help="comma-separated hyperplane indices")
        elif name == "bispec":
            p.add_argument("--flatN", required=True)
            p.add_argument("--flatM", required=True)
    return parser


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code in (0, None):
            return 0
        print(json.dumps({"status": "error", "exit": 2, "error": "bad arguments"}), file=stdout)
        return 2
    start = time.perf_counter()
    report = {"command": args.command, "argv": list(argv) if argv is not None else sys.argv[1:]}
    code = 0
    try:
        data, digest = _load(args.input)
        report["input_sha256"] = digest
        result = COMMANDS[args.command](args, data)
        code = result.pop("_exit", 0)
        report["result"] = result
    except (SheafFormatError, UsageError, OSError, json.JSONDecodeError) as exc:
        code = 2
        report["error"] = str(exc)
    except (ArrangementError, calculus.CalculusError, ComplexError, ValueError) as exc:
        code = 1
        report["error"] = str(exc)
        details = getattr(exc, "details", None)
        if details:
            report["details"] = {k: str(v) for k, v in details.items()}
    report["status"] = "ok" if code == 0 else "error"
    report["exit"] = code
    report["elapsed_s"] = round(time.perf_counter() - start, 4)
    print(json.dumps(report, indent=2 if args.pretty else None, sort_keys=args.pretty), file=stdout)
    return code


def main() -> None:
    sys.exit(run())
