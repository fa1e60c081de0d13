"""Command-line interface: JSON in, JSON out.

Exit codes: 0 success (a false certificate is still a success), 1 domain
error, 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import List, Optional

import numpy as np

from .errors import HerglotzError
from .representation import DEFAULT_TOL, INF, extended_real, herglotz_from_json


class InputError(Exception):
    """Malformed command input; maps to exit code 2."""


def _complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise InputError(f"complex numbers are [re, im] pairs, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        return complex(v.replace(" ", "").replace("i", "j"))
    if isinstance(v, (int, float)):
        return complex(v)
    raise InputError(f"cannot read a complex number from {v!r}")


def _cjson(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _ext(x):
    return "inf" if x is INF else x


def _matrix(d):
    from .moebius import Matrix2C, matrix_from_json

    if isinstance(d, dict):
        return matrix_from_json(d)
    if isinstance(d, list) and len(d) == 2 and all(isinstance(r, list) and len(r) == 2 for r in d):
        return Matrix2C(*(_complex(v) for row in d for v in row))
    raise InputError("a matrix is {a, b, c, d} or [[a, b], [c, d]]")


def _points(v) -> List[complex]:
    if isinstance(v, list) and v and isinstance(v[0], (list, str)) and not (
            len(v) == 2 and all(isinstance(x, (int, float)) for x in v)):
        return [_complex(x) for x in v]
    return [_complex(v)]


def _phi(d):
    return herglotz_from_json(d["phi"] if "phi" in d else d)


def _grid(args):
    return list(np.linspace(args.grid_min, args.grid_max, args.nodes))


def _emit(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh)


# --------------------------------------------------------------------------
# commands


def cmd_eval(data, args):
    from .evaluation import evaluate

    phi = _phi(data)
    raw = data.get("z") if isinstance(data, dict) and "z" in data else args.z
    if raw is None:
        raise InputError("no evaluation point: give \"z\" in the input or --z")
    pts = _points(raw)
    vals = [evaluate(phi, z, tol=args.tol) for z in pts]
    if len(vals) == 1 and not (isinstance(raw, list) and raw and isinstance(raw[0], list)):
        return {"value": _cjson(vals[0])}
    return {"values": [_cjson(v) for v in vals]}


def cmd_classify(data, args):
    from .moebius import class_to_json, classify

    M = _matrix(data.get("matrix", data) if isinstance(data, dict) else data)
    return class_to_json(classify(M))


def cmd_transform(data, args):
    from .transform import transform_measure

    phi = _phi(data)
    M = _matrix(data["matrix"])
    alpha, lam = transform_measure(phi.measure, phi.alpha, M, tol=args.tol)
    out = {"alpha": alpha}
    out.update(lam.to_json())
    if args.emit_grid:
        x = np.linspace(args.grid_min, args.grid_max, args.nodes)
        dens = lam.density(x) if lam.density is not None else np.zeros_like(x)
        _emit(args.emit_grid, {"x": list(x), "density": list(map(float, dens))})
    return out


_BUILTINS = {
    "affine": lambda d: (lambda z, a=float(d["a"]), b=_complex(d.get("b", 0)): a * z + b),
    "atomic": lambda d: (lambda z, s=float(d["s"]): (1 + s * z) / (s - z)),
}


def _evaluator(data, args):
    from .evaluation import evaluate

    if "builtin" in data:
        spec = data["builtin"]
        kind = spec.get("kind") if isinstance(spec, dict) else spec
        if kind == "rational":
            from .rational import RationalFunction

            return RationalFunction.from_json(spec)
        if kind not in _BUILTINS:
            raise InputError(f"unknown builtin {kind!r}; choose from {sorted(_BUILTINS) + ['rational']}")
        return _BUILTINS[kind](spec)
    phi = _phi(data)
    return lambda z: evaluate(phi, z, tol=args.tol)


def cmd_invert(data, args):
    from .inversion import invert

    f = _evaluator(data, args)
    atoms = data.get("atoms") if isinstance(data.get("atoms"), list) and all(
        isinstance(a, (int, float)) for a in data.get("atoms", [])) else None
    if atoms is None and "phi" in data:
        atoms = [a["loc"] for a in data["phi"].get("atoms", []) if a["loc"] != "inf"]
    out = invert(f, _grid(args), atoms=atoms, threshold=args.threshold)
    if args.emit_grid:
        _emit(args.emit_grid, {"x": [p["x"] for p in out["density"]], "density": [p["density"] for p in out["density"]]})
    return out


def cmd_check_rational(data, args):
    from .rational import RationalFunction, check_rational

    f = RationalFunction.from_json(data)
    cert = check_rational(f)
    out = cert.to_json()
    out["verified"] = cert.verify(np.random.default_rng(args.seed))
    return out


def cmd_check_positivity(data, args):
    from .inversion import BoundarySupportEstimate, support_estimate
    from .positivity import affine_check, linear_fractional_check, localized_positivity_check, quadratic_form_check

    if "linear_fractional" in data:
        d = data["linear_fractional"]
        a, b, c = (_complex(d[k]) for k in "abc")
        out = {"form": "a/(z+c)+b", "endofunction": linear_fractional_check(a, b, c)}
        if b.imag > 0 and c.imag > 0:
            out["quadratic_form"] = quadratic_form_check(a, b, c)
        return out
    if "affine" in data:
        d = data["affine"]
        return {"form": "a z + b", "endofunction": affine_check(_complex(d["a"]), _complex(d.get("b", 0)))}
    f = _evaluator(data, args)
    if "support" in data:
        ivs = []
        for iv in data["support"]:
            if iv == "inf" or iv == ["inf", "inf"]:
                ivs.append((INF, INF))
            else:
                ivs.append((float(iv[0]), float(iv[1])))
        support = BoundarySupportEstimate(tuple(ivs), args.threshold)
    else:
        support = support_estimate(f, _grid(args), threshold=args.threshold)
    rep = localized_positivity_check(f, support, margin=args.margin, grid=args.grid)
    out = rep.to_json()
    out["support"] = support.to_json()
    return out


def cmd_semigroup(data, args):
    from .transform import TEST_FUNCTIONS, markov_grid, semigroup_check

    M, N = _matrix(data["M"]), _matrix(data["N"])
    name = data.get("f", "cauchy")
    if name not in TEST_FUNCTIONS:
        raise InputError(f"unknown test function {name!r}; choose from {sorted(TEST_FUNCTIONS)}")
    f = TEST_FUNCTIONS[name]
    grid = [extended_real(s) for s in data["grid"]] if "grid" in data else _grid(args) + [INF]
    dev = semigroup_check(M, N, f, grid, tol=args.tol)
    if args.emit_grid:
        vals = markov_grid(M, f, grid, tol=args.tol)
        _emit(args.emit_grid, {"s": [_ext(s) for s in grid], "lambda_f": [float(np.real(v)) for v in vals]})
    return {"max_deviation": dev, "f": name, "points": len(grid)}


def cmd_cayley(data, args):
    from .cayley import DiskMeasure, disk_to_halfplane, halfplane_to_disk, transfer_disk_measure

    if "points" in data:
        pts = _points(data["points"])
        to = data.get("direction", "to-halfplane")
        fn = {"to-halfplane": disk_to_halfplane, "to-disk": halfplane_to_disk}.get(to)
        if fn is None:
            raise InputError("direction is 'to-halfplane' or 'to-disk'")
        return {"direction": to, "points": [_cjson(fn(z)) for z in pts]}
    m = data["measure"]
    atoms = tuple((float(a["t"]), float(a["mass"])) for a in m.get("atoms", []))
    mu = DiskMeasure(atoms, m.get("uniform"))
    phi = transfer_disk_measure(mu, float(data.get("imag_at_zero", 0.0)))
    return phi.to_json()


def cmd_selftest(data, args):
    from .selftest import run

    results = run(args.seed)
    return {"checks": [{"name": n, "passed": ok, "message": msg} for n, ok, msg in results],
            "passed": all(ok for _, ok, _ in results)}


COMMANDS = {
    "eval": cmd_eval,
    "classify": cmd_classify,
    "transform": cmd_transform,
    "invert": cmd_invert,
    "check-rational": cmd_check_rational,
    "check-positivity": cmd_check_positivity,
    "semigroup-check": cmd_semigroup,
    "cayley": cmd_cayley,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", default="-", help="JSON input file, '-' for stdin")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--grid-min", type=float, default=-5.0)
    common.add_argument("--grid-max", type=float, default=5.0)
    common.add_argument("--nodes", type=int, default=101)
    common.add_argument("--threshold", type=float, default=1e-2)
    common.add_argument("--margin", type=float, default=0.1)
    common.add_argument("--grid", type=int, default=200, help="samples per axis for positivity probes")
    common.add_argument("--emit-grid", metavar="FILE", help="write plot arrays as JSON to FILE")
    common.add_argument("--z", help="evaluation point for eval, e.g. 2+3j")
    p = argparse.ArgumentParser(prog="herglotz", description="Pick functions, their measures and Moebius maps.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return p


def _read(args):
    if args.command == "selftest" and args.input == "-" and sys.stdin.isatty():
        return {}
    text = sys.stdin.read() if args.input == "-" else open(args.input).read()
    if args.command == "selftest" and not text.strip():
        return {}
    return json.loads(text)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        data = _read(args)
    except json.JSONDecodeError as exc:
        print(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return 2
    try:
        out = COMMANDS[args.command](data, args)
    except HerglotzError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (InputError, KeyError, ValueError, TypeError, AttributeError) as exc:
        what = f"missing field {exc}" if isinstance(exc, KeyError) else str(exc)
        print(f"malformed input: {what}", file=sys.stderr)
        return 2
    try:
        json.dump(out, sys.stdout, default=_fallback)
        sys.stdout.write("\n")
        sys.stdout.flush()
    except BrokenPipeError:
        sys.stderr.close()
    if args.command == "selftest" and not out["passed"]:
        return 1
    return 0


def _fallback(o):
    if o is INF:
        return "inf"
    if isinstance(o, complex):
        return _cjson(o)
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
