"""Command-line interface: ``qe <command> ...``.

Structured output is one JSON document (a CommandResult) on stdout or in
``--out``; a one-line human summary goes to stderr unless ``--json`` is
given.  Exit codes: 0 ok, 1 failed or undecided check, 2 parse error,
3 domain error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from pathlib import Path

from . import bounds, dependence, liouville, riemann, suites
from . import vandermonde as vdm
from .errors import DomainError, ParseError, QEError
from .lattice import PRESETS, lattice_from_spec
from .precision import MIN_PREC, ball_to_json, parse_complex, workprec
from .serre import make_serre_point, serre_f
from .weierstrass import evaluate, make_context

DEFAULT_PREC = 128
EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_DOMAIN = 0, 1, 2, 3
FUNCTIONS = ("wp", "wp_prime", "zeta", "sigma", "serre")
DEFAULT_RANDOM_LATTICES = 2


class CommandFailed(Exception):
    """Raised by handlers to attach a status to a complete payload."""


def default_precision() -> int:
    raw = os.environ.get("QE_DEFAULT_PREC")
    if raw is None:
        return DEFAULT_PREC
    try:
        prec = int(raw)
    except ValueError:
        raise ParseError(f"QE_DEFAULT_PREC must be an integer, got {raw!r}") from None
    if prec < MIN_PREC:
        raise ParseError(f"QE_DEFAULT_PREC must be >= {MIN_PREC}")
    return prec


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------

def _split(text: str, sep: str = ",") -> list:
    items = [p.strip() for p in text.split(sep)]
    if any(not p for p in items):
        raise ParseError(f"empty item in {text!r}")
    return items


def _complex_list(text: str) -> list:
    out = []
    for item in _split(text):
        parse_complex(item)
        out.append(item)
    return out


def _int_list(text: str) -> list:
    try:
        return [int(x) for x in _split(text.replace("−", "-"))]
    except ValueError as exc:
        raise ParseError(f"expected integers, got {text!r}") from exc


def _lattice(args, prec: int, required: bool = True):
    if getattr(args, "lattice", None):
        raw = args.lattice
        path = Path(raw)
        text = path.read_text(encoding="utf-8") if path.is_file() else raw
        try:
            spec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"lattice spec is not valid JSON: {exc}") from exc
        return lattice_from_spec(spec, prec)
    if getattr(args, "omega1", None) or getattr(args, "omega2", None):
        if not (args.omega1 and args.omega2):
            raise ParseError("give both --omega1 and --omega2")
        return lattice_from_spec({"omega1": args.omega1, "omega2": args.omega2}, prec)
    if getattr(args, "preset", None):
        return lattice_from_spec({"preset": args.preset}, prec)
    if required:
        return lattice_from_spec({"preset": "square"}, prec)
    return None


def _add_lattice_flags(p):
    g = p.add_argument_group("lattice")
    g.add_argument("--preset", choices=PRESETS)
    g.add_argument("--omega1", help="complex literal, e.g. 1 or 0.5+0.1i")
    g.add_argument("--omega2", help="complex literal with Im(omega2/omega1) != 0")
    g.add_argument("--lattice", help="lattice spec as JSON text or a JSON file")


# ---------------------------------------------------------------------------
# handlers: each returns (status, payload)
# ---------------------------------------------------------------------------

def cmd_eval(args, prec: int):
    lat = _lattice(args, prec)
    ctx = make_context(lat)
    z = parse_complex(args.z)
    if args.fn == "serre":
        if args.u is None:
            raise ParseError("--u is required for --fn serre")
        sp = make_serre_point(ctx, parse_complex(args.u))
        value = serre_f(ctx, sp, z)
    else:
        v = evaluate(ctx, z, pole_ok=(args.fn == "sigma"))
        value = getattr(v, args.fn)
    payload = {
        "function": args.fn,
        "lattice": lat.to_json(),
        "z": args.z,
        "value": ball_to_json(value, prec),
    }
    if args.u is not None:
        payload["u"] = args.u
    return "ok", payload


def cmd_verify(args, prec: int):
    lat = _lattice(args, prec, required=False)
    if lat is None:
        lattices = suites.default_lattices(prec, args.seed, DEFAULT_RANDOM_LATTICES)
    else:
        lattices = [lat]
    results = suites.run_suite(args.suite, lattices, prec, args.seed, args.trials)
    payload = {
        "suite": args.suite,
        "seed": args.seed,
        "trials": args.trials,
        "lattices": [lt.to_json() for lt in lattices],
        "results": [r.to_json() for r in results],
    }
    return ("ok" if all(r.ok for r in results) else "fail"), payload


def cmd_liouville(args, prec: int):
    if args.action == "gen":
        if args.kmax > liouville.MAX_K:
            raise liouville.DepthExceeded(f"kmax must be <= {liouville.MAX_K}")
        if args.n is None:
            raise ParseError("--n is required for gen")
        depth = args.depth
        signs = args.signs
        if signs == "random":
            depth = depth or max(2, args.kmax + 1)
            signs = liouville.random_signs(args.n, depth, args.seed)
        elif depth is None:
            if len(signs) % args.n:
                raise liouville.InvalidShape(f"{len(signs)} signs do not split into {args.n} rows")
            depth = len(signs) // args.n
        cert = liouville.certify(args.n, signs, depth, args.kmax, prec)
        return ("ok" if cert.passed else "fail"), cert.to_json()
    if not args.infile:
        raise ParseError("--in is required for verify")
    try:
        data = json.loads(Path(args.infile).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read certificate: {exc}") from exc
    if isinstance(data, dict) and "payload" in data and "records" not in data:
        data = data["payload"]
    ok, problems = liouville.check_certificate(data, prec)
    return ("ok" if ok else "fail"), {"valid": ok, "problems": problems}


def _verdict_status(verdict) -> str:
    return "ok" if verdict == "Pass" else ("fail" if verdict == "Fail" else "unknown")


def cmd_deps(args, prec: int):
    kind = args.kind
    if kind == "mult":
        v = dependence.find_multiplicative_relation(_complex_list(args.values), args.bound, prec, args.method)
        return "ok", v.to_json()
    if kind == "pairs":
        pairs = []
        for item in _split(args.pairs):
            parts = item.split(":")
            if len(parts) != 2:
                raise ParseError(f"pair {item!r} must look like v:w")
            parse_complex(parts[0])
            parse_complex(parts[1])
            pairs.append((parts[0], parts[1]))
        v = dependence.find_relation_two_params(pairs, args.bound, prec, args.method)
        return "ok", v.to_json()
    lat = _lattice(args, prec)
    ctx = make_context(lat)
    ts = _complex_list(args.t) if args.t else []
    sps = [make_serre_point(ctx, parse_complex(u)) for u in (_complex_list(args.u) if args.u else [])]
    if kind == "iv":
        v = dependence.check_condition_iv(lat, [parse_complex(t) for t in ts], sps, args.bound, prec, args.method)
        return "ok", v.to_json()
    if kind == "cm":
        v = dependence.check_cm_condition(lat, [parse_complex(t) for t in ts], sps, args.bound, prec, args.method)
        return "ok", v.to_json()
    if not args.coeffs:
        raise ParseError("--coeffs is required for zeta")
    rep = dependence.check_zeta_relation(_int_list(args.coeffs), sps, lat, prec)
    return ("ok" if rep.holds else "fail"), rep.to_json()


def cmd_bounds(args, prec: int):
    if args.kind == "height":
        h = bounds.log_height_rational(args.p, args.q, prec)
        return "ok", {"p": args.p, "q": args.q, "log_height": ball_to_json(h, prec)}
    if args.kind == "baker":
        rep = bounds.baker_lower_bound(args.alpha, args.beta, args.D, prec)
        return _verdict_status(rep.verdict), rep.to_json()
    rep = bounds.feldman_check(args.poly, args.theta, prec)
    return _verdict_status(rep.verdict), rep.to_json()


def cmd_riemann(args, prec: int):
    s = parse_complex(args.s)
    if args.action == "eval":
        z = riemann.zeta_r(s, prec, args.method)
        return "ok", {"s": args.s, "method": args.method, "value": ball_to_json(z, prec)}
    rep = riemann.tail_inequality_check(s, prec, args.method)
    return _verdict_status(rep.verdict), rep.to_json()


def cmd_vdm(args, prec: int):
    if args.action == "superfactorial":
        return "ok", {"k": [vdm.superfactorial_k(t) for t in range(args.t + 1)]}
    if args.action == "det":
        if not args.blocks:
            raise ParseError("--blocks is required for det")
        system = vdm.make_system(vdm.parse_blocks(args.blocks), args.shift)
        closed = vdm.det_closed_form(system, prec)
        direct = vdm.det_direct(vdm.build_matrix(system, prec), prec)
        agree = vdm.dets_agree(closed, direct, prec)
        payload = {"D": system.D, "exact": system.exact, "agree": agree}
        with workprec(prec):
            payload["closed_form"] = str(closed) if system.exact else ball_to_json(closed, prec)
            payload["direct"] = str(direct) if system.exact else ball_to_json(direct, prec)
        return ("ok" if agree else "fail"), payload
    if not (args.w and args.coeffs):
        raise ParseError("--w and --coeffs are required for xi")
    ws = _complex_list(args.w)
    rows = [_complex_list(r) for r in _split(args.coeffs, ";")]
    rep = vdm.xi_lower_bound_check(ws, rows, args.T, parse_complex(args.A), prec)
    payload = {
        "max_abs_lower": ball_to_json(rep.max_abs_lower, prec),
        "eta": ball_to_json(rep.eta, prec),
        "bound": ball_to_json(rep.bound, prec),
        "inverse_norm": ball_to_json(rep.inverse_norm, prec),
        "holds": rep.holds,
    }
    return ("ok" if rep.holds else "fail"), payload


HANDLERS = {
    "eval": cmd_eval,
    "verify": cmd_verify,
    "liouville": cmd_liouville,
    "deps": cmd_deps,
    "bounds": cmd_bounds,
    "riemann": cmd_riemann,
    "vdm": cmd_vdm,
}


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--prec", type=int, default=d(None), help="working precision in bits (default 128)")
    p.add_argument("--seed", type=int, default=d(0), help="seed for generated data")
    p.add_argument("--json", action="store_true", default=d(False), help="suppress the stderr summary")
    p.add_argument("--out", default=d(None), help="write the JSON result to this file atomically")
    return p


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    parser = _Parser(prog="qe", description=__doc__.splitlines()[0], parents=[_global_flags(False)])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common], help="evaluate wp, wp', zeta, sigma or a Serre function")
    p.add_argument("--fn", required=True, choices=FUNCTIONS)
    p.add_argument("--z", required=True)
    p.add_argument("--u")
    _add_lattice_flags(p)

    p = sub.add_parser("verify", parents=[common], help="run a seeded verification suite")
    p.add_argument("--suite", required=True, choices=suites.SUITES + ("all",))
    p.add_argument("--trials", type=int)
    _add_lattice_flags(p)

    p = sub.add_parser("liouville", parents=[common], help="generate or check Liouville certificates")
    p.add_argument("action", choices=("gen", "verify"))
    p.add_argument("--n", type=int)
    p.add_argument("--signs", default="random", help='row-major string over {+,-}, or "random"')
    p.add_argument("--depth", type=int)
    p.add_argument("--kmax", type=int, default=2)
    p.add_argument("--in", dest="infile")

    p = sub.add_parser("deps", parents=[common], help="dependence detectors")
    p.add_argument("kind", choices=("mult", "pairs", "iv", "cm", "zeta"))
    p.add_argument("--values", help="comma-separated complex literals")
    p.add_argument("--pairs", help="comma-separated v:w pairs")
    p.add_argument("--t", help="comma-separated t values")
    p.add_argument("--u", help="comma-separated Serre points")
    p.add_argument("--coeffs", help="comma-separated integers a_i")
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--method", choices=("auto", "exhaustive", "lll"), default="auto")
    _add_lattice_flags(p)

    p = sub.add_parser("bounds", parents=[common], help="height, one-logarithm and root-distance bounds")
    p.add_argument("kind", choices=("height", "baker", "feldman"))
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--D", type=int, default=1)
    p.add_argument("--poly", help="integer coefficients, ascending degree")
    p.add_argument("--theta")

    p = sub.add_parser("riemann", parents=[common], help="Riemann zeta for Re s >= 2")
    p.add_argument("action", choices=("eval", "check"))
    p.add_argument("--s", required=True)
    p.add_argument("--method", choices=("auto", "dirichlet", "euler-maclaurin"), default="auto")

    p = sub.add_parser("vdm", parents=[common], help="confluent Vandermonde tools")
    p.add_argument("action", choices=("det", "xi", "superfactorial"))
    p.add_argument("--blocks", help='"w=<complex>:t=<int>,..."')
    p.add_argument("--shift", default="0")
    p.add_argument("--w", help="comma-separated distinct nonzero w_j")
    p.add_argument("--coeffs", help="rows t=0..T separated by ';', entries j=1..m by ','")
    p.add_argument("--T", type=int, default=0)
    p.add_argument("--A", default="0")
    p.add_argument("--t", type=int, default=7)
    return parser


def _check_required(args):
    need = {
        ("bounds", "height"): ("p",),
        ("bounds", "baker"): ("alpha", "beta"),
        ("bounds", "feldman"): ("poly", "theta"),
        ("deps", "mult"): ("values",),
        ("deps", "pairs"): ("pairs",),
    }
    key = (args.command, getattr(args, "kind", None))
    for name in need.get(key, ()):
        if getattr(args, name) is None:
            raise ParseError(f"--{name} is required for {args.command} {key[1]}")


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def write_atomic(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or Path("."), prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(result: dict, args_out: str | None) -> None:
    text = json.dumps(result, indent=2, ensure_ascii=False) + "\n"
    if args_out:
        write_atomic(args_out, text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    start = time.perf_counter()
    quiet = "--json" in argv
    out_path = None
    prec = None
    try:
        args = build_parser().parse_args(argv)
        quiet, out_path = args.json, args.out
        prec = args.prec if args.prec is not None else default_precision()
        if prec < MIN_PREC:
            raise ParseError(f"--prec must be >= {MIN_PREC}")
        _check_required(args)
        status, payload = HANDLERS[args.command](args, prec)
        code = EXIT_OK if status == "ok" else EXIT_FAIL
    except ParseError as exc:
        status, payload, code = "fail", {"error": type(exc).__name__, "message": str(exc)}, EXIT_PARSE
    except DomainError as exc:
        status, payload, code = "fail", {"error": type(exc).__name__, "message": str(exc)}, EXIT_DOMAIN
    except QEError as exc:
        status, payload, code = "fail", {"error": type(exc).__name__, "message": str(exc)}, EXIT_DOMAIN
    elapsed = (time.perf_counter() - start) * 1000
    result = {
        "command": argv,
        "status": status,
        "payload": payload,
        "timing_ms": round(elapsed, 3),
        "precision_bits": prec,
    }
    if code in (EXIT_OK, EXIT_FAIL):
        _emit(result, out_path)
    else:
        # errors never touch the output file
        sys.stdout.write(json.dumps(result, indent=2, ensure_ascii=False) + "\n")
    if not quiet:
        head = " ".join(argv[:2]) if argv else "qe"
        extra = f": {payload['error']}: {payload['message']}" if "error" in payload else ""
        print(f"{head}: {status} (exit {code}, {elapsed:.1f} ms){extra}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
