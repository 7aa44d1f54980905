"""Command-line front end.

Every command prints exactly one JSON document on stdout.  Human-readable
diagnostics go to stderr (``--pretty`` adds a summary there).  Exit codes:
0 success, 2 invalid input, 3 input outside what the solvers can handle.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
import warnings
from fractions import Fraction

import numpy as np

from . import __version__, elim, io, shopm, states
from .errors import CapabilityError, GeoMeasureError, ValidationError
from .tensor_core import SymTensor, frobenius_norm, is_irreducible

SEED_ENV = "GEOMEASURE_SEED"
BUILDERS = ("w", "inverted-w", "ghz", "dicke", "qutrit-ghz")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    return obj


def fraction(text: str) -> float:
    """argparse type: decimal or fraction literal, parsed exactly then rounded once."""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number or fraction: {text!r}")


def fraction_list(text: str) -> list:
    return [fraction(t) for t in text.split(",")]


def positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _read_input(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc
    return raw, io.read_json(raw.decode("utf-8", errors="replace"))


def _default_seed():
    v = os.environ.get(SEED_ENV)
    if v is None:
        return 0
    try:
        return int(v)
    except ValueError:
        raise ValidationError(f"{SEED_ENV} must be an integer, got {v!r}")


# --- commands -------------------------------------------------------------
# Each returns (input digest, config echo, result payload, human summary).


def _build_state(args):
    b = args.builder
    if b == "w":
        return states.w_state()
    if b == "inverted-w":
        return states.inverted_w()
    if b == "ghz":
        return states.ghz(args.m or 3)
    if b == "dicke":
        if args.m is None or args.k is None:
            raise ValidationError("dicke builder needs --m and --k")
        return states.dicke(args.m, args.k)
    abc = args.abc or [1.0, 0.0, 0.0]
    if len(abc) != 3:
        raise ValidationError("--abc needs three comma-separated values")
    return states.general_ghz_qutrit(*abc, m=args.m or 3)


def cmd_gm(args):
    if (args.state is None) == (args.builder is None):
        raise ValidationError("give either a state file or --builder")
    if args.state is not None:
        raw, obj = _read_input(args.state)
        if not io.looks_like_state(obj):
            raise ValidationError("expected a state JSON with 'amplitudes'")
        s = io.load_state(obj)
        digest = _digest(raw)
        source = {"file": args.state}
    else:
        s = _build_state(args)
        source = {"builder": args.builder, "m": args.m, "k": args.k, "abc": args.abc}
        digest = _digest(json.dumps(source, sort_keys=True).encode())
    r = states.geometric_measure(s, method=args.method, restarts=args.restarts, tol=args.tol,
                                 seed=args.seed)
    config = dict(source, method=args.method, restarts=args.restarts, tol=args.tol)
    summary = f"{s.label or 'state'}: G = {r.G:.12g}, E_G = {r.E_G:.12g} via {r.method}"
    return digest, config, r.to_dict(), summary


def _load_sym(path):
    raw, obj = _read_input(path)
    T = io.load_tensor(obj)
    if not isinstance(T, SymTensor):
        raise ValidationError("expected a symmetric tensor with equal dims")
    if not T.is_nonnegative():
        raise ValidationError("tensor has negative entries")
    return _digest(raw), T


def cmd_spectrum(args):
    digest, T = _load_sym(args.tensor)
    if T.dim > 3:
        raise CapabilityError(f"spectrum enumeration handles n <= 3 (got n={T.dim}); use the power command")
    sp = elim.spectrum(T, tol=args.tol)
    payload = sp.to_dict()
    payload["count_bound"] = elim.count_bound(T.order, T.dim)
    lines = [f"{len(sp.pairs)} nonnegative pairs, radius {sp.radius:.12g}"]
    lines += [f"  {p.lam:.12g}  x = {np.array2string(p.x, precision=10)}" for p in sp.pairs]
    return digest, {"tensor": args.tensor, "tol": args.tol}, payload, "\n".join(lines)


def cmd_power(args):
    digest, T = _load_sym(args.tensor)
    alpha = None if args.alpha == "auto" else fraction(args.alpha)
    cfg = shopm.ShopmConfig(alpha=alpha, tol=args.tol, seed=args.seed)
    res = shopm.restart_radius(T, args.restarts, cfg, trace=args.trace)
    payload = {"radius": res.radius, "pair": res.pair.to_dict(), "audit": res.audit}
    config = {"tensor": args.tensor, "restarts": args.restarts, "alpha": args.alpha,
              "tol": args.tol, "trace": args.trace}
    summary = f"radius {res.radius:.12g} after {len(res.audit['rounds'])} rounds"
    if res.audit["flags"]:
        summary += "; flags: " + ", ".join(res.audit["flags"])
    return digest, config, payload, summary


def _check(name, ok, detail=""):
    return {"check": name, "ok": bool(ok), "detail": detail}


def cmd_validate(args):
    raw, obj = _read_input(args.file)
    checks = []
    if io.looks_like_state(obj):
        kind = "state"
        dims, amp, _ = io.load_state_array(obj)
        norm2 = float(np.sum(amp ** 2))
        checks.append(_check("nonnegative", np.all(amp >= 0)))
        checks.append(_check("normalized", abs(norm2 - 1.0) <= states.NORM_TOL,
                             f"sum of squares {norm2:.15g}"))
        checks.append(_check("parties", len(dims) >= 3, f"{len(dims)} parties"))
        a = amp
    else:
        kind = "tensor"
        a = np.asarray(io.load_tensor(obj).entries)
        checks.append(_check("nonnegative", np.all(a >= 0)))
    cubical = len(set(a.shape)) == 1
    sym = cubical and all(np.max(np.abs(a - np.swapaxes(a, 0, j))) <= 1e-12 * max(1.0, np.max(np.abs(a)))
                          for j in range(1, a.ndim))
    checks.append(_check("symmetric", sym))
    irreducible = None
    if sym and a.shape[0] <= 20:
        irreducible = is_irreducible(SymTensor(a))
    payload = {
        "kind": kind,
        "dims": list(a.shape),
        "checks": checks,
        "irreducible": irreducible,
        "structure": None if irreducible is None else ("irreducible" if irreducible else "reducible"),
        "frobenius_norm": frobenius_norm(a),
    }
    failed = [c["check"] for c in checks if not c["ok"] and c["check"] != "symmetric"]
    summary = f"{kind} {a.shape}: " + ", ".join(
        f"{c['check']}={'ok' if c['ok'] else 'FAIL'}" for c in checks)
    if irreducible is not None:
        summary += f", {payload['structure']}"
    if failed:
        raise _ValidateFailure(digest=_digest(raw), payload=payload, summary=summary,
                               message="failed checks: " + ", ".join(failed))
    return _digest(raw), {"file": args.file}, payload, summary


class _ValidateFailure(ValidationError):
    def __init__(self, digest, payload, summary, message):
        super().__init__(message)
        self.digest, self.payload, self.summary = digest, payload, summary


# --- plumbing -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="geomeasure",
                                 description="Geometric measure of entanglement for nonnegative states.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human summary on stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gm", parents=[common], help="geometric measure of a state")
    p.add_argument("state", nargs="?", help="state JSON file")
    p.add_argument("--builder", choices=BUILDERS)
    p.add_argument("--m", type=positive_int, help="number of parties (ghz, dicke, qutrit-ghz)")
    p.add_argument("--k", type=int, help="number of zeros (dicke)")
    p.add_argument("--abc", type=fraction_list, help="qutrit-ghz coefficients, e.g. 1/3,2/3,2/3")
    p.add_argument("--method", choices=states.METHODS, default="auto")
    p.add_argument("--restarts", type=positive_int, default=shopm.DEFAULT_RESTARTS)
    p.add_argument("--tol", type=fraction, default=1e-11)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_gm)

    p = sub.add_parser("spectrum", parents=[common], help="all nonnegative Z-eigenpairs (n <= 3)")
    p.add_argument("tensor")
    p.add_argument("--tol", type=fraction, default=elim.ADMIT_TOL, help="relative residual for admission")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("power", parents=[common], help="Z-spectral radius by restarted power iteration")
    p.add_argument("tensor")
    p.add_argument("--restarts", type=positive_int, default=shopm.DEFAULT_RESTARTS)
    p.add_argument("--alpha", default="auto", help="shift: 'auto' or a positive number")
    p.add_argument("--tol", type=fraction, default=1e-11)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trace", action="store_true", help="include every per-iteration lambda")
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("validate", parents=[common], help="structural checks on a tensor or state")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_validate)
    return ap


def _emit(report, out):
    out.write(json.dumps(_jsonable(report), sort_keys=True) + "\n")
    out.flush()


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    report = {"command": args.command, "version": __version__}
    t0 = time.perf_counter()
    code = 0
    summary = None
    try:
        if args.seed is None:
            args.seed = _default_seed()
        report["seed"] = args.seed
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            digest, config, payload, summary = args.func(args)
        report.update(input_digest=digest, config=config, result=payload)
        if caught:
            report["warnings"] = [str(w.message) for w in caught]
            for w in caught:
                print(f"warning: {w.message}", file=stderr)
    except _ValidateFailure as exc:
        code = exc.exit_code
        summary = exc.summary
        report.update(input_digest=exc.digest, config={"file": args.file}, result=exc.payload,
                      error={"type": "ValidationError", "message": str(exc)})
    except GeoMeasureError as exc:
        code = exc.exit_code
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
    report["wall_time"] = time.perf_counter() - t0
    report["exit_code"] = code
    _emit(report, stdout)
    if "error" in report:
        print(f"error: {report['error']['message']}", file=stderr)
    if args.pretty and summary:
        print(summary, file=stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
