"""Command-line front end: JSON in, JSON out.

Exit status 0 on success, 1 on a mathematical refusal or a failed
verification, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import drinfeld as dr
from .formats import (
    FormatError,
    decode_scalar,
    descriptor_from_json,
    encode,
    parameter_array_from_json,
    parameter_array_to_json,
    realization_from_json,
    realization_to_json,
    decode_matrix,
)
from .linalg import LinearAlgebraError
from .poly import RootFindingError
from .scalars import QQ, PrecisionConfig, complex_field
from .tdsystem import (
    ConditionIIError,
    ConstructionError,
    DistinctnessError,
    FitError,
    build_AAstar,
    construct_realization,
    derived_constants,
    parameter_array_of,
    shape_check,
    verify_module_structure,
    verify_td_axioms,
    verify_tridiagonal_relations,
)
from .uqmodule import InfeasibleError, rl_coefficients, standard_module, verify_rl_properties, verify_uq_relations

COMMANDS = ("construct", "verify", "drinfeld", "relations", "shape", "roundtrip")
DEFAULT_MAX_D = {"exact": 6, "complex": 10}


class Refusal(Exception):
    """A mathematical refusal carrying a reason code and certificate."""

    def __init__(self, reason: str, message: str = "", certificate=None):
        super().__init__(message or reason)
        self.reason = reason
        self.message = message or reason
        self.certificate = certificate or {}


class InputError(Exception):
    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason
        self.message = message


@dataclass(frozen=True)
class RunConfig:
    mode: str = "exact"
    precision_bits: int = 128
    zero_tolerance: float | None = None
    max_d: int | None = None
    u: str | None = None
    v: str | None = None
    output: str | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.mode not in DEFAULT_MAX_D:
            raise InputError("bad-config", f"unknown mode {self.mode!r}")
        if self.mode == "complex" and self.precision_bits < 64:
            raise InputError("bad-config", "complex mode needs --precision >= 64")
        if self.jobs < 1:
            raise InputError("bad-config", "--jobs must be positive")

    @property
    def precision(self) -> PrecisionConfig:
        try:
            return PrecisionConfig(self.precision_bits, self.zero_tolerance)
        except ValueError as exc:
            raise InputError("bad-config", str(exc)) from exc

    @property
    def field(self):
        return QQ if self.mode == "exact" else complex_field(self.precision)

    @property
    def d_limit(self) -> int:
        return self.max_d if self.max_d is not None else DEFAULT_MAX_D[self.mode]

    def check_d(self, d: int):
        if d > self.d_limit:
            raise InputError("d-limit-exceeded", f"d = {d} exceeds the limit {self.d_limit} (raise it with --max-d)")

    def uv(self):
        f = self.field
        return (decode_scalar(self.u, f) if self.u is not None else None,
                decode_scalar(self.v, f) if self.v is not None else None)


def _field_for(obj, cfg: RunConfig):
    if isinstance(obj, dict) and obj.get("field") == "complex":
        return complex_field(cfg.precision)
    return cfg.field


# -- commands ----------------------------------------------------------------


def _construct(pa, cfg: RunConfig):
    cfg.check_d(pa.d)
    u, v = cfg.uv()
    return construct_realization(pa, cfg.precision, u=u if u is not None else 1, v=v if v is not None else 1)


def cmd_construct(obj, cfg: RunConfig):
    pa = parameter_array_from_json(obj, cfg.field)
    r = _construct(pa, cfg)
    return 0, realization_to_json(r)


def cmd_verify(obj, cfg: RunConfig):
    if not isinstance(obj, dict):
        raise FormatError("expected an object with A and Astar")
    field = _field_for(obj, cfg)
    A = decode_matrix(obj.get("A"), field)
    As = decode_matrix(obj.get("Astar"), field)
    if A.shape != As.shape or A.rows != A.cols:
        raise FormatError("A and Astar must be square of the same size")
    th = [decode_scalar(x, field) for x in obj["thetas"]] if "thetas" in obj else None
    ts = [decode_scalar(x, field) for x in obj["theta_stars"]] if "theta_stars" in obj else None
    try:
        rep = verify_td_axioms(A, As, th, ts, cfg.precision)
    except ValueError as exc:
        raise InputError("spectra-required", str(exc)) from exc
    out = encode(rep)
    out["undetermined"] = [c.name for c in rep.undetermined]
    return (1 if rep.violations else 0), out


def _descriptor_module(obj, cfg: RunConfig):
    u, v = cfg.uv()
    desc = descriptor_from_json(obj, cfg.field, u, v)
    cfg.check_d(desc.d)
    coeffs = rl_coefficients(desc.params, desc.u, desc.v)
    return desc, standard_module(desc.alphas, desc.q, coeffs)


def cmd_drinfeld(obj, cfg: RunConfig):
    _, m = _descriptor_module(obj, cfg)
    zetas = dr.split_sequence(m)
    sigmas = dr.normalized_split(zetas, m.q)
    P = dr.drinfeld_polynomial(m)
    return 0, {"zetas": encode(zetas), "sigmas": encode(sigmas), "P": encode(P.scalars())}


def cmd_relations(obj, cfg: RunConfig):
    desc, m = _descriptor_module(obj, cfg)
    reports = [verify_uq_relations(m), verify_rl_properties(m)]
    A, As = build_AAstar(m, desc.params)
    reports.append(verify_tridiagonal_relations(A, As, derived_constants(desc.params)))
    reports.append(verify_module_structure(m, A, As, desc.params))
    ok = all(r.ok for r in reports)
    return (0 if ok else 1), {"ok": ok, "reports": [encode(r) for r in reports]}


def cmd_shape(obj, cfg: RunConfig):
    r = realization_from_json(obj, _field_for(obj, cfg))
    rep = shape_check(r)
    return (0 if rep.ok else 1), {"shape": rep.data["shape"], "ok": rep.ok, "report": encode(rep)}


def _roundtrip_one(args):
    obj, cfg = args
    try:
        pa = parameter_array_from_json(obj, cfg.field)
        r = _construct(pa, cfg)
        back = parameter_array_of(r)
        return {"equal": back.close(pa), "input": parameter_array_to_json(pa),
                "output": parameter_array_to_json(back), "shape": list(r.shape)}
    except Exception as exc:  # reported per item
        code, payload = _failure(exc)
        return {"equal": False, "exit": code, **payload}


def cmd_roundtrip(obj, cfg: RunConfig):
    items = obj["arrays"] if isinstance(obj, dict) and "arrays" in obj else obj
    if isinstance(items, dict):
        res = _roundtrip_one((items, cfg))
        if "exit" in res:
            return res.pop("exit"), res
        return (0 if res["equal"] else 1), res
    if not isinstance(items, list):
        raise FormatError("expected a parameter array or a list of them")
    tasks = [(it, cfg) for it in items]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            results = list(ex.map(_roundtrip_one, tasks))
    else:
        results = [_roundtrip_one(t) for t in tasks]
    codes = [r.pop("exit", 0 if r["equal"] else 1) for r in results]
    equal = all(r["equal"] for r in results)
    return max(codes + [0]), {"equal": equal, "results": results}


DISPATCH = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "drinfeld": cmd_drinfeld,
    "relations": cmd_relations,
    "shape": cmd_shape,
    "roundtrip": cmd_roundtrip,
}


def _failure(exc) -> tuple[int, dict]:
    """Map an exception to (exit status, machine-readable payload)."""
    if isinstance(exc, ConditionIIError):
        return 1, {"ok": False, "reason": exc.reason, "certificate": encode(exc.certificate)}
    if isinstance(exc, DistinctnessError):
        return 1, {"ok": False, "reason": "eigenvalues-not-distinct", "message": str(exc),
                   "certificate": {"pair": list(exc.pair)}}
    if isinstance(exc, FitError):
        return 1, {"ok": False, "reason": "not-q-racah", "message": str(exc), "certificate": {}}
    if isinstance(exc, InfeasibleError):
        return 1, {"ok": False, "reason": "infeasible-d", "message": str(exc), "certificate": {}}
    if isinstance(exc, RootFindingError):
        return 1, {"ok": False, "reason": "root-finding-failed", "message": str(exc),
                   "certificate": {"best_residual": str(exc.best_residual)}}
    if isinstance(exc, (ConstructionError, dr.ReconstructionError, dr.ProportionalityError, LinearAlgebraError)):
        return 1, {"ok": False, "reason": "construction-failed", "message": str(exc), "certificate": {}}
    if isinstance(exc, InputError):
        return 2, {"ok": False, "reason": exc.reason, "message": exc.message}
    if isinstance(exc, (FormatError, KeyError, TypeError, ValueError, json.JSONDecodeError)):
        return 2, {"ok": False, "reason": "bad-input", "message": str(exc)}
    raise exc


def dispatch(command: str, obj, cfg: RunConfig) -> tuple[int, dict]:
    """Run one command on parsed JSON input; returns (exit status, report)."""
    if command not in DISPATCH:
        return 2, {"ok": False, "reason": "unknown-command", "message": command}
    try:
        return DISPATCH[command](obj, cfg)
    except Exception as exc:
        return _failure(exc)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tdpairs", description="Construct and verify TD systems of q-Racah type.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", nargs="?", default="-", help="JSON input file (default: standard input)")
    p.add_argument("--mode", choices=("exact", "complex"), default="exact")
    p.add_argument("--precision", type=int, default=128, help="complex backend precision in bits")
    p.add_argument("--tolerance", type=float, default=None, help="relative zero tolerance (complex backend)")
    p.add_argument("--max-d", type=int, default=None, help="override the diameter limit")
    p.add_argument("--u", default=None, help="override u in R = u e0+ + v e1- K1")
    p.add_argument("--v", default=None, help="override v")
    p.add_argument("--output", "-o", default=None, help="write JSON here instead of standard output")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for roundtrip batches")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.mode, args.precision, args.tolerance, args.max_d, args.u, args.v, args.output, args.jobs)
        cfg.precision
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        obj = json.loads(text)
    except InputError as exc:
        code, out = 2, {"ok": False, "reason": exc.reason, "message": exc.message}
    except (OSError, json.JSONDecodeError) as exc:
        code, out = 2, {"ok": False, "reason": "bad-input", "message": str(exc)}
    else:
        code, out = dispatch(args.command, obj, cfg)
    text = json.dumps(out, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
