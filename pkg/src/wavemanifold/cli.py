"""Command-line surface: classify states, solve Riemann problems, run the
invariant suite, export surfaces and curves.

Exit codes: 0 ok, 2 invalid input, 3 elliptic data, 4 no intersection,
5 incompatible sequence.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import exportio, validate
from .manifold import Z_MAX
from .curves import ODE_STEP
from .model import (
    EllipticState,
    IncompatibleSequence,
    InvalidParams,
    ModelError,
    ModelParams,
    NoIntersection,
    RegionClass,
    TangentState,
    classify_state,
    eigen,
    params_from_dict,
)
from .riemann import lift_state, solve
from .waves import forward_wave_curve, backward_wave_sequence, saturate_wave_curve

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_ELLIPTIC = 3
EXIT_NO_INTERSECTION = 4
EXIT_INCOMPATIBLE = 5

_RUN_KEYS = {"z_max", "ode_step", "seed", "output_dir", "tolerances"}


@dataclass
class RunConfig:
    params: ModelParams
    z_max: float = Z_MAX
    ode_step: float = ODE_STEP
    seed: int = 0
    output_dir: str | None = None
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.z_max > 0 or not self.ode_step > 0:
            raise InvalidParams("z_max and ode_step must be positive")
        for name, value in self.tolerances.items():
            if not float(value) > 0:
                raise InvalidParams(f"tolerance {name!r} must be positive")


def _build_config(args) -> RunConfig:
    raw_run = {}
    if args.config:
        with open(args.config) as fh:
            text = fh.read()
        try:
            raw = json.loads(text)
        except json.JSONDecodeError:
            raw = {}
            for line in text.splitlines():
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise InvalidParams(f"{args.config}: expected key=value, got {line!r}")
                k, v = line.split("=", 1)
                raw[k.strip()] = v.strip()
        raw_run = {k: raw.pop(k) for k in list(raw) if k in _RUN_KEYS}
        params = params_from_dict(
            {k: float(v) for k, v in raw.items()}, source=args.config
        )
    else:
        params = ModelParams()
    if args.params:
        base = {
            "a1": params.a1,
            "a2": params.a2,
            "a3": params.a3,
            "a4": params.a4,
            "b1": params.b1,
        }
        for item in args.params:
            if "=" not in item:
                raise InvalidParams(f"--params expects k=v, got {item!r}")
            k, v = item.split("=", 1)
            base[k.strip()] = float(v)
        params = params_from_dict(base, source="--params")
    return RunConfig(
        params=params,
        z_max=float(raw_run.get("z_max", Z_MAX)),
        ode_step=float(raw_run.get("ode_step", ODE_STEP)),
        seed=args.seed if args.seed is not None else int(raw_run.get("seed", 0)),
        output_dir=args.out or raw_run.get("output_dir"),
        tolerances=raw_run.get("tolerances", {}) if isinstance(raw_run.get("tolerances", {}), dict) else {},
    )


def _build_params(args) -> ModelParams:
    return _build_config(args).params


def _emit(obj, args):
    text = json.dumps(validate._round12(obj), indent=1, sort_keys=True) + "\n"
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, f"{args.command}.json")
        with open(path, "w") as fh:
            fh.write(text)
        print(path)
    else:
        sys.stdout.write(text)


def cmd_classify(args) -> int:
    params = _build_params(args)
    w = (args.u, args.v)
    cls = classify_state(w, params)
    e = eigen(w, params)
    report = {
        "state": [args.u, args.v],
        "class": cls.value,
        "alpha1": e.alpha1,
        "alpha2": e.alpha2,
    }
    if e.is_real:
        report["lambda_s"] = e.lambda_s
        report["lambda_f"] = e.lambda_f
    if cls is RegionClass.HYPERBOLIC:
        lift = lift_state(w, params)
        report["lift_slow"] = [lift.us.z, lift.us.t, 0.0]
        report["lift_fast"] = [lift.uf.z, lift.uf.t, 0.0]
    _emit(report, args)
    return EXIT_OK


def cmd_solve(args) -> int:
    params = _build_params(args)
    sol = solve((args.uL, args.vL), (args.uR, args.vR), params)
    _emit(sol.as_dict(), args)
    out_dir = args.out or "."
    if args.format == "svg":
        os.makedirs(out_dir, exist_ok=True)
        print(exportio.solution_svg(sol, os.path.join(out_dir, "solution.svg")))
    elif args.format == "csv":
        os.makedirs(out_dir, exist_ok=True)
        rows = []
        for w in sol.waves:
            rows.append(
                (
                    w.kind,
                    w.from_state.u,
                    w.from_state.v,
                    w.to_state.u,
                    w.to_state.v,
                    w.speed_lo,
                    w.speed_hi,
                )
            )
        path = os.path.join(out_dir, "solution.csv")
        with open(path, "w") as fh:
            fh.write("type,u_from,v_from,u_to,v_to,speed_lo,speed_hi\n")
            for row in rows:
                fh.write(",".join(str(x) if isinstance(x, str) else exportio.fmt(x) for x in row) + "\n")
        print(path)
    if not sol.compatible:
        return EXIT_INCOMPATIBLE
    return EXIT_OK


def cmd_validate(args) -> int:
    cfg = _build_config(args)
    report = validate.run_suite(seed=cfg.seed, n=args.n, params=cfg.params)
    payload = validate.report_bytes(report)
    if cfg.output_dir:
        os.makedirs(cfg.output_dir, exist_ok=True)
        path = os.path.join(cfg.output_dir, "validate.json")
        with open(path, "wb") as fh:
            fh.write(payload)
        print(path)
    else:
        sys.stdout.buffer.write(payload)
    return EXIT_OK if report["all_pass"] else EXIT_INVALID


def cmd_export(args) -> int:
    params = _build_params(args)
    out = args.out or "export"
    paths = []
    if args.which in ("characteristic", "son", "sonp", "scc"):
        paths = exportio.export_surface(args.which, out, params)
    elif args.which in ("inflection", "hysteresis", "ellipse", "double_sonic", "coincidence"):
        paths = exportio.export_locus(args.which, out, params)
    elif args.which in ("wavecurve", "saturated"):
        if args.uv is None:
            raise InvalidParams(f"--uv u,v is required for {args.which}")
        u, v = (float(x) for x in args.uv.split(","))
        lift = lift_state((u, v), params)
        if args.family == 2:
            wc = backward_wave_sequence(lift.uf, params)
        else:
            wc = forward_wave_curve(lift.us, params)
        if args.which == "wavecurve":
            paths = exportio.export_wave_curve(wc, out, params)
        else:
            sats = saturate_wave_curve(wc, params, thin=8)
            paths = exportio.export_saturated(sats, out, params)
    else:
        raise InvalidParams(f"unknown export target {args.which!r}")
    for p in paths:
        print(p)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wavemanifold",
        description="Wave-manifold Riemann solver for the symmetric quadratic-flux system",
    )
    ap.add_argument("--config", help="JSON or key=value parameter file")
    ap.add_argument("--params", action="append", help="override, e.g. --params b1=8")
    ap.add_argument("--out", help="output directory")
    ap.add_argument("--format", choices=["json", "csv", "svg"], default="json")
    ap.add_argument("--seed", type=int, default=None)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a state and report its lifts")
    p.add_argument("u", type=float)
    p.add_argument("v", type=float)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("solve", help="solve a Riemann problem")
    p.add_argument("uL", type=float)
    p.add_argument("vL", type=float)
    p.add_argument("uR", type=float)
    p.add_argument("vR", type=float)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("validate", help="run the invariant suite")
    p.add_argument("--n", type=int, default=200)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("export", help="export surfaces, loci, or wave structures")
    p.add_argument(
        "which",
        choices=[
            "characteristic",
            "son",
            "sonp",
            "scc",
            "inflection",
            "hysteresis",
            "ellipse",
            "double_sonic",
            "coincidence",
            "wavecurve",
            "saturated",
        ],
    )
    p.add_argument("--uv", help="base state u,v for wavecurve/saturated")
    p.add_argument("--family", type=int, choices=[1, 2], default=1)
    p.set_defaults(fn=cmd_export)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (EllipticState, TangentState) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ELLIPTIC
    except NoIntersection as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_INTERSECTION
    except IncompatibleSequence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCOMPATIBLE
    except (InvalidParams, ModelError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
