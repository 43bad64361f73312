"""Command-line front end: exact verification reports as JSON.

Commands: verify, classify coproduct, classify rmatrix, coalgebra check,
fusion, preset dump, pipeline.  Exit code 0 means everything requested was
certified; all numeric inputs are exact strings like '1/2', 'i', 'zeta^3'.
"""

from __future__ import annotations

import argparse
import json
import sys

from .cyclo import parse_cyc
from .fusion import expr_to_json, parse_expr, UnsupportedPair
from .reports import (
    ConfigError,
    PipelineConfig,
    cached_presets,
    classify_coproduct,
    classify_rmatrix,
    coalgebra_check,
    run_pipeline,
    verify_preset,
)


def _emit(data: dict, out: str | None) -> None:
    text = json.dumps(data, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="quasihopf",
        description="Exact quasi-Hopf verification for the quantum group at a fourth root of unity",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report to a file")

    p_verify = sub.add_parser(
        "verify", help="run all axiom checks on a preset", parents=[common]
    )
    p_verify.add_argument("--preset", choices=["fgr2", "cartan"], default="fgr2")
    p_verify.add_argument("--d", default="i", help="exact scalar, e.g. i, -i, 1/2")
    p_verify.add_argument("--eps", type=int, choices=[1, -1], default=1)
    p_verify.add_argument("--beta", type=int, choices=[1, 3, 5, 7], default=1)
    p_verify.add_argument("--full-witnesses", action="store_true")

    p_classify = sub.add_parser("classify", help="classification sweeps")
    csub = p_classify.add_subparsers(dest="what", required=True)
    p_cop = csub.add_parser("coproduct", help="coproduct existence conditions", parents=[common])
    p_cop.add_argument("--grid", default="default")
    p_cop.add_argument("--beta", type=int, choices=[1, 3, 5, 7], default=1)
    p_cop.add_argument("--seed", type=int, default=11)
    p_rmx = csub.add_parser("rmatrix", help="R-matrix existence over d values", parents=[common])
    p_rmx.add_argument("--d", help="single exact d value; omit for the default grid")
    p_rmx.add_argument("--beta", type=int, choices=[1, 3, 5, 7], default=1)

    p_co = sub.add_parser("coalgebra", help="graded coalgebra family checks")
    cosub = p_co.add_subparsers(dest="what", required=True)
    p_cochk = cosub.add_parser("check", parents=[common])
    p_cochk.add_argument("--c", required=True, help="four exact values: 1,c1,c2,c3")
    p_cochk.add_argument("--eps", required=True, help="fourth root of unity")
    p_cochk.add_argument("--side", choices=["lower", "upper"], default="lower")
    p_cochk.add_argument("--beta", type=int, choices=[1, 3, 5, 7], default=1)

    p_fusion = sub.add_parser("fusion", help="evaluate a fusion expression", parents=[common])
    p_fusion.add_argument("--p", type=int, required=True)
    p_fusion.add_argument("expression", help="e.g. 'Fbar[1,1] * F[1,1]'")
    p_fusion.add_argument("--json", action="store_true", dest="as_json")

    p_dump = sub.add_parser("preset", help="preset utilities")
    dsub = p_dump.add_subparsers(dest="what", required=True)
    p_dd = dsub.add_parser("dump", help="emit the algebra JSON schema", parents=[common])
    p_dd.add_argument("--name", choices=["u", "cartan"], required=True)
    p_dd.add_argument("--beta", type=int, choices=[1, 3, 5, 7], default=1)

    p_pipe = sub.add_parser("pipeline", help="full reproduction pipeline", parents=[common])
    p_pipe.add_argument("--config", help="JSON config file")
    p_pipe.add_argument("--seed", type=int)
    p_pipe.add_argument("--beta", type=int, choices=[1, 3, 5, 7])
    p_pipe.add_argument("--d")
    p_pipe.add_argument("--inject-fault", action="store_true")

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except (ValueError, UnsupportedPair) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    if args.command == "verify":
        report = verify_preset(
            args.preset,
            args.beta,
            parse_cyc(args.d),
            args.eps,
            full=args.full_witnesses,
        )
        _emit(report.to_json(), args.out)
        return 0 if report.ok else 1

    if args.command == "classify" and args.what == "coproduct":
        if args.grid != "default":
            raise ConfigError(f"unknown grid {args.grid!r} (only 'default')")
        data = classify_coproduct(args.beta, args.seed)
        _emit(data, args.out)
        return 0 if data["all_verdicts_match"] else 1

    if args.command == "classify" and args.what == "rmatrix":
        values = [args.d] if args.d else None
        data = classify_rmatrix(values, args.beta)
        _emit(data, args.out)
        return 0

    if args.command == "coalgebra" and args.what == "check":
        data = coalgebra_check(args.c.split(","), args.eps, args.side, args.beta)
        _emit(data, args.out)
        return 0 if data["ok"] else 1

    if args.command == "fusion":
        expr = parse_expr(args.expression, args.p)
        if args.as_json:
            _emit({"p": args.p, "terms": expr_to_json(expr)}, args.out)
        else:
            out_text = str(expr)
            if args.out:
                with open(args.out, "w") as fh:
                    fh.write(out_text + "\n")
            else:
                print(out_text)
        return 0

    if args.command == "preset" and args.what == "dump":
        u, cartan = cached_presets(args.beta)
        alg = u.algebra if args.name == "u" else cartan.algebra
        _emit(alg.to_json(), args.out)
        return 0

    if args.command == "pipeline":
        cfg = PipelineConfig()
        if args.config:
            with open(args.config) as fh:
                cfg = PipelineConfig.from_json(json.load(fh))
        if args.seed is not None:
            cfg.seed = args.seed
        if args.beta is not None:
            cfg.beta_exponent = args.beta
        if args.d is not None:
            cfg.d = args.d
        if args.inject_fault:
            cfg.inject_fault = True
        data = run_pipeline(cfg)
        _emit(data, args.out)
        return 0 if data["certified"] else 1

    raise ConfigError("unhandled command")


if __name__ == "__main__":
    sys.exit(main())
