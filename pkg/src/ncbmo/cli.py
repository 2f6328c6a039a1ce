"""Command line interface.

Subcommands: verify, bench {lipschitz,logn,bmo,vector}, dilation,
show-config, serve. Computation runs in process unless --server points at a
running service; either way the CSV bytes are produced by the same code.
Exit codes: 0 all assertions pass, 1 assertion failure, 2 usage or IO error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .harness.config import ConfigError, ExperimentConfig, config_from_doc, load_config
from .harness.reports import write_json
from .service.client import HttpClient, LocalClient, ServiceError

EXPERIMENT_NAMES = ("lipschitz", "logn", "bmo", "vector")
CAP_NAMES = ("p_ratio", "logn", "bmo", "vector")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="JSON config file; fields override the defaults")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--trials", type=int, help="override the trial count")
    common.add_argument("--out", metavar="DIR",
                        help="report directory (or set NCBMO_OUT); "
                             "default ncbmo-out")
    common.add_argument("--server", metavar="URL",
                        help="run against this service instead of in process")
    for name in CAP_NAMES:
        common.add_argument(f"--cap-{name.replace('_', '-')}", type=float,
                            dest=f"cap_{name}", metavar="C",
                            help=f"override the {name} assertion cap")

    parser = argparse.ArgumentParser(
        prog="ncbmo",
        description="Spectral multiplier flows: property checks and "
                    "empirical-constant experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common],
                   help="run the per-module property checks")
    bench = sub.add_parser("bench", parents=[common],
                           help="run one experiment and write its reports")
    bench.add_argument("experiment", choices=EXPERIMENT_NAMES)
    sub.add_parser("dilation", parents=[common],
                   help="build a dilation tower and certify it")
    sub.add_parser("show-config", parents=[common],
                   help="print the effective configuration")
    serve = sub.add_parser("serve", parents=[common],
                           help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def effective_config(args) -> ExperimentConfig:
    base = ExperimentConfig()
    if args.config:
        base = load_config(args.config, base)
    over = {}
    if args.seed is not None:
        over["seed"] = args.seed
    if args.trials is not None:
        over["trials"] = args.trials
    caps = {name: getattr(args, f"cap_{name}") for name in CAP_NAMES
            if getattr(args, f"cap_{name}") is not None}
    if caps:
        over["caps"] = {**base.caps, **caps}
    return config_from_doc(over, base) if over else base


def out_dir(args) -> str:
    return args.out or os.environ.get("NCBMO_OUT") or "ncbmo-out"


def _client(args):
    return HttpClient(args.server) if args.server else LocalClient()


def _dump_failures(rows, stream) -> int:
    failing = [r for r in rows if r["pass"] == "fail"]
    for r in failing:
        print(f"FAIL {r['experiment']} n={r['n']} p={r['p']} "
              f"trial={r['trial']} normalized={r['normalized_constant']} "
              f"bound={r['bound']}", file=stream)
    return len(failing)


def _write_result(args, stem: str, doc: dict) -> bool:
    directory = out_dir(args)
    os.makedirs(directory, exist_ok=True)
    csv_path = os.path.join(directory, f"{stem}.csv")
    with open(csv_path, "w", newline="") as fh:
        fh.write(doc["csv"])
    write_json(os.path.join(directory, f"{stem}_summary.json"), doc["summary"])
    n_fail = _dump_failures(doc["rows"], sys.stderr)
    status = "pass" if doc["ok"] else f"FAIL ({n_fail} rows)"
    print(f"{doc['name']}: {len(doc['rows'])} rows, {status}")
    print(f"wrote {csv_path}")
    return bool(doc["ok"])


def cmd_verify(args) -> int:
    doc = _client(args).verify(effective_config(args).seed)
    for check in doc["checks"]:
        mark = "ok  " if check["ok"] else "FAIL"
        print(f"{mark} {check['name']}: defect {check['defect']:.3e} "
              f"(tol {check['tol']:.1e})")
    directory = out_dir(args)
    os.makedirs(directory, exist_ok=True)
    write_json(os.path.join(directory, "verify.json"), doc)
    print(("all checks passed" if doc["ok"] else "checks FAILED"))
    return 0 if doc["ok"] else 1


def cmd_bench(args) -> int:
    config = effective_config(args)
    doc = _client(args).bench(args.experiment, config.to_doc())
    return 0 if _write_result(args, args.experiment, doc) else 1


def cmd_dilation(args) -> int:
    config = effective_config(args)
    doc = _client(args).dilation(config.to_doc())
    return 0 if _write_result(args, "dilation", doc) else 1


def cmd_show_config(args) -> int:
    print(json.dumps(effective_config(args).to_doc(), indent=2,
                     sort_keys=True))
    return 0


def cmd_serve(args) -> int:
    try:
        import uvicorn
    except ImportError:
        print("serve requires uvicorn (install the 'server' extra)",
              file=sys.stderr)
        return 2
    effective_config(args)  # fail fast on a bad --config before binding
    from .service.app import app
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


COMMANDS = {
    "verify": cmd_verify,
    "bench": cmd_bench,
    "dilation": cmd_dilation,
    "show-config": cmd_show_config,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, ServiceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
