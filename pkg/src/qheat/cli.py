"""Thin command-line client for the scenario service.

Subcommands mirror the service endpoints (simulate, fit, welch, table1,
spectrometer, validate) plus ``serve``.  By default the config executes
in-process through the same handlers the service uses; pass ``--server``
to POST it to a running instance instead.  Output files land in ``--out``
with one ``.meta.json`` sidecar each (resolved config + content digest).

Exit codes: 0 success, 1 config error, 2 numerical failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import base64
import json
import os
import sys

from pydantic import ValidationError

from .lindblad import DegenerateSteadyStateError, NumericsError
from .model import ConfigError
from .scenarios import RunConfig, ScenarioError, run_scenario, validate_scenario

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2
EXIT_IO = 3

_FAMILIES = {
    "simulate": ("spectrum", "reflection", "power-loss", "budget", "autler", "qp"),
    "fit": ("fit",),
    "welch": ("welch",),
    "table1": ("table1",),
    "spectrometer": ("spectrometer",),
}


def _load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise _IoFailure(str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return RunConfig.model_validate(raw)


class _IoFailure(Exception):
    pass


def _write_outputs(result: dict, out_dir: str) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for name, content in {**result["outputs"], **result["sidecars"]}.items():
        path = os.path.join(out_dir, name)
        mode = "wb" if isinstance(content, bytes) else "w"
        with open(path, mode) as fh:
            fh.write(content)
        written.append(path)
    return written


def _run_remote(server: str, family: str, cfg: RunConfig) -> dict:
    import httpx

    resp = httpx.post(f"{server.rstrip('/')}/v1/{family}", json=json.loads(cfg.model_dump_json(exclude_none=True)), timeout=600.0)
    if resp.status_code == 422:
        raise ConfigError(resp.json().get("detail", "rejected by server"))
    if resp.status_code != 200:
        raise ScenarioError(f"server error {resp.status_code}: {resp.text[:400]}")
    body = resp.json()
    outputs = {}
    for name, entry in body["outputs"].items():
        outputs[name] = base64.b64decode(entry["content"]) if entry["encoding"] == "base64" else entry["content"]
    return {"outputs": outputs, "sidecars": body["sidecars"], "summary": body["summary"]}


def _cmd_run(family: str, args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    if cfg.scenario not in _FAMILIES[family]:
        raise ConfigError(f"scenario {cfg.scenario} does not belong to `{family}`")
    if args.seed is not None:
        cfg = cfg.model_copy(update={"seed": args.seed})
    if args.threads is not None:
        os.environ["QHEAT_THREADS"] = str(args.threads)
    report = validate_scenario(cfg)
    for w in report["warnings"]:
        print(f"warning: {w}", file=sys.stderr)
    if not report["ok"]:
        for e in report["errors"]:
            print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    if args.server:
        result = _run_remote(args.server, family, cfg)
    else:
        result = run_scenario(cfg)
    try:
        written = _write_outputs(result, args.out)
    except OSError as exc:
        raise _IoFailure(str(exc)) from exc
    print(json.dumps(result["summary"], indent=2, sort_keys=True))
    for path in written:
        print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    report = validate_scenario(cfg)
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK if report["ok"] else EXIT_CONFIG


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qheat", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run(name: str, help_: str):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="path to the RunConfig JSON document")
        p.add_argument("--out", default=".", help="output directory (default: current)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--threads", type=int, default=None, help="worker threads for internal sweeps")
        p.add_argument("--server", default=None, help="base URL of a running service (default: in-process)")
        return p

    add_run("simulate", "spectrum / reflection / power-loss / budget / autler / qp scenarios")
    add_run("fit", "lineshape, power-loss, and reflection fits")
    add_run("welch", "Welch PSD estimation from a time series (or a seeded surrogate)")
    add_run("table1", "reconcile fit results into one parameter table")
    add_run("spectrometer", "two-channel noise-spectrometer sweep")

    v = sub.add_parser("validate", help="schema and regime checks only")
    v.add_argument("--config", required=True)

    s = sub.add_parser("serve", help="start the HTTP service")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8080)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "serve":
            return _cmd_serve(args)
        return _cmd_run(args.command, args)
    except (ConfigError, ValidationError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ScenarioError, NumericsError, DegenerateSteadyStateError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (_IoFailure, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
