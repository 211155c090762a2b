"""Command-line client.

Each subcommand builds a service request, runs it in-process (or against
``--server URL``) and prints the response. Exit codes: 0 success,
1 negative analysis result, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from . import service
from .service import EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, OPERATIONS, UsageError


def corpus_path(name: str) -> Path:
    return Path(str(resources.files("hgv") / "corpus" / name))


def read_source(path: str) -> str:
    """Read a program; a missing ``examples/NAME`` falls back to the
    bundled corpus file of the same name."""
    p = Path(path)
    if not p.exists():
        alt = corpus_path(p.name)
        if alt.exists():
            p = alt
        else:
            raise UsageError(f"no such file: {path}")
    return p.read_text(encoding="utf-8")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mix", action="store_true", default=argparse.SUPPRESS, help="use the Mix rules")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print JSON")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for every random choice")
    common.add_argument("--server", default=argparse.SUPPRESS, help="send requests to a running service")

    ap = argparse.ArgumentParser(prog="hgv", description="Hypersequent GV workbench", parents=[common])
    sub = ap.add_subparsers(dest="command", required=True)

    def cmd(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    p = cmd("check", "type-check a term or configuration")
    p.add_argument("file")

    p = cmd("check-config", "check a configuration under a hyper-environment")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--env", help="hyper-environment, e.g. 'x:!1.end! | y:?1.end?'")
    g.add_argument("--gv", help="GV environment, e.g. 'lock(x, y):!1.end!, p:1'")

    p = cmd("run", "reduce a program to normal form")
    p.add_argument("file")
    p.add_argument("--det", action="store_true", help="least-redex policy (default unless --seed)")
    p.add_argument("--fuel", type=int)
    p.add_argument("--trace", metavar="OUT", help="write the JSON trace to OUT")

    p = cmd("aps", "abstract process structure of a configuration")
    p.add_argument("file")
    p.add_argument("--dot", metavar="OUT", help="write the graph in DOT to OUT")

    p = cmd("tcf", "tree canonical form")
    p.add_argument("file")

    p = cmd("fg", "fine-grain translation")
    p.add_argument("file")

    p = cmd("translate", "translate to an HCP process")
    p.add_argument("file")
    p.add_argument("-o", "--output", metavar="OUT", help="write the process to OUT")
    p.add_argument("-r", default="r", help="name of the output endpoint")

    p = cmd("hcp-lts", "labelled transition system of an HCP process")
    p.add_argument("file")
    p.add_argument("--dot", metavar="OUT")
    p.add_argument("--cap", type=int, default=service.H.DEFAULT_CAP)

    p = cmd("bisim", "bisimilarity of two HCP processes")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--mode", choices=("strong", "weak"), default="weak")
    p.add_argument("--internal", default="α,β", help="comma-separated internal labels (α, β)")
    p.add_argument("--cap", type=int, default=service.H.DEFAULT_CAP)

    p = cmd("correspond", "operational correspondence check")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=service.H.DEFAULT_CAP)
    p.add_argument("--report", metavar="OUT", help="write the JSON report to OUT")
    p.add_argument("--reachable", action="store_true", help="check every reachable configuration")

    p = cmd("progress", "classify a configuration for progress")
    p.add_argument("file")
    p.add_argument("--env")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return ap


def _request(args) -> tuple[str, dict]:
    mix = getattr(args, "mix", False)
    seed = getattr(args, "seed", None)
    c = args.command
    if c == "check":
        return c, {"source": read_source(args.file), "mix": mix}
    if c == "check-config":
        return c, {"source": read_source(args.file), "mix": mix, "env": args.env, "gv": args.gv}
    if c == "run":
        policy = "random" if seed is not None and not args.det else "det"
        return c, {"source": read_source(args.file), "mix": mix, "policy": policy, "seed": seed, "fuel": args.fuel}
    if c in ("aps", "tcf", "fg"):
        return c, {"source": read_source(args.file), "mix": mix}
    if c == "translate":
        return c, {"source": read_source(args.file), "mix": mix, "r": args.r}
    if c == "hcp-lts":
        return c, {"process": read_source(args.file), "cap": args.cap}
    if c == "bisim":
        internal = [x.strip() for x in args.internal.split(",") if x.strip()]
        bad = [x for x in internal if x not in service._INTERNAL]
        if bad:
            raise UsageError(f"unknown internal label(s): {', '.join(bad)}")
        return c, {
            "left": read_source(args.left),
            "right": read_source(args.right),
            "mode": args.mode,
            "internal": internal,
            "cap": args.cap,
        }
    if c == "correspond":
        return c, {"source": read_source(args.file), "mix": mix, "budget": args.budget, "reachable": args.reachable}
    if c == "progress":
        return c, {"source": read_source(args.file), "mix": mix, "env": args.env}
    raise UsageError(f"unknown command {c}")


def _call(op: str, payload: dict, server: Optional[str]) -> service.Response:
    if server is None:
        return service.dispatch(op, payload)
    import httpx

    r = httpx.post(f"{server.rstrip('/')}/{op}", json=payload, timeout=None)
    if r.status_code in (400, 422):
        raise UsageError(str(r.json().get("detail")))
    r.raise_for_status()
    return OPERATIONS[op][1].model_validate(r.json())


def _write(path: Optional[str], text: str) -> None:
    if path:
        Path(path).write_text(text + "\n", encoding="utf-8")


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.command == "serve":
        import uvicorn

        uvicorn.run(service.app, host=args.host, port=args.port)
        return EXIT_OK
    as_json = getattr(args, "json", False)
    try:
        op, payload = _request(args)
        resp = _call(op, payload, getattr(args, "server", None))
    except UsageError as e:
        if as_json:
            print(json.dumps({"ok": False, "exit_code": EXIT_USAGE, "error": str(e)}))
        else:
            print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if op == "run" and resp.trace is not None and args.trace:
        _write(args.trace, resp.trace.model_dump_json(indent=2))
    if op == "aps":
        _write(args.dot, resp.dot)
    if op == "translate" and resp.process is not None:
        _write(args.output, resp.process)
    if op == "hcp-lts":
        _write(args.dot, resp.dot)
    if op == "correspond" and resp.report is not None and args.report:
        _write(args.report, resp.report.model_dump_json(indent=2))

    if as_json:
        print(resp.model_dump_json(indent=2))
    else:
        out = sys.stdout if resp.exit_code != EXIT_NEGATIVE or resp.text else sys.stderr
        print(resp.text if resp.text else (resp.error or ""), file=out)
    return resp.exit_code if resp.exit_code in (EXIT_OK, EXIT_NEGATIVE) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
