"""Command-line front end: a thin client of the session API.

Scripts run against an in-process instance of the service by default, or
against a remote one with ``--server``.  One command per line; output is
human text or structured JSON (one object per command).

Exit codes: 0 when every command succeeded, 1 after a command error,
2 after a parse error (parse errors take precedence).
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from typing import Optional

import httpx

from .oracle import DEFAULT_PRECISION


def _make_client(server: Optional[str]) -> httpx.AsyncClient:
    if server:
        return httpx.AsyncClient(base_url=server.rstrip("/"), timeout=300.0)
    from .service import create_app

    transport = httpx.ASGITransport(app=create_app())
    return httpx.AsyncClient(
        transport=transport, base_url="http://henselize.local", timeout=300.0
    )


async def _run(
    lines, fmt: str, precision: int, server: Optional[str], out
) -> int:
    saw_parse_error = False
    saw_command_error = False
    async with _make_client(server) as client:
        r = await client.post("/sessions", json={"precision": precision})
        r.raise_for_status()
        sid = r.json()["session_id"]
        try:
            for raw in lines:
                line = raw.rstrip("\n")
                if not line.strip():
                    continue
                r = await client.post(
                    f"/sessions/{sid}/commands", json={"command": line}
                )
                r.raise_for_status()
                payload = r.json()
                if fmt == "structured":
                    record = {"command": line, "ok": payload["ok"]}
                    if payload.get("data") is not None:
                        record["data"] = payload["data"]
                    if payload.get("error"):
                        record["error"] = payload["error"]
                        record["error_kind"] = payload["error_kind"]
                    print(json.dumps(record, ensure_ascii=False), file=out)
                else:
                    print(f"> {line}", file=out)
                    if payload["ok"]:
                        if payload["output"]:
                            print(payload["output"], file=out)
                    else:
                        print(f"error: {payload['error']}", file=out)
                if not payload["ok"]:
                    if payload.get("error_kind") == "parse":
                        saw_parse_error = True
                    else:
                        saw_command_error = True
        finally:
            await client.delete(f"/sessions/{sid}")
    if saw_parse_error:
        return 2
    if saw_command_error:
        return 1
    return 0


def run_script(
    lines,
    *,
    fmt: str = "text",
    precision: int = DEFAULT_PRECISION,
    server: Optional[str] = None,
    out=None,
) -> int:
    out = out if out is not None else sys.stdout
    return asyncio.run(_run(lines, fmt, precision, server, out))


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = argparse.ArgumentParser(
        prog="henselize",
        description="exact computations in the henselization of (Q, v_p)",
    )
    sub = parser.add_subparsers(dest="mode")

    run = sub.add_parser("run", help="execute a command script (default)")
    run.add_argument("--script", help="script file; stdin when omitted")
    run.add_argument(
        "--format", choices=("text", "structured"), default="text", dest="fmt"
    )
    run.add_argument(
        "--precision", type=int, default=DEFAULT_PRECISION, help="oracle precision"
    )
    run.add_argument("--server", help="URL of a running service; in-process otherwise")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    if not argv or argv[0] not in ("run", "serve", "-h", "--help"):
        argv.insert(0, "run")
    args = parser.parse_args(argv)

    if args.mode == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    if args.script:
        with open(args.script, encoding="utf-8") as fh:
            lines = fh.readlines()
    else:
        lines = sys.stdin.readlines()
    return run_script(
        lines, fmt=args.fmt, precision=args.precision, server=args.server
    )


if __name__ == "__main__":
    sys.exit(main())
