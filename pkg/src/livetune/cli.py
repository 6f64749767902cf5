"""The ``tune`` command: the human-facing client of the control plane.

Stateless one-shot process. Exit codes: 0 ok, 1 usage error, 2 unknown tag,
3 type mismatch, 4 connection failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import client
from .directory import PORT_ENV_VAR
from .protocol import ProtocolError, WireResponse, encode_response

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNKNOWN_TAG = 2
EXIT_TYPE_MISMATCH = 3
EXIT_CONNECTION = 4

_ERROR_EXITS = {
    "unknown_tag": EXIT_UNKNOWN_TAG,
    "type_mismatch": EXIT_TYPE_MISMATCH,
    "invalid_value": EXIT_TYPE_MISMATCH,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tune",
        description="Read, change and list live variables in a running process.",
    )
    parser.add_argument(
        "--port",
        type=int,
        default=None,
        help=f"directory port (defaults to ${PORT_ENV_VAR})",
    )
    parser.add_argument(
        "--json",
        action="store_true",
        help="emit the raw wire response instead of a human-readable report",
    )
    parser.add_argument("mode", choices=["set", "get", "list", "trigger"])
    parser.add_argument("tag", nargs="?")
    parser.add_argument("value", nargs="?")
    return parser


def _fail_usage(parser: argparse.ArgumentParser, message: str) -> int:
    print(f"tune: {message}", file=sys.stderr)
    parser.print_usage(sys.stderr)
    return EXIT_USAGE


def _exit_for(resp: WireResponse) -> int:
    if resp.ok:
        return EXIT_OK
    return _ERROR_EXITS.get(resp.error, EXIT_USAGE)


def _print_response(resp: WireResponse, as_json: bool, human: str | None = None) -> None:
    if as_json:
        sys.stdout.write(encode_response(resp))
    elif resp.ok:
        if human is not None:
            print(human)
    else:
        print(f"error: {resp.error}", file=sys.stderr)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    port = args.port
    if port is None:
        env_port = os.environ.get(PORT_ENV_VAR, "")
        if not env_port.isdigit():
            return _fail_usage(parser, f"no --port given and ${PORT_ENV_VAR} unset")
        port = int(env_port)

    if args.mode == "set" and (args.tag is None or args.value is None):
        return _fail_usage(parser, "set requires a tag and a value")
    if args.mode in ("get", "trigger") and args.tag is None:
        return _fail_usage(parser, f"{args.mode} requires a tag")
    if args.mode == "list" and args.tag is not None:
        return _fail_usage(parser, "list takes no tag")

    try:
        if args.mode == "set":
            return _run_set(port, args.tag, args.value, args.json)
        if args.mode == "get":
            resp = client.remote_get(port, args.tag)
            human = _render_value(resp.value) if resp.ok else None
            _print_response(resp, args.json, human)
            return _exit_for(resp)
        if args.mode == "trigger":
            resp = client.fire_trigger(port, args.tag)
            _print_response(resp, args.json, f"{args.tag}: fired")
            return _exit_for(resp)
        resp = client.remote_list(port)
        if resp.ok and not args.json:
            _print_table(resp.vars or [])
        else:
            _print_response(resp, args.json)
        return _exit_for(resp)
    except (OSError, ProtocolError) as exc:
        print(f"tune: connection failed: {exc}", file=sys.stderr)
        return EXIT_CONNECTION


def _run_set(port: int, tag: str, raw_value: str, as_json: bool) -> int:
    old = client.remote_get(port, tag)
    if not old.ok:
        _print_response(old, as_json)
        return _exit_for(old)
    resp = client.remote_set(port, tag, raw_value)
    if resp.ok:
        new_value = client.parse_raw(raw_value, old.type)
        human = f"{tag}: {_render_value(old.value)} -> {_render_value(new_value)}"
    else:
        human = None
    _print_response(resp, as_json, human)
    return _exit_for(resp)


def _render_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _print_table(rows: list[dict]) -> None:
    header = ("tag", "type", "value", "port")
    table = [header] + [
        (
            str(row.get("tag", "")),
            str(row.get("type", "")),
            _render_value(row.get("value")),
            str(row.get("port", "")),
        )
        for row in rows
    ]
    widths = [max(len(line[col]) for line in table) for col in range(4)]
    for line in table:
        print("  ".join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip())


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
