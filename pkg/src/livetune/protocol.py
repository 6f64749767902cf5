"""Newline-delimited JSON wire protocol.

Every request and response is exactly one line of UTF-8 JSON terminated by
``\\n``. Requests to a variable port use ops ``get``/``set``/``ping``;
requests to the directory port use ``list``/``resolve`` (plus the
loopback-only ``register``/``deregister``, which ride a startup nonce).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .core import Scalar
from .errors import LiveTuneError

OPS = frozenset({"get", "set", "ping", "list", "resolve", "register", "deregister"})

ERROR_CODES = frozenset(
    {
        "unknown_tag",
        "type_mismatch",
        "parse_error",
        "duplicate_tag",
        "unsupported_op",
        "invalid_value",
    }
)

# Ops that must name a tag, per the message invariants.
_TAG_OPS = frozenset({"resolve", "register", "deregister"})


class ProtocolError(LiveTuneError):
    """Line is not a well-formed wire message (maps to ``parse_error``)."""


class UnsupportedOpError(LiveTuneError):
    """Well-formed JSON but an op this endpoint does not serve."""


def _is_scalar(value: object) -> bool:
    return isinstance(value, (int, float, bool, str))


@dataclass(frozen=True)
class WireMessage:
    """One request on the control plane."""

    op: str
    tag: str | None = None
    value: Scalar | None = None
    port: int | None = None
    type: str | None = None
    nonce: str | None = None

    def validate(self) -> None:
        if self.op not in OPS:
            raise UnsupportedOpError(f"unsupported op: {self.op!r}")
        if self.op == "set" and self.value is None:
            raise ProtocolError("set requires a value")
        if self.op in _TAG_OPS and not self.tag:
            raise ProtocolError(f"{self.op} requires a tag")
        if self.op == "register" and (self.port is None or self.type is None):
            raise ProtocolError("register requires port and type")


@dataclass(frozen=True)
class WireResponse:
    """One response line; ``ok=False`` iff ``error`` carries a code."""

    ok: bool
    value: Scalar | None = None
    vars: list[dict] | None = None
    port: int | None = None
    type: str | None = None
    error: str | None = None

    def __post_init__(self) -> None:
        if self.ok == (self.error is not None):
            raise ProtocolError("ok=false iff error present")
        if self.error is not None and self.error not in ERROR_CODES:
            raise ProtocolError(f"unknown error code: {self.error!r}")


def error_response(code: str) -> WireResponse:
    return WireResponse(ok=False, error=code)


def _dump(fields: dict) -> str:
    present = {k: v for k, v in fields.items() if v is not None}
    line = json.dumps(present, ensure_ascii=False, separators=(",", ":"), allow_nan=False)
    if "\n" in line or "\r" in line:  # json escapes these; guard regardless
        raise ProtocolError("encoded message must be a single line")
    return line + "\n"


def encode_message(msg: WireMessage) -> str:
    msg.validate()
    return _dump(
        {
            "op": msg.op,
            "tag": msg.tag,
            "value": msg.value,
            "port": msg.port,
            "type": msg.type,
            "nonce": msg.nonce,
        }
    )


def encode_response(resp: WireResponse) -> str:
    return _dump(
        {
            "ok": resp.ok,
            "value": resp.value,
            "vars": resp.vars,
            "port": resp.port,
            "type": resp.type,
            "error": resp.error,
        }
    )


def _load(line: str | bytes) -> dict:
    if isinstance(line, bytes):
        try:
            line = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ProtocolError(f"not UTF-8: {exc}") from exc
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"not JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ProtocolError("message must be a JSON object")
    return obj


def _opt(obj: dict, key: str, types: type | tuple) -> object:
    value = obj.get(key)
    if value is not None and (
        not isinstance(value, types) or (types is int and isinstance(value, bool))
    ):
        raise ProtocolError(f"field {key!r} has wrong type")
    return value


def decode_message(line: str | bytes) -> WireMessage:
    """Parse one request line; unknown fields are ignored.

    Raises :class:`ProtocolError` for malformed lines (``parse_error``) and
    :class:`UnsupportedOpError` for ops outside the protocol.
    """
    obj = _load(line)
    op = obj.get("op")
    if not isinstance(op, str):
        raise ProtocolError("missing or non-string op")
    value = obj.get("value")
    if value is not None and not _is_scalar(value):
        raise ProtocolError("value must be a JSON scalar")
    msg = WireMessage(
        op=op,
        tag=_opt(obj, "tag", str),
        value=value,
        port=_opt(obj, "port", int),
        type=_opt(obj, "type", str),
        nonce=_opt(obj, "nonce", str),
    )
    msg.validate()
    return msg


def decode_response(line: str | bytes) -> WireResponse:
    obj = _load(line)
    ok = obj.get("ok")
    if not isinstance(ok, bool):
        raise ProtocolError("missing or non-bool ok")
    value = obj.get("value")
    if value is not None and not _is_scalar(value):
        raise ProtocolError("value must be a JSON scalar")
    vars_field = obj.get("vars")
    if vars_field is not None:
        if not isinstance(vars_field, list) or not all(
            isinstance(entry, dict) for entry in vars_field
        ):
            raise ProtocolError("vars must be a list of objects")
    return WireResponse(
        ok=ok,
        value=value,
        vars=vars_field,
        port=_opt(obj, "port", int),
        type=_opt(obj, "type", str),
        error=_opt(obj, "error", str),
    )
