"""Access to the bundled JSON schema and validation helpers."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema

from .errors import InputError

DOCUMENT_KINDS = (
    "GraphDocument",
    "DeriveDocument",
    "VerdictDocument",
    "PathsDocument",
    "OracleDocument",
    "NetworkMatrix",
    "ErrorDocument",
)


@lru_cache(maxsize=None)
def load_schema() -> dict:
    text = resources.files("netident").joinpath("schemas/netident.schema.json").read_text("utf-8")
    return json.loads(text)


@lru_cache(maxsize=None)
def _validator(kind: str) -> jsonschema.Draft202012Validator:
    root = load_schema()
    if kind not in root["$defs"]:
        raise KeyError(f"no schema for {kind!r}")
    schema = dict(root)
    schema["$ref"] = f"#/$defs/{kind}"
    return jsonschema.Draft202012Validator(schema)


def validate(doc: object, kind: str) -> None:
    """Raise :class:`InputError` describing the first problem if ``doc`` is not a valid ``kind``."""
    err = jsonschema.exceptions.best_match(_validator(kind).iter_errors(doc))
    if err is not None:
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise InputError(f"invalid {kind} at {where}: {err.message}")


def is_valid(doc: object, kind: str) -> bool:
    return _validator(kind).is_valid(doc)
