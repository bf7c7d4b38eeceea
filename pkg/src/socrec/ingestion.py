"""JSON-lines connectors for marketplace and social data."""

from __future__ import annotations

import io
import json
import os
from dataclasses import fields

from .model import (MARKETPLACE_KINDS, RECORD_TYPES, SOCIAL_KINDS, Dataset, Item, PurchaseEvent,
                    build_dataset)


class ParseError(ValueError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class UnknownKind(ParseError):
    pass


_INT_FIELDS = {"timestamp", "weight"}


def parse_record(obj, line: int = 0):
    """Turn one decoded JSON object into a typed record."""
    if not isinstance(obj, dict):
        raise ParseError(line, "expected a JSON object")
    kind = obj.get("kind")
    if kind not in RECORD_TYPES:
        raise UnknownKind(line, f"unknown record kind {kind!r}")
    cls = RECORD_TYPES[kind]
    names = [f.name for f in fields(cls)]
    extra = sorted(set(obj) - set(names) - {"kind"})
    if extra:
        raise ParseError(line, f"unknown field(s) for {kind}: {', '.join(extra)}")
    missing = [n for n in names if n not in obj]
    if missing:
        raise ParseError(line, f"missing field(s) for {kind}: {', '.join(missing)}")
    for name in names:
        value = obj[name]
        if name in _INT_FIELDS:
            if not isinstance(value, int) or isinstance(value, bool):
                raise ParseError(line, f"{kind}.{name} must be an integer")
        elif not isinstance(value, str):
            raise ParseError(line, f"{kind}.{name} must be a string")
    return cls(**{n: obj[n] for n in names})


def load_jsonl(source, kinds=None) -> list:
    """Parse a JSON-lines file, path or byte/text stream into records.

    The whole load fails on the first bad line. Blank lines are skipped.
    ``kinds`` optionally restricts the accepted record kinds.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            return load_jsonl(fh, kinds)
    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(source)
    records = []
    for lineno, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise ParseError(lineno, f"invalid UTF-8: {exc}") from None
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(lineno, f"invalid JSON: {exc.msg}") from None
        record = parse_record(obj, lineno)
        if kinds is not None and record.kind not in kinds:
            raise ParseError(lineno, f"record kind {record.kind!r} is not accepted here")
        records.append(record)
    return records


def ingest(marketplace_records=(), social_records=()) -> Dataset:
    """Merge loaded records from any number of streams into a Dataset."""
    items, purchases, social = [], [], []
    for r in list(marketplace_records) + list(social_records):
        if isinstance(r, Item):
            items.append(r)
        elif isinstance(r, PurchaseEvent):
            purchases.append(r)
        else:
            social.append(r)
    return build_dataset(items, purchases, social)


def record_to_dict(record) -> dict:
    out = {"kind": record.kind}
    out.update((f.name, getattr(record, f.name)) for f in fields(record))
    return out


def dump_jsonl(dataset: Dataset, path=None) -> str:
    """Serialise every record of ``dataset``; optionally write it to ``path``."""
    text = "".join(json.dumps(record_to_dict(r), ensure_ascii=False) + "\n"
                   for r in dataset.records())
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


__all__ = ["MARKETPLACE_KINDS", "SOCIAL_KINDS", "ParseError", "UnknownKind",
           "dump_jsonl", "ingest", "load_jsonl", "parse_record", "record_to_dict"]
