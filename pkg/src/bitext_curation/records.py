"""JSONL/JSON reading and atomic writing, with a manifest line on every JSONL output."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Iterator

from . import __version__

MANIFEST_KEY = "_manifest"


def dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def manifest(config_hash: str = "", seed: int | None = None, **extra) -> dict:
    return {"tool": "bitext_curation", "version": __version__, "config_hash": config_hash, "seed": seed, **extra}


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def write_jsonl(path, records: Iterable[dict], header: dict | None = None) -> int:
    """Write records atomically; ``header`` becomes the leading manifest line. Returns the record count."""
    lines = []
    if header is not None:
        lines.append(dumps({MANIFEST_KEY: header}))
    n = 0
    for rec in records:
        lines.append(dumps(rec))
        n += 1
    atomic_write_text(path, "".join(line + "\n" for line in lines))
    return n


def iter_jsonl(path) -> Iterator[dict]:
    """Records of a JSONL file, manifest lines skipped."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from exc
            if isinstance(rec, dict) and MANIFEST_KEY in rec:
                continue
            yield rec


def read_jsonl(path) -> list[dict]:
    return list(iter_jsonl(path))


def read_manifest(path) -> dict | None:
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
    try:
        rec = json.loads(first)
    except json.JSONDecodeError:
        return None
    return rec.get(MANIFEST_KEY) if isinstance(rec, dict) else None


def write_json(path, obj) -> None:
    atomic_write_text(path, json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=2) + "\n")


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def content_hash(records: Iterable[dict]) -> str:
    h = hashlib.sha256()
    for rec in records:
        h.update(dumps(rec).encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()
