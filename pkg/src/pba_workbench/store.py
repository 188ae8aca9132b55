"""File-backed document store.

One directory per document kind, one canonical-JSON file per document.
Writes go through a temp file and an atomic rename, so a crashed process
never leaves a half-written document, and reloading the store after a
restart loses nothing that was saved.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
import uuid
from pathlib import Path

from .documents import canonical_json, content_hash
from .errors import InvalidInput, SchemaError, UnknownDocument

KINDS = {
    "prior": "priors",
    "class_structure": "classes",
    "batch": "batches",
    "report": "reports",
    "session": "sessions",
}

_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


class WorkspaceStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        for sub in KINDS.values():
            (self.root / sub).mkdir(parents=True, exist_ok=True)

    def _dir(self, kind: str) -> Path:
        try:
            return self.root / KINDS[kind]
        except KeyError:
            raise InvalidInput(f"unknown document kind {kind!r}") from None

    def path(self, kind: str, doc_id: str) -> Path:
        if not _ID_RE.match(doc_id or ""):
            raise InvalidInput(f"invalid document id {doc_id!r}")
        return self._dir(kind) / f"{doc_id}.json"

    def save(self, doc: dict, doc_id: str | None = None, overwrite: bool = False) -> str:
        kind = doc.get("kind")
        if kind not in KINDS:
            raise SchemaError(f"document kind {kind!r} is not persistable")
        doc_id = doc_id or doc.get("id") or uuid.uuid4().hex[:12]
        path = self.path(kind, doc_id)
        doc = dict(doc)
        doc["id"] = doc_id
        payload = canonical_json(doc)
        if path.exists() and not overwrite:
            if path.read_bytes() != payload:
                raise InvalidInput(
                    f"{kind} document {doc_id!r} already exists with different content"
                )
            return doc_id
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{doc_id}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(payload)
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)
        return doc_id

    def load(self, kind: str, doc_id: str) -> dict:
        path = self.path(kind, doc_id)
        if not path.exists():
            raise UnknownDocument(f"no {kind} document with id {doc_id!r}")
        try:
            return json.loads(path.read_text("utf-8"))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{kind} document {doc_id!r} is not valid JSON: {exc}") from exc

    def exists(self, kind: str, doc_id: str) -> bool:
        try:
            return self.path(kind, doc_id).exists()
        except InvalidInput:
            return False

    def list_ids(self, kind: str) -> list[str]:
        return sorted(p.stem for p in self._dir(kind).glob("*.json"))

    def hash_of(self, kind: str, doc_id: str) -> str:
        return content_hash(self.load(kind, doc_id))
