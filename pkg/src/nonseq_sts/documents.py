"""JSON interchange for designs and their certificates.

Schema (version 1):

    {
      "schema": 1,
      "n": 13,
      "blocks": [[0, 1, 4], ...],          # sorted, diff-friendly
      "labels": ["a", "b", ...],           # optional, one per point
      "certificate": [                     # optional
        {"missed": 0, "blocks": [[1, 6, 12], ...]},
        ...
      ],
      "provenance": "base-case(13)"
    }

Loading performs structural validation only (shapes, ranges, types);
semantic validation is the verifiers' job so that a broken design can be
loaded and then reported on.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .designs import AlmostParallelClass, Design, NonseqCertificate

SCHEMA_VERSION = 1


class DocumentError(ValueError):
    """The file is not a well-formed design document."""


@dataclass
class DesignDocument:
    design: Design
    labels: Optional[tuple[str, ...]] = None
    certificate: Optional[NonseqCertificate] = None
    provenance: str = ""

    def to_dict(self) -> dict:
        doc: dict = {
            "schema": SCHEMA_VERSION,
            "n": self.design.n,
            "blocks": [list(blk) for blk in sorted(self.design.block_set)],
        }
        if self.labels is not None:
            doc["labels"] = list(self.labels)
        if self.certificate is not None:
            doc["certificate"] = [
                {"missed": missed, "blocks": [list(blk) for blk in sorted(apc.blocks)]}
                for missed, apc in sorted(self.certificate.entries.items())
            ]
        doc["provenance"] = self.provenance
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "DesignDocument":
        if not isinstance(doc, dict):
            raise DocumentError("document must be a JSON object")
        if doc.get("schema") != SCHEMA_VERSION:
            raise DocumentError(f"unsupported schema version {doc.get('schema')!r}")
        n = doc.get("n")
        if not isinstance(n, int) or n < 0:
            raise DocumentError(f"'n' must be a nonnegative integer, got {n!r}")
        design = Design(n, tuple(_read_block(blk, n) for blk in _read_list(doc, "blocks")))

        labels = None
        if "labels" in doc:
            raw = doc["labels"]
            if not isinstance(raw, list) or len(raw) != n or not all(isinstance(s, str) for s in raw):
                raise DocumentError("'labels' must be a list of n strings")
            labels = tuple(raw)

        certificate = None
        if "certificate" in doc:
            entries = {}
            for entry in _read_list(doc, "certificate"):
                if not isinstance(entry, dict) or not isinstance(entry.get("missed"), int):
                    raise DocumentError("certificate entries need an integer 'missed'")
                missed = entry["missed"]
                if not 0 <= missed < n:
                    raise DocumentError(f"certificate entry misses point {missed}, outside 0..{n - 1}")
                if missed in entries:
                    raise DocumentError(f"duplicate certificate entry for point {missed}")
                blocks = frozenset(_read_block(blk, n) for blk in _read_list(entry, "blocks"))
                entries[missed] = AlmostParallelClass(blocks, missed)
            certificate = NonseqCertificate(entries)

        provenance = doc.get("provenance", "")
        if not isinstance(provenance, str):
            raise DocumentError("'provenance' must be a string")
        return cls(design, labels, certificate, provenance)

    def save(self, path: os.PathLike | str) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: os.PathLike | str) -> "DesignDocument":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise DocumentError(f"not valid JSON: {exc}") from exc
        return cls.from_dict(doc)


def _read_list(doc: dict, key: str) -> list:
    value = doc.get(key)
    if not isinstance(value, list):
        raise DocumentError(f"'{key}' must be a list")
    return value


def _read_block(blk, n: int) -> tuple[int, int, int]:
    if not isinstance(blk, list) or len(blk) != 3 or not all(isinstance(p, int) for p in blk):
        raise DocumentError(f"block {blk!r} must be a list of 3 integers")
    if len(set(blk)) != 3 or min(blk) < 0 or max(blk) >= n:
        raise DocumentError(f"block {blk!r} must have 3 distinct points in 0..{n - 1}")
    return tuple(sorted(blk))
