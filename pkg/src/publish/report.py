"""Byte sizes of published artifacts."""

import csv
import io
from pathlib import Path
from typing import Iterable, List, Optional

from pydantic import BaseModel

from .models import Artifact


SIZE_COLUMNS = ["backend", "uri", "bytes"]


class SizeRow(BaseModel):
    backend: str
    uri: str
    bytes: int


def artifact_size_report(artifacts: Iterable[Artifact]) -> List[SizeRow]:
    """One row per artifact; a bundle directory counts the sum of its files."""
    return [
        SizeRow(backend=a.kind.value, uri=a.uri, bytes=a.size_bytes) for a in artifacts
    ]


def size_report_csv(rows: Iterable[SizeRow], path: Optional[Path] = None) -> str:
    """Render rows as CSV, also writing them to ``path`` when given."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=SIZE_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.model_dump())
    text = buffer.getvalue()
    if path is not None:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text, encoding="utf-8")
    return text
