"""JSON and CSV writers, plus validation against the shipped schemas."""

from __future__ import annotations

import csv
import io
import json
from functools import lru_cache
from importlib import resources
from typing import Any, Iterable, Sequence


def dumps(obj: Any) -> str:
    """Deterministic JSON text (insertion-ordered keys, two-space indent, trailing newline)."""
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def vector_rows(vec) -> Iterable[tuple[int, float, float]]:
    for k, v in enumerate(vec):
        yield k, float(v.real), float(v.imag)


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict[str, Any]:
    text = resources.files("toeplitz_dyn").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(obj: Any, name: str) -> None:
    """Raise ``jsonschema.ValidationError`` if ``obj`` does not match schema ``name``."""
    import jsonschema

    jsonschema.validate(obj, load_schema(name))
