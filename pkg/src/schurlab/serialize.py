"""JSON/CSV rendering of results.

Exact rationals become ``{"exact": "p/q", "decimal": "<12 significant digits>"}``
(integers are written ``"n/1"`` so the column type never changes). mpmath
numbers and floats are rendered to 12 significant digits as strings next to
their raw value where that matters. JSON is UTF-8, key-sorted and
newline-terminated so reruns are byte-identical.
"""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from importlib import resources
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Sequence

import mpmath
import numpy as np

from .young import Partition

SCHEMA_VERSION = 1
DIGITS = 12

__all__ = [
    "SCHEMA_VERSION",
    "rational",
    "decimal_string",
    "to_jsonable",
    "dumps",
    "csv_text",
    "atomic_write",
    "load_schema",
]


def decimal_string(x) -> str:
    """``x`` to 12 significant digits."""
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        x = Fraction(x)
        with localcontext() as ctx:
            ctx.prec = DIGITS
            value = Decimal(x.numerator) / Decimal(x.denominator)
        return format(value, "f")
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, DIGITS)
    return format(float(x), f".{DIGITS}g")


def rational(x) -> dict:
    x = Fraction(x)
    return {"exact": f"{x.numerator}/{x.denominator}", "decimal": decimal_string(x)}


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return rational(obj)
    if isinstance(obj, Partition):
        return str(obj)
    if isinstance(obj, mpmath.mpf):
        return decimal_string(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc) -> str:
    return json.dumps(to_jsonable(doc), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def atomic_write(path, data) -> None:
    """Write text or bytes to ``path`` via a temp file in the same directory and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data.encode("utf-8") if isinstance(data, str) else data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_schema(name: str) -> dict:
    """The shipped JSON schema for output ``schurlab.<name>``."""
    return json.loads(resources.files("schurlab").joinpath("schemas", f"{name}.json").read_text("utf-8"))
