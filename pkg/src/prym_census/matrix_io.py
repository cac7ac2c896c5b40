"""Matrix JSON interchange: ``{"rows": n, "cols": m, "entries": [[...], ...]}``."""

import json
import re

from .errors import MalformedInput
from .linalg import IntegerMatrix

_NUMBER = re.compile(r"-?\d+(?:\.\d*)?(?:[eE][+-]?\d+)?")


def _byte_offset(text, pos):
    return len(text[:pos].encode("utf-8"))


def _float_offset(text, literal):
    for m in _NUMBER.finditer(text):
        if m.group(0) == literal:
            return _byte_offset(text, m.start())
    return None


class _FloatSeen(Exception):
    pass


def _reject_float(literal):
    raise _FloatSeen(literal)


def _reject_constant(name):
    raise _FloatSeen(name)


def matrix_from_json(text):
    """Parse a matrix document; raise MalformedInput on anything but exact ints."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text, parse_float=_reject_float,
                         parse_constant=_reject_constant)
    except _FloatSeen as exc:
        lit = exc.args[0]
        raise MalformedInput(f"non-integer entry {lit}",
                             _float_offset(text, lit)) from None
    except json.JSONDecodeError as exc:
        raise MalformedInput(exc.msg, _byte_offset(text, exc.pos)) from None
    return matrix_from_obj(doc, text)


def matrix_from_obj(doc, text=""):
    def where(token):
        i = text.find(token)
        return _byte_offset(text, i) if i >= 0 else None

    if not isinstance(doc, dict):
        raise MalformedInput("matrix document must be a JSON object", 0)
    for key in ("rows", "cols", "entries"):
        if key not in doc:
            raise MalformedInput(f"missing key {key!r}", 0)
    rows, cols, entries = doc["rows"], doc["cols"], doc["entries"]
    for key, val in (("rows", rows), ("cols", cols)):
        if type(val) is not int or val < 0:
            raise MalformedInput(f"{key!r} must be a nonnegative integer",
                                 where(f'"{key}"'))
    if not isinstance(entries, list) or len(entries) != rows:
        raise MalformedInput(f"'entries' must be a list of {rows} rows",
                             where('"entries"'))
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != cols:
            raise MalformedInput(f"row {i} must have {cols} entries",
                                 where('"entries"'))
        for x in row:
            if type(x) is not int:
                raise MalformedInput(f"row {i} has non-integer entry {x!r}",
                                     where('"entries"'))
    return IntegerMatrix.from_rows(entries, cols=cols)


def matrix_to_json(M, **extra):
    doc = M.to_json()
    doc.update(extra)
    return doc
