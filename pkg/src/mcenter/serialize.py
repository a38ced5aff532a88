"""Reading and writing distance matrices; rationals travel as ``"p/q"`` strings."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from fractions import Fraction
from pathlib import Path

from .lp import as_fraction
from .metric import FiniteMetricSpace, validate


def fmt(q: Fraction) -> str:
    q = as_fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(text) -> Fraction:
    """``"3/4"``, ``"2"`` or ``"0.125"`` (decimals are read exactly)."""
    if isinstance(text, (int, Fraction)):
        return as_fraction(text)
    if not isinstance(text, str):
        raise TypeError(f"matrix entries must be strings or integers, got {text!r}")
    return Fraction(text.strip())


def space_from_json(text: str) -> FiniteMetricSpace:
    data = json.loads(text)
    matrix = [[parse_rational(v) for v in row] for row in data["matrix"]]
    return validate(matrix, data.get("labels"))


def space_from_csv(text: str) -> FiniteMetricSpace:
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise ValueError("empty CSV")
    labels = [c.strip() for c in rows[0]]
    matrix = [[parse_rational(c) for c in r] for r in rows[1:]]
    return validate(matrix, labels)


def read_space(path) -> FiniteMetricSpace:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        return space_from_csv(text)
    if path.suffix.lower() == ".json":
        return space_from_json(text)
    return space_from_json(text) if text.lstrip().startswith("{") else space_from_csv(text)


def space_to_dict(X: FiniteMetricSpace) -> dict:
    return {"labels": list(X.labels), "matrix": [[fmt(v) for v in row] for row in X.dist]}


def space_to_json(X: FiniteMetricSpace) -> str:
    return json.dumps(space_to_dict(X), indent=2)


def space_to_csv(X: FiniteMetricSpace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(X.labels)
    for row in X.dist:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def digest(X: FiniteMetricSpace) -> str:
    """SHA-256 of the canonical JSON form of a space."""
    blob = json.dumps(space_to_dict(X), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()
