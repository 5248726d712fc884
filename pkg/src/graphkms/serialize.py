"""Deterministic JSON-friendly serialization of exact values.

Rationals travel as "p/q" strings, never floats; path points serialize as
their edge ids joined by "." (the bare vertex id for length-0 paths).
All orderings are fixed so identical inputs give byte-identical output.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Dict

from .errors import SchemaViolation
from .graphs import FinitePath
from .measures import AtomicMeasure


def frac_str(x: Fraction) -> str:
    return str(Fraction(x))


def parse_frac(text) -> Fraction:
    try:
        value = Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise SchemaViolation(f"not a rational: {text!r}")
    return value


def path_key(path: FinitePath) -> str:
    if path.is_vertex():
        return path.vertex
    return ".".join(path.edges)


def measure_json(mu: AtomicMeasure, keyer=None) -> Dict[str, str]:
    keyer = keyer or (lambda p: p)
    items = sorted((keyer(p), frac_str(w)) for p, w in mu.weights.items())
    return dict(items)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def digest(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()
