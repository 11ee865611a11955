"""Instance documents: parsing, emission and hashing.

An instance is a JSON object::

    {
      "format": 1,
      "label": "hyperbola",
      "num_vars": 2,
      "quadratic": [["1", "0"], ["0", "-1"]],
      "linear": [["1", "1"]],
      "witness": ["1", "-1"]
    }

Rationals are written as ``"p"`` or ``"p/q"`` strings (bare JSON integers
are accepted on input). ``witness`` may be omitted or ``null``. The
matrix must be symmetric as given; it is never averaged.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .arith import LinearForm, QuadraticForm, RationalVector, format_rational, parse_rational
from .errors import FormatError

FORMAT_VERSION = 1


@dataclass(frozen=True)
class Instance:
    num_vars: int
    quadratic: QuadraticForm
    linear: tuple
    witness: Optional[RationalVector] = None
    label: str = ""

    @property
    def N(self) -> int:
        return self.num_vars - 1

    @property
    def M(self) -> int:
        return len(self.linear)


def _rational(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise FormatError(f"{where}: expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return parse_rational(value)
        except ValueError as exc:
            raise FormatError(f"{where}: {exc}") from None
    raise FormatError(f"{where}: expected a rational string such as \"3/4\", got {value!r}")


def _row(values, n: int, where: str) -> tuple:
    if not isinstance(values, list):
        raise FormatError(f"{where}: expected a list")
    if len(values) != n:
        raise FormatError(f"{where}: expected {n} entries, got {len(values)}")
    return tuple(_rational(v, f"{where}[{j}]") for j, v in enumerate(values))


def instance_from_dict(doc: dict) -> Instance:
    if not isinstance(doc, dict):
        raise FormatError("instance document must be a JSON object")
    version = doc.get("format", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {version!r}")
    quad = doc.get("quadratic")
    if not isinstance(quad, list) or not quad:
        raise FormatError("quadratic: expected a non-empty matrix")
    n = doc.get("num_vars", len(quad))
    if isinstance(n, bool) or not isinstance(n, int):
        raise FormatError("num_vars: expected an integer")
    if n < 2:
        raise FormatError(f"num_vars must be at least 2, got {n}")
    if len(quad) != n:
        raise FormatError(f"quadratic: expected {n} rows, got {len(quad)}")
    rows = tuple(_row(r, n, f"quadratic[{i}]") for i, r in enumerate(quad))
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise FormatError(
                    f"quadratic matrix is not symmetric: entry ({i},{j}) = {format_rational(rows[i][j])} "
                    f"but ({j},{i}) = {format_rational(rows[j][i])}")
    lin = doc.get("linear", [])
    if not isinstance(lin, list):
        raise FormatError("linear: expected a list of coefficient rows")
    Ls = tuple(LinearForm(_row(r, n, f"linear[{k}]")) for k, r in enumerate(lin))
    w = doc.get("witness")
    witness = None if w is None else _row(w, n, "witness")
    label = doc.get("label", "")
    if not isinstance(label, str):
        raise FormatError("label: expected a string")
    return Instance(n, QuadraticForm(rows), Ls, witness, label)


def parse_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from None
    return instance_from_dict(doc)


def _strs(v: Sequence) -> List[str]:
    return [format_rational(c) for c in v]


def instance_to_dict(inst: Instance) -> dict:
    doc = {
        "format": FORMAT_VERSION,
        "label": inst.label,
        "num_vars": inst.num_vars,
        "quadratic": [_strs(r) for r in inst.quadratic.entries],
        "linear": [_strs(L.coeffs) for L in inst.linear],
    }
    doc["witness"] = None if inst.witness is None else _strs(inst.witness)
    return doc


def emit_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2) + "\n"


def canonical_json(doc) -> bytes:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()


def instance_digest(doc: dict) -> str:
    return hashlib.sha256(canonical_json(doc)).hexdigest()


def make_instance(F: QuadraticForm, Ls: Sequence[LinearForm], witness=None, label: str = "") -> Instance:
    return Instance(F.dim, F, tuple(Ls), None if witness is None else tuple(Fraction(c) for c in witness), label)
