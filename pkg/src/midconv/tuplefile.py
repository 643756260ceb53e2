"""JSON text format for matrix tuples and Fuchsian systems.

Complex entries are ``[re, im]`` pairs written with ``repr`` floats, which
round-trip doubles exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cxmat import MONODROMY, RESIDUE, MatrixTuple
from .errors import MidconvError
from .fuchsian import FuchsianSystem, check_points

FORMAT_VERSION = 1


class TupleFileError(ValueError):
    """Malformed tuple document."""


@dataclass(frozen=True)
class TupleFile:
    tuple: MatrixTuple
    points: tuple | None = None

    @property
    def role(self) -> str:
        return self.tuple.role

    def system(self) -> FuchsianSystem:
        if self.points is None:
            raise TupleFileError("file has no points")
        return FuchsianSystem(self.points, self.tuple)


def _pair(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def _complex(v, where: str) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        x = complex(v)
    elif (isinstance(v, (list, tuple)) and len(v) == 2
          and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v)):
        x = complex(v[0], v[1])
    else:
        raise TupleFileError(f"{where}: expected [re, im], got {v!r}")
    if not (math.isfinite(x.real) and math.isfinite(x.imag)):
        raise TupleFileError(f"{where}: non-finite entry")
    return x


def to_dict(t: MatrixTuple, points=None) -> dict:
    doc = {
        "version": FORMAT_VERSION,
        "role": t.role,
        "p": t.p,
        "n": t.n,
        "matrices": [[[_pair(complex(z)) for z in row] for row in m] for m in t.matrices],
    }
    if points is not None:
        doc["points"] = [_pair(complex(a)) for a in points]
    return doc


def from_dict(doc: dict) -> TupleFile:
    if not isinstance(doc, dict):
        raise TupleFileError("top level must be an object")
    for key in ("version", "role", "p", "n", "matrices"):
        if key not in doc:
            raise TupleFileError(f"missing field {key!r}")
    if doc["version"] != FORMAT_VERSION:
        raise TupleFileError(f"unsupported version {doc['version']!r}")
    role = doc["role"]
    if role not in (MONODROMY, RESIDUE):
        raise TupleFileError(f"unknown role {role!r}")
    p, n = doc["p"], doc["n"]
    if not (isinstance(p, int) and isinstance(n, int) and p >= 0 and n >= 1):
        raise TupleFileError("p and n must be integers with n >= 1")
    mats = doc["matrices"]
    if not isinstance(mats, list) or len(mats) != n:
        raise TupleFileError(f"expected {n} matrices")
    out = []
    for k, m in enumerate(mats):
        if not isinstance(m, list) or len(m) != p or any(
                not isinstance(r, list) or len(r) != p for r in m):
            raise TupleFileError(f"matrix {k + 1} is not {p}x{p}")
        out.append(np.array([[_complex(v, f"matrix {k + 1}") for v in r] for r in m],
                            dtype=complex).reshape(p, p))
    try:
        tup = MatrixTuple.empty(n, role) if p == 0 else MatrixTuple(out, role)
    except (ValueError, MidconvError) as exc:
        raise TupleFileError(str(exc)) from exc
    points = None
    if doc.get("points") is not None:
        pts = doc["points"]
        if not isinstance(pts, list) or len(pts) != n:
            raise TupleFileError(f"expected {n} points")
        try:
            points = check_points([_complex(a, "points") for a in pts])
        except (ValueError, MidconvError) as exc:
            raise TupleFileError(str(exc)) from exc
    return TupleFile(tup, points)


def dumps(t: MatrixTuple, points=None) -> str:
    return json.dumps(to_dict(t, points), indent=1) + "\n"


def loads(text: str) -> TupleFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TupleFileError(f"invalid JSON: {exc}") from exc
    return from_dict(doc)


def read(path) -> TupleFile:
    return loads(Path(path).read_text())


def write(path, t: MatrixTuple, points=None) -> None:
    Path(path).write_text(dumps(t, points))
