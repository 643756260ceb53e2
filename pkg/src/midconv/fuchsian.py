"""Fuchsian systems ``dy/dz = (sum_i A_i / (z - a_i)) y``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cxmat import RESIDUE, MatrixTuple
from .errors import DegeneratePoints


def check_points(points: Sequence, tol: float = 1e-12) -> tuple:
    pts = tuple(complex(a) for a in points)
    if not pts:
        raise DegeneratePoints("at least one finite singular point is required")
    if not all(np.isfinite(a.real) and np.isfinite(a.imag) for a in pts):
        raise DegeneratePoints("singular points must be finite")
    scale = max(1.0, max(abs(a) for a in pts))
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(pts[i] - pts[j]) <= tol * scale:
                raise DegeneratePoints(f"points {i + 1} and {j + 1} coincide")
    return pts


@dataclass(frozen=True)
class FuchsianSystem:
    points: tuple
    residues: MatrixTuple

    def __init__(self, points: Sequence, residues):
        pts = check_points(points)
        if not isinstance(residues, MatrixTuple):
            residues = MatrixTuple(residues, RESIDUE)
        if residues.role != RESIDUE:
            residues = MatrixTuple(residues.matrices, RESIDUE)
        if residues.n != len(pts):
            raise ValueError(f"{len(pts)} points but {residues.n} residue matrices")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "residues", residues)

    @property
    def p(self) -> int:
        return self.residues.p

    @property
    def n(self) -> int:
        return self.residues.n

    def residue_at_infinity(self) -> np.ndarray:
        return -sum(self.residues.matrices)

    def coefficient(self, z: complex) -> np.ndarray:
        return sum(a / (z - pt) for a, pt in zip(self.residues.matrices, self.points))
