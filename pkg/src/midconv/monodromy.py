"""Numerical monodromy of Fuchsian systems.

Loops are "lollipops" based at a common point ``b``: a straight spoke toward
``a_i``, one counterclockwise circle around it, and the spoke back.  The
fundamental matrix normalized by ``Y(b) = I`` is transported along each loop;
its value on return is the monodromy matrix, so that continuation of ``Y``
along ``gamma_i`` equals ``Y G_i`` and ``G_i ~ exp(2 pi i A_i)`` at a
non-resonant point.

The base point is placed so that the points, seen from ``b``, appear in
clockwise order of their index.  With that arrangement
``G_1 G_2 ... G_n`` is the transport around a circle enclosing all finite
points, i.e. ``G_{n+1} = (G_1 ... G_n)^{-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .cxmat import DEFAULT_TOL, MONODROMY, MatrixTuple, ToleranceConfig, best_conjugator
from .errors import DegeneratePoints, SingularityTooClose, ToleranceNotMet
from .fuchsian import FuchsianSystem, check_points

RADIUS_FACTOR = 0.2


@dataclass(frozen=True)
class Line:
    start: complex
    end: complex

    def point(self, t):
        return self.start + t * (self.end - self.start)

    def velocity(self, t):
        return self.end - self.start

    def distance_to(self, a: complex) -> float:
        d = self.end - self.start
        if d == 0:
            return abs(a - self.start)
        t = ((a - self.start) * d.conjugate()).real / abs(d) ** 2
        t = min(1.0, max(0.0, t))
        return abs(a - self.point(t))

    def log_increment(self, a: complex) -> complex:
        return complex(np.log((self.end - a) / (self.start - a)))

    @property
    def length(self) -> float:
        return abs(self.end - self.start)


@dataclass(frozen=True)
class Arc:
    center: complex
    radius: float
    theta0: float
    span: float

    def point(self, t):
        return self.center + self.radius * np.exp(1j * (self.theta0 + t * self.span))

    def velocity(self, t):
        return 1j * self.span * (self.point(t) - self.center)

    @property
    def start(self) -> complex:
        return complex(self.point(0.0))

    @property
    def end(self) -> complex:
        return complex(self.point(1.0))

    @property
    def length(self) -> float:
        return abs(self.span) * self.radius

    def distance_to(self, a: complex) -> float:
        d = abs(a - self.center)
        if abs(self.span) >= 2 * np.pi - 1e-12:
            return abs(d - self.radius)
        ts = np.linspace(0.0, 1.0, 257)
        return float(np.min(np.abs(self.point(ts) - a)))

    def log_increment(self, a: complex) -> complex:
        if a == self.center:
            return 1j * self.span
        dist = max(self.distance_to(a), 1e-300)
        pieces = max(16, int(math.ceil(4 * self.length / dist)))
        zs = self.point(np.linspace(0.0, 1.0, pieces + 1))
        return complex(np.sum(np.log((zs[1:] - a) / (zs[:-1] - a))))


@dataclass(frozen=True)
class Loop:
    base: complex
    segments: tuple
    index: int  # 0-based point index; -1 for the loop around all finite points

    def winding_numbers(self, points: Sequence) -> list:
        out = []
        for a in points:
            total = sum(seg.log_increment(a) for seg in self.segments)
            out.append(total.imag / (2 * np.pi))
        return out


@dataclass(frozen=True)
class IntegrationConfig:
    rel_tol: float = 1e-11
    abs_tol: float = 1e-13
    max_step_fraction: float = 0.125
    safety_margin: float = 1e-6
    det_tol: float = 1e-8
    radius_factor: float = RADIUS_FACTOR

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "max_step_fraction", "safety_margin",
                     "det_tol", "radius_factor"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


DEFAULT_INTEGRATION = IntegrationConfig()


@dataclass
class MonodromyResult:
    tuple: MatrixTuple
    loops: list
    loop_errors: list
    relation_defect: float
    base: complex
    relation_ok: bool = True

    @property
    def at_infinity(self) -> np.ndarray:
        return self.tuple.at_infinity()


@dataclass
class VerificationReport:
    success: bool
    residual: float
    conjugator: np.ndarray | None
    relation_defect: float
    monodromy: MonodromyResult | None = None
    notes: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# loop construction


def _relative_args(points, base):
    center = np.mean(points)
    ref = center - base
    return [float(np.angle((a - base) / ref)) for a in points]


def choose_base(points: Sequence) -> complex:
    """Base point far from the cluster that sees the points in clockwise index order."""
    pts = check_points(points)
    if len(pts) == 1:
        return pts[0] + 1.0
    center = complex(np.mean(pts))
    spread = max(abs(a - center) for a in pts)
    radius = 2.5 * spread
    best = None
    for k in range(1440):
        # start straight below the cluster and alternate left/right of it
        step = (k + 1) // 2 * (1 if k % 2 else -1)
        theta = -np.pi / 2 + step * (2 * np.pi / 1440)
        b = center + radius * np.exp(1j * theta)
        args = _relative_args(pts, b)
        if any(args[i] <= args[i + 1] for i in range(len(args) - 1)):
            continue
        gap = min(abs(args[i] - args[j]) for i in range(len(pts)) for j in range(i + 1, len(pts)))
        if best is None or gap > best[0] * 1.5:
            best = (gap, b)
    if best is None:
        raise DegeneratePoints(
            "no base point sees the singular points in index order; reorder the points")
    return best[1]


def _loop_radius(i: int, pts: tuple, base: complex, factor: float) -> float:
    a = pts[i]
    cands = [abs(a - base)]
    for j, other in enumerate(pts):
        if j != i:
            cands.append(abs(a - other))
            cands.append(Line(base, other).distance_to(a))
    return factor * min(cands)


def default_loops(points: Sequence, base: complex | None = None,
                  radius_factor: float = RADIUS_FACTOR) -> list:
    pts = check_points(points)
    if base is None:
        base = choose_base(pts)
    base = complex(base)
    if any(abs(base - a) < 1e-12 * max(1.0, abs(a)) for a in pts):
        raise DegeneratePoints("base point coincides with a singular point")
    loops = []
    for i, a in enumerate(pts):
        r = _loop_radius(i, pts, base, radius_factor)
        if r <= 0:
            raise DegeneratePoints(f"loop around point {i + 1} has zero radius")
        direction = (base - a) / abs(base - a)
        foot = a + r * direction
        theta0 = float(np.angle(direction))
        segs = (Line(base, foot), Arc(a, r, theta0, 2 * np.pi), Line(foot, base))
        loops.append(Loop(base, segs, i))
    for lp in loops:
        w = lp.winding_numbers(pts)
        expect = [1.0 if j == lp.index else 0.0 for j in range(len(pts))]
        if not np.allclose(w, expect, atol=1e-6):
            raise DegeneratePoints(f"loop {lp.index + 1} has winding numbers {w}")
    return loops


def outer_loop(points: Sequence, base: complex) -> Loop:
    """Counterclockwise circle through ``base`` around the centroid of the points."""
    pts = check_points(points)
    center = complex(np.mean(pts))
    r = abs(base - center)
    if r <= max(abs(a - center) for a in pts):
        raise DegeneratePoints("base point is not outside the cluster of singular points")
    theta0 = float(np.angle(base - center))
    return Loop(base, (Arc(center, r, theta0, 2 * np.pi),), -1)


# ---------------------------------------------------------------------------
# transport


def _check_clearance(system: FuchsianSystem, segments, cfg: IntegrationConfig):
    for seg in segments:
        for i, a in enumerate(system.points):
            d = seg.distance_to(a)
            if d < cfg.safety_margin:
                raise SingularityTooClose(
                    f"path passes within {d:.3g} of singular point {i + 1}")


def _integrate_segment(system: FuchsianSystem, seg, y0: np.ndarray,
                       cfg: IntegrationConfig) -> np.ndarray:
    p = system.p
    res = system.residues.matrices
    pts = system.points

    def rhs(t, y):
        z = seg.point(t)
        a = res[0] / (z - pts[0])
        for k in range(1, len(pts)):
            a = a + res[k] / (z - pts[k])
        return ((a @ y.reshape(p, p)) * seg.velocity(t)).reshape(-1)

    sol = solve_ivp(rhs, (0.0, 1.0), y0.reshape(-1).astype(complex), method="DOP853",
                    rtol=cfg.rel_tol, atol=cfg.abs_tol, max_step=cfg.max_step_fraction)
    if not sol.success:
        raise ToleranceNotMet(f"integration failed: {sol.message}")
    return sol.y[:, -1].reshape(p, p)


def expected_log_det(system: FuchsianSystem, segments) -> complex:
    """``integral of tr A(z) dz`` along the path, with continuous logarithms."""
    total = 0j
    for a, res in zip(system.points, system.residues.matrices):
        tr = np.trace(res)
        if tr != 0:
            total += tr * sum(seg.log_increment(a) for seg in segments)
    return total


def transport(system: FuchsianSystem, path, cfg: IntegrationConfig = DEFAULT_INTEGRATION,
              return_error: bool = False):
    """Transport matrix of ``Y' = A(z) Y`` along ``path`` with ``Y(start) = I``."""
    segments = path.segments if isinstance(path, Loop) else tuple(path)
    _check_clearance(system, segments, cfg)
    y = np.eye(system.p, dtype=complex)
    for seg in segments:
        y = _integrate_segment(system, seg, y, cfg)
    expected = np.exp(expected_log_det(system, segments))
    err = float(abs(np.linalg.det(y) - expected) / max(abs(expected), 1e-300))
    if err > cfg.det_tol:
        raise ToleranceNotMet(f"determinant drift {err:.3g} exceeds {cfg.det_tol:.3g}")
    return (y, err) if return_error else y


def compute_monodromy(system: FuchsianSystem, cfg: IntegrationConfig = DEFAULT_INTEGRATION,
                      base: complex | None = None) -> MonodromyResult:
    loops = default_loops(system.points, base, cfg.radius_factor)
    base = loops[0].base
    mats, errs = [], []
    for lp in loops:
        g, err = transport(system, lp, cfg, return_error=True)
        mats.append(g)
        errs.append(err)
    tup = MatrixTuple(mats, MONODROMY, check=False)
    defect = float("nan")
    relation_ok = True
    try:
        outer = outer_loop(system.points, base)
        t_outer = transport(system, outer, cfg)
        defect = float(np.linalg.norm(tup.product() @ np.linalg.inv(t_outer) - np.eye(system.p)))
        relation_ok = defect <= 100 * max(cfg.rel_tol, 1e-10) * max(1.0, np.linalg.norm(t_outer))
    except DegeneratePoints:
        relation_ok = False
    return MonodromyResult(tup, loops, errs, defect, base, relation_ok)


def verify_rh_solution(system: FuchsianSystem, target: MatrixTuple,
                       cfg: IntegrationConfig = DEFAULT_INTEGRATION,
                       tol: ToleranceConfig = DEFAULT_TOL, conj_tol: float | None = None,
                       monodromy: MonodromyResult | None = None) -> VerificationReport:
    """Check that the monodromy of ``system`` is simultaneously conjugate to ``target``."""
    if target.n != system.n or target.p != system.p:
        raise ValueError(
            f"target has n={target.n}, p={target.p}; system has n={system.n}, p={system.p}")
    if conj_tol is not None:
        tol = tol.with_conj_tol(conj_tol)
    mon = monodromy if monodromy is not None else compute_monodromy(system, cfg)
    c, res = best_conjugator(mon.tuple, target, tol)
    notes = []
    if not mon.relation_ok:
        notes.append(f"relation defect {mon.relation_defect:.3g} is large")
    return VerificationReport(res <= tol.conj_tol, res, c, mon.relation_defect, mon, notes)
