"""Constructive Riemann-Hilbert solving through middle convolution.

``general_scheme_solve`` reduces a monodromy tuple to a 2x2 tuple with
``MC_lambda``, realizes the reduced tuple by a non-resonant Fuchsian system
(closed form for three singular points, damped Newton for more), and lifts the
residues back with ``mc_nu``, ``exp(2 pi i nu) = 1/lambda``.  Every produced
system is checked by numerical monodromy.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .convolution import (
    ConditionReport,
    TheoremReport,
    check_conditions,
    check_mc_theorem_conditions,
    middle_convolve_add,
    middle_convolve_mult,
    predicted_dim,
)
from .cxmat import (
    DEFAULT_TOL,
    MONODROMY,
    RESIDUE,
    MatrixTuple,
    ToleranceConfig,
    branch_exponent,
    eigen_clusters,
    is_irreducible_tuple,
    numeric_rank,
)
from .errors import (
    ClusterAmbiguous,
    DegenerateNabla,
    MidconvError,
    NoConvergence,
    NoLambda,
    Reducible,
    ResonantChoice,
    TheoremConditionsFail,
    VerificationFail,
)
from .fuchsian import FuchsianSystem, check_points
from .monodromy import (
    DEFAULT_INTEGRATION,
    IntegrationConfig,
    compute_monodromy,
    verify_rh_solution,
)

log = logging.getLogger(__name__)

INFINITY_FIRST = "infinity"
BALANCED = "balanced"


@dataclass(frozen=True)
class SpectralData:
    """Exponents ``chi[i][k]`` (rows 0..n-1 finite points, row n infinity)
    and the monodromy eigenvalues ``eta[i][k]`` they lift.  ``shifts`` lists
    the integer branch changes ``(i, k, d)`` applied on top of ``0 <= Re < 1``.
    """

    chi: tuple
    eta: tuple
    shifts: tuple = ()
    block_sizes: tuple = ()

    @property
    def n(self) -> int:
        return len(self.chi) - 1

    def total(self) -> complex:
        return complex(sum(sum(row) for row in self.chi))

    def lift_error(self) -> float:
        err = 0.0
        for row_c, row_e in zip(self.chi, self.eta):
            for c, e in zip(row_c, row_e):
                err = max(err, abs(np.exp(2j * np.pi * c) - e) / abs(e))
        return err


@dataclass
class SchemeTrace:
    lam: complex | None
    candidates: list
    reduced: MatrixTuple
    reduced_system: FuchsianSystem
    nu: complex | None
    final: FuchsianSystem
    input_conditions: ConditionReport | None = None
    theorem: TheoremReport | None = None
    exponents: SpectralData | None = None
    residual: float = float("nan")
    relation_defect: float = float("nan")
    notes: list = field(default_factory=list)

    def lines(self) -> list:
        def c(z):
            if z is None:
                return "none"
            z = complex(z)
            # drop rounding noise (and negative zeros) so traces are stable
            re_ = round(z.real, 12) + 0.0
            im = round(z.imag, 12) + 0.0
            return f"{re_:.12g}{im:+.12g}i"

        out = [f"lambda: {c(self.lam)}"]
        out.append("candidates: " + ", ".join(f"{c(l)} (dim {d})" for l, d in self.candidates))
        if self.input_conditions is not None:
            out.append(f"conditions (*): {self.input_conditions.star_ok}, "
                       f"(**): {self.input_conditions.star_star_ok}")
        out.append(f"reduced size: {self.reduced.p}")
        if self.exponents is not None:
            for i, row in enumerate(self.exponents.chi):
                where = "inf" if i == self.exponents.n else str(i + 1)
                out.append(f"exponents[{where}]: " + ", ".join(c(x) for x in row))
        out.append(f"lift nu: {c(self.nu)}")
        if self.theorem is not None:
            out.append("theorem conditions: " + ", ".join(
                f"{k}={v}" for k, v in self.theorem.conditions.items()))
        out.append(f"final size: {self.final.p}")
        out.append(f"verification residual: {self.residual:.3e}")
        out.append(f"relation defect: {self.relation_defect:.3e}")
        out.extend(f"note: {n}" for n in self.notes)
        return out


# ---------------------------------------------------------------------------
# exponents


def _is_resonant(values: Sequence, tol: float) -> bool:
    for x, y in itertools.combinations(values, 2):
        d = x - y
        k = round(d.real)
        if k != 0 and abs(d - k) <= tol:
            return True
    return False


def _shift_vectors(total: int, slots: int, max_each: int):
    """Nonpositive integer vectors of length ``slots`` summing to ``-total``."""
    if slots == 0:
        if total == 0:
            yield ()
        return
    for first in range(0, min(total, max_each) + 1):
        for rest in _shift_vectors(total - first, slots - 1, max_each):
            yield (-first,) + rest


def choose_exponents(g: MatrixTuple, cfg: ToleranceConfig = DEFAULT_TOL,
                     strategy: str = INFINITY_FIRST) -> SpectralData:
    """Pick logarithm branches so that the exponents lift the eigenvalues and sum to 0.

    Every exponent starts with real part in ``[0, 1)``; the integer total is
    then removed by shifting exponents.  ``"infinity"`` shifts exponents at
    infinity first with the fewest and smallest shifts; ``"balanced"``
    minimizes the largest ``|Re chi|`` and prefers low indices.  Exponents
    equal to 0 at finite points are never shifted, and shifts that make two
    exponents of one matrix differ by a nonzero integer are rejected.
    """
    if strategy not in (INFINITY_FIRST, BALANCED):
        raise ValueError(f"unknown strategy {strategy!r}")
    mats = list(g.matrices) + [g.at_infinity()]
    eta, chi, sizes = [], [], []
    for m in mats:
        row_e, row_c, row_s = [], [], []
        for center, mult, blocks in eigen_clusters(m, cfg):
            row_e.extend([center] * mult)
            row_c.extend([branch_exponent(center, cfg.eig_cluster_tol)] * mult)
            row_s.append(tuple(blocks))
        eta.append(tuple(row_e))
        chi.append(row_c)
        sizes.append(tuple(row_s))
    total = sum(sum(r) for r in chi)
    s = round(total.real)
    if abs(total - s) > 1e-8 * max(1, len(mats) * g.p):
        raise ResonantChoice(f"exponents sum to {total}, not an integer")
    n = g.n
    slots = [(i, k) for i in range(n + 1) for k in range(g.p)]

    def allowed(i, k):
        return i == n or abs(chi[i][k]) > 1e-12

    def evaluate(shift_map):
        new = [list(r) for r in chi]
        for (i, k), d in shift_map.items():
            new[i][k] += d
        for row in new:
            if _is_resonant(row, 1e-9):
                return None
        return new

    best = None
    if strategy == INFINITY_FIRST:
        groups = [[(n, k) for k in range(g.p)],
                  [sl for sl in slots if allowed(*sl)]]
        for group in groups:
            for vec in _shift_vectors(s, len(group), s):
                shift_map = {sl: d for sl, d in zip(group, vec) if d}
                new = evaluate(shift_map)
                if new is None:
                    continue
                key = (len(shift_map), max((abs(d) for d in vec), default=0))
                if best is None or key < best[0]:
                    best = (key, shift_map, new)
            if best is not None:
                break
    else:
        group = [sl for sl in slots if allowed(*sl)]
        for vec in _shift_vectors(s, len(group), s):
            shift_map = {sl: d for sl, d in zip(group, vec) if d}
            new = evaluate(shift_map)
            if new is None:
                continue
            spread = max(abs(x.real) for r in new for x in r)
            key = (round(spread, 12), len(shift_map),
                   tuple(sorted((i, k) for (i, k) in shift_map)))
            if best is None or key < best[0]:
                best = (key, shift_map, new)
    if best is None:
        raise ResonantChoice(
            f"no integer shift of total {-s} keeps every matrix non-resonant")
    _, shift_map, new = best
    shifts = tuple(sorted((i, k, d) for (i, k), d in shift_map.items()))
    return SpectralData(tuple(tuple(r) for r in new), tuple(eta), shifts, tuple(sizes))


def exponents_from_table(g: MatrixTuple, chi: Sequence, cfg: ToleranceConfig = DEFAULT_TOL,
                         tol: float = 1e-9) -> SpectralData:
    """Wrap a user-chosen exponent table after checking it lifts ``g``."""
    mats = list(g.matrices) + [g.at_infinity()]
    if len(chi) != len(mats):
        raise ValueError("need one exponent row per finite point plus infinity")
    eta = []
    for m, row in zip(mats, chi):
        ev = np.linalg.eigvals(m)
        lifted = [np.exp(2j * np.pi * complex(c)) for c in row]
        matched = []
        pool = list(ev)
        for z in lifted:
            k = int(np.argmin([abs(z - e) for e in pool]))
            if abs(z - pool[k]) > 1e-6 * max(1.0, abs(z)):
                raise ResonantChoice(f"exponent lift {z} is not an eigenvalue")
            matched.append(complex(pool.pop(k)))
        eta.append(tuple(matched))
    sd = SpectralData(tuple(tuple(complex(c) for c in r) for r in chi), tuple(eta))
    if abs(sd.total()) > tol:
        raise ResonantChoice(f"exponents sum to {sd.total()}, not 0")
    return sd


def nabla(sd: SpectralData) -> complex:
    """Off-diagonal entry of the upper-triangular residue in the type-I pair."""
    if sd.n != 2 or any(len(r) != 2 for r in sd.chi):
        raise ValueError("nabla needs 2x2 data at two finite points and infinity")
    (a1, a2), (b1, b2), (c1, c2) = sd.chi
    return (a1 + b1) * (a2 + b2) - c1 * c2


def type_one_residues(sd: SpectralData) -> tuple:
    (a1, a2), (b1, b2), _ = sd.chi
    nab = nabla(sd)
    return (np.array([[a1, 0], [1, a2]], dtype=complex),
            np.array([[b1, nab], [0, b2]], dtype=complex))


def _nabla_ok(sd: SpectralData, tol: float = 1e-12) -> bool:
    (a1, a2), (b1, b2), _ = sd.chi
    nab = nabla(sd)
    return abs(nab) > tol and abs(nab + (a1 - a2) * (b1 - b2)) > tol


def _check_verified(system: FuchsianSystem, target: MatrixTuple, icfg: IntegrationConfig,
                    cfg: ToleranceConfig, conj_tol: float):
    rep = verify_rh_solution(system, target, icfg, cfg, conj_tol=conj_tol)
    if not rep.success:
        raise VerificationFail(
            f"monodromy of the constructed system misses the target (residual {rep.residual:.3g})",
            rep.residual)
    return rep


def build_2x2_three_point(gt: MatrixTuple, points: Sequence, cfg: ToleranceConfig = DEFAULT_TOL,
                          exponents: SpectralData | None = None,
                          strategy: str = BALANCED, verify: bool = True,
                          icfg: IntegrationConfig = DEFAULT_INTEGRATION,
                          verify_tol: float = 1e-6) -> FuchsianSystem:
    """Type-I residue pair realizing an irreducible 2x2 pair with three singular points."""
    if gt.p != 2 or gt.n != 2:
        raise ValueError("the three-point construction needs a pair of 2x2 matrices")
    pts = check_points(points)
    if not is_irreducible_tuple(gt, cfg):
        raise Reducible("type-I residues need an irreducible monodromy pair")
    candidates = []
    if exponents is not None:
        candidates.append(exponents)
    else:
        sd = choose_exponents(gt, cfg, strategy)
        candidates.append(sd)
        # reordering eigenvalues inside a matrix changes nabla
        for swap in itertools.product((False, True), repeat=2):
            if any(swap):
                rows = [tuple(reversed(r)) if s else r for r, s in zip(sd.chi[:2], swap)]
                erows = [tuple(reversed(r)) if s else r for r, s in zip(sd.eta[:2], swap)]
                candidates.append(SpectralData(tuple(rows) + (sd.chi[2],),
                                               tuple(erows) + (sd.eta[2],), sd.shifts))
        other = BALANCED if strategy == INFINITY_FIRST else INFINITY_FIRST
        candidates.append(choose_exponents(gt, cfg, other))
    for sd in candidates:
        if _nabla_ok(sd):
            break
    else:
        raise DegenerateNabla("nabla constraints fail for every admissible branch choice")
    a1, a2 = type_one_residues(sd)
    system = FuchsianSystem(pts, MatrixTuple([a1, a2], RESIDUE))
    if verify:
        _check_verified(system, gt, icfg, cfg, verify_tol)
    return system


# ---------------------------------------------------------------------------
# numerical solver for more than three singular points


_STEP_ERRORS = (MidconvError, np.linalg.LinAlgError, FloatingPointError, ValueError)


class _ResidueParam:
    """Residue with fixed spectrum as a function of two complex parameters."""

    def __init__(self, chi: Sequence, jordan: bool):
        self.chi = tuple(complex(c) for c in chi)
        self.scalar = abs(self.chi[0] - self.chi[1]) < 1e-12 and not jordan
        self.jordan = jordan
        self.nparams = 0 if self.scalar else 2

    def matrix(self, x: Sequence) -> np.ndarray:
        c1, c2 = self.chi
        if self.scalar:
            return c1 * np.eye(2, dtype=complex)
        u, v = x
        if self.jordan:
            return c1 * np.eye(2) + np.array([[u * v, -u * u], [v * v, -u * v]])
        e = np.array([[1, u], [v, 1]], dtype=complex)
        return e @ np.diag([c1, c2]) @ np.linalg.inv(e)

    def gauge_point(self) -> tuple:
        return (0.0, 1.0) if self.jordan else (0.0, 0.0)


def _trace_words(n: int) -> list:
    words = [w for k in (2, 3) for w in itertools.combinations(range(n), k)]
    return words


def _word_traces(mats: Sequence, words: Sequence) -> np.ndarray:
    out = []
    for w in words:
        m = mats[w[0]]
        for k in w[1:]:
            m = m @ mats[k]
        out.append(np.trace(m))
    return np.array(out)


def solve_2x2_numeric(gt: MatrixTuple, points: Sequence, cfg: ToleranceConfig = DEFAULT_TOL,
                      exponents: SpectralData | None = None, restarts: int = 8, seed: int = 0,
                      icfg: IntegrationConfig = DEFAULT_INTEGRATION, max_iter: int = 60,
                      verify_tol: float | None = None,
                      strategy: str = BALANCED) -> FuchsianSystem:
    """Non-resonant 2x2 system with prescribed exponents whose monodromy is ``gt``.

    Residues are written ``E_i J_i E_i^{-1}`` with ``J_i`` the Jordan form fixed
    by the exponents; the unknown frames are found by Levenberg-Marquardt on the
    conjugation invariants (traces of words of length 2 and 3) plus the
    determinant of the residue at infinity.

    Without explicit ``exponents`` both branch strategies are tried, ``strategy``
    first: concentrating the integer shifts on one exponent can leave no
    Fuchsian system with that spectrum.
    """
    if gt.p != 2:
        raise ValueError("the numerical solver handles 2x2 tuples")
    pts = check_points(points)
    if len(pts) != gt.n:
        raise ValueError("one point per monodromy matrix is required")
    if not is_irreducible_tuple(gt, cfg):
        raise Reducible("the numerical solver needs an irreducible target")
    verify_tol = cfg.conj_tol if verify_tol is None else verify_tol
    if exponents is not None:
        tables = [exponents]
    else:
        tables = []
        for strat in (strategy, INFINITY_FIRST if strategy == BALANCED else BALANCED):
            sd = choose_exponents(gt, cfg, strat)
            if not any(np.allclose(np.array(sd.chi), np.array(t.chi)) for t in tables):
                tables.append(sd)
    rng = np.random.default_rng(seed)
    best = np.inf
    for sd in tables:
        system, res = _newton_solve(gt, pts, sd, cfg, icfg, restarts, rng, max_iter, verify_tol)
        if system is not None:
            return system
        best = min(best, res)
    raise NoConvergence(f"no start reached the target monodromy (best residual {best:.3g})",
                        best)


def _newton_solve(gt, pts, sd, cfg, icfg, restarts, rng, max_iter, verify_tol):
    params = []
    for i in range(gt.n):
        jordan = bool(sd.block_sizes) and any(2 in b for b in sd.block_sizes[i])
        params.append(_ResidueParam(sd.chi[i], jordan))
    fixed_idx = _first_free(params)
    free = [i for i, prm in enumerate(params) if prm.nparams and i != fixed_idx]
    words = _trace_words(gt.n)
    target = np.concatenate([_word_traces(gt.matrices, words),
                             [sd.chi[-1][0] * sd.chi[-1][1]]])
    weights = 1.0 / np.maximum(1.0, np.abs(target))
    loose = IntegrationConfig(rel_tol=1e-10, abs_tol=1e-12, det_tol=1e-6,
                              radius_factor=icfg.radius_factor,
                              safety_margin=icfg.safety_margin)

    def residues_of(x):
        mats = []
        it = iter(range(len(x)))
        for i, prm in enumerate(params):
            if i in free:
                a, b = next(it), next(it)
                mats.append(prm.matrix((x[a], x[b])))
            elif i == fixed_idx:
                mats.append(prm.matrix(prm.gauge_point()))
            else:
                mats.append(prm.matrix(()))
        return mats

    def resid(x):
        mats = residues_of(x)
        mon = compute_monodromy(FuchsianSystem(pts, MatrixTuple(mats, RESIDUE)), loose)
        tr = _word_traces(mon.tuple.matrices, words)
        det_inf = np.linalg.det(-sum(mats))
        return (np.concatenate([tr, [det_inf]]) - target) * weights

    nx = 2 * len(free)
    best = np.inf
    for attempt in range(restarts):
        x = 0.7 * (rng.standard_normal(nx) + 1j * rng.standard_normal(nx))
        try:
            x, rnorm = _levenberg_marquardt(resid, x, max_iter)
        except _STEP_ERRORS as exc:
            log.debug("start %d failed: %s", attempt, exc)
            continue
        log.debug("start %d: residual %.3g", attempt, rnorm)
        best = min(best, rnorm)
        if rnorm < 1e-9:
            system = FuchsianSystem(pts, MatrixTuple(residues_of(x), RESIDUE))
            rep = verify_rh_solution(system, gt, icfg, cfg, conj_tol=verify_tol)
            if rep.success:
                return system, rep.residual
            log.debug("start %d converged but verification residual is %.3g",
                      attempt, rep.residual)
    return None, best


def _first_free(params) -> int | None:
    for i, prm in enumerate(params):
        if prm.nparams:
            return i
    return None


def _levenberg_marquardt(fun, x0: np.ndarray, max_iter: int):
    """Complex Levenberg-Marquardt for a holomorphic residual ``fun``."""
    x = np.array(x0, dtype=complex)
    r = fun(x)
    rn = float(np.linalg.norm(r))
    mu = 1e-3
    for _ in range(max_iter):
        if rn < 1e-12:
            break
        jac = np.empty((len(r), len(x)), dtype=complex)
        for k in range(len(x)):
            h = 1e-6 * max(1.0, abs(x[k]))
            xp, xm = x.copy(), x.copy()
            xp[k] += h
            xm[k] -= h
            jac[:, k] = (fun(xp) - fun(xm)) / (2 * h)
        jh = jac.conj().T
        jtj = jh @ jac
        g = jh @ r
        improved = False
        for _ in range(12):
            step = np.linalg.solve(jtj + mu * np.diag(np.maximum(np.real(np.diag(jtj)), 1e-12)), -g)
            xn = x + step
            try:
                rn_new_vec = fun(xn)
            except _STEP_ERRORS:
                # the step ran into a singular frame or a stiff path
                mu *= 10
                continue
            rn_new = float(np.linalg.norm(rn_new_vec))
            if rn_new < rn:
                x, r, rn = xn, rn_new_vec, rn_new
                mu = max(mu / 5, 1e-12)
                improved = True
                break
            mu *= 10
        if not improved:
            break
    return x, rn


# ---------------------------------------------------------------------------
# general scheme


def lambda_candidates(g: MatrixTuple, cfg: ToleranceConfig = DEFAULT_TOL,
                      extras: Sequence = ()) -> list:
    """Candidate convolution parameters with their predicted dimensions.

    Reciprocals of eigenvalues of each ``G_i`` and of ``G_1 ... G_n``, without
    0 and 1, sorted by predicted dimension then by decreasing ``|lambda - 1|``;
    user extras follow.  Returns ``[(lambda, dim), ...]``.
    """
    vals = []
    for m in list(g.matrices) + [g.product()]:
        for center, _, _ in eigen_clusters(m, cfg):
            vals.append(1.0 / center)
    uniq = []
    for v in vals:
        if abs(v) < 1e-14 or abs(v - 1) <= 1e-9:
            continue
        if all(abs(v - u) > 1e-9 * max(1.0, abs(u)) for u in uniq):
            uniq.append(complex(v))
    ranked = sorted(((lam, predicted_dim(g, lam, cfg)) for lam in uniq),
                    key=lambda e: (e[1], -abs(e[0] - 1), e[0].real, e[0].imag))
    for v in extras:
        v = complex(v)
        if v in (0, 1) or any(abs(v - u) <= 1e-12 for u, _ in ranked):
            continue
        ranked.append((v, predicted_dim(g, v, cfg)))
    return ranked


def lift_parameters(lam: complex) -> list:
    """``nu`` with ``exp(2 pi i nu) = 1/lambda``: the ``0 <= Re < 1`` branch, then integer shifts."""
    nu0 = branch_exponent(1.0 / complex(lam))
    return [nu0 + k for k in (0, 1, -1, 2, -2)]


def system_exponents(system: FuchsianSystem) -> SpectralData:
    """Eigenvalues of the residues (infinity last) with the monodromy eigenvalues they lift."""
    rows = []
    for m in list(system.residues) + [system.residue_at_infinity()]:
        try:
            ev = [c for c, mult, _ in eigen_clusters(m) for _ in range(mult)]
        except ClusterAmbiguous:
            ev = sorted(np.linalg.eigvals(m), key=lambda z: (z.real, z.imag))
        rows.append(tuple(complex(x) for x in ev))
    eta = tuple(tuple(complex(np.exp(2j * np.pi * x)) for x in r) for r in rows)
    return SpectralData(tuple(rows), eta)


def _solve_reduced(gt: MatrixTuple, pts, cfg, icfg, seed, restarts, strategy):
    if gt.n == 2:
        return build_2x2_three_point(gt, pts, cfg, strategy=strategy, icfg=icfg)
    return solve_2x2_numeric(gt, pts, cfg, restarts=restarts, seed=seed, icfg=icfg,
                             strategy=strategy)


def general_scheme_solve(g: MatrixTuple, points: Sequence, cfg: ToleranceConfig = DEFAULT_TOL,
                         icfg: IntegrationConfig = DEFAULT_INTEGRATION, extras: Sequence = (),
                         seed: int = 0, restarts: int = 8, verify_tol: float = 1e-6,
                         strategy: str = BALANCED):
    """Fuchsian system with singular points ``points`` (plus infinity) and monodromy ``g``.

    Returns ``(system, trace)``.
    """
    pts = check_points(points)
    if len(pts) != g.n:
        raise ValueError(f"{g.n} monodromy matrices but {len(pts)} points")
    if g.role != MONODROMY:
        raise ValueError("general_scheme_solve needs a monodromy tuple")
    if not is_irreducible_tuple(g, cfg):
        raise TheoremConditionsFail("the monodromy tuple is reducible", "irreducibility")
    cond = check_conditions(g, cfg)
    if not cond.star_ok:
        raise TheoremConditionsFail(f"condition (*) fails: {cond.star_witnesses}", "1")
    if not cond.star_star_ok:
        raise TheoremConditionsFail(f"condition (**) fails: {cond.star_star_witnesses}", "2")

    if g.p == 2:
        system = _solve_reduced(g, pts, cfg, icfg, seed, restarts, strategy)
        rep = _check_verified(system, g, icfg, cfg, verify_tol)
        trace = SchemeTrace(None, [], g, system, None, system, cond,
                            exponents=system_exponents(system),
                            residual=rep.residual, relation_defect=rep.relation_defect,
                            notes=["tuple is already 2x2: no reduction"])
        return system, trace

    cands = lambda_candidates(g, cfg, extras)
    viable = [(lam, d) for lam, d in cands if d == 2]
    if not viable:
        raise NoLambda("no candidate lambda gives a 2-dimensional middle convolution")

    failures = []
    for lam, _ in viable:
        gt = middle_convolve_mult(g, lam, cfg)
        if gt.p != 2:
            failures.append(f"lambda={lam:.6g}: MC has size {gt.p}")
            continue
        try:
            reduced = _solve_reduced(gt, pts, cfg, icfg, seed, restarts, strategy)
        except (Reducible, DegenerateNabla, NoConvergence, ResonantChoice,
                VerificationFail) as exc:
            failures.append(f"lambda={lam:.6g}: reduced problem failed ({exc})")
            continue
        theorem = None
        for nu in lift_parameters(lam):
            rep = check_mc_theorem_conditions(reduced.residues, gt, nu, cfg)
            if rep.ok:
                theorem = rep
                break
            theorem = theorem or rep
        if not theorem.ok:
            failures.append(f"lambda={lam:.6g}: theorem condition {theorem.first_failure()} fails")
            continue
        nu = theorem.nu
        final_res = middle_convolve_add(reduced.residues, nu, cfg)
        if final_res.p != g.p:
            failures.append(f"lambda={lam:.6g}: lift has size {final_res.p}")
            continue
        final = FuchsianSystem(pts, final_res)
        ver = verify_rh_solution(final, g, icfg, cfg, conj_tol=verify_tol)
        trace = SchemeTrace(lam, cands, gt, reduced, nu, final, cond, theorem,
                            exponents=system_exponents(reduced),
                            residual=ver.residual, relation_defect=ver.relation_defect,
                            notes=list(ver.notes))
        if not ver.success:
            raise VerificationFail(
                f"final monodromy misses the input (residual {ver.residual:.3g})", ver.residual)
        return final, trace
    if any("theorem condition" in f for f in failures):
        raise TheoremConditionsFail("; ".join(failures), "3/4")
    raise NoLambda("; ".join(failures))


def row_supported_form(a: MatrixTuple, cfg: ToleranceConfig = DEFAULT_TOL):
    """Conjugate a tuple of rank-one residues so that ``A_i`` lives in row ``i``.

    Possible when every ``A_i`` has rank 1 and their images span ``C^n``;
    returns ``(tuple, C)`` with ``tuple_i = C^{-1} A_i C`` or ``None``.
    """
    if a.p != a.n or any(numeric_rank(m, cfg) != 1 for m in a):
        return None
    cols = []
    for m in a:
        u, _, _ = np.linalg.svd(m)
        cols.append(u[:, 0])
    c = np.column_stack(cols)
    if numeric_rank(c, cfg) < a.p:
        return None
    ci = np.linalg.inv(c)
    return MatrixTuple([ci @ m @ c for m in a], a.role, check=False), c
