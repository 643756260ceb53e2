"""Convolution and middle convolution of matrix tuples.

Multiplicative form ``MC_lambda`` acts on monodromy tuples, additive form
``mc_nu`` on residue tuples.  The additive parameter ``nu`` corresponds to the
multiplicative parameter ``lambda = exp(2 pi i nu)``.

The quotient ``C^{np} / (K + L)`` is identified with ``C^m`` through a fixed
complement basis, so outputs are deterministic; every equality claim about
them holds only up to one simultaneous conjugation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .cxmat import (
    DEFAULT_TOL,
    MONODROMY,
    RESIDUE,
    JordanStructure,
    MatrixTuple,
    ToleranceConfig,
    complement_basis,
    eigen_clusters,
    kernel_basis,
    numeric_rank,
)
from .errors import BadParameter, DependentSubspaces, Inconsistent

MULTIPLICATIVE = "multiplicative"
ADDITIVE = "additive"


@dataclass(frozen=True)
class ConvolutionBlocks:
    kind: str
    parameter: complex
    blocks: tuple
    source: MatrixTuple


@dataclass(frozen=True)
class QuotientFrame:
    K_basis: np.ndarray
    L_basis: np.ndarray
    complement_basis: np.ndarray
    m: int


@dataclass
class ConditionReport:
    star_ok: bool
    star_star_ok: bool
    star_witnesses: list = field(default_factory=list)
    star_star_witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.star_ok and self.star_star_ok


@dataclass
class TheoremReport:
    """Conditions 1-4 for the additive/multiplicative bridge."""

    nu: complex
    lam: complex
    star: bool
    star_star: bool
    ranks_match: bool
    infinity_rank_match: bool
    rank_pairs: list = field(default_factory=list)
    infinity_ranks: tuple = (0, 0)

    @property
    def conditions(self) -> dict:
        return {1: self.star, 2: self.star_star, 3: self.ranks_match, 4: self.infinity_rank_match}

    @property
    def ok(self) -> bool:
        return all(self.conditions.values())

    def first_failure(self):
        for k, v in self.conditions.items():
            if not v:
                return k
        return None


def build_mult_blocks(g: MatrixTuple, lam: complex) -> ConvolutionBlocks:
    lam = complex(lam)
    if lam == 0:
        raise BadParameter("lambda must be nonzero")
    n, p = g.n, g.p
    eye = np.eye(p)
    blocks = []
    for k in range(n):
        mk = np.eye(n * p, dtype=complex)
        row = slice(k * p, (k + 1) * p)
        for j in range(n):
            col = slice(j * p, (j + 1) * p)
            if j < k:
                mk[row, col] = lam * (g[j] - eye)
            elif j == k:
                mk[row, col] = lam * g[j]
            else:
                mk[row, col] = g[j] - eye
        blocks.append(mk)
    return ConvolutionBlocks(MULTIPLICATIVE, lam, tuple(blocks), g)


def build_add_blocks(a: MatrixTuple, nu: complex) -> ConvolutionBlocks:
    nu = complex(nu)
    n, p = a.n, a.p
    blocks = []
    for k in range(n):
        bk = np.zeros((n * p, n * p), dtype=complex)
        row = slice(k * p, (k + 1) * p)
        for j in range(n):
            bk[row, j * p:(j + 1) * p] = a[j]
        bk[row, row] += nu * np.eye(p)
        blocks.append(bk)
    return ConvolutionBlocks(ADDITIVE, nu, tuple(blocks), a)


def _norm_scale(*mats) -> float:
    """Absolute size that differences of these matrices are measured against."""
    return max([1.0] + [float(np.linalg.norm(m, 2)) for m in mats if np.size(m)])


def _embed(basis: np.ndarray, k: int, n: int, p: int) -> np.ndarray:
    out = np.zeros((n * p, basis.shape[1]), dtype=complex)
    out[k * p:(k + 1) * p] = basis
    return out


def quotient_frame(cb: ConvolutionBlocks, cfg: ToleranceConfig = DEFAULT_TOL) -> QuotientFrame:
    src = cb.source
    n, p = src.n, src.p
    eye = np.eye(p)
    if cb.kind == MULTIPLICATIVE:
        local = [kernel_basis(src[k] - eye, cfg, _norm_scale(src[k])) for k in range(n)]
        prod = np.eye(n * p, dtype=complex)
        for mk in cb.blocks:
            prod = prod @ mk
        l_basis = kernel_basis(prod - np.eye(n * p), cfg, _norm_scale(prod))
        degenerate = cb.parameter == 1
    else:
        sc = _norm_scale(*src.matrices, cb.parameter * eye)
        local = [kernel_basis(src[k], cfg, sc) for k in range(n)]
        l_basis = kernel_basis(sum(cb.blocks), cfg, sc)
        degenerate = cb.parameter == 0
    k_basis = np.hstack([_embed(b, k, n, p) for k, b in enumerate(local)])
    both = np.hstack([k_basis, l_basis])
    r = numeric_rank(both, cfg) if both.shape[1] else 0
    if r < both.shape[1] and not degenerate:
        raise DependentSubspaces(
            f"K and L overlap (dim K={k_basis.shape[1]}, dim L={l_basis.shape[1]}, "
            f"dim K+L={r})")
    comp = complement_basis(both, n * p, cfg)
    return QuotientFrame(k_basis, l_basis, comp, comp.shape[1])


def _induced_action(cb: ConvolutionBlocks, frame: QuotientFrame) -> list:
    # the complement is orthonormal and orthogonal to K + L, so coordinates
    # of the quotient class are the orthogonal projection onto it
    w = frame.complement_basis
    return [w.conj().T @ mk @ w for mk in cb.blocks]


def middle_convolve_mult(g: MatrixTuple, lam: complex,
                         cfg: ToleranceConfig = DEFAULT_TOL) -> MatrixTuple:
    lam = complex(lam)
    if lam == 1:
        warnings.warn("MC with lambda = 1: the dimension formula does not apply", stacklevel=2)
    cb = build_mult_blocks(g, lam)
    frame = quotient_frame(cb, cfg)
    if frame.m == 0:
        return MatrixTuple.empty(g.n, MONODROMY)
    return MatrixTuple(_induced_action(cb, frame), MONODROMY, check=False)


def middle_convolve_add(a: MatrixTuple, nu: complex,
                        cfg: ToleranceConfig = DEFAULT_TOL) -> MatrixTuple:
    cb = build_add_blocks(a, nu)
    frame = quotient_frame(cb, cfg)
    if frame.m == 0:
        return MatrixTuple.empty(a.n, RESIDUE)
    return MatrixTuple(_induced_action(cb, frame), RESIDUE, check=False)


def predicted_dim(g: MatrixTuple, lam: complex, cfg: ToleranceConfig = DEFAULT_TOL) -> int:
    lam = complex(lam)
    if lam in (0, 1):
        raise BadParameter("the dimension formula needs lambda not in {0, 1}")
    eye = np.eye(g.p)
    prod = lam * g.product()
    return (sum(numeric_rank(gk - eye, cfg, _norm_scale(gk)) for gk in g) - g.p
            + numeric_rank(prod - eye, cfg, _norm_scale(prod)))


def predicted_dim_add(a: MatrixTuple, nu: complex, cfg: ToleranceConfig = DEFAULT_TOL) -> int:
    """Additive counterpart: ``sum rk(A_k) - p + rk(A_1 + ... + A_n + nu I)``."""
    nu = complex(nu)
    if nu == 0:
        raise BadParameter("the dimension formula needs nu != 0")
    sc = _norm_scale(*a.matrices, nu * np.eye(a.p))
    return (sum(numeric_rank(ak, cfg, sc) for ak in a) - a.p
            + numeric_rank(sum(a.matrices) + nu * np.eye(a.p), cfg, sc))


# ---------------------------------------------------------------------------
# conditions (*) and (**)


def _star_witnesses(g: MatrixTuple, cfg: ToleranceConfig) -> list:
    """Pairs ``(i, tau)`` (1-based i) for which condition (*) fails."""
    n, p = g.n, g.p
    eye = np.eye(p)
    out = []
    for i in range(n):
        sc = _norm_scale(*g.matrices)
        others = [g[j] - eye for j in range(n) if j != i]
        fixed = kernel_basis(np.vstack(others), cfg, sc) if others else np.eye(p, dtype=complex)
        if fixed.shape[1] == 0:
            continue
        for eta, _, _ in eigen_clusters(g[i], cfg):
            stacked = np.vstack(others + [g[i] - eta * eye])
            if numeric_rank(stacked, cfg, sc) < p:
                out.append((i + 1, complex(1.0 / eta)))
    return out


def check_conditions(g: MatrixTuple, cfg: ToleranceConfig = DEFAULT_TOL) -> ConditionReport:
    """Conditions (*) and (**) for every ``tau != 0``.

    (*) fails exactly when some eigenvector of ``G_i`` (eigenvalue ``1/tau``)
    is fixed by all other ``G_j``; (**) is (*) for the transposed tuple.
    """
    star = _star_witnesses(g, cfg)
    star_star = _star_witnesses(g.transpose(), cfg)
    return ConditionReport(not star, not star_star, star, star_star)


def check_mc_theorem_conditions(a: MatrixTuple, g: MatrixTuple, nu: complex,
                                cfg: ToleranceConfig = DEFAULT_TOL) -> TheoremReport:
    """Conditions under which ``Mon(mc_nu(A)) ~ MC_lambda(Mon(A))``, ``lambda = exp(2 pi i nu)``."""
    if a.n != g.n or a.p != g.p:
        raise ValueError("residue and monodromy tuples must have matching shapes")
    nu = complex(nu)
    lam = complex(np.exp(2j * np.pi * nu))
    cond = check_conditions(g, cfg)
    eye = np.eye(g.p)
    sa = _norm_scale(*a.matrices, nu * eye)
    prod = lam * g.product()
    pairs = [(numeric_rank(ak, cfg, sa), numeric_rank(gk - eye, cfg, _norm_scale(gk)))
             for ak, gk in zip(a, g)]
    inf_ranks = (numeric_rank(sum(a.matrices) + nu * eye, cfg, sa),
                 numeric_rank(prod - eye, cfg, _norm_scale(prod)))
    return TheoremReport(
        nu=nu, lam=lam,
        star=cond.star_ok, star_star=cond.star_star_ok,
        ranks_match=all(x == y for x, y in pairs),
        infinity_rank_match=inf_ranks[0] == inf_ranks[1],
        rank_pairs=pairs, infinity_ranks=inf_ranks,
    )


# ---------------------------------------------------------------------------
# Jordan block bookkeeping


def predict_jordan_mc(j: JordanStructure, lam: complex, position: str, m: int,
                      tol: float = 1e-6) -> JordanStructure:
    """Jordan structure of the convolved matrix predicted from the input one.

    ``position`` is ``"finite"`` (``j`` describes ``G_i``) or ``"infinity"``
    (``j`` describes ``G_1 ... G_n``).
    """
    lam = complex(lam)
    if lam in (0, 1):
        raise BadParameter("lambda must not be 0 or 1")
    if position not in ("finite", "infinity"):
        raise ValueError("position must be 'finite' or 'infinity'")
    inv = 1.0 / lam
    sign = 1 if position == "finite" else -1
    out: list = []

    def push(ev, size):
        for entry in out:
            if abs(entry[0] - ev) <= tol * max(1.0, abs(ev)):
                entry[1].append(size)
                return
        out.append([ev, [size]])

    for alpha, size in j.block_list():
        if abs(alpha - 1) <= tol:
            new = size - sign
        elif abs(alpha - inv) <= tol * max(1.0, abs(inv)):
            new = size + sign
        else:
            new = size
        if new > 0:
            push(alpha * lam, new)
    total = sum(sum(s) for _, s in out)
    pad = m - total
    if pad < 0:
        raise Inconsistent(f"predicted blocks need {total} > m={m} dimensions")
    fill = 1.0 if position == "finite" else lam
    for _ in range(pad):
        push(fill, 1)
    return JordanStructure([(ev, sizes) for ev, sizes in out])
