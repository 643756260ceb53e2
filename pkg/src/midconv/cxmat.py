"""Dense complex linear algebra used by the convolution and monodromy code.

Matrices are plain ``numpy`` complex arrays.  Tuples of matrices carry a role
tag so that monodromy tuples (invertible) and residue tuples are never mixed up.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg as sla

from .errors import ClusterAmbiguous, Singular

TWO_PI_I = 2j * np.pi
_EPS = np.finfo(float).eps

MONODROMY = "monodromy"
RESIDUE = "residue"
ROLES = (MONODROMY, RESIDUE)


@dataclass(frozen=True)
class ToleranceConfig:
    rank_rel_tol: float = 1e-10
    eig_cluster_tol: float = 1e-8
    conj_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rel_tol", "eig_cluster_tol", "conj_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")

    def with_conj_tol(self, conj_tol: float) -> "ToleranceConfig":
        return ToleranceConfig(self.rank_rel_tol, self.eig_cluster_tol, conj_tol)


DEFAULT_TOL = ToleranceConfig()


def as_cmatrix(m) -> np.ndarray:
    """Validate and convert to a square complex128 array (copy)."""
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class MatrixTuple:
    """Ordered tuple ``(M_1, ..., M_n)`` of same-size square matrices.

    The matrix at infinity is never stored: for a monodromy tuple it is
    ``(M_1 ... M_n)^{-1}``, for a residue tuple ``-(M_1 + ... + M_n)``.
    A tuple of size ``p == 0`` is the empty result of a middle convolution.
    """

    matrices: tuple
    role: str = MONODROMY

    def __init__(self, matrices: Iterable, role: str = MONODROMY, check: bool = True):
        mats = tuple(as_cmatrix(m) for m in matrices)
        if role not in ROLES:
            raise ValueError(f"role must be one of {ROLES}, got {role!r}")
        if not mats:
            raise ValueError("a matrix tuple needs at least one matrix")
        p = mats[0].shape[0]
        if any(m.shape != (p, p) for m in mats):
            raise ValueError("all matrices of a tuple must share one size")
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "role", role)
        if check and role == MONODROMY and p > 0:
            for i, m in enumerate(mats):
                if numeric_rank(m) < p:
                    raise Singular(f"monodromy matrix {i + 1} is not invertible")

    @classmethod
    def empty(cls, n: int, role: str = MONODROMY) -> "MatrixTuple":
        return cls([np.zeros((0, 0), dtype=complex)] * n, role)

    @property
    def p(self) -> int:
        return self.matrices[0].shape[0]

    @property
    def n(self) -> int:
        return len(self.matrices)

    @property
    def is_empty(self) -> bool:
        return self.p == 0

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i) -> np.ndarray:
        return self.matrices[i]

    def __iter__(self):
        return iter(self.matrices)

    def product(self) -> np.ndarray:
        """``M_1 M_2 ... M_n``."""
        out = np.eye(self.p, dtype=complex)
        for m in self.matrices:
            out = out @ m
        return out

    def at_infinity(self) -> np.ndarray:
        if self.role == MONODROMY:
            return np.linalg.inv(self.product())
        return -sum(self.matrices)

    def conjugate_by(self, c) -> "MatrixTuple":
        """Return ``(C M_i C^{-1})``."""
        c = np.asarray(c, dtype=complex)
        ci = np.linalg.inv(c)
        return MatrixTuple([c @ m @ ci for m in self.matrices], self.role, check=False)

    def transpose(self) -> "MatrixTuple":
        return MatrixTuple([m.T for m in self.matrices], self.role, check=False)


@dataclass(frozen=True)
class JordanStructure:
    """Eigenvalues with the multiset of Jordan block sizes attached to each."""

    blocks: tuple = field(default_factory=tuple)

    def __init__(self, blocks: Iterable = ()):
        norm = []
        for ev, sizes in blocks:
            sizes = tuple(sorted((int(s) for s in sizes), reverse=True))
            if any(s <= 0 for s in sizes):
                raise ValueError("Jordan block sizes must be positive")
            if sizes:
                norm.append((complex(ev), sizes))
        norm.sort(key=lambda e: (round(e[0].real, 9), round(e[0].imag, 9)))
        object.__setattr__(self, "blocks", tuple(norm))

    @property
    def size(self) -> int:
        return sum(sum(s) for _, s in self.blocks)

    def block_list(self) -> list:
        """Flat list of ``(eigenvalue, size)`` pairs."""
        return [(ev, s) for ev, sizes in self.blocks for s in sizes]

    def matches(self, other: "JordanStructure", tol: float = 1e-6) -> bool:
        if len(self.blocks) != len(other.blocks):
            return False
        unused = list(other.blocks)
        for ev, sizes in self.blocks:
            for k, (ev2, sizes2) in enumerate(unused):
                if abs(ev - ev2) <= tol * max(1.0, abs(ev)) and sizes == sizes2:
                    del unused[k]
                    break
            else:
                return False
        return True

    def __str__(self) -> str:
        parts = [f"({_fmt_c(ev)}, {{{','.join(map(str, s))}}})" for ev, s in self.blocks]
        return "[" + ", ".join(parts) + "]"


def _fmt_c(z: complex) -> str:
    z = complex(z)
    if abs(z.imag) < 1e-12:
        return f"{z.real:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}i"


# ---------------------------------------------------------------------------
# ranks and kernels


def _rank_threshold(s: np.ndarray, p: int, cfg: ToleranceConfig, scale: float = 0.0) -> float:
    return cfg.rank_rel_tol * max(s[0], scale) * max(p, 1)


def numeric_rank(m, cfg: ToleranceConfig = DEFAULT_TOL, scale: float = 0.0) -> int:
    """Singular values above ``rank_rel_tol * p * max(sigma_max, scale)``.

    ``scale`` guards differences such as ``G - I``: when ``G`` is the
    identity up to rounding, the difference is pure noise and must count as
    zero, which a purely relative threshold cannot see.
    """
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0
    s = sla.svd(m, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > _rank_threshold(s, max(m.shape), cfg, scale)))


def kernel_basis(m, cfg: ToleranceConfig = DEFAULT_TOL, scale: float = 0.0) -> np.ndarray:
    """Orthonormal basis of the numerical null space, as columns.

    The basis is made canonical (independent of LAPACK's arbitrary unitary
    freedom inside the null space) by a pivoted QR of its projector.
    """
    m = np.asarray(m, dtype=complex)
    ncols = m.shape[1]
    if ncols == 0:
        return np.zeros((0, 0), dtype=complex)
    if m.shape[0] == 0:
        return np.eye(ncols, dtype=complex)
    _, s, vh = sla.svd(m)
    r = 0 if s[0] == 0.0 else int(np.sum(s > _rank_threshold(s, max(m.shape), cfg, scale)))
    null = vh[r:].conj().T
    return _canonical_basis(null)


def _canonical_basis(v: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of ``span(v)`` for orthonormal ``v``."""
    d = v.shape[1]
    if d == 0:
        return v
    proj = v @ v.conj().T
    q, _, _ = sla.qr(proj, pivoting=True)
    q = q[:, :d]
    # fix the phase of each column: largest-modulus entry real positive
    for j in range(d):
        k = int(np.argmax(np.abs(q[:, j])))
        q[:, j] *= abs(q[k, j]) / q[k, j]
    return q


def orth_basis(v: np.ndarray, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the column span of ``v`` (numerical rank)."""
    if v.shape[1] == 0:
        return v
    u, s, _ = sla.svd(v, full_matrices=False)
    if s[0] == 0.0:
        return u[:, :0]
    r = int(np.sum(s > _rank_threshold(s, max(v.shape), cfg)))
    return u[:, :r]


def complement_basis(span: np.ndarray, dim: int, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal complement of ``span`` in ``C^dim`` chosen from the standard basis.

    Standard basis vectors are orthogonalized against ``span`` and picked by
    column pivoting (largest remaining norm first, lowest index on ties).
    """
    q = orth_basis(span, cfg) if span.shape[1] else span
    m = dim - q.shape[1]
    if m <= 0:
        return np.zeros((dim, 0), dtype=complex)
    resid = np.eye(dim, dtype=complex) - q @ q.conj().T
    qq, _, _ = sla.qr(resid, pivoting=True)
    return qq[:, :m]


# ---------------------------------------------------------------------------
# spectral clustering and block diagonalization


def _scale(m: np.ndarray) -> float:
    return max(1.0, float(np.linalg.norm(m, 2))) if m.size else 1.0


def _single_linkage(values: np.ndarray, tol: float) -> list:
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in itertools.combinations(range(n), 2):
        if abs(values[i] - values[j]) <= tol:
            parent[find(i)] = find(j)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [sorted(g) for g in groups.values()]


def _nullity_sequence(m: np.ndarray, alpha: complex, kmax: int, scale: float,
                      cfg: ToleranceConfig, dim: int | None = None) -> list:
    """Nullities of ``(m - alpha I)^k`` for k = 1..kmax.

    Singular values are compared with ``scale**k`` rather than with the largest
    singular value of the power, so a numerically split Jordan block still
    registers as nilpotent.
    """
    p = m.shape[0]
    dim = p if dim is None else dim
    shifted = m - alpha * np.eye(p)
    power = np.eye(p, dtype=complex)
    out = []
    for k in range(1, kmax + 1):
        power = power @ shifted
        s = sla.svd(power, compute_uv=False)
        thr = cfg.rank_rel_tol * max(dim, 1) * scale ** k
        out.append(p - int(np.sum(s > thr)))
    return out


def _cluster_block(m: np.ndarray, center: complex, mult: int, others: Sequence):
    """Compression of ``m`` to the invariant subspace of one cluster (or None)."""
    if not others:
        return m

    def select(x):
        d0 = abs(x - center)
        return all(d0 < abs(x - o) for o in others)

    t, _, sdim = sla.schur(m, output="complex", sort=select)
    if sdim != mult:
        return None
    return t[:mult, :mult]


def _cluster_sizes(m, center, mult, others, scale, cfg):
    block = _cluster_block(m, center, mult, others)
    if block is None:
        return None, None
    nul = _nullity_sequence(block, center, mult, scale, cfg, dim=m.shape[0])
    sizes = _blocks_from_nullities(nul)
    if sizes is None or nul[-1] != mult or sum(sizes) != mult:
        return None, nul
    return sizes, nul


def _blocks_from_nullities(nul: list) -> list | None:
    """Jordan block sizes from nullities n_1..n_m, or None if inconsistent."""
    seq = [0] + list(nul)
    ge = [seq[k] - seq[k - 1] for k in range(1, len(seq))]  # blocks of size >= k
    if any(g < 0 for g in ge) or any(ge[k] < ge[k + 1] for k in range(len(ge) - 1)):
        return None
    sizes = []
    for k in range(len(ge)):
        nxt = ge[k + 1] if k + 1 < len(ge) else 0
        sizes.extend([k + 1] * (ge[k] - nxt))
    return sizes


def eigen_clusters(m, cfg: ToleranceConfig = DEFAULT_TOL) -> list:
    """Group the eigenvalues of ``m`` into clusters of numerically equal values.

    Returns a list of ``(center, multiplicity, block_sizes)``.  Clusters closer
    than the Jordan-splitting radius ``~(eps*||m||)^(1/k)`` are merged when the
    rank sequence of the merged cluster is consistent with a single eigenvalue.
    """
    m = np.asarray(m, dtype=complex)
    p = m.shape[0]
    if p == 0:
        return []
    scale = _scale(m)
    ev = sla.eigvals(m)
    groups = _single_linkage(ev, cfg.eig_cluster_tol * scale)
    clusters = [[ev[g].mean(), len(g)] for g in groups]

    # first try whole groups of nearby clusters (a split Jordan block can
    # need all its pieces at once), then pairs
    wide = 100.0 * (_EPS ** (1.0 / p)) * scale
    comps = _single_linkage(np.array([c for c, _ in clusters]), wide)
    if any(len(g) > 1 for g in comps):
        new = []
        for g in comps:
            mt = sum(clusters[k][1] for k in g)
            center = sum(clusters[k][0] * clusters[k][1] for k in g) / mt
            others = [clusters[k][0] for k in range(len(clusters)) if k not in g]
            if len(g) > 1 and _cluster_sizes(m, center, mt, others, scale, cfg)[0] is not None:
                new.append([center, mt])
            else:
                new.extend(clusters[k] for k in g)
        clusters = new

    merged = True
    while merged and len(clusters) > 1:
        merged = False
        cands = []
        for a, b in itertools.combinations(range(len(clusters)), 2):
            (ca, ma), (cb, mb) = clusters[a], clusters[b]
            radius = 100.0 * (_EPS ** (1.0 / (ma + mb))) * scale
            d = abs(ca - cb)
            if d <= radius:
                cands.append((d, a, b))
        for _, a, b in sorted(cands):
            (ca, ma), (cb, mb) = clusters[a], clusters[b]
            mt = ma + mb
            center = (ca * ma + cb * mb) / mt
            others = [c for k, (c, _) in enumerate(clusters) if k not in (a, b)]
            sizes, _ = _cluster_sizes(m, center, mt, others, scale, cfg)
            if sizes is not None:
                clusters[a] = [center, mt]
                del clusters[b]
                merged = True
                break

    out = []
    for k, (center, mult) in enumerate(clusters):
        others = [c for j, (c, _) in enumerate(clusters) if j != k]
        sizes, nul = _cluster_sizes(m, center, mult, others, scale, cfg)
        if sizes is None:
            raise ClusterAmbiguous(
                f"eigenvalue cluster at {center:.6g} (multiplicity {mult}) has "
                f"inconsistent rank sequence {nul}")
        out.append((complex(center), mult, sizes))
    out.sort(key=lambda c: (round(c[0].real, 9), round(c[0].imag, 9)))
    return out


def jordan_structure(m, cfg: ToleranceConfig = DEFAULT_TOL) -> JordanStructure:
    return JordanStructure([(c, sizes) for c, _, sizes in eigen_clusters(m, cfg)])


def spectral_blocks(m, clusters: Sequence, cfg: ToleranceConfig = DEFAULT_TOL):
    """Block-diagonalize ``m`` along eigenvalue clusters.

    Returns ``(S, blocks)`` with ``m = S diag(B_1, ..., B_r) S^{-1}``; ``blocks``
    is a list of ``(center, B_k)`` in the order of ``clusters``.  Each split
    uses an ordered Schur form followed by a Sylvester solve.
    """
    m = np.asarray(m, dtype=complex)
    p = m.shape[0]
    basis = np.eye(p, dtype=complex)
    cur = m
    cols = []
    blocks = []
    remaining = list(clusters)
    while remaining:
        center, mult = remaining[0][0], remaining[0][1]
        if len(remaining) == 1:
            cols.append(basis)
            blocks.append((center, cur))
            break
        others = [c[0] for c in remaining[1:]]

        def select(x, center=center, others=others):
            d0 = abs(x - center)
            return all(d0 < abs(x - o) for o in others)

        t, z, sdim = sla.schur(cur, output="complex", sort=select)
        if sdim != mult:
            raise ClusterAmbiguous(
                f"could not isolate the cluster at {center:.6g}: got {sdim} "
                f"eigenvalues, expected {mult}")
        t11, t12, t22 = t[:mult, :mult], t[:mult, mult:], t[mult:, mult:]
        x = sla.solve_sylvester(t11, -t22, -t12)
        cols.append(basis @ z[:, :mult])
        blocks.append((center, t11))
        basis = basis @ (z[:, :mult] @ x + z[:, mult:])
        cur = t22
        remaining = remaining[1:]
    s = np.hstack(cols) if cols else np.zeros((0, 0), dtype=complex)
    return s, blocks


def _assemble(s: np.ndarray, blocks: Sequence) -> np.ndarray:
    d = sla.block_diag(*blocks) if blocks else np.zeros((0, 0), dtype=complex)
    return s @ d @ np.linalg.inv(s)


# ---------------------------------------------------------------------------
# exponential and logarithm


def branch_exponent(eta: complex, tol: float = 1e-12) -> complex:
    """``Log(eta) / (2 pi i)`` with the real part in ``[0, 1)``.

    Values on the positive real axis (within ``tol``) map to real part 0.
    """
    eta = complex(eta)
    if eta == 0:
        raise Singular("zero eigenvalue has no logarithm")
    arg = np.angle(eta)
    if abs(eta.imag) <= tol * abs(eta) and eta.real > 0:
        arg = 0.0
    elif arg < 0:
        arg += 2 * np.pi
    chi = complex(arg / (2 * np.pi), -np.log(abs(eta)) / (2 * np.pi))
    if chi.real >= 1.0:
        chi -= 1.0
    return chi


def matrix_log_normalized(g, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """``W`` with ``exp(2 pi i W) = g`` and every eigenvalue of ``W`` in ``0 <= Re < 1``.

    Computed blockwise: each eigenvalue cluster gets its branch from the
    cluster center and a principal logarithm of the (near-unipotent) rest.
    """
    g = as_cmatrix(g)
    p = g.shape[0]
    if p == 0:
        return np.zeros((0, 0), dtype=complex)
    if numeric_rank(g, cfg) < p:
        raise Singular("matrix logarithm of a singular matrix")
    clusters = eigen_clusters(g, cfg)
    s, blocks = spectral_blocks(g, clusters, cfg)
    logs = []
    for center, b in blocks:
        chi = branch_exponent(center, cfg.eig_cluster_tol)
        k = b.shape[0]
        unip = b / center
        if np.allclose(unip, np.eye(k), rtol=0, atol=_EPS):
            rest = np.zeros((k, k), dtype=complex)
        else:
            rest = _log_near_identity(unip) / TWO_PI_I
        logs.append(chi * np.eye(k) + rest)
    return _assemble(s, logs)


def _log_near_identity(u: np.ndarray) -> np.ndarray:
    """Principal logarithm of a matrix whose eigenvalues are all close to 1."""
    k = u.shape[0]
    n = u - np.eye(k)
    if np.linalg.norm(n, 2) < 0.5:
        # Mercator series; n is nearly nilpotent so a few dozen terms suffice
        out = np.zeros_like(n)
        term = np.eye(k, dtype=complex)
        for j in range(1, 60):
            term = term @ n
            add = term * ((-1) ** (j + 1) / j)
            out = out + add
            if np.linalg.norm(add) < 1e-17 * max(1.0, np.linalg.norm(out)):
                break
        return out
    return sla.logm(u)


def matrix_exp_2pii(a) -> np.ndarray:
    """``exp(2 pi i A)`` (scaling and squaring with Pade approximant)."""
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return np.zeros((0, 0), dtype=complex)
    return sla.expm(TWO_PI_I * a)


# ---------------------------------------------------------------------------
# irreducibility and conjugacy


def algebra_dimension(mats: Sequence, tol: float = 1e-8) -> int:
    """Dimension of the unital associative algebra generated by ``mats``."""
    p = np.asarray(mats[0]).shape[0]
    gens = []
    for m in mats:
        m = np.asarray(m, dtype=complex)
        nrm = np.linalg.norm(m)
        if nrm > 0:
            gens.append(m / nrm)
    basis = []  # orthonormal vectorized words
    words = []

    def add(w):
        v = w.reshape(-1).copy()
        nv = np.linalg.norm(v)
        if nv == 0:
            return False
        v /= nv
        for _ in range(2):
            for b in basis:
                v -= (b.conj() @ v) * b
        r = np.linalg.norm(v)
        if r <= tol:
            return False
        basis.append(v / r)
        words.append(w / np.linalg.norm(w))
        return True

    add(np.eye(p, dtype=complex))
    frontier = list(words)
    while frontier and len(basis) < p * p:
        nxt = []
        for w in frontier:
            for g in gens:
                cand = g @ w
                if add(cand):
                    nxt.append(words[-1])
                if len(basis) == p * p:
                    break
            if len(basis) == p * p:
                break
        frontier = nxt
    return len(basis)


def is_irreducible_tuple(t: MatrixTuple, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Burnside criterion: the generated algebra is all of ``C^{p x p}``."""
    p = t.p
    if p == 0:
        return False
    if p == 1:
        return True
    return algebra_dimension(list(t.matrices), tol=max(cfg.conj_tol, 1e-10)) == p * p


def trace_fingerprint(t: MatrixTuple, max_len: int = 3) -> np.ndarray:
    """Traces of all words of length 1..max_len in the generators."""
    out = []
    mats = list(t.matrices)
    for length in range(1, max_len + 1):
        for idx in itertools.product(range(len(mats)), repeat=length):
            w = mats[idx[0]]
            for k in idx[1:]:
                w = w @ mats[k]
            out.append(np.trace(w))
    return np.array(out)


def conjugation_residual(t1: MatrixTuple, t2: MatrixTuple, c) -> float:
    """``max_i ||C T1_i C^{-1} - T2_i||_F / max(1, ||T2_i||_F)``."""
    c = np.asarray(c, dtype=complex)
    try:
        ci = np.linalg.inv(c)
    except np.linalg.LinAlgError:
        return float("inf")
    res = 0.0
    for a, b in zip(t1.matrices, t2.matrices):
        r = np.linalg.norm(c @ a @ ci - b) / max(1.0, np.linalg.norm(b))
        res = max(res, float(r))
    return res


def simultaneous_conjugator(t1: MatrixTuple, t2: MatrixTuple,
                            cfg: ToleranceConfig = DEFAULT_TOL):
    """Invertible ``C`` with ``C T1_i C^{-1} = T2_i`` for all i, or ``None``."""
    c, res = best_conjugator(t1, t2, cfg)
    if c is None or res > cfg.conj_tol:
        return None
    return c


def best_conjugator(t1: MatrixTuple, t2: MatrixTuple, cfg: ToleranceConfig = DEFAULT_TOL):
    """Best available conjugator and its residual (``(None, inf)`` on fast reject)."""
    if t1.p != t2.p or t1.n != t2.n:
        raise ValueError("tuples must have the same size and length")
    p = t1.p
    if p == 0:
        return np.zeros((0, 0), dtype=complex), 0.0
    f1, f2 = trace_fingerprint(t1), trace_fingerprint(t2)
    fp_tol = max(10.0 * cfg.conj_tol, 1e-12)
    if np.any(np.abs(f1 - f2) > fp_tol * np.maximum(1.0, np.abs(f2)) * p):
        return None, float("inf")

    eye = np.eye(p)
    # vec(C A) = (A^T kron I) vec C, vec(B C) = (I kron B) vec C  (column-major)
    rows = []
    for a, b in zip(t1.matrices, t2.matrices):
        s = max(1.0, np.linalg.norm(a), np.linalg.norm(b))
        rows.append((np.kron(a.T, eye) - np.kron(eye, b)) / s)
    big = np.vstack(rows)
    _, s, vh = sla.svd(big)
    null_tol = max(cfg.conj_tol, 1e3 * _EPS) * max(1.0, s[0])
    k = max(1, int(np.sum(s <= null_tol)))
    null = vh[-k:].conj()
    best_c, best_r = None, float("inf")
    if k == 1:
        cands = [null[0]]
    else:
        rng = np.random.default_rng(12345)
        cands = [null.T @ (rng.standard_normal(k) + 1j * rng.standard_normal(k))
                 for _ in range(8)]
    for v in cands:
        c = v.reshape(p, p, order="F")
        if numeric_rank(c, cfg) < p:
            continue
        r = conjugation_residual(t1, t2, c)
        if r < best_r:
            best_c, best_r = c / np.linalg.norm(c), r
    return best_c, best_r


def random_invertible(p: int, rng: np.random.Generator, cond_max: float = 50.0) -> np.ndarray:
    while True:
        c = rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p))
        if np.linalg.cond(c) < cond_max:
            return c
