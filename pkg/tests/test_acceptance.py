"""Acceptance suite: numbered criteria, each at its stated tolerance.

A PASS/FAIL line per criterion is printed in the pytest terminal summary.
"""

import time

import numpy as np
import pytest

from conftest import (
    LOG2,
    eigen_reciprocals,
    first_a,
    first_at,
    first_g,
    first_gt,
    reflection_tuple,
    second_g,
    second_gt,
    spectral_tuple,
)
from midconv.convolution import (
    check_conditions,
    check_mc_theorem_conditions,
    middle_convolve_add,
    middle_convolve_mult,
    predict_jordan_mc,
    predicted_dim,
)
from midconv.cxmat import (
    RESIDUE,
    JordanStructure,
    MatrixTuple,
    best_conjugator,
    is_irreducible_tuple,
    jordan_structure,
    matrix_exp_2pii,
    numeric_rank,
)
from midconv.fuchsian import FuchsianSystem
from midconv.monodromy import (
    Arc,
    IntegrationConfig,
    Line,
    compute_monodromy,
    transport,
    verify_rh_solution,
)
from midconv.rhsolve import (
    SpectralData,
    build_2x2_three_point,
    general_scheme_solve,
    nabla,
    row_supported_form,
)

criterion = pytest.mark.criterion


def random_system(rng, p, points, low=0.05, high=0.45, rank=None):
    res = []
    for _ in points:
        ev = rng.uniform(low, high, p) + 1j * rng.uniform(-0.2, 0.2, p)
        if rank is not None:
            ev[rank:] = 0
        c = rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p)) + 2 * np.eye(p)
        res.append(c @ np.diag(ev) @ np.linalg.inv(c))
    return FuchsianSystem(points, MatrixTuple(res, RESIDUE))


# ---------------------------------------------------------------------------
# first worked example


@criterion(1)
def test_01_first_reduction():
    t0 = time.perf_counter()
    gt = middle_convolve_mult(first_g(), 1j)
    elapsed = time.perf_counter() - t0
    assert gt.p == 2
    _, res = best_conjugator(gt, first_gt())
    assert res <= 1e-9
    assert elapsed < 1.0


@criterion(2)
def test_02_three_point_closed_form():
    system = build_2x2_three_point(first_gt(), (0, 1))
    a1 = np.array([[-0.5, 0], [1, 0]])
    a2 = np.array([[0.5 + LOG2, 1 / 9], [0, LOG2]])
    assert np.abs(system.residues[0] - a1).max() <= 1e-12
    assert np.abs(system.residues[1] - a2).max() <= 1e-12
    chi = ((-0.5, 0), (0.5 + LOG2, LOG2), (-LOG2 + 1 / 3, -LOG2 - 1 / 3))
    assert abs(nabla(SpectralData(chi, ())) - 1 / 9) <= 1e-12


@criterion(3)
def test_03_first_lift():
    a = middle_convolve_add(first_at(), 0.75)
    assert a.p == 3
    _, res = best_conjugator(a, first_a())
    assert res <= 1e-9


@criterion(4)
def test_04_first_end_to_end():
    t0 = time.perf_counter()
    system, trace = general_scheme_solve(first_g(), (0, 1))
    rep = verify_rh_solution(system, first_g(), conj_tol=1e-6)
    elapsed = time.perf_counter() - t0
    assert rep.success and rep.residual <= 1e-6
    assert rep.relation_defect <= 1e-8
    assert elapsed < 30.0


@criterion(4)
def test_04_printed_final_system():
    rep = verify_rh_solution(FuchsianSystem((0, 1), first_a()), first_g(), conj_tol=1e-6)
    assert rep.success and rep.residual <= 1e-6
    assert rep.relation_defect <= 1e-8


# ---------------------------------------------------------------------------
# second worked example: a=2, tau=1/3, kappa=1/2, lambda=1/2, points 0, 1, 3

SECOND_POINTS = (0, 1, 3)


@pytest.fixture(scope="module")
def second_solution():
    t0 = time.perf_counter()
    system, trace = general_scheme_solve(second_g(), SECOND_POINTS)
    return system, trace, time.perf_counter() - t0


@criterion(5)
def test_05_dimension():
    assert predicted_dim(second_g(), 0.5) == 2
    assert middle_convolve_mult(second_g(), 0.5).p == 2


@criterion(5)
@pytest.mark.xfail(strict=True, reason=(
    "the printed reduced tuple has tr(G1 G2) = 2 - 4 pi^2 kappa tau, while the reduction of "
    "the printed input tuple has 2 - 4 pi^2 kappa tau / a; they differ unless a = 1"))
def test_05_reduction_matches_printed_tuple():
    out = middle_convolve_mult(second_g(), 0.5)
    _, res = best_conjugator(out, second_gt())
    assert res <= 1e-9


@criterion(5)
def test_05_reduction_matches_rescaled_tuple():
    # same shape as the printed tuple with kappa replaced by kappa / a
    out = middle_convolve_mult(second_g(), 0.5)
    _, res = best_conjugator(out, second_gt(kappa=0.5 / 2))
    assert res <= 1e-9


@criterion(5)
def test_05_scheme_monodromy(second_solution):
    system, trace, elapsed = second_solution
    assert system.p == 3 and abs(trace.lam - 0.5) <= 1e-12
    rep = verify_rh_solution(system, second_g(), conj_tol=1e-6)
    assert rep.success and rep.residual <= 1e-6
    assert elapsed < 300.0


@criterion(5)
def test_05_residue_shape(second_solution):
    system, trace, _ = second_solution
    nu = trace.nu
    assert abs(np.exp(2j * np.pi * nu) * 0.5 - 1) <= 1e-12
    for m in system.residues:
        assert numeric_rank(m) == 1
        assert min(abs(np.linalg.eigvals(m) - nu)) <= 1e-8
        assert abs(np.trace(m) - nu) <= 1e-8
    form = row_supported_form(system.residues)
    assert form is not None
    rows, _ = form
    for i, m in enumerate(rows):
        assert np.allclose(np.delete(m, i, axis=0), 0, atol=1e-8)
        assert abs(m[i, i] - nu) <= 1e-8


# ---------------------------------------------------------------------------
# property suites


@criterion(6)
def test_06_dimension_formula():
    rng = np.random.default_rng(606)
    for k in range(120):
        p, n = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        if k % 2:
            g = spectral_tuple(rng, p, n, np.exp(2j * np.pi * rng.uniform(0.05, 0.95)))
        else:
            g = reflection_tuple(rng, p, n, int(rng.integers(1, p)))
        lams = eigen_reciprocals(g)
        lam = lams[int(rng.integers(len(lams)))] if lams else 2.0
        assert middle_convolve_mult(g, lam).p == predicted_dim(g, lam)


@criterion(7)
def test_07_composition():
    rng = np.random.default_rng(707)
    done = 0
    while done < 50:
        p, n = int(rng.integers(2, 4)), int(rng.integers(2, 5))
        g = reflection_tuple(rng, p, n)
        if not is_irreducible_tuple(g) or not check_conditions(g).ok:
            continue
        l1 = np.exp(2j * np.pi * rng.uniform(0.05, 0.95))
        l2 = np.exp(2j * np.pi * rng.uniform(0.05, 0.95)) * rng.uniform(0.5, 1.5)
        if abs(l1 * l2 - 1) < 1e-3:
            continue
        h = middle_convolve_mult(g, l1)
        a, b = middle_convolve_mult(h, l2), middle_convolve_mult(g, l1 * l2)
        back = middle_convolve_mult(h, 1 / l1)
        assert a.p == b.p and back.p == g.p
        assert best_conjugator(a, b)[1] <= 1e-8
        assert best_conjugator(back, g)[1] <= 1e-8
        done += 1


@criterion(8)
def test_08_jordan_prediction():
    rng = np.random.default_rng(808)
    done = 0
    while done < 50:
        p, n = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        lam = np.exp(2j * np.pi * rng.uniform(0.1, 0.9))
        g = spectral_tuple(rng, p, n, lam)
        if not check_conditions(g).ok:
            continue
        out = middle_convolve_mult(g, lam)
        m = out.p
        pairs = [(g[k], out[k] if m else None, "finite") for k in range(n)]
        pairs.append((g.product(), out.product() if m else None, "infinity"))
        for src, got, pos in pairs:
            pred = predict_jordan_mc(jordan_structure(src), lam, pos, m)
            comp = jordan_structure(got) if m else JordanStructure([])
            assert pred.matches(comp), (pos, str(pred), str(comp))
        done += 1


@criterion(9)
def test_09_additive_multiplicative_bridge():
    rng = np.random.default_rng(909)
    done = 0
    while done < 20:
        p = int(rng.integers(2, 4))
        points = (0, 1) if done % 2 else (0, 1, 2.5 + 1j)
        source = random_system(rng, p, points, 0.05, 0.3, rank=1 if done % 3 == 0 else None)
        nu = complex(rng.uniform(0.1, 0.3), rng.uniform(-0.1, 0.1))
        g = compute_monodromy(source).tuple
        if not check_mc_theorem_conditions(source.residues, g, nu).ok:
            continue
        b = middle_convolve_add(source.residues, nu)
        mon = compute_monodromy(FuchsianSystem(points, b)).tuple
        target = middle_convolve_mult(g, np.exp(2j * np.pi * nu))
        assert mon.p == target.p
        assert best_conjugator(mon, target)[1] <= 1e-6
        done += 1


@criterion(10)
def test_10_one_point():
    rng = np.random.default_rng(1010)
    for p in (1, 2, 3):
        c = rng.standard_normal((p, p)) + 3 * np.eye(p)
        a = c @ np.diag(rng.uniform(0.05, 0.9, p) + 0.3j * rng.standard_normal(p)) @ np.linalg.inv(c)
        g = compute_monodromy(FuchsianSystem([0.3 - 0.2j], [a])).tuple[0]
        assert np.linalg.norm(g - matrix_exp_2pii(a)) <= 1e-9


@criterion(10)
def test_10_contractible():
    system = random_system(np.random.default_rng(1011), 3, (0, 1, 2j))
    circle = [Arc(5 + 0j, 1.0, 0.0, 2 * np.pi)]
    triangle = [Line(-1 - 1j, 3 - 1j), Line(3 - 1j, 3 - 0.5j), Line(3 - 0.5j, -1 - 1j)]
    for path in (circle, triangle):
        assert np.linalg.norm(transport(system, path) - np.eye(3)) <= 1e-10


@criterion(10)
def test_10_base_and_radius_independence():
    rng = np.random.default_rng(1012)
    for p in (2, 3):
        system = random_system(rng, p, (0, 1, 3))
        ref = compute_monodromy(system)
        moved = compute_monodromy(system, base=1.4 - 4j)
        assert best_conjugator(ref.tuple, moved.tuple)[1] <= 1e-8
        halved = compute_monodromy(system, IntegrationConfig(radius_factor=0.1))
        for x, y in zip(ref.tuple, halved.tuple):
            assert np.linalg.norm(x - y) <= 1e-8
