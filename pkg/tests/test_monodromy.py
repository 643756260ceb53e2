import numpy as np
import pytest

from conftest import first_a, first_at, first_g, first_gt
from midconv.cxmat import RESIDUE, MatrixTuple, best_conjugator, jordan_structure, matrix_exp_2pii
from midconv.errors import DegeneratePoints, SingularityTooClose, ToleranceNotMet
from midconv.fuchsian import FuchsianSystem
from midconv.monodromy import (
    Arc,
    IntegrationConfig,
    Line,
    choose_base,
    compute_monodromy,
    default_loops,
    expected_log_det,
    transport,
    verify_rh_solution,
)


def random_system(rng, p, points, spread=0.3):
    """Non-resonant system: exponents with real parts well inside (0, 1) - small trace sum."""
    res = []
    for _ in points:
        ev = rng.uniform(0.05, 0.45, p) + 1j * rng.uniform(-spread, spread, p)
        c = rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p)) + 2 * np.eye(p)
        res.append(c @ np.diag(ev) @ np.linalg.inv(c))
    return FuchsianSystem(points, MatrixTuple(res, RESIDUE))


class TestLoops:
    def test_single_point(self):
        loops = default_loops([0], base=1)
        assert len(loops) == 1
        arc = loops[0].segments[1]
        assert arc.radius == pytest.approx(0.2)
        assert loops[0].winding_numbers([0]) == pytest.approx([1.0])

    def test_two_points(self):
        loops = default_loops([0, 1])
        for i, lp in enumerate(loops):
            assert lp.segments[0].start == lp.base == lp.segments[-1].end
            w = lp.winding_numbers([0, 1])
            assert w == pytest.approx([1.0 if j == i else 0.0 for j in range(2)], abs=1e-9)

    def test_base_far(self):
        pts = [0, 1, 3]
        b = choose_base(pts)
        center = np.mean(pts)
        spread = max(abs(a - center) for a in pts)
        assert abs(b - center) >= 2 * spread

    def test_coincident(self):
        with pytest.raises(DegeneratePoints):
            default_loops([0, 0])
        with pytest.raises(DegeneratePoints):
            default_loops([0, 1], base=1)

    def test_three_points_relation(self, rng):
        res = compute_monodromy(random_system(rng, 2, (0, 1, 3)))
        assert res.relation_defect < 1e-8
        assert res.relation_ok


class TestTransport:
    def test_one_point(self):
        a = np.diag([1 / 3, 1 / 4])
        res = compute_monodromy(FuchsianSystem([0], [a]))
        target = np.diag([np.exp(2j * np.pi / 3), 1j])
        assert np.linalg.norm(res.tuple[0] - target) < 1e-9

    def test_one_point_nondiagonal(self, rng):
        c = rng.standard_normal((3, 3)) + 3 * np.eye(3)
        a = c @ np.diag([0.1, 0.25 + 0.2j, 0.7]) @ np.linalg.inv(c)
        res = compute_monodromy(FuchsianSystem([0.5j], [a]))
        assert np.linalg.norm(res.tuple[0] - matrix_exp_2pii(a)) < 1e-9

    def test_contractible(self, rng):
        system = random_system(rng, 3, (0, 1))
        path = [Arc(5 + 0j, 1.0, 0.0, 2 * np.pi)]
        assert np.linalg.norm(transport(system, path) - np.eye(3)) < 1e-10
        there = [Line(2j, 3 + 2j), Line(3 + 2j, 3 - 2j), Line(3 - 2j, 2j)]
        assert np.linalg.norm(transport(system, there) - np.eye(3)) < 1e-10

    def test_too_close(self):
        system = FuchsianSystem([0], [np.eye(2) * 0.3])
        with pytest.raises(SingularityTooClose):
            transport(system, [Line(-1 + 1e-9j, 1 + 1e-9j)])

    def test_tolerance_not_met(self):
        system = FuchsianSystem([0, 1], [np.diag([0.3, 0.1]), np.array([[0.2, 1], [0, 0.4]])])
        loose = IntegrationConfig(rel_tol=1e-3, abs_tol=1e-3, det_tol=1e-14)
        with pytest.raises(ToleranceNotMet):
            compute_monodromy(system, loose)

    def test_determinant_identity(self, rng):
        system = random_system(rng, 3, (0, 1, 2 + 1j))
        res = compute_monodromy(system)
        for lp, g in zip(res.loops, res.tuple):
            expected = np.exp(expected_log_det(system, lp.segments))
            assert abs(np.linalg.det(g) - expected) <= 1e-9 * abs(expected)
        assert max(res.loop_errors) <= 1e-9


class TestInvariance:
    def test_base_independence(self, rng):
        system = random_system(rng, 2, (0, 1, 3))
        a = compute_monodromy(system)
        b = compute_monodromy(system, base=1.4 - 4j)
        _, res = best_conjugator(a.tuple, b.tuple)
        assert res <= 1e-8

    def test_radius_independence(self, rng):
        system = random_system(rng, 3, (0, 1, 3))
        a = compute_monodromy(system)
        b = compute_monodromy(system, IntegrationConfig(radius_factor=0.1))
        for x, y in zip(a.tuple, b.tuple):
            assert np.linalg.norm(x - y) < 1e-8

    def test_nonresonant_similarity(self, rng):
        for _ in range(3):
            system = random_system(rng, 3, (0, 1, 3))
            res = compute_monodromy(system)
            for a, g in zip(system.residues, res.tuple):
                assert jordan_structure(g).matches(jordan_structure(matrix_exp_2pii(a)))


class TestExamples:
    def test_reduced_system_eigenvalues(self):
        res = compute_monodromy(FuchsianSystem([0, 1], first_at()))
        ev1 = sorted(np.linalg.eigvals(res.tuple[0]), key=lambda z: z.real)
        ev2 = sorted(np.linalg.eigvals(res.tuple[1]), key=lambda z: z.real)
        assert np.allclose(ev1, [-1, 1], atol=1e-9)
        assert np.allclose(ev2, [-2, 2], atol=1e-9)
        _, r = best_conjugator(res.tuple, first_gt())
        assert r < 1e-8

    def test_final_system(self):
        rep = verify_rh_solution(FuchsianSystem([0, 1], first_a()), first_g(), conj_tol=1e-6)
        assert rep.success
        assert rep.relation_defect < 1e-8

    def test_perturbed_target_fails(self):
        system = FuchsianSystem([0, 1], first_at())
        bad = MatrixTuple([first_gt()[0] * 1.01, first_gt()[1]])
        rep = verify_rh_solution(system, bad, conj_tol=1e-6)
        assert not rep.success and rep.residual > 1e-6

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            verify_rh_solution(FuchsianSystem([0, 1], first_at()), first_g())
