import numpy as np
import pytest

from midconv.cxmat import RESIDUE, MatrixTuple, eigen_clusters, random_invertible

I = 1j
LOG2 = np.log(2) / (2j * np.pi)


def first_g():
    g1 = np.array([[I, 1, 1], [0, 1, 0], [0, 0, 1]])
    g2 = np.array([[1, 0, 0], [-2 * I, 2 * I, 0], [2 * I, -I, -2 * I]])
    return MatrixTuple([g1, g2])


def first_gt():
    return MatrixTuple([np.array([[1, 2], [0, -1]]), np.array([[-2, 0], [1, 2]])])


def first_at():
    a1 = np.array([[-0.5, 0], [1, 0]])
    a2 = np.array([[0.5 + LOG2, 1 / 9], [0, LOG2]])
    return MatrixTuple([a1, a2], RESIDUE)


def first_a():
    a1 = np.array([[0.25, 0.5 + LOG2, 1 / 9], [0, 0, 0], [0, 0, 0]])
    a2 = np.array([[0, 0, 0], [-0.5, 1.25 + LOG2, 1 / 9], [1, 0, 0.75 + LOG2]])
    return MatrixTuple([a1, a2], RESIDUE)


def second_g(a=2.0, tau=1 / 3, kappa=1 / 2):
    t, k = 2j * np.pi * tau, 2j * np.pi * kappa
    return MatrixTuple([
        np.array([[a, -t, t], [0, 1, 0], [0, 0, 1]]),
        np.array([[1, 0, 0], [-k, a, 0], [0, 0, 1]]),
        np.array([[1, 0, 0], [0, 1, 0], [-k, 0, a]]),
    ])


def second_gt(tau=1 / 3, kappa=1 / 2):
    t, k = 2j * np.pi * tau, 2j * np.pi * kappa
    return MatrixTuple([
        np.array([[1, 0], [-k, 1]]),
        np.array([[1, -t], [0, 1]]),
        np.array([[1, t], [0, 1]]),
    ])


def random_tuple(rng, p, n, role="monodromy"):
    mats = []
    for _ in range(n):
        m = rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p))
        if role == "monodromy":
            m = m + 2 * np.eye(p)
        mats.append(m)
    return MatrixTuple(mats, role)


def reflection_tuple(rng, p, n, rank=1):
    """Tuple of ``I + u v^T`` with small-rank perturbations: keeps MC outputs small."""
    mats = []
    for _ in range(n):
        u = rng.standard_normal((p, rank)) + 1j * rng.standard_normal((p, rank))
        v = rng.standard_normal((rank, p)) + 1j * rng.standard_normal((rank, p))
        mats.append(np.eye(p) + u @ v)
    return MatrixTuple(mats)


def spectral_tuple(rng, p, n, lam):
    """Diagonalizable tuple whose eigenvalues hit 1 and 1/lam often."""
    mats = []
    for _ in range(n):
        ev = rng.choice([1, 1, 1 / lam, np.exp(1j * rng.uniform(0, 6))], size=p)
        c = random_invertible(p, rng, cond_max=10)
        mats.append(c @ np.diag(ev) @ np.linalg.inv(c))
    return MatrixTuple(mats)


def eigen_reciprocals(g):
    out = []
    for m in list(g.matrices) + [g.product()]:
        for c, _, _ in eigen_clusters(m):
            if abs(c - 1) > 1e-6:
                out.append(1 / c)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# ---------------------------------------------------------------------------
# acceptance summary: one PASS/FAIL line per numbered criterion

_criteria: dict = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            item.user_properties.append(("criterion", mark.args[0]))


def pytest_runtest_logreport(report):
    n = dict(report.user_properties).get("criterion")
    if n is None or (report.when != "call" and report.outcome == "passed"):
        return
    entry = _criteria.setdefault(n, {"ok": True, "failed": []})
    if report.outcome != "passed" or hasattr(report, "wasxfail"):
        entry["ok"] = False
        entry["failed"].append(report.nodeid.split("::")[-1])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        e = _criteria[n]
        tail = "" if e["ok"] else f"  ({', '.join(e['failed'])})"
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if e['ok'] else 'FAIL'}{tail}")
