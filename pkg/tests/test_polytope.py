import itertools
import math

import numpy as np
import pytest

from cgic.bounds import gaussian_evaluator, inner_constants, inner_region
from cgic.errors import InfeasibleError, InvalidDirectionError, InvalidInputError, PreconditionError
from cgic.inequality_gen import system_for
from cgic.instances import random_channel
from cgic.polytope import (
    HalfspaceSystem,
    ValuedSystem,
    two_state_identities,
    clip_polygon,
    dual_min,
    fan,
    fm_project,
    hausdorff,
    level_identities,
    polygon_from_halfspaces,
    polygon_from_samples,
    project_totals,
    support_value,
    sweep_region,
)


def brute_vertices(A, b, tol=1e-9):
    """All feasible basic points of a small system, by exhaustive solves."""
    d = A.shape[1]
    pts = []
    for rows in itertools.combinations(range(len(b)), d):
        M = A[list(rows)]
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        x = np.linalg.solve(M, b[list(rows)])
        if np.all(A @ x <= b + tol):
            pts.append(x)
    return np.array(pts)


@pytest.fixture(scope="module")
def two_state():
    rng = np.random.default_rng(7)
    system = system_for(2)
    ev = gaussian_evaluator(random_channel(rng, 2))
    return system, ev, ValuedSystem(system, inner_constants(system, ev))


def test_from_rows_senses():
    hs = HalfspaceSystem.from_rows(("x", "y"), [({"x": 1}, 2, "<="), ({"y": 1}, 1, ">=")])
    assert np.allclose(hs.A, [[1, 0], [0, -1]])
    assert np.allclose(hs.b, [2, -1])
    with pytest.raises(InvalidInputError):
        HalfspaceSystem.from_rows(("x",), [({"x": 1}, 0, "==")])
    with pytest.raises(InvalidInputError):
        HalfspaceSystem(np.eye(2), [1.0], ("x", "y"))


def test_support_value_box():
    hs = HalfspaceSystem.from_rows(("R1", "R2"), [
        ({"R1": 1}, 3, "<="), ({"R2": 1}, 2, "<="), ({"R1": 1}, 0, ">="), ({"R2": 1}, 0, ">=")])
    c, x = support_value(hs, 1.0, 1.0)
    assert c == pytest.approx(5.0)
    assert np.allclose(x, [3, 2])
    assert support_value(hs, 0.0, 1.0)[0] == pytest.approx(2.0)


@pytest.mark.parametrize("a,b", [(-1.0, 1.0), (1.0, -0.5), (math.nan, 1.0), (math.inf, 0.0)])
def test_invalid_direction(two_state, a, b):
    _, _, valued = two_state
    with pytest.raises(InvalidDirectionError):
        support_value(valued.halfspaces(), a, b)
    with pytest.raises(InvalidDirectionError):
        dual_min(valued, a, b)


def test_fm_toy_triangle():
    # x + y + z <= 1, all >= 0; projecting out z leaves the triangle
    A = np.array([[1, 1, 1], [-1, 0, 0], [0, -1, 0], [0, 0, -1]], float)
    b = np.array([1, 0, 0, 0], float)
    proj = fm_project(HalfspaceSystem(A, b, ("x", "y", "z")), ["x", "y"])
    V = polygon_from_halfspaces(proj)
    expected = np.array([[0, 0], [1, 0], [0, 1]], float)
    assert hausdorff(V, expected) < 1e-12


def test_fm_box_with_totals():
    A = np.vstack([np.eye(4), -np.eye(4)])
    b = np.array([1, 2, 3, 4, 0, 0, 0, 0], float)
    hs = HalfspaceSystem(A, b, ("R1p", "R1a", "R2p", "R2a"))
    V = polygon_from_halfspaces(project_totals(hs))
    assert hausdorff(V, np.array([[0, 0], [3, 0], [3, 7], [0, 7]], float)) < 1e-12


def test_fm_unknown_dimension():
    hs = HalfspaceSystem(np.eye(2), np.ones(2), ("x", "y"))
    with pytest.raises(InvalidInputError):
        fm_project(hs, ["z"])


def test_fm_empty():
    A = np.array([[1.0, 0.0], [-1.0, 0.0]])
    b = np.array([-1.0, -1.0])
    with pytest.raises(InfeasibleError):
        fm_project(HalfspaceSystem(A, b, ("x", "y")), ["y"])


def test_support_matches_brute_force(two_state):
    _, _, valued = two_state
    hs = valued.halfspaces()
    V = brute_vertices(hs.A, hs.b)
    w_dims = hs.weights(1.0, 0.0)
    for a, b in fan(9):
        w = hs.weights(a, b)
        assert support_value(hs, a, b)[0] == pytest.approx(float(np.max(V @ w)), abs=1e-8)
    assert w_dims.sum() == 3


def test_strong_duality_and_feasibility(two_state):
    system, _, valued = two_state
    hs = valued.halfspaces()
    for a, b in fan(13):
        c, _ = support_value(hs, a, b)
        cert = dual_min(valued, a, b)
        assert cert.objective == pytest.approx(c, abs=1e-8)
        assert np.all(cert.weights >= 0) and np.all(cert.omega >= 0)
        assert np.max(np.abs(cert.residuals(system))) < 1e-8
        assert hs.contains(cert.point, tol=1e-8)


def test_omega_folding_keeps_objective(two_state):
    system, _, valued = two_state
    for a, b in fan(13):
        cert = dual_min(valued, a, b)
        folded = cert.without_omega()
        assert folded.in_lambda_prime()
        assert np.max(np.abs(folded.residuals(system))) < 1e-8
        assert folded.objective == cert.objective


def test_omega_free_bounds_inner_support(two_state):
    _, _, valued = two_state
    for a, b in fan(13):
        free = dual_min(valued, a, b, allow_omega=False)
        full = dual_min(valued, a, b)
        assert free.objective >= full.objective - 1e-8


def test_homogeneity(two_state):
    _, _, valued = two_state
    base = dual_min(valued, 0.6, 0.8).objective
    assert dual_min(valued, 3.0, 4.0).objective == pytest.approx(5 * base, rel=1e-9)


def test_dual_identities_identities(two_state):
    system, _, valued = two_state
    checked = 0
    for a, b in fan(19):
        cert = dual_min(valued, a, b, allow_omega=False)
        assert max(abs(r) for r in two_state_identities(cert)) < 1e-9
        assert max(abs(r) for r in level_identities(cert, system)) < 1e-9
        checked += 1
    assert checked == 19


def test_dual_identities_negative_control(two_state):
    # a certificate that is not dual feasible breaks the identities
    _, _, valued = two_state
    cert = dual_min(valued, 0.5, 0.5, allow_omega=False)
    bad = cert.weights.copy()
    bad[cert.tags.index("delta11")] += 0.25
    broken = type(cert)(cert.direction, bad, cert.omega, cert.objective, cert.tags, cert.n_states)
    assert max(abs(r) for r in two_state_identities(broken)) > 0.1


def test_dual_identities_requires_omega_free():
    # seed 5 has omega-active certificates near the diagonal
    system = system_for(2)
    ev = gaussian_evaluator(random_channel(np.random.default_rng(5), 2))
    valued = ValuedSystem(system, inner_constants(system, ev))
    cert = dual_min(valued, 0.6755902076156604, 0.737277336810124)
    assert not cert.in_lambda_prime()
    with pytest.raises(PreconditionError):
        two_state_identities(cert)
    with pytest.raises(PreconditionError):
        level_identities(cert, system)


def test_clip_polygon():
    sq = [(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0)]
    tri = clip_polygon(sq, (1.0, 1.0), 2.0)
    assert sorted(tri) == sorted([(0.0, 0.0), (2.0, 0.0), (0.0, 2.0)])
    assert clip_polygon(sq, (1.0, 0.0), -1.0) == []
    assert clip_polygon([], (1.0, 0.0), 1.0) == []


def test_polygon_from_samples_needs_axes():
    with pytest.raises(InvalidInputError):
        polygon_from_samples([(0.6, 0.8, 1.0)])


def test_fan():
    f = fan(5)
    assert f[0] == (1.0, 0.0) and f[-1] == (0.0, 1.0)
    assert all(abs(math.hypot(a, b) - 1) < 1e-15 for a, b in f)
    with pytest.raises(InvalidInputError):
        fan(2)


def test_sweep_exact_on_polygon():
    V = np.array([[0, 0], [4, 0], [3, 2], [1, 3], [0, 3]], float)

    def oracle(a, b):
        i = int(np.argmax(V @ [a, b]))
        return float(V[i] @ [a, b]), V[i], None

    reg = sweep_region(oracle, 7)
    assert hausdorff(reg.vertices, V) < 1e-9
    assert reg.area() == pytest.approx(0.5 * abs(np.dot(V[:, 0], np.roll(V[:, 1], -1))
                                                 - np.dot(V[:, 1], np.roll(V[:, 0], -1))))
    assert reg.is_convex_sampled() and reg.in_quadrant()


def test_sweep_matches_fm(two_state):
    system, ev, valued = two_state
    fm = polygon_from_halfspaces(project_totals(valued.halfspaces()))
    reg = inner_region(system, ev, 37)
    assert hausdorff(fm, reg.vertices) < 1e-6


def test_refinement_never_loses_area(two_state):
    system, ev, _ = two_state
    coarse = inner_region(system, ev, 5, refine=False)
    fine = inner_region(system, ev, 5, refine=True)
    # without refinement the polygon is an outer approximation
    assert coarse.area() >= fine.area() - 1e-9
    exact = inner_region(system, ev, 361)
    assert fine.area() == pytest.approx(exact.area(), rel=1e-7)
