import math

import numpy as np
import pytest

from nlsysid.geometry import (
    FEASIBILITY_TOL,
    HPolytope,
    bounding_box,
    contains,
    diameter,
    is_bounded,
    lp_maximize,
    prune,
    support,
    vertices_2d,
)

from oracles import brute_force_lp_max, shoelace_area


def unit_square():
    return HPolytope(
        np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]),
        np.array([1.0, 1.0, 0.0, 0.0]),
    )


def random_bounded_polytope(rng, n_extra=6):
    """Box plus random cutting half-spaces: always bounded and nonempty."""
    lo = rng.uniform(-3.0, -1.0, size=2)
    hi = rng.uniform(1.0, 3.0, size=2)
    poly = HPolytope.box(lo, hi)
    for _ in range(n_extra):
        normal = rng.normal(size=2)
        normal /= np.linalg.norm(normal)
        # keep the origin feasible so the polytope stays nonempty
        poly.add_constraint(normal, rng.uniform(0.3, 2.5))
    return poly


def test_construction_rejects_zero_normal():
    with pytest.raises(ValueError):
        HPolytope(np.array([[0.0, 0.0]]), np.array([1.0]))


def test_lp_unit_square_corner():
    res = lp_maximize(np.array([1.0, 1.0]), unit_square())
    assert res.status == "optimal"
    assert abs(res.value - 2.0) < 1e-9
    assert np.allclose(res.point, [1.0, 1.0], atol=1e-9)


def test_lp_infeasible():
    poly = HPolytope(np.array([[1.0], [-1.0]]), np.array([1.0, -2.0]))
    assert lp_maximize(np.array([1.0]), poly).status == "infeasible"


def test_lp_unbounded():
    poly = HPolytope(np.array([[-1.0, 0.0], [0.0, -1.0]]), np.array([0.0, 0.0]))
    assert lp_maximize(np.array([1.0, 1.0]), poly).status == "unbounded"


def test_lp_matches_brute_force_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(50):
        poly = random_bounded_polytope(rng)
        c = rng.normal(size=2)
        res = lp_maximize(c, poly)
        status, value = brute_force_lp_max(c, poly.a, poly.b)
        assert res.status == status == "optimal"
        assert abs(res.value - value) < 1e-7
        # reported optimizer is feasible and achieves the value
        assert contains(poly, res.point)
        assert abs(float(c @ res.point) - res.value) < 1e-9


def test_lp_weak_duality_probe():
    rng = np.random.default_rng(7)
    for _ in range(10):
        poly = random_bounded_polytope(rng)
        c = rng.normal(size=2)
        res = lp_maximize(c, poly)
        lo, hi = bounding_box(poly)
        found = 0
        while found < 50:
            x = rng.uniform(lo, hi)
            if contains(poly, x, tol=0.0):
                found += 1
                assert float(c @ x) <= res.value + 1e-9


def test_contains():
    sq = unit_square()
    assert contains(sq, [0.5, 0.5])
    assert not contains(sq, [1.0 + 1e-6, 0.0])
    assert contains(sq, [1.0 + 1e-10, 0.0])  # inside tolerance
    with pytest.raises(ValueError):
        contains(sq, [0.0, 0.0, 0.0])


def test_prune_dominated_bound():
    poly = HPolytope(np.array([[1.0], [1.0], [-1.0]]), np.array([1.0, 2.0, 0.0]))
    pruned = prune(poly)
    assert pruned.n_constraints == 2
    assert sorted(pruned.b.tolist()) == [0.0, 1.0]


def test_prune_irredundant_square_unchanged():
    assert prune(unit_square()).n_constraints == 4


def test_prune_preserves_membership_disk():
    # half-spaces at varied distances around the unit disk: the far ones are
    # dominated by near-tangent neighbors and must disappear
    rng = np.random.default_rng(99)
    angles = rng.uniform(0.0, 2.0 * np.pi, size=500)
    normals = np.column_stack([np.cos(angles), np.sin(angles)])
    poly = HPolytope(normals, rng.uniform(1.0, 2.0, size=500))
    pruned = prune(poly)
    assert pruned.n_constraints < 500
    probes = rng.uniform(-2.5, 2.5, size=(10_000, 2))
    before = (probes @ poly.a.T <= poly.b + FEASIBILITY_TOL).all(axis=1)
    after = (probes @ pruned.a.T <= pruned.b + FEASIBILITY_TOL).all(axis=1)
    assert np.array_equal(before, after)


def test_vertices_unit_square():
    verts = vertices_2d(unit_square())
    assert verts.shape == (4, 2)
    expected = {(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)}
    got = {(round(x, 9), round(y, 9)) for x, y in verts}
    assert got == expected


def test_vertices_triangle():
    tri = HPolytope(
        np.array([[-1.0, 0.0], [0.0, -1.0], [1.0, 1.0]]),
        np.array([0.0, 0.0, 1.0]),
    )
    assert vertices_2d(tri).shape == (3, 2)


def test_vertices_counterclockwise():
    verts = vertices_2d(unit_square())
    x, y = verts[:, 0], verts[:, 1]
    signed = np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))
    assert signed > 0


def test_vertices_area_against_monte_carlo():
    rng = np.random.default_rng(31)
    for _ in range(5):
        poly = random_bounded_polytope(rng)
        area = shoelace_area(vertices_2d(poly))
        lo, hi = bounding_box(poly)
        samples = rng.uniform(lo, hi, size=(1_000_000, 2))
        inside = (samples @ poly.a.T <= poly.b + FEASIBILITY_TOL).all(axis=1)
        mc_area = inside.mean() * np.prod(hi - lo)
        assert abs(area - mc_area) < 0.02 * max(area, mc_area)


def test_vertices_requires_bounded():
    half = HPolytope(np.array([[1.0, 0.0]]), np.array([1.0]))
    with pytest.raises(ValueError):
        vertices_2d(half)


def test_diameter_square_exact():
    d, exact = diameter(unit_square())
    assert exact
    assert abs(d - math.sqrt(2.0)) < 1e-12


def test_diameter_degenerate_segment():
    seg = HPolytope(
        np.array([[0.0, 1.0], [0.0, -1.0], [1.0, 0.0], [-1.0, 0.0]]),
        np.array([0.0, 0.0, 1.0, 0.0]),
    )
    d, exact = diameter(seg)
    assert exact
    assert abs(d - 1.0) < 1e-12


def test_diameter_interval_1d():
    poly = HPolytope(np.array([[1.0], [-1.0]]), np.array([0.75, 0.25]))
    d, exact = diameter(poly)
    assert exact and abs(d - 1.0) < 1e-12


def test_diameter_box3d():
    d, exact = diameter(HPolytope.box([0, 0, 0], [1, 2, 2]))
    assert exact and abs(d - 3.0) < 1e-9


def test_diameter_box5d_sampled():
    d, exact = diameter(HPolytope.box([0] * 5, [1] * 5), directions=2000)
    assert not exact
    assert 0.95 * math.sqrt(5.0) <= d <= math.sqrt(5.0) + 1e-9


def test_diameter_monotone_under_intersection():
    rng = np.random.default_rng(17)
    for _ in range(20):
        poly = random_bounded_polytope(rng)
        d0, _ = diameter(poly)
        cut = poly.copy()
        normal = rng.normal(size=2)
        normal /= np.linalg.norm(normal)
        cut.add_constraint(normal, rng.uniform(0.2, 1.5))
        d1, _ = diameter(cut)
        assert d1 <= d0 + 1e-9


def test_diameter_sandwich_sampled_vs_exact():
    rng = np.random.default_rng(23)
    for _ in range(20):
        poly = random_bounded_polytope(rng)
        d_exact, flag = diameter(poly)
        assert flag
        best = 0.0
        for v in rng.normal(size=(200, 2)):
            v /= np.linalg.norm(v)
            best = max(best, support(poly, v) + support(poly, -v))
        lo, hi = bounding_box(poly)
        assert best <= d_exact + 1e-9
        assert d_exact >= (hi - lo).max() - 1e-9


def test_is_bounded():
    assert is_bounded(unit_square())
    assert not is_bounded(HPolytope(np.array([[1.0, 0.0]]), np.array([1.0])))
