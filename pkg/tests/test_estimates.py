"""Tests for the level-estimate constants and collision-exclusion certificates."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from choreo.action import LoopPath, action
from choreo.estimates import (
    CollisionBound,
    certify_no_total_collisions,
    delta_min,
    general_lower_bound,
    hiphop_collision_bound,
    hiphop_exclusion,
    hiphop_square_action,
    k_alpha_p,
    klein_collision_bound,
    klein_exclusion,
    klein_test_loop_bound,
    rotating_polygon_action,
    test_loop_action_bound,
    test_loop_action_exact,
    tilde_U0,
    zeta,
)
from choreo.groups import builtin_group
from choreo.homotopy import ConeSpec, build_archimedean, catalog_cone, test_loop
from choreo.reference_tables import (
    ALPHA1_BOUNDS,
    ALPHA_GT1_BOUNDS,
    GROUP_CONSTANTS,
    catalog_entry,
)

TWO_PI = 2.0 * math.pi

# Frozen quadrature oracles, recomputed from scratch and pinned tightly.
# Agreement with the published five-decimal rounded values is asserted
# separately so that table misprints surface as explicit deviations.
ZETA_ORACLE = {
    "T": (2.197224577336219, 9.508383264061964, 9.508383264061964),
    "O": (2.0923483214534295, 20.322440360783954, 19.739947527681867),
    "I": (2.0344695483460256, 53.990308292403334, 52.57614488721692),
}
DELTA_ORACLE = {
    "T": (0.5, 0.5),
    "O": (0.35740674433659325, 0.5054494651244236),
    "I": (0.22391897979451345, 0.3623085200337234),
}
U_FLOOR_ORACLE = {
    ("T", 1.0): 6.3712632552374755,
    ("O", 1.0): 14.405666928910223,
    ("I", 1.0): 41.0390542680998,
    ("T", 1.7): 4.359952924959076,
    ("T", 1.85): 4.020761287685928,
    ("T", 1.86): 3.9991248268103723,
    ("O", 1.6): 11.033579872174421,
    ("O", 1.7): 10.564911527887574,
    ("O", 1.75): 10.339255022956252,
    ("O", 1.8): 10.119174988851057,
}

# Certificate cells whose published values deviate from a truthful
# recomputation by more than the 1e-3 relative test threshold.  Columns:
# 0 potential lhs, 1 potential rhs, 2 central lhs, 3 central rhs.
# The tetrahedral alpha = 1 rows carry a transposed digit in column 0
# (76.6704 and 115.0056 against the recomputed 76.0671 and 114.1006).
# The octahedral nu3 row divides by a wrong edge length in column 3.
# The tetrahedral alpha > 1 rows divide column 0 by 0.35740 where the
# recomputed chord distance is exactly 0.5.  The octahedral nu6 row was
# evaluated with the stated side counts (12, 2, 14), which no embedding
# realizes; the realized counts (12, 4, 16) shift all four columns.
PUBLISHED_DEVIATIONS = {
    ("T", "nu1"): (0,),
    ("T", "nu2"): (0,),
    ("T", "nu3"): (0,),
    ("O", "nu3"): (3,),
    ("T", "nu4"): (0,),
    ("T", "nu5"): (0,),
    ("T", "nu6"): (0,),
    ("O", "nu6"): (0, 1, 2, 3),
}


def table_cone(tag, name, m0=0.0):
    return catalog_cone(tag, name, central_mass=m0)


# ---------------------------------------------------------------------------
# k_alpha_p


def test_k_alpha_p_order_two_is_one():
    assert k_alpha_p(1.0, 2) == 1.0


def test_k_alpha_p_order_four():
    assert abs(k_alpha_p(1.0, 4) - (1.0 + 2.0 * math.sqrt(2.0))) < 1e-12


def test_k_alpha_p_fractional_exponent():
    expected = 2.0 / math.sin(math.pi / 3.0) ** 1.5
    assert abs(k_alpha_p(1.5, 3) - expected) < 1e-12


def test_k_alpha_p_rejects_bad_arguments():
    with pytest.raises(ValueError):
        k_alpha_p(1.0, 1)
    with pytest.raises(ValueError):
        k_alpha_p(2.0, 3)
    with pytest.raises(ValueError):
        k_alpha_p(0.5, 3)


# ---------------------------------------------------------------------------
# zeta


@pytest.mark.parametrize("tag", ["T", "O", "I"])
def test_zeta_matches_frozen_oracles(tag):
    for which in (0, 1, 2):
        assert abs(zeta(tag, 1.0, which) - ZETA_ORACLE[tag][which]) < 1e-9


@pytest.mark.parametrize("tag", ["T", "O", "I"])
def test_zeta_matches_published_constants(tag):
    # published values carry five decimals, sometimes truncated
    assert abs(zeta(tag, 1.0, 0) - GROUP_CONSTANTS["zeta_1_0"][tag]) < 1e-5
    assert abs(zeta(tag, 1.0, 1) - GROUP_CONSTANTS["zeta_1_1"][tag]) < 1e-5
    assert abs(zeta(tag, 1.0, 2) - GROUP_CONSTANTS["zeta_1_2"][tag]) < 1e-5


def test_zeta_tetrahedron_edges_agree():
    # the full symmetry group exchanges the two base edges
    assert abs(zeta("T", 1.0, 1) - zeta("T", 1.0, 2)) < 1e-10


def test_zeta_central_term_independent_quadrature():
    # Simpson quadrature of 2/|x(s)| along both base edges, written out
    # here as an independent route to the same constant.
    for tag in ("T", "O", "I"):
        poly = build_archimedean(tag)
        q, q1, q2 = (np.array(v) for v in poly.base_points)
        s = np.linspace(0.0, 1.0, 20001)
        for other in (q1, q2):
            x = np.outer(1.0 - s, q) + np.outer(s, other)
            f = 2.0 / np.linalg.norm(x, axis=1)
            simpson = (s[1] - s[0]) / 3.0 * (
                f[0] + f[-1] + 4.0 * f[1:-1:2].sum() + 2.0 * f[2:-1:2].sum()
            )
            assert abs(simpson - zeta(tag, 1.0, 0)) < 1e-9


def test_zeta_conjugation_symmetry():
    rng = np.random.default_rng(7)
    for tag in ("T", "O", "I"):
        group = builtin_group(tag)
        base = [zeta(tag, 1.3, w) for w in (0, 1, 2)]
        picks = rng.choice(len(group.elements), size=5, replace=False)
        for idx in picks:
            R = group.elements[idx]
            for w in (0, 1, 2):
                assert abs(zeta(tag, 1.3, w, conjugate=R) - base[w]) < 1e-9


@pytest.mark.parametrize("tag", ["T", "O", "I"])
@pytest.mark.parametrize("alpha", [1.1, 1.3, 1.5, 1.7, 1.9])
def test_zeta_ordering_on_alpha_grid(tag, alpha):
    for which in (1, 2):
        z_alpha = zeta(tag, alpha, which)
        z_one = zeta(tag, 1.0, which)
        d = delta_min(tag, which)
        assert z_alpha < z_one / d ** (alpha - 1.0) < z_one / d


@pytest.mark.parametrize("tag", ["T", "O", "I"])
@pytest.mark.parametrize("alpha", [1.0, 1.2, 1.5, 1.8, 1.9])
def test_zeta_central_chord_bounds(tag, alpha):
    ell = build_archimedean(tag).edge_length
    z0 = zeta(tag, alpha, 0)
    sharp = 2.0 / (1.0 - ell ** 2 / 4.0) ** (alpha / 2.0)
    assert z0 < sharp <= 8.0 / (4.0 - ell ** 2)
    assert abs(8.0 / (4.0 - ell ** 2) - GROUP_CONSTANTS["chord_ratio"][tag]) < 1e-5


def test_zeta_rejects_bad_arguments():
    with pytest.raises(ValueError):
        zeta("T", 1.0, 3)
    with pytest.raises(ValueError):
        zeta("T", 2.0, 1)


# ---------------------------------------------------------------------------
# delta_min


@pytest.mark.parametrize("tag", ["T", "O", "I"])
def test_delta_min_matches_frozen_oracles(tag):
    assert abs(delta_min(tag, 1) - DELTA_ORACLE[tag][0]) < 1e-12
    assert abs(delta_min(tag, 2) - DELTA_ORACLE[tag][1]) < 1e-12


def test_delta_min_tetrahedron_is_exactly_half():
    # The published table prints 0.35740 for both tetrahedral distances,
    # which coincides with the octahedral delta_1; the recomputed minimum
    # over the twelve rotations is exactly 1/2 for both edges.
    assert delta_min("T", 1) == 0.5
    assert delta_min("T", 2) == 0.5
    published = GROUP_CONSTANTS["delta_1"]["T"]
    assert abs(delta_min("T", 1) - published) > 0.14


def test_delta_min_octahedron_matches_published():
    assert abs(delta_min("O", 1) - GROUP_CONSTANTS["delta_1"]["O"]) < 1e-5
    assert abs(delta_min("O", 2) - GROUP_CONSTANTS["delta_2"]["O"]) < 1e-5


def test_delta_min_icosahedron_published_values_are_swapped():
    # the two recomputed distances match the published pair crosswise
    assert abs(delta_min("I", 1) - GROUP_CONSTANTS["delta_2"]["I"]) < 1e-5
    assert abs(delta_min("I", 2) - GROUP_CONSTANTS["delta_1"]["I"]) < 1e-5
    assert abs(delta_min("I", 1) - GROUP_CONSTANTS["delta_1"]["I"]) > 0.1


def test_delta_min_rejects_bad_which():
    with pytest.raises(ValueError):
        delta_min("T", 0)


# ---------------------------------------------------------------------------
# tilde_U0


@pytest.mark.parametrize("key", sorted(U_FLOOR_ORACLE))
def test_tilde_u0_matches_frozen_oracles(key):
    tag, alpha = key
    assert abs(tilde_U0(tag, alpha) - U_FLOOR_ORACLE[key]) < 1e-12


@pytest.mark.parametrize("tag", ["T", "O", "I"])
def test_tilde_u0_same_from_every_triangle(tag):
    tess = build_archimedean(tag).tessellation
    values = [tilde_U0(tag, 1.3, triangle=i) for i in range(len(tess.triangles))]
    assert max(values) - min(values) < 1e-9


@pytest.mark.parametrize("tag", ["T", "O", "I"])
@pytest.mark.parametrize("alpha", [1.0, 1.6, 1.86])
def test_tilde_u0_grid_cross_check(tag, alpha):
    # Numerical maximum of |u x p| over a barycentric grid of the closed
    # triangle, projected to the sphere.  The grid maximum never exceeds
    # the true maximum, so the grid value bounds the closed form from
    # above and must agree closely.
    tess = build_archimedean(tag).tessellation
    corners = tess.triangle_points(0)
    levels = 21
    pts = []
    for i in range(levels):
        for j in range(levels - i):
            w = np.array([i, j, levels - 1 - i - j], float) / (levels - 1)
            u = w @ corners
            pts.append(u / np.linalg.norm(u))
    pts = np.array(pts)
    assert len(pts) >= 200
    total = 0.0
    for pole in tess.poles:
        largest = np.linalg.norm(np.cross(pts, pole.point), axis=1).max()
        total += k_alpha_p(alpha, pole.order) / largest ** alpha
    grid_value = total / 2.0 ** (alpha + 1.0)
    closed = tilde_U0(tag, alpha)
    assert grid_value >= closed - 1e-12
    assert grid_value <= closed * (1.0 + 1e-6)


def test_tilde_u0_consistent_with_published_columns():
    # invert the published alpha = 1 bound columns (2 pi M U / ell)
    ell_t = build_archimedean("T").edge_length
    ell_o = build_archimedean("O").edge_length
    assert abs(tilde_U0("T", 1.0) - 80.0636 * ell_t / (4.0 * math.pi)) < 1e-3
    assert abs(tilde_U0("O", 1.0) - 253.2198 * ell_o / (4.0 * math.pi)) < 1e-2


# ---------------------------------------------------------------------------
# general lower bound and the vertical-class closed forms


def test_general_lower_bound_alpha_one_reduction():
    for mass, u0, period, m in [(4.0, 1.5, TWO_PI, 2), (7.0, 0.3, 5.0, 3)]:
        bound = general_lower_bound(mass, u0, 1.0, period, m)
        segment = 1.5 * mass * (math.pi * u0) ** (2.0 / 3.0) * (period / m) ** (1.0 / 3.0)
        assert abs(bound.value - m * segment) < 1e-12 * bound.value
        assert bound.collisions == m
        assert bound.formula == "plato-general"


def test_general_lower_bound_rejects_bad_arguments():
    with pytest.raises(ValueError):
        general_lower_bound(4.0, 0.0, 1.0, TWO_PI, 2)
    with pytest.raises(ValueError):
        general_lower_bound(0.0, 1.0, 1.0, TWO_PI, 2)
    with pytest.raises(ValueError):
        general_lower_bound(4.0, 1.0, 2.0, TWO_PI, 2)
    with pytest.raises(ValueError):
        general_lower_bound(4.0, 1.0, 1.0, TWO_PI, 0)


@pytest.mark.parametrize("m0", [0.0, 1.0, 7.5, 120.0])
def test_hiphop_bound_closed_form(m0):
    bound = hiphop_collision_bound(m0, TWO_PI)
    expected = (
        3.0 * 2.0 ** (1.0 / 3.0) * TWO_PI ** (2.0 / 3.0)
        * (3.0 + 4.0 * m0) ** (2.0 / 3.0) * TWO_PI ** (1.0 / 3.0)
    )
    assert abs(bound.value - expected) < 1e-10 * expected
    assert bound.formula == "hiphop"
    assert bound.collisions == 2


@pytest.mark.parametrize("m0", [0.0, 1.0, 7.5, 120.0])
def test_klein_bound_closed_form(m0):
    bound = klein_collision_bound(m0, TWO_PI)
    expected = (
        6.0 * math.pi ** (2.0 / 3.0)
        * (3.0 * math.sqrt(1.5) + 4.0 * m0) ** (2.0 / 3.0) * TWO_PI ** (1.0 / 3.0)
    )
    assert abs(bound.value - expected) < 1e-10 * expected
    assert bound.formula == "klein"


@given(
    m_small=st.floats(min_value=0.0, max_value=50.0),
    gap=st.floats(min_value=1e-3, max_value=50.0),
)
@settings(max_examples=40, deadline=None)
def test_collision_bounds_increase_with_mass(m_small, gap):
    m_large = m_small + gap
    assert hiphop_collision_bound(m_small, TWO_PI).value < hiphop_collision_bound(m_large, TWO_PI).value
    assert klein_collision_bound(m_small, TWO_PI).value < klein_collision_bound(m_large, TWO_PI).value


@given(
    collisions=st.integers(min_value=1, max_value=6),
    alpha=st.floats(min_value=1.0, max_value=1.95),
)
@settings(max_examples=40, deadline=None)
def test_general_bound_increases_with_collision_count(collisions, alpha):
    lower = general_lower_bound(12.0, 6.4, alpha, TWO_PI, collisions)
    upper = general_lower_bound(12.0, 6.4, alpha, TWO_PI, collisions + 1)
    assert lower.value < upper.value


def test_platonic_direct_bound_increases_with_mass():
    # the direct certificate comparison uses the floor lifted to the
    # normalized potential; the resulting bound grows with the mass
    n = 12
    floor = tilde_U0("T", 1.0)
    values = []
    for m0 in (0.0, 1.0, 10.0, 200.0):
        u0 = (n / (n + m0)) ** 1.5 * (floor + 2.0 * m0)
        values.append(general_lower_bound(n + m0, u0, 1.0, TWO_PI, 2).value)
    assert all(a < b for a, b in zip(values, values[1:]))


def test_hiphop_square_action_pinned_value():
    assert abs(hiphop_square_action(0.0, TWO_PI) - 36.6132303182604) < 1e-9


def test_hiphop_square_action_period_scaling():
    # action scales with the cube root of the period
    assert abs(hiphop_square_action(2.0, 8.0 * TWO_PI) - 2.0 * hiphop_square_action(2.0, TWO_PI)) < 1e-10


@pytest.mark.parametrize("m0", [0.0, 0.5, 3.0, 100.0])
def test_square_action_matches_polygon_quadrature(m0):
    closed = hiphop_square_action(m0, TWO_PI)
    quad = rotating_polygon_action(m0, TWO_PI, 4)
    assert abs(closed - quad) < 1e-10 * closed


@pytest.mark.parametrize("satellites", [6, 10])
@pytest.mark.parametrize("m0", [0.0, 2.0])
def test_polygon_action_closed_form(satellites, m0):
    # On a horizontal circle of radius r the potential is mu/r per unit
    # time with mu = m0 + k/4, k the reciprocal-sine sum; stationarity in
    # r gives action (3/2) s (2 pi)^(2/3) T^(1/3) mu^(2/3).
    mu = m0 + k_alpha_p(1.0, satellites) / 4.0
    expected = 1.5 * satellites * TWO_PI ** (2.0 / 3.0) * TWO_PI ** (1.0 / 3.0) * mu ** (2.0 / 3.0)
    value = rotating_polygon_action(m0, TWO_PI, satellites)
    assert abs(value - expected) < 1e-10 * expected


def test_hiphop_comparison_beats_bound_for_all_masses():
    for m0 in (0.0, 0.1, 1.0, 25.0, 1e6):
        assert hiphop_square_action(m0, TWO_PI) < hiphop_collision_bound(m0, TWO_PI).value


def test_hiphop_bound_and_square_cross_at_negative_mass():
    crossing = (2.0 * math.sqrt(2.0) - 5.0) / 4.0
    assert crossing < 0.0
    f = 3.0 * 2.0 ** (1.0 / 3.0) * (3.0 + 4.0 * crossing) ** (2.0 / 3.0)
    g = 3.0 * 2.0 ** (-1.0 / 3.0) * (1.0 + 2.0 * math.sqrt(2.0) + 4.0 * crossing) ** (2.0 / 3.0)
    assert abs(f - g) < 1e-12


def test_klein_test_loop_bound_example():
    expected = 6.0 * math.pi ** (2.0 / 3.0) * 3.0 ** (2.0 / 3.0)
    assert abs(klein_test_loop_bound(0.0, 1.0) - expected) < 1e-12


def test_klein_test_loop_radius_is_stationary():
    for m0 in (0.0, 2.0, 9.0):
        strength = 3.0 + 2.0 * math.sqrt(2.0) * m0
        rho = (strength * TWO_PI ** 2 / (64.0 * math.pi ** 2)) ** (1.0 / 3.0)
        derivative = 64.0 * math.pi ** 2 * rho / TWO_PI - strength * TWO_PI / rho ** 2
        assert abs(derivative) < 1e-9
        off = klein_test_loop_bound(m0, TWO_PI, rho=1.7 * rho)
        assert off > klein_test_loop_bound(m0, TWO_PI)


def test_klein_comparison_beats_bound_for_all_masses():
    for m0 in (0.0, 0.1, 1.0, 25.0, 1e6):
        assert klein_test_loop_bound(m0, TWO_PI) < klein_collision_bound(m0, TWO_PI).value


def four_half_circles(rho, n):
    """The comparison loop: four constant-speed quarter turns of radius rho."""
    assert n % 4 == 0
    q = n // 4
    th = np.linspace(-0.5 * np.pi, 0.5 * np.pi, q, endpoint=False)
    ph = np.linspace(0.5 * np.pi, 1.5 * np.pi, q, endpoint=False)
    ones = np.ones(q)
    c1p = np.stack([rho * np.cos(th), rho * np.sin(th), rho * ones], axis=1)
    c2p = np.stack([rho * np.cos(ph), rho * ones, rho * np.sin(ph)], axis=1)
    c1m = np.stack([rho * np.cos(ph), rho * np.sin(ph), -rho * ones], axis=1)
    c2m = np.stack([rho * np.cos(ph + np.pi), -rho * ones, rho * np.sin(ph + np.pi)], axis=1)
    return np.concatenate([c1p, c2p, c1m, c2m])


@pytest.mark.parametrize("m0", [0.0, 2.0])
def test_klein_explicit_loop_respects_bound(m0):
    strength = 3.0 + 2.0 * math.sqrt(2.0) * m0
    rho = (strength * TWO_PI ** 2 / (64.0 * math.pi ** 2)) ** (1.0 / 3.0)
    pts = four_half_circles(rho, 2048)
    steps = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
    assert steps.max() / steps.min() < 1.0 + 1e-9
    assert abs(np.linalg.norm(pts, axis=1) - math.sqrt(2.0) * rho).max() < 1e-12
    cone = ConeSpec(
        group=builtin_group("KLEIN"), nu=None, alpha=1.0,
        extra_symmetry=None, period=TWO_PI, central_mass=m0,
    )
    loop = LoopPath(points=pts, period=TWO_PI)
    total = action(loop, cone).total
    assert total <= klein_test_loop_bound(m0, TWO_PI) + 1e-6


# ---------------------------------------------------------------------------
# test loop actions for the polyhedral classes


@pytest.mark.parametrize(
    "tag,name,m0",
    [("T", "nu1", 0.0), ("O", "nu1", 0.0), ("O", "nu6", 2.5), ("I", "nu3", 1.0)],
)
def test_test_loop_action_matches_discrete_action(tag, name, m0):
    cone = table_cone(tag, name, m0)
    result = test_loop_action_exact(cone)
    samples = 200 * cone.nu.steps
    loop = test_loop(cone.nu, cone.period, samples)
    scaled = loop.with_points(result.scale * np.asarray(loop.points))
    discrete = action(scaled, cone).total
    assert abs(discrete - result.value) < 1e-5 * result.value


def test_test_loop_action_octahedron_mix_value():
    # the mass-free potential coefficient of the first octahedral class
    cone = table_cone("O", "nu1")
    result = test_loop_action_exact(cone)
    mix = 4 * ZETA_ORACLE["O"][1] + 6 * ZETA_ORACLE["O"][2]
    expected = (24 / 2.0) * (cone.period / 10) * mix
    assert abs(result.potential - expected) < 1e-9 * expected
    assert abs(mix - 199.7300) < 1e-3 * 199.7300


def test_test_loop_scale_is_optimal():
    for tag, name, m0 in [("T", "nu1", 0.0), ("O", "nu6", 1.0)]:
        cone = table_cone(tag, name, m0)
        result = test_loop_action_exact(cone)
        assert result.at_scale(result.scale) == pytest.approx(result.value, rel=1e-12)
        assert result.at_scale(0.5 * result.scale) > result.value
        assert result.at_scale(2.0 * result.scale) > result.value
    with pytest.raises(ValueError):
        result.at_scale(0.0)


def test_test_loop_scale_optimality_discrete_route():
    cone = table_cone("O", "nu1")
    result = test_loop_action_exact(cone)
    loop = test_loop(cone.nu, cone.period, 2000)
    values = {}
    for factor in (0.5, 1.0, 2.0):
        scaled = loop.with_points(factor * result.scale * np.asarray(loop.points))
        values[factor] = action(scaled, cone).total
    assert values[1.0] < values[0.5]
    assert values[1.0] < values[2.0]


ALPHA_GT1_ROWS = sorted(ALPHA_GT1_BOUNDS)


@pytest.mark.parametrize("tag,name", ALPHA_GT1_ROWS)
@pytest.mark.parametrize("m0", [0.0, 1.0])
def test_test_loop_bound_dominates_exact(tag, name, m0):
    cone = table_cone(tag, name, m0)
    assert test_loop_action_bound(cone) >= test_loop_action_exact(cone).value


def test_test_loop_bound_rejects_alpha_one():
    cone = table_cone("T", "nu1")
    with pytest.raises(ValueError):
        test_loop_action_bound(cone)


def test_test_loop_functions_reject_vertical_cones():
    cone = ConeSpec(
        group=builtin_group("Z4"), nu=None, alpha=1.0,
        extra_symmetry=None, period=TWO_PI, central_mass=0.0,
    )
    with pytest.raises(ValueError):
        test_loop_action_exact(cone)


# ---------------------------------------------------------------------------
# certificates


ALL_TABLE_ROWS = sorted(ALPHA1_BOUNDS) + sorted(ALPHA_GT1_BOUNDS)


@pytest.mark.parametrize("tag,name", ALL_TABLE_ROWS)
def test_certificate_against_published_row(tag, name):
    published = ALPHA1_BOUNDS.get((tag, name)) or ALPHA_GT1_BOUNDS[(tag, name)]
    cert = certify_no_total_collisions(table_cone(tag, name), label=f"{tag} {name}")
    deviating = PUBLISHED_DEVIATIONS.get((tag, name), ())
    for column, (computed, printed) in enumerate(zip(cert.row(), published)):
        relative = abs(computed - printed) / abs(printed)
        if column in deviating:
            assert relative > 1e-3, (column, computed, printed)
        else:
            assert relative < 1e-3, (column, computed, printed)


@pytest.mark.parametrize("tag,name", ALL_TABLE_ROWS)
def test_certificate_passes_and_is_positive(tag, name):
    cert = certify_no_total_collisions(table_cone(tag, name))
    assert cert.passed
    assert cert.potential_pass and cert.central_pass and cert.direct_pass
    for value in (
        cert.zeta0, cert.zeta1, cert.zeta2, cert.delta1, cert.delta2,
        cert.ell, cert.tilde_u0, cert.c_const,
    ):
        assert value > 0.0
    assert cert.k_nu == cert.k1 + cert.k2
    assert cert.collisions >= 2
    entry = catalog_entry(tag, name)
    assert cert.collisions == entry.M
    assert cert.alpha == entry.alpha


def test_certificate_direct_comparison_tracks_mass():
    for tag, name in [("T", "nu1"), ("O", "nu6")]:
        for m0 in (0.0, 3.0, 50.0):
            cert = certify_no_total_collisions(table_cone(tag, name, m0))
            assert cert.direct_lhs < cert.direct_rhs


def test_certificate_spec_verdict_examples():
    t1 = certify_no_total_collisions(table_cone("T", "nu1"))
    assert abs(t1.potential_rhs - 80.0636) < 1e-3 * 80.0636
    assert abs(t1.central_lhs - 17.5776) < 1e-3 * 17.5776
    assert abs(t1.central_rhs - 25.1327) < 1e-3 * 25.1327
    i3 = certify_no_total_collisions(table_cone("I", "nu3"))
    assert abs(i3.potential_lhs - 795.7130) < 1e-3 * 795.7130
    assert abs(i3.potential_rhs - 2878.5) < 1e-3 * 2878.5
    assert abs(i3.central_lhs - 30.5169) < 1e-3 * 30.5169
    assert abs(i3.central_rhs - 140.2809) < 1e-3 * 140.2809
    o6 = certify_no_total_collisions(table_cone("O", "nu6"))
    assert o6.passed and o6.direct_pass
    assert (o6.k1, o6.k2, o6.k_nu) == (12, 4, 16)


def test_certificate_label_and_dict():
    cert = certify_no_total_collisions(table_cone("T", "nu1"), label="first")
    assert cert.cone_id == "first"
    default = certify_no_total_collisions(table_cone("T", "nu1"))
    assert "T" in default.cone_id and "M=2" in default.cone_id
    payload = cert.as_dict()
    assert payload["passed"] is True
    assert json.loads(json.dumps(payload)) == payload


def test_certificate_rejects_vertical_cones():
    cone = ConeSpec(
        group=builtin_group("KLEIN"), nu=None, alpha=1.0,
        extra_symmetry=None, period=TWO_PI, central_mass=0.0,
    )
    with pytest.raises(ValueError):
        certify_no_total_collisions(cone)


def test_hiphop_exclusion_report():
    report = hiphop_exclusion(0.0, TWO_PI)
    assert report.passed and report.direct_pass
    assert report.kind == "hiphop"
    assert report.comparison_action == pytest.approx(hiphop_square_action(0.0, TWO_PI))
    assert report.bound.value == pytest.approx(hiphop_collision_bound(0.0, TWO_PI).value)
    # the three-halves powers are affine in the mass; their slopes differ
    # by the factor 2 coming from the coefficient ratio 2^(2/3)
    assert report.slope_rhs == pytest.approx(2.0 * report.slope_lhs, rel=1e-9)


def test_klein_exclusion_report():
    report = klein_exclusion(1.5, TWO_PI)
    assert report.passed and report.direct_pass
    assert report.kind == "klein"
    # intercepts compare 3 against 3 sqrt(3/2), slopes 2 sqrt(2) against 4
    assert report.intercept_rhs / report.intercept_lhs == pytest.approx(1.5 ** (1.0 / 3.0), rel=1e-9)
    assert report.slope_rhs / report.slope_lhs == pytest.approx(math.sqrt(2.0), rel=1e-9)
    payload = report.as_dict()
    assert json.loads(json.dumps(payload)) == payload


def test_hiphop_exclusion_large_polygons_fail_honestly():
    # the pairwise distance estimate behind the bound weakens as the
    # polygon grows; the mass-free certificate stops passing at eighteen
    # satellites while the slope inequality always holds
    for satellites in (6, 12, 16):
        report = hiphop_exclusion(0.0, TWO_PI, satellites)
        assert report.passed, satellites
    for satellites in (18, 20):
        report = hiphop_exclusion(0.0, TWO_PI, satellites)
        assert not report.intercept_pass and report.slope_pass, satellites


def test_collision_bound_float_conversion():
    bound = CollisionBound(value=3.5, collisions=2, formula="klein")
    assert float(bound) == 3.5
