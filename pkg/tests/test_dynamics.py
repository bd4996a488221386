"""Classification of domain-preserving transforms and their dynamics."""

import numpy as np
import pytest

from hilbertine.domains import ConicDomain, Membership, simplex_domain, unit_disk
from hilbertine.dynamics import (AxisKind, Family, ProjTransform, axes,
                                 classify, geometric_characteristics,
                                 one_param_power, parabolic_invariant_pencil,
                                 preserves_domain, quasi_hyperbolic_orbit,
                                 same_geometric_characteristics, sector)
from hilbertine.errors import (DegenerateInput, DomainNotPreserved,
                               NoRealLogarithm, NotConvexCompatible,
                               WrongFamily)
from hilbertine.projective import ProjLine, ProjPoint


def boost_x(t):
    return ProjTransform([[np.cosh(t), 0, np.sinh(t)], [0, 1, 0],
                          [np.sinh(t), 0, np.cosh(t)]])


def rot_z(th):
    c, s = np.cos(th), np.sin(th)
    return ProjTransform([[c, -s, 0], [s, c, 0], [0, 0, 1]])


def std_parabolic():
    n = np.array([[0.0, -1, 0], [1, 0, 1], [0, 1, 0]])
    return ProjTransform(np.eye(3) + n + n @ n / 2)


# representative of each family, in a frame where the fixed data is obvious
FAMILY_REPS = {
    Family.HYPERBOLIC: np.diag([2.0, 1.0, 0.5]),
    Family.PLANAR: np.diag([2.0, 2.0, 0.25]),
    Family.QUASI_HYPERBOLIC: np.array([[2.0, 1, 0], [0, 2, 0], [0, 0, 0.25]]),
    Family.PARABOLIC: np.array([[1.0, 1, 0], [0, 1, 1], [0, 0, 1]]),
    Family.ELLIPTIC: np.array([[np.cos(0.7), -np.sin(0.7), 0],
                               [np.sin(0.7), np.cos(0.7), 0], [0, 0, 1.0]]),
    Family.IDENTITY: np.eye(3),
}


# ---------------------------------------------------------------------------
# transform plumbing


def test_determinant_renormalized():
    g = ProjTransform(5.0 * np.eye(3))
    assert abs(np.linalg.det(g.m) - 1.0) < 1e-12
    assert np.allclose(g.m, np.eye(3))
    h = ProjTransform(-np.eye(3))  # real cube root handles negative dets
    assert np.allclose(h.m, -np.eye(3) / np.cbrt(-1.0))


def test_singular_matrix_rejected_but_stiff_ok():
    with pytest.raises(DegenerateInput):
        ProjTransform([[1, 0, 0], [0, 1, 0], [1, 1, 0]])
    g = ProjTransform(np.diag([1e5, 1.0, 1e-5]))  # det 1, huge condition
    assert classify(g).family is Family.HYPERBOLIC


def test_group_operations():
    g = boost_x(0.5)
    h = rot_z(0.3)
    assert np.allclose((g @ h).m, g.m @ h.m)
    assert np.allclose((g @ g.inverse()).m, np.eye(3), atol=1e-12)
    assert np.allclose(g.power(3).m, (g @ g @ g).m, atol=1e-12)
    assert np.allclose(g.power(-2).m, g.inverse().power(2).m, atol=1e-12)


# ---------------------------------------------------------------------------
# classification: families and fixed data


def test_hyperbolic_fixed_data():
    cls = classify(boost_x(0.8))
    assert cls.family is Family.HYPERBOLIC
    assert cls.lambda_plus > cls.lambda_zero > cls.lambda_minus > 0
    assert abs(cls.lambda_plus * cls.lambda_zero * cls.lambda_minus - 1) < 1e-9
    assert cls.p_plus.same_as(ProjPoint((1, 0, 1)), 1e-9)
    assert cls.p_minus.same_as(ProjPoint((-1, 0, 1)), 1e-9)
    assert cls.p_zero.same_as(ProjPoint((0, 1, 0)), 1e-9)
    assert cls.margin > 0.1


def test_planar_fixed_data():
    cls = classify(ProjTransform(FAMILY_REPS[Family.PLANAR]))
    assert cls.family is Family.PLANAR
    assert abs(cls.alpha ** 2 * cls.beta - 1.0) < 1e-9
    assert cls.p_gamma.same_as(ProjPoint((0, 0, 1)), 1e-9)
    assert cls.d_gamma.same_as(ProjLine((0, 0, 1)), 1e-9)  # z = 0 plane fixed


def test_quasi_hyperbolic_fixed_data():
    cls = classify(ProjTransform(FAMILY_REPS[Family.QUASI_HYPERBOLIC]))
    assert cls.family is Family.QUASI_HYPERBOLIC
    assert abs(cls.alpha ** 2 * cls.beta - 1.0) < 1e-9
    assert cls.p1_gamma.same_as(ProjPoint((1, 0, 0)), 1e-9)
    assert cls.p2_gamma.same_as(ProjPoint((0, 0, 1)), 1e-9)
    assert cls.d_gamma.contains(cls.p1_gamma, 1e-9)


def test_parabolic_fixed_data():
    p = std_parabolic()
    cls = classify(p)
    assert cls.family is Family.PARABOLIC
    assert cls.p_gamma.same_as(ProjPoint((-1, 0, 1)), 1e-9)
    # invariant line is the tangent of the invariant disk at p_gamma
    assert cls.d_gamma.same_as(ProjLine((1, 0, 1)), 1e-9)
    assert cls.margin > 1e-3


def test_elliptic_angle_canonicalized():
    cls = classify(ProjTransform(FAMILY_REPS[Family.ELLIPTIC]))
    assert cls.family is Family.ELLIPTIC
    assert cls.theta == pytest.approx(0.7, abs=1e-9)
    assert cls.fixed_point.same_as(ProjPoint((0, 0, 1)), 1e-9)
    # opposite rotation gives the same canonical angle
    cls2 = classify(rot_z(-0.7))
    assert cls2.theta == pytest.approx(0.7, abs=1e-9)


def test_identity_family():
    assert classify(ProjTransform(np.eye(3))).family is Family.IDENTITY
    assert classify(ProjTransform(7.0 * np.eye(3))).family is Family.IDENTITY


def test_classification_conjugation_equivariant():
    rng = np.random.default_rng(1)
    for fam, rep in FAMILY_REPS.items():
        for _ in range(200):
            b = rng.normal(size=(3, 3))
            if abs(np.linalg.det(b)) < 0.1:
                continue
            g = ProjTransform(b @ rep @ np.linalg.inv(b))
            assert classify(g).family is fam


def test_rotation_scaling_rejected():
    # complex eigenvalue pair off the unit modulus never preserves a
    # properly convex domain
    m = np.array([[2 * np.cos(0.7), -2 * np.sin(0.7), 0],
                  [2 * np.sin(0.7), 2 * np.cos(0.7), 0],
                  [0, 0, 1.0]])
    with pytest.raises(NotConvexCompatible):
        classify(ProjTransform(m))


def test_large_nilpotent_parabolic_still_classified():
    n = np.array([[0.0, -1, 0], [1, 0, 1], [0, 1, 0]])
    big = ProjTransform(np.eye(3) + 50 * n + 1250 * (n @ n))  # exp(50 n)
    cls = classify(big)
    assert cls.family is Family.PARABOLIC
    assert cls.p_gamma.same_as(ProjPoint((-1, 0, 1)), 1e-6)


# ---------------------------------------------------------------------------
# domain preservation and axes


def test_preserves_domain():
    disk = unit_disk()
    simp = simplex_domain()
    assert preserves_domain(boost_x(0.8), disk)
    assert preserves_domain(rot_z(1.1), disk)
    assert not preserves_domain(boost_x(0.8), simp)
    assert preserves_domain(ProjTransform(np.diag([2.0, 1.0, 0.5])), simp)
    shifted = ConicDomain(np.array([[1.0, 0, 0.5], [0, 1, 0], [0.5, 0, -0.75]]))
    assert not preserves_domain(boost_x(0.8), shifted)


def test_axes_of_boost():
    disk = unit_disk()
    ax = axes(boost_x(0.8), disk)
    assert len(ax) == 1 and ax[0].kind is AxisKind.PRINCIPAL
    ends = {tuple(np.round(disk.chart.point_to_xy(p), 9)) for p in ax[0].endpoints}
    assert ends == {(1.0, 0.0), (-1.0, 0.0)}
    with pytest.raises(WrongFamily):
        axes(rot_z(0.3), disk)
    with pytest.raises(DomainNotPreserved):
        axes(boost_x(0.8), simplex_domain())


def test_simplex_diagonal_axes_include_secondary():
    simp = simplex_domain()
    g = ProjTransform(np.diag([4.0, 1.0, 0.25]))
    ax = axes(g, simp)
    kinds = [a.kind for a in ax]
    assert kinds.count(AxisKind.PRINCIPAL) == 1
    # middle eigenvector is a simplex vertex, so the two side axes appear
    assert kinds.count(AxisKind.SECONDARY) == 2


# ---------------------------------------------------------------------------
# invariant pencil of a parabolic


def test_pencil_members_invariant_and_tangent():
    p = std_parabolic()
    cls = classify(p)
    pen = parabolic_invariant_pencil(p)
    rng = np.random.default_rng(17)
    for _ in range(50):
        lam, mu = rng.normal(), rng.normal()
        c = pen.member(lam, mu)
        res = p.m.T @ c @ p.m - c
        assert np.max(np.abs(res)) <= 1e-9 * max(1.0, np.max(np.abs(c)))
    # mu = 0 degenerates to the double tangent line
    z = pen.member(1.0, 0.0)
    assert np.linalg.matrix_rank(z, tol=1e-9) == 1
    # all mu=1 members are ellipses through p_gamma tangent to d_gamma
    for lam in (0.0, 0.5, 1.0, 2.0):
        conic = pen.member_conic(lam, 1.0)
        assert abs(float(cls.p_gamma.v @ conic.q @ cls.p_gamma.v)) < 1e-12
        assert conic.tangent_line_at(cls.p_gamma).same_as(cls.d_gamma, 1e-9)


def test_pencil_member_domain_is_smooth_at_fixed_point():
    p = std_parabolic()
    pen = parabolic_invariant_pencil(p)
    dom = ConicDomain(pen.member_conic(0.5, 1.0))
    assert preserves_domain(p, dom)
    assert dom.contains(classify(p).p_gamma) is Membership.BOUNDARY
    rep = dom.regularity_report()
    assert rep.segment_count == 0 and rep.corner_count == 0


def test_pencil_needs_parabolic():
    with pytest.raises(WrongFamily):
        parabolic_invariant_pencil(boost_x(0.5))


# ---------------------------------------------------------------------------
# one-parameter powers


def test_one_param_power_consistency():
    for g in (boost_x(0.7), std_parabolic(),
              ProjTransform(FAMILY_REPS[Family.QUASI_HYPERBOLIC])):
        assert np.allclose(one_param_power(g, 0.0).m, np.eye(3), atol=1e-9)
        assert np.allclose(one_param_power(g, 2.0).m, (g @ g).m, atol=1e-9)
        h = one_param_power(g, 0.5)
        assert np.allclose((h @ h).m, g.m, atol=1e-9)


def test_one_param_power_rejects_rotation():
    with pytest.raises(NoRealLogarithm):
        one_param_power(rot_z(0.4), 0.5)


# ---------------------------------------------------------------------------
# quasi-hyperbolic orbits


def test_quasi_hyperbolic_orbit_residuals():
    g = ProjTransform(FAMILY_REPS[Family.QUASI_HYPERBOLIC])
    rng = np.random.default_rng(26)
    ts = np.linspace(-2.0, 2.0, 41)
    for _ in range(25):
        x0 = rng.uniform(0.2, 2.0, 2)
        orbit = quasi_hyperbolic_orbit(g, x0, ts)
        assert np.max(np.abs(orbit.residuals)) <= 1e-9
        assert not orbit.on_line_y0
    flat = quasi_hyperbolic_orbit(g, (1.5, 0.0), ts)
    assert flat.on_line_y0
    assert np.max(np.abs(flat.points[:, 1])) <= 1e-12
    single = quasi_hyperbolic_orbit(g, (1.0, 1.0), [0.0])
    assert np.allclose(single.points[0], [1.0, 1.0], atol=1e-12)


def test_quasi_hyperbolic_orbit_needs_right_family():
    with pytest.raises(WrongFamily):
        quasi_hyperbolic_orbit(boost_x(0.5), (1.0, 1.0), [0.0, 1.0])


# ---------------------------------------------------------------------------
# sectors


def test_sector_of_boost_contains_axis_segment():
    disk = unit_disk()
    g = boost_x(0.8)
    seed = [(-0.1, -0.1), (0.1, -0.1), (0.1, 0.1), (-0.1, 0.1)]
    sec = sector(g, disk, seed, 4)
    hull_xy = np.array([disk.chart.point_to_xy(v) for v in sec.hull.vertices])

    def in_hull(q):
        n = len(hull_xy)
        for i in range(n):
            e = hull_xy[(i + 1) % n] - hull_xy[i]
            d = q - hull_xy[i]
            if e[0] * d[1] - e[1] * d[0] < -1e-12:
                return False
        return True

    x = disk.chart.point_from_xy(0.05, 0.0)
    a = np.array(disk.chart.point_to_xy(g.power(-4).apply(x)))
    b = np.array(disk.chart.point_to_xy(g.power(4).apply(x)))
    for t in np.linspace(0.0, 1.0, 33):
        assert in_hull((1 - t) * a + t * b)


def test_parabolic_sector_touches_boundary_only_near_fixed_point():
    disk = unit_disk()
    p = std_parabolic()
    pg = np.array([-1.0, 0.0])
    seed = [(-0.35, -0.15), (-0.05, -0.15), (-0.05, 0.15), (-0.35, 0.15)]
    sec = sector(p, disk, seed, 50)
    hx = np.array([disk.chart.point_to_xy(v) for v in sec.hull.vertices])
    margin = 1.0 - np.hypot(hx[:, 0], hx[:, 1])
    dist_pg = np.hypot(hx[:, 0] - pg[0], hx[:, 1] - pg[1])
    k = int(np.argmin(margin))
    assert margin[k] < 1e-6          # the hull hugs the boundary ...
    assert dist_pg[k] < 0.05         # ... only next to the fixed point
    assert np.min(margin[dist_pg > 0.35]) > 1.5e-3
    # deeper orbits approach the fixed point
    sec2 = sector(p, disk, seed, 80)
    hx2 = np.array([disk.chart.point_to_xy(v) for v in sec2.hull.vertices])
    m2 = 1.0 - np.hypot(hx2[:, 0], hx2[:, 1])
    k2 = int(np.argmin(m2))
    assert m2[k2] < margin[k]
    assert np.hypot(hx2[k2, 0] - pg[0], hx2[k2, 1] - pg[1]) < dist_pg[k]


def test_sector_edge_cases():
    disk = unit_disk()
    seed = [(-0.1, -0.1), (0.1, -0.1), (0.1, 0.1), (-0.1, 0.1)]
    sec0 = sector(boost_x(0.8), disk, seed, 0)
    got = sorted(tuple(np.round(disk.chart.point_to_xy(v), 12))
                 for v in sec0.hull.vertices)
    assert got == sorted(seed)
    with pytest.raises(DomainNotPreserved):
        sector(boost_x(0.8), simplex_domain(), seed, 2)
    with pytest.raises(DegenerateInput):
        sector(boost_x(0.8), disk, [(-2.0, 0.0), (0.1, 0.0), (0.0, 0.1)], 2)


# ---------------------------------------------------------------------------
# shared fixed data


def test_same_characteristics_powers_and_parabolics():
    g = boost_x(0.6)
    assert same_geometric_characteristics(g, g.power(3), 1e-7)
    p = std_parabolic()
    assert same_geometric_characteristics(p, p @ p, 1e-7)
    # boosts along different axes share nothing
    b2 = ProjTransform([[1, 0, 0], [0, np.cosh(0.6), np.sinh(0.6)],
                        [0, np.sinh(0.6), np.cosh(0.6)]])
    assert not same_geometric_characteristics(g, b2, 1e-7)
    assert not same_geometric_characteristics(g, p, 1e-7)


def test_characteristics_report_family():
    ch = geometric_characteristics(boost_x(0.4))
    assert ch.family is Family.HYPERBOLIC
    ch2 = geometric_characteristics(std_parabolic())
    assert ch2.family is Family.PARABOLIC
