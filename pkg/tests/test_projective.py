"""Plane primitives: points, lines, charts, conics, cross-ratio."""

import numpy as np
import pytest

from hilbertine.errors import (CoincidentEndpoints, CoincidentLines,
                               CoincidentPoints, DegenerateConic,
                               DegenerateInput, NonCollinear)
from hilbertine.projective import (AffineChart, Conic, ProjLine, ProjPoint,
                                   apply_matrix_line, apply_matrix_point,
                                   cross_ratio, incident, join,
                                   line_conic_intersection, meet,
                                   normalize_triple)


def _pt(x, y):
    return ProjPoint.from_xy(x, y)


# ---------------------------------------------------------------------------
# normalization convention


def test_normalize_triple_unit_norm_and_sign():
    v = normalize_triple((3.0, 0.0, -4.0))
    assert abs(np.linalg.norm(v) - 1.0) < 1e-15
    # largest-magnitude entry is made positive
    assert v[2] > 0 and v[0] < 0
    w = normalize_triple((-3.0, 0.0, 4.0))
    assert np.allclose(v, w)


def test_normalize_triple_rejects_bad_input():
    with pytest.raises(DegenerateInput):
        normalize_triple((0.0, 0.0, 0.0))
    with pytest.raises(DegenerateInput):
        normalize_triple((1.0, np.inf, 0.0))
    with pytest.raises(DegenerateInput):
        normalize_triple((1.0, 2.0))


def test_points_equal_up_to_scale():
    assert ProjPoint((1, 2, 3)).same_as(ProjPoint((-2, -4, -6)))
    assert not ProjPoint((1, 2, 3)).same_as(ProjPoint((1, 2, 3.001)))


# ---------------------------------------------------------------------------
# incidence: join and meet


def test_join_meet_roundtrip():
    p, q = _pt(0.0, 0.0), _pt(1.0, 1.0)
    l = join(p, q)
    assert incident(p, l) and incident(q, l)
    # y = x has coefficients (1, -1, 0) up to scale
    assert l.same_as(ProjLine((1.0, -1.0, 0.0)))
    m = ProjLine((1.0, 0.0, -1.0))  # x = 1
    r = meet(l, m)
    assert r.same_as(_pt(1.0, 1.0))


def test_parallel_lines_meet_at_infinity():
    l = ProjLine((0.0, 1.0, 0.0))   # y = 0
    m = ProjLine((0.0, 1.0, -1.0))  # y = 1
    p = meet(l, m)
    assert abs(p.v[2]) < 1e-15  # infinite point of the standard chart
    assert p.same_as(ProjPoint((1.0, 0.0, 0.0)))


def test_join_meet_degenerate():
    with pytest.raises(CoincidentPoints):
        join(_pt(0.3, 0.7), ProjPoint((0.3, 0.7, 1.0)))
    with pytest.raises(CoincidentLines):
        meet(ProjLine((1, 2, 3)), ProjLine((-2, -4, -6)))


def test_join_meet_duality_random():
    rng = np.random.default_rng(3)
    for _ in range(200):
        a, b = rng.normal(size=3), rng.normal(size=3)
        p, q = ProjPoint(a), ProjPoint(b)
        l = join(p, q)
        # the same triple acts as the meet of the dual lines
        m = meet(ProjLine(a), ProjLine(b))
        assert np.allclose(l.l, m.v)


# ---------------------------------------------------------------------------
# cross-ratio


def test_cross_ratio_collinear_quadruple():
    # [p:x:y:q] with p=(-1,0), x=(0,0), y=(0.5,0), q=(1,0):
    # (|p-y| |q-x|) / (|p-x| |q-y|) = (1.5 * 1) / (1 * 0.5) = 3
    v = cross_ratio(_pt(-1, 0), _pt(0, 0), _pt(0.5, 0), _pt(1, 0))
    assert abs(v - 3.0) < 1e-12


def test_cross_ratio_equal_inner_points_is_one():
    v = cross_ratio(_pt(-1, 0), _pt(0.2, 0), _pt(0.2, 0), _pt(1, 0))
    assert v == pytest.approx(1.0, abs=1e-12)


def test_cross_ratio_projective_invariance():
    rng = np.random.default_rng(11)
    base = [_pt(-1, 0), _pt(-0.2, 0), _pt(0.4, 0), _pt(1, 0)]
    ref = cross_ratio(*base)
    for _ in range(300):
        m = rng.normal(size=(3, 3))
        if abs(np.linalg.det(m)) < 0.1:
            continue
        imgs = [apply_matrix_point(m, p) for p in base]
        assert abs(cross_ratio(*imgs) - ref) <= 1e-9 * max(1.0, ref)


def test_cross_ratio_multiplicative_along_a_line():
    # [p:x:z:q] = [p:x:y:q] * [p:y:z:q] for ordered collinear points
    p, x, y, z, q = (_pt(-2, 1), _pt(-0.5, 1), _pt(0.1, 1), _pt(0.8, 1),
                     _pt(2, 1))
    lhs = cross_ratio(p, x, z, q)
    rhs = cross_ratio(p, x, y, q) * cross_ratio(p, y, z, q)
    assert abs(lhs - rhs) < 1e-12


def test_cross_ratio_errors():
    with pytest.raises(NonCollinear):
        cross_ratio(_pt(0, 0), _pt(1, 0), _pt(0, 1), _pt(1, 1))
    with pytest.raises(CoincidentEndpoints):
        cross_ratio(_pt(0, 0), _pt(0, 0), _pt(0.5, 0), _pt(1, 0))


def test_cross_ratio_handles_infinite_points():
    # with q at infinity the cross-ratio degenerates to |p-y|/|p-x|
    p, x, y = _pt(0, 0), _pt(1, 0), _pt(3, 0)
    q = ProjPoint((1.0, 0.0, 0.0))
    assert abs(cross_ratio(p, x, y, q) - 3.0) < 1e-12


# ---------------------------------------------------------------------------
# charts


def test_chart_roundtrip_and_infinity():
    rng = np.random.default_rng(7)
    chart = AffineChart(rng.normal(size=(3, 3)) + 3 * np.eye(3))
    xy = rng.uniform(-2, 2, size=(50, 2))
    back = chart.to_xy(chart.to_points(xy))
    assert np.max(np.abs(back - xy)) < 1e-9
    linf = chart.line_at_infinity()
    h = chart.to_points(np.array([[0.3, -1.2]]))[0]
    assert not incident(ProjPoint(h), linf)
    with pytest.raises(DegenerateInput):
        chart.to_xy(np.array([linf_dir(chart)]))


def linf_dir(chart):
    # a point on the chart's line at infinity
    return chart.basis @ np.array([1.0, 0.5, 0.0])


def test_chart_rejects_singular_basis():
    with pytest.raises(DegenerateInput):
        AffineChart(np.ones((3, 3)))


# ---------------------------------------------------------------------------
# conics


def test_conic_normalization_and_signature():
    c = Conic(np.diag([5.0, 5.0, -5.0]))
    assert abs(np.linalg.norm(c.q) - 1.0) < 1e-15
    assert int(np.sum(c.eigvals < 0)) == 1
    # opposite-sign input lands on the same normalized matrix
    c2 = Conic(np.diag([-2.0, -2.0, 2.0]))
    assert np.allclose(c.q, c2.q)
    # interior of the unit circle is on the negative side
    assert c.value(np.array([0.0, 0.0, 1.0]))[0] < 0
    assert c.value(np.array([2.0, 0.0, 1.0]))[0] > 0


def test_conic_rejects_degenerate():
    with pytest.raises(DegenerateConic):
        Conic(np.diag([1.0, 1.0, 1.0]))      # definite
    with pytest.raises(DegenerateConic):
        Conic(np.diag([1.0, -1.0, 0.0]))     # singular
    with pytest.raises(DegenerateConic):
        Conic(np.array([[1, 2, 0], [0, 1, 0], [0, 0, -1.0]]))  # not symmetric


def test_line_circle_intersection_counts():
    circle = Conic(np.diag([1.0, 1.0, -1.0]))
    two = line_conic_intersection(ProjLine((0.0, 1.0, 0.0)), circle)  # y = 0
    assert len(two) == 2
    got = sorted(p.v[0] / p.v[2] for p in two)
    assert np.allclose(got, [-1.0, 1.0], atol=1e-12)
    one = line_conic_intersection(ProjLine((1.0, 0.0, -1.0)), circle)  # x = 1
    assert len(one) == 1
    assert one[0].same_as(_pt(1.0, 0.0), 1e-8)
    none = line_conic_intersection(ProjLine((1.0, 0.0, -2.0)), circle)  # x = 2
    assert none == ()


def test_line_conic_intersection_random_lines_land_on_conic():
    rng = np.random.default_rng(19)
    m = rng.normal(size=(3, 3))
    q = m @ np.diag([1.0, 1.0, -1.0]) @ m.T
    conic = Conic(q)
    n_hit = 0
    for _ in range(200):
        l = ProjLine(rng.normal(size=3))
        for p in line_conic_intersection(l, conic):
            assert abs(float(p.v @ conic.q @ p.v)) < 1e-9
            assert incident(p, l, 1e-9)
            n_hit += 1
    assert n_hit > 100  # most random lines are secant


def test_tangent_line_touches_only_once():
    circle = Conic(np.diag([1.0, 1.0, -1.0]))
    p = _pt(0.0, 1.0)
    t = circle.tangent_line_at(p)
    assert t.same_as(ProjLine((0.0, 1.0, -1.0)))  # y = 1
    assert len(line_conic_intersection(t, circle)) == 1
    with pytest.raises(DegenerateInput):
        circle.tangent_line_at(_pt(0.0, 0.5))


def test_apply_matrix_preserves_incidence():
    rng = np.random.default_rng(23)
    for _ in range(100):
        m = rng.normal(size=(3, 3))
        if abs(np.linalg.det(m)) < 0.1:
            continue
        p = ProjPoint(rng.normal(size=3))
        l = ProjLine(np.cross(p.v, rng.normal(size=3)))
        assert incident(p, l, 1e-9)
        assert incident(apply_matrix_point(m, p), apply_matrix_line(m, l), 1e-7)
