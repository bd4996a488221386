"""Busemann measure: densities, region volumes, pics, ideal triangles."""

import numpy as np
import pytest

from hilbertine.busemann import (PolygonRegion, TriangleRegion, TruncatedPic,
                                 Verdict, busemann_density, ideal_triangle_area,
                                 pic_volume_profile, region_volume)
from hilbertine.domains import (ConicDomain, Membership, PolygonDomain,
                                simplex_domain, unit_disk)
from hilbertine.errors import (BadPic, DegenerateTriangle, NonIntegrable)
from hilbertine.projective import AffineChart, ProjPoint

# hyperbolic area of the projective disk model: integrating the metric
# g_ij = d_ij/(1-r^2) + x_i x_j/(1-r^2)^2 gives density (1-r^2)^(-3/2)
# relative to Lebesgue measure, and 4x that for the unnormalized ball form
DISK_PIC_LIMIT = 0.6093853080307952  # area of the wedge used below


def _pt(dom, x, y):
    return dom.chart.point_from_xy(x, y)


# ---------------------------------------------------------------------------
# pointwise density


def test_disk_density_closed_form():
    disk = unit_disk()
    assert busemann_density(disk, _pt(disk, 0.0, 0.0)) == pytest.approx(4.0, rel=1e-12)
    for r in (0.3, 0.6, 0.9):
        want = 4.0 * (1.0 - r * r) ** -1.5
        assert busemann_density(disk, _pt(disk, r, 0.0)) == pytest.approx(want, rel=1e-12)
        # rotational symmetry
        assert busemann_density(disk, _pt(disk, 0.0, -r)) == pytest.approx(want, rel=1e-12)


def test_simplex_density_closed_form():
    # in barycentric-like chart coords (u, v, w = 1-u-v) the density is
    # pi/(3 u v w); the induced measure density (quarter of this) integrates
    # to the familiar pi/(12 u v w)
    simp = simplex_domain()
    rng = np.random.default_rng(3)
    for _ in range(50):
        u, v = rng.uniform(0.05, 0.6, 2)
        w = 1.0 - u - v
        if w < 0.05:
            continue
        got = busemann_density(simp, _pt(simp, u, v))
        assert got == pytest.approx(np.pi / (3 * u * v * w), rel=1e-12)


def test_density_rejected_outside():
    disk = unit_disk()
    with pytest.raises(NonIntegrable):
        busemann_density(disk, _pt(disk, 1.0, 0.0))


# ---------------------------------------------------------------------------
# region volumes


def test_interior_triangle_volume_in_simplex():
    # independent oracle: quadrature of pi/(12 u v w) over the triangle
    # (0.2,0.2)-(0.5,0.2)-(0.3,0.5), computed with a separate integrator
    simp = simplex_domain()
    region = TriangleRegion(_pt(simp, 0.2, 0.2), _pt(simp, 0.5, 0.2),
                            _pt(simp, 0.3, 0.5))
    v = region_volume(simp, region, rel_tol=1e-3)
    assert v == pytest.approx(0.3458867271163121, rel=1.5e-3)


def test_polygon_region_volume_additive():
    simp = simplex_domain()
    quad = [(0.2, 0.2), (0.5, 0.2), (0.5, 0.4), (0.2, 0.4)]
    whole = region_volume(simp, PolygonRegion(
        [_pt(simp, x, y) for x, y in quad]), rel_tol=1e-3)
    tri1 = region_volume(simp, TriangleRegion(
        _pt(simp, 0.2, 0.2), _pt(simp, 0.5, 0.2), _pt(simp, 0.5, 0.4)), rel_tol=1e-3)
    tri2 = region_volume(simp, TriangleRegion(
        _pt(simp, 0.2, 0.2), _pt(simp, 0.5, 0.4), _pt(simp, 0.2, 0.4)), rel_tol=1e-3)
    assert whole == pytest.approx(tri1 + tri2, rel=4e-3)


def test_volume_shrinks_in_larger_domain():
    # same region, nested domains: the bigger domain assigns less volume
    big = unit_disk()
    small = ConicDomain(np.diag([1.0, 1.0, -0.81]), chart=AffineChart())  # radius 0.9
    region = TriangleRegion(_pt(big, 0.1, 0.1), _pt(big, 0.5, 0.0),
                            _pt(big, 0.0, 0.55))
    v_big = region_volume(big, region, rel_tol=1e-3)
    v_small = region_volume(small, region, rel_tol=1e-3)
    assert v_big < v_small * (1.0 - 1e-2)


def test_volume_diverges_on_boundary_contact():
    simp = simplex_domain()
    touching = TriangleRegion(_pt(simp, 0.0, 0.0), _pt(simp, 0.5, 0.0),
                              _pt(simp, 0.3, 0.4))
    with pytest.raises(NonIntegrable):
        region_volume(simp, touching, rel_tol=1e-3)


# ---------------------------------------------------------------------------
# pic profiles


def _disk_pic(disk):
    return TriangleRegion(_pt(disk, -1.0, 0.0), _pt(disk, 0.0, 0.3),
                          _pt(disk, 0.0, -0.3))


def test_disk_pic_profile_converges():
    disk = unit_disk()
    prof = pic_volume_profile(disk, _disk_pic(disk),
                              eps_levels=(1e-2, 1e-3, 1e-4, 1e-5, 1e-6),
                              rel_tol=3e-3, conv_tol=2e-2)
    assert prof.verdict is Verdict.CONVERGED
    assert all(b >= a for a, b in zip(prof.partials, prof.partials[1:]))
    # increments shrink roughly like sqrt(eps)
    incs = prof.increments[1:]
    assert all(b < 0.5 * a for a, b in zip(incs, incs[1:]))
    assert prof.partials[-1] == pytest.approx(DISK_PIC_LIMIT, abs=2e-3)


def test_corner_pic_profile_diverges():
    simp = simplex_domain()
    corner = TriangleRegion(_pt(simp, 0.0, 0.0), _pt(simp, 0.3, 0.1),
                            _pt(simp, 0.1, 0.3))
    prof = pic_volume_profile(simp, corner,
                              eps_levels=(1e-1, 3e-2, 1e-2, 3e-3, 1e-3),
                              rel_tol=3e-3)
    assert prof.verdict is Verdict.DIVERGING
    incs = prof.increments[1:]
    # log-divergent: annulus volumes stay level instead of decaying
    assert all(i > 0.4 for i in incs)
    assert all(b >= a for a, b in zip(prof.partials, prof.partials[1:]))


def test_truncated_pic_volumes_increase():
    disk = unit_disk()
    pic = _disk_pic(disk)
    va = region_volume(disk, TruncatedPic(pic, 1e-2), rel_tol=3e-3)
    vb = region_volume(disk, TruncatedPic(pic, 1e-3), rel_tol=3e-3)
    assert 0 < va < vb < DISK_PIC_LIMIT


def test_pic_validation():
    disk = unit_disk()
    interior = TriangleRegion(_pt(disk, 0.0, 0.0), _pt(disk, 0.3, 0.0),
                              _pt(disk, 0.0, 0.3))
    with pytest.raises(BadPic):
        pic_volume_profile(disk, interior)
    two_on_boundary = TriangleRegion(_pt(disk, -1.0, 0.0), _pt(disk, 1.0, 0.0),
                                     _pt(disk, 0.0, 0.3))
    with pytest.raises(BadPic):
        pic_volume_profile(disk, two_on_boundary)
    with pytest.raises(BadPic):
        pic_volume_profile(disk, _disk_pic(disk), eps_levels=(1e-2, 1e-2))


# ---------------------------------------------------------------------------
# ideal triangles


def test_disk_ideal_triangle_area_is_pi():
    # constant curvature -1: every ideal triangle has the same area
    disk = unit_disk()
    tri1 = (_pt(disk, 1.0, 0.0), _pt(disk, -0.6, 0.8), _pt(disk, 0.0, -1.0))
    a1 = ideal_triangle_area(disk, *tri1, rel_tol=3e-3)
    assert a1 == pytest.approx(np.pi, rel=2e-3)
    th = np.array([0.4, 2.1, 4.4])
    tri2 = tuple(_pt(disk, np.cos(t), np.sin(t)) for t in th)
    a2 = ideal_triangle_area(disk, *tri2, rel_tol=3e-3)
    assert a2 == pytest.approx(np.pi, rel=2e-3)


def test_ideal_triangle_needs_boundary_vertices():
    disk = unit_disk()
    with pytest.raises(DegenerateTriangle):
        ideal_triangle_area(disk, _pt(disk, 0.5, 0.0), _pt(disk, -0.6, 0.8),
                            _pt(disk, 0.0, -1.0))


def test_simplex_ideal_triangle_beats_lower_bound():
    # the minimizing configuration in the triangle domain has area pi^3/24,
    # reached at the three edge midpoints
    simp = simplex_domain()
    s1 = ProjPoint((1.0, 1.0, 0.0))
    s2 = ProjPoint((0.0, 1.0, 1.0))
    s3 = ProjPoint((1.0, 0.0, 1.0))
    a = ideal_triangle_area(simp, s1, s2, s3, rel_tol=3e-3)
    min_area = np.pi ** 3 / 24.0
    assert a == pytest.approx(min_area, rel=5e-3)
    assert a > min_area - 0.01
