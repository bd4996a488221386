"""Properly convex open domains of P^2 and their Hilbert metric.

Three representations share one interface: polygons (vertex list), conics
(signature-(2,1) matrix), and halfplane intersections (support functional
list). Every domain carries an affine chart; metric quantities (chord
lengths, Finsler norms, unit-ball areas) are computed in that chart's
Euclidean structure, which is legitimate because the final quantities
(distances, measures) are projectively invariant.

Distances use the logarithm of the full cross-ratio, without a 1/2 factor:
the Hilbert distance of the unit disk is twice the Klein hyperbolic metric.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CoincidentPoints,
    DegenerateConic,
    DegenerateInput,
    NonConvergent,
    NotInterior,
    NotProper,
)
from .projective import (
    DEFAULT_TOL,
    AffineChart,
    Conic,
    ProjLine,
    ProjPoint,
    cross_ratio,
    normalize_triple,
)

HALFPLANE_CAP = 4096
BISECTION_RESIDUAL = 1e-12
BISECTION_MAX_STEPS = 200
_RAY_CAP = 1e9  # chart parameter beyond which a ray is treated as never exiting


class Membership(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class Chords:
    """Boundary chord through x toward y: p behind x, q beyond y.

    t_minus/t_plus are chart-parameter offsets along the unit direction from
    x to y; t_plus = +inf marks a chord endpoint on the chart's line at
    infinity (possible for halfplane domains unbounded in their chart).
    """

    p: ProjPoint
    q: ProjPoint
    t_minus: float
    t_plus: float
    direction: np.ndarray


def _convex_hull_ccw(pts: np.ndarray, tol: float = 1e-12):
    """Monotone-chain hull; returns indices of hull vertices in CCW order."""
    pts = np.asarray(pts, dtype=float)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    cross = lambda o, a, b: (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    scale = max(1.0, float(np.max(np.abs(pts)))) ** 2
    lo = []
    for i in order:
        while len(lo) >= 2 and cross(pts[lo[-2]], pts[lo[-1]], pts[i]) <= tol * scale:
            lo.pop()
        lo.append(i)
    hi = []
    for i in order[::-1]:
        while len(hi) >= 2 and cross(pts[hi[-2]], pts[hi[-1]], pts[i]) <= tol * scale:
            hi.pop()
        hi.append(i)
    return lo[:-1] + hi[:-1]


def _polygon_area(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _sign_fix_cone_reps(rows: np.ndarray, iters: int = 64):
    """Choose signs s_i so the rows s_i * v_i lie in an open halfspace.

    Rows that are already consistently signed are returned unchanged:
    flipping a generator changes the cone, so sign guessing may only run
    for genuinely mixed inputs. Raises NotProper when no halfspace exists
    (the projective hull of the rows would then contain a full line).
    """
    v = rows / np.linalg.norm(rows, axis=1, keepdims=True)
    w = v.sum(axis=0)
    for _ in range(2000):
        n = np.linalg.norm(w)
        if n < 1e-14:
            break
        w /= n
        d = v @ w
        if np.min(d) > 1e-12:
            return v.copy(), w
        w = w + v[int(np.argmin(d))]
    w = v[0].copy()
    s = np.ones(len(v))
    for _ in range(iters):
        s_new = np.where(v @ w >= 0, 1.0, -1.0)
        w_new = (s_new[:, None] * v).sum(axis=0)
        n = np.linalg.norm(w_new)
        if n < 1e-14:
            break
        w_new /= n
        if np.array_equal(s_new, s) and np.allclose(w_new, w):
            break
        s, w = s_new, w_new
    if np.min((s[:, None] * v) @ w) <= 1e-12:
        raise NotProper("no affine chart contains the hull of these points")
    return s[:, None] * v, w


def _chart_from_cone_axis(w: np.ndarray) -> AffineChart:
    """Chart whose line at infinity is the plane orthogonal to w."""
    w = w / np.linalg.norm(w)
    k = int(np.argmin(np.abs(w)))
    e = np.zeros(3)
    e[k] = 1.0
    b1 = np.cross(w, e)
    b1 /= np.linalg.norm(b1)
    b2 = np.cross(w, b1)
    return AffineChart(np.column_stack([b1, b2, w]))


class ConvexDomain:
    """Base class: membership, chords, Hilbert metric, unit balls, duality."""

    chart: AffineChart

    # ---- representation-specific hooks -------------------------------------

    def margin_xy(self, pts: np.ndarray) -> np.ndarray:
        """Approximate signed chart distance to the boundary, positive inside."""
        raise NotImplementedError

    def _chord_params(self, x: np.ndarray, d: np.ndarray, tol: float):
        """(t_minus, t_plus) chart offsets of the boundary along x + t d."""
        raise NotImplementedError

    def reference_interior_xy(self) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    # ---- shared interface --------------------------------------------------

    def contains(self, p: ProjPoint, tol: float = DEFAULT_TOL) -> Membership:
        try:
            xy = self.chart.point_to_xy(p, tol=1e-13)
        except DegenerateInput:
            return self._membership_at_infinity(p, tol)
        m = float(self.margin_xy(xy[None, :])[0])
        if m > tol:
            return Membership.INTERIOR
        if m >= -tol:
            return Membership.BOUNDARY
        return Membership.EXTERIOR

    def _membership_at_infinity(self, p: ProjPoint, tol: float) -> Membership:
        return Membership.EXTERIOR

    def boundary_chords(self, x: ProjPoint, y: ProjPoint, tol: float = DEFAULT_TOL) -> Chords:
        """Chord of the boundary through interior points x, y (x != y)."""
        if x.same_as(y, tol):
            raise CoincidentPoints("chord through coincident points")
        if self.contains(x, tol) is Membership.EXTERIOR or self.contains(y, tol) is Membership.EXTERIOR:
            raise NotInterior("chord through a point outside the closed domain")
        ax = self.chart.point_to_xy(x)
        ay = self.chart.point_to_xy(y)
        d = ay - ax
        nd = np.linalg.norm(d)
        if nd <= tol:
            raise CoincidentPoints("chord direction degenerate in chart")
        d = d / nd
        t_minus, t_plus = self._chord_params(ax, d, tol)
        p = self._ray_endpoint(ax, d, t_minus)
        q = self._ray_endpoint(ax, d, t_plus)
        return Chords(p=p, q=q, t_minus=t_minus, t_plus=t_plus, direction=d)

    def _ray_endpoint(self, x: np.ndarray, d: np.ndarray, t: float) -> ProjPoint:
        if math.isinf(t):
            h = self.chart.basis @ np.array([d[0], d[1], 0.0])
            return ProjPoint(h)
        return ProjPoint(self.chart.to_points((x + t * d)[None, :])[0])

    def hilbert_distance(self, x: ProjPoint, y: ProjPoint, tol: float = DEFAULT_TOL) -> float:
        """d(x, y) = log [p:x:y:q]; +inf when either point sits on the boundary."""
        mx, my = self.contains(x, tol), self.contains(y, tol)
        if mx is Membership.EXTERIOR or my is Membership.EXTERIOR:
            raise NotInterior("hilbert_distance requires points of the closed domain")
        if x.same_as(y, tol):
            return 0.0
        if mx is Membership.BOUNDARY or my is Membership.BOUNDARY:
            return math.inf
        # symmetric by construction: order the arguments canonically
        if tuple(y.v) < tuple(x.v):
            x, y = y, x
        ch = self.boundary_chords(x, y, tol)
        if math.isinf(ch.t_minus) or math.isinf(ch.t_plus):
            # chord endpoint at chart infinity: evaluate projectively anyway
            pass
        return math.log(cross_ratio(ch.p, x, y, ch.q, tol))

    def finsler_norm(self, x: ProjPoint, v_xy, tol: float = DEFAULT_TOL) -> float:
        """Finsler norm of the chart tangent vector v at interior point x."""
        v = np.asarray(v_xy, dtype=float)
        nv = float(np.linalg.norm(v))
        if nv == 0.0:
            return 0.0
        if self.contains(x, tol) is not Membership.INTERIOR:
            raise NotInterior("finsler_norm requires an interior point")
        ax = self.chart.point_to_xy(x)
        t_minus, t_plus = self._chord_params(ax, v / nv, tol)
        inv_p = 0.0 if math.isinf(t_plus) else 1.0 / t_plus
        inv_m = 0.0 if math.isinf(t_minus) else 1.0 / abs(t_minus)
        return (inv_p + inv_m) * nv

    def tangent_unit_ball(self, x: ProjPoint, n_dirs: int = 64, tol: float = DEFAULT_TOL) -> np.ndarray:
        """Inscribed polygon of the unit ball of the Finsler norm at x (chart coords).

        Vertex k sits at angle 2 pi k / n_dirs, at radius 1/||u||_x. The polygon
        is inscribed, so its area increases with n_dirs toward the ball's area.
        """
        if n_dirs < 8:
            raise DegenerateInput("n_dirs must be at least 8")
        if self.contains(x, tol) is not Membership.INTERIOR:
            raise NotInterior("tangent_unit_ball requires an interior point")
        ax = self.chart.point_to_xy(x)
        radii = np.empty(n_dirs)
        half = n_dirs // 2 if n_dirs % 2 == 0 else n_dirs
        for k in range(half):
            th = 2.0 * np.pi * k / n_dirs
            u = np.array([np.cos(th), np.sin(th)])
            t_minus, t_plus = self._chord_params(ax, u, tol)
            inv = (0.0 if math.isinf(t_plus) else 1.0 / t_plus) + (
                0.0 if math.isinf(t_minus) else 1.0 / abs(t_minus))
            radii[k] = 1.0 / inv
            if n_dirs % 2 == 0:
                radii[k + half] = radii[k]  # the norm is reversible
        full = 2.0 * np.pi * np.arange(n_dirs) / n_dirs
        # vectors of the tangent plane at x (polygon centered at the origin)
        return radii[:, None] * np.stack([np.cos(full), np.sin(full)], axis=1)

    def unit_ball_area(self, x: ProjPoint, tol: float = DEFAULT_TOL) -> float:
        """Exact chart-Lebesgue area of the Finsler unit ball at x."""
        ax = self.chart.point_to_xy(x)
        return float(self.ball_areas_xy(ax[None, :])[0])

    def busemann_density(self, pts_xy: np.ndarray) -> np.ndarray:
        """pi / Leb(unit ball) on (n,2) chart points; the Busemann density
        with the normalization Vol(Euclidean unit disk) = 1."""
        return np.pi / self.ball_areas_xy(np.atleast_2d(pts_xy))

    def ball_areas_xy(self, pts_xy: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def boundary_points(self, n: int, tol: float = DEFAULT_TOL) -> np.ndarray:
        """n boundary samples (chart coords), ordered by angle around the
        reference interior point. Directions whose ray never exits are skipped."""
        c = self.reference_interior_xy()
        out = []
        for k in range(n):
            th = 2.0 * np.pi * k / n
            u = np.array([np.cos(th), np.sin(th)])
            _, t_plus = self._chord_params(c, u, tol)
            if math.isfinite(t_plus):
                out.append(c + t_plus * u)
        return np.asarray(out)

    def regularity_report(self, resolution: float = 1e-3,
                          corner_angle: float = 0.05,
                          max_samples: int = 20000) -> "RegularityReport":
        """Scan the boundary for straight segments and corners.

        A consecutive sample triple counts as aligned when the middle point
        sits within 0.01*resolution^2 of the chord (an order of magnitude
        below the sagitta of a unit-curvature arc sampled at `resolution`);
        a corner is a turning angle above `corner_angle` radians.
        """
        c = self.reference_interior_xy()
        probe = self.boundary_points(256)
        if len(probe) < 3:
            raise DegenerateInput("domain boundary not sampleable in this chart")
        r_max = float(np.max(np.linalg.norm(probe - c, axis=1)))
        n = int(min(max_samples, max(64, np.ceil(2.0 * np.pi * r_max / resolution))))
        pts = self.boundary_points(n)
        m = len(pts)
        a, b, cc = pts, np.roll(pts, -1, axis=0), np.roll(pts, -2, axis=0)
        chord = cc - a
        clen = np.linalg.norm(chord, axis=1)
        dev = np.abs(chord[:, 0] * (b - a)[:, 1] - chord[:, 1] * (b - a)[:, 0]) / np.maximum(clen, 1e-300)
        aligned = dev <= 0.01 * resolution ** 2
        e1 = b - a
        e2 = cc - b
        n1 = np.linalg.norm(e1, axis=1)
        n2 = np.linalg.norm(e2, axis=1)
        cosang = np.clip(np.einsum("ij,ij->i", e1, e2) / np.maximum(n1 * n2, 1e-300), -1.0, 1.0)
        turning = np.arccos(cosang)
        flagged = sorted(int(i + 1) % m for i in np.nonzero(turning > corner_angle)[0])
        # a single geometric corner can split its turn across two adjacent
        # triples; cluster flagged indices closer than 3 samples (cyclically)
        corner_idx = []
        for i in flagged:
            if corner_idx and i - corner_idx[-1] <= 2:
                continue
            corner_idx.append(i)
        if len(corner_idx) > 1 and (corner_idx[0] + m) - corner_idx[-1] <= 2:
            corner_idx.pop()
        # merge aligned triples into maximal runs (cyclically)
        runs = 0
        if np.all(aligned):
            runs = 1
        else:
            prev = False
            start = int(np.argmin(aligned))  # begin scan at a non-aligned slot
            for k in range(m):
                cur = bool(aligned[(start + k) % m])
                if cur and not prev:
                    runs += 1
                prev = cur
        return RegularityReport(
            n_samples=m,
            segment_count=runs,
            corner_count=len(corner_idx),
            corner_points=pts[corner_idx] if corner_idx else np.zeros((0, 2)),
            resolution=resolution,
        )

    # convenience
    def interior_point(self) -> ProjPoint:
        c = self.reference_interior_xy()
        return self.chart.point_from_xy(c[0], c[1])


@dataclass(frozen=True)
class RegularityReport:
    n_samples: int
    segment_count: int
    corner_count: int
    corner_points: np.ndarray
    resolution: float


class PolygonDomain(ConvexDomain):
    """Open convex polygon. Vertices are stored CCW in the chart."""

    def __init__(self, vertices, chart: AffineChart | None = None,
                 tol: float = DEFAULT_TOL, allow_redundant: bool = False):
        rows = np.array([v.v if isinstance(v, ProjPoint) else normalize_triple(v)
                         for v in vertices], dtype=float)
        if len(rows) < 3:
            raise DegenerateInput("polygon needs at least three vertices")
        if chart is None:
            reps, w = _sign_fix_cone_reps(rows)
            chart = _chart_from_cone_axis(w)
            xy = chart.to_xy(reps)
        else:
            xy = chart.to_xy(rows)
        hull = _convex_hull_ccw(xy)
        if len(hull) < 3:
            raise DegenerateInput("polygon vertices are collinear")
        if len(hull) != len(xy) and not allow_redundant:
            raise DegenerateInput("polygon vertices not in strictly convex position")
        xy = xy[hull]
        if _polygon_area(xy) < 0:
            xy = xy[::-1]
        self.chart = chart
        self.vertices_xy = xy
        self.vertices = [ProjPoint(h) for h in chart.to_points(xy)]
        nxt = np.roll(xy, -1, axis=0)
        edge = nxt - xy
        normals = np.stack([-edge[:, 1], edge[:, 0]], axis=1)
        normals /= np.linalg.norm(normals, axis=1, keepdims=True)
        # functional rows: f_i(u,v) = n_i . (u,v) + c_i, positive inside
        self._fun = np.column_stack([normals, -np.einsum("ij,ij->i", normals, xy)])

    # -- hooks --

    def margin_xy(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts)
        vals = pts @ self._fun[:, :2].T + self._fun[:, 2]
        return vals.min(axis=1)

    def _chord_params(self, x: np.ndarray, d: np.ndarray, tol: float):
        f = self._fun[:, :2] @ x + self._fun[:, 2]
        s = self._fun[:, :2] @ d
        with np.errstate(divide="ignore", invalid="ignore"):
            t = -f / s
        t_plus = np.min(t[s < 0]) if np.any(s < 0) else math.inf
        t_minus = np.max(t[s > 0]) if np.any(s > 0) else -math.inf
        return float(t_minus), float(t_plus)

    def reference_interior_xy(self) -> np.ndarray:
        return self.vertices_xy.mean(axis=0)

    def ball_areas_xy(self, pts_xy: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts_xy)
        if len(self.vertices_xy) == 3:
            return _triangle_ball_areas(self, pts)
        if len(pts) <= 512:
            return np.array([_polar_ball_area(self._fun, p) for p in pts])
        return _radial_ball_areas(self._fun, pts)

    def to_dict(self) -> dict:
        return {
            "type": "polygon",
            "vertices": [list(map(float, v.v)) for v in self.vertices],
            "chart": [float(x) for x in self.chart.basis.flatten()],
        }


def _triangle_ball_areas(dom: PolygonDomain, pts: np.ndarray) -> np.ndarray:
    """Closed form for triangles: density = pi |det M| / (3 b1 b2 b3) with
    b = M (u,v,1) the barycentric functionals; obtained by projective transfer
    of the quadrant formula Leb(ball) = 3xy."""
    V = np.vstack([dom.vertices_xy.T, np.ones(3)])  # columns (x_i, y_i, 1)
    M = np.linalg.inv(V)
    det = abs(np.linalg.det(M))
    h = np.column_stack([pts, np.ones(len(pts))])
    b = h @ M.T
    return 3.0 * np.prod(b, axis=1) / det


def _polar_ball_area(fun: np.ndarray, p: np.ndarray) -> float:
    """Exact ball area at p: polar of the difference body of constraint
    gradient points a_i = g_i / f_i(p) together with the origin."""
    f = fun[:, :2] @ p + fun[:, 2]
    if np.any(f <= 0):
        return np.nan
    a = fun[:, :2] / f[:, None]
    a = np.vstack([a, [[0.0, 0.0]]])
    hull = _convex_hull_ccw(a, tol=1e-15)
    av = a[hull]
    # difference body A - A: Minkowski sum of hulls, vertices are a_i - a_j
    n = len(av)
    diffs = (av[:, None, :] - av[None, :, :]).reshape(-1, 2)
    dh = _convex_hull_ccw(diffs, tol=1e-15)
    w = diffs[dh]
    nxt = np.roll(w, -1, axis=0)
    det = w[:, 0] * nxt[:, 1] - w[:, 1] * nxt[:, 0]
    # polar vertex on each edge (w_k, w_{k+1}): solve w.v = 1 for both
    vx = (nxt[:, 1] - w[:, 1]) / det
    vy = (w[:, 0] - nxt[:, 0]) / det
    poly = np.stack([vx, vy], axis=1)
    return abs(_polygon_area(poly))


def _radial_ball_areas(fun: np.ndarray, pts: np.ndarray, n_theta: int = 0) -> np.ndarray:
    """Trapezoid rule for area = int_0^pi r(theta)^2 dtheta, vectorized over
    points. Exact radii per direction; O(n_theta^-2) from kinks of r.

    The angle count keeps m * n_theta roughly constant so many-row domains stay
    affordable; the inner tensor runs in float32 (kink error dominates at 1e-3,
    far above float32 noise)."""
    m = fun.shape[0]
    if n_theta <= 0:
        n_theta = int(np.clip(2 ** round(math.log2(3e4 / m)), 256, 512))
    th = np.pi * np.arange(n_theta) / n_theta
    u = np.stack([np.cos(th), np.sin(th)], axis=1)
    s = (fun[:, :2] @ u.T).astype(np.float32)  # (m, n_theta)
    out = np.empty(len(pts))
    chunk = max(1, int(1.6e7 // (m * n_theta)))
    for i0 in range(0, len(pts), chunk):
        p = pts[i0:i0 + chunk]
        f = (p @ fun[:, :2].T + fun[:, 2]).astype(np.float32)  # (P, m)
        with np.errstate(divide="ignore"):
            g = s[None, :, :] / f[:, :, None]  # (P, m, n_theta)
        inv_r = (np.maximum(g, 0.0).max(axis=1)
                 + np.maximum(-g, 0.0).max(axis=1)).astype(np.float64)
        out[i0:i0 + chunk] = (np.pi / n_theta) * np.sum(1.0 / inv_r ** 2, axis=1)
    return out


class ConicDomain(ConvexDomain):
    """Interior of a signature-(2,1) conic: {v : v^T Q v < 0}."""

    def __init__(self, conic, chart: AffineChart | None = None, tol: float = DEFAULT_TOL):
        self.conic = conic if isinstance(conic, Conic) else Conic(conic, tol)
        if chart is None:
            w, vecs = np.linalg.eigh(self.conic.q)
            center = vecs[:, 0]  # eigenvector of the unique negative eigenvalue
            polar = self.conic.q @ center
            k = int(np.argmin(np.abs(polar)))
            e = np.zeros(3)
            e[k] = 1.0
            b1 = np.cross(polar, e)
            b1 /= np.linalg.norm(b1)
            b2 = np.cross(polar, b1)
            b2 /= np.linalg.norm(b2)
            chart = AffineChart(np.column_stack([b1, b2, center / np.linalg.norm(center)]))
        self.chart = chart
        # chart-pulled-back quadratic form on (u, v, 1)
        self._qc = chart.basis.T @ self.conic.q @ chart.basis
        if self._qc[2, 2] >= 0:
            raise DegenerateConic("chart origin is not interior to the conic")
        # directions at infinity must be spacelike, else the chart cuts the closure
        evals2 = np.linalg.eigvalsh(self._qc[:2, :2])
        if evals2[0] <= tol:
            raise DegenerateConic("chart does not contain the closure of the conic domain")

    def margin_xy(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts)
        h = np.column_stack([pts, np.ones(len(pts))])
        val = np.einsum("ni,ij,nj->n", h, self._qc, h)
        grad = 2.0 * (h @ self._qc)[:, :2]
        g = np.linalg.norm(grad, axis=1)
        return -val / np.maximum(g, 1e-30)

    def _chord_params(self, x: np.ndarray, d: np.ndarray, tol: float):
        h = np.array([x[0], x[1], 1.0])
        dd = np.array([d[0], d[1], 0.0])
        A = float(dd @ self._qc @ dd)
        B = float(h @ self._qc @ dd)
        C = float(h @ self._qc @ h)
        if A <= 0:
            raise DegenerateConic("chord direction not spacelike; bad chart")
        disc = B * B - A * C
        if disc < 0:
            raise NotInterior("chord base point outside the conic")
        r = math.sqrt(disc)
        return (-B - r) / A, (-B + r) / A

    def reference_interior_xy(self) -> np.ndarray:
        return np.zeros(2)

    def ball_areas_xy(self, pts_xy: np.ndarray) -> np.ndarray:
        """The unit ball of a conic domain is an exact ellipse; its area has
        the closed form pi (-h Q h)^{3/2} / (4 sqrt|det Q|) in chart coords."""
        pts = np.atleast_2d(pts_xy)
        h = np.column_stack([pts, np.ones(len(pts))])
        val = np.einsum("ni,ij,nj->n", h, self._qc, h)
        det = abs(np.linalg.det(self._qc))
        dens = 4.0 * math.sqrt(det) * np.power(np.maximum(-val, 0.0), -1.5)
        return np.pi / dens

    def boundary_points(self, n: int, tol: float = DEFAULT_TOL) -> np.ndarray:
        c = self.reference_interior_xy()
        th = 2.0 * np.pi * np.arange(n) / n
        out = np.empty((n, 2))
        for k in range(n):
            u = np.array([np.cos(th[k]), np.sin(th[k])])
            _, t_plus = self._chord_params(c, u, tol)
            out[k] = c + t_plus * u
        return out

    def to_dict(self) -> dict:
        return {
            "type": "conic",
            "matrix": [float(x) for x in self.conic.q.flatten()],
            "chart": [float(x) for x in self.chart.basis.flatten()],
        }


class HalfplaneDomain(ConvexDomain):
    """Intersection of up to 4096 open halfplanes, given in chart coordinates.

    May be unbounded in its chart (the closure then touches the chart's line
    at infinity); properness is checked via the recession cone.
    """

    def __init__(self, lines, interior_xy, chart: AffineChart | None = None,
                 tol: float = DEFAULT_TOL):
        L = np.atleast_2d(np.asarray(lines, dtype=float))
        if L.shape[0] > HALFPLANE_CAP:
            raise DegenerateInput("halfplane list exceeds cap %d" % HALFPLANE_CAP)
        if L.shape[1] != 3:
            raise DegenerateInput("halfplane rows must be (a, b, c) functionals")
        self.chart = chart if chart is not None else AffineChart()
        x0 = np.asarray(interior_xy, dtype=float)
        norms = np.linalg.norm(L[:, :2], axis=1)
        if np.any(norms < 1e-14):
            raise DegenerateInput("halfplane functional with zero gradient")
        L = L / norms[:, None]
        vals = L[:, :2] @ x0 + L[:, 2]
        if np.any(np.abs(vals) <= tol):
            raise NotInterior("interior point sits on a support line")
        L[vals < 0] *= -1.0
        self._fun = L
        self._x0 = x0
        self._check_proper(tol)

    def _check_proper(self, tol: float):
        # recession cone = {d : g_i . d >= 0}; a full line inside means the
        # domain is improper. Checked by sampling antipodal direction pairs.
        th = np.linspace(0, np.pi, 361)
        d = np.stack([np.cos(th), np.sin(th)], axis=1)
        s = self._fun[:, :2] @ d.T
        both = np.all(s >= -1e-12, axis=0) & np.all(-s >= -1e-12, axis=0)
        if np.any(both):
            raise NotProper("recession cone contains a line")

    def margin_xy(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts)
        return (pts @ self._fun[:, :2].T + self._fun[:, 2]).min(axis=1)

    def _membership_at_infinity(self, p: ProjPoint, tol: float) -> Membership:
        c = self.chart.inv @ p.v
        d = c[:2]
        n = np.linalg.norm(d)
        if n < 1e-14:
            return Membership.EXTERIOR
        d = d / n
        s = self._fun[:, :2] @ d
        if np.all(s >= -tol) or np.all(-s >= -tol):
            return Membership.BOUNDARY  # recession direction: closure touches infinity
        return Membership.EXTERIOR

    def _chord_params(self, x: np.ndarray, d: np.ndarray, tol: float):
        """Bracketed bisection on the membership oracle, residual 1e-12."""
        t_plus = self._bisect_exit(x, d)
        t_minus = self._bisect_exit(x, -d)
        return (-t_minus if math.isfinite(t_minus) else -math.inf), t_plus

    def _bisect_exit(self, x: np.ndarray, d: np.ndarray) -> float:
        scale = max(1.0, float(np.linalg.norm(x)))
        t_hi = scale
        inside = lambda t: float(self.margin_xy((x + t * d)[None, :])[0]) > 0.0
        grow = 0
        while inside(t_hi):
            t_hi *= 2.0
            grow += 1
            if t_hi > _RAY_CAP * scale:
                return math.inf
        t_lo = 0.0 if grow == 0 else t_hi / 2.0
        for _ in range(BISECTION_MAX_STEPS):
            if t_hi - t_lo <= BISECTION_RESIDUAL * max(1.0, t_hi):
                break
            mid = 0.5 * (t_lo + t_hi)
            if inside(mid):
                t_lo = mid
            else:
                t_hi = mid
        return 0.5 * (t_lo + t_hi)

    def reference_interior_xy(self) -> np.ndarray:
        return self._x0.copy()

    def ball_areas_xy(self, pts_xy: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts_xy)
        if len(pts) <= 64 and len(self._fun) <= 512:
            return np.array([_polar_ball_area(self._fun, p) for p in pts])
        return _radial_ball_areas(self._fun, pts)

    def support_lines(self) -> np.ndarray:
        return self._fun.copy()

    def to_dict(self) -> dict:
        return {
            "type": "halfplanes",
            "lines": [[float(a) for a in row] for row in self._fun],
            "interior_point": [float(self._x0[0]), float(self._x0[1])],
            "chart": [float(x) for x in self.chart.basis.flatten()],
        }


# ---------------------------------------------------------------------------
# factories and duality


def unit_disk() -> ConicDomain:
    return ConicDomain(np.diag([1.0, 1.0, -1.0]), chart=AffineChart())


def simplex_domain() -> PolygonDomain:
    """The triangle {x_i > 0} in the chart with line at infinity x+y+z = 0."""
    chart = AffineChart(np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [-1.0, -1.0, 1.0]]))
    return PolygonDomain([ProjPoint((1, 0, 0)), ProjPoint((0, 1, 0)), ProjPoint((0, 0, 1))],
                         chart=chart)


def domain_from_dict(d: dict) -> ConvexDomain:
    kind = d.get("type")
    known = {
        "polygon": {"type", "vertices", "chart"},
        "conic": {"type", "matrix", "chart"},
        "halfplanes": {"type", "lines", "interior_point", "chart"},
    }
    if kind not in known:
        raise DegenerateInput("unknown domain type %r" % kind)
    extra = set(d) - known[kind]
    if extra:
        raise DegenerateInput("unknown domain fields: %s" % sorted(extra))
    chart = None
    if "chart" in d and d["chart"] is not None:
        chart = AffineChart(np.asarray(d["chart"], dtype=float).reshape(3, 3))
    if kind == "polygon":
        return PolygonDomain([np.asarray(v, float) for v in d["vertices"]], chart=chart)
    if kind == "conic":
        return ConicDomain(np.asarray(d["matrix"], dtype=float).reshape(3, 3), chart=chart)
    return HalfplaneDomain(np.asarray(d["lines"], dtype=float),
                           np.asarray(d["interior_point"], dtype=float),
                           chart=chart)


def dual_domain(domain: ConvexDomain, tol: float = DEFAULT_TOL) -> ConvexDomain:
    """Dual domain: lines of P^2 missing the closure, as a domain of the dual plane.

    Conic -> conic of the inverse matrix; polygon -> polygon whose vertices are
    the edge lines; halfplane intersection -> polygon of its support lines.
    """
    if isinstance(domain, ConicDomain):
        return ConicDomain(np.linalg.inv(domain.conic.q))
    if isinstance(domain, PolygonDomain):
        hom = np.array([v.v for v in domain.vertices])
        c = domain.reference_interior_xy()
        ih = domain.chart.basis @ np.array([c[0], c[1], 1.0])
        edges = []
        for i in range(len(hom)):
            e = np.cross(hom[i], hom[(i + 1) % len(hom)])
            edges.append(e if e @ ih > 0 else -e)
        # all edge lines are positive on the interior lift, so it serves as
        # the chart axis of the dual patch; sign guessing would otherwise
        # pick a wrong cone for vertex sets close to a plane
        return PolygonDomain(edges, chart=_chart_from_cone_axis(ih),
                             allow_redundant=True)
    if isinstance(domain, HalfplaneDomain):
        rows = domain.support_lines()
        # functional (a,b,c) on chart coords corresponds to the homogeneous line
        # (a,b,c) composed with chart^-1
        hom = rows @ domain.chart.inv
        c = domain.reference_interior_xy()
        ih = domain.chart.basis @ np.array([c[0], c[1], 1.0])
        return PolygonDomain(list(hom), chart=_chart_from_cone_axis(ih),
                             allow_redundant=True)
    raise DegenerateInput("unsupported domain type for duality")


def boundary_deviation(dom_a: ConvexDomain, dom_b: ConvexDomain,
                       n_dirs: int = 256, tol: float = DEFAULT_TOL) -> float:
    """Max radial gap between the two boundaries, measured in dom_a's chart
    from dom_a's reference point. Bounds the Hausdorff distance from above.

    The exit times of dom_b are bisected for all directions at once; the
    membership interval along each ray is connected by convexity, so the
    vectorized bisection brackets the single crossing."""
    c = dom_a.reference_interior_xy()
    cp = dom_a.chart.point_from_xy(c[0], c[1])
    if dom_b.contains(cp, tol) is not Membership.INTERIOR:
        raise NotInterior("reference point is not interior to both domains")
    th = 2.0 * np.pi * np.arange(n_dirs) / n_dirs
    dirs = np.stack([np.cos(th), np.sin(th)], axis=1)
    ta = np.empty(n_dirs)
    for k in range(n_dirs):
        _, ta[k] = dom_a._chord_params(c, dirs[k], tol)
    conv = dom_b.chart.inv @ dom_a.chart.basis   # a-chart homog -> b-chart homog

    def inside(t: np.ndarray) -> np.ndarray:
        xy = c[None, :] + t[:, None] * dirs
        h = np.column_stack([xy, np.ones(len(t))]) @ conv.T
        z = h[:, 2]
        out = np.zeros(len(t), dtype=bool)
        ok = np.abs(z) > 1e-30
        if np.any(ok):
            out[ok] = dom_b.margin_xy(h[ok, :2] / z[ok, None]) > 0.0
        return out

    t_lo = np.zeros(n_dirs)
    t_hi = np.ones(n_dirs)
    while True:
        grow = inside(t_hi)
        if not grow.any():
            break
        t_lo[grow] = t_hi[grow]
        t_hi[grow] *= 2.0
        if float(np.max(t_hi)) > 1e12:
            raise NonConvergent("ray never exits the comparison domain")
    for _ in range(100):
        mid = 0.5 * (t_lo + t_hi)
        ins = inside(mid)
        t_lo[ins] = mid[ins]
        t_hi[~ins] = mid[~ins]
    tb = 0.5 * (t_lo + t_hi)
    return float(np.max(np.abs(ta - tb)))
