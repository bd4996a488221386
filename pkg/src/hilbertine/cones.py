"""Proper convex cones in R^3: duals, the characteristic function and its
gradient, the Sigma surface, psi forms, the dual map, and Dirichlet domains.

The characteristic function of a cone C at an interior M is the integral of
exp(-f(M)) over the dual cone C*. For a simplicial dual piece with generator
rows h_i it is |det H| / prod(h_i . M), and polyhedral cones sum the pieces
of a fan triangulation of the dual. The quadratic (Lorentz) cone is reduced
to the standard round cone x^2+y^2 < z^2; there the dual section integral
has the exact radial form
    int_0^1 2 r / (c + r d)^3 dr = 1 / (c (c+d)^2),
leaving a single smooth periodic angular integral, evaluated by the
trapezoid rule (spectrally accurate for analytic integrands).

Sign bookkeeping: the displayed integral G(M) = int f exp(-f(M)) df equals
minus the derivative of the characteristic function. psi forms are
normalized so psi_X(X) = 1 exactly, which absorbs the sign (by homogeneity
dphi_X(X) = -3 phi(X), so the raw differential takes the value -3 at X)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domains import (ConicDomain, ConvexDomain, HalfplaneDomain, Membership,
                      PolygonDomain, _convex_hull_ccw, _sign_fix_cone_reps)
from .errors import (DegenerateInput, FixedBasePoint, NotInterior, NotOnSigma,
                     NotProper, StabilizedBasePoint)
from .projective import Conic, ProjLine, ProjPoint

LORENTZ_QUAD_NODES = 1024


@dataclass(frozen=True)
class SimplicialCone:
    """Cone spanned by three linearly independent generator rows."""

    generators: np.ndarray

    def __init__(self, generators, tol: float = 1e-12):
        g = np.asarray(generators, dtype=float).reshape(3, 3)
        scale = float(np.max(np.abs(g)))
        if scale == 0 or abs(np.linalg.det(g)) <= tol * scale ** 3:
            raise NotProper("simplicial cone generators are dependent")
        g = g.copy()
        g.setflags(write=False)
        object.__setattr__(self, "generators", g)


@dataclass(frozen=True)
class PolyhedralCone:
    """Finitely generated proper cone; generators stored as the cyclically
    ordered extreme rays, facet normals oriented positive on the cone."""

    generators: np.ndarray
    facets: np.ndarray

    def __init__(self, generators):
        rows = np.asarray(generators, dtype=float)
        if rows.ndim != 2 or rows.shape[1] != 3 or len(rows) < 3:
            raise NotProper("need at least three generators")
        reps, axis = _sign_fix_cone_reps(rows)
        den = reps @ axis
        sect = reps / den[:, None]
        # planar coordinates on the cross-section {axis . v = 1}
        k = int(np.argmin(np.abs(axis)))
        u1 = np.cross(axis, np.eye(3)[k])
        u1 /= np.linalg.norm(u1)
        u2 = np.cross(axis, u1)
        u2 /= np.linalg.norm(u2)
        xy = np.column_stack([sect @ u1, sect @ u2])
        hull = _convex_hull_ccw(xy)
        if len(hull) < 3:
            raise NotProper("cone generators span a flat cone")
        gens = reps[hull]
        nxt = np.roll(gens, -1, axis=0)
        facets = np.cross(gens, nxt)
        flip = facets @ axis < 0
        facets[flip] = -facets[flip]
        gens = gens.copy()
        gens.setflags(write=False)
        facets.setflags(write=False)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "facets", facets)


@dataclass(frozen=True)
class LorentzCone:
    """Component of {v : q(v) < 0} containing e, for q of signature (2,1)."""

    q: np.ndarray
    e: np.ndarray

    def __init__(self, q, e):
        q = np.asarray(q, dtype=float)
        q = 0.5 * (q + q.T)
        w = np.linalg.eigvalsh(q)
        if np.sum(w > 0) == 1 and np.sum(w < 0) == 2:
            q = -q
            w = -w[::-1]
        if not (np.sum(w > 0) == 2 and np.sum(w < 0) == 1):
            raise NotProper("quadratic form must have signature (2,1)")
        q = q / np.linalg.norm(q)
        e = np.asarray(e, dtype=float)
        if e @ q @ e >= 0:
            raise NotProper("orientation vector is not inside the light cone")
        e = e / np.linalg.norm(e)
        q.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "e", e)


def _lorentz_std_map(c: LorentzCone) -> np.ndarray:
    """Matrix A with A^T q A = diag(1,1,-1) and the forward direction mapped
    to the component of e; the cone is A times the standard round cone."""
    w, u = np.linalg.eigh(c.q)
    a = np.column_stack([u[:, 1] / math.sqrt(w[1]),
                         u[:, 2] / math.sqrt(w[2]),
                         u[:, 0] / math.sqrt(-w[0])])
    if (a[:, 2] @ c.q @ c.e) > 0:
        a = a.copy()
        a[:, 2] = -a[:, 2]
    return a


def cone_interior_margin(c, v: np.ndarray) -> float:
    """Positive inside the open cone, negative outside; scale-normalized."""
    v = np.asarray(v, dtype=float)
    nv = float(np.linalg.norm(v))
    if nv == 0:
        return -1.0
    if isinstance(c, SimplicialCone):
        u = np.linalg.solve(c.generators.T, v)
        return float(np.min(u)) / float(np.max(np.abs(u)))
    if isinstance(c, PolyhedralCone):
        vals = c.facets @ v
        norms = np.linalg.norm(c.facets, axis=1)
        return float(np.min(vals / (norms * nv)))
    if isinstance(c, LorentzCone):
        qv = float(v @ c.q @ v) / nv ** 2
        fwd = -float(v @ c.q @ c.e) / nv
        return min(-qv, fwd)
    raise DegenerateInput("unknown cone type")


def cone_contains(c, v, tol: float = 1e-12) -> bool:
    return cone_interior_margin(c, v) > tol


def dual_cone(c):
    """The cone of linear forms positive on the closure minus the origin."""
    if isinstance(c, SimplicialCone):
        return SimplicialCone(np.linalg.inv(c.generators).T)
    if isinstance(c, PolyhedralCone):
        return PolyhedralCone(c.facets)
    if isinstance(c, LorentzCone):
        return LorentzCone(np.linalg.inv(c.q), -c.q @ c.e)
    raise DegenerateInput("unknown cone type")


def _simplicial_phi_grad(dual_gens: np.ndarray, m: np.ndarray):
    u = dual_gens @ m
    if np.any(u <= 0):
        raise NotInterior("point is outside the cone (phi diverges)")
    phi = abs(np.linalg.det(dual_gens)) / float(np.prod(u))
    grad = phi * (dual_gens / u[:, None]).sum(axis=0)
    return phi, grad


def _poly_phi_grad(c: PolyhedralCone, m: np.ndarray):
    f = c.facets
    u = f @ m
    if np.any(u <= 0):
        raise NotInterior("point is outside the cone (phi diverges)")
    phi = 0.0
    grad = np.zeros(3)
    # fan triangulation of the dual cone from the first facet normal
    for j in range(1, len(f) - 1):
        h = f[[0, j, j + 1]]
        det = abs(np.linalg.det(h))
        if det == 0.0:
            continue
        uu = u[[0, j, j + 1]]
        p = det / float(np.prod(uu))
        phi += p
        grad += p * (h / uu[:, None]).sum(axis=0)
    return phi, grad


def _lorentz_phi_grad(c: LorentzCone, m: np.ndarray):
    a = _lorentz_std_map(c)
    mp = np.linalg.solve(a, m)
    if mp[2] <= 0 or mp[0] ** 2 + mp[1] ** 2 >= mp[2] ** 2:
        raise NotInterior("point is outside the cone (phi diverges)")
    n = LORENTZ_QUAD_NODES
    th = 2.0 * math.pi * np.arange(n) / n
    cs, sn = np.cos(th), np.sin(th)
    cc = mp[2]
    d = mp[0] * cs + mp[1] * sn
    w = 2.0 * math.pi / n
    phi_std = w * float(np.sum(1.0 / (cc * (cc + d) ** 2)))
    j2 = 2.0 / (cc * (cc + d) ** 3)
    j1 = j2 + 1.0 / (cc * cc * (cc + d) ** 2)
    g_std = w * np.array([float(np.sum(cs * j2)),
                          float(np.sum(sn * j2)),
                          float(np.sum(j1))])
    det_a = abs(np.linalg.det(a))
    return phi_std / det_a, np.linalg.solve(a.T, g_std) / det_a


def _phi_grad(c, m: np.ndarray):
    m = np.asarray(m, dtype=float)
    if isinstance(c, SimplicialCone):
        return _simplicial_phi_grad(np.linalg.inv(c.generators).T, m)
    if isinstance(c, PolyhedralCone):
        return _poly_phi_grad(c, m)
    if isinstance(c, LorentzCone):
        return _lorentz_phi_grad(c, m)
    raise DegenerateInput("unknown cone type")


def characteristic_function(c, m) -> float:
    """Integral of exp(-f(m)) over the dual cone; degree -3 homogeneous."""
    return _phi_grad(c, m)[0]


def char_gradient(c, m) -> np.ndarray:
    """The displayed integral of f exp(-f(m)) over the dual cone.

    Equals minus the derivative of characteristic_function; lies in the open
    dual cone."""
    return _phi_grad(c, m)[1]


def sigma_lift(c, x) -> np.ndarray:
    """Lift of a projective point to the surface Sigma = {phi = 1}."""
    v = x.v if isinstance(x, ProjPoint) else np.asarray(x, dtype=float)
    if not cone_contains(c, v):
        if cone_contains(c, -v):
            v = -v
        else:
            raise NotInterior("point does not lie in the projected cone")
    phi = characteristic_function(c, v)
    return phi ** (1.0 / 3.0) * v


@dataclass(frozen=True)
class PsiForm:
    base_point: np.ndarray
    psi: np.ndarray

    def __call__(self, v: np.ndarray) -> float:
        return float(self.psi @ np.asarray(v, dtype=float))


def psi_form(c, x_vec, tol: float = 1e-6) -> PsiForm:
    """Tangent form of Sigma at X, normalized so psi_X(X) = 1.

    psi_X is positive on the whole cone (it is a rescaled element of the
    dual cone)."""
    x_vec = np.asarray(x_vec, dtype=float)
    phi, grad = _phi_grad(c, x_vec)
    if abs(phi - 1.0) > max(tol, 1e-9) * 10:
        raise NotOnSigma("phi(X) = %.9g, not on the unit level set" % phi)
    psi = grad / float(grad @ x_vec)
    return PsiForm(base_point=x_vec, psi=psi)


def cone_from_domain(domain: ConvexDomain):
    """Cone of chart lifts over the domain."""
    if isinstance(domain, PolygonDomain):
        reps = np.array([domain.chart.basis @ np.array([x, y, 1.0])
                         for x, y in domain.vertices_xy])
        if len(reps) == 3:
            return SimplicialCone(reps)
        return PolyhedralCone(reps)
    if isinstance(domain, ConicDomain):
        ref = domain.reference_interior_xy()
        e = domain.chart.basis @ np.array([ref[0], ref[1], 1.0])
        return LorentzCone(domain.conic.q, e)
    if isinstance(domain, HalfplaneDomain):
        # chart functionals become homogeneous covectors through the chart
        rows = domain.support_lines() @ domain.chart.inv
        return dual_cone(PolyhedralCone(rows))
    raise DegenerateInput("unknown domain type")


def domain_from_cone(c) -> ConvexDomain:
    if isinstance(c, (SimplicialCone, PolyhedralCone)):
        return PolygonDomain([ProjPoint(g) for g in np.asarray(c.generators)])
    if isinstance(c, LorentzCone):
        return ConicDomain(Conic(c.q))
    raise DegenerateInput("unknown cone type")


def _lift(domain: ConvexDomain, x: ProjPoint) -> np.ndarray:
    xy = domain.chart.point_to_xy(x)
    return domain.chart.basis @ np.array([xy[0], xy[1], 1.0])


def dual_map_theta(domain: ConvexDomain, x: ProjPoint) -> ProjPoint:
    """Barycenter map into the dual domain: x -> G(v)/phi(v) for a cone lift
    v of x. Equivariant: theta(g x) = g^{-T} theta(x)."""
    if domain.contains(x) is not Membership.INTERIOR:
        raise NotInterior("dual map is defined on interior points")
    c = cone_from_domain(domain)
    v = _lift(domain, x)
    phi, grad = _phi_grad(c, v)
    return ProjPoint(grad / phi)


def bisector(c, x0_vec: np.ndarray, g) -> ProjLine:
    """Projective line where psi_{X0} and psi_{X0} composed with g agree."""
    x0_vec = np.asarray(x0_vec, dtype=float)
    gx = g.m @ x0_vec
    if np.linalg.norm(np.cross(gx, x0_vec)) <= 1e-12 * np.linalg.norm(gx) * np.linalg.norm(x0_vec):
        raise FixedBasePoint("element fixes the base point")
    psi0 = psi_form(c, x0_vec).psi
    w = psi0 - g.m.T @ psi0
    return ProjLine(w)


@dataclass(frozen=True)
class DirichletDomain:
    """Intersection of the bisector halfplanes {psi0(X) <= psi0(gX)} with the
    projected domain. Records which elements were used, so coverage claims
    are scoped to that truncation."""

    base_point: np.ndarray
    elements: tuple
    functionals: np.ndarray       # rows w_g with w_g . v >= 0 inside
    domain: ConvexDomain
    psi0: np.ndarray

    def bisector_lines(self) -> list:
        return [ProjLine(w) for w in self.functionals]

    def _lift_xy(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        h = np.column_stack([pts, np.ones(len(pts))])
        v = h @ self.domain.chart.basis.T
        s = np.sign(v @ self.psi0)
        s[s == 0] = 1.0
        return v * s[:, None]

    def functional_values_xy(self, pts: np.ndarray) -> np.ndarray:
        """(n, k) values of the bisector functionals at chart points."""
        v = self._lift_xy(pts)
        if len(self.functionals) == 0:
            return np.zeros((len(v), 0))
        return v @ self.functionals.T

    def contains_xy(self, pts: np.ndarray, tol: float = 0.0) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        inside = self.domain.margin_xy(pts) > 0
        vals = self.functional_values_xy(pts)
        if vals.shape[1]:
            inside &= np.all(vals >= -tol, axis=1)
        return inside

    def to_dict(self) -> dict:
        return {
            "base_point": [float(t) for t in self.base_point],
            "functionals": [[float(t) for t in w] for w in self.functionals],
            "domain": self.domain.to_dict(),
        }


def dirichlet_lee_domain(c, elements, x0, domain: ConvexDomain | None = None) -> DirichletDomain:
    """Dirichlet domain on Sigma around x0 for the listed nontrivial elements.

    Each element contributes the halfplane psi0(X) <= psi0(gX); the
    conditions are linear and scale-invariant, so they cut out a projective
    polygon inside the domain."""
    x0_vec = sigma_lift(c, x0)
    psi0 = psi_form(c, x0_vec).psi
    rows = []
    for g in elements:
        gx = g.m @ x0_vec
        cr = np.linalg.norm(np.cross(gx, x0_vec))
        if cr <= 1e-12 * np.linalg.norm(gx) * np.linalg.norm(x0_vec):
            raise StabilizedBasePoint("a listed element stabilizes the base point")
        w = g.m.T @ psi0 - psi0
        rows.append(w / np.linalg.norm(w))
    rows = np.asarray(rows) if rows else np.zeros((0, 3))
    if domain is None:
        domain = domain_from_cone(c)
    return DirichletDomain(base_point=x0_vec, elements=tuple(elements),
                           functionals=rows, domain=domain, psi0=psi0)


def cone_to_dict(c) -> dict:
    if isinstance(c, SimplicialCone):
        return {"type": "simplicial",
                "generators": [[float(t) for t in g] for g in c.generators]}
    if isinstance(c, PolyhedralCone):
        return {"type": "polyhedral",
                "generators": [[float(t) for t in g] for g in c.generators]}
    if isinstance(c, LorentzCone):
        return {"type": "lorentz",
                "q": [[float(t) for t in row] for row in c.q],
                "e": [float(t) for t in c.e]}
    raise DegenerateInput("unknown cone type")


def cone_from_dict(d: dict):
    kind = d.get("type")
    if kind == "simplicial":
        return SimplicialCone(np.asarray(d["generators"], dtype=float))
    if kind == "polyhedral":
        return PolyhedralCone(np.asarray(d["generators"], dtype=float))
    if kind == "lorentz":
        return LorentzCone(np.asarray(d["q"], dtype=float),
                           np.asarray(d["e"], dtype=float))
    raise DegenerateInput("unknown cone type %r" % kind)
