"""Primitives of the real projective plane: points, lines, charts, conics.

Homogeneous coordinates are numpy arrays of shape (3,). Incidence and equality
tests take explicit tolerances; the default is DEFAULT_TOL. Points and lines
normalize to unit Euclidean norm with the largest-magnitude entry positive
(ties broken by first index), so equality up to scale is a plain comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CoincidentEndpoints,
    CoincidentLines,
    CoincidentPoints,
    DegenerateConic,
    DegenerateInput,
    NonCollinear,
)

DEFAULT_TOL = 1e-9


def normalize_triple(v) -> np.ndarray:
    """Unit-norm representative with the largest-magnitude entry positive."""
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise DegenerateInput("expected a homogeneous triple")
    n = np.linalg.norm(v)
    if n == 0.0 or not np.isfinite(n):
        raise DegenerateInput("zero or non-finite homogeneous triple")
    v = v / n
    k = int(np.argmax(np.abs(v)))
    if v[k] < 0:
        v = -v
    return v


@dataclass(frozen=True)
class ProjPoint:
    """Point of P^2, stored as a normalized homogeneous triple."""

    v: np.ndarray

    def __init__(self, v):
        object.__setattr__(self, "v", normalize_triple(v))

    @staticmethod
    def from_xy(x: float, y: float) -> "ProjPoint":
        return ProjPoint((x, y, 1.0))

    def same_as(self, other: "ProjPoint", tol: float = DEFAULT_TOL) -> bool:
        return float(np.linalg.norm(np.cross(self.v, other.v))) <= tol

    def __repr__(self):  # short, for test output
        return "ProjPoint[%.6g:%.6g:%.6g]" % tuple(self.v)


@dataclass(frozen=True)
class ProjLine:
    """Line of P^2, stored as a normalized coefficient triple."""

    l: np.ndarray

    def __init__(self, l):
        object.__setattr__(self, "l", normalize_triple(l))

    def same_as(self, other: "ProjLine", tol: float = DEFAULT_TOL) -> bool:
        return float(np.linalg.norm(np.cross(self.l, other.l))) <= tol

    def contains(self, p: ProjPoint, tol: float = DEFAULT_TOL) -> bool:
        return incident(p, self, tol)

    def __repr__(self):
        return "ProjLine[%.6g:%.6g:%.6g]" % tuple(self.l)


def incident(p: ProjPoint, l: ProjLine, tol: float = DEFAULT_TOL) -> bool:
    # both triples are unit vectors, so the raw pairing is already scale-free
    return abs(float(np.dot(p.v, l.l))) <= tol


def join(p: ProjPoint, q: ProjPoint, tol: float = DEFAULT_TOL) -> ProjLine:
    """Line through two distinct points."""
    c = np.cross(p.v, q.v)
    if np.linalg.norm(c) <= tol:
        raise CoincidentPoints("join of coincident points")
    return ProjLine(c)


def meet(l: ProjLine, m: ProjLine, tol: float = DEFAULT_TOL) -> ProjPoint:
    """Intersection point of two distinct lines."""
    c = np.cross(l.l, m.l)
    if np.linalg.norm(c) <= tol:
        raise CoincidentLines("meet of coincident lines")
    return ProjPoint(c)


def _line_basis(points: np.ndarray, tol: float):
    """Orthonormal basis (u, w) of the 2-plane spanned by rows of `points`.

    Raises NonCollinear when the rows do not lie in a common 2-plane.
    """
    # rows are unit vectors; smallest singular value measures non-coplanarity
    _, s, vt = np.linalg.svd(points)
    if s[2] > tol * max(1.0, s[0]):
        raise NonCollinear("points span all of R^3: smallest singular value %.3e" % s[2])
    return vt[0], vt[1]


def cross_ratio(p: ProjPoint, x: ProjPoint, y: ProjPoint, q: ProjPoint,
                tol: float = DEFAULT_TOL) -> float:
    """Cross-ratio [p:x:y:q] of four collinear points.

    Equals (|p-y| |q-x|)/(|p-x| |q-y|) in any affine chart containing the four
    points; computed chart-free from 2x2 determinants in a line basis, which
    also handles points at infinity of any particular chart.
    """
    pts = np.vstack([p.v, x.v, y.v, q.v])
    u, w = _line_basis(pts, tol)
    c = np.stack([pts @ u, pts @ w], axis=1)  # 2-vector coords on the line
    d = lambda i, j: c[i, 0] * c[j, 1] - c[i, 1] * c[j, 0]
    num = d(0, 2) * d(3, 1)  # (p,y) (q,x)
    den = d(0, 1) * d(3, 2)  # (p,x) (q,y)
    scale = max(abs(num), abs(den))
    if scale == 0.0 or abs(den) <= tol * scale:
        raise CoincidentEndpoints("cross-ratio endpoint coincides with inner point")
    return abs(num / den)


@dataclass(frozen=True)
class AffineChart:
    """Affine chart of P^2: invertible basis matrix, third column = chart origin.

    Chart coordinates (u, v) embed as basis @ (u, v, 1); the hyperplane at
    infinity is the image of {(u, v, 0)}.
    """

    basis: np.ndarray

    def __init__(self, basis=None):
        b = np.eye(3) if basis is None else np.asarray(basis, dtype=float)
        if b.shape != (3, 3) or abs(np.linalg.det(b)) < 1e-14:
            raise DegenerateInput("chart basis must be an invertible 3x3 matrix")
        object.__setattr__(self, "basis", b.copy())

    @property
    def inv(self) -> np.ndarray:
        return np.linalg.inv(self.basis)

    def line_at_infinity(self) -> ProjLine:
        return ProjLine(self.inv[2])

    def to_points(self, xy: np.ndarray) -> np.ndarray:
        """(n,2) chart coords -> (n,3) homogeneous rows."""
        xy = np.atleast_2d(np.asarray(xy, dtype=float))
        h = np.column_stack([xy, np.ones(len(xy))])
        return h @ self.basis.T

    def to_xy(self, hom: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
        """(n,3) homogeneous rows -> (n,2) chart coords; infinite points rejected."""
        hom = np.atleast_2d(np.asarray(hom, dtype=float))
        c = hom @ self.inv.T
        denom = c[:, 2]
        scale = np.linalg.norm(c, axis=1)
        if np.any(np.abs(denom) <= tol * scale):
            raise DegenerateInput("point at infinity of this chart")
        return c[:, :2] / denom[:, None]

    def point_to_xy(self, p: ProjPoint, tol: float = DEFAULT_TOL) -> np.ndarray:
        return self.to_xy(p.v[None, :], tol)[0]

    def point_from_xy(self, x: float, y: float) -> ProjPoint:
        return ProjPoint(self.to_points(np.array([[x, y]]))[0])


STANDARD_CHART = AffineChart()


@dataclass(frozen=True)
class Conic:
    """Conic with symmetric matrix of signature (2,1), interior on the negative side.

    The stored matrix is scaled to unit Frobenius norm and sign-flipped so that
    exactly one eigenvalue is negative.
    """

    q: np.ndarray
    eigvals: np.ndarray = field(compare=False)

    def __init__(self, q, tol: float = DEFAULT_TOL):
        q = np.asarray(q, dtype=float)
        if q.shape != (3, 3) or np.linalg.norm(q - q.T) > 1e-12 * max(1.0, np.linalg.norm(q)):
            raise DegenerateConic("conic matrix must be symmetric 3x3")
        q = 0.5 * (q + q.T)
        q = q / np.linalg.norm(q)
        w = np.linalg.eigvalsh(q)
        if np.min(np.abs(w)) <= tol:
            raise DegenerateConic("conic matrix is singular up to tolerance")
        neg = int(np.sum(w < 0))
        if neg == 2:
            q, w = -q, -w[::-1]
            neg = 1
        if neg != 1:
            raise DegenerateConic("signature is not (2,1): eigenvalues %s" % w)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "eigvals", w)

    def value(self, pts: np.ndarray) -> np.ndarray:
        """Quadratic form on (n,3) rows."""
        pts = np.atleast_2d(pts)
        return np.einsum("ni,ij,nj->n", pts, self.q, pts)

    def tangent_line_at(self, p: ProjPoint, tol: float = 1e-7) -> ProjLine:
        val = float(p.v @ self.q @ p.v)
        if abs(val) > tol:
            raise DegenerateInput("point is not on the conic (value %.3e)" % val)
        return ProjLine(self.q @ p.v)


def line_conic_intersection(l: ProjLine, c: Conic, tol: float = DEFAULT_TOL):
    """Intersection points of a line with a signature-(2,1) conic.

    Returns a tuple of 0, 1 (tangency) or 2 ProjPoints.
    """
    # parametrize the line by two spanning points a, b; the axis with the
    # smallest coefficient is never parallel to l
    k = int(np.argmin(np.abs(l.l)))
    e = np.zeros(3)
    e[k] = 1.0
    a = np.cross(l.l, e)
    a = a / np.linalg.norm(a)
    b = np.cross(l.l, a)
    b = b / np.linalg.norm(b)
    A = float(a @ c.q @ a)
    B = float(a @ c.q @ b)
    C = float(b @ c.q @ b)
    scale = max(abs(A), abs(B), abs(C))
    disc = B * B - A * C
    if disc < -tol * scale * scale:
        return ()
    if disc <= tol * scale * scale:
        # tangency: double root
        if abs(A) >= abs(C):
            return (ProjPoint(-B * a + A * b),)
        return (ProjPoint(C * a - B * b),)
    r = np.sqrt(disc)
    if max(abs(A), abs(C)) <= tol * scale:
        # both parametrization base points already lie on the conic
        return (ProjPoint(a), ProjPoint(b))
    if abs(A) >= abs(C):
        # roots of A s^2 + 2 B s + C = 0 parametrize points s*a + b
        s1, s2 = (-B + r) / A, (-B - r) / A
        return (ProjPoint(s1 * a + b), ProjPoint(s2 * a + b))
    t1, t2 = (-B + r) / C, (-B - r) / C
    return (ProjPoint(a + t1 * b), ProjPoint(a + t2 * b))


def apply_matrix_point(m: np.ndarray, p: ProjPoint) -> ProjPoint:
    return ProjPoint(np.asarray(m, dtype=float) @ p.v)


def apply_matrix_line(m: np.ndarray, l: ProjLine) -> ProjLine:
    """Image of a line under the point transformation m (covectors get m^-T)."""
    return ProjLine(np.linalg.inv(np.asarray(m, dtype=float)).T @ l.l)
