"""Classification and dynamics of unimodular projective transformations.

A transformation preserving some properly convex open set falls into one of
six families, decided by its spectrum and Jordan structure: hyperbolic
(three distinct positive eigenvalues), planar (diagonalizable, double
positive eigenvalue), quasi-hyperbolic (non-diagonalizable double positive
eigenvalue), parabolic (unipotent with a full Jordan block), elliptic
(complex eigenvalues on the unit circle, or spectrum {1,-1,-1} semisimple),
and the identity. Everything else preserves no such set and is rejected.

The classifier works by backward error, not by raw eigenvalue clustering:
a double eigenvalue of a Jordan block splits under machine-precision
conjugation by far more than 1e-8 (square root of the perturbation for a
2-block, cube root for the full block), so candidate degenerate structures
are detected with wide eigenvalue bands and then confirmed or rejected by
rank tests on shifted matrices. Degenerate structures win ties: a matrix
within numerical reach of both a degenerate and a generic family reports
the degenerate one, with a small margin field to flag the ambiguity.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (DegenerateInput, DomainNotPreserved, NoRealLogarithm,
                     NotConvexCompatible, WrongFamily)
from .projective import (DEFAULT_TOL, AffineChart, Conic, ProjLine, ProjPoint,
                         join, normalize_triple)
from .domains import ConicDomain, ConvexDomain, Membership

DYN_TOL = 1e-8


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=float)
    if a.shape != (3, 3):
        raise DegenerateInput("transform needs a 3x3 matrix")
    return a


@dataclass(frozen=True)
class ProjTransform:
    """Unimodular representative of a projective transformation.

    The stored matrix is rescaled by the real cube root of its determinant,
    so det(m) = 1 (a negative determinant flips the sign of the matrix,
    which is the same projective map)."""

    m: np.ndarray

    def __init__(self, m):
        a = _as_matrix(m)
        d = float(np.linalg.det(a))
        scale = float(np.max(np.abs(a)))
        if abs(d) <= 1e-12 * max(scale, 1e-30) ** 3:
            # a strongly expanding unimodular matrix (det 1, norm large)
            # fails the naive relative test; judge by singular-value ratio,
            # where the LU determinant is still good to ~eps * cond
            s = np.linalg.svd(a, compute_uv=False)
            if d == 0.0 or s[2] <= 1e-13 * s[0]:
                raise DegenerateInput("transform matrix is singular")
        c = math.copysign(abs(d) ** (1.0 / 3.0), d)
        a = a / c
        a.setflags(write=False)
        object.__setattr__(self, "m", a)

    @classmethod
    def identity(cls) -> "ProjTransform":
        return cls(np.eye(3))

    @classmethod
    def from_list(cls, row_major) -> "ProjTransform":
        a = np.asarray(row_major, dtype=float)
        if a.size != 9:
            raise DegenerateInput("expected 9 numbers")
        return cls(a.reshape(3, 3))

    def to_list(self):
        return [float(x) for x in self.m.reshape(-1)]

    def inverse(self) -> "ProjTransform":
        return ProjTransform(np.linalg.inv(self.m))

    def __matmul__(self, other: "ProjTransform") -> "ProjTransform":
        return ProjTransform(self.m @ other.m)

    def apply(self, p: ProjPoint) -> ProjPoint:
        return ProjPoint(self.m @ p.v)

    def apply_line(self, l: ProjLine) -> ProjLine:
        return ProjLine(np.linalg.inv(self.m).T @ l.l)

    def power(self, n: int) -> "ProjTransform":
        return ProjTransform(np.linalg.matrix_power(self.m, int(n)))


class Family(enum.Enum):
    HYPERBOLIC = "Hyperbolic"
    PLANAR = "Planar"
    QUASI_HYPERBOLIC = "QuasiHyperbolic"
    PARABOLIC = "Parabolic"
    ELLIPTIC = "Elliptic"
    IDENTITY = "Identity"


@dataclass(frozen=True)
class DynClass:
    """Family plus the family's fixed data.

    Unused fields are None. Elliptic angles are canonicalized to (0, pi]
    (conjugation can reverse the orientation of the invariant plane, so the
    sign of the angle is not a projective invariant). margin is the smallest
    normalized distance of any decision statistic to its threshold; values
    near zero mean the input sat on a family boundary.
    """

    family: Family
    eigenvalues: tuple
    margin: float
    lambda_plus: float | None = None
    lambda_zero: float | None = None
    lambda_minus: float | None = None
    p_plus: ProjPoint | None = None
    p_zero: ProjPoint | None = None
    p_minus: ProjPoint | None = None
    d_plus_minus: ProjLine | None = None
    d_plus_zero: ProjLine | None = None
    d_minus_zero: ProjLine | None = None
    alpha: float | None = None
    beta: float | None = None
    p_gamma: ProjPoint | None = None
    d_gamma: ProjLine | None = None
    p1_gamma: ProjPoint | None = None
    p2_gamma: ProjPoint | None = None
    theta: float | None = None
    fixed_point: ProjPoint | None = None
    invariant_line: ProjLine | None = None

    def to_dict(self) -> dict:
        def enc(x):
            if isinstance(x, ProjPoint):
                return [float(t) for t in x.v]
            if isinstance(x, ProjLine):
                return [float(t) for t in x.l]
            if isinstance(x, complex):
                return [x.real, x.imag]
            return x
        data = {}
        for name in ("lambda_plus", "lambda_zero", "lambda_minus", "p_plus",
                     "p_zero", "p_minus", "d_plus_minus", "d_plus_zero",
                     "d_minus_zero", "alpha", "beta", "p_gamma", "d_gamma",
                     "p1_gamma", "p2_gamma", "theta", "fixed_point",
                     "invariant_line"):
            v = getattr(self, name)
            if v is not None:
                data[name] = enc(v)
        data["eigenvalues"] = [enc(complex(l)) for l in self.eigenvalues]
        data["margin"] = self.margin
        return {"family": self.family.value, "data": data}


def _right_null(a: np.ndarray) -> np.ndarray:
    _, _, vh = np.linalg.svd(a)
    return vh[-1]


def _left_null(a: np.ndarray) -> np.ndarray:
    u, _, _ = np.linalg.svd(a)
    return u[:, -1]


def _eigvec(m: np.ndarray, lam: float) -> ProjPoint:
    return ProjPoint(_right_null(m - lam * np.eye(3)))


def _hyperbolic_class(m: np.ndarray, lam: np.ndarray, margin: float) -> DynClass:
    lp, l0, lm = float(lam[0]), float(lam[1]), float(lam[2])
    pp, p0, pm = _eigvec(m, lp), _eigvec(m, l0), _eigvec(m, lm)
    return DynClass(
        family=Family.HYPERBOLIC, eigenvalues=(lp, l0, lm), margin=margin,
        lambda_plus=lp, lambda_zero=l0, lambda_minus=lm,
        p_plus=pp, p_zero=p0, p_minus=pm,
        d_plus_minus=join(pp, pm), d_plus_zero=join(pp, p0),
        d_minus_zero=join(pm, p0))


def _planar_class(m: np.ndarray, alpha: float, beta: float, margin: float) -> DynClass:
    a = m - alpha * np.eye(3)
    _, _, vh = np.linalg.svd(a)
    d_gamma = ProjLine(vh[0])        # rows of the rank-one shifted matrix
    p_gamma = _eigvec(m, beta)
    return DynClass(family=Family.PLANAR, eigenvalues=(alpha, alpha, beta),
                    margin=margin, alpha=alpha, beta=beta,
                    p_gamma=p_gamma, d_gamma=d_gamma)


def _quasi_hyperbolic_class(m: np.ndarray, alpha: float, beta: float,
                            margin: float) -> DynClass:
    a = m - alpha * np.eye(3)
    p2 = ProjPoint(_right_null(a))                   # alpha eigendirection
    p1 = _eigvec(m, beta)
    _, _, vh = np.linalg.svd(a @ a)
    d_gamma = ProjLine(vh[0])       # annihilator of the generalized alpha plane
    return DynClass(family=Family.QUASI_HYPERBOLIC,
                    eigenvalues=(alpha, alpha, beta), margin=margin,
                    alpha=alpha, beta=beta, p1_gamma=p1, p2_gamma=p2,
                    d_gamma=d_gamma)


def _parabolic_class(m: np.ndarray, margin: float) -> DynClass:
    n = m - np.eye(3)
    p_gamma = ProjPoint(_right_null(n))
    d_gamma = ProjLine(_left_null(n))
    return DynClass(family=Family.PARABOLIC, eigenvalues=(1.0, 1.0, 1.0),
                    margin=margin, p_gamma=p_gamma, d_gamma=d_gamma)


def _elliptic_class(m: np.ndarray, theta: float, margin: float,
                    order_two: bool = False) -> DynClass:
    eye = np.eye(3)
    fixed = ProjPoint(_right_null(m - eye))
    if order_two:
        # invariant line = plane of the (-1)-eigenvectors
        _, _, vh = np.linalg.svd(m + eye)
        line = ProjLine(vh[0])
        eig = (1.0, -1.0, -1.0)
    else:
        line = ProjLine(_left_null(m - eye))
        eig = (1.0, complex(math.cos(theta), math.sin(theta)),
               complex(math.cos(theta), -math.sin(theta)))
    return DynClass(family=Family.ELLIPTIC, eigenvalues=eig, margin=margin,
                    theta=theta, fixed_point=fixed, invariant_line=line)


def classify(g: ProjTransform, tol: float = DYN_TOL) -> DynClass:
    """Decide the dynamical family of g.

    Raises NotConvexCompatible for spectra outside the six families
    (negative eigenvalues of distinct moduli, complex pair with real
    eigenvalue away from 1, unipotent 2-blocks, repeated negative
    eigenvalue of modulus != 1)."""
    m = g.m
    eye = np.eye(3)
    lam_all = np.linalg.eigvals(m)
    rho = float(np.max(np.abs(lam_all)))
    n_dev = float(np.linalg.norm(m - eye))
    theta_id = max(tol, 1e-12) * math.sqrt(3.0) * max(rho, 1.0)
    if n_dev <= theta_id:
        return DynClass(family=Family.IDENTITY, eigenvalues=(1.0, 1.0, 1.0),
                        margin=(theta_id - n_dev) / theta_id)
    # eigenvalues of a defective matrix are only good to ~(eps |m|)^(1/3), so
    # the cluster gates must sit above that floor or honest Jordan blocks of
    # large norm leak into the wrong branch; the floor is absolute (eigenvalue
    # units), never scaled by rho, or stiff spectra like diag(1e5, 1, 1e-5)
    # would see their small eigenvalues merged into a fake double root
    split_floor = 20.0 * float(np.cbrt(2.3e-16 * max(1.0, n_dev)))
    thr_cluster = max(100 * tol * rho, split_floor)
    im_max = float(np.max(np.abs(lam_all.imag)))
    if im_max > 1e-9 * rho:
        k_real = int(np.argmin(np.abs(lam_all.imag)))
        r = float(lam_all[k_real].real)
        pair = [lam_all[i] for i in range(3) if i != k_real]
        lam_c = pair[0] if pair[0].imag > 0 else pair[1]
        # a full Jordan block at 1 splits under float conjugation into
        # delta * (cube roots of unity): a complex pair plus a real value,
        # all clustered near 1 -- test nilpotency before judging the pair
        d_max = float(np.max(np.abs(lam_all[:, None] - lam_all[None, :])))
        if d_max <= thr_cluster and abs(r - 1.0) <= thr_cluster:
            n = m - eye
            s_n = max(1.0, float(np.linalg.norm(n)))
            n2 = float(np.linalg.norm(n @ n))
            n3 = float(np.linalg.norm(n @ n @ n))
            thr_nil = max(tol, 1e-7)
            if n3 <= thr_nil * s_n ** 3 and n2 > thr_nil * s_n ** 2:
                margin = min(n2 / s_n ** 2 - thr_nil,
                             (thr_nil - n3 / s_n ** 3) / thr_nil)
                return _parabolic_class(m, margin)
        band = max(tol, 1e-6)
        if abs(r - 1.0) <= band:
            theta = abs(math.atan2(lam_c.imag, lam_c.real))
            margin = min(im_max / rho, (band - abs(r - 1.0)) / band)
            return _elliptic_class(m, theta, margin)
        if im_max > thr_cluster:
            raise NotConvexCompatible(
                "complex eigenvalue pair with real eigenvalue %.6g != 1" % r)
        # tiny pair off a real eigenvalue: a rounding-split double root;
        # dispatch on the real parts instead of refusing
    lam = np.sort(lam_all.real)[::-1]
    if lam[2] < 0.0:
        # det = 1 forces exactly two negative eigenvalues
        a_mod, b_mod = abs(lam[1]), abs(lam[2])
        if abs(a_mod - b_mod) > max(100 * tol, 1e-5) * rho:
            raise NotConvexCompatible("negative eigenvalues with distinct moduli")
        mean = 0.5 * (a_mod + b_mod)
        if abs(mean - 1.0) > max(tol, 1e-6):
            raise NotConvexCompatible(
                "repeated negative eigenvalue of modulus %.6g != 1" % mean)
        s = np.linalg.svd(m + eye, compute_uv=False)
        thr = max(tol, 1e-7) * rho
        if s[1] > thr:
            raise NotConvexCompatible("non-semisimple eigenvalue -1")
        return _elliptic_class(m, math.pi, (thr - s[1]) / thr, order_two=True)
    g12, g23 = float(lam[0] - lam[1]), float(lam[1] - lam[2])
    theta_cand = thr_cluster
    if g12 > theta_cand and g23 > theta_cand:
        return _hyperbolic_class(m, lam, min(g12, g23) / rho)
    thr_rank = max(tol, 1e-7) * rho
    if g12 <= theta_cand and g23 <= theta_cand:
        # whole spectrum near 1: unipotent candidates first
        n = m - eye
        s_n = max(1.0, float(np.linalg.norm(n)))
        n2 = float(np.linalg.norm(n @ n))
        n3 = float(np.linalg.norm(n @ n @ n))
        thr_nil = max(tol, 1e-7)
        if n3 <= thr_nil * s_n ** 3:
            if n2 > thr_nil * s_n ** 2:
                margin = min(n2 / s_n ** 2 - thr_nil,
                             (thr_nil - n3 / s_n ** 3) / thr_nil)
                return _parabolic_class(m, margin)
            if max(g12, g23) <= 1e-6 * rho:
                raise NotConvexCompatible(
                    "unipotent with (m - I)^2 = 0: no invariant properly convex set")
        # semisimple-ish spectrum near 1: fall through to fine clustering
        theta_fine = max(tol, 1e-12) * rho
        if g12 > theta_fine and g23 > theta_fine:
            return _hyperbolic_class(m, lam, min(g12, g23) / rho)
    # merge the closer pair, recover its value from the simple eigenvalue
    if g12 <= g23:
        beta_hat, pair_gap, pair_mean = float(lam[2]), g12, 0.5 * (lam[0] + lam[1])
    else:
        beta_hat, pair_gap, pair_mean = float(lam[0]), g23, 0.5 * (lam[1] + lam[2])
    alpha_hat = 1.0 / math.sqrt(beta_hat)
    if (abs(alpha_hat - pair_mean) > max(100 * tol, 1e-4) * max(1.0, alpha_hat)
            or abs(alpha_hat - 1.0) <= 1e-9):
        # pair does not satisfy alpha^2 beta = 1: coincidental near-collision
        return _hyperbolic_class(m, lam, pair_gap / rho)
    sv = np.linalg.svd(m - alpha_hat * eye, compute_uv=False)
    if sv[1] <= thr_rank:
        margin = min((thr_rank - sv[1]) / thr_rank,
                     (theta_cand - pair_gap) / theta_cand)
        return _planar_class(m, alpha_hat, beta_hat, margin)
    if sv[2] <= thr_rank:
        margin = min((sv[1] - thr_rank) / rho, (thr_rank - sv[2]) / thr_rank,
                     (theta_cand - pair_gap) / theta_cand)
        return _quasi_hyperbolic_class(m, alpha_hat, beta_hat, margin)
    return _hyperbolic_class(m, lam, pair_gap / rho)


class AxisKind(enum.Enum):
    PRINCIPAL = "Principal"
    SECONDARY = "Secondary"


@dataclass(frozen=True)
class Axis:
    endpoints: tuple
    kind: AxisKind


def preserves_domain(g: ProjTransform, domain: ConvexDomain,
                     n_samples: int = 64, tol: float = 1e-7) -> bool:
    """True iff g maps the domain onto itself.

    Conic domains get an exact congruence test g^T q g proportional to q; the
    other representations are checked on sampled boundary points."""
    if isinstance(domain, ConicDomain):
        q = domain.conic.q
        c = g.m.T @ q @ g.m
        c = c / np.linalg.norm(c)
        q = q / np.linalg.norm(q)
        idx = np.unravel_index(np.argmax(np.abs(q)), q.shape)
        if c[idx] * q[idx] < 0:
            c = -c
        return bool(np.linalg.norm(c - q) <= max(tol, 1e-9))
    ref_xy = domain.reference_interior_xy()
    ref = domain.chart.point_from_xy(ref_xy[0], ref_xy[1])
    if domain.contains(g.apply(ref), tol) is not Membership.INTERIOR:
        return False
    band = max(tol, 1e-7)
    g_inv = g.inverse()
    for xy in domain.boundary_points(n_samples):
        p = domain.chart.point_from_xy(xy[0], xy[1])
        if domain.contains(g.apply(p), band) is Membership.EXTERIOR:
            return False
        if domain.contains(g_inv.apply(p), band) is Membership.EXTERIOR:
            return False
    return True


def axes(g: ProjTransform, domain: ConvexDomain, tol: float = 1e-7) -> list:
    """Principal axis (and secondary axes when the middle fixed point sits on
    the boundary) of a hyperbolic or quasi-hyperbolic element."""
    cls = classify(g)
    if cls.family not in (Family.HYPERBOLIC, Family.QUASI_HYPERBOLIC):
        raise WrongFamily("axes need a hyperbolic or quasi-hyperbolic element")
    if not preserves_domain(g, domain, tol=tol):
        raise DomainNotPreserved("the element does not preserve this domain")
    out = []
    if cls.family is Family.QUASI_HYPERBOLIC:
        out.append(Axis(endpoints=(cls.p1_gamma, cls.p2_gamma),
                        kind=AxisKind.PRINCIPAL))
        return out
    out.append(Axis(endpoints=(cls.p_plus, cls.p_minus), kind=AxisKind.PRINCIPAL))
    if domain.contains(cls.p_zero, max(tol, 1e-7)) is Membership.BOUNDARY:
        out.append(Axis(endpoints=(cls.p_plus, cls.p_zero), kind=AxisKind.SECONDARY))
        out.append(Axis(endpoints=(cls.p_minus, cls.p_zero), kind=AxisKind.SECONDARY))
    return out


PENCIL_Z = np.diag([0.0, 0.0, 1.0])
PENCIL_K = np.array([[0.0, 0.0, -1.0],
                     [0.0, 1.0, -0.5],
                     [-1.0, -0.5, 0.0]])


@dataclass(frozen=True)
class ParabolicPencil:
    """Invariant pencil of conics of a parabolic element.

    In normal-form coordinates the pencil is lam*z^2 + mu*(y^2 - z(y+2x));
    conjugator maps normal-form coordinates to the original ones, and members
    are transported accordingly. Every member is tangent to d_gamma at
    p_gamma; mu = 0 degenerates to the double line z^2 = 0."""

    conjugator: np.ndarray
    p_gamma: ProjPoint
    d_gamma: ProjLine

    def normal_member(self, lam: float, mu: float) -> np.ndarray:
        return lam * PENCIL_Z + mu * PENCIL_K

    def member(self, lam: float, mu: float) -> np.ndarray:
        b_inv = np.linalg.inv(self.conjugator)
        return b_inv.T @ self.normal_member(lam, mu) @ b_inv

    def member_conic(self, lam: float, mu: float) -> Conic:
        return Conic(self.member(lam, mu))


def parabolic_invariant_pencil(g: ProjTransform) -> ParabolicPencil:
    cls = classify(g)
    if cls.family is not Family.PARABOLIC:
        raise WrongFamily("invariant pencils require a parabolic element")
    n = g.m - np.eye(3)
    best = None
    for k in range(3):
        v = np.eye(3)[k]
        b = np.column_stack([n @ n @ v, n @ v, v])
        d = abs(np.linalg.det(b))
        if best is None or d > best[0]:
            best = (d, b)
    b = best[1]
    # columns scale so that the conjugated matrix is the unit-superdiagonal form
    return ParabolicPencil(conjugator=b, p_gamma=cls.p_gamma, d_gamma=cls.d_gamma)


def one_param_power(g: ProjTransform, t: float) -> ProjTransform:
    """g^t inside the one-parameter group through g.

    Defined for positive real spectrum (hyperbolic, planar, quasi-hyperbolic,
    parabolic) and any t; elliptic elements only admit integral powers."""
    cls = classify(g)
    m = g.m
    eye = np.eye(3)
    if cls.family is Family.IDENTITY:
        return ProjTransform.identity()
    if cls.family is Family.ELLIPTIC:
        if abs(t - round(t)) <= 1e-12:
            return g.power(int(round(t)))
        raise NoRealLogarithm("non-integral power of an elliptic element")
    if cls.family is Family.PARABOLIC:
        n = m - eye
        return ProjTransform(eye + t * n + 0.5 * t * (t - 1.0) * (n @ n))
    if cls.family is Family.HYPERBOLIC:
        lams = np.array([cls.lambda_plus, cls.lambda_zero, cls.lambda_minus])
        v = np.column_stack([cls.p_plus.v, cls.p_zero.v, cls.p_minus.v])
        return ProjTransform(v @ np.diag(lams ** t) @ np.linalg.inv(v))
    alpha, beta = cls.alpha, cls.beta
    if cls.family is Family.PLANAR:
        p = cls.p_gamma.v
        # two independent directions of the pointwise-fixed plane
        _, _, vh = np.linalg.svd(m - alpha * eye)
        v = np.column_stack([vh[1], vh[2], p])
        return ProjTransform(v @ np.diag([alpha ** t, alpha ** t, beta ** t])
                             @ np.linalg.inv(v))
    # quasi-hyperbolic: Jordan block [[alpha,1],[0,alpha]] + beta
    v_a = cls.p2_gamma.v
    a = m - alpha * eye
    w = np.linalg.lstsq(a, v_a, rcond=None)[0]
    v = np.column_stack([v_a, w, cls.p1_gamma.v])
    jt = np.zeros((3, 3))
    jt[0, 0] = jt[1, 1] = alpha ** t
    jt[0, 1] = t * alpha ** (t - 1.0)
    jt[2, 2] = beta ** t
    return ProjTransform(v @ jt @ np.linalg.inv(v))


@dataclass(frozen=True)
class OrbitCurve:
    ts: tuple
    points: np.ndarray            # (n,2) in the normal-form chart z=1
    residuals: np.ndarray
    on_line_y0: bool
    alpha: float
    beta: float


def quasi_hyperbolic_orbit(g: ProjTransform, x0, ts) -> OrbitCurve:
    """Orbit t -> g^t x0 of a quasi-hyperbolic element in its normal chart.

    x0 = (X0, Y0) are coordinates in the chart z=1 of the normal form with
    alpha-superdiagonal (the variant in which the orbit satisfies
    X/X0 = Y/Y0 + (Y/X0) ln(Y/Y0)/ln(alpha/beta) exactly); residuals report
    that relation, rescaled when X0 = 0. Y0 = 0 degenerates to the line Y=0."""
    cls = classify(g)
    if cls.family is not Family.QUASI_HYPERBOLIC:
        raise WrongFamily("orbit curves require a quasi-hyperbolic element")
    alpha, beta = cls.alpha, cls.beta
    x0 = np.asarray(x0, dtype=float)
    ts = np.asarray(ts, dtype=float)
    x_0, y_0 = float(x0[0]), float(x0[1])
    s = (alpha / beta) ** ts
    xs = s * (x_0 + ts * y_0)
    ys = s * y_0
    pts = np.column_stack([xs, ys])
    if y_0 == 0.0:
        res = np.abs(ys)
        return OrbitCurve(tuple(ts), pts, res, True, alpha, beta)
    ratio = ys / y_0
    res = np.abs(xs - x_0 * ratio - ys * np.log(ratio) / math.log(alpha / beta))
    res = res / np.maximum(1.0, np.abs(xs))
    return OrbitCurve(tuple(ts), pts, res, False, alpha, beta)


@dataclass(frozen=True)
class SectorRegion:
    generator: ProjTransform
    seed: tuple
    n: int
    hull: object          # PolygonRegion


def sector(g: ProjTransform, domain: ConvexDomain, seed, n: int) -> SectorRegion:
    """Convex hull of the orbit of a compact seed polygon under g^k, |k| <= n."""
    from .busemann import PolygonRegion
    from .domains import _convex_hull_ccw
    if not preserves_domain(g, domain):
        raise DomainNotPreserved("sector generator must preserve the domain")
    seed_pts = []
    for p in seed:
        if isinstance(p, ProjPoint):
            q = p
        else:
            xy = np.asarray(p, dtype=float)
            q = domain.chart.point_from_xy(xy[0], xy[1])
        if domain.contains(q) is not Membership.INTERIOR:
            raise DegenerateInput("seed polygon must lie inside the domain")
        seed_pts.append(q)
    # orbit tracked point-wise (ProjPoint.apply renormalizes), so high powers
    # of strongly expanding elements cannot overflow a compounded matrix
    g_inv = g.inverse()
    fw = list(seed_pts)
    bw = list(seed_pts)
    cloud = [domain.chart.point_to_xy(p) for p in seed_pts]
    for _ in range(n):
        fw = [g.apply(p) for p in fw]
        bw = [g_inv.apply(p) for p in bw]
        cloud.extend(domain.chart.point_to_xy(p) for p in fw)
        cloud.extend(domain.chart.point_to_xy(p) for p in bw)
    cloud = np.asarray(cloud)
    hull = _convex_hull_ccw(cloud)
    verts = [domain.chart.point_from_xy(cloud[i, 0], cloud[i, 1]) for i in hull]
    return SectorRegion(generator=g, seed=tuple(seed_pts), n=n,
                        hull=PolygonRegion(verts))


@dataclass(frozen=True)
class GeomCharacteristics:
    """Comparable fixed data of an element (what a one-parameter group shares).

    order_two flags elliptic angle pi, where the comparison is best-effort:
    such elements sit in no one-parameter group and centralizer arguments
    degenerate, so equality of fixed data is reported as-is."""
    family: Family
    points: tuple
    lines: tuple
    unordered_pair: tuple = ()
    order_two: bool = False


def geometric_characteristics(g: ProjTransform) -> GeomCharacteristics:
    cls = classify(g)
    f = cls.family
    if f is Family.IDENTITY:
        return GeomCharacteristics(f, (), ())
    if f is Family.HYPERBOLIC:
        return GeomCharacteristics(f, (cls.p_zero,), (),
                                   unordered_pair=(cls.p_plus, cls.p_minus))
    if f is Family.PLANAR:
        return GeomCharacteristics(f, (cls.p_gamma,), (cls.d_gamma,))
    if f is Family.QUASI_HYPERBOLIC:
        return GeomCharacteristics(f, (cls.p1_gamma, cls.p2_gamma), (cls.d_gamma,))
    if f is Family.PARABOLIC:
        return GeomCharacteristics(f, (cls.p_gamma,), (cls.d_gamma,))
    return GeomCharacteristics(f, (cls.fixed_point,), (cls.invariant_line,),
                               order_two=bool(abs(cls.theta - math.pi) <= 1e-9))


def _proj_close(u: np.ndarray, v: np.ndarray, tol: float) -> bool:
    return float(np.linalg.norm(np.cross(u, v))) <= tol * float(
        np.linalg.norm(u) * np.linalg.norm(v))


def same_geometric_characteristics(g: ProjTransform, h: ProjTransform,
                                   tol: float = 1e-7) -> bool:
    """True iff g and h share family and fixed points/lines (the data constant
    along a one-parameter group; for hyperbolic pairs the attracting/repelling
    points may swap, matching inverse elements)."""
    a, b = geometric_characteristics(g), geometric_characteristics(h)
    if a.family is not b.family:
        return False
    if a.family is Family.IDENTITY:
        return True
    for p, q in zip(a.points, b.points):
        if not _proj_close(p.v, q.v, tol):
            return False
    for p, q in zip(a.lines, b.lines):
        if not _proj_close(p.l, q.l, tol):
            return False
    if a.family is Family.HYPERBOLIC:
        (g1, g2), (h1, h2) = a.unordered_pair, b.unordered_pair
        direct = _proj_close(g1.v, h1.v, tol) and _proj_close(g2.v, h2.v, tol)
        swapped = _proj_close(g1.v, h2.v, tol) and _proj_close(g2.v, h1.v, tol)
        return direct or swapped
    return True
