"""Group-level tools: word enumeration, the finite-volume criterion,
limit-set clouds, and irreducibility diagnostics.

Elements are deduplicated by matrix proximity after unimodular
normalization; the normalization is unique (the real cube root of the
determinant also fixes the sign), so projectively equal words collapse to
one representative. Products are renormalized at every multiplication to
stop drift along long words.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .domains import ConvexDomain, Membership
from .dynamics import (DynClass, Family, ProjTransform, classify,
                       preserves_domain)
from .errors import DegenerateInput, DomainNotPreserved
from .projective import Conic, ProjPoint

DEDUP_TOL = 1e-9


@dataclass(frozen=True)
class GroupPresentation:
    """Generator list closed under inversion, with optional labels and an
    optional common domain (membership of every generator is verified when
    a domain is supplied)."""

    generators: tuple
    labels: tuple
    domain: ConvexDomain | None = None

    def __init__(self, generators, labels=None, domain=None):
        gens = list(generators)
        if not gens:
            raise DegenerateInput("need at least one generator")
        if labels is None:
            labels = ["g%d" % i for i in range(len(gens))]
        labels = list(labels)
        if len(labels) != len(gens):
            raise DegenerateInput("one label per generator")
        if domain is not None:
            for g, name in zip(gens, labels):
                if not preserves_domain(g, domain):
                    raise DomainNotPreserved("generator %s moves the domain" % name)
        closed = list(gens)
        closed_labels = list(labels)
        for g, name in zip(gens, labels):
            inv = g.inverse()
            if not any(_same_transform(inv, h) for h in closed):
                closed.append(inv)
                closed_labels.append(name + "^-1")
        object.__setattr__(self, "generators", tuple(closed))
        object.__setattr__(self, "labels", tuple(closed_labels))
        object.__setattr__(self, "domain", domain)


def _same_transform(a: ProjTransform, b: ProjTransform, tol: float = DEDUP_TOL) -> bool:
    return bool(np.linalg.norm(a.m - b.m) <= tol * (1.0 + np.linalg.norm(a.m)))


def _enumerate_labeled(group: GroupPresentation, max_len: int):
    """All distinct nontrivial reduced words of length <= max_len, as
    (letter tuple, transform) pairs in length-then-lexicographic order."""
    if max_len < 1:
        return []
    gens = group.generators
    k = len(gens)
    inverse_of = []
    for i, g in enumerate(gens):
        inv_idx = None
        gi = g.inverse()
        for j, h in enumerate(gens):
            if _same_transform(gi, h):
                inv_idx = j
                break
        inverse_of.append(inv_idx)
    seen = np.zeros((256, 9))
    seen[0] = np.eye(3).reshape(-1)
    n_seen = 1
    out = []
    frontier = [((), np.eye(3))]
    for _ in range(max_len):
        nxt = []
        for word, mat in frontier:
            for i in range(k):
                if word and inverse_of[word[-1]] == i:
                    continue
                m = ProjTransform(mat @ gens[i].m).m
                flat = m.reshape(-1)
                d2 = np.einsum("ij,ij->i", seen[:n_seen] - flat,
                               seen[:n_seen] - flat)
                thr = DEDUP_TOL * (1.0 + float(np.linalg.norm(flat)))
                if float(np.min(d2)) <= thr * thr:
                    continue
                if n_seen == len(seen):
                    seen = np.vstack([seen, np.zeros_like(seen)])
                seen[n_seen] = flat
                n_seen += 1
                w = word + (i,)
                nxt.append((w, m))
                out.append((w, ProjTransform(m)))
        frontier = nxt
    return out


def enumerate_words(group: GroupPresentation, max_len: int):
    """Reduced nontrivial words of length <= max_len (identity excluded)."""
    return [t for _, t in _enumerate_labeled(group, max_len)]


class VolumeKind(enum.Enum):
    FINITE_VOLUME = "FiniteVolume"
    INFINITE_VOLUME = "InfiniteVolume"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class VolumeVerdict:
    kind: VolumeKind
    witness: ProjTransform | None = None
    witness_class: DynClass | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        d = {"verdict": self.kind.value, "detail": self.detail}
        if self.witness is not None:
            d["witness"] = self.witness.to_list()
            d["witness_family"] = self.witness_class.family.value
        return d


def finite_volume_criterion(domain: ConvexDomain, elementary_holonomies,
                            tol: float = 1e-8) -> VolumeVerdict:
    """Quotient volume dichotomy from the cusp holonomies.

    The quotient has finite volume exactly when every elementary-loop
    holonomy is parabolic; the first non-parabolic element is returned as a
    witness. A classification margin below 10*tol yields Inconclusive, since
    the criterion depends on exact parabolicity."""
    for g in elementary_holonomies:
        if not preserves_domain(g, domain):
            raise DomainNotPreserved("listed holonomy does not preserve the domain")
    for g in elementary_holonomies:
        cls = classify(g, tol)
        if cls.margin < 10 * tol:
            return VolumeVerdict(VolumeKind.INCONCLUSIVE, witness=g,
                                 witness_class=cls,
                                 detail="classification margin %.3g too small"
                                        % cls.margin)
        if cls.family is not Family.PARABOLIC:
            return VolumeVerdict(VolumeKind.INFINITE_VOLUME, witness=g,
                                 witness_class=cls,
                                 detail="non-parabolic holonomy (%s)"
                                        % cls.family.value)
    return VolumeVerdict(VolumeKind.FINITE_VOLUME,
                         detail="all %d listed holonomies parabolic"
                                % len(list(elementary_holonomies)))


@dataclass(frozen=True)
class LimitSetCloud:
    """Attracting fixed points of the hyperbolic words, annotated by the
    length of the shortest word that produced each point."""

    points: tuple
    word_lengths: tuple
    max_word_len: int

    def as_array(self) -> np.ndarray:
        return np.array([p.v for p in self.points])


def limit_set_approx(group: GroupPresentation, max_len: int) -> LimitSetCloud:
    pts = []
    lens = []
    buf = np.zeros((256, 3))
    n_buf = 0
    for word, t in _enumerate_labeled(group, max_len):
        try:
            cls = classify(t)
        except Exception:
            continue
        if cls.family is not Family.HYPERBOLIC:
            continue
        p = cls.p_plus
        # representatives are unit-norm and sign-canonical, so a plain
        # Euclidean proximity test deduplicates projective points
        if n_buf:
            d2 = np.einsum("ij,ij->i", buf[:n_buf] - p.v, buf[:n_buf] - p.v)
            if float(np.min(d2)) <= 1e-18:
                continue
        if n_buf == len(buf):
            buf = np.vstack([buf, np.zeros_like(buf)])
        buf[n_buf] = p.v
        n_buf += 1
        pts.append(p)
        lens.append(len(word))
    return LimitSetCloud(points=tuple(pts), word_lengths=tuple(lens),
                         max_word_len=max_len)


def _real_eigvecs(m: np.ndarray, tol: float) -> list:
    vals, vecs = np.linalg.eig(m)
    out = []
    for i in range(3):
        if abs(vals[i].imag) <= tol * max(1.0, abs(vals[i])):
            v = vecs[:, i].real
            n = np.linalg.norm(v)
            if n > tol:
                out.append(v / n)
    return out


def _is_common_eigvec(v: np.ndarray, mats, tol: float) -> bool:
    for m in mats:
        w = m @ v
        if np.linalg.norm(np.cross(w, v)) > tol * max(np.linalg.norm(w), 1e-30):
            return False
    return True


def irreducibility_check(group: GroupPresentation, tol: float = 1e-7) -> bool:
    """False iff the generators share a fixed point or an invariant line.

    Candidate directions are the real eigenvectors of each generator (a
    common eigenvector must be one of them); lines are the same test on
    transposes. A single generator always has its own eigenvector, so a
    one-generator group is never irreducible."""
    mats = [g.m for g in group.generators]
    for m in mats:
        for v in _real_eigvecs(m, tol):
            if _is_common_eigvec(v, mats, tol):
                return False
    trs = [m.T for m in mats]
    for m in trs:
        for v in _real_eigvecs(m, tol):
            if _is_common_eigvec(v, trs, tol):
                return False
    return True


# ---------------------------------------------------------------------------
# symmetric-square fixtures

DISC_FORM = np.array([[0.0, 0.0, -2.0],
                      [0.0, 1.0, 0.0],
                      [-2.0, 0.0, 0.0]])


def sym_square(m2) -> ProjTransform:
    """Symmetric-square image of a 2x2 unimodular matrix.

    Acts on binary quadratic forms a x^2 + b xy + c y^2 written as (a,b,c)
    by substitution of the inverse, preserving the discriminant form
    b^2 - 4ac; definite forms project to a disk domain, turning subgroups of
    SL2 into automorphism groups of a conic."""
    g = np.asarray(m2, dtype=float).reshape(2, 2)
    det = float(np.linalg.det(g))
    if abs(det) < 1e-12:
        raise DegenerateInput("2x2 matrix is singular")
    g = g / np.sqrt(abs(det))
    p, q = g[0]
    r, s = g[1]
    m = np.array([
        [s * s, -s * r, r * r],
        [-2.0 * s * q, s * p + q * r, -2.0 * r * p],
        [q * q, -q * p, p * p],
    ])
    return ProjTransform(m)


def disc_conic() -> Conic:
    """Discriminant conic b^2 - 4ac = 0; its interior (negative side) is the
    projectivized cone of definite binary quadratic forms."""
    return Conic(DISC_FORM)
