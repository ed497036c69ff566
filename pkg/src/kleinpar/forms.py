"""Indefinite diagonal bilinear forms, subspaces, and orientation bookkeeping.

Subspaces of R^n are stored as column-orthonormal (Euclidean) basis matrices,
so membership, intersection and polarity reduce to small dense SVD problems.
An oriented subspace is a subspace whose *stored basis order* is declared
positive; reversal negates one basis column.  All values are immutable and
every operation is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

# Single tunable degeneracy knob: all rank / signature decisions route
# through this relative threshold.
RANK_TOL = 1e-9
SIGN_CANON_TOL = 1e-12


class DegenerateRestriction(ValueError):
    """The form restricted to the subspace is degenerate (z > 0)."""


class DegenerateFrame(ValueError):
    """A frame that should span the space is numerically rank-deficient."""


@dataclass(frozen=True)
class BilinearForm:
    """Symmetric bilinear form that is diagonal in standard coordinates."""

    diagonal_signs: tuple[int, ...]

    def __post_init__(self):
        if any(s not in (-1, 1) for s in self.diagonal_signs):
            raise ValueError("diagonal signs must be +1 or -1")

    @property
    def ambient_dim(self) -> int:
        return len(self.diagonal_signs)

    @cached_property
    def signs(self) -> np.ndarray:
        a = np.asarray(self.diagonal_signs, dtype=float)
        a.setflags(write=False)
        return a

    def eval(self, u: np.ndarray, v: np.ndarray) -> float:
        """f(u, v).  Accepts batched inputs broadcasting over leading axes."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return np.sum(u * self.signs * v, axis=-1)

    def apply(self, M: np.ndarray) -> np.ndarray:
        """Matrix product F @ M for the diagonal Gram matrix F."""
        M = np.asarray(M, dtype=float)
        if M.ndim == 1:
            return self.signs * M
        return self.signs[:, None] * M

    def gram(self, basis: np.ndarray) -> np.ndarray:
        """Restricted Gram matrix basis^T F basis."""
        return basis.T @ self.apply(basis)


#: The (3,3) form of the Klein model in diagonal coordinates.
KLEIN_FORM = BilinearForm((1, 1, 1, -1, -1, -1))
#: The (1,3) form induced on a ruler, in its f-orthonormal frame coordinates.
RULER_FORM = BilinearForm((1, -1, -1, -1))


def orthonormalize(vectors: np.ndarray, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the span of the given column vectors.

    Uses an SVD with relative rank threshold; dependent directions are
    dropped.  The result does not track the input order (see
    `orthonormalize_oriented` when the orientation class matters).
    """
    V = np.atleast_2d(np.asarray(vectors, dtype=float))
    if V.shape[1] == 0:
        return V.copy()
    u, s, _ = np.linalg.svd(V, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.empty((V.shape[0], 0))
    rank = int(np.sum(s > rank_tol * s[0]))
    return u[:, :rank]


def orthonormalize_oriented(vectors: np.ndarray) -> np.ndarray:
    """QR orthonormalization preserving the orientation class of the columns.

    Requires full column rank; raises DegenerateFrame otherwise.
    """
    V = np.asarray(vectors, dtype=float)
    q, r = np.linalg.qr(V)
    d = np.diag(r)
    if np.any(np.abs(d) < RANK_TOL * max(1.0, np.abs(d).max(initial=0.0))):
        raise DegenerateFrame("column set is numerically dependent")
    return q * np.sign(d)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Linear subspace of R^n held as a column-orthonormal basis matrix."""

    basis: np.ndarray  # shape (ambient_dim, dim)

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 2:
            raise ValueError("basis must be a 2-d matrix of column vectors")
        object.__setattr__(self, "basis", b)
        b.setflags(write=False)

    @classmethod
    def from_spanning(cls, vectors, rank_tol: float = RANK_TOL) -> "Subspace":
        """Subspace spanned by the given vectors (rows or a column matrix)."""
        V = np.asarray(vectors, dtype=float)
        if V.ndim == 1:
            V = V[:, None]
        elif V.shape[0] != V.shape[1] and V.shape[0] < V.shape[1]:
            # interpret a wide matrix as a list of row vectors
            V = V.T
        return cls(orthonormalize(V, rank_tol))

    @classmethod
    def span(cls, *vectors) -> "Subspace":
        return cls(orthonormalize(np.column_stack([np.asarray(v, float) for v in vectors])))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(np.eye(n))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(np.empty((n, 0)))

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @cached_property
    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def project(self, v: np.ndarray) -> np.ndarray:
        return self.basis @ (self.basis.T @ np.asarray(v, float))

    def contains(self, v: np.ndarray, tol: float = 1e-9) -> bool:
        v = np.asarray(v, dtype=float)
        nv = np.linalg.norm(v)
        if nv == 0.0:
            return True
        return np.linalg.norm(v - self.project(v)) <= tol * nv

    def residual(self, v: np.ndarray) -> float:
        """Euclidean distance of the unit direction of v from the subspace."""
        v = np.asarray(v, dtype=float)
        v = v / np.linalg.norm(v)
        return float(np.linalg.norm(v - self.project(v)))

    def same_as(self, other: "Subspace", tol: float = RANK_TOL) -> bool:
        """Basis-choice independent equality: largest principal-angle sine < tol."""
        if self.ambient_dim != other.ambient_dim or self.dim != other.dim:
            return False
        if self.dim == 0:
            return True
        gap = np.linalg.norm(self.projector - other.projector, ord=2)
        return bool(gap < tol)


def gram_signature(S: Subspace, f: BilinearForm) -> tuple[int, int, int]:
    """Counts (p, n, z) of positive/negative/zero eigenvalues of f on S.

    Zero threshold is RANK_TOL relative to the largest absolute eigenvalue,
    so near-isotropic directions are classified as zero rather than raising.
    """
    if S.ambient_dim != f.ambient_dim:
        raise ValueError("ambient dimensions differ")
    if S.dim == 0:
        return (0, 0, 0)
    w = np.linalg.eigvalsh(f.gram(S.basis))
    scale = np.abs(w).max()
    if scale == 0.0:
        return (0, 0, S.dim)
    thresh = RANK_TOL * scale
    p = int(np.sum(w > thresh))
    n = int(np.sum(w < -thresh))
    return (p, n, S.dim - p - n)


def meet(S: Subspace, T: Subspace) -> Subspace:
    """Intersection, via the null space of stacked projector differences."""
    if S.ambient_dim != T.ambient_dim:
        raise ValueError("ambient dimensions differ")
    n = S.ambient_dim
    stacked = np.vstack([S.projector - np.eye(n), T.projector - np.eye(n)])
    _, s, vt = np.linalg.svd(stacked)
    if s.size == 0 or s[0] == 0.0:
        return Subspace.full(n)
    rank = int(np.sum(s > RANK_TOL * s[0]))
    return Subspace(vt[rank:].T)


def join(S: Subspace, T: Subspace) -> Subspace:
    """Span of the union of the two subspaces."""
    if S.ambient_dim != T.ambient_dim:
        raise ValueError("ambient dimensions differ")
    return Subspace(orthonormalize(np.hstack([S.basis, T.basis])))


def polar(S: Subspace, f: BilinearForm) -> Subspace:
    """f-orthogonal complement {v | f(v, S) = 0}."""
    if S.ambient_dim != f.ambient_dim:
        raise ValueError("ambient dimensions differ")
    n = S.ambient_dim
    if S.dim == 0:
        return Subspace.full(n)
    A = f.apply(S.basis).T  # rows are f-functionals of the basis vectors
    _, s, vt = np.linalg.svd(A, full_matrices=True)
    rank = int(np.sum(s > RANK_TOL * s[0]))
    return Subspace(vt[rank:].T)


@dataclass(frozen=True, eq=False)
class OrientedSubspace:
    """Subspace whose stored basis order is declared positive."""

    base: Subspace

    @classmethod
    def span(cls, *vectors) -> "OrientedSubspace":
        """Oriented span of an ordered independent family (order = orientation)."""
        return cls(Subspace(orthonormalize_oriented(
            np.column_stack([np.asarray(v, float) for v in vectors]))))

    @classmethod
    def standard(cls, n: int) -> "OrientedSubspace":
        return cls(Subspace.full(n))

    @property
    def ambient_dim(self) -> int:
        return self.base.ambient_dim

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def basis(self) -> np.ndarray:
        return self.base.basis

    def reverse(self) -> "OrientedSubspace":
        b = self.base.basis.copy()
        b[:, -1] = -b[:, -1]
        return OrientedSubspace(Subspace(b))

    def orientation_sign_vs(self, other: "OrientedSubspace") -> int:
        """+1 if the two orientations of the same subspace agree, else -1."""
        C = other.base.basis.T @ self.base.basis
        d = np.linalg.det(C)
        if abs(d) < RANK_TOL:
            raise ValueError("orientation comparison requires equal subspaces")
        return 1 if d > 0 else -1

    def same_as(self, other: "OrientedSubspace", tol: float = RANK_TOL) -> bool:
        return self.base.same_as(other.base, tol) and self.orientation_sign_vs(other) > 0


def forget(X: OrientedSubspace) -> Subspace:
    """The orientation-forgetting covering map."""
    return X.base


def oriented_polar(X: OrientedSubspace, f: BilinearForm,
                   ambient: OrientedSubspace) -> OrientedSubspace:
    """Partial lift of the polarity to oriented subspaces.

    The polar is oriented so that a positive basis of X followed by a
    positive basis of the result is a positive basis of the oriented
    ambient space.  Requires f restricted to X to be non-degenerate.
    """
    p, n, z = gram_signature(X.base, f)
    if z > 0:
        raise DegenerateRestriction(
            f"form is degenerate on the subspace (signature ({p},{n},{z}))")
    Y = polar(X.base, f)
    M = ambient.basis.T @ np.hstack([X.base.basis, Y.basis])
    d = np.linalg.det(M)
    if abs(d) < RANK_TOL:
        raise DegenerateFrame("X + polar(X) does not span the ambient space")
    if d < 0:
        b = Y.basis.copy()
        b[:, -1] = -b[:, -1]
        Y = Subspace(b)
    return OrientedSubspace(Y)


def manifold_orientation_sign(P: OrientedSubspace, s: np.ndarray,
                              tangent_basis: Sequence[np.ndarray]) -> int:
    """Orientation sign of (s, tangent_basis) inside a 4-dimensional P.

    Returns the sign of det[s, w1, w2, w3] in coordinates of a positive
    basis of P.  This is the boundary-orientation rule with s playing the
    outward direction; for odd projective dimension the sign descends to
    projective points.
    """
    if P.dim != 4:
        raise ValueError("orientation sign is defined for 4-dimensional P only")
    if len(tangent_basis) != 3:
        raise ValueError("tangent basis must have exactly 3 vectors")
    cols = np.column_stack([np.asarray(s, float)] +
                           [np.asarray(w, float) for w in tangent_basis])
    norms = np.linalg.norm(cols, axis=0)
    if np.any(norms == 0.0):
        raise DegenerateFrame("zero vector in frame")
    C = (P.basis.T @ cols) / norms
    d = np.linalg.det(C)
    if abs(d) < SIGN_CANON_TOL:
        raise DegenerateFrame("frame does not span P")
    return 1 if d > 0 else -1


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """Point of a real projective space: unit ray with canonical sign."""

    ray: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.ray, dtype=float)
        n = np.linalg.norm(v)
        if n == 0.0:
            raise ValueError("projective point needs a nonzero vector")
        v = v / n
        for x in v:
            if abs(x) > SIGN_CANON_TOL:
                if x < 0:
                    v = -v
                break
        v.setflags(write=False)
        object.__setattr__(self, "ray", v)

    @property
    def dim(self) -> int:
        return self.ray.shape[0]

    def distance(self, other: "ProjPoint") -> float:
        d1 = np.linalg.norm(self.ray - other.ray)
        d2 = np.linalg.norm(self.ray + other.ray)
        return float(min(d1, d2))

    def same_as(self, other: "ProjPoint", tol: float = 1e-9) -> bool:
        return self.distance(other) < tol
