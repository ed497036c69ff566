"""Pluecker embedding of (oriented) lines of P3 into the Klein quadric.

Coordinate conventions, fixed once for the whole package:

* Pluecker coordinates of the line spanned by u, v in R^4 are the six
  2x2 minors p_ij = u_i v_j - u_j v_i in the order
  (p12, p13, p14, p23, p24, p34).
* The quadratic identity is q(p) = p12*p34 - p13*p24 + p14*p23; q vanishes
  exactly on decomposable vectors.
* The linear change T to diagonal coordinates is

      x1 = (p12 + p34)/sqrt2      x4 = (p12 - p34)/sqrt2
      x2 = (p14 + p23)/sqrt2      x5 = (p14 - p23)/sqrt2
      x3 = (p24 - p13)/sqrt2      x6 = (p24 + p13)/sqrt2

  and satisfies f(Tp, Tp) = 2 q(p) for the diagonal (3,3) form f.  This
  identity is the correctness contract of the transform and is enforced
  by the test suite.

An oriented line is canonically a *unit* f-null 6-vector in diagonal
coordinates; negation is orientation reversal, and d(L, M) = |x_L - x_M|
is the canonical metric (reversal is at distance 2).

Most functions broadcast over leading axes so that bulk conversions stay
in numpy.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .forms import KLEIN_FORM, ProjPoint, Subspace, polar

NULL_TOL = 1e-10
UNIT_TOL = 1e-12
DEP_TOL = 1e-12


class DependentVectors(ValueError):
    """The two spanning vectors are (numerically) linearly dependent."""


class NotNull(ValueError):
    """A vector that must lie on the Klein quadric is not f-null."""


_SQ2 = np.sqrt(2.0)

# to_diagonal as a matrix acting on (p12,p13,p14,p23,p24,p34)
_T = np.array([
    [1, 0, 0, 0, 0, 1],
    [0, 0, 1, 1, 0, 0],
    [0, -1, 0, 0, 1, 0],
    [1, 0, 0, 0, 0, -1],
    [0, 0, 1, -1, 0, 0],
    [0, 1, 0, 0, 1, 0],
], dtype=float) / _SQ2

_T_INV = np.linalg.inv(_T)


def pluecker(u, v) -> np.ndarray:
    """Pluecker vector of the ordered spanning pair (u, v) of a 2-subspace.

    Bilinear and alternating; raises DependentVectors when all minors
    vanish relative to |u||v|.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    p = np.stack([
        u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0],
        u[..., 0] * v[..., 2] - u[..., 2] * v[..., 0],
        u[..., 0] * v[..., 3] - u[..., 3] * v[..., 0],
        u[..., 1] * v[..., 2] - u[..., 2] * v[..., 1],
        u[..., 1] * v[..., 3] - u[..., 3] * v[..., 1],
        u[..., 2] * v[..., 3] - u[..., 3] * v[..., 2],
    ], axis=-1)
    scale = np.linalg.norm(u, axis=-1) * np.linalg.norm(v, axis=-1)
    bad = np.linalg.norm(p, axis=-1) <= DEP_TOL * np.maximum(scale, 1e-300)
    if np.any(bad):
        raise DependentVectors("spanning vectors are linearly dependent")
    return p


def pluecker_quadratic(p) -> np.ndarray:
    """q(p) = p12*p34 - p13*p24 + p14*p23."""
    p = np.asarray(p, dtype=float)
    return (p[..., 0] * p[..., 5] - p[..., 1] * p[..., 4]
            + p[..., 2] * p[..., 3])


def to_diagonal(p) -> np.ndarray:
    """Diagonal (3,3) coordinates of a Pluecker vector; f o T = 2 q."""
    return np.asarray(p, dtype=float) @ _T.T


def from_diagonal(x) -> np.ndarray:
    """Inverse of to_diagonal."""
    return np.asarray(x, dtype=float) @ _T_INV.T


def contraction_matrix(p) -> np.ndarray:
    """Matrix A(p) with A(p) w = w wedge p; its kernel is the line of p.

    Broadcasts to (..., 4, 4) over leading axes of p.
    """
    p = np.asarray(p, dtype=float)
    p12, p13, p14, p23, p24, p34 = (p[..., i] for i in range(6))
    z = np.zeros_like(p12)
    rows = [
        [p23, -p13, p12, z],
        [p24, -p14, z, p12],
        [p34, z, -p14, p13],
        [z, p34, -p24, p23],
    ]
    return np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)


@dataclass(frozen=True, eq=False)
class OrientedLine:
    """Oriented line of P3, canonically a unit f-null 6-vector."""

    klein: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.klein, dtype=float)
        n = np.linalg.norm(x)
        if abs(n - 1.0) > 1e-9:
            if n == 0.0:
                raise ValueError("zero Klein vector")
            x = x / n
        res = abs(KLEIN_FORM.eval(x, x))
        if res >= 1e-8:
            raise NotNull(f"Klein vector is not on the quadric (|f| = {res:.3e})")
        x.setflags(write=False)
        object.__setattr__(self, "klein", x)

    @classmethod
    def from_span(cls, u, v) -> "OrientedLine":
        return oriented_line_to_klein(u, v)

    def reverse(self) -> "OrientedLine":
        return OrientedLine(-self.klein)

    def distance(self, other: "OrientedLine") -> float:
        return float(np.linalg.norm(self.klein - other.klein))

    def unoriented(self) -> ProjPoint:
        return ProjPoint(self.klein)

    @cached_property
    def span(self) -> tuple[np.ndarray, np.ndarray]:
        """An ordered spanning pair (u, v) of the line in R^4."""
        return klein_to_oriented_line(self)

    def contains(self, x, tol: float = 1e-9) -> bool:
        u, v = self.span
        S = Subspace.span(u, v)
        return S.contains(np.asarray(x, float), tol)


def klein_vectors(lines) -> np.ndarray:
    """(n, 6) matrix of Klein vectors of a sequence of oriented lines."""
    return np.array([L.klein for L in lines], dtype=float)


def oriented_line_to_klein(u, v) -> OrientedLine:
    """Oriented line with positive ordered basis (u, v)."""
    x = to_diagonal(pluecker(u, v))
    return OrientedLine(x / np.linalg.norm(x))


def klein_batch(U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Unit Klein vectors of spanning pairs, batched: (n,4),(n,4) -> (n,6)."""
    x = to_diagonal(pluecker(U, V))
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def klein_to_oriented_line(line) -> tuple[np.ndarray, np.ndarray]:
    """Ordered spanning pair (u, v) with pluecker(u, v) a positive multiple
    of the line's Pluecker vector."""
    if isinstance(line, OrientedLine):
        x = line.klein
    else:
        x = np.asarray(line, dtype=float)
        x = x / np.linalg.norm(x)
        if abs(KLEIN_FORM.eval(x, x)) >= 1e-8:
            raise NotNull("input is not on the Klein quadric")
    U, V = span_batch(x[None, :])
    return U[0], V[0]


def span_batch(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Spanning pairs for a batch (n, 6) of unit null diagonal vectors.

    The pair (u, v) spans the kernel of the contraction matrix and is
    ordered so that pluecker(u, v) is a positive multiple of the input.
    """
    P = from_diagonal(X)
    A = contraction_matrix(P)
    _, _, vt = np.linalg.svd(A)
    U = vt[..., 2, :]
    V = vt[..., 3, :]
    q = pluecker(U, V)
    flip = np.sum(q * P, axis=-1) < 0.0
    U2 = np.where(flip[..., None], V, U)
    V2 = np.where(flip[..., None], U, V)
    return U2, V2


def point_star(x) -> Subspace:
    """Klein image of the pencil of lines through a point of P3.

    A totally isotropic 3-subspace in diagonal coordinates; a Klein point
    lies in it iff its line passes through x.
    """
    if isinstance(x, ProjPoint):
        x = x.ray
    x = np.asarray(x, dtype=float)
    if np.linalg.norm(x) == 0.0:
        raise ValueError("zero point")
    cols = []
    for i in range(4):
        e = np.zeros(4)
        e[i] = 1.0
        try:
            cols.append(to_diagonal(pluecker(x, e)))
        except DependentVectors:
            continue
    return Subspace.from_spanning(np.column_stack(cols))


def point_star_basis(X: np.ndarray) -> np.ndarray:
    """Batched spanning (not orthonormal) bases of point stars.

    X has shape (n, 4) with no zero rows; returns (n, 6, 4) whose column
    spans have rank 3.
    """
    n = X.shape[0]
    E = np.eye(4)
    cols = np.empty((n, 6, 4))
    for i in range(4):
        e = np.broadcast_to(E[i], (n, 4))
        p = np.stack([
            X[:, 0] * e[:, 1] - X[:, 1] * e[:, 0],
            X[:, 0] * e[:, 2] - X[:, 2] * e[:, 0],
            X[:, 0] * e[:, 3] - X[:, 3] * e[:, 0],
            X[:, 1] * e[:, 2] - X[:, 2] * e[:, 1],
            X[:, 1] * e[:, 3] - X[:, 3] * e[:, 1],
            X[:, 2] * e[:, 3] - X[:, 3] * e[:, 2],
        ], axis=-1)
        cols[:, :, i] = to_diagonal(p)
    return cols


def tangent_hyperplane(x) -> Subspace:
    """Tangent hyperplane of the Klein quadric at an f-null ray."""
    if isinstance(x, OrientedLine):
        v = x.klein
    elif isinstance(x, ProjPoint):
        v = x.ray
    else:
        v = np.asarray(x, dtype=float)
        v = v / np.linalg.norm(v)
    if abs(KLEIN_FORM.eval(v, v)) >= 1e-8:
        raise NotNull("tangent hyperplane needs a point on the quadric")
    return polar(Subspace.span(v), KLEIN_FORM)


def lines_intersect(L: OrientedLine, M: OrientedLine, tol: float = 1e-8) -> bool:
    """Two lines of P3 meet iff f vanishes between their Klein vectors."""
    return bool(abs(KLEIN_FORM.eval(L.klein, M.klein)) < tol)
