"""Regular spreads as quadric sections and their per-line orientation.

A regular spread of P3 is the intersection of the Klein quadric with a
4-dimensional subspace P of signature (1,3) or (3,1).  Orienting P orients
the spread as a manifold (boundary of the interior ball), and that manifold
orientation is pushed onto every individual spread line through the affine
chart s |-> (klein point of the spread line through s + v).  The derivative
of that chart is taken numerically; consistency across auxiliary choices is
an invariant enforced by the test suite, not by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np

from .forms import (KLEIN_FORM, RANK_TOL, BilinearForm, DegenerateFrame,
                    OrientedSubspace, ProjPoint, Subspace, gram_signature,
                    manifold_orientation_sign, orthonormalize_oriented)
from .klein import (OrientedLine, klein_to_oriented_line, oriented_line_to_klein,
                    pluecker, point_star, span_batch, to_diagonal)
from .sampling import halton_sphere, rng_for


class WrongSignature(ValueError):
    """The subspace does not cut the quadric in an elliptic section."""


class DegenerateMeet(ValueError):
    """A meet that must be a single Klein point has the wrong dimension."""


class DegenerateDerivative(RuntimeError):
    """The chart derivative stayed rank-deficient across all retries."""


class CenterOnLine(ValueError):
    """Perspectivity center lies on one of the two lines."""


class EmptySet(ValueError):
    """Hausdorff distance of an empty sample is undefined."""


@dataclass(frozen=True, eq=False)
class RegularSpread:
    """Spread K ∩ P for a 4-space P of signature (1,3) or (3,1)."""

    space: Subspace
    signature: tuple[int, int]

    def contains_klein(self, x, tol: float = 1e-8) -> bool:
        x = np.asarray(x, dtype=float)
        x = x / np.linalg.norm(x)
        return (self.space.residual(x) < tol
                and abs(KLEIN_FORM.eval(x, x)) < tol)


def spread_from_space(P: Subspace) -> RegularSpread:
    p, n, z = gram_signature(P, KLEIN_FORM)
    if (p, n) not in ((1, 3), (3, 1)) or z != 0:
        raise WrongSignature(
            f"need signature (1,3) or (3,1), got ({p},{n},{z})")
    return RegularSpread(P, (p, n))


@dataclass(frozen=True, eq=False)
class OrientedRegularSpread:
    """Regular spread together with an orientation of its 4-space."""

    space_plus: OrientedSubspace

    def __post_init__(self):
        # validates the signature eagerly
        spread_from_space(self.space_plus.base)

    @cached_property
    def spread(self) -> RegularSpread:
        return spread_from_space(self.space_plus.base)

    def reverse(self) -> "OrientedRegularSpread":
        return OrientedRegularSpread(self.space_plus.reverse())

    def same_as(self, other: "OrientedRegularSpread", tol: float = 1e-8) -> bool:
        return self.space_plus.same_as(other.space_plus, tol)


def _meet_klein_point(P: Subspace, x: np.ndarray) -> np.ndarray:
    """Unit basis vector (sign unspecified) of point_star(x) ∩ P."""
    A = point_star(x)
    M = np.hstack([A.basis, -P.basis])
    _, s, vt = np.linalg.svd(M)
    rank = int(np.sum(s > RANK_TOL * s[0]))
    nullity = M.shape[1] - rank
    if nullity != 1:
        raise DegenerateMeet(f"meet has dimension {nullity}, expected 1")
    coef = vt[-1, :A.dim]
    k = A.basis @ coef
    return k / np.linalg.norm(k)


def line_through(S: RegularSpread, x) -> Subspace:
    """The unique spread line (2-subspace of R^4) through a point of P3."""
    if isinstance(x, ProjPoint):
        x = x.ray
    x = np.asarray(x, dtype=float)
    if np.linalg.norm(x) == 0.0:
        raise ValueError("zero point")
    k = _meet_klein_point(S.space, x)
    u, v = klein_to_oriented_line(OrientedLine(k))
    return Subspace.span(u, v)


def quadric_orientation_sign(space_plus: OrientedSubspace, s: np.ndarray,
                             w2: np.ndarray, w3: np.ndarray,
                             f: BilinearForm = KLEIN_FORM) -> int:
    """Boundary orientation of the quadric S = K ∩ P at the null vector s.

    Returns +1 iff (w2, w3) is a positive tangent basis of the quadric,
    where the quadric bounds the interior ball of P and an outward vector
    has the exterior f-sign ((3,1): f > 0, (1,3): f < 0).
    """
    B = space_plus.basis
    G = f.gram(B)
    s_hat = B.T @ np.asarray(s, dtype=float)
    n_hat = G @ s_hat
    if np.linalg.norm(n_hat) < 1e-12:
        raise DegenerateFrame("null direction is degenerate for the form")
    w = np.linalg.eigvalsh(G)
    pos = int(np.sum(w > RANK_TOL * np.abs(w).max()))
    if pos == 1:        # type (1,3): exterior is the f < 0 side
        n_hat = -n_hat
    elif pos != 3:
        raise WrongSignature("oriented space is not of type (1,3) or (3,1)")
    n_vec = B @ n_hat
    return manifold_orientation_sign(space_plus, s, (n_vec, w2, w3))


def _aux_candidates(L: Subspace, max_retries: int):
    """Deterministic auxiliary vectors outside the 2-subspace L."""
    comp = np.linalg.svd(L.projector)[0][:, L.dim:]
    for j in range(comp.shape[1]):
        yield comp[:, j]
    rng = rng_for(7041)
    for _ in range(max_retries):
        v = rng.standard_normal(L.ambient_dim)
        w = v - L.project(v)
        n = np.linalg.norm(w)
        if n > 1e-6:
            yield v / np.linalg.norm(v)


def oriented_line_through(S: OrientedRegularSpread, x, *,
                          aux: Optional[np.ndarray] = None,
                          fd_step: float = 1e-5,
                          max_retries: int = 8) -> OrientedLine:
    """Spread line through x carrying the orientation induced by S.

    The ordered basis (u1, u2) of the line is positive when the chart
    pushforward (Dc u1, Dc u2) is a positive tangent basis of the quadric,
    with c(s) the Klein point of the spread line through s + v.  The
    derivative is central with one Richardson refinement; the output is
    independent of the auxiliary v and of the step within tolerance.
    """
    if isinstance(x, ProjPoint):
        x = x.ray
    P = S.spread.space
    L = line_through(S.spread, x)
    b1 = L.basis[:, 0]
    b2 = L.basis[:, 1]
    k0 = to_diagonal(pluecker(b1, b2))
    k0 = k0 / np.linalg.norm(k0)

    candidates = [aux] if aux is not None else list(_aux_candidates(L, max_retries))
    last_err: Optional[Exception] = None
    for v in candidates[:max_retries]:
        v = np.asarray(v, dtype=float)
        if np.linalg.norm(v - L.project(v)) < 1e-8 * np.linalg.norm(v):
            continue
        try:
            c0 = _meet_klein_point(P, v)

            def chart(s_vec: np.ndarray) -> np.ndarray:
                k = _meet_klein_point(P, s_vec + v)
                return k if k @ c0 >= 0.0 else -k

            D = []
            for u in (b1, b2):
                d_h = (chart(fd_step * u) - chart(-fd_step * u)) / (2 * fd_step)
                h2 = fd_step / 2
                d_h2 = (chart(h2 * u) - chart(-h2 * u)) / (2 * h2)
                D.append((4.0 * d_h2 - d_h) / 3.0)
            D1, D2 = D
            sv = np.linalg.svd(np.column_stack([D1, D2]), compute_uv=False)
            if sv[-1] < 1e-8 * max(sv[0], 1e-30):
                raise DegenerateDerivative("pushed-forward pair is rank-deficient")
            sign = quadric_orientation_sign(S.space_plus, c0, D1, D2)
        except (DegenerateDerivative, DegenerateFrame, DegenerateMeet) as err:
            last_err = err
            continue
        return OrientedLine(k0 if sign > 0 else -k0)
    raise DegenerateDerivative(f"no usable auxiliary vector found: {last_err}")


@dataclass(frozen=True, eq=False)
class AffineLine:
    """Line of the affine translation plane: spread element + translation."""

    direction: Subspace  # 2-dim subspace of R^4
    offset: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "offset", np.asarray(self.offset, dtype=float))

    def contains(self, y, tol: float = 1e-9) -> bool:
        d = np.asarray(y, dtype=float) - self.offset
        r = d - self.direction.project(d)
        return np.linalg.norm(r) <= tol * max(1.0, np.linalg.norm(d))

    def point(self, t: np.ndarray) -> np.ndarray:
        return self.offset + self.direction.basis @ np.asarray(t, dtype=float)


_BASE_PARAMS = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0),
                (-1.0, 0.5), (0.5, -1.0), (2.0, -0.5), (-1.5, -1.5)]


def perspectivity_transfer(S: RegularSpread, K: AffineLine, center: np.ndarray,
                           L: AffineLine, K_orient: OrientedSubspace,
                           fd_step: float = 1e-5) -> OrientedSubspace:
    """Transport an orientation of K to L through the central projection.

    The perspectivity y -> (y v center) ^ L is a homeomorphism of the
    2-sphere lines of the translation plane; its effect on orientation is
    read off the derivative at one regular base point.  Base points whose
    joining spread line is within angle 1e-6 of L's direction (image near
    the ideal point of L) are skipped in favor of the next candidate.
    """
    center = np.asarray(center, dtype=float)
    if K.contains(center) or L.contains(center):
        raise CenterOnLine("center must avoid both lines")

    def image(y: np.ndarray) -> np.ndarray:
        w = y - center
        M0 = line_through(S, w)
        A = np.hstack([M0.basis, -L.direction.basis])
        ab = np.linalg.solve(A, L.offset - center)
        return L.offset + L.direction.basis @ ab[2:]

    t1 = K_orient.basis[:, 0]
    t2 = K_orient.basis[:, 1]
    rng = rng_for(9260)
    params = _BASE_PARAMS + [tuple(rng.uniform(-2, 2, size=2)) for _ in range(8)]
    for t0 in params:
        y0 = K.point(np.asarray(t0))
        w = y0 - center
        if np.linalg.norm(w) < 1e-9:
            continue
        M0 = line_through(S, w)
        gap = np.linalg.norm(M0.projector - L.direction.projector, ord=2)
        if gap < 1e-6:      # image would sit at the ideal point of L
            continue
        D = []
        for t in (t1, t2):
            d_h = (image(y0 + fd_step * t) - image(y0 - fd_step * t)) / (2 * fd_step)
            h2 = fd_step / 2
            d_h2 = (image(y0 + h2 * t) - image(y0 - h2 * t)) / (2 * h2)
            D.append((4.0 * d_h2 - d_h) / 3.0)
        try:
            return OrientedSubspace(Subspace(orthonormalize_oriented(
                L.direction.projector @ np.column_stack(D))))
        except DegenerateFrame:
            continue
    raise DegenerateDerivative("no regular base point found on K")


@dataclass(frozen=True, eq=False)
class FiniteLineSample:
    """Finite set of oriented lines with the canonical unit-vector metric."""

    lines: tuple

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))

    def __len__(self) -> int:
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.array([L.klein for L in self.lines], dtype=float)


def _as_matrix(sample) -> tuple[np.ndarray, bool]:
    """(n, d) matrix of representatives and whether the metric is projective."""
    if isinstance(sample, FiniteLineSample):
        return sample.matrix, False
    items = list(sample)
    if not items:
        raise EmptySet("sample is empty")
    first = items[0]
    if isinstance(first, ProjPoint):
        return np.array([p.ray for p in items]), True
    if isinstance(first, np.ndarray):
        return np.array(items, dtype=float), False
    return np.array([L.klein for L in items]), False


def hausdorff_distance(A, B) -> float:
    """max{max_a d(a, B), max_b d(b, A)} with d(a, B) = min over B."""
    MA, projA = _as_matrix(A)
    MB, projB = _as_matrix(B)
    if MA.shape[0] == 0 or MB.shape[0] == 0:
        raise EmptySet("sample is empty")
    diff = MA[:, None, :] - MB[None, :, :]
    D = np.linalg.norm(diff, axis=-1)
    if projA or projB:
        Dp = np.linalg.norm(MA[:, None, :] + MB[None, :, :], axis=-1)
        D = np.minimum(D, Dp)
    return float(max(D.min(axis=1).max(), D.min(axis=0).max()))


def spread_sample(S: OrientedRegularSpread, n: int, seed: int) -> FiniteLineSample:
    """Deterministic low-discrepancy sample of n oriented spread lines."""
    if n < 1:
        raise ValueError("need n >= 1")
    pts = halton_sphere(n, 4, seed)
    return FiniteLineSample(tuple(oriented_line_through(S, p) for p in pts))
