"""Polytopes over the contract space: H-representations, vertex enumeration,
point hulls and the lower/upper bound equality test."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

FEAS_TOL = 1e-7
DEDUP_TOL = 1e-7
SINGULAR_TOL = 1e-10
DEGENERATE_TOL = 1e-12


class GeometryError(RuntimeError):
    """Internal inconsistency in the polytope machinery."""


@dataclass(frozen=True)
class ContractSpace:
    """Either the scaled simplex ``{p >= 0 : sum(p) <= m*B}`` or the box ``[0, B]^m``."""

    bound: float
    dim: int
    kind: str = "simplex"

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError("bound B must be at least 1")
        if self.kind not in ("simplex", "box"):
            raise ValueError(f"unknown contract space kind {self.kind!r}")

    def constraints(self) -> tuple[np.ndarray, np.ndarray]:
        """Facets as ``A p <= b`` (non-negativity included)."""
        m, B = self.dim, self.bound
        A = [-np.eye(m)]
        b = [np.zeros(m)]
        if self.kind == "simplex":
            A.append(np.ones((1, m)))
            b.append([m * B])
        else:
            A.append(np.eye(m))
            b.append(np.full(m, B))
        return np.vstack(A), np.concatenate(b)

    @property
    def n_facets(self) -> int:
        return self.dim + 1 if self.kind == "simplex" else 2 * self.dim

    @property
    def diameter(self) -> float:
        if self.kind == "simplex":
            return np.sqrt(2.0) * self.dim * self.bound
        return np.sqrt(self.dim) * self.bound


@dataclass(frozen=True, eq=False)
class Halfspace:
    """``{p : normal . p >= offset}``."""

    normal: np.ndarray
    offset: float
    degenerate: bool = False

    def __post_init__(self):
        normal = np.asarray(self.normal, dtype=float)
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", float(self.offset))
        if not self.degenerate and np.abs(normal).max(initial=0.0) < DEGENERATE_TOL:
            raise GeometryError("halfspace normal is the zero vector")

    def contains(self, p, tol: float = FEAS_TOL) -> bool:
        return bool(self.normal @ np.asarray(p) >= self.offset - tol)

    def to_dict(self) -> dict:
        return {"normal": self.normal.tolist(), "offset": self.offset}


def dedup(points, tol: float = DEDUP_TOL) -> list[np.ndarray]:
    kept: list[np.ndarray] = []
    for p in points:
        p = np.asarray(p, dtype=float)
        if not any(np.abs(p - q).max() <= tol for q in kept):
            kept.append(p)
    return kept


def vertices_of(A: np.ndarray, b: np.ndarray, tol: float = FEAS_TOL) -> list[np.ndarray]:
    """All vertices of ``{x : A x <= b}`` by trying every m-subset of rows."""
    rows, m = A.shape
    if rows < m:
        raise GeometryError("fewer bounding hyperplanes than dimensions")
    found = []
    for subset in itertools.combinations(range(rows), m):
        sub = A[list(subset)]
        if np.linalg.svd(sub, compute_uv=False)[-1] < SINGULAR_TOL:
            continue
        x = np.linalg.solve(sub, b[list(subset)])
        if np.all(A @ x <= b + tol):
            found.append(x)
    return dedup(found)


@dataclass(frozen=True, eq=False)
class Polytope:
    """A contract space cut by extra halfspaces, with a lazily filled vertex cache."""

    base: ContractSpace
    cuts: tuple = ()
    _cache: list = field(default_factory=list, repr=False)

    @property
    def dim(self) -> int:
        return self.base.dim

    def constraints(self) -> tuple[np.ndarray, np.ndarray]:
        A, b = self.base.constraints()
        if self.cuts:
            A = np.vstack([A] + [-h.normal[None, :] for h in self.cuts])
            b = np.concatenate([b, [-h.offset for h in self.cuts]])
        return A, b

    def vertices(self) -> list[np.ndarray]:
        if not self._cache:
            A, b = self.constraints()
            verts = vertices_of(A, b)
            # empty polytopes keep a sentinel so they are not re-enumerated
            self._cache.append(verts)
        return [v.copy() for v in self._cache[0]]

    def contains(self, p, tol: float = FEAS_TOL) -> bool:
        A, b = self.constraints()
        return bool(np.all(A @ np.asarray(p, dtype=float) <= b + tol))

    def intersect(self, h: Halfspace) -> "Polytope":
        if h.normal.shape != (self.dim,):
            raise ValueError("halfspace dimension mismatch")
        return Polytope(self.base, self.cuts + (h,))

    def to_dict(self) -> dict:
        return {
            "base": {"bound": self.base.bound, "dim": self.base.dim, "kind": self.base.kind},
            "cuts": [h.to_dict() for h in self.cuts],
        }


def enumerate_vertices(P: Polytope) -> list[np.ndarray]:
    return P.vertices()


def intersect(P: Polytope, h: Halfspace) -> Polytope:
    return P.intersect(h)


@dataclass(frozen=True, eq=False)
class PointHull:
    """Convex hull of a deduplicated list of generators (insertion order kept)."""

    points: tuple = ()

    def __len__(self):
        return len(self.points)

    def __bool__(self):
        return bool(self.points)

    def add(self, p) -> "PointHull":
        p = np.asarray(p, dtype=float)
        if self.points and p.shape != self.points[0].shape:
            raise ValueError("point dimension mismatch")
        if any(np.abs(p - q).max() <= DEDUP_TOL for q in self.points):
            return self
        return PointHull(self.points + (p.copy(),))

    def as_array(self) -> np.ndarray:
        return np.array(self.points)


def hull_add(L: PointHull, p) -> PointHull:
    return L.add(p)


def hull_equals_polytope(L: PointHull, U: Polytope, tol: float = DEDUP_TOL) -> bool:
    """True iff every vertex of ``U`` is a generator of ``L`` (assumes ``L`` inside ``U``)."""
    if not L:
        return False
    G = L.as_array()
    return all(np.abs(G - v).max(axis=1).min() <= tol for v in U.vertices())


def midpoint(p1, p2) -> np.ndarray:
    return (np.asarray(p1, dtype=float) + np.asarray(p2, dtype=float)) / 2.0


def l2_distance(p1, p2) -> float:
    return float(np.linalg.norm(np.asarray(p1, dtype=float) - np.asarray(p2, dtype=float)))


def lex_sorted(points) -> list[np.ndarray]:
    return sorted(points, key=lambda v: tuple(v))


def hull_contains(generators, queries, tol: float = 1e-6) -> np.ndarray:
    """Membership of each query row in the convex hull of ``generators``.

    Uses qhull facets when the hull is full-dimensional and falls back to a
    convex-combination LP per point otherwise.
    """
    G = np.atleast_2d(np.asarray(generators, dtype=float))
    Q = np.atleast_2d(np.asarray(queries, dtype=float))
    m = G.shape[1]
    if m == 1:
        return (Q[:, 0] >= G.min() - tol) & (Q[:, 0] <= G.max() + tol)
    if len(G) > m and np.linalg.matrix_rank(G[1:] - G[0], tol=1e-9) == m:
        from scipy.spatial import ConvexHull

        eq = ConvexHull(G).equations
        return np.all(Q @ eq[:, :-1].T + eq[:, -1] <= tol, axis=1)
    from .lp import maximize

    k = len(G)
    out = np.zeros(len(Q), dtype=bool)
    for i, q in enumerate(Q):
        # weights >= 0, sum to 1, combination within tol of q (L-inf)
        A = np.vstack([G.T, -G.T, np.ones((1, k)), -np.ones((1, k))])
        b = np.concatenate([q + tol, -(q - tol), [1.0], [-1.0]])
        out[i] = maximize(np.zeros(k), A, b).ok
    return out
