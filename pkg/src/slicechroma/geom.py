"""Simplex and sphere primitives with exact-rational and float64 backings.

Exact backing stores coordinates as :class:`fractions.Fraction`; float backing
uses numpy arrays. Anything built from squared distances alone (Cayley-Menger
determinant, volume, circumradius, inradius) stays exact on exact input.
Orthonormal bases need square roots, so sphere bases are always float64.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

TAU_GEOM = 1e-10
DEGENERATE_CM_FLOAT = 1e-24

Rational = Union[int, Fraction, str]


class GeometryError(ValueError):
    pass


class DimensionMismatchError(GeometryError):
    pass


class DegenerateSimplexError(GeometryError):
    pass


class EmptyAttachedSphereError(GeometryError):
    pass


class BackingMismatchError(GeometryError):
    pass


# ---------------------------------------------------------------------------
# scalars


def to_fraction(value: Rational) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string. Floats are refused."""
    if isinstance(value, bool):
        raise TypeError("bool is not a rational coordinate")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected int, Fraction or 'p/q' string, got {type(value).__name__}")


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def exact_sqrt(x: Fraction) -> Fraction | None:
    """Rational square root of ``x`` if it exists."""
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def sqrt_scalar(x):
    """Exact root when ``x`` is a rational square, float otherwise."""
    if isinstance(x, Fraction):
        r = exact_sqrt(x)
        if r is not None:
            return r
        return math.sqrt(x)
    return math.sqrt(max(float(x), 0.0))


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class SliceSpec:
    n: int
    k: int
    eps: Fraction

    def __post_init__(self):
        if self.n < 1 or self.k < 0:
            raise GeometryError(f"slice needs n >= 1 and k >= 0, got n={self.n}, k={self.k}")
        object.__setattr__(self, "eps", to_fraction(self.eps) if not isinstance(self.eps, float) else self.eps)
        if self.eps <= 0:
            raise GeometryError("slab width eps must be positive")

    @property
    def dim(self) -> int:
        return self.n + self.k

    def contains(self, point: "ExactPoint | FloatPoint", tol: float = 0.0) -> bool:
        if isinstance(point, ExactPoint):
            main, slab = point.main, point.slab
        else:
            main, slab = point.main, point.slab
        if len(main) != self.n or len(slab) != self.k:
            return False
        if isinstance(point, ExactPoint) and isinstance(self.eps, Fraction):
            return all(0 <= y <= self.eps for y in slab)
        e = float(self.eps)
        return all(-tol <= float(y) <= e + tol for y in slab)


@dataclass(frozen=True)
class ExactPoint:
    main: tuple[Fraction, ...]
    slab: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "main", tuple(to_fraction(c) for c in self.main))
        object.__setattr__(self, "slab", tuple(to_fraction(c) for c in self.slab))

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return self.main + self.slab

    @property
    def n(self) -> int:
        return len(self.main)

    @property
    def k(self) -> int:
        return len(self.slab)

    def __len__(self):
        return len(self.main) + len(self.slab)

    def to_float(self) -> "FloatPoint":
        return FloatPoint(np.array([float(c) for c in self.coords]), self.n, self.k)

    def translated(self, offset: Sequence[Rational]) -> "ExactPoint":
        off = [to_fraction(o) for o in offset]
        if len(off) != len(self):
            raise DimensionMismatchError("offset dimension differs from point dimension")
        c = [a + b for a, b in zip(self.coords, off)]
        return ExactPoint(tuple(c[: self.n]), tuple(c[self.n :]))


@dataclass(frozen=True, eq=False)
class FloatPoint:
    coords: np.ndarray
    dim_main: int
    dim_slab: int = 0

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=np.float64).copy()
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)
        if c.ndim != 1 or c.shape[0] != self.dim_main + self.dim_slab:
            raise DimensionMismatchError("coords length must equal dim_main + dim_slab")
        if not np.all(np.isfinite(c)):
            raise GeometryError("non-finite coordinate")

    @property
    def main(self) -> np.ndarray:
        return self.coords[: self.dim_main]

    @property
    def slab(self) -> np.ndarray:
        return self.coords[self.dim_main :]

    def __len__(self):
        return self.coords.shape[0]

    def __eq__(self, other):
        if not isinstance(other, FloatPoint):
            return NotImplemented
        return (
            self.dim_main == other.dim_main
            and self.dim_slab == other.dim_slab
            and np.array_equal(self.coords, other.coords)
        )

    __hash__ = None  # type: ignore[assignment]


# ---------------------------------------------------------------------------
# exact linear algebra


def _frac_det(mat: list[list[Fraction]]) -> Fraction:
    a = [row[:] for row in mat]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f:
                row_r, row_c = a[r], a[col]
                for c in range(col, n):
                    row_r[c] -= f * row_c[c]
    return det


def _frac_solve(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gauss-Jordan solve; raises DegenerateSimplexError when singular."""
    n = len(mat)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise DegenerateSimplexError("singular exact system")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [vr - f * vc for vr, vc in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# simplex


def _is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, str)) and not isinstance(x, bool)


class Simplex:
    """Two or more vertices of equal dimension, with cached squared distances.

    ``backing`` describes the vertex coordinates. ``sqdist`` may be exact
    even for float vertices (see :func:`regular_simplex`); every
    Cayley-Menger quantity is computed from ``sqdist``.
    """

    __slots__ = ("_vertices", "backing", "_sqdist", "n_main")

    def __init__(self, vertices, *, sqdist=None, n_main: int | None = None):
        verts = list(vertices) if not isinstance(vertices, np.ndarray) else vertices
        if len(verts) < 2:
            raise GeometryError(f"a simplex needs at least 2 vertices, got {len(verts)}")
        if isinstance(verts, np.ndarray):
            if verts.dtype == object:
                raise BackingMismatchError("object arrays are ambiguous; pass ExactPoints")
            arr = np.asarray(verts, dtype=np.float64)
            self.backing = "float"
            self._vertices = arr
        else:
            kinds = set()
            rows = []
            for v in verts:
                if isinstance(v, ExactPoint):
                    kinds.add("exact")
                    rows.append(v.coords)
                elif isinstance(v, FloatPoint):
                    kinds.add("float")
                    rows.append(v.coords)
                elif isinstance(v, np.ndarray):
                    kinds.add("float")
                    rows.append(v)
                else:
                    seq = list(v)
                    if all(_is_exact_scalar(c) for c in seq):
                        kinds.add("exact")
                        rows.append(tuple(to_fraction(c) for c in seq))
                    elif all(isinstance(c, (float, np.floating)) or _is_exact_scalar(c) for c in seq):
                        kinds.add("float")
                        rows.append(np.asarray([float(c) for c in seq]))
                    else:
                        raise TypeError(f"unsupported coordinate types in {seq!r}")
            if len(kinds) > 1:
                raise BackingMismatchError("simplex mixes exact and float vertices")
            dims = {len(r) for r in rows}
            if len(dims) != 1:
                raise DimensionMismatchError(f"vertex dimensions differ: {sorted(dims)}")
            self.backing = kinds.pop()
            if self.backing == "exact":
                self._vertices = tuple(tuple(r) for r in rows)
            else:
                self._vertices = np.asarray(np.vstack(rows), dtype=np.float64)
        if self.backing == "float":
            if self._vertices.ndim != 2:
                raise DimensionMismatchError("float vertices must form a 2-d array")
            if not np.all(np.isfinite(self._vertices)):
                raise GeometryError("non-finite vertex coordinate")
            self._vertices.setflags(write=False)
        self.n_main = n_main
        self._sqdist = sqdist

    # basic accessors -------------------------------------------------------

    @property
    def vertices(self):
        return self._vertices

    @property
    def count(self) -> int:
        return len(self._vertices)

    @property
    def order(self) -> int:
        """Simplex dimension m (vertex count minus one)."""
        return self.count - 1

    @property
    def dim(self) -> int:
        return len(self._vertices[0])

    @property
    def sqdist(self):
        if self._sqdist is None:
            self._sqdist = _sqdist_matrix(self._vertices, self.backing)
        return self._sqdist

    @property
    def metric_exact(self) -> bool:
        d = self.sqdist
        return not isinstance(d, np.ndarray)

    def as_float_array(self) -> np.ndarray:
        if self.backing == "float":
            return np.asarray(self._vertices)
        return np.array([[float(c) for c in row] for row in self._vertices])

    def to_float(self) -> "Simplex":
        return Simplex(self.as_float_array(), n_main=self.n_main)

    def face(self, indices: Sequence[int]) -> "Simplex":
        """Sub-simplex on the given vertex indices (keeps the metric backing)."""
        idx = list(indices)
        d = self.sqdist
        if isinstance(d, np.ndarray):
            sub = d[np.ix_(idx, idx)]
        else:
            sub = [[d[i][j] for j in idx] for i in idx]
        if self.backing == "float":
            verts = self._vertices[idx]
        else:
            verts = [self._vertices[i] for i in idx]
        if len(idx) < 2:
            raise GeometryError("a face needs at least 2 vertices")
        return Simplex(verts, sqdist=sub, n_main=self.n_main)

    def __repr__(self):
        return f"Simplex(count={self.count}, dim={self.dim}, backing={self.backing!r})"


def _sqdist_matrix(vertices, backing):
    if backing == "float":
        v = np.asarray(vertices)
        diff = v[:, None, :] - v[None, :, :]
        return np.einsum("ijk,ijk->ij", diff, diff)
    n = len(vertices)
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = sum((a - b) ** 2 for a, b in zip(vertices[i], vertices[j]))
            out[i][j] = out[j][i] = d
    return out


# ---------------------------------------------------------------------------
# Cayley-Menger


def cayley_menger_matrix(s: Simplex):
    """Bordered matrix [[0, 1^T], [1, D]] of squared pairwise distances."""
    d = s.sqdist
    n = s.count
    if isinstance(d, np.ndarray):
        c = np.ones((n + 1, n + 1))
        c[0, 0] = 0.0
        c[1:, 1:] = d
        return c
    c = [[Fraction(1)] * (n + 1) for _ in range(n + 1)]
    c[0][0] = Fraction(0)
    for i in range(n):
        for j in range(n):
            c[i + 1][j + 1] = d[i][j]
    return c


def cayley_menger_det(s: Simplex):
    c = cayley_menger_matrix(s)
    if isinstance(c, np.ndarray):
        return float(np.linalg.det(c))
    return _frac_det(c)


def cm_volume_factor(m: int) -> int:
    """det(CM) = factor * V^2 for an m-simplex: (-1)^(m+1) 2^m (m!)^2."""
    return (-1) ** (m + 1) * 2**m * math.factorial(m) ** 2


def simplex_volume_sq(s: Simplex):
    """Squared m-volume; exact Fraction when the metric is exact."""
    det = cayley_menger_det(s)
    factor = cm_volume_factor(s.order)
    if isinstance(det, Fraction):
        return det / factor
    return det / factor


def _is_degenerate(det, s: "Simplex | None" = None) -> bool:
    """Exact zero test, or |det| below DEGENERATE_CM_FLOAT relative to L^(2m)
    (L the longest edge) so the test does not depend on the simplex's scale."""
    if isinstance(det, Fraction):
        return det == 0
    scale = 1.0
    if s is not None and s.count > 1:
        longest = float(np.max(np.asarray(s.sqdist, dtype=np.float64)))
        if longest > 0:
            scale = longest**s.order
    return abs(det) < DEGENERATE_CM_FLOAT * scale


def simplex_volume(s: Simplex):
    if s.count < 2:
        raise GeometryError("volume needs at least 2 vertices")
    det = cayley_menger_det(s)
    v2 = det / cm_volume_factor(s.order)
    if _is_degenerate(det, s):
        return Fraction(0) if isinstance(det, Fraction) else 0.0
    if isinstance(v2, Fraction):
        if v2 < 0:
            raise GeometryError("negative squared volume: distances are not Euclidean")
        return sqrt_scalar(v2)
    return math.sqrt(max(v2, 0.0))


# ---------------------------------------------------------------------------
# spheres


@dataclass(frozen=True, eq=False)
class SphereDescriptor:
    """Sphere ``{center + radius * sum(c_i b_i) : |c| = 1}`` over the rows b_i of ``basis``.

    ``radius_sq`` is exact when the construction was exact.
    """

    center: np.ndarray
    radius_sq: float | Fraction
    basis: np.ndarray
    exact_center: tuple[Fraction, ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        c = np.asarray(self.center, dtype=np.float64).copy()
        b = np.atleast_2d(np.asarray(self.basis, dtype=np.float64)).copy()
        if b.size == 0:
            b = np.zeros((0, c.shape[0]))
        c.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "basis", b)
        if self.radius_sq < 0:
            raise GeometryError("negative squared radius")
        if b.shape[0] and b.shape[1] != c.shape[0]:
            raise DimensionMismatchError("basis vectors and center differ in dimension")
        gram = b @ b.T
        if b.shape[0] and not np.allclose(gram, np.eye(b.shape[0]), atol=1e-9):
            raise GeometryError("sphere basis is not orthonormal")

    @property
    def radius(self):
        return sqrt_scalar(self.radius_sq)

    @property
    def sphere_dim(self) -> int:
        return self.basis.shape[0] - 1

    @property
    def ambient_dim(self) -> int:
        return self.center.shape[0]

    def point(self, local: np.ndarray) -> np.ndarray:
        """Map unit-norm local coordinates (length sphere_dim + 1) onto the sphere."""
        local = np.asarray(local, dtype=np.float64)
        return self.center + float(self.radius) * (local @ self.basis)

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        g = rng.standard_normal((count, self.basis.shape[0]))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        return self.center + float(self.radius) * (g @ self.basis)

    def contains(self, p: np.ndarray, tol: float = 1e-9) -> bool:
        p = np.asarray(p, dtype=np.float64)
        rel = p - self.center
        in_plane = rel @ self.basis.T
        off_plane = rel - in_plane @ self.basis
        return bool(
            np.linalg.norm(off_plane) <= tol
            and abs(np.linalg.norm(in_plane) - float(self.radius)) <= tol
        )


def _affine_directions(verts: np.ndarray) -> np.ndarray:
    return verts[1:] - verts[0]


def _orthonormal_rows(vectors: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    if vectors.shape[0] == 0:
        return vectors.reshape(0, vectors.shape[1] if vectors.ndim == 2 else 0)
    q, r = np.linalg.qr(vectors.T)
    diag = np.abs(np.diag(r))
    if np.any(diag <= tol * max(1.0, float(diag.max(initial=0.0)))):
        raise DegenerateSimplexError("vectors are linearly dependent")
    return q.T


def _orthonormal_complement(vectors: np.ndarray, dim: int) -> np.ndarray:
    if vectors.shape[0] == 0:
        return np.eye(dim)
    q, _ = np.linalg.qr(vectors.T, mode="complete")
    return q[:, vectors.shape[0] :].T


def _circumcenter_float(verts: np.ndarray) -> tuple[np.ndarray, float]:
    e = _affine_directions(verts)
    gram = e @ e.T
    rhs = 0.5 * np.einsum("ij,ij->i", e, e)
    lam = np.linalg.solve(gram, rhs)
    center = verts[0] + lam @ e
    r2 = float(np.mean(np.sum((verts - center) ** 2, axis=1)))
    return center, r2


def _circumcenter_exact(verts) -> tuple[tuple[Fraction, ...], Fraction]:
    v0 = verts[0]
    e = [[a - b for a, b in zip(v, v0)] for v in verts[1:]]
    gram = [[sum(x * y for x, y in zip(ei, ej)) for ej in e] for ei in e]
    rhs = [sum(x * x for x in ei) / 2 for ei in e]
    lam = _frac_solve(gram, rhs)
    center = tuple(v0[c] + sum(lam[i] * e[i][c] for i in range(len(e))) for c in range(len(v0)))
    r2 = sum((a - b) ** 2 for a, b in zip(center, v0))
    return center, r2


def q11_circumradius_sq(s: Simplex):
    """Circumradius squared from the inverse Cayley-Menger matrix.

    The (0, 0) entry of C^{-1} equals -2 r^2.
    """
    c = cayley_menger_matrix(s)
    if isinstance(c, np.ndarray):
        inv = np.linalg.inv(c)
        return -0.5 * float(inv[0, 0])
    n = len(c)
    e0 = [Fraction(1)] + [Fraction(0)] * (n - 1)
    col = _frac_solve(c, e0)
    return -col[0] / 2


def circumsphere(s: Simplex, tol: float = 1e-9) -> SphereDescriptor:
    """Circumscribed sphere inside the affine hull of the vertices.

    The centre solves the equidistance system; the inverse Cayley-Menger route
    is only a cross-check and must agree (exactly, or to ``tol`` relative).
    """
    det = cayley_menger_det(s)
    if _is_degenerate(det, s):
        raise DegenerateSimplexError("degenerate simplex has no circumsphere")
    fverts = s.as_float_array()
    if s.backing == "exact":
        center_x, r2 = _circumcenter_exact(s.vertices)
        center = np.array([float(c) for c in center_x])
    else:
        center, r2 = _circumcenter_float(fverts)
        center_x = None
        if s.metric_exact:
            r2 = q11_circumradius_sq(s)
    check = q11_circumradius_sq(s)
    if isinstance(r2, Fraction) and isinstance(check, Fraction):
        if r2 != check:
            raise GeometryError(f"circumradius mismatch: direct {r2} vs q11 {check}")
    elif abs(float(r2) - float(check)) > tol * max(1.0, abs(float(r2))):
        raise GeometryError(f"circumradius mismatch: direct {float(r2)!r} vs q11 {float(check)!r}")
    basis = _orthonormal_rows(_affine_directions(fverts))
    return SphereDescriptor(center, r2, basis, exact_center=center_x)


def circumradius(s: Simplex):
    return circumsphere(s).radius


def attached_sphere_points(points: np.ndarray, ambient_dim: int | None = None,
                           tol: float = TAU_GEOM, r2_exact: Fraction | None = None) -> SphereDescriptor:
    """Sphere of points at distance 1 from every row of ``points``.

    Works for any number of affinely independent points; see
    :func:`attached_sphere` for the simplex-level contract.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    count, dim = pts.shape
    ambient = dim if ambient_dim is None else ambient_dim
    if dim > ambient:
        raise GeometryError(f"points live in R^{dim}, larger than ambient R^{ambient}")
    if ambient < count:
        raise GeometryError(f"ambient dimension {ambient} too small for {count} points")
    if dim < ambient:
        pts = np.hstack([pts, np.zeros((count, ambient - dim))])
    center, r2 = _circumcenter_float(pts)
    if r2_exact is not None:
        if r2_exact >= 1:
            raise EmptyAttachedSphereError(f"empty attached sphere: circumradius^2 = {r2_exact} >= 1")
        r2 = float(r2_exact)
    elif r2 >= 1.0 - tol:
        raise EmptyAttachedSphereError(f"empty attached sphere: circumradius^2 = {r2!r} >= 1")
    directions = _affine_directions(pts)
    _orthonormal_rows(directions)  # independence check
    basis = _orthonormal_complement(directions, ambient)
    radius_sq = 1 - r2_exact if r2_exact is not None else 1.0 - r2
    return SphereDescriptor(center, radius_sq, basis)


def attached_sphere(s: Simplex, ambient_dim: int, tol: float = TAU_GEOM,
                    check_samples: int = 100, seed: int = 0) -> SphereDescriptor:
    """Attached sphere of a triangle or tetrahedron: radius sqrt(1 - r^2),
    dimension ``ambient_dim - vertex count``."""
    if s.count not in (3, 4):
        raise GeometryError("attached spheres are defined for 3 or 4 vertices")
    if _is_degenerate(cayley_menger_det(s), s):
        raise DegenerateSimplexError("degenerate simplex")
    r2_exact = None
    if s.metric_exact:
        r2_exact = q11_circumradius_sq(s)
    sph = attached_sphere_points(s.as_float_array(), ambient_dim, tol, r2_exact)
    if check_samples:
        verts = s.as_float_array()
        if verts.shape[1] < ambient_dim:
            verts = np.hstack([verts, np.zeros((verts.shape[0], ambient_dim - verts.shape[1]))])
        pts = sph.sample(check_samples, np.random.default_rng(seed))
        d = np.linalg.norm(pts[:, None, :] - verts[None, :, :], axis=2)
        worst = float(np.max(np.abs(d - 1.0)))
        if worst > tol:
            raise GeometryError(f"attached sphere sample off by {worst:.3e}")
    return sph


def regular_simplex(n: int, edge: float | None = None, *, edge_sq: Rational | None = None) -> Simplex:
    """n+1 points in R^n with all edges equal, centroid at the origin.

    Give ``edge_sq`` (rational) to get an exact cached metric; the coordinates
    themselves are float since they are irrational for most n.
    """
    if n < 1:
        raise GeometryError("n must be >= 1")
    if (edge is None) == (edge_sq is None):
        raise GeometryError("pass exactly one of edge or edge_sq")
    if edge_sq is not None:
        esq = to_fraction(edge_sq)
        if esq <= 0:
            raise GeometryError("edge must be positive")
        a = math.sqrt(esq)
    else:
        if edge <= 0:
            raise GeometryError("edge must be positive")
        a = float(edge)
        esq = None
    # centred standard simplex in R^{n+1}, expressed in an orthonormal basis of sum(x)=0
    m = n + 1
    centred = np.eye(m) - 1.0 / m
    q, _ = np.linalg.qr(centred[:, :n])
    coords = centred @ q * (a / math.sqrt(2.0))
    coords -= coords.mean(axis=0)
    sqdist = None
    if esq is not None:
        sqdist = [[Fraction(0) if i == j else esq for j in range(m)] for i in range(m)]
    return Simplex(coords, sqdist=sqdist, n_main=n)


def inradius(s: Simplex):
    """Radius of the inscribed sphere, m V / (sum of facet volumes).

    Exact (a Fraction) when the metric is exact, all facets have equal
    volume, and the result is a rational square root.
    """
    if s.count < 2:
        raise GeometryError("inradius needs at least 2 vertices")
    m = s.order
    det = cayley_menger_det(s)
    if _is_degenerate(det, s):
        raise DegenerateSimplexError("degenerate simplex has no inscribed sphere")
    v2 = det / cm_volume_factor(m)
    facets_sq = []
    for drop in range(s.count):
        idx = [i for i in range(s.count) if i != drop]
        if len(idx) == 1:
            facets_sq.append(Fraction(1) if isinstance(v2, Fraction) else 1.0)
        else:
            facets_sq.append(simplex_volume_sq(s.face(idx)))
    if isinstance(v2, Fraction) and len(set(facets_sq)) == 1:
        r2 = m * m * v2 / ((m + 1) ** 2 * facets_sq[0])
        return sqrt_scalar(r2)
    total = sum(math.sqrt(max(float(f), 0.0)) for f in facets_sq)
    return m * math.sqrt(max(float(v2), 0.0)) / total


def subspace_angle(basis_p, basis_p2) -> float:
    """Angle between span(basis_p) and span(basis_p2), in [0, pi/2].

    cos is the ratio of the Gram-volume of the projected vectors to the
    original Gram-volume. The sine is accumulated from principal-angle sines
    so that tiny angles keep full relative precision.
    """
    p = np.atleast_2d(np.asarray(basis_p, dtype=np.float64))
    p2 = np.atleast_2d(np.asarray(basis_p2, dtype=np.float64))
    if p.shape[1] != p2.shape[1]:
        raise DimensionMismatchError("bases live in different ambient spaces")
    g = np.linalg.det(p @ p.T)
    if not g > 1e-300:
        raise GeometryError("degenerate basis")
    q2 = _orthonormal_rows(p2)
    proj = (p @ q2.T) @ q2
    gp = max(float(np.linalg.det(proj @ proj.T)), 0.0)
    cos_phi = min(math.sqrt(gp / g), 1.0)
    q1 = _orthonormal_rows(p)
    if q1.shape[0] > q2.shape[0]:
        return math.pi / 2
    resid = q1 - (q1 @ q2.T) @ q2
    sines = np.clip(np.linalg.svd(resid, compute_uv=False), 0.0, 1.0)
    with np.errstate(divide="ignore"):
        sin2 = -math.expm1(float(np.sum(np.log1p(-(sines**2)))))
    sin_phi = math.sqrt(min(max(sin2, 0.0), 1.0))
    return math.atan2(sin_phi, cos_phi)


def equator(sph: SphereDescriptor, t: int, orientation_seed: int = 0) -> SphereDescriptor:
    """Seeded t-dimensional great subsphere (same centre, same radius)."""
    d = sph.sphere_dim
    if t < 0 or t >= d:
        raise GeometryError(f"equator dimension t={t} must satisfy 0 <= t < {d}")
    rng = np.random.default_rng(orientation_seed)
    g = rng.standard_normal((d + 1, d + 1))
    q, r = np.linalg.qr(g)
    q = q * np.sign(np.diag(r))
    new_basis = q[:, : t + 1].T @ sph.basis
    new_basis = _orthonormal_rows(new_basis)
    return SphereDescriptor(sph.center, sph.radius_sq, new_basis, exact_center=sph.exact_center)


def equator_points(sph: SphereDescriptor, count: int) -> np.ndarray:
    """Deterministic, evenly spread points on a sphere of dimension <= 2."""
    k = sph.sphere_dim
    if k == 0:
        return np.vstack([sph.point(np.array([1.0])), sph.point(np.array([-1.0]))])
    if k == 1:
        th = 2 * np.pi * np.arange(count) / count
        return np.array([sph.point(np.array([math.cos(a), math.sin(a)])) for a in th])
    if k == 2:
        # Fibonacci lattice
        i = np.arange(count) + 0.5
        z = 1 - 2 * i / count
        rad = np.sqrt(1 - z * z)
        phi = np.pi * (1 + 5**0.5) * i
        local = np.stack([rad * np.cos(phi), rad * np.sin(phi), z], axis=1)
        return sph.center + float(sph.radius) * (local @ sph.basis)
    raise GeometryError("deterministic point sets are provided for sphere_dim <= 2")
