"""Exact convex polygons over the rationals.

Everything here is :class:`fractions.Fraction` arithmetic; nothing rounds.
Polygons may be degenerate (a segment or a single point), which is how the
segments ``[2, 2+e] x {0}`` and friends are tracked.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vertex = tuple  # (Fraction, Fraction)


def _q(v) -> Fraction:
    if isinstance(v, float):
        raise TypeError("exact geometry needs rationals, not floats")
    return Fraction(v)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable) -> tuple:
    """Counterclockwise hull without collinear points (monotone chain)."""
    pts = sorted({(_q(x), _q(y)) for x, y in points})
    if len(pts) <= 2:
        return tuple(pts)
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return (hull[0],)
    return tuple(hull)


@dataclass(frozen=True)
class ConvexPolygon:
    vertices: tuple

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("empty polygon")
        verts = tuple((_q(x), _q(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if not is_convex_ccw(verts):
            raise ValueError(f"vertices are not in counterclockwise convex position: {verts}")

    @classmethod
    def from_points(cls, points) -> "ConvexPolygon":
        return cls(convex_hull(points))

    @classmethod
    def rect(cls, x0, x1, y0, y1) -> "ConvexPolygon":
        return cls.from_points([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])

    @classmethod
    def square(cls, m: int, n: int) -> "ConvexPolygon":
        """C_{m,n} = [2m, 2m+2] x [2n, 2n+2]."""
        return cls.rect(2 * m, 2 * m + 2, 2 * n, 2 * n + 2)

    @classmethod
    def segment(cls, p, q) -> "ConvexPolygon":
        return cls.from_points([p, q])

    @property
    def dimension(self) -> int:
        return min(len(self.vertices) - 1, 2)

    def bbox(self):
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return min(xs), max(xs), min(ys), max(ys)

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)


def is_convex_ccw(verts: Sequence) -> bool:
    n = len(verts)
    if n == 1:
        return True
    if n == 2:
        return verts[0] != verts[1]
    for i in range(n):
        if verts[i] == verts[(i + 1) % n]:
            return False
        if _cross(verts[i], verts[(i + 1) % n], verts[(i + 2) % n]) <= 0:
            return False
    return True


def poly_area(poly: ConvexPolygon) -> Fraction:
    v = poly.vertices
    if len(v) < 3:
        return Fraction(0)
    s = sum(v[i][0] * v[(i + 1) % len(v)][1] - v[(i + 1) % len(v)][0] * v[i][1]
            for i in range(len(v)))
    return abs(s) / 2


def diameter_sq(poly: ConvexPolygon) -> Fraction:
    v = poly.vertices
    return max(((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2 for a in v for b in v),
               default=Fraction(0))


# -- half-plane clipping -------------------------------------------------------
# A half-plane is (a, b, c) meaning a*x + b*y <= c.

def clip_halfplane(poly: ConvexPolygon | None, hp) -> ConvexPolygon | None:
    """Intersection of a (possibly degenerate) convex polygon with a closed half-plane."""
    if poly is None:
        return None
    a, b, c = hp
    verts = poly.vertices

    def val(p):
        return a * p[0] + b * p[1] - c

    if len(verts) == 1:
        return poly if val(verts[0]) <= 0 else None
    ring = verts if len(verts) > 2 else (verts[0], verts[1])
    out = []
    m = len(ring)
    for i in range(m):
        p, q = ring[i], ring[(i + 1) % m]
        fp, fq = val(p), val(q)
        if fp <= 0:
            out.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    if not out:
        return None
    return ConvexPolygon.from_points(out)


def halfplanes(poly: ConvexPolygon) -> list:
    """Closed half-planes whose intersection is the (full-dimensional) polygon."""
    v = poly.vertices
    if len(v) < 3:
        raise ValueError("half-plane description needs a 2D polygon")
    hps = []
    for i in range(len(v)):
        p, q = v[i], v[(i + 1) % len(v)]
        # interior is to the left of p->q:  (q-p) x (r-p) >= 0
        a = q[1] - p[1]
        b = -(q[0] - p[0])
        hps.append((a, b, a * p[0] + b * p[1]))
    return hps


def intersect(poly: ConvexPolygon, region: ConvexPolygon) -> ConvexPolygon | None:
    out = poly
    for hp in halfplanes(region):
        out = clip_halfplane(out, hp)
        if out is None:
            return None
    return out


def difference(poly: ConvexPolygon, region: ConvexPolygon) -> list[ConvexPolygon]:
    """Convex pieces covering ``poly`` minus the interior of ``region``.

    Pieces of lower dimension than ``poly`` (boundary slivers) are dropped, so
    the result is empty exactly when ``region`` covers ``poly`` up to a null
    set of poly's own dimension.
    """
    dim = poly.dimension
    pieces = []
    rest = poly
    for a, b, c in halfplanes(region):
        outside = clip_halfplane(rest, (-a, -b, -c))
        # a piece lying on the clipping line stays in `rest`
        if outside is not None and outside.dimension == dim and any(
                a * x + b * y != c for x, y in outside.vertices):
            pieces.append(outside)
        rest = clip_halfplane(rest, (a, b, c))
        if rest is None:
            break
    return pieces


def split_horizontal(poly: ConvexPolygon, y0=0):
    """Pieces of ``poly`` in ``y >= y0`` and ``y <= y0`` (None when empty)."""
    upper = clip_halfplane(poly, (0, -1, -Fraction(y0)))
    lower = clip_halfplane(poly, (0, 1, Fraction(y0)))
    return upper, lower


def affine_image(poly: ConvexPolygon, matrix, offset) -> ConvexPolygon:
    (m00, m01), (m10, m11) = matrix
    ox, oy = offset
    return ConvexPolygon.from_points(
        [(m00 * x + m01 * y + ox, m10 * x + m11 * y + oy) for x, y in poly.vertices])
