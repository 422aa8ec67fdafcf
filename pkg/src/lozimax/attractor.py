"""Strange-attractor tooling: parameter checks, trapping triangles, point clouds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from .maps import (DEFAULT_GUARD, DomainError, Formulation, LoziParams, Point,
                   Status, iterate, lozi_step)


class DegenerateParameters(ValueError):
    pass


@dataclass(frozen=True)
class MisiurewiczReport:
    c1: bool
    c2: bool
    c3: bool
    c4: bool
    c5: bool

    @property
    def overall(self) -> bool:
        return self.c1 and self.c2 and self.c3 and self.c4 and self.c5

    def to_dict(self):
        return {"c1": self.c1, "c2": self.c2, "c3": self.c3, "c4": self.c4,
                "c5": self.c5, "overall": self.overall}


def misiurewicz_check(a: float, b: float) -> MisiurewiczReport:
    """The five parameter inequalities under which the Lozi attractor is strange."""
    return MisiurewiczReport(
        c1=0 < b < 1,
        c2=a > b + 1,
        c3=2 * a + b < 4,
        c4=b < (a * a - 1) / (2 * a + 1),
        c5=math.sqrt(2) * a > b + 2,
    )


@dataclass(frozen=True)
class TrappingTriangle:
    fixed_point: Point
    I: Point
    FI: Point
    FFI: Point

    @property
    def vertices(self):
        return (self.I, self.FI, self.FFI)

    def to_dict(self):
        return {k: [getattr(self, k).x, getattr(self, k).y]
                for k in ("fixed_point", "I", "FI", "FFI")}


def _sys1(params: LoziParams, p) -> Point:
    return lozi_step(params, Formulation.SYS1, p)


def trapping_triangle(a: float, b: float) -> TrappingTriangle:
    """Triangle I, F(I), F^2(I) for ``F(x, y) = (1 - a|x| + y, b x)``.

    I is where the unstable manifold of the fixed point in x > 0 first meets
    the x-axis.
    """
    d = 1 + a - b
    if d == 0:
        raise DegenerateParameters("1 + a - b = 0")
    disc = a * a + 4 * b
    if disc < 0:
        raise DegenerateParameters("a^2 + 4b < 0, no real unstable direction")
    params = LoziParams(a, b)
    I = Point((2 + a + math.sqrt(disc)) / (2 * d), 0.0)
    FI = _sys1(params, I)
    FFI = _sys1(params, FI)
    return TrappingTriangle(Point(1 / d, b / d), I, FI, FFI)


def _edge_distances(verts: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Signed distances of pts outside each edge of a CCW triangle (shape (n, 3))."""
    out = []
    for i in range(3):
        p, q = verts[i], verts[(i + 1) % 3]
        e = q - p
        cross = e[0] * (pts[:, 1] - p[1]) - e[1] * (pts[:, 0] - p[0])
        out.append(-cross / math.hypot(*e))
    return np.stack(out, axis=1)


class Surd:
    """Exact number ``r + s*sqrt(D)`` with rational r, s and a fixed rational D >= 0."""

    __slots__ = ("r", "s", "D")

    def __init__(self, r, s=0, D=0):
        self.r, self.s, self.D = Fraction(r), Fraction(s), Fraction(D)

    def _lift(self, o):
        return o if isinstance(o, Surd) else Surd(o, 0, self.D)

    def __add__(self, o):
        o = self._lift(o)
        return Surd(self.r + o.r, self.s + o.s, self.D)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.r, -self.s, self.D)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        return Surd(self.r * o.r + self.s * o.s * self.D, self.r * o.s + self.s * o.r, self.D)

    __rmul__ = __mul__

    def sign(self) -> int:
        r, s = self.r, self.s
        if s == 0 or self.D == 0:
            return (r > 0) - (r < 0)
        if r >= 0 and s >= 0:
            return 1
        if r <= 0 and s <= 0:
            return -1
        diff = r * r - s * s * self.D
        sgn = (diff > 0) - (diff < 0)
        return sgn if r > 0 else -sgn

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.r) + float(self.s) * math.sqrt(self.D)


def _rational(v) -> Fraction:
    # decimal literals such as 1.7 are read as the decimal they spell
    return Fraction(repr(v)) if isinstance(v, float) else Fraction(v)


def exact_trapping_vertices(a, b):
    """I, F(I), F^2(I) as exact surds over Q(sqrt(a^2 + 4b))."""
    a, b = _rational(a), _rational(b)
    d = 1 + a - b
    if d == 0:
        raise DegenerateParameters("1 + a - b = 0")
    D = a * a + 4 * b
    I = (Surd((2 + a) / (2 * d), 1 / (2 * d), D), Surd(0, 0, D))
    FI = _surd_step(a, b, I)
    return I, FI, _surd_step(a, b, FI)


def _surd_step(a, b, p):
    x, y = p
    return (1 - a * abs(x) + y, b * x)


def _cross_surd(p, q, x):
    return (q[0] - p[0]) * (x[1] - p[1]) - (q[1] - p[1]) * (x[0] - p[0])


def _grid(density: int):
    s, t = np.meshgrid(np.linspace(0, 1, density), np.linspace(0, 1, density))
    i, j = np.meshgrid(np.arange(density), np.arange(density))
    s, t, i, j = s.ravel(), t.ravel(), i.ravel(), j.ravel()
    fold = s + t > 1
    s[fold], t[fold] = 1 - s[fold], 1 - t[fold]
    i[fold], j[fold] = density - 1 - i[fold], density - 1 - j[fold]
    return s, t, i, j


def verify_trapping(tri: TrappingTriangle, params: LoziParams, density: int,
                    *, exact: bool = True):
    """Sample ``density**2`` points of the triangle and map them once.

    Returns ``(ok, max_violation)`` where max_violation is the largest
    distance of an image point outside the closed triangle (<= 0 when all
    images land inside).  Sampling only; this is not a proof.

    The triangle built by :func:`trapping_triangle` is mapped onto its own
    boundary along part of one edge, so a pure float test sees rounding noise
    of either sign there.  With ``exact=True`` every sample the float screen
    cannot place clearly inside or outside is re-checked in exact arithmetic over
    Q(sqrt(a^2 + 4b)), with a and b read as the decimals they spell.
    """
    if density < 2:
        raise ValueError("density must be >= 2")
    v = np.array([[p.x, p.y] for p in tri.vertices], dtype=float)
    area2 = (v[1, 0] - v[0, 0]) * (v[2, 1] - v[0, 1]) - (v[1, 1] - v[0, 1]) * (v[2, 0] - v[0, 0])
    if area2 == 0:
        return True, 0.0
    order = [0, 1, 2] if area2 > 0 else [2, 1, 0]
    v = v[order]
    s, t, i, j = _grid(density)
    # weights (1-s-t, s, t) reproduce the corners exactly
    pts = (1 - s - t)[:, None] * v[0] + s[:, None] * v[1] + t[:, None] * v[2]
    x, y = pts[:, 0], pts[:, 1]
    img = np.stack([1 - params.a * np.abs(x) + y, params.b * x], axis=1)
    dist = _edge_distances(v, img).max(axis=1)
    if not exact:
        worst = float(dist.max())
        return worst <= 0, worst
    ref = trapping_triangle(params.a, params.b)
    if not np.allclose(v, np.array([[p.x, p.y] for p in ref.vertices])[order], rtol=0, atol=1e-12):
        raise ValueError("exact re-check needs the trapping triangle of these parameters")
    sv = [exact_trapping_vertices(params.a, params.b)[k] for k in order]
    a, b = _rational(params.a), _rational(params.b)
    n = density - 1
    edges = [(sv[k], sv[(k + 1) % 3]) for k in range(3)]
    lengths = [math.hypot(float(q[0] - p[0]), float(q[1] - p[1])) for p, q in edges]
    screen = 1e-9 * max(1.0, float(np.abs(v).max()))
    for k in np.nonzero(np.abs(dist) <= screen)[0]:
        ws, wt = Fraction(int(i[k]), n), Fraction(int(j[k]), n)
        w0 = 1 - ws - wt
        P = tuple(w0 * sv[0][c] + ws * sv[1][c] + wt * sv[2][c] for c in range(2))
        Q = _surd_step(a, b, P)
        crosses = [_cross_surd(p, q, Q) for p, q in edges]
        if any(c.sign() < 0 for c in crosses):
            dist[k] = max(-float(c) / L for c, L in zip(crosses, lengths))
        else:
            dist[k] = min(max(-float(c) / L for c, L in zip(crosses, lengths)), 0.0)
    worst = float(dist.max()) + 0.0
    return worst <= 0, worst


@dataclass(frozen=True)
class PointCloud:
    params: object
    burn_in: int
    points: tuple
    bounded: bool
    final_state: Point | None = None

    def array(self) -> np.ndarray:
        return np.array([[float(p[0]), float(p[1])] for p in self.points], dtype=float)

    def __len__(self):
        return len(self.points)


def sample_attractor(stepper, initial, burn: int, samples: int,
                     guard: float = DEFAULT_GUARD, *, exact: bool = False) -> PointCloud:
    """Iterate `burn` steps, then keep the next `samples` states.

    A guard trip stops the orbit early with ``bounded=False``; the last state
    reached is kept in ``final_state`` even when it falls inside the burn-in.
    """
    if burn < 0 or samples < 0:
        raise ValueError("burn and samples must be nonnegative")
    orbit = iterate(stepper, initial, burn + samples, exact=exact, guard=guard)
    if orbit.termination.status is Status.DOMAIN_ERROR:
        raise DomainError(f"state left the domain at step {orbit.termination.step}")
    bounded = orbit.termination.status is Status.COMPLETED
    return PointCloud(stepper, burn, tuple(orbit.points[burn + 1:]), bounded,
                      orbit.points[-1])


def box_count(cloud, grid: float) -> int:
    """Number of grid x grid boxes (anchored at the origin) hit by the cloud."""
    if grid <= 0:
        raise ValueError("grid size must be positive")
    pts = cloud.array() if isinstance(cloud, PointCloud) else np.asarray(cloud, dtype=float)
    if len(pts) == 0:
        raise ValueError("empty cloud")
    boxes = np.floor(pts / grid).astype(np.int64)
    return len(np.unique(boxes, axis=0))


def hausdorff_distance(a, b, subsample: int = 1000, seed: int = 0) -> float:
    """Symmetric Hausdorff distance estimated from subsamples.

    Up to `subsample` points of each cloud are drawn (PCG64, fixed seed) and
    their distance to the *full* other cloud is measured, so the estimate is
    not inflated by the spacing of the subsamples themselves.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    rng = np.random.Generator(np.random.PCG64(seed))

    def pick(x):
        if len(x) <= subsample:
            return x
        return x[rng.choice(len(x), subsample, replace=False)]

    d_ab = cKDTree(b).query(pick(a))[0].max()
    d_ba = cKDTree(a).query(pick(b))[0].max()
    return float(max(d_ab, d_ba))
