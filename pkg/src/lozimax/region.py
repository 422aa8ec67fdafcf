"""Exact invariant-region certificates for the Lozi map with a = b.

The map is ``F(x, y) = (y, 1 - a|y| + a x)``, which is affine on each of the
half-planes ``y >= 0`` and ``y <= 0``.  Convex polygons are pushed through F
exactly (splitting along ``y = 0`` first), so containment and area claims
about images of squares ``C_{m,n} = [2m, 2m+2] x [2n, 2n+2]`` can be checked
without rounding.

For a = 1/2 the suite in :func:`verify_global_attraction_a_half` checks that
every square eventually falls into ``[0, 2]^2`` (where the dynamics is linear
and converges to a 2-cycle), except for slivers that shrink onto the 2-cycle
``(0, 2) <-> (2, 0)``; those are accepted once smaller than a tolerance eta.
"""

from __future__ import annotations

import enum
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .polygon import (ConvexPolygon, affine_image, diameter_sq, difference,
                      halfplanes, poly_area, split_horizontal)

HALF = Fraction(1, 2)
DEFAULT_ETA = Fraction(1, 2 ** 20)
A_HALF_ANCHORS = ((Fraction(0), Fraction(2)), (Fraction(2), Fraction(0)))


class OutOfFrame(ValueError):
    pass


# -- regions ------------------------------------------------------------------

@dataclass(frozen=True)
class Square:
    m: int
    n: int

    def polygon(self) -> ConvexPolygon:
        return ConvexPolygon.square(self.m, self.n)


@dataclass(frozen=True)
class TriangleLower:
    """{0 <= x, y <= 2, x + y <= 2}"""

    def polygon(self) -> ConvexPolygon:
        return ConvexPolygon.from_points([(0, 0), (2, 0), (0, 2)])


@dataclass(frozen=True)
class TriangleUpper:
    """{0 <= x, y <= 2, x + y >= 2}"""

    def polygon(self) -> ConvexPolygon:
        return ConvexPolygon.from_points([(2, 0), (2, 2), (0, 2)])


@dataclass(frozen=True)
class Rect:
    x0: Fraction
    x1: Fraction
    y0: Fraction
    y1: Fraction

    def polygon(self) -> ConvexPolygon:
        return ConvexPolygon.rect(self.x0, self.x1, self.y0, self.y1)


@dataclass(frozen=True)
class PolygonRegion:
    poly: ConvexPolygon

    def polygon(self) -> ConvexPolygon:
        return self.poly


@dataclass(frozen=True)
class Union:
    members: tuple


def level_region(t: int) -> Rect:
    """R_t, the union of C_{i,j} with |i|, |j| <= t."""
    return Rect(Fraction(-2 * t), Fraction(2 * t + 2), Fraction(-2 * t), Fraction(2 * t + 2))


def _contains_point(poly: ConvexPolygon, p) -> bool:
    if len(poly.vertices) < 3:
        raise ValueError("point containment needs a 2D region")
    return all(a * p[0] + b * p[1] <= c for a, b, c in halfplanes(poly))


def subtract_region(poly: ConvexPolygon, region) -> list[ConvexPolygon]:
    """Pieces of `poly` not covered by `region` (null slivers dropped)."""
    if isinstance(region, Union):
        rest = [poly]
        for member in region.members:
            rest = [r for piece in rest for r in subtract_region(piece, member)]
            if not rest:
                break
        return rest
    return difference(poly, region.polygon())


def region_contains(region, poly: ConvexPolygon) -> bool:
    if isinstance(region, Union):
        return not subtract_region(poly, region)
    target = region.polygon()
    return all(_contains_point(target, v) for v in poly.vertices)


# -- the map on polygons --------------------------------------------------------

def branch_maps(a, b=None):
    """Affine pieces ``(matrix, offset)`` of F on y >= 0 and y <= 0."""
    a = Fraction(a)
    b = a if b is None else Fraction(b)
    upper = (((0, 1), (b, -a)), (0, 1))
    lower = (((0, 1), (b, a)), (0, 1))
    return upper, lower


def poly_image(a, poly: ConvexPolygon, b=None) -> list[ConvexPolygon]:
    """Exact image of a convex polygon, as at most two convex pieces."""
    upper, lower = branch_maps(a, b)
    ys = [v[1] for v in poly.vertices]
    if min(ys) >= 0:
        return [affine_image(poly, *upper)]
    if max(ys) <= 0:
        return [affine_image(poly, *lower)]
    up, lo = split_horizontal(poly, 0)
    return [affine_image(up, *upper), affine_image(lo, *lower)]


def point_image(a, p, b=None):
    a = Fraction(a)
    b = a if b is None else Fraction(b)
    x, y = p
    return (y, 1 - a * max(y, -y) + b * x)


# -- reports --------------------------------------------------------------------

class Verdict(enum.Enum):
    CERTIFIED = "Certified"
    FAILED = "Failed"


@dataclass
class VerificationReport:
    lemma: str
    status: Verdict
    steps_used: int = 0
    residual_pieces: list = field(default_factory=list)
    witness: ConvexPolygon | None = None
    detail: str = ""

    @property
    def certified(self) -> bool:
        return self.status is Verdict.CERTIFIED

    def to_dict(self) -> dict:
        def verts(p):
            return [[_fmt(x), _fmt(y)] for x, y in p.vertices]
        return {
            "lemma": self.lemma,
            "status": self.status.value,
            "steps_used": self.steps_used,
            "residual_pieces": [verts(p) for p in self.residual_pieces],
            "witness": verts(self.witness) if self.witness is not None else None,
            "detail": self.detail,
        }


def _fmt(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


# -- worklist iteration -----------------------------------------------------------

def _is_small(piece: ConvexPolygon, eta: Fraction, anchors) -> bool:
    eta2 = eta * eta
    if diameter_sq(piece) >= eta2:
        return False
    for ax, ay in anchors:
        if all((x - ax) ** 2 + (y - ay) ** 2 < eta2 for x, y in piece.vertices):
            return True
    return False


def advance_until_contained(a, start: ConvexPolygon, target, max_steps: int,
                            eta: Fraction = DEFAULT_ETA, *, anchors=None, b=None,
                            lemma: str = "advance", trace: Callable | None = None
                            ) -> VerificationReport:
    """Push `start` forward until every piece has landed in `target`.

    At each step the parts covered by `target` are retired and the rest is
    mapped again.  Certified when nothing is left, or when every surviving
    piece has diameter < eta and all its vertices lie within eta of one of
    the `anchors` (by default the 2-cycle endpoints (0,2), (2,0) when
    a = 1/2, none otherwise).  ``trace(step, piece)`` sees every live piece.
    """
    if eta <= 0:
        raise ValueError("eta must be positive")
    eta = Fraction(eta)
    if anchors is None:
        anchors = A_HALF_ANCHORS if Fraction(a) == HALF and b is None else ()
    work = subtract_region(start, target)
    step = 0
    while True:
        if trace is not None:
            for piece in work:
                trace(step, piece)
        if not work:
            return VerificationReport(lemma, Verdict.CERTIFIED, step)
        big = [p for p in work if not _is_small(p, eta, anchors)]
        if not big:
            return VerificationReport(lemma, Verdict.CERTIFIED, step, residual_pieces=work,
                                      detail=f"{len(work)} piece(s) below eta near the 2-cycle")
        if step >= max_steps:
            return VerificationReport(lemma, Verdict.FAILED, step, residual_pieces=work,
                                      witness=big[0],
                                      detail=f"{len(big)} piece(s) alive after {step} steps")
        step += 1
        work = [r for piece in work for img in poly_image(a, piece, b)
                for r in subtract_region(img, target)]


# -- one-step predictions for the frame squares ----------------------------------

def predicted_image_squares(m: int, n: int):
    """Lemma tag and predicted target squares for F(C_{m,n}) at a = 1/2.

    Each square on the frame of level t = max(|m|, |n|) is assigned to one
    prediction table; the corner squares C_{-t,-t} are handled by
    :func:`_corner_chain` and return ``("F", None)``.
    """
    t = max(abs(m), abs(n))
    if t == 0:
        raise OutOfFrame("C_{0,0} is not on any frame")
    i, k = m, n
    if k == t:  # top row
        if i >= 0:
            j = t - i
            tag = f"A(a) j={j}"
            out = [(t, -j // 2)] if j % 2 == 0 else [(t, (-j - 1) // 2), (t, (-j + 1) // 2)]
        else:
            j = -i
            tag = f"A-B j={j}"
            s = t + j
            out = [(t, -s // 2)] if s % 2 == 0 else [(t, (-s - 1) // 2), (t, (-s + 1) // 2)]
        return tag, out
    if i == t:  # right column below the top corner
        if k >= 0:
            j = k
            d = t - j
            tag = f"A(b) j={j}"
            out = [(j, d // 2)] if d % 2 == 0 else [(j, (d - 1) // 2), (j, (d + 1) // 2)]
        else:
            j = -k
            d = t - j
            tag = f"B j={j}"
            out = [(-j, (d + 1) // 2)] if d % 2 == 1 else [(-j, d // 2), (-j, (d + 2) // 2)]
        return tag, out
    if k == -t:  # bottom row, right corner excluded
        if i == -t:
            return "F", None
        j = i
        d = t - j
        tag = f"C j={j}"
        out = ([(-t, (-t + j + 1) // 2)] if d % 2 == 1
               else [(-t, (-t + j) // 2), (-t, (-t + j + 2) // 2)])
        return tag, out
    # left column strictly between the corners
    if k >= 0:
        j = k
        s = t + j
        tag = f"D j={j}"
        out = [(j, -s // 2)] if s % 2 == 0 else [(j, (-s - 1) // 2), (j, (-s + 1) // 2)]
    else:
        j = -k
        s = t + j
        tag = f"E j={j}"
        out = ([(-j, (-s + 1) // 2)] if s % 2 == 1
               else [(-j, -s // 2), (-j, (-s + 2) // 2)])
    return tag, out


def _union(squares) -> Union:
    return Union(tuple(Square(i, j) for i, j in squares))


def _same_polygon(p: ConvexPolygon, verts) -> bool:
    return set(p.vertices) == {(Fraction(x), Fraction(y)) for x, y in verts}


def _corner_chain(m: int, a=HALF) -> VerificationReport:
    """The three-step bookkeeping for C_{-m,-m}."""
    tag = f"C({-m},{-m}) F-chain"
    sq = ConvexPolygon.square(-m, -m)
    img1 = poly_image(a, sq)
    if len(img1) != 1:
        return VerificationReport(tag, Verdict.FAILED, 1, witness=img1[0], detail="first image split")
    p1 = img1[0]
    M = Fraction(m)
    ok = _same_polygon(p1, [(-2 * M + 2, -2 * M + 3), (-2 * M + 2, -2 * M + 2),
                            (-2 * M, -2 * M + 1), (-2 * M, -2 * M + 2)])
    if not (ok and region_contains(_union([(-m, -m), (-m, -m + 1)]), p1)):
        return VerificationReport(tag, Verdict.FAILED, 1, witness=p1, detail="F(C) prediction")
    if m < 2:
        # at level 1 the second image straddles y = 0; only the first step is tabulated
        return VerificationReport(tag, Verdict.CERTIFIED, 1)
    img2 = poly_image(a, p1)
    if len(img2) != 1:
        return VerificationReport(tag, Verdict.FAILED, 2, witness=img2[0], detail="second image split")
    p2 = img2[0]
    ok = _same_polygon(p2, [(-2 * M + 1, -2 * M + HALF * 3), (-2 * M + 2, -2 * M + 2),
                            (-2 * M + 3, -2 * M + HALF * 7), (-2 * M + 2, -2 * M + 3)])
    if not (ok and region_contains(_union([(-m, -m), (-m, -m + 1), (-m + 1, -m + 1)]), p2)):
        return VerificationReport(tag, Verdict.FAILED, 2, witness=p2, detail="F^2(C) prediction")
    # the part of F^2(C) left of x = -2m+2 is the triangle T_m
    tm = [r for r in subtract_region(p2, Rect(-2 * M + 2, 2 * M + 2, -2 * M, 2 * M + 2))]
    tri = [(-2 * M + 1, -2 * M + HALF * 3), (-2 * M + 2, -2 * M + 2), (-2 * M + 2, -2 * M + 3)]
    if len(tm) != 1 or not _same_polygon(tm[0], tri):
        return VerificationReport(tag, Verdict.FAILED, 2, witness=p2, detail="T_m prediction")
    img3 = poly_image(a, tm[0])
    p3 = img3[0]
    ok = len(img3) == 1 and _same_polygon(
        p3, [(-2 * M + HALF * 3, -2 * M + Fraction(9, 4)), (-2 * M + 2, -2 * M + 3),
             (-2 * M + 3, -2 * M + HALF * 7)])
    target = Union((Square(-m, -m + 1), level_region(m - 1)))
    if not (ok and region_contains(target, p3)):
        return VerificationReport(tag, Verdict.FAILED, 3, witness=p3, detail="F(T_m) prediction")
    return VerificationReport(tag, Verdict.CERTIFIED, 3)


def square_transition_check(m: int, n: int, a=HALF, level: int | None = None
                            ) -> VerificationReport:
    """Check the tabulated one-step image of C_{m,n} (a = 1/2 tables)."""
    if Fraction(a) != HALF:
        raise ValueError("transition tables are stated for a = 1/2")
    t = max(abs(m), abs(n))
    if t == 0 or (level is not None and level != t):
        raise OutOfFrame(f"C_{{{m},{n}}} is not on the frame of level {level}")
    tag, squares = predicted_image_squares(m, n)
    if squares is None:
        return _corner_chain(t, a)
    src = ConvexPolygon.square(m, n)
    imgs = poly_image(a, src)
    label = f"C({m},{n}) {tag}"
    expected = ConvexPolygon.from_points([point_image(a, v) for v in src.vertices])
    if len(imgs) != 1 or imgs[0] != expected:
        return VerificationReport(label, Verdict.FAILED, 1, witness=imgs[0],
                                  detail="image is not the parallelogram of vertex images")
    if not region_contains(_union(squares), imgs[0]):
        return VerificationReport(label, Verdict.FAILED, 1, witness=imgs[0],
                                  detail=f"image leaves predicted squares {squares}")
    return VerificationReport(label, Verdict.CERTIFIED, 1,
                              detail=f"image in {' U '.join(f'C{s}' for s in squares)}")


def frame_squares(t: int):
    """Squares C_{i,j} with max(|i|, |j|) = t, in a fixed order."""
    if t == 0:
        return [(0, 0)]
    return [(i, j) for i in range(-t, t + 1) for j in range(-t, t + 1)
            if max(abs(i), abs(j)) == t]


# -- the full suite -----------------------------------------------------------------

def random_rational_polygon(rng: random.Random, npts: int = 6, span: int = 8,
                            den: int = 16) -> ConvexPolygon:
    while True:
        pts = [(Fraction(rng.randint(-span * den, span * den), den),
                Fraction(rng.randint(-span * den, span * den), den)) for _ in range(npts)]
        poly = ConvexPolygon.from_points(pts)
        if poly.dimension == 2:
            return poly


def area_contraction_check(a=HALF, count: int = 100, seed: int = 0) -> VerificationReport:
    rng = random.Random(seed)
    factor = abs(Fraction(a))
    for _ in range(count):
        poly = random_rational_polygon(rng)
        pieces = poly_image(a, poly)
        if sum(poly_area(p) for p in pieces) != factor * poly_area(poly):
            return VerificationReport("area-contraction", Verdict.FAILED, 1, witness=poly)
    return VerificationReport("area-contraction", Verdict.CERTIFIED, 1,
                              detail=f"{count} random polygons, factor {factor}")


def invariance_check(a, region, label: str) -> VerificationReport:
    poly = region.polygon()
    for img in poly_image(a, poly):
        if not region_contains(region, img):
            return VerificationReport(label, Verdict.FAILED, 1, witness=img)
    return VerificationReport(label, Verdict.CERTIFIED, 1)


def segment_s0(eps=1) -> ConvexPolygon:
    """{(x, 0): 2 <= x <= 2 + eps}"""
    return ConvexPolygon.segment((2, 0), (2 + Fraction(eps), 0))


def segment_s2(eps=1) -> ConvexPolygon:
    """{(x, 2): -eps <= x <= 0}"""
    return ConvexPolygon.segment((-Fraction(eps), 2), (0, 2))


def _run_job(job):
    kind, args = job
    if kind == "advance":
        a, start, target, max_steps, eta, lemma = args
        return advance_until_contained(a, start, target, max_steps, eta, lemma=lemma)
    if kind == "transition":
        return square_transition_check(*args)
    raise ValueError(kind)


def suite_jobs(a, levels: int, max_steps: int, eta):
    c00 = Square(0, 0)
    jobs = [("advance", (a, segment_s0(), c00, max_steps, eta, "S(1,0) -> C(0,0)")),
            ("advance", (a, segment_s2(), c00, max_steps, eta, "S(1,2) -> C(0,0)"))]
    for i, j in frame_squares(0) + frame_squares(1):
        jobs.append(("advance", (a, ConvexPolygon.square(i, j), c00, max_steps, eta,
                                 f"C({i},{j}) -> C(0,0)")))
    for t in range(2, levels + 1):
        for i, j in frame_squares(t):
            if Fraction(a) == HALF:
                jobs.append(("transition", (i, j, a, t)))
            jobs.append(("advance", (a, ConvexPolygon.square(i, j), level_region(t - 1),
                                     max_steps, eta, f"C({i},{j}) -> R{t - 1}")))
    return jobs


def verify_global_attraction_a_half(levels: int = 3, max_steps: int = 64,
                                    eta: Fraction = DEFAULT_ETA, *, a=HALF,
                                    area_samples: int = 100, seed: int = 0,
                                    workers: int | None = None) -> list[VerificationReport]:
    """Run the whole certificate and return one report per check.

    Checks, in order: invariance of the two triangles of [0,2]^2 (or of the
    square itself when a != 1/2), exact area contraction on random polygons,
    entry of the two boundary segments and of every square of R_1 into
    C_{0,0}, and for each level 2..levels the tabulated one-step images of
    the frame squares together with their descent into the previous level.
    """
    if levels < 1:
        raise ValueError("levels must be >= 1")
    a = Fraction(a)
    reports = []
    if a == HALF:
        reports.append(invariance_check(a, TriangleLower(), "invariance: lower triangle"))
        reports.append(invariance_check(a, TriangleUpper(), "invariance: upper triangle"))
    else:
        reports.append(invariance_check(a, Square(0, 0), "invariance: C(0,0)"))
    reports.append(area_contraction_check(a, area_samples, seed))
    jobs = suite_jobs(a, levels, max_steps, Fraction(eta))
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports.extend(pool.map(_run_job, jobs))
    else:
        reports.extend(_run_job(j) for j in jobs)
    return reports
