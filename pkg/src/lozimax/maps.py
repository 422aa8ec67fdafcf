"""Parameter types, steppers and orbit iteration for Lozi-type maps.

Three families are covered:

* the Lozi map ``x' = 1 - a|x| + b x_prev`` in its three planar formulations,
* the generalized Lozi map ``y' = alpha|y| + beta y + gamma y_prev + delta``,
* max-type equations ``x' = c * max(x^k, M) / (x^l * x_prev^m)``.

States are stored as ``(previous, current)`` pairs.  Every stepper works
unchanged on ``float`` and on :class:`fractions.Fraction` values, which is
what the exact iteration mode relies on.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, NamedTuple, Sequence

DEFAULT_GUARD = 1e12


class DomainError(ValueError):
    """A state left the domain of a map (max-equations need positive states)."""


class Point(NamedTuple):
    x: float
    y: float


Stepper = Callable[[Point], Point]


def _abs(z):
    # |z| = max{z, -z}, kept literal so Fractions never round
    return max(z, -z)


@dataclass(frozen=True)
class LoziParams:
    a: float
    b: float

    def __post_init__(self):
        for v in (self.a, self.b):
            if not _is_finite(v):
                raise ValueError("Lozi parameters must be finite")

    def as_generalized(self) -> "GeneralizedLoziParams":
        """The generalized Lozi coefficients that reproduce this map."""
        return GeneralizedLoziParams(-self.a, 0, self.b, 1)


@dataclass(frozen=True)
class GeneralizedLoziParams:
    alpha: float
    beta: float
    gamma: float
    delta: float

    def __post_init__(self):
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero")


@dataclass(frozen=True)
class MaxEqParams:
    k: float
    l: float
    m: float
    M: float
    c: float = 1

    def __post_init__(self):
        if not self.M > 0:
            raise ValueError("M must be positive")
        if not self.c > 0:
            raise ValueError("c must be positive")


class Formulation(enum.Enum):
    SYS1 = "SYS1"  # (1 - a|x| + y, b x)
    SYS2 = "SYS2"  # (1 - a|x| + b y, x)
    SYS3 = "SYS3"  # (y, 1 - a|y| + x), with b on the x term


def lozi_step(params: LoziParams, formulation: Formulation, state: Point) -> Point:
    a, b = params.a, params.b
    x, y = state
    if formulation is Formulation.SYS1:
        return Point(1 - a * _abs(x) + y, b * x)
    if formulation is Formulation.SYS2:
        return Point(1 - a * _abs(x) + b * y, x)
    if formulation is Formulation.SYS3:
        return Point(y, 1 - a * _abs(y) + b * x)
    raise ValueError(f"unknown formulation {formulation!r}")


def gen_lozi_step(params: GeneralizedLoziParams, state: Point) -> Point:
    x, y = state
    p = params
    return Point(y, p.alpha * _abs(y) + p.beta * y + p.gamma * x + p.delta)


def max_eq_step(params: MaxEqParams, state: Point) -> Point:
    x, y = state
    if not (x > 0 and y > 0):
        raise DomainError(f"max-equation state must be positive, got {tuple(state)}")
    p = params
    return Point(y, p.c * max(y ** p.k, p.M) / (y ** p.l * x ** p.m))


# Transport between formulations.  sigma(x, y) = (x, y / b) takes SYS1 states
# to SYS2 states, tau(x, y) = (y, x) takes SYS2 states to SYS3 states and back.

def _sigma(p, b):
    if b == 0:
        raise ValueError("transport through sigma needs b != 0")
    return Point(p[0], p[1] / b)


def _sigma_inv(p, b):
    if b == 0:
        raise ValueError("transport through sigma needs b != 0")
    return Point(p[0], p[1] * b)


def _tau(p):
    return Point(p[1], p[0])


def formulation_transport(point, source: Formulation, target: Formulation, b) -> Point:
    """Map a state of formulation `source` to the conjugate state of `target`."""
    point = Point(*point)
    if source is target:
        return point
    # route everything through SYS2
    if source is Formulation.SYS1:
        mid = _sigma(point, b)
    elif source is Formulation.SYS3:
        mid = _tau(point)
    else:
        mid = point
    if target is Formulation.SYS1:
        return _sigma_inv(mid, b)
    if target is Formulation.SYS3:
        return _tau(mid)
    return mid


def as_stepper(desc) -> Stepper:
    """Turn a map descriptor into a one-argument stepper.

    Accepts a callable, a parameter object (Lozi parameters are stepped in
    the SYS3 formulation) or a ``(LoziParams, Formulation)`` pair.
    """
    if isinstance(desc, LoziParams):
        return lambda s: lozi_step(desc, Formulation.SYS3, s)
    if isinstance(desc, GeneralizedLoziParams):
        return lambda s: gen_lozi_step(desc, s)
    if isinstance(desc, MaxEqParams):
        return lambda s: max_eq_step(desc, s)
    if isinstance(desc, tuple) and len(desc) == 2 and isinstance(desc[1], Formulation):
        params, form = desc
        return lambda s: lozi_step(params, form, s)
    if callable(desc):
        return desc
    raise TypeError(f"cannot build a stepper from {desc!r}")


class Status(enum.Enum):
    COMPLETED = "completed"
    DIVERGENCE_GUARD = "divergence_guard"
    DOMAIN_ERROR = "domain_error"


@dataclass(frozen=True)
class Termination:
    status: Status
    step: int | None = None

    def __str__(self):
        if self.step is None:
            return self.status.value
        return f"{self.status.value}({self.step})"


@dataclass(frozen=True)
class Orbit:
    initial: Point
    points: tuple
    termination: Termination
    exact: bool = False

    def __len__(self):
        return len(self.points)

    @property
    def xs(self):
        return [p.x for p in self.points]

    @property
    def ys(self):
        return [p.y for p in self.points]

    def to_csv(self) -> str:
        return orbit_to_csv(self)


def _is_finite(v) -> bool:
    if isinstance(v, Rational):
        return True
    return math.isfinite(v)


def _to_fraction(v) -> Fraction:
    if isinstance(v, Rational):
        return Fraction(v)
    raise TypeError(f"exact mode needs rational inputs, got {v!r}")


def iterate(stepper, initial, steps: int, *, exact: bool = False,
            guard: float = DEFAULT_GUARD) -> Orbit:
    """Iterate a map from `initial` for up to `steps` steps.

    In float mode the orbit stops as soon as a coordinate exceeds `guard` in
    magnitude (that state is kept) or becomes non-finite (that state is
    dropped).  In exact mode inputs must be rational and any stepper output
    that is not rational raises ``TypeError``.  A :class:`DomainError` from the
    stepper ends the orbit with a ``DOMAIN_ERROR`` termination.
    """
    if guard <= 0:
        raise ValueError("guard must be positive")
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    step = as_stepper(stepper)
    if exact:
        state = Point(_to_fraction(initial[0]), _to_fraction(initial[1]))
    else:
        state = Point(float(initial[0]), float(initial[1]))
    points = [state]
    termination = Termination(Status.COMPLETED)
    for n in range(1, steps + 1):
        try:
            state = step(state)
        except DomainError:
            termination = Termination(Status.DOMAIN_ERROR, n)
            break
        if exact:
            if not all(isinstance(v, Rational) for v in state):
                raise TypeError(f"stepper produced a non-rational state at step {n}")
            state = Point(Fraction(state[0]), Fraction(state[1]))
        else:
            state = Point(float(state[0]), float(state[1]))
            if not (math.isfinite(state.x) and math.isfinite(state.y)):
                termination = Termination(Status.DIVERGENCE_GUARD, n)
                break
            if max(abs(state.x), abs(state.y)) > guard:
                points.append(state)
                termination = Termination(Status.DIVERGENCE_GUARD, n)
                break
        points.append(state)
    return Orbit(points[0], tuple(points), termination, exact)


def format_number(v) -> str:
    """Floats at 17 significant digits, rationals as ``num/den``."""
    if isinstance(v, Rational):
        v = Fraction(v)
        return f"{v.numerator}/{v.denominator}"
    return format(float(v), ".17g")


def parse_number(text: str):
    text = text.strip()
    if "/" in text:
        return Fraction(text)
    return float(text)


def points_to_csv(points: Sequence, header=("n", "x", "y")) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for n, p in enumerate(points):
        w.writerow([n, format_number(p[0]), format_number(p[1])])
    return buf.getvalue()


def orbit_to_csv(orbit: Orbit) -> str:
    return points_to_csv(orbit.points)


def orbit_from_csv(text: str) -> list[Point]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["n", "x", "y"]:
        raise ValueError("expected header n,x,y")
    return [Point(parse_number(r[1]), parse_number(r[2])) for r in rows[1:]]
