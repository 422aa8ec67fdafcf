"""Equilibria, 2-cycles, linear stability and orbit classification."""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .conjugation import inverse_change, recover_generalized
from .maps import (DEFAULT_GUARD, GeneralizedLoziParams, LoziParams, MaxEqParams,
                   Orbit, Point, Status, as_stepper, iterate)


class NonSmooth(ValueError):
    """A cycle point sits on the switching line y = 0."""


class Diverged(RuntimeError):
    pass


# -- equilibrium sets ---------------------------------------------------------

@dataclass(frozen=True)
class Finite:
    points: tuple = ()

    def __contains__(self, v):
        return v in self.points


@dataclass(frozen=True)
class HalfLine:
    """``[endpoint, inf)`` when direction is +1, ``(-inf, endpoint]`` when -1."""
    endpoint: float
    direction: int = 1
    extra: tuple = ()  # isolated equilibria off the ray

    @property
    def minimum(self):
        return self.endpoint if self.direction > 0 else None

    def __contains__(self, v):
        if v in self.extra:
            return True
        return (v - self.endpoint) * self.direction >= 0


def _gen_lozi_equilibria(alpha, beta, gamma, delta):
    # x >= 0:  (1 - alpha - beta - gamma) x = delta
    # x <= 0:  (1 + alpha - beta - gamma) x = delta
    roots = set()
    ray = None
    for sign, coef in ((1, 1 - alpha - beta - gamma),
                       (-1, 1 + alpha - beta - gamma)):
        if coef == 0:
            if delta == 0:
                ray = sign
            continue
        x = delta / coef
        if x * sign >= 0:
            roots.add(x + 0)  # collapse -0.0
    if ray is not None:
        extra = tuple(sorted(r for r in roots if r * ray < 0))
        return HalfLine(0 * delta, ray, extra)
    return Finite(tuple(sorted(roots)))


def equilibria(desc):
    """Equilibrium set of a Lozi, generalized Lozi or max-type recurrence.

    Max-equations are handled by pulling back to a conjugate generalized Lozi
    map and pushing its equilibria forward through the change of variables.
    """
    if isinstance(desc, LoziParams):
        return _gen_lozi_equilibria(-desc.a, 0, desc.b, 1)
    if isinstance(desc, GeneralizedLoziParams):
        return _gen_lozi_equilibria(desc.alpha, desc.beta, desc.gamma, desc.delta)
    if isinstance(desc, MaxEqParams):
        gl, cov = recover_generalized(desc)
        eq = _gen_lozi_equilibria(gl.alpha, gl.beta, gl.gamma, gl.delta)
        increasing = (math.log(cov.A) / cov.q) > 0
        if isinstance(eq, Finite):
            return Finite(tuple(sorted(inverse_change(cov, v) for v in eq.points)))
        extra = tuple(sorted(inverse_change(cov, v) for v in eq.extra))
        direction = eq.direction if increasing else -eq.direction
        return HalfLine(inverse_change(cov, eq.endpoint), direction, extra)
    raise TypeError(f"unsupported map descriptor {desc!r}")


# -- cycles and stability -----------------------------------------------------

@dataclass(frozen=True)
class Cycle:
    period: int
    points: tuple


class Stability(enum.Enum):
    ASYMPTOTICALLY_STABLE = "AsymptoticallyStable"
    UNSTABLE = "Unstable"
    NONHYPERBOLIC = "Nonhyperbolic"


@dataclass(frozen=True)
class StabilityReport:
    eigenvalues: tuple
    spectral_radius: float
    classification: Stability
    trace: object = None
    det: object = None
    schur_cohn: bool = False


def two_cycles_lozi_ab(a) -> list[Cycle]:
    """The isolated 2-cycle of ``x' = 1 - a|x| + a x_prev`` (exists for a > 1/2)."""
    if not a > Fraction(1, 2):
        return []
    if isinstance(a, Rational):
        a = Fraction(a)
    d = 2 * a * a - 2 * a + 1
    p = Point(1 / d, (1 - 2 * a) / d)
    q = Point(p.y, p.x)
    return [Cycle(2, (p, q))]


def lozi_jacobian(params: LoziParams, state):
    """Jacobian of the SYS3 map ``(x, y) -> (y, 1 - a|y| + b x)``."""
    y = state[1]
    if y == 0:
        raise NonSmooth(f"Jacobian undefined on the switching line at {tuple(state)}")
    s = 1 if y > 0 else -1
    return ((0, 1), (params.b, -params.a * s))


def _matmul(A, B):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2))
                 for i in range(2))


def schur_cohn_quadratic(c1, c0) -> bool:
    """Both roots of ``l^2 + c1 l + c0`` lie strictly inside the unit circle."""
    return abs(c1) < 1 + c0 < 2


def cycle_stability(params: LoziParams, cycle: Cycle, tol: float = 1e-12) -> StabilityReport:
    """Linear stability of a cycle of the SYS3 Lozi map.

    The per-point Jacobians are multiplied in orbit order.  With rational
    parameters and cycle points the trace, determinant and Schur-Cohn verdict
    are exact.
    """
    J = ((1, 0), (0, 1))
    for pt in cycle.points:
        J = _matmul(lozi_jacobian(params, pt), J)
    tr = J[0][0] + J[1][1]
    det = J[0][0] * J[1][1] - J[0][1] * J[1][0]
    # characteristic polynomial l^2 - tr l + det
    stable = schur_cohn_quadratic(-tr, det)
    disc = cmath.sqrt(float(tr) ** 2 - 4 * float(det))
    eig = ((float(tr) + disc) / 2, (float(tr) - disc) / 2)
    eig = tuple(complex(e.real, e.imag) for e in eig)
    rho = max(abs(e) for e in eig)
    if stable:
        cls = Stability.ASYMPTOTICALLY_STABLE
    elif any(abs(abs(e) - 1) <= tol for e in eig):
        cls = Stability.NONHYPERBOLIC
    else:
        cls = Stability.UNSTABLE
    return StabilityReport(eig, rho, cls, tr, det, stable)


# -- period detection ---------------------------------------------------------

def _as_array(points):
    return np.array([[float(p[0]), float(p[1])] for p in points])


def detect_period(orbit, tol=None, max_period=None):
    """Smallest lag p at which the tail of the orbit repeats.

    Exact mode (``tol=None``) compares states with ``==``.  Tolerance mode
    requires the last ``2p`` states to satisfy ``|s[i] - s[i-p]| <= tol`` in
    sup-norm for every position of the window, so a slowly spiralling orbit
    does not produce a spurious match.  Returns None when nothing repeats.
    """
    pts = orbit.points if isinstance(orbit, Orbit) else list(orbit)
    n = len(pts)
    pmax = n // 2 if max_period is None else min(max_period, n // 2)
    if tol is None:
        last = pts[-1]
        for p in range(1, pmax + 1):
            if pts[-1 - p] == last and all(pts[-1 - i] == pts[-1 - i - p] for i in range(p)):
                return p
        return None
    arr = _as_array(pts)
    last = arr[-1]
    # cheap screen on the final state, then full-window confirmation
    lags = np.arange(1, pmax + 1)
    d = np.max(np.abs(arr[n - 1 - lags] - last), axis=1)
    for p in lags[d <= tol]:
        p = int(p)
        w = arr[n - p:] - arr[n - 2 * p:n - p]
        if np.max(np.abs(w)) <= tol:
            return p
    return None


def detect_asymptotic_cycle(stepper, initial, burn: int, window: int, eps: float,
                            guard: float = DEFAULT_GUARD):
    """Burn in, then look for a cycle in the next `window` states.

    Returns a :class:`Cycle` whose points are averages of the aligned states
    in the window, or None when no period up to ``window // 2`` matches.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    step = as_stepper(stepper)
    head = iterate(step, initial, burn, guard=guard)
    if head.termination.status is not Status.COMPLETED:
        raise Diverged(f"orbit stopped during burn-in: {head.termination}")
    tail = iterate(step, head.points[-1], window - 1, guard=guard)
    if tail.termination.status is not Status.COMPLETED:
        raise Diverged(f"orbit stopped in the window: {tail.termination}")
    p = detect_period(tail, tol=eps)
    if p is None:
        return None
    arr = _as_array(tail.points)
    usable = (len(arr) // p) * p
    block = arr[len(arr) - usable:].reshape(-1, p, 2).mean(axis=0)
    return Cycle(p, tuple(Point(float(x), float(y)) for x, y in block))


# -- closed forms -------------------------------------------------------------

class ClosedForm(enum.Enum):
    A_HALF = "A_HALF"
    A_MINUS_HALF = "A_MINUS_HALF"


THETA = math.atan(math.sqrt(7))


def closed_form_solution(case: ClosedForm, initial, n: int):
    """Value ``x_n`` of the linear regime with ``(x_{-1}, x_0) = initial``.

    A_HALF solves ``x' = 1 - x/2 + x_prev/2`` (valid once the orbit stays in
    the two invariant triangles of [0,2]^2); A_MINUS_HALF solves
    ``x' = 1 + x/2 - x_prev/2`` (valid inside [0,2]^2).  For A_HALF with
    rational input the result is exact.
    """
    x, y = initial
    if n < -1:
        raise ValueError("n must be >= -1")
    if case is ClosedForm.A_HALF:
        if isinstance(x, Rational) and isinstance(y, Rational):
            half = Fraction(1, 2)
            x, y = Fraction(x), Fraction(y)
        else:
            half = 0.5
        sign = 1 if n % 2 == 0 else -1
        return (2 * y - x - 1) / 3 * sign + (x + y - 2) / 3 * half ** n + 1
    if case is ClosedForm.A_MINUS_HALF:
        x, y = float(x), float(y)
        t = (n + 1) * THETA
        amp = 0.5 ** ((n + 1) / 2)
        b = (y - 1) * math.sqrt(2) / math.sin(THETA) + (1 - x) / math.tan(THETA)
        return amp * ((x - 1) * math.cos(t) + b * math.sin(t)) + 1
    raise ValueError(f"unknown case {case!r}")


def a_half_limit_cycle(initial):
    """Limits of the even and odd subsequences for the A_HALF regime."""
    x, y = initial
    return (2 * y - x + 2) / 3, (-2 * y + x + 4) / 3


# -- the divergent family y' = 3/2|y| + 1/2 y - y_prev --------------------------

EQLEX = GeneralizedLoziParams(Fraction(3, 2), Fraction(1, 2), -1, 0)


@dataclass(frozen=True)
class EqLexClass:
    divergent: bool
    case: int | None = None

    def __str__(self):
        return f"Divergent({self.case})" if self.divergent else "Equilibrium"


def classify_eqlex_orbit(initial) -> EqLexClass:
    """Region of the initial pair (y_{-1}, y_0) in the divergence case analysis."""
    u, v = initial  # u = y_{-1}, v = y_0
    if u == v and v >= 0:
        return EqLexClass(False)
    if 0 <= u < v:
        return EqLexClass(True, 1)
    if (u <= 0 < v) or (u < 0 <= v):
        return EqLexClass(True, 2)
    if u <= v <= 0:
        return EqLexClass(True, 3)
    if 0 <= v < u:
        return EqLexClass(True, 4)
    if v <= u <= 0:
        return EqLexClass(True, 5)
    return EqLexClass(True, 6)


def eqlex_escape_steps(initials, guard: float = 1e6, max_steps: int = 100_000):
    """Vectorized: first step at which each orbit exceeds `guard` (-1 if never)."""
    arr = np.asarray(initials, dtype=float)
    x = arr[:, 0].copy()
    y = arr[:, 1].copy()
    hit = np.full(len(arr), -1, dtype=np.int64)
    done = np.maximum(np.abs(x), np.abs(y)) > guard
    hit[done] = 0
    for n in range(1, max_steps + 1):
        x, y = y, 1.5 * np.abs(y) + 0.5 * y - x
        new = (~done) & (np.maximum(np.abs(x), np.abs(y)) > guard)
        hit[new] = n
        done |= new
        if done.all():
            break
    return hit


def eqlex_case1_entry(initial, max_steps: int = 10_000):
    """First step at which the orbit is in Case 1, and its increment there.

    Case 1 (``0 <= y_{n-1} < y_n``) is forward invariant: the recurrence is
    ``y' = 2y - y_prev`` there, so the orbit grows by the constant increment
    ``y_n - y_{n-1}`` forever.  Exact arithmetic; returns None when the orbit
    has not entered Case 1 within `max_steps` (equilibria never do).
    """
    step = as_stepper(EQLEX)
    u, v = Fraction(initial[0]), Fraction(initial[1])
    for n in range(max_steps + 1):
        if 0 <= u < v:
            return n, v - u
        u, v = step((u, v))
    return None
