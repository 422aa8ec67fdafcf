"""Logarithmic change of variables linking generalized Lozi maps and max-equations.

With ``y = q * log_A(z) + p`` the generalized Lozi recurrence

    y' = alpha|y| + beta y + gamma y_prev + delta

becomes the max-type recurrence

    z' = c * max(z^(2 alpha), M) / (z^(alpha - beta) * z_prev^(-gamma))

with ``M = A^(-2 alpha p / q)`` and ``c = A^((p (alpha+beta+gamma-1) + delta) / q)``,
provided ``alpha / (q ln A) > 0``.  The coordinatewise change is a
homeomorphism of ``(0, inf)^2`` onto the plane, so both maps share their
dynamics.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .maps import (DomainError, GeneralizedLoziParams, MaxEqParams, Point,
                   gen_lozi_step, max_eq_step)

_SUM_TOL = 1e-12


class IncompatibleChange(ValueError):
    """The base/scale sign condition of the change of variables fails."""


@dataclass(frozen=True)
class ChangeOfVariables:
    A: float
    p: float = 0.0
    q: float = 1.0

    def __post_init__(self):
        if not self.A > 0 or self.A == 1:
            raise ValueError("base A must be positive and different from 1")
        if self.q == 0:
            raise ValueError("scale q must be nonzero")
        if not math.isfinite(self.P) or self.P <= 0:
            raise ValueError("A^p must be finite and positive")

    @property
    def P(self) -> float:
        return float(self.A) ** self.p

    def compatible_with(self, alpha) -> bool:
        ratio = alpha / self.q
        return (self.A > 1 and ratio > 0) or (self.A < 1 and ratio < 0)


class FamilyCase(enum.Enum):
    DELTA0_ANY_B = "DELTA0_ANY_B"
    DELTA0_SUM1_ANY_B = "DELTA0_SUM1_ANY_B"
    RATIO_POS_B_GT_1 = "RATIO_POS_B_GT_1"
    RATIO_NEG_C_LT_1 = "RATIO_NEG_C_LT_1"
    SUM1_SCALE_B_GT_1 = "SUM1_SCALE_B_GT_1"
    SUM1_SCALE_C_LT_1 = "SUM1_SCALE_C_LT_1"
    GENERAL = "GENERAL"


def forward_change(cov: ChangeOfVariables, z) -> float:
    if not z > 0:
        raise DomainError(f"change of variables needs z > 0, got {z!r}")
    return cov.q * math.log(z) / math.log(cov.A) + cov.p


def inverse_change(cov: ChangeOfVariables, w) -> float:
    return float(cov.A) ** ((w - cov.p) / cov.q)


def phi(cov: ChangeOfVariables, point) -> Point:
    """Apply the change of variables to both coordinates."""
    return Point(forward_change(cov, point[0]), forward_change(cov, point[1]))


def phi_inverse(cov: ChangeOfVariables, point) -> Point:
    return Point(inverse_change(cov, point[0]), inverse_change(cov, point[1]))


def _coef_sum_minus_one(gl: GeneralizedLoziParams):
    s = gl.alpha + gl.beta + gl.gamma - 1
    return 0 if abs(s) <= _SUM_TOL else s


def derive_max_params(gl: GeneralizedLoziParams, cov: ChangeOfVariables) -> MaxEqParams:
    if not cov.compatible_with(gl.alpha):
        raise IncompatibleChange(
            f"need A>1 with alpha/q>0 or 0<A<1 with alpha/q<0 "
            f"(A={cov.A}, alpha={gl.alpha}, q={cov.q})")
    a, b, g, d = gl.alpha, gl.beta, gl.gamma, gl.delta
    M = float(cov.A) ** (-2 * a * cov.p / cov.q)
    c = float(cov.A) ** ((cov.p * (a + b + g - 1) + d) / cov.q)
    return MaxEqParams(k=2 * a, l=a - b, m=-g, M=M, c=c)


def classify_family(gl: GeneralizedLoziParams) -> FamilyCase:
    s1 = _coef_sum_minus_one(gl)
    d = gl.delta
    if d == 0:
        return FamilyCase.DELTA0_SUM1_ANY_B if s1 == 0 else FamilyCase.DELTA0_ANY_B
    if s1 != 0:
        return FamilyCase.RATIO_POS_B_GT_1 if d / s1 > 0 else FamilyCase.RATIO_NEG_C_LT_1
    if d / gl.alpha > 0:
        return FamilyCase.SUM1_SCALE_B_GT_1
    if d / gl.alpha < 0:
        return FamilyCase.SUM1_SCALE_C_LT_1
    return FamilyCase.GENERAL


def canonical_change(gl: GeneralizedLoziParams, A: float = 2.0) -> ChangeOfVariables:
    """The change of variables used for "the" max-equation of `gl`.

    Base 2 with ``q = sign(alpha)``.  The shift is 0 when ``delta = 0`` or
    when the coefficients sum to one; otherwise ``p = -delta / (sum - 1)``,
    which removes the outer scale factor (``c = 1``).
    """
    q = 1.0 if gl.alpha > 0 else -1.0
    if A < 1:
        q = -q
    s1 = _coef_sum_minus_one(gl)
    p = 0.0 if (gl.delta == 0 or s1 == 0) else -gl.delta / s1
    return ChangeOfVariables(A, float(p), q)


def conjugate_family(gl: GeneralizedLoziParams, A: float = 2.0):
    """Return ``(case, cov, max_params)`` for the canonical conjugate."""
    cov = canonical_change(gl, A)
    return classify_family(gl), cov, derive_max_params(gl, cov)


def recover_generalized(mp: MaxEqParams, A: float = 2.0):
    """Invert :func:`derive_max_params`: a generalized Lozi map conjugate to `mp`.

    Returns ``(gl, cov)`` with ``derive_max_params(gl, cov) == mp`` up to
    rounding.  Requires ``k != 0``.
    """
    if mp.k == 0:
        raise ValueError("k = 0 gives a linear recurrence, no Lozi preimage")
    alpha = mp.k / 2
    beta = alpha - mp.l
    gamma = -mp.m
    q = 1.0 if alpha > 0 else -1.0
    if A < 1:
        q = -q
    lnA = math.log(A)
    p = -q * math.log(mp.M) / (2 * alpha * lnA)
    delta = q * math.log(mp.c) / lnA - p * (alpha + beta + gamma - 1)
    return GeneralizedLoziParams(alpha, beta, gamma, delta), ChangeOfVariables(A, p, q)


def conjugacy_residual(gl: GeneralizedLoziParams, mp: MaxEqParams,
                       cov: ChangeOfVariables, point) -> float:
    """Sup-norm of ``phi(max_step(point)) - lozi_step(phi(point))``."""
    lhs = phi(cov, max_eq_step(mp, Point(*point)))
    rhs = gen_lozi_step(gl, phi(cov, point))
    return max(abs(lhs.x - rhs.x), abs(lhs.y - rhs.y))


def transport_orbit(cov: ChangeOfVariables, points):
    return [phi(cov, p) for p in points]
