"""Named reproduction experiments.

Each preset runs a small, deterministic computation and compares what it
observes with the known answer.  The CLI ``reproduce`` subcommand is a thin
wrapper around :data:`PRESETS`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import analysis as an
from .attractor import (box_count, misiurewicz_check, sample_attractor,
                        trapping_triangle, verify_trapping)
from .conjugation import ChangeOfVariables, conjugate_family, derive_max_params
from .maps import GeneralizedLoziParams, LoziParams, MaxEqParams, Point, iterate
from .region import verify_global_attraction_a_half

CRAMPIN = GeneralizedLoziParams(1, 0, -1, 0)
ABU_SARIS = MaxEqParams(2, 1, 1, 2.3, 1)


def beardon(alpha, beta) -> GeneralizedLoziParams:
    """x' = alpha|x| + beta x - x_prev"""
    return GeneralizedLoziParams(alpha, beta, -1, 0)


def lozi_ab(a) -> LoziParams:
    return LoziParams(a, a)


def rng_for(seed: int) -> np.random.Generator:
    """The one generator used for every randomized sweep (PCG64)."""
    return np.random.Generator(np.random.PCG64(seed))


def uniform_initials(seed: int, count: int, lo: float, hi: float) -> np.ndarray:
    return rng_for(seed).uniform(lo, hi, size=(count, 2))


def converge_to_cycle(stepper, initial, eps: float = 1e-8, max_steps: int = 50_000,
                      window: int = 64, burn: int = 1000):
    """Call detect_asymptotic_cycle with growing burn-in until a cycle shows up.

    Returns ``(cycle, steps_used)``; cycle is None if nothing was found
    within `max_steps` total steps.
    """
    state = Point(*initial)
    used = 0
    while used + burn + window <= max_steps:
        cyc = an.detect_asymptotic_cycle(stepper, state, burn, window, eps)
        if cyc is not None:
            return cyc, used + burn + window
        state = iterate(stepper, state, burn).points[-1]
        used += burn
    return None, used


# -- presets ----------------------------------------------------------------------

@dataclass(frozen=True)
class Preset:
    name: str
    claim: str
    run: Callable


def _period_exact(params, initial, steps):
    orbit = iterate(params, initial, steps, exact=True)
    return an.detect_period(orbit)


def p_crampin(seed):
    p = _period_exact(CRAMPIN, (1, 0), 40)
    return 9, p, p == 9


def p_gingerbread(seed):
    p = _period_exact(lozi_ab(-1), (0, 0), 60)
    return 6, p, p == 6


def p_lozi_one(seed):
    p = _period_exact(lozi_ab(1), (0, 0), 80)
    return 12, p, p == 12


def p_lozi_one_two_cycle(seed):
    (cyc,) = an.two_cycles_lozi_ab(1)
    f = an.as_stepper(lozi_ab(1))
    pts = [tuple(map(str, q)) for q in cyc.points]
    ok = all(f(f(q)) == q and f(q) != q for q in cyc.points)
    return [["1", "-1"], ["-1", "1"]], [list(q) for q in pts], ok


def p_beardon(p_value):
    def run(seed):
        if p_value == 2:
            params = beardon(math.sqrt(2), -2.0)
        else:
            alpha = 1.0
            params = beardon(alpha, -math.sqrt(2 * (1 + math.cos(math.pi / p_value)) + alpha ** 2))
        orbit = iterate(params, (1, 0), 16 * p_value)
        got = an.detect_period(orbit, tol=1e-7)
        return 4 * p_value, got, got == 4 * p_value
    return run


def p_a_half_orbit(seed):
    orbit = iterate(lozi_ab(Fraction(1, 2)), (0, 0), 61, exact=True)
    ok = True
    for n in range(61):
        formula = (Fraction(1, 3) * (-1) ** (n + 1) - Fraction(4, 3) * Fraction(1, 2) ** (n + 1) + 1)
        ok &= orbit.points[n + 1].x == formula
    first = [str(p.y) for p in orbit.points[:6]]
    return ["0", "1", "1/2", "5/4", "5/8", "21/16"], first, ok and first == ["0", "1", "1/2", "5/4", "5/8", "21/16"]


def p_a_half_attraction(seed, count=200):
    params = lozi_ab(0.5)
    hits = 0
    for ini in uniform_initials(seed, count, -50, 50):
        cyc, _ = converge_to_cycle(params, ini, 1e-8)
        if cyc is not None and cyc.period in (1, 2) and abs(cyc.points[0].x + cyc.points[0].y - 2) <= 1e-8:
            hits += 1
    return f"{count}/{count} on x+y=2", f"{hits}/{count}", hits == count


def p_region_proof(seed):
    reports = verify_global_attraction_a_half(3, 64, Fraction(1, 2 ** 20), seed=seed)
    good = sum(r.certified for r in reports)
    return f"{len(reports)} certified", f"{good} certified", good == len(reports)


def p_a_minus_half_attraction(seed, count=200):
    params = lozi_ab(-0.5)
    ok = 0
    for ini in uniform_initials(seed, count, -20, 20):
        last = iterate(params, ini, 400).points[-1]
        ok += max(abs(last.x - 1), abs(last.y - 1)) <= 1e-8
    return f"{count}/{count} -> 1", f"{ok}/{count}", ok == count


def p_a_minus_half_eigen(seed):
    cyc = an.Cycle(1, (Point(1, 1),))
    rep = an.cycle_stability(lozi_ab(-0.5), cyc)
    mods = [abs(e) for e in rep.eigenvalues]
    ok = all(abs(m - math.sqrt(0.5)) <= 1e-12 for m in mods)
    ok &= any(abs(e - complex(0.25, math.sqrt(7) / 4)) <= 1e-12 for e in rep.eigenvalues)
    return "1/4 +- i sqrt(7)/4", [[e.real, e.imag] for e in rep.eigenvalues], ok


def p_stability_075(seed):
    (cyc,) = an.two_cycles_lozi_ab(Fraction(3, 4))
    rep = an.cycle_stability(lozi_ab(Fraction(3, 4)), cyc)
    return "AsymptoticallyStable", rep.classification.value, \
        rep.classification is an.Stability.ASYMPTOTICALLY_STABLE


def p_two_cycle_099(seed):
    cyc, steps = converge_to_cycle(lozi_ab(0.99), (0, 0), 1e-8, max_steps=200_000, burn=10_000)
    period = None if cyc is None else cyc.period
    return 2, period, period == 2


def p_spiral(seed):
    cloud = sample_attractor(lozi_ab(-1.01), (0, 0), 0, 10 ** 6, guard=1e6)
    return "unbounded", "bounded" if cloud.bounded else "unbounded", not cloud.bounded


def p_third_quadrant(seed):
    cloud = sample_attractor(lozi_ab(5), (0, 0), 0, 1000, guard=1e6)
    f = cloud.final_state
    ok = (not cloud.bounded) and f.x < 0 and f.y < 0
    return "escape with x<0, y<0", [f.x, f.y], ok


def p_eqlex(seed):
    obs = {}
    for ini in ((0, 1), (3, 1), (-2, -5), (2, 2)):
        entry = an.eqlex_case1_entry(ini)
        obs[str(ini)] = [str(an.classify_eqlex_orbit(ini)),
                         None if entry is None else [entry[0], str(entry[1])]]
    exp = {"(0, 1)": ["Divergent(1)", [0, "1"]],
           "(3, 1)": ["Divergent(4)", [3, "1"]],
           "(-2, -5)": ["Divergent(5)", [2, "12"]],
           "(2, 2)": ["Equilibrium", None]}
    return exp, obs, exp == obs


def p_eqlex_equilibria(seed):
    gl = an.equilibria(an.EQLEX)
    mx = an.equilibria(MaxEqParams(3, 1, 1, 8, 1))
    obs = [gl.endpoint, gl.direction, mx.endpoint, mx.direction]
    ok = gl.endpoint == 0 and gl.direction == 1 and abs(mx.endpoint - 2) <= 1e-12 and mx.direction == 1
    return [0, 1, 2, 1], obs, ok


def p_conjugation(seed):
    _, _, mp1 = conjugate_family(an.EQLEX)
    mp2 = derive_max_params(GeneralizedLoziParams(0.5, -0.5, -2, 1), ChangeOfVariables(2, 0, 1))
    obs = [[mp1.k, mp1.l, mp1.m, mp1.c], [mp2.k, mp2.l, mp2.m, mp2.M, mp2.c]]
    exp = [[3, 1, 1, 1], [1, 1, 2, 1, 2]]
    return exp, obs, obs == exp


def p_misiurewicz(seed):
    r1, r2 = misiurewicz_check(1.7, 0.3), misiurewicz_check(1.7, 0.5)
    return [True, False], [r1.overall, r2.overall], r1.overall and not r2.overall


def p_trapping(seed):
    tri = trapping_triangle(1.7, 0.3)
    ok, worst = verify_trapping(tri, LoziParams(1.7, 0.3), 100)
    return "no violation", worst, ok


def p_abu_saris(seed):
    cloud = sample_attractor(ABU_SARIS, (1, 2), 1000, 100_000)
    period = an.detect_period(cloud.points[-10_000:], tol=1e-6)
    counts = [box_count(cloud, g) for g in (1.0, 0.1)]
    ok = cloud.bounded and period is None
    return "bounded, aperiodic", {"bounded": cloud.bounded, "period": period,
                                  "box_counts": counts}, ok


PRESETS = {p.name: p for p in [
    Preset("crampin-period9", "x' = |x| - x_prev is periodic with period 9 from (1, 0)", p_crampin),
    Preset("gingerbread-period6", "Lozi a=b=-1 from (0,0) is 6-periodic", p_gingerbread),
    Preset("lozi-a1-period12", "Lozi a=b=1 from (0,0) is 12-periodic", p_lozi_one),
    Preset("lozi-a1-two-cycle", "Lozi a=b=1 has the 2-cycle (1,-1) <-> (-1,1)", p_lozi_one_two_cycle),
    Preset("beardon-p2", "x' = sqrt2|x| - 2x - x_prev has period 8", p_beardon(2)),
    Preset("beardon-p3", "x' = |x| - 2x - x_prev has period 12", p_beardon(3)),
    Preset("a-half-orbit", "a=b=1/2 orbit of (0,0) is 0,1,1/2,5/4,5/8,21/16,...", p_a_half_orbit),
    Preset("a-half-attraction", "a=b=1/2: random orbits converge to 2-cycles on x+y=2",
           p_a_half_attraction),
    Preset("a-half-region-proof", "a=b=1/2: exact invariant-region certificate, 3 levels",
           p_region_proof),
    Preset("a-minus-half-attraction", "a=b=-1/2: random orbits converge to the fixed point 1",
           p_a_minus_half_attraction),
    Preset("a-minus-half-eigenvalues", "a=b=-1/2: DF(1,1) has eigenvalues 1/4 +- i sqrt7/4",
           p_a_minus_half_eigen),
    Preset("stability-a075", "a=b=3/4: the 2-cycle is asymptotically stable", p_stability_075),
    Preset("two-cycle-a099", "a=b=0.99: the orbit of (0,0) tends to a 2-cycle", p_two_cycle_099),
    Preset("spiral-a-1.01", "a=b=-1.01: the orbit of (0,0) escapes", p_spiral),
    Preset("escape-a5", "a=b=5: the orbit of (0,0) escapes through the third quadrant",
           p_third_quadrant),
    Preset("eqlex-divergence", "y' = 3/2|y| + y/2 - y_prev: non-equilibrium orbits reach linear growth",
           p_eqlex),
    Preset("eqlex-equilibria", "equilibria form the ray [0, inf); max form x >= cbrt(8) = 2",
           p_eqlex_equilibria),
    Preset("conjugation-examples", "log change of variables gives (3,1,1) and (1,1,2,M=1,c=2)",
           p_conjugation),
    Preset("misiurewicz", "parameter conditions hold at (1.7,0.3) and fail at (1.7,0.5)",
           p_misiurewicz),
    Preset("trapping-triangle", "the triangle I, F(I), F^2(I) is mapped into itself at (1.7,0.3)",
           p_trapping),
    Preset("abu-saris-attractor", "max(x^2, 2.3)/(x x_prev) has a bounded aperiodic attractor",
           p_abu_saris),
]}


def run_preset(name: str, seed: int = 0) -> dict:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    preset = PRESETS[name]
    expected, observed, ok = preset.run(seed)
    return {"preset": name, "claim": preset.claim, "expected": expected,
            "observed": observed, "pass": bool(ok)}
