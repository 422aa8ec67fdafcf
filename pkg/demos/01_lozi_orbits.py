"""
Orbits of the Lozi map
======================

Iterate x' = 1 - a|x| + b x_prev for a few parameter values and look at
what the orbits do: exact cycles, slow convergence, escape.
"""

# %%
# Exact arithmetic: with rational parameters the orbit is computed in Fractions,
# so periodicity is decided with == and no tolerance.
from fractions import Fraction as F

from lozimax import LoziParams, iterate, detect_period

orbit = iterate(LoziParams(F(-1), F(-1)), (0, 0), 30, exact=True)
print("a=b=-1 from (0,0):", [str(p.y) for p in orbit.points[:8]], "...")
print("period:", detect_period(orbit))

orbit = iterate(LoziParams(F(1), F(1)), (0, 0), 40, exact=True)
print("a=b=1 from (0,0): period", detect_period(orbit))

# %%
# a=b=1/2: every orbit settles on a 2-cycle (v, 2 - v). From the origin the
# even and odd terms approach 2/3 and 4/3.
orbit = iterate(LoziParams(F(1, 2), F(1, 2)), (0, 0), 60, exact=True)
print("a=b=1/2, x_59, x_60 =", float(orbit.points[59].y), float(orbit.points[60].y))

# %%
# Floating point orbits near a slowly attracting 2-cycle.
from lozimax.analysis import detect_asymptotic_cycle

cyc = detect_asymptotic_cycle(LoziParams(0.99, 0.99), (0.0, 0.0), 50_000, 200, 1e-8)
print("a=b=0.99: period", cyc.period, "points", cyc.points)

# %%
# Escape: the guard stops the orbit once it leaves a large box.
orbit = iterate(LoziParams(5, 5), (0, 0), 1000, guard=1e6)
print("a=b=5:", orbit.termination, "last state", orbit.points[-1])
