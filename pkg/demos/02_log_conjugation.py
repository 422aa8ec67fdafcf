"""
From Lozi maps to max-type equations
====================================

A change of variables y = q log_A z + p turns the generalized Lozi map
y' = alpha|y| + beta y + gamma y_prev + delta into the max-type equation
z' = c max(z^k, M) / (z^l z_prev^m).
"""

# %%
import math

from lozimax import GeneralizedLoziParams, MaxEqParams, iterate
from lozimax.conjugation import (ChangeOfVariables, conjugate_family, conjugacy_residual,
                                 derive_max_params, phi, recover_generalized)

gl = GeneralizedLoziParams(1.5, 0.5, -1, 0)
case, cov, mp = conjugate_family(gl)
print(case.value, cov, mp)

# %%
# A non-canonical choice of p, q and base.
mp = derive_max_params(GeneralizedLoziParams(0.5, -0.5, -2, 1), ChangeOfVariables(2, 0, 1))
print("k, l, m, M, c =", mp.k, mp.l, mp.m, mp.M, mp.c)

# %%
# Going back: a max-type equation has a generalized Lozi partner.
mp = MaxEqParams(2, 1, 1, 2.3, 1)
gl, cov = recover_generalized(mp)
print(gl, cov)

# %%
# The two maps commute with the change of variables, up to rounding.
worst = max(conjugacy_residual(gl, mp, cov, (x, y))
            for x in (0.01, 0.5, 3.0, 40.0) for y in (0.2, 1.0, 7.5))
print("largest residual on a small grid:", worst)

# %%
# Transported orbits stay together.
zs = iterate(mp, (1.0, 2.0), 20).points
ys = iterate(gl, phi(cov, (1.0, 2.0)), 20).points
print(max(math.dist(phi(cov, z), y) for z, y in zip(zs, ys)))
