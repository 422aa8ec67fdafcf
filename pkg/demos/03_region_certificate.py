"""
An exact certificate of global attraction
=========================================

For a = b = 1/2 every orbit of the Lozi map ends up in the square [0,2]^2.
We push exact rational polygons forward and check where they land.
"""

# %%
from fractions import Fraction as F

from lozimax.polygon import ConvexPolygon
from lozimax.region import (Square, advance_until_contained, poly_image, segment_s0,
                            square_transition_check, verify_global_attraction_a_half)

half = F(1, 2)

# the map is piecewise affine, so a convex polygon maps to at most two pieces
for piece in poly_image(half, ConvexPolygon.square(1, -1)):
    print([(str(x), str(y)) for x, y in piece.vertices])

# %%
# A frame square lands in predicted neighbours one level down.
r = square_transition_check(2, 2)
print(r.lemma, r.status.value, r.detail)

# %%
# The segment from (2,0) to (3,0) needs a few steps; the pieces that remain
# hug the 2-cycle endpoints and are certified once they are tiny.
r = advance_until_contained(half, segment_s0(), Square(0, 0), 64)
print(r.status.value, "after", r.steps_used, "steps")

# %%
# The whole suite for three levels of frames around the square.
reports = verify_global_attraction_a_half(levels=3, max_steps=64)
print(sum(r.certified for r in reports), "of", len(reports), "checks certified")
