"""Shifting f by 2*pi*i gives a commuting partner g whose composite escapes where f stays put.

Run:  python demos/translate_counterexample.py
"""
import math

import numpy as np

from escdyn import FATOU, classify, commutes_numerically, compose, evaluate, translate
from escdyn.harness import check_fixed_points_escape, composition_identity_errors
from escdyn.sampling import SampleSpec

g = translate(FATOU, 2j * math.pi)
fg = compose(FATOU, g)

print("f and g commute:", commutes_numerically(FATOU, g, SampleSpec(count=200)).ok)

# Iterating f o g n times equals iterating f 2n times and shifting by 2n*pi*i.
pts = SampleSpec(count=500, seed=7).points()
for label, err in composition_identity_errors(pts, 6).items():
    print(f"{label}: worst relative error {np.nanmax(err):.2e}")

# On a fixed point of f the shift is all that is left, so the composite runs away.
z = 1j * math.pi
v = z
for n in range(1, 5):
    v = evaluate(fg, v)
    print(f"(f o g)^{n}(i pi) = {v.imag / math.pi:.1f} pi i")
print("under f:    ", classify(FATOU, z))
print("under g:    ", classify(g, z))
print("under f o g:", classify(fg, z))

rep = check_fixed_points_escape(range(-5, 6))
print(rep.summary())
print("escaping for f o g but not for f:", rep.details["counterexample_I_fg_not_in_I_f_and_I_g"])
