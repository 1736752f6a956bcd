"""The map f(z) = z + 1 + exp(-z) pushes the right half plane off to infinity.

Run:  python demos/baker_domain.py [out.ppm]
"""
import sys

import numpy as np

from escdyn import FATOU, classify, classify_array, orbit
from escdyn.raster import GridSpec, rasterize, write_ppm

# Along the real axis the orbit marches right by roughly one per step.
rec = orbit(FATOU, 0.5, 8)
for n, v in enumerate(rec.values):
    print(f"f^{n}(0.5) = {v.real:9.5f}{v.imag:+.5f}i")
print("verdict:", rec.classification)

# Real parts above 0.05 are certified at once; close to the axis it can take a step.
rng = np.random.default_rng(1)
z = 5 * rng.random(5000) + 1j * (100 * rng.random(5000) - 50)
res = classify_array(FATOU, z)
print("steps needed:", np.bincount(res.step))

# The fixed points (2k+1)*pi*i on the imaginary axis do not move.
for k in (-1, 0, 1):
    print(f"z = {2 * k + 1}*pi*i:", classify(FATOU, (2 * k + 1) * np.pi * 1j))

field = rasterize(FATOU, GridSpec((-4.0, 4.0, -8.0, 8.0), 200, 400), threads=4)
print(f"escaping {field.fraction(0):.3f}, bounded {field.fraction(1):.4f}, undecided {field.fraction(2):.3f}")
if len(sys.argv) > 1:
    write_ppm(field, sys.argv[1])
    print("wrote", sys.argv[1])
