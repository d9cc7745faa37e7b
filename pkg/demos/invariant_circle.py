"""An orbit that fills a closed curve, checked against the exact ellipse when the map is linear.

Run: python3 demos/invariant_circle.py [out.csv]
"""
import math
import sys

import numpy as np

from pwlmap import MapParams, build_circle, linear_ellipse_oracle
from pwlmap.invariant_circle import invariance_defect
from pwlmap.scan import circle_csv

c = 2 * math.cos(1.0)
lin = build_circle(MapParams(c, c), (1, 0), 10**5)
exact = linear_ellipse_oracle(1.0, (1, 0), angles=lin.angles)
print(f"linear a=b={c:.4f}: {len(lin.angles)} samples, "
      f"max deviation from the ellipse {np.abs(lin.radii - exact.radii).max():.1e}")

# a genuinely piecewise-linear example: no closed form, so check invariance and symmetry
P = MapParams(1.3, 0.9)
for N in (10**3, 10**4, 10**5):
    prof = build_circle(P, (1, 0), N)
    print(f"a=1.3 b=0.9, N={N:>6}: symmetry defect {prof.symmetry_defect:.1e}, "
          f"invariance defect {invariance_defect(P, prof):.1e}")

if len(sys.argv) > 1:
    with open(sys.argv[1], "w") as fh:
        fh.write(circle_csv(prof))
    print("wrote", sys.argv[1])
