"""Rotation number along a line in parameter space: flat steps at rationals, monotone overall.

Run: python3 demos/rotation_staircase.py [out.csv]
"""
import sys
from fractions import Fraction

import numpy as np

from pwlmap.scan import curve_csv, rotation_curve

N = 20000
rows = rotation_curve("a", 1.0, (-4.0, 2.0), N=N, samples=241)
r = np.array([x[1] for x in rows])
print(f"a = 1, b from -4 to 2: rotation falls from {r[0]:.4f} to {r[-1]:.4f}")
print("largest upward step:", max(np.diff(r).max(), 0.0), f"(tolerance 2/N = {2 / N:g})")

# report the values the sweep spends the most samples on
fr = [Fraction(x).limit_denominator(12) for x in r]
locked = [f for f, x in zip(fr, r) if abs(float(f) - x) <= 2 / N]
for f in sorted(set(locked), reverse=True):
    print(f"  plateau at {f}: {locked.count(f)} samples")

if len(sys.argv) > 1:
    with open(sys.argv[1], "w") as fh:
        fh.write(curve_csv(rows))
    print("wrote", sys.argv[1])
