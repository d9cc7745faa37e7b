"""Every orbit of the map at (mu, nu) = (1, 0) closes up after nine steps.

Run: python3 demos/period_nine.py
"""
import numpy as np

from pwlmap import MapParams, classify, iterate, symbolic_word
from pwlmap.plane_map import power_many

P = MapParams.from_mu_nu(1.0, 0.0)
print(f"slopes a={P.a:g}, b={P.b:g}")

orb = iterate(P, (1, 0), 9)
print("orbit of (1, 0):")
for k, (x, y) in enumerate(orb.points):
    print(f"  {k}: ({x:+g}, {y:+g})")
print("sign word:", "".join("+0-"[1 - int(s)] for s in symbolic_word(orb)))

# not just this orbit: random starts return too
pts = np.random.default_rng(7).normal(size=(5, 2))
print("max |T^9 v - v| over 5 random v:", np.abs(power_many(P, pts, 9) - pts).max())

print("classify:", classify(P))
