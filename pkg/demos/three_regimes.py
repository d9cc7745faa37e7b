"""Parabolic, hyperbolic and periodic behaviour at three parameter choices.

Run: python3 demos/three_regimes.py
"""
from pwlmap import MapParams, classify, orbit_divergence_check

for label, P in [("parabolic", MapParams(2, 2)), ("hyperbolic", MapParams(3, 3)),
                 ("periodic", MapParams(-1, -1))]:
    cls = classify(P)
    print(f"{label:>10}  a={P.a:g} b={P.b:g}  -> {cls}")
    if cls.tag in "PH":
        rep = orbit_divergence_check(P, cls, (1.0, 0.3), N=2000, threshold=1e6)
        print(f"{'':>12}forward growth {rep.forward.kind}, backward {rep.backward.kind}, "
              f"consistent={rep.consistent}")
        for key, g in rep.exceptional.items():
            print(f"{'':>12}{key}: min |v| {g.min_modulus:.2e}, max |v| {g.max_modulus:.2e}")
