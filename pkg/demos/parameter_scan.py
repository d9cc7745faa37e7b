"""A coarse picture of the (mu, nu) plane, coloured by dynamical class.

Run: python3 demos/parameter_scan.py [prefix]   (writes prefix.csv and prefix.ppm)
"""
import sys
from collections import Counter

from pwlmap.scan import ScanConfig, default_workers, scan_grid

prefix = sys.argv[1] if len(sys.argv) > 1 else "scan_demo"
cfg = ScanConfig(x_range=(0, 2), y_range=(-2, 2), width=80, height=80, N=2000,
                 workers=default_workers(), csv_path=prefix + ".csv", ppm_path=prefix + ".ppm")
cells = scan_grid(cfg)

print(f"{len(cells)} cells over mu in [0, 2], nu in [-2, 2]")
for tag, n in sorted(Counter(c.tag for c in cells).items()):
    print(f"  {tag}: {n}")
big_a = [c for c in cells if c.params.a >= 2]
print(f"cells with a >= 2: {len(big_a)}, largest rotation {max(c.rotation for c in big_a):.1e}")
print("wrote", cfg.csv_path, "and", cfg.ppm_path)
