"""Hybrid flag-bridge EC against hybrid Steane EC at low noise.

Shows why the estimated logical error rate overstates Steane EC failures:
most estimated failures are weight-2 X residuals that an ideal decoder fixes.
"""
import sys

import numpy as np

from ftqec.noise import NoiseParams
from ftqec.protocols import decode, decode_steane, run_hybrid_fb, run_steane_hybrid

shots = int(sys.argv[1]) if len(sys.argv) > 1 else 500_000
rng = np.random.default_rng(2024)

print("      p  protocol            accepted   est fails  true fails")
for p in (3e-4, 6e-4, 1e-3):
    params = NoiseParams(p)
    fb = decode(run_hybrid_fb(params, shots, rng), "f1s2")
    steane = run_steane_hybrid(params, shots, rng)
    rows = [("hybrid FB (f1s2)", fb),
            ("Steane, no PS", decode_steane(steane, False)),
            ("Steane, s0Z PS", decode_steane(steane, True))]
    for name, out in rows:
        a, fe, ft = out.counts()
        print(f"{p:7.0e}  {name:18s} {a:9d} {fe:11d} {ft:11d}")
