"""Encoding failure rate of the three encoders, with and without flag post-selection.

Usage: python3 demos/encoding_sweep.py [shots]
"""
import sys

import numpy as np

from ftqec.stats import SweepConfig, pseudo_threshold, run_sweep

shots = int(sys.argv[1]) if len(sys.argv) > 1 else 50_000
ps = [float(p) for p in np.geomspace(3e-3, 6e-2, 7)]

for protocol in ("enc-fb", "enc-gotorl-fb", "enc-gotorl-steane"):
    for pol in ("trivial", "none"):
        res = run_sweep(SweepConfig(protocol, ps, shots=shots, seed=1, policy=pol))
        th = pseudo_threshold(res, which="true")
        print(f"\n{protocol}  policy={pol}  " +
              (f"pseudo-threshold {th.value:.4f}" if th.found else th.hint))
        print("       p    p_Enc     accept")
        for pt in res.points:
            print(f"{pt.p:8.4f} {pt.rate_true:8.5f} {pt.acceptance:10.4f}")
