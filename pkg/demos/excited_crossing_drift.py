"""
Drift of the first-excited-state crossing with ring size
========================================================

At small J2 the first excited state is a triplet. Further on, a singlet
drops below it. The crossing sits at exactly 0.25 for six sites and moves
down as the ring grows. This is the finite-size trace of the infinite-order
transition near 0.241.
"""

import numpy as np

from j1j2discord import detect_crossings, run_sweep

for n in (6, 8, 10, 12):
    # a coarse grid is enough: the crossing is refined by bisection
    table = run_sweep(n, 0.15, 0.35, 21, n_levels=2, observables=("dg",))
    found = [c for c in detect_crossings(table) if c.kind == "es_crossing" and c.level == "es1"]
    for c in found:
        print(f"N={n:2d}  first-ES crossing at J2 = {c.j2_location:.5f} (+- {c.resolution:.0e})")

# GMQD of the first excited state drops across the crossing
table = run_sweep(10, 0.2, 0.3, 41, n_levels=2, observables=("dg",))
dg = table.column("dg_nn", "es1")
j = int(np.argmax(np.abs(np.diff(dg))))
print(f"N=10 first-ES dg_nn: {dg[j]:.5f} -> {dg[j + 1]:.5f} between J2 = {table.j2[j]:.4f} and {table.j2[j + 1]:.4f}")
