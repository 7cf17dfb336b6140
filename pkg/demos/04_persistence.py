"""Degenerate points and the persistence functional.

A d-fold Majorana point makes the all-ones outcome impossible on every subset
of more than n-d parties. The persistence functional subtracts those subset
probabilities. This script checks the LHV bound and runs the settings search
on the |000+> state (a threefold point) and the tetrahedron state (no
degeneracy). The search reports the best value it found, not a certified
maximum.
"""

import time

from symnonlocal import (
    OptimizationConfig,
    SettingsAssignment,
    from_named,
    joint_probability,
    lhv_max,
    optimize_settings,
    persistence_functional,
)
from symnonlocal.symcore import COMPUTATIONAL

for n, d in [(4, 2), (4, 3), (5, 3), (6, 4)]:
    print(f"LHV maximum of Q_{d}^{n}: {lhv_max(persistence_functional(n, d))[0]}")

d3 = from_named("d3plus")
sa = SettingsAssignment.identical(4, COMPUTATIONAL, COMPUTATIONAL)
for m in (1, 2, 3, 4):
    p = joint_probability(d3, sa, (1,) * m, (1,) * m, parties=range(m))
    print(f"|D3>, computational basis, P(1..1) on {m} parties: {p:.3e}")

f = persistence_functional(4, 3)
for name in ("d3plus", "tetrahedron"):
    t0 = time.perf_counter()
    res = optimize_settings(from_named(name), f, OptimizationConfig(restarts=64, seed=0))
    print(f"{name}: best Q_3^4 found {res.best_value:.5f}, "
          f"largest restart {max(res.restart_values):.5f} ({time.perf_counter() - t0:.0f}s)")
