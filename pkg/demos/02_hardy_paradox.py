"""Hardy paradox settings built from Majorana points.

For any entangled symmetric state that is not a Dicke state, setting 1 is taken
along one of its Majorana points and setting 0 along a point that only appears
after projecting one qubit onto that point. The three Hardy conditions then
hold exactly, and the Bell value equals the success probability.
"""

import numpy as np

from symnonlocal import (
    check_hardy_conditions,
    construct_hardy_measurements,
    evaluate_functional,
    from_named,
    hardy_functional,
    lhv_max,
)
from symnonlocal.symcore import random_state

for n in range(2, 7):
    value, witness = lhv_max(hardy_functional(n))
    print(f"LHV maximum of P^{n}: {value}")

states = {
    "ghz(3)": from_named("ghz", 3),
    "w(4)": from_named("w", 4),
    "tetrahedron": from_named("tetrahedron"),
    "d3plus": from_named("d3plus"),
    "random(6)": random_state(6, np.random.default_rng(3)),
}

for label, state in states.items():
    m = construct_hardy_measurements(state)
    r = check_hardy_conditions(state, m)
    bell = evaluate_functional(state, hardy_functional(state.n), m.settings(state.n))
    print(f"{label:12s} branch={m.branch:8s} p1={r.p1:.5f} "
          f"p2={r.max_p2_residual:.1e} p5={r.p5_residual:.1e} P^n={bell:.5f}")
