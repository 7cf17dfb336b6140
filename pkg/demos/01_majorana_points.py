"""Majorana points of a few symmetric states.

A symmetric n-qubit state is a symmetrized product of n single-qubit states,
its Majorana points. This walks through the points of some standard states and
shows that they survive a round trip back to Dicke coefficients.
"""

import numpy as np

from symnonlocal import (
    degeneracy_profile,
    from_named,
    is_majorana_point,
    points_to_state,
    rotate,
    state_to_points,
)
from symnonlocal.symcore import random_unitary


def show(label, state):
    spec = state_to_points(state)
    print(f"{label}: profile {degeneracy_profile(spec)}")
    for p, d in spec.clusters:
        t, phi = p.bloch_angles()
        print(f"    t = {t:.4f}  phi = {phi:.4f}  x{d}")
    return spec


# GHZ: three points spaced evenly around the equator
show("ghz(3)", from_named("ghz", 3))

# The tetrahedron state: four points with pairwise angle arccos(-1/3)
spec = show("tetrahedron", from_named("tetrahedron"))
v = np.array([p.bloch_vector() for p in spec.points])
print("    pairwise dot products:", np.round(v @ v.T, 6)[np.triu_indices(4, 1)])

# |000+> symmetrized: a threefold point at |0> and one at |+>
show("d3plus", from_named("d3plus"))

# Dicke states keep two antipodal clusters
show("dicke(5,2)", from_named("dicke", 5, 2))

# Rotating the state rotates the points with it
rng = np.random.default_rng(7)
u = random_unitary(rng)
state = from_named("tetrahedron")
rotated = state_to_points(rotate(state, u))
print("rotated tetrahedron profile:", degeneracy_profile(rotated))

# Every point passes the antipode test, with multiplicity equal to its degeneracy
d3 = from_named("d3plus")
for p, d in state_to_points(d3).clusters:
    r = is_majorana_point(d3, p)
    print(f"    residual {r.residual:.1e}, multiplicity {r.multiplicity} (degeneracy {d})")

back = points_to_state(state_to_points(d3))
print("round trip fidelity:", abs(np.vdot(back.coeffs, d3.coeffs)) ** 2)
