"""Dicke states and the rotated-basis angle.

Dicke states have no new Majorana point after projection, so they need fixed
settings instead: |+>/|-> for setting 0 and a real basis at angle theta for
setting 1. The rescaled Bell value is scanned over theta and its maximum is
compared with the roots of the middle term.
"""

import numpy as np

from symnonlocal import closed_form_thetas, dicke_theta_search, rescaled_dicke_value

print(" n  k   theta*    value       roots")
for n in range(4, 11):
    for k in range(2, n // 2 + 1):
        theta, value = dicke_theta_search(n, k)
        roots = ", ".join(f"{t:.4f}" for t in closed_form_thetas(n, k))
        print(f"{n:2d} {k:2d}  {theta:.5f}  {value:.3e}  [{roots}]")

# At tan(theta/2) = (n-k)/k the middle term vanishes; for S(4,2) that is pi/2,
# where the first and last terms cancel exactly.
print("S(4,2) at pi/2:", rescaled_dicke_value(4, 2, np.pi / 2))

# The all-ones term at the roots, against the (1/2)^(n+1) threshold
for n, k in [(6, 3), (5, 2), (8, 2)]:
    for t in closed_form_thetas(n, k):
        third = np.cos(t / 2) ** (2 * k) * np.sin(t / 2) ** (2 * n - 2 * k)
        print(f"({n},{k}) root {t:.4f}: third term {third:.3e} vs {0.5 ** (n + 1):.3e}")

# W states are outside the guarantee; report what the search finds
for n in range(3, 8):
    print(f"W({n}) best value {dicke_theta_search(n, 1)[1]:.3e}")
