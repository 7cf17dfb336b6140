"""Measurement settings that exhibit the n-party Hardy paradox.

For a non-Dicke state the settings come from its Majorana points: setting 1
measures along an MP ``eta`` (so all-ones in setting 1 never happens), and
setting 0 measures along a point ``mu`` that is an MP of ``<eta|psi>`` but not
of ``psi``. Dicke states have no such ``mu``; for them a fixed pair of real
bases with a tuned angle violates the associated inequality instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bell import SettingsAssignment, joint_probability
from .majorana import DEFAULT_CLUSTER_TOL, is_dicke_up_to_rotation, state_to_points
from .optimize import dicke_theta_search
from .symcore import (
    DomainError,
    MeasurementBasis,
    PureQubit,
    SymmetricState,
    antipode,
    contract_amplitude,
    project_qubit,
    unitary_mapping,
    ZERO,
)

DEFAULT_HARDY_TOL = 1e-9


class SeparableStateError(DomainError):
    """Product states admit a local model; there is nothing to construct."""


@dataclass(frozen=True)
class HardyMeasurements:
    setting0: MeasurementBasis
    setting1: MeasurementBasis
    anchor_mp: PureQubit
    new_mp: PureQubit
    branch: str
    theta: float | None = None

    def settings(self, n: int) -> SettingsAssignment:
        return SettingsAssignment.identical(n, self.setting0, self.setting1)


@dataclass(frozen=True)
class HardyConditionReport:
    p1: float
    max_p2_residual: float
    p5_residual: float
    satisfied: bool


def _all_ones_amplitude(state: SymmetricState, q: PureQubit) -> complex:
    return contract_amplitude(state, [q] * state.n)


def _hardy_amplitude(state: SymmetricState, eta: PureQubit, mu_perp: PureQubit) -> complex:
    return contract_amplitude(state, [eta] + [mu_perp] * (state.n - 1))


def _candidates(state: SymmetricState, cluster_tol: float):
    """All admissible ``(eta, mu)`` pairs with their ``p1`` and distance to the MPs of ``state``."""
    spec = state_to_points(state, cluster_tol)
    mps = spec.points
    out = []
    for eta in mps:
        sub, norm = project_qubit(state, eta)
        if sub is None or norm == 0.0:
            continue
        for mu in state_to_points(sub, cluster_tol).points:
            dist = min(mu.chordal_distance(p) for p in mps)
            if dist <= cluster_tol:
                continue
            p1 = abs(_all_ones_amplitude(state, antipode(mu))) ** 2
            out.append((p1, dist, eta, mu))
    return spec, out


def _pick(candidates):
    # Ranking is a pure function of the candidate values, not of list order.
    def key(c):
        p1, dist, eta, mu = c
        return (-round(p1, 12), -round(dist, 12), *np.round(eta.bloch_angles(), 12),
                *np.round(mu.bloch_angles(), 12))
    return min(candidates, key=key)


def construct_hardy_measurements(state: SymmetricState, tol: float = DEFAULT_CLUSTER_TOL) -> HardyMeasurements:
    """Identical per-party bases for which the Hardy conditions hold, or the Dicke fallback.

    Among all admissible pairs the one with the largest ``p1`` is used; ties go
    to the larger distance between ``mu`` and the state's MPs, then to the
    lexicographically smaller Bloch angles.
    """
    if state.n < 2:
        raise DomainError("need at least two parties")
    dicke = is_dicke_up_to_rotation(state, cluster_tol=tol)
    if dicke is not None:
        axis, k = dicke
        if k == 0:
            raise SeparableStateError("separable state, no Hardy test")
        if state.n < 3:
            raise DomainError("the Dicke construction needs n >= 3")
        m = dicke_measurements(state.n, k)
        u = unitary_mapping(ZERO, axis)
        rot = lambda q: PureQubit.from_vector(u @ q.vector)  # noqa: E731
        return HardyMeasurements(
            MeasurementBasis(rot(m.setting0.outcome0), rot(m.setting0.outcome1)),
            MeasurementBasis(rot(m.setting1.outcome0), rot(m.setting1.outcome1)),
            rot(m.anchor_mp), rot(m.new_mp), "dicke", m.theta,
        )

    spec, cands = _candidates(state, tol)
    if len(spec.clusters) == 1:
        raise SeparableStateError("separable state, no Hardy test")
    if not cands:
        raise DomainError("no admissible point found; state is numerically too close to a Dicke state")
    _, _, eta, mu = _pick(cands)

    eta_perp, mu_perp = antipode(eta), antipode(mu)
    # Outcome 1 of setting 1 must kill the all-ones amplitude, and outcome 0 of
    # setting 0 is the vector whose (n-1)-fold power with eta vanishes.
    if abs(_all_ones_amplitude(state, eta_perp)) <= abs(_all_ones_amplitude(state, eta)):
        setting1 = MeasurementBasis(eta, eta_perp)
    else:
        setting1 = MeasurementBasis(eta_perp, eta)
    first = setting1.outcome0
    if abs(_hardy_amplitude(state, first, mu_perp)) <= abs(_hardy_amplitude(state, first, mu)):
        setting0 = MeasurementBasis(mu_perp, mu)
    else:
        setting0 = MeasurementBasis(mu, mu_perp)
    return HardyMeasurements(setting0, setting1, eta, mu, "general")


def dicke_measurements(n: int, k: int, grid_points: int = 4096) -> HardyMeasurements:
    """Settings ``{|+>, |->}`` and a real basis at the best angle for ``S(n, k)``."""
    if k in (0, n):
        raise SeparableStateError("S(n, 0) and S(n, n) are product states")
    if n < 3 or not 1 <= k <= n - 1:
        raise DomainError(f"need n >= 3 and 1 <= k <= n-1, got ({n}, {k})")
    theta, _ = dicke_theta_search(n, k, grid_points)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    plus = PureQubit(1.0, 1.0)
    minus = PureQubit(1.0, -1.0)
    b1 = MeasurementBasis(PureQubit(c, -s), PureQubit(s, c))
    return HardyMeasurements(MeasurementBasis(plus, minus), b1, ZERO, plus, "dicke", float(theta))


def check_hardy_conditions(state: SymmetricState, m: HardyMeasurements,
                           tol: float = DEFAULT_HARDY_TOL) -> HardyConditionReport:
    n = state.n
    settings = m.settings(n)
    zeros = (0,) * n
    p1 = joint_probability(state, settings, zeros, zeros)
    p2 = max(
        joint_probability(state, settings, tuple(int(j == i) for j in range(n)), zeros)
        for i in range(n)
    )
    p5 = joint_probability(state, settings, (1,) * n, (1,) * n)
    return HardyConditionReport(p1, p2, p5, bool(p1 > tol and p2 < tol and p5 < tol))
