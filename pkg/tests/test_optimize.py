from math import comb

import numpy as np
import pytest

from symnonlocal.bell import (
    SettingsAssignment,
    evaluate_functional,
    hardy_functional,
    joint_probability,
    persistence_functional,
)
from symnonlocal.hardy import construct_hardy_measurements
from symnonlocal.optimize import (
    OptimizationConfig,
    closed_form_thetas,
    dicke_theta_search,
    optimize_settings,
    rescaled_dicke_value,
)
from symnonlocal.symcore import (
    MINUS,
    PLUS,
    DomainError,
    MeasurementBasis,
    PureQubit,
    dicke_state,
    from_named,
    random_state,
    random_unitary,
    rotate,
)


def dicke_settings(n, theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    b1 = MeasurementBasis(PureQubit(c, -s), PureQubit(s, c))
    return SettingsAssignment.identical(n, MeasurementBasis(PLUS, MINUS), b1)


@pytest.mark.parametrize("n,k", [(3, 1), (4, 2), (5, 2), (6, 4), (7, 3)])
def test_rescaled_value_matches_probabilities(n, k):
    for theta in (0.3, 1.2, 2.5):
        value = evaluate_functional(dicke_state(n, k), hardy_functional(n), dicke_settings(n, theta))
        assert abs(value / comb(n, k) - rescaled_dicke_value(n, k, theta)) < 1e-12


def test_rescaled_value_at_half_pi():
    assert abs(rescaled_dicke_value(4, 2, np.pi / 2)) < 1e-15


def test_closed_form_roots():
    for n in range(3, 11):
        for k in range(1, n):
            for t in closed_form_thetas(n, k):
                assert 0 <= t <= np.pi
                c, s = np.cos(t / 2), np.sin(t / 2)
                assert abs(((n - k) / n * c - k / n * s) ** 2 - 1 / (4 * n)) < 1e-9
    r = closed_form_thetas(4, 2)
    assert len(r) == 2
    assert abs(r[0] + r[1] - np.pi) < 1e-12


def test_closed_form_matches_quoted_root():
    # One of the returned roots is the one given by the quoted closed form.
    for n, k in [(4, 2), (6, 3), (8, 4), (10, 5)]:
        disc = 8 * k**4 - k**2 * n - 8 * k**3 * n + 4 * k**2 * n**2
        den = 2 * (2 * k**2 - 2 * k * n + n**2)
        cplus = (k * np.sqrt(n) - n * np.sqrt(n) + np.sqrt(disc)) / den
        roots = closed_form_thetas(n, k)
        if 0 <= cplus <= 1:
            assert min(abs(np.cos(t / 2) - cplus) for t in roots) < 1e-12


@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_third_term_bound_half_filling(n):
    # The all-ones term stays below (1/2)^(n+1) at both roots when k = n/2.
    k = n // 2
    for t in closed_form_thetas(n, k):
        third = np.cos(t / 2) ** (2 * k) * np.sin(t / 2) ** (2 * n - 2 * k)
        assert third < 0.5 ** (n + 1)
        assert rescaled_dicke_value(n, k, t) > 0


def test_third_term_bound_not_universal():
    # Away from k = n/2 the bound can fail at one root; the angle search still finds a violation.
    t = closed_form_thetas(5, 2)[0]
    third = np.cos(t / 2) ** 4 * np.sin(t / 2) ** 6
    assert third > 0.5**6
    assert dicke_theta_search(5, 2)[1] > 0


@pytest.mark.parametrize("k", [2, 3, 4])
def test_odd_parity_reduction(k):
    # P'(2k+1, k, t) <= P'(2k, k, t) / 2 on [0, pi/2].
    for t in np.linspace(0, np.pi / 2, 513):
        assert rescaled_dicke_value(2 * k + 1, k, t) <= 0.5 * rescaled_dicke_value(2 * k, k, t) + 1e-15


def test_theta_search_positive():
    for n in range(4, 11):
        for k in range(2, n - 1):
            theta, value = dicke_theta_search(n, k)
            assert 0 < theta < np.pi and value > 0
            assert abs(rescaled_dicke_value(n, k, theta) - value) < 1e-15


def test_theta_search_w_state_reported():
    # k = 1 is outside the guarantee; the search still returns its best angle.
    theta, value = dicke_theta_search(6, 1)
    assert 0 <= theta <= np.pi and np.isfinite(value)


def test_theta_search_errors():
    with pytest.raises(DomainError):
        dicke_theta_search(4, 0)
    with pytest.raises(DomainError):
        closed_form_thetas(4, 4)


def test_config_validation():
    for kw in ({"restarts": 0}, {"grid_points": 4}, {"step_tol": 0.0}):
        with pytest.raises(DomainError):
            OptimizationConfig(**kw)


def test_optimizer_basics():
    s = from_named("ghz", 3)
    f = hardy_functional(3)
    cfg = OptimizationConfig(restarts=6, seed=3)
    res = optimize_settings(s, f, cfg)
    assert abs(res.best_value - evaluate_functional(s, f, res.best_settings)) < 1e-10
    values = [v for _, v in res.trace]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert res.best_value == max(res.restart_values) or abs(res.best_value - max(res.restart_values)) < 1e-12
    again = optimize_settings(s, f, cfg)
    assert again.trace == res.trace and again.restart_values == res.restart_values


def test_optimizer_beats_construction():
    s = from_named("ghz", 3)
    f = hardy_functional(3)
    m = construct_hardy_measurements(s)
    res = optimize_settings(s, f, OptimizationConfig(restarts=3, seed=1), initial=m.settings(3))
    p1 = joint_probability(s, m.settings(3), "000", "000")
    assert res.best_value >= p1 - 1e-12


def test_identical_settings_mode():
    s = dicke_state(4, 2)
    f = hardy_functional(4)
    res = optimize_settings(s, f, OptimizationConfig(restarts=8, seed=0, identical_settings=True))
    a = res.best_settings.angles()
    assert np.allclose(a, a[0])
    # The symmetric Dicke settings are in the search space, so the optimum is at least as good.
    assert res.best_value >= comb(4, 2) * dicke_theta_search(4, 2)[1] - 1e-6


def test_rotation_invariance():
    rng = np.random.default_rng(41)
    s = random_state(3, rng)
    f = hardy_functional(3)
    cfg = OptimizationConfig(restarts=20, seed=2)
    a = optimize_settings(s, f, cfg).best_value
    b = optimize_settings(rotate(s, random_unitary(rng)), f, cfg).best_value
    assert abs(a - b) < 1e-6


def test_wrong_sizes():
    with pytest.raises(DomainError):
        optimize_settings(dicke_state(3, 1), persistence_functional(4, 3))


def test_tetrahedron_short_run_stays_negative():
    res = optimize_settings(from_named("tetrahedron"), persistence_functional(4, 3),
                            OptimizationConfig(restarts=4, seed=5))
    assert max(res.restart_values) <= 0
