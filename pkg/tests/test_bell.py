import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symnonlocal.bell import (
    BellFunctional,
    LhvStrategy,
    SettingsAssignment,
    Term,
    evaluate_functional,
    hardy_functional,
    joint_probability,
    lhv_max,
    persistence_functional,
    strategy_value,
)
from symnonlocal.permanent import permanent, permanent_bruteforce
from symnonlocal.symcore import (
    COMPUTATIONAL,
    ZERO,
    DomainError,
    MeasurementBasis,
    ResourceError,
    from_named,
    product_state,
    random_qubit,
    random_state,
)


def random_settings(n, rng):
    return SettingsAssignment(tuple(
        (MeasurementBasis.from_qubit(random_qubit(rng)), MeasurementBasis.from_qubit(random_qubit(rng)))
        for _ in range(n)
    ))


def brute_lhv(f):
    best = -np.inf
    for resp in itertools.product(itertools.product((0, 1), repeat=2), repeat=f.n):
        best = max(best, strategy_value(f, LhvStrategy(resp)))
    return best


def test_hardy_functional_shape():
    for n in (2, 3, 6):
        f = hardy_functional(n)
        assert len(f.terms) == n + 2
        assert sum(t.coefficient for t in f.terms) == -n
    f2 = hardy_functional(2)
    assert [(t.coefficient, t.settings, t.outcomes) for t in f2.terms] == [
        (1.0, (0, 0), (0, 0)), (-1.0, (1, 0), (0, 0)), (-1.0, (0, 1), (0, 0)), (-1.0, (1, 1), (1, 1))]
    with pytest.raises(DomainError):
        hardy_functional(1)


def test_persistence_functional_shape():
    f = persistence_functional(4, 3)
    extra = f.terms[len(hardy_functional(4).terms):]
    assert [(t.coefficient, t.parties, t.settings, t.outcomes) for t in extra] == [
        (-1.0, (0, 1, 2), (1, 1, 1), (1, 1, 1)), (-1.0, (0, 1), (1, 1), (1, 1))]
    for n in (3, 5, 7):
        assert len(persistence_functional(n, 2).terms) == n + 3
    for bad in (1, 4):
        with pytest.raises(DomainError):
            persistence_functional(4, bad)


def test_term_validation():
    with pytest.raises(DomainError):
        Term(1.0, (1, 0), (0, 0), (0, 0))
    with pytest.raises(DomainError):
        Term(1.0, (0,), (2,), (0,))
    with pytest.raises(DomainError):
        BellFunctional(2, (Term(1.0, (0, 2), (0, 0), (0, 0)),))


def test_normalization_and_routes():
    rng = np.random.default_rng(21)
    for n in range(2, 7):
        s = random_state(n, rng)
        sa = random_settings(n, rng)
        choice = tuple(rng.integers(0, 2, n))
        total = 0.0
        for out in itertools.product((0, 1), repeat=n):
            p = joint_probability(s, sa, choice, out)
            assert abs(p - joint_probability(s, sa, choice, out, method="dense")) < 1e-12
            total += p
        assert abs(total - 1) < 1e-9


def test_permanent_route():
    rng = np.random.default_rng(22)
    for n in range(2, 7):
        s = random_state(n, rng)
        sa = random_settings(n, rng)
        choice, out = rng.integers(0, 2, n), rng.integers(0, 2, n)
        d = joint_probability(s, sa, choice, out, method="dense")
        p = joint_probability(s, sa, choice, out, method="permanent")
        assert abs(p - d) <= 1e-9 * d


def test_marginal_consistency():
    rng = np.random.default_rng(23)
    for n in range(2, 7):
        s = random_state(n, rng)
        sa = random_settings(n, rng)
        choice = tuple(int(x) for x in rng.integers(0, 2, n))
        parties = tuple(sorted(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False).tolist()))
        out = tuple(int(x) for x in rng.integers(0, 2, len(parties)))
        sub = tuple(choice[p] for p in parties)
        free = [i for i in range(n) if i not in parties]
        total = 0.0
        for rest in itertools.product((0, 1), repeat=len(free)):
            full = dict(zip(parties, out))
            full.update(zip(free, rest))
            total += joint_probability(s, sa, choice, [full[i] for i in range(n)])
        for method in ("contract", "dense", "permanent"):
            assert abs(joint_probability(s, sa, sub, out, parties, method=method) - total) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_permutation_covariance(n, seed):
    rng = np.random.default_rng(seed)
    s = random_state(n, rng)
    b0 = MeasurementBasis.from_qubit(random_qubit(rng))
    b1 = MeasurementBasis.from_qubit(random_qubit(rng))
    sa = SettingsAssignment.identical(n, b0, b1)
    choice = rng.integers(0, 2, n)
    out = rng.integers(0, 2, n)
    perm = rng.permutation(n)
    a = joint_probability(s, sa, choice, out)
    b = joint_probability(s, sa, choice[perm], out[perm])
    assert abs(a - b) < 1e-10


def test_bad_inputs():
    s = random_state(3, np.random.default_rng(0))
    sa = SettingsAssignment.identical(3, COMPUTATIONAL, COMPUTATIONAL)
    with pytest.raises(DomainError):
        joint_probability(s, sa, "00", "000")
    with pytest.raises(DomainError):
        joint_probability(s, sa, "00", "00", parties=(0, 0))
    with pytest.raises(DomainError):
        joint_probability(s, SettingsAssignment.identical(2, COMPUTATIONAL, COMPUTATIONAL), "00", "00")
    with pytest.raises(ValueError):
        joint_probability(s, sa, "000", "000", method="magic")


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_lhv_hardy(n):
    value, witness = lhv_max(hardy_functional(n))
    assert value == 0.0
    assert strategy_value(hardy_functional(n), witness) == 0.0
    # All parties answering 1 on setting 0 and 0 on setting 1 also attains the bound.
    assert strategy_value(hardy_functional(n), LhvStrategy(((1, 0),) * n)) == 0.0


@pytest.mark.parametrize("n,d", [(4, 2), (4, 3), (5, 3), (6, 4)])
def test_lhv_persistence(n, d):
    value, witness = lhv_max(persistence_functional(n, d))
    assert value == 0.0
    assert strategy_value(persistence_functional(n, d), LhvStrategy(((1, 0),) * n)) == 0.0


@pytest.mark.parametrize("f", [hardy_functional(3), persistence_functional(4, 3), persistence_functional(5, 2)])
def test_lhv_against_bruteforce(f):
    assert lhv_max(f)[0] == brute_lhv(f)


def test_lhv_single_term():
    f = BellFunctional(1, (Term(1.0, (0,), (0,), (0,)),))
    value, witness = lhv_max(f)
    assert value == 1.0 and witness.response(0, 0) == 0


def test_lhv_cap():
    with pytest.raises(ResourceError):
        lhv_max(hardy_functional(11))


def test_lhv_first_witness_is_stable():
    # Ties resolve to the first strategy in party-major order, independent of term order.
    f = hardy_functional(3)
    g = BellFunctional(3, tuple(reversed(f.terms)))
    assert lhv_max(f)[1] == lhv_max(g)[1]


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_separable_state_never_violates(n, seed):
    rng = np.random.default_rng(seed)
    s = product_state(random_qubit(rng), n)
    assert evaluate_functional(s, hardy_functional(n), random_settings(n, rng)) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 6), st.integers(0, 2**32 - 1))
def test_persistence_below_hardy(n, seed):
    rng = np.random.default_rng(seed)
    s = random_state(n, rng)
    sa = random_settings(n, rng)
    for d in range(2, n):
        assert evaluate_functional(s, persistence_functional(n, d), sa) <= evaluate_functional(
            s, hardy_functional(n), sa) + 1e-12


def test_evaluate_routes_agree():
    rng = np.random.default_rng(24)
    s = from_named("tetrahedron")
    sa = random_settings(4, rng)
    f = persistence_functional(4, 3)
    a = evaluate_functional(s, f, sa)
    assert abs(a - evaluate_functional(s, f, sa, method="dense")) < 1e-12
    assert abs(a - evaluate_functional(s, f, sa, method="permanent")) < 1e-12


def test_d3_persistence_zero():
    s = from_named("d3plus")
    sa = SettingsAssignment.identical(4, COMPUTATIONAL, COMPUTATIONAL)
    for m in (2, 3, 4):
        assert joint_probability(s, sa, (1,) * m, (1,) * m, parties=range(m)) < 1e-12
    # A single party still sees |1> sometimes.
    assert joint_probability(s, sa, (1,), (1,), parties=(0,)) > 0


def test_settings_angles_roundtrip():
    rng = np.random.default_rng(25)
    sa = random_settings(3, rng)
    back = SettingsAssignment.from_angles(sa.angles())
    for p in range(3):
        for s in range(2):
            for r in range(2):
                assert sa.bra(p, s, r).equals(back.bra(p, s, r), 1e-12)
    assert SettingsAssignment.identical(2, COMPUTATIONAL, COMPUTATIONAL).bra(1, 0, 0).equals(ZERO)


def test_permanent_small():
    assert permanent(np.ones((4, 4))) == pytest.approx(24)
    assert permanent(np.eye(5)) == pytest.approx(1)
    assert permanent(np.zeros((0, 0))) == 1
    rng = np.random.default_rng(26)
    for n in range(1, 7):
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        assert abs(permanent(a) - permanent_bruteforce(a)) < 1e-10 * max(1, abs(permanent_bruteforce(a)))


def test_permanent_rejects_rectangular():
    with pytest.raises(ValueError):
        permanent(np.ones((2, 3)))
