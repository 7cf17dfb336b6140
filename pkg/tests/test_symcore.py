import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symnonlocal.symcore import (
    MINUS,
    ONE,
    PLUS,
    ZERO,
    DomainError,
    MeasurementBasis,
    PureQubit,
    SymmetricState,
    antipode,
    contract_amplitude,
    dicke_state,
    from_named,
    from_statevector,
    product_state,
    project_qubit,
    random_state,
    random_unitary,
    rotate,
    symmetrize_product,
    to_statevector,
    unitary_mapping,
)


def dense_dicke(n, k):
    # Independent construction: equal weight on every bit string with k ones.
    v = np.zeros(2**n, dtype=complex)
    for bits in itertools.product((0, 1), repeat=n):
        if sum(bits) == k:
            v[int("".join(map(str, bits)), 2)] = 1.0
    return v / np.linalg.norm(v)


def dense_symmetrize(qubits):
    n = len(qubits)
    total = np.zeros((2,) * n, dtype=complex)
    for perm in itertools.permutations(range(n)):
        t = np.array(1.0 + 0j)
        for i in perm:
            t = np.multiply.outer(t, qubits[i].vector)
        total += t
    v = total.ravel()
    return v / np.linalg.norm(v)


def kron_all(mats):
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


@pytest.mark.parametrize("n,k", [(1, 0), (1, 1), (3, 1), (4, 2), (5, 3), (6, 6)])
def test_dicke_matches_dense(n, k):
    np.testing.assert_allclose(to_statevector(dicke_state(n, k)), dense_dicke(n, k), atol=1e-14)


def test_dicke_bad_k():
    with pytest.raises(DomainError):
        dicke_state(3, 4)
    with pytest.raises(DomainError):
        dicke_state(3, -1)


def test_named_states():
    t = from_named("tetrahedron")
    np.testing.assert_allclose(t.coeffs, [np.sqrt(1 / 3), 0, 0, np.sqrt(2 / 3), 0], atol=1e-15)
    assert abs(t.coeffs[0] - 0.57735) < 1e-5 and abs(t.coeffs[3] - 0.81650) < 1e-5

    ghz = from_named("ghz", 3)
    np.testing.assert_allclose(ghz.coeffs, [2**-0.5, 0, 0, 2**-0.5])
    assert from_named("w", 5).equals(dicke_state(5, 1))
    assert from_named("dicke(4,2)").equals(dicke_state(4, 2))
    assert from_named("dicke", 6, 3).equals(dicke_state(6, 3))


def test_d3plus_against_dense_symmetrization():
    d3 = from_named("d3plus")
    dense = dense_symmetrize([ZERO, ZERO, ZERO, PLUS])
    assert abs(np.vdot(to_statevector(d3), dense)) > 1 - 1e-14
    np.testing.assert_allclose(d3.coeffs, np.array([2, 1, 0, 0, 0]) / np.sqrt(5), atol=1e-15)


def test_unknown_name():
    with pytest.raises(ValueError):
        from_named("cluster", 4)


def test_symmetrize_product_against_dense():
    rng = np.random.default_rng(1)
    for n in range(1, 6):
        qs = [PureQubit.from_vector(rng.normal(size=2) + 1j * rng.normal(size=2)) for _ in range(n)]
        s = symmetrize_product(qs)
        assert abs(np.vdot(to_statevector(s), dense_symmetrize(qs))) > 1 - 1e-12


def test_product_state():
    q = PureQubit.from_bloch(1.1, 0.4)
    v = kron_all([q.vector.reshape(1, 2)] * 3).ravel()
    assert abs(np.vdot(to_statevector(product_state(q, 3)), v)) > 1 - 1e-14


def test_statevector_roundtrip():
    rng = np.random.default_rng(2)
    for n in range(1, 8):
        s = random_state(n, rng)
        assert from_statevector(to_statevector(s)).equals(s, 1e-12)


def test_from_statevector_rejects_asymmetric():
    v = np.zeros(4)
    v[1] = 1.0  # |01>
    with pytest.raises(DomainError):
        from_statevector(v)


def test_antipode():
    rng = np.random.default_rng(3)
    for _ in range(20):
        q = PureQubit.from_vector(rng.normal(size=2) + 1j * rng.normal(size=2))
        assert abs(q.overlap(antipode(q))) < 1e-15
        np.testing.assert_allclose(antipode(q).bloch_vector(), -q.bloch_vector(), atol=1e-14)
    assert antipode(ZERO).equals(ONE)
    assert antipode(PLUS).equals(MINUS)


def test_bloch_angles_roundtrip():
    q = PureQubit.from_bloch(2.0, 5.5)
    t, phi = q.bloch_angles()
    assert abs(t - 2.0) < 1e-12 and abs(phi - 5.5) < 1e-12


def test_basis_requires_orthogonal():
    with pytest.raises(DomainError):
        MeasurementBasis(ZERO, PLUS)


def test_project_qubit_against_dense():
    rng = np.random.default_rng(4)
    for n in range(2, 7):
        s = random_state(n, rng)
        chi = PureQubit.from_vector(rng.normal(size=2) + 1j * rng.normal(size=2))
        sub, norm = project_qubit(s, chi)
        dense = np.tensordot(np.conj(chi.vector), to_statevector(s).reshape(2, -1), axes=(0, 0))
        assert abs(norm - np.linalg.norm(dense)) < 1e-12
        assert abs(np.vdot(to_statevector(sub), dense / norm)) > 1 - 1e-12


def test_project_qubit_example():
    # <0| S(3,1) = sqrt(2/3) S(2,1)
    sub, norm = project_qubit(dicke_state(3, 1), ZERO)
    assert abs(norm - np.sqrt(2 / 3)) < 1e-14
    assert sub.equals(dicke_state(2, 1))


def test_project_to_zero_norm():
    sub, norm = project_qubit(dicke_state(3, 0), ONE)
    assert sub is None and norm == 0.0


def test_project_needs_two_qubits():
    with pytest.raises(DomainError):
        project_qubit(SymmetricState([1, 0]), ZERO)


def test_rotate_against_dense():
    rng = np.random.default_rng(5)
    for n in range(1, 7):
        s = random_state(n, rng)
        u = random_unitary(rng)
        dense = kron_all([u] * n) @ to_statevector(s)
        assert abs(np.vdot(to_statevector(rotate(s, u)), dense)) > 1 - 1e-12


def test_rotate_rejects_non_unitary():
    with pytest.raises(DomainError):
        rotate(dicke_state(2, 1), np.array([[1, 1], [0, 1]]))


def test_unitary_mapping():
    rng = np.random.default_rng(6)
    for _ in range(10):
        a = PureQubit.from_vector(rng.normal(size=2) + 1j * rng.normal(size=2))
        b = PureQubit.from_vector(rng.normal(size=2) + 1j * rng.normal(size=2))
        u = unitary_mapping(a, b)
        assert PureQubit.from_vector(u @ a.vector).equals(b, 1e-12)


def test_contract_amplitude_against_dense():
    rng = np.random.default_rng(7)
    s = random_state(4, rng)
    bras = [PureQubit.from_vector(rng.normal(size=2) + 1j * rng.normal(size=2)) for _ in range(4)]
    dense = np.vdot(kron_all([q.vector.reshape(1, 2) for q in bras]).ravel(), to_statevector(s))
    # Symmetric state: the order of the bras does not matter.
    assert abs(contract_amplitude(s, bras) - dense) < 1e-13
    assert abs(contract_amplitude(s, bras[::-1]) - dense) < 1e-13


def test_state_normalizes():
    s = SymmetricState([3, 4])
    np.testing.assert_allclose(s.coeffs, [0.6, 0.8])
    with pytest.raises(DomainError):
        SymmetricState([0, 0, 0])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 9), st.integers(0, 2**32 - 1))
def test_rotation_preserves_norm_and_inverts(n, seed):
    rng = np.random.default_rng(seed)
    s = random_state(n, rng)
    u = random_unitary(rng)
    r = rotate(s, u)
    assert abs(np.linalg.norm(r.coeffs) - 1) < 1e-12
    assert rotate(r, u.conj().T).equals(s, 1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_projection_norms_sum_to_one(n, seed):
    # <chi| and <chi_perp| resolve the identity on the first qubit.
    rng = np.random.default_rng(seed)
    s = random_state(n, rng)
    chi = PureQubit.from_vector(rng.normal(size=2) + 1j * rng.normal(size=2))
    _, a = project_qubit(s, chi)
    _, b = project_qubit(s, antipode(chi))
    assert abs(a**2 + b**2 - 1) < 1e-12


def test_binomial_scaling_example():
    s = dicke_state(4, 2)
    v = to_statevector(s)
    assert abs(v[0b0011] - 1 / np.sqrt(comb(4, 2))) < 1e-15
