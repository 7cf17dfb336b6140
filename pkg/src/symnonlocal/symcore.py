"""Permutation-symmetric qubit states in the Dicke basis.

A symmetric state of ``n`` qubits is stored as its ``n + 1`` Dicke
coefficients ``c_k`` with respect to ``|S(n, k)>``, the normalized uniform
superposition of all basis strings with ``k`` ones. Everything here works on
those coefficients directly; :func:`to_statevector` expands to the full
``2**n`` vector and is used as an oracle by the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

NORM_TOL = 1e-12
UNITARY_TOL = 1e-10
MAX_DENSE_QUBITS = 14


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class ResourceError(RuntimeError):
    """A request exceeds a hard size cap."""


@lru_cache(maxsize=None)
def _binom_row(n: int) -> np.ndarray:
    from scipy.special import comb

    return comb(n, np.arange(n + 1), exact=False)


def binom_sqrt(n: int) -> np.ndarray:
    """``sqrt(C(n, k))`` for ``k = 0..n`` as a float array."""
    return np.sqrt(_binom_row(n))


@dataclass(frozen=True)
class PureQubit:
    """Single-qubit pure state ``a|0> + b|1>``."""

    a: complex
    b: complex

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        nrm = np.hypot(abs(a), abs(b))
        if nrm == 0.0:
            raise DomainError("qubit amplitudes are both zero")
        if abs(nrm - 1.0) > NORM_TOL:
            a, b = a / nrm, b / nrm
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_vector(cls, v) -> PureQubit:
        v = np.asarray(v, dtype=complex).ravel()
        if v.shape != (2,):
            raise DomainError(f"expected 2 amplitudes, got shape {v.shape}")
        return cls(v[0], v[1])

    @classmethod
    def from_bloch(cls, t: float, phi: float) -> PureQubit:
        """``cos(t/2)|0> + exp(i phi) sin(t/2)|1>``."""
        return cls(np.cos(t / 2), np.exp(1j * phi) * np.sin(t / 2))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a, self.b], dtype=complex)

    def bloch_vector(self) -> np.ndarray:
        a, b = self.a, self.b
        ab = np.conj(a) * b
        return np.array([2 * ab.real, 2 * ab.imag, abs(a) ** 2 - abs(b) ** 2])

    def bloch_angles(self) -> tuple[float, float]:
        """Polar and azimuthal angle ``(t, phi)``, with ``phi`` in ``[0, 2 pi)``."""
        x, y, z = self.bloch_vector()
        t = float(np.arccos(np.clip(z, -1.0, 1.0)))
        phi = float(np.arctan2(y, x)) % (2 * np.pi)
        return t, phi

    def overlap(self, other: PureQubit) -> complex:
        """``<self|other>``."""
        return complex(np.conj(self.a) * other.a + np.conj(self.b) * other.b)

    def fidelity(self, other: PureQubit) -> float:
        return abs(self.overlap(other))

    def equals(self, other: PureQubit, tol: float = 1e-9) -> bool:
        return self.fidelity(other) > 1 - tol

    def chordal_distance(self, other: PureQubit) -> float:
        """Euclidean distance between the two Bloch vectors."""
        f2 = min(abs(self.overlap(other)) ** 2, 1.0)
        return float(2.0 * np.sqrt(1.0 - f2))


ZERO = PureQubit(1, 0)
ONE = PureQubit(0, 1)
PLUS = PureQubit(1 / np.sqrt(2), 1 / np.sqrt(2))
MINUS = PureQubit(1 / np.sqrt(2), -1 / np.sqrt(2))


def antipode(q: PureQubit) -> PureQubit:
    """The orthogonal qubit, i.e. the antipodal point on the Bloch sphere."""
    return PureQubit(-np.conj(q.b), np.conj(q.a))


@dataclass(frozen=True)
class MeasurementBasis:
    """Two-outcome projective measurement; ``outcome0`` is the projector for result 0."""

    outcome0: PureQubit
    outcome1: PureQubit

    def __post_init__(self):
        if abs(self.outcome0.overlap(self.outcome1)) > 1e-10:
            raise DomainError("measurement basis vectors are not orthogonal")

    @classmethod
    def from_qubit(cls, q: PureQubit) -> MeasurementBasis:
        return cls(q, antipode(q))

    @classmethod
    def from_bloch(cls, t: float, phi: float) -> MeasurementBasis:
        return cls.from_qubit(PureQubit.from_bloch(t, phi))

    def outcome(self, r: int) -> PureQubit:
        return self.outcome1 if r else self.outcome0

    def bloch_angles(self) -> tuple[float, float]:
        return self.outcome0.bloch_angles()


COMPUTATIONAL = MeasurementBasis(ZERO, ONE)


class SymmetricState:
    """Normalized permutation-symmetric ``n``-qubit pure state.

    ``coeffs[k]`` is the amplitude on the Dicke state ``|S(n, k)>``. The input
    is normalized on construction; an all-zero vector is rejected.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex).ravel()
        if c.size < 2:
            raise DomainError("a symmetric state needs at least one qubit")
        nrm = np.linalg.norm(c)
        if not np.isfinite(nrm) or nrm == 0.0:
            raise DomainError("zero-norm Dicke coefficients")
        c = c / nrm
        c.setflags(write=False)
        self.coeffs = c

    @property
    def n(self) -> int:
        return self.coeffs.size - 1

    def __repr__(self):
        body = ", ".join(f"{z:.6g}" for z in self.coeffs)
        return f"SymmetricState(n={self.n}, coeffs=[{body}])"

    def overlap(self, other: SymmetricState) -> complex:
        if other.n != self.n:
            raise DomainError("states have different qubit counts")
        return complex(np.vdot(self.coeffs, other.coeffs))

    def fidelity(self, other: SymmetricState) -> float:
        return abs(self.overlap(other))

    def equals(self, other: SymmetricState, tol: float = 1e-9) -> bool:
        return other.n == self.n and self.fidelity(other) > 1 - tol


def dicke_state(n: int, k: int) -> SymmetricState:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0 <= k <= n:
        raise DomainError(f"k must lie in [0, {n}], got {k}")
    c = np.zeros(n + 1, dtype=complex)
    c[k] = 1.0
    return SymmetricState(c)


def product_state(q: PureQubit, n: int) -> SymmetricState:
    """``|q>^{(x) n}`` in Dicke coefficients."""
    k = np.arange(n + 1)
    c = binom_sqrt(n) * q.a ** (n - k) * q.b**k
    return SymmetricState(c)


def symmetrize_product(qubits) -> SymmetricState:
    """Normalized symmetrization of ``|q_1 q_2 ... q_n>``.

    The Dicke coefficient on ``S(n, k)`` is ``E_k / sqrt(C(n, k))`` with ``E_k``
    the coefficient of ``t**k`` in ``prod_j (a_j + b_j t)``.
    """
    poly = np.array([1.0 + 0j])
    for q in qubits:
        poly = np.convolve(poly, [q.a, q.b])
    n = poly.size - 1
    return SymmetricState(poly / binom_sqrt(n))


_NAMED = ("ghz", "w", "dicke", "tetrahedron", "d3plus")


def from_named(name: str, n: int | None = None, k: int | None = None) -> SymmetricState:
    """Build one of the standard states by name.

    ``name`` is ``ghz``, ``w``, ``tetrahedron``, ``d3plus`` or ``dicke``; the
    last also accepts the inline form ``dicke(n,k)``.
    """
    key = name.strip().lower()
    if key.startswith("dicke(") and key.endswith(")"):
        try:
            n, k = (int(s) for s in key[6:-1].split(","))
        except ValueError:
            raise ValueError(f"cannot parse state name {name!r}") from None
        key = "dicke"
    if key not in _NAMED:
        raise ValueError(f"unknown state name {name!r}; expected one of {_NAMED}")
    if key == "tetrahedron":
        if n not in (None, 4):
            raise DomainError("the tetrahedron state has n = 4")
        return SymmetricState([np.sqrt(1 / 3), 0, 0, np.sqrt(2 / 3), 0])
    if key == "d3plus":
        if n not in (None, 4):
            raise DomainError("the d3plus state has n = 4")
        return symmetrize_product([ZERO, ZERO, ZERO, PLUS])
    if n is None:
        raise DomainError(f"state {key!r} needs n")
    if key == "ghz":
        if n < 1:
            raise DomainError(f"n must be >= 1, got {n}")
        c = np.zeros(n + 1)
        c[0] = c[n] = 1.0
        return SymmetricState(c)
    if key == "w":
        return dicke_state(n, 1)
    if k is None:
        raise DomainError("dicke state needs k")
    return dicke_state(n, k)


def project_qubit(state: SymmetricState, chi: PureQubit) -> tuple[SymmetricState | None, float]:
    """Apply ``<chi|`` to one qubit slot.

    Returns the normalized ``(n-1)``-qubit remainder and the norm of the
    unnormalized contraction. When the contraction vanishes the state is
    ``None``.
    """
    n = state.n
    if n < 2:
        raise DomainError("cannot project a single-qubit state onto n - 1 = 0 qubits")
    raw = _project_raw(state.coeffs, chi)
    nrm = float(np.linalg.norm(raw))
    if nrm <= NORM_TOL * 1e-3:
        return None, nrm
    return SymmetricState(raw), nrm


def _project_raw(c: np.ndarray, chi: PureQubit) -> np.ndarray:
    return project_coeffs(c, chi.a, chi.b)


def project_coeffs(c: np.ndarray, a: complex, b: complex) -> np.ndarray:
    """Unnormalized Dicke coefficients of ``(<chi| (x) 1) sum_k c_k |S(n,k)>`` for ``chi = (a, b)``."""
    # <chi|S(n,k) = conj(a) sqrt((n-k)/n) S(n-1,k) + conj(b) sqrt(k/n) S(n-1,k-1)
    n = c.size - 1
    j = np.arange(n)
    return (np.conj(a) * np.sqrt((n - j) / n) * c[:-1]
            + np.conj(b) * np.sqrt((j + 1) / n) * c[1:])


def contract_amplitude(state: SymmetricState, bras) -> complex:
    """``(<b_1| (x) ... (x) <b_n|) |psi>`` for a full list of ``n`` bras."""
    c = np.asarray(state.coeffs)
    if len(bras) != state.n:
        raise DomainError("need one bra per qubit")
    for q in bras[:-1]:
        c = _project_raw(c, q)
    q = bras[-1]
    return complex(np.conj(q.a) * c[0] + np.conj(q.b) * c[1])


def to_statevector(state: SymmetricState) -> np.ndarray:
    """Dense ``2**n`` amplitude vector, qubit 0 most significant."""
    n = state.n
    if n > MAX_DENSE_QUBITS:
        raise ResourceError(f"dense expansion capped at {MAX_DENSE_QUBITS} qubits, got {n}")
    idx = np.arange(2**n)
    weight = np.zeros(2**n, dtype=np.int64)
    for bit in range(n):
        weight += (idx >> bit) & 1
    return state.coeffs[weight] / binom_sqrt(n)[weight]


def from_statevector(vec, tol: float = 1e-9) -> SymmetricState:
    """Inverse of :func:`to_statevector`; rejects non-symmetric input."""
    vec = np.asarray(vec, dtype=complex).ravel()
    n = int(round(np.log2(vec.size)))
    if 2**n != vec.size or n < 1:
        raise DomainError("length is not a power of two")
    idx = np.arange(vec.size)
    weight = np.zeros(vec.size, dtype=np.int64)
    for bit in range(n):
        weight += (idx >> bit) & 1
    c = np.zeros(n + 1, dtype=complex)
    np.add.at(c, weight, vec)
    c = c / binom_sqrt(n)
    sym = SymmetricState(c)
    back = to_statevector(sym) * np.linalg.norm(c)
    if np.max(np.abs(back - vec)) > tol * max(1.0, np.linalg.norm(vec)):
        raise DomainError("vector is not permutation symmetric")
    return sym


def check_unitary(u) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise DomainError(f"expected a 2x2 matrix, got shape {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(2))) > UNITARY_TOL:
        raise DomainError("matrix is not unitary")
    return u


def rotate(state: SymmetricState, u) -> SymmetricState:
    """``U^{(x) n} |psi>`` re-expressed in Dicke coefficients.

    With ``F(x, y) = sum_k c_k sqrt(C(n,k)) x^(n-k) y^k`` the rotated form is
    ``F(U00 x + U10 y, U01 x + U11 y)``; the polynomial products are expanded
    in ``t = y / x``.
    """
    u = check_unitary(u)
    n = state.n
    w = state.coeffs * binom_sqrt(n)
    p = _powers(u[0, 0], u[1, 0], n)
    q = _powers(u[0, 1], u[1, 1], n)
    out = np.zeros(n + 1, dtype=complex)
    for k in range(n + 1):
        if w[k] != 0:
            out += w[k] * np.convolve(p[n - k], q[k])
    return SymmetricState(out / binom_sqrt(n))


def _powers(c0: complex, c1: complex, n: int) -> list[np.ndarray]:
    # [(c0 + c1 t)^m for m = 0..n], each zero-padded to degree m
    res = [np.array([1.0 + 0j])]
    for _ in range(n):
        res.append(np.convolve(res[-1], [c0, c1]))
    return res


def unitary_mapping(src: PureQubit, dst: PureQubit) -> np.ndarray:
    """A unitary sending ``src`` to ``dst`` and ``src``-perp to ``dst``-perp."""
    s = np.column_stack([src.vector, antipode(src).vector])
    d = np.column_stack([dst.vector, antipode(dst).vector])
    return d @ s.conj().T


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    from scipy.stats import unitary_group

    return unitary_group.rvs(2, random_state=rng)


def random_qubit(rng: np.random.Generator) -> PureQubit:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return PureQubit.from_vector(v)


def random_state(n: int, rng: np.random.Generator) -> SymmetricState:
    """Haar-random state in the symmetric subspace."""
    return SymmetricState(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1))
