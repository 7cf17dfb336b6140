"""Probability-based Bell functionals on symmetric states.

Parties are indexed from 0. A functional is a signed sum of terms
``coef * P(outcomes | settings)`` restricted to a subset of parties, with the
unlisted parties marginalized out. Quantum values come from product
projective measurements on a :class:`~symnonlocal.symcore.SymmetricState`;
LHV maxima come from enumerating the ``4**n`` deterministic strategies.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .majorana import MajoranaSpectrum, state_to_points
from .permanent import permanent
from .symcore import (
    COMPUTATIONAL,
    DomainError,
    MeasurementBasis,
    ResourceError,
    SymmetricState,
    _project_raw,
    to_statevector,
)

CLAMP_TOL = 1e-9
MAX_LHV_PARTIES = 10
MAX_PERMANENT_PARTIES = 20


class ProbabilityError(ArithmeticError):
    """A contraction produced a probability well outside [0, 1]."""


@dataclass(frozen=True)
class SettingsAssignment:
    """Per-party pair of bases: ``per_party[i] = (setting 0, setting 1)``."""

    per_party: tuple[tuple[MeasurementBasis, MeasurementBasis], ...]

    def __post_init__(self):
        per = tuple(tuple(pair) for pair in self.per_party)
        if any(len(pair) != 2 for pair in per):
            raise DomainError("each party needs exactly two bases")
        object.__setattr__(self, "per_party", per)

    @property
    def n(self) -> int:
        return len(self.per_party)

    @classmethod
    def identical(cls, n: int, basis0: MeasurementBasis, basis1: MeasurementBasis) -> SettingsAssignment:
        return cls(tuple((basis0, basis1) for _ in range(n)))

    def bra(self, party: int, setting: int, outcome: int):
        return self.per_party[party][setting].outcome(outcome)

    def angles(self) -> np.ndarray:
        """``(n, 2, 2)`` array of Bloch angles ``(t, phi)`` of each outcome-0 vector."""
        return np.array([[b.bloch_angles() for b in pair] for pair in self.per_party])

    @classmethod
    def from_angles(cls, angles) -> SettingsAssignment:
        a = np.asarray(angles, dtype=float).reshape(-1, 2, 2)
        return cls(tuple(tuple(MeasurementBasis.from_bloch(t, p) for t, p in pair) for pair in a))


@dataclass(frozen=True)
class Term:
    coefficient: float
    parties: tuple[int, ...]
    settings: tuple[int, ...]
    outcomes: tuple[int, ...]

    def __post_init__(self):
        if not len(self.parties) == len(self.settings) == len(self.outcomes):
            raise DomainError("parties, settings and outcomes differ in length")
        if any(b <= a for a, b in zip(self.parties, self.parties[1:])):
            raise DomainError("party indices must be strictly increasing")
        if any(x not in (0, 1) for x in self.settings + self.outcomes):
            raise DomainError("settings and outcomes are bits")


@dataclass(frozen=True)
class BellFunctional:
    n: int
    terms: tuple[Term, ...]
    name: str = ""

    def __post_init__(self):
        for t in self.terms:
            if t.parties and (t.parties[0] < 0 or t.parties[-1] >= self.n):
                raise DomainError(f"term parties {t.parties} out of range for n = {self.n}")


@dataclass(frozen=True)
class LhvStrategy:
    """Deterministic local responses: ``per_party[i] = (outcome on setting 0, outcome on setting 1)``."""

    per_party: tuple[tuple[int, int], ...]

    def response(self, party: int, setting: int) -> int:
        return self.per_party[party][setting]


def _bits(x, n: int) -> tuple[int, ...]:
    if isinstance(x, str):
        x = [int(ch) for ch in x]
    out = tuple(int(v) for v in x)
    if len(out) != n:
        raise DomainError(f"expected {n} bits, got {len(out)}")
    return out


def joint_probability(state: SymmetricState, settings: SettingsAssignment, setting_choice, outcomes,
                      parties=None, method: str = "contract",
                      spectrum: MajoranaSpectrum | None = None) -> float:
    """Probability that ``parties`` measuring ``setting_choice`` obtain ``outcomes``.

    ``method`` selects the contraction route: ``"contract"`` applies each
    party's bra to the Dicke coefficients in turn, ``"permanent"`` uses the
    Majorana points and a matrix permanent, ``"dense"`` expands the full
    state vector. All three agree to rounding.
    """
    n = state.n
    if settings.n != n:
        raise DomainError(f"settings are for {settings.n} parties, state has {n}")
    parties = tuple(range(n)) if parties is None else tuple(int(p) for p in parties)
    m = len(parties)
    setting_choice = _bits(setting_choice, m)
    outcomes = _bits(outcomes, m)
    if any(not 0 <= p < n for p in parties) or len(set(parties)) != m:
        raise DomainError(f"invalid party subset {parties}")
    bras = [settings.bra(p, s, r) for p, s, r in zip(parties, setting_choice, outcomes)]

    if method == "contract":
        prob = _contract_prob(state.coeffs, bras)
    elif method == "dense":
        prob = _dense_prob(state, parties, bras)
    elif method == "permanent":
        prob = _permanent_prob(state, parties, bras, spectrum)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _clamp(prob)


def _clamp(p: float) -> float:
    if p < -CLAMP_TOL or p > 1 + CLAMP_TOL:
        raise ProbabilityError(f"probability {p} outside [0, 1]")
    return min(max(p, 0.0), 1.0)


def _contract_prob(coeffs: np.ndarray, bras) -> float:
    # The state stays symmetric after each contraction, so the slot is irrelevant
    # and whatever is left unprojected is traced out by taking the norm.
    c = coeffs
    for q in bras:
        if c.size == 2:
            c = np.array([np.conj(q.a) * c[0] + np.conj(q.b) * c[1]])
        else:
            c = _project_raw(c, q)
    return float(np.vdot(c, c).real)


def _dense_prob(state: SymmetricState, parties, bras) -> float:
    n = state.n
    psi = to_statevector(state).reshape((2,) * n)
    # Contract from the highest axis down so lower axis numbers stay valid.
    for p, q in sorted(zip(parties, bras), key=lambda pq: -pq[0]):
        psi = np.tensordot(psi, np.conj(q.vector), axes=([p], [0]))
    return float(np.vdot(psi, psi).real)


def _permanent_prob(state: SymmetricState, parties, bras, spectrum) -> float:
    n = state.n
    if n > MAX_PERMANENT_PARTIES:
        raise ResourceError(f"permanent route capped at {MAX_PERMANENT_PARTIES} parties")
    spectrum = spectrum if spectrum is not None else state_to_points(state)
    eta = np.array([p.vector for p in spectrum.expanded()])
    gram = np.conj(eta) @ eta.T
    norm2 = factorial(n) * permanent(gram).real
    listed = dict(zip(parties, bras))
    free = [i for i in range(n) if i not in listed]
    total = 0.0
    # Marginalize unlisted parties over any complete basis.
    for bits in np.ndindex(*(2,) * len(free)):
        full = dict(listed)
        full.update({i: COMPUTATIONAL.outcome(b) for i, b in zip(free, bits)})
        phis = np.array([full[i].vector for i in range(n)])
        amp = permanent(np.conj(phis) @ eta.T)
        total += abs(amp) ** 2
    return float(total / norm2)


def hardy_functional(n: int) -> BellFunctional:
    """``P(0..0|0..0) - sum_i P(0..0|e_i) - P(1..1|1..1)`` with ``e_i`` the single-flip settings."""
    if n < 2:
        raise DomainError("the Hardy functional needs n >= 2")
    allp = tuple(range(n))
    zeros, ones = (0,) * n, (1,) * n
    terms = [Term(1.0, allp, zeros, zeros)]
    for i in range(n):
        flip = tuple(1 if j == i else 0 for j in range(n))
        terms.append(Term(-1.0, allp, flip, zeros))
    terms.append(Term(-1.0, allp, ones, ones))
    return BellFunctional(n, tuple(terms), name=f"P^{n}")


def persistence_functional(n: int, d: int) -> BellFunctional:
    """Hardy functional minus ``P(1^m|1^m)`` on parties ``0..m-1`` for ``m = n-1 .. n-d+1``."""
    if not 2 <= d <= n - 1:
        raise DomainError(f"d must lie in [2, {n - 1}], got {d}")
    base = hardy_functional(n)
    extra = tuple(Term(-1.0, tuple(range(m)), (1,) * m, (1,) * m) for m in range(n - 1, n - d, -1))
    return BellFunctional(n, base.terms + extra, name=f"Q_{d}^{n}")


def evaluate_functional(state: SymmetricState, f: BellFunctional, settings: SettingsAssignment,
                        method: str = "contract") -> float:
    if f.n != state.n:
        raise DomainError(f"functional is for {f.n} parties, state has {state.n}")
    spectrum = state_to_points(state) if method == "permanent" else None
    return float(sum(
        t.coefficient * joint_probability(state, settings, t.settings, t.outcomes, t.parties,
                                          method=method, spectrum=spectrum)
        for t in f.terms
    ))


def strategy_value(f: BellFunctional, strategy: LhvStrategy) -> float:
    total = 0.0
    for t in f.terms:
        if all(strategy.response(p, s) == r for p, s, r in zip(t.parties, t.settings, t.outcomes)):
            total += t.coefficient
    return total


def lhv_max(f: BellFunctional) -> tuple[float, LhvStrategy]:
    """Exact LHV maximum by enumerating all deterministic strategies.

    Strategy ``s`` of a party answers ``s & 1`` on setting 0 and ``s >> 1`` on
    setting 1; strategies are ordered lexicographically with party 0 most
    significant, and the first maximizer is returned.
    """
    n = f.n
    if n > MAX_LHV_PARTIES:
        raise ResourceError(f"LHV enumeration capped at {MAX_LHV_PARTIES} parties, got {n}")
    idx = np.arange(4**n, dtype=np.int64)
    local = [(idx // 4 ** (n - 1 - p)) % 4 for p in range(n)]
    values = np.zeros(4**n)
    for t in f.terms:
        hit = np.ones(4**n, dtype=bool)
        for p, s, r in zip(t.parties, t.settings, t.outcomes):
            hit &= ((local[p] >> s) & 1) == r
        values += t.coefficient * hit
    best = int(np.argmax(values))
    witness = LhvStrategy(tuple((int(local[p][best] & 1), int(local[p][best] >> 1)) for p in range(n)))
    return float(values[best]), witness
