"""Majorana point constellations of symmetric states.

The overlap polynomial ``p(z) = sum_k c_k sqrt(C(n,k)) z^k`` of a state equals
``prod_j (a_j + b_j z)`` up to a constant, where ``a_j|0> + b_j|1>`` are its
Majorana points. A root ``z`` therefore gives the point ``-z|0> + |1>``, and each
missing degree (a root at infinity) gives ``|0>``. Equivalently a qubit ``q``
is a Majorana point iff ``(<q_perp|)^{(x) n} |psi> = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .symcore import (
    ONE,
    ZERO,
    DomainError,
    PureQubit,
    SymmetricState,
    antipode,
    binom_sqrt,
    project_qubit,
    rotate,
    symmetrize_product,
    unitary_mapping,
)

DEFAULT_CLUSTER_TOL = 1e-6
DEFAULT_MP_TOL = 1e-6
LEADING_CUTOFF = 1e-12


class NumericalError(ArithmeticError):
    """Root finding failed to produce a consistent constellation."""


@dataclass(frozen=True)
class MajoranaSpectrum:
    """Distinct Majorana points with their degeneracies."""

    n: int
    clusters: tuple[tuple[PureQubit, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        clusters = tuple((p, int(d)) for p, d in self.clusters)
        if any(d < 1 for _, d in clusters):
            raise DomainError("degeneracies must be positive")
        if sum(d for _, d in clusters) != self.n:
            raise DomainError("degeneracies do not add up to n")
        object.__setattr__(self, "clusters", clusters)

    @property
    def points(self) -> list[PureQubit]:
        return [p for p, _ in self.clusters]

    def expanded(self) -> list[PureQubit]:
        """All ``n`` points, repeated by degeneracy."""
        return [p for p, d in self.clusters for _ in range(d)]


@dataclass(frozen=True)
class MpResidualReport:
    is_mp: bool
    residual: float
    multiplicity: int


def majorana_polynomial(state: SymmetricState) -> np.ndarray:
    """Coefficients of ``p(z)``, lowest degree first."""
    return state.coeffs * binom_sqrt(state.n)


def _qubit_from_root(z: complex) -> PureQubit:
    # Normalize in whichever chart keeps the numbers bounded.
    if abs(z) <= 1.0:
        return PureQubit(-z, 1.0)
    return PureQubit(-1.0, 1.0 / z)


def _initial_points(poly: np.ndarray) -> list[PureQubit]:
    n = poly.size - 1
    scale = np.max(np.abs(poly))
    nz = np.nonzero(np.abs(poly) > LEADING_CUTOFF * scale)[0]
    deg = int(nz[-1])
    low = int(nz[0])
    pts = [ZERO] * (n - deg) + [ONE] * low
    if deg > low:
        core = poly[low:deg + 1]
        roots = np.roots(core[::-1])
        if not np.all(np.isfinite(roots)):
            raise NumericalError(f"companion eigenvalues not finite: {roots}")
        pts += [_qubit_from_root(z) for z in roots]
    return pts


def _refine_center(state: SymmetricState, guess: PureQubit, d: int, iters: int = 2) -> PureQubit:
    """Polish a ``d``-fold point by Newton on the ``(d-1)``-th derivative.

    The state is rotated so ``guess`` sits at ``|1>``, i.e. at ``z = 0`` where
    the ``d`` nearby roots are a simple root of ``p^(d-1)``.
    """
    center = guess
    n = state.n
    for _ in range(iters):
        u = unitary_mapping(center, ONE)
        poly = majorana_polynomial(rotate(state, u))
        k = np.arange(d - 1, n + 1)
        fall = np.array([factorial(j) / factorial(j - d + 1) for j in k])
        deriv = poly[d - 1:] * fall
        z = 0.0 + 0j
        dd = np.polynomial.polynomial.polyder(deriv)
        for _ in range(50):
            f = np.polynomial.polynomial.polyval(z, deriv)
            fp = np.polynomial.polynomial.polyval(z, dd) if dd.size else 0.0
            if fp == 0:
                break
            step = f / fp
            z = z - step
            if abs(step) < 1e-16 * max(1.0, abs(z)) or abs(z) > 1.0:
                break
        if not np.isfinite(z) or abs(z) > 1.0:
            return center
        local = _qubit_from_root(z)
        center = PureQubit.from_vector(u.conj().T @ local.vector)
    return center


def is_majorana_point(state: SymmetricState, q: PureQubit, tol: float = DEFAULT_MP_TOL) -> MpResidualReport:
    """Test ``(<q_perp|)^{(x) c} |psi> = 0`` for increasing orders ``c``.

    Multiplicity is ``n - c_min + 1`` for the first order ``c_min`` at which
    the projection vanishes. A single step vanishes when projecting the
    normalized intermediate state gives norm below ``tol``; this is scale free
    and does not fire early when other points crowd nearby. If no single step
    vanishes but the accumulated norm does, the first order where it drops
    below ``tol`` is used, so ``is_mp`` always agrees with ``residual < tol``.
    """
    n = state.n
    steps = _step_norms(state, q)
    running = np.cumprod(steps)
    residual = float(running[-1])
    hit = np.nonzero(steps < tol)[0]
    if hit.size == 0:
        hit = np.nonzero(running < tol)[0]
    mult = 0 if hit.size == 0 else n - int(hit[0])
    return MpResidualReport(is_mp=mult >= 1, residual=residual, multiplicity=mult)


def _step_norms(state: SymmetricState, q: PureQubit) -> np.ndarray:
    """Norm of each successive ``<q_perp|`` contraction of the normalized remainder."""
    n = state.n
    qp = antipode(q)
    steps = np.zeros(n)
    cur = state
    for c in range(n):
        if cur is None:
            break
        if cur.n == 1:
            steps[c] = abs(np.conj(qp.a) * cur.coeffs[0] + np.conj(qp.b) * cur.coeffs[1])
            cur = None
        else:
            cur, steps[c] = project_qubit(cur, qp)
    return steps


def _strict_multiplicity(state: SymmetricState, q: PureQubit, tol: float) -> int:
    hit = np.nonzero(_step_norms(state, q) < tol)[0]
    return 0 if hit.size == 0 else state.n - int(hit[0])


def _chordal_matrix(pts: list[PureQubit]) -> np.ndarray:
    vecs = np.array([p.bloch_vector() for p in pts])
    diff = vecs[:, None, :] - vecs[None, :, :]
    return np.linalg.norm(diff, axis=-1)


def _centroid(pts: list[PureQubit]) -> PureQubit:
    v = np.mean([p.bloch_vector() for p in pts], axis=0)
    nrm = np.linalg.norm(v)
    if nrm < 1e-12:
        return pts[0]
    x, y, z = v / nrm
    t = np.arccos(np.clip(z, -1, 1))
    return PureQubit.from_bloch(t, np.arctan2(y, x))


def state_to_points(state: SymmetricState, cluster_tol: float = DEFAULT_CLUSTER_TOL,
                    mp_tol: float = DEFAULT_MP_TOL) -> MajoranaSpectrum:
    """Majorana spectrum of ``state``.

    Companion-matrix roots give first estimates; a multiple point shows up as a
    ring of nearby estimates. Groups are formed top-down along a single-linkage
    dendrogram and a group of size ``m`` is accepted only if its polished
    center has multiplicity exactly ``m``. Accepted centers closer than
    ``cluster_tol`` are merged afterwards.
    """
    if not 0 < cluster_tol < 0.5:
        raise DomainError("cluster_tol must lie in (0, 0.5)")
    n = state.n
    pts = _initial_points(majorana_polynomial(state))
    if len(pts) != n:
        raise NumericalError(f"found {len(pts)} roots for n = {n}")

    groups = _split_groups(state, pts, mp_tol)
    clusters = _merge_close(state, groups, cluster_tol)
    clusters.sort(key=lambda pd: (-pd[1], *pd[0].bloch_angles()))
    return MajoranaSpectrum(n, tuple(clusters))


def _split_groups(state, pts, mp_tol):
    from scipy.cluster.hierarchy import linkage, to_tree
    from scipy.spatial.distance import squareform

    if len(pts) == 1:
        return [(_refine_center(state, pts[0], 1), 1)]
    dist = _chordal_matrix(pts)
    tree = to_tree(linkage(squareform(dist, checks=False), method="single"))
    out = []
    stack = [tree]
    while stack:
        node = stack.pop()
        members = [pts[i] for i in node.pre_order()]
        m = len(members)
        guess = _centroid(members)
        center = _refine_center(state, guess, m)
        if m == 1:
            out.append((center, 1))
            continue
        # A d-fold point is also a root of p^(m-1) for every m <= d, so a wrong
        # group can polish onto a genuine point; members must also sit inside
        # the ring that perturbing an m-fold root would produce.
        radius = _ring_radius(state, center, m)
        tight = max(center.chordal_distance(p) for p in members) <= radius
        if tight and _strict_multiplicity(state, center, mp_tol) == m:
            out.append((center, m))
        else:
            stack.extend([node.get_right(), node.get_left()])
    return out


def _ring_radius(state: SymmetricState, center: PureQubit, m: int, rel: float = 1e-10) -> float:
    # Roots of an m-fold zero move by ~(delta / |c_m|)^(1/m) under a coefficient
    # perturbation delta; chordal distance is ~2|z| near the chart origin.
    poly = majorana_polynomial(rotate(state, unitary_mapping(center, ONE)))
    lead = abs(poly[m])
    if lead == 0.0:
        return 2.0
    return min(2.0, 2.0 * (rel * np.max(np.abs(poly)) / lead) ** (1.0 / m))


def _merge_close(state, groups, cluster_tol):
    groups = sorted(groups, key=lambda g: -g[1])
    merged: list[list] = []
    for p, d in groups:
        for entry in merged:
            if entry[0].chordal_distance(p) < cluster_tol:
                entry[1] += d
                entry[2].append(p)
                break
        else:
            merged.append([p, d, [p]])
    out = []
    for p, d, members in merged:
        if len(members) > 1:
            p = _refine_center(state, _centroid(members), d)
        out.append((p, d))
    return out


def points_to_state(spectrum: MajoranaSpectrum) -> SymmetricState:
    """Normalized symmetrization of all points, counted with degeneracy."""
    return symmetrize_product(spectrum.expanded())


def degeneracy_profile(spectrum: MajoranaSpectrum) -> tuple[int, ...]:
    return tuple(sorted((d for _, d in spectrum.clusters), reverse=True))


def is_dicke_up_to_rotation(state: SymmetricState, tol: float = 1e-6,
                            cluster_tol: float = DEFAULT_CLUSTER_TOL) -> tuple[PureQubit, int] | None:
    """Return ``(axis, k)`` with ``state ~ U^{(x)n} S(n, k)`` and ``U|0> = axis``.

    ``axis`` is the most degenerate point, so ``k <= n/2``. Product states give
    ``k = 0``. Returns ``None`` for anything that is not a rotated Dicke state.
    """
    spec = state_to_points(state, cluster_tol)
    if len(spec.clusters) == 1:
        return spec.clusters[0][0], 0
    if len(spec.clusters) != 2:
        return None
    (p1, d1), (p2, d2) = spec.clusters
    if abs(p2.overlap(antipode(p1))) > 1 - tol:
        return p1, d2
    return None


def random_spectrum(n: int, rng: np.random.Generator, min_separation: float = 0.0) -> MajoranaSpectrum:
    """Random constellation with a random degeneracy pattern.

    Distinct points are drawn uniformly on the Bloch sphere and redrawn until
    every pair is at least ``min_separation`` apart (chordal).
    """
    from .symcore import random_qubit

    cuts = np.sort(rng.choice(np.arange(1, n), size=rng.integers(0, n), replace=False))
    parts = np.diff(np.concatenate([[0], cuts, [n]])).astype(int)
    pts: list[PureQubit] = []
    while len(pts) < parts.size:
        q = random_qubit(rng)
        if all(q.chordal_distance(p) >= min_separation for p in pts):
            pts.append(q)
    return MajoranaSpectrum(n, tuple(zip(pts, parts.tolist())))
