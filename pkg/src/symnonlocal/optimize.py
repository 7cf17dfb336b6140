"""Measurement-setting optimization and the Dicke-state angle machinery.

Two pieces live here. The first is the closed-form analysis of ``S(n, k)``
measured with ``{|+>, |->}`` as setting 0 and a real rotated basis at angle
``theta`` as setting 1: the Hardy functional's value divided by ``C(n, k)``,
the roots of its middle term, and a grid search for the best angle. The second
is a multi-start local search for settings that maximize an arbitrary
functional on a given state. The search only ever reports the best value it
found; it is a lower bound on the quantum maximum, not a certificate.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .bell import BellFunctional, SettingsAssignment, evaluate_functional
from .symcore import DomainError, SymmetricState, project_coeffs, to_statevector

log = logging.getLogger(__name__)

SWEEP_TOL = 1e-9
MAX_TABLE_PARTIES = 8
GRAD_TOL = 1e-6


@dataclass(frozen=True)
class OptimizationConfig:
    restarts: int = 64
    grid_points: int = 4096
    max_iters: int = 300
    step_tol: float = 1e-12
    seed: int = 0
    identical_settings: bool = False

    def __post_init__(self):
        if self.restarts < 1:
            raise DomainError("restarts must be >= 1")
        if self.grid_points < 8:
            raise DomainError("grid_points must be >= 8")
        if not self.step_tol > 0:
            raise DomainError("step_tol must be positive")


@dataclass
class OptimizationResult:
    best_value: float
    best_settings: SettingsAssignment
    trace: list[tuple[int, float]]
    converged: bool
    restart_values: list[float] = field(default_factory=list)


# -- Dicke states: value of the rescaled Hardy functional ---------------------

def rescaled_dicke_value(n: int, k: int, theta: float) -> float:
    """Hardy functional on ``S(n, k)`` with the rotated-basis settings, divided by ``C(n, k)``."""
    if not 0 <= k <= n:
        raise DomainError(f"k must lie in [0, {n}]")
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    middle = ((n - k) / n * c - k / n * s) ** 2
    return float(0.5**n - n * 0.5 ** (n - 1) * middle - c ** (2 * k) * s ** (2 * n - 2 * k))


def closed_form_thetas(n: int, k: int, tol: float = 1e-9) -> list[float]:
    """Angles in ``[0, pi]`` where ``((n-k)/n cos(t/2) - k/n sin(t/2))**2 = 1/(4n)``.

    Isolating ``sin`` and squaring gives a quadratic in ``cos(t/2)`` for each
    sign of the square root. Candidates from both signs are kept when
    ``cos(t/2)`` is in ``[0, 1]`` and the unsquared equation holds.
    """
    if not 1 <= k <= n - 1:
        raise DomainError(f"k must lie in [1, {n - 1}]")
    disc = 8 * k**4 - k**2 * n - 8 * k**3 * n + 4 * k**2 * n**2
    if disc < 0:
        return []
    den = 2 * (2 * k**2 - 2 * k * n + n**2)
    rn = np.sqrt(n)
    out = []
    for sign in (-1.0, 1.0):
        for pm in (1.0, -1.0):
            cos_half = (sign * (n * rn - k * rn) + pm * np.sqrt(disc)) / den
            if not -1e-12 <= cos_half <= 1 + 1e-12:
                continue
            theta = 2 * float(np.arccos(np.clip(cos_half, 0.0, 1.0)))
            c, s = np.cos(theta / 2), np.sin(theta / 2)
            if abs(((n - k) / n * c - k / n * s) ** 2 - 1 / (4 * n)) < tol:
                if all(abs(theta - t) > 1e-9 for t in out):
                    out.append(theta)
    return sorted(out)


def dicke_theta_search(n: int, k: int, grid_points: int = 4096) -> tuple[float, float]:
    """Best ``theta`` for ``S(n, k)``: uniform grid, then bounded refinement of the best cell."""
    if not 1 <= k <= n - 1:
        raise DomainError(f"k must lie in [1, {n - 1}]")
    grid = np.linspace(0.0, np.pi, grid_points)
    c, s = np.cos(grid / 2), np.sin(grid / 2)
    vals = 0.5**n - n * 0.5 ** (n - 1) * ((n - k) / n * c - k / n * s) ** 2 - c ** (2 * k) * s ** (2 * n - 2 * k)
    i = int(np.argmax(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid_points - 1)]
    res = minimize_scalar(lambda t: -rescaled_dicke_value(n, k, t), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-13})
    theta, value = float(grid[i]), float(vals[i])
    if -res.fun > value:
        theta, value = float(res.x), float(-res.fun)
    return theta, value


# -- General settings search --------------------------------------------------

class _Evaluator:
    """Fast functional value for angle-parameterized settings on a fixed state.

    For small ``n`` the amplitudes of every (setting, outcome) string are built
    at once by contracting the dense state with each party's four bras, and
    each term reads its probability from that table; unlisted parties are
    summed over both outcomes of setting 0. Larger ``n`` falls back to
    contracting the Dicke coefficients term by term.
    """

    def __init__(self, state: SymmetricState, f: BellFunctional):
        self.n = state.n
        self.coeffs = np.asarray(state.coeffs)
        self.terms = [(t.coefficient, t.parties, t.settings, t.outcomes) for t in f.terms]
        self.dense = self.n <= MAX_TABLE_PARTIES
        if self.dense:
            self.psi = to_statevector(state).reshape((2,) * self.n)
            self.coef = np.array([t[0] for t in self.terms])
            self.index = []
            for _, parties, settings, outcomes in self.terms:
                idx = [slice(0, 2)] * self.n
                for p, st, r in zip(parties, settings, outcomes):
                    idx[p] = 2 * st + r
                self.index.append(tuple(idx))

    def __call__(self, vecs: np.ndarray) -> float:
        if not self.dense:
            return _value(self.coeffs, vecs, self.terms)
        t = self.psi
        for p in range(self.n):
            t = np.tensordot(t, np.conj(vecs[p]).reshape(4, 2), axes=([0], [1]))
        probs = t.real**2 + t.imag**2
        return float(sum(c * probs[idx].sum() for c, idx in zip(self.coef, self.index)))


def _value(coeffs: np.ndarray, vecs: np.ndarray, terms) -> float:
    total = 0.0
    for coef, parties, settings, outcomes in terms:
        c = coeffs
        for p, s, r in zip(parties, settings, outcomes):
            a, b = vecs[p, s, r]
            if c.size == 2:
                c = np.array([np.conj(a) * c[0] + np.conj(b) * c[1]])
            else:
                c = project_coeffs(c, a, b)
        total += coef * float(np.vdot(c, c).real)
    return total


def _vectors(angles: np.ndarray) -> np.ndarray:
    """``(n, 2, 2, 2)``: party, setting, outcome, amplitude."""
    t, p = angles[..., 0], angles[..., 1]
    a, b = np.cos(t / 2), np.exp(1j * p) * np.sin(t / 2)
    v0 = np.stack([a, b], axis=-1)
    v1 = np.stack([-np.conj(b), np.conj(a)], axis=-1)
    return np.stack([v0, v1], axis=-2)


_PROBES = np.array([[0.0, 0.0], [np.pi, 0.0], [np.pi / 2, 0.0], [np.pi / 2, np.pi / 2]])


def _seesaw_step(ev, angles, vecs, p, s):
    """Exactly maximize over one party's basis for one setting.

    The functional is affine in that basis's outcome-0 projector, hence affine
    in its Bloch vector ``r``: ``V = alpha + beta . r``, maximized at
    ``r = beta / |beta|``.
    """
    vals = []
    for probe in _PROBES:
        vecs[p, s] = _vectors(probe)
        vals.append(ev(vecs))
    vz, vmz, vx, vy = vals
    alpha = 0.5 * (vz + vmz)
    beta = np.array([vx - alpha, vy - alpha, 0.5 * (vz - vmz)])
    nb = np.linalg.norm(beta)
    if nb == 0.0:
        new = np.array([0.0, 0.0])
    else:
        x, y, z = beta / nb
        new = np.array([np.arccos(np.clip(z, -1, 1)), np.arctan2(y, x) % (2 * np.pi)])
    angles[p, s] = new
    vecs[p, s] = _vectors(new)


def _random_angles(rng: np.random.Generator, shape) -> np.ndarray:
    t = np.arccos(rng.uniform(-1.0, 1.0, size=shape))
    phi = rng.uniform(0.0, 2 * np.pi, size=shape)
    return np.stack([t, phi], axis=-1)


def _canonical(angles: np.ndarray) -> np.ndarray:
    """Map each ``(t, phi)`` to ``t in [0, pi]``, ``phi in [0, 2 pi)``; poles get ``phi = 0``."""
    t = np.mod(angles[..., 0], 2 * np.pi)
    phi = angles[..., 1].copy()
    flip = t > np.pi
    t = np.where(flip, 2 * np.pi - t, t)
    phi = np.where(flip, phi + np.pi, phi) % (2 * np.pi)
    phi = np.where((t < 1e-15) | (np.pi - t < 1e-15), 0.0, phi)
    return np.stack([t, phi], axis=-1)


def _polish(ev, x0, shape, config):
    return minimize(lambda x: -ev(_vectors(x.reshape(shape))), x0, method="BFGS",
                    options={"maxiter": config.max_iters, "gtol": 1e-9})


def _run_seesaw(ev, angles, config):
    n = angles.shape[0]
    vecs = _vectors(angles)
    value = ev(vecs)
    trace = [(0, value)]
    it = 0
    for it in range(1, config.max_iters + 1):
        prev = value
        for p in range(n):
            for s in range(2):
                _seesaw_step(ev, angles, vecs, p, s)
        # Each step is an exact block maximum, so a sweep cannot lose value
        # beyond rounding; max() keeps the reported trace monotone.
        value = max(ev(vecs), prev)
        trace.append((it, value))
        if value - prev < SWEEP_TOL:
            break
    # See-saw converges only linearly near an optimum; finish with a quasi-Newton polish.
    res = _polish(ev, angles.ravel(), (n, 2, 2), config)
    if -res.fun > value:
        angles = res.x.reshape(n, 2, 2)
        value = float(-res.fun)
        trace.append((it + 1, value))
    # BFGS often stops on precision loss at a stationary point; judge by the gradient.
    converged = bool(res.success) or float(np.linalg.norm(res.jac)) < GRAD_TOL
    return angles, trace, converged


def _run_identical(ev, angles, config):
    n = angles.shape[0]
    shape = (n, 2, 2)

    def expand(x):
        return np.broadcast_to(x.reshape(1, 2, 2), shape)

    def objective(x):
        return -ev(_vectors(expand(x)))

    x0 = angles[0].ravel()
    value = -objective(x0)
    trace = [(0, value)]

    def callback(xk):
        trace.append((len(trace), max(trace[-1][1], -objective(xk))))

    res = minimize(objective, x0, method="Nelder-Mead", callback=callback,
                   options={"maxiter": config.max_iters * 20, "xatol": 1e-10, "fatol": config.step_tol})
    x = res.x if -res.fun >= value else x0
    return expand(x).copy(), trace, bool(res.success)


def optimize_settings(state: SymmetricState, f: BellFunctional, config: OptimizationConfig | None = None,
                      initial: SettingsAssignment | None = None) -> OptimizationResult:
    """Multi-start local ascent of ``f`` over projective qubit settings.

    Per-party mode runs a see-saw: each sweep re-optimizes every party's two
    bases one at a time in closed form, so the value never decreases, and a
    BFGS polish finishes each restart. With ``identical_settings`` all parties
    share two bases and the four angles are searched with Nelder-Mead.
    ``initial``, if given, seeds the first restart. The result is the best
    value found, a lower bound on the quantum maximum.
    """
    config = config or OptimizationConfig()
    n = state.n
    if f.n != n:
        raise DomainError(f"functional is for {f.n} parties, state has {n}")
    ev = _Evaluator(state, f)
    seeds = np.random.SeedSequence(config.seed).spawn(config.restarts)
    runs = []
    for r, ss in enumerate(seeds):
        rng = np.random.default_rng(ss)
        if r == 0 and initial is not None:
            if initial.n != n:
                raise DomainError("initial settings have the wrong party count")
            start = initial.angles()
        else:
            start = _random_angles(rng, (n, 2))
        if config.identical_settings:
            angles, trace, conv = _run_identical(ev, start.copy(), config)
        else:
            angles, trace, conv = _run_seesaw(ev, start.copy(), config)
        angles = _canonical(angles)
        value = ev(_vectors(angles))
        runs.append((value, angles, trace, conv))
        log.debug("restart %d: %.12f", r, value)

    top = max(v for v, *_ in runs)
    winners = [run for run in runs if run[0] == top]
    value, angles, trace, conv = min(winners, key=lambda run: tuple(run[1].ravel()))
    settings = SettingsAssignment.from_angles(angles)
    best = evaluate_functional(state, f, settings)
    return OptimizationResult(best, settings, trace, conv, [float(v) for v, *_ in runs])
