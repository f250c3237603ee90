"""Riemannian trust-region method on the unit sphere.

Each iteration forms the quadratic model of the objective on the tangent
space at the current iterate,

    fhat(d) = f(q) + <grad f(q), d> + 0.5 d' (hess f(q) - <grad f(q), q> I) d,

solves the trust-region subproblem exactly in an orthonormal tangent basis,
pulls the step back with the exponential map, and adapts the radius from the
ratio of actual to predicted decrease. The subproblem is solved by a
safeguarded root find on the secular equation in the eigenbasis of the
reduced Hessian, with the hard case handled explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.optimize import brentq

from .errors import SubproblemError, TangentError
from . import objective
from .rng import random_sphere_point

PROGRESS_TOL = "progress_tol"
MAX_ITER = "max_iter"
SUBPROBLEM_FAILURE = "subproblem_failure"


@dataclass
class TrmConfig:
    """Trust-region controls; defaults follow the reference numerics."""

    delta0: float = 0.1
    delta_max: float = 1.0
    delta_min: float = 1e-16
    eta_vs: float = 0.9
    eta_s: float = 0.1
    gamma_i: float = 2.0
    gamma_d: float = 0.5
    stop_tol: float = 1e-6
    max_iter: int = 10000
    # Radius adaptation can be disabled to mirror the fixed-step analysis
    # setting; the default matches the adaptive numerics.
    fixed_radius: bool = False

    def __post_init__(self):
        if not (0.0 < self.eta_s < self.eta_vs < 1.0):
            raise ValueError("acceptance thresholds must satisfy 0 < eta_s < eta_vs < 1")
        if not (self.gamma_d < 1.0 < self.gamma_i):
            raise ValueError("radius factors must satisfy gamma_d < 1 < gamma_i")
        if not (0.0 < self.delta_min <= self.delta0 <= self.delta_max):
            raise ValueError("radii must satisfy 0 < delta_min <= delta0 <= delta_max")
        if self.stop_tol < 0 or self.max_iter < 1:
            raise ValueError("stop_tol must be >= 0 and max_iter >= 1")


@dataclass
class TrmIterate:
    """One iteration record: trial objective, radius used, ratio, step."""

    f: float
    delta: float
    rho: float
    step_norm: float
    accepted: bool


@dataclass
class TrmResult:
    q: np.ndarray
    f: float
    iterates: List[TrmIterate] = field(default_factory=list)
    termination: str = PROGRESS_TOL

    @property
    def n_iter(self) -> int:
        return len(self.iterates)

    def accepted_values(self) -> np.ndarray:
        return np.array([it.f for it in self.iterates if it.accepted])


def _check_unit(q, what="q"):
    q = np.asarray(q, dtype=np.float64)
    norm = np.linalg.norm(q)
    if not np.isfinite(norm) or abs(norm - 1.0) > 1e-8:
        raise ValueError(f"{what} must be unit norm, got |{what}| = {norm}")
    return q / norm


def _check_tangent(q, delta):
    delta = np.asarray(delta, dtype=np.float64)
    nd = np.linalg.norm(delta)
    if nd > 0 and abs(q @ delta) > 1e-8 * nd:
        raise TangentError(f"step is not tangent: |q.d| = {abs(q @ delta):.3g} "
                           f"for |d| = {nd:.3g}")
    return delta, nd


def tangent_basis(q) -> np.ndarray:
    """Deterministic orthonormal basis of the tangent space at ``q``.

    Columns 2..n of the Householder reflector that maps q to a signed first
    basis vector; fixed sign convention makes the basis unique.
    """
    q = _check_unit(q)
    n = q.size
    s = 1.0 if q[0] >= 0 else -1.0
    u = q.copy()
    u[0] += s
    U = (-2.0 / (u @ u)) * np.outer(u, u[1:])
    U[1:, :] += np.eye(n - 1)
    return U


def retract(q, delta) -> np.ndarray:
    """Exponential map: follow the great circle with velocity ``delta``."""
    q = _check_unit(q)
    delta, nd = _check_tangent(q, delta)
    if nd == 0.0:
        return q.copy()
    out = np.cos(nd) * q + (np.sin(nd) / nd) * delta
    return out / np.linalg.norm(out)


def quadratic_model(q, Y, mu, delta) -> float:
    """Value of the tangent-space quadratic model at step ``delta``."""
    q = _check_unit(q)
    delta, _ = _check_tangent(q, delta)
    f, grad = objective.f_value_grad(q, Y, mu)
    H = objective.f_hessian(q, Y, mu)
    return float(f + grad @ delta + 0.5 * delta @ (H @ delta - (grad @ q) * delta))


def solve_subproblem(B, g, radius):
    """Global minimizer of ``g.x + 0.5 x'Bx`` over the ball ``|x| <= radius``.

    Returns ``(x, on_boundary, lam)`` where ``lam >= 0`` is the multiplier of
    the KKT system ``(B + lam I) x = -g`` with ``B + lam I`` positive
    semidefinite and ``lam (radius - |x|) = 0``. The hard case (gradient
    orthogonal to the bottom eigenspace) is resolved by adding a bottom
    eigenvector component that reaches the boundary.
    """
    B = np.asarray(B, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if B.shape != (g.size, g.size):
        raise ValueError(f"shape mismatch: B {B.shape}, g {g.shape}")
    scale = max(np.abs(B).max(initial=0.0), 1.0)
    if np.abs(B - B.T).max(initial=0.0) > 1e-12 * scale:
        raise ValueError("B must be symmetric")
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    B = 0.5 * (B + B.T)
    try:
        evals, Q = np.linalg.eigh(B)
    except np.linalg.LinAlgError as exc:
        raise SubproblemError(f"eigensolver failed: {exc}") from exc
    b = Q.T @ g
    eps_zero = 1e-13 * max(np.abs(evals).max(initial=0.0), 1.0)

    # Interior solution: B positive semidefinite, Newton step inside the ball.
    if evals[0] >= -eps_zero:
        active = evals > eps_zero
        if np.all(np.abs(b[~active]) <= eps_zero * max(1.0, np.linalg.norm(b))):
            x_e = np.zeros_like(b)
            x_e[active] = -b[active] / evals[active]
            if np.linalg.norm(x_e) <= radius * (1.0 + 1e-12):
                return Q @ x_e, False, 0.0

    lam_lo = max(0.0, -evals[0])
    gap = evals + lam_lo  # >= 0; zero on the bottom eigenspace when lam_lo > 0
    blocked = gap <= eps_zero

    def shifted_norm(u):
        # |x(lam_lo + u)| for u > 0; denominators gap + u are positive.
        return np.linalg.norm(b / (gap + u))

    x_lo = np.where(blocked, 0.0, -b / np.where(blocked, 1.0, gap))
    norm_lo = np.linalg.norm(x_lo)
    bottom_grad = np.linalg.norm(b[blocked]) if blocked.any() else 0.0

    if bottom_grad > eps_zero * max(1.0, np.linalg.norm(b)) or norm_lo > radius:
        # Secular equation: |x(lam)| = radius has a unique root above lam_lo
        # because the norm decreases from above radius to zero. phi below is
        # decreasing in u; bracket a sign change and bisect.
        def phi(u):
            return 1.0 / radius - 1.0 / shifted_norm(u)

        lo = 1e-12 * max(lam_lo, 1.0)
        for _ in range(2000):
            if shifted_norm(lo) > radius or lo < 1e-300:
                break
            lo *= 0.125
        hi = np.linalg.norm(b) / radius + eps_zero + 1.0  # shifted_norm(hi) < radius
        for _ in range(200):
            if phi(hi) > 0:
                break
            hi *= 4.0
        try:
            u = brentq(phi, lo, hi, xtol=1e-20, rtol=8.9e-16, maxiter=300)
        except ValueError as exc:
            raise SubproblemError(f"secular root find failed: {exc}") from exc
        lam = lam_lo + u
        x = Q @ (-b / (evals + lam))
        return x, True, float(lam)

    # Hard case: the multiplier saturates at -lambda_min and the boundary is
    # reached along the bottom eigenvector.
    x_e = np.where(blocked, 0.0, -b / np.where(blocked, 1.0, gap))
    deficit = radius**2 - float(x_e @ x_e)
    x = Q @ x_e + np.sqrt(max(deficit, 0.0)) * Q[:, 0]
    return x, True, float(lam_lo)


def minimize(Y, mu: float, cfg: Optional[TrmConfig] = None, q0=None,
             seed: int = 0) -> TrmResult:
    """Run the trust-region iteration until the progress test or the cap.

    Acceptance per iteration: solve the subproblem at the current radius,
    retract, and compare actual to predicted decrease (ratio ``rho``). A
    very successful boundary step (rho >= eta_vs, |xi| = Delta) grows the
    radius; a successful step (rho >= eta_s) keeps it; otherwise the trial
    is rejected and the radius shrinks. Stops when the per-unit-step
    progress |f(q) - f(trial)| / |step| drops to ``stop_tol``.
    """
    cfg = cfg or TrmConfig()
    Y = objective._data_entries(Y)
    n = Y.shape[0]
    if q0 is None:
        q0 = random_sphere_point(n, seed)
    q = _check_unit(q0, "q0")

    f, grad = objective.f_value_grad(q, Y, mu)
    delta_r = cfg.delta0
    iterates: List[TrmIterate] = []
    termination = MAX_ITER

    for _ in range(cfg.max_iter):
        U = tangent_basis(q)
        H = objective.f_hessian(q, Y, mu)
        B = U.T @ H @ U - (grad @ q) * np.eye(n - 1)
        gr = U.T @ grad
        try:
            xi, _, _ = solve_subproblem(B, gr, delta_r)
        except SubproblemError:
            termination = SUBPROBLEM_FAILURE
            break
        step_norm = float(np.linalg.norm(xi))
        if step_norm == 0.0:
            # Stationary with positive semidefinite model: nothing to do.
            termination = PROGRESS_TOL
            break
        step = U @ xi
        q_trial = retract(q, step)
        f_trial = objective.f_value(q_trial, Y, mu)
        predicted = -(gr @ xi + 0.5 * xi @ B @ xi)
        actual = f - f_trial
        rho = actual / predicted if predicted > 0 else -np.inf

        on_boundary = abs(step_norm - delta_r) <= 1e-10 * delta_r
        accepted = rho >= cfg.eta_s
        new_delta = delta_r
        if rho >= cfg.eta_vs and on_boundary:
            new_delta = min(cfg.gamma_i * delta_r, cfg.delta_max)
        elif not accepted:
            new_delta = max(cfg.gamma_d * delta_r, cfg.delta_min)
        iterates.append(TrmIterate(f=f_trial, delta=delta_r, rho=float(rho),
                                   step_norm=step_norm, accepted=accepted))
        if not cfg.fixed_radius:
            delta_r = new_delta
        if accepted:
            q = q_trial
            f, grad = objective.f_value_grad(q, Y, mu)
        if abs(actual) / step_norm <= cfg.stop_tol:
            termination = PROGRESS_TOL
            break

    return TrmResult(q=q, f=f, iterates=iterates, termination=termination)
