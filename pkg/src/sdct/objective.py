"""The smoothed sparsity objective over the sphere and its derivatives.

For a data matrix ``Y`` with columns ``y_k`` and a smoothing level ``mu``,
the objective is

    f(q) = (1/p) * sum_k h_mu(q . y_k),      h_mu(z) = mu * log cosh(z / mu),

minimized over unit vectors ``q``. This module evaluates ``h_mu`` stably,
the Euclidean gradient/Hessian of ``f``, their Riemannian projections onto
the sphere's tangent spaces, and the reparametrized objective

    g(w) = f(q(w)),      q(w) = (w, sqrt(1 - |w|^2)),

on the hemisphere chart over the equatorial plane, in the closed forms

    grad g = (1/p) sum_k tanh(z_k/mu) * u_k,
    hess g = (1/p) sum_k [ sech^2(z_k/mu)/mu * u_k u_k'
                           - x_nk tanh(z_k/mu) * (I/q_n + w w'/q_n^3) ],

with ``z_k = q(w) . x_k`` and ``u_k = xbar_k - (x_nk / q_n) w``.
"""

from __future__ import annotations

import warnings

import numpy as np

from .errors import ChartError

LOG2 = float(np.log(2.0))


def check_mu(mu: float) -> None:
    """Validate a smoothing level: positive, finite, small in practice."""
    if not np.isfinite(mu) or mu <= 0:
        raise ValueError(f"smoothing level must be positive and finite, got {mu}")
    if mu > 1.0:
        warnings.warn(f"smoothing level mu={mu} is above 1; the surrogate is "
                      "designed for small mu", stacklevel=3)


def gamma_radius(n: int) -> float:
    """Radius of the chart region Gamma: sqrt((4n - 1) / (4n))."""
    return float(np.sqrt((4.0 * n - 1.0) / (4.0 * n)))


def _tanh_sech2(x):
    """tanh(x) and sech^2(x), the latter via exp(-2|x|) to keep the
    exponential lower bound valid even where 1 - tanh^2 underflows."""
    e = np.exp(-2.0 * np.abs(x))
    t = np.tanh(x)
    s = 4.0 * e / np.square(1.0 + e)
    return t, s


def surrogate(z, mu: float):
    """Value and first two derivatives of ``h_mu`` at ``z`` (elementwise).

    Stable for |z / mu| up to at least 1e8 by the identity
    log cosh(x) = |x| + log1p(exp(-2|x|)) - log 2.
    """
    check_mu(mu)
    z = np.asarray(z, dtype=np.float64)
    if not np.all(np.isfinite(z)):
        raise ValueError("surrogate input must be finite")
    x = z / mu
    ax = np.abs(x)
    e = np.exp(-2.0 * ax)
    h = mu * (ax + np.log1p(e) - LOG2)
    dh = np.tanh(x)
    ddh = (4.0 * e / np.square(1.0 + e)) / mu
    if z.ndim == 0:
        return float(h), float(dh), float(ddh)
    return h, dh, ddh


def _data_entries(Y) -> np.ndarray:
    entries = getattr(Y, "entries", Y)
    Y = np.asarray(entries, dtype=np.float64)
    if Y.ndim != 2:
        raise ValueError(f"expected a data matrix, got ndim={Y.ndim}")
    if Y.shape[1] == 0:
        raise ValueError("data matrix has no columns")
    return Y


def f_value(q, Y, mu: float) -> float:
    """f(q) alone; cheaper than f_value_grad when the gradient is unused."""
    check_mu(mu)
    Y = _data_entries(Y)
    q = np.asarray(q, dtype=np.float64)
    z = q @ Y
    x = np.abs(z) / mu
    return float(mu * np.mean(x + np.log1p(np.exp(-2.0 * x)) - LOG2))


def f_value_grad(q, Y, mu: float):
    """Objective value and Euclidean gradient (1/p) sum tanh(z_k/mu) y_k."""
    check_mu(mu)
    Y = _data_entries(Y)
    q = np.asarray(q, dtype=np.float64)
    if q.shape != (Y.shape[0],):
        raise ValueError(f"direction shape {q.shape} does not match data {Y.shape}")
    z = q @ Y
    x = z / mu
    ax = np.abs(x)
    f = float(mu * np.mean(ax + np.log1p(np.exp(-2.0 * ax)) - LOG2))
    grad = Y @ np.tanh(x) / Y.shape[1]
    return f, grad


def f_hessian(q, Y, mu: float) -> np.ndarray:
    """Euclidean Hessian (1/p) sum sech^2(z_k/mu)/mu * y_k y_k'."""
    check_mu(mu)
    Y = _data_entries(Y)
    q = np.asarray(q, dtype=np.float64)
    if q.shape != (Y.shape[0],):
        raise ValueError(f"direction shape {q.shape} does not match data {Y.shape}")
    _, s = _tanh_sech2(q @ Y / mu)
    H = (Y * s) @ Y.T / (mu * Y.shape[1])
    return 0.5 * (H + H.T)


def riemannian_grad_hess(q, Y, mu: float):
    """Projected gradient and Hessian on the tangent space at ``q``.

    With P = I - q q': grad = P (grad f), hess = P (hess f - (grad f . q) I) P.
    """
    q = np.asarray(q, dtype=np.float64)
    f_, grad = f_value_grad(q, Y, mu)
    H = f_hessian(q, Y, mu)
    rgrad = grad - (q @ grad) * q
    A = H - (grad @ q) * np.eye(q.size)
    PA = A - np.outer(q, q @ A)
    rhess = PA - np.outer(PA @ q, q)
    return rgrad, 0.5 * (rhess + rhess.T)


def lift(w) -> np.ndarray:
    """Chart inverse: w in the open unit ball -> (w, +sqrt(1 - |w|^2))."""
    w = np.asarray(w, dtype=np.float64)
    nw2 = w @ w
    if nw2 >= 1.0:
        raise ChartError(f"|w| = {np.sqrt(nw2):.6g} is not inside the unit ball")
    return np.concatenate([w, [np.sqrt(1.0 - nw2)]])


def project(q) -> np.ndarray:
    """Chart coordinates of a sphere point: drop the last entry.

    The canonical chart covers the q_n > 0 hemisphere; points with q_n = 0
    are not representable (use a chart along another signed axis by
    permuting/negating coordinates first). For q_n < 0 the same coordinates
    refer to the mirror chart, and lift(project(q)) recovers -q's mirror.
    """
    q = np.asarray(q, dtype=np.float64)
    if abs(q[-1]) <= 1e-12:
        raise ChartError("q_n = 0: point lies on the equator of the canonical "
                         "chart; use a chart along a different signed axis")
    return q[:-1].copy()


def g_value_grad_hess(w, X, mu: float):
    """Value, gradient and Hessian of g(w) = f(q(w)) in the chart."""
    check_mu(mu)
    X = _data_entries(X)
    w = np.asarray(w, dtype=np.float64)
    n = X.shape[0]
    if w.shape != (n - 1,):
        raise ValueError(f"chart point shape {w.shape} does not match data {X.shape}")
    nw2 = w @ w
    if nw2 >= 1.0:
        raise ChartError(f"|w| = {np.sqrt(nw2):.6g} is not inside the unit ball")
    if nw2 > gamma_radius(n) ** 2:
        warnings.warn("w lies outside the region Gamma where the landscape "
                      "certificates apply", stacklevel=2)
    qn = np.sqrt(1.0 - nw2)
    p = X.shape[1]
    Xbar, xn = X[:-1], X[-1]
    z = (w @ Xbar + qn * xn) / mu
    t, s = _tanh_sech2(z)
    ax = np.abs(z)
    g = float(mu * np.mean(ax + np.log1p(np.exp(-2.0 * ax)) - LOG2))
    U = Xbar - np.outer(w, xn / qn)
    grad = U @ t / p
    c = (xn @ t) / p
    hess = (U * (s / mu)) @ U.T / p - c * (np.eye(n - 1) / qn + np.outer(w, w) / qn**3)
    return g, grad, 0.5 * (hess + hess.T)
