"""Synthetic problem instances: dictionaries, sparse coefficients, observations.

The generative model is ``Y = A0 @ X0`` with a square invertible dictionary
``A0`` and a coefficient matrix ``X0`` whose entries are either
Bernoulli(theta)-gated standard normals or exactly-k-sparse columns with
standard normal nonzeros. Everything is a pure function of its arguments,
including the seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .rng import derive_seed, make_rng

ORTHOGONAL = "orthogonal"
COMPLETE = "complete"


@dataclass(frozen=True)
class Dictionary:
    """Square invertible dictionary with its construction metadata."""

    entries: np.ndarray
    kind: str  # ORTHOGONAL or COMPLETE
    kappa: float

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def condition_number(self) -> float:
        s = np.linalg.svd(self.entries, compute_uv=False)
        return float(s[0] / s[-1])


@dataclass(frozen=True)
class Coefficients:
    """Sparse coefficient matrix with an explicit support mask."""

    entries: np.ndarray
    support: np.ndarray  # boolean, same shape as entries
    mode: str  # "bg" or "fixed_k"
    theta: Optional[float]
    k: Optional[int]
    seed: int

    @property
    def shape(self):
        return self.entries.shape

    def support_density(self) -> float:
        return float(self.support.mean())


@dataclass(frozen=True)
class Observations:
    """A data matrix, with provenance when synthesized."""

    entries: np.ndarray
    dictionary: Optional[Dictionary] = None
    coefficients: Optional[Coefficients] = None

    @property
    def shape(self):
        return self.entries.shape


def _haar_orthogonal(n: int, seed: int) -> np.ndarray:
    # QR of a seeded Gaussian; forcing the R diagonal positive makes the
    # factor unique, so the draw is reproducible and Haar distributed.
    rng = make_rng(seed)
    g = rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def make_orthogonal_dictionary(n: int, seed: int) -> Dictionary:
    """Haar-like orthogonal dictionary, deterministic per seed."""
    if n < 2:
        raise ValueError(f"dictionary dimension must be >= 2, got {n}")
    return Dictionary(entries=_haar_orthogonal(n, seed), kind=ORTHOGONAL, kappa=1.0)


def make_complete_dictionary(n: int, kappa: float, seed: int) -> Dictionary:
    """Complete dictionary with prescribed condition number.

    Built as ``U diag(s) V.T`` with seeded orthogonal factors and a geometric
    spectrum from 1 down to 1/kappa, so the measured condition number equals
    the request up to roundoff.
    """
    if n < 2:
        raise ValueError(f"dictionary dimension must be >= 2, got {n}")
    if kappa < 1.0:
        raise ValueError(f"condition number must be >= 1, got {kappa}")
    u = _haar_orthogonal(n, derive_seed(seed, "complete-u"))
    v = _haar_orthogonal(n, derive_seed(seed, "complete-v"))
    spectrum = np.geomspace(1.0, 1.0 / kappa, n)
    entries = (u * spectrum) @ v.T
    return Dictionary(entries=entries, kind=COMPLETE, kappa=float(kappa))


def sample_bg(n: int, p: int, theta: float, seed: int) -> Coefficients:
    """Bernoulli-Gaussian coefficients: entry = Ber(theta) * N(0, 1)."""
    if n < 1 or p < 1:
        raise ValueError(f"matrix shape must be positive, got ({n}, {p})")
    if not (0.0 < theta < 1.0):
        raise ValueError(f"rate theta must lie in (0, 1), got {theta}")
    rng = make_rng(seed)
    support = rng.random((n, p)) < theta
    values = rng.standard_normal((n, p))
    return Coefficients(
        entries=np.where(support, values, 0.0),
        support=support,
        mode="bg",
        theta=float(theta),
        k=None,
        seed=int(seed),
    )


def sample_fixed_k(n: int, p: int, k: int, seed: int) -> Coefficients:
    """Coefficients with exactly k nonzeros per column, uniform supports."""
    if n < 1 or p < 1:
        raise ValueError(f"matrix shape must be positive, got ({n}, {p})")
    if not (1 <= k <= n):
        raise ValueError(f"nonzeros per column must lie in [1, {n}], got {k}")
    rng = make_rng(seed)
    # Argsort of iid uniforms is a uniform permutation per column; its first
    # k entries are a uniform k-subset.
    order = np.argsort(rng.random((p, n)), axis=1)
    support = np.zeros((n, p), dtype=bool)
    cols = np.repeat(np.arange(p), k)
    support[order[:, :k].ravel(), cols] = True
    values = rng.standard_normal((n, p))
    return Coefficients(
        entries=np.where(support, values, 0.0),
        support=support,
        mode="fixed_k",
        theta=None,
        k=int(k),
        seed=int(seed),
    )


def synthesize(dictionary, coefficients) -> Observations:
    """Exact product Y = A0 X0 with provenance attached."""
    a = dictionary.entries if isinstance(dictionary, Dictionary) else np.asarray(dictionary)
    x = coefficients.entries if isinstance(coefficients, Coefficients) else np.asarray(coefficients)
    if a.ndim != 2 or x.ndim != 2 or a.shape[1] != x.shape[0]:
        raise ValueError(f"incompatible shapes {a.shape} and {x.shape}")
    return Observations(
        entries=a @ x,
        dictionary=dictionary if isinstance(dictionary, Dictionary) else None,
        coefficients=coefficients if isinstance(coefficients, Coefficients) else None,
    )
