"""Seeded randomness helpers.

All generators in the package draw from numpy's Philox bit generator, a
counter-based algorithm whose stream is a pure function of the 64-bit key.
That keeps every sampled object (dictionaries, coefficients, initial
iterates, Monte-Carlo samples) reproducible from the seed alone, across
processes and across worker counts.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def make_rng(seed: int) -> np.random.Generator:
    """Return a Philox-backed generator keyed by a 64-bit seed."""
    if not isinstance(seed, (int, np.integer)):
        raise ValueError(f"seed must be an integer, got {type(seed).__name__}")
    return np.random.Generator(np.random.Philox(key=int(seed) & _MASK64))


def derive_seed(*parts) -> int:
    """Derive a child seed from arbitrary labelled parts.

    Stable across runs and platforms (BLAKE2b of the repr of the parts),
    unlike the builtin ``hash``.
    """
    h = hashlib.blake2b(repr(parts).encode("utf-8"), digest_size=8)
    return int.from_bytes(h.digest(), "little")


def random_sphere_point(n: int, seed: int) -> np.ndarray:
    """Uniform point on the unit sphere in R^n, deterministic per seed."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    rng = make_rng(seed)
    while True:
        v = rng.standard_normal(n)
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            return v / norm
