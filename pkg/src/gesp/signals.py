"""Generators for k-sparse ground-truth signals.

Three stochastic models (gaussian / binary / exp_decay) plus two structured
constructions (example1 / example2) whose squared-magnitude tiers realize
prescribed structure-function values.  All models rescale to a target norm
and draw from an explicit numpy Generator so trials are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import MagnitudeProfile, magnitude_profile

SIGNAL_MODELS = ("gaussian", "binary", "exp_decay", "example1", "example2")


@dataclass(frozen=True)
class SignalModelSpec:
    model: str
    n: int
    k: int
    decay: float = 0.7  # squared-magnitude ratio for exp_decay
    target_norm: float = 1.0

    def __post_init__(self):
        if self.model not in SIGNAL_MODELS:
            raise ValueError(f"unknown signal model {self.model!r}; expected one of {SIGNAL_MODELS}")
        if self.n < 1 or self.k < 1 or self.k > self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.target_norm <= 0:
            raise ValueError("target_norm must be positive")
        if self.model == "exp_decay" and not 0.0 < self.decay < 1.0:
            raise ValueError(f"decay must be in (0, 1), got {self.decay}")
        if self.model == "example1" and not (_is_root(self.k, 2) and _is_root(self.k, 6)):
            raise ValueError(f"example1 requires integer sqrt(k) and k^(1/6), got k={self.k}")
        if self.model == "example2" and not (_is_root(self.k, 2) and _is_root(self.k, 4)):
            raise ValueError(f"example2 requires integer sqrt(k) and k^(1/4), got k={self.k}")


@dataclass(frozen=True)
class SparseSignal:
    """A k-sparse complex signal with its support and energy profile."""

    vector: np.ndarray
    support: np.ndarray
    profile: MagnitudeProfile = field(repr=False)

    @property
    def n(self) -> int:
        return self.vector.size

    @property
    def k(self) -> int:
        return self.support.size

    @property
    def norm_sq(self) -> float:
        return self.profile.total_energy


def _is_root(k: int, r: int) -> bool:
    t = round(k ** (1.0 / r))
    return any(c >= 1 and c**r == k for c in (t - 1, t, t + 1))


def _int_root(k: int, r: int) -> int:
    t = round(k ** (1.0 / r))
    for c in (t - 1, t, t + 1):
        if c >= 1 and c**r == k:
            return c
    raise ValueError(f"k={k} is not a perfect {r}-th power")


def sample_support(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random size-k subset of [0, n), sorted ascending."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    return np.sort(rng.choice(n, size=k, replace=False))


def _example1_sq_mags(k: int) -> np.ndarray:
    """Squared-magnitude tiers (unit total energy): one dominant entry,
    a middle band up to sqrt(k), and a flat tail."""
    r = _int_root(k, 2)
    r6 = _int_root(k, 6)
    tiers = [1.0 / r]
    if r > 1:
        tiers += [(1.0 / (r - 1)) * (1.0 / r6 - 1.0 / r)] * (r - 1)
    if k > r:
        tiers += [(1.0 / (k - r)) * (1.0 - 1.0 / r6)] * (k - r)
    return np.array(tiers)


def _example2_sq_mags(k: int) -> np.ndarray:
    """Squared-magnitude tiers (unit total energy): k^(1/4) dominant
    entries, a middle band up to sqrt(k), and a flat tail."""
    r2 = _int_root(k, 2)
    r4 = _int_root(k, 4)
    tiers = [1.0 / k**0.75] * r4
    if r2 > r4:
        tiers += [(1.0 / (r2 - r4)) * (k ** (-1.0 / 3.0) - 1.0 / r2)] * (r2 - r4)
    if k > r2:
        tiers += [(1.0 / (k - r2)) * (1.0 - k ** (-1.0 / 3.0))] * (k - r2)
    return np.array(tiers)


def _nonzero_values(spec: SignalModelSpec, rng: np.random.Generator) -> np.ndarray:
    k = spec.k
    if spec.model == "gaussian":
        vals = math.sqrt(0.5) * (rng.standard_normal(k) + 1j * rng.standard_normal(k))
        while np.any(vals == 0):  # exact-zero draws would break k-sparsity
            regen = vals == 0
            vals[regen] = math.sqrt(0.5) * (
                rng.standard_normal(int(regen.sum())) + 1j * rng.standard_normal(int(regen.sum()))
            )
        return vals
    if spec.model == "binary":
        return np.ones(k, dtype=complex)
    if spec.model == "exp_decay":
        sq = spec.decay ** np.arange(k, dtype=float)
    elif spec.model == "example1":
        sq = _example1_sq_mags(k)
    else:
        sq = _example2_sq_mags(k)
    # descending magnitudes assigned to support slots in random order,
    # with independent uniform phases
    mags = np.sqrt(sq)
    phases = np.exp(2j * np.pi * rng.random(k))
    return (mags * phases)[rng.permutation(k)]


def generate(spec: SignalModelSpec, rng: np.random.Generator) -> SparseSignal:
    """Draw one k-sparse signal: random support, model-specific nonzeros,
    rescaled so that ||x|| equals spec.target_norm exactly."""
    support = sample_support(spec.n, spec.k, rng)
    vals = _nonzero_values(spec, rng)
    vals *= spec.target_norm / np.linalg.norm(vals)
    x = np.zeros(spec.n, dtype=complex)
    x[support] = vals
    return SparseSignal(vector=x, support=support, profile=magnitude_profile(x))
