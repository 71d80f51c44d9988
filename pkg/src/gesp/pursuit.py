"""The gESP initializer: four pipeline steps plus p-selection strategies.

Given phaseless measurements of a k-sparse signal, the pipeline

  1. picks the p largest diagonal entries of the exponential spectrum (S0),
  2. takes the unit maximal eigenvector of the S0 principal submatrix (e0),
  3. keeps the k largest-modulus entries of Z e0 (S1),
  4. returns the maximal eigenvector of the S1 submatrix rescaled so that
     ||z||^2 equals lambda_sq.

The width p can be fixed, derived from the true energy profile (oracle
regime), set to ceil(sqrt(k)) or k, or scanned over all of [k] keeping the
estimate most consistent with the measurements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spectrum
from .eigensolver import max_eigvec
from .measurement import MeasurementSet
from .numerics import MagnitudeProfile, P_VARIANTS, p_opt, top_k_indices

STRATEGY_KINDS = ("fixed", "known_structure", "sqrt_k", "full_k", "ensemble")


@dataclass(frozen=True)
class PStrategy:
    """How the pursuit width p is chosen at solve time."""

    kind: str
    p_value: int | None = None  # fixed only
    variant: str = "global"     # known_structure only

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy {self.kind!r}; expected one of {STRATEGY_KINDS}")
        if self.kind == "fixed":
            if self.p_value is None or self.p_value < 1:
                raise ValueError("fixed strategy needs a positive p_value")
        elif self.p_value is not None:
            raise ValueError(f"p_value is only valid for the fixed strategy, not {self.kind!r}")
        if self.variant not in P_VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {P_VARIANTS}")

    @classmethod
    def fixed(cls, p: int) -> "PStrategy":
        return cls(kind="fixed", p_value=p)

    @classmethod
    def known_structure(cls, variant: str = "global") -> "PStrategy":
        return cls(kind="known_structure", variant=variant)

    @classmethod
    def sqrt_k(cls) -> "PStrategy":
        return cls(kind="sqrt_k")

    @classmethod
    def full_k(cls) -> "PStrategy":
        return cls(kind="full_k")

    @classmethod
    def ensemble(cls) -> "PStrategy":
        return cls(kind="ensemble")


@dataclass(frozen=True)
class InitEstimate:
    z: np.ndarray          # length-n estimate with ||z||^2 = lambda_sq
    support: np.ndarray    # S1, the k estimated support indices
    p_used: int
    s0: np.ndarray         # the p_used indices selected in step 1
    eig_iterations: int    # power-iteration count summed over steps 2 and 4
    residual_score: float  # measurement consistency of z


def step1_select_s0(diag, p: int) -> np.ndarray:
    """Indices of the p largest diagonal entries of the spectrum."""
    return top_k_indices(diag, p)


def step2_direction(op: spectrum.SpectrumOperator, s0, *, _count=None) -> np.ndarray:
    """Unit maximal eigenvector of Z_{S0}, embedded into n dimensions."""
    s0 = np.asarray(s0, dtype=int)
    res = max_eigvec(spectrum.submatrix(op, s0))
    if _count is not None:
        _count.append(res.iterations)
    e0 = np.zeros(op.meas.n, dtype=complex)
    e0[s0] = res.eigenvector
    return e0


def step3_select_s1(op: spectrum.SpectrumOperator, e0, k: int) -> np.ndarray:
    """Indices of the k largest-modulus entries of Z e0."""
    return top_k_indices(np.abs(spectrum.matvec(op, e0)), k)


def step4_estimate(op: spectrum.SpectrumOperator, s1, lambda_sq: float, *, _count=None) -> np.ndarray:
    """Maximal eigenvector of Z_{S1} embedded and scaled to ||z||^2 = lambda_sq."""
    s1 = np.asarray(s1, dtype=int)
    res = max_eigvec(spectrum.submatrix(op, s1))
    if _count is not None:
        _count.append(res.iterations)
    z = np.zeros(op.meas.n, dtype=complex)
    z[s1] = res.eigenvector * math.sqrt(lambda_sq)
    return z


def residual_score(meas: MeasurementSet, z) -> float:
    """(1/m) sum_i (y_i - |a_i* z|)^2: zero iff z explains every modulus."""
    z = np.asarray(z, dtype=complex)
    if z.shape != (meas.n,):
        raise ValueError(f"vector length {z.size} does not match n={meas.n}")
    nz = np.flatnonzero(z)
    if nz.size == 0:
        return float(np.mean(meas.y**2))
    moduli = np.abs(meas.sensing[:, nz].conj() @ z[nz])
    return float(np.mean((meas.y - moduli) ** 2))


def _run_with_p(op, meas, k, p):
    counts: list[int] = []
    s0 = step1_select_s0(spectrum.diagonal(op), p)
    e0 = step2_direction(op, s0, _count=counts)
    s1 = step3_select_s1(op, e0, k)
    z = step4_estimate(op, s1, meas.lambda_sq, _count=counts)
    return InitEstimate(
        z=z,
        support=s1,
        p_used=p,
        s0=s0,
        eig_iterations=sum(counts),
        residual_score=residual_score(meas, z),
    )


def gesp(
    meas: MeasurementSet,
    k: int,
    strategy: PStrategy = PStrategy.full_k(),
    true_profile: MagnitudeProfile | None = None,
) -> InitEstimate:
    """Run the full pursuit with the width dictated by the strategy.

    known_structure needs the true signal's MagnitudeProfile (an oracle
    input: it reproduces the regime where the energy structure is known).
    ensemble runs every p in [k] on the shared spectrum and keeps the
    estimate with the smallest residual_score, smallest p on ties.
    """
    if not 1 <= k <= meas.n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={meas.n}")
    op = spectrum.build(meas, "exponential")

    if strategy.kind == "ensemble":
        best = None
        for p in range(1, k + 1):
            est = _run_with_p(op, meas, k, p)
            if best is None or est.residual_score < best.residual_score:
                best = est
        return best

    if strategy.kind == "fixed":
        p = strategy.p_value
        if p > k:
            raise ValueError(f"fixed p={p} exceeds k={k}")
    elif strategy.kind == "known_structure":
        if true_profile is None:
            raise ValueError("known_structure strategy requires the true magnitude profile")
        p = p_opt(true_profile, k, strategy.variant)
    elif strategy.kind == "sqrt_k":
        p = math.isqrt(k - 1) + 1  # ceil(sqrt(k))
    else:  # full_k
        p = k
    return _run_with_p(op, meas, k, p)
