"""Comparison initializers.

esp            the width-1 special case of the pursuit (single anchor index)
diag_two_step  support from the top-k diagonal of the quadratic spectrum,
               direction from that submatrix's maximal eigenvector
truncated_power  power iterations on the exponential spectrum with hard
               top-k truncation, warm-started from diag_two_step

All three return the same InitEstimate type as the pursuit, with
||z||^2 = lambda_sq and a k-sparse estimate.
"""

from __future__ import annotations

import math

import numpy as np

from . import spectrum
from .eigensolver import max_eigvec
from .measurement import MeasurementSet
from .numerics import top_k_indices
from .pursuit import InitEstimate, PStrategy, gesp, residual_score

BASELINE_KINDS = ("esp", "diag_two_step", "truncated_power")


def esp_init(meas: MeasurementSet, k: int) -> InitEstimate:
    """Single-anchor pursuit: identical to gesp with fixed p = 1."""
    return gesp(meas, k, PStrategy.fixed(1))


def diag_two_step_init(meas: MeasurementSet, k: int) -> InitEstimate:
    """Two-step baseline on the quadratic spectrum (weights y_i^2): sort the
    diagonal, keep the top k as the support, then take the maximal
    eigenvector there, scaled to ||z||^2 = lambda_sq."""
    if not 1 <= k <= meas.n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={meas.n}")
    op = spectrum.build(meas, "quadratic")
    s = top_k_indices(spectrum.diagonal(op), k)
    res = max_eigvec(spectrum.submatrix(op, s))
    z = np.zeros(meas.n, dtype=complex)
    z[s] = res.eigenvector * math.sqrt(meas.lambda_sq)
    return InitEstimate(
        z=z,
        support=s,
        p_used=k,
        s0=s,
        eig_iterations=res.iterations,
        residual_score=residual_score(meas, z),
    )


def truncated_power_init(meas: MeasurementSet, k: int, iters: int = 50) -> InitEstimate:
    """Hard-thresholded power method on the exponential spectrum.

    Starts from the diag_two_step direction and repeats
    v <- normalize(truncate_top_k(Z v)) until the phase-aligned change
    drops below 1e-8 or the iteration cap is reached (hitting the cap is
    not an error).
    """
    if iters < 0:
        raise ValueError("iters must be non-negative")
    start = diag_two_step_init(meas, k)
    op = spectrum.build(meas, "exponential")
    v = start.z / np.linalg.norm(start.z)
    support = start.support
    for _ in range(iters):
        w = spectrum.matvec(op, v)
        keep = top_k_indices(np.abs(w), k)
        truncated = np.zeros(meas.n, dtype=complex)
        truncated[keep] = w[keep]
        norm = np.linalg.norm(truncated)
        if norm == 0.0:
            break
        truncated /= norm
        change = math.sqrt(max(0.0, 2.0 - 2.0 * abs(complex(np.vdot(v, truncated)))))
        v = truncated
        support = keep
        if change < 1e-8:
            break
    z = v * math.sqrt(meas.lambda_sq)
    return InitEstimate(
        z=z,
        support=support,
        p_used=k,
        s0=start.s0,
        eig_iterations=start.eig_iterations,
        residual_score=residual_score(meas, z),
    )
