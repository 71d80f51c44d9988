"""Matrix-free weighted outer-product spectrum Z = (1/m) sum_i w_i a_i a_i*.

Two weightings are supported:

  exponential  w_i = 1/2 - exp(-y_i^2 / lambda_sq)   (the pursuit spectrum)
  quadratic    w_i = y_i^2                            (prior two-step spectrum)

Z is never materialized as an n x n array on the algorithm path; the solver
needs only its diagonal, small principal submatrices, and one matvec.  All
reductions are single fixed-order BLAS products, so results are
deterministic for a given input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measurement import MeasurementSet
from .signals import SparseSignal

WEIGHTINGS = ("exponential", "quadratic")


@dataclass(frozen=True)
class SpectrumOperator:
    meas: MeasurementSet
    weights: np.ndarray
    weighting_kind: str


def build(meas: MeasurementSet, kind: str = "exponential", *, norm_sq: float | None = None) -> SpectrumOperator:
    """Compute the per-measurement weights.

    The exponential weights use lambda_sq from the measurements; `norm_sq`
    substitutes the true signal energy instead (analysis/test hook only --
    the solver never knows ||x||).
    """
    if kind not in WEIGHTINGS:
        raise ValueError(f"unknown weighting {kind!r}; expected one of {WEIGHTINGS}")
    y_sq = meas.y**2
    if kind == "quadratic":
        weights = y_sq
    else:
        scale = meas.lambda_sq if norm_sq is None else float(norm_sq)
        if scale <= 0.0:
            raise ValueError("degenerate measurements: lambda_sq is zero, all observations vanish")
        weights = 0.5 - np.exp(-y_sq / scale)
    return SpectrumOperator(meas=meas, weights=weights, weighting_kind=kind)


def diagonal(op: SpectrumOperator) -> np.ndarray:
    """Diagonal of Z: entry j = (1/m) sum_i w_i |a_ij|^2.  Cost O(mn)."""
    a = op.meas.sensing
    return (op.weights @ (a.real**2 + a.imag**2)) / op.meas.m


def submatrix(op: SpectrumOperator, indices) -> np.ndarray:
    """Principal submatrix Z_S for the index set S, exactly Hermitian.

    Entry (u, v) = (1/m) sum_i w_i a_{i,S[u]} conj(a_{i,S[v]}).  The lower
    triangle is mirrored from the computed upper triangle and the diagonal
    is forced real, so the result is Hermitian to the last bit.
    """
    idx = np.asarray(indices, dtype=int)
    if idx.ndim != 1 or idx.size == 0:
        raise ValueError("index set must be non-empty")
    b = op.meas.sensing[:, idx]
    raw = (b * op.weights[:, None]).T @ b.conj() / op.meas.m
    upper = np.triu(raw, 1)
    out = upper + upper.conj().T
    out[np.diag_indices_from(out)] = raw.diagonal().real
    return out


def matvec(op: SpectrumOperator, v) -> np.ndarray:
    """Z v = (1/m) sum_i w_i (a_i* v) a_i, exploiting the sparsity of v.

    Cost O(m (||v||_0 + n)): the inner products touch only the nonzero
    coordinates of v, the rank-one accumulation is a dense m x n product.
    """
    v = np.asarray(v, dtype=complex)
    a = op.meas.sensing
    if v.shape != (op.meas.n,):
        raise ValueError(f"vector length {v.size} does not match n={op.meas.n}")
    nz = np.flatnonzero(v)
    if nz.size == 0:
        return np.zeros(op.meas.n, dtype=complex)
    coeffs = a[:, nz].conj() @ v[nz]
    return a.T @ (op.weights * coeffs) / op.meas.m


def expectation_oracle(x: SparseSignal) -> np.ndarray:
    """Mean of the exponential spectrum built with true-norm weights:
    x x* / (4 ||x||^2), a rank-one Hermitian matrix with trace 1/4.

    Test-only helper; intended for small n.
    """
    vec = x.vector
    return np.outer(vec, vec.conj()) / (4.0 * x.norm_sq)
