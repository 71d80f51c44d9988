"""Complex Gaussian sensing ensembles and phaseless observations.

A MeasurementSet bundles the m sensing rows a_i, the moduli y_i = |a_i* x|,
and the energy estimate lambda_sq = mean(y^2).  Sets are immutable after
construction and safe to share across threads.  An optional little-endian
binary dump/load exists for reproducibility debugging.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .signals import SparseSignal

_MAGIC = b"SPRM1"


@dataclass(frozen=True)
class MeasurementSet:
    sensing: np.ndarray  # m x n complex, row i = a_i
    y: np.ndarray        # m non-negative moduli |a_i* x|
    lambda_sq: float     # mean of y^2

    def __post_init__(self):
        if self.sensing.ndim != 2:
            raise ValueError("sensing must be an m x n array")
        if self.y.shape != (self.sensing.shape[0],):
            raise ValueError("y length must match the sensing row count")

    @property
    def m(self) -> int:
        return self.sensing.shape[0]

    @property
    def n(self) -> int:
        return self.sensing.shape[1]


def sample_sensing(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """m x n i.i.d. standard complex Gaussian rows: real and imaginary
    parts independent N(0, 1/2), so E|a_ij|^2 = 1."""
    if n < 1 or m < 1:
        raise ValueError(f"need m, n >= 1, got m={m}, n={n}")
    return math.sqrt(0.5) * (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n)))


def measure(x: SparseSignal, sensing: np.ndarray) -> MeasurementSet:
    """Phaseless observations y_i = |a_i* x| and their mean square."""
    sensing = np.asarray(sensing, dtype=complex)
    if sensing.ndim != 2 or sensing.shape[1] != x.n:
        raise ValueError(f"sensing must be m x {x.n}, got {sensing.shape}")
    y = np.abs(sensing[:, x.support].conj() @ x.vector[x.support])
    return MeasurementSet(sensing=sensing, y=y, lambda_sq=float(np.mean(y**2)))


def save_measurements(meas: MeasurementSet, path) -> None:
    """Binary dump: magic "SPRM1", n and m as little-endian u64, then the
    sensing rows in row-major (re, im) f64 pairs, then y as f64."""
    with open(path, "wb") as f:
        f.write(_MAGIC)
        f.write(struct.pack("<QQ", meas.n, meas.m))
        f.write(np.ascontiguousarray(meas.sensing).astype("<c16").tobytes())
        f.write(np.ascontiguousarray(meas.y).astype("<f8").tobytes())


def load_measurements(path) -> MeasurementSet:
    with open(path, "rb") as f:
        magic = f.read(5)
        if magic != _MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}, expected {_MAGIC!r}")
        n, m = struct.unpack("<QQ", f.read(16))
        sensing = np.frombuffer(f.read(16 * m * n), dtype="<c16").reshape(m, n).astype(complex)
        y = np.frombuffer(f.read(8 * m), dtype="<f8").astype(float)
    if y.size != m:
        raise ValueError(f"{path}: truncated file")
    return MeasurementSet(sensing=sensing, y=y, lambda_sq=float(np.mean(y**2)))
