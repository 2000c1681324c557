"""Gaussian moments: closed forms underlying every analytic inner product."""

from __future__ import annotations

import math

import numpy as np

__all__ = ["gaussian_moment", "gaussian_moment_array"]


def gaussian_moment(n: int, omega: float) -> float:
    """int_R x^n e^(-omega x^2) dx.

    Zero for odd n; (n-1)!! sqrt(pi/omega) / (2 omega)^(n/2) for even n,
    assembled by the stable ratio recursion m_k = m_{k-2} (k-1) / (2 omega).
    """
    if omega <= 0:
        raise ValueError(f"omega must be > 0, got {omega}")
    if n < 0:
        raise ValueError(f"moment order must be >= 0, got {n}")
    if n % 2:
        return 0.0
    val = math.sqrt(math.pi / omega)
    for k in range(2, n + 1, 2):
        val *= (k - 1) / (2.0 * omega)
    return val


def gaussian_moment_array(nmax: int, omega: float) -> np.ndarray:
    """Moments 0..nmax as an array (odd entries exactly zero)."""
    if omega <= 0:
        raise ValueError(f"omega must be > 0, got {omega}")
    out = np.zeros(nmax + 1)
    out[0] = math.sqrt(math.pi / omega)
    for k in range(2, nmax + 1, 2):
        out[k] = out[k - 2] * (k - 1) / (2.0 * omega)
    return out
