#!/usr/bin/env python

"""
Symmetric 3x3 eigen solvers for scatter matrices

Eigenvalues come from the closed-form trigonometric solution of the
characteristic polynomial; it runs on plain floats and is what the merge
loop calls for every candidate edge. Near-degenerate or very thin spectra,
where the arccos loses digits, go to LAPACK instead. Eigenvectors are only
needed outside the hot loop and come from LAPACK via numpy.
"""

import math
from typing import Tuple

import numpy as np

from src.errors import NumericalError

_TWO_PI_OVER_3 = 2.0 * math.pi / 3.0
_EPS = float(np.finfo(np.float64).eps)

# Negative eigenvalues above this fraction of trace(S) are rounding noise
CLAMP_RELATIVE = 1e-7

# Below these fractions of the largest magnitude the closed form is not trusted
GAP_RELATIVE = 1e-8
THIN_RELATIVE = 1e-6


def symmetric_eigenvalues(
    a00: float, a01: float, a02: float, a11: float, a12: float, a22: float
) -> Tuple[float, float, float]:
    """Eigenvalues of a real symmetric 3x3 matrix, sorted descending"""
    p1 = a01 * a01 + a02 * a02 + a12 * a12
    q = (a00 + a11 + a22) / 3.0
    d0, d1, d2 = a00 - q, a11 - q, a22 - q
    p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1
    if p2 == 0.0:
        return q, q, q

    p = math.sqrt(p2 / 6.0)
    b00, b11, b22 = d0 / p, d1 / p, d2 / p
    b01, b02, b12 = a01 / p, a02 / p, a12 / p
    det_b = (
        b00 * (b11 * b22 - b12 * b12)
        - b01 * (b01 * b22 - b12 * b02)
        + b02 * (b01 * b12 - b11 * b02)
    )
    r = min(1.0, max(-1.0, det_b / 2.0))
    phi = math.acos(r) / 3.0

    l1 = q + 2.0 * p * math.cos(phi)
    l3 = q + 2.0 * p * math.cos(phi + _TWO_PI_OVER_3)
    l2 = 3.0 * q - l1 - l3

    scale = max(abs(l1), abs(l3))
    if min(l1 - l2, l2 - l3) < GAP_RELATIVE * scale or abs(l3) < THIN_RELATIVE * scale:
        values = np.linalg.eigvalsh(
            np.array([[a00, a01, a02], [a01, a11, a12], [a02, a12, a22]], dtype=np.float64)
        )
        return float(values[2]), float(values[1]), float(values[0])
    return l1, l2, l3


def clamp_eigenvalues(
    values: Tuple[float, float, float], trace_s: float, trace_m: float
) -> Tuple[float, float, float]:
    """Clamp rounding-level negatives of a PSD spectrum to zero

    Args:
        values: eigenvalues, descending
        trace_s: trace of the scatter matrix
        trace_m: trace of the raw second moment the scatter was derived from

    Raises:
        NumericalError: an eigenvalue is negative beyond rounding level
    """
    tolerance = max(CLAMP_RELATIVE * abs(trace_s), 64.0 * _EPS * abs(trace_m))
    clamped = []
    for value in values:
        if value < -tolerance:
            raise NumericalError(
                f"scatter eigenvalue {value:.3e} below tolerance -{tolerance:.3e}"
            )
        clamped.append(value if value > 0.0 else 0.0)
    return clamped[0], clamped[1], clamped[2]


def symmetric_eigh(matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Full eigendecomposition with descending eigenvalues

    Eigenvectors are the columns of the returned matrix, each flipped so that
    its largest-magnitude component is positive.
    """
    values, vectors = np.linalg.eigh(np.asarray(matrix, dtype=np.float64))
    values = values[::-1].copy()
    vectors = vectors[:, ::-1].copy()
    for k in range(3):
        column = vectors[:, k]
        if column[np.argmax(np.abs(column))] < 0.0:
            vectors[:, k] = -column
    return values, vectors
