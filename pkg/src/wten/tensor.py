"""Dense third-order tensor primitives.

A tensor is a plain ``numpy.ndarray`` of shape ``(n1, n2, p)``: ``n1`` rows,
``n2`` columns, ``p`` frontal slices (spectral bands), stored C-contiguous in
float64. ``as_tensor3`` is the validating constructor used at API boundaries.

Band indices are 0-based throughout the public API: the first frontal slice
is ``frontal_slice(t, 0)``. Mathematical references that count slices from 1
map to ``k - 1`` here.
"""

import numpy as np

from .errors import ShapeError


def as_tensor3(data, check_finite=True):
    """Coerce ``data`` to a float64, C-contiguous (n1, n2, p) array.

    Raises ShapeError if the input is not three-dimensional or has an empty
    axis; raises ValueError on NaN/Inf entries when ``check_finite`` is on.
    """
    t = np.ascontiguousarray(data, dtype=np.float64)
    if t.ndim != 3:
        raise ShapeError(f"expected a third-order tensor, got ndim={t.ndim}")
    if min(t.shape) < 1:
        raise ShapeError(f"tensor axes must be positive, got shape {t.shape}")
    if check_finite and not np.isfinite(t).all():
        raise ValueError("tensor contains non-finite entries")
    return t


def frontal_slice(t, k):
    """Return the k-th frontal slice ``t[:, :, k]`` as a writable view.

    ``k`` is 0-based and must lie in ``[0, p)``; writes through the returned
    view update the parent tensor in place.
    """
    p = t.shape[2]
    if not 0 <= k < p:
        raise IndexError(f"slice index {k} out of range for p={p}")
    return t[:, :, k]


def set_frontal_slice(t, k, m):
    """Overwrite the k-th frontal slice of ``t`` with matrix ``m``."""
    frontal_slice(t, k)[...] = m


def transpose(t):
    """Slicewise transpose: result[i, j, k] = t[j, i, k]."""
    return np.ascontiguousarray(np.swapaxes(t, 0, 1))


def trace(t):
    """Sum of the diagonals of every frontal slice.

    Requires square slices (n1 == n2).
    """
    if t.shape[0] != t.shape[1]:
        raise ShapeError(f"trace needs square frontal slices, got {t.shape[:2]}")
    return float(np.einsum("iik->", t))


def frobenius_norm(t):
    """Square root of the sum of squared entries."""
    return float(np.linalg.norm(np.asarray(t).ravel()))


def matrix_svd(m):
    """Thin SVD of a matrix: returns (U, sigma, V) with m = U @ diag(sigma) @ V.T.

    Singular values come back sorted descending; U and V have orthonormal
    columns. A zero matrix yields zero singular values.
    """
    u, s, vh = np.linalg.svd(np.asarray(m, dtype=np.float64), full_matrices=False)
    return u, s, vh.T
