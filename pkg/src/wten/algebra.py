"""The w-product and its ring structure.

Two tensors multiply by transforming both along the third mode, matrix-
multiplying corresponding wavelet blocks slice by slice (the face product),
and inverse-transforming the result. Identity, inverse, and orthogonal
tensors are defined blockwise in the wavelet domain and mapped back to the
spatial domain. The decomposition level is an explicit argument everywhere:
the product's value depends on it, and tensors interoperate only at equal
level counts.
"""

import numpy as np

from .errors import LevelError, OrthogonalityError, ShapeError, SingularSliceError
from .lifting import WaveletPyramid, constant_pyramid, forward_w, inverse_w


def slicewise_matmul(a, b):
    """Frontal-slice-wise matrix product of two slice stacks.

    Stages both stacks into contiguous slice-major layout so the batched
    multiply runs on the fast GEMM path; slices combine in index order.
    """
    if a.shape[1] != b.shape[0] or a.shape[2] != b.shape[2]:
        raise ShapeError(f"cannot face-multiply shapes {a.shape} and {b.shape}")
    lhs = np.ascontiguousarray(a.transpose(2, 0, 1))
    rhs = np.ascontiguousarray(b.transpose(2, 0, 1))
    return np.ascontiguousarray(np.matmul(lhs, rhs).transpose(1, 2, 0))


def face_product(a, b):
    """Blockwise matrix product of two conformable pyramids."""
    if a.levels != b.levels or a.p != b.p:
        raise ShapeError(
            f"pyramids disagree: levels {a.levels} vs {b.levels}, "
            f"slices {a.p} vs {b.p}"
        )
    smooth = slicewise_matmul(a.smooth, b.smooth)
    details = [slicewise_matmul(x, y) for x, y in zip(a.details, b.details)]
    return WaveletPyramid(smooth, details)


def w_product(a, b, levels):
    """Wavelet-domain tensor product of a (n1 x n2 x p) with b (n2 x n3 x p)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 3 or b.ndim != 3:
        raise ShapeError("w_product operands must be third-order tensors")
    if a.shape[1] != b.shape[0] or a.shape[2] != b.shape[2]:
        raise ShapeError(f"cannot multiply shapes {a.shape} and {b.shape}")
    return inverse_w(face_product(forward_w(a, levels), forward_w(b, levels)))


def identity_tensor(n, p, levels):
    """Spatial-domain tensor whose every wavelet block is the n x n identity.

    Satisfies a = w_product(a, identity) = w_product(identity, a).
    """
    return inverse_w(constant_pyramid(np.eye(n), p, levels))


def inverse_tensor(a, levels):
    """Blockwise inverse: every wavelet-domain slice is matrix-inverted.

    Raises SingularSliceError (with level, slice index, and a condition
    estimate) if any slice is singular or inverts to non-finite values. No
    regularization is applied.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"inverse needs square frontal slices, got {a.shape[:2]}")
    pyr = forward_w(a, levels)

    def invert_stack(stack, level_tag):
        out = np.empty_like(stack)
        for k in range(stack.shape[2]):
            m = stack[:, :, k]
            try:
                inv = np.linalg.inv(m)
            except np.linalg.LinAlgError:
                raise SingularSliceError(level_tag, k, _cond_estimate(m)) from None
            if not np.isfinite(inv).all():
                raise SingularSliceError(level_tag, k, _cond_estimate(m))
            out[:, :, k] = inv
        return out

    smooth = invert_stack(pyr.smooth, 0)
    details = [
        invert_stack(d, j) for j, d in enumerate(pyr.details, start=1)
    ]
    return inverse_w(WaveletPyramid(smooth, details))


def _cond_estimate(m):
    try:
        c = float(np.linalg.cond(m))
    except np.linalg.LinAlgError:
        return float("inf")
    return c if np.isfinite(c) else float("inf")


def orthogonal_tensor(q, p, levels, tol=1e-12):
    """Tensor whose every wavelet block is the orthogonal matrix ``q``."""
    q = np.asarray(q, dtype=np.float64)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {q.shape}")
    residual = np.abs(q.T @ q - np.eye(q.shape[0])).max()
    if residual > tol:
        raise OrthogonalityError(
            f"q^T q deviates from identity by {residual:.3e} (tol {tol:.1e})"
        )
    return inverse_w(constant_pyramid(q, p, levels))
