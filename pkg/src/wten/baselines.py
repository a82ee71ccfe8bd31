"""Reference tensor products and the analytical operation-count model.

The t-product transforms along the third mode with the DFT, multiplies
facewise in the complex domain, and keeps the real part of the inverse
transform. The m-product does the same with an arbitrary invertible real
matrix (orthonormal DCT-II by default). Operation counts reproduce the
published closed-form polynomials as exact integers so the three products
can be ranked analytically.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.fft import dct

from .errors import RankError, ShapeError
from .algebra import slicewise_matmul


@dataclass
class ModeTransform:
    """Invertible transform applied along the third mode.

    ``kind`` is "matrix" for an explicit p x p matrix pair or "dft" as a
    marker for the FFT-based path (which needs no stored matrix).
    """

    kind: str
    M: np.ndarray = None
    Minv: np.ndarray = None

    def __post_init__(self):
        if self.kind not in ("dft", "matrix"):
            raise ValueError(f"unknown transform kind {self.kind!r}")
        if self.kind == "matrix":
            if self.M is None or self.Minv is None:
                raise ValueError("matrix transform needs both M and Minv")
            p = self.M.shape[0]
            if self.M.shape != (p, p) or self.Minv.shape != (p, p):
                raise ShapeError("transform matrices must be square and same size")
            residual = np.abs(self.M @ self.Minv - np.eye(p)).max()
            if residual > 1e-10:
                raise ValueError(
                    f"M @ Minv deviates from identity by {residual:.3e}"
                )

    @property
    def p(self):
        return None if self.kind == "dft" else self.M.shape[0]


def dct_transform(p):
    """Orthonormal DCT-II ModeTransform of size p (the default m-product M)."""
    m = dct(np.eye(p), axis=0, norm="ortho")
    return ModeTransform(kind="matrix", M=m, Minv=m.T)


def _check_product_shapes(a, b):
    if a.ndim != 3 or b.ndim != 3:
        raise ShapeError("product operands must be third-order tensors")
    if a.shape[1] != b.shape[0] or a.shape[2] != b.shape[2]:
        raise ShapeError(f"cannot multiply shapes {a.shape} and {b.shape}")


def t_product(a, b):
    """DFT-domain facewise product (block-circulant multiplication)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_product_shapes(a, b)
    fa = np.ascontiguousarray(np.fft.fft(a, axis=2).transpose(2, 0, 1))
    fb = np.ascontiguousarray(np.fft.fft(b, axis=2).transpose(2, 0, 1))
    fc = np.ascontiguousarray(np.matmul(fa, fb).transpose(1, 2, 0))
    c = np.fft.ifft(fc, axis=2)
    return np.ascontiguousarray(c.real)


def tube_identity(n, p):
    """Identity of the t-product: first frontal slice I_n, the rest zero."""
    ident = np.zeros((n, n, p))
    ident[:, :, 0] = np.eye(n)
    return ident


def _apply_mode3(t, m):
    # hat[i, j, k'] = sum_k m[k', k] t[i, j, k]
    return np.ascontiguousarray(np.tensordot(t, m, axes=([2], [1])))


def m_product(a, b, transform):
    """Facewise product after an invertible matrix transform along mode 3."""
    if transform.kind != "matrix":
        raise ValueError("m_product needs a matrix-kind transform")
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_product_shapes(a, b)
    if a.shape[2] != transform.p:
        raise ShapeError(
            f"transform size {transform.p} does not match slice count {a.shape[2]}"
        )
    ha = _apply_mode3(a, transform.M)
    hb = _apply_mode3(b, transform.M)
    return _apply_mode3(slicewise_matmul(ha, hb), transform.Minv)


def m_identity(n, p, transform):
    """Identity tensor of the m-product for the given transform."""
    blocks = np.broadcast_to(np.eye(n)[:, :, None], (n, n, p))
    return _apply_mode3(np.ascontiguousarray(blocks), transform.Minv)


def t_svd(a, r):
    """Rank-r truncation of every DFT-domain slice's SVD."""
    a = np.asarray(a, dtype=np.float64)
    if not 1 <= r <= min(a.shape[0], a.shape[1]):
        raise RankError(
            f"rank {r} outside [1, {min(a.shape[0], a.shape[1])}] "
            f"for {a.shape[0]}x{a.shape[1]} slices"
        )
    fa = np.ascontiguousarray(np.fft.fft(a, axis=2).transpose(2, 0, 1))
    u, s, vh = np.linalg.svd(fa, full_matrices=False)
    fc = np.matmul(u[:, :, :r], s[:, :r, None].astype(complex) * vh[:, :r, :])
    c = np.fft.ifft(np.ascontiguousarray(fc.transpose(1, 2, 0)), axis=2)
    return np.ascontiguousarray(c.real)


def t_pinv(a, tol=1e-12):
    """Moore-Penrose inverse under the t-product (per-DFT-slice pinv)."""
    a = np.asarray(a, dtype=np.float64)
    fa = np.ascontiguousarray(np.fft.fft(a, axis=2).transpose(2, 0, 1))
    u, s, vh = np.linalg.svd(fa, full_matrices=False)
    cutoff = tol * s.max(axis=1, keepdims=True)
    sinv = np.where(s > cutoff, np.divide(1.0, s, where=s > 0, out=np.zeros_like(s)), 0.0)
    fp = np.matmul(
        vh.conj().transpose(0, 2, 1), sinv[:, :, None] * u.conj().transpose(0, 2, 1)
    )
    c = np.fft.ifft(np.ascontiguousarray(fp.transpose(1, 2, 0)), axis=2)
    return np.ascontiguousarray(c.real)


@dataclass
class OpCountReport:
    """Closed-form operation count for one product kind and shape."""

    kind: str
    n1: int
    n2: int
    n3: int
    p: int
    count: int


def _is_pow2(p):
    return p >= 1 and (p & (p - 1)) == 0


def op_count(kind, n1, n2, n3, p):
    """Analytical operation count of one tensor product.

    Evaluates the published polynomials exactly:

    - m: n1 n2 n3 p + (n1 n2 + n2 n3 + n1 n3) p^2
    - t: n1 n2 n3 p + (n1 n2 + n2 n3 + n1 n3) p log2(p)
    - w: n1 n2 n3 p + 2 p (n1 n2 + n2 n3 + n1 n3)

    The w formula is the worst case and requires p to be a power of two.
    For the t kind, log2(p) is exact at powers of two and the real-valued
    expression is rounded to the nearest integer otherwise.
    """
    if min(n1, n2, n3, p) < 1:
        raise ValueError("dimensions must be positive")
    cross = n1 * n2 + n2 * n3 + n1 * n3
    base = n1 * n2 * n3 * p
    if kind == "m":
        count = base + cross * p * p
    elif kind == "t":
        if _is_pow2(p):
            count = base + cross * p * (p.bit_length() - 1)
        else:
            count = base + round(cross * p * math.log2(p))
    elif kind == "w":
        if not _is_pow2(p):
            raise ValueError(f"w count is defined for power-of-two p, got {p}")
        count = base + 2 * p * cross
    else:
        raise ValueError(f"unknown product kind {kind!r}")
    return OpCountReport(kind=kind, n1=n1, n2=n2, n3=n3, p=p, count=count)


def svd_op_count(kind, p):
    """Cube-model operation count of one tensor-SVD variant.

    Assumes n1 = n2 = p with log2(p) levels:

    - m: p^4 + 2 p^4
    - t: p^4 + 2 p^3 log2(p)
    - w: p^4 + 4 p^3
    - spw: 2 p^3 + 4 p^3
    """
    if p < 1:
        raise ValueError("p must be positive")
    p3, p4 = p ** 3, p ** 4
    if kind == "m":
        return 3 * p4
    if kind == "t":
        lg = (p.bit_length() - 1) if _is_pow2(p) else math.log2(p)
        return round(p4 + 2 * p3 * lg)
    if kind == "w":
        return p4 + 4 * p3
    if kind == "spw":
        return 6 * p3
    raise ValueError(f"unknown svd kind {kind!r}")


def deblur_op_count(kind, p):
    """Cube-model operation count of one deblurring pipeline.

    - m: 2 p^4 + 3 p^4
    - t: 2 p^4 + 3 p^3 log2(p)
    - w: 2 p^4 + 6 p^3
    - spw: 4 p^3 + 6 p^3
    """
    if p < 1:
        raise ValueError("p must be positive")
    p3, p4 = p ** 3, p ** 4
    if kind == "m":
        return 5 * p4
    if kind == "t":
        lg = (p.bit_length() - 1) if _is_pow2(p) else math.log2(p)
        return round(2 * p4 + 3 * p3 * lg)
    if kind == "w":
        return 2 * p4 + 6 * p3
    if kind == "spw":
        return 10 * p3
    raise ValueError(f"unknown deblur kind {kind!r}")
