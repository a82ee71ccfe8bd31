"""Low-rank decomposition and pseudo-inversion in the wavelet domain.

Every wavelet-domain slice gets an independent matrix SVD; truncating each
slice at rank r and inverse-transforming yields the rank-r approximation.
The sparse variants touch only the coarsest smooth/detail stacks and zero
the finer detail levels, which is exact precisely when those levels carry no
energy (slice-constant operators, spectrally redundant data).
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import RankError
from .lifting import (
    WaveletPyramid,
    fine_detail_energy_ratio,
    forward_w,
    inverse_w,
)
from .algebra import w_product
from .tensor import transpose


@dataclass
class SvdFactors:
    """Spatial-domain factor tensors of a rank-r wavelet-slice SVD.

    ``U`` is n1 x r x p, ``S`` is r x r x p, ``V`` is n2 x r x p; the
    approximation is ``w_product(w_product(U, S, L), transpose(V), L)``.
    ``sigma_table`` keeps the full (untruncated) singular values of every
    wavelet-domain slice as ``(tag, sigmas)`` pairs in deterministic order:
    tags "d1" .. "dL" (finest to coarsest detail), then "s" (smooth); each
    ``sigmas`` is a (slices, min(n1, n2)) array.
    """

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray
    rank: int
    levels: int
    sigma_table: list


@dataclass
class TruncationBound:
    """Frobenius bound on the wavelet-domain rank-r truncation residual.

    ``bound ** 2`` equals the sum of squared discarded singular values,
    accumulated in table order. ``discarded`` lists (tag, slice k, index i,
    sigma) with 0-based i >= r.
    """

    bound: float
    discarded: list


def _check_rank(r, n1, n2):
    if not 1 <= r <= min(n1, n2):
        raise RankError(f"rank {r} outside [1, {min(n1, n2)}] for {n1}x{n2} slices")


def _stack_svd(stack):
    # batched thin SVD over the slice axis; stack is (n1, n2, slices)
    u, s, vh = np.linalg.svd(stack.transpose(2, 0, 1), full_matrices=False)
    return u, s, vh


def _truncated_blocks(u, s, vh, r):
    recon = np.matmul(u[:, :, :r], s[:, :r, None] * vh[:, :r, :])
    return np.ascontiguousarray(recon.transpose(1, 2, 0))


def _factor_blocks(u, s, vh, r):
    slices = s.shape[0]
    ut = np.ascontiguousarray(u[:, :, :r].transpose(1, 2, 0))
    vt = np.ascontiguousarray(vh[:, :r, :].transpose(2, 1, 0))
    st = np.zeros((r, r, slices))
    idx = np.arange(r)
    st[idx, idx, :] = s[:, :r].T
    return ut, st, vt


def w_svd(a, r, levels):
    """Rank-r wavelet-slice SVD of ``a``; returns (SvdFactors, reconstruction).

    Each wavelet-domain slice (all detail levels and the smooth stack) is
    truncated to its r leading singular triplets; factors and reconstruction
    are inverse-transformed back to the spatial domain.
    """
    a = np.asarray(a, dtype=np.float64)
    _check_rank(r, a.shape[0], a.shape[1])
    pyr = forward_w(a, levels)

    sigma_table = []
    u_parts, s_parts, v_parts, recon_parts = [], [], [], []
    stacks = [(f"d{j}", d) for j, d in enumerate(pyr.details, start=1)]
    stacks.append(("s", pyr.smooth))
    for tag, stack in stacks:
        u, s, vh = _stack_svd(stack)
        sigma_table.append((tag, s))
        recon_parts.append(_truncated_blocks(u, s, vh, r))
        ub, sb, vb = _factor_blocks(u, s, vh, r)
        u_parts.append(ub)
        s_parts.append(sb)
        v_parts.append(vb)

    def assemble(parts):
        return inverse_w(WaveletPyramid(parts[-1], parts[:-1]))

    factors = SvdFactors(
        U=assemble(u_parts),
        S=assemble(s_parts),
        V=assemble(v_parts),
        rank=r,
        levels=levels,
        sigma_table=sigma_table,
    )
    return factors, assemble(recon_parts)


def truncation_bound(factors, r):
    """Aggregate the discarded singular values of a cached sigma table.

    The bound is the square root of the sum, over every wavelet-domain
    slice, of the squared singular values past position r.
    """
    acc = 0.0
    discarded = []
    for tag, sigmas in factors.sigma_table:
        for k in range(sigmas.shape[0]):
            for i in range(r, sigmas.shape[1]):
                sv = float(sigmas[k, i])
                acc += sv * sv
                discarded.append((tag, k, i, sv))
    return TruncationBound(bound=float(np.sqrt(acc)), discarded=discarded)


def sp_w_svd(a, r, levels):
    """Sparse rank-r reconstruction: truncate only the coarsest stacks.

    The smooth and coarsest-detail stacks are SVD-truncated at rank r; all
    finer detail levels are zeroed before the inverse transform. With
    levels = 1 this coincides with ``w_svd``.
    """
    a = np.asarray(a, dtype=np.float64)
    _check_rank(r, a.shape[0], a.shape[1])
    pyr = forward_w(a, levels)
    smooth = _truncated_blocks(*_stack_svd(pyr.smooth), r)
    coarse = _truncated_blocks(*_stack_svd(pyr.details[-1]), r)
    details = [np.zeros_like(d) for d in pyr.details[:-1]]
    details.append(coarse)
    return inverse_w(WaveletPyramid(smooth, details))


def _pinv_stack(stack, tol):
    # per-slice pseudo-inverse with a relative singular-value cutoff
    u, s, vh = _stack_svd(stack)
    cutoff = tol * s.max(axis=1, keepdims=True)
    sinv = np.where(s > cutoff, np.divide(1.0, s, where=s > 0, out=np.zeros_like(s)), 0.0)
    pinv = np.matmul(vh.transpose(0, 2, 1), sinv[:, :, None] * u.transpose(0, 2, 1))
    return np.ascontiguousarray(pinv.transpose(1, 2, 0))


def pinv_w(a, levels, tol=1e-12):
    """Moore-Penrose inverse under the w-product.

    Pseudo-inverts every wavelet-domain slice, zeroing singular values below
    ``tol`` times the slice's largest. The result satisfies the four Penrose
    identities under the w-product at the same level count.
    """
    a = np.asarray(a, dtype=np.float64)
    pyr = forward_w(a, levels)
    smooth = _pinv_stack(pyr.smooth, tol)
    details = [_pinv_stack(d, tol) for d in pyr.details]
    return inverse_w(WaveletPyramid(smooth, details))


def sp_pinv_w(a, levels, tol=1e-12, warn_ratio=0.01):
    """Sparse pseudo-inverse: invert only the coarsest stacks, zero the rest.

    Exact (equal to ``pinv_w``) whenever the finer detail levels of ``a``
    are zero, as with slice-constant operators. Otherwise the discarded
    blocks generally break the Penrose identities; a RuntimeWarning is
    emitted when they hold more than ``warn_ratio`` of the coefficient
    energy.
    """
    a = np.asarray(a, dtype=np.float64)
    pyr = forward_w(a, levels)
    ratio = fine_detail_energy_ratio(pyr)
    if ratio > warn_ratio:
        warnings.warn(
            f"fine detail levels hold {100 * ratio:.2f}% of coefficient energy; "
            "sparse pseudo-inverse discards them",
            RuntimeWarning,
            stacklevel=2,
        )
    smooth = _pinv_stack(pyr.smooth, tol)
    coarse = _pinv_stack(pyr.details[-1], tol)
    details = [np.zeros((d.shape[1], d.shape[0], d.shape[2])) for d in pyr.details[:-1]]
    details.append(coarse)
    return inverse_w(WaveletPyramid(smooth, details))


def pinv_w_via_factors(a, levels, tol=1e-12):
    """Assemble the pseudo-inverse from full-rank SVD factors.

    Computes V * S^+ * U^T under the w-product; agrees with ``pinv_w`` and
    serves as an independent consistency route.
    """
    a = np.asarray(a, dtype=np.float64)
    factors, _ = w_svd(a, min(a.shape[0], a.shape[1]), levels)
    s_pinv = pinv_w(factors.S, levels, tol)
    return w_product(w_product(factors.V, s_pinv, levels), transpose(factors.U), levels)
