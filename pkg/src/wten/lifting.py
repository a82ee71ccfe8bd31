"""Forward and inverse lifting wavelet transform along the third tensor mode.

The transform is the lazy lifting pair (predict = identity, update = half
identity): at each level the current stack of slices splits into odd/even
interleaved halves, details are odd minus even, and the next smooth stack is
even plus half the detail. Both directions are exact on dyadic-rational data
and reconstruct to floating-point roundoff otherwise.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import LevelError, ShapeError


def max_levels(p):
    """Largest L such that 2**L divides p (0 for odd p)."""
    if p < 1:
        raise ValueError(f"slice count must be positive, got {p}")
    return ((p & -p).bit_length()) - 1


@dataclass
class WaveletPyramid:
    """Multilevel wavelet representation of a third-order tensor.

    ``smooth`` holds the coarsest smooth stack with ``p / 2**levels`` slices;
    ``details[j - 1]`` holds the level-j detail stack with ``p / 2**j``
    slices, j = 1 (finest) .. levels (coarsest).
    """

    smooth: np.ndarray
    details: list = field(default_factory=list)

    @property
    def levels(self):
        return len(self.details)

    @property
    def n1(self):
        return self.smooth.shape[0]

    @property
    def n2(self):
        return self.smooth.shape[1]

    @property
    def m(self):
        return self.smooth.shape[2]

    @property
    def p(self):
        return self.smooth.shape[2] * (2 ** len(self.details))

    def copy(self):
        return WaveletPyramid(self.smooth.copy(), [d.copy() for d in self.details])

    def total_slices(self):
        return self.m + sum(d.shape[2] for d in self.details)


def _lift_once(s):
    # odd positions (1-based 1,3,5,...) are 0-based 0,2,4,...
    d = s[:, :, 0::2] - s[:, :, 1::2]
    return s[:, :, 1::2] + d / 2, d


def _unlift_once(s, d):
    n1, n2, half = d.shape
    out = np.empty((n1, n2, 2 * half), dtype=np.float64)
    out[:, :, 1::2] = s - d / 2
    out[:, :, 0::2] = d + out[:, :, 1::2]
    return out


def forward_w(t, levels):
    """Decompose ``t`` into a WaveletPyramid with the given level count.

    Requires ``levels >= 1`` and ``2**levels`` dividing the slice count;
    raises LevelError otherwise.
    """
    t = np.asarray(t, dtype=np.float64)
    p = t.shape[2]
    if levels < 1:
        raise LevelError(f"level count must be >= 1, got {levels}")
    if p % (2 ** levels) != 0:
        raise LevelError(f"2**{levels} does not divide slice count {p}")
    details = []
    s = t
    for _ in range(levels):
        s, d = _lift_once(s)
        details.append(d)
    return WaveletPyramid(np.ascontiguousarray(s), details)


def check_consistent(pyr):
    """Validate the slice-count chain of a pyramid; raises ShapeError."""
    n1, n2, m = pyr.smooth.shape
    expect = m
    for j in range(pyr.levels, 0, -1):
        d = pyr.details[j - 1]
        if d.shape[0] != n1 or d.shape[1] != n2:
            raise ShapeError(
                f"detail level {j} has slice shape {d.shape[:2]}, expected {(n1, n2)}"
            )
        if d.shape[2] != expect:
            raise ShapeError(
                f"detail level {j} has {d.shape[2]} slices, expected {expect}"
            )
        expect *= 2


def inverse_w(pyr):
    """Reconstruct the spatial-domain tensor from a WaveletPyramid."""
    check_consistent(pyr)
    s = np.asarray(pyr.smooth, dtype=np.float64)
    for d in reversed(pyr.details):
        s = _unlift_once(s, d)
    return np.ascontiguousarray(s)


def constant_pyramid(block, p, levels):
    """Pyramid whose every smooth and detail slice equals ``block``."""
    if levels < 1:
        raise LevelError(f"level count must be >= 1, got {levels}")
    if p % (2 ** levels) != 0:
        raise LevelError(f"2**{levels} does not divide slice count {p}")
    block = np.asarray(block, dtype=np.float64)
    m = p >> levels
    smooth = np.broadcast_to(block[:, :, None], block.shape + (m,)).copy()
    details = [
        np.broadcast_to(block[:, :, None], block.shape + (p >> j,)).copy()
        for j in range(1, levels + 1)
    ]
    return WaveletPyramid(smooth, details)


def fine_detail_energy_ratio(pyr):
    """Fraction of squared coefficient mass in detail levels below the coarsest.

    These are exactly the blocks the sparse-path operations discard; the
    ratio is 0 for slice-constant tensors and near 0 for spectrally
    redundant data.
    """
    total = float(np.sum(pyr.smooth ** 2))
    fine = 0.0
    for j, d in enumerate(pyr.details, start=1):
        e = float(np.sum(d ** 2))
        total += e
        if j < pyr.levels:
            fine += e
    if total == 0.0:
        return 0.0
    return fine / total
