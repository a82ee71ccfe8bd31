"""Exception types raised by the library."""


class ShapeError(ValueError):
    """Operand dimensions are incompatible with the requested operation."""


class LevelError(ValueError):
    """The decomposition level count does not divide the slice count."""


class RankError(ValueError):
    """Requested truncation rank is outside [1, min(n1, n2)]."""


class OrthogonalityError(ValueError):
    """A matrix expected to be orthogonal fails the q^T q = I check."""


class SingularSliceError(ArithmeticError):
    """A wavelet-domain slice could not be inverted.

    Carries the detail level (0 meaning the smooth block), the slice
    index within that level, and a condition-number estimate.
    """

    def __init__(self, level, slice_index, cond):
        self.level = level
        self.slice_index = slice_index
        self.cond = cond
        where = "smooth block" if level == 0 else f"detail level {level}"
        super().__init__(
            f"singular slice at {where}, slice {slice_index} (cond ~ {cond:.3e})"
        )


class FormatError(ValueError):
    """A tensor file is malformed; the message carries offset diagnostics."""


class IoError(OSError):
    """Reading or writing a tensor/preview file failed at the OS level."""
