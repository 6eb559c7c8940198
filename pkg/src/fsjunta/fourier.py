"""Exact integer Walsh-Hadamard spectra and spectral identities.

Coefficients are stored scaled by 2^n: ``coeffs[S] = sum_x f(x) chi_S(x)``
where ``chi_S`` is the parity of the variables in bitmask ``S``. With that
scaling every identity in this module is an integer equality; nothing here
needs a floating-point tolerance. For n <= 24 all magnitudes stay far
inside int64 (coefficients below 2^25, squares below 2^50).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .boolfn import TruthTable, _check_n

# Chunk length for exact int64 sums of squares: 2^14 terms of at most 2^48
# each stay below 2^62, so no chunk can overflow before it is folded into
# an arbitrary-precision Python int.
_SUMSQ_CHUNK = 1 << 14


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Integer-scaled Fourier coefficients of a Boolean function."""

    n: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_n(self.n)
        arr = np.asarray(self.coeffs)
        if arr.shape != (1 << self.n,):
            raise ValueError(
                f"spectrum for n={self.n} needs {1 << self.n} coefficients")
        arr = arr.astype(np.int64, copy=True)
        bound = 1 << self.n
        if np.any(np.abs(arr) > bound):
            raise ValueError("coefficient magnitude exceeds 2^n")
        if np.any(arr & 1):
            # Each coefficient is a sum of 2^n terms of +-1, hence even.
            raise ValueError("coefficients of an n>=1 table are all even")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    def coefficient(self, subset: int) -> Fraction:
        """The unscaled coefficient for ``subset``, an exact rational."""
        return Fraction(int(self.coeffs[subset]), 1 << self.n)

    def to_text(self) -> str:
        """Debug dump: one ``mask<TAB>value`` line per nonzero entry."""
        nz = np.flatnonzero(self.coeffs)
        return "".join(f"{int(m)}\t{int(self.coeffs[m])}\n" for m in nz)


def _exact_sum_squares(arr: np.ndarray) -> int:
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    total = 0
    for off in range(0, arr.size, _SUMSQ_CHUNK):
        chunk = arr[off:off + _SUMSQ_CHUNK]
        total += int(np.dot(chunk, chunk))
    return total


def wht(f: TruthTable) -> Spectrum:
    """Exact integer spectrum via the in-place butterfly, O(n 2^n) adds."""
    work = f.values.astype(np.int64)
    _kernels.wht_inplace(work)
    return Spectrum(f.n, work)


def inverse_wht(sp: Spectrum) -> TruthTable:
    """Reconstruct the table; the butterfly is its own inverse up to 2^n."""
    work = sp.coeffs.astype(np.int64)
    _kernels.wht_inplace(work)
    size = 1 << sp.n
    if np.any(work % size):
        raise ValueError("spectrum is not the transform of a table")
    return TruthTable(sp.n, (work // size).astype(np.int8))


def parseval_check(sp: Spectrum) -> bool:
    """True iff the squared coefficients sum to exactly 4^n."""
    return _exact_sum_squares(sp.coeffs) == 1 << (2 * sp.n)


def influence_spectral(sp: Spectrum, i: int) -> Fraction:
    """Spectral weight on subsets containing variable ``i``, exact."""
    if not 0 <= i < sp.n:
        raise IndexError(f"variable {i} out of range for n={sp.n}")
    # Masks with bit i set are the upper half of each block of 2^(i+1).
    with_bit = sp.coeffs.reshape(-1, 1 << (i + 1))[:, (1 << i):]
    return Fraction(_exact_sum_squares(with_bit.ravel()), 1 << (2 * sp.n))


def projection_values(f: TruthTable, subset: int) -> np.ndarray:
    """2^n times the projection of ``f`` onto coefficients inside ``subset``.

    Entry x equals ``sum_{S subset of T} coeffs[S] chi_S(x)``, an exact
    integer array (the scaled conditional mean of f given the variables
    in ``subset``).
    """
    if not 0 <= subset < (1 << f.n):
        raise ValueError("subset mask out of range")
    work = wht(f).coeffs.astype(np.int64)
    masks = np.arange(1 << f.n, dtype=np.int64)
    work[(masks | subset) != subset] = 0
    _kernels.wht_inplace(work)
    return work


def sign_projection(f: TruthTable, subset: int) -> TruthTable:
    """Sign of the projection of ``f`` onto ``subset``, with sign(0) := +1.

    The zero case never arises from the underlying identities; +1 (False)
    is fixed for determinism.
    """
    proj = projection_values(f, subset)
    return TruthTable(f.n, np.where(proj < 0, -1, 1).astype(np.int8))
