"""Orthonormal DCT-II and unitary DFT sparsity bases.

Both transforms are normalized so the forward matrix ``Psi`` is unitary and
the inverse ``B = Psi^-1`` is simply its conjugate transpose. The fast paths
use :mod:`scipy.fft`; the ``*_matrix`` / :func:`inverse_row` helpers evaluate
the defining sums directly and serve as the reference definition.
"""

import enum
import logging
from dataclasses import dataclass

import numpy as np
import scipy.fft

from .signal_io import Frame

logger = logging.getLogger(__name__)

#: Relative imaginary energy above which :func:`dft_inverse` warns.
IMAG_WARN_RATIO = 1e-6


class Basis(str, enum.Enum):
    DCT = "dct"
    DFT = "dft"

    @property
    def is_complex(self):
        return self is Basis.DFT


class BasisMismatchError(ValueError):
    """Coefficients tagged with one basis were handed to the other."""


@dataclass(frozen=True)
class SparsityBasis:
    kind: Basis
    n: int

    def __post_init__(self):
        object.__setattr__(self, "kind", Basis(self.kind))
        if int(self.n) < 1:
            raise ValueError(f"transform length must be >= 1, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def dtype(self):
        return np.complex128 if self.kind.is_complex else np.float64


def as_basis(basis, n=None):
    """Coerce ``basis`` (a :class:`SparsityBasis`, :class:`Basis` or string)."""
    if isinstance(basis, SparsityBasis):
        if n is not None and basis.n != n:
            raise ValueError(f"basis length {basis.n} does not match {n}")
        return basis
    if n is None:
        raise ValueError("a bare basis kind needs an explicit length")
    return SparsityBasis(Basis(basis), n)


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """Transform-domain representation of a frame, tagged with its basis."""

    values: np.ndarray
    basis: SparsityBasis

    def __post_init__(self):
        values = np.array(self.values, dtype=self.basis.dtype)
        if values.ndim != 1 or values.shape[0] != self.basis.n:
            raise ValueError(
                f"expected {self.basis.n} coefficients, got shape {values.shape}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.basis.n

    @property
    def magnitudes(self):
        return np.abs(self.values)


def _samples(frame):
    x = frame.samples if isinstance(frame, Frame) else np.asarray(frame, dtype=float)
    if x.ndim != 1 or x.shape[0] < 1:
        raise ValueError("frame must be a non-empty 1-D signal")
    return x


def dct_forward(frame):
    x = _samples(frame)
    values = scipy.fft.dct(x, type=2, norm="ortho")
    return CoefficientVector(values, SparsityBasis(Basis.DCT, x.shape[0]))


def dct_inverse(coeffs, sample_rate=None):
    _check_kind(coeffs, Basis.DCT)
    samples = scipy.fft.idct(coeffs.values, type=2, norm="ortho")
    return _make_frame(samples, sample_rate, "idct")


def dft_forward(frame):
    x = _samples(frame)
    values = scipy.fft.fft(x, norm="ortho")
    return CoefficientVector(values, SparsityBasis(Basis.DFT, x.shape[0]))


def dft_inverse(coeffs, sample_rate=None, return_imag=False):
    """Inverse unitary DFT, keeping the real part.

    With ``return_imag=True`` a ``(frame, ratio)`` pair is returned where
    ``ratio`` is the discarded imaginary energy relative to the total. A
    warning is logged whenever the ratio exceeds ``IMAG_WARN_RATIO``.
    """
    _check_kind(coeffs, Basis.DFT)
    full = scipy.fft.ifft(coeffs.values, norm="ortho")
    ratio = imag_energy_ratio(full)
    if ratio > IMAG_WARN_RATIO:
        logger.warning("dft_inverse discarded %.3g of the energy as imaginary", ratio)
    frame = _make_frame(full.real.copy(), sample_rate, "idft")
    return (frame, ratio) if return_imag else frame


def imag_energy_ratio(z):
    total = float(np.vdot(z, z).real)
    if total == 0.0:
        return 0.0
    return float(np.sum(z.imag**2)) / total


def _make_frame(samples, sample_rate, origin):
    if sample_rate is None:
        return Frame(samples, origin=origin)
    return Frame(samples, sample_rate, origin)


def _check_kind(coeffs, kind):
    if not isinstance(coeffs, CoefficientVector):
        raise TypeError("expected a CoefficientVector")
    if coeffs.basis.kind is not kind:
        raise BasisMismatchError(
            f"{coeffs.basis.kind.value} coefficients passed to a {kind.value} inverse"
        )


def forward(frame, basis):
    kind = basis.kind if isinstance(basis, SparsityBasis) else Basis(basis)
    return dct_forward(frame) if kind is Basis.DCT else dft_forward(frame)


def inverse(coeffs, sample_rate=None):
    if coeffs.basis.kind is Basis.DCT:
        return dct_inverse(coeffs, sample_rate)
    return dft_inverse(coeffs, sample_rate)


# Raw-array kernels used inside the solver loops. ``synthesize_values`` keeps
# DFT output complex; the real part is only taken at final assembly.

def analyze_values(x, kind):
    if kind is Basis.DCT:
        return scipy.fft.dct(x, type=2, norm="ortho")
    return scipy.fft.fft(x, norm="ortho")


def synthesize_values(c, kind):
    if kind is Basis.DCT:
        return scipy.fft.idct(c, type=2, norm="ortho")
    return scipy.fft.ifft(c, norm="ortho")


def inverse_entries(basis, rows, cols):
    """Entries ``B[rows[:, None], cols[None, :]]`` of the inverse matrix.

    Evaluated directly from the cosine / exponential definitions. Phase
    arguments are reduced modulo one period in integer arithmetic first, so
    accuracy does not degrade at large ``N``.
    """
    n = basis.n
    t = np.asarray(rows, dtype=np.int64).reshape(-1, 1)
    k = np.asarray(cols, dtype=np.int64).reshape(1, -1)
    if basis.kind is Basis.DCT:
        phase = ((2 * t + 1) * k) % (4 * n)
        scale = np.where(k == 0, np.sqrt(1.0 / n), np.sqrt(2.0 / n))
        return scale * np.cos(np.pi * phase / (2 * n))
    phase = (t * k) % n
    return np.exp(2j * np.pi * phase / n) / np.sqrt(n)


def inverse_row(basis, t):
    """Row ``t`` of ``B``: maps a coefficient vector to the sample at ``t``."""
    if not 0 <= t < basis.n:
        raise IndexError(f"time index {t} outside [0, {basis.n})")
    return inverse_entries(basis, [t], np.arange(basis.n))[0]


def inverse_matrix(basis):
    idx = np.arange(basis.n)
    return inverse_entries(basis, idx, idx)


def forward_matrix(basis):
    """The forward matrix ``Psi``; unitary, so ``Psi = B^H``."""
    return inverse_matrix(basis).conj().T


def sparsity_count(coeffs, rel_threshold=1e-6):
    if not 0 < rel_threshold < 1:
        raise ValueError("rel_threshold must lie in (0, 1)")
    values = coeffs.values if isinstance(coeffs, CoefficientVector) else coeffs
    mags = np.abs(np.asarray(values))
    peak = mags.max(initial=0.0)
    if peak == 0.0:
        return 0
    return int(np.count_nonzero(mags > rel_threshold * peak))
