"""Random time-sample selection and the compressive-sensing operator.

The operator ``Omega`` is the row subset ``B[indices, :]`` of the inverse
transform. Because ``B`` is unitary, ``Omega @ Omega^H = I_M``.
"""

from dataclasses import dataclass

import numpy as np

from ._rng import SplitMix64, permutation
from .signal_io import Frame
from .transforms import (
    BasisMismatchError,
    CoefficientVector,
    SparsityBasis,
    analyze_values,
    as_basis,
    inverse_entries,
    synthesize_values,
)

MATERIALIZE_LIMIT = 4096


def count_from_percentage(percentage, n):
    """``M = round(p / 100 * N)``, half-to-even, floored at 1."""
    if isinstance(percentage, bool) or int(percentage) != percentage:
        raise ValueError(f"percentage must be an integer, got {percentage!r}")
    if not 1 <= percentage <= 100:
        raise ValueError(f"percentage must lie in [1, 100], got {percentage}")
    return max(1, int(round(percentage / 100 * n)))


@dataclass(frozen=True, eq=False)
class SamplingPattern:
    indices: np.ndarray
    n: int
    seed: int

    def __post_init__(self):
        idx = np.array(self.indices, dtype=np.int64)
        if idx.ndim != 1 or not 1 <= idx.shape[0] <= self.n:
            raise ValueError(f"need 1 <= M <= N, got M={idx.shape[0]}, N={self.n}")
        if idx.min() < 0 or idx.max() >= self.n:
            raise ValueError("pattern indices outside [0, N)")
        if np.unique(idx).shape[0] != idx.shape[0]:
            raise ValueError("pattern indices must be distinct")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    @property
    def m(self):
        return self.indices.shape[0]

    def __eq__(self, other):
        if not isinstance(other, SamplingPattern):
            return NotImplemented
        return (self.n, self.seed) == (other.n, other.seed) and np.array_equal(
            self.indices, other.indices
        )

    def to_text(self, explicit=True):
        """Serialize as ``"N M seed"`` optionally followed by the index list."""
        head = f"{self.n} {self.m} {self.seed}\n"
        if not explicit:
            return head
        return head + " ".join(map(str, self.indices.tolist())) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty pattern text")
        n, m, seed = (int(v) for v in lines[0].split())
        if len(lines) == 1:
            return draw_pattern(n, m, seed)
        indices = [int(v) for v in lines[1].split()]
        if len(indices) != m:
            raise ValueError(f"header says M={m} but {len(indices)} indices follow")
        return cls(indices, n, seed)


def draw_pattern(n, m, seed):
    """First ``m`` entries of a seeded Fisher-Yates permutation of ``range(n)``."""
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= M <= N, got M={m}, N={n}")
    perm = permutation(n, SplitMix64(seed))
    return SamplingPattern(perm[:m], n, seed)


@dataclass(frozen=True, eq=False)
class MeasurementSet:
    y: np.ndarray
    pattern: SamplingPattern
    basis: SparsityBasis

    def __post_init__(self):
        y = np.array(self.y, dtype=np.float64)
        if y.shape != (self.pattern.m,):
            raise ValueError(f"expected {self.pattern.m} measurements, got shape {y.shape}")
        if not np.all(np.isfinite(y)):
            raise ValueError("measurements must be finite")
        if self.basis.n != self.pattern.n:
            raise ValueError("basis and pattern lengths differ")
        y.setflags(write=False)
        object.__setattr__(self, "y", y)


def measure(frame, pattern, basis="dct"):
    samples = frame.samples if isinstance(frame, Frame) else np.asarray(frame, float)
    if samples.shape[0] != pattern.n:
        raise ValueError(f"frame has {samples.shape[0]} samples, pattern expects {pattern.n}")
    return MeasurementSet(samples[pattern.indices], pattern, as_basis(basis, pattern.n))


@dataclass(frozen=True)
class CsOperator:
    pattern: SamplingPattern
    basis: SparsityBasis

    def __post_init__(self):
        if self.pattern.n != self.basis.n:
            raise ValueError("basis and pattern lengths differ")

    @classmethod
    def from_measurements(cls, ms):
        return cls(ms.pattern, ms.basis)

    @property
    def shape(self):
        return (self.pattern.m, self.pattern.n)

    def apply(self, x):
        """``Omega @ x``: the time samples at the pattern of the signal with coefficients ``x``.

        DFT results stay complex.
        """
        values = self._coeff_values(x)
        return synthesize_values(values, self.basis.kind)[self.pattern.indices]

    def adjoint(self, r):
        """``Omega^H @ r``: scatter into the time axis, then forward-transform."""
        r = np.asarray(r)
        if r.shape != (self.pattern.m,):
            raise ValueError(f"expected a length-{self.pattern.m} vector, got {r.shape}")
        full = np.zeros(self.pattern.n, dtype=np.result_type(r, self.basis.dtype))
        full[self.pattern.indices] = r
        return analyze_values(full, self.basis.kind)

    def columns(self, cols):
        return inverse_entries(self.basis, self.pattern.indices, cols)

    def materialize(self):
        if self.pattern.n > MATERIALIZE_LIMIT:
            raise MemoryError(
                f"refusing to materialize N={self.pattern.n} > {MATERIALIZE_LIMIT}"
            )
        return self.columns(np.arange(self.pattern.n))

    def _coeff_values(self, x):
        if isinstance(x, CoefficientVector):
            if x.basis.kind is not self.basis.kind:
                raise BasisMismatchError(
                    f"{x.basis.kind.value} coefficients applied to a {self.basis.kind.value} operator"
                )
            x = x.values
        x = np.asarray(x)
        if x.shape != (self.pattern.n,):
            raise ValueError(f"expected {self.pattern.n} coefficients, got shape {x.shape}")
        return x


def operator_apply(op, x):
    return op.apply(x)


def operator_adjoint(op, r):
    return CoefficientVector(op.adjoint(r), op.basis)


def materialize(op):
    return op.materialize()
