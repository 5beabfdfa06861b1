"""Compressive-sensing reconstruction of audio frames in DCT and DFT bases."""

from .estimators import BasisPursuitRegressor, OMPRegressor, SparsityTransformer
from .evaluation import SweepReport, SweepSpec, mse, run_cell, run_sweep, write_csv
from .sensing import (
    CsOperator,
    MeasurementSet,
    SamplingPattern,
    draw_pattern,
    materialize,
    measure,
    operator_adjoint,
    operator_apply,
)
from .signal_io import Frame, SynthKind, SynthSpec, read_wav_frame, synthesize, write_wav
from .solver import Reconstruction, SolverConfig, l1_norm, solve_bp, solve_omp
from .transforms import (
    Basis,
    CoefficientVector,
    SparsityBasis,
    dct_forward,
    dct_inverse,
    dft_forward,
    dft_inverse,
    forward,
    inverse,
    inverse_row,
    sparsity_count,
)

__version__ = "0.1.0"
