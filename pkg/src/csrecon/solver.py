"""Basis pursuit by ADMM, plus greedy OMP as an independent cross-check.

Basis pursuit solves ``min ||x||_1  s.t.  Omega x = y``. With the split
``x = z`` the scaled-form ADMM iteration is::

    x <- P(z - u)                  # projection onto {x : Omega x = y}
    z <- soft(x + u, 1 / rho)
    u <- u + x - z

Because ``Omega`` has orthonormal rows the projection is exact and free of
any linear solve: ``P(v) = v - Omega^H (Omega v - y)``.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .sensing import CsOperator
from .signal_io import Frame
from .transforms import Basis, CoefficientVector, imag_energy_ratio, synthesize_values

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    max_iters: int = 5000
    residual_tol: float = 1e-6
    change_tol: float = 1e-8
    admm_rho: float = 1.0

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        for name in ("residual_tol", "change_tol"):
            if not 0 < getattr(self, name) < 1:
                raise ValueError(f"{name} must lie in (0, 1)")
        if not self.admm_rho > 0:
            raise ValueError("admm_rho must be positive")


@dataclass(frozen=True, eq=False)
class Reconstruction:
    coeffs: CoefficientVector
    frame: Frame
    iterations: int
    final_residual: float
    converged: bool
    discarded_imag_energy: float = 0.0
    #: Per-iteration primal residual ``||x - z||`` (ADMM only).
    history: np.ndarray = field(default_factory=lambda: np.empty(0))


def l1_norm(x):
    values = x.values if isinstance(x, CoefficientVector) else np.asarray(x)
    return float(np.sum(np.abs(values)))


def soft_threshold(v, threshold):
    """Shrink magnitudes by ``threshold``; complex entries keep their phase."""
    mag = np.abs(v)
    scale = np.maximum(1.0 - threshold / np.maximum(mag, np.finfo(float).tiny), 0.0)
    return v * scale


def _assemble(values, ms, iterations, residual, converged, history=None):
    basis = ms.basis
    time = synthesize_values(values, basis.kind)
    imag = imag_energy_ratio(time) if basis.kind is Basis.DFT else 0.0
    return Reconstruction(
        coeffs=CoefficientVector(values, basis),
        frame=Frame(time.real.copy(), origin="reconstruction"),
        iterations=iterations,
        final_residual=residual,
        converged=converged,
        discarded_imag_energy=imag,
        history=np.asarray(history if history is not None else [], dtype=float),
    )


def _zero_solution(ms):
    return _assemble(np.zeros(ms.basis.n, dtype=ms.basis.dtype), ms, 0, 0.0, True)


def solve_bp(ms, config=None):
    """Recover the minimum-l1 coefficient vector consistent with ``ms``.

    Returns the sparse ADMM iterate ``z``. Failure to meet both tolerances
    within ``max_iters`` is reported through ``converged=False`` with the
    most feasible iterate seen, never raised.
    """
    config = config or SolverConfig()
    op = CsOperator.from_measurements(ms)
    y = ms.y.astype(ms.basis.dtype)
    y_norm = np.linalg.norm(y)
    if y_norm == 0.0:
        return _zero_solution(ms)
    if ms.pattern.m == ms.basis.n:
        # Omega is square and unitary: the feasible set is the single point Omega^H y.
        values = op.adjoint(y)
        residual = np.linalg.norm(op.apply(values) - y) / y_norm
        return _assemble(values, ms, 0, float(residual), True)

    thresh = 1.0 / config.admm_rho
    z = np.zeros(ms.basis.n, dtype=ms.basis.dtype)
    u = np.zeros_like(z)
    best_z, best_res = z, np.inf
    history = []
    converged = False
    it = 0
    for it in range(1, config.max_iters + 1):
        v = z - u
        x = v - op.adjoint(op.apply(v) - y)
        z_new = soft_threshold(x + u, thresh)
        u = u + x - z_new
        change = np.linalg.norm(z_new - z) / max(np.linalg.norm(z_new), np.finfo(float).tiny)
        z = z_new
        history.append(np.linalg.norm(x - z))
        residual = np.linalg.norm(op.apply(z) - y) / y_norm
        if residual < best_res:
            best_z, best_res = z, residual
        if residual <= config.residual_tol and change <= config.change_tol:
            converged = True
            break

    if converged:
        best_z, best_res = z, residual
    else:
        logger.info("basis pursuit stopped at max_iters=%d, residual %.3g", it, best_res)
    return _assemble(best_z, ms, it, float(best_res), converged, history)


def solve_omp(ms, k_max, residual_tol=1e-10):
    """Orthogonal matching pursuit over the columns of ``Omega``.

    Atoms are ranked by correlation with the residual divided by column norm
    (subsampled DCT columns are not unit length). Ties go to the lowest index.
    """
    if not 1 <= k_max <= ms.pattern.m:
        raise ValueError(f"k_max must lie in [1, M={ms.pattern.m}], got {k_max}")
    op = CsOperator.from_measurements(ms)
    y = ms.y.astype(ms.basis.dtype)
    y_norm = np.linalg.norm(y)
    if y_norm == 0.0:
        return _zero_solution(ms)

    if ms.basis.kind is Basis.DFT:
        col_norms = np.full(ms.basis.n, np.sqrt(ms.pattern.m / ms.basis.n))
    else:
        col_norms = np.sqrt(np.sum(op.columns(np.arange(ms.basis.n)) ** 2, axis=0))
    # Columns that vanish on every sampled instant can never be selected.
    scale = np.divide(1.0, col_norms, out=np.zeros_like(col_norms), where=col_norms > 1e-12)

    active = []
    residual = y
    fit = np.zeros(0, dtype=y.dtype)
    rel = 1.0
    while len(active) < k_max and rel > residual_tol:
        corr = np.abs(op.adjoint(residual)) * scale
        corr[active] = -1.0
        active.append(int(np.argmax(corr)))
        cols = op.columns(active)
        fit = np.linalg.lstsq(cols, y, rcond=None)[0]
        residual = y - cols @ fit
        rel = np.linalg.norm(residual) / y_norm

    values = np.zeros(ms.basis.n, dtype=ms.basis.dtype)
    values[active] = fit if ms.basis.kind is Basis.DFT else fit.real
    return _assemble(values, ms, len(active), float(rel), bool(rel <= residual_tol))
