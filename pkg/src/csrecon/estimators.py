"""scikit-learn compatible wrappers.

The regressors treat compressive-sensing recovery as a regression problem:
``X`` holds the observed time indices (one column), ``y`` the sample values,
and ``predict`` evaluates the recovered signal at arbitrary indices. This
lets reconstruction sit inside pipelines, grid searches and ``clone``.
"""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .sensing import MeasurementSet, SamplingPattern
from .solver import SolverConfig, solve_bp, solve_omp
from .transforms import Basis, SparsityBasis, analyze_values, synthesize_values


def _time_indices(X, n=None):
    X = check_array(X, ensure_2d=False, dtype=None)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"X must hold a single column of time indices, got {X.shape[1]}")
        X = X[:, 0]
    idx = np.asarray(X)
    if not np.all(np.equal(np.mod(idx, 1), 0)):
        raise ValueError("time indices must be integers")
    idx = idx.astype(np.int64)
    if idx.min() < 0 or (n is not None and idx.max() >= n):
        raise ValueError(f"time indices must lie in [0, {n})")
    return idx


class _SparseRecoveryBase(RegressorMixin, BaseEstimator):
    def _measurements(self, X, y):
        X, y = check_X_y(X, y, ensure_2d=False, dtype=None, y_numeric=True)
        idx = _time_indices(X)
        n = self.n_samples if self.n_samples is not None else int(idx.max()) + 1
        if idx.max() >= n:
            raise ValueError(f"time index {idx.max()} outside n_samples={n}")
        pattern = SamplingPattern(idx, n, seed=-1)  # -1: caller-supplied, not drawn
        self.n_features_in_ = 1
        return MeasurementSet(y, pattern, SparsityBasis(Basis(self.basis), n))

    def _store(self, rec):
        self.coef_ = rec.coeffs.values
        self.signal_ = rec.frame.samples
        self.n_iter_ = rec.iterations
        self.converged_ = rec.converged
        self.residual_ = rec.final_residual
        self.discarded_imag_energy_ = rec.discarded_imag_energy
        return self

    def predict(self, X):
        check_is_fitted(self, "signal_")
        return self.signal_[_time_indices(X, self.signal_.shape[0])]


class BasisPursuitRegressor(_SparseRecoveryBase):
    """Basis pursuit reconstruction of a length-``n_samples`` frame.

    Parameters
    ----------
    n_samples : int or None
        Frame length ``N``. ``None`` infers ``max(X) + 1``.
    basis : {"dct", "dft"}
        Sparsity basis.
    max_iter, residual_tol, change_tol, rho
        ADMM controls, see :class:`csrecon.solver.SolverConfig`.
    """

    def __init__(self, n_samples=None, basis="dct", max_iter=5000,
                 residual_tol=1e-6, change_tol=1e-8, rho=1.0):
        self.n_samples = n_samples
        self.basis = basis
        self.max_iter = max_iter
        self.residual_tol = residual_tol
        self.change_tol = change_tol
        self.rho = rho

    def fit(self, X, y):
        ms = self._measurements(X, y)
        config = SolverConfig(self.max_iter, self.residual_tol, self.change_tol, self.rho)
        return self._store(solve_bp(ms, config))


class OMPRegressor(_SparseRecoveryBase):
    """Greedy OMP reconstruction; ``n_nonzero_coefs=None`` allows up to ``M`` atoms."""

    def __init__(self, n_samples=None, basis="dct", n_nonzero_coefs=None, tol=1e-10):
        self.n_samples = n_samples
        self.basis = basis
        self.n_nonzero_coefs = n_nonzero_coefs
        self.tol = tol

    def fit(self, X, y):
        ms = self._measurements(X, y)
        k = self.n_nonzero_coefs if self.n_nonzero_coefs is not None else ms.pattern.m
        return self._store(solve_omp(ms, k, self.tol))


class SparsityTransformer(TransformerMixin, BaseEstimator):
    """Row-wise orthonormal DCT or unitary DFT of equal-length frames.

    Stateless; ``fit`` only records the frame length. DFT output is complex.
    """

    def __init__(self, basis="dct"):
        self.basis = basis

    def fit(self, X, y=None):
        X = check_array(X)
        self.n_features_in_ = X.shape[1]
        self.basis_ = Basis(self.basis)
        return self

    def transform(self, X):
        check_is_fitted(self, "basis_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} samples per frame, got {X.shape[1]}")
        return np.vstack([analyze_values(row, self.basis_) for row in X])

    def inverse_transform(self, X):
        check_is_fitted(self, "basis_")
        # check_array refuses complex input, which DFT coefficients are.
        X = np.atleast_2d(np.asarray(X))
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected rows of {self.n_features_in_} coefficients")
        out = np.vstack([synthesize_values(row, self.basis_) for row in X])
        return out.real if self.basis_ is Basis.DFT else out
