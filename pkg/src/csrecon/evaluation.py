"""MSE-versus-measurement-percentage sweeps and their CSV serialization.

Trial seeds follow a fixed counter scheme: the cell at percentage position
``i`` and trial ``t`` uses ``base_seed + i * trials + t``. The seed does not
depend on the basis, so DCT and DFT are compared on identical sampling
patterns.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .sensing import count_from_percentage, draw_pattern, measure
from .signal_io import Frame
from .solver import SolverConfig, solve_bp
from .transforms import Basis, SparsityBasis

logger = logging.getLogger(__name__)

DEFAULT_PERCENTAGES = tuple(range(20, 100, 10))
CSV_HEADER = "basis,percentage,trial,seed,M,mse,converged,iterations"


def mse(original, reconstructed):
    a = original.samples if isinstance(original, Frame) else np.asarray(original, float)
    b = reconstructed.samples if isinstance(reconstructed, Frame) else np.asarray(reconstructed, float)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    return float(np.mean((a - b) ** 2))


@dataclass(frozen=True)
class CellResult:
    basis: Basis
    percentage: int
    trial: int
    seed: int
    m: int
    mse: float
    converged: bool
    iterations: int

    def csv_row(self):
        return (
            f"{self.basis.value},{self.percentage},{self.trial},{self.seed},{self.m},"
            f"{self.mse:.10g},{str(self.converged).lower()},{self.iterations}"
        )


def run_cell(frame, basis, percentage, trial_seed, solver=None, trial=0, return_reconstruction=False):
    n = len(frame)
    kind = basis.kind if isinstance(basis, SparsityBasis) else Basis(basis)
    m = count_from_percentage(percentage, n)
    pattern = draw_pattern(n, m, trial_seed)
    rec = solve_bp(measure(frame, pattern, SparsityBasis(kind, n)), solver)
    if not rec.converged:
        logger.warning(
            "%s at %d%% (seed %d) did not converge in %d iterations",
            kind.value, percentage, trial_seed, rec.iterations,
        )
    row = CellResult(
        kind, int(percentage), trial, int(trial_seed), m,
        mse(frame, rec.frame), rec.converged, rec.iterations,
    )
    return (row, rec) if return_reconstruction else row


@dataclass(frozen=True)
class SweepSpec:
    frame: Frame
    percentages: tuple = DEFAULT_PERCENTAGES
    trials: int = 10
    bases: tuple = (Basis.DCT, Basis.DFT)
    base_seed: int = 0
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        for p in self.percentages:
            count_from_percentage(p, len(self.frame))
        pcts = tuple(int(p) for p in self.percentages)
        if not pcts:
            raise ValueError("percentages must be non-empty")
        if any(b <= a for a, b in zip(pcts, pcts[1:])):
            raise ValueError("percentages must be strictly increasing")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        bases = tuple(Basis(b) for b in self.bases)
        if not bases or len(set(bases)) != len(bases):
            raise ValueError("bases must be a non-empty set of distinct kinds")
        object.__setattr__(self, "percentages", pcts)
        object.__setattr__(self, "bases", bases)

    def trial_seed(self, pct_index, trial):
        return self.base_seed + pct_index * self.trials + trial


@dataclass
class SweepReport:
    rows: list

    def aggregate(self):
        """Mean and median MSE keyed by ``(basis, percentage)``, in row order."""
        cells = {}
        for row in self.rows:
            cells.setdefault((row.basis, row.percentage), []).append(row.mse)
        return {
            key: (float(np.mean(v)), float(np.median(v))) for key, v in cells.items()
        }

    def mean_mse(self, basis, percentage):
        return self.aggregate()[(Basis(basis), percentage)][0]


def _run_job(job):
    return run_cell(*job)


def run_sweep(spec, n_jobs=1):
    """Run every (basis, percentage, trial) cell of ``spec``.

    With ``n_jobs > 1`` cells run in worker processes; rows still come back
    in (basis, percentage, trial) order and are identical to a serial run.
    """
    jobs = [
        (spec.frame, kind, pct, spec.trial_seed(i, t), spec.solver, t)
        for kind in spec.bases
        for i, pct in enumerate(spec.percentages)
        for t in range(spec.trials)
    ]
    if n_jobs == 1 or len(jobs) == 1:
        return SweepReport([_run_job(j) for j in jobs])
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        return SweepReport(list(pool.map(_run_job, jobs, chunksize=1)))


def format_csv(report):
    lines = [CSV_HEADER]
    lines.extend(row.csv_row() for row in report.rows)
    lines.append("# basis,percentage,mean_mse,median_mse")
    for (kind, pct), (mean, median) in report.aggregate().items():
        lines.append(f"# {kind.value},{pct},{mean:.10g},{median:.10g}")
    return "\n".join(lines) + "\n"


def write_csv(report, path):
    with open(path, "w", newline="") as fh:
        fh.write(format_csv(report))
