import numpy as np
import pytest

from csrecon.evaluation import (
    CSV_HEADER,
    SweepSpec,
    format_csv,
    mse,
    run_cell,
    run_sweep,
    write_csv,
)
from csrecon.signal_io import Frame, SynthSpec, synthesize
from csrecon.transforms import Basis

EXACT_FLOOR = 1e-12  # below this a reconstruction is exact to solver precision


@pytest.fixture(scope="module")
def planted512():
    return synthesize(SynthSpec("sparse", n=512, k=10, seed=3), "dct")


@pytest.fixture(scope="module")
def harmonic():
    return synthesize(SynthSpec("harmonic", n=3000, fundamental_index=8, harmonic_count=10, decay=0.7), "dct")


def test_mse_examples():
    assert mse(Frame([0.3, 0.1]), Frame([0.3, 0.1])) == 0
    assert mse([1, 1], [0, 0]) == 1.0
    assert mse([1, 0], [0, 0]) == 0.5
    with pytest.raises(ValueError):
        mse([1, 0], [0])


@pytest.mark.parametrize("basis", ["dct", "dft"])
def test_run_cell_full_observation(basis, rng):
    frame = Frame(rng.uniform(-0.9, 0.9, 300))
    assert run_cell(frame, basis, 100, 1).mse < 1e-10


def test_run_cell_planted_exact(planted512):
    row = run_cell(planted512, "dct", 50, 11)
    assert row.m == 256 and row.converged
    assert row.mse < 1e-10


def test_run_cell_deterministic(planted512):
    assert run_cell(planted512, "dft", 40, 5) == run_cell(planted512, "dft", 40, 5)


def test_degenerate_sweep_equals_run_cell(planted512):
    spec = SweepSpec(planted512, percentages=(30,), trials=1, bases=("dct",), base_seed=17)
    report = run_sweep(spec)
    assert report.rows == [run_cell(planted512, "dct", 30, 17)]


def test_sweep_shape_and_seeds(planted512):
    spec = SweepSpec(planted512, percentages=(20, 50), trials=3, base_seed=100)
    report = run_sweep(spec)
    assert len(report.rows) == 2 * 2 * 3
    assert [r.seed for r in report.rows[:6]] == [100, 101, 102, 103, 104, 105]
    # Both bases see the same patterns.
    assert [r.seed for r in report.rows[6:]] == [r.seed for r in report.rows[:6]]
    for r in report.rows:
        assert r.m == round(r.percentage / 100 * 512)
    assert set(report.aggregate()) == {(b, p) for b in Basis for p in (20, 50)}


@pytest.mark.parametrize("bad", [
    dict(percentages=()), dict(percentages=(50, 40)), dict(percentages=(0, 10)),
    dict(trials=0), dict(bases=()), dict(bases=("dct", "dct")), dict(percentages=(10.5,)),
])
def test_sweep_spec_invariants(planted512, bad):
    with pytest.raises(ValueError):
        SweepSpec(planted512, **bad)


def test_csv_layout(planted512, tmp_path):
    report = run_sweep(SweepSpec(planted512, percentages=(50,), trials=1, bases=("dct",)))
    write_csv(report, tmp_path / "out.csv")
    lines = (tmp_path / "out.csv").read_text().splitlines()
    assert lines[0] == CSV_HEADER
    data = [ln for ln in lines if not ln.startswith("#")]
    assert len(data) == 2
    fields = data[1].split(",")
    assert fields[:5] == ["dct", "50", "0", "0", "256"]
    assert fields[6:] == ["true", str(report.rows[0].iterations)]
    assert float(fields[5]) == pytest.approx(report.rows[0].mse, rel=1e-9)
    comments = [ln for ln in lines if ln.startswith("#")]
    assert comments[0] == "# basis,percentage,mean_mse,median_mse"
    assert comments[1].startswith("# dct,50,")


def test_csv_ten_significant_digits():
    from csrecon.evaluation import CellResult, SweepReport

    row = CellResult(Basis.DFT, 30, 2, 9, 900, 1 / 3, False, 5000)
    text = format_csv(SweepReport([row]))
    assert "dft,30,2,9,900,0.3333333333,false,5000" in text.splitlines()


def test_csv_byte_identical(planted512, tmp_path):
    spec = SweepSpec(planted512, percentages=(20, 40), trials=2)
    write_csv(run_sweep(spec), tmp_path / "a.csv")
    write_csv(run_sweep(spec), tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def _monotone_with_one_small_inversion(means):
    means = np.maximum(means, EXACT_FLOOR)
    inversions = [(a, b) for a, b in zip(means, means[1:]) if b > a]
    return len(inversions) <= 1 and all(b < 1.1 * a for a, b in inversions)


@pytest.mark.parametrize("basis", ["dct", "dft"])
def test_percentage_monotonicity_planted(planted512, basis):
    pcts = (10, 20, 30, 40, 50, 60, 70, 80, 90)
    report = run_sweep(SweepSpec(planted512, percentages=pcts, trials=5, bases=(basis,)))
    assert _monotone_with_one_small_inversion([report.mean_mse(basis, p) for p in pcts])


def test_harmonic_proxy_trends(harmonic):
    report = run_sweep(SweepSpec(harmonic, percentages=(30, 50), trials=10))
    assert report.mean_mse("dct", 50) <= report.mean_mse("dct", 30)
    assert report.mean_mse("dct", 50) <= report.mean_mse("dft", 50)
    for b in ("dct", "dft"):
        assert _monotone_with_one_small_inversion([report.mean_mse(b, p) for p in (30, 50)])


def test_cross_basis_ordering_planted(planted512):
    pcts = (30, 40, 50, 60, 70)
    report = run_sweep(SweepSpec(planted512, percentages=pcts, trials=5))
    for p in pcts:
        assert report.mean_mse("dct", p) <= report.mean_mse("dft", p)


def test_full_observation_floor(planted512, harmonic):
    for frame in (planted512, harmonic):
        report = run_sweep(SweepSpec(frame, percentages=(100,), trials=2))
        assert all(r.mse < 1e-10 for r in report.rows)


def test_parallel_sweep_matches_serial(planted512):
    spec = SweepSpec(planted512, percentages=(20, 40), trials=2)
    assert format_csv(run_sweep(spec, n_jobs=2)) == format_csv(run_sweep(spec))
