import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csrecon.sensing import (
    CsOperator,
    MeasurementSet,
    SamplingPattern,
    count_from_percentage,
    draw_pattern,
    materialize,
    measure,
    operator_adjoint,
    operator_apply,
)
from csrecon.signal_io import Frame, SynthSpec, synthesize
from csrecon.transforms import (
    BasisMismatchError,
    SparsityBasis,
    forward,
    inverse_matrix,
    inverse_row,
)

BASES = ["dct", "dft"]


def op_for(kind, n, m, seed=0):
    return CsOperator(draw_pattern(n, m, seed), SparsityBasis(kind, n))


def test_full_pattern_is_permutation():
    assert sorted(draw_pattern(5, 5, 123).indices.tolist()) == [0, 1, 2, 3, 4]


def test_pattern_determinism():
    assert draw_pattern(100, 30, 9) == draw_pattern(100, 30, 9)
    assert draw_pattern(100, 30, 9) != draw_pattern(100, 30, 10)


def test_pattern_prefix_property():
    # Patterns for the same seed are prefixes of one permutation.
    a = draw_pattern(50, 10, 4).indices
    b = draw_pattern(50, 40, 4).indices
    np.testing.assert_array_equal(a, b[:10])


def test_pattern_inclusion_frequency():
    counts = np.zeros(1000)
    for seed in range(200):
        counts[draw_pattern(1000, 300, seed).indices] += 1
    freq = counts / 200
    # Each count is Binomial(200, 0.3): sd 0.032, so ~89.5% of indices land
    # within 0.3 +/- 0.05 under exact uniformity.
    assert 0.85 <= np.mean(np.abs(freq - 0.3) <= 0.05) <= 0.94
    assert np.max(np.abs(freq - 0.3)) < 0.15
    # Dispersion: sum of (c - 60)^2 / 42 ~ chi2(999) for a uniform sampler.
    stat = np.sum((counts - 60) ** 2) / 42
    assert abs(stat - 999) < 5 * np.sqrt(2 * 999)


@pytest.mark.parametrize("n, m", [(5, 0), (5, 6)])
def test_pattern_count_out_of_range(n, m):
    with pytest.raises(ValueError):
        draw_pattern(n, m, 0)


@settings(max_examples=1000, deadline=None)
@given(st.integers(1, 400).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))),
       st.integers(0, 2**64 - 1))
def test_pattern_fuzz(nm, seed):
    n, m = nm
    p = draw_pattern(n, m, seed)
    assert p.m == m and len(set(p.indices.tolist())) == m
    assert p.indices.min() >= 0 and p.indices.max() < n
    assert p == draw_pattern(n, m, seed)


def test_pattern_text_round_trip():
    p = draw_pattern(40, 12, 77)
    assert p.to_text(explicit=False) == "40 12 77\n"
    assert SamplingPattern.from_text(p.to_text()) == p
    assert SamplingPattern.from_text(p.to_text(explicit=False)) == p
    with pytest.raises(ValueError):
        SamplingPattern.from_text("40 12 77\n1 2 3\n")


def test_pattern_rejects_duplicates():
    with pytest.raises(ValueError):
        SamplingPattern([1, 1], 4, 0)


@pytest.mark.parametrize("p, n, m", [(30, 3000, 900), (50, 512, 256), (100, 7, 7), (1, 10, 1), (25, 6, 2)])
def test_count_from_percentage(p, n, m):
    assert count_from_percentage(p, n) == m


@pytest.mark.parametrize("p", [0, 101, 12.5])
def test_count_from_percentage_rejects(p):
    with pytest.raises(ValueError):
        count_from_percentage(p, 100)


def test_measure_identity_pattern():
    f = Frame([0.1, 0.2, 0.3])
    ms = measure(f, SamplingPattern([0, 1, 2], 3, 0))
    np.testing.assert_array_equal(ms.y, f.samples)


def test_measure_single_index():
    ms = measure(Frame([5.0, 6.0, 7.0, 8.0]), SamplingPattern([2], 4, 0))
    assert ms.y.tolist() == [7.0]


def test_measure_length_mismatch():
    with pytest.raises(ValueError):
        measure(Frame([1.0, 2.0]), draw_pattern(3, 2, 0))


def test_measure_of_synth_deterministic():
    spec = SynthSpec("sparse", n=200, k=5, seed=1)
    a = measure(synthesize(spec, "dct"), draw_pattern(200, 50, 2)).y
    b = measure(synthesize(spec, "dct"), draw_pattern(200, 50, 2)).y
    assert a.tobytes() == b.tobytes()


def test_measurement_set_rejects_nonfinite():
    p = draw_pattern(4, 2, 0)
    with pytest.raises(ValueError):
        MeasurementSet([1.0, np.inf], p, SparsityBasis("dct", 4))


@pytest.mark.parametrize("kind", BASES)
@pytest.mark.parametrize("n", [8, 64, 3000])
def test_apply_commutes_with_measure(kind, n, rng):
    for seed in range(5):
        f = rng.standard_normal(n)
        op = op_for(kind, n, max(1, n // 3), seed)
        got = operator_apply(op, forward(f, kind))
        np.testing.assert_allclose(got, measure(f, op.pattern, kind).y, atol=1e-10)


@pytest.mark.parametrize("kind", BASES)
def test_apply_zero(kind):
    op = op_for(kind, 16, 5)
    assert not np.any(op.apply(np.zeros(16)))
    assert not np.any(operator_adjoint(op, np.zeros(5)).values)


@pytest.mark.parametrize("kind", BASES)
def test_materialized_matches_matrix_free(kind, rng):
    op = op_for(kind, 32, 12, 3)
    mat = materialize(op)
    for _ in range(10):
        x = rng.standard_normal(32) + (1j * rng.standard_normal(32) if kind == "dft" else 0)
        np.testing.assert_allclose(mat @ x, op.apply(x), atol=1e-12)


@pytest.mark.parametrize("kind", BASES)
def test_materialize_rows_and_full_inverse(kind):
    n = 16
    full = CsOperator(SamplingPattern(np.arange(n), n, 0), SparsityBasis(kind, n))
    np.testing.assert_array_equal(materialize(full), inverse_matrix(SparsityBasis(kind, n)))
    op = op_for(kind, n, 6, 1)
    mat = op.materialize()
    for i, t in enumerate(op.pattern.indices):
        np.testing.assert_allclose(mat[i], inverse_row(op.basis, int(t)), atol=1e-15)


def test_materialize_guard():
    with pytest.raises(MemoryError):
        op_for("dct", 5000, 10).materialize()


@pytest.mark.parametrize("kind", BASES)
def test_rows_orthonormal(kind):
    mat = op_for(kind, 64, 32, 8).materialize()
    np.testing.assert_allclose(mat @ mat.conj().T, np.eye(32), atol=1e-10)


@pytest.mark.parametrize("kind", BASES)
def test_adjoint_identity(kind):
    gen = np.random.default_rng(0)
    op = op_for(kind, 64, 20, 5)
    cplx = kind == "dft"
    for _ in range(50):
        x = gen.standard_normal(64) + (1j * gen.standard_normal(64) if cplx else 0)
        r = gen.standard_normal(20) + (1j * gen.standard_normal(20) if cplx else 0)
        lhs = np.vdot(r, op.apply(x))
        rhs = np.vdot(op.adjoint(r), x)
        assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), 1.0)


@pytest.mark.parametrize("kind", BASES)
def test_apply_adjoint_is_identity(kind, rng):
    op = op_for(kind, 300, 90, 2)
    r = rng.standard_normal(90)
    np.testing.assert_allclose(op.apply(op.adjoint(r)), r, atol=1e-10)


def test_operator_dimension_and_basis_checks():
    op = op_for("dct", 16, 4)
    with pytest.raises(ValueError):
        op.apply(np.zeros(15))
    with pytest.raises(ValueError):
        op.adjoint(np.zeros(5))
    with pytest.raises(BasisMismatchError):
        operator_apply(op, forward(np.ones(16), "dft"))
