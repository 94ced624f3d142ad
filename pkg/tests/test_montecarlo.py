import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from hdunif import (Cell, DomainError, ExperimentSpec, cell_concentration,
                    figure1_spec, figure2_spec, figure3_spec, run_cell,
                    run_grid)
from hdunif.montecarlo import asymptotic_reference, replicate_rng


def small_cell(**overrides):
    base = dict(family="uniform", n=40, p=10, ell=0.0, alpha=0.05,
                tests=("rayleigh_highdim",), replicates=50)
    base.update(overrides)
    return Cell(**base)


class TestCellValidation:
    def test_unknown_family(self):
        with pytest.raises(DomainError):
            small_cell(family="cauchy")

    def test_schedule_required(self):
        with pytest.raises(DomainError):
            small_cell(family="fvml")

    def test_test_family_mismatch(self):
        with pytest.raises(DomainError):
            small_cell(tests=("john",))


class TestConcentration:
    def test_fvml_schedules(self):
        c1 = Cell(family="fvml", n=100, p=400, ell=2, j=1,
                  tests=("rayleigh_highdim",), replicates=1)
        assert_allclose(cell_concentration(c1), 1.2 * math.sqrt(4.0), rtol=1e-14)
        c2 = Cell(family="fvml", n=100, p=100, ell=3, j=2,
                  tests=("rayleigh_highdim",), replicates=1)
        assert_allclose(cell_concentration(c2), 1.8 * 100 ** 0.75 / 10.0, rtol=1e-14)

    def test_beta_schedules(self):
        c = Cell(family="beta", n=100, p=100, ell=4, j=2,
                 tests=("rayleigh_highdim",), replicates=1)
        assert_allclose(cell_concentration(c), 2.4 / (10.0 * 100 ** 0.25), rtol=1e-14)


class TestRunCell:
    def test_degenerate_single_replicate(self):
        res = run_cell(small_cell(replicates=1), master_seed=7)
        assert res.per_test["rayleigh_highdim"].frequency in (0.0, 1.0)

    def test_bit_identical_reruns(self):
        cell = small_cell(replicates=30)
        a = run_cell(cell, master_seed=123)
        b = run_cell(cell, master_seed=123)
        assert a.per_test == b.per_test

    def test_thread_count_invariance(self):
        cell = small_cell(replicates=64, tests=("rayleigh_highdim", "specified_theta"))
        seq = run_cell(cell, master_seed=11, threads=1)
        par = run_cell(cell, master_seed=11, threads=5)
        for t in cell.tests:
            assert seq.per_test[t].rejections == par.per_test[t].rejections

    def test_replicate_streams_differ(self):
        cell = small_cell()
        a = replicate_rng(5, cell, 0).random(4)
        b = replicate_rng(5, cell, 1).random(4)
        assert not np.array_equal(a, b)

    def test_frequency_bookkeeping(self):
        res = run_cell(small_cell(replicates=40), master_seed=3)
        tf = res.per_test["rayleigh_highdim"]
        assert tf.frequency == tf.rejections / 40
        assert_allclose(tf.se, math.sqrt(tf.frequency * (1 - tf.frequency) / 40), rtol=1e-12)


class TestReferences:
    def test_null_reference_is_alpha(self):
        for family, j in [("fvml", 1), ("beta", 2), ("skew_normal", None)]:
            cell = Cell(family=family, n=30, p=10, ell=0, j=j, alpha=0.05, replicates=1,
                        tests=("rayleigh_signs",) if family == "skew_normal"
                        else ("rayleigh_highdim",))
            test_id = cell.tests[0]
            assert asymptotic_reference(cell, test_id) == 0.05

    def test_rayleigh_j2_reference(self):
        cell = Cell(family="fvml", n=100, p=100, ell=3, j=2,
                    tests=("rayleigh_highdim",), replicates=1)
        # 1 - Phi(z_.05 - 1.8^2/sqrt(2))
        assert_allclose(asymptotic_reference(cell, "rayleigh_highdim"), 0.74087, atol=5e-5)

    def test_specified_j1_reference(self):
        cell = Cell(family="fvml", n=100, p=100, ell=1, j=1,
                    tests=("specified_theta",), replicates=1)
        assert_allclose(asymptotic_reference(cell, "specified_theta"), 0.14801, atol=5e-5)

    def test_rayleigh_j1_blind(self):
        cell = Cell(family="beta", n=100, p=100, ell=4, j=1,
                    tests=("rayleigh_highdim",), replicates=1)
        assert asymptotic_reference(cell, "rayleigh_highdim") == 0.05

    def test_specified_j2_consistent(self):
        cell = Cell(family="fvml", n=100, p=100, ell=2, j=2,
                    tests=("specified_theta",), replicates=1)
        assert asymptotic_reference(cell, "specified_theta") == 1.0

    def test_euclidean_reference_is_nan(self):
        cell = Cell(family="spiked", n=50, p=50, ell=2, tests=("john",), replicates=1)
        assert math.isnan(asymptotic_reference(cell, "john"))


class TestFigureSpecs:
    def test_figure1_structure(self):
        spec = figure1_spec(replicates=10)
        assert len(spec.cells) == 90
        assert all(c.family == "fvml" for c in spec.cells)
        assert {c.j for c in spec.cells} == {1, 2}
        assert {c.ell for c in spec.cells} == {0, 1, 2, 3, 4}

    def test_figure2_structure(self):
        spec = figure2_spec(replicates=10)
        assert len(spec.cells) == 90
        assert all(c.family == "beta" for c in spec.cells)

    def test_figure3_structure(self):
        spec = figure3_spec()
        assert len(spec.cells) == 10
        assert {c.family for c in spec.cells} == {"skew_normal", "spiked"}
        assert all(c.replicates == 1000 for c in spec.cells)
        assert all(c.n == 100 and c.p == 100 for c in spec.cells)

    def test_figure3_null_cells_reduce_to_standard_normal(self):
        # at ell = 0 both generators produce N(0, I) data
        from hdunif.distributions import SkewNormal, Spiked, sample_skew_normal, sample_spiked_gaussian
        from scipy.stats import kstest

        rng = np.random.default_rng(8)
        x = sample_skew_normal(SkewNormal(0.0, 4), 50_000, rng)
        y = sample_spiked_gaussian(Spiked(0.0, 4), 50_000, rng)
        assert kstest(x[:, 1], "norm").pvalue > 1e-4
        assert kstest(y[:, 0], "norm").pvalue > 1e-4


class TestLevelControl:
    def test_null_cells_hold_level_for_every_test(self):
        m = 800
        slack = 3.0 * math.sqrt(0.05 * 0.95 / m) + 0.005
        sphere = Cell(family="uniform", n=60, p=30, ell=0, alpha=0.05, replicates=m,
                      tests=("rayleigh_highdim", "rayleigh_fixedp", "specified_theta"))
        euclid = Cell(family="spiked", n=60, p=30, ell=0, alpha=0.05, replicates=m,
                      tests=("rayleigh_signs", "john", "sign_sphericity"))
        for cell in (sphere, euclid):
            res = run_cell(cell, master_seed=2024, threads=4)
            for test_id, tf in res.per_test.items():
                assert abs(tf.frequency - 0.05) <= slack, (test_id, tf.frequency)


class TestRunGrid:
    def test_grid_determinism_across_threads(self):
        cells = tuple(small_cell(replicates=20, n=20, p=6, ell=float(e)) for e in (0, 0))
        spec = ExperimentSpec(name="t", cells=cells, master_seed=77)
        seq = run_grid(spec, threads=1)
        par = run_grid(spec, threads=3)
        freq_seq = [r.per_test["rayleigh_highdim"].rejections for r in seq.results]
        freq_par = sorted(r.per_test["rayleigh_highdim"].rejections for r in par.results)
        assert sorted(freq_seq) == freq_par

    def test_failures_are_collected(self):
        good = small_cell(replicates=5)
        bad = Cell(family="beta", n=4, p=2, ell=4.0, j=2, replicates=5,
                   tests=("rayleigh_highdim",))
        # e1 = 2.4/(2 * 2^(1/4)) > 1: no beta law has that mean
        spec = ExperimentSpec(name="t", cells=(good, bad), master_seed=1)
        out = run_grid(spec)
        assert len(out.results) == 1
        assert len(out.failures) == 1
        assert "InfeasibleMoments" in out.failures[0][1]
