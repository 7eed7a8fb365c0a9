import math

import pytest

from commscale import ensemble as ens
from commscale.errors import CsvFormatError, DomainError, UnsupportedConfigError
from commscale.ensemble import EnsembleSample, EnsembleSpec, PowerLawFit
from commscale.meanfield import ScalingClass, ScalingParams
from commscale.tabular import format_pairs, parse_pairs

D2H1 = ScalingParams(D=2, H=1.0)


def spec(cls=ScalingClass.INTERACTION, **kw):
    return EnsembleSpec(scaling_class=cls, params=D2H1, **kw)


class TestSpecValidation:
    def test_sample_count(self):
        with pytest.raises(DomainError):
            spec(n_samples=1)

    def test_population_bounds(self):
        with pytest.raises(DomainError):
            spec(N_min=0.5)
        with pytest.raises(DomainError):
            spec(N_min=100.0, N_max=100.0)

    def test_noise_and_fraction(self):
        with pytest.raises(DomainError):
            spec(noise_sigma=-0.1)
        with pytest.raises(DomainError):
            spec(inactive_fraction=1.0)
        with pytest.raises(DomainError):
            spec(inactive_fraction=-0.1)

    def test_seed_is_uint64(self):
        with pytest.raises(DomainError):
            spec(seed=-1)
        with pytest.raises(DomainError):
            spec(seed=2**64)
        spec(seed=2**64 - 1)

    def test_sample_positivity(self):
        with pytest.raises(DomainError):
            EnsembleSample(0.0, 1.0)
        with pytest.raises(DomainError):
            EnsembleSample(1.0, -1.0)

    def test_fit_diagnostics_bounds(self):
        with pytest.raises(DomainError):
            PowerLawFit(1.0, 0.0, 1.5, 0.0, 10)
        with pytest.raises(DomainError):
            PowerLawFit(1.0, 0.0, 0.5, -0.1, 10)


class TestModelValue:
    @pytest.mark.parametrize(
        "cls,expected",
        [
            (ScalingClass.INFRASTRUCTURE_VOLUME, 100 ** (5 / 6)),
            (ScalingClass.LINEAR_CONSUMPTION, 100.0),
            (ScalingClass.INTERACTION, 100 ** (7 / 6)),
            (ScalingClass.SCARCE_AGENT, 100 ** (1 / 6)),
            (ScalingClass.SCARCE_DEPENDENCY, 100 ** (4 / 3)),
            (ScalingClass.RECURSIVE_DEPENDENCY, 100 ** (13 / 12)),
            (ScalingClass.VIRTUAL_INTERACTION, 100 ** (1 / 2)),
        ],
    )
    def test_pure_powers_with_everyone_active(self, cls, expected):
        assert ens.model_value(cls, 100.0, 0.0, D2H1) == pytest.approx(expected, rel=1e-12)

    def test_split_population_value(self):
        v = ens.model_value(ScalingClass.INTERACTION, 200.0, 0.5, D2H1)
        assert v == pytest.approx(100 ** (7 / 6) * 2 ** (5 / 6), rel=1e-12)

    def test_rejects_nonpositive_population(self):
        with pytest.raises(DomainError):
            ens.model_value(ScalingClass.INTERACTION, 0.0, 0.0, D2H1)

    def test_recursive_requires_unit_trajectory_dimension(self):
        with pytest.raises(UnsupportedConfigError):
            ens.model_value(ScalingClass.RECURSIVE_DEPENDENCY, 100.0, 0.0, ScalingParams(D=2, H=0.5))

    def test_accepts_class_by_string_value(self):
        assert ens.model_value("linear_consumption", 7.0, 0.0, D2H1) == 7.0


class TestGenerate:
    def test_deterministic(self):
        s = spec(n_samples=50, seed=9)
        assert ens.generate(s) == ens.generate(s)

    def test_seed_changes_the_draw(self):
        assert ens.generate(spec(n_samples=10, seed=1)) != ens.generate(spec(n_samples=10, seed=2))

    def test_sample_count_prefix_stable(self):
        # Growing an ensemble never changes the samples already drawn.
        short = ens.generate(spec(n_samples=10, seed=4))
        long = ens.generate(spec(n_samples=60, seed=4))
        assert long[:10] == short

    def test_populations_inside_bounds(self):
        for s in ens.generate(spec(n_samples=200, N_min=50.0, N_max=5000.0, seed=3)):
            assert 50.0 <= s.N <= 5000.0
            assert s.Y > 0

    def test_zero_noise_lies_on_the_model(self):
        for s in ens.generate(spec(n_samples=20, noise_sigma=0.0, seed=5)):
            assert s.Y == pytest.approx(ens.model_value(ScalingClass.INTERACTION, s.N, 0.0, D2H1), rel=1e-12)


class TestFitPowerLaw:
    def test_exact_line_recovered(self):
        samples = [EnsembleSample(n, 4.0 * n**2.3) for n in (10, 100, 1000, 12345)]
        fit = ens.fit_power_law(samples)
        assert fit.beta == pytest.approx(2.3, rel=1e-12)
        assert fit.log_intercept == pytest.approx(math.log(4.0), rel=1e-12)
        assert fit.r_squared == 1.0
        assert fit.stderr_beta == pytest.approx(0.0, abs=1e-12)
        assert fit.n == 4

    def test_two_points_define_a_slope(self):
        fit = ens.fit_power_law([EnsembleSample(10, 100), EnsembleSample(1000, 10000)])
        assert fit.beta == pytest.approx(1.0, rel=1e-12)
        assert fit.stderr_beta == 0.0

    def test_needs_two_distinct_populations(self):
        with pytest.raises(DomainError):
            ens.fit_power_law([EnsembleSample(10, 1), EnsembleSample(10, 2)])
        with pytest.raises(DomainError):
            ens.fit_power_law([])

    def test_noiseless_ensembles_recover_theory_for_every_class(self):
        from commscale.meanfield import predicted_exponent

        for D in (1, 2, 3):
            for H in (0.5, 1.0, min(2.0, float(D))):
                params = ScalingParams(D=D, H=H)
                for cls in ScalingClass:
                    if cls is ScalingClass.RECURSIVE_DEPENDENCY and H != 1.0:
                        continue
                    s = EnsembleSpec(cls, params, n_samples=40, noise_sigma=0.0, seed=11)
                    fit = ens.fit_power_law(ens.generate(s))
                    assert fit.beta == pytest.approx(predicted_exponent(cls, params), abs=1e-9)
                    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)

    def test_inactive_fraction_preserves_the_exponent(self):
        # A fixed inactive share shifts the intercept, never the slope.
        s = spec(n_samples=40, noise_sigma=0.0, inactive_fraction=0.3, seed=13)
        fit = ens.fit_power_law(ens.generate(s))
        assert fit.beta == pytest.approx(7 / 6, abs=1e-12)


# Frozen regression values: seed 42, 500 samples, sigma 0.1, D=2, H=1.
GOLDEN_BETAS = {
    ScalingClass.INFRASTRUCTURE_VOLUME: 0.8319307012904311,
    ScalingClass.LINEAR_CONSUMPTION: 0.9985973679570976,
    ScalingClass.INTERACTION: 1.1652640346237646,
    ScalingClass.SCARCE_AGENT: 0.16526403462376454,
    ScalingClass.SCARCE_DEPENDENCY: 1.3319307012904311,
    ScalingClass.RECURSIVE_DEPENDENCY: 1.0819307012904311,
    ScalingClass.VIRTUAL_INTERACTION: 0.4985973679570978,
}


class TestGoldenEnsembles:
    @pytest.mark.parametrize("cls", sorted(GOLDEN_BETAS, key=lambda c: c.value))
    def test_seed_42_betas(self, cls):
        fit = ens.fit_power_law(ens.generate(spec(cls, seed=42)))
        assert fit.beta == pytest.approx(GOLDEN_BETAS[cls], abs=1e-9)


class TestCompare:
    def test_matching_fit_is_within_band(self):
        fit = PowerLawFit(7 / 6, 0.0, 1.0, 0.01, 100)
        report = ens.compare(fit, ScalingClass.INTERACTION, D2H1)
        assert report.theory_beta == pytest.approx(7 / 6)
        assert report.gap == pytest.approx(0.0, abs=1e-15)
        assert report.within_k_stderr

    def test_distant_fit_is_flagged(self):
        fit = PowerLawFit(1.5, 0.0, 1.0, 0.01, 100)
        report = ens.compare(fit, ScalingClass.INTERACTION, D2H1, k=2.0)
        assert report.gap == pytest.approx(1.5 - 7 / 6, rel=1e-12)
        assert not report.within_k_stderr

    def test_wider_band_can_absorb_the_gap(self):
        fit = PowerLawFit(1.17, 0.0, 1.0, 0.01, 100)
        assert not ens.compare(fit, ScalingClass.INTERACTION, D2H1, k=0.1).within_k_stderr
        assert ens.compare(fit, ScalingClass.INTERACTION, D2H1, k=2.0).within_k_stderr

    def test_end_to_end_gap_is_small(self):
        fit = ens.fit_power_law(ens.generate(spec(seed=42)))
        report = ens.compare(fit, ScalingClass.INTERACTION, D2H1)
        assert report.gap <= 0.02


class TestCsv:
    def test_render_parse_render_is_bytewise_stable(self):
        samples = ens.generate(spec(n_samples=25, seed=6))
        text = ens.samples_to_csv(samples)
        assert text.startswith("N,Y\n")
        assert ens.samples_to_csv(ens.parse_csv(text)) == text

    def test_parse_rejects_nonpositive_rows(self):
        with pytest.raises(CsvFormatError) as err:
            ens.parse_csv("N,Y\n10,1\n-3,1\n")
        assert "row 3" in str(err.value)

    def test_ingest_reads_files(self, tmp_path):
        path = tmp_path / "series.csv"
        path.write_text("N,Y\n10,100\n20,300\n", encoding="utf-8")
        samples = ens.ingest_csv(path)
        assert samples == [EnsembleSample(10.0, 100.0), EnsembleSample(20.0, 300.0)]


class TestTabular:
    def test_header_must_match_exactly(self):
        with pytest.raises(CsvFormatError) as err:
            parse_pairs("n,y\n1,2\n", "N,Y")
        assert "row 1" in str(err.value)

    def test_empty_input(self):
        with pytest.raises(CsvFormatError):
            parse_pairs("", "N,Y")

    def test_column_count(self):
        with pytest.raises(CsvFormatError) as err:
            parse_pairs("N,Y\n1,2,3\n", "N,Y")
        assert "row 2" in str(err.value)

    def test_bad_number_names_row_and_column(self):
        with pytest.raises(CsvFormatError) as err:
            parse_pairs("N,Y\n1,2\n3,oops\n", "N,Y")
        assert "row 3, column 2" in str(err.value)

    def test_rows_are_numbered_from_the_header(self):
        rows = parse_pairs("N,Y\n1,2\n3,4\n", "N,Y")
        assert rows == [(2, 1.0, 2.0), (3, 3.0, 4.0)]

    def test_format_emits_trailing_newline_and_12_digits(self):
        text = format_pairs([(1 / 3, 2e-7)], "a,b")
        assert text == "a,b\n0.333333333333,2e-07\n"
