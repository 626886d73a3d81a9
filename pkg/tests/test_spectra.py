import math

import numpy as np
import pytest

from excitonqfi.constants import KB_CM1_PER_K
from excitonqfi.dimer import DimerParams, mixing_angle
from excitonqfi.errors import (
    CapabilityError,
    DomainError,
    IntegrationError,
    NumericalError,
    ValidationError,
    WindowError,
)
from excitonqfi.oracle import dense_qfi_pure
from excitonqfi.qfi import dipole_field_generator
from excitonqfi.spectra import (
    CorrelationTrace,
    ExtinctionTrace,
    SpectralDensity,
    SpectrumTrace,
    default_time_grid,
    dipole_correlation,
    extinction_prefactor,
    ingest_extinction,
    lineshape_g,
    qfi_from_spectrum,
    qfi_from_symmetric_correlation,
    spectrum,
    synthesize_extinction,
)

SD = SpectralDensity(reorganization_cm1=35.0, cutoff_cm1=50.0)
SD_SETS = (
    SpectralDensity(10.0, 40.0),
    SpectralDensity(35.0, 50.0),
    SpectralDensity(100.0, 30.0),
    SpectralDensity(60.0, 120.0),
    SpectralDensity(200.0, 80.0),
)


def fmo():
    return DimerParams(12328.0, 12472.0, 70.7)


class TestSpectralDensity:
    def test_normalizes_to_reorganization_energy(self):
        for sd in SD_SETS:
            total = sd.check_normalization(rtol=1e-6)
            assert total == pytest.approx(sd.reorganization_cm1, rel=1e-6)

    def test_validation(self):
        with pytest.raises(ValidationError):
            SpectralDensity(-1.0, 50.0)
        with pytest.raises(ValidationError):
            SpectralDensity(35.0, 0.0)
        with pytest.raises(ValidationError):
            SpectralDensity(35.0, 50.0, form="ohmic")


class TestLineshape:
    def test_starts_at_zero(self):
        g = lineshape_g(SD, 300.0, np.linspace(0.0, 0.01, 64))
        assert g[0] == 0.0

    def test_vanishes_with_reorganization_energy(self):
        tiny = SpectralDensity(1e-9, 50.0)
        g = lineshape_g(tiny, 300.0, np.linspace(0.0, 0.05, 64))
        assert np.max(np.abs(g)) < 1e-6

    def test_scales_linearly_in_reorganization(self):
        t = np.linspace(0.0, 0.02, 32)
        g1 = lineshape_g(SpectralDensity(20.0, 50.0), 300.0, t)
        g2 = lineshape_g(SpectralDensity(40.0, 50.0), 300.0, t)
        assert np.allclose(g2, 2.0 * g1, rtol=1e-10, atol=1e-12)

    def test_high_temperature_drude_limit(self):
        # k_B T = 1390 >> gamma = 50
        t = np.linspace(0.0, 0.02, 200)
        g = lineshape_g(SD, 2000.0, t)
        kt = KB_CM1_PER_K * 2000.0
        analytic = (2.0 * 35.0 * kt / 50.0) * (t - (1.0 - np.exp(-50.0 * t)) / 50.0)
        mask = t > 0.002
        rel = np.abs(g.real[mask] - analytic[mask]) / analytic[mask]
        assert np.max(rel) < 0.01

    def test_initial_phase_slope_matches_reorganization(self):
        dt = 1e-6
        g = lineshape_g(SD, 300.0, np.array([0.0, dt]))
        assert g[1].imag / dt == pytest.approx(35.0, rel=0.01)

    def test_real_part_nonnegative_and_growing(self):
        t = np.linspace(0.0, 0.05, 128)
        g = lineshape_g(SD, 300.0, t)
        assert np.all(g.real >= -1e-12)
        assert g.real[-1] > g.real[10]

    def test_nonpositive_temperature_rejected(self):
        with pytest.raises(DomainError):
            lineshape_g(SD, 0.0, np.linspace(0.0, 0.01, 16))

    def test_unaffordable_quadrature_reported(self):
        with pytest.raises(NumericalError, match="nodes"):
            lineshape_g(SD, 300.0, np.array([0.0, 100.0]))


class TestDipoleCorrelation:
    def test_initial_value_first_exciton(self):
        params = fmo()
        theta = mixing_angle(params)
        grid = np.linspace(0.0, 0.05, 512)
        corr = dipole_correlation(params, "e1", SD, 300.0, grid)
        want = 0.5 * (1.0 + math.sin(2.0 * theta))
        assert corr.values[0] == pytest.approx(want, abs=1e-14)
        # oracle: C(0) = <e1|mu^2|e1> = qfi_pure/4 for a zero-mean dipole
        c1 = np.array([math.cos(theta), math.sin(theta)])
        oracle = dense_qfi_pure(c1, dipole_field_generator(2)) / 4.0
        assert corr.values[0].real == pytest.approx(oracle, abs=1e-12)

    def test_initial_value_ground_state(self):
        grid = np.linspace(0.0, 0.05, 512)
        corr = dipole_correlation(fmo(), "e0", SD, 300.0, grid)
        assert corr.values[0] == pytest.approx(0.5, abs=1e-14)

    def test_zero_reorganization_leaves_pure_phase(self):
        # resonant dimer probed from the ground state has a single band, so
        # |C| is constant when dephasing vanishes
        params = DimerParams(12400.0, 12400.0, 70.7)
        tiny = SpectralDensity(1e-7, 50.0)
        grid = np.linspace(0.0, 0.01, 256)
        corr = dipole_correlation(params, "e0", tiny, 300.0, grid)
        assert np.max(np.abs(np.abs(corr.values) - abs(corr.values[0]))) < 1e-6

    def test_unsupported_initial_state(self):
        with pytest.raises(CapabilityError):
            dipole_correlation(fmo(), "e2", SD, 300.0, np.linspace(0.0, 0.01, 64))


class TestSpectrum:
    def test_delta_like_correlation_gives_flat_spectrum(self):
        t = np.linspace(0.0, 1.0, 64)
        values = np.zeros(64, dtype=complex)
        values[0] = 1.0
        trace = CorrelationTrace(times=t, values=values, initial_state="e0")
        result = spectrum(trace)
        assert np.max(result.intensity) == pytest.approx(np.min(result.intensity),
                                                         rel=1e-12)

    def test_single_damped_frequency_is_lorentzian_at_transition(self):
        omega0, gamma = 500.0, 40.0
        dt = 2.0 * np.pi / 4096.0
        t = dt * np.arange(4096)
        values = np.exp(-1j * omega0 * t - gamma * t)
        trace = CorrelationTrace(times=t, values=values, initial_state="e0")
        result = spectrum(trace)
        peak_omega = result.omega[np.argmax(result.intensity)]
        assert abs(peak_omega - omega0) <= result.domega
        # half-maximum width ~ 2 gamma
        half = result.intensity > 0.5 * result.intensity.max()
        width = result.omega[half].max() - result.omega[half].min()
        assert width == pytest.approx(2.0 * gamma, rel=0.2)

    def test_fmo_two_bands_equal_weight(self):
        params = fmo()
        grid = default_time_grid(params, SD, 300.0)
        trace = spectrum(dipole_correlation(params, "e1", SD, 300.0, grid))
        neg = trace.omega < 0.0
        w_se = trace.intensity[neg].sum()
        w_esa = trace.intensity[~neg].sum()
        assert w_se / w_esa == pytest.approx(1.0, abs=1e-4)
        e1 = 12400.0 - 100.90832472975175
        e2 = 12400.0 + 100.90832472975175
        peak_se = trace.omega[neg][np.argmax(trace.intensity[neg])]
        peak_esa = trace.omega[~neg][np.argmax(trace.intensity[~neg])]
        # centers sit at the transition energies, reorganization-shifted
        assert abs(-peak_se - e1) <= 35.0 + 2.0 * trace.domega
        assert abs(peak_esa - e2) <= 35.0 + 2.0 * trace.domega
        assert set(trace.bands) == {"SE", "ESA"}

    def test_undecayed_window_instructs_longer_grid(self):
        params = fmo()
        grid = np.linspace(0.0, 2e-3, 512)
        with pytest.raises(WindowError, match="extend"):
            spectrum(dipole_correlation(params, "e1", SD, 300.0, grid))


class TestSumRules:
    def test_spectrum_integral_equals_four_c0(self):
        params = fmo()
        for initial, want in (("e1", 2.0 + 2.0 * math.sin(2 * mixing_angle(params))),
                              ("e0", 2.0)):
            grid = default_time_grid(params, SD, 300.0)
            corr = dipole_correlation(params, initial, SD, 300.0, grid)
            f_spec = qfi_from_spectrum(spectrum(corr))
            four_c0 = 4.0 * corr.values[0].real
            assert abs(f_spec - four_c0) / four_c0 <= 5e-3
            assert abs(f_spec - want) / want <= 5e-3

    def test_both_integral_paths_agree(self):
        params = fmo()
        grid = default_time_grid(params, SD, 300.0)
        corr = dipole_correlation(params, "e1", SD, 300.0, grid)
        f_spec = qfi_from_spectrum(spectrum(corr))
        f_sym = qfi_from_symmetric_correlation(corr)
        assert abs(f_spec - f_sym) / abs(f_spec) <= 1e-6

    def test_lineshape_independence(self):
        params = fmo()
        values = []
        for sd in SD_SETS:
            grid = default_time_grid(params, sd, 300.0)
            corr = dipole_correlation(params, "e1", sd, 300.0, grid)
            values.append(qfi_from_spectrum(spectrum(corr)))
        values = np.array(values)
        assert (values.max() - values.min()) / values.mean() <= 5e-3

    def test_truncated_band_rejected(self):
        omega = np.linspace(-100.0, 100.0, 201)
        intensity = 1.0 / (1.0 + (omega / 50.0) ** 2)  # heavy tails at the edges
        trace = SpectrumTrace(omega=omega, intensity=intensity,
                              bands=tuple("ESA" for _ in omega),
                              dt=1.0, t_window=200.0, n_samples=201)
        with pytest.raises(IntegrationError, match="truncation"):
            qfi_from_spectrum(trace)


class TestIngestion:
    MU = 3.336e-27  # 10 debye in C cm

    def test_round_trip(self):
        trace = synthesize_extinction(2.5, self.MU, 20)
        assert ingest_extinction(trace) == pytest.approx(2.5, rel=0.01)

    def test_linearity_in_extinction(self):
        trace = synthesize_extinction(1.25, self.MU, 20)
        doubled = ExtinctionTrace(omega_cm1=trace.omega_cm1, eps=2.0 * trace.eps,
                                  bands=trace.bands, mu_site_ccm=self.MU, n_sites=20)
        assert ingest_extinction(doubled) == pytest.approx(
            2.0 * ingest_extinction(trace), rel=1e-12)

    def test_quarter_under_doubled_dipole(self):
        trace = synthesize_extinction(2.0, self.MU, 20)
        rescaled = ExtinctionTrace(omega_cm1=trace.omega_cm1, eps=trace.eps,
                                   bands=trace.bands, mu_site_ccm=2.0 * self.MU,
                                   n_sites=20)
        assert ingest_extinction(rescaled) == pytest.approx(
            0.25 * ingest_extinction(trace), rel=1e-12)

    def test_gsb_band_excluded(self):
        trace = synthesize_extinction(2.5, self.MU, 20)
        n = trace.omega_cm1.size
        extra_omega = trace.omega_cm1[-1] + np.arange(1.0, 201.0)
        omega = np.concatenate([trace.omega_cm1, extra_omega])
        eps = np.concatenate([trace.eps, np.full(200, 1e9)])
        bands = trace.bands + tuple("GSB" for _ in range(200))
        widened = ExtinctionTrace(omega_cm1=omega, eps=eps, bands=bands,
                                  mu_site_ccm=self.MU, n_sites=20)
        assert ingest_extinction(widened) == pytest.approx(
            ingest_extinction(trace), rel=1e-9)

    def test_unknown_band_label_rejected(self):
        with pytest.raises(ValidationError, match="band"):
            ExtinctionTrace(omega_cm1=np.array([1.0, 2.0]),
                            eps=np.array([0.0, 1.0]), bands=("SE", "XX"),
                            mu_site_ccm=self.MU, n_sites=4)

    def test_nonpositive_dipole_rejected(self):
        with pytest.raises(DomainError):
            extinction_prefactor(0.0)

    def test_no_selected_bands_rejected(self):
        trace = ExtinctionTrace(omega_cm1=np.array([1.0, 2.0]),
                                eps=np.array([1.0, 1.0]), bands=("GSB", "GSB"),
                                mu_site_ccm=self.MU, n_sites=4)
        with pytest.raises(ValidationError, match="SE or ESA"):
            ingest_extinction(trace)
