"""Linear-response simulation and spectrum-integral QFI sum rules.

Transform conventions (model units, hbar = 1): frequencies omega in cm^-1,
times in cm, and

    I(omega) = integral dt C(t) exp(+i omega t),   C(-t) = conj(C(t)),

so a correlation component exp(-i Omega t) produces a band at +Omega.  With
this pairing the spectrum-integral QFI (2/pi) integral I(omega) d omega equals
4 C(0), and the symmetric-correlation form (4/pi) integral_0^inf S(omega)
d omega equals the same number; both discrete implementations below preserve
those identities exactly on the sampled grid (DFT orthogonality plus the
trapezoidal end correction), so the sum-rule checks probe windowing and decay,
not quadrature folklore.

Dephasing follows the second-cumulant form F(t) = exp(-i lambda t - g(t)) with

    g(t) = integral_0^inf d omega rho(omega)
           [coth(omega / 2 k_B T) (1 - cos omega t) + i sin omega t],

whose real part grows from g(0) = 0 and damps the correlation function; the
reorganization energy is lambda = integral omega rho(omega) d omega.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import quad

from .constants import (
    C_CM_PER_S,
    EPSILON_0_F_PER_M,
    HBAR_J_S,
    KB_CM1_PER_K,
    LN10,
    N_AVOGADRO,
)
from .dimer import DimerParams, exciton_energies, mixing_angle
from .errors import (
    CapabilityError,
    DomainError,
    IntegrationError,
    NumericalError,
    ValidationError,
    WindowError,
)

BAND_LABELS = ("SE", "ESA", "GSB")


@dataclass(frozen=True)
class SpectralDensity:
    """Drude-Lorentz phonon spectral density.

    rho(omega) = (2 lambda / pi) * gamma / (omega (omega^2 + gamma^2)), which
    integrates against omega to the reorganization energy lambda.
    """

    reorganization_cm1: float
    cutoff_cm1: float
    form: str = "drude-lorentz"

    def __post_init__(self):
        if self.form != "drude-lorentz":
            raise ValidationError(f"unsupported spectral density form {self.form!r}")
        if not (self.reorganization_cm1 > 0.0 and self.cutoff_cm1 > 0.0):
            raise ValidationError("reorganization and cutoff must be positive")

    def density(self, omega: np.ndarray) -> np.ndarray:
        lam, gamma = self.reorganization_cm1, self.cutoff_cm1
        omega = np.asarray(omega, dtype=float)
        return (2.0 * lam / np.pi) * gamma / (omega * (omega ** 2 + gamma ** 2))

    def check_normalization(self, rtol: float = 1e-6) -> float:
        """Quadrature of omega * rho(omega); raises if it misses lambda by > rtol."""
        lam, gamma = self.reorganization_cm1, self.cutoff_cm1
        total, _ = quad(lambda w: (2.0 * lam / np.pi) * gamma / (w ** 2 + gamma ** 2),
                        0.0, np.inf)
        if abs(total - lam) > rtol * lam:
            raise NumericalError(f"spectral density normalizes to {total}, not {lam}")
        return total


_GL_ORDER = 32
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)


def _gauss_legendre(a: float, b: float, n: int):
    """Composite Gauss-Legendre rule on [a, b] with at least n nodes total.

    Fixed-order panels (cached 32-point rule) keep the cost linear in n; a
    single high-order rule would pay an O(n^2) eigensolve for its nodes.
    """
    n_panels = max(1, -(-n // _GL_ORDER))
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    return x, w


def lineshape_g(sd: SpectralDensity, temperature: float, t_grid: np.ndarray,
                omega_max: Optional[float] = None, check_tol: float = 1e-8) -> np.ndarray:
    """Second-cumulant lineshape function g(t) on a time grid (cm units).

    Composite Gauss-Legendre quadrature on geometric panels of [0, omega_max],
    each panel carrying enough nodes for its largest phase omega * t_max.
    Convergence is verified by re-evaluating a time subsample with doubled
    node counts; failure raises NumericalError with the observed discrepancy.
    """
    if not temperature > 0.0:
        raise DomainError("temperature must be > 0 K")
    t = np.asarray(t_grid, dtype=float)
    gamma = sd.cutoff_cm1
    if omega_max is None:
        omega_max = 600.0 * gamma
    t_max = float(np.max(np.abs(t))) if t.size else 0.0
    kt = KB_CM1_PER_K * temperature

    edges = [0.0]
    for factor in (1.0, 4.0, 16.0, 64.0, 256.0):
        if factor * gamma < omega_max:
            edges.append(factor * gamma)
    edges.append(omega_max)

    total_nodes = sum(max(48, int(0.8 * (hi - lo) * t_max) + 16)
                      for lo, hi in zip(edges[:-1], edges[1:]))
    if total_nodes > 400_000:
        raise NumericalError(
            f"lineshape quadrature would need {total_nodes} nodes for "
            f"t_max = {t_max} and omega_max = {omega_max}; shorten the grid "
            f"or lower omega_max"
        )

    def evaluate(times: np.ndarray, refine: int) -> np.ndarray:
        total = np.zeros(times.size, dtype=complex)
        for lo, hi in zip(edges[:-1], edges[1:]):
            n_nodes = refine * max(48, int(0.8 * (hi - lo) * t_max) + 16)
            w, wt = _gauss_legendre(lo, hi, n_nodes)
            rho = sd.density(w)
            thermal = 1.0 / np.tanh(w / (2.0 * kt))
            phase = np.outer(times, w)
            total += (rho * thermal * wt) @ (1.0 - np.cos(phase)).T \
                + 1j * ((rho * wt) @ np.sin(phase).T)
        return total

    g = evaluate(t, 1)
    if t.size:
        stride = max(1, t.size // 8)
        ref = evaluate(t[::stride], 2)
        err = float(np.max(np.abs(g[::stride] - ref)))
        scale = max(1.0, float(np.max(np.abs(g))))
        if err > check_tol * scale:
            raise NumericalError(
                f"lineshape quadrature not converged: delta {err:.3e} over "
                f"panels {edges}"
            )
    return g


@dataclass(frozen=True)
class CorrelationTrace:
    """Dipole autocorrelation samples on a uniform time grid (cm units)."""

    times: np.ndarray
    values: np.ndarray
    initial_state: str

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if t.ndim != 1 or t.shape != v.shape:
            raise ValidationError("times and values must be matching 1-D arrays")
        dt = np.diff(t)
        if t.size < 8 or not np.allclose(dt, dt[0], rtol=1e-9, atol=0.0):
            raise ValidationError("time grid must be uniform with >= 8 samples")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])


def dipole_correlation(params: DimerParams, initial: str, sd: SpectralDensity,
                       temperature: float, t_grid: np.ndarray) -> CorrelationTrace:
    """C(t) = <mu(t) mu(0)> for a dimer prepared in exciton state e0 or e1.

    Every dipole-allowed transition from the probed state carries a prefactor
    (cos theta +/- sin theta)^2 / 4, an electronic phase at the transition
    energy, and a common dephasing factor exp(-i lambda t - g(t)) (global
    phonon modes, identical coupling for each transition).  The probed states
    have exactly zero dipole expectation, which the spectral sum rules assume;
    that is asserted here rather than taken on faith.
    """
    if initial not in ("e0", "e1"):
        raise CapabilityError(
            f"initial state {initial!r} unsupported; closed forms exist for e0 and e1"
        )
    theta = mixing_angle(params)
    e1, e2 = exciton_energies(params)
    e3 = params.omega_a + params.omega_b

    # The sum rules assume <psi|mu|psi> = 0; assert it on the actual 4-dim
    # state rather than take it on faith (mu = sigma_A^x + sigma_B^x).
    if initial == "e0":
        psi = np.array([1.0, 0.0, 0.0, 0.0])
    else:
        psi = np.array([0.0, math.sin(theta), math.cos(theta), 0.0])
    mu4 = np.zeros((4, 4))
    mu4[0, 1] = mu4[0, 2] = mu4[3, 1] = mu4[3, 2] = 1.0
    mu4 += mu4.T
    if abs(psi @ mu4 @ psi) > 1e-12:
        raise ValidationError("probed state has a nonzero dipole expectation")

    alpha_sq = (math.cos(theta) + math.sin(theta)) ** 2 / 4.0
    beta_sq = (math.cos(theta) - math.sin(theta)) ** 2 / 4.0

    t = np.asarray(t_grid, dtype=float)
    g = lineshape_g(sd, temperature, t)
    dephase = np.exp(-1j * sd.reorganization_cm1 * t - g)

    if initial == "e0":
        # absorption to each exciton: phases exp(i (e0 - e_n) t), e0 = 0
        values = (alpha_sq * np.exp(-1j * e1 * t) + beta_sq * np.exp(-1j * e2 * t)) * dephase
    else:
        # stimulated emission (e1 -> e0) and excited-state absorption (e1 -> e3)
        values = alpha_sq * (np.exp(1j * e1 * t) + np.exp(-1j * (e3 - e1) * t)) * dephase
    return CorrelationTrace(times=t, values=values, initial_state=initial)


@dataclass(frozen=True)
class SpectrumTrace:
    """Two-sided spectrum samples with band labels and transform metadata."""

    omega: np.ndarray
    intensity: np.ndarray
    bands: Tuple[str, ...]
    dt: float
    t_window: float
    n_samples: int

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=float)
        i = np.asarray(self.intensity, dtype=float)
        if w.shape != i.shape or w.ndim != 1:
            raise ValidationError("omega and intensity must be matching 1-D arrays")
        dw = np.diff(w)
        if not np.allclose(dw, dw[0], rtol=1e-9, atol=0.0):
            raise ValidationError("frequency grid must be uniform")
        if len(self.bands) != w.size:
            raise ValidationError("need one band label per sample")
        object.__setattr__(self, "omega", w)
        object.__setattr__(self, "intensity", i)

    @property
    def domega(self) -> float:
        return float(self.omega[1] - self.omega[0])


#: |C| must have decayed below this fraction of |C(0)| at the window end.
DECAY_FRACTION = 1e-6


def _end_corrected_transform(values: np.ndarray, dt: float) -> Tuple[np.ndarray, np.ndarray]:
    """I(omega_k) = 2 Re[dt (sum_j v_j e^{i w_k t_j} - v_0/2 - v_{n-1} e^{i w_k T}/2)].

    Returns (omega ascending, intensity); the rectangle sum of intensity times
    d omega equals 2 pi Re v_0 exactly by DFT orthogonality.
    """
    n = values.size
    omega = 2.0 * np.pi * np.fft.fftfreq(n, d=dt)
    spectrum_sum = n * np.fft.ifft(values)
    t_end = (n - 1) * dt
    corrected = spectrum_sum - 0.5 * values[0] - 0.5 * values[-1] * np.exp(1j * omega * t_end)
    intensity = 2.0 * dt * np.real(corrected)
    order = np.argsort(omega)
    return omega[order], intensity[order]


def spectrum(trace: CorrelationTrace) -> SpectrumTrace:
    """Two-sided spectrum of a decayed correlation trace.

    Rejects windows where |C| has not fallen below DECAY_FRACTION * |C(0)| by
    the end of the grid.  Bands are labeled by frequency sign: negative
    frequencies are emission-side (SE), positive absorption-side (ESA).  A
    ground-state-probed trace has only positive bands, which are really
    ground-state absorption; callers should relabel those GSB before export.
    """
    c0 = abs(trace.values[0])
    if c0 == 0.0:
        raise ValidationError("C(0) must be nonzero")
    tail = abs(trace.values[-1])
    if tail > DECAY_FRACTION * c0:
        raise WindowError(
            f"|C| at the window end is {tail / c0:.2e} of |C(0)|; extend the "
            f"time grid beyond {trace.times[-1]} cm until it decays below "
            f"{DECAY_FRACTION:.0e}"
        )
    omega, intensity = _end_corrected_transform(trace.values, trace.dt)
    bands = tuple("SE" if w < 0.0 else "ESA" for w in omega)
    return SpectrumTrace(
        omega=omega,
        intensity=intensity,
        bands=bands,
        dt=trace.dt,
        t_window=float(trace.times[-1]),
        n_samples=trace.values.size,
    )


#: Edge intensity above this fraction of the peak means the window clipped a band.
EDGE_FRACTION = 1e-4


def qfi_from_spectrum(trace: SpectrumTrace) -> float:
    """Spectrum-integral QFI (2/pi) integral I(omega) d omega on the trace grid."""
    peak = float(np.max(np.abs(trace.intensity)))
    if peak == 0.0:
        raise IntegrationError("spectrum is identically zero")
    edge = max(abs(trace.intensity[0]), abs(trace.intensity[-1]))
    if edge > EDGE_FRACTION * peak:
        raise IntegrationError(
            f"band truncation: edge intensity is {edge / peak:.2e} of the peak"
        )
    return float((2.0 / np.pi) * trace.domega * trace.intensity.sum())


def qfi_from_symmetric_correlation(trace: CorrelationTrace) -> float:
    """Symmetric-correlation QFI (4/pi) integral_0^inf S(omega) d omega.

    S(omega) is the transform of the symmetrized correlation, i.e. of Re C(t),
    and is even in omega, so the half-line trapezoid (half weight at 0 and at
    the Nyquist bin) equals half the rectangle sum over all bins.
    """
    c0 = abs(trace.values[0])
    tail = abs(trace.values[-1])
    if tail > DECAY_FRACTION * c0:
        raise WindowError("correlation has not decayed; extend the time grid")
    _, s = _end_corrected_transform(np.real(trace.values).astype(complex), trace.dt)
    domega = 2.0 * np.pi / (trace.dt * trace.values.size)
    return float((4.0 / np.pi) * domega * 0.5 * s.sum())


def default_time_grid(params: DimerParams, sd: SpectralDensity,
                      temperature: float) -> np.ndarray:
    """Uniform grid resolving the band structure and outlasting dephasing.

    The omega -> 0 limit of the thermal integrand fixes the long-time
    dephasing rate at 2 lambda k_B T / gamma for any temperature; the window
    covers log(1/DECAY_FRACTION) of that decay with margin, and the sampling
    rate keeps the quasi-Lorentzian band tails (HWHM ~ rate) below the edge
    check at the Nyquist folding point.
    """
    kt = KB_CM1_PER_K * temperature
    rate = 2.0 * sd.reorganization_cm1 * kt / sd.cutoff_cm1
    # Re g(t) ~ rate * (t - (1 - e^{-gamma t})/gamma): decay lags by ~1/gamma.
    window = 1.3 * (math.log(1.0 / DECAY_FRACTION) / rate + 1.5 / sd.cutoff_cm1)
    band_top = abs(params.omega_a) + abs(params.omega_b) + sd.reorganization_cm1
    span = band_top + max(150.0 * rate, 30.0 * sd.cutoff_cm1)
    dt = np.pi / span
    n = int(2 ** math.ceil(math.log2(window / dt + 1)))
    if n > 2 ** 22:
        raise WindowError(
            f"default grid would need {n} samples (dephasing rate {rate:.3g} "
            f"cm^-1 is too slow for the band span {span:.3g}); supply a grid"
        )
    return dt * np.arange(n)


# ---------------------------------------------------------------------------
# Extinction-spectrum ingestion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtinctionTrace:
    """Measured molar extinction with band labels.

    omega_cm1: transition wavenumbers; eps: molar extinction in
    L mol^-1 cm^-1; bands: one of SE / ESA / GSB per sample; mu_site_ccm: the
    single-site transition dipole magnitude in C cm; n_sites: sites per
    aggregate.  Only SE and ESA samples enter the QFI integral.
    """

    omega_cm1: np.ndarray
    eps: np.ndarray
    bands: Tuple[str, ...]
    mu_site_ccm: float
    n_sites: int

    def __post_init__(self):
        w = np.asarray(self.omega_cm1, dtype=float)
        e = np.asarray(self.eps, dtype=float)
        if w.shape != e.shape or w.ndim != 1 or w.size < 2:
            raise ValidationError("omega and eps must be matching 1-D arrays")
        if np.any(np.diff(w) <= 0.0):
            raise ValidationError("omega grid must be strictly increasing")
        if np.any(w <= 0.0):
            raise ValidationError("omega values must be positive")
        if np.any(e < 0.0):
            raise ValidationError("extinction must be nonnegative")
        if len(self.bands) != w.size:
            raise ValidationError("need one band label per sample")
        unknown = set(self.bands) - set(BAND_LABELS)
        if unknown:
            raise ValidationError(f"unknown band labels {sorted(unknown)}")
        object.__setattr__(self, "omega_cm1", w)
        object.__setattr__(self, "eps", e)
        object.__setattr__(self, "bands", tuple(self.bands))


def extinction_prefactor(mu_site_ccm: float) -> float:
    """3 ln(10) 10^3 eps_0 c hbar / (pi N_A mu^2), the Beer-Lambert-to-QFI constant.

    Unit bookkeeping, in one place: eps_0 in F/m, c in cm/s, hbar in J s, N_A
    in mol^-1 and mu in C cm, with the extinction integral taken as
    integral eps(omega)/omega d omega directly on the cm^-1 grid (the ratio
    makes the rad/s frequency conversion cancel) in L mol^-1 cm^-1.  This
    mixed "CGS-flavored" convention follows the source expression verbatim and
    is locked by the synthetic round-trip test rather than by an external
    calibration.
    """
    if not mu_site_ccm > 0.0:
        raise DomainError("single-site dipole must be positive")
    return (3.0 * LN10 * 1.0e3 * EPSILON_0_F_PER_M * C_CM_PER_S * HBAR_J_S
            / (np.pi * N_AVOGADRO * mu_site_ccm ** 2))


def ingest_extinction(trace: ExtinctionTrace) -> float:
    """QFI per site from an extinction spectrum, over SE + ESA bands only."""
    selected = np.array([b in ("SE", "ESA") for b in trace.bands])
    if not selected.any():
        raise ValidationError("no SE or ESA bands to integrate")
    prefactor = extinction_prefactor(trace.mu_site_ccm)
    integrand = trace.eps / trace.omega_cm1

    total = 0.0
    # integrate each contiguous SE/ESA run with the trapezoid rule
    edges = np.flatnonzero(np.diff(selected.astype(int)) != 0) + 1
    segments = np.split(np.arange(trace.omega_cm1.size), edges)
    for seg in segments:
        if seg.size >= 2 and selected[seg[0]]:
            total += float(np.trapezoid(integrand[seg], trace.omega_cm1[seg]))
    return prefactor * total


def synthesize_extinction(fq_per_site: float, mu_site_ccm: float, n_sites: int,
                          center_cm1: float = 18000.0, width_cm1: float = 400.0,
                          n_points: int = 2001, band: str = "SE") -> ExtinctionTrace:
    """Synthetic single-band extinction trace whose ingested QFI/site is ``fq_per_site``.

    Inverts the ingestion integral for a Gaussian band, the round-trip oracle
    for the unit bookkeeping above.
    """
    if band not in ("SE", "ESA"):
        raise ValidationError("synthetic band must be SE or ESA")
    w = np.linspace(center_cm1 - 6.0 * width_cm1, center_cm1 + 6.0 * width_cm1, n_points)
    shape = np.exp(-0.5 * ((w - center_cm1) / width_cm1) ** 2)
    raw = np.trapezoid(shape / w, w)
    scale = fq_per_site / (extinction_prefactor(mu_site_ccm) * raw)
    return ExtinctionTrace(
        omega_cm1=w,
        eps=scale * shape,
        bands=tuple(band for _ in w),
        mu_site_ccm=mu_site_ccm,
        n_sites=n_sites,
    )
