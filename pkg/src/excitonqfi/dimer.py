"""Closed-form entanglement measures for the two-site aggregate.

The first-excitation block is [[omega_a, -J], [-J, omega_b]]; the mixing angle
theta = (1/2) atan2(2J, omega_b - omega_a) puts the lower exciton at
|e1> = cos(theta)|10> + sin(theta)|01>, so theta = pi/4 for a resonant
J-aggregate and 0 when J = 0 with omega_b > omega_a.  All temperature
dependence enters through tanh(beta * R / 2) with R = sqrt(4J^2 + delta^2) the
exciton splitting; this equals tanh(|J / sin 2theta| / k_B T) wherever
sin 2theta != 0, and the products below have the correct J -> 0 limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .constants import KB_CM1_PER_K
from .errors import DomainError, NumericalError

PARALLEL = "parallel"
ANTIPARALLEL = "antiparallel"


@dataclass(frozen=True)
class DimerParams:
    """Dimer site energies and coupling (cm^-1), optional temperature (K)."""

    omega_a: float
    omega_b: float
    j: float
    temperature: Optional[float] = None

    @property
    def delta(self) -> float:
        return self.omega_a - self.omega_b

    @property
    def splitting(self) -> float:
        """Exciton splitting R = e2 - e1 = sqrt(4J^2 + delta^2)."""
        return math.hypot(2.0 * self.j, self.delta)


def mixing_angle(params: DimerParams) -> float:
    """theta = (1/2) atan2(2J, omega_b - omega_a), in (-pi/2, pi/2]."""
    if params.j == 0.0 and params.delta == 0.0:
        raise DomainError("mixing angle is undefined for a degenerate uncoupled dimer")
    return 0.5 * math.atan2(2.0 * params.j, params.omega_b - params.omega_a)


def exciton_energies(params: DimerParams) -> Tuple[float, float]:
    """(e1, e2) = mean -/+ R/2, ascending."""
    mean = 0.5 * (params.omega_a + params.omega_b)
    half = 0.5 * params.splitting
    return mean - half, mean + half


def exciton_state(params: DimerParams, which: int) -> np.ndarray:
    """Site amplitudes of exciton ``which`` (1 or 2) over (|10>, |01>)."""
    theta = mixing_angle(params)
    if which == 1:
        return np.array([math.cos(theta), math.sin(theta)])
    if which == 2:
        return np.array([-math.sin(theta), math.cos(theta)])
    raise DomainError("which must be 1 or 2")


def _sin2theta(params: DimerParams) -> float:
    r = params.splitting
    if r == 0.0:
        raise DomainError("degenerate uncoupled dimer")
    return 2.0 * params.j / r


def pure_state_qfi_dipole(params: DimerParams, which: int) -> float:
    """Dipole-field QFI of exciton 1 or 2: 2 +/- 2 sin 2theta."""
    s = _sin2theta(params)
    if which == 1:
        return 2.0 + 2.0 * s
    if which == 2:
        return 2.0 - 2.0 * s
    raise DomainError("which must be 1 or 2")


@dataclass(frozen=True)
class PureMaxQfi:
    """Generator-optimized pure-state QFI, same for both excitons, with the
    maximizing in-plane Bloch alignment of each."""

    f_q: float
    alignment_e1: str
    alignment_e2: str


def pure_state_qfi_max(params: DimerParams) -> PureMaxQfi:
    """Maximum QFI over local generators: 2 + 2 |sin 2theta|.

    For J > 0 the optimum has the two in-plane Bloch components parallel for
    exciton 1 and antiparallel for exciton 2; the rule flips for J < 0 (J = 0
    is degenerate and reported as parallel).
    """
    s = _sin2theta(params)
    if params.j >= 0.0:
        align = (PARALLEL, ANTIPARALLEL)
    else:
        align = (ANTIPARALLEL, PARALLEL)
    return PureMaxQfi(f_q=2.0 + 2.0 * abs(s), alignment_e1=align[0], alignment_e2=align[1])


def _thermal_factor(params: DimerParams) -> float:
    """tanh(beta R / 2) = p1 - p2; zero at infinite temperature."""
    t = params.temperature
    if t is None or not t > 0.0:
        raise DomainError("thermal quantities need temperature > 0 K")
    if math.isinf(t):
        return 0.0
    return math.tanh(params.splitting / (2.0 * KB_CM1_PER_K * t))


def thermal_qfi_dipole(params: DimerParams) -> float:
    """Dipole-field QFI of the thermal first-excitation dimer: 2 + 2 tanh(beta R/2) sin 2theta."""
    return 2.0 + 2.0 * _thermal_factor(params) * _sin2theta(params)


def thermal_qfi_max(params: DimerParams) -> float:
    """Generator-optimized thermal QFI: 2 + 2 tanh(beta R/2) |sin 2theta|."""
    return 2.0 + 2.0 * _thermal_factor(params) * abs(_sin2theta(params))


def purity_pure(theta: float) -> float:
    """Single-site purity of either exciton state: cos^4 + sin^4 = 1 - sin^2(2 theta)/2."""
    return math.cos(theta) ** 4 + math.sin(theta) ** 4


def purity_thermal(params: DimerParams) -> Tuple[float, float]:
    """(Tr rho_AB^2, Tr rho_A^2) for the thermal first-excitation dimer.

    Evaluated with u = exp(-beta R) in [0, 1], so arbitrarily low temperatures
    are overflow-safe.
    """
    t = params.temperature
    if t is None or not t > 0.0:
        raise DomainError("thermal quantities need temperature > 0 K")
    u = 0.0 if math.isinf(t) else math.exp(-params.splitting / (KB_CM1_PER_K * t))
    z = 1.0 + u
    theta = mixing_angle(params)
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    purity_ab = (1.0 + u * u) / (z * z)
    purity_a = ((c2 + u * s2) ** 2 + (s2 + u * c2) ** 2) / (z * z)
    return purity_ab, purity_a


def thermal_two_qubit_state(params: DimerParams) -> np.ndarray:
    """4x4 density matrix of the thermal first-excitation dimer.

    Basis ordering is the Kronecker convention (|00>, |01>, |10>, |11>) with
    site A the first factor, so |10> = index 2 and |01> = index 1.
    """
    factor = _thermal_factor(params)
    p1 = 0.5 * (1.0 + factor)
    p2 = 0.5 * (1.0 - factor)
    v1 = np.zeros(4)
    v2 = np.zeros(4)
    c1 = exciton_state(params, 1)
    c2 = exciton_state(params, 2)
    v1[2], v1[1] = c1[0], c1[1]
    v2[2], v2[1] = c2[0], c2[1]
    return p1 * np.outer(v1, v1) + p2 * np.outer(v2, v2)


def wootters_concurrence(rho: np.ndarray) -> float:
    """Concurrence of an arbitrary two-qubit density matrix.

    Uses the tau-matrix form of the Wootters construction: with subnormalized
    eigenvectors V = X sqrt(w) of rho, the lambda_i (square roots of the
    eigenvalues of rho rho~) are the singular values of the complex symmetric
    V^T (sigma_y x sigma_y) V, and C = max(0, l1 - l2 - l3 - l4).  The SVD
    route keeps absolute errors at machine scale even for (near-)pure states,
    where eigenvalues of the non-normal product rho rho~ lose half the digits.
    Eigenvalues of rho at rounding-noise level are treated as exact zeros.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DomainError("concurrence is defined for 4x4 two-qubit states")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-10:
        raise DomainError("rho must be Hermitian")
    w, x = np.linalg.eigh(rho)
    if np.min(w) < -1e-10:
        raise DomainError(f"rho has a negative eigenvalue {np.min(w)}")
    w = np.clip(w, 0.0, None)
    w[w < 64.0 * np.finfo(float).eps * np.max(w)] = 0.0
    sigma_y = np.array([[0.0, -1j], [1j, 0.0]])
    flip = np.kron(sigma_y, sigma_y)
    v = x * np.sqrt(w)
    lam = np.linalg.svd(v.T @ flip @ v, compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence_thermal_closed_form(params: DimerParams) -> float:
    """X-state shortcut for the thermal dimer: C = |p1 - p2| |sin 2theta|."""
    return abs(_thermal_factor(params)) * abs(_sin2theta(params))


def concurrence_thermal(params: DimerParams) -> float:
    """Concurrence of the thermal first-excitation dimer.

    Runs the full Wootters procedure and the X-state shortcut and insists they
    agree to 1e-10 before returning the Wootters value.
    """
    full = wootters_concurrence(thermal_two_qubit_state(params))
    shortcut = concurrence_thermal_closed_form(params)
    if abs(full - shortcut) > 1e-10:
        raise NumericalError(
            f"Wootters ({full}) and X-state ({shortcut}) concurrences disagree"
        )
    return full
