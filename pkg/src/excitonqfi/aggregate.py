"""Site-basis Hamiltonians for exciton aggregates and their first-excitation eigensystems.

Conventions
-----------
- All energies and couplings are in cm^-1; hbar = 1 (see constants).
- A positive nearest-neighbor coupling scalar J denotes a J-aggregate; the
  Hamiltonian off-diagonal stores -J, and the dipole law stores
  J_mn = -J' / |x_m - x_n|^3.  An explicit coupling matrix is stored verbatim.
- Eigenvectors ("exciton states") are columns sorted by ascending energy with a
  deterministic phase: the largest-magnitude component of each column is real
  and positive.
- The first-excitation subspace is spanned by |n> = "site n excited"; the
  collective transition dipole of eigenstate k is <0|mu|k> = sum_n c_n^(k) in
  units of the single-site dipole.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .constants import KB_CM1_PER_K
from .errors import DomainError, RejectedDrawError, ValidationError

TOPOLOGIES = ("dimer", "chain", "ring", "disordered-chain")

#: Minimum inter-site gap for a positional disorder draw, in units of the
#: lattice spacing.  Draws below this (or reordering the chain) are rejected.
MIN_GAP_FRACTION = 0.1


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class AggregateSpec:
    """Declarative description of a model aggregate.

    Exactly one coupling rule must be given: an explicit symmetric matrix with
    zero diagonal (``coupling_matrix``), a nearest-neighbor scalar (``j_cm1``),
    or dipole-law parameters (``jprime_cm1`` with ``lattice_a``).
    """

    topology: str
    n_sites: int
    site_energies: np.ndarray
    j_cm1: Optional[float] = None
    jprime_cm1: Optional[float] = None
    lattice_a: Optional[float] = None
    coupling_matrix: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.topology not in TOPOLOGIES:
            raise ValidationError(f"unknown topology {self.topology!r}")
        if self.n_sites < 2:
            raise ValidationError("an aggregate needs at least 2 sites")
        energies = np.asarray(self.site_energies, dtype=float)
        if energies.ndim == 0:
            energies = np.full(self.n_sites, float(energies))
        if energies.shape != (self.n_sites,):
            raise ValidationError(
                f"site_energies has length {energies.shape}, expected ({self.n_sites},)"
            )
        object.__setattr__(self, "site_energies", _readonly(energies))

        rules = [self.coupling_matrix is not None, self.j_cm1 is not None,
                 self.jprime_cm1 is not None]
        if sum(rules) != 1:
            raise ValidationError(
                "exactly one of coupling_matrix, j_cm1, jprime_cm1 must be set"
            )
        if self.coupling_matrix is not None:
            m = np.asarray(self.coupling_matrix, dtype=float)
            if m.shape != (self.n_sites, self.n_sites):
                raise ValidationError("coupling matrix shape mismatch")
            if not np.allclose(m, m.T, rtol=0.0, atol=1e-12):
                raise ValidationError("explicit coupling matrix must be symmetric")
            if np.any(np.diag(m) != 0.0):
                raise ValidationError("explicit coupling matrix must have zero diagonal")
            object.__setattr__(self, "coupling_matrix", _readonly(m))
        if self.jprime_cm1 is not None:
            if self.topology != "disordered-chain":
                raise ValidationError("dipole-law coupling is only used by disordered-chain")
            if self.lattice_a is None or self.lattice_a <= 0.0:
                raise ValidationError("dipole-law coupling needs lattice_a > 0")
        if self.topology == "disordered-chain" and self.jprime_cm1 is None:
            raise ValidationError("disordered-chain requires jprime_cm1 + lattice_a")
        if self.topology == "dimer" and self.n_sites != 2:
            raise ValidationError("dimer topology requires n_sites == 2")

    # -- convenience constructors -------------------------------------------------

    @classmethod
    def dimer(cls, omega_a: float, omega_b: float, j: float) -> "AggregateSpec":
        return cls("dimer", 2, np.array([omega_a, omega_b]), j_cm1=j)

    @classmethod
    def chain(cls, n_sites: int, omega: float, j: float) -> "AggregateSpec":
        return cls("chain", n_sites, np.full(n_sites, float(omega)), j_cm1=j)

    @classmethod
    def ring(cls, n_sites: int, omega: float, j: float) -> "AggregateSpec":
        return cls("ring", n_sites, np.full(n_sites, float(omega)), j_cm1=j)

    @classmethod
    def disordered_chain(cls, n_sites: int, omega: float, jprime: float,
                         lattice_a: float = 1.0) -> "AggregateSpec":
        return cls("disordered-chain", n_sites, np.full(n_sites, float(omega)),
                   jprime_cm1=jprime, lattice_a=lattice_a)

    @property
    def nn_coupling_cm1(self) -> float:
        """Nearest-neighbor coupling magnitude scale J (= J'/a^3 for dipole law)."""
        if self.j_cm1 is not None:
            return float(self.j_cm1)
        if self.jprime_cm1 is not None:
            return float(self.jprime_cm1) / float(self.lattice_a) ** 3
        raise ValidationError("explicit coupling matrix has no scalar J")


@dataclass(frozen=True)
class DisorderSpec:
    """Gaussian static-disorder model: site energies E + dE with dE ~ N(0, sigma_dE^2),
    positions x_m = m a + dx with dx ~ N(0, sigma_dx^2), uncorrelated across sites."""

    sigma_site_energy: float = 0.0
    sigma_position: float = 0.0
    seed: int = 0
    n_realizations: int = 1

    def __post_init__(self):
        if self.sigma_site_energy < 0.0 or self.sigma_position < 0.0:
            raise ValidationError("disorder widths must be >= 0")
        if self.n_realizations < 1:
            raise ValidationError("n_realizations must be >= 1")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValidationError("seed must fit in 64 bits")


@dataclass(frozen=True)
class DisorderDraw:
    """One concrete disorder realization: per-site energy shifts (cm^-1) and
    absolute site positions (lattice units), plus how many positional draws
    were rejected before this one was accepted."""

    site_energy_shift: np.ndarray
    positions: np.ndarray
    resamples: int = 0

    def __post_init__(self):
        object.__setattr__(self, "site_energy_shift", _readonly(self.site_energy_shift))
        object.__setattr__(self, "positions", _readonly(self.positions))


def build_hamiltonian(spec: AggregateSpec,
                      realization: Optional[DisorderDraw] = None) -> np.ndarray:
    """First-excitation Hamiltonian (n_sites x n_sites, cm^-1) for ``spec``.

    ``realization`` must be supplied iff the topology is disordered-chain.
    Raises RejectedDrawError when a positional draw leaves two sites closer
    than MIN_GAP_FRACTION * a (the caller resamples).
    """
    n = spec.n_sites
    needs_draw = spec.topology == "disordered-chain"
    if needs_draw and realization is None:
        raise ValidationError("disordered-chain needs a DisorderDraw")
    if not needs_draw and realization is not None:
        raise ValidationError(f"{spec.topology} does not take a DisorderDraw")

    h = np.diag(spec.site_energies.astype(float))
    if needs_draw:
        shift = realization.site_energy_shift
        pos = realization.positions
        if shift.shape != (n,) or pos.shape != (n,):
            raise ValidationError("realization arrays must have length n_sites")
        h[np.diag_indices(n)] += shift
        dx = pos[:, None] - pos[None, :]
        np.fill_diagonal(dx, 1.0)  # dummy, diagonal untouched below
        gaps = np.abs(dx)
        if np.min(gaps[~np.eye(n, dtype=bool)]) <= MIN_GAP_FRACTION * spec.lattice_a:
            raise RejectedDrawError("sites closer than the minimum allowed gap")
        coupling = -spec.jprime_cm1 / gaps ** 3
        coupling[np.diag_indices(n)] = 0.0
        h += coupling
        return h

    if spec.coupling_matrix is not None:
        h += spec.coupling_matrix
        return h

    j = float(spec.j_cm1)
    for m in range(n - 1):
        h[m, m + 1] = h[m + 1, m] = -j
    if spec.topology == "ring" and n > 2:
        h[0, n - 1] = h[n - 1, 0] = -j
    return h


@dataclass(frozen=True)
class ExcitonBasis:
    """Eigensystem of a first-excitation Hamiltonian.

    energies ascend; ``states`` columns are the eigenvectors; transition_dipoles
    are the per-eigenstate collective dipoles <0|mu|k> = sum_n states[n, k].
    """

    energies: np.ndarray
    states: np.ndarray
    transition_dipoles: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "energies", _readonly(np.asarray(self.energies, float)))
        object.__setattr__(self, "states", _readonly(np.asarray(self.states)))
        object.__setattr__(self, "transition_dipoles", _readonly(self.states.sum(axis=0)))

    @property
    def n_sites(self) -> int:
        return self.states.shape[0]

    def state(self, k: int) -> np.ndarray:
        """k-th eigenvector (0-based, ascending energy order)."""
        return self.states[:, k]


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude component is real positive."""
    out = np.array(vecs)
    for k in range(out.shape[1]):
        col = out[:, k]
        idx = int(np.argmax(np.abs(col)))
        pivot = col[idx]
        if np.iscomplexobj(out):
            out[:, k] = col * (np.conj(pivot) / abs(pivot))
        elif pivot < 0.0:
            out[:, k] = -col
    return out


def diagonalize(h: np.ndarray, hermiticity_tol: float = 1e-9) -> ExcitonBasis:
    """Dense Hermitian eigensolve of a first-excitation Hamiltonian.

    Rejects input whose anti-Hermitian part exceeds ``hermiticity_tol`` relative
    to the matrix scale.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValidationError("Hamiltonian must be a square matrix")
    scale = max(1.0, float(np.max(np.abs(h))))
    if np.max(np.abs(h - h.conj().T)) > hermiticity_tol * scale:
        raise ValidationError("Hamiltonian is not Hermitian within tolerance")
    h = 0.5 * (h + h.conj().T)
    energies, vecs = np.linalg.eigh(h)
    if not np.iscomplexobj(h):
        vecs = vecs.real
    return ExcitonBasis(energies=energies, states=_fix_phases(vecs))


def analytic_chain_state(n_sites: int, k: int) -> np.ndarray:
    """Open-chain exciton state k (1-based): sqrt(2/(N+1)) sin(pi k n/(N+1))."""
    if not 1 <= k <= n_sites:
        raise DomainError(f"chain state index k={k} outside 1..{n_sites}")
    n = np.arange(1, n_sites + 1)
    return np.sqrt(2.0 / (n_sites + 1)) * np.sin(np.pi * k * n / (n_sites + 1))


def analytic_chain_energy(n_sites: int, k: int, j: float = 1.0, omega: float = 0.0) -> float:
    """Open-chain exciton energy: omega - 2 J cos(pi k/(N+1))."""
    if not 1 <= k <= n_sites:
        raise DomainError(f"chain state index k={k} outside 1..{n_sites}")
    return omega - 2.0 * j * math.cos(math.pi * k / (n_sites + 1))


def analytic_ring_state(n_sites: int, k: int) -> np.ndarray:
    """Ring exciton state k (0-based): exp(2 pi i k n/N)/sqrt(N)."""
    if not 0 <= k <= n_sites - 1:
        raise DomainError(f"ring state index k={k} outside 0..{n_sites - 1}")
    n = np.arange(1, n_sites + 1)
    return np.exp(2j * np.pi * k * n / n_sites) / np.sqrt(n_sites)


def analytic_ring_energy(n_sites: int, k: int, j: float = 1.0, omega: float = 0.0) -> float:
    """Nearest-neighbor ring exciton energy: omega - 2 J cos(2 pi k/N)."""
    if not 0 <= k <= n_sites - 1:
        raise DomainError(f"ring state index k={k} outside 0..{n_sites - 1}")
    return omega - 2.0 * j * math.cos(2.0 * math.pi * k / n_sites)


def chain_transition_dipole_sq(n_sites: int, k: int) -> float:
    """Squared collective transition dipole of chain state k, in units of mu^2.

    ((1 - (-1)^k)/(N+1)) cot^2(pi k / (2(N+1))); identically zero for even k.
    """
    if not 1 <= k <= n_sites:
        raise DomainError(f"chain state index k={k} outside 1..{n_sites}")
    if k % 2 == 0:
        return 0.0
    x = math.pi * k / (2.0 * (n_sites + 1))
    return (2.0 / (n_sites + 1)) * (math.cos(x) / math.sin(x)) ** 2


def participation_ratio(amplitudes: Sequence[complex]) -> float:
    """Delocalization measure (sum |c|^2)^2 / sum |c|^4, in [1, N]."""
    c2 = np.abs(np.asarray(amplitudes)) ** 2
    total = c2.sum()
    if total <= 0.0:
        raise DomainError("participation ratio of the zero vector is undefined")
    return float(total ** 2 / np.sum(c2 ** 2))


@dataclass(frozen=True)
class ThermalState:
    """Boltzmann populations over first-excitation eigenstates at temperature T (K)."""

    temperature: float
    populations: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.populations, dtype=float)
        if np.any(p < 0.0):
            raise ValidationError("populations must be nonnegative")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValidationError("populations must sum to 1 within 1e-12")
        object.__setattr__(self, "populations", _readonly(p))


def thermal_state(basis: ExcitonBasis, temperature: float) -> ThermalState:
    """Thermal state in the first-excitation subspace at temperature T > 0 K.

    Energies are shifted by their minimum before exponentiation, so large beta
    never overflows.  T = inf gives the uniform mixture.  For the T -> 0 limit
    use zero_temperature_state.
    """
    if not temperature > 0.0:
        raise DomainError("temperature must be > 0 K (see zero_temperature_state)")
    e = basis.energies
    if math.isinf(temperature):
        weights = np.ones_like(e)
    else:
        beta = 1.0 / (KB_CM1_PER_K * temperature)
        weights = np.exp(-beta * (e - e.min()))
    return ThermalState(temperature=temperature, populations=weights / weights.sum())


def zero_temperature_state(basis: ExcitonBasis, degeneracy_tol: float = 1e-9) -> ThermalState:
    """T -> 0 limit: the subspace ground state, with degenerate minima equi-weighted."""
    e = basis.energies
    minima = np.abs(e - e.min()) <= degeneracy_tol
    p = minima / minima.sum()
    return ThermalState(temperature=0.0, populations=p)


# ---------------------------------------------------------------------------
# TOML config schema
# ---------------------------------------------------------------------------
#
# Flat keys: topology, n_sites, site_energy_cm1 (scalar or list), j_cm1,
# jprime_cm1, lattice_a, sigma_de_cm1, sigma_dx_a, seed, realizations.
# Sweep grids, when present, live in a [sweep] table (see disorder module).


def specs_to_toml(spec: AggregateSpec, disorder: Optional[DisorderSpec] = None) -> str:
    """Serialize an aggregate (and optional disorder model) to the documented schema."""
    if spec.coupling_matrix is not None:
        raise ValidationError("explicit coupling matrices have no TOML form")
    buf = io.StringIO()

    def emit(key, value):
        if isinstance(value, bool) or value is None:
            raise ValidationError(f"cannot serialize {key}={value!r}")
        if isinstance(value, str):
            buf.write(f'{key} = "{value}"\n')
        elif isinstance(value, (list, tuple, np.ndarray)):
            body = ", ".join(repr(float(v)) for v in value)
            buf.write(f"{key} = [{body}]\n")
        elif isinstance(value, (int, np.integer)):
            buf.write(f"{key} = {int(value)}\n")
        else:
            buf.write(f"{key} = {float(value)!r}\n")

    emit("topology", spec.topology)
    emit("n_sites", spec.n_sites)
    energies = spec.site_energies
    if np.all(energies == energies[0]):
        emit("site_energy_cm1", float(energies[0]))
    else:
        emit("site_energy_cm1", energies)
    if spec.j_cm1 is not None:
        emit("j_cm1", spec.j_cm1)
    if spec.jprime_cm1 is not None:
        emit("jprime_cm1", spec.jprime_cm1)
        emit("lattice_a", spec.lattice_a)
    if disorder is not None:
        emit("sigma_de_cm1", disorder.sigma_site_energy)
        emit("sigma_dx_a", disorder.sigma_position)
        emit("seed", disorder.seed)
        emit("realizations", disorder.n_realizations)
    return buf.getvalue()


def specs_from_toml(text: str):
    """Parse the documented schema; returns (AggregateSpec, DisorderSpec | None).

    Unknown top-level keys and tables are ignored so callers can extend the file.
    """
    data = tomllib.loads(text)
    return specs_from_mapping(data)


def specs_from_mapping(data: dict):
    try:
        topology = data["topology"]
        n_sites = int(data["n_sites"])
        energy = data["site_energy_cm1"]
    except KeyError as exc:
        raise ValidationError(f"config is missing required key {exc.args[0]!r}") from None
    energies = np.full(n_sites, float(energy)) if np.isscalar(energy) else np.asarray(energy, float)
    spec = AggregateSpec(
        topology=topology,
        n_sites=n_sites,
        site_energies=energies,
        j_cm1=data.get("j_cm1"),
        jprime_cm1=data.get("jprime_cm1"),
        lattice_a=data.get("lattice_a"),
    )
    disorder = None
    if any(k in data for k in ("sigma_de_cm1", "sigma_dx_a", "realizations")):
        disorder = DisorderSpec(
            sigma_site_energy=float(data.get("sigma_de_cm1", 0.0)),
            sigma_position=float(data.get("sigma_dx_a", 0.0)),
            seed=int(data.get("seed", 0)),
            n_realizations=int(data.get("realizations", 1)),
        )
    return spec, disorder
