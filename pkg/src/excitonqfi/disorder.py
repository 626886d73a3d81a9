"""Monte Carlo disorder averaging of the thermal dipole-field QFI.

Reproducibility scheme
----------------------
Each realization owns a counter-based Philox stream keyed by
(master_seed, realization_index), so results are independent of execution
order and thread count.  Gaussian variates use the inverse-CDF transform
z = ndtri((k + 1/2) / 2^53) on 53-bit uniforms from that stream; per
realization the site-energy draws come first, then position draws (redrawn on
rejection).  Standard-normal draws are scaled by the cell's sigma afterwards,
so sweep cells share common random numbers across disorder strengths; that is
deliberate (it removes Monte Carlo noise from the disorder-trend comparison).

Temperatures are specified as x = J / k_B T with J = J'/a^3 the
nearest-neighbor coupling scale; the kelvin temperature uses |J| so H- and
J-aggregates (negative and positive J') sweep the same physical temperatures.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.special import ndtri

from .aggregate import (
    AggregateSpec,
    DisorderDraw,
    DisorderSpec,
    build_hamiltonian,
    diagonalize,
    thermal_state,
)
from .constants import KB_CM1_PER_K
from .errors import ConfigurationError, ValidationError
from .qfi import classify_depth, qfi_thermal_dipole

MODES = ("diagonal", "off-diagonal")

#: Give up on a realization after this many consecutive rejected position draws.
MAX_CONSECUTIVE_RESAMPLES = 100


def _stream(master_seed: int, index: int) -> np.random.Generator:
    key = np.array([master_seed, index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _standard_normal(rng: np.random.Generator, size: int) -> np.ndarray:
    u = (rng.integers(0, 2 ** 53, size=size).astype(np.float64) + 0.5) / 2 ** 53
    return ndtri(u)


@dataclass(frozen=True)
class RealizationSample:
    """One sampled Hamiltonian plus the draw that produced it."""

    hamiltonian: np.ndarray
    draw: DisorderDraw


def sample_realization(spec: AggregateSpec, disorder: DisorderSpec,
                       master_seed: int, index: int) -> RealizationSample:
    """Deterministic realization ``index`` of the disorder model under ``master_seed``.

    Position draws that reorder the chain or put two sites closer than the
    minimum gap are resampled (counted in the returned draw); more than
    MAX_CONSECUTIVE_RESAMPLES rejections aborts with a configuration error.
    """
    if index >= disorder.n_realizations:
        raise ValidationError("realization index exceeds n_realizations")
    n = spec.n_sites
    rng = _stream(master_seed, index)

    if disorder.sigma_site_energy > 0.0:
        shift = disorder.sigma_site_energy * _standard_normal(rng, n)
    else:
        shift = np.zeros(n)

    from .aggregate import MIN_GAP_FRACTION

    base_positions = spec.lattice_a * np.arange(1, n + 1, dtype=float)
    resamples = 0
    while True:
        if disorder.sigma_position > 0.0:
            offsets = disorder.sigma_position * spec.lattice_a * _standard_normal(rng, n)
        else:
            offsets = np.zeros(n)
        positions = base_positions + offsets
        # Adjacent gaps below the floor cover both near-coincidence and a
        # reordered chain; ordered gaps make all pairwise distances safe.
        if np.any(np.diff(positions) <= MIN_GAP_FRACTION * spec.lattice_a):
            resamples += 1
            if resamples > MAX_CONSECUTIVE_RESAMPLES:
                raise ConfigurationError(
                    f"position disorder sigma={disorder.sigma_position} rejected "
                    f"{resamples} consecutive draws"
                )
            continue
        draw = DisorderDraw(site_energy_shift=shift, positions=positions,
                            resamples=resamples)
        return RealizationSample(hamiltonian=build_hamiltonian(spec, realization=draw),
                                 draw=draw)


@dataclass(frozen=True)
class SweepConfig:
    """Grid specification for a Fig.-5-style sweep.

    ``sigma_values`` are sigma_dE/J in diagonal mode and sigma_dx/a in
    off-diagonal mode; exactly one disorder type varies per sweep, so the
    other sigma in ``disorder`` must be zero.  ``disorder`` supplies the seed
    and realization count; its sigma for the active mode is overridden by the
    grid.
    """

    spec: AggregateSpec
    disorder: DisorderSpec
    mode: str
    sigma_values: Tuple[float, ...]
    j_over_kbt: Tuple[float, ...]

    def __post_init__(self):
        if self.spec.topology != "disordered-chain":
            raise ValidationError("sweeps need a disordered-chain aggregate")
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}")
        if not self.sigma_values or not self.j_over_kbt:
            raise ValidationError("sweep grids must be nonempty")
        if any(s < 0 for s in self.sigma_values):
            raise ValidationError("sigma grid must be nonnegative")
        if any(x <= 0 for x in self.j_over_kbt):
            raise ValidationError("J/k_B T grid must be positive")
        if self.mode == "diagonal" and self.disorder.sigma_position != 0.0:
            raise ValidationError("diagonal sweeps must keep sigma_position = 0")
        if self.mode == "off-diagonal" and self.disorder.sigma_site_energy != 0.0:
            raise ValidationError("off-diagonal sweeps must keep sigma_site_energy = 0")
        object.__setattr__(self, "sigma_values", tuple(float(s) for s in self.sigma_values))
        object.__setattr__(self, "j_over_kbt", tuple(float(x) for x in self.j_over_kbt))

    def digest(self) -> str:
        payload = {
            "topology": self.spec.topology,
            "n_sites": self.spec.n_sites,
            "site_energies": [float(v) for v in self.spec.site_energies],
            "jprime_cm1": self.spec.jprime_cm1,
            "lattice_a": self.spec.lattice_a,
            "mode": self.mode,
            "sigma_values": list(self.sigma_values),
            "j_over_kbt": list(self.j_over_kbt),
            "seed": self.disorder.seed,
            "realizations": self.disorder.n_realizations,
        }
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


@dataclass(frozen=True)
class CellResult:
    mode: str
    sigma: float
    j_over_kbt: float
    n_sites: int
    n_realizations: int
    mean_fq_per_n: float
    stderr: float
    depth: int
    resamples: int
    seed: int


@dataclass(frozen=True)
class SweepResult:
    config_digest: str
    seed: int
    cells: Tuple[CellResult, ...]

    def cell(self, sigma: float, j_over_kbt: float) -> CellResult:
        for c in self.cells:
            if c.sigma == sigma and c.j_over_kbt == j_over_kbt:
                return c
        raise KeyError((sigma, j_over_kbt))


def _disorder_for(config: SweepConfig, sigma: float) -> DisorderSpec:
    j_scale = abs(config.spec.nn_coupling_cm1)
    if config.mode == "diagonal":
        return DisorderSpec(sigma_site_energy=sigma * j_scale, sigma_position=0.0,
                            seed=config.disorder.seed,
                            n_realizations=config.disorder.n_realizations)
    return DisorderSpec(sigma_site_energy=0.0,
                        sigma_position=sigma,
                        seed=config.disorder.seed,
                        n_realizations=config.disorder.n_realizations)


def _realization_fq(spec, disorder, seed, index, temps) -> Tuple[np.ndarray, int]:
    sample = sample_realization(spec, disorder, seed, index)
    basis = diagonalize(sample.hamiltonian)
    fq = np.array([qfi_thermal_dipole(basis, thermal_state(basis, t)) for t in temps])
    return fq, sample.draw.resamples


def _chunk_fq(args) -> Tuple[int, np.ndarray, np.ndarray]:
    spec, disorder, seed, start, stop, temps = args
    fq = np.empty((stop - start, len(temps)))
    resamples = np.empty(stop - start, dtype=int)
    for offset, index in enumerate(range(start, stop)):
        fq[offset], resamples[offset] = _realization_fq(spec, disorder, seed, index, temps)
    return start, fq, resamples


def run_sweep(config: SweepConfig, threads: int = 1) -> SweepResult:
    """Average the thermal dipole-field QFI over M realizations for each grid cell.

    Each realization is diagonalized once per disorder value and reused for
    every temperature in the grid.  With ``threads`` > 1, contiguous index
    chunks run on a process pool (the per-realization work is far too small
    for Python threads); results are reduced in ascending index order, so the
    output is bit-identical for any worker count.
    """
    n = config.spec.n_sites
    m = config.disorder.n_realizations
    seed = config.disorder.seed
    j_scale = abs(config.spec.nn_coupling_cm1)
    temps = tuple(j_scale / (KB_CM1_PER_K * x) for x in config.j_over_kbt)

    cells = []
    for sigma in config.sigma_values:
        disorder = _disorder_for(config, sigma)
        fq = np.empty((m, len(temps)))
        resamples = np.empty(m, dtype=int)
        if threads > 1:
            from concurrent.futures import ProcessPoolExecutor

            chunk = max(1, -(-m // (threads * 8)))
            bounds = [(s, min(s + chunk, m)) for s in range(0, m, chunk)]
            jobs = [(config.spec, disorder, seed, s, e, temps) for s, e in bounds]
            with ProcessPoolExecutor(max_workers=threads) as pool:
                for start, block, res in pool.map(_chunk_fq, jobs):
                    fq[start:start + block.shape[0]] = block
                    resamples[start:start + block.shape[0]] = res
        else:
            for idx in range(m):
                fq[idx], resamples[idx] = _realization_fq(config.spec, disorder,
                                                          seed, idx, temps)

        mean = fq.mean(axis=0)
        if m > 1:
            # sample stddev of identical values is exactly zero; keep it that
            # way so zero-disorder cells report stderr 0
            spread = fq.max(axis=0) - fq.min(axis=0)
            stderr = np.where(spread > 0.0, fq.std(axis=0, ddof=1) / np.sqrt(m), 0.0)
        else:
            stderr = np.zeros(len(temps))
        for t_idx, x in enumerate(config.j_over_kbt):
            lower_edge = mean[t_idx] - 2.0 * stderr[t_idx]
            cells.append(CellResult(
                mode=config.mode,
                sigma=sigma,
                j_over_kbt=x,
                n_sites=n,
                n_realizations=m,
                mean_fq_per_n=float(mean[t_idx] / n),
                stderr=float(stderr[t_idx] / n),
                depth=classify_depth(max(lower_edge, 0.0), n),
                resamples=int(resamples.sum()),
                seed=seed,
            ))
    return SweepResult(config_digest=config.digest(), seed=seed, cells=tuple(cells))


def summarize_depth(result: SweepResult) -> dict:
    """Conservative witnessed depth per (sigma, J/k_B T) cell, from the lower
    2-sigma confidence edge of the ensemble mean."""
    return {(c.sigma, c.j_over_kbt): c.depth for c in result.cells}
