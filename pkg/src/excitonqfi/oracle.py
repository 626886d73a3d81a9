"""Brute-force QFI in the full 2^N Hilbert space.

Independent verification path for every subspace shortcut in qfi.py: operators
are built as Kronecker products of single-site Paulis, pure-state QFI is the
raw variance, and mixed-state QFI runs the spectral sum over an explicit
eigendecomposition of rho.  Site n excited corresponds to basis index with bit
n set (vacuum = index 0).
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .errors import CapabilityError, DomainError, ValidationError
from .qfi import POPULATION_FLOOR, Generator

#: Dense 2^N work above this many sites is refused outright.
MAX_ORACLE_SITES = 12

_SIGMA_PLUS = np.array([[0.0, 0.0], [1.0, 0.0]])  # |e><g| in (g, e) ordering


def _guard(n_sites: int) -> None:
    if n_sites > MAX_ORACLE_SITES:
        raise CapabilityError(
            f"dense oracle is limited to {MAX_ORACLE_SITES} sites, got {n_sites}"
        )


def site_operator(op: np.ndarray, site: int, n_sites: int) -> sp.csr_matrix:
    """Embed a single-qubit operator on ``site`` into the 2^N space (bit ``site``)."""
    _guard(n_sites)
    mat = sp.identity(1, format="csr")
    for i in range(n_sites - 1, -1, -1):
        local = sp.csr_matrix(op) if i == site else sp.identity(2, format="csr")
        mat = sp.kron(mat, local, format="csr")
    return mat


def generator_operator(gen: Generator) -> sp.csr_matrix:
    """O = (1/2) sum_i n_i . sigma_i as a sparse 2^N x 2^N matrix."""
    n = gen.n_sites
    _guard(n)
    dim = 2 ** n
    total = sp.csr_matrix((dim, dim), dtype=complex)
    for i in range(n):
        plus = site_operator(_SIGMA_PLUS, i, n)
        minus = plus.T
        sx = plus + minus
        sy = -1j * (plus - minus)
        sz = plus @ minus - minus @ plus
        nx, ny, nz = gen.bloch[i]
        total = total + 0.5 * (nx * sx + ny * sy + nz * sz)
    return total.tocsr()


def embed_first_excitation(amplitudes: Sequence[complex]) -> np.ndarray:
    """Lift first-excitation site amplitudes into the full 2^N space."""
    c = np.asarray(amplitudes)
    n = c.shape[0]
    _guard(n)
    full = np.zeros(2 ** n, dtype=complex)
    for site in range(n):
        full[1 << site] = c[site]
    return full


def _as_full_state(state: Sequence[complex], n_sites: int) -> np.ndarray:
    state = np.asarray(state)
    if state.shape == (n_sites,):
        return embed_first_excitation(state)
    if state.shape == (2 ** n_sites,):
        return state.astype(complex)
    raise ValidationError("state must have length n_sites or 2^n_sites")


def dense_qfi_pure(state: Sequence[complex], gen: Generator) -> float:
    """4 (<O^2> - <O>^2) evaluated with full-space matrix-vector products."""
    psi = _as_full_state(state, gen.n_sites)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-9:
        raise ValidationError("state must be normalized within 1e-9")
    op = generator_operator(gen)
    opsi = op @ psi
    mean = float(np.real(np.vdot(psi, opsi)))
    second = float(np.real(np.vdot(opsi, opsi)))
    return 4.0 * (second - mean ** 2)


def dense_qfi_mixed(populations: Sequence[float], states: np.ndarray,
                    gen: Generator) -> float:
    """Spectral-sum QFI of rho = sum p_l |l><l| via a full eigendecomposition.

    ``states`` columns may be first-excitation amplitudes (length N) or full
    2^N vectors.  rho is materialized densely, diagonalized with LAPACK, and
    the sum 2 sum (p-p')^2/(p+p') |<l|O|l'>|^2 runs over all eigenvector pairs
    with p + p' above POPULATION_FLOOR.
    """
    n = gen.n_sites
    _guard(n)
    p = np.asarray(populations, dtype=float)
    if np.any(p < 0.0):
        raise DomainError("populations must be nonnegative")
    states = np.asarray(states)
    cols = [_as_full_state(states[:, i], n) for i in range(states.shape[1])]
    dim = 2 ** n
    rho = np.zeros((dim, dim), dtype=complex)
    for weight, col in zip(p, cols):
        rho += weight * np.outer(col, col.conj())
    return dense_qfi_rho(rho, gen)


def dense_qfi_rho(rho: np.ndarray, gen: Generator) -> float:
    """Spectral-sum QFI of an explicit density matrix over the full 2^N space."""
    n = gen.n_sites
    _guard(n)
    dim = 2 ** n
    rho = np.asarray(rho)
    if rho.shape != (dim, dim):
        raise ValidationError(f"rho must be {dim} x {dim}")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-9:
        raise ValidationError("rho must be Hermitian")
    evals, evecs = scipy.linalg.eigh(rho)
    evals = np.clip(evals, 0.0, None)
    op = generator_operator(gen)

    live = np.flatnonzero(evals > POPULATION_FLOOR)
    if live.size == 0:
        return 0.0
    # <l'|O|l> for populated l against every eigenvector l'.
    m = evecs.conj().T @ (op @ evecs[:, live])
    m_sq = np.abs(m) ** 2

    dead = evals <= POPULATION_FLOOR
    total = 0.0
    for j, lam in enumerate(live):
        p_l = evals[lam]
        ps = p_l + evals
        diff = p_l - evals
        weight = np.where(ps > POPULATION_FLOOR, diff ** 2 / np.where(ps > 0, ps, 1.0), 0.0)
        # ordered pairs (l, l') for all l'
        total += float(np.dot(weight, m_sq[:, j]))
        # ordered pairs (l', l) with l' unpopulated, not covered above
        total += float(np.dot(weight[dead], m_sq[dead, j]))
    return 2.0 * total


def random_product_state(n_sites: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random single-qubit states tensored together (a separable pure state)."""
    _guard(n_sites)
    psi = np.ones(1, dtype=complex)
    for _ in range(n_sites):
        raw = rng.normal(size=2) + 1j * rng.normal(size=2)
        raw /= np.linalg.norm(raw)
        psi = np.kron(psi, raw)
    return psi
