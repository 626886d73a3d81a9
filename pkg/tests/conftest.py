import numpy as np
import pytest

from excitonqfi.aggregate import AggregateSpec, build_hamiltonian, diagonalize
from excitonqfi.dimer import DimerParams

FMO_OMEGA_A = 12328.0
FMO_OMEGA_B = 12472.0
FMO_J = 70.7


@pytest.fixture
def fmo_params():
    return DimerParams(FMO_OMEGA_A, FMO_OMEGA_B, FMO_J)


@pytest.fixture
def fmo_basis():
    spec = AggregateSpec.dimer(FMO_OMEGA_A, FMO_OMEGA_B, FMO_J)
    return diagonalize(build_hamiltonian(spec))


def random_generator(rng: np.random.Generator, n: int):
    from excitonqfi.qfi import Generator

    theta = np.arccos(rng.uniform(-1.0, 1.0, size=n))
    phi = rng.uniform(0.0, 2.0 * np.pi, size=n)
    return Generator.from_angles(theta, phi)


def random_subspace_state(rng: np.random.Generator, n: int) -> np.ndarray:
    c = rng.normal(size=n) + 1j * rng.normal(size=n)
    return c / np.linalg.norm(c)


def random_orthonormal(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, _ = np.linalg.qr(a)
    return q
