import math

import numpy as np
import pytest

from excitonqfi.aggregate import AggregateSpec, build_hamiltonian, diagonalize
from excitonqfi.constants import KB_CM1_PER_K
from excitonqfi.dimer import (
    ANTIPARALLEL,
    PARALLEL,
    DimerParams,
    concurrence_thermal,
    concurrence_thermal_closed_form,
    exciton_state,
    mixing_angle,
    pure_state_qfi_dipole,
    pure_state_qfi_max,
    purity_pure,
    purity_thermal,
    thermal_qfi_dipole,
    thermal_qfi_max,
    thermal_two_qubit_state,
    wootters_concurrence,
)
from excitonqfi.errors import DomainError
from excitonqfi.oracle import dense_qfi_mixed, dense_qfi_pure
from excitonqfi.qfi import dipole_field_generator

from conftest import FMO_J, FMO_OMEGA_A, FMO_OMEGA_B

# frozen FMO reference values (atan2 / closed forms, oracle-checked below)
FMO_THETA = 0.3881441971914313
FMO_SIN2T = 0.7006359503889288


def at_temperature(params, t):
    return DimerParams(params.omega_a, params.omega_b, params.j, temperature=t)


class TestMixingAngle:
    def test_resonant_j_aggregate(self):
        assert mixing_angle(DimerParams(100.0, 100.0, 5.0)) == pytest.approx(np.pi / 4)

    def test_uncoupled(self):
        assert mixing_angle(DimerParams(100.0, 200.0, 0.0)) == 0.0
        assert mixing_angle(DimerParams(200.0, 100.0, 0.0)) == pytest.approx(np.pi / 2)

    def test_fmo_value(self, fmo_params):
        theta = mixing_angle(fmo_params)
        assert theta == pytest.approx(FMO_THETA, abs=1e-15)
        assert math.sin(2 * theta) == pytest.approx(FMO_SIN2T, abs=1e-15)

    def test_matches_numeric_eigenvector(self, fmo_params, fmo_basis):
        # oracle: overlap of the rotation-form state with the eigensolver column
        state = exciton_state(fmo_params, 1)
        assert abs(abs(np.dot(state, fmo_basis.state(0))) - 1.0) < 1e-10
        state2 = exciton_state(fmo_params, 2)
        assert abs(abs(np.dot(state2, fmo_basis.state(1))) - 1.0) < 1e-10

    def test_degenerate_rejected(self):
        with pytest.raises(DomainError):
            mixing_angle(DimerParams(100.0, 100.0, 0.0))


class TestPureQfi:
    def test_resonant_bell(self):
        assert pure_state_qfi_dipole(DimerParams(0.0, 0.0, 3.0), 1) == pytest.approx(4.0)

    def test_fmo_values_vs_dense_oracle(self, fmo_params):
        f1 = pure_state_qfi_dipole(fmo_params, 1)
        f2 = pure_state_qfi_dipole(fmo_params, 2)
        assert f1 == pytest.approx(3.4012719007778576, abs=1e-12)
        assert f2 == pytest.approx(0.5987280992221424, abs=1e-12)
        gen = dipole_field_generator(2)
        assert f1 == pytest.approx(
            dense_qfi_pure(exciton_state(fmo_params, 1), gen), abs=1e-10)
        assert f2 == pytest.approx(
            dense_qfi_pure(exciton_state(fmo_params, 2), gen), abs=1e-10)

    def test_maximum_both_states(self, fmo_params):
        result = pure_state_qfi_max(fmo_params)
        assert result.f_q == pytest.approx(3.4012719007778576, abs=1e-12)
        assert result.alignment_e1 == PARALLEL
        assert result.alignment_e2 == ANTIPARALLEL

    def test_maximum_mirror_under_j_sign(self, fmo_params):
        mirrored = DimerParams(FMO_OMEGA_A, FMO_OMEGA_B, -FMO_J)
        result = pure_state_qfi_max(mirrored)
        assert result.f_q == pytest.approx(pure_state_qfi_max(fmo_params).f_q, abs=1e-12)
        assert result.alignment_e1 == ANTIPARALLEL
        assert result.alignment_e2 == PARALLEL

    def test_uncoupled_maximum_is_shot_noise(self):
        assert pure_state_qfi_max(DimerParams(0.0, 50.0, 0.0)).f_q == pytest.approx(2.0)


class TestThermalQfi:
    def test_infinite_temperature(self, fmo_params):
        assert thermal_qfi_dipole(at_temperature(fmo_params, math.inf)) == \
            pytest.approx(2.0)

    def test_fmo_room_temperature(self, fmo_params):
        got = thermal_qfi_dipole(at_temperature(fmo_params, 300.0))
        assert got == pytest.approx(2.629732001783706, abs=1e-12)

    def test_negative_coupling_never_witnesses(self, fmo_params, fmo_basis):
        mirrored = DimerParams(FMO_OMEGA_A, FMO_OMEGA_B, -FMO_J)
        for t in np.geomspace(1.0, 1e5, 40):
            assert thermal_qfi_dipole(at_temperature(mirrored, float(t))) <= 2.0 + 1e-12
        # dense-oracle spot check at 150 K
        spec = AggregateSpec.dimer(FMO_OMEGA_A, FMO_OMEGA_B, -FMO_J)
        basis = diagonalize(build_hamiltonian(spec))
        from excitonqfi.aggregate import thermal_state

        state = thermal_state(basis, 150.0)
        dense = dense_qfi_mixed(state.populations, basis.states,
                                dipole_field_generator(2))
        assert dense == pytest.approx(
            thermal_qfi_dipole(at_temperature(mirrored, 150.0)), abs=1e-10)
        assert dense <= 2.0

    def test_missing_temperature_rejected(self, fmo_params):
        with pytest.raises(DomainError):
            thermal_qfi_dipole(fmo_params)


class TestPurity:
    def test_bell_angle(self):
        assert purity_pure(np.pi / 4) == pytest.approx(0.5, abs=1e-15)

    def test_localized(self):
        assert purity_pure(0.0) == 1.0

    def test_fmo_identity(self, fmo_params):
        theta = mixing_angle(fmo_params)
        want = 1.0 - 0.5 * math.sin(2 * theta) ** 2
        assert purity_pure(theta) == pytest.approx(want, abs=1e-15)
        assert want == pytest.approx(0.7545546325113011, abs=1e-12)

    def test_thermal_purities_vs_density_matrix_oracle(self, fmo_params):
        for t in (30.0, 150.0, 300.0, 2000.0):
            params = at_temperature(fmo_params, t)
            purity_ab, purity_a = purity_thermal(params)
            rho = thermal_two_qubit_state(params)
            assert purity_ab == pytest.approx(float(np.trace(rho @ rho).real), abs=1e-12)
            rho_a = np.einsum("ikjk->ij", rho.reshape(2, 2, 2, 2))
            assert purity_a == pytest.approx(
                float(np.trace(rho_a @ rho_a).real), abs=1e-12)

    def test_entanglement_condition_all_temperatures(self, fmo_params):
        # Tr rho_A^2 < Tr rho_AB^2 whenever J != 0
        for beta in np.linspace(0.002, 100.0, 50):
            params = at_temperature(fmo_params, 1.0 / (KB_CM1_PER_K * beta))
            purity_ab, purity_a = purity_thermal(params)
            assert purity_a < purity_ab


class TestConcurrence:
    def test_low_temperature_limit(self, fmo_params):
        got = concurrence_thermal(at_temperature(fmo_params, 0.05))
        assert got == pytest.approx(FMO_SIN2T, abs=1e-12)

    def test_infinite_temperature(self, fmo_params):
        assert concurrence_thermal(at_temperature(fmo_params, math.inf)) == \
            pytest.approx(0.0, abs=1e-15)

    def test_identity_with_max_qfi(self, fmo_params):
        for t in np.geomspace(5.0, 5e4, 30):
            params = at_temperature(fmo_params, float(t))
            c = concurrence_thermal(params)
            assert c == pytest.approx((thermal_qfi_max(params) - 2.0) / 2.0, abs=1e-10)

    def test_wootters_vs_closed_form_grid(self, fmo_params):
        for t in np.geomspace(0.5, 5e5, 40):
            params = at_temperature(fmo_params, float(t))
            full = wootters_concurrence(thermal_two_qubit_state(params))
            assert abs(full - concurrence_thermal_closed_form(params)) <= 1e-10

    def test_bell_state_maximal(self):
        bell = np.zeros(4)
        bell[1] = bell[2] = 2 ** -0.5
        assert wootters_concurrence(np.outer(bell, bell)) == pytest.approx(1.0, abs=1e-12)

    def test_separable_zero(self):
        rho = np.diag([1.0, 0.0, 0.0, 0.0])
        assert wootters_concurrence(rho) == 0.0

    def test_unphysical_rejected(self):
        rho = np.diag([1.5, -0.5, 0.0, 0.0])
        with pytest.raises(DomainError):
            wootters_concurrence(rho)


class TestWitnessConsistency:
    def test_dipole_below_max_equality_iff_positive_j(self, fmo_params):
        mirrored = DimerParams(FMO_OMEGA_A, FMO_OMEGA_B, -FMO_J)
        for t in np.geomspace(1.0, 1e4, 25):
            pos = at_temperature(fmo_params, float(t))
            neg = at_temperature(mirrored, float(t))
            assert thermal_qfi_dipole(pos) <= thermal_qfi_max(pos) + 1e-12
            assert abs(thermal_qfi_dipole(pos) - thermal_qfi_max(pos)) <= 1e-12
            assert thermal_qfi_dipole(neg) <= thermal_qfi_max(neg) - 1e-9 or \
                thermal_qfi_max(neg) - 2.0 < 1e-9

    def test_monotone_in_temperature(self, fmo_params):
        temps = np.geomspace(1.0, 1e5, 200)
        fmax = [thermal_qfi_max(at_temperature(fmo_params, float(t))) for t in temps]
        conc = [concurrence_thermal(at_temperature(fmo_params, float(t))) for t in temps]
        assert all(b <= a + 1e-12 for a, b in zip(fmax, fmax[1:]))
        assert all(b <= a + 1e-12 for a, b in zip(conc, conc[1:]))
