"""Quantum Fisher information entanglement witnesses for molecular exciton aggregates."""

__version__ = "0.1.0"

from .aggregate import (
    AggregateSpec,
    DisorderDraw,
    DisorderSpec,
    ExcitonBasis,
    ThermalState,
    analytic_chain_state,
    analytic_ring_state,
    build_hamiltonian,
    chain_transition_dipole_sq,
    diagonalize,
    participation_ratio,
    thermal_state,
    zero_temperature_state,
)
from .qfi import (
    Generator,
    QfiReport,
    chain_qfi_closed_form,
    classify_depth,
    depth_report,
    dipole_field_generator,
    npartite_bound,
    qfi_mixed,
    qfi_pure,
    qfi_thermal_dipole,
    ring_qfi_closed_form,
    smallest_bright_k,
)

__all__ = [
    "AggregateSpec",
    "DisorderDraw",
    "DisorderSpec",
    "ExcitonBasis",
    "Generator",
    "QfiReport",
    "ThermalState",
    "analytic_chain_state",
    "analytic_ring_state",
    "build_hamiltonian",
    "chain_qfi_closed_form",
    "chain_transition_dipole_sq",
    "classify_depth",
    "depth_report",
    "diagonalize",
    "dipole_field_generator",
    "npartite_bound",
    "participation_ratio",
    "qfi_mixed",
    "qfi_pure",
    "qfi_thermal_dipole",
    "ring_qfi_closed_form",
    "smallest_bright_k",
    "thermal_state",
    "zero_temperature_state",
]
