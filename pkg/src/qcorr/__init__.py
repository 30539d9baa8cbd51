"""Quantum correlations of a decohered two-qubit state family.

Negativity, quantum discord and the CHSH violation measure under amplitude
damping, phase damping and depolarizing noise.
"""
from .channels import ChannelKind, KrausChannel, apply_to_both, apply_to_qubit, make_channel
from .errors import NumericError, UsageError
from .measures import (
    MeasureReport,
    MeasurementBasis,
    bchsh,
    full_report,
    m_value,
    negativity,
    quantum_discord,
)
from .state import DensityMatrix, correlation_matrix, family_state
from .sweep import (
    SweepRecord,
    SweepSpec,
    emit_csv,
    find_separability_boundaries,
    find_violation_threshold,
    run_sweep,
)

__version__ = "0.1.0"
