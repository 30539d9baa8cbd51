"""Two-qubit density matrices, the α-family of states, and Bloch/correlation data."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import NumericError, UsageError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10


@dataclass(frozen=True)
class ValidationReport:
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float

    @property
    def ok(self) -> bool:
        return not self.reasons

    @property
    def reasons(self) -> list[str]:
        out = []
        if not self.hermiticity_defect <= HERMITIAN_TOL:
            out.append(f"hermiticity defect {self.hermiticity_defect:.3e}")
        if not self.trace_defect <= TRACE_TOL:
            out.append(f"trace defect {self.trace_defect:.3e}")
        if not self.min_eigenvalue >= -PSD_TOL:
            out.append(f"negative eigenvalue {self.min_eigenvalue:.3e}")
        return out


def validate(rho) -> ValidationReport:
    """Check a 4x4 matrix against the density-matrix invariants without raising."""
    m = linalg.as_matrix(rho)
    if m.shape != (4, 4):
        raise UsageError(f"expected a 4x4 matrix, got {m.shape}")
    herm = linalg.hermiticity_defect(m)
    tr = abs(np.trace(m) - 1.0)
    # the Hermitian part is always diagonalizable; its spectrum is what matters
    w = linalg.eigvalsh(0.5 * (m + m.conj().T))
    return ValidationReport(herm, float(tr), float(w[0]))


@dataclass(frozen=True)
class DensityMatrix:
    """A validated two-qubit state.

    Eigenvalues in [-1e-10, 0) are treated as arithmetic dust: they are clamped
    to zero and the matrix is renormalized to unit trace.  Anything else that
    breaks the invariants raises NumericError.
    """

    mat: np.ndarray = field(repr=False)

    def __post_init__(self):
        report = validate(self.mat)
        if not report.ok:
            raise NumericError("invalid density matrix: " + "; ".join(report.reasons))
        m = np.array(self.mat, dtype=complex)
        if report.min_eigenvalue < 0:
            w, v = linalg.hermitian_eigensystem(0.5 * (m + m.conj().T))
            w = np.clip(w, 0.0, None)
            m = (v * w) @ v.conj().T
            m /= np.trace(m).real
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    def __array__(self, dtype=None, copy=None):
        return self.mat if dtype is None else self.mat.astype(dtype)


def as_density(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)


def family_state(alpha: float) -> DensityMatrix:
    """|φ> = α|01> + sqrt(1-α²)|10>, as a density matrix."""
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise UsageError(f"alpha must lie in [0, 1], got {alpha}")
    beta = math.sqrt(1.0 - alpha * alpha)
    psi = np.array([0.0, alpha, beta, 0.0], dtype=complex)
    return DensityMatrix(np.outer(psi, psi.conj()))


def maximally_mixed() -> DensityMatrix:
    return DensityMatrix(np.eye(4, dtype=complex) / 4)


@dataclass(frozen=True)
class CorrelationData:
    T: np.ndarray
    h: np.ndarray  # eigenvalues of T^T T, descending
    m_value: float

    @property
    def tau1(self) -> float:
        return float(self.h[0])

    @property
    def tau2(self) -> float:
        return float(self.h[1])


def correlation_matrix(rho) -> CorrelationData:
    """Spin-correlation matrix T_ij = Tr[ρ σ_i⊗σ_j] and the Horodecki quantity M.

    M is the sum of the two largest eigenvalues of TᵀT.
    """
    m = as_density(rho).mat
    T = np.empty((3, 3))
    for i, si in enumerate(linalg.PAULIS):
        for j, sj in enumerate(linalg.PAULIS):
            T[i, j] = np.trace(m @ np.kron(si, sj)).real
    h = linalg.eigvalsh(T.T @ T)[::-1]
    h = np.clip(h, 0.0, None)
    return CorrelationData(T=T, h=h, m_value=float(h[0] + h[1]))


def bloch_vector(rho, subsystem: str) -> np.ndarray:
    reduced = linalg.partial_trace(as_density(rho).mat, subsystem)
    return np.array([np.trace(reduced @ s).real for s in linalg.PAULIS])


def swap_qubits(rho) -> np.ndarray:
    """Exchange the roles of A and B (permutes basis states 01 <-> 10)."""
    r = linalg.as_matrix(rho).reshape(2, 2, 2, 2)
    return r.transpose(1, 0, 3, 2).reshape(4, 4)
