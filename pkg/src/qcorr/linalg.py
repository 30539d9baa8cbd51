"""Dense complex kernels for two-qubit problems.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.

Basis convention used everywhere in the package: the two-qubit basis is
ordered ``|00>, |01>, |10>, |11>`` and the flat index of ``|a b>`` is
``k = 2*a + b``, where ``a`` is the bit of qubit A (Alice) and ``b`` the bit
of qubit B (Bob).  Partial trace and partial transpose silently give wrong
answers if this is confused, so every reshape below spells out the index
order ``(a, b, a', b')``.
"""
from __future__ import annotations

import numpy as np

from .errors import NumericError, UsageError

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

HERMITIAN_TOL = 1e-10
_MAX_SWEEPS = 64


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise UsageError(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise UsageError("matrix has non-finite entries")
    return m


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise UsageError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product; the left factor indexes the high-order bit."""
    return np.kron(as_matrix(a), as_matrix(b))


def hermiticity_defect(h) -> float:
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        return float("inf")
    return float(np.max(np.abs(h - h.conj().T)))


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def hermitian_eigensystem(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ``(w, v)`` with real eigenvalues ``w`` in ascending order (ties keep
    the order the rotations produced them in) and orthonormal eigenvectors in
    the columns of ``v``.

    Raises NumericError when ``h`` is not Hermitian within 1e-10.
    """
    h = as_matrix(h)
    n, m = h.shape
    if n != m:
        raise UsageError(f"eigensystem needs a square matrix, got {h.shape}")
    if hermiticity_defect(h) > HERMITIAN_TOL:
        raise NumericError(
            f"matrix is not Hermitian (defect {hermiticity_defect(h):.3e})")

    a = 0.5 * (h + h.conj().T)
    v = np.eye(n, dtype=complex)
    scale = max(float(np.max(np.abs(a))), np.finfo(float).tiny)
    for _ in range(_MAX_SWEEPS):
        if _off_norm(a) <= 1e-15 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                mag = abs(b)
                if mag <= 1e-18 * scale:
                    continue
                phase = b / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # G = diag(.., conj(phase) at q, ..) @ real rotation(p, q)
                g = np.eye(n, dtype=complex)
                g[p, p] = c
                g[p, q] = s
                g[q, p] = -s * np.conj(phase)
                g[q, q] = c * np.conj(phase)
                a = g.conj().T @ a @ g
                a[p, q] = a[q, p] = 0.0
                v = v @ g
    else:
        raise NumericError("Jacobi iteration did not converge")

    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def eigvalsh(h) -> np.ndarray:
    return hermitian_eigensystem(h)[0]


def _check_two_qubit(rho: np.ndarray) -> np.ndarray:
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise UsageError(f"expected a 4x4 two-qubit matrix, got {rho.shape}")
    return rho


def partial_trace(rho, keep: str) -> np.ndarray:
    """Reduced 2x2 matrix of subsystem ``keep`` ('A' or 'B')."""
    r = _check_two_qubit(rho).reshape(2, 2, 2, 2)  # (a, b, a', b')
    keep = keep.upper()
    if keep == "A":
        return np.einsum("ijkj->ik", r)
    if keep == "B":
        return np.einsum("ijil->jl", r)
    raise UsageError(f"subsystem must be 'A' or 'B', got {keep!r}")


def partial_transpose_B(rho) -> np.ndarray:
    """Transpose the B indices: (a, b; a', b') -> (a, b'; a', b)."""
    r = _check_two_qubit(rho).reshape(2, 2, 2, 2)
    return r.transpose(0, 3, 2, 1).reshape(4, 4)


def lift(op, which: str) -> np.ndarray:
    """Embed a single-qubit operator on qubit ``which`` of the pair."""
    which = which.upper()
    if which == "A":
        return tensor_product(op, I2)
    if which == "B":
        return tensor_product(I2, op)
    raise UsageError(f"qubit must be 'A' or 'B', got {which!r}")
