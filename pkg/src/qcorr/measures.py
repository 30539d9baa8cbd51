"""Negativity, entropies, quantum discord and the CHSH quantities M and B.

All logarithms are base 2 and ``0 log 0`` is taken as 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import NumericError, UsageError
from .state import as_density, correlation_matrix, swap_qubits

EIG_CLAMP = 1e-10
DISCORD_FLOOR = -1e-6
PROB_FLOOR = 1e-14

DEFAULT_GRID = (60, 120)
REFINE_SEEDS = 3
ANGLE_TOL = 1e-6
VALUE_TOL = 1e-9
_MAX_REFINE_STEPS = 20000


# -- classical and von Neumann entropies ------------------------------------

def shannon_entropy(probs) -> float:
    p = np.asarray(probs, dtype=float)
    if np.any(p < 0) or np.any(p > 1):
        raise UsageError("probabilities must lie in [0, 1]")
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def binary_shannon_entropy(x: float) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise UsageError(f"binary entropy argument must lie in [0, 1], got {x}")
    return shannon_entropy([x, 1.0 - x])


def _clamped_spectrum(w: np.ndarray) -> np.ndarray:
    if w[0] < -EIG_CLAMP:
        raise NumericError(f"negative eigenvalue {w[0]:.3e} in entropy argument")
    return np.clip(w, 0.0, None)


def entropy_from_eigenvalues(w) -> float:
    w = _clamped_spectrum(np.sort(np.asarray(w, dtype=float)))
    w = w[w > 0]
    return float(-np.sum(w * np.log2(w)))


def von_neumann_entropy(rho) -> float:
    return entropy_from_eigenvalues(linalg.eigvalsh(rho))


def mutual_information(rho) -> float:
    """S(A) + S(B) - S(AB)."""
    m = as_density(rho).mat
    return (von_neumann_entropy(linalg.partial_trace(m, "A"))
            + von_neumann_entropy(linalg.partial_trace(m, "B"))
            - von_neumann_entropy(m))


# -- measurements on B --------------------------------------------------------

@dataclass(frozen=True)
class MeasurementBasis:
    """Projective measurement along the Bloch direction (θ, φ)."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise UsageError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise UsageError(f"phi must lie in [0, 2pi), got {self.phi}")

    @property
    def direction(self) -> np.ndarray:
        return _directions(np.array([self.theta]), np.array([self.phi]))[0]

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        nsig = sum(c * s for c, s in zip(self.direction, linalg.PAULIS))
        return (linalg.I2 + nsig) / 2, (linalg.I2 - nsig) / 2

    @classmethod
    def from_direction(cls, n) -> "MeasurementBasis":
        n = np.asarray(n, dtype=float)
        n = n / np.linalg.norm(n)
        theta = math.acos(min(1.0, max(-1.0, n[2])))
        phi = math.atan2(n[1], n[0]) % (2 * math.pi)
        if phi >= 2 * math.pi:
            phi = 0.0
        return cls(theta, phi)


def _directions(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def measured_conditional_entropy(rho, basis: MeasurementBasis) -> float:
    """Σ_i p_i S(ρ_i^A) after measuring B in ``basis``."""
    m = as_density(rho).mat
    total = 0.0
    for proj in basis.projectors():
        big = linalg.lift(proj, "B")
        p_i = np.trace(big @ m).real
        if p_i <= PROB_FLOOR:
            continue
        post = linalg.partial_trace(big @ m @ big, "A") / p_i
        total += p_i * von_neumann_entropy(post)
    return float(total)


def classical_correlation_J(rho, basis: MeasurementBasis) -> float:
    m = as_density(rho).mat
    return von_neumann_entropy(linalg.partial_trace(m, "A")) - measured_conditional_entropy(m, basis)


def _conditional_entropy_batch(m: np.ndarray, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Vectorized measured conditional entropy over many directions.

    Uses Tr_B[(I⊗Π) ρ (I⊗Π)] = Tr_B[(I⊗Π) ρ] and the closed-form spectrum of
    2x2 Hermitian matrices.
    """
    n = _directions(theta, phi)
    nsig = np.einsum("ni,ijk->njk", n, np.asarray(linalg.PAULIS))
    r4 = m.reshape(2, 2, 2, 2)  # (a, b, a', b')
    total = np.zeros(len(n))
    for sign in (1.0, -1.0):
        proj = 0.5 * (linalg.I2 + sign * nsig)
        # unnormalized post-measurement A state: Σ_{b,b'} Π[b', b] ρ[a, b, a', b']
        x = np.einsum("nkb,abck->nac", proj, r4)
        d0, d1 = x[:, 0, 0].real, x[:, 1, 1].real
        tr = d0 + d1
        gap = np.sqrt((d0 - d1) ** 2 + 4.0 * np.abs(x[:, 0, 1]) ** 2)
        lam = np.stack([(tr + gap) / 2, (tr - gap) / 2], axis=-1)
        lam = np.clip(lam, 0.0, None)
        ok = tr > PROB_FLOOR
        safe_tr = np.where(ok, tr, 1.0)[:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(lam > 0, -lam * np.log2(lam / safe_tr), 0.0)
        total += np.where(ok, terms.sum(axis=-1), 0.0)
    return total


def _refine(m: np.ndarray, theta: float, phi: float, value: float, step: float):
    """Compass search on (θ, φ) with a halving step."""
    h = step
    for _ in range(_MAX_REFINE_STEPS):
        if h < ANGLE_TOL:
            break
        cand_t = np.array([theta + h, theta - h, theta, theta])
        cand_p = np.array([phi, phi, phi + h, phi - h])
        vals = _conditional_entropy_batch(m, cand_t, cand_p)
        k = int(np.argmin(vals))
        if vals[k] < value:
            gain = value - vals[k]
            theta, phi, value = float(cand_t[k]), float(cand_p[k]), float(vals[k])
            if gain < VALUE_TOL:
                h *= 0.5
        else:
            h *= 0.5
    return theta, phi, value


def minimize_conditional_entropy(rho, grid: tuple[int, int] = DEFAULT_GRID):
    """min over projective measurements on B of S(A|{Π}); returns (value, basis)."""
    m = as_density(rho).mat
    n_theta, n_phi = grid
    thetas = np.linspace(0.0, math.pi, n_theta)
    phis = np.arange(n_phi) * (2 * math.pi / n_phi)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    tt, pp = tt.ravel(), pp.ravel()
    vals = _conditional_entropy_batch(m, tt, pp)
    seeds = np.argsort(vals, kind="stable")[:REFINE_SEEDS]

    step = math.pi / (n_theta - 1)
    best = None
    for k in seeds:
        res = _refine(m, float(tt[k]), float(pp[k]), float(vals[k]), step)
        if best is None or res[2] < best[2]:
            best = res
    theta, phi, value = best
    basis = MeasurementBasis.from_direction(_directions(np.array([theta]), np.array([phi]))[0])
    return value, basis


def quantum_discord(rho, grid: tuple[int, int] = DEFAULT_GRID, clamp: bool = True,
                    measured: str = "B"):
    """Discord with measurement on B: S(B) - S(AB) + min_Π S(A|{Π}).

    Returns ``(value, basis)``.  Raises NumericError if the unclamped value is
    below -1e-6; otherwise the value is clamped at zero unless ``clamp`` is False.
    ``measured="A"`` measures the other qubit instead (discord is not symmetric).
    """
    m = as_density(rho).mat
    if measured.upper() == "A":
        m = swap_qubits(m)
    elif measured.upper() != "B":
        raise UsageError(f"measured subsystem must be 'A' or 'B', got {measured!r}")
    cond, basis = minimize_conditional_entropy(m, grid)
    value = von_neumann_entropy(linalg.partial_trace(m, "B")) - von_neumann_entropy(m) + cond
    if value < DISCORD_FLOOR:
        raise NumericError(f"discord came out negative ({value:.3e})")
    if clamp:
        value = max(value, 0.0)
    return value, basis


# -- negativity and CHSH ------------------------------------------------------

def min_pt_eigenvalue(rho) -> float:
    return float(linalg.eigvalsh(linalg.partial_transpose_B(as_density(rho).mat))[0])


def negativity_from_min_eig(mu_min: float) -> float:
    return max(0.0, -2.0 * mu_min)


def negativity(rho) -> float:
    return negativity_from_min_eig(min_pt_eigenvalue(rho))


def m_value(rho) -> float:
    return correlation_matrix(rho).m_value


def bchsh_from_m(m: float) -> float:
    return math.sqrt(max(0.0, m - 1.0))


def bchsh(rho) -> float:
    """0 when CHSH is not violated, 1 at maximal violation."""
    return bchsh_from_m(m_value(rho))


@dataclass(frozen=True)
class MeasureReport:
    negativity: float
    discord: float
    m_value: float
    bchsh: float
    min_pt_eigenvalue: float
    discord_basis: MeasurementBasis | None = None


def full_report(rho, with_discord: bool = True) -> MeasureReport:
    """All measures of one state; discord is NaN when ``with_discord`` is off."""
    rho = as_density(rho)
    mu = min_pt_eigenvalue(rho)
    m = m_value(rho)
    if with_discord:
        d, basis = quantum_discord(rho)
    else:
        d, basis = float("nan"), None
    return MeasureReport(
        negativity=negativity_from_min_eig(mu),
        discord=d,
        m_value=m,
        bchsh=bchsh_from_m(m),
        min_pt_eigenvalue=mu,
        discord_basis=basis,
    )
