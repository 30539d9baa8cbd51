"""Single-qubit Kraus channels (amplitude damping, phase damping, depolarizing).

The strength ``p`` is the exposed parameter; ``s = 1 - p``.  Amplitude damping
follows the convention in which |0> is the upper level and decays to |1>.
Channel names ``adc``, ``pdc``, ``dpc`` and ``none`` are the canonical strings
used on the command line and in CSV output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import linalg
from .errors import UsageError
from .state import DensityMatrix, as_density, family_state

SIDES = ("A", "B", "both")


class ChannelKind(str, Enum):
    ADC = "adc"
    PDC = "pdc"
    DPC = "dpc"
    IDENTITY = "none"

    @classmethod
    def parse(cls, name) -> "ChannelKind":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            raise UsageError(
                f"unknown channel {name!r}; expected one of adc, pdc, dpc, none") from None


@dataclass(frozen=True)
class KrausChannel:
    kind: ChannelKind
    p: float
    ops: tuple[np.ndarray, ...]

    def __len__(self):
        return len(self.ops)


_KET0_BRA0 = np.array([[1, 0], [0, 0]], dtype=complex)
_KET1_BRA1 = np.array([[0, 0], [0, 1]], dtype=complex)
_KET1_BRA0 = np.array([[0, 0], [1, 0]], dtype=complex)


def make_channel(kind, p: float) -> KrausChannel:
    kind = ChannelKind.parse(kind)
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise UsageError(f"decoherence strength p must lie in [0, 1], got {p}")
    s = 1.0 - p
    if kind is ChannelKind.ADC:
        ops = (math.sqrt(s) * _KET0_BRA0 + _KET1_BRA1, math.sqrt(p) * _KET1_BRA0)
    elif kind is ChannelKind.PDC:
        ops = (math.sqrt(s) * linalg.I2, math.sqrt(p) * _KET0_BRA0, math.sqrt(p) * _KET1_BRA1)
    elif kind is ChannelKind.DPC:
        pp = 0.75 * p
        w = math.sqrt(pp / 3.0)
        ops = (math.sqrt(1.0 - pp) * linalg.I2,) + tuple(w * sig for sig in linalg.PAULIS)
    else:
        ops = (linalg.I2.copy(),)
    return KrausChannel(kind, p, ops)


def completeness_defect(ch: KrausChannel) -> float:
    """max-abs entry of Σ E†E - I."""
    total = sum(linalg.dagger(e) @ e for e in ch.ops)
    return float(np.max(np.abs(total - linalg.I2)))


def apply_single(ch: KrausChannel, rho) -> np.ndarray:
    """Apply the channel to a bare single-qubit matrix."""
    rho = linalg.as_matrix(rho)
    return sum(e @ rho @ linalg.dagger(e) for e in ch.ops)


def kraus_map(ch: KrausChannel, m, which: str) -> np.ndarray:
    """Σ_μ E_μ m E_μ† with E_μ lifted onto qubit ``which``; no validation or clamping."""
    m = linalg.as_matrix(m)
    out = np.zeros((4, 4), dtype=complex)
    for e in ch.ops:
        big = linalg.lift(e, which)
        out += big @ m @ big.conj().T
    return out


def apply_to_qubit(ch: KrausChannel, rho, which: str) -> DensityMatrix:
    return DensityMatrix(kraus_map(ch, as_density(rho).mat, which))


def apply_to_both(ch: KrausChannel, rho) -> DensityMatrix:
    """Same channel, same strength, independently on A then B."""
    m = kraus_map(ch, as_density(rho).mat, "A")
    return DensityMatrix(kraus_map(ch, m, "B"))


def apply(ch: KrausChannel, rho, side: str = "both") -> DensityMatrix:
    side = parse_side(side)
    if side == "both":
        return apply_to_both(ch, rho)
    return apply_to_qubit(ch, rho, side)


def parse_side(side: str) -> str:
    s = str(side)
    if s.lower() == "both":
        return "both"
    if s.upper() in ("A", "B"):
        return s.upper()
    raise UsageError(f"side must be a, b or both, got {side!r}")


def decohered_family_state(kind, p: float, alpha: float, side: str = "both") -> DensityMatrix:
    return apply(make_channel(kind, p), family_state(alpha), side)
