import itertools
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qcorr import linalg
from qcorr.channels import (
    ChannelKind,
    KrausChannel,
    apply,
    apply_single,
    apply_to_both,
    apply_to_qubit,
    completeness_defect,
    kraus_map,
    make_channel,
)
from qcorr.errors import UsageError
from qcorr.measures import m_value
from qcorr.state import correlation_matrix, family_state

from conftest import BELL_ALPHA

KINDS = ["adc", "pdc", "dpc"]
P_GRID = [k / 10 for k in range(11)]
ALPHA_21 = [k / 20 for k in range(21)]


def brute_force_both(ch, rho):
    """Two-qubit Kraus sum with product operators E_i ⊗ E_j."""
    out = np.zeros((4, 4), dtype=complex)
    for ei, ej in itertools.product(ch.ops, repeat=2):
        big = np.kron(ei, ej)
        out += big @ rho @ big.conj().T
    return out


@pytest.mark.parametrize("kind,count", [("adc", 2), ("pdc", 3), ("dpc", 4), ("none", 1)])
def test_operator_counts(kind, count):
    assert len(make_channel(kind, 0.4).ops) == count


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("p", P_GRID)
def test_completeness(kind, p):
    assert completeness_defect(make_channel(kind, p)) <= 1e-12


def test_completeness_detects_broken_channel():
    broken = KrausChannel(ChannelKind.IDENTITY, 0.0, (math.sqrt(0.5) * linalg.I2,))
    assert completeness_defect(broken) == pytest.approx(0.5)


def test_make_channel_rejects_bad_input():
    with pytest.raises(UsageError):
        make_channel("adc", 1.5)
    with pytest.raises(UsageError):
        make_channel("foo", 0.1)


def test_adc_operators():
    ch = make_channel("adc", 0.0)
    assert_allclose(ch.ops[0], linalg.I2)
    assert_allclose(ch.ops[1], np.zeros((2, 2)))
    ch = make_channel("adc", 0.36)
    assert_allclose(ch.ops[0], np.diag([0.8, 1.0]))
    assert_allclose(ch.ops[1], [[0, 0], [0.6, 0]])


def test_dpc_full_strength_depolarizes():
    ch = make_channel("dpc", 1.0)
    for r in ([0, 0, 1], [0.6, 0, 0.8], [0.3, -0.4, 0.2]):
        rho = 0.5 * (linalg.I2 + sum(c * s for c, s in zip(r, linalg.PAULIS)))
        assert_allclose(apply_single(ch, rho), linalg.I2 / 2, atol=1e-15)


def test_dpc_shrinks_bloch_vector():
    r = np.array([0.3, -0.4, 0.5])
    rho = 0.5 * (linalg.I2 + sum(c * s for c, s in zip(r, linalg.PAULIS)))
    for p in (0.1, 0.37, 0.8):
        out = apply_single(make_channel("dpc", p), rho)
        got = [np.trace(out @ s).real for s in linalg.PAULIS]
        assert_allclose(got, (1 - p) * r, atol=1e-14)


def test_pdc_scales_coherence():
    out = apply_single(make_channel("pdc", 0.36), np.array([[0, 1], [0, 0]]))
    assert_allclose(out, [[0, 0.64], [0, 0]], atol=1e-15)


def test_identity_channel_leaves_state():
    rho = family_state(0.3)
    for which in "AB":
        assert np.max(np.abs(apply_to_qubit(make_channel("none", 0), rho, which).mat - rho.mat)) <= 1e-15
    assert np.max(np.abs(apply_to_both(make_channel("adc", 0), rho).mat - rho.mat)) <= 1e-15


@pytest.mark.parametrize("alpha", [0.2, BELL_ALPHA, 0.9])
def test_adc_full_on_a(alpha):
    out = apply_to_qubit(make_channel("adc", 1.0), family_state(alpha), "A").mat
    expected = np.zeros((4, 4))
    expected[3, 3] = alpha ** 2
    expected[2, 2] = 1 - alpha ** 2
    assert_allclose(out, expected, atol=1e-15)


def test_dpc_on_a_scales_a_components():
    rho = family_state(0.4)
    base = correlation_matrix(rho).T
    p = 0.3
    out = apply_to_qubit(make_channel("dpc", p), rho, "A")
    assert_allclose(correlation_matrix(out).T, (1 - p) * base, atol=1e-14)


@pytest.mark.parametrize("kind", KINDS)
def test_both_matches_brute_force(kind):
    for p in (0.0, 0.15, 0.5, 0.9):
        ch = make_channel(kind, p)
        for a in (0.1, 0.5, 0.77):
            rho = family_state(a).mat
            assert_allclose(apply_to_both(ch, rho).mat, brute_force_both(ch, rho), atol=1e-14)


def test_adc_both_closed_form():
    for p in P_GRID:
        for a in ALPHA_21:
            phi = family_state(a).mat
            expected = (1 - p) * phi
            expected[3, 3] += p
            out = apply_to_both(make_channel("adc", p), phi).mat
            assert np.max(np.abs(out - expected)) <= 1e-12


def test_pdc_both_closed_form():
    p, a = 0.3, 0.6
    out = apply_to_both(make_channel("pdc", p), family_state(a)).mat
    assert out[1, 1] == pytest.approx(0.36) and out[2, 2] == pytest.approx(0.64)
    assert out[1, 2] == pytest.approx(0.7 ** 2 * 0.48)


@pytest.mark.parametrize("p", [0.0, 0.1, 0.25, 0.6])
def test_dpc_both_bell_m_value(p):
    rho = apply_to_both(make_channel("dpc", p), family_state(BELL_ALPHA))
    assert m_value(rho) == pytest.approx(2 * (1 - p) ** 4, abs=1e-12)


@pytest.mark.parametrize("kind", KINDS)
def test_trace_psd_and_order(kind):
    for p in P_GRID:
        ch = make_channel(kind, p)
        for a in ALPHA_21:
            rho = family_state(a).mat
            ab = kraus_map(ch, kraus_map(ch, rho, "A"), "B")
            ba = kraus_map(ch, kraus_map(ch, rho, "B"), "A")
            assert abs(np.trace(ab) - 1) <= 1e-12
            assert np.max(np.abs(ab - ba)) <= 1e-14
            assert np.linalg.eigvalsh(ab)[0] >= -1e-10


def test_apply_side_dispatch():
    ch = make_channel("adc", 0.4)
    rho = family_state(0.3)
    assert_allclose(apply(ch, rho, "a").mat, apply_to_qubit(ch, rho, "A").mat)
    assert_allclose(apply(ch, rho, "both").mat, apply_to_both(ch, rho).mat)
    with pytest.raises(UsageError):
        apply(ch, rho, "left")
