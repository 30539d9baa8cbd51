"""Invariant suite behind ``qcorr selfcheck``.

Each check returns ``(ok, detail)``; ``run_selfcheck`` prints one PASS/FAIL
line per check and reports whether all of them held.
"""
from __future__ import annotations

import math
import sys

import numpy as np

from . import linalg
from .channels import ChannelKind, apply_to_both, kraus_map, make_channel, completeness_defect
from .errors import NumericError
from .measures import (
    MeasurementBasis,
    binary_shannon_entropy,
    bchsh_from_m,
    full_report,
    negativity_from_min_eig,
    quantum_discord,
)
from .state import DensityMatrix, correlation_matrix, family_state, swap_qubits
from .sweep import SweepSpec, emit_csv, evaluate_point, run_sweep

SEED = 20170401
KINDS = (ChannelKind.ADC, ChannelKind.PDC, ChannelKind.DPC)
P_GRID = [k / 10 for k in range(11)]
ALPHA_GRID_21 = [k / 20 for k in range(21)]
ALPHA_GRID_99 = [k / 100 for k in range(1, 100)]
DECAY_P = [k / 10 for k in range(10)]
DECAY_ALPHA = [k / 10 for k in range(1, 10)]


def random_hermitian(rng, n: int = 4) -> np.ndarray:
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (x + x.conj().T)


def random_density(rng) -> np.ndarray:
    """A random pure state mixed with a random full-rank state."""
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    noise = g @ g.conj().T
    noise /= np.trace(noise).real
    w = rng.uniform()
    rho = w * np.outer(psi, psi.conj()) + (1 - w) * noise
    return 0.5 * (rho + rho.conj().T)


def _worst(values) -> float:
    return max(values, default=0.0)


def check_eigensystem():
    rng = np.random.default_rng(SEED)
    worst_res = worst_orth = 0.0
    for _ in range(1000):
        h = random_hermitian(rng)
        w, v = linalg.hermitian_eigensystem(h)
        scale = max(1.0, np.linalg.norm(h, 2))
        res = max(np.linalg.norm(h @ v[:, k] - w[k] * v[:, k]) for k in range(4)) / scale
        orth = np.max(np.abs(v.conj().T @ v - np.eye(4)))
        worst_res, worst_orth = max(worst_res, res), max(worst_orth, orth)
        if np.any(np.diff(w) < 0):
            return False, "eigenvalues not ascending"
    return worst_res <= 1e-11 and worst_orth <= 1e-11, \
        f"residual {worst_res:.2e}, orthonormality {worst_orth:.2e}"


def check_partial_ops():
    rng = np.random.default_rng(SEED + 1)
    worst_tr = worst_tp = 0.0
    for _ in range(200):
        rho = random_density(rng)
        if not np.array_equal(linalg.partial_transpose_B(linalg.partial_transpose_B(rho)), rho):
            return False, "partial transpose is not an exact involution"
        for keep in "AB":
            worst_tr = max(worst_tr, abs(np.trace(linalg.partial_trace(rho, keep)) - np.trace(rho)))
        a, b, c, d = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(4))
        lhs = linalg.tensor_product(a, b) @ linalg.tensor_product(c, d)
        worst_tp = max(worst_tp, np.max(np.abs(lhs - linalg.tensor_product(a @ c, b @ d))))
    ok = worst_tr <= 1e-12 and worst_tp <= 1e-12
    return ok, f"PT involution exact, partial-trace defect {worst_tr:.2e}, mixed-product {worst_tp:.2e}"


def check_family():
    worst_pur = worst_swap = 0.0
    for a in ALPHA_GRID_99:
        m = family_state(a).mat
        worst_pur = max(worst_pur, abs(np.trace(m @ m).real - 1))
        partner = family_state(math.sqrt(1 - a * a)).mat
        worst_swap = max(worst_swap, np.max(np.abs(swap_qubits(m) - partner)))
    return worst_pur <= 1e-12 and worst_swap <= 1e-12, \
        f"purity defect {worst_pur:.2e}, swap defect {worst_swap:.2e}"


def check_m_bound():
    rng = np.random.default_rng(SEED + 2)
    worst = max(correlation_matrix(DensityMatrix(random_density(rng))).m_value for _ in range(1000))
    return worst <= 2 + 1e-9, f"max M {worst:.12f}"


def check_measurement_basis():
    rng = np.random.default_rng(SEED + 3)
    worst = 0.0
    for _ in range(200):
        basis = MeasurementBasis(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
        plus, minus = basis.projectors()
        worst = max(worst, np.max(np.abs(plus @ plus - plus)), np.max(np.abs(minus @ minus - minus)),
                    np.max(np.abs(plus + minus - linalg.I2)))
    return worst <= 1e-12, f"projector defect {worst:.2e}"


def check_completeness():
    worst = _worst(completeness_defect(make_channel(k, p)) for k in KINDS for p in P_GRID)
    return worst <= 1e-12, f"max completeness defect {worst:.2e}"


def check_channel_outputs():
    worst_tr = worst_order = worst_adc = 0.0
    min_eig = 1.0
    for kind in KINDS:
        for p in P_GRID:
            ch = make_channel(kind, p)
            for a in ALPHA_GRID_21:
                rho = family_state(a).mat
                ab = kraus_map(ch, kraus_map(ch, rho, "A"), "B")
                ba = kraus_map(ch, kraus_map(ch, rho, "B"), "A")
                worst_tr = max(worst_tr, abs(np.trace(ab) - 1))
                worst_order = max(worst_order, np.max(np.abs(ab - ba)))
                min_eig = min(min_eig, linalg.eigvalsh(ab)[0])
                for side in "AB":
                    out = kraus_map(ch, rho, side)
                    worst_tr = max(worst_tr, abs(np.trace(out) - 1))
                    min_eig = min(min_eig, linalg.eigvalsh(out)[0])
                if kind is ChannelKind.ADC:
                    expected = (1 - p) * rho
                    expected[3, 3] += p
                    worst_adc = max(worst_adc, np.max(np.abs(ab - expected)))
    ok = worst_tr <= 1e-12 and min_eig >= -1e-10 and worst_order <= 1e-14 and worst_adc <= 1e-12
    return ok, (f"trace defect {worst_tr:.2e}, min eigenvalue {min_eig:.2e}, "
                f"order defect {worst_order:.2e}, ADC closed-form defect {worst_adc:.2e}")


def check_discord_nonnegative():
    lowest = math.inf
    for kind in KINDS:
        for p in P_GRID:
            ch = make_channel(kind, p)
            for a in ALPHA_GRID_21:
                try:
                    d, _ = quantum_discord(apply_to_both(ch, family_state(a)), clamp=False)
                except NumericError as exc:
                    return False, f"{kind.value} p={p} alpha={a}: {exc}"
                lowest = min(lowest, d)
    return lowest >= -1e-6, f"lowest pre-clamp discord {lowest:.2e}"


def check_product_discord():
    worst = 0.0
    for x in (0.0, 0.2, 0.5, 0.9):
        for y in (0.0, 0.3, 0.5, 1.0):
            rho = linalg.tensor_product(np.diag([x, 1 - x]), np.diag([y, 1 - y]))
            worst = max(worst, quantum_discord(DensityMatrix(rho))[0])
    return worst <= 1e-7, f"max product-state discord {worst:.2e}"


def check_pure_state_oracle():
    worst_n = worst_b = worst_d = 0.0
    for a in ALPHA_GRID_99:
        rep = full_report(family_state(a))
        c = 2 * a * math.sqrt(1 - a * a)
        worst_n = max(worst_n, abs(rep.negativity - c))
        worst_b = max(worst_b, abs(rep.bchsh - c))
        worst_d = max(worst_d, abs(rep.discord - binary_shannon_entropy(a * a)))
    ok = worst_n <= 1e-10 and worst_b <= 1e-10 and worst_d <= 1e-4
    return ok, f"|N-c| {worst_n:.2e}, |B-c| {worst_b:.2e}, |D-h(a^2)| {worst_d:.2e}"


def check_alpha_swap():
    """α <-> sqrt(1-α²) is the qubit swap, so N, M, B are invariant.

    Discord measures B only, so under the swap it maps to discord measured on A.
    """
    worst = 0.0
    for kind in KINDS:
        for p in (0.0, 0.1, 0.3, 0.5, 0.8):
            ch = make_channel(kind, p)
            for a in (0.1, 0.3, 0.45, 0.6, 0.9):
                r1 = evaluate_point(kind, p, a)
                r2 = evaluate_point(kind, p, math.sqrt(1 - a * a))
                for f in ("negativity", "m_value", "bchsh"):
                    worst = max(worst, abs(getattr(r1, f) - getattr(r2, f)))
                d_a = quantum_discord(apply_to_both(ch, family_state(a)), measured="A")[0]
                worst = max(worst, abs(r2.discord - d_a))
    return worst <= 1e-9, f"max swap asymmetry {worst:.2e}"


def check_report_identities():
    rng = np.random.default_rng(SEED + 4)
    worst = 0.0
    for _ in range(50):
        rep = full_report(DensityMatrix(random_density(rng)), with_discord=False)
        worst = max(worst, abs(rep.bchsh - bchsh_from_m(rep.m_value)),
                    abs(rep.negativity - negativity_from_min_eig(rep.min_pt_eigenvalue)))
    return worst <= 1e-12, f"identity defect {worst:.2e}"


def check_grid_refinement():
    rng = np.random.default_rng(SEED + 5)
    worst = 0.0
    for _ in range(20):
        kind = KINDS[rng.integers(3)]
        p, a = float(rng.uniform(0, 1)), float(rng.uniform(0, 1))
        rho = apply_to_both(make_channel(kind, p), family_state(a))
        coarse = quantum_discord(rho)[0]
        fine = quantum_discord(rho, grid=(120, 240))[0]
        worst = max(worst, abs(coarse - fine))
    return worst <= 1e-5, f"max coarse/fine discord gap {worst:.2e}"


def check_monotone_decay():
    violations = []
    for kind in KINDS:
        for a in DECAY_ALPHA:
            prev = None
            for p in DECAY_P:
                rec = evaluate_point(kind, p, a)
                cur = (rec.negativity, rec.discord, rec.bchsh)
                if prev is not None:
                    violations += [(kind.value, a, p, name) for name, x, y in zip("NDB", prev, cur)
                                   if y > x + 1e-7]
                prev = cur
    return not violations, f"{len(violations)} increases" + (f", first {violations[0]}" if violations else "")


def check_pdc_identity():
    spec = SweepSpec(ChannelKind.PDC, DECAY_P, 99, measures=frozenset({"N", "B"}))
    worst = _worst(abs(r.bchsh - r.negativity) for r in run_sweep(spec))
    return worst <= 1e-8, f"max |B-N| {worst:.2e}"


def check_csv_determinism():
    spec = SweepSpec(ChannelKind.DPC, (0.0, 0.2), 5)
    first, second = emit_csv(run_sweep(spec)), emit_csv(run_sweep(spec))
    return first == second, f"{len(first)} bytes"


CHECKS = [
    ("eigensystem residual/orthonormality (1000 random Hermitian)", check_eigensystem),
    ("partial trace / partial transpose / tensor product", check_partial_ops),
    ("family state purity and swap symmetry", check_family),
    ("M <= 2 on 1000 random states", check_m_bound),
    ("measurement projectors", check_measurement_basis),
    ("Kraus completeness", check_completeness),
    ("channel trace, PSD, order independence, ADC closed form", check_channel_outputs),
    ("discord pre-clamp nonnegativity", check_discord_nonnegative),
    ("product-state discord", check_product_discord),
    ("pure-state oracle", check_pure_state_oracle),
    ("alpha-swap symmetry", check_alpha_swap),
    ("report identities", check_report_identities),
    ("discord grid refinement consistency", check_grid_refinement),
    ("monotone decay in p", check_monotone_decay),
    ("PDC B = N", check_pdc_identity),
    ("CSV determinism", check_csv_determinism),
]


def run_selfcheck(out=None) -> bool:
    out = out or sys.stdout
    all_ok = True
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except (NumericError, ArithmeticError, ValueError) as exc:
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        all_ok &= bool(ok)
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}", file=out)
    return all_ok
