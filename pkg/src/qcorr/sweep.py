"""Grid sweeps over (p, α), bisection searches, and CSV output."""
from __future__ import annotations

import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channels import ChannelKind, decohered_family_state, parse_side
from .errors import NumericError, UsageError
from .measures import bchsh, full_report, negativity

VIOLATION_FLOOR = 1e-12
SEPARABLE_FLOOR = 1e-12
BOUNDARY_GRID = 999
_THRESHOLD_SCAN = 101

CSV_HEADER = "channel,p,alpha,negativity,discord,bchsh,m_value,min_pt_eig,separable"
ALL_MEASURES = frozenset({"N", "D", "B"})


@dataclass(frozen=True)
class SweepSpec:
    channel: ChannelKind
    p_list: tuple[float, ...]
    alpha_steps: int
    side: str = "both"
    include_endpoints: bool = False
    measures: frozenset = field(default=ALL_MEASURES)

    def __post_init__(self):
        object.__setattr__(self, "channel", ChannelKind.parse(self.channel))
        object.__setattr__(self, "side", parse_side(self.side))
        ps = tuple(float(p) for p in self.p_list)
        if not ps:
            raise UsageError("p_list is empty")
        if any(not 0.0 <= p <= 1.0 for p in ps):
            raise UsageError("every p must lie in [0, 1]")
        if list(ps) != sorted(ps):
            raise UsageError("p_list must be sorted ascending")
        object.__setattr__(self, "p_list", ps)
        if int(self.alpha_steps) != self.alpha_steps or self.alpha_steps < 2:
            raise UsageError("alpha_steps must be an integer >= 2")
        unknown = set(self.measures) - ALL_MEASURES
        if unknown:
            raise UsageError(f"unknown measures {sorted(unknown)}")

    def alphas(self) -> list[float]:
        n = int(self.alpha_steps)
        grid = [k / (n + 1) for k in range(1, n + 1)]
        if self.include_endpoints:
            grid = [0.0] + grid + [1.0]
        return grid


@dataclass(frozen=True)
class SweepRecord:
    channel: str
    p: float
    alpha: float
    negativity: float
    discord: float
    bchsh: float
    m_value: float
    min_pt_eig: float
    separable: bool


def evaluate_point(kind, p: float, alpha: float, side: str = "both",
                   measures=ALL_MEASURES) -> SweepRecord:
    kind = ChannelKind.parse(kind)
    rho = decohered_family_state(kind, p, alpha, side)
    rep = full_report(rho, with_discord="D" in measures)
    nan = float("nan")
    return SweepRecord(
        channel=kind.value,
        p=float(p),
        alpha=float(alpha),
        negativity=rep.negativity if "N" in measures else nan,
        discord=rep.discord,
        bchsh=rep.bchsh if "B" in measures else nan,
        m_value=rep.m_value if "B" in measures else nan,
        min_pt_eig=rep.min_pt_eigenvalue,
        separable=rep.negativity <= SEPARABLE_FLOOR,
    )


def _evaluate_job(args) -> SweepRecord:
    kind, p, alpha, side, measures = args
    try:
        return evaluate_point(kind, p, alpha, side, measures)
    except NumericError as exc:
        raise NumericError(f"at p={p}, alpha={alpha}: {exc}") from exc


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRecord]:
    """One record per (p, α), ordered by p then α.

    With ``workers > 1`` points are evaluated in a process pool; results are
    gathered in submission order so the output is identical to a serial run.
    """
    jobs = [(spec.channel, p, a, spec.side, spec.measures)
            for p in spec.p_list for a in spec.alphas()]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_evaluate_job, jobs, chunksize=8))
    return [_evaluate_job(j) for j in jobs]


def _count_sign_changes(flags) -> int:
    return sum(1 for x, y in zip(flags, flags[1:]) if x != y)


def find_violation_threshold(kind, side: str = "both", alpha_star: float = 1 / math.sqrt(2),
                             tol: float = 1e-6) -> float | None:
    """Smallest p at which the family state at ``alpha_star`` stops violating CHSH.

    Returns None when the state still violates at p = 1 - tol.
    """
    if not tol > 0:
        raise UsageError("tol must be positive")

    def violates(p: float) -> bool:
        return bchsh(decohered_family_state(kind, p, alpha_star, side)) > VIOLATION_FLOOR

    scan = [violates(p) for p in np.linspace(0.0, 1.0 - tol, _THRESHOLD_SCAN)]
    if _count_sign_changes(scan) > 1:
        raise NumericError("violation predicate is not monotone in p")
    if scan[-1]:
        return None
    if not scan[0]:
        return 0.0
    lo, hi = 0.0, 1.0 - tol
    # bracket narrower than tol so that 6-decimal output is stable
    while hi - lo > tol / 64:
        mid = 0.5 * (lo + hi)
        if violates(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_separability_boundaries(kind, side: str = "both", p: float = 0.0,
                                 tol: float = 1e-6) -> list[tuple[float, float]]:
    """Closed α-intervals on which the decohered family state is separable (N = 0).

    A 999-point α scan locates sign changes; each change is bisected to below
    ``tol``.  Intervals touching the edge of the scan are closed at 0 or 1.
    """
    if not 0.0 <= p <= 1.0:
        raise UsageError(f"p must lie in [0, 1], got {p}")
    if not tol > 0:
        raise UsageError("tol must be positive")

    def separable(alpha: float) -> bool:
        return negativity(decohered_family_state(kind, p, alpha, side)) <= SEPARABLE_FLOOR

    grid = [k / (BOUNDARY_GRID + 1) for k in range(1, BOUNDARY_GRID + 1)]
    flags = [separable(a) for a in grid]

    def bisect(lo: float, hi: float, lo_flag: bool) -> float:
        while hi - lo > tol / 64:
            mid = 0.5 * (lo + hi)
            if separable(mid) == lo_flag:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    intervals = []
    start = 0.0 if flags[0] else None
    for k in range(len(grid) - 1):
        if flags[k] == flags[k + 1]:
            continue
        edge = bisect(grid[k], grid[k + 1], flags[k])
        if flags[k + 1]:
            start = edge
        else:
            intervals.append((start, edge))
            start = None
    if start is not None:
        intervals.append((start, 1.0))
    return intervals


def format_number(x: float) -> str:
    if math.isnan(x):
        return "nan"
    s = f"{x:.9f}"
    return "0.000000000" if s == "-0.000000000" else s


def format_row(rec: SweepRecord) -> str:
    nums = (rec.p, rec.alpha, rec.negativity, rec.discord, rec.bchsh, rec.m_value, rec.min_pt_eig)
    return ",".join([rec.channel, *map(format_number, nums), "true" if rec.separable else "false"])


def emit_csv(records) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for rec in records:
        buf.write(format_row(rec) + "\n")
    return buf.getvalue()
