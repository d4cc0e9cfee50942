"""Origin-destination demand handling.

The design models consume two dimensionless peaks of the demand profile:
the largest boarding-or-alighting share at any stop (it bounds how much
pod capacity a single stop consumes) and the largest inter-stop load
share (it bounds how many pods a bus must carry).  This module computes
them from an OD matrix, synthesizes matrices with requested peaks, and
flags stops that are too busy for a single-pod exchange.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .parameters import ServiceParameters


class DemandError(ValueError):
    """Base class for demand input problems."""


class MalformedODError(DemandError):
    """The OD source could not be parsed into a square numeric matrix."""


class NegativeFlowError(DemandError):
    """The OD matrix contains a negative entry."""


class UpstreamFlowError(DemandError):
    """The OD matrix routes passengers backwards (non-zero entry at or
    below the diagonal)."""


class DegenerateDemandError(DemandError):
    """The OD matrix carries no demand at all."""


class SynthesisError(DemandError):
    """No matrix in the synthesis family reaches the requested peaks."""


@dataclass(frozen=True)
class ODMatrix:
    """Hourly passenger flows between ordered stop pairs.

    ``flows[i, j]`` is the pax/h from stop ``i+1`` to stop ``j+1``; stops
    are 1-indexed in every public interface.  Passengers only travel
    downstream, so the diagonal and the lower triangle must be zero.
    """

    flows: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.flows, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise MalformedODError("OD matrix must be square")
        if arr.shape[0] < 2:
            raise MalformedODError("OD matrix needs at least two stops")
        if not np.all(np.isfinite(arr)):
            raise MalformedODError("OD matrix entries must be finite numbers")
        if np.any(arr < 0):
            raise NegativeFlowError("OD matrix entries must be non-negative")
        if np.any(np.tril(arr) != 0):
            raise UpstreamFlowError(
                "OD matrix must be strictly upper triangular (downstream travel only)")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "flows", arr)

    @property
    def stop_count(self) -> int:
        return self.flows.shape[0]

    @property
    def total(self) -> float:
        """Total demand on the line, pax/h."""
        return float(self.flows.sum())

    def flow(self, origin: int, destination: int) -> float:
        """Flow between two 1-indexed stops."""
        return float(self.flows[origin - 1, destination - 1])


@dataclass(frozen=True)
class DemandStatistics:
    """Profile peaks and per-stop aggregates of an OD matrix.

    ``peak_flow_share`` is the largest boarding or alighting volume at a
    single stop divided by total demand; ``peak_load_share`` is the
    largest volume crossing an interior stop divided by total demand.
    The per-stop arrays are absent when the statistics were built from
    scalar peaks.
    """

    peak_flow_share: float
    peak_load_share: float
    total: float
    boardings: np.ndarray | None = None
    alightings: np.ndarray | None = None
    loads: np.ndarray | None = None

    @classmethod
    def from_peaks(cls, flow_share: float, load_share: float,
                   total: float = 1.0) -> "DemandStatistics":
        """Build statistics directly from the two peaks."""
        if not 0 < flow_share <= 1:
            raise DemandError("peak_flow_share: must be in (0, 1]")
        if not 0 <= load_share <= 1:
            raise DemandError("peak_load_share: must be in [0, 1]")
        return cls(float(flow_share), float(load_share), float(total))


@dataclass(frozen=True)
class FullStopResult:
    """Outcome of the full-stop screening."""

    full_stops: frozenset[int]          # 1-indexed stops needing a full halt
    statistics: DemandStatistics        # peaks recomputed without those stops
    threshold: float                    # pax/h one pod exchange can absorb


def compute_statistics(od: ODMatrix) -> DemandStatistics:
    """Boarding, alighting and load profiles of an OD matrix.

    Raises ``DegenerateDemandError`` when the matrix carries no demand.
    """
    total = od.total
    if total <= 0:
        raise DegenerateDemandError("OD matrix carries zero demand")
    flows = od.flows
    s = od.stop_count
    boardings = flows.sum(axis=1)
    alightings = flows.sum(axis=0)
    loads = np.zeros(s)
    for j in range(1, s - 1):           # interior stops only; ends carry no through load
        loads[j] = flows[:j, j + 1:].sum()
    phi = max(boardings.max(), alightings.max()) / total
    rho = loads.max() / total
    return DemandStatistics(float(phi), float(rho), total,
                            boardings, alightings, loads)


def identify_full_stops(od: ODMatrix, params: ServiceParameters) -> FullStopResult:
    """Flag stops exceeding what a single pod exchange can serve.

    A pod exchange absorbs at most ``pod_capacity`` boardings (or
    alightings) per headway, and headways cannot drop below the swap
    window, so the per-stop demand ceiling is
    ``pod_capacity / min_headway``.  Flagged stops must be served by
    halting the whole bus; the peaks are recomputed with those stops
    excluded from the boarding/alighting maxima (loads are unaffected).
    """
    stats = compute_statistics(od)
    threshold = params.pod_capacity / params.min_headway
    assert stats.boardings is not None and stats.alightings is not None
    flagged = {
        i + 1
        for i in range(od.stop_count)
        if stats.boardings[i] > threshold or stats.alightings[i] > threshold
    }
    keep = [i for i in range(od.stop_count) if (i + 1) not in flagged]
    if keep:
        phi = max(stats.boardings[keep].max(), stats.alightings[keep].max()) / stats.total
    else:
        phi = 0.0
    reduced = replace(stats, peak_flow_share=float(phi))
    return FullStopResult(frozenset(flagged), reduced, threshold)


def trip_ratio_from_od(od: ODMatrix) -> float:
    """Mean trip length over line length, measured in segments of the loop."""
    flows = od.flows
    s = od.stop_count
    idx = np.arange(s)
    lengths = idx[None, :] - idx[:, None]
    total = od.total
    if total <= 0:
        raise DegenerateDemandError("OD matrix carries zero demand")
    mean_segments = float((flows * np.maximum(lengths, 0)).sum()) / total
    return mean_segments / s


# ---------------------------------------------------------------------------
# synthesis
# ---------------------------------------------------------------------------

def _distance_family(stop_count: int, decay: float, boost: float) -> np.ndarray:
    """Upper-triangular weights decaying with trip length.

    ``decay`` shifts mass between long and short trips, which moves the
    load peak; ``boost`` multiplies the (1, 2) cell, a trip crossing no
    interior stop, which moves the flow peak without touching loads.
    """
    s = stop_count
    w = np.zeros((s, s))
    for i in range(s):
        for j in range(i + 1, s):
            w[i, j] = np.exp(-decay * (j - i - 1))
    w[0, 1] *= 1.0 + boost
    return w


def _peaks_of(weights: np.ndarray) -> tuple[float, float]:
    od = ODMatrix(weights)
    st = compute_statistics(od)
    return st.peak_flow_share, st.peak_load_share


def synthesize_od(stop_count: int, total: float, pattern: str = "uniform", *,
                  rho_target: float | None = None,
                  phi_target: float | None = None,
                  tolerance: float = 0.01) -> ODMatrix:
    """Build an OD matrix with a requested shape.

    ``pattern="uniform"`` spreads demand equally over all downstream
    pairs.  ``pattern="peaked"`` searches a two-parameter trip-length
    family for a matrix whose load and flow peaks hit ``rho_target`` and
    ``phi_target`` within ``tolerance`` (relative), then rescales it to
    ``total``.
    """
    if stop_count < 2:
        raise DemandError("stop_count: needs at least two stops")
    if total <= 0:
        raise DemandError("total: must be positive")

    if pattern == "uniform":
        weights = np.triu(np.ones((stop_count, stop_count)), k=1)
    elif pattern == "peaked":
        if rho_target is None or phi_target is None:
            raise DemandError("peaked pattern needs rho_target and phi_target")
        if stop_count < 3:
            raise SynthesisError("peaked pattern needs at least three stops")
        weights = _solve_peaked(stop_count, rho_target, phi_target)
    else:
        raise DemandError(f"pattern: unknown pattern {pattern!r}")

    weights = weights * (total / weights.sum())
    od = ODMatrix(weights)
    if pattern == "peaked":
        st = compute_statistics(od)
        ok = (abs(st.peak_load_share - rho_target) <= tolerance * rho_target
              and abs(st.peak_flow_share - phi_target) <= tolerance * phi_target)
        if not ok:
            raise SynthesisError(
                f"synthesis missed targets: got rho={st.peak_load_share:.4f}, "
                f"phi={st.peak_flow_share:.4f}")
    return od


def _solve_peaked(stop_count: int, rho_target: float, phi_target: float) -> np.ndarray:
    from scipy.optimize import brentq

    lo_d, hi_d = -12.0, 12.0

    def rho_err(decay: float, boost: float) -> float:
        _, rho = _peaks_of(_distance_family(stop_count, decay, boost))
        return rho - rho_target

    def solve_decay(boost: float) -> float:
        a, b = rho_err(lo_d, boost), rho_err(hi_d, boost)
        if a * b > 0:
            raise SynthesisError(
                f"rho_target={rho_target} unreachable for {stop_count} stops")
        return brentq(lambda d: rho_err(d, boost), lo_d, hi_d, xtol=1e-12)

    def phi_err(boost: float) -> float:
        decay = solve_decay(boost)
        phi, _ = _peaks_of(_distance_family(stop_count, decay, boost))
        return phi - phi_target

    lo_b = -0.999
    err_lo = phi_err(lo_b)
    if err_lo > 0:
        raise SynthesisError(
            f"phi_target={phi_target} below the reachable floor for these peaks")
    hi_b = 1.0
    while phi_err(hi_b) < 0:
        hi_b *= 4.0
        if hi_b > 1e7:
            raise SynthesisError(
                f"phi_target={phi_target} above the reachable ceiling for these peaks")
    boost = brentq(phi_err, lo_b, hi_b, xtol=1e-12)
    return _distance_family(stop_count, solve_decay(boost), boost)


# ---------------------------------------------------------------------------
# CSV round trip
# ---------------------------------------------------------------------------

def load_od_csv(path) -> ODMatrix:
    """Read an OD matrix from a headerless S x S comma-separated file."""
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            try:
                rows.append([float(c) for c in cells])
            except ValueError as exc:
                raise MalformedODError(
                    f"line {line_no}: non-numeric entry ({exc})") from exc
    if not rows:
        raise MalformedODError("empty OD file")
    width = len(rows[0])
    if any(len(r) != width for r in rows) or len(rows) != width:
        raise MalformedODError(
            f"ragged or non-square OD file ({len(rows)} rows, first row {width} cols)")
    return ODMatrix(np.array(rows))


def save_od_csv(od: ODMatrix, path) -> None:
    """Write an OD matrix in the same headerless format, full precision."""
    with open(path, "w", encoding="utf-8") as fh:
        for row in od.flows:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
