"""Event-driven totally asymmetric simple exclusion process.

Particles occupy integer sites, at most one per site, and each particle
jumps one step right at rate 1 whenever the target site is vacant.  The
initial state is the stationary product measure of density ``rho``
conditioned on a hole at the origin and a particle at site one (the
state seen from a typical particle right after its jump).  Holes are
labeled left to right starting from the origin hole, particles right to
left starting from the site-one particle; the matrix entry ``T[i, j]``
records when hole i and particle j exchange places, the event whose law
matches the corner-growth occupation time of site ``(i, j)``.

The infinite lattice is replaced by a finite window with frozen edges;
a run is invalidated (:class:`MarginBreach`) if any tracked label gets
near the edge or drifts beyond twice the simulated horizon, so freezing
can never have influenced a recorded value.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from . import streams
from .rng import SeedRecord, UniformSequence

__all__ = [
    "TasepTrajectory",
    "MarginBreach",
    "init_palm_conditioned",
    "simulate",
    "burke_marginals",
]


class MarginBreach(RuntimeError):
    """A tracked label reached the safety margin; the run is invalid."""


@dataclass
class TasepTrajectory:
    """Labeled exclusion configuration plus its recorded history."""

    rho: float
    seed: SeedRecord
    lo: int
    hi: int
    track_bound: int
    occ: np.ndarray
    label: np.ndarray
    time: float = 0.0
    horizon: float = 0.0
    events: list = field(default_factory=list)  # (time, particle, hole, site)
    exchange_times: np.ndarray | None = None  # T[hole, particle]
    particle_pos: dict | None = None  # tracked particle label -> site
    hole_pos: dict | None = None
    identity_violations: int = 0
    _rng: UniformSequence | None = None
    _heap: list = field(default_factory=list)
    _version: np.ndarray | None = None

    @property
    def window(self) -> tuple[int, int]:
        return self.lo, self.hi

    def site_occupied(self, x: int) -> bool:
        return bool(self.occ[x - self.lo])

    def label_at(self, x: int) -> int:
        return int(self.label[x - self.lo])

    def check_invariants(self) -> None:
        """Exclusion is structural; verify label orderings site by site."""
        last_p = None
        last_h = None
        for idx in range(self.occ.size):
            lab = int(self.label[idx])
            if self.occ[idx]:
                if last_p is not None and lab >= last_p:
                    raise AssertionError("particle labels must decrease left to right")
                last_p = lab
            else:
                if last_h is not None and lab <= last_h:
                    raise AssertionError("hole labels must increase left to right")
                last_h = lab


def init_palm_conditioned(
    rho: float,
    window: tuple[int, int],
    seed: int,
    *,
    sample: int = 0,
    stream: int = streams.ADHOC,
    track_bound: int = 5,
) -> TasepTrajectory:
    """Initial labeled state: hole at 0, particle at 1, Bernoulli elsewhere."""
    if not 0.0 < rho < 1.0:
        raise ValueError("density must lie in (0, 1)")
    lo, hi = int(window[0]), int(window[1])
    if not (lo <= 0 and hi >= 1):
        raise ValueError("window must contain sites 0 and 1")
    record = SeedRecord(seed=seed, stream=stream, sample=sample)
    rng = UniformSequence(record)
    size = hi - lo + 1
    occ = np.zeros(size, dtype=np.int8)
    for x in range(lo, hi + 1):
        if x == 0:
            occ[x - lo] = 0
        elif x == 1:
            occ[x - lo] = 1
        else:
            occ[x - lo] = 1 if rng.bernoulli(rho) else 0

    label = np.zeros(size, dtype=np.int64)
    # particles: label 0 at site 1, increasing to the left, negative to the right
    nxt = 1
    for x in range(0, lo - 1, -1):
        if occ[x - lo]:
            label[x - lo] = nxt
            nxt += 1
    nxt = -1
    for x in range(2, hi + 1):
        if occ[x - lo]:
            label[x - lo] = nxt
            nxt -= 1
    label[1 - lo] = 0
    # holes: label 0 at site 0, increasing to the right, negative to the left
    nxt = 1
    for x in range(2, hi + 1):
        if not occ[x - lo]:
            label[x - lo] = nxt
            nxt += 1
    nxt = -1
    for x in range(-1, lo - 1, -1):
        if not occ[x - lo]:
            label[x - lo] = nxt
            nxt -= 1
    label[0 - lo] = 0

    bound = int(track_bound)
    t_matrix = np.full((bound + 1, bound + 1), np.nan)
    t_matrix[0, 0] = 0.0  # the conditioning is the time-zero exchange

    particle_pos = {}
    hole_pos = {}
    for x in range(lo, hi + 1):
        lab = int(label[x - lo])
        if 0 <= lab <= bound:
            if occ[x - lo]:
                particle_pos[lab] = x
            else:
                hole_pos[lab] = x

    traj = TasepTrajectory(
        rho=rho,
        seed=record,
        lo=lo,
        hi=hi,
        track_bound=bound,
        occ=occ,
        label=label,
        exchange_times=t_matrix,
        particle_pos=particle_pos,
        hole_pos=hole_pos,
        _rng=rng,
    )
    traj._version = np.zeros(size, dtype=np.int64)
    return traj


def _schedule(traj: TasepTrajectory, x: int) -> None:
    """Arm the clock of the pair (x, x+1) if it is a mobile particle."""
    if x < traj.lo or x + 1 > traj.hi:
        return
    idx = x - traj.lo
    if traj.occ[idx] and not traj.occ[idx + 1]:
        ring = traj.time + traj._rng.exponential(1.0)
        heapq.heappush(traj._heap, (ring, x, int(traj._version[idx])))


def _margin_ok(traj: TasepTrajectory) -> bool:
    limit = 2.0 * traj.horizon
    for pos in traj.particle_pos.values():
        if abs(pos) > limit or pos <= traj.lo + 1 or pos >= traj.hi - 1:
            return False
    for pos in traj.hole_pos.values():
        if abs(pos) > limit or pos <= traj.lo + 1 or pos >= traj.hi - 1:
            return False
    return True


def simulate(traj: TasepTrajectory, horizon: float, *, until=None) -> TasepTrajectory:
    """Run the exclusion dynamics up to ``horizon``.

    Each admissible jump carries an independent unit-rate exponential
    clock, re-armed whenever the local configuration changes
    (memorylessness makes this the generator dynamics).  Every exchange
    between tracked labels lands in ``exchange_times``; all exchanges
    are appended to the event log.  An optional ``until`` predicate
    stops the run early once the quantities of interest are recorded.

    Raises :class:`MarginBreach` when a tracked label approaches the
    frozen window edge, which invalidates the run.
    """
    if horizon < traj.time:
        raise ValueError("horizon precedes current simulation time")
    traj.horizon = float(horizon)
    if not _margin_ok(traj):
        raise MarginBreach("window too small for the tracked labels")
    if not traj._heap:
        for x in range(traj.lo, traj.hi):
            _schedule(traj, x)
    bound = traj.track_bound
    stopped_early = False
    while traj._heap:
        ring, x, ver = heapq.heappop(traj._heap)
        idx = x - traj.lo
        if ver != traj._version[idx]:
            continue  # stale clock
        if ring > horizon:
            heapq.heappush(traj._heap, (ring, x, ver))
            break
        if not (traj.occ[idx] and not traj.occ[idx + 1]):
            continue
        traj.time = ring
        plab = int(traj.label[idx])
        hlab = int(traj.label[idx + 1])
        traj.occ[idx] = 0
        traj.occ[idx + 1] = 1
        traj.label[idx] = hlab
        traj.label[idx + 1] = plab
        traj.events.append((ring, plab, hlab, x))
        # exchange geometry: the particle lands on site hole-label minus
        # particle-label plus one
        if x + 1 != hlab - plab + 1:
            traj.identity_violations += 1
        if 0 <= plab <= bound:
            traj.particle_pos[plab] = x + 1
        if 0 <= hlab <= bound:
            traj.hole_pos[hlab] = x
        if 0 <= plab <= bound and 0 <= hlab <= bound:
            traj.exchange_times[hlab, plab] = ring
        for y in (x - 1, x + 1):
            if traj.lo <= y < traj.hi:
                traj._version[y - traj.lo] += 1
        traj._version[idx] += 1
        _schedule(traj, x - 1)
        _schedule(traj, x + 1)
        if not _margin_ok(traj):
            raise MarginBreach(f"tracked label near window edge at t={ring:.3f}")
        if until is not None and until(traj):
            stopped_early = True
            break
    if not stopped_early:
        traj.time = horizon
    return traj


def burke_marginals(traj: TasepTrajectory) -> tuple[np.ndarray, np.ndarray]:
    """Jump-time sequences of the tagged particle and tagged hole."""
    p0 = np.array([t for (t, p, _h, _x) in traj.events if p == 0])
    h0 = np.array([t for (t, _p, h, _x) in traj.events if h == 0])
    return p0, h0
