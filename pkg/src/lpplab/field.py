"""Last-passage values, increments and exit-point decompositions.

The passage value of a site is the maximal total weight collected by an
up-right path from the origin to it; it obeys
``g[i,j] = max(g[i-1,j], g[i,j-1]) + w[i,j]`` with out-of-range terms
read as zero.  Alongside the value table the field carries its
horizontal and vertical increments and their site-wise minimum, which
drive the time-reversal construction and the stationarity checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import floor

import numpy as np

from .kernels import axis_sums, dp_interior_to_corner, dp_passage
from .weights import WeightArray

__all__ = [
    "LppField",
    "compute_field",
    "brute_force_passage",
    "axis_weight",
    "interior_passage",
    "decompose",
    "characteristic_point",
    "expected_passage",
    "occupied_region",
    "check_monotone_coupling",
    "CouplingVerdict",
]

ENUMERATION_LIMIT = 16  # m + n bound for exhaustive path enumeration


@dataclass(frozen=True)
class LppField:
    """Passage values of one weight lattice.

    ``g`` has shape ``(m+1, n+1)``.  ``inc_h[i, j] = g[i,j] - g[i-1,j]``
    is defined for ``i >= 1`` (NaN at i=0); ``inc_v`` likewise across
    rows (NaN at j=0).  ``site_min[i, j] = min(inc_h[i+1, j],
    inc_v[i, j+1])`` lives on ``[0..m-1] x [0..n-1]`` (NaN on the far
    edges).
    """

    weights: WeightArray
    g: np.ndarray
    inc_h: np.ndarray
    inc_v: np.ndarray
    site_min: np.ndarray

    def __post_init__(self):
        for arr in (self.g, self.inc_h, self.inc_v, self.site_min):
            arr.setflags(write=False)

    @property
    def m(self) -> int:
        return self.g.shape[0] - 1

    @property
    def n(self) -> int:
        return self.g.shape[1] - 1

    @property
    def corner(self) -> float:
        """Passage value of the far corner ``(m, n)``."""
        return float(self.g[self.m, self.n])


def compute_field(w: WeightArray) -> LppField:
    """One O(mn) sweep filling values, increments and site minima."""
    g = np.empty_like(w.omega)
    dp_passage(w.omega, g)
    m1, n1 = g.shape
    inc_h = np.full((m1, n1), np.nan)
    inc_v = np.full((m1, n1), np.nan)
    inc_h[1:, :] = g[1:, :] - g[:-1, :]
    inc_v[:, 1:] = g[:, 1:] - g[:, :-1]
    site_min = np.full((m1, n1), np.nan)
    site_min[:-1, :-1] = np.minimum(inc_h[1:, :-1], inc_v[:-1, 1:])
    return LppField(weights=w, g=g, inc_h=inc_h, inc_v=inc_v, site_min=site_min)


@lru_cache(maxsize=64)
def _path_site_indices(m: int, n: int) -> np.ndarray:
    """Flat site indices of every up-right path from (0,0) to (m,n).

    Row k lists the ``m+n+1`` sites of path k in visit order, as flat
    indices into an ``(m+1, n+1)`` array.
    """
    total = m + n
    paths = []
    for horiz in combinations(range(total), m):
        i = j = 0
        sites = [0]
        hset = set(horiz)
        for step in range(total):
            if step in hset:
                i += 1
            else:
                j += 1
            sites.append(i * (n + 1) + j)
        paths.append(sites)
    return np.asarray(paths, dtype=np.intp)


def brute_force_passage(w: WeightArray) -> float:
    """Corner passage value by exhaustive path enumeration.

    Independent of the recurrence sweep on purpose; restricted to
    ``m + n <= ENUMERATION_LIMIT``.
    """
    if w.m + w.n > ENUMERATION_LIMIT:
        raise ValueError(f"enumeration limited to m + n <= {ENUMERATION_LIMIT}")
    idx = _path_site_indices(w.m, w.n)
    return float(w.omega.ravel()[idx].sum(axis=1).max())


def axis_weight(f: LppField, x: int) -> float:
    """Weight collected along an axis up to signed position ``x``.

    Positive ``x`` sums the south row up to column ``x``, negative the
    west column up to row ``-x``; ``x = 0`` gives 0.
    """
    if not -f.n <= x <= f.m:
        raise ValueError(f"axis position {x} outside [-{f.n}, {f.m}]")
    if x >= 0:
        return float(f.g[x, 0])
    return float(f.g[0, -x])


def interior_passage(w: WeightArray, x: int, m: int | None = None, n: int | None = None) -> float:
    """Best weight from the interior site over signed axis position ``x``
    to ``(m, n)``, using interior weights only.

    A path for positive ``x`` starts at ``(x, 1)`` (immediately leaving
    the axis, not counting the axis weight itself), for negative ``x``
    at ``(1, -x)``; positions -1, 0, 1 share the common start ``(1, 1)``.
    """
    m = w.m if m is None else m
    n = w.n if n is None else n
    i0 = max(x, 1)
    j0 = max(-x, 1)
    if not (1 <= i0 <= m and 1 <= j0 <= n):
        raise ValueError(f"degenerate rectangle for x={x} within ({m}, {n})")
    sub = np.ascontiguousarray(w.omega[i0 : m + 1, j0 : n + 1])
    g = np.empty_like(sub)
    dp_passage(sub, g)
    return float(g[-1, -1])


def decompose(f: LppField) -> tuple[int, float, float]:
    """Split the corner value into axis weight plus interior passage.

    Returns ``(z, u, a)`` with ``u + a`` equal to the corner value:
    ``z`` is the signed exit point maximizing the split (ties, possible
    only under degenerate weights, resolve toward the largest ``z``,
    matching the rightmost backtracking policy).
    """
    m, n = f.m, f.n
    b = np.empty_like(f.g)
    dp_interior_to_corner(f.weights.omega, b)
    south, west = axis_sums(f.weights.omega)
    # candidate totals for z = -n..-1 and z = 1..m, scanned upward so
    # ties leave the largest z in place
    best_z = -n
    best_total = west[n] + b[1, n]
    best_u = west[n]
    best_a = b[1, n]
    for z in range(-n + 1, 0):
        tot = west[-z] + b[1, -z]
        if tot >= best_total:
            best_z, best_total, best_u, best_a = z, tot, west[-z], b[1, -z]
    for z in range(1, m + 1):
        tot = south[z] + b[z, 1]
        if tot >= best_total:
            best_z, best_total, best_u, best_a = z, tot, south[z], b[z, 1]
    return best_z, float(best_u), float(best_a)


def characteristic_point(rho: float, t: float) -> tuple[int, int]:
    """Lattice point ``(floor((1-rho)^2 t), floor(rho^2 t))``.

    Along this ray the passage value fluctuates sub-diffusively; both
    coordinates must come out at least 1.
    """
    if not 0.0 < rho < 1.0:
        raise ValueError("density must lie in (0, 1)")
    m = floor((1.0 - rho) ** 2 * t)
    n = floor(rho**2 * t)
    if m < 1 or n < 1:
        raise ValueError(f"time {t} too small for density {rho}: point ({m}, {n})")
    return m, n


def expected_passage(rho: float, t: float) -> float:
    """Exact mean of the stationary corner value at the characteristic point."""
    m, n = characteristic_point(rho, t)
    return m / (1.0 - rho) + n / rho


def occupied_region(f: LppField, t: float) -> set[tuple[int, int]]:
    """Sites whose passage value is at most ``t`` (down-left closed)."""
    if t < 0:
        return set()
    ii, jj = np.nonzero(f.g <= t)
    return set(zip(ii.tolist(), jj.tolist()))


@dataclass(frozen=True)
class CouplingVerdict:
    ok: bool
    max_h_violation: float
    max_v_violation: float
    first_violation: tuple[int, int] | None

    def __bool__(self) -> bool:
        return self.ok


def check_monotone_coupling(w: WeightArray, w2: WeightArray, atol: float = 1e-9) -> CouplingVerdict:
    """Increment comparison for two lattices coupled through the boundary.

    Hypothesis: ``w`` dominates ``w2`` on the west column, is dominated
    on the south row, and the interiors agree.  Conclusion checked:
    horizontal increments of ``w`` never exceed those of ``w2`` and
    vertical increments never fall below, at every site.
    """
    if w.omega.shape != w2.omega.shape:
        raise ValueError("coupled arrays must share dimensions")
    if np.any(w.west < w2.west) or np.any(w.south > w2.south):
        raise ValueError("boundary domination hypothesis violated")
    if not np.array_equal(w.interior, w2.interior):
        raise ValueError("interiors must agree exactly")
    f = compute_field(w)
    f2 = compute_field(w2)
    dh = f.inc_h[1:, :] - f2.inc_h[1:, :]  # should be <= 0
    dv = f2.inc_v[:, 1:] - f.inc_v[:, 1:]  # should be <= 0
    max_h = float(dh.max(initial=-np.inf))
    max_v = float(dv.max(initial=-np.inf))
    ok = max_h <= atol and max_v <= atol
    first = None
    if not ok:
        if max_h > atol:
            i, j = np.unravel_index(int(np.argmax(dh)), dh.shape)
            first = (int(i) + 1, int(j))
        else:
            i, j = np.unravel_index(int(np.argmax(dv)), dv.shape)
            first = (int(i), int(j) + 1)
    return CouplingVerdict(ok=ok, max_h_violation=max_h, max_v_violation=max_v, first_violation=first)
