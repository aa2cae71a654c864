"""Competition interface, its projections, and the reversed process.

The interface is the up-right trajectory from the origin that always
steps toward the strictly smaller passage value.  Rebuilt on the
reversed field it retraces the maximal path backwards, which is what
ties the interface's hitting coordinates to the exit point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import LppField, compute_field
from .paths import backtrack_path
from .weights import Custom, Equilibrium, WeightArray

__all__ = [
    "CompetitionInterface",
    "build_interface",
    "z_star_of",
    "reverse_process",
    "check_reversal_duality",
    "ReversalVerdict",
]


@dataclass(frozen=True)
class CompetitionInterface:
    """Interface trajectory with first-hit projections.

    ``sites`` runs from the origin until the trajectory reaches the
    east edge (i = m, termination "east") or the north edge (j = n,
    "north"), beyond which the comparison would need values outside the
    rectangle.  ``v[j]`` is the first-hit column on row j and ``w[i]``
    the first-hit row on column i; rows/columns never visited carry the
    sentinel m+1 / n+1.  ``z_star`` is ``[m - v[n]]+ - [n - w[m]]+``.
    """

    sites: tuple[tuple[int, int], ...]
    termination: str
    v: np.ndarray
    w: np.ndarray
    z_star: int
    ties: int

    def __post_init__(self):
        self.v.setflags(write=False)
        self.w.setflags(write=False)

    def v_hit(self, row: int) -> bool:
        """True when the trajectory ever reached row ``row``."""
        return int(self.v[row]) <= len(self.w) - 1

    def w_hit(self, col: int) -> bool:
        """True when the trajectory ever reached column ``col``."""
        return int(self.w[col]) <= len(self.v) - 1


def build_interface(f: LppField) -> CompetitionInterface:
    """Trace the smaller-value trajectory across the rectangle.

    On exact equality of the two candidate values (possible only under
    degenerate weights) the trajectory steps right; the case is counted
    in ``ties``.
    """
    g = f.g
    m, n = f.m, f.n
    v = np.full(n + 1, m + 1, dtype=np.int64)
    w = np.full(m + 1, n + 1, dtype=np.int64)
    i = j = 0
    v[0] = 0
    w[0] = 0
    sites = [(0, 0)]
    ties = 0
    while i < m and j < n:
        right = g[i + 1, j]
        up = g[i, j + 1]
        if right == up:
            ties += 1
        if right <= up:
            i += 1
        else:
            j += 1
        sites.append((i, j))
        if v[j] > i:
            v[j] = i
        if w[i] > j:
            w[i] = j
    termination = "east" if i == m else "north"
    z_star = max(m - int(v[n]), 0) - max(n - int(w[m]), 0)
    return CompetitionInterface(
        sites=tuple(sites),
        termination=termination,
        v=v,
        w=w,
        z_star=z_star,
        ties=ties,
    )


def z_star_of(f: LppField) -> int:
    """Signed first-hit distance of the interface from the far corner.

    Equal in law to the exit point of the maximal path; per instance
    the two generally differ.
    """
    return build_interface(f).z_star


def reverse_process(f: LppField) -> tuple[WeightArray, LppField]:
    """Rebuild the growth process seen from the far corner.

    The reversed lattice takes its south row from the horizontal
    increments along the north edge (reflected), its west column from
    the vertical increments along the east edge, and its interior from
    the site minima, reflected through the rectangle center.  Its
    passage values satisfy ``g*[i, j] = g[m, n] - g[m-i, n-j]``; for a
    stationary input the pair (values, weights) is a copy in law of the
    forward pair.
    """
    m, n = f.m, f.n
    omega = np.empty((m + 1, n + 1))
    omega[0, 0] = 0.0
    # south row: omega*[i, 0] = inc_h[m-i+1, n]
    omega[1:, 0] = f.inc_h[1:, n][::-1]
    # west column: omega*[0, j] = inc_v[m, n-j+1]
    omega[0, 1:] = f.inc_v[m, 1:][::-1]
    # interior: omega*[i, j] = site_min[m-i, n-j]
    omega[1:, 1:] = f.site_min[:m, :n][::-1, ::-1]
    src = f.weights.boundary
    if isinstance(src, Equilibrium):
        boundary = Equilibrium(src.rho)
    else:
        boundary = Custom(south=tuple(omega[1:, 0]), west=tuple(omega[0, 1:]))
    w_star = WeightArray(omega=omega, boundary=boundary, seed=f.weights.seed, uniforms=None)
    return w_star, compute_field(w_star)


@dataclass(frozen=True)
class ReversalVerdict:
    ok: bool
    checked_steps: int
    ambiguous: bool
    max_value_residual: float

    def __bool__(self) -> bool:
        return self.ok


def check_reversal_duality(f: LppField, atol: float = 1e-9) -> ReversalVerdict:
    """Verify the interface of the reversed field retraces the maximal path.

    With exit point z, the reversed interface must satisfy
    ``phi*[k] = (m, n) - path[m+n-k]`` for ``0 <= k <= m+n-|z|``, and
    the reversed values must reproduce the reflected value table.  The
    verdict is flagged ambiguous when any tie policy fired.
    """
    m, n = f.m, f.n
    path = backtrack_path(f, "rightmost")
    w_star, f_star = reverse_process(f)
    phi = build_interface(f_star)
    residual = float(
        np.max(np.abs(f_star.g - (f.corner - f.g[::-1, ::-1])))
    )
    k_max = m + n - abs(path.exit_z)
    ok = residual <= atol and len(phi.sites) >= k_max + 1
    checked = 0
    if ok:
        for k in range(k_max + 1):
            pi = path.sites[m + n - k]
            if phi.sites[k] != (m - pi[0], n - pi[1]):
                ok = False
                break
            checked += 1
    return ReversalVerdict(
        ok=ok,
        checked_steps=checked,
        ambiguous=path.ties > 0 or phi.ties > 0,
        max_value_residual=residual,
    )
