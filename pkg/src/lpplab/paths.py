"""Maximal up-right paths: backtracking, exit points, row coordinates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import LppField

__all__ = ["LatticePath", "backtrack_path", "path_row_coordinates"]

POLICIES = ("rightmost", "leftmost")


@dataclass(frozen=True)
class LatticePath:
    """An up-right path from the origin to ``(m, n)`` with provenance.

    ``sites`` lists every lattice point in forward order.  ``exit_z``
    is the signed index of the last axis site: positive means the path
    leaves via the south row at ``(exit_z, 0)``, negative via the west
    column at ``(0, -exit_z)``.  ``ties`` counts argmax comparisons that
    needed the policy (zero for continuous weights almost surely).
    """

    sites: tuple[tuple[int, int], ...]
    policy: str
    exit_z: int
    total_weight: float
    ties: int

    @property
    def m(self) -> int:
        return self.sites[-1][0]

    @property
    def n(self) -> int:
        return self.sites[-1][1]


def backtrack_path(f: LppField, policy: str = "rightmost") -> LatticePath:
    """Walk the argmax of the recurrence from ``(m, n)`` back to the origin.

    At each site the predecessor achieving the larger passage value is
    taken.  On exact float equality the rightmost policy steps to the
    vertical predecessor, keeping the path as far toward the south/east
    side as a maximizer allows; leftmost does the opposite.
    """
    if policy not in POLICIES:
        raise ValueError(f"policy must be one of {POLICIES}")
    g = f.g
    i, j = f.m, f.n
    rev = [(i, j)]
    ties = 0
    while i > 0 and j > 0:
        a = g[i - 1, j]
        b = g[i, j - 1]
        if a > b:
            i -= 1
        elif a < b:
            j -= 1
        else:
            ties += 1
            if policy == "rightmost":
                j -= 1
            else:
                i -= 1
        rev.append((i, j))
    exit_z = i if j == 0 else -j
    while i > 0:
        i -= 1
        rev.append((i, j))
    while j > 0:
        j -= 1
        rev.append((i, j))
    rev.reverse()
    return LatticePath(
        sites=tuple(rev),
        policy=policy,
        exit_z=int(exit_z),
        total_weight=f.corner,
        ties=ties,
    )


def path_row_coordinates(p: LatticePath, l: int) -> tuple[int, int]:
    """Extreme i-coordinates of the path on row ``l``: (rightmost, leftmost)."""
    if not 0 <= l <= p.n:
        raise ValueError(f"row {l} outside [0, {p.n}]")
    cols = [i for (i, j) in p.sites if j == l]
    return max(cols), min(cols)
