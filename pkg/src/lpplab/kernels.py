"""Compiled hot loops: weight fills, lattice DP, and batched sampling.

All kernels are deterministic functions of their arguments.  The
sequential corner-to-corner sweep keeps the recurrence
``g[i,j] = max(g[i-1,j], g[i,j-1]) + w[i,j]`` exact in floating point
(no reassociation), which the structural test suite relies on.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit, prange

from .rng import philox_u53

RIGHTMOST = 0
LEFTMOST = 1


@njit(cache=True)
def fill_weights(w, sample, stream, k0, k1, rho, south_scale, west_scale):
    """Exponential weights from per-site uniforms, boundary rates scaled.

    Interior sites get rate 1; the south row (j=0) rate ``1-rho`` scaled
    by ``south_scale``; the west column (i=0) rate ``rho`` scaled by
    ``west_scale``.  Scale 1 is the stationary boundary, 0 a zeroed one,
    values in (0,1) a dominated boundary, and ratios like
    ``(1-rho)/(1-lam)`` re-rate an axis to another density while keeping
    the underlying uniforms shared.
    """
    m1, n1 = w.shape
    w[0, 0] = 0.0
    for i in range(1, m1):
        base = -math.log(philox_u53(i, 0, sample, stream, k0, k1)) / (1.0 - rho)
        w[i, 0] = south_scale * base
    for j in range(1, n1):
        base = -math.log(philox_u53(0, j, sample, stream, k0, k1)) / rho
        w[0, j] = west_scale * base
    for i in range(1, m1):
        for j in range(1, n1):
            w[i, j] = -math.log(philox_u53(i, j, sample, stream, k0, k1))


@njit(cache=True)
def dp_passage(w, g):
    """Fill ``g`` with last-passage values of ``w`` (row-major sweep)."""
    m1, n1 = w.shape
    g[0, 0] = w[0, 0]
    for j in range(1, n1):
        g[0, j] = g[0, j - 1] + w[0, j]
    for i in range(1, m1):
        g[i, 0] = g[i - 1, 0] + w[i, 0]
        gi = g[i]
        gp = g[i - 1]
        wi = w[i]
        for j in range(1, n1):
            a = gp[j]
            b = gi[j - 1]
            gi[j] = (a if a > b else b) + wi[j]


@njit(cache=True)
def dp_interior_to_corner(w, b):
    """Reverse DP: ``b[i,j]`` = best interior path weight from (i,j) to (m,n).

    Only interior weights participate; row 0 and column 0 of ``b`` are
    set to -inf so they can never be mistaken for path values.
    """
    m1, n1 = w.shape
    m = m1 - 1
    n = n1 - 1
    for i in range(m1):
        b[i, 0] = -np.inf
    for j in range(n1):
        b[0, j] = -np.inf
    b[m, n] = w[m, n]
    for j in range(n - 1, 0, -1):
        b[m, j] = b[m, j + 1] + w[m, j]
    for i in range(m - 1, 0, -1):
        bi = b[i]
        bn = b[i + 1]
        wi = w[i]
        bi[n] = bn[n] + wi[n]
        for j in range(n - 1, 0, -1):
            a = bn[j]
            c = bi[j + 1]
            bi[j] = (a if a > c else c) + wi[j]


@njit(cache=True)
def backtrack_stats(g, policy, row_l):
    """Walk the argmax path from the far corner back to the origin.

    Returns ``(z, right_i, left_i, ties)`` where ``z`` is the signed
    exit point, ``right_i``/``left_i`` are the extreme i-coordinates of
    the walked path on row ``row_l`` (or -1 when ``row_l < 0``), and
    ``ties`` counts exact comparisons resolved by the policy.

    Exact float equality defines a tie: coincidences between
    independent continuous sums only occur when structurally forced
    (zeroed boundaries), which is precisely when the policy matters.
    The rightmost policy takes the vertical predecessor so the path
    hugs the south/east side; leftmost takes the horizontal one.
    """
    m1, n1 = g.shape
    i = m1 - 1
    j = n1 - 1
    right_i = -1
    left_i = -1
    ties = 0
    if j == row_l:
        right_i = i
        left_i = i
    while i > 0 and j > 0:
        a = g[i - 1, j]
        b = g[i, j - 1]
        if a > b:
            i -= 1
        elif a < b:
            j -= 1
        else:
            ties += 1
            if policy == RIGHTMOST:
                j -= 1
            else:
                i -= 1
        if j == row_l:
            if right_i < 0:
                right_i = i
            left_i = i
    if i == 0:
        z = -j
        if 0 <= row_l <= j:
            if right_i < 0:
                right_i = 0
            left_i = 0
    else:
        z = i
        if row_l == 0:
            if right_i < 0:
                right_i = i
            left_i = 0
    return z, right_i, left_i, ties


@njit(cache=True)
def axis_sums(w):
    """Prefix sums along both axes: ``(south[0..m], west[0..n])``."""
    m1, n1 = w.shape
    south = np.empty(m1)
    west = np.empty(n1)
    south[0] = 0.0
    west[0] = 0.0
    for i in range(1, m1):
        south[i] = south[i - 1] + w[i, 0]
    for j in range(1, n1):
        west[j] = west[j - 1] + w[0, j]
    return south, west


@njit(cache=True, parallel=True)
def sample_stats_batch(
    m,
    n,
    rho,
    south_scale,
    west_scale,
    k0,
    k1,
    stream,
    first_sample,
    count,
    want_exit,
    row_l,
):
    """Monte Carlo batch: corner value and path statistics per sample.

    Sample ``first_sample + s`` regenerates its own weight lattice from
    the counter stream, so results are independent of batch splits and
    thread schedule.  Outputs per sample: corner value ``gmn``; signed
    exit point ``z`` of the rightmost argmax path with the axis weight
    ``uz`` it collects (when ``want_exit``); the rightmost i-coordinate
    of the rightmost path and the leftmost i-coordinate of the leftmost
    path on row ``row_l`` (when ``row_l >= 0``).
    """
    gmn = np.empty(count)
    z = np.zeros(count, dtype=np.int64)
    uz = np.zeros(count)
    right_i = np.full(count, -1, dtype=np.int64)
    left_i = np.full(count, -1, dtype=np.int64)
    for s in prange(count):
        w = np.empty((m + 1, n + 1))
        g = np.empty((m + 1, n + 1))
        fill_weights(w, first_sample + s, stream, k0, k1, rho, south_scale, west_scale)
        dp_passage(w, g)
        gmn[s] = g[m, n]
        if want_exit or row_l >= 0:
            ze, ri, _, _ = backtrack_stats(g, RIGHTMOST, row_l)
            z[s] = ze
            right_i[s] = ri
            if row_l >= 0:
                _, _, li, _ = backtrack_stats(g, LEFTMOST, row_l)
                left_i[s] = li
            if want_exit:
                acc = 0.0
                if ze > 0:
                    for i in range(1, ze + 1):
                        acc += w[i, 0]
                else:
                    for j in range(1, -ze + 1):
                        acc += w[0, j]
                uz[s] = acc
    return gmn, z, uz, right_i, left_i


@njit(cache=True, parallel=True)
def boundary_sum_batch(m, rho, k0, k1, stream, first_sample, count):
    """South-boundary row sums (diffusive control statistic)."""
    out = np.empty(count)
    for s in prange(count):
        acc = 0.0
        for i in range(1, m + 1):
            acc += -math.log(philox_u53(i, 0, first_sample + s, stream, k0, k1)) / (1.0 - rho)
        out[s] = acc
    return out


@njit(cache=True, parallel=True)
def corner_pair_batch(m, n, rho, s2, w2, k0, k1, stream, first_sample, count):
    """Coupled corner values at the base density and a rescaled-axis copy.

    Both lattices share every uniform; the second scales the south row
    by ``s2`` and the west column by ``w2``.
    """
    g_base = np.empty(count)
    g_alt = np.empty(count)
    for s in prange(count):
        w = np.empty((m + 1, n + 1))
        g = np.empty((m + 1, n + 1))
        fill_weights(w, first_sample + s, stream, k0, k1, rho, 1.0, 1.0)
        dp_passage(w, g)
        g_base[s] = g[m, n]
        for i in range(1, m + 1):
            w[i, 0] = s2 * w[i, 0]
        for j in range(1, n + 1):
            w[0, j] = w2 * w[0, j]
        dp_passage(w, g)
        g_alt[s] = g[m, n]
    return g_base, g_alt
