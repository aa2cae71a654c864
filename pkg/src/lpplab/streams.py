"""Stream-id registry: the documented derivation of all randomness.

A stream id occupies one 32-bit word of the Philox counter, so two
different ids can never collide, whatever the per-stream counter layout
is.  Site-keyed streams use counters ``(i, j, sample, stream)``;
sequential streams use ``(draw, run, 0, stream)``.

Experiments derive their ids as ``(experiment_id << 4) | role`` so every
experiment samples fresh randomness from the same master seed.
"""

from __future__ import annotations

# Single-instance API and CLI one-shot commands.
ADHOC = 0x01

# Roles within an experiment stream block.
ROLE_PRIMARY = 0  # main weight lattices
ROLE_SECONDARY = 1  # independent comparison lattices
ROLE_CONTROL = 2  # control statistics (e.g. boundary-only sums)
ROLE_EVENTS = 3  # event clocks / occupation draws

# Experiment ids (block base = id << 4).
EXP_VARIANCE_IDENTITY = 1
EXP_VARIANCE_SCALING = 2
EXP_EXIT_TAIL = 3
EXP_ZSTAR_LAW = 4
EXP_RAREFACTION = 5
EXP_TRANSVERSAL = 6
EXP_BURKE = 7
EXP_VARIANCE_COMPARE = 8
EXP_ZEROED_BOUNDS = 9
EXP_TASEP_BRIDGE = 10
EXP_MEAN_FORMULA = 11
EXP_ORACLE = 12
EXP_STRUCTURAL = 13
EXP_SELFCHECK = 14


def stream_for(experiment_id: int, role: int = ROLE_PRIMARY) -> int:
    """Stream id for an experiment role; stable across releases."""
    if not 0 <= role < 16:
        raise ValueError("role must be in [0, 16)")
    return (experiment_id << 4) | role
