"""Weight lattices for the corner growth model.

A weight array assigns a nonnegative value to every site of
``[0..m] x [0..n]``; the origin always carries 0.  Sites on the south
row (j = 0) and west column (i = 0) are the boundary, everything else
the interior.  The stationary lattice of density ``rho`` draws the
south row at rate ``1 - rho``, the west column at rate ``rho`` and the
interior at rate 1, all independent.

Weights are produced by inverse CDF, ``-log(u)/rate``, from a
counter-based per-site uniform stream, so arrays at different densities
or with dominated boundaries can share every uniform and differ only by
deterministic rescaling.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import streams
from .rng import SeedRecord, site_uniforms

__all__ = [
    "Equilibrium",
    "Rarefaction",
    "ZeroWest",
    "ZeroSouth",
    "ZeroBoth",
    "Custom",
    "BoundaryKind",
    "WeightArray",
    "sample_equilibrium",
    "couple_density",
    "apply_boundary",
    "transpose_weights",
    "weights_to_csv",
    "weights_from_csv",
]


def _check_density(rho: float) -> float:
    if not 0.0 < rho < 1.0:
        raise ValueError(f"density must lie in (0, 1), got {rho}")
    return float(rho)


def _as_mult(value, length: int, what: str) -> np.ndarray:
    arr = np.broadcast_to(np.asarray(value, dtype=np.float64), (length,)).copy()
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError(f"{what} multipliers must lie in [0, 1]")
    return arr


@dataclass(frozen=True)
class Equilibrium:
    """Stationary boundary: south rate ``1-rho``, west rate ``rho``."""

    rho: float

    def __post_init__(self):
        _check_density(self.rho)


@dataclass(frozen=True)
class Rarefaction:
    """Boundary dominated by the stationary one of density ``rho``.

    ``south`` / ``west`` are per-site multipliers in [0, 1] (scalar or
    sequences of length m and n), guaranteeing pointwise domination.
    """

    rho: float
    south: Union[float, tuple] = 1.0
    west: Union[float, tuple] = 1.0

    def __post_init__(self):
        _check_density(self.rho)


@dataclass(frozen=True)
class ZeroWest:
    """West column zeroed; south row keeps rate ``1-rho``."""

    rho: float

    def __post_init__(self):
        _check_density(self.rho)


@dataclass(frozen=True)
class ZeroSouth:
    """South row zeroed; west column keeps rate ``rho``."""

    rho: float

    def __post_init__(self):
        _check_density(self.rho)


@dataclass(frozen=True)
class ZeroBoth:
    """Both axes zeroed: passage values ignore the boundary entirely."""

    rho: float

    def __post_init__(self):
        _check_density(self.rho)


@dataclass(frozen=True)
class Custom:
    """Explicit boundary values (south row then west column)."""

    south: tuple
    west: tuple

    def __post_init__(self):
        if any(v < 0 for v in self.south) or any(v < 0 for v in self.west):
            raise ValueError("custom boundary values must be nonnegative")


BoundaryKind = Union[Equilibrium, Rarefaction, ZeroWest, ZeroSouth, ZeroBoth, Custom]


def _kind_rho(kind: BoundaryKind):
    return getattr(kind, "rho", None)


@dataclass(frozen=True)
class WeightArray:
    """Immutable weight lattice with boundary metadata and provenance.

    ``omega[i, j]`` is the weight of site ``(i, j)``, ``i`` horizontal.
    ``uniforms`` holds the per-site uniforms the array was generated
    from (``None`` for arrays read from disk or built by hand).
    """

    omega: np.ndarray
    boundary: BoundaryKind
    seed: SeedRecord
    uniforms: np.ndarray | None = None

    def __post_init__(self):
        if self.omega.ndim != 2 or self.omega.shape[0] < 2 or self.omega.shape[1] < 2:
            raise ValueError("weight array needs at least a 1x1 lattice")
        if self.omega[0, 0] != 0.0:
            raise ValueError("origin weight must be zero")
        if np.any(self.omega < 0.0):
            raise ValueError("weights must be nonnegative")
        self.omega.setflags(write=False)
        if self.uniforms is not None:
            self.uniforms.setflags(write=False)

    @property
    def m(self) -> int:
        return self.omega.shape[0] - 1

    @property
    def n(self) -> int:
        return self.omega.shape[1] - 1

    @property
    def south(self) -> np.ndarray:
        """Boundary row ``omega[1..m, 0]``."""
        return self.omega[1:, 0]

    @property
    def west(self) -> np.ndarray:
        """Boundary column ``omega[0, 1..n]``."""
        return self.omega[0, 1:]

    @property
    def interior(self) -> np.ndarray:
        return self.omega[1:, 1:]


def sample_equilibrium(
    rho: float,
    m: int,
    n: int,
    seed: int,
    *,
    sample: int = 0,
    stream: int = streams.ADHOC,
) -> WeightArray:
    """Draw a stationary weight lattice of density ``rho`` on [0..m]x[0..n].

    The same ``(seed, stream, sample, m, n, rho)`` always reproduces a
    bit-identical array.
    """
    _check_density(rho)
    if m < 1 or n < 1:
        raise ValueError("lattice dimensions must be at least 1")
    record = SeedRecord(seed=seed, stream=stream, sample=sample)
    u = site_uniforms(m, n, record)
    omega = np.empty_like(u)
    omega[0, 0] = 0.0
    omega[1:, 0] = -np.log(u[1:, 0]) / (1.0 - rho)
    omega[0, 1:] = -np.log(u[0, 1:]) / rho
    omega[1:, 1:] = -np.log(u[1:, 1:])
    return WeightArray(omega=omega, boundary=Equilibrium(rho), seed=record, uniforms=u)


def couple_density(w: WeightArray, lam: float) -> WeightArray:
    """Rescale a stationary array from its density to ``lam``.

    South weights scale by ``(1-rho)/(1-lam)``, west weights by
    ``rho/lam``, the interior is untouched, so the result is the
    stationary lattice of density ``lam`` built from the same
    randomness.  When the array carries its uniforms the rescaling is
    realized by regenerating the axes at the new rates (identical up to
    one ulp, and coupling back to ``rho`` is then bit-exact); otherwise
    the stored values are scaled directly.
    """
    if not isinstance(w.boundary, Equilibrium):
        raise ValueError("density coupling requires a stationary-boundary array")
    _check_density(lam)
    rho = w.boundary.rho
    omega = w.omega.copy()
    if w.uniforms is not None:
        omega[1:, 0] = -np.log(w.uniforms[1:, 0]) / (1.0 - lam)
        omega[0, 1:] = -np.log(w.uniforms[0, 1:]) / lam
    else:
        omega[1:, 0] *= (1.0 - rho) / (1.0 - lam)
        omega[0, 1:] *= rho / lam
    return WeightArray(omega=omega, boundary=Equilibrium(lam), seed=w.seed, uniforms=w.uniforms)


def apply_boundary(w: WeightArray, kind: BoundaryKind) -> WeightArray:
    """Replace or rescale the boundary of ``w`` per ``kind``; interior kept.

    Rarefaction multiplies the existing axis weights site by site, so
    the output boundary is dominated by the input one.  Zeroed kinds
    null the corresponding axis.  Custom substitutes explicit values.
    """
    if isinstance(kind, Equilibrium):
        raise ValueError("use sample_equilibrium or couple_density for stationary boundaries")
    omega = w.omega.copy()
    if isinstance(kind, Rarefaction):
        omega[1:, 0] *= _as_mult(kind.south, w.m, "south")
        omega[0, 1:] *= _as_mult(kind.west, w.n, "west")
    elif isinstance(kind, ZeroWest):
        omega[0, 1:] = 0.0
    elif isinstance(kind, ZeroSouth):
        omega[1:, 0] = 0.0
    elif isinstance(kind, ZeroBoth):
        omega[1:, 0] = 0.0
        omega[0, 1:] = 0.0
    elif isinstance(kind, Custom):
        if len(kind.south) != w.m or len(kind.west) != w.n:
            raise ValueError("custom boundary length must match lattice dimensions")
        omega[1:, 0] = np.asarray(kind.south, dtype=np.float64)
        omega[0, 1:] = np.asarray(kind.west, dtype=np.float64)
    else:
        raise TypeError(f"unsupported boundary kind {kind!r}")
    return WeightArray(omega=omega, boundary=kind, seed=w.seed, uniforms=w.uniforms)


def _transpose_kind(kind: BoundaryKind) -> BoundaryKind:
    if isinstance(kind, Equilibrium):
        return Equilibrium(1.0 - kind.rho)
    if isinstance(kind, Rarefaction):
        return Rarefaction(1.0 - kind.rho, south=kind.west, west=kind.south)
    if isinstance(kind, ZeroWest):
        return ZeroSouth(1.0 - kind.rho)
    if isinstance(kind, ZeroSouth):
        return ZeroWest(1.0 - kind.rho)
    if isinstance(kind, ZeroBoth):
        return ZeroBoth(1.0 - kind.rho)
    if isinstance(kind, Custom):
        return Custom(south=kind.west, west=kind.south)
    raise TypeError(f"unsupported boundary kind {kind!r}")


def transpose_weights(w: WeightArray) -> WeightArray:
    """Mirror the lattice across the diagonal: ``omega'[i, j] = omega[j, i]``.

    Dimensions swap and a stationary boundary of density ``rho``
    becomes one of density ``1 - rho``.
    """
    u = None if w.uniforms is None else np.ascontiguousarray(w.uniforms.T)
    return WeightArray(
        omega=np.ascontiguousarray(w.omega.T),
        boundary=_transpose_kind(w.boundary),
        seed=w.seed,
        uniforms=u,
    )


_KIND_TAGS = {
    Equilibrium: "equilibrium",
    Rarefaction: "rarefaction",
    ZeroWest: "zero-west",
    ZeroSouth: "zero-south",
    ZeroBoth: "zero-both",
    Custom: "custom",
}


def weights_to_csv(w: WeightArray) -> str:
    """Serialize to the golden-file CSV form (values round-trip exactly)."""
    rho = _kind_rho(w.boundary)
    buf = io.StringIO()
    buf.write("m,n,kind,rho,seed\n")
    buf.write(
        f"{w.m},{w.n},{_KIND_TAGS[type(w.boundary)]},"
        f"{'' if rho is None else repr(rho)},"
        f"{w.seed.seed}/{w.seed.stream}/{w.seed.sample}\n"
    )
    buf.write("i,j,omega\n")
    for i in range(w.m + 1):
        for j in range(w.n + 1):
            buf.write(f"{i},{j},{w.omega[i, j]!r}\n")
    return buf.getvalue()


def weights_from_csv(text: str) -> WeightArray:
    """Rebuild an array from :func:`weights_to_csv` output.

    Values are exact; rarefaction multipliers and custom lists are not
    recoverable from values alone, so non-stationary kinds come back as
    their tag with the boundary values found in the rows.
    """
    lines = text.strip().splitlines()
    if lines[0] != "m,n,kind,rho,seed" or lines[2] != "i,j,omega":
        raise ValueError("unrecognized weight CSV header")
    m_s, n_s, tag, rho_s, seed_s = lines[1].split(",")
    m, n = int(m_s), int(n_s)
    seed_parts = [int(p) for p in seed_s.split("/")]
    record = SeedRecord(seed=seed_parts[0], stream=seed_parts[1], sample=seed_parts[2])
    omega = np.zeros((m + 1, n + 1))
    for line in lines[3:]:
        i_s, j_s, v_s = line.split(",")
        omega[int(i_s), int(j_s)] = float(v_s)
    rho = None if rho_s == "" else float(rho_s)
    kind: BoundaryKind
    if tag == "equilibrium":
        kind = Equilibrium(rho)
    elif tag == "rarefaction":
        kind = Rarefaction(rho)
    elif tag == "zero-west":
        kind = ZeroWest(rho)
    elif tag == "zero-south":
        kind = ZeroSouth(rho)
    elif tag == "zero-both":
        kind = ZeroBoth(rho)
    elif tag == "custom":
        kind = Custom(south=tuple(omega[1:, 0]), west=tuple(omega[0, 1:]))
    else:
        raise ValueError(f"unknown boundary tag {tag!r}")
    return WeightArray(omega=omega, boundary=kind, seed=record, uniforms=None)
