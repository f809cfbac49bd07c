"""Persistence diagrams from filtration boundary-matrix reduction.

The reduction pairs each death simplex with the birth simplex of the
feature it kills; unpaired simplices are essential classes. Pairing is
canonical: any valid left-to-right reduction yields the same pairs, so
the fast per-dimension variant with clearing (``twist``) and the plain
whole-matrix scan (``standard``) must agree exactly, and tests hold
them to that.

Coefficients are integers mod 2. Zero-persistence pairs, where birth
and death scales coincide, are dropped from diagrams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._reduction import reduce_block
from .rips import Filtration

__all__ = [
    "PersistenceDiagram",
    "ReductionResult",
    "diagram_rows",
    "diagrams",
    "reduce",
]


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of (birth, death) pairs for one homology dimension.

    Points are sorted; death is ``math.inf`` for essential classes.
    """

    dimension: int
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        for birth, death in self.points:
            if not death > birth:
                raise ValueError(f"diagram point ({birth}, {death}) must satisfy death > birth")
            if birth < 0.0:
                raise ValueError(f"negative birth {birth}")

    @classmethod
    def from_points(cls, dimension: int, points) -> "PersistenceDiagram":
        return cls(dimension, tuple(sorted((float(b), float(d)) for b, d in points)))

    def finite_points(self) -> tuple[tuple[float, float], ...]:
        return tuple(p for p in self.points if math.isfinite(p[1]))

    def essential_births(self) -> tuple[float, ...]:
        return tuple(b for b, d in self.points if math.isinf(d))

    def with_finite_deaths(self, substitute: float) -> "PersistenceDiagram":
        """Replace infinite deaths by ``substitute``; drop pairs it zeroes."""
        kept = [p for p in self.points if math.isfinite(p[1])]
        kept.extend((b, float(substitute)) for b in self.essential_births() if substitute > b)
        return PersistenceDiagram.from_points(self.dimension, kept)

    def __len__(self) -> int:
        return len(self.points)


class ReductionResult:
    """Pairing produced by reducing a filtration's boundary matrix.

    Pairs and essentials are exposed as indices into the global
    filtration order (``filtration.simplices``); internally they are
    kept per dimension so diagram extraction never needs the global
    ordering.
    """

    def __init__(self, filtration: Filtration,
                 pairs_by_birth_dim: dict[int, tuple[np.ndarray, np.ndarray]],
                 essentials_by_dim: dict[int, np.ndarray]):
        self.filtration = filtration
        self._pairs = pairs_by_birth_dim
        self._essentials = essentials_by_dim

    def pair_values(self, dim: int) -> tuple[np.ndarray, np.ndarray]:
        """Birth and death filtration values of all dim-k pairs."""
        if dim not in self._pairs:
            return np.empty(0), np.empty(0)
        birth_local, death_local = self._pairs[dim]
        return (
            self.filtration.block(dim)[0][birth_local],
            self.filtration.block(dim + 1)[0][death_local],
        )

    def essential_values(self, dim: int) -> np.ndarray:
        if dim not in self._essentials:
            return np.empty(0)
        return self.filtration.block(dim)[0][self._essentials[dim]]

    @property
    def pairs(self) -> list[tuple[int, int]]:
        """(birth index, death index) pairs in the global filtration order."""
        out = []
        for dim, (birth_local, death_local) in sorted(self._pairs.items()):
            births = self.filtration.global_positions(dim)[birth_local]
            deaths = self.filtration.global_positions(dim + 1)[death_local]
            out.extend(zip(births.tolist(), deaths.tolist()))
        return sorted(out)

    @property
    def essentials(self) -> list[int]:
        out: list[int] = []
        for dim, locals_ in sorted(self._essentials.items()):
            out.extend(self.filtration.global_positions(dim)[locals_].tolist())
        return sorted(out)


def reduce(filtration: Filtration, method: str = "twist") -> ReductionResult:
    """Pair births with deaths by column reduction over GF(2).

    ``twist`` reduces dimension blocks from the top down, clearing the
    columns of simplices already identified as births; ``standard``
    scans the whole matrix left to right. Both yield identical results.
    """
    if method == "twist":
        return _reduce_twist(filtration)
    if method == "standard":
        return _reduce_standard(filtration)
    raise ValueError(f"unknown reduction method {method!r}")


def _reduce_twist(filtration: Filtration) -> ReductionResult:
    counts = filtration.counts
    maxdim = filtration.maxdim
    pairs: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    essentials: dict[int, np.ndarray] = {}
    cleared = np.zeros(counts[maxdim], dtype=np.bool_)
    unpaired_above = np.ones(counts[maxdim], dtype=np.bool_)
    for dim in range(maxdim, 0, -1):
        faces = filtration.face_rows(dim) if counts[dim] else np.empty((0, dim + 1), np.int32)
        owner, lows = reduce_block(faces, cleared, counts[dim - 1])
        pivot_rows = np.nonzero(owner >= 0)[0].astype(np.int64)
        pairs[dim - 1] = (pivot_rows, owner[pivot_rows])
        # this dimension's essentials: not a death here, not a birth above
        is_death = np.zeros(counts[dim], dtype=np.bool_)
        if counts[dim]:
            is_death[lows >= 0] = True
        essentials[dim] = np.nonzero(~is_death & unpaired_above)[0].astype(np.int64)
        # rows paired here are births: clear their columns one level down
        cleared = np.zeros(counts[dim - 1], dtype=np.bool_)
        cleared[pivot_rows] = True
        unpaired_above = ~cleared
    essentials[0] = np.nonzero(unpaired_above)[0].astype(np.int64)
    return ReductionResult(filtration, pairs, essentials)


def _reduce_standard(filtration: Filtration) -> ReductionResult:
    """Reference whole-matrix reduction using integer bitmasks."""
    dims_by_pos, per_dim = filtration._global_order()
    n = len(dims_by_pos)
    local_of_pos = np.empty(n, dtype=np.int64)
    for dim in range(len(per_dim)):
        local_of_pos[per_dim[dim]] = np.arange(len(per_dim[dim]))
    reduced: dict[int, int] = {}
    owner_of_row: dict[int, int] = {}
    paired: set[int] = set()
    pairs: dict[int, tuple[list[int], list[int]]] = {}
    for pos in range(n):
        dim = int(dims_by_pos[pos])
        if dim == 0:
            continue
        local = local_of_pos[pos]
        face_locals = filtration.face_rows(dim)[local]
        column = 0
        for row in filtration.global_positions(dim - 1)[face_locals]:
            column ^= 1 << int(row)
        while column:
            low = column.bit_length() - 1
            previous = owner_of_row.get(low)
            if previous is None:
                owner_of_row[low] = pos
                reduced[pos] = column
                birth_dim = dim - 1
                rows, cols = pairs.setdefault(birth_dim, ([], []))
                rows.append(int(local_of_pos[low]))
                cols.append(int(local))
                paired.add(low)
                paired.add(pos)
                break
            column ^= reduced[previous]
    pairs_arrays = {
        dim: (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))
        for dim, (rows, cols) in pairs.items()
    }
    essentials: dict[int, list[int]] = {dim: [] for dim in range(filtration.maxdim + 1)}
    for pos in range(n):
        if pos not in paired:
            essentials[int(dims_by_pos[pos])].append(int(local_of_pos[pos]))
    essentials_arrays = {
        dim: np.array(sorted(locals_), dtype=np.int64) for dim, locals_ in essentials.items()
    }
    # order pairs by birth row for a deterministic layout matching twist
    for dim, (rows, cols) in pairs_arrays.items():
        order = np.argsort(rows, kind="stable")
        pairs_arrays[dim] = (rows[order], cols[order])
    return ReductionResult(filtration, pairs_arrays, essentials_arrays)


def diagrams(result: ReductionResult, dims: tuple[int, ...] = (0, 1)) -> list[PersistenceDiagram]:
    """Persistence diagrams for the requested homology dimensions.

    Pairs with equal birth and death are dropped; essential classes get
    an infinite death.
    """
    out = []
    for dim in dims:
        births, deaths = result.pair_values(dim)
        keep = deaths > births
        points = [(float(b), float(d)) for b, d in zip(births[keep], deaths[keep])]
        points.extend((float(b), math.inf) for b in result.essential_values(dim))
        out.append(PersistenceDiagram.from_points(dim, points))
    return out


def diagram_rows(window_start: int, diags: list[PersistenceDiagram], substitute: float):
    """Flatten diagrams to (window_start, dim, birth, death, essential) rows.

    Essential deaths are written as ``substitute`` with the flag set.
    """
    rows = []
    for diagram in diags:
        for birth, death in diagram.points:
            if math.isinf(death):
                rows.append((window_start, diagram.dimension, birth, float(substitute), 1))
            else:
                rows.append((window_start, diagram.dimension, birth, death, 0))
    return rows
