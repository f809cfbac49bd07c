"""Vietoris-Rips filtrations of Euclidean point clouds.

A simplex enters the filtration at the largest pairwise distance among
its vertices, so the complex at scale t contains every simplex whose
vertices are mutually within t. Simplices are ordered by
(value, dimension, lexicographic vertices), which is total, puts every
face before its cofacets, and makes diagrams reproducible across runs
and platforms.

The construction is vectorised per dimension: combination index tables
are cached per cloud size, filtration values come from flat gathers on
the distance matrix, and the per-dimension sort is a stable radix sort
on the bit patterns of the (non-negative) values, which preserves the
pre-existing lexicographic order among ties.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cloud import PointCloud

__all__ = [
    "FilteredSimplex",
    "Filtration",
    "build_filtration",
    "cone_radius",
    "distance_matrix",
    "enclosing_radius",
    "write_filtration",
]


def distance_matrix(window: PointCloud | np.ndarray) -> np.ndarray:
    """Exact-symmetric Euclidean distance matrix of a window's points."""
    pts = window.points if isinstance(window, PointCloud) else np.asarray(window, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise ValueError("expected a non-empty (m, n) point array")
    diff = pts[:, None, :] - pts[None, :, :]
    dm = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    # mirror the upper triangle so symmetry is exact by construction
    upper = np.triu_indices(len(pts), k=1)
    dm[(upper[1], upper[0])] = dm[upper]
    np.fill_diagonal(dm, 0.0)
    return dm


def enclosing_radius(dm: np.ndarray) -> float:
    """Largest pairwise distance; the default filtration cutoff."""
    return float(dm.max())


def cone_radius(dm: np.ndarray) -> float:
    """Smallest radius at which some point is within reach of all others.

    At this scale the complex is a cone (hence contractible), so every
    positive-persistence H0/H1 feature is born and dead by here. Cutting
    the filtration at this radius changes no reported diagram but can
    shrink the simplex count substantially; the pipeline exploits that.
    """
    return float(dm.max(axis=1).min())


@dataclass(frozen=True)
class FilteredSimplex:
    """A simplex with the scale at which it enters the filtration."""

    vertices: tuple[int, ...]
    value: float

    @property
    def dimension(self) -> int:
        return len(self.vertices) - 1


@lru_cache(maxsize=32)
def _combinations(n: int, k: int) -> np.ndarray:
    """All k-subsets of range(n) in lexicographic order, shape (C(n,k), k)."""
    if k > n:
        return np.empty((0, k), dtype=np.int32)
    combos = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(n), k)),
        dtype=np.int32,
    )
    combos.shape = (-1, k)
    combos.setflags(write=False)
    return combos


def _encode(verts: np.ndarray, n: int) -> np.ndarray:
    """Injective integer key of each row of a sorted-vertex table."""
    if verts.shape[1] > 1 and n ** verts.shape[1] >= 2**62:
        raise ValueError("cloud too large to key simplices of this dimension")
    keys = np.zeros(len(verts), dtype=np.int64)
    for column in range(verts.shape[1]):
        keys = keys * n + verts[:, column]
    return keys


class Filtration:
    """Simplices of a Rips filtration, grouped by dimension.

    Each dimension block is stored as parallel arrays (values ascending,
    vertex rows) already in filtration order; the flat, globally ordered
    view required by the reduction contract is materialised lazily.
    """

    def __init__(self, n_points: int, maxdim: int, threshold: float,
                 values: list[np.ndarray], verts: list[np.ndarray]):
        self.n_points = n_points
        self.maxdim = maxdim
        self.threshold = threshold
        self._values = values
        self._verts = verts
        self._face_rows: dict[int, np.ndarray] = {}
        self._global: tuple[np.ndarray, list[np.ndarray]] | None = None
        self._simplices: list[FilteredSimplex] | None = None

    def block(self, dim: int) -> tuple[np.ndarray, np.ndarray]:
        """(values, vertex rows) of all simplices of one dimension, in order."""
        return self._values[dim], self._verts[dim]

    @property
    def counts(self) -> list[int]:
        return [len(v) for v in self._values]

    def __len__(self) -> int:
        return sum(self.counts)

    def face_rows(self, dim: int) -> np.ndarray:
        """For each dim-simplex, the positions of its facets in block dim-1."""
        if dim not in self._face_rows:
            values, verts = self.block(dim)
            prev_keys = _encode(self._verts[dim - 1], self.n_points)
            order = np.argsort(prev_keys, kind="stable")
            sorted_keys = prev_keys[order]
            rows = np.empty((len(verts), dim + 1), dtype=np.int32)
            for drop in range(dim + 1):
                face = np.delete(verts, drop, axis=1)
                idx = np.searchsorted(sorted_keys, _encode(face, self.n_points))
                rows[:, drop] = order[idx]
            self._face_rows[dim] = rows
        return self._face_rows[dim]

    def _global_order(self) -> tuple[np.ndarray, list[np.ndarray]]:
        """Global ordering: (dims-by-position array, per-dim position arrays)."""
        if self._global is None:
            all_values = np.concatenate(self._values) if self._values else np.empty(0)
            all_dims = np.concatenate(
                [np.full(len(v), k, dtype=np.int8) for k, v in enumerate(self._values)]
            )
            # stable two-key sort; ties in (value, dim) stay lexicographic
            # because each block is already lexicographic among equal values
            perm = np.lexsort((all_dims, all_values))
            positions = np.empty(len(perm), dtype=np.int64)
            positions[perm] = np.arange(len(perm))
            offsets = np.cumsum([0] + [len(v) for v in self._values])
            per_dim = [positions[offsets[k] : offsets[k + 1]] for k in range(len(self._values))]
            self._global = (all_dims[perm], per_dim)
        return self._global

    def global_positions(self, dim: int) -> np.ndarray:
        """Global filtration index of each simplex in a dimension block."""
        return self._global_order()[1][dim]

    @property
    def simplices(self) -> list[FilteredSimplex]:
        """All simplices as objects, in global filtration order."""
        if self._simplices is None:
            items: list[FilteredSimplex | None] = [None] * len(self)
            for dim in range(len(self._values)):
                values, verts = self.block(dim)
                for local, pos in enumerate(self.global_positions(dim)):
                    items[pos] = FilteredSimplex(tuple(int(v) for v in verts[local]), float(values[local]))
            self._simplices = items  # type: ignore[assignment]
        return self._simplices  # type: ignore[return-value]


def build_filtration(dm: np.ndarray, maxdim: int = 2, threshold: float | None = None) -> Filtration:
    """All simplices up to ``maxdim`` with filtration value <= ``threshold``.

    The default threshold is the enclosing radius (largest matrix
    entry), which keeps every simplex and guarantees a single essential
    connected component on any cloud.
    """
    dm = np.asarray(dm, dtype=np.float64)
    w = dm.shape[0]
    if dm.ndim != 2 or dm.shape[1] != w or w < 1:
        raise ValueError("distance matrix must be square and non-empty")
    if maxdim < 1:
        raise ValueError(f"maxdim must be at least 1, got {maxdim}")
    if not np.all(np.isfinite(dm)) or np.any(dm < 0.0):
        raise ValueError("distance matrix entries must be finite and non-negative")
    if np.any(np.diag(dm) != 0.0) or not np.array_equal(dm, dm.T):
        raise ValueError("distance matrix must be symmetric with a zero diagonal")
    if threshold is None:
        threshold = enclosing_radius(dm)
    elif threshold < 0.0:
        raise ValueError(f"threshold must be non-negative, got {threshold}")

    flat = dm.ravel()
    values = [np.zeros(w, dtype=np.float64)]
    verts = [np.arange(w, dtype=np.int32).reshape(-1, 1)]
    for dim in range(1, maxdim + 1):
        combos = _combinations(w, dim + 1)
        if len(combos) == 0:
            values.append(np.empty(0, dtype=np.float64))
            verts.append(np.empty((0, dim + 1), dtype=np.int32))
            continue
        vmax = np.zeros(len(combos), dtype=np.float64)
        for a in range(dim + 1):
            for b in range(a + 1, dim + 1):
                np.maximum(vmax, flat[combos[:, a].astype(np.int64) * w + combos[:, b]], out=vmax)
        keep = vmax <= threshold
        kept_values = vmax[keep]
        kept_verts = combos[keep]
        order = np.argsort(kept_values.view(np.uint64), kind="stable")
        values.append(np.ascontiguousarray(kept_values[order]))
        verts.append(np.ascontiguousarray(kept_verts[order]))
    return Filtration(w, maxdim, float(threshold), values, verts)


def write_filtration(filtration: Filtration, path) -> None:
    """Debug dump: one ``value dim v0 v1 ...`` line per simplex, in order."""
    with open(path, "w", encoding="utf-8") as handle:
        for simplex in filtration.simplices:
            vs = " ".join(str(v) for v in simplex.vertices)
            handle.write(f"{simplex.value:.17g} {simplex.dimension} {vs}\n")
