"""Directed graphs with positive integer edge lengths, plus the distance,
diameter and reachability primitives everything else is built on.

Distances are kept as float64 matrices with ``numpy.inf`` as the
unreachable sentinel; all finite entries are exact integers (edge lengths
are bounded by N which is polynomial in n, far below 2**53).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components, dijkstra

INF = np.inf

_INT = np.int64


def _as_int_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=_INT)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    return arr


@dataclass(frozen=True)
class DiGraph:
    """Immutable digraph on vertices [0, n) with integer lengths in [1, N].

    Parallel edges and self-loops are allowed; self-loops are stored but
    never traversed by any distance computation.
    """

    vertex_count: int
    tails: np.ndarray
    heads: np.ndarray
    lengths: np.ndarray
    max_length_bound: int

    def __post_init__(self):
        n = self.vertex_count
        if n < 0:
            raise ValueError("vertex_count must be nonnegative")
        if self.max_length_bound < 1:
            raise ValueError("max_length_bound must be at least 1")
        t, h, w = self.tails, self.heads, self.lengths
        if not (len(t) == len(h) == len(w)):
            raise ValueError("edge arrays must have equal length")
        if len(t) and (t.min() < 0 or t.max() >= n or h.min() < 0 or h.max() >= n):
            raise ValueError("vertex id out of range")
        if len(w) and (w.min() < 1 or w.max() > self.max_length_bound):
            raise ValueError("edge length outside [1, N]")
        for name in ("tails", "heads", "lengths"):
            getattr(self, name).setflags(write=False)

    @classmethod
    def from_edges(
        cls,
        vertex_count: int,
        edges: Iterable[tuple[int, int, int]],
        max_length_bound: Optional[int] = None,
    ) -> "DiGraph":
        triples = list(edges)
        if triples:
            t, h, w = (np.array(col, dtype=_INT) for col in zip(*triples))
        else:
            t = h = w = np.empty(0, dtype=_INT)
        if max_length_bound is None:
            max_length_bound = int(w.max()) if len(w) else 1
        return cls(vertex_count, t, h, w, max_length_bound)

    @classmethod
    def from_arrays(
        cls,
        vertex_count: int,
        tails,
        heads,
        lengths,
        max_length_bound: Optional[int] = None,
    ) -> "DiGraph":
        t = _as_int_array(tails, "tails").copy()
        h = _as_int_array(heads, "heads").copy()
        w = _as_int_array(lengths, "lengths").copy()
        if max_length_bound is None:
            max_length_bound = int(w.max()) if len(w) else 1
        return cls(vertex_count, t, h, w, max_length_bound)

    @property
    def edge_count(self) -> int:
        return len(self.tails)

    def edges(self) -> Iterator[tuple[int, int, int]]:
        for t, h, w in zip(self.tails, self.heads, self.lengths):
            yield (int(t), int(h), int(w))

    @cached_property
    def _csr(self) -> sp.csr_matrix:
        """Min-length simple adjacency matrix; self-loops dropped."""
        return _min_csr(self.vertex_count, self.tails, self.heads, self.lengths)

    @cached_property
    def _csr_rev(self) -> sp.csr_matrix:
        return _min_csr(self.vertex_count, self.heads, self.tails, self.lengths)

    def with_extra(self, extra: Optional["WeightedEdgeSet"]) -> "DiGraph":
        """New graph with the overlay edges appended (original untouched)."""
        if extra is None or len(extra) == 0:
            return self
        t = np.concatenate([self.tails, extra.tails])
        h = np.concatenate([self.heads, extra.heads])
        w = np.concatenate([self.lengths, extra.lengths])
        bound = max(self.max_length_bound, int(extra.lengths.max()))
        return DiGraph(self.vertex_count, t, h, w, bound)


def _min_csr(n: int, tails: np.ndarray, heads: np.ndarray, lengths: np.ndarray) -> sp.csr_matrix:
    if len(tails) == 0:
        return sp.csr_matrix((n, n))
    keep = tails != heads
    t, h, w = tails[keep], heads[keep], lengths[keep]
    if len(t) == 0:
        return sp.csr_matrix((n, n))
    # coo construction sums duplicates, so reduce parallel edges to min first
    key = t * n + h
    order = np.lexsort((w, key))
    key, t, h, w = key[order], t[order], h[order], w[order]
    first = np.ones(len(key), dtype=bool)
    first[1:] = key[1:] != key[:-1]
    return sp.csr_matrix(
        (w[first].astype(np.float64), (t[first], h[first])), shape=(n, n)
    )


@dataclass(frozen=True)
class WeightedEdgeSet:
    """A hopset: weighted extra edges over some graph's vertex set.

    Stored canonically as lexicographically sorted unique (tail, head,
    length) triples, so equal sets compare equal and file dumps are
    byte-stable.
    """

    tails: np.ndarray
    heads: np.ndarray
    lengths: np.ndarray

    def __post_init__(self):
        for name in ("tails", "heads", "lengths"):
            getattr(self, name).setflags(write=False)

    @classmethod
    def empty(cls) -> "WeightedEdgeSet":
        z = np.empty(0, dtype=_INT)
        return cls(z, z.copy(), z.copy())

    @classmethod
    def from_triples(cls, triples: Iterable[tuple[int, int, int]]) -> "WeightedEdgeSet":
        rows = list(triples)
        if not rows:
            return cls.empty()
        t, h, w = (np.array(col, dtype=_INT) for col in zip(*rows))
        return cls.from_arrays(t, h, w)

    @classmethod
    def from_arrays(cls, tails, heads, lengths) -> "WeightedEdgeSet":
        t = _as_int_array(tails, "tails")
        h = _as_int_array(heads, "heads")
        w = _as_int_array(lengths, "lengths")
        if len(t) == 0:
            return cls.empty()
        order = np.lexsort((w, h, t))
        t, h, w = t[order], h[order], w[order]
        dup = np.zeros(len(t), dtype=bool)
        dup[1:] = (t[1:] == t[:-1]) & (h[1:] == h[:-1]) & (w[1:] == w[:-1])
        keep = ~dup
        return cls(t[keep].copy(), h[keep].copy(), w[keep].copy())

    def __len__(self) -> int:
        return len(self.tails)

    def __iter__(self) -> Iterator[tuple[int, int, int]]:
        for t, h, w in zip(self.tails, self.heads, self.lengths):
            yield (int(t), int(h), int(w))

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedEdgeSet):
            return NotImplemented
        return (
            np.array_equal(self.tails, other.tails)
            and np.array_equal(self.heads, other.heads)
            and np.array_equal(self.lengths, other.lengths)
        )

    @staticmethod
    def union(*sets: "WeightedEdgeSet") -> "WeightedEdgeSet":
        parts = [s for s in sets if len(s)]
        if not parts:
            return WeightedEdgeSet.empty()
        return WeightedEdgeSet.from_arrays(
            np.concatenate([s.tails for s in parts]),
            np.concatenate([s.heads for s in parts]),
            np.concatenate([s.lengths for s in parts]),
        )

    def min_per_pair(self) -> "WeightedEdgeSet":
        """Keep only the lightest edge for each (tail, head) pair."""
        if len(self) == 0:
            return self
        t, h, w = self.tails, self.heads, self.lengths
        order = np.lexsort((w, h, t))
        t, h, w = t[order], h[order], w[order]
        first = np.ones(len(t), dtype=bool)
        first[1:] = (t[1:] != t[:-1]) | (h[1:] != h[:-1])
        return WeightedEdgeSet(t[first].copy(), h[first].copy(), w[first].copy())

    def scaled(self, factor: int) -> "WeightedEdgeSet":
        if factor == 1 or len(self) == 0:
            return self
        return WeightedEdgeSet(self.tails, self.heads, (self.lengths * factor).copy())


@dataclass(frozen=True)
class EdgeSet:
    """A shortcut: unweighted extra edges, canonically sorted and unique."""

    tails: np.ndarray
    heads: np.ndarray

    def __post_init__(self):
        self.tails.setflags(write=False)
        self.heads.setflags(write=False)

    @classmethod
    def empty(cls) -> "EdgeSet":
        z = np.empty(0, dtype=_INT)
        return cls(z, z.copy())

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "EdgeSet":
        rows = list(pairs)
        if not rows:
            return cls.empty()
        t, h = (np.array(col, dtype=_INT) for col in zip(*rows))
        return cls.from_arrays(t, h)

    @classmethod
    def from_arrays(cls, tails, heads) -> "EdgeSet":
        t = _as_int_array(tails, "tails")
        h = _as_int_array(heads, "heads")
        if len(t) == 0:
            return cls.empty()
        order = np.lexsort((h, t))
        t, h = t[order], h[order]
        keep = np.ones(len(t), dtype=bool)
        keep[1:] = (t[1:] != t[:-1]) | (h[1:] != h[:-1])
        return cls(t[keep].copy(), h[keep].copy())

    def __len__(self) -> int:
        return len(self.tails)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        for t, h in zip(self.tails, self.heads):
            yield (int(t), int(h))

    def __eq__(self, other) -> bool:
        if not isinstance(other, EdgeSet):
            return NotImplemented
        return np.array_equal(self.tails, other.tails) and np.array_equal(
            self.heads, other.heads
        )

    def with_unit_lengths(self) -> WeightedEdgeSet:
        return WeightedEdgeSet(
            self.tails.copy(), self.heads.copy(), np.ones(len(self), dtype=_INT)
        )


@dataclass(frozen=True)
class PathWitness:
    """A concrete path: its vertex sequence, total length and hop count."""

    vertices: tuple[int, ...]
    total_length: int
    hop_count: int

    def __post_init__(self):
        if self.hop_count != len(self.vertices) - 1:
            raise ValueError("hop_count must equal len(vertices) - 1")
        if self.total_length < self.hop_count:
            raise ValueError("total_length below hop_count (lengths are >= 1)")

    @classmethod
    def from_edge_lengths(cls, vertices: Sequence[int], edge_lengths: Sequence[int]) -> "PathWitness":
        if len(edge_lengths) != len(vertices) - 1:
            raise ValueError("need one length per hop")
        return cls(tuple(int(v) for v in vertices), int(sum(edge_lengths)), len(edge_lengths))


# ---------------------------------------------------------------------------
# distance primitives


def dist_all_pairs(g: DiGraph, extra: Optional[WeightedEdgeSet] = None) -> np.ndarray:
    """Exact all-pairs distances of G (optionally G union extra), inf when
    unreachable."""
    return dist_from_sources(g, None, extra=extra)


def dist_from_sources(
    g: DiGraph,
    sources: Optional[Sequence[int]],
    extra: Optional[WeightedEdgeSet] = None,
    limit: float = INF,
) -> np.ndarray:
    gu = g.with_extra(extra)
    if gu.vertex_count == 0:
        k = 0 if sources is None else len(sources)
        return np.zeros((k, 0))
    indices = None if sources is None else np.asarray(sources, dtype=_INT)
    return dijkstra(gu._csr, directed=True, indices=indices, limit=limit)


def hop_limited_dist(
    g: DiGraph,
    extra: Optional[WeightedEdgeSet],
    h: int,
    sources: Optional[Sequence[int]] = None,
) -> np.ndarray:
    """h-restricted distances of G union extra, by h rounds of synchronous
    relaxation over all edges (self-loops skipped).

    Monotone nonincreasing in h, and equal to dist_all_pairs once
    h >= n - 1 on the union graph.
    """
    if h < 0:
        raise ValueError("h must be nonnegative")
    gu = g.with_extra(extra)
    n = gu.vertex_count
    if sources is None:
        sources = np.arange(n, dtype=_INT)
    else:
        sources = np.asarray(sources, dtype=_INT)
    dist = np.full((len(sources), n), INF)
    dist[np.arange(len(sources)), sources] = 0.0
    keep = gu.tails != gu.heads
    tails, heads = gu.tails[keep], gu.heads[keep]
    weights = gu.lengths[keep].astype(np.float64)
    if len(tails) == 0 or n == 0:
        return dist
    dist_t = np.ascontiguousarray(dist.T)  # (vertex, source) for scatter-min
    for _ in range(h):
        cand = dist_t[tails] + weights[:, None]
        before = dist_t.copy()
        np.minimum.at(dist_t, heads, cand)
        if np.array_equal(before, dist_t):
            break
    return dist_t.T.copy()


def reachability_diameter(g: DiGraph, extra: Optional[WeightedEdgeSet] = None) -> int:
    """Max distance over reachable ordered pairs u != v; 0 if none exist."""
    dist = dist_all_pairs(g, extra)
    if dist.size == 0:
        return 0
    np.fill_diagonal(dist, INF)
    finite = dist[np.isfinite(dist)]
    return int(finite.max()) if len(finite) else 0


def check_approx_hopbound(
    g: DiGraph, alpha: Fraction | int, h: int
) -> tuple[bool, Optional[tuple[int, int]]]:
    """Does dist^(h)(u, v) <= alpha * dist(u, v) hold for all pairs?

    Returns (True, None) or (False, worst witness pair).
    """
    if h < 1:
        raise ValueError("h must be at least 1")
    alpha = Fraction(alpha)
    dist = dist_all_pairs(g)
    dist_h = hop_limited_dist(g, None, h)
    # violation: dist finite but dist_h infinite or above alpha * dist
    finite = np.isfinite(dist)
    bad = finite & (
        ~np.isfinite(dist_h)
        | (dist_h * alpha.denominator > dist * alpha.numerator)
    )
    if not bad.any():
        return True, None
    with np.errstate(invalid="ignore"):
        ratio = np.where(bad, dist_h / np.maximum(dist, 1), -INF)
    u, v = np.unravel_index(np.argmax(ratio), ratio.shape)
    return False, (int(u), int(v))


def scc_topological(g: DiGraph) -> list[tuple[int, ...]]:
    """Strongly connected components as sorted vertex tuples, in a
    topological order of the condensation."""
    n = g.vertex_count
    if n == 0:
        return []
    z, labels = connected_components(g._csr, connection="strong", directed=True)
    comps = [np.flatnonzero(labels == c) for c in range(z)]
    order = _topo_order_of_components(labels, z, g.tails, g.heads)
    return [tuple(int(v) for v in comps[c]) for c in order]


def _condensation_succs(
    labels: np.ndarray, z: int, tails: np.ndarray, heads: np.ndarray
) -> list[np.ndarray]:
    """Deduplicated successor lists of the condensation, indexed by label."""
    lt, lh = labels[tails], labels[heads]
    cross = lt != lh
    succs: list[np.ndarray] = [np.empty(0, dtype=_INT)] * z
    if cross.any():
        pairs = np.unique(np.stack([lt[cross], lh[cross]], axis=1), axis=0)
        split = np.searchsorted(pairs[:, 0], np.arange(z + 1))
        for c in range(z):
            succs[c] = pairs[split[c] : split[c + 1], 1]
    return succs


def _topo_order_of_components(
    labels: np.ndarray, z: int, tails: np.ndarray, heads: np.ndarray
) -> list[int]:
    succs = _condensation_succs(labels, z, tails, heads)
    indeg = np.zeros(z, dtype=_INT)
    for s in succs:
        np.add.at(indeg, s, 1)
    # smallest-label-first Kahn keeps the order deterministic
    import heapq

    ready = [int(c) for c in np.flatnonzero(indeg == 0)]
    heapq.heapify(ready)
    order = []
    while ready:
        c = heapq.heappop(ready)
        order.append(c)
        s = succs[c]
        np.subtract.at(indeg, s, 1)
        for t in s[indeg[s] == 0]:
            heapq.heappush(ready, int(t))
    if len(order) != z:
        raise AssertionError("condensation was not acyclic")
    return order


def weak_diameter(g: DiGraph, s: Iterable[int]) -> float:
    """Max pairwise distance within s, measured in the full graph."""
    verts = np.asarray(sorted(set(int(v) for v in s)), dtype=_INT)
    if len(verts) == 0:
        raise ValueError("vertex set must be nonempty")
    sub = dist_from_sources(g, verts)[:, verts]
    m = sub.max()
    return float(m) if not np.isfinite(m) else int(m)


def strong_diameter(g: DiGraph, s: Iterable[int]) -> float:
    """Max pairwise distance within s, measured in the induced subgraph."""
    verts = sorted(set(int(v) for v in s))
    if not verts:
        raise ValueError("vertex set must be nonempty")
    sub, _ = induced_subgraph(g, verts)
    dist = dist_all_pairs(sub)
    m = dist.max()
    return float(m) if not np.isfinite(m) else int(m)


def induced_subgraph(g: DiGraph, vertices: Sequence[int]) -> tuple[DiGraph, np.ndarray]:
    """Induced subgraph on the given vertices, relabeled to [0, k).

    Returns (subgraph, original_ids) where original_ids[i] is the parent id
    of subgraph vertex i.
    """
    ids = np.asarray(sorted(set(int(v) for v in vertices)), dtype=_INT)
    pos = np.full(g.vertex_count, -1, dtype=_INT)
    pos[ids] = np.arange(len(ids))
    keep = (pos[g.tails] >= 0) & (pos[g.heads] >= 0)
    sub = DiGraph(
        len(ids),
        pos[g.tails[keep]].copy(),
        pos[g.heads[keep]].copy(),
        g.lengths[keep].copy(),
        g.max_length_bound,
    )
    return sub, ids


def reachable_pairs(g: DiGraph) -> EdgeSet:
    """All ordered pairs (u, v), u != v, with u reaching v: the transitive
    closure minus the diagonal.

    Works at component level (condensation closure), so it stays cheap even
    when the closure itself is dense.
    """
    n = g.vertex_count
    if n == 0:
        return EdgeSet.empty()
    z, labels = connected_components(g._csr, connection="strong", directed=True)
    order = _topo_order_of_components(labels, z, g.tails, g.heads)
    succs = _condensation_succs(labels, z, g.tails, g.heads)
    reach = np.zeros((z, z), dtype=bool)
    for c in reversed(order):
        reach[c, c] = True
        if len(succs[c]):
            reach[c] |= reach[succs[c]].any(axis=0)
    members = [np.flatnonzero(labels == c) for c in range(z)]
    t_parts, h_parts = [], []
    for c in range(z):
        targets = np.concatenate([members[d] for d in np.flatnonzero(reach[c])])
        src = members[c]
        t_parts.append(np.repeat(src, len(targets)))
        h_parts.append(np.tile(targets, len(src)))
    t = np.concatenate(t_parts)
    h = np.concatenate(h_parts)
    keep = t != h
    return EdgeSet.from_arrays(t[keep], h[keep])
