"""Randomized directed low-diameter decomposition.

Splits a digraph into topologically ordered strongly connected pieces of
weak diameter at most d by removing a small random set of edges. Balls are
grown with depth-bounded searches (integer-weighted edges behave like
chains of unit edges, so a bounded BFS and a bounded Dijkstra agree);
edges longer than the radius are simply never traversed.

The recursion derives child randomness by splitting the parent seed with
the child's branch label, so the two recursive branches are independent of
evaluation order.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import dijkstra

from .graphs import DiGraph, _min_csr, induced_subgraph, scc_topological

log = logging.getLogger(__name__)

_INT = np.int64


@dataclass(frozen=True)
class LddParams:
    """d: diameter target; c: sampling constant; seed: base RNG seed."""

    d: int
    c: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be at least 1")
        if self.c < 1:
            raise ValueError("c must be at least 1")


@dataclass(frozen=True)
class LddResult:
    """Removed edge indices (into the input graph's edge arrays) plus the
    ordered component list."""

    removed_edges: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]

    def removed_mask(self, g: DiGraph) -> np.ndarray:
        mask = np.zeros(g.edge_count, dtype=bool)
        if self.removed_edges:
            mask[np.asarray(self.removed_edges, dtype=_INT)] = True
        return mask

    def remaining_graph(self, g: DiGraph) -> DiGraph:
        keep = ~self.removed_mask(g)
        return DiGraph(
            g.vertex_count,
            g.tails[keep].copy(),
            g.heads[keep].copy(),
            g.lengths[keep].copy(),
            g.max_length_bound,
        )


def ball(g: DiGraph, v: int, radius: int, direction: str) -> set[int]:
    """Vertices within (in/out) distance radius of v."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if direction not in ("in", "out"):
        raise ValueError("direction must be 'in' or 'out'")
    mat = g._csr if direction == "out" else g._csr_rev
    dist = dijkstra(mat, directed=True, indices=[v], limit=radius)[0]
    return {int(u) for u in np.flatnonzero(dist <= radius)}


def sample_truncated_geometric(p: float, cap: int, rng: np.random.Generator) -> int:
    """min(Geom(p), cap) with support starting at 1; overflow mass on cap."""
    if not (0 < p <= 1):
        raise ValueError("p must be in (0, 1]")
    if cap < 1:
        raise ValueError("cap must be at least 1")
    return int(min(rng.geometric(p), cap))


def find_balanced_set(
    g: DiGraph,
    v_prime,
    params: LddParams,
    direction: str,
    rng: np.random.Generator,
    debug: bool = False,
) -> set[int]:
    """Grow balls of truncated-geometric radii around v_prime (visited in a
    seeded random order) until the union exceeds a tenth of the vertices,
    or v_prime is exhausted."""
    verts = np.asarray(sorted(set(int(v) for v in v_prime)), dtype=_INT)
    mat = g._csr if direction == "out" else g._csr_rev
    mask = _find_balanced_local(
        mat, g.vertex_count, verts, params.d, params.c, rng, debug=debug
    )
    return {int(v) for v in np.flatnonzero(mask)}


def _geom_p(c: int, d: int, n: int) -> float:
    return min(c * math.log2(max(n, 2)) / d, 1.0)


def _find_balanced_local(
    mat: sp.csr_matrix,
    nv: int,
    verts: np.ndarray,
    d: int,
    c: int,
    rng: np.random.Generator,
    debug: bool = False,
) -> np.ndarray:
    """Array-index version of FindBalancedSet; returns a bool membership
    mask over [0, nv)."""
    covered = np.zeros(nv, dtype=bool)
    if len(verts) == 0:
        return covered
    # uniformly random processing order; a fixed order degenerates on path
    # graphs (every ball union becomes a prefix and nothing is ever cut)
    verts = rng.permutation(verts)
    cap = d // 4
    if cap >= 1:
        radii = np.minimum(rng.geometric(_geom_p(c, d, nv), size=len(verts)), cap)
    else:
        radii = np.zeros(len(verts), dtype=_INT)
    if debug:
        sizes = (dijkstra(mat, directed=True, indices=verts, limit=cap) <= cap).sum(axis=1)
        bad = np.flatnonzero(10 * sizes > 7 * nv)
        if len(bad):
            log.warning(
                "FindBalancedSet precondition violated: %d center(s) have a "
                "d/4-ball above 0.7|V| (first: vertex %d, size %d of %d)",
                len(bad), int(verts[bad[0]]), int(sizes[bad[0]]), nv,
            )
    chunk = 32
    count = 0
    for start in range(0, len(verts), chunk):
        idx = verts[start : start + chunk]
        rad = radii[start : start + chunk]
        dist = dijkstra(mat, directed=True, indices=idx, limit=int(rad.max()) if len(rad) else 0)
        for row, r in zip(dist, rad):
            newly = (row <= r) & ~covered
            covered[newly] = True
            count += int(newly.sum())
            if 10 * count > nv:
                return covered
    return covered


def low_diameter_decomposition(
    g: DiGraph,
    params: LddParams,
    seed_seq: Optional[np.random.SeedSequence] = None,
) -> LddResult:
    """Decompose g into topologically ordered SCC-shaped components of weak
    diameter at most params.d; returns the removed edges alongside.

    Deterministic given (params.seed, params.c, params.d).
    """
    if seed_seq is None:
        seed_seq = np.random.SeedSequence(params.seed)
    if g.vertex_count == 0:
        return LddResult((), ())
    ids = np.arange(g.vertex_count, dtype=_INT)
    edge_idx = np.arange(g.edge_count, dtype=_INT)
    removed, coarse = _decompose(g, ids, edge_idx, params.d, params.c, seed_seq)
    removed_arr = (
        np.unique(np.concatenate(removed)) if removed else np.empty(0, dtype=_INT)
    )
    components = _refine_to_sccs(g, removed_arr, coarse)
    return LddResult(
        tuple(int(e) for e in removed_arr),
        tuple(components),
    )


def _decompose(
    g: DiGraph,
    ids: np.ndarray,
    edge_idx: np.ndarray,
    d: int,
    c: int,
    ss: np.random.SeedSequence,
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Recursive worker. Returns (removed edge-index chunks, ordered coarse
    vertex groups as global-id arrays)."""
    nv = len(ids)
    if nv == 0:
        return [], []
    if nv == 1 or len(edge_idx) == 0:
        # no internal edges left: nothing to remove, refinement will split
        # the group into singletons
        return [], [ids]
    pos = np.full(g.vertex_count, -1, dtype=_INT)
    pos[ids] = np.arange(nv)
    lt = pos[g.tails[edge_idx]]
    lh = pos[g.heads[edge_idx]]
    lw = g.lengths[edge_idx]
    mat = _min_csr(nv, lt, lh, lw)
    mat_rev = _min_csr(nv, lh, lt, lw)

    # Trivial accept: if every vertex is within d/2 of the lowest-id one in
    # both directions, the whole set already has weak diameter at most d
    # (route any pair through that vertex), so recursing further would only
    # remove edges for nothing.
    r2 = d // 2
    b_out = dijkstra(mat, directed=True, indices=[0], limit=r2)[0] <= r2
    b_in = dijkstra(mat_rev, directed=True, indices=[0], limit=r2)[0] <= r2
    if bool(np.all(b_in & b_out)):
        return [], [ids]

    rng = np.random.default_rng(ss)
    child_seeds = ss.spawn(2)

    # Phase 1: light/heavy marking from sampled ball membership counts.
    r4 = d // 4
    n_samples = max(1, math.ceil(c * math.log2(max(nv, 2))))
    samples = rng.integers(0, nv, size=n_samples)
    uniq, counts = np.unique(samples, return_counts=True)
    dist_out = dijkstra(mat, directed=True, indices=uniq, limit=r4)
    dist_in = dijkstra(mat_rev, directed=True, indices=uniq, limit=r4)
    # s lies in Ball_in(v, r) iff v lies in Ball_out(s, r), and vice versa
    in_count = counts @ (dist_out <= r4)
    out_count = counts @ (dist_in <= r4)
    in_light = 5 * in_count <= 3 * n_samples
    out_light = ~in_light & (5 * out_count <= 3 * n_samples)

    # Phase 2: balanced sets with light boundaries. A_in grows in-balls
    # (reverse graph) around in-light centers, A_out grows out-balls.
    a_in = _find_balanced_local(mat_rev, nv, np.flatnonzero(in_light), d, c, rng)
    a_out = _find_balanced_local(mat, nv, np.flatnonzero(out_light), d, c, rng)
    rem_in = edge_idx[a_in[lh] & ~a_in[lt]]   # edges entering A_in
    rem_out = edge_idx[a_out[lt] & ~a_out[lh]]  # edges leaving A_out

    # Case 1: one side is balanced; split and recurse.
    for star, a_mask, rem in (("in", a_in, rem_in), ("out", a_out, rem_out)):
        size = int(a_mask.sum())
        if 10 * size > nv and 10 * size <= 9 * nv:
            inner = edge_idx[a_mask[lt] & a_mask[lh]]
            outer = edge_idx[~a_mask[lt] & ~a_mask[lh]]
            r1, v1 = _decompose(g, ids[a_mask], inner, d, c, child_seeds[0])
            r2, v2 = _decompose(g, ids[~a_mask], outer, d, c, child_seeds[1])
            groups = v1 + v2 if star == "in" else v2 + v1
            return [rem] + r1 + r2, groups

    # Clean up: the untouched middle must sit within d/2 of one vertex.
    mid = ~(a_in | a_out)
    n_taken = nv - int(mid.sum())
    ok = 2 * n_taken < nv
    if ok and mid.any():
        u = int(np.flatnonzero(mid)[0])  # lowest-id choice keeps this deterministic
        r2 = d // 2
        b_out = dijkstra(mat, directed=True, indices=[u], limit=r2)[0] <= r2
        b_in = dijkstra(mat_rev, directed=True, indices=[u], limit=r2)[0] <= r2
        ok = bool(np.all(~mid | (b_in & b_out)))
    if not ok:
        # give up on this subproblem: drop every edge, singleton components
        return [edge_idx], [ids[i : i + 1] for i in range(nv)]

    # Case 2: both sides small; middle becomes its own ordered block.
    a_rest = a_out & ~a_in
    r1, v1 = _decompose(g, ids[a_in], edge_idx[a_in[lt] & a_in[lh]], d, c, child_seeds[0])
    r2, v2 = _decompose(g, ids[a_rest], edge_idx[a_rest[lt] & a_rest[lh]], d, c, child_seeds[1])
    groups = v1 + ([ids[mid]] if mid.any() else []) + v2
    return [rem_in, rem_out] + r1 + r2, groups


def _refine_to_sccs(
    g: DiGraph, removed: np.ndarray, coarse: list[np.ndarray]
) -> list[tuple[int, ...]]:
    """Split each coarse group into the strongly connected components of
    G - E^rem it contains, keeping a valid topological order overall."""
    keep = np.ones(g.edge_count, dtype=bool)
    keep[removed] = False
    remaining = DiGraph(
        g.vertex_count,
        g.tails[keep].copy(),
        g.heads[keep].copy(),
        g.lengths[keep].copy(),
        g.max_length_bound,
    )
    out: list[tuple[int, ...]] = []
    for group in coarse:
        if len(group) <= 1:
            out.append(tuple(int(v) for v in group))
            continue
        sub, orig = induced_subgraph(remaining, group)
        for comp in scc_topological(sub):
            out.append(tuple(int(orig[v]) for v in comp))
    return out


def estimate_removal_probability(
    g: DiGraph, params: LddParams, trials: int
) -> np.ndarray:
    """Per-edge empirical frequency of removal over independent seeded runs."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    freq = np.zeros(g.edge_count)
    for t in range(trials):
        res = low_diameter_decomposition(
            g, params, seed_seq=np.random.SeedSequence(params.seed, spawn_key=(t,))
        )
        if res.removed_edges:
            freq[np.asarray(res.removed_edges, dtype=_INT)] += 1.0
    return freq / trials
