"""Undirected simple graphs in CSR form, connected components, and
largest-connected-component extraction.

Graphs are immutable once built: the backing arrays are flagged read-only and
every operation here is a pure function, so instances are safe to share across
threads.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import EmptyGraphError, InvalidEdgeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Graph:
    """Undirected, unweighted simple graph.

    ``edges`` holds each undirected edge once as (u, v) with u < v, sorted
    lexicographically. ``indptr``/``indices`` is the symmetric CSR adjacency
    (both directions stored, neighbor lists ascending). ``degrees`` is
    precomputed so degree lookup is O(1).
    """

    n_nodes: int
    edges: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    degrees: np.ndarray

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u] : self.indptr[u + 1]]


@dataclass(frozen=True)
class ComponentLabeling:
    """Connected-component labels, ids contiguous and ordered by the smallest
    node id contained in each component."""

    component_id: np.ndarray
    n_components: int
    component_sizes: np.ndarray


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def from_edge_list(n_nodes: int, raw_edges) -> Graph:
    """Build a Graph from an iterable of node-id pairs.

    Self-loops are dropped (counted and logged), duplicate and mirrored edges
    are collapsed. Node ids must lie in [0, n_nodes); an out-of-range pair
    raises InvalidEdgeError naming the offending edge.
    """
    n_nodes = int(n_nodes)
    if n_nodes < 0:
        raise ValueError("n_nodes must be nonnegative")
    e = np.asarray(list(raw_edges) if not isinstance(raw_edges, np.ndarray) else raw_edges,
                   dtype=np.int64)
    if e.size == 0:
        e = e.reshape(0, 2)
    if e.ndim != 2 or e.shape[1] != 2:
        raise ValueError("edges must be pairs of node ids")

    if e.size:
        bad = (e < 0) | (e >= n_nodes)
        if bad.any():
            row = int(np.flatnonzero(bad.any(axis=1))[0])
            raise InvalidEdgeError(e[row], n_nodes)

        loops = e[:, 0] == e[:, 1]
        n_loops = int(loops.sum())
        if n_loops:
            logger.warning("dropping %d self-loop(s)", n_loops)
            e = e[~loops]

    # canonical orientation u < v, then dedupe
    e = np.sort(e, axis=1)
    if e.shape[0]:
        e = np.unique(e, axis=0)
    edges = e.astype(np.int32)

    # symmetric CSR
    sym = np.concatenate([edges, edges[:, ::-1]], axis=0)
    degrees = np.bincount(sym[:, 0], minlength=n_nodes).astype(np.int32)
    indptr = np.zeros(n_nodes + 1, dtype=np.int32)
    np.cumsum(degrees, out=indptr[1:])
    order = np.lexsort((sym[:, 1], sym[:, 0]))
    indices = sym[order, 1].astype(np.int32)

    return Graph(
        n_nodes=n_nodes,
        edges=_freeze(edges),
        indptr=_freeze(indptr),
        indices=_freeze(indices),
        degrees=_freeze(degrees),
    )


def connected_components(g: Graph) -> ComponentLabeling:
    """Label connected components by BFS in ascending node order.

    Component ids are assigned in order of the smallest node id they contain,
    so the labeling is deterministic for a given graph.
    """
    n = g.n_nodes
    comp = np.full(n, -1, dtype=np.int32)
    sizes = []
    queue = np.empty(n, dtype=np.int32)
    cid = 0
    for start in range(n):
        if comp[start] >= 0:
            continue
        comp[start] = cid
        queue[0] = start
        head, tail = 0, 1
        while head < tail:
            u = queue[head]
            head += 1
            for v in g.indices[g.indptr[u] : g.indptr[u + 1]]:
                if comp[v] < 0:
                    comp[v] = cid
                    queue[tail] = v
                    tail += 1
        sizes.append(tail)
        cid += 1
    return ComponentLabeling(
        component_id=_freeze(comp),
        n_components=cid,
        component_sizes=_freeze(np.asarray(sizes, dtype=np.int64)),
    )


def largest_connected_component(g: Graph) -> Graph:
    """Induced subgraph on the largest component, nodes re-indexed 0..m-1
    preserving ascending original-id order.

    Ties between equal-size components go to the component containing the
    smallest original node id. Raises EmptyGraphError for a 0-node graph.
    """
    if g.n_nodes == 0:
        raise EmptyGraphError("cannot take the largest component of an empty graph")
    labeling = connected_components(g)
    # argmax returns the first maximum; component ids are ordered by smallest
    # contained node id, which is exactly the tie-break we want
    best = int(np.argmax(labeling.component_sizes))
    keep = labeling.component_id == best
    new_id = np.cumsum(keep, dtype=np.int64) - 1

    if g.n_edges:
        in_comp = keep[g.edges[:, 0]]  # components are closed: one endpoint in => both in
        sub = g.edges[in_comp]
        mapped = new_id[sub]
    else:
        mapped = np.empty((0, 2), dtype=np.int64)
    return from_edge_list(int(keep.sum()), mapped)
