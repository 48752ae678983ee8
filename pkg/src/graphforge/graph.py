"""Mutable simple-graph model of a growing cluster state.

Vertices are qubits prepared in |+>, edges are controlled-Z bonds.  Two
primitives capture what a probabilistic entangling operation does at the
graph level:

* ``fuse_success(u, v)`` replaces the non-adjacent pair u, v with one new
  vertex bonded to the symmetric difference of their old neighborhoods,
  plus a fresh degree-1 "leaf" hanging off the merged vertex.  Neighbors
  common to both inputs cancel and end up bonded to neither.
* ``fuse_failure(u, v)`` deletes both vertices together with every incident
  edge.  The rest of the graph is untouched; the physical failure byproducts
  are local Z corrections, which do not change the graph.

Vertex ids are handed out by a monotonic counter and never reused within one
``GraphState``, so scripted experiments can refer to vertices stably across
deletions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class FusionReport:
    """Record of one fusion event applied to a GraphState.

    ``edge_delta`` is the change in the total edge count of the whole graph.
    On success it equals ``len(sym_diff) + 1 - deg(u) - deg(v)``; on failure
    it equals ``-deg(u) - deg(v)``.
    """

    success: bool
    fused_vertex: int | None
    leaf_vertex: int | None
    removed: tuple[int, int]
    edge_delta: int


class GraphState:
    """Undirected simple graph over integer vertex ids."""

    __slots__ = ("_adj", "_next_id", "_num_edges")

    def __init__(self) -> None:
        self._adj: dict[int, set[int]] = {}
        self._next_id = 0
        self._num_edges = 0

    @classmethod
    def from_edges(cls, vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> "GraphState":
        """Build a graph with explicit vertex ids (fresh ids continue past the max)."""
        g = cls()
        for v in vertices:
            if v < 0:
                raise ValueError(f"vertex ids must be non-negative, got {v}")
            if v not in g._adj:
                g._adj[v] = set()
        for u, v in edges:
            for w in (u, v):
                if w not in g._adj:
                    g._adj[w] = set()
            g.add_edge(u, v)
        g._next_id = max(g._adj, default=-1) + 1
        return g

    # -- basic structure ----------------------------------------------------

    def add_vertex(self) -> int:
        v = self._next_id
        self._next_id += 1
        self._adj[v] = set()
        return v

    def add_edge(self, u: int, v: int) -> None:
        """Insert edge {u, v}; inserting an existing edge is a no-op."""
        self._require(u)
        self._require(v)
        if u == v:
            raise ValueError(f"self-loop on vertex {u} is not allowed")
        if v not in self._adj[u]:
            self._adj[u].add(v)
            self._adj[v].add(u)
            self._num_edges += 1

    def remove_vertex(self, v: int) -> None:
        """Delete v and every incident edge (destructive measurement / discard)."""
        self._require(v)
        nbrs = self._adj.pop(v)
        for w in nbrs:
            self._adj[w].discard(v)
        self._num_edges -= len(nbrs)

    def has_vertex(self, v: int) -> bool:
        return v in self._adj

    def has_edge(self, u: int, v: int) -> bool:
        self._require(u)
        self._require(v)
        return v in self._adj[u]

    def neighbors(self, v: int) -> set[int]:
        self._require(v)
        return set(self._adj[v])

    def degree(self, v: int) -> int:
        self._require(v)
        return len(self._adj[v])

    @property
    def num_vertices(self) -> int:
        return len(self._adj)

    @property
    def num_edges(self) -> int:
        return self._num_edges

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self._adj))

    def edges(self) -> list[tuple[int, int]]:
        """All edges as sorted (min, max) pairs, in lexicographic order."""
        out = []
        for u, nbrs in self._adj.items():
            for v in nbrs:
                if u < v:
                    out.append((u, v))
        out.sort()
        return out

    def leaves(self) -> list[int]:
        """Ids of all degree-1 vertices, ascending."""
        return sorted(v for v, nbrs in self._adj.items() if len(nbrs) == 1)

    def copy(self) -> "GraphState":
        g = GraphState()
        g._adj = {v: set(nbrs) for v, nbrs in self._adj.items()}
        g._next_id = self._next_id
        g._num_edges = self._num_edges
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphState):
            return NotImplemented
        return self._adj == other._adj

    def __repr__(self) -> str:
        return f"GraphState(vertices={self.num_vertices}, edges={self.num_edges})"

    # -- fusion primitives --------------------------------------------------

    def check_fusable(self, u: int, v: int) -> None:
        """Raise unless {u, v} is a valid fusion input pair.

        Distinct, both present, and non-adjacent.  Fusing bonded qubits is a
        different physical process and is rejected rather than modeled.
        """
        self._require(u)
        self._require(v)
        if u == v:
            raise ValueError(f"cannot fuse vertex {u} with itself")
        if v in self._adj[u]:
            raise ValueError(f"cannot fuse adjacent vertices {u} and {v}")

    def fuse_success(self, u: int, v: int) -> FusionReport:
        """Merge u and v: new vertex bonded to N(u) xor N(v), plus a new leaf."""
        self.check_fusable(u, v)
        nu = self._adj[u]
        nv = self._adj[v]
        sym = nu ^ nv
        du, dv = len(nu), len(nv)
        self.remove_vertex(u)
        self.remove_vertex(v)
        m = self.add_vertex()
        for w in sym:
            self.add_edge(m, w)
        f = self.add_vertex()
        self.add_edge(m, f)
        return FusionReport(
            success=True,
            fused_vertex=m,
            leaf_vertex=f,
            removed=(u, v),
            edge_delta=len(sym) + 1 - du - dv,
        )

    def fuse_failure(self, u: int, v: int) -> FusionReport:
        """Delete both vertices and their incident edges."""
        self.check_fusable(u, v)
        delta = -len(self._adj[u]) - len(self._adj[v])
        self.remove_vertex(u)
        self.remove_vertex(v)
        return FusionReport(
            success=False,
            fused_vertex=None,
            leaf_vertex=None,
            removed=(u, v),
            edge_delta=delta,
        )

    # -- component queries --------------------------------------------------

    def component_vertices(self, anchor: int) -> set[int]:
        self._require(anchor)
        seen = {anchor}
        queue = deque([anchor])
        while queue:
            w = queue.popleft()
            for x in self._adj[w]:
                if x not in seen:
                    seen.add(x)
                    queue.append(x)
        return seen

    def component_edges(self, anchor: int) -> int:
        """Edge count of the connected component containing anchor."""
        comp = self.component_vertices(anchor)
        return sum(len(self._adj[v]) for v in comp) // 2

    def components(self) -> list[set[int]]:
        seen: set[int] = set()
        out = []
        for v in sorted(self._adj):
            if v not in seen:
                comp = self.component_vertices(v)
                seen |= comp
                out.append(comp)
        return out

    def diameter_path(self, anchor: int) -> list[int]:
        """A longest shortest path in anchor's component, as a vertex list.

        Exact for acyclic components (the grown clusters are trees); ties are
        broken toward smaller ids, so the result is deterministic.
        """
        a = self._farthest_from(anchor)[0]
        b, parent = self._farthest_from(a, track=True)
        path = [b]
        while path[-1] != a:
            path.append(parent[path[-1]])
        path.reverse()
        return path

    def _farthest_from(self, start: int, track: bool = False):
        self._require(start)
        dist = {start: 0}
        parent = {start: start}
        queue = deque([start])
        best, best_d = start, 0
        while queue:
            w = queue.popleft()
            for x in sorted(self._adj[w]):
                if x not in dist:
                    dist[x] = dist[w] + 1
                    parent[x] = w
                    if dist[x] > best_d or (dist[x] == best_d and x < best):
                        best, best_d = x, dist[x]
                    queue.append(x)
        if track:
            return best, parent
        return best, best_d

    # -- serialization ------------------------------------------------------

    def to_edge_list(self) -> str:
        """Plain-text dump: header ``vertices=<n> edges=<m>``, one ``u v`` per line.

        Ids of isolated vertices are not representable in this format; only
        their count survives a round trip.
        """
        lines = [f"vertices={self.num_vertices} edges={self.num_edges}"]
        lines.extend(f"{u} {v}" for u, v in self.edges())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_list(cls, text: str) -> "GraphState":
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise ValueError("empty edge-list document")
        header = lines[0].split()
        try:
            n = int(header[0].removeprefix("vertices="))
            m = int(header[1].removeprefix("edges="))
        except (IndexError, ValueError) as exc:
            raise ValueError(f"bad edge-list header: {lines[0]!r}") from exc
        edges = []
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 2:
                raise ValueError(f"bad edge line: {ln!r}")
            edges.append((int(parts[0]), int(parts[1])))
        if len(edges) != m:
            raise ValueError(f"header promises {m} edges, found {len(edges)}")
        seen: set[int] = set()
        for u, v in edges:
            seen.add(u)
            seen.add(v)
        if len(seen) > n:
            raise ValueError(f"header promises {n} vertices, found {len(seen)} endpoint ids")
        g = cls.from_edges(seen, edges)
        for _ in range(n - len(seen)):
            g.add_vertex()
        return g

    # -- internal -----------------------------------------------------------

    def _require(self, v: int) -> None:
        if v not in self._adj:
            raise KeyError(f"unknown vertex {v}")
