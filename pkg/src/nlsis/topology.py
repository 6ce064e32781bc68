"""Graph structures the contact process runs on.

Cliques and stars get dedicated types because their symmetry lets the
simulation collapse to a one- or two-coordinate chain; everything else
is an explicit undirected adjacency structure. Validation always
rejects malformed input instead of repairing it.
"""

from __future__ import annotations

from dataclasses import dataclass


class ValidationError(ValueError):
    """Input failed structural or range validation."""


@dataclass(frozen=True)
class Clique:
    """Complete graph on n vertices, labelled 0..n-1."""

    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError(f"clique size must be an integer >= 1, got {self.n!r}")


@dataclass(frozen=True)
class Star:
    """Hub-and-spoke graph with n leaves 0..n-1 and the center at index n."""

    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError(f"star leaf count must be an integer >= 1, got {self.n!r}")

    @property
    def center(self) -> int:
        return self.n


@dataclass(frozen=True)
class General:
    """Arbitrary undirected graph stored as a tuple of neighbor tuples.

    The adjacency must be symmetric, free of self loops and free of
    duplicate entries; anything else raises instead of being patched up.
    """

    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        adj = self.adjacency
        n = len(adj)
        if n < 1:
            raise ValidationError("general graph needs at least one vertex")
        for v, nbrs in enumerate(adj):
            seen = set()
            for u in nbrs:
                if not isinstance(u, int) or not (0 <= u < n):
                    raise ValidationError(f"vertex {v} lists out-of-range neighbor {u!r}")
                if u == v:
                    raise ValidationError(f"vertex {v} has a self loop")
                if u in seen:
                    raise ValidationError(f"vertex {v} lists neighbor {u} twice")
                seen.add(u)
            for u in nbrs:
                if v not in adj[u]:
                    raise ValidationError(
                        f"asymmetric adjacency: {v} lists {u} but {u} does not list {v}"
                    )


Topology = Clique | Star | General


def vertex_count(topology: Topology) -> int:
    if isinstance(topology, Clique):
        return topology.n
    if isinstance(topology, Star):
        return topology.n + 1
    return len(topology.adjacency)


def degree(topology: Topology, v: int) -> int:
    nv = vertex_count(topology)
    if not (0 <= v < nv):
        raise ValidationError(f"vertex {v} out of range for graph on {nv} vertices")
    if isinstance(topology, Clique):
        return topology.n - 1
    if isinstance(topology, Star):
        return topology.n if v == topology.center else 1
    return len(topology.adjacency[v])


def neighbors(topology: Topology, v: int) -> tuple[int, ...]:
    nv = vertex_count(topology)
    if not (0 <= v < nv):
        raise ValidationError(f"vertex {v} out of range for graph on {nv} vertices")
    if isinstance(topology, Clique):
        return tuple(u for u in range(topology.n) if u != v)
    if isinstance(topology, Star):
        if v == topology.center:
            return tuple(range(topology.n))
        return (topology.center,)
    return topology.adjacency[v]


def to_general(topology: Topology) -> General:
    """Expand any topology to its explicit adjacency form."""
    if isinstance(topology, General):
        return topology
    nv = vertex_count(topology)
    return General(tuple(neighbors(topology, v) for v in range(nv)))


def general_from_edges(edges, n: int | None = None) -> General:
    """Build an undirected graph from (u, v) pairs.

    Vertex count defaults to max index + 1. Duplicate edges (in either
    orientation) and self loops are rejected.
    """
    edge_set = set()
    max_idx = -1
    for u, v in edges:
        if not isinstance(u, int) or not isinstance(v, int) or u < 0 or v < 0:
            raise ValidationError(f"edge endpoints must be non-negative integers, got ({u!r}, {v!r})")
        if u == v:
            raise ValidationError(f"self loop on vertex {u}")
        key = (min(u, v), max(u, v))
        if key in edge_set:
            raise ValidationError(f"duplicate edge {key}")
        edge_set.add(key)
        max_idx = max(max_idx, u, v)
    if n is None:
        n = max_idx + 1
    if n < 1:
        raise ValidationError("graph needs at least one vertex")
    if max_idx >= n:
        raise ValidationError(f"edge endpoint {max_idx} exceeds declared vertex count {n}")
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in sorted(edge_set):
        adj[u].append(v)
        adj[v].append(u)
    return General(tuple(tuple(sorted(nbrs)) for nbrs in adj))


def parse_edge_list(text: str) -> General:
    """Parse edge-list text: one "u v" pair per line, '#' starts a comment."""
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValidationError(f"line {lineno}: expected two vertex indices, got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValidationError(f"line {lineno}: non-integer vertex index in {raw!r}") from None
        edges.append((u, v))
    if not edges:
        raise ValidationError("edge list is empty")
    return general_from_edges(edges)


def load_edge_list(path) -> General:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())
