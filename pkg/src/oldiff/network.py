"""Scale-free social network generation and opinion-leader designation.

Networks are grown with Barabasi-Albert preferential attachment starting
from a complete clique on m+1 nodes, so the edge count is exactly
C(m+1, 2) + (n - m - 1) * m and the graph is always connected.
"""

from dataclasses import dataclass
from math import comb

import numpy as np


class ConfigurationError(ValueError):
    """Raised when simulation or network parameters are out of range."""


@dataclass(frozen=True)
class NetworkParams:
    """Parameters for Barabasi-Albert network growth."""

    n: int = 500
    m: int = 3

    @property
    def seed_clique_size(self) -> int:
        return self.m + 1

    def validate(self) -> None:
        if self.m < 1:
            raise ConfigurationError(f"attachment count m must be >= 1, got {self.m}")
        if self.m >= self.n:
            raise ConfigurationError(
                f"attachment count m ({self.m}) must be smaller than node count n ({self.n})"
            )


@dataclass
class SocialNetwork:
    """Undirected graph over agent indices with sorted adjacency lists."""

    n: int
    adjacency: list
    edge_count: int


def expected_edge_count(params: NetworkParams) -> int:
    """Closed-form edge count of the BA construction from a complete seed clique."""
    return comb(params.m + 1, 2) + (params.n - params.m - 1) * params.m


def generate_ba(params: NetworkParams, rng: np.random.Generator) -> SocialNetwork:
    """Grow a Barabasi-Albert network.

    Starts from a complete clique on m+1 nodes; every later node attaches to
    m distinct existing nodes chosen with probability proportional to their
    current degree (re-drawing duplicates within one attachment round).
    """
    params.validate()
    n, m = params.n, params.m
    adj = [set() for _ in range(n)]
    # endpoint pool: each node appears once per incident edge, so uniform
    # draws from it are degree-proportional
    endpoints = []
    for i in range(m + 1):
        for j in range(i + 1, m + 1):
            adj[i].add(j)
            adj[j].add(i)
            endpoints.append(i)
            endpoints.append(j)
    for v in range(m + 1, n):
        chosen = set()
        while len(chosen) < m:
            chosen.add(endpoints[int(rng.integers(len(endpoints)))])
        for u in sorted(chosen):
            adj[v].add(u)
            adj[u].add(v)
            endpoints.append(u)
            endpoints.append(v)
    adjacency = [sorted(neighbors) for neighbors in adj]
    edge_count = sum(len(neighbors) for neighbors in adjacency) // 2
    return SocialNetwork(n=n, adjacency=adjacency, edge_count=edge_count)


def degree(network: SocialNetwork, i: int) -> int:
    """Degree of node i."""
    if not 0 <= i < network.n:
        raise IndexError(f"node index {i} out of range for network of size {network.n}")
    return len(network.adjacency[i])


def designate_leaders(network: SocialNetwork, fraction: float) -> set:
    """Pick the round(fraction * n) highest-degree nodes as opinion leaders.

    Ties are broken toward lower indices so the leader set is a pure
    function of the graph. fraction = 0 gives the no-leader baseline.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ConfigurationError(f"leader fraction must be in [0, 1], got {fraction}")
    k = int(round(fraction * network.n))
    by_degree = sorted(range(network.n), key=lambda i: (-len(network.adjacency[i]), i))
    return set(by_degree[:k])


def write_edge_list(network: SocialNetwork, stream) -> None:
    """Write edges as `i j` lines with i < j, sorted lexicographically."""
    for i in range(network.n):
        for j in network.adjacency[i]:
            if i < j:
                stream.write(f"{i} {j}\n")


def degree_histogram(network: SocialNetwork):
    """Sorted (degree, node count) pairs; counts sum to n."""
    counts = {}
    for neighbors in network.adjacency:
        d = len(neighbors)
        counts[d] = counts.get(d, 0) + 1
    return sorted(counts.items())
