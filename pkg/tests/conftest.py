"""Shared helpers: random graph construction and a brute-force expansion oracle."""
import random

from lakebench.graph import DataGraph


def random_graph(rng: random.Random, max_nodes: int = 40, vocab: int = 30) -> DataGraph:
    """A small random graph with random keyword bags, possibly disconnected."""
    n = rng.randint(1, max_nodes)
    bags = []
    for _ in range(n):
        k = rng.randint(0, 4)
        bags.append([f"w{rng.randrange(vocab)}" for _ in range(k)])
    edges = set()
    for _ in range(rng.randint(0, n * 2)):
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return DataGraph.from_parts(bags, sorted(edges))


def expand_members(graph: DataGraph, center: int, r: int) -> set[int]:
    """Oracle for r-hop membership: repeated one-hop set expansion, no BFS."""
    members = {center}
    for _ in range(r):
        grown = set(members)
        for v in members:
            grown |= graph.adjacency[v]
        if grown == members:
            break
        members = grown
    return members
