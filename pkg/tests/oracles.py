"""Переборные оракулы для сверки с быстрыми алгоритмами на малых графах."""
from itertools import combinations, product

from tri_lab.graph import BipartiteGraph, TripartiteGraph, Vertex


def brute_triangles(graph: TripartiteGraph) -> int:
    """T(G) перебором всех троек вершин."""
    n = graph.n
    total = 0
    for a, b, c in product(range(n), repeat=3):
        x, y, z = Vertex(1, a), Vertex(2, b), Vertex(3, c)
        if graph.has_edge(x, y) and graph.has_edge(x, z) and graph.has_edge(y, z):
            total += 1
    return total


def brute_has_k3s(graph: TripartiteGraph, s: int) -> bool:
    """Наличие K_3(s) перебором s-подмножеств в каждой доле."""
    subsets = list(combinations(range(graph.n), s))
    for first, second, third in product(subsets, repeat=3):
        chosen = ((1, first), (2, second), (3, third))
        if all(
            graph.has_edge(Vertex(i, a), Vertex(j, b))
            for (i, side_i), (j, side_j) in combinations(chosen, 2)
            for a in side_i
            for b in side_j
        ):
            return True
    return False


def brute_has_kss(graph: BipartiteGraph, s: int) -> bool:
    """Наличие K_{s,s} перебором s-подмножеств обеих сторон."""
    for left in combinations(range(graph.m), s):
        for right in combinations(range(graph.n), s):
            if all(graph.has_edge(u, v) for u in left for v in right):
                return True
    return False
