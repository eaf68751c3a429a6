"""Seeded instance streams shared by the unit and acceptance tests."""

from vhl.generate import random_kpartite, rng_for


def triangle_graphs(count=200, max_n=8, max_m=6, low=1, high=20, seed=1000):
    for s in range(count):
        rng = rng_for(seed + s)
        n1, n2 = (int(x) for x in rng.integers(1, max_n + 1, size=2))
        m = int(rng.integers(1, max_m + 1))
        yield random_kpartite((n1, n2, m), low, high, rng)


def clique_graphs(k, count, max_n, max_m, low=1, high=9, seed=2000):
    for s in range(count):
        rng = rng_for(seed + 97 * k + s)
        n1, n2 = (int(x) for x in rng.integers(1, max_n + 1, size=2))
        ms = [int(x) for x in rng.integers(1, max_m + 1, size=k - 2)]
        yield random_kpartite((n1, n2, *ms), low, high, rng)


def walk_graphs(count=100, max_n=6, max_m=5, low=1, high=20, seed=3000):
    yield from triangle_graphs(count, max_n, max_m, low, high, seed)
