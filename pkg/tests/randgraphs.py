"""Seeded random valid ribbon graphs for property tests."""

import random

from dehnfill.graph import Edge, GraphError, RotationGraph, Surface


def random_graph(rng: random.Random, surface: Surface | None = None) -> RotationGraph:
    """Rejection-sample a cellular torus or Klein bottle graph with 1 or 2 vertices."""
    while True:
        surf = surface or rng.choice([Surface.TORUS, Surface.KLEIN])
        n, t = rng.choice([(1, 2), (2, 1), (2, 2), (1, 4)])
        deg = 5 * t
        slots = [(v, s) for v in range(n) for s in range(deg)]
        rng.shuffle(slots)
        edges = []
        for k in range(0, len(slots), 2):
            twist = rng.randint(0, 1) if surf is Surface.KLEIN else 0
            edges.append(Edge((slots[k], slots[k + 1]), twist))
        signs = [rng.choice([1, -1]) for _ in range(n)]
        offsets = [rng.randrange(deg) for _ in range(n)]
        try:
            return RotationGraph(surf, signs, edges, t, 5, offsets)
        except GraphError:
            continue
