"""Shared corpus generators and independent oracles for the test suite."""

from __future__ import annotations

import random

from maxplus import NEG_INF, PtegSystem, TropicalMatrix


def random_matrix(rng: random.Random, n: int, lo=-5, hi=5, density=0.5) -> TropicalMatrix:
    """Integer entries in [lo, hi], each replaced by -inf with prob 1-density."""
    return TropicalMatrix(
        [
            [rng.randint(lo, hi) if rng.random() < density else NEG_INF for _ in range(n)]
            for _ in range(n)
        ]
    )


def random_system(rng: random.Random, n: int) -> PtegSystem:
    return PtegSystem(
        dynamics=random_matrix(rng, n),
        backward=random_matrix(rng, n),
        within=random_matrix(rng, n),
        extra_forward=random_matrix(rng, n),
    )


def star_by_powers(matrix: TropicalMatrix) -> TropicalMatrix:
    """Independent star oracle: identity oplus all products of length < n.

    Valid whenever the graph has no positive-weight circuit (path weights
    are then maximized by simple paths, which have fewer than n arcs).
    """
    n = matrix.rows
    acc = TropicalMatrix.identity(n)
    power = TropicalMatrix.identity(n)
    for _ in range(n - 1):
        power = power @ matrix
        acc = acc + power
    return acc


def enumerate_path_star(matrix: TropicalMatrix, max_len: int) -> TropicalMatrix:
    """Brute-force star by enumerating every path up to a given length."""
    n = matrix.rows
    best = [[NEG_INF] * n for _ in range(n)]
    for i in range(n):
        best[i][i] = 0

    def walk(start: int, node: int, weight, length: int):
        if weight > best[node][start]:
            best[node][start] = weight
        if length == max_len:
            return
        for nxt in range(n):
            w = matrix[nxt, node]
            if w != NEG_INF:
                walk(start, nxt, weight + w, length + 1)

    for start in range(n):
        walk(start, start, 0, 0)
    return TropicalMatrix(best)
