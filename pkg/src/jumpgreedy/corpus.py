"""Deterministic verification corpora used by the acceptance suite and benchmarks."""

from __future__ import annotations

from itertools import product
from typing import Iterator

from jumpgreedy.jump_systems import ExplicitJumpSystem, box_system, make_rng, materialize, random_filtered, random_graph
from jumpgreedy.objective import SeparableObjective, random_objective

OBJECTIVE_KINDS = ("linear", "quadratic", "table")


def box_systems(dims=(2, 3), max_side: int = 3) -> Iterator[tuple[str, ExplicitJumpSystem]]:
    """Every box [0, a_1] x ... x [0, a_n] with 0 <= a_i <= max_side."""
    for n in dims:
        for sides in product(range(max_side + 1), repeat=n):
            yield f"box{n}-" + "".join(map(str, sides)), box_system([0] * n, list(sides))


def graph_systems(count: int = 60, seed: int = 0, max_edges: int = 10) -> Iterator[tuple[str, ExplicitJumpSystem]]:
    rng = make_rng([seed, 101])
    for k in range(count):
        n = int(rng.integers(2, 6))
        m = int(rng.integers(1, max_edges + 1))
        G = random_graph(n, m, [seed, 102, k])
        yield f"graph{k}-n{n}-m{m}", materialize(G)


def filtered_systems(count: int = 120, seed: int = 0) -> Iterator[tuple[str, ExplicitJumpSystem]]:
    rng = make_rng([seed, 201])
    for k in range(count):
        n = int(rng.integers(2, 4))
        side = int(rng.integers(2, 4))
        J = random_filtered(n, side, [seed, 202, k], min_size=2, max_size=10 if n == 2 else 12)
        yield f"filtered{k}-n{n}-s{side}", J


def jump_corpus(seed: int = 0, graphs: int = 60, filtered: int = 120) -> list[tuple[str, ExplicitJumpSystem]]:
    return [*box_systems(), *graph_systems(graphs, seed), *filtered_systems(filtered, seed)]


def objectives_for(J: ExplicitJumpSystem, seed, kinds=OBJECTIVE_KINDS) -> Iterator[tuple[str, SeparableObjective]]:
    lo, hi = J.bbox
    for k, kind in enumerate(kinds):
        yield kind, random_objective(kind, lo, hi, make_rng([*seed, 300 + k]))


def dm_weight_vectors(n: int, count: int = 20, seed: int = 0) -> list[tuple[int, ...]]:
    """Fixed patterns (zeros, ties, sign mixes) followed by random small integers."""
    fixed = [
        (0,) * n,
        (1,) * n,
        (-1,) * n,
        tuple((-1) ** i for i in range(n)),
        tuple(-((-1) ** i) for i in range(n)),
        tuple(i - n // 2 for i in range(n)),
        tuple(2 if i % 2 else -2 for i in range(n)),
        tuple(-(i + 1) for i in range(n)),
        tuple(i + 1 for i in range(n)),
        tuple(0 if i % 2 else -3 for i in range(n)),
    ]
    rng = make_rng([seed, 401, n])
    out = list(dict.fromkeys(fixed))
    # distinct while [-3, 3]^n has room, repeats only for n = 1
    distinct = min(count, 7**n)
    while len(out) < count:
        c = tuple(int(v) for v in rng.integers(-3, 4, size=n))
        if c not in out or len(out) >= distinct:
            out.append(c)
    return out[:count]
