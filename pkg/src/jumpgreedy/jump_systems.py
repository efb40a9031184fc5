"""Jump-system representations, the J-EXC verifier, Ψ(J) and random generators."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from jumpgreedy import kernels
from jumpgreedy.core import (
    DimensionError,
    Point,
    UnitStep,
    add_step,
    as_point,
    box_points,
    format_point,
    inc,
)

DEFAULT_EDGE_LIMIT = 24
DENSE_GRID_LIMIT = 1 << 22


class JumpSystemError(ValueError):
    pass


@dataclass(frozen=True)
class JexcCounterexample:
    """Witness (x, y, s) that the J-EXC axiom fails."""

    x: Point
    y: Point
    s: UnitStep

    def __str__(self) -> str:
        return f"x={format_point(self.x)} y={format_point(self.y)} s={self.s}"


class ExplicitJumpSystem:
    """A finite point set with fast membership and deterministic iteration order."""

    def __init__(self, points: Iterable[Sequence[int]], dimension: Optional[int] = None):
        pts = {as_point(p) for p in points}
        if not pts:
            raise JumpSystemError("a jump system must be nonempty")
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise DimensionError(f"points of mixed dimension {sorted(dims)}")
        (n,) = dims
        if dimension is not None and dimension != n:
            raise DimensionError(f"declared dimension {dimension} but points have {n}")
        if n < 1:
            raise JumpSystemError("dimension must be at least 1")
        self.dimension = n
        self.point_set = frozenset(pts)
        self.points = tuple(sorted(pts))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, x) -> bool:
        return tuple(x) in self.point_set

    def __eq__(self, other) -> bool:
        return isinstance(other, ExplicitJumpSystem) and self.point_set == other.point_set

    def __hash__(self) -> int:
        return hash(self.point_set)

    def __repr__(self) -> str:
        return f"ExplicitJumpSystem(n={self.dimension}, |J|={len(self.points)})"

    def contains(self, x: Sequence[int]) -> bool:
        if len(x) != self.dimension:
            raise DimensionError(f"point has dimension {len(x)}, system has {self.dimension}")
        return tuple(x) in self.point_set

    @cached_property
    def bbox(self) -> tuple[Point, Point]:
        arr = np.array(self.points, dtype=np.int64)
        return tuple(int(v) for v in arr.min(axis=0)), tuple(int(v) for v in arr.max(axis=0))


@dataclass(frozen=True)
class GraphDegreeJumpSystem:
    """Degree sequences of all subgraphs of a multigraph (loops and parallel edges allowed).

    Edges are 0-based vertex pairs. ``loop_degree`` is what a loop adds to its
    endpoint's degree (2 by default).
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    loop_degree: int = 2
    _memo: dict = field(default_factory=dict, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.vertex_count < 1:
            raise JumpSystemError("a graph needs at least one vertex")
        if self.loop_degree not in (1, 2):
            raise JumpSystemError("loop_degree must be 1 or 2")
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise JumpSystemError(f"edge ({u + 1},{v + 1}) references a missing vertex")
            norm.append((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def dimension(self) -> int:
        return self.vertex_count

    def edge_vector(self, e: tuple[int, int]) -> list[int]:
        vec = [0] * self.vertex_count
        u, v = e
        if u == v:
            vec[u] += self.loop_degree
        else:
            vec[u] += 1
            vec[v] += 1
        return vec

    @cached_property
    def _suffix_capacity(self) -> list[tuple[int, ...]]:
        # capacity[k][v]: degree vertex v can still gain from edges k..m-1
        caps = [tuple([0] * self.vertex_count)]
        for e in reversed(self.edges):
            vec = self.edge_vector(e)
            caps.append(tuple(a + b for a, b in zip(caps[-1], vec)))
        caps.reverse()
        return caps

    @property
    def bbox(self) -> tuple[Point, Point]:
        return tuple([0] * self.vertex_count), self._suffix_capacity[0]

    def contains(self, x: Sequence[int]) -> bool:
        if len(x) != self.vertex_count:
            raise DimensionError(f"point has dimension {len(x)}, system has {self.vertex_count}")
        key = tuple(x)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._search(0, key, {})
            self._memo[key] = hit
        return hit

    __contains__ = contains

    def _search(self, k: int, residual: Point, seen: dict) -> bool:
        if not any(residual):
            return True
        if k == len(self.edges):
            return False
        cap = self._suffix_capacity[k]
        for r, c in zip(residual, cap):
            if r < 0 or r > c:
                return False
        # every edge adds exactly 2 to the degree sum under the default convention
        if self.loop_degree == 2 and sum(residual) % 2:
            return False
        state = (k, residual)
        if state in seen:
            return seen[state]
        u, v = self.edges[k]
        take = list(residual)
        if u == v:
            take[u] -= self.loop_degree
        else:
            take[u] -= 1
            take[v] -= 1
        ok = self._search(k + 1, tuple(take), seen) or self._search(k + 1, residual, seen)
        seen[state] = ok
        return ok


JumpSystem = Union[ExplicitJumpSystem, GraphDegreeJumpSystem]


def materialize(J: GraphDegreeJumpSystem, edge_limit: int = DEFAULT_EDGE_LIMIT) -> ExplicitJumpSystem:
    """All distinct degree vectors of edge subsets of the graph."""
    if len(J.edges) > edge_limit:
        raise JumpSystemError(f"{len(J.edges)} edges exceeds the materialization limit {edge_limit}")
    reached = {tuple([0] * J.vertex_count)}
    for e in J.edges:
        vec = J.edge_vector(e)
        reached |= {tuple(a + b for a, b in zip(p, vec)) for p in reached}
    return ExplicitJumpSystem(reached, dimension=J.vertex_count)


def as_explicit(J: JumpSystem) -> ExplicitJumpSystem:
    return J if isinstance(J, ExplicitJumpSystem) else materialize(J)


def verify_jexc(J: ExplicitJumpSystem, backend=None) -> Optional[JexcCounterexample]:
    """Check the J-EXC axiom exhaustively.

    Returns None on success or the first counterexample in lexicographic
    (x, y, s) order. ``backend`` may be a kernel module from
    ``kernels.BACKENDS``; defaults to the import-time selection.
    """
    if isinstance(J, GraphDegreeJumpSystem):
        J = materialize(J)
    lo, hi = J.bbox
    shape = [b - a + 1 for a, b in zip(lo, hi)]
    volume = 1
    for s in shape:
        volume *= s
    if volume > DENSE_GRID_LIMIT:
        return _verify_jexc_sparse(J)
    pts = np.array(J.points, dtype=np.int64) - np.array(lo, dtype=np.int64)
    strides = np.array([int(np.prod(shape[i + 1:])) for i in range(len(shape))], dtype=np.int64)
    grid = np.zeros(volume, dtype=np.uint8)
    grid[pts @ strides] = 1
    scan = (backend or kernels).jexc_scan
    hit = scan(grid, pts, strides)
    if hit is None:
        return None
    a, b, i, sign = hit
    return JexcCounterexample(J.points[a], J.points[b], UnitStep(int(i), int(sign)))


def _verify_jexc_sparse(J: ExplicitJumpSystem) -> Optional[JexcCounterexample]:
    members = J.point_set
    for x in J.points:
        for y in J.points:
            for s in inc(x, y):
                xs = add_step(x, s)
                if xs in members:
                    continue
                if not any(add_step(xs, t) in members for t in inc(xs, y)):
                    return JexcCounterexample(x, y, s)
    return None


def psi(J: JumpSystem) -> int:
    """Σ_i (max x(i) - min x(i)) over the system."""
    lo, hi = J.bbox
    return sum(b - a for a, b in zip(lo, hi))


def box_system(lo: Sequence[int], hi: Sequence[int]) -> ExplicitJumpSystem:
    if len(lo) != len(hi) or any(a > b for a, b in zip(lo, hi)):
        raise JumpSystemError("box needs lo <= hi coordinatewise")
    return ExplicitJumpSystem(box_points(lo, hi), dimension=len(lo))


def make_rng(seed) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed))


def random_graph(
    vertices: int,
    edges: int,
    seed,
    loop_prob: float = 0.15,
    loop_degree: int = 2,
) -> GraphDegreeJumpSystem:
    """A random multigraph; each edge is a loop with probability ``loop_prob``."""
    if not (1 <= vertices <= 5) or not (0 <= edges <= 12):
        raise JumpSystemError("graph params outside desk-scale limits (n <= 5, edges <= 12)")
    rng = make_rng(seed)
    out = []
    for _ in range(edges):
        u = int(rng.integers(vertices))
        if vertices == 1 or rng.random() < loop_prob:
            out.append((u, u))
        else:
            v = int(rng.integers(vertices - 1))
            out.append((u, v if v < u else v + 1))
    return GraphDegreeJumpSystem(vertices, tuple(out), loop_degree)


def random_filtered(
    dimension: int,
    side: int,
    seed,
    min_size: int = 2,
    max_size: int = 8,
    budget: int = 20000,
) -> ExplicitJumpSystem:
    """Rejection-sample random subsets of [0, side]^n until one satisfies J-EXC."""
    if not (1 <= dimension <= 5) or not (0 <= side <= 6):
        raise JumpSystemError("filtered params outside desk-scale limits (n <= 5, side <= 6)")
    rng = make_rng(seed)
    cells = list(box_points([0] * dimension, [side] * dimension))
    max_size = min(max_size, len(cells))
    min_size = min(min_size, max_size)
    for _ in range(budget):
        k = int(rng.integers(min_size, max_size + 1))
        pick = rng.choice(len(cells), size=k, replace=False)
        J = ExplicitJumpSystem([cells[int(p)] for p in pick], dimension=dimension)
        if verify_jexc(J) is None:
            return J
    raise JumpSystemError(f"rejection budget of {budget} exhausted")


def generate_random(kind: str, params: dict, seed=0) -> ExplicitJumpSystem:
    """Generate a test jump system.

    kind is ``box`` (params ``lo``, ``hi``), ``graph`` (params ``vertices`` and
    either ``edges`` as a count or as a list of 0-based pairs) or ``filtered``
    (params ``dimension``, ``side``, optional ``min_size``/``max_size``/``budget``).
    """
    if kind == "box":
        lo, hi = params["lo"], params["hi"]
        if len(lo) > 5 or any(b - a > 6 for a, b in zip(lo, hi)):
            raise JumpSystemError("box params outside desk-scale limits (n <= 5, side <= 6)")
        return box_system(lo, hi)
    if kind == "graph":
        return materialize(graph_from_params(params, seed))
    if kind in ("filtered", "filtered-explicit"):
        extra = {k: params[k] for k in ("min_size", "max_size", "budget") if k in params}
        return random_filtered(params["dimension"], params["side"], seed, **extra)
    raise ValueError(f"unknown generator kind {kind!r}")


def graph_from_params(params: dict, seed=0) -> GraphDegreeJumpSystem:
    edges = params["edges"]
    loop_degree = params.get("loop_degree", 2)
    if isinstance(edges, int):
        return random_graph(params["vertices"], edges, seed, params.get("loop_prob", 0.15), loop_degree)
    if len(edges) > 12:
        raise JumpSystemError("graph params outside desk-scale limits (edges <= 12)")
    return GraphDegreeJumpSystem(params["vertices"], tuple(tuple(e) for e in edges), loop_degree)


def complete_graph(n: int) -> GraphDegreeJumpSystem:
    return GraphDegreeJumpSystem(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))
