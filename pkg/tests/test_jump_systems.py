from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jumpgreedy.core import DimensionError, UnitStep, box_points
from jumpgreedy.jump_systems import (
    ExplicitJumpSystem,
    GraphDegreeJumpSystem,
    JumpSystemError,
    _verify_jexc_sparse,
    complete_graph,
    generate_random,
    materialize,
    psi,
    random_graph,
    verify_jexc,
)
from jumpgreedy.kernels import BACKENDS

K3_POINTS = {(0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2), (2, 2, 2)}


def small_sets(n=2, side=3, max_size=7):
    cells = list(box_points([0] * n, [side] * n))
    return st.sets(st.sampled_from(cells), min_size=1, max_size=max_size)


class TestExplicit:
    def test_membership(self, j1):
        J, _ = j1
        assert J.contains((3, 0))
        assert not J.contains((2, 0))
        with pytest.raises(DimensionError):
            J.contains((3, 0, 0))

    def test_bbox_and_order(self, j1):
        J, _ = j1
        assert J.bbox == ((0, 0), (3, 1))
        assert J.points == tuple(sorted(J.points))

    def test_rejects_empty_and_mixed_dimensions(self):
        with pytest.raises(JumpSystemError):
            ExplicitJumpSystem([])
        with pytest.raises((JumpSystemError, DimensionError)):
            ExplicitJumpSystem([(0, 0), (0, 0, 0)])


class TestJexc:
    def test_examples(self, j1, j2):
        assert verify_jexc(j1[0]) is None
        assert verify_jexc(j2[0]) is None
        assert verify_jexc(ExplicitJumpSystem([(0, 0), (2, 0)])) is None

    def test_counterexample(self):
        cx = verify_jexc(ExplicitJumpSystem([(0, 0), (3, 0)]))
        assert (cx.x, cx.y, cx.s) == ((0, 0), (3, 0), UnitStep.plus(0))
        assert str(cx) == "x=(0,0) y=(3,0) s=+χ1"

    def test_first_counterexample_is_lexicographic(self):
        J = ExplicitJumpSystem([(0, 0), (0, 3), (3, 0)])
        cx = verify_jexc(J)
        assert (cx.x, cx.y, cx.s) == ((0, 0), (0, 3), UnitStep.plus(1))

    @settings(max_examples=150, deadline=None)
    @given(small_sets())
    def test_backends_and_sparse_path_agree(self, pts):
        J = ExplicitJumpSystem(pts)
        verdicts = {name: verify_jexc(J, backend=b) for name, b in BACKENDS.items()}
        verdicts["sparse"] = _verify_jexc_sparse(J)
        assert len(set(verdicts.values())) == 1, verdicts

    @settings(max_examples=100, deadline=None)
    @given(small_sets(n=3, side=2, max_size=9))
    def test_counterexample_is_a_witness(self, pts):
        J = ExplicitJumpSystem(pts)
        cx = verify_jexc(J)
        if cx is None:
            return
        from jumpgreedy.core import add_step, inc

        assert cx.x in pts and cx.y in pts and cx.s in inc(cx.x, cx.y)
        xs = add_step(cx.x, cx.s)
        assert xs not in pts
        assert not any(add_step(xs, t) in pts for t in inc(xs, cx.y))


class TestGraphs:
    def test_triangle(self):
        G = complete_graph(3)
        assert set(materialize(G).points) == K3_POINTS
        assert not G.contains((1, 1, 1))
        assert G.contains((2, 2, 2))

    def test_loop_conventions(self):
        assert materialize(GraphDegreeJumpSystem(1, ((0, 0),))).points == ((0,), (2,))
        assert materialize(GraphDegreeJumpSystem(1, ((0, 0),), loop_degree=1)).points == ((0,), (1,))

    def test_edgeless(self):
        assert materialize(GraphDegreeJumpSystem(2, ())).points == ((0, 0),)

    def test_edge_limit(self):
        G = GraphDegreeJumpSystem(2, ((0, 1),) * 5)
        with pytest.raises(JumpSystemError):
            materialize(G, edge_limit=4)

    def test_bad_vertex(self):
        with pytest.raises(JumpSystemError):
            GraphDegreeJumpSystem(2, ((0, 2),))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 5), st.integers(0, 9), st.integers(0, 10**6))
    def test_membership_matches_materialization(self, n, m, seed):
        G = random_graph(n, m, seed)
        M = materialize(G)
        assert verify_jexc(M) is None
        lo, hi = M.bbox
        for x in box_points([a - 1 for a in lo], [b + 1 for b in hi]):
            assert G.contains(x) == M.contains(x)


class TestPsi:
    def test_examples(self, j1, j2):
        assert psi(j1[0]) == 4
        assert psi(j2[0]) == 5
        assert psi(ExplicitJumpSystem([(7, -2)])) == 0

    @given(small_sets())
    def test_zero_iff_singleton(self, pts):
        J = ExplicitJumpSystem(pts)
        assert psi(J) >= 0
        assert (psi(J) == 0) == (len(J) == 1)


class TestGenerators:
    def test_box(self):
        J = generate_random("box", {"lo": (0, 0), "hi": (1, 1)})
        assert J.points == ((0, 0), (0, 1), (1, 0), (1, 1))

    def test_graph_k3(self):
        J = generate_random("graph", {"vertices": 3, "edges": [(0, 1), (0, 2), (1, 2)]}, seed=5)
        assert set(J.points) == K3_POINTS

    def test_limits(self):
        with pytest.raises(JumpSystemError):
            generate_random("graph", {"vertices": 6, "edges": 3})
        with pytest.raises(JumpSystemError):
            generate_random("box", {"lo": (0,), "hi": (7,)})

    def test_budget_exhaustion(self):
        with pytest.raises(JumpSystemError):
            generate_random("filtered", {"dimension": 3, "side": 6, "min_size": 60, "max_size": 60, "budget": 3})

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from(["graph", "filtered"]), st.integers(0, 10**6))
    def test_deterministic_and_valid(self, kind, seed):
        params = {"vertices": 3, "edges": 4} if kind == "graph" else {"dimension": 2, "side": 3}
        J = generate_random(kind, params, seed)
        assert J == generate_random(kind, params, seed)
        assert verify_jexc(J) is None
        for x in product(range(-1, 5), repeat=2 if kind == "filtered" else 3):
            assert J.contains(x) == (x in J.point_set)
