import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jumpgreedy.corpus import dm_weight_vectors
from jumpgreedy.delta_matroid import (
    DeltaMatroid,
    DeltaMatroidError,
    check_corollary3_step,
    cost,
    dm_greedy,
    dm_optimum,
    dm_refined_choices,
    dm_refined_greedy,
    enumerate_delta_matroids,
    enumerate_families,
    greedy_order,
    greedy_orders,
    m_star_dm,
    mask_of,
    mu_dm,
    to_jump_system,
    verify_symmetric_exchange,
)
from jumpgreedy.jump_systems import verify_jexc
from jumpgreedy.kernels import BACKENDS

# regression value recorded on the first verified enumeration
N2_DELTA_MATROIDS = 15

DM_N3 = list(enumerate_delta_matroids(3))


def free(n):
    return DeltaMatroid(n, tuple(range(1 << n)))


def chain12():
    return DeltaMatroid.from_sets(2, [[], [0], [0, 1]])


weights = st.lists(st.integers(-3, 3), min_size=3, max_size=3).map(tuple)


class TestAxiom:
    def test_examples(self):
        assert verify_symmetric_exchange(free(3)) is None
        assert verify_symmetric_exchange(chain12()) is None
        cx = verify_symmetric_exchange(DeltaMatroid.from_sets(3, [[], [0, 1, 2]]))
        assert (cx.X, cx.Y, cx.i) == (0, 0b111, 0)
        assert str(cx) == "X={} Y={1,2,3} i=1"

    def test_family_validation(self):
        with pytest.raises(DeltaMatroidError):
            DeltaMatroid(2, ())
        with pytest.raises(DeltaMatroidError):
            DeltaMatroid(2, (4,))

    def test_backends_agree_on_all_n3_families(self):
        for D in enumerate_families(3):
            verdicts = {name: verify_symmetric_exchange(D, b) for name, b in BACKENDS.items()}
            assert len(set(verdicts.values())) == 1

    def test_embedding_points(self):
        assert set(to_jump_system(chain12()).points) == {(0, 0), (1, 0), (1, 1)}
        assert set(to_jump_system(free(2)).points) == {(0, 0), (0, 1), (1, 0), (1, 1)}


class TestEnumeration:
    def test_counts(self):
        assert len(list(enumerate_delta_matroids(1))) == 3
        assert len(list(enumerate_delta_matroids(2))) == N2_DELTA_MATROIDS
        assert all(verify_symmetric_exchange(D) is None for D in enumerate_delta_matroids(2))

    def test_stable_order(self):
        assert [D.family for D in enumerate_delta_matroids(2)] == [D.family for D in enumerate_delta_matroids(2)]

    def test_limit(self):
        with pytest.raises(DeltaMatroidError):
            next(enumerate_delta_matroids(5))

    def test_n3_agrees_with_jump_embedding(self):
        assert {D.family for D in DM_N3} == {
            D.family for D in enumerate_families(3) if verify_jexc(to_jump_system(D)) is None
        }


class TestGreedy:
    def test_example(self):
        D, c = chain12(), (-3, 1)
        assert dm_greedy(D, c) == mask_of([0]) and cost(c, dm_greedy(D, c)) == -3
        assert dm_optimum(D, c) == (-3, (mask_of([0]),))

    def test_zero_weights(self):
        D = chain12()
        assert dm_greedy(D, (0, 0)) in D

    def test_orders(self):
        assert greedy_order((1, -3, 3, 0)) == [1, 2, 0, 3]
        assert sorted(map(tuple, greedy_orders((1, -3, 3, 0)))) == [(1, 2, 0, 3), (2, 1, 0, 3)]

    @settings(max_examples=200, deadline=None)
    @given(st.sampled_from(DM_N3), weights)
    def test_matches_brute_force_for_every_order(self, D, c):
        opt, _ = dm_optimum(D, c)
        for order in greedy_orders(c):
            F = dm_greedy(D, c, order)
            assert F in D and cost(c, F) == opt


class TestRefined:
    def test_example(self):
        D, c = chain12(), (-3, 1)
        tr = dm_refined_greedy(D, c, 0)
        assert [(s.i, s.j) for s in tr.steps] == [(0, 0)]
        assert tr.final == mask_of([0])
        assert mu_dm(D, c, 0) == 1 and m_star_dm(D, c, 0) == {mask_of([0])}

    def test_optimal_start(self):
        assert len(dm_refined_greedy(chain12(), (-3, 1), mask_of([0]))) == 0

    def test_infeasible_start(self):
        with pytest.raises(DeltaMatroidError):
            dm_refined_greedy(chain12(), (-3, 1), mask_of([1]))

    def test_free_all_negative(self):
        for n in (1, 2, 3):
            assert mu_dm(free(n), (-1,) * n, 0) == n

    @settings(max_examples=200, deadline=None)
    @given(st.sampled_from(DM_N3), weights)
    def test_refined_steps_and_optimality(self, D, c):
        opt, _ = dm_optimum(D, c)
        for F in D.family:
            for i, j in dm_refined_choices(D, c, F):
                assert check_corollary3_step(D, c, F, i, j) is None
            tr = dm_refined_greedy(D, c, F)
            prev = cost(c, F)
            for s in tr.steps:
                assert s.G in D and s.cost_after < prev
                prev = s.cost_after
            assert cost(c, tr.final) == opt

    def test_weight_vectors_cover_ties_zeros_and_signs(self):
        for n in (1, 2, 3, 4):
            W = dm_weight_vectors(n)
            assert len(W) == 20
            assert len(set(W)) == min(20, 7**n)
            assert (0,) * n in W
        W = dm_weight_vectors(4)
        assert any(min(c) < 0 < max(c) for c in W)
        assert any(len(set(map(abs, c))) < 4 for c in W)

    def test_all_flips_of_n3_families(self):
        # every F in every delta-matroid on 3 elements, every weight in {-1,0,1}^3
        for D in DM_N3[::7]:
            for c in itertools.product((-1, 0, 1), repeat=3):
                opt, _ = dm_optimum(D, c)
                for F in D.family:
                    assert cost(c, dm_refined_greedy(D, c, F).final) == opt
