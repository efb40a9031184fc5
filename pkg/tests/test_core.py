from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jumpgreedy.core import (
    ZERO,
    DimensionError,
    UnitStep,
    add_step,
    add_steps,
    combined_norm,
    in_s_region,
    in_s_region_direct,
    inc,
    l1_distance,
    step_between,
    steps_with_zero,
    unit_steps,
)

P1, M1, P2, M2 = UnitStep.plus(0), UnitStep.minus(0), UnitStep.plus(1), UnitStep.minus(1)


def points(n):
    return st.tuples(*[st.integers(-6, 6)] * n)


@st.composite
def point_pairs(draw):
    n = draw(st.integers(1, 4))
    return draw(points(n)), draw(points(n))


@st.composite
def region_args(draw):
    n = draw(st.integers(1, 4))
    steps = steps_with_zero(n)
    s = draw(st.sampled_from(steps))
    t = draw(st.sampled_from(steps))
    if combined_norm(s, t) == 0:
        t = ZERO if not s.is_zero else steps[1]
        if combined_norm(s, t) == 0:
            s = steps[1]
    return draw(points(n)), draw(points(n)), s, t


class TestDistance:
    def test_examples(self):
        assert l1_distance((0, 0), (3, 0)) == 3
        assert l1_distance((1, 1), (1, 1)) == 0
        assert l1_distance((1, 1), (0, 3)) == 3

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            l1_distance((0, 0), (0, 0, 0))

    def test_large_coordinates_do_not_overflow(self):
        assert l1_distance((-(10**9), 10**9), (10**9, -(10**9))) == 4 * 10**9


class TestInc:
    def test_examples(self):
        assert inc((0, 0), (3, 0)) == [P1]
        assert inc((2, 5), (2, 5)) == []
        assert inc((1, 1), (0, 3)) == [M1, P2]

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            inc((0,), (0, 0))

    @given(point_pairs())
    def test_each_step_shortens_distance_by_one(self, xy):
        x, y = xy
        d = l1_distance(x, y)
        for s in inc(x, y):
            assert l1_distance(add_step(x, s), y) == d - 1

    @given(point_pairs())
    def test_empty_iff_equal(self, xy):
        x, y = xy
        assert (inc(x, y) == []) == (x == y)


class TestUnitStep:
    def test_canonical_order(self):
        assert unit_steps(2) == (P1, M1, P2, M2)
        assert steps_with_zero(1) == (ZERO, P1, M1)
        assert sorted([M2, P2, ZERO, M1, P1], key=UnitStep.sort_key) == [ZERO, P1, M1, P2, M2]

    def test_tokens_round_trip(self):
        for s in steps_with_zero(3):
            assert UnitStep.from_token(s.to_token()) == s
        assert P1.to_token() == "+1" and M2.to_token() == "-2" and ZERO.to_token() == "0"
        assert str(P1) == "+χ1"

    def test_negation_and_norms(self):
        assert -P1 == M1 and -ZERO == ZERO
        assert combined_norm(P1, M1) == 0
        assert combined_norm(P1, P1) == 2
        assert combined_norm(P1, ZERO) == 1
        assert combined_norm(P1, M2) == 2

    def test_step_between(self):
        assert step_between((0, 0), (1, 1)) == (P1, P2)
        assert step_between((1, 0), (3, 0)) == (P1, P1)
        assert step_between((0, 0), (0, -1)) == (M2, ZERO)
        with pytest.raises(ValueError):
            step_between((0, 0), (3, 0))

    @given(region_args())
    def test_step_between_inverts_add(self, args):
        x, _, s, t = args
        y = add_steps(x, s, t)
        a, b = step_between(x, y)
        assert add_steps(x, a, b) == y


class TestSRegion:
    def test_examples(self):
        assert in_s_region((3, 0), (0, 0), P1, ZERO)
        assert not in_s_region((1, 0), (0, 0), P1, P2)
        assert in_s_region((3, 0), (1, 0), P1, P1)

    def test_cancelling_pair_rejected(self):
        with pytest.raises(ValueError):
            in_s_region((0, 0), (0, 0), P1, M1)
        with pytest.raises(ValueError):
            in_s_region_direct((0, 0), (0, 0), ZERO, ZERO)

    def test_zero_first_is_symmetric(self):
        for y in product(range(-2, 3), repeat=2):
            assert in_s_region(y, (0, 0), ZERO, M2) == in_s_region(y, (0, 0), M2, ZERO)

    @given(region_args())
    def test_case_table_matches_distance_identity(self, args):
        x, y, s, t = args
        assert in_s_region(y, x, s, t) == in_s_region_direct(y, x, s, t)
