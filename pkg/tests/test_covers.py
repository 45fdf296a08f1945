import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coarsedim.covers import (
    INFINITE,
    Cover,
    EmptyCover,
    NotACover,
    NotAGridSpace,
    SideTooSmall,
    brick_cover,
    is_lebesgue_at_least,
    lebesgue_margin,
    mesh,
    multiplicity,
    verify_cover,
)
from coarsedim.metric import closed_ball, gen_grid, random_graph_space

from conftest import random_cover


def margins_by_definition(space, cover):
    out = []
    for x in range(space.size):
        best = -math.inf
        for elem in cover:
            if x in elem:
                outside = [y for y in range(space.size) if y not in elem]
                best = max(best, min((space.d(x, y) for y in outside), default=math.inf))
        out.append(best)
    return out


def balls_fit(space, cover, L):
    return all(any(set(closed_ball(space, x, L)) <= set(e) for e in cover)
               for x in range(space.size))


class TestCoverType:
    def test_canonical_form(self):
        assert Cover([[3, 1, 1], [2]]) == Cover([(1, 3), (2,)])
        assert Cover([[3, 1]]).elements == ((1, 3),)

    def test_rejects_empty_element(self):
        with pytest.raises(ValueError):
            Cover([[0], []])


class TestMultiplicity:
    def test_partition(self, line6):
        assert multiplicity(line6, Cover([[0, 1], [2, 3, 4], [5]])) == 1

    def test_overlap(self, line6, two_intervals):
        assert multiplicity(line6, two_intervals) == 2

    def test_three_at_zero(self, line6):
        assert multiplicity(line6, Cover([[0], [0, 1], [0, 2, 3, 4, 5]])) >= 3

    def test_empty_family(self, line6):
        assert multiplicity(line6, Cover([])) == 0


class TestMesh:
    def test_singletons(self, line6):
        assert mesh(line6, Cover([[x] for x in range(6)])) == 0

    def test_intervals(self, line6, two_intervals):
        assert mesh(line6, two_intervals) == 3

    def test_whole(self, line6):
        assert mesh(line6, Cover([range(6)])) == 5

    def test_empty(self, line6):
        with pytest.raises(EmptyCover):
            mesh(line6, Cover([]))


class TestLebesgue:
    def test_whole_space_is_infinite(self, line6):
        margin, per_point = lebesgue_margin(line6, Cover([range(6)]))
        assert margin == INFINITE and math.isinf(margin)
        assert np.isinf(per_point).all()

    def test_two_intervals(self, line6, two_intervals):
        expected = margins_by_definition(line6, two_intervals)
        assert expected == [4, 3, 2, 2, 3, 4]
        margin, per_point = lebesgue_margin(line6, two_intervals)
        assert per_point.tolist() == expected
        assert margin == 2

    def test_singletons(self):
        line = gen_grid(1, 10)
        assert lebesgue_margin(line, Cover([[x] for x in range(10)]))[0] == 1

    def test_threshold_is_strict(self, line6, two_intervals):
        assert is_lebesgue_at_least(line6, two_intervals, 1)
        assert not is_lebesgue_at_least(line6, two_intervals, 2)
        assert is_lebesgue_at_least(line6, two_intervals, 0)

    def test_not_a_cover(self, line6):
        with pytest.raises(NotACover) as err:
            lebesgue_margin(line6, Cover([[0, 1, 2]]))
        assert err.value.uncovered == (3, 4, 5)

    def test_margin_matches_ball_inclusion(self):
        rng = np.random.default_rng(2024)
        for _ in range(150):
            space = random_graph_space(int(rng.integers(1, 14)), 0.3, rng)
            cover = random_cover(space, rng)
            margin, per_point = lebesgue_margin(space, cover)
            assert per_point.tolist() == margins_by_definition(space, cover)
            for L in sorted(set(space.dist.ravel().tolist())) + [0.5, 2.5]:
                assert is_lebesgue_at_least(space, cover, L) == balls_fit(space, cover, L)

    def test_adding_elements_is_monotone(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            space = random_graph_space(int(rng.integers(2, 14)), 0.3, rng)
            cover = random_cover(space, rng)
            extra = rng.choice(space.size, size=int(rng.integers(1, space.size + 1)), replace=False)
            bigger = Cover(list(cover) + [extra.tolist()])
            assert multiplicity(space, bigger) >= multiplicity(space, cover)
            assert lebesgue_margin(space, bigger)[0] >= lebesgue_margin(space, cover)[0]


class TestBrickCover:
    def test_one_dimensional_tiles(self):
        cover = brick_cover(gen_grid(1, 8), 2)
        assert cover.elements == ((0, 1, 2, 3), (4, 5, 6, 7), (0, 1), (2, 3, 4, 5), (6, 7))
        assert multiplicity(gen_grid(1, 8), cover) == 2
        assert mesh(gen_grid(1, 8), cover) == 3

    def test_two_dimensional_multiplicity(self):
        space = gen_grid(2, 12)
        cover = brick_cover(space, 2)
        counts = [sum(x in e for e in cover) for x in range(space.size)]
        assert max(counts) == min(counts) == 3
        assert multiplicity(space, cover) == 3

    def test_rejects(self):
        with pytest.raises(NotAGridSpace):
            brick_cover(gen_grid(2, 8, "l1"), 1)
        with pytest.raises(NotAGridSpace):
            brick_cover(random_graph_space(5, 0.5, np.random.default_rng(0)), 1)
        with pytest.raises(SideTooSmall):
            brick_cover(gen_grid(2, 5), 2)

    @settings(max_examples=40, deadline=None)
    @given(dim=st.integers(1, 3), q=st.integers(1, 4), extra=st.integers(0, 6))
    def test_guarantees(self, dim, q, extra):
        side = (dim + 1) * q + extra
        if side ** dim > 3000:
            side = (dim + 1) * q
        space = gen_grid(dim, side)
        cover = brick_cover(space, q)
        report = verify_cover(space, cover, n=dim, S=(dim + 1) * q - 1)
        assert report.passed, report.failures
        # every coordinate is near the cut planes of at most one colour
        if side >= 2 * (dim + 1) * q:
            assert report.min_margin >= q / 2

    @pytest.mark.parametrize("q", [1, 2, 3, 5, 8])
    def test_line_margin(self, q):
        space = gen_grid(1, 4 * q + 3)
        assert lebesgue_margin(space, brick_cover(space, q))[0] >= math.ceil(q / 2)


class TestVerifyCover:
    def test_singletons(self, line6):
        report = verify_cover(line6, Cover([[x] for x in range(6)]), n=0, S=0)
        assert report.passed and report.is_cover
        assert report.lebesgue_ok is None

    def test_two_intervals(self, line6, two_intervals):
        report = verify_cover(line6, two_intervals, n=1, S=3, L=1)
        assert report.passed
        assert (report.multiplicity, report.mesh, report.min_margin) == (2, 3, 2)

    def test_lebesgue_failure_names_point(self, line6, two_intervals):
        report = verify_cover(line6, two_intervals, n=1, S=3, L=2)
        assert not report.passed and report.lebesgue_ok is False
        assert report.margin_argmin == 2

    def test_non_cover_reported(self, line6):
        report = verify_cover(line6, Cover([[0, 1]]), n=0)
        assert not report.is_cover and not report.passed
        assert report.uncovered == (2, 3, 4, 5)

    def test_empty_family(self, line6):
        report = verify_cover(line6, Cover([]))
        assert not report.is_cover and report.multiplicity == 0
