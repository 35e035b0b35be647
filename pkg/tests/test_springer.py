import math

import pytest

from arclab.diagrams import Triple, coherent_triples
from arclab.exact_algebra import Laurent
from arclab.rings import build_ring
from arclab.springer import (
    arc_graph,
    candidate_generators,
    cell_count,
    center,
    center_multiplication_closed,
    degree_zero_center,
    is_central,
    match_center_to_springer,
    platform_reduction_check,
    springer_presentation,
)


class TestCenter:
    def test_rank_one_ring(self):
        cb = center(build_ring(1, 0, 1))
        assert cb.rank == 1
        assert cb.graded_rank() == Laurent.one()

    def test_h1_center_is_whole_ring(self):
        cb = center(build_ring(2, 0, 0))
        assert cb.graded_rank() == Laurent({0: 1, 2: 1})

    def test_a5_01_center_rank_ten(self):
        cb = center(build_ring(5, 0, 1))
        assert cb.rank == 10 == math.comb(5, 2)

    def test_center_elements_are_central(self):
        ring = build_ring(4, 0, 2)
        cb = center(ring)
        for e in cb.elements:
            assert is_central(ring, e)

    def test_center_closed_under_multiplication(self):
        for t in [(2, 0, 0), (3, 0, 1), (4, 0, 0)]:
            cb = center(build_ring(*t))
            assert center_multiplication_closed(cb)

    def test_degree_zero(self):
        for t in [(1, 0, 1), (3, 1, 2), (4, 1, 1)]:
            rank, spans_unit = degree_zero_center(build_ring(*t))
            assert rank == 1
            assert spans_unit

    def test_even_degrees_only(self):
        for t in [(4, 0, 0), (4, 0, 2), (3, 0, 1)]:
            cb = center(build_ring(*t))
            assert all(d % 2 == 0 for d in cb.degrees)


class TestSpringerPresentation:
    def test_2_0(self):
        p = springer_presentation(2, 0)
        assert p.rank == 2
        assert p.graded_rank == Laurent({0: 1, 2: 1})
        assert not p.torsion_found

    def test_5_1(self):
        p = springer_presentation(5, 1)
        assert p.rank == 10

    @pytest.mark.parametrize("n", range(1, 6))
    def test_full_platform(self, n):
        assert springer_presentation(n, n).rank == 1

    @pytest.mark.parametrize("n,m", [(2, 0), (3, 1), (4, 0), (4, 2), (5, 3), (6, 2)])
    def test_dimension_formula(self, n, m):
        p = springer_presentation(n, m)
        assert p.rank == math.comb(n, (n - m) // 2)
        assert not p.torsion_found

    def test_parity_error(self):
        with pytest.raises(Exception):
            springer_presentation(3, 0)


class TestArcGraph:
    def test_single_arc(self):
        from arclab.diagrams import matchings_cached

        (a,) = matchings_cached(2, 0, 0)
        g = arc_graph(a)
        assert g.marks == 1
        assert cell_count(2, 0) == 2 == math.comb(2, 1)

    def test_b5_01_cells(self):
        assert cell_count(5, 1) == 10

    @pytest.mark.parametrize("n", range(1, 7))
    def test_all_type_ii(self, n):
        assert cell_count(n, n) == 1

    @pytest.mark.parametrize(
        "n,m", [(n, m) for n in range(7) for m in range(n % 2, n + 1, 2)]
    )
    def test_binomial(self, n, m):
        assert cell_count(n, m) == math.comb(n, (n - m) // 2)


class TestCenterVsSpringer:
    def test_h1_candidates(self):
        ring = build_ring(2, 0, 0)
        c1, c2 = candidate_generators(ring)
        assert c1 == {(0, 0, 1): -1}
        assert c2 == {(0, 0, 1): 1}
        assert ring.multiply(c1, c2) == {}
        total = {k: c1.get(k, 0) + c2.get(k, 0) for k in set(c1) | set(c2)}
        assert all(v == 0 for v in total.values())

    def test_type_ii_component_zero(self):
        ring = build_ring(3, 0, 1)
        gens = candidate_generators(ring)
        for i, g in enumerate(gens, start=1):
            for ai in range(len(ring)):
                a = ring.matchings[ai]
                partner = a.partner(i - 1)
                if a.triple.side(partner) is not None:
                    assert all(key[0] != ai for key in g)

    @pytest.mark.parametrize("n,m", [(2, 0), (3, 1), (4, 0), (4, 2), (5, 1)])
    def test_full_match(self, n, m):
        report = match_center_to_springer(n, m)
        assert report.verdict, report.failures
        assert report.center_rank == math.comb(n, (n - m) // 2)


class TestPlatformReduction:
    def test_fig_3_2_3(self):
        report = platform_reduction_check(3, 2, 3)
        assert report.graded_equal
        assert report.degree_zero_rank == 1

    def test_equal_platforms_reduce_to_plain_ring(self):
        report = platform_reduction_check(2, 1, 1)
        assert report.reduced == Triple(2, 0, 0)
        assert report.verdict

    @pytest.mark.parametrize(
        "t", [t for t in coherent_triples(7) if t.k <= t.l and t.points <= 7]
    )
    def test_sweep_small(self, t):
        report = platform_reduction_check(t.n, t.k, t.l)
        assert report.verdict, t
