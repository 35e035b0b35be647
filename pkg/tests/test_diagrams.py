import itertools

import pytest

from arclab.diagrams import (
    CLOSABLE,
    DiagramError,
    F_COMPATIBLE,
    FlatTangle,
    INCOMPATIBLE,
    Matching,
    T_COMPATIBLE,
    Triple,
    arrow_relation,
    compatibility,
    compose_flat,
    coherent_triples,
    deform_to_matching,
    enumerate_matchings,
    glue_and_close,
    partial_order_extension,
)


def brute_force_noncrossing_count(points: int) -> int:
    """Count noncrossing perfect matchings by exhaustive pairing."""
    if points % 2:
        return 0

    def count(pts):
        if not pts:
            return 1
        p = pts[0]
        total = 0
        for idx in range(1, len(pts), 2):
            total += count(pts[1:idx]) * count(pts[idx + 1 :])
        return total

    return count(list(range(points)))


class TestTriples:
    def test_coherence(self):
        with pytest.raises(DiagramError):
            Triple(3, 0, 0)
        with pytest.raises(DiagramError):
            Triple(1, 0, 3)
        t = Triple(3, 1, 2)
        assert t.points == 6 and t.shift == 3

    def test_sides(self):
        t = Triple(2, 1, 1)
        assert [t.side(p) for p in range(4)] == ["L", None, None, "R"]


class TestEnumeration:
    def test_b_1_2(self):
        assert len(enumerate_matchings(Triple(3, 1, 2))) == 3

    def test_b5_01(self):
        assert len(enumerate_matchings(Triple(5, 0, 1))) == 5

    @pytest.mark.parametrize("n", range(1, 7))
    def test_catalan(self, n):
        ms = enumerate_matchings(Triple(2 * n, 0, 0))
        assert len(ms) == brute_force_noncrossing_count(2 * n)

    def test_through_arcs_required(self):
        # B_3^{2,3} is nonempty only because platform-to-platform arcs exist
        ms = enumerate_matchings(Triple(3, 2, 3))
        assert len(ms) == 3
        assert all(m.through_arcs() for m in ms)

    def test_duplicates_and_order(self):
        ms = enumerate_matchings(Triple(4, 1, 1))
        keys = [m.sort_key() for m in ms]
        assert keys == sorted(set(keys))


class TestReflect:
    def test_involution_on_b5_01(self):
        for m in enumerate_matchings(Triple(5, 0, 1)):
            r = m.reflect()
            assert r.triple == Triple(5, 1, 0)
            assert r.reflect() == m

    @pytest.mark.parametrize("t", coherent_triples(10))
    def test_counts_match(self, t):
        ms = enumerate_matchings(t)
        rs = enumerate_matchings(Triple(t.n, t.l, t.k))
        assert len(ms) == len(rs)
        assert sorted(m.reflect().pairing for m in ms) == sorted(r.pairing for r in rs)


class TestJson:
    @pytest.mark.parametrize("t", [Triple(3, 1, 2), Triple(3, 2, 3), Triple(4, 0, 2)])
    def test_roundtrip(self, t):
        for m in enumerate_matchings(t):
            assert Matching.from_json(m.to_json()) == m

    def test_bad_balance(self):
        with pytest.raises(DiagramError):
            Matching.from_json({"n": 2, "k": 1, "l": 0, "arcs": [], "left": [], "right": []})


class TestFlatTangles:
    def test_width_validation(self):
        with pytest.raises(DiagramError):
            FlatTangle(2, 2, (("cap", 2),))
        with pytest.raises(DiagramError):
            FlatTangle(0, 0, (("cap", 1),))
        FlatTangle(2, 0, (("cap", 1),))

    def test_boundary_pairing_identity(self):
        t = FlatTangle.identity(3)
        pairing, circles = t.boundary_pairing()
        assert circles == 0
        for i in range(1, 4):
            assert pairing[("bot", i)] == ("top", i)

    def test_circle_word(self):
        t = FlatTangle(0, 0, (("cup", 1), ("cap", 1)))
        pairing, circles = t.boundary_pairing()
        assert pairing == {}
        assert circles == 1

    def test_compose_identity(self):
        t = FlatTangle(2, 4, (("cup", 2),))
        out, created = compose_flat(FlatTangle.identity(4), t)
        assert created == 0
        assert out == t

    def test_compose_cup_cap(self):
        cup = FlatTangle(0, 2, (("cup", 1),))
        cap = FlatTangle(2, 0, (("cap", 1),))
        out, created = compose_flat(cap, cup)
        assert created == 1
        assert out.bottom == out.top == 0
        assert out.slices == ()
        assert out.circles == 1

    def test_compose_cap_of_cup_on_two_strands(self):
        # (cap on 2 strands) after (cup creating those strands) = circle
        cup = FlatTangle(2, 4, (("cup", 2),))
        cap = FlatTangle(4, 2, (("cap", 2),))
        out, created = compose_flat(cap, cup)
        assert created == 1
        assert out.circles == 1
        assert (out.bottom, out.top) == (2, 2)


class TestDeform:
    def test_identity(self):
        for a in enumerate_matchings(Triple(3, 1, 2)):
            a2, c = deform_to_matching(FlatTangle.identity(3), a)
            assert a2 == a and c == 0

    def test_cap_on_arc_makes_circle(self):
        # a has free-free arc (1,2); capping it yields a circle
        a = Matching.from_json({"n": 4, "k": 0, "l": 2, "arcs": [[1, 2]], "left": [], "right": [3, 4]})
        t = FlatTangle(4, 2, (("cap", 1),))
        a2, c = deform_to_matching(t, a)
        assert c == 1
        assert a2.triple == Triple(2, 0, 2)

    def test_shape_of_figure_instance(self):
        # some a in B_6^{3,1} against some T in hatB_6^4 gives a' in B_4^{3,1}
        a = enumerate_matchings(Triple(6, 3, 1))[0]
        t = FlatTangle(6, 4, (("cap", 3),))
        a2, c = deform_to_matching(t, a)
        assert a2.triple == Triple(4, 3, 1)
        assert c >= 0


class TestArrows:
    def test_never_self(self):
        for m in enumerate_matchings(Triple(5, 0, 1)):
            assert not arrow_relation(m, m)

    def test_b5_01_arrow_count(self):
        ms = enumerate_matchings(Triple(5, 0, 1))
        arrows = [(i, j) for i, a in enumerate(ms) for j, b in enumerate(ms) if i != j and arrow_relation(a, b)]
        # every matching with two side-by-side arcs admits at least one merge
        assert arrows
        order = partial_order_extension(ms)
        pos = {m.pairing: i for i, m in enumerate(order)}
        for i, j in arrows:
            assert pos[ms[i].pairing] < pos[ms[j].pairing]

    @pytest.mark.parametrize("t", coherent_triples(8, 2))
    def test_linear_extension_respects_arrows(self, t):
        ms = enumerate_matchings(t)
        order = partial_order_extension(ms)
        pos = {m.pairing: i for i, m in enumerate(order)}
        for a, b in itertools.permutations(ms, 2):
            if arrow_relation(a, b):
                assert pos[a.pairing] < pos[b.pairing]


class TestCompatibility:
    def test_f(self):
        assert compatibility(Triple(4, 1, 1), Triple(2, 1, 1)) == F_COMPATIBLE

    def test_t(self):
        # (n,k,l)=(6,3,3), (m,s,t)=(4,2,2): k+l=n, s+t=m, t=l+(m-n)/2
        assert compatibility(Triple(6, 3, 3), Triple(4, 2, 2)) == T_COMPATIBLE

    def test_closable_figure_instance(self):
        assert compatibility(Triple(6, 1, 3), Triple(2, 0, 2)) == CLOSABLE

    def test_incompatible(self):
        assert compatibility(Triple(4, 0, 2), Triple(2, 1, 1)) == INCOMPATIBLE


class TestClosure:
    def test_single_type_ii_circle(self):
        a = enumerate_matchings(Triple(1, 0, 1))[0]
        closed = glue_and_close(a, None, a)
        assert len(closed.circles) == 1
        c = closed.circles[0]
        assert (c.left_marks, c.right_marks, c.kind) == (0, 1, "II")

    def test_gluing_in_b3(self):
        ms = enumerate_matchings(Triple(6, 0, 0))
        a = next(m for m in ms if m.pairing == (1, 0, 3, 2, 5, 4))
        b = next(m for m in ms if m.pairing == (1, 0, 5, 4, 3, 2))
        closed = glue_and_close(b, None, a)
        assert len(closed.circles) == 2
        assert all(c.kind == "I" for c in closed.circles)

    def test_diagonal_circles_are_doubled_arcs(self):
        for t in [Triple(4, 1, 1), Triple(3, 1, 2), Triple(3, 2, 3)]:
            for a in enumerate_matchings(t):
                closed = glue_and_close(a, None, a)
                assert len(closed.circles) == t.points // 2
                for arc, circ in zip(sorted(a.arcs()), sorted(closed.circles, key=lambda c: min(c.nodes))):
                    assert circ.kind in ("I", "II")

    def test_tcompatible_closure_adds_arcs(self):
        # d = 1 excess: closure arc creates a type II circle through both platforms
        b = enumerate_matchings(Triple(4, 2, 2))[0]
        c = enumerate_matchings(Triple(2, 1, 1))[0]
        t = FlatTangle(4, 2, (("cap", 1),))
        closed = glue_and_close(c, t, b)
        total_left = sum(ci.left_marks for ci in closed.circles)
        assert total_left == 2  # both left slots of the big side are passages

    def test_figure_closable_instance(self):
        b = enumerate_matchings(Triple(6, 1, 3))[0]
        c = enumerate_matchings(Triple(2, 0, 2))[0]
        t = FlatTangle(6, 2, (("cap", 1), ("cap", 1)))
        closed = glue_and_close(c, t, b)
        assert closed.circles  # well-formed

    def test_mismatch_refused(self):
        b = enumerate_matchings(Triple(4, 0, 2))[0]
        c = enumerate_matchings(Triple(2, 1, 1))[0]
        t = FlatTangle(4, 2, (("cap", 1),))
        with pytest.raises(DiagramError):
            glue_and_close(c, t, b)

    def test_reflect_swaps_marks(self):
        t = Triple(3, 1, 2)
        ms = enumerate_matchings(t)
        for a in ms:
            for b in ms:
                closed = glue_and_close(b, None, a)
                mirrored = glue_and_close(b.reflect(), None, a.reflect())
                left = sorted((c.left_marks, c.right_marks) for c in closed.circles)
                right = sorted((c.right_marks, c.left_marks) for c in mirrored.circles)
                assert left == right
