import pytest

from arclab.complexes import (
    TangleDiagram,
    cube_complex,
    invariance_suite,
    trefoil_diagram,
    trefoil_stabilized,
    unknot_diagram,
    unknot_kinked,
)
from arclab.diagrams import Triple
from arclab.exact_algebra import AbelianGroupSummary

Z = Triple(0, 0, 0)


class TestDiagram:
    def test_crossing_counts(self):
        d = trefooil = trefoil_diagram("pos")
        assert d.crossing_count == 3
        assert d.x_count + d.y_count == 3

    def test_kink_sign_flips_with_geometry(self):
        pos = unknot_kinked("pos")
        neg = unknot_kinked("neg")
        assert pos.y_count + neg.y_count == 1
        assert pos.x_count + neg.x_count == 1

    def test_r2_signs_balance(self):
        d = TangleDiagram(2, 2, (("pos", 1), ("neg", 1)))
        assert (d.x_count, d.y_count) == (1, 1)

    def test_sign_orientation_invariance_single_component(self):
        # reversing the only component leaves every sign unchanged
        base = unknot_kinked("pos")
        flipped = TangleDiagram(0, 0, base.slices, (-1,))
        assert base.signs() == flipped.signs()

    def test_mirror_swaps_counts(self):
        d = trefoil_diagram("pos")
        m = d.mirror()
        assert (d.x_count, d.y_count) == (m.y_count, m.x_count)

    def test_json_roundtrip(self):
        d = trefoil_stabilized()
        assert TangleDiagram.from_json(d.to_json()) == d


class TestSmallHomology:
    def test_unknot(self):
        hom = cube_complex(unknot_diagram(), Z, Z).homology()
        assert hom == {
            ((0, 0), 0, -1): AbelianGroupSummary(1, ()),
            ((0, 0), 0, 1): AbelianGroupSummary(1, ()),
        }

    @pytest.mark.parametrize("kind", ["pos", "neg"])
    def test_kinked_unknot_matches(self, kind):
        base = cube_complex(unknot_diagram(), Z, Z).homology()
        kinked = cube_complex(unknot_kinked(kind), Z, Z).homology()
        assert kinked == base

    def test_crossing_bound(self):
        import pytest as _pytest

        d = TangleDiagram(2, 2, tuple(("pos", 1) for _ in range(9)))
        with _pytest.raises(Exception):
            cube_complex(d, Triple(2, 0, 0), Triple(2, 0, 0))
        cube_complex(d, Triple(2, 0, 0), Triple(2, 0, 0), force=True)

    def test_r2_over_ring(self):
        t = Triple(2, 1, 1)
        flat = cube_complex(TangleDiagram(2, 2, ()), t, t).homology()
        r2 = cube_complex(TangleDiagram(2, 2, (("pos", 1), ("neg", 1))), t, t).homology()
        assert flat == r2

    def test_trefoil_is_not_unknot(self):
        tre = cube_complex(trefoil_diagram("pos"), Z, Z).homology()
        unk = cube_complex(unknot_diagram(), Z, Z).homology()
        assert tre != unk
        total_rank = sum(s.free_rank for s in tre.values())
        assert total_rank == 4  # two circles' worth
        assert any(s.torsion for s in tre.values())  # the classical 2-torsion

    def test_trefoil_stabilization(self):
        tre = cube_complex(trefoil_diagram("pos"), Z, Z).homology()
        stab = cube_complex(trefoil_stabilized("pos", "neg"), Z, Z).homology()
        assert tre == stab

    def test_mirror_negates_free_ranks(self):
        tre = cube_complex(trefoil_diagram("pos"), Z, Z).homology()
        mir = cube_complex(trefoil_diagram("pos").mirror(), Z, Z).homology()
        free_t = {(h, q): s.free_rank for ((_, h, q)), s in tre.items() if s.free_rank}
        free_m = {(-h, -q): s.free_rank for ((_, h, q)), s in mir.items() if s.free_rank}
        assert free_t == free_m


class TestInvarianceSuite:
    def test_catalog_passes(self):
        report = invariance_suite()
        assert report["pass"], [c for c in report["cases"] if not c["pass"]]
