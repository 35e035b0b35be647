import random

import pytest

from arclab.diagrams import Triple, coherent_triples
from arclab.exact_algebra import IntMatrix, Laurent
from arclab.rings import (
    build_ring,
    frobenius_form,
    reflection_isomorphism,
    stabilization_embedding,
    trace_functional,
)


def random_element(rng, ring, terms=3):
    basis = ring.basis()
    out = {}
    for _ in range(terms):
        key = rng.choice(basis)
        out[key] = out.get(key, 0) + rng.randint(-3, 3)
    return {k: v for k, v in out.items() if v}


class TestSmallRings:
    def test_a_1_01_is_z_in_degree_zero(self):
        ring = build_ring(1, 0, 1)
        assert len(ring) == 1
        blk = ring.block(0, 0)
        assert blk.rank == 1
        assert blk.degree(0) == 0
        assert ring.product_block(0, 0, 0)[(0, 0)] == {0: 1}

    def test_h1_graded_ranks(self):
        ring = build_ring(2, 0, 0)
        assert ring.total_graded_rank() == Laurent({0: 1, 2: 1})

    def test_b12_block_structure(self):
        ring = build_ring(3, 1, 2)
        assert len(ring) == 3
        for bi in range(3):
            for ai in range(3):
                blk = ring.block(bi, ai)
                if not blk.is_zero:
                    free = len(
                        [
                            c
                            for c in blk.circles
                            if c.left_marks == 0 and c.right_marks == 0
                        ]
                    )
                    assert blk.rank == 2**free

    def test_block_rank_law(self):
        for t in [Triple(4, 1, 1), Triple(3, 2, 3), Triple(6, 0, 0)]:
            ring = build_ring(t.n, t.k, t.l)
            for bi in range(len(ring)):
                for ai in range(len(ring)):
                    blk = ring.block(bi, ai)
                    if blk.diagram.has_type_iii:
                        assert blk.rank == 0
                    else:
                        assert blk.rank == 2 ** len(blk.type1)


class TestMultiplication:
    @pytest.mark.parametrize("t", [(2, 0, 0), (3, 1, 2), (4, 1, 1), (4, 0, 0)])
    def test_unit(self, t):
        rng = random.Random(11)
        ring = build_ring(*t)
        one = ring.unit()
        for _ in range(20):
            x = random_element(rng, ring)
            assert ring.multiply(one, x) == x
            assert ring.multiply(x, one) == x

    @pytest.mark.parametrize("t", [(5, 0, 1)])
    def test_idempotent_orthogonality(self, t):
        ring = build_ring(*t)
        assert len(ring) == 5
        for ai in range(len(ring)):
            for bi in range(len(ring)):
                prod = ring.multiply(ring.idempotent(ai), ring.idempotent(bi))
                if ai == bi:
                    assert prod == ring.idempotent(ai)
                else:
                    assert prod == {}

    def test_idempotent_projects_blocks(self):
        rng = random.Random(5)
        ring = build_ring(3, 1, 2)
        for _ in range(10):
            x = random_element(rng, ring, terms=5)
            for ai in range(len(ring)):
                for bi in range(len(ring)):
                    proj = ring.multiply(
                        ring.idempotent(ai), ring.multiply(x, ring.idempotent(bi))
                    )
                    expected = {
                        k: v for k, v in x.items() if k[0] == ai and k[1] == bi
                    }
                    assert proj == expected

    @pytest.mark.parametrize("t", [(2, 0, 0), (4, 0, 0), (3, 1, 2), (2, 1, 1), (3, 2, 3)])
    def test_associativity_exhaustive_small(self, t):
        ring = build_ring(*t)
        basis = ring.basis()
        for e1 in basis:
            for e2 in basis:
                if e1[1] != e2[0]:
                    continue
                xy = ring.multiply({e1: 1}, {e2: 1})
                for e3 in basis:
                    if e2[1] != e3[0]:
                        continue
                    yz = ring.multiply({e2: 1}, {e3: 1})
                    assert ring.multiply(xy, {e3: 1}) == ring.multiply({e1: 1}, yz)

    def test_degree_additivity(self):
        ring = build_ring(4, 1, 1)
        for bi in range(len(ring)):
            for ai in range(len(ring)):
                for ci in range(len(ring)):
                    if (
                        ring.block(bi, ai).rank == 0
                        or ring.block(ai, ci).rank == 0
                        or ring.block(bi, ci).rank == 0
                    ):
                        continue
                    table = ring.product_block(bi, ai, ci)
                    for (mu, ml), vec in table.items():
                        d = ring.degree(bi, ai, mu) + ring.degree(ai, ci, ml)
                        for mask in vec:
                            assert ring.degree(bi, ci, mask) == d

    def test_x_squared_zero_in_h1(self):
        ring = build_ring(2, 0, 0)
        x = {(0, 0, 1): 1}
        assert ring.multiply(x, x) == {}


class TestStructureMaps:
    def test_reflection_b12(self):
        report = reflection_isomorphism(build_ring(3, 1, 2))
        assert report.is_isomorphism, report.failures

    def test_reflection_symmetric_case(self):
        report = reflection_isomorphism(build_ring(4, 1, 1))
        assert report.is_isomorphism, report.failures

    @pytest.mark.parametrize(
        "t", [t for t in coherent_triples(8) if t.n <= 4]
    )
    def test_reflection_sweep(self, t):
        report = reflection_isomorphism(build_ring(t.n, t.k, t.l))
        assert report.is_isomorphism, (t, report.failures)

    def test_stabilization_iso_when_saturated(self):
        report = stabilization_embedding(build_ring(1, 0, 1))
        assert report.is_isomorphism, report.failures

    def test_stabilization_not_surjective_below(self):
        report = stabilization_embedding(build_ring(2, 0, 0))
        assert report.is_ring_map
        assert not report.is_bijective

    def test_stabilization_chain_n3(self):
        r1 = stabilization_embedding(build_ring(3, 1, 2))
        assert r1.is_isomorphism, r1.failures
        r2 = stabilization_embedding(build_ring(3, 2, 3))
        assert r2.is_isomorphism, r2.failures


class TestFrobenius:
    def test_h1_gram(self):
        ring = build_ring(2, 0, 0)
        gram, symmetric, unimodular = frobenius_form(ring)
        assert gram == IntMatrix.from_rows([[0, 1], [1, 0]])
        assert symmetric and unimodular

    def test_rank_one_ring(self):
        gram, symmetric, unimodular = frobenius_form(build_ring(1, 0, 1))
        assert gram == IntMatrix.from_rows([[1]])
        assert symmetric and unimodular

    @pytest.mark.parametrize(
        "t", [t for t in coherent_triples(6) if t.k == 0]
    )
    def test_unimodular_small(self, t):
        gram, symmetric, unimodular = frobenius_form(build_ring(t.n, t.k, t.l))
        assert symmetric
        assert unimodular, t

    def test_trace_symmetry(self):
        rng = random.Random(3)
        ring = build_ring(4, 0, 2)
        for _ in range(15):
            x = random_element(rng, ring)
            y = random_element(rng, ring)
            assert trace_functional(ring, ring.multiply(x, y)) == trace_functional(
                ring, ring.multiply(y, x)
            )


class TestIdealAbsorption:
    @pytest.mark.parametrize("t", [(3, 1, 2), (2, 1, 1), (3, 0, 1), (3, 2, 3)])
    def test_ideal_times_anything_reduces_to_zero(self, t):
        from arclab.tqft import ONE, X
        from itertools import product as iproduct

        ring = build_ring(*t)
        n = len(ring)
        checked = 0
        for bi in range(n):
            for ai in range(n):
                left = ring.block(bi, ai)
                bad = [
                    i
                    for i, c in enumerate(left.circles)
                    if c.kind in ("II", "III")
                ]
                if not bad:
                    continue
                for ci in range(n):
                    right = ring.block(ai, ci)
                    table = ring.product_block_unreduced(bi, ai, ci)
                    for i in bad[:2]:
                        ideal_label = tuple(
                            X if z == i else ONE for z in range(len(left.circles))
                        )
                        for lr in iproduct((ONE, X), repeat=len(right.circles)):
                            out = table[(ideal_label, lr)]
                            assert ring.reduce_labels(bi, ci, out) == {}
                            checked += 1
        assert checked > 0

    def test_unreduced_agrees_with_reduced_on_basis(self):
        ring = build_ring(3, 1, 2)
        for bi in range(3):
            for ai in range(3):
                for ci in range(3):
                    left, right = ring.block(bi, ai), ring.block(ai, ci)
                    if not left.rank or not right.rank or not ring.block(bi, ci).rank:
                        continue
                    reduced = ring.product_block(bi, ai, ci)
                    raw = ring.product_block_unreduced(bi, ai, ci)
                    for mu in range(left.rank):
                        for ml in range(right.rank):
                            out = raw[(left.labels(mu), right.labels(ml))]
                            assert ring.reduce_labels(bi, ci, out) == reduced[(mu, ml)]
