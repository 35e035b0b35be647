"""Platform arc rings: block bases, surgery multiplication, idempotents,
reflection and stabilization maps, and the symmetric bilinear form.

A ring over a coherent triple (n,k,l) has one block per ordered pair (b,a) of
matchings, carried by the closure of W(b) over a.  A block dies if the
closure has a type III circle; otherwise its basis is the set of labelings
with every type II circle forced to ONE, so the rank is 2^{#type I}.  The
degree of a labeling counts #X - #ONE over all circles (forced ONEs
included) plus the shift (n+k+l)/2, which makes multiplication degree
preserving.

Products are computed in the unquotiented ring via the minimal cobordism
(one saddle per arc of the shared middle matching) and reduced afterwards by
dropping any term that labels a type II circle with X.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .diagrams import (
    ClosedDiagram,
    DiagramError,
    Matching,
    Triple,
    glue_and_close,
    matchings_cached,
)
from .exact_algebra import IntMatrix, Laurent, is_unimodular
from .tqft import ONE, X, minimal_cobordism_map


@dataclass(frozen=True)
class BlockBasis:
    """Basis bookkeeping for one (b, a) block."""

    diagram: ClosedDiagram
    shift: int

    @property
    def circles(self):
        return self.diagram.circles

    @property
    def is_zero(self) -> bool:
        return self.diagram.has_type_iii

    @functools.cached_property
    def type1(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.circles) if c.kind == "I")

    @property
    def rank(self) -> int:
        return 0 if self.is_zero else 1 << len(self.type1)

    def degree(self, mask: int) -> int:
        xs = bin(mask).count("1")
        return 2 * xs - len(self.circles) + self.shift

    def labels(self, mask: int) -> tuple[int, ...]:
        out = [ONE] * len(self.circles)
        for bit, ci in enumerate(self.type1):
            if mask >> bit & 1:
                out[ci] = X
        return tuple(out)

    def mask(self, labels: tuple[int, ...]) -> int | None:
        """Mask of a labeling, or None if it lies in the ideal (X on type II)."""
        m = 0
        for bit, ci in enumerate(self.type1):
            if labels[ci] == X:
                m |= 1 << bit
        for i, lab in enumerate(labels):
            if lab == X and i not in self.type1:
                return None
        return m

    def graded_rank(self) -> Laurent:
        if self.is_zero:
            return Laurent.zero()
        out = Laurent.zero()
        for mask in range(self.rank):
            out = out + Laurent.q(self.degree(mask))
        return out


Element = dict  # dict[(bi, ai, mask), int]


class ArcRing:
    """The arc ring over one coherent triple, with lazily cached products."""

    def __init__(self, triple: Triple):
        self.triple = triple
        self.matchings: list[Matching] = list(
            matchings_cached(triple.n, triple.k, triple.l)
        )
        self._index = {m.pairing: i for i, m in enumerate(self.matchings)}
        self._blocks: dict[tuple[int, int], BlockBasis] = {}
        self._products: dict[tuple[int, int, int], dict] = {}

    # -- bookkeeping --------------------------------------------------------

    def __len__(self) -> int:
        return len(self.matchings)

    def index(self, m: Matching) -> int:
        return self._index[m.pairing]

    def block(self, bi: int, ai: int) -> BlockBasis:
        key = (bi, ai)
        blk = self._blocks.get(key)
        if blk is None:
            diagram = glue_and_close(self.matchings[bi], None, self.matchings[ai])
            blk = BlockBasis(diagram=diagram, shift=self.triple.shift)
            self._blocks[key] = blk
        return blk

    def basis(self) -> list[tuple[int, int, int]]:
        out = []
        for bi in range(len(self)):
            for ai in range(len(self)):
                blk = self.block(bi, ai)
                out.extend((bi, ai, mask) for mask in range(blk.rank))
        return out

    def degree(self, bi: int, ai: int, mask: int) -> int:
        return self.block(bi, ai).degree(mask)

    def total_graded_rank(self) -> Laurent:
        out = Laurent.zero()
        for bi in range(len(self)):
            for ai in range(len(self)):
                out = out + self.block(bi, ai).graded_rank()
        return out

    # -- multiplication -----------------------------------------------------

    def product_block(self, bi: int, ai: int, ci: int, arc_order=None) -> dict:
        """Table {(mask_left, mask_right): {mask_out: coeff}} for one block triple."""
        key = (bi, ai, ci)
        if arc_order is None and key in self._products:
            return self._products[key]
        left = self.block(bi, ai)
        right = self.block(ai, ci)
        out_blk = self.block(bi, ci)
        table: dict = {}
        if not (left.is_zero or right.is_zero or out_blk.is_zero):
            middle = self.matchings[ai]
            upper, lower, target = left.diagram, right.diagram, out_blk.diagram
            inputs = [
                ((mu, ml), left.labels(mu), right.labels(ml))
                for mu in range(left.rank)
                for ml in range(right.rank)
            ]
            raw = minimal_cobordism_map(
                upper,
                lower,
                middle.arcs(),
                lambda p, q: ("bot", p, q),
                lambda p, q: ("top", p, q),
                lambda p: upper.rep[("b", p, 0)],
                lambda p: lower.rep[("c", p, 0)],
                target,
                lambda node: target.rep[node],
                lambda node: target.rep[node],
                inputs,
                arc_order=arc_order,
            )
            for tag, _, _ in inputs:
                bucket = {}
                for labels, coeff in raw.get(tag, {}).items():
                    mask = out_blk.mask(labels)
                    if mask is not None:
                        bucket[mask] = bucket.get(mask, 0) + coeff
                table[tag] = {m: c for m, c in bucket.items() if c}
        if arc_order is None:
            self._products[key] = table
        return table

    def product_block_unreduced(self, bi: int, ai: int, ci: int) -> dict:
        """Product before the quotient: full labelings in, full labelings out.

        Inputs and outputs are label tuples over the closure circles (type II
        and III circles may carry X); used to test ideal absorption.
        """
        left = self.block(bi, ai)
        right = self.block(ai, ci)
        out_blk = self.block(bi, ci)
        middle = self.matchings[ai]
        upper, lower, target = left.diagram, right.diagram, out_blk.diagram
        from itertools import product as iproduct

        inputs = [
            ((lu, ll), lu, ll)
            for lu in iproduct((ONE, X), repeat=len(left.circles))
            for ll in iproduct((ONE, X), repeat=len(right.circles))
        ]
        raw = minimal_cobordism_map(
            upper,
            lower,
            middle.arcs(),
            lambda p, q: ("bot", p, q),
            lambda p, q: ("top", p, q),
            lambda p: upper.rep[("b", p, 0)],
            lambda p: lower.rep[("c", p, 0)],
            target,
            lambda node: target.rep[node],
            lambda node: target.rep[node],
            inputs,
        )
        return {tag: raw.get(tag, {}) for tag, _, _ in inputs}

    def reduce_labels(self, bi: int, ci: int, vec: dict) -> dict:
        """Project an unreduced output vector to the quotient basis."""
        out_blk = self.block(bi, ci)
        out: dict[int, int] = {}
        if out_blk.is_zero:
            return {}
        for labels, coeff in vec.items():
            mask = out_blk.mask(labels)
            if mask is not None:
                out[mask] = out.get(mask, 0) + coeff
        return {m: c for m, c in out.items() if c}

    def multiply(self, x: Element, y: Element) -> Element:
        out: Element = {}
        for (bi, ai, mu), cx in x.items():
            for (aj, ci, ml), cy in y.items():
                if ai != aj:
                    continue
                table = self.product_block(bi, ai, ci)
                for mask, coeff in table.get((mu, ml), {}).items():
                    k = (bi, ci, mask)
                    v = out.get(k, 0) + cx * cy * coeff
                    if v:
                        out[k] = v
                    elif k in out:
                        del out[k]
        return out

    def idempotent(self, ai: int) -> Element:
        return {(ai, ai, 0): 1}

    def unit(self) -> Element:
        return {(ai, ai, 0): 1 for ai in range(len(self))}

    def element_degrees(self, x: Element) -> set[int]:
        return {self.degree(bi, ai, mask) for (bi, ai, mask) in x}

    def to_json(self, include_products: bool = True) -> dict:
        basis = []
        for bi, ai, mask in self.basis():
            basis.append(
                {
                    "b": bi,
                    "a": ai,
                    "mask": mask,
                    "degree": self.degree(bi, ai, mask),
                }
            )
        out = {
            "triple": {"n": self.triple.n, "k": self.triple.k, "l": self.triple.l},
            "matchings": [m.to_json() for m in self.matchings],
            "basis": basis,
        }
        if include_products:
            products = []
            for bi in range(len(self)):
                for ai in range(len(self)):
                    if self.block(bi, ai).rank == 0:
                        continue
                    for ci in range(len(self)):
                        if self.block(ai, ci).rank == 0 or self.block(bi, ci).rank == 0:
                            continue
                        table = self.product_block(bi, ai, ci)
                        for (mu, ml), vec in table.items():
                            if vec:
                                products.append(
                                    {
                                        "left": [bi, ai, mu],
                                        "right": [ai, ci, ml],
                                        "result": {str(m): c for m, c in sorted(vec.items())},
                                    }
                                )
            out["products"] = products
        return out


@functools.lru_cache(maxsize=None)
def build_ring(n: int, k: int, l: int) -> ArcRing:
    return ArcRing(Triple(n, k, l))


# ---------------------------------------------------------------------------
# Structure maps: reflection and stabilization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RingMapReport:
    is_ring_map: bool
    is_bijective: bool
    failures: tuple[str, ...]

    @property
    def is_isomorphism(self) -> bool:
        return self.is_ring_map and self.is_bijective


def _compare_tables(
    src: ArcRing,
    dst: ArcRing,
    matching_image: list[int],
    position_image,
    sample=None,
) -> RingMapReport:
    """Check that the induced basis map intertwines multiplication.

    position_image maps a source point position to a destination position;
    it induces the circle correspondence on every block.
    """
    failures: list[str] = []

    def mask_map(bi: int, ai: int):
        sblk = src.block(bi, ai)
        dblk = dst.block(matching_image[bi], matching_image[ai])
        dst_nodes = {min(c.nodes): i for i, c in enumerate(dblk.circles)}
        perm = []
        for ci in sblk.type1:
            nodes = frozenset(("b", position_image(p), 0) for (_, p, _) in sblk.circles[ci].nodes)
            dci = None
            for i, c in enumerate(dblk.circles):
                if nodes == c.nodes:
                    dci = i
                    break
            if dci is None or dci not in dblk.type1:
                return None
            perm.append(dblk.type1.index(dci))

        def f(mask: int) -> int:
            out = 0
            for bit, dbit in enumerate(perm):
                if mask >> bit & 1:
                    out |= 1 << dbit
            return out

        return f

    nmatch = len(src)
    triples = [
        (bi, ai, ci)
        for bi in range(nmatch)
        for ai in range(nmatch)
        for ci in range(nmatch)
    ]
    if sample is not None:
        triples = sample(triples)
    maps: dict[tuple[int, int], object] = {}
    for bi, ai, ci in triples:
        if src.block(bi, ai).rank == 0 or src.block(ai, ci).rank == 0:
            continue
        for pair in ((bi, ai), (ai, ci), (bi, ci)):
            if pair not in maps:
                maps[pair] = mask_map(*pair)
                sblk = src.block(*pair)
                dblk = dst.block(matching_image[pair[0]], matching_image[pair[1]])
                if sblk.rank != dblk.rank:
                    failures.append(f"rank mismatch at block {pair}")
                f = maps[pair]
                if f is None:
                    failures.append(f"no circle correspondence at block {pair}")
                else:
                    for mask in range(sblk.rank):
                        if sblk.degree(mask) != dblk.degree(f(mask)):
                            failures.append(f"degree mismatch at block {pair}")
                            break
        if failures:
            break
        f_ba, f_ac, f_bc = maps[(bi, ai)], maps[(ai, ci)], maps[(bi, ci)]
        t_src = src.product_block(bi, ai, ci)
        t_dst = dst.product_block(matching_image[bi], matching_image[ai], matching_image[ci])
        for (mu, ml), vec in t_src.items():
            mapped = t_dst.get((f_ba(mu), f_ac(ml)), {})
            expect = {f_bc(m): c for m, c in vec.items()}
            if mapped != expect:
                failures.append(f"structure constants differ at {(bi, ai, ci)}")
                break
        if failures:
            break

    bijective = len(src) == len(dst) and src.total_graded_rank() == dst.total_graded_rank()
    return RingMapReport(
        is_ring_map=not failures, is_bijective=bijective, failures=tuple(failures)
    )


def reflection_isomorphism(ring: ArcRing, sample=None) -> RingMapReport:
    """Verify A_n^{k,l} ≅ A_n^{l,k} through the vertical-axis reflection."""
    t = ring.triple
    dst = build_ring(t.n, t.l, t.k)
    image = [dst.index(m.reflect()) for m in ring.matchings]
    last = t.points - 1
    return _compare_tables(ring, dst, image, lambda p: last - p, sample=sample)


def stabilization_embedding(ring: ArcRing, sample=None) -> RingMapReport:
    """Verify A_n^{k,l} ↪ A_n^{k+1,l+1}; an isomorphism iff k+l >= n."""
    t = ring.triple
    dst = build_ring(t.n, t.k + 1, t.l + 1)
    image = [dst.index(m.stabilize()) for m in ring.matchings]
    return _compare_tables(ring, dst, image, lambda p: p + 1, sample=sample)


# ---------------------------------------------------------------------------
# Symmetric form on A_n^{0,l}
# ---------------------------------------------------------------------------

def trace_functional(ring: ArcRing, x: Element) -> int:
    """Sum over diagonal blocks of the top-degree (all-X) coefficient."""
    out = 0
    for (bi, ai, mask), coeff in x.items():
        if bi != ai:
            continue
        blk = ring.block(bi, ai)
        if mask == blk.rank - 1:
            out += coeff
    return out


def frobenius_gram_blocks(ring: ArcRing) -> dict[tuple[int, int], IntMatrix]:
    """Pairing matrices between blocks (b,a) and (a,b) under τ(xy)."""
    if ring.triple.k != 0:
        raise DiagramError("the symmetric form is set up for k = 0 rings")
    grams: dict[tuple[int, int], IntMatrix] = {}
    n = len(ring)
    for bi in range(n):
        for ai in range(n):
            left = ring.block(bi, ai)
            right = ring.block(ai, bi)
            if left.rank == 0:
                continue
            diag = ring.block(bi, bi)
            table = ring.product_block(bi, ai, bi)
            rows = []
            top = diag.rank - 1
            for mu in range(left.rank):
                row = []
                for ml in range(right.rank):
                    row.append(table.get((mu, ml), {}).get(top, 0))
                rows.append(row)
            grams[(bi, ai)] = IntMatrix.from_rows(rows, right.rank)
    return grams


def frobenius_form(ring: ArcRing) -> tuple[IntMatrix, bool, bool]:
    """Full Gram matrix of τ(xy), its symmetry, and unimodularity."""
    grams = frobenius_gram_blocks(ring)
    basis = []
    offsets = {}
    for bi in range(len(ring)):
        for ai in range(len(ring)):
            blk = ring.block(bi, ai)
            offsets[(bi, ai)] = len(basis)
            basis.extend((bi, ai, m) for m in range(blk.rank))
    size = len(basis)
    data = [[0] * size for _ in range(size)]
    for (bi, ai), g in grams.items():
        ro, co = offsets[(bi, ai)], offsets[(ai, bi)]
        for i in range(g.rows):
            for j in range(g.cols):
                data[ro + i][co + j] = g.data[i][j]
    gram = IntMatrix.from_rows(data, size)
    symmetric = gram == gram.transpose()
    unimodular = all(is_unimodular(g) for (bi, ai), g in grams.items() if bi <= ai) and all(
        g.rows == g.cols for g in grams.values()
    )
    return gram, symmetric, unimodular
