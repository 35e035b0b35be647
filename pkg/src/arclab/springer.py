"""Ring centers as integer equalizers, the two-row Springer-variety
cohomology presentation, and the arc-graph cell count, cross-checked.

The center of an arc ring is the kernel of the linear system
x_a · 1_ab = 1_ab · x_b over all pairs of matchings, computed degree by
degree (the connecting elements 1_ab are homogeneous).  The candidate
generators place an X, with alternating sign, on the circle through one
free point of every diagonal block, which dies on platform-bound circles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .diagrams import DiagramError, Matching, Triple, matchings_cached
from .exact_algebra import (
    IntMatrix,
    Laurent,
    kernel_basis,
    solve,
)
from .rings import ArcRing, Element, build_ring


# ---------------------------------------------------------------------------
# The center as an equalizer
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CenterBasis:
    ring: ArcRing
    elements: tuple
    degrees: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.elements)

    def graded_rank(self) -> Laurent:
        out = Laurent.zero()
        for d in self.degrees:
            out = out + Laurent.q(d)
        return out

    def degree_slice(self, d: int) -> list:
        return [e for e, dd in zip(self.elements, self.degrees) if dd == d]


def _diag_coordinates(ring: ArcRing):
    coords = []
    for ai in range(len(ring)):
        blk = ring.block(ai, ai)
        coords.extend((ai, mask) for mask in range(blk.rank))
    return coords


def center(ring: ArcRing) -> CenterBasis:
    """Saturated graded basis of the center, canonical per degree."""
    coords = _diag_coordinates(ring)
    pos = {c: i for i, c in enumerate(coords)}
    degrees = sorted({ring.block(ai, ai).degree(mask) for ai, mask in coords})
    elements = []
    degs = []
    n = len(ring)
    pair_maps = []
    for ai in range(n):
        for bi in range(n):
            if ai == bi or ring.block(ai, bi).rank == 0:
                continue
            left = ring.product_block(ai, ai, bi)  # x_a · 1_ab
            right = ring.product_block(ai, bi, bi)  # 1_ab · x_b
            pair_maps.append((ai, bi, left, right))
    for d in degrees:
        cols = [c for c in coords if ring.block(c[0], c[0]).degree(c[1]) == d]
        cpos = {c: i for i, c in enumerate(cols)}
        rows: dict[tuple, dict[int, int]] = {}
        for ai, bi, left, right in pair_maps:
            for (ci, mask) in cols:
                if ci == ai:
                    for tmask, coeff in left.get((mask, 0), {}).items():
                        rows.setdefault((ai, bi, tmask), {})[cpos[(ci, mask)]] = (
                            rows.setdefault((ai, bi, tmask), {}).get(cpos[(ci, mask)], 0)
                            + coeff
                        )
                if ci == bi:
                    for tmask, coeff in right.get((0, mask), {}).items():
                        rows.setdefault((ai, bi, tmask), {})[cpos[(ci, mask)]] = (
                            rows.setdefault((ai, bi, tmask), {}).get(cpos[(ci, mask)], 0)
                            - coeff
                        )
        mat_rows = []
        for _, entries in sorted(rows.items()):
            row = [0] * len(cols)
            for j, v in entries.items():
                row[j] = v
            mat_rows.append(row)
        if not mat_rows:
            mat_rows = [[0] * len(cols)]
        kb = kernel_basis(IntMatrix.from_rows(mat_rows, len(cols)))
        for j in range(kb.cols):
            vec = kb.column(j)
            element = {}
            for (ci, mask), coeff in zip(cols, vec):
                if coeff:
                    element[(ci, ci, mask)] = coeff
            elements.append(element)
            degs.append(d)
    return CenterBasis(ring=ring, elements=tuple(elements), degrees=tuple(degs))


def is_central(ring: ArcRing, x: Element) -> bool:
    """Definitional check: x commutes with every basis element."""
    for bi in range(len(ring)):
        for ai in range(len(ring)):
            blk = ring.block(bi, ai)
            for mask in range(blk.rank):
                e = {(bi, ai, mask): 1}
                if ring.multiply(x, e) != ring.multiply(e, x):
                    return False
    return True


def center_multiplication_closed(cb: CenterBasis) -> bool:
    """Products of center elements lie back in the center lattice."""
    ring = cb.ring
    coords = _diag_coordinates(ring)
    pos = {(ai, mask): i for i, (ai, mask) in enumerate(coords)}

    def to_vec(x: Element):
        v = [0] * len(coords)
        for (bi, ai, mask), c in x.items():
            v[pos[(ai, mask)]] = c
        return v

    gens = IntMatrix.from_cols([to_vec(e) for e in cb.elements], rows=len(coords))
    for e1 in cb.elements:
        for e2 in cb.elements:
            prod = ring.multiply(e1, e2)
            if ring.multiply(e2, e1) != prod:
                return False
            if prod and solve(gens, to_vec(prod)) is None:
                return False
    return True


def degree_zero_center(ring: ArcRing) -> tuple[int, bool]:
    """(rank of the degree-0 center, whether it is spanned by the unit)."""
    cb = center(ring)
    slice0 = cb.degree_slice(0)
    if len(slice0) != 1:
        return len(slice0), False
    unit = ring.unit()
    e = slice0[0]
    spans_unit = e == unit or e == {k: -v for k, v in unit.items()}
    return 1, spans_unit


# ---------------------------------------------------------------------------
# Springer presentation (two Jordan blocks)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpringerPresentation:
    n: int
    m: int
    rank: int
    graded_rank: Laurent
    torsion_found: bool

    @property
    def expected_rank(self) -> int:
        import math

        return math.comb(self.n, (self.n - self.m) // 2)


def springer_presentation(n: int, m: int) -> SpringerPresentation:
    """Quotient of Z[X_1..X_n]/(X_i^2) by e_k(I), k+|I|=n+1, and X_I,
    |I|=(n-m)/2+1; computed degreewise over the square-free monomial basis."""
    if not (0 <= m <= n) or (n - m) % 2:
        raise DiagramError("need n >= m >= 0 with n ≡ m (mod 2)")
    monomials = list(range(1 << n))  # bitmask subsets of {1..n}
    generators: list[dict[int, int]] = []
    for size in range(n + 1):
        k = n + 1 - size
        if k < 1 or k > size:
            continue
        for I in itertools.combinations(range(n), size):
            gen: dict[int, int] = {}
            for J in itertools.combinations(I, k):
                mask = 0
                for j in J:
                    mask |= 1 << j
                gen[mask] = gen.get(mask, 0) + 1
            generators.append(gen)
    top = (n - m) // 2 + 1
    for I in itertools.combinations(range(n), top):
        mask = 0
        for j in I:
            mask |= 1 << j
        generators.append({mask: 1})

    by_degree: dict[int, list[dict[int, int]]] = {}
    for gen in generators:
        for s in monomials:
            rel: dict[int, int] = {}
            for gmask, c in gen.items():
                if gmask & s:
                    continue
                rel[gmask | s] = rel.get(gmask | s, 0) + c
            if rel:
                d = bin(next(iter(rel))).count("1")
                if all(bin(x).count("1") == d for x in rel):
                    by_degree.setdefault(d, []).append(rel)

    rank = 0
    graded = Laurent.zero()
    torsion = False
    for d in range(n + 1):
        basis = [s for s in monomials if bin(s).count("1") == d]
        bpos = {s: i for i, s in enumerate(basis)}
        rels = by_degree.get(d, [])
        cols = []
        seen = set()
        for rel in rels:
            col = [0] * len(basis)
            for s, c in rel.items():
                col[bpos[s]] = c
            tcol = tuple(col)
            if tcol not in seen:
                seen.add(tcol)
                cols.append(tcol)
        relmat = IntMatrix.from_cols(cols, rows=len(basis))
        from .exact_algebra import subquotient_summary

        summary = subquotient_summary(IntMatrix.identity(len(basis)), relmat)
        if summary.torsion:
            torsion = True
        rank += summary.free_rank
        graded = graded + Laurent.q(2 * d, summary.free_rank)
    return SpringerPresentation(
        n=n, m=m, rank=rank, graded_rank=graded, torsion_found=torsion
    )


# ---------------------------------------------------------------------------
# Arc graph cells
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ArcGraph:
    matching: Matching
    vertices: tuple[tuple[int, int], ...]  # arcs
    solid: tuple[bool, ...]
    edges: tuple[tuple[int, int], ...]
    marks: int


def _vertical_merge_valid(m: Matching, outer: tuple[int, int], inner: tuple[int, int]) -> bool:
    """Nested arcs outer ⊃ inner replaced by (o1,i1),(i2,o2); valid matching?"""
    (o1, o2), (i1, i2) = outer, inner
    if not (o1 < i1 and i2 < o2):
        return False
    new = list(m.pairing)
    new[o1], new[i1] = i1, o1
    new[i2], new[o2] = o2, i2
    try:
        Matching(m.triple, tuple(new))
        return True
    except DiagramError:
        return False


def arc_graph(a: Matching) -> ArcGraph:
    """Decorated merge graph of one matching with a single right platform."""
    side = a.triple.side
    arcs = a.arcs()
    solid = tuple(side(i) is not None or side(j) is not None for i, j in arcs)
    edges = []
    for x in range(len(arcs)):
        for y in range(len(arcs)):
            if x == y:
                continue
            (a1, b1), (a2, b2) = arcs[x], arcs[y]
            if a1 < a2 and b2 < b1 and _vertical_merge_valid(a, arcs[x], arcs[y]):
                edges.append((min(x, y), max(x, y)))
    edges = sorted(set(edges))
    # contract solid-solid edges
    parent = list(range(len(arcs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for x, y in edges:
        if solid[x] and solid[y]:
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
    # component structure of the contracted graph
    for x, y in edges:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)
    comp_solid: dict[int, bool] = {}
    for v in range(len(arcs)):
        r = find(v)
        comp_solid[r] = comp_solid.get(r, False) or solid[v]
    marks = sum(1 for r, s in comp_solid.items() if not s)
    return ArcGraph(
        matching=a,
        vertices=tuple(arcs),
        solid=solid,
        edges=tuple(edges),
        marks=marks,
    )


def cell_count(n: int, m: int) -> int:
    """Sum of 2^{marks} over B_n^{0,m}; equals C(n, (n-m)/2)."""
    if not (0 <= m <= n) or (n - m) % 2:
        raise DiagramError("need n >= m >= 0 with n ≡ m (mod 2)")
    total = 0
    for a in matchings_cached(n, 0, m):
        total += 1 << arc_graph(a).marks
    return total


# ---------------------------------------------------------------------------
# Candidate generators and the full comparison
# ---------------------------------------------------------------------------

def candidate_generators(ring: ArcRing) -> list[Element]:
    """c_i = (-1)^i × (X on the circle through free point i), per diagonal block."""
    t = ring.triple
    if t.k != 0:
        raise DiagramError("candidate generators are set up for k = 0 rings")
    out = []
    for i in range(1, t.n + 1):
        sign = -1 if i % 2 else 1
        element: Element = {}
        for ai in range(len(ring)):
            blk = ring.block(ai, ai)
            circle = blk.diagram.circle_index_of_node(("b", i - 1, 0))
            if circle in blk.type1:
                bit = blk.type1.index(circle)
                element[(ai, ai, 1 << bit)] = sign
        out.append(element)
    return out


def _element_to_diag_vec(ring: ArcRing, coords, x: Element):
    pos = {(ai, mask): i for i, (ai, mask) in enumerate(coords)}
    v = [0] * len(coords)
    for (bi, ai, mask), c in x.items():
        v[pos[(ai, mask)]] = c
    return v


@dataclass(frozen=True)
class CenterSpringerReport:
    n: int
    m: int
    center_rank: int
    presentation_rank: int
    cells: int
    binomial: int
    center_graded: Laurent
    presentation_graded: Laurent
    generators_central: bool
    squares_vanish: bool
    top_products_vanish: bool
    symmetric_relations_hold: bool
    monomials_span_center: bool
    failures: tuple[str, ...]

    @property
    def verdict(self) -> bool:
        return not self.failures


def match_center_to_springer(n: int, m: int) -> CenterSpringerReport:
    """Cross-verify the center of A_n^{0,m} against the Springer presentation."""
    import math

    ring = build_ring(n, 0, m)
    cb = center(ring)
    pres = springer_presentation(n, m)
    cells = cell_count(n, m)
    binom = math.comb(n, (n - m) // 2)
    failures: list[str] = []

    gens = candidate_generators(ring)
    generators_central = all(is_central(ring, g) for g in gens)
    if not generators_central:
        failures.append("a candidate generator is not central")

    def mul(x, y):
        return ring.multiply(x, y)

    squares_vanish = all(mul(g, g) == {} for g in gens)
    if not squares_vanish:
        failures.append("some c_i squared is nonzero")

    top = (n - m) // 2 + 1
    top_products_vanish = True
    for I in itertools.combinations(range(n), top):
        prod = ring.unit()
        for i in I:
            prod = mul(prod, gens[i])
        if prod != {}:
            top_products_vanish = False
            failures.append(f"product over {I} is nonzero")
            break

    symmetric_relations_hold = True
    for size in range(1, n + 1):
        k = n + 1 - size
        if k < 1 or k > size:
            continue
        for I in itertools.combinations(range(n), size):
            acc: Element = {}
            for J in itertools.combinations(I, k):
                prod = ring.unit()
                for j in J:
                    prod = mul(prod, gens[j])
                for key, c in prod.items():
                    v = acc.get(key, 0) + c
                    if v:
                        acc[key] = v
                    elif key in acc:
                        del acc[key]
            if acc:
                symmetric_relations_hold = False
                failures.append(f"e_{k}({I}) is nonzero on the candidates")
                break
        if not symmetric_relations_hold:
            break

    # square-free monomials span the center over Z
    coords = _diag_coordinates(ring)
    mono_vecs = []
    for S in range(1 << n):
        prod = ring.unit()
        for i in range(n):
            if S >> i & 1:
                prod = mul(prod, gens[i])
        mono_vecs.append(_element_to_diag_vec(ring, coords, prod))
    momat = IntMatrix.from_cols(mono_vecs, rows=len(coords))
    monomials_span_center = True
    for e in cb.elements:
        if solve(momat, _element_to_diag_vec(ring, coords, e)) is None:
            monomials_span_center = False
            failures.append("a center basis vector is outside the monomial span")
            break

    if cb.graded_rank() != pres.graded_rank:
        failures.append(
            f"graded ranks differ: center {cb.graded_rank()!r} vs presentation {pres.graded_rank!r}"
        )
    if not (cb.rank == pres.rank == cells == binom):
        failures.append(
            f"ranks differ: center {cb.rank}, presentation {pres.rank}, cells {cells}, binomial {binom}"
        )
    if pres.torsion_found:
        failures.append("presentation has torsion over Z")
    if any(d % 2 for d in cb.degrees):
        failures.append("center is not concentrated in even degrees")

    return CenterSpringerReport(
        n=n,
        m=m,
        center_rank=cb.rank,
        presentation_rank=pres.rank,
        cells=cells,
        binomial=binom,
        center_graded=cb.graded_rank(),
        presentation_graded=pres.graded_rank,
        generators_central=generators_central,
        squares_vanish=squares_vanish,
        top_products_vanish=top_products_vanish,
        symmetric_relations_hold=symmetric_relations_hold,
        monomials_span_center=monomials_span_center,
        failures=tuple(failures),
    )


# ---------------------------------------------------------------------------
# Platform reduction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlatformReductionReport:
    triple: Triple
    reduced: Triple
    graded_equal: bool
    product_spans_equal: bool
    degree_zero_rank: int

    @property
    def verdict(self) -> bool:
        return self.graded_equal and self.degree_zero_rank == 1


def _pairwise_product_span_ranks(cb: CenterBasis) -> Laurent:
    """Graded ranks of the span of pairwise products (soft ring-level probe)."""
    ring = cb.ring
    coords = _diag_coordinates(ring)
    by_degree: dict[int, list] = {}
    for i, e1 in enumerate(cb.elements):
        for e2 in cb.elements[i:]:
            prod = ring.multiply(e1, e2)
            if not prod:
                continue
            degs = {ring.block(ai, ai).degree(mask) for (_, ai, mask) in prod}
            d = degs.pop()
            by_degree.setdefault(d, []).append(
                _element_to_diag_vec(ring, coords, prod)
            )
    out = Laurent.zero()
    from .exact_algebra import smith_normal_form

    for d, vecs in sorted(by_degree.items()):
        r = smith_normal_form(IntMatrix.from_cols(vecs, rows=len(coords))).rank
        out = out + Laurent.q(d, r)
    return out


def platform_reduction_check(n: int, k: int, l: int) -> PlatformReductionReport:
    """Graded rank of Z(A_n^{k,l}) against Z(A_n^{0,l-k}); l >= k expected."""
    if l < k:
        k, l = l, k  # centers of reflected rings agree
    triple = Triple(n, k, l)
    reduced = Triple(n, 0, l - k)
    cb1 = center(build_ring(n, k, l))
    cb2 = center(build_ring(n, 0, l - k))
    rank0, _ = degree_zero_center(build_ring(n, k, l))
    return PlatformReductionReport(
        triple=triple,
        reduced=reduced,
        graded_equal=cb1.graded_rank() == cb2.graded_rank(),
        product_spans_equal=_pairwise_product_span_ranks(cb1)
        == _pairwise_product_span_ranks(cb2),
        degree_zero_rank=rank0,
    )
