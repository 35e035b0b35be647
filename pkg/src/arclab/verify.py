"""Acceptance suites: every exactly-checkable identity the workbench asserts,
packaged as named suites with structured pass/fail reports.

Each suite returns {"name", "pass", "details", "seconds"}.  All checks are
exact; randomized samples are seeded and deterministic.
"""

from __future__ import annotations

import math
import random
import time

from .bimodules import build_bimodule, tensor_over_ring
from .complexes import cube_complex, invariance_suite, unknot_diagram
from .diagrams import (
    FlatTangle,
    Triple,
    coherent_triples,
    matchings_cached,
)
from .exact_algebra import (
    AbelianGroupSummary,
    Laurent,
    catalan_numbers,
    series_sqrt_inverse_identity,
)
from .level_two import (
    HighestWeight,
    admissible_weights,
    enumerate_tableaux,
    hook_content_dimension,
    phi,
    psi,
    sl2_invariant_dimension,
    verify_prop1,
    verify_prop2,
    verify_qrel,
    weight_dim,
    weight_ring_triple,
)
from .rings import (
    ArcRing,
    build_ring,
    frobenius_form,
    reflection_isomorphism,
    stabilization_embedding,
)
from .springer import (
    degree_zero_center,
    match_center_to_springer,
    platform_reduction_check,
)

LEVEL_TWO_CONFIGS = [(2, 1, 0), (3, 1, 0), (3, 1, 1), (4, 1, 1), (5, 2, 1)]


def _suite(name):
    def wrap(fn):
        def run(seed: int = 0, max_points: int | None = None) -> dict:
            start = time.monotonic()
            passed, details = fn(seed=seed, max_points=max_points)
            return {
                "name": name,
                "pass": passed,
                "details": details,
                "seconds": round(time.monotonic() - start, 3),
            }

        run.suite_name = name
        return run

    return wrap


@_suite("counts")
def suite_counts(seed=0, max_points=None):
    """Criterion 1: combinatorial counts against figures and the sl2 oracle."""
    bound = max_points or 12
    failures = []
    if len(matchings_cached(3, 1, 2)) != 3:
        failures.append("|B_3^{1,2}| != 3")
    if len(matchings_cached(5, 0, 1)) != 5:
        failures.append("|B_5^{0,1}| != 5")
    cats = catalan_numbers(9)
    for n in range(1, 9):
        if len(matchings_cached(2 * n, 0, 0)) != cats[n]:
            failures.append(f"|B_{2*n}^{{0,0}}| is not Catalan({n})")
    swept = 0
    for t in coherent_triples(bound):
        _, dim = sl2_invariant_dimension(t.k, t.l, t.n)
        if dim != len(matchings_cached(t.n, t.k, t.l)):
            failures.append(f"count vs oracle mismatch at {t}")
        swept += 1
    return not failures, {"failures": failures, "triples_swept": swept}


def _ring_integrity(ring: ArcRing, rng: random.Random, exhaustive: bool) -> list[str]:
    failures = []
    n = len(ring)
    # block rank law
    for bi in range(n):
        for ai in range(n):
            blk = ring.block(bi, ai)
            expect = 0 if blk.diagram.has_type_iii else 1 << len(blk.type1)
            if blk.rank != expect:
                failures.append(f"rank law fails at block {(bi, ai)}")
    # idempotents
    for ai in range(n):
        if ring.product_block(ai, ai, ai).get((0, 0)) != {0: 1}:
            failures.append(f"1_{ai} is not idempotent")
    for _ in range(min(20, n * n)):
        ai, bi = rng.randrange(n), rng.randrange(n)
        prod = ring.multiply(ring.idempotent(ai), ring.idempotent(bi))
        expect = ring.idempotent(ai) if ai == bi else {}
        if prod != expect:
            failures.append(f"idempotent orthogonality fails at {(ai, bi)}")
    # unit and degree additivity on sampled basis elements
    basis = ring.basis()
    unit = ring.unit()
    samples = basis if exhaustive else [rng.choice(basis) for _ in range(30)]
    for key in samples:
        x = {key: 1}
        if ring.multiply(unit, x) != x or ring.multiply(x, unit) != x:
            failures.append(f"unit fails at {key}")
    # associativity
    if exhaustive:
        triples = [
            (e1, e2, e3)
            for e1 in basis
            for e2 in basis
            if e1[1] == e2[0]
            for e3 in basis
            if e2[1] == e3[0]
        ]
    else:
        triples = []
        by_left: dict[int, list] = {}
        for key in basis:
            by_left.setdefault(key[0], []).append(key)
        for _ in range(120):
            e1 = rng.choice(basis)
            mids = by_left.get(e1[1])
            if not mids:
                continue
            e2 = rng.choice(mids)
            lasts = by_left.get(e2[1])
            if not lasts:
                continue
            e3 = rng.choice(lasts)
            triples.append((e1, e2, e3))
    for e1, e2, e3 in triples:
        x, y, z = {e1: 1}, {e2: 1}, {e3: 1}
        left = ring.multiply(ring.multiply(x, y), z)
        right = ring.multiply(x, ring.multiply(y, z))
        if left != right:
            failures.append(f"associativity fails at {(e1, e2, e3)}")
            break
    # degree additivity over every cached product table
    for (bi, ai, ci), table in list(ring._products.items()):
        lb, rb, ob = ring.block(bi, ai), ring.block(ai, ci), ring.block(bi, ci)
        for (mu, ml), vec in table.items():
            d = lb.degree(mu) + rb.degree(ml)
            for mask in vec:
                if ob.degree(mask) != d:
                    failures.append(f"degree additivity fails at {(bi, ai, ci)}")
    return failures


@_suite("rings")
def suite_ring_integrity(seed=0, max_points=None):
    """Criterion 2: associativity, unit, idempotents, degrees, rank law."""
    bound = max_points or 10
    rng = random.Random(seed)
    failures = []
    swept = []
    for t in coherent_triples(bound):
        ring = build_ring(t.n, t.k, t.l)
        fails = _ring_integrity(ring, rng, exhaustive=t.points <= 6)
        failures.extend(f"{t}: {f}" for f in fails)
        swept.append((t.n, t.k, t.l))
    return not failures, {"failures": failures[:10], "rings": len(swept)}


@_suite("isos")
def suite_structure_isos(seed=0, max_points=None):
    """Criterion 3: reflection and stabilization by structure constants."""
    nmax = 6
    failures = []
    reflections = 0
    for t in coherent_triples(max_points or 12):
        if t.n > nmax:
            continue
        report = reflection_isomorphism(build_ring(t.n, t.k, t.l))
        reflections += 1
        if not report.is_isomorphism:
            failures.append(f"reflection fails at {t}: {report.failures[:1]}")
    chains = 0
    for n in range(nmax + 1):
        for k in range(n + 1):
            ring = build_ring(n, k, n - k)
            report = stabilization_embedding(ring)
            chains += 1
            if not report.is_isomorphism:
                failures.append(f"stabilization fails at {(n, k, n - k)}")
    # below saturation the embedding is a non-surjective ring map
    below = stabilization_embedding(build_ring(4, 0, 0))
    if not below.is_ring_map or below.is_bijective:
        failures.append("A_4^{0,0} -> A_4^{1,1} should embed without being onto")
    return not failures, {
        "failures": failures,
        "reflections": reflections,
        "stabilization_chains": chains,
    }


@_suite("frobenius")
def suite_frobenius(seed=0, max_points=None):
    """Criterion 4: the symmetric form is unimodular on A_n^{0,l}."""
    bound = max_points or 8
    failures = []
    cases = 0
    for t in coherent_triples(bound):
        if t.k != 0:
            continue
        _, symmetric, unimodular = frobenius_form(build_ring(t.n, t.k, t.l))
        cases += 1
        if not symmetric:
            failures.append(f"form not symmetric at {t}")
        if not unimodular:
            failures.append(f"Gram determinant not ±1 at {t}")
    return not failures, {"failures": failures, "cases": cases}


def _random_word(rng: random.Random, bottom: int, top: int) -> FlatTangle | None:
    for _ in range(300):
        w = []
        width = bottom
        for _ in range(rng.randint(0, 4)):
            if width >= 2 and rng.random() < 0.5:
                w.append(("cap", rng.randint(1, width - 1)))
                width -= 2
            else:
                w.append(("cup", rng.randint(1, width + 1)))
                width += 2
        if width == top:
            return FlatTangle(bottom, top, tuple(w))
    return None


def _random_compatible_pair(rng: random.Random):
    """(T2, top, mid, T1, bottom) with both pairs strictly F- or T-compatible."""
    if rng.random() < 0.6:  # F-compatible chain
        parity = rng.choice([0, 1])
        n, p, m = (rng.choice([x for x in (1, 2, 3, 4) if x % 2 == parity]) for _ in range(3))
        if parity == 0:
            k, l = rng.choice([(0, 0), (1, 1)])
        else:
            k, l = rng.choice([(0, 1), (1, 0)])
        bottom, mid, top = Triple(n, k, l), Triple(p, k, l), Triple(m, k, l)
    else:  # T-compatible chain
        for _ in range(100):
            n = rng.choice([2, 3, 4])
            k = rng.randint(0, n)
            l = n - k
            p = rng.choice([x for x in (0, 1, 2, 3, 4) if (x - n) % 2 == 0])
            r = l + (p - n) // 2
            q = p - r
            if r < 0 or q < 0:
                continue
            m = rng.choice([x for x in (0, 1, 2, 3, 4) if (x - p) % 2 == 0])
            t_ = r + (m - p) // 2
            s_ = m - t_
            if t_ < 0 or s_ < 0:
                continue
            try:
                bottom, mid, top = Triple(n, k, l), Triple(p, q, r), Triple(m, s_, t_)
            except Exception:
                continue
            break
        else:
            return None
    if bottom.n + top.n > 10:
        return None
    t1 = _random_word(rng, bottom.n, mid.n)
    t2 = _random_word(rng, mid.n, top.n)
    if t1 is None or t2 is None:
        return None
    return t2, top, mid, t1, bottom


@_suite("tensor")
def suite_tensor(seed=0, max_points=None):
    """Criterion 5: the canonical map F(T2)⊗F(T1) → F(T2T1) is an isomorphism."""
    rng = random.Random(seed)
    failures = []
    done = 0
    attempts = 0
    while done < 50 and attempts < 2000:
        attempts += 1
        pick = _random_compatible_pair(rng)
        if pick is None:
            continue
        t2, top, mid, t1, bottom = pick
        try:
            m2 = build_bimodule(t2, top, mid)
            m1 = build_bimodule(t1, mid, bottom)
        except Exception as e:  # incompatible draw; skip
            continue
        verdict = tensor_over_ring(m2, m1)
        done += 1
        if not verdict.is_isomorphism:
            failures.append(
                f"pair #{done}: {t2.to_json()} over {mid} on {t1.to_json()}: "
                + "; ".join(verdict.failures[:2])
            )
    return (not failures) and done >= 50, {
        "failures": failures,
        "pairs_checked": done,
    }


@_suite("center")
def suite_center_springer(seed=0, max_points=None):
    """Criterion 6: center vs presentation vs cells vs binomial, n ≤ 6."""
    failures = []
    table = []
    for n in range(7):
        for m in range(n % 2, n + 1, 2):
            report = match_center_to_springer(n, m)
            table.append(
                {"n": n, "m": m, "rank": report.center_rank, "ok": report.verdict}
            )
            if not report.verdict:
                failures.append(f"(n,m)=({n},{m}): {report.failures[:2]}")
    ranks = {(e["n"], e["m"]): e["rank"] for e in table}
    if ranks.get((5, 1)) != 10:
        failures.append("the (5,1) center rank is not 10")
    return not failures, {"failures": failures, "cases": table}


@_suite("platform")
def suite_platform_reduction(seed=0, max_points=None):
    """Criterion 7: platform reduction of centers; degree-zero center is Z."""
    bound = max_points or 8
    failures = []
    cases = 0
    for t in coherent_triples(bound):
        if t.k > t.l:
            continue
        report = platform_reduction_check(t.n, t.k, t.l)
        cases += 1
        if not report.graded_equal:
            failures.append(f"platform reduction fails at {t}")
        if report.degree_zero_rank != 1:
            failures.append(f"degree-zero center rank != 1 at {t}")
    for t in coherent_triples(bound):
        if t.k > t.l:
            rank, spans = degree_zero_center(build_ring(t.n, t.k, t.l))
            if rank != 1 or not spans:
                failures.append(f"degree-zero center not Z·1 at {t}")
    return not failures, {"failures": failures, "cases": cases}


@_suite("series")
def suite_series(seed=0, max_points=None):
    """Criterion 8: the Catalan series identity for all 0 ≤ k ≤ s ≤ 8."""
    failures = []
    for s in range(9):
        for k in range(s + 1):
            if not series_sqrt_inverse_identity(s, k):
                failures.append(f"series identity fails at (s,k)=({s},{k})")
    return not failures, {"failures": failures, "pairs": 45}


@_suite("invariance")
def suite_invariance(seed=0, max_points=None):
    """Criterion 9: R-move and trefoil homology agreement, unknot pinned."""
    report = invariance_suite()
    failures = [c["name"] for c in report["cases"] if not c["pass"]]
    z = Triple(0, 0, 0)
    hom = cube_complex(unknot_diagram(), z, z).homology()
    expected = {
        ((0, 0), 0, -1): AbelianGroupSummary(1, ()),
        ((0, 0), 0, 1): AbelianGroupSummary(1, ()),
    }
    if hom != expected:
        failures.append("unknot homology is not Z{-1} ⊕ Z{+1}")
    return not failures, {
        "failures": failures,
        "cases": [c["name"] for c in report["cases"]],
    }


@_suite("level2")
def suite_level_two(seed=0, max_points=None):
    """Criterion 10: bijection, dimensions, q-relations, Props 1-2."""
    failures = []
    roundtrips = 0
    for N in range(1, 7):
        for s in range(0, 4):
            for k in range(0, 4 - s):
                if s + k > N or s + k == 0:
                    continue
                hw = HighestWeight(N, s, k)
                total = 0
                for mu in admissible_weights(hw):
                    tabs = enumerate_tableaux(hw, mu)
                    total += len(tabs)
                    seen = set()
                    for tab in tabs:
                        a = phi(hw, mu, tab)
                        if psi(hw, mu, a) != tab:
                            failures.append(f"roundtrip fails at {(N, s, k)}, mu={mu}")
                        seen.add(a.pairing)
                        roundtrips += 1
                    triple = weight_ring_triple(hw, mu)
                    count = (
                        len(matchings_cached(triple.n, triple.k, triple.l))
                        if triple
                        else 0
                    )
                    if len(tabs) != count or len(seen) != len(tabs):
                        failures.append(f"|T_mu| != |B| at {(N, s, k)}, mu={mu}")
                if total != hook_content_dimension(hw):
                    failures.append(f"total dimension mismatch at {(N, s, k)}")
    qrel = {}
    for N, s, k in LEVEL_TWO_CONFIGS:
        hw = HighestWeight(N, s, k)
        report = verify_qrel(hw)
        qrel[(N, s, k)] = report["pass"]
        if not report["pass"]:
            failures.append(f"q-relations fail at {(N, s, k)}: {report['failures'][:2]}")
        p2 = verify_prop2(hw)
        if not p2["pass"]:
            failures.append(f"Prop 2 fails at {(N, s, k)}: {p2['failures'][:2]}")
        p1 = verify_prop1(hw)
        if not p1["pass"]:
            failures.append(f"Prop 1 fails at {(N, s, k)}: {p1['failures'][:2]}")
    return not failures, {
        "failures": failures[:10],
        "roundtrips": roundtrips,
        "qrel_configs": {str(k): v for k, v in qrel.items()},
    }


ALL_SUITES = {
    fn.suite_name: fn
    for fn in [
        suite_counts,
        suite_ring_integrity,
        suite_structure_isos,
        suite_frobenius,
        suite_tensor,
        suite_center_springer,
        suite_platform_reduction,
        suite_series,
        suite_invariance,
        suite_level_two,
    ]
}


def run_suites(names=None, seed: int = 0, max_points: int | None = None, workers: int = 1):
    """Run the named suites (all by default); results in canonical order."""
    chosen = list(ALL_SUITES) if not names or names == ["all"] else list(names)
    unknown = [n for n in chosen if n not in ALL_SUITES]
    if unknown:
        raise KeyError(f"unknown suites: {unknown}")
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(lambda n: ALL_SUITES[n](seed=seed, max_points=max_points), chosen)
            )
    else:
        results = [ALL_SUITES[n](seed=seed, max_points=max_points) for n in chosen]
    return sorted(results, key=lambda r: chosen.index(r["name"]))
