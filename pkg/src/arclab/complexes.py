"""Cube-of-resolutions complexes for oriented tangle diagrams.

A diagram is a slice word over cup/cap/crossing moves; "pos" names the
crossing geometry whose over-strand runs bottom-left to top-right, "neg" the
other one.  Crossing signs are computed from strand orientations (defaulting
to a fixed orientation per component), and only enter through the counts
x (negative) and y (positive) that set the overall shift [x]{2x-y}.

Smoothings: for "pos" geometry the 0-smoothing is the vertical pass-through
and the 1-smoothing the cap-cup turnback; "neg" is the reverse.  Vertex
bimodules carry internal shift {-|v|}, differentials are induced saddle maps
with the sign (-1)^{# of 1s before the flipped crossing}, and homology is
taken blockwise per internal degree over the integers.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .bimodules import BimoduleMap, TangleBimodule, build_bimodule, saddle_map
from .diagrams import DiagramError, FlatTangle, Node, Triple
from .exact_algebra import AbelianGroupSummary, IntMatrix, kernel_basis, subquotient_summary

CROSSING_OPS = ("pos", "neg")


@dataclass(frozen=True)
class TangleDiagram:
    bottom: int
    top: int
    slices: tuple[tuple[str, int], ...]
    orientations: tuple[int, ...] | None = None

    def __post_init__(self):
        w = self.bottom
        for op, pos in self.slices:
            if op == "cap":
                if not 1 <= pos <= w - 1:
                    raise DiagramError(f"cap position {pos} out of range")
                w -= 2
            elif op == "cup":
                if not 1 <= pos <= w + 1:
                    raise DiagramError(f"cup position {pos} out of range")
                w += 2
            elif op in CROSSING_OPS:
                if not 1 <= pos <= w - 1:
                    raise DiagramError(f"crossing position {pos} out of range")
            else:
                raise DiagramError(f"unknown slice op {op!r}")
        if w != self.top:
            raise DiagramError("slice word does not end at the declared top")
        if self.orientations is not None:
            if len(self.orientations) != len(self.components()):
                raise DiagramError("orientation list does not match components")
            if any(o not in (-1, 1) for o in self.orientations):
                raise DiagramError("orientations must be ±1")

    @property
    def crossing_count(self) -> int:
        return sum(1 for op, _ in self.slices if op in CROSSING_OPS)

    def crossing_slices(self) -> list[tuple[int, str, int]]:
        return [
            (idx, op, pos)
            for idx, (op, pos) in enumerate(self.slices)
            if op in CROSSING_OPS
        ]

    def port_edges(self) -> list[tuple[Node, Node]]:
        edges = []
        w = self.bottom
        for r, (op, pos) in enumerate(self.slices):
            if op == "cap":
                edges.append((("t", r, pos), ("t", r, pos + 1)))
                for c in range(1, pos):
                    edges.append((("t", r, c), ("t", r + 1, c)))
                for c in range(pos + 2, w + 1):
                    edges.append((("t", r, c), ("t", r + 1, c - 2)))
                w -= 2
            elif op == "cup":
                edges.append((("t", r + 1, pos), ("t", r + 1, pos + 1)))
                for c in range(1, pos):
                    edges.append((("t", r, c), ("t", r + 1, c)))
                for c in range(pos, w + 1):
                    edges.append((("t", r, c), ("t", r + 1, c + 2)))
                w += 2
            else:
                edges.append((("t", r, pos), ("t", r + 1, pos + 1)))
                edges.append((("t", r, pos + 1), ("t", r + 1, pos)))
                for c in range(1, w + 1):
                    if c not in (pos, pos + 1):
                        edges.append((("t", r, c), ("t", r + 1, c)))
        return edges

    @functools.cache
    def components(self) -> tuple[frozenset, ...]:
        adj: dict[Node, list[Node]] = {}
        for u, v in self.port_edges():
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        for i in range(1, self.bottom + 1):
            adj.setdefault(("t", 0, i), [])
        for j in range(1, self.top + 1):
            adj.setdefault(("t", len(self.slices), j), [])
        seen: set[Node] = set()
        comps = []
        for start in sorted(adj):
            if start in seen:
                continue
            comp = {start}
            seen.add(start)
            stack = [start]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in comp:
                        comp.add(y)
                        seen.add(y)
                        stack.append(y)
            comps.append(frozenset(comp))
        return tuple(sorted(comps, key=min))

    @functools.cache
    def _oriented_edges(self) -> frozenset:
        """Set of ordered port pairs giving the traversal direction."""
        adj: dict[Node, list[Node]] = {}
        for u, v in self.port_edges():
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        boundary = {("t", 0, i) for i in range(1, self.bottom + 1)} | {
            ("t", len(self.slices), j) for j in range(1, self.top + 1)
        }
        comps = self.components()
        flips = self.orientations or tuple(1 for _ in comps)
        oriented: set[tuple[Node, Node]] = set()
        for comp, flip in zip(comps, flips):
            ends = sorted(n for n in comp if n in boundary)
            start = ends[0] if ends else min(comp)
            nbrs = sorted(adj.get(start, ()))
            if not nbrs:
                continue
            prev, cur = start, nbrs[0]
            path = [(start, cur)]
            while cur != start and cur not in boundary:
                options = [x for x in adj[cur] if x != prev]
                if not options:
                    break
                prev, cur = cur, options[0]
                path.append((prev, cur))
            if flip == -1:
                path = [(v, u) for u, v in path]
            oriented.update(path)
        return frozenset(oriented)

    @functools.cache
    def signs(self) -> tuple[int, ...]:
        """Sign of each crossing (order of appearance in the word)."""
        oriented = self._oriented_edges()
        out = []
        for r, op, pos in self.crossing_slices():
            a_edge = (("t", r, pos), ("t", r + 1, pos + 1))
            b_edge = (("t", r, pos + 1), ("t", r + 1, pos))
            up_a = a_edge in oriented
            up_b = b_edge in oriented
            vec_a = (1, 1) if up_a else (-1, -1)
            vec_b = (-1, 1) if up_b else (1, -1)
            over, under = (vec_a, vec_b) if op == "pos" else (vec_b, vec_a)
            det = over[0] * under[1] - over[1] * under[0]
            out.append(1 if det > 0 else -1)
        return tuple(out)

    @property
    def y_count(self) -> int:
        return sum(1 for s in self.signs() if s > 0)

    @property
    def x_count(self) -> int:
        return sum(1 for s in self.signs() if s < 0)

    def smoothed(self, v: tuple[int, ...]) -> tuple[FlatTangle, list[tuple[int, int]]]:
        """Vertex tangle plus (word index, position) of each crossing site."""
        word: list[tuple[str, int]] = []
        sites: list[tuple[int, int]] = []
        ci = 0
        for op, pos in self.slices:
            if op in CROSSING_OPS:
                bit = v[ci]
                horizontal = bit == (1 if op == "pos" else 0)
                sites.append((len(word), pos))
                if horizontal:
                    word.append(("cap", pos))
                    word.append(("cup", pos))
                ci += 1
            else:
                word.append((op, pos))
        return FlatTangle(self.bottom, self.top, tuple(word)), sites

    def mirror(self) -> "TangleDiagram":
        swapped = tuple(
            (("neg" if op == "pos" else "pos") if op in CROSSING_OPS else op, pos)
            for op, pos in self.slices
        )
        return TangleDiagram(self.bottom, self.top, swapped, self.orientations)

    def to_json(self) -> dict:
        out = {
            "bottom": self.bottom,
            "top": self.top,
            "slices": [{"op": op, "pos": pos} for op, pos in self.slices],
        }
        if self.orientations is not None:
            out["orientations"] = list(self.orientations)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "TangleDiagram":
        try:
            slices = tuple((s["op"], int(s["pos"])) for s in obj.get("slices", []))
            orient = obj.get("orientations")
            return cls(
                int(obj["bottom"]),
                int(obj["top"]),
                slices,
                tuple(int(o) for o in orient) if orient is not None else None,
            )
        except (KeyError, TypeError) as e:
            raise DiagramError(f"bad tangle diagram JSON: {e}") from None


# ---------------------------------------------------------------------------
# The cube complex
# ---------------------------------------------------------------------------

class BimoduleComplex:
    """Total complex of the smoothing cube of one tangle diagram."""

    def __init__(
        self,
        diagram: TangleDiagram,
        left: Triple,
        right: Triple,
        max_crossings: int = 8,
        force: bool = False,
    ):
        c = diagram.crossing_count
        if c > max_crossings and not force:
            raise DiagramError(
                f"{c} crossings exceed the configured bound {max_crossings}"
            )
        self.diagram = diagram
        self.left = left
        self.right = right
        self.x = diagram.x_count
        self.y = diagram.y_count
        self.vertices: dict[tuple[int, ...], TangleBimodule] = {}
        self.sites: dict[tuple[int, ...], list[tuple[int, int]]] = {}
        for bits in range(1 << c):
            v = tuple(bits >> j & 1 for j in range(c))
            tangle, sites = diagram.smoothed(v)
            self.vertices[v] = build_bimodule(tangle, left, right)
            self.sites[v] = sites
        self.edge_maps: dict[tuple[tuple[int, ...], int], BimoduleMap] = {}
        for v, bimod in self.vertices.items():
            for j in range(c):
                if v[j] == 0:
                    w = v[:j] + (1,) + v[j + 1 :]
                    r, pos = self.sites[v][j]
                    self.edge_maps[(v, j)] = saddle_map(
                        bimod, self.vertices[w], r, pos
                    )
        self._verify_d_squared()

    @property
    def crossings(self) -> int:
        return self.diagram.crossing_count

    def hdeg(self, v: tuple[int, ...]) -> int:
        return sum(v) - self.x

    def qdeg(self, v: tuple[int, ...], block_degree: int) -> int:
        return block_degree - sum(v) + 2 * self.x - self.y

    @staticmethod
    def edge_sign(v: tuple[int, ...], j: int) -> int:
        return -1 if sum(v[:j]) % 2 else 1

    def block_keys(self) -> list[tuple[int, int]]:
        any_bimod = next(iter(self.vertices.values()))
        return [
            (ci, bi)
            for ci in range(len(any_bimod.top_ring))
            for bi in range(len(any_bimod.bottom_ring))
        ]

    def _chain_basis(self, key) -> dict[tuple[int, int], list]:
        """(h, q) -> ordered list of (vertex, mask)."""
        out: dict[tuple[int, int], list] = {}
        for v in sorted(self.vertices):
            blk = self.vertices[v].block(*key)
            for mask in range(blk.rank):
                h = self.hdeg(v)
                q = self.qdeg(v, blk.degree(mask))
                out.setdefault((h, q), []).append((v, mask))
        return out

    def _differential_entries(self, key):
        """(vertex, mask) -> list of ((vertex', mask'), coeff)."""
        out: dict[tuple, list] = {}
        for (v, j), bmap in self.edge_maps.items():
            sign = self.edge_sign(v, j)
            table = bmap.blocks.get(key, {})
            w = v[:j] + (1,) + v[j + 1 :]
            for mask, vec in table.items():
                lst = out.setdefault((v, mask), [])
                for mask2, coeff in vec.items():
                    lst.append(((w, mask2), sign * coeff))
        return out

    def _verify_d_squared(self):
        for key in self.block_keys():
            entries = self._differential_entries(key)
            for src, terms in entries.items():
                acc: dict[tuple, int] = {}
                for mid, c1 in terms:
                    for tgt, c2 in entries.get(mid, ()):
                        acc[tgt] = acc.get(tgt, 0) + c1 * c2
                if any(acc.values()):
                    raise DiagramError(f"d² ≠ 0 at block {key}")

    def homology(self) -> dict:
        """{(block, h, q): AbelianGroupSummary}, trivial groups omitted."""
        out: dict = {}
        for key in self.block_keys():
            basis = self._chain_basis(key)
            entries = self._differential_entries(key)
            qs = sorted({q for (_, q) in basis})
            hs = sorted({h for (h, _) in basis})
            for q in qs:
                for h in hs:
                    cur = basis.get((h, q), [])
                    if not cur:
                        continue
                    nxt = basis.get((h + 1, q), [])
                    prv = basis.get((h - 1, q), [])
                    pos_nxt = {b: i for i, b in enumerate(nxt)}
                    pos_cur = {b: i for i, b in enumerate(cur)}
                    d_cols = []
                    for b in cur:
                        col = [0] * len(nxt)
                        for tgt, coeff in entries.get(b, ()):
                            col[pos_nxt[tgt]] += coeff
                        d_cols.append(tuple(col))
                    dmat = IntMatrix.from_cols(d_cols, rows=len(nxt))
                    b_cols = []
                    for b in prv:
                        col = [0] * len(cur)
                        for tgt, coeff in entries.get(b, ()):
                            col[pos_cur[tgt]] += coeff
                        b_cols.append(tuple(col))
                    bmat = IntMatrix.from_cols(b_cols, rows=len(cur))
                    cycles = kernel_basis(dmat) if nxt else IntMatrix.identity(len(cur))
                    summary = subquotient_summary(cycles, bmat)
                    if not summary.is_trivial():
                        out[(key, h, q)] = summary
        return out


def cube_complex(
    diagram: TangleDiagram,
    left: Triple,
    right: Triple,
    max_crossings: int = 8,
    force: bool = False,
) -> BimoduleComplex:
    return BimoduleComplex(diagram, left, right, max_crossings, force)


def homology_table_json(hom: dict) -> list[dict]:
    out = []
    for (key, h, q), summary in sorted(hom.items()):
        out.append(
            {
                "block": list(key),
                "hdeg": h,
                "qdeg": q,
                "rank": summary.free_rank,
                "torsion": list(summary.torsion),
            }
        )
    return out


# ---------------------------------------------------------------------------
# Invariance catalog
# ---------------------------------------------------------------------------

def _kink(kind: str) -> TangleDiagram:
    return TangleDiagram(1, 1, (("cup", 2), (kind, 1), ("cap", 2)))


def _r2_pair(kind_first: str) -> TangleDiagram:
    other = "neg" if kind_first == "pos" else "pos"
    return TangleDiagram(2, 2, ((kind_first, 1), (other, 1)))


def _r3_side(first: str) -> TangleDiagram:
    if first == "121":
        word = (("pos", 1), ("pos", 2), ("pos", 1))
    else:
        word = (("pos", 2), ("pos", 1), ("pos", 2))
    return TangleDiagram(3, 3, word)


def trefoil_diagram(kind: str = "pos") -> TangleDiagram:
    return TangleDiagram(
        0,
        0,
        (
            ("cup", 1),
            ("cup", 3),
            (kind, 2),
            (kind, 2),
            (kind, 2),
            ("cap", 1),
            ("cap", 1),
        ),
    )


def trefoil_stabilized(kind: str = "pos", kink: str = "pos") -> TangleDiagram:
    return TangleDiagram(
        0,
        0,
        (
            ("cup", 1),
            ("cup", 3),
            (kind, 2),
            (kind, 2),
            (kind, 2),
            ("cup", 2),
            (kink, 1),
            ("cap", 2),
            ("cap", 1),
            ("cap", 1),
        ),
    )


def unknot_diagram() -> TangleDiagram:
    return TangleDiagram(0, 0, (("cup", 1), ("cap", 1)))


def unknot_kinked(kind: str = "pos") -> TangleDiagram:
    return TangleDiagram(0, 0, (("cup", 1), ("cup", 2), (kind, 1), ("cap", 2), ("cap", 1)))


def invariance_catalog() -> list[dict]:
    """Built-in diagram pairs expected to share blockwise graded homology."""
    id1 = TangleDiagram(1, 1, ())
    id2 = TangleDiagram(2, 2, ())
    out = [
        {"name": "R1-positive-kink", "left": Triple(1, 0, 1), "right": Triple(1, 0, 1),
         "a": id1, "b": _kink("pos")},
        {"name": "R1-negative-kink", "left": Triple(1, 0, 1), "right": Triple(1, 0, 1),
         "a": id1, "b": _kink("neg")},
        {"name": "R2-pos-neg", "left": Triple(2, 1, 1), "right": Triple(2, 1, 1),
         "a": id2, "b": _r2_pair("pos")},
        {"name": "R2-neg-pos", "left": Triple(2, 0, 0), "right": Triple(2, 0, 0),
         "a": id2, "b": _r2_pair("neg")},
        {"name": "R3-braid-relation", "left": Triple(3, 1, 2), "right": Triple(3, 1, 2),
         "a": _r3_side("121"), "b": _r3_side("212")},
        {"name": "R1-kink-on-unknot", "left": Triple(0, 0, 0), "right": Triple(0, 0, 0),
         "a": unknot_diagram(), "b": unknot_kinked("pos")},
        {"name": "movie-double-stabilization", "left": Triple(1, 0, 1), "right": Triple(1, 0, 1),
         "a": _kink("pos"),
         "b": TangleDiagram(1, 1, (("cup", 2), ("pos", 1), ("cap", 2),
                                     ("cup", 2), ("neg", 1), ("cap", 2)))},
        {"name": "trefoil-vs-stabilized", "left": Triple(0, 0, 0), "right": Triple(0, 0, 0),
         "a": trefoil_diagram("pos"), "b": trefoil_stabilized("pos", "neg")},
    ]
    return out


def invariance_suite(pairs=None, max_crossings: int = 8) -> dict:
    """PASS iff blockwise graded homology agrees for every pair."""
    pairs = invariance_catalog() if pairs is None else pairs
    results = []
    for case in pairs:
        ha = cube_complex(case["a"], case["left"], case["right"], max_crossings).homology()
        hb = cube_complex(case["b"], case["left"], case["right"], max_crossings).homology()
        ok = ha == hb
        entry = {"name": case["name"], "pass": ok}
        if not ok:
            only_a = sorted(set(ha) - set(hb))
            only_b = sorted(set(hb) - set(ha))
            entry["mismatch"] = {
                "only_first": [str(x) for x in only_a],
                "only_second": [str(x) for x in only_b],
            }
        results.append(entry)
    return {"pass": all(r["pass"] for r in results), "cases": results}
