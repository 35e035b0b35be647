"""Crossingless matchings with platforms, flat tangles, gluing and closure.

A matching lives on P = n+k+l points drawn on a line: the first k belong to
the left platform, the middle n are free, the last l belong to the right
platform.  It is stored as a fixed-point-free involution (`pairing`) and is
crossingless iff the induced bracket sequence is balanced.  Arcs inside one
platform are forbidden; arcs joining a free point to a platform and arcs
joining the two platforms ("through arcs") are both allowed — the latter are
what the stabilization embedding and the platform-reduction picture produce.

Closures (a reflected matching glued on top of a matching, optionally with a
flat tangle between the free points) become `Web`s: degree-2 graphs whose
components are the circles.  Platform passages are recorded per node so every
circle gets a type I/II/III classification.
"""

from __future__ import annotations

import bisect
import functools
from dataclasses import dataclass

from .webs import Node, Web


class DiagramError(ValueError):
    """Invalid diagram data or incompatible boundaries."""


# ---------------------------------------------------------------------------
# Coherent triples
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Triple:
    n: int
    k: int
    l: int

    def __post_init__(self):
        if self.n < 0 or self.k < 0 or self.l < 0:
            raise DiagramError("negative triple entries")
        if abs(self.k - self.l) > self.n or (self.n + self.k + self.l) % 2:
            raise DiagramError(f"incoherent triple {(self.n, self.k, self.l)}")

    @property
    def points(self) -> int:
        return self.n + self.k + self.l

    @property
    def shift(self) -> int:
        return (self.n + self.k + self.l) // 2

    def side(self, pos: int) -> str | None:
        """'L'/'R' for platform positions, None for free points (0-indexed)."""
        if pos < self.k:
            return "L"
        if pos >= self.k + self.n:
            return "R"
        return None

    def free_position(self, i: int) -> int:
        """Position of the i-th free point (1-based i)."""
        if not 1 <= i <= self.n:
            raise DiagramError(f"free point {i} out of range")
        return self.k + i - 1


def is_coherent(n: int, k: int, l: int) -> bool:
    return n >= 0 and k >= 0 and l >= 0 and abs(k - l) <= n and (n + k + l) % 2 == 0


def coherent_triples(max_points: int, min_points: int = 0) -> list[Triple]:
    out = []
    for total in range(min_points, max_points + 1):
        for k in range(total + 1):
            for l in range(total - k + 1):
                n = total - k - l
                if is_coherent(n, k, l):
                    out.append(Triple(n, k, l))
    return out


# ---------------------------------------------------------------------------
# Matchings
# ---------------------------------------------------------------------------

def _is_noncrossing(pairing: tuple[int, ...]) -> bool:
    stack: list[int] = []
    for i, j in enumerate(pairing):
        if j == i or not 0 <= j < len(pairing) or pairing[j] != i:
            return False
        if j > i:
            stack.append(j)
        elif stack.pop() != i:
            return False
    return not stack


@dataclass(frozen=True)
class Matching:
    triple: Triple
    pairing: tuple[int, ...]

    def __post_init__(self):
        if len(self.pairing) != self.triple.points:
            raise DiagramError("pairing length does not match the triple")
        if not _is_noncrossing(self.pairing):
            raise DiagramError("pairing is not a crossingless involution")
        for i, j in self.arcs():
            si, sj = self.triple.side(i), self.triple.side(j)
            if si is not None and si == sj:
                raise DiagramError("arc inside a single platform")

    def arcs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.pairing) if i < j]

    def partner(self, pos: int) -> int:
        return self.pairing[pos]

    def free_free_arcs(self) -> list[tuple[int, int]]:
        side = self.triple.side
        return [(i, j) for i, j in self.arcs() if side(i) is None and side(j) is None]

    def through_arcs(self) -> list[tuple[int, int]]:
        side = self.triple.side
        return [(i, j) for i, j in self.arcs() if side(i) == "L" and side(j) == "R"]

    def reflect(self) -> "Matching":
        """Mirror across a vertical axis; lands in B with platforms swapped."""
        t = self.triple
        p = t.points
        new = [0] * p
        for i, j in self.arcs():
            new[p - 1 - i] = p - 1 - j
            new[p - 1 - j] = p - 1 - i
        return Matching(Triple(t.n, t.l, t.k), tuple(new))

    def stabilize(self) -> "Matching":
        """Add one slot to each platform, joined by an outermost through arc."""
        t = self.triple
        new = [t.points + 1] + [j + 1 for j in self.pairing] + [0]
        return Matching(Triple(t.n, t.k + 1, t.l + 1), tuple(new))

    def sort_key(self) -> tuple[int, ...]:
        return self.pairing

    # JSON: free points numbered 1..n, platform lists outer→inner
    def to_json(self) -> dict:
        t = self.triple
        arcs = sorted([i - t.k + 1, j - t.k + 1] for i, j in self.free_free_arcs())
        left = [
            self.pairing[slot] - t.k + 1
            for slot in range(t.k)
            if t.side(self.pairing[slot]) is None
        ]
        right = [
            self.pairing[slot] - t.k + 1
            for slot in range(t.points - 1, t.k + t.n - 1, -1)
            if t.side(self.pairing[slot]) is None
        ]
        return {"n": t.n, "k": t.k, "l": t.l, "arcs": arcs, "left": left, "right": right}

    @classmethod
    def from_json(cls, obj: dict) -> "Matching":
        try:
            t = Triple(int(obj["n"]), int(obj["k"]), int(obj["l"]))
        except KeyError as e:
            raise DiagramError(f"missing field {e}") from None
        left = [int(x) for x in obj.get("left", [])]
        right = [int(x) for x in obj.get("right", [])]
        d = t.k - len(left)
        if d != t.l - len(right) or d < 0:
            raise DiagramError("platform assignments do not balance")
        pairing = [-1] * t.points

        def join(a: int, b: int):
            if pairing[a] != -1 or pairing[b] != -1:
                raise DiagramError("point used twice")
            pairing[a], pairing[b] = b, a

        for j in range(d):
            join(j, t.points - 1 - j)
        for slot, fp in enumerate(left):
            join(d + slot, t.free_position(fp))
        for slot, fp in enumerate(right):
            join(t.points - 1 - d - slot, t.free_position(fp))
        for a in obj.get("arcs", []):
            i, j = (int(x) for x in a)
            join(t.free_position(i), t.free_position(j))
        if any(p == -1 for p in pairing):
            raise DiagramError("incomplete matching")
        return cls(t, tuple(pairing))


def enumerate_matchings(triple: Triple) -> list[Matching]:
    """All of B_n^{k,l}, duplicate-free, in canonical (lexicographic) order."""
    side = triple.side

    def gen(points: tuple[int, ...]):
        if not points:
            yield {}
            return
        p = points[0]
        for idx in range(1, len(points), 2):
            q = points[idx]
            sp, sq = side(p), side(q)
            if sp is not None and sp == sq:
                continue
            for inner in gen(points[1:idx]):
                for outer in gen(points[idx + 1:]):
                    d = {p: q, q: p}
                    d.update(inner)
                    d.update(outer)
                    yield d

    out = [
        Matching(triple, tuple(d[i] for i in range(triple.points)))
        for d in gen(tuple(range(triple.points)))
    ]
    out.sort(key=Matching.sort_key)
    return out


@functools.lru_cache(maxsize=None)
def matchings_cached(n: int, k: int, l: int) -> tuple[Matching, ...]:
    return tuple(enumerate_matchings(Triple(n, k, l)))


# ---------------------------------------------------------------------------
# Horizontal merging: arrow relations and a deterministic total order
# ---------------------------------------------------------------------------

def _merge_horizontal(m: Matching, a1: tuple[int, int], a2: tuple[int, int]) -> Matching | None:
    """Replace side-by-side arcs (i,j),(p,q), j<p, with (i,q),(j,p)."""
    (i, j), (p, q) = sorted([a1, a2])
    if not j < p:
        return None
    new = list(m.pairing)
    new[i], new[q] = q, i
    new[j], new[p] = p, j
    try:
        return Matching(m.triple, tuple(new))
    except DiagramError:
        return None


def horizontal_merges(a: Matching) -> list[Matching]:
    out = []
    arcs = a.arcs()
    for x in range(len(arcs)):
        for y in range(x + 1, len(arcs)):
            merged = _merge_horizontal(a, arcs[x], arcs[y])
            if merged is not None:
                out.append(merged)
    return out


def arrow_relation(a: Matching, b: Matching) -> bool:
    """True iff b is obtained from a by one horizontal merging of two arcs."""
    if a.triple != b.triple:
        raise DiagramError("arrow relation needs a common triple")
    return any(m.pairing == b.pairing for m in horizontal_merges(a))


def partial_order_extension(matchings: list[Matching]) -> list[Matching]:
    """Deterministic linear extension of the arrow-generated partial order."""
    n = len(matchings)
    succ: dict[int, set[int]] = {i: set() for i in range(n)}
    indeg = [0] * n
    for i, a in enumerate(matchings):
        targets = {m.pairing for m in horizontal_merges(a)}
        for j, b in enumerate(matchings):
            if i != j and b.pairing in targets:
                succ[i].add(j)
                indeg[j] += 1
    order: list[int] = []
    ready = sorted(i for i in range(n) if indeg[i] == 0)
    while ready:
        i = ready.pop(0)
        order.append(i)
        changed = False
        for j in sorted(succ[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
                changed = True
        if changed:
            ready.sort()
    if len(order) != n:
        raise DiagramError("arrow relation is cyclic")
    return [matchings[i] for i in order]


# ---------------------------------------------------------------------------
# Flat tangles as cup/cap slice words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FlatTangle:
    """Crossingless tangle encoded as a word of ("cup"|"cap", pos) moves.

    cap@i joins adjacent points i, i+1 (1-based) of the current row; cup@i
    inserts an adjacent joined pair at position i.  `circles` counts closed
    components carried along (produced by earlier compositions).
    """

    bottom: int
    top: int
    slices: tuple[tuple[str, int], ...]
    circles: int = 0

    def __post_init__(self):
        w = self.bottom
        for op, pos in self.slices:
            if op == "cap":
                if not 1 <= pos <= w - 1:
                    raise DiagramError(f"cap position {pos} out of range (width {w})")
                w -= 2
            elif op == "cup":
                if not 1 <= pos <= w + 1:
                    raise DiagramError(f"cup position {pos} out of range (width {w})")
                w += 2
            else:
                raise DiagramError(f"unknown slice op {op!r}")
        if w != self.top:
            raise DiagramError(f"slice word ends at width {w}, declared top {self.top}")
        if self.circles < 0:
            raise DiagramError("negative circle count")

    @classmethod
    def identity(cls, n: int) -> "FlatTangle":
        return cls(n, n, ())

    @property
    def levels(self) -> int:
        return len(self.slices)

    def widths(self) -> list[int]:
        ws = [self.bottom]
        for op, _ in self.slices:
            ws.append(ws[-1] + (2 if op == "cup" else -2))
        return ws

    def ports(self) -> list[Node]:
        return [
            ("t", r, c)
            for r, w in enumerate(self.widths())
            for c in range(1, w + 1)
        ]

    def port_edges(self) -> list[tuple[Node, Node]]:
        """Edges of the port graph; ports are ("t", level, col), 1-based cols."""
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
            else:
                edges.append((("t", r + 1, pos), ("t", r + 1, pos + 1)))
                for c in range(1, pos):
                    edges.append((("t", r, c), ("t", r + 1, c)))
                for c in range(pos, w + 1):
                    edges.append((("t", r, c), ("t", r + 1, c + 2)))
                w += 2
        return edges

    def boundary_pairing(self) -> tuple[dict, int]:
        """Pairing of boundary points plus closed circles inside the word.

        Boundary points are labeled ("bot", i) and ("top", j), 1-based.  The
        returned circle count includes `self.circles`.
        """
        if self.levels == 0:
            pairing = {}
            for i in range(1, self.bottom + 1):
                pairing[("bot", i)] = ("top", i)
                pairing[("top", i)] = ("bot", i)
            return pairing, self.circles
        adj: dict[Node, list[Node]] = {}
        for u, v in self.port_edges():
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        ends = {}
        for i in range(1, self.bottom + 1):
            ends[("t", 0, i)] = ("bot", i)
        for j in range(1, self.top + 1):
            ends[("t", self.levels, j)] = ("top", j)
        pairing: dict = {}
        seen: set[Node] = set()
        for start, label in ends.items():
            if start in seen:
                continue
            seen.add(start)
            prev: Node | None = None
            cur = start
            while True:
                nxts = [x for x in adj.get(cur, ()) if x != prev] if prev is not None else list(adj.get(cur, ()))
                if not nxts:
                    break
                prev, cur = cur, nxts[0]
                seen.add(cur)
                if cur in ends:
                    break
            pairing[label] = ends[cur]
            pairing[ends[cur]] = label
        todo = set(adj) - seen
        circles = 0
        while todo:
            circles += 1
            stack = [todo.pop()]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y in todo:
                        todo.remove(y)
                        stack.append(y)
        return pairing, circles + self.circles

    def to_json(self) -> dict:
        out = {
            "bottom": self.bottom,
            "top": self.top,
            "slices": [{"op": op, "pos": pos} for op, pos in self.slices],
        }
        if self.circles:
            out["circles"] = self.circles
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "FlatTangle":
        try:
            slices = tuple((s["op"], int(s["pos"])) for s in obj.get("slices", []))
            return cls(int(obj["bottom"]), int(obj["top"]), slices, int(obj.get("circles", 0)))
        except (KeyError, TypeError) as e:
            raise DiagramError(f"bad flat tangle JSON: {e}") from None


def tangle_from_pairing(bottom: int, top: int, pairing: dict, circles: int = 0) -> FlatTangle:
    """Canonical circle-free slice word realizing a noncrossing pairing.

    Caps first (an adjacent bottom pair at a time), then cups (outermost
    top-top pairs first).  Through strands are order-preserving, so no other
    moves are needed.
    """
    bot_pairs = sorted(
        {
            tuple(sorted((i, pairing[("bot", i)][1])))
            for i in range(1, bottom + 1)
            if pairing[("bot", i)][0] == "bot"
        }
    )
    top_pairs = sorted(
        {
            tuple(sorted((j, pairing[("top", j)][1])))
            for j in range(1, top + 1)
            if pairing[("top", j)][0] == "top"
        }
    )
    slices: list[tuple[str, int]] = []
    alive = list(range(1, bottom + 1))
    remaining = set(bot_pairs)
    while remaining:
        for (a, b) in sorted(remaining):
            ia, ib = alive.index(a), alive.index(b)
            if ib == ia + 1:
                slices.append(("cap", ia + 1))
                del alive[ib]
                del alive[ia]
                remaining.remove((a, b))
                break
        else:
            raise DiagramError("pairing is not noncrossing")
    alive_top = sorted(pairing[("bot", p)][1] for p in alive)
    for (a, b) in sorted(top_pairs):
        idx = bisect.bisect_left(alive_top, a)
        slices.append(("cup", idx + 1))
        alive_top.insert(idx, a)
        alive_top.insert(idx + 1, b)
    if alive_top != list(range(1, top + 1)):
        raise DiagramError("pairing does not fill the top boundary")
    return FlatTangle(bottom, top, tuple(slices), circles)


def compose_flat(t2: FlatTangle, t1: FlatTangle) -> tuple[FlatTangle, int]:
    """t2 after t1 (t1's top glued to t2's bottom); reports circles created.

    If no closed circle is created the concatenated slice word is kept
    verbatim; otherwise a canonical circle-free word is synthesized from the
    composite boundary pairing and the circle count is carried on `circles`.
    """
    if t1.top != t2.bottom:
        raise DiagramError(
            f"cannot compose: {t1.top} top points against {t2.bottom} bottom points"
        )
    word = t1.slices + t2.slices
    carried = t1.circles + t2.circles
    glued = FlatTangle(t1.bottom, t2.top, word, 0)
    pairing, created = glued.boundary_pairing()
    if created == 0:
        return FlatTangle(t1.bottom, t2.top, word, carried), 0
    return tangle_from_pairing(t1.bottom, t2.top, pairing, carried + created), created


def deform_to_matching(t: FlatTangle, a: Matching) -> tuple[Matching, int]:
    """Contract the composite Ta to a matching with a's platforms; count circles."""
    tr = a.triple
    if t.bottom != tr.n:
        raise DiagramError("tangle bottom does not match the matching's free points")
    pairing, circles = t.boundary_pairing()
    new_triple = Triple(t.top, tr.k, tr.l)

    def cross_a(bot_i: int):
        """From bottom point i of the tangle, cross a's arc; platform or bottom."""
        q = a.partner(tr.k + bot_i - 1)
        if tr.side(q) is not None:
            return ("plat", q)
        return ("bot", q - tr.k + 1)

    def walk(start) -> tuple:
        if start[0] == "plat":
            q = a.partner(start[1])
            if tr.side(q) is not None:
                return ("plat", q)
            cur = ("bot", q - tr.k + 1)
        else:
            cur = start
        while True:
            nxt = pairing[cur]  # through the tangle
            if nxt[0] == "top":
                return nxt
            step = cross_a(nxt[1])  # through the matching
            if step[0] == "plat":
                return step
            cur = step

    def newpos(lab) -> int:
        if lab[0] == "plat":
            p = lab[1]
            return p if p < tr.k else p + (t.top - tr.n)
        return new_triple.k + lab[1] - 1  # ("top", j)

    new_pairing = [-1] * new_triple.points
    starts = (
        [("plat", p) for p in range(tr.k)]
        + [("plat", p) for p in range(tr.k + tr.n, tr.points)]
        + [("top", j) for j in range(1, t.top + 1)]
    )
    for s in starts:
        i = newpos(s)
        if new_pairing[i] != -1:
            continue
        j = newpos(walk(s))
        new_pairing[i], new_pairing[j] = j, i
    loops = _closed_loops(t, a, pairing)
    return Matching(new_triple, tuple(new_pairing)), circles + loops


def _closed_loops(t: FlatTangle, a: Matching, pairing: dict) -> int:
    """Loops alternating bottom-bottom strands of t with free arcs of a."""
    tr = a.triple
    visited: set = set()
    loops = 0
    for i in range(1, t.bottom + 1):
        start = ("bot", i)
        if start in visited:
            continue
        lab = start
        closed = False
        while True:
            if lab in visited and lab != start:
                break
            visited.add(lab)
            nxt = pairing[lab]  # through t
            if nxt[0] == "top":
                break
            visited.add(nxt)
            q = a.partner(tr.k + nxt[1] - 1)  # through a
            if tr.side(q) is not None:
                break
            lab = ("bot", q - tr.k + 1)
            if lab == start:
                closed = True
                break
        if closed:
            loops += 1
    return loops


# ---------------------------------------------------------------------------
# Compatibility of triples
# ---------------------------------------------------------------------------

F_COMPATIBLE = "F-compatible"
T_COMPATIBLE = "T-compatible"
CLOSABLE = "closable"
INCOMPATIBLE = "incompatible"


def compatibility(bottom: Triple, top: Triple) -> str:
    """Compatibility of (n,k,l) below with (m,s,t) above.

    F: equal platforms.  T: k+l=n, s+t=m, t=l+(m-n)/2.  "closable" covers the
    remaining balanced-excess cases (k-s = l-t), which still close up to a
    1-manifold and carry bimodules but are outside the composition theorems.
    """
    n, k, l = bottom.n, bottom.k, bottom.l
    m, s, t = top.n, top.k, top.l
    if k == s and l == t:
        return F_COMPATIBLE
    if k + l == n and s + t == m and 2 * t == 2 * l + (m - n):
        return T_COMPATIBLE
    if k - s == l - t:
        return CLOSABLE
    return INCOMPATIBLE


# ---------------------------------------------------------------------------
# Closures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CircleInfo:
    nodes: frozenset
    left_marks: int
    right_marks: int

    @property
    def kind(self) -> str:
        if self.left_marks >= 2 or self.right_marks >= 2:
            return "III"
        if self.left_marks or self.right_marks:
            return "II"
        return "I"


@dataclass(frozen=True)
class ClosedDiagram:
    """A closed 1-manifold with classified circles.

    `web` keeps the raw graph (surgery operates on it), `rep` maps raw node
    names to identified representatives, `platform` maps representatives
    sitting on a platform to "L"/"R".
    """

    web: Web
    rep: dict
    platform: dict
    circles: tuple[CircleInfo, ...]

    def circle_index_of_node(self, raw_node: Node) -> int:
        node = self.rep.get(raw_node, raw_node)
        for idx, c in enumerate(self.circles):
            if node in c.nodes:
                return idx
        raise KeyError(raw_node)

    @property
    def has_type_iii(self) -> bool:
        return any(c.kind == "III" for c in self.circles)

    def to_json(self) -> dict:
        return {
            "circles": [
                {
                    "left_marks": c.left_marks,
                    "right_marks": c.right_marks,
                    "type": c.kind,
                }
                for c in self.circles
            ]
        }


def glue_and_close(top: Matching, middle: FlatTangle | None, bottom: Matching) -> ClosedDiagram:
    """Close W(top)·middle·bottom into circles with platform marks.

    With no middle tangle the two boundaries are identified pointwise (the
    triples must agree).  With a tangle, free points feed the tangle, matching
    platform slots are joined side to side, and a platform-size excess
    d = k-s = l-t on one side is closed by d nested arcs joining that side's
    outermost left slots to its outermost right slots around the outside.
    """
    bt, tt = bottom.triple, top.triple
    parent: dict[Node, Node] = {}

    def find(x: Node) -> Node:
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != x:
            parent[x], x = root, parent[x]
        return root

    def union(x: Node, y: Node):
        rx, ry = find(x), find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            parent[ry] = rx

    def bnode(p: int) -> Node:
        return ("b", p, 0)

    def cnode(p: int) -> Node:
        return ("c", p, 0)

    edges: dict = {}

    if middle is None:
        if tt != bt:
            raise DiagramError("gluing matchings requires equal triples")
        for p in range(bt.points):
            union(cnode(p), bnode(p))
    else:
        if middle.bottom != bt.n or middle.top != tt.n:
            raise DiagramError("tangle endpoints do not match the matchings")
        if compatibility(bt, tt) == INCOMPATIBLE:
            raise DiagramError(
                f"platforms cannot be closed: {(bt.n, bt.k, bt.l)} against {(tt.n, tt.k, tt.l)}"
            )
        d = bt.k - tt.k
        for i in range(1, bt.n + 1):
            union(("t", 0, i), bnode(bt.k + i - 1))
        for j in range(1, tt.n + 1):
            union(("t", middle.levels, j), cnode(tt.k + j - 1))
        if d >= 0:
            for j in range(tt.k):
                union(bnode(d + j), cnode(j))
            for j in range(tt.l):
                union(bnode(bt.points - 1 - d - j), cnode(tt.points - 1 - j))
            for j in range(d):
                edges[("cl", j)] = (bnode(j), bnode(bt.points - 1 - j))
        else:
            e = -d
            for j in range(bt.k):
                union(cnode(e + j), bnode(j))
            for j in range(bt.l):
                union(cnode(tt.points - 1 - e - j), bnode(bt.points - 1 - j))
            for j in range(e):
                edges[("cl", j)] = (cnode(j), cnode(tt.points - 1 - j))
        for idx, (u, v) in enumerate(middle.port_edges()):
            edges[("mid", idx)] = (u, v)
        for idx in range(middle.circles):
            edges[("circ", idx, 0)] = (("o", idx, 0), ("o", idx, 1))
            edges[("circ", idx, 1)] = (("o", idx, 0), ("o", idx, 1))

    for i, j in bottom.arcs():
        edges[("bot", i, j)] = (bnode(i), bnode(j))
    for i, j in top.arcs():
        edges[("top", i, j)] = (cnode(i), cnode(j))

    rep: dict[Node, Node] = {}
    web_edges = {}
    for eid, (u, v) in edges.items():
        ru, rv = find(u), find(v)
        rep[u] = ru
        rep[v] = rv
        web_edges[eid] = (ru, rv)
    for p in range(bt.points):
        rep[bnode(p)] = find(bnode(p))
    for p in range(tt.points):
        rep[cnode(p)] = find(cnode(p))
    if middle is not None:
        for port in middle.ports():
            rep[port] = find(port)
        for idx in range(middle.circles):
            rep[("o", idx, 0)] = find(("o", idx, 0))
            rep[("o", idx, 1)] = find(("o", idx, 1))
    web = Web(web_edges)
    web.check_closed()

    platform: dict[Node, str] = {}
    for p in range(bt.points):
        side = bt.side(p)
        if side:
            platform[find(bnode(p))] = side
    for p in range(tt.points):
        side = tt.side(p)
        if side:
            platform[find(cnode(p))] = side

    circles = tuple(
        CircleInfo(
            comp,
            sum(1 for x in comp if platform.get(x) == "L"),
            sum(1 for x in comp if platform.get(x) == "R"),
        )
        for comp in web.components()
    )
    return ClosedDiagram(web=web, rep=rep, platform=platform, circles=circles)
