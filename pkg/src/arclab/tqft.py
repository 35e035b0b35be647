"""The rank-2 Frobenius algebra and the surgery calculus on closed webs.

Circle labels are ONE (degree -1) and X (degree +1).  Merging two circles
multiplies labels (1·1=1, 1X=X1=X, X²=0), splitting comultiplies
(1 ↦ 1⊗X + X⊗1, X ↦ X⊗X), birth tensors with ONE, death applies the trace
(ε(1)=0, ε(X)=1).  Every merge/split raises the label degree #X−#ONE by one;
birth and death lower it by one.

Vectors over a web are dicts mapping label tuples (aligned with the web's
component list, sorted by minimal node) to integer coefficients.  A surgery
step cuts two edges and rewires their endpoints; the transported vector is
computed by locating which circles merged or split.
"""

from __future__ import annotations

from dataclasses import dataclass

from .webs import EdgeId, Node, Web

ONE = 0
X = 1

LabelVec = dict  # dict[tuple[int, ...], int]

_MERGE = {(ONE, ONE): ONE, (ONE, X): X, (X, ONE): X, (X, X): None}
_SPLIT = {ONE: ((ONE, X), (X, ONE)), X: ((X, X),)}


def label_degree(labels: tuple[int, ...]) -> int:
    """#X - #ONE."""
    return sum(1 if x == X else -1 for x in labels)


# ---------------------------------------------------------------------------
# Elementary operations on abstract circle-indexed vectors
# ---------------------------------------------------------------------------

def _add(vec: LabelVec, key: tuple, coeff: int) -> None:
    c = vec.get(key, 0) + coeff
    if c:
        vec[key] = c
    elif key in vec:
        del vec[key]


def apply_merge(vec: LabelVec, i: int, j: int) -> LabelVec:
    """Merge circles i and j; the result sits at position min(i, j)."""
    if i == j:
        raise ValueError("merge needs two distinct circles")
    i, j = min(i, j), max(i, j)
    out: LabelVec = {}
    for labels, coeff in vec.items():
        prod = _MERGE[(labels[i], labels[j])]
        if prod is None:
            continue
        new = labels[:i] + (prod,) + labels[i + 1 : j] + labels[j + 1 :]
        _add(out, new, coeff)
    return out


def apply_split(vec: LabelVec, i: int) -> LabelVec:
    """Split circle i in two; the new circle is inserted right after i."""
    out: LabelVec = {}
    for labels, coeff in vec.items():
        for a, b in _SPLIT[labels[i]]:
            new = labels[:i] + (a, b) + labels[i + 1 :]
            _add(out, new, coeff)
    return out


def apply_birth(vec: LabelVec, i: int) -> LabelVec:
    """Insert a fresh circle labeled ONE at position i."""
    out: LabelVec = {}
    for labels, coeff in vec.items():
        _add(out, labels[:i] + (ONE,) + labels[i:], coeff)
    return out


def apply_death(vec: LabelVec, i: int) -> LabelVec:
    """Remove circle i via the trace: ONE ↦ 0, X ↦ 1."""
    out: LabelVec = {}
    for labels, coeff in vec.items():
        if labels[i] == X:
            _add(out, labels[:i] + labels[i + 1 :], coeff)
    return out


# ---------------------------------------------------------------------------
# Surgery on webs with vector transport
# ---------------------------------------------------------------------------

@dataclass
class SurgeryState:
    web: Web
    circles: list[frozenset]

    @classmethod
    def of(cls, web: Web) -> "SurgeryState":
        return cls(web, web.components())

    def circle_of_node(self, node: Node) -> int:
        for idx, c in enumerate(self.circles):
            if node in c:
                return idx
        raise KeyError(f"node {node!r} not on any circle")


@dataclass(frozen=True)
class SurgeryStep:
    """Cut edges e1, e2 and rewire.

    pairing "straight" joins (u1,u2),(v1,v2); "crossed" joins (u1,v2),(v1,u2),
    where (u1,v1) and (u2,v2) are the endpoints of e1 and e2 as stored.  The
    contraction engine always produces the geometrically correct pairing
    explicitly, via `joins`.
    """

    e1: EdgeId
    e2: EdgeId
    joins: tuple[tuple[Node, Node], tuple[Node, Node]]
    new_ids: tuple[EdgeId, EdgeId]


def surgery(state: SurgeryState, vec: LabelVec, step: SurgeryStep) -> tuple[SurgeryState, LabelVec]:
    """One saddle; merges or splits exactly one pair of circles."""
    u1, v1 = state.web.edges[step.e1]
    u2, v2 = state.web.edges[step.e2]
    ci = state.circle_of_node(u1)
    cj = state.circle_of_node(u2)
    new_web = state.web.replace_edges(
        [step.e1, step.e2],
        {step.new_ids[0]: step.joins[0], step.new_ids[1]: step.joins[1]},
    )
    new_circles = new_web.components()
    old_by_set = {c: idx for idx, c in enumerate(state.circles)}
    index_map: dict[int, int] = {}
    fresh: list[int] = []
    for new_idx, comp in enumerate(new_circles):
        old_idx = old_by_set.get(comp)
        if old_idx is not None and old_idx != ci and old_idx != cj:
            index_map[old_idx] = new_idx
        else:
            fresh.append(new_idx)

    out: LabelVec = {}
    if ci != cj:
        if len(fresh) != 1:
            raise ValueError("merge surgery did not produce one fused circle")
        tgt = fresh[0]
        for labels, coeff in vec.items():
            prod = _MERGE[(labels[ci], labels[cj])]
            if prod is None:
                continue
            new = [0] * len(new_circles)
            for old_idx, new_idx in index_map.items():
                new[new_idx] = labels[old_idx]
            new[tgt] = prod
            _add(out, tuple(new), coeff)
    else:
        if len(fresh) != 2:
            raise ValueError("split surgery did not produce two circles")
        t1, t2 = fresh
        for labels, coeff in vec.items():
            for a, b in _SPLIT[labels[ci]]:
                new = [0] * len(new_circles)
                for old_idx, new_idx in index_map.items():
                    new[new_idx] = labels[old_idx]
                new[t1], new[t2] = a, b
                _add(out, tuple(new), coeff)
    return SurgeryState(new_web, new_circles), out


def run_surgeries(
    web: Web, steps: list[SurgeryStep], vec: LabelVec
) -> tuple[SurgeryState, LabelVec]:
    state = SurgeryState.of(web)
    for step in steps:
        state, vec = surgery(state, vec, step)
    return state, vec


# ---------------------------------------------------------------------------
# Minimal cobordism between closures: contract a middle matching pair
# ---------------------------------------------------------------------------

def tagged_surgery(
    state: SurgeryState, vec: LabelVec, step: SurgeryStep
) -> tuple[SurgeryState, LabelVec]:
    """Like `surgery` but vector keys are (tag, labels) pairs."""
    u1, _ = state.web.edges[step.e1]
    u2, _ = state.web.edges[step.e2]
    ci = state.circle_of_node(u1)
    cj = state.circle_of_node(u2)
    new_web = state.web.replace_edges(
        [step.e1, step.e2],
        {step.new_ids[0]: step.joins[0], step.new_ids[1]: step.joins[1]},
    )
    new_circles = new_web.components()
    old_by_set = {c: idx for idx, c in enumerate(state.circles)}
    index_map: dict[int, int] = {}
    fresh: list[int] = []
    for new_idx, comp in enumerate(new_circles):
        old_idx = old_by_set.get(comp)
        if old_idx is not None and old_idx != ci and old_idx != cj:
            index_map[old_idx] = new_idx
        else:
            fresh.append(new_idx)
    out: LabelVec = {}
    if ci != cj:
        if len(fresh) != 1:
            raise ValueError("merge surgery did not produce one fused circle")
        tgt = fresh[0]
        for (tag, labels), coeff in vec.items():
            prod = _MERGE[(labels[ci], labels[cj])]
            if prod is None:
                continue
            new = [0] * len(new_circles)
            for old_idx, new_idx in index_map.items():
                new[new_idx] = labels[old_idx]
            new[tgt] = prod
            _add(out, (tag, tuple(new)), coeff)
    else:
        if len(fresh) != 2:
            raise ValueError("split surgery did not produce two circles")
        t1, t2 = fresh
        for (tag, labels), coeff in vec.items():
            for a, b in _SPLIT[labels[ci]]:
                new = [0] * len(new_circles)
                for old_idx, new_idx in index_map.items():
                    new[new_idx] = labels[old_idx]
                new[t1], new[t2] = a, b
                _add(out, (tag, tuple(new)), coeff)
    return SurgeryState(new_web, new_circles), out


def minimal_cobordism_map(
    upper,
    lower,
    middle_arcs,
    upper_edge_id,
    lower_edge_id,
    upper_node,
    lower_node,
    target,
    map_upper,
    map_lower,
    inputs,
    arc_order=None,
    extra_saddles=(),
    forget_markers=(),
):
    """Transport labelings through the saddle sequence contracting a middle pair.

    upper/lower/target are ClosedDiagrams (duck-typed: .web, .circles with
    .nodes).  Each arc (p, q) of the middle matching names one saddle: cut
    `upper_edge_id(p, q)` in the upper web and `lower_edge_id(p, q)` in the
    lower web, then join `upper_node(x)`-`lower_node(x)` for x in {p, q}.
    map_upper/map_lower send a web node to the corresponding target node (or
    None to skip); they identify final circles with target circles.

    `extra_saddles` are fully explicit steps
    (upper_edge_id, lower_edge_id, ((u_node, l_node), (u_node2, l_node2)))
    run after the arc saddles (closure-arc rectification in T-compatible
    compositions).  `forget_markers` name nodes ("U"/"D", raw node) whose
    final circles are redundant enclosing circles: terms labeling them X are
    dropped and the ONE factor is forgotten (the quotient-level removal of a
    type II circle that contributes nothing).

    `inputs` is a list of (tag, labels_upper, labels_lower); returns
    {tag: {labels_target: coeff}}.  Arcs are processed sorted by leftmost
    endpoint unless arc_order gives an explicit sequence.
    """
    uweb = upper.web.relabel("U")
    lweb = lower.web.relabel("D")
    combined = Web.union(uweb, lweb)
    comps = combined.components()
    where = {}
    for idx, comp in enumerate(comps):
        where[comp] = idx
    upper_pos = []
    for c in upper.circles:
        key = frozenset(("U",) + n for n in c.nodes)
        upper_pos.append(where[key])
    lower_pos = []
    for c in lower.circles:
        key = frozenset(("D",) + n for n in c.nodes)
        lower_pos.append(where[key])

    vec: LabelVec = {}
    for tag, lu, ll in inputs:
        labels = [ONE] * len(comps)
        for i, lab in enumerate(lu):
            labels[upper_pos[i]] = lab
        for i, lab in enumerate(ll):
            labels[lower_pos[i]] = lab
        _add(vec, (tag, tuple(labels)), 1)

    arcs = sorted(middle_arcs) if arc_order is None else list(arc_order)
    state = SurgeryState.of(combined)
    counter = 0
    for p, q in arcs:
        step = SurgeryStep(
            e1=("U", upper_edge_id(p, q)),
            e2=("D", lower_edge_id(p, q)),
            joins=(
                (("U",) + upper_node(p), ("D",) + lower_node(p)),
                (("U",) + upper_node(q), ("D",) + lower_node(q)),
            ),
            new_ids=(("conn", p), ("conn", q)),
        )
        state, vec = tagged_surgery(state, vec, step)
    for u_eid, l_eid, ((un1, ln1), (un2, ln2)) in extra_saddles:
        counter += 1
        step = SurgeryStep(
            e1=("U", u_eid),
            e2=("D", l_eid),
            joins=(
                (("U",) + un1, ("D",) + ln1),
                (("U",) + un2, ("D",) + ln2),
            ),
            new_ids=(("xconn", counter, 0), ("xconn", counter, 1)),
        )
        state, vec = tagged_surgery(state, vec, step)

    forgotten: set[int] = set()
    for side, node in forget_markers:
        full = (side,) + node
        forgotten.add(state.circle_of_node(full))

    # identify the remaining final circles with target circles
    target_index: dict[Node, int] = {}
    for idx, c in enumerate(target.circles):
        for n in c.nodes:
            target_index[n] = idx
    final_to_target: dict[int, int] = {}
    for fi, comp in enumerate(state.circles):
        if fi in forgotten:
            continue
        images = set()
        for node in comp:
            side, inner = node[0], node[1:]
            mapped = map_upper(inner) if side == "U" else map_lower(inner)
            if mapped is not None:
                images.add(target_index[mapped])
        if len(images) != 1:
            raise ValueError(f"ambiguous circle correspondence: {sorted(images)}")
        final_to_target[fi] = images.pop()
    if len(final_to_target) != len(target.circles) or len(
        set(final_to_target.values())
    ) != len(target.circles):
        raise ValueError("final web does not match the target closure")

    out: dict = {}
    for (tag, labels), coeff in vec.items():
        if any(labels[fi] == X for fi in forgotten):
            continue
        tlabels = [ONE] * len(target.circles)
        for fi, lab in enumerate(labels):
            if fi in forgotten:
                continue
            tlabels[final_to_target[fi]] = lab
        bucket = out.setdefault(tag, {})
        key = tuple(tlabels)
        c = bucket.get(key, 0) + coeff
        if c:
            bucket[key] = c
        elif key in bucket:
            del bucket[key]
    return out
