"""Closed 1-manifolds as degree-2 graphs ("webs").

Nodes are hashable tuples with a total order (used only for determinism);
edges carry hashable ids so surgery steps can name the arcs they cut.
Parallel edges are allowed (a bigon circle is two nodes joined twice).
"""

from __future__ import annotations

from typing import Hashable

Node = tuple
EdgeId = Hashable


class Web:
    __slots__ = ("edges",)

    def __init__(self, edges: dict[EdgeId, tuple[Node, Node]]):
        self.edges = dict(edges)

    def adjacency(self) -> dict[Node, list[tuple[EdgeId, Node]]]:
        adj: dict[Node, list[tuple[EdgeId, Node]]] = {}
        for eid, (u, v) in self.edges.items():
            adj.setdefault(u, []).append((eid, v))
            adj.setdefault(v, []).append((eid, u))
        return adj

    def nodes(self) -> set[Node]:
        out = set()
        for u, v in self.edges.values():
            out.add(u)
            out.add(v)
        return out

    def components(self) -> list[frozenset]:
        """Connected components as frozensets of nodes, sorted by min node."""
        adj = self.adjacency()
        seen: set[Node] = set()
        comps = []
        for start in adj:
            if start in seen:
                continue
            stack = [start]
            comp = {start}
            seen.add(start)
            while stack:
                x = stack.pop()
                for _, y in adj[x]:
                    if y not in comp:
                        comp.add(y)
                        seen.add(y)
                        stack.append(y)
            comps.append(frozenset(comp))
        comps.sort(key=min)
        return comps

    def check_closed(self) -> None:
        deg: dict[Node, int] = {}
        for u, v in self.edges.values():
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        bad = {x: d for x, d in deg.items() if d != 2}
        if bad:
            raise ValueError(f"web is not a closed 1-manifold at {sorted(bad)[:4]}")

    def replace_edges(
        self,
        remove: list[EdgeId],
        add: dict[EdgeId, tuple[Node, Node]],
    ) -> "Web":
        edges = dict(self.edges)
        for eid in remove:
            del edges[eid]
        for eid, uv in add.items():
            if eid in edges:
                raise ValueError(f"duplicate edge id {eid!r}")
            edges[eid] = uv
        return Web(edges)

    def relabel(self, prefix: str) -> "Web":
        """Namespace all nodes and edge ids (for disjoint unions)."""
        return Web(
            {
                (prefix, eid): ((prefix,) + u, (prefix,) + v)
                for eid, (u, v) in self.edges.items()
            }
        )

    @staticmethod
    def union(a: "Web", b: "Web") -> "Web":
        edges = dict(a.edges)
        for eid, uv in b.edges.items():
            if eid in edges:
                raise ValueError(f"edge id collision {eid!r}")
            edges[eid] = uv
        return Web(edges)
