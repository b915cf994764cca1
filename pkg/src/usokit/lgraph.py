"""L-graphs of cube orientations and the property-L decision."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .analysis import all_orientations, is_uso
from .cube import OutMap, bits, dims_of
from .errors import DimensionTooLarge


@dataclass(frozen=True)
class LGraph:
    """Digraph on the dimensions outside ``base_vertex``; arcs use 1-based dimensions."""

    base_vertex: int
    nodes: int
    arcs: frozenset = field(default_factory=frozenset)

    def successors(self, i: int) -> list[int]:
        return sorted(j for a, j in self.arcs if a == i)

    def is_acyclic(self) -> bool:
        return self.shortest_cycle() is None

    def shortest_cycle(self) -> tuple[int, ...] | None:
        """Shortest directed cycle, ties broken by smallest start node; ``None`` if acyclic."""
        best = None
        for s in dims_of(self.nodes):
            parent = {s: None}
            queue = deque([s])
            found = None
            while queue and found is None:
                a = queue.popleft()
                for b in self.successors(a):
                    if b == s:
                        found = a
                        break
                    if b not in parent:
                        parent[b] = a
                        queue.append(b)
            if found is None:
                continue
            path = []
            a = found
            while a is not None:
                path.append(a)
                a = parent[a]
            cycle = tuple(reversed(path))
            if best is None or len(cycle) < len(best):
                best = cycle
        return best


@dataclass(frozen=True)
class PropertyLReport:
    holds: bool
    vertex: int | None = None
    cycle: tuple[int, ...] | None = None


def lgraph(o: OutMap, v: int) -> LGraph:
    t = o.table
    free = o.full & ~v
    arcs = set()
    for bi in bits(free):
        diff = (t[v] ^ t[v | (1 << bi)]) & free & ~(1 << bi)
        for bj in bits(diff):
            arcs.add((bi + 1, bj + 1))
    return LGraph(v, free, frozenset(arcs))


def _lgraph_acyclic(t, v: int, free: int) -> bool:
    tv = t[v]
    adj = {}
    for bi in bits(free):
        b = 1 << bi
        adj[b] = (tv ^ t[v | b]) & free & ~b
    remaining = free
    while remaining:
        for b, out in adj.items():
            if remaining & b and not out & remaining:
                remaining ^= b
                break
        else:
            return False
    return True


def cyclic_vertex_of_table(t, n: int) -> int | None:
    everything = (1 << n) - 1
    for v in range(len(t)):
        free = everything & ~v
        if free.bit_count() >= 2 and not _lgraph_acyclic(t, v, free):
            return v
    return None


def first_cyclic_vertex(o: OutMap) -> int | None:
    """Smallest vertex whose L-graph has a cycle, or ``None`` under property L."""
    return cyclic_vertex_of_table(o.table, o.n)


def has_property_l(o: OutMap) -> PropertyLReport:
    v = first_cyclic_vertex(o)
    if v is None:
        return PropertyLReport(True)
    return PropertyLReport(False, v, lgraph(o, v).shortest_cycle())


def property_l_implies_uso_check(n: int) -> bool:
    """Exhaustive check over all n-cube orientations that property L forces a USO."""
    if n >= 4:
        raise DimensionTooLarge("exhaustive check supports n <= 3")
    return all(is_uso(o) for o in all_orientations(n) if first_cyclic_vertex(o) is None)
