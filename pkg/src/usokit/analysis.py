"""Structural predicates on cube orientations."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

import numpy as np

from .cube import Face, OutMap, bits, full, is_orientation
from .errors import BudgetExceeded, NotAUso, PreconditionFailed

DEFAULT_PATH_BUDGET = 10**7


@dataclass(frozen=True)
class SinkReport:
    sinks: tuple[int, ...]
    face: Face


@dataclass(frozen=True)
class PseudoCycleWitness:
    """Closed walk ``V⊕{i0}, V⊕{i0,i1}, V⊕{i1}, ...``; the last vertex points back to the first."""

    base: int
    cycle: tuple[int, ...]

    @property
    def dimensions(self) -> tuple[int, ...]:
        """The 1-based dimensions ``i0, i1, ...`` visited in the bottom layer."""
        return tuple((v ^ self.base).bit_length() for v in self.cycle[0::2])


class Parity(Enum):
    ALL_EVEN = "all-even"
    ALL_ODD = "all-odd"
    MIXED = "mixed"


def is_uso(o: OutMap) -> bool:
    """Pairwise criterion: (φ(U)⊕φ(V)) ∩ (U⊕V) is nonempty for all U ≠ V."""
    size = len(o.table)
    if size == 1:
        return True
    t = np.asarray(o.table, dtype=np.int64)
    idx = np.arange(size, dtype=np.int64)
    for d in range(1, size):
        if not np.all((t ^ t[idx ^ d]) & d):
            return False
    return True


def uso_violation(o: OutMap) -> tuple[int, int] | None:
    """First pair U < V whose outmaps agree on U ⊕ V, or ``None`` for a USO."""
    t = o.table
    for u in range(len(t)):
        for v in range(u + 1, len(t)):
            if not (t[u] ^ t[v]) & (u ^ v):
                return u, v
    return None


def sinks_in_face(o: OutMap, face: Face) -> SinkReport:
    face.check_within(o.n)
    carrier = face.carrier
    t = o.table
    return SinkReport(tuple(v for v in face.vertices() if not t[v] & carrier), face)


def all_faces(n: int) -> Iterator[Face]:
    """All 3^n faces, ordered by lower vertex then upper vertex."""
    everything = full(n)
    for lower in range(1 << n):
        rest = everything & ~lower
        sub = 0
        while True:
            yield Face(lower, lower | sub)
            if sub == rest:
                break
            sub = (sub - rest) & rest


def has_unique_sinks(o: OutMap) -> bool:
    """Brute-force USO test: scan every face for exactly one sink."""
    return all(len(sinks_in_face(o, f).sinks) == 1 for f in all_faces(o.n))


def global_sink(o: OutMap) -> int:
    sinks = [v for v, x in enumerate(o.table) if x == 0]
    if len(sinks) != 1:
        raise NotAUso(f"expected one global sink, found {len(sinks)}")
    return sinks[0]


def global_source(o: OutMap) -> int:
    sources = [v for v, x in enumerate(o.table) if x == o.full]
    if len(sources) != 1:
        raise NotAUso(f"expected one global source, found {len(sources)}")
    return sources[0]


def _require_uso(o: OutMap) -> None:
    if not is_uso(o):
        raise NotAUso("input orientation is not a USO")


def is_pseudo_uso(o: OutMap) -> bool:
    if not is_orientation(o):
        raise PreconditionFailed("table is not a consistent orientation")
    whole = Face.whole(o.n)
    if len(sinks_in_face(o, whole).sinks) == 1:
        return False
    return all(len(sinks_in_face(o, f).sinks) == 1 for f in all_faces(o.n) if f != whole)


def pseudo_outdegree_parity(o: OutMap) -> Parity:
    parities = {x.bit_count() & 1 for x in o.table}
    if parities == {0}:
        return Parity.ALL_EVEN
    if parities == {1}:
        return Parity.ALL_ODD
    return Parity.MIXED


def find_pseudo_cycle(o: OutMap, v: int) -> PseudoCycleWitness:
    """Directed cycle among the vertices one and two steps away from the sink ``v``.

    From a layer-2 vertex step down along its outgoing edge, then leave the
    layer-1 vertex along a second outgoing edge (which exists because all
    outdegrees are even).
    Ties go to the smallest dimension.
    """
    if o.n < 3:
        raise PreconditionFailed("pseudo-USO cycle walk needs dimension at least 3")
    if not 0 <= v < len(o.table) or o.table[v] != 0:
        raise PreconditionFailed("v is not a global sink")
    if not is_pseudo_uso(o):
        raise PreconditionFailed("orientation is not a pseudo-USO")
    t = o.table

    def down_step(pair: int) -> int:
        # out-edge of v⊕{i,j} that leads back to layer 1
        for b in bits(t[v ^ pair] & pair):
            return pair ^ (1 << b)
        raise AssertionError("layer-2 vertex has no edge into layer 1")

    def up_step(single: int) -> int:
        for b in bits(t[v ^ single] & ~single):
            return single | (1 << b)
        raise AssertionError("layer-1 vertex has only one outgoing edge")

    start = 0b11
    walk = [start]
    seen = {start: 0}
    cur = start
    while True:
        single = down_step(cur)
        walk.append(single)
        cur = up_step(single)
        if cur in seen:
            break
        seen[cur] = len(walk)
        walk.append(cur)
    begin = seen[cur]
    loop = walk[begin:]
    # rotate so the cycle starts in layer 1
    loop = loop[1:] + loop[:1]
    witness = PseudoCycleWitness(v, tuple(v ^ s for s in loop))
    if not validate_pseudo_cycle(o, witness):
        raise AssertionError("internal error: walk produced an invalid cycle")
    return witness


def validate_pseudo_cycle(o: OutMap, w: PseudoCycleWitness) -> bool:
    cyc = w.cycle
    if len(cyc) < 4 or len(cyc) % 2:
        return False
    if len(set(cyc)) != len(cyc):
        return False
    for k, a in enumerate(cyc):
        rel = (a ^ w.base).bit_count()
        if rel != (1 if k % 2 == 0 else 2):
            return False
        b = cyc[(k + 1) % len(cyc)]
        d = a ^ b
        if d.bit_count() != 1 or not o.table[a] & d:
            return False
    return True


def holt_klee_paths(o: OutMap) -> list[list[int]]:
    """Maximum family of internally vertex-disjoint directed source-to-sink paths.

    Unit-capacity augmenting paths on the vertex-split digraph.
    """
    _require_uso(o)
    n = o.n
    source, sink = global_source(o), global_sink(o)
    if n == 0:
        return [[source]]
    size = 1 << n
    t = o.table
    # node 2v is v_in, 2v+1 is v_out
    cap: dict[tuple[int, int], int] = {}
    adj: list[list[int]] = [[] for _ in range(2 * size)]

    def add(a: int, b: int, c: int) -> None:
        if (a, b) not in cap:
            adj[a].append(b)
            adj[b].append(a)
            cap.setdefault((b, a), 0)
        cap[(a, b)] = cap.get((a, b), 0) + c

    for v in range(size):
        inner = v not in (source, sink)
        add(2 * v, 2 * v + 1, 1 if inner else n)
        for b in bits(t[v]):
            add(2 * v + 1, 2 * (v ^ (1 << b)), 1)

    s, g = 2 * source + 1, 2 * sink
    flow = 0
    while flow < n:
        parent = {s: s}
        queue = deque([s])
        while queue and g not in parent:
            a = queue.popleft()
            for b in adj[a]:
                if b not in parent and cap[(a, b)] > 0:
                    parent[b] = a
                    queue.append(b)
        if g not in parent:
            break
        b = g
        while b != s:
            a = parent[b]
            cap[(a, b)] -= 1
            cap[(b, a)] += 1
            b = a
        flow += 1

    paths = []
    for _ in range(flow):
        path = [source]
        a = s
        while a != g:
            for b in adj[a]:
                # original arcs between distinct cube vertices carry flow when the reverse residual is positive
                if b // 2 != a // 2 and b % 2 == 0 and a % 2 == 1 and cap[(b, a)] > 0:
                    cap[(b, a)] -= 1
                    path.append(b // 2)
                    a = b + 1 if b != g else b
                    break
            else:
                raise AssertionError("flow decomposition failed")
        paths.append(path)
    return paths


def check_holt_klee(o: OutMap) -> bool:
    return len(holt_klee_paths(o)) >= o.n


def locally_uniform_violation(o: OutMap) -> tuple[int, int, int] | None:
    """First ``(V, U, i)`` where the edge at U along bit i breaks local uniformity at V."""
    _require_uso(o)
    t = o.table
    everything = o.full
    for v in range(len(t)):
        higher = everything & ~v
        incoming = higher & ~t[v]
        outgoing = higher & t[v]
        for span, upward in ((incoming, False), (outgoing, True)):
            if span.bit_count() < 2:
                continue
            for u in Face(v, v | span).vertices():
                expected = (span & ~u) if upward else (span & u)
                bad = (t[u] & span) ^ expected
                if bad:
                    return v, u, (bad & -bad).bit_length() - 1
    return None


def check_locally_uniform(o: OutMap) -> bool:
    return locally_uniform_violation(o) is None


def longest_directed_path_length(o: OutMap, budget: int = DEFAULT_PATH_BUDGET) -> int:
    """Longest simple directed path, in edges, by exhaustive DFS."""
    _require_uso(o)
    t = o.table
    size = len(t)
    succ = [[v ^ (1 << b) for b in bits(t[v])] for v in range(size)]
    best = 0
    expansions = 0
    for start in range(size):
        stack = [(start, 0, iter(succ[start]))]
        on_path = {start}
        while stack:
            v, depth, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                on_path.discard(v)
                continue
            if nxt in on_path:
                continue
            expansions += 1
            if expansions > budget:
                raise BudgetExceeded(f"longest-path search exceeded {budget} expansions")
            on_path.add(nxt)
            stack.append((nxt, depth + 1, iter(succ[nxt])))
            best = max(best, depth + 1)
    return best


def all_orientations(n: int) -> Iterator[OutMap]:
    """Every n-cube orientation; edge k of the fixed edge list points up iff bit k is set."""
    edges = [(v, 1 << b) for v in range(1 << n) for b in range(n) if not v >> b & 1]
    for code in range(1 << len(edges)):
        table = [0] * (1 << n)
        for k, (v, d) in enumerate(edges):
            if code >> k & 1:
                table[v] |= d
            else:
                table[v | d] |= d
        yield OutMap(n, table)
