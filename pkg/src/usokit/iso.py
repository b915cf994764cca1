"""Automorphisms, canonical forms, USO enumeration and the isomorphism-class census.

The canonical form of a USO is the lexicographically smallest table among
its automorphic images. Vertex ∅ is compared first and 0 is the smallest
possible outmap value, so the canonical form always has its sink at ∅ and
is reached by an automorphism whose flip set is the sink. This is what
keeps the census cheap: only USOs with sink ∅ need to be enumerated, and
only the n! dimension permutations need to be tried for each.
"""
from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Callable, Iterator

from .analysis import global_sink, is_uso
from .cube import Automorphism, OutMap, apply_automorphism, mask_permuter
from .errors import DimensionMismatch, DimensionTooLarge, NotAUso
from .lgraph import cyclic_vertex_of_table

log = logging.getLogger(__name__)

MAX_AUTOMORPHISM_DIM = 8
MAX_ENUMERATION_DIM = 4


@lru_cache(maxsize=None)
def _perm_tables(n: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]], ...]:
    """``(perm, π on masks, π^-1 on masks)`` for every permutation, lexicographic."""
    out = []
    for perm in permutations(range(1, n + 1)):
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p - 1] = i + 1
        out.append((perm, tuple(mask_permuter(perm)), tuple(mask_permuter(inv))))
    return tuple(out)


def _image(t, flip: int, pm, pinv) -> list[int]:
    return [pm[t[u ^ flip]] for u in pinv]


def all_automorphisms(n: int) -> Iterator[Automorphism]:
    """All 2^n n! automorphisms: flip sets in index order, permutations lexicographic."""
    if n > MAX_AUTOMORPHISM_DIM:
        raise DimensionTooLarge(f"automorphism enumeration supports n <= {MAX_AUTOMORPHISM_DIM}")
    for flip in range(1 << n):
        for perm, _, _ in _perm_tables(n):
            yield Automorphism(flip, perm)


def _require_uso(o: OutMap) -> None:
    if not is_uso(o):
        raise NotAUso("input orientation is not a USO")


def canonical_with_automorphism(o: OutMap) -> tuple[OutMap, Automorphism]:
    _require_uso(o)
    sink = global_sink(o)
    best, best_perm = None, None
    for perm, pm, pinv in _perm_tables(o.n):
        img = _image(o.table, sink, pm, pinv)
        if best is None or img < best:
            best, best_perm = img, perm
    return OutMap(o.n, best), Automorphism(sink, best_perm)


def canonical_form(o: OutMap) -> OutMap:
    return canonical_with_automorphism(o)[0]


def are_isomorphic(o1: OutMap, o2: OutMap) -> Automorphism | None:
    """Automorphism carrying ``o1`` onto ``o2``, or ``None``."""
    if o1.n != o2.n:
        raise DimensionMismatch("orientations of different dimensions")
    _require_uso(o1)
    _require_uso(o2)
    s1, s2 = global_sink(o1), global_sink(o2)
    target = list(o2.table)
    for perm, pm, pinv in _perm_tables(o1.n):
        # h(s1) must be s2, which pins the flip set
        flip = s1 ^ pinv[s2]
        if _image(o1.table, flip, pm, pinv) == target:
            return Automorphism(flip, perm)
    return None


def exists_property_l_copy(o: OutMap) -> Automorphism | None:
    """First automorphism in enumeration order whose image has property L."""
    _require_uso(o)
    if o.n > MAX_AUTOMORPHISM_DIM:
        raise DimensionTooLarge(f"automorphism sweep supports n <= {MAX_AUTOMORPHISM_DIM}")
    t = o.table
    tables = _perm_tables(o.n)
    for flip in range(1 << o.n):
        for perm, pm, pinv in tables:
            if cyclic_vertex_of_table(_image(t, flip, pm, pinv), o.n) is None:
                return Automorphism(flip, perm)
    return None


def count_property_l_images(o: OutMap) -> int:
    """Number of automorphisms (with multiplicity) whose image has property L."""
    t = o.table
    count = 0
    for flip in range(1 << o.n):
        for _, pm, pinv in _perm_tables(o.n):
            if cyclic_vertex_of_table(_image(t, flip, pm, pinv), o.n) is None:
                count += 1
    return count


@lru_cache(maxsize=None)
def _forbidden(n: int) -> tuple[tuple[int, ...], ...]:
    """``[d][a]``: bitmask of outmap values b with (a ⊕ b) ∩ d = ∅."""
    size = 1 << n
    return tuple(
        tuple(sum(1 << b for b in range(size) if not (a ^ b) & d) for a in range(size))
        for d in range(size)
    )


def _backtrack(n: int, allowed: list[int]) -> Iterator[list[int]]:
    size = 1 << n
    forbid = _forbidden(n)
    table = [0] * size

    def rec(k: int, allowed: list[int]):
        if k == size:
            yield table
            return
        cand = allowed[k]
        while cand:
            low = cand & -cand
            cand ^= low
            a = low.bit_length() - 1
            new = allowed[:]
            for v in range(k + 1, size):
                nv = new[v] & ~forbid[k ^ v][a]
                if not nv:
                    break
                new[v] = nv
            else:
                table[k] = a
                yield from rec(k + 1, new)

    yield from rec(0, allowed)


def enumerate_usos(n: int, sink: int | None = None, first_value: int | None = None) -> Iterator[OutMap]:
    """Every n-cube USO exactly once, vertex-major and value-minor.

    ``sink`` restricts to USOs with that global sink; ``first_value`` fixes
    the outmap of vertex {1} (used to shard the search).
    """
    if n > MAX_ENUMERATION_DIM:
        raise DimensionTooLarge(f"USO enumeration supports n <= {MAX_ENUMERATION_DIM}")
    size = 1 << n
    allowed = [(1 << size) - 1] * size
    if sink is not None:
        allowed[sink] = 1
    if first_value is not None and size > 1:
        allowed[1] &= 1 << first_value
    for table in _backtrack(n, allowed):
        yield OutMap(n, table)


def _is_canonical_sink_zero(t, tables) -> bool:
    for _, pm, pinv in tables[1:]:
        for w, u in enumerate(pinv):
            x = pm[t[u]]
            y = t[w]
            if x != y:
                if x < y:
                    return False
                break
    return True


@dataclass(frozen=True)
class IsoClassRecord:
    canonical: OutMap
    class_size: int
    has_property_l_member: bool
    witness_automorphism: Automorphism | None

    def to_dict(self) -> dict:
        return {
            "n": self.canonical.n,
            "canonical": list(self.canonical.table),
            "class_size": self.class_size,
            "has_property_l_member": self.has_property_l_member,
            "witness_automorphism": None if self.witness_automorphism is None else self.witness_automorphism.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IsoClassRecord":
        w = d.get("witness_automorphism")
        return cls(
            OutMap(d["n"], d["canonical"]),
            d["class_size"],
            d["has_property_l_member"],
            None if w is None else Automorphism.from_dict(w),
        )


def class_record(canonical: OutMap) -> IsoClassRecord:
    n = canonical.n
    images = {tuple(_image(canonical.table, 0, pm, pinv)) for _, pm, pinv in _perm_tables(n)}
    witness = exists_property_l_copy(canonical)
    return IsoClassRecord(canonical, len(images) << n, witness is not None, witness)


def _census_shard(n: int, first_value: int | None) -> list[IsoClassRecord]:
    tables = _perm_tables(n)
    records = []
    for o in enumerate_usos(n, sink=0, first_value=first_value):
        if _is_canonical_sink_zero(o.table, tables):
            records.append(class_record(o))
    return records


def _shards(n: int) -> list[int | None]:
    # with sink ∅, vertex {1} must leave along dimension 1
    return [None] if n == 0 else [v for v in range(1 << n) if v & 1]


def census(
    n: int,
    jobs: int = 1,
    state_path: str | os.PathLike | None = None,
    resume: bool = False,
    progress: Callable[[int, int], None] | None = None,
) -> list[IsoClassRecord]:
    """One record per isomorphism class of n-cube USOs, sorted by canonical table.

    With ``state_path`` the finished shards are checkpointed after each one,
    and ``resume`` continues from an existing checkpoint.
    """
    if n > MAX_ENUMERATION_DIM:
        raise DimensionTooLarge(f"census supports n <= {MAX_ENUMERATION_DIM}")
    shards = _shards(n)
    done: dict[str, list[dict]] = {}
    if resume and state_path and os.path.exists(state_path):
        with open(state_path) as fh:
            state = json.load(fh)
        if state.get("n") != n:
            raise ValueError(f"checkpoint {state_path} is for n={state.get('n')}, not {n}")
        done = state["shards"]
        log.info("resuming census n=%d with %d/%d shards done", n, len(done), len(shards))
    todo = [s for s in shards if str(s) not in done]

    def save():
        if state_path:
            tmp = f"{state_path}.tmp"
            with open(tmp, "w") as fh:
                json.dump({"n": n, "shards": done}, fh)
            os.replace(tmp, state_path)

    def finish(shard, records):
        done[str(shard)] = [r.to_dict() for r in records]
        save()
        if progress:
            progress(len(done), len(shards))

    if jobs > 1 and len(todo) > 1:
        from multiprocessing import Pool

        with Pool(jobs) as pool:
            results = pool.starmap(_census_shard, [(n, s) for s in todo])
        for shard, records in zip(todo, results):
            finish(shard, records)
    else:
        for shard in todo:
            finish(shard, _census_shard(n, shard))

    records = [IsoClassRecord.from_dict(d) for shard in shards for d in done[str(shard)]]
    records.sort(key=lambda r: r.canonical.table)
    return records


def verify_record(record: IsoClassRecord) -> bool:
    """Re-check a stored class record: canonicality, class size and the property-L flag."""
    o = record.canonical
    if not is_uso(o) or canonical_form(o) != o:
        return False
    fresh = class_record(o)
    if fresh.class_size != record.class_size or fresh.has_property_l_member != record.has_property_l_member:
        return False
    if record.witness_automorphism is not None:
        img = apply_automorphism(o, record.witness_automorphism)
        if cyclic_vertex_of_table(img.table, o.n) is not None:
            return False
    return True
