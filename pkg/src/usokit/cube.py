"""Vertices, outmaps, faces and the cube transforms.

Sets of dimensions are plain ``int`` bitmasks: dimension ``i`` (1-based)
lives in bit ``i - 1``, and vertex ``V`` is stored at table index ``V``.
Functions that take a single dimension use the 1-based number.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import DimensionMismatch, InvalidPermutation, MalformedFace, UsoError

DEFAULT_MAX_DIM = 30


def max_dim() -> int:
    """Dimension cap; ``USO_MAX_DIM`` overrides the default of 30."""
    value = os.environ.get("USO_MAX_DIM")
    return int(value) if value else DEFAULT_MAX_DIM


def dimset(dims: Iterable[int]) -> int:
    """Bitmask of the 1-based dimensions in ``dims``."""
    mask = 0
    for i in dims:
        if i < 1:
            raise ValueError(f"dimensions are 1-based, got {i}")
        mask |= 1 << (i - 1)
    return mask


def dims_of(mask: int) -> tuple[int, ...]:
    """Sorted 1-based dimensions of a bitmask."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def bits(mask: int) -> list[int]:
    """0-based bit positions set in ``mask``."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def full(n: int) -> int:
    return (1 << n) - 1


def format_set(mask: int) -> str:
    return "{" + ",".join(str(i) for i in dims_of(mask)) + "}"


@dataclass(frozen=True)
class OutMap:
    """Explicit outmap table of an n-cube orientation.

    The table need not describe a consistent orientation; use
    :func:`is_orientation` to validate.
    """

    n: int
    table: tuple[int, ...]

    def __init__(self, n: int, table: Sequence[int]):
        if n < 0:
            raise ValueError("dimension must be nonnegative")
        if n > max_dim():
            raise UsoError(f"dimension {n} exceeds cap {max_dim()}")
        table = tuple(int(x) for x in table)
        if len(table) != 1 << n:
            raise ValueError(f"table must have {1 << n} entries, got {len(table)}")
        limit = 1 << n
        for v, x in enumerate(table):
            if not 0 <= x < limit:
                raise ValueError(f"outmap value {x} at vertex {v} is not a subset of [{n}]")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "table", table)

    def __getitem__(self, v: int) -> int:
        return self.table[v]

    def __len__(self) -> int:
        return len(self.table)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def outdegree(self, v: int) -> int:
        return self.table[v].bit_count()

    def __repr__(self) -> str:
        return f"OutMap(n={self.n}, table={list(self.table)})"


@dataclass(frozen=True)
class Face:
    """Interval ``[lower, upper]`` of the cube; vertices ``V`` with lower ⊆ V ⊆ upper."""

    lower: int
    upper: int

    def __post_init__(self):
        if self.lower & ~self.upper:
            raise MalformedFace(f"lower {format_set(self.lower)} is not a subset of upper {format_set(self.upper)}")

    @property
    def carrier(self) -> int:
        return self.upper & ~self.lower

    @property
    def dimension(self) -> int:
        return self.carrier.bit_count()

    def vertices(self) -> list[int]:
        """Vertices of the face in increasing index order."""
        carrier = self.carrier
        out = []
        sub = 0
        # enumerate subsets of carrier in increasing order
        while True:
            out.append(self.lower | sub)
            if sub == carrier:
                break
            sub = (sub - carrier) & carrier
        return out

    def check_within(self, n: int) -> None:
        if self.upper >> n:
            raise MalformedFace(f"face {self} is not inside the {n}-cube")

    @classmethod
    def whole(cls, n: int) -> "Face":
        return cls(0, full(n))


class Direction(Enum):
    OUTGOING = "outgoing"
    INCOMING = "incoming"


def _check_dim(o: OutMap, i: int) -> None:
    if not 1 <= i <= o.n:
        raise ValueError(f"dimension {i} out of range for a {o.n}-cube")


def is_orientation(o: OutMap) -> bool:
    """True iff every edge is claimed by exactly one endpoint."""
    t = o.table
    for v in range(len(t)):
        tv = t[v]
        free = ~v & o.full
        while free:
            b = free & -free
            free ^= b
            if bool(tv & b) == bool(t[v | b] & b):
                return False
    return True


def edge_direction(o: OutMap, v: int, i: int) -> Direction:
    _check_dim(o, i)
    return Direction.OUTGOING if o.table[v] >> (i - 1) & 1 else Direction.INCOMING


def reverse(o: OutMap, r: int) -> OutMap:
    """Reverse all edges along the dimensions in ``r``."""
    return OutMap(o.n, [x ^ r for x in o.table])


def mirror(o: OutMap, f: int) -> OutMap:
    """Mirror image along ``f``: the new outmap at V is the old one at V ⊕ f."""
    t = o.table
    return OutMap(o.n, [t[v ^ f] for v in range(len(t))])


def check_permutation(perm: Sequence[int], n: int) -> tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if len(perm) != n or sorted(perm) != list(range(1, n + 1)):
        raise InvalidPermutation(f"{perm} is not a permutation of 1..{n}")
    return perm


def mask_permuter(perm: Sequence[int]) -> list[int]:
    """Lookup table sending every mask ``S`` to ``π(S)``; ``perm[i-1] = π(i)``."""
    n = len(perm)
    table = [0] * (1 << n)
    for s in range(1, 1 << n):
        low = s & -s
        i = low.bit_length() - 1
        table[s] = table[s ^ low] | (1 << (perm[i] - 1))
    return table


def permute_dims(o: OutMap, perm: Sequence[int]) -> OutMap:
    """Rename dimension ``i`` to ``perm[i-1]``; vertex π(V) gets outmap π(φ(V))."""
    perm = check_permutation(perm, o.n)
    pm = mask_permuter(perm)
    new = [0] * len(o.table)
    for v, x in enumerate(o.table):
        new[pm[v]] = pm[x]
    return OutMap(o.n, new)


@dataclass(frozen=True)
class Automorphism:
    """Cube automorphism ``h(V) = π(V ⊕ flip)`` with ``perm[i-1] = π(i)``."""

    flip: int
    perm: tuple[int, ...]

    def __post_init__(self):
        n = len(self.perm)
        object.__setattr__(self, "perm", check_permutation(self.perm, n))
        if self.flip >> n:
            raise InvalidPermutation(f"flip set {format_set(self.flip)} exceeds dimension {n}")

    @property
    def n(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, n: int) -> "Automorphism":
        return cls(0, tuple(range(1, n + 1)))

    def __call__(self, v: int) -> int:
        return mask_permuter(self.perm)[v ^ self.flip]

    def then(self, other: "Automorphism") -> "Automorphism":
        """The automorphism applying ``self`` first and ``other`` second."""
        if other.n != self.n:
            raise DimensionMismatch("automorphisms of different cubes")
        inv = [0] * self.n
        for i, p in enumerate(self.perm):
            inv[p - 1] = i + 1
        flip = self.flip ^ mask_permuter(inv)[other.flip]
        perm = tuple(other.perm[p - 1] for p in self.perm)
        return Automorphism(flip, perm)

    def to_dict(self) -> dict:
        return {"flip": list(dims_of(self.flip)), "perm": list(self.perm)}

    @classmethod
    def from_dict(cls, d: dict) -> "Automorphism":
        return cls(dimset(d["flip"]), tuple(d["perm"]))


def apply_automorphism(o: OutMap, a: Automorphism) -> OutMap:
    if a.n != o.n:
        raise DimensionMismatch(f"automorphism of a {a.n}-cube applied to a {o.n}-cube")
    return permute_dims(mirror(o, a.flip), a.perm)


def face_subcube(o: OutMap, face: Face) -> OutMap:
    """Restrict to a face and rename its carrier dimensions to 1..k in order."""
    face.check_within(o.n)
    carrier = bits(face.carrier)
    k = len(carrier)
    t = o.table
    new = [0] * (1 << k)
    for local in range(1 << k):
        v = face.lower
        for pos, b in enumerate(carrier):
            if local >> pos & 1:
                v |= 1 << b
        x = t[v]
        out = 0
        for pos, b in enumerate(carrier):
            if x >> b & 1:
                out |= 1 << pos
        new[local] = out
    return OutMap(k, new)
