"""USO generators and kaleidoscope machinery."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .analysis import is_uso
from .cube import OutMap, full
from .errors import DimensionMismatch, InvalidMatching, NotAUso, UsoError
from .lcp import Matrix, Vector, blowup_pmatrix, pcube_outmap


@dataclass(frozen=True)
class CombedSpec:
    """Bit string of length 2^n - 1 naming a recursively combed n-cube USO.

    Bit 0 gives the direction of the dimension-n edges (0 down, 1 up); the
    next 2^(n-1) - 1 bits encode the lower facet and the rest the upper one.
    """

    n: int
    bits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))
        if len(self.bits) != (1 << self.n) - 1 or any(b not in (0, 1) for b in self.bits):
            raise UsoError(f"a combed spec for n={self.n} needs {(1 << self.n) - 1} bits of 0/1")

    @classmethod
    def from_string(cls, n: int, text: str) -> "CombedSpec":
        return cls(n, tuple(int(c) for c in text.strip()))

    @classmethod
    def all(cls, n: int) -> Iterator["CombedSpec"]:
        length = (1 << n) - 1
        for code in range(1 << length):
            yield cls(n, tuple(code >> k & 1 for k in range(length)))


def _combed_table(n: int, spec: tuple[int, ...]) -> list[int]:
    if n == 0:
        return [0]
    half = (1 << (n - 1)) - 1
    lower = _combed_table(n - 1, spec[1:1 + half])
    upper = _combed_table(n - 1, spec[1 + half:])
    top = 1 << (n - 1)
    if spec[0]:
        return [x | top for x in lower] + upper
    return lower + [x | top for x in upper]


def recursively_combed(spec: CombedSpec) -> OutMap:
    return OutMap(spec.n, _combed_table(spec.n, spec.bits))


def uniform_uso(n: int) -> OutMap:
    """Every edge points down: φ(V) = V."""
    return OutMap(n, range(1 << n))


def normalize_matching(n: int, edges: Iterable[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    """Edges as (lower endpoint, 1-based dimension); raises if endpoints repeat."""
    out = set()
    covered = set()
    for v, i in edges:
        if not 1 <= i <= n or not 0 <= v < 1 << n:
            raise InvalidMatching(f"edge ({v}, {i}) is not an edge of the {n}-cube")
        low = v & ~(1 << (i - 1))
        high = low | (1 << (i - 1))
        if low in covered or high in covered:
            raise InvalidMatching(f"edge ({low}, {i}) shares an endpoint with another matched edge")
        covered.update((low, high))
        out.add((low, i))
    return frozenset(out)


def matching_reversal(n: int, matching: Iterable[tuple[int, int]]) -> OutMap:
    table = list(range(1 << n))
    for low, i in normalize_matching(n, matching):
        b = 1 << (i - 1)
        table[low] ^= b
        table[low | b] ^= b
    return OutMap(n, table)


def matching_from_uniform(o: OutMap) -> frozenset[tuple[int, int]]:
    """Edges on which ``o`` differs from the uniform USO; raises if they are not a matching."""
    edges = []
    for v, x in enumerate(o.table):
        diff = x ^ v
        i = 1
        while diff:
            if diff & 1 and not v >> (i - 1) & 1:
                edges.append((v, i))
            diff >>= 1
            i += 1
    return normalize_matching(o.n, edges)


def split_lh(v: int, n: int) -> tuple[int, int]:
    """Split a subset of [2n] into its lower and shifted upper halves."""
    if v >> (2 * n):
        raise ValueError(f"{v} is not a subset of [{2 * n}]")
    return v & full(n), v >> n


def is_kaleidoscope(psi: OutMap, phi: OutMap) -> bool:
    n = phi.n
    if psi.n != 2 * n:
        raise DimensionMismatch(f"kaleidoscope must have dimension {2 * n}, got {psi.n}")
    low = full(n)
    pt, ft = psi.table, phi.table
    return all(pt[v] & low == ft[(v & low) ^ (v >> n)] for v in range(len(pt)))


def product_kaleidoscope(phi: OutMap, check: bool = True) -> OutMap:
    """Kaleidoscope whose upper dimensions all point down."""
    if check and not is_uso(phi):
        raise NotAUso("base orientation is not a USO")
    n = phi.n
    low = full(n)
    ft = phi.table
    return OutMap(2 * n, [ft[(v & low) ^ (v >> n)] | (v & ~low) for v in range(1 << (2 * n))])


def contains_copy(psi_prime: OutMap, phi: OutMap) -> int | None:
    """First V ⊆ {n+1..2n} whose face [V, V ∪ [n]] carries φ on the lower dimensions."""
    n = phi.n
    if psi_prime.n != 2 * n:
        raise DimensionMismatch(f"container must have dimension {2 * n}, got {psi_prime.n}")
    low = full(n)
    pt, ft = psi_prime.table, phi.table
    for high in range(1 << n):
        v = high << n
        if all(pt[v | u] & low == ft[u] for u in range(1 << n)):
            return v
    return None


def pcube_kaleidoscope(a: Matrix, b: Vector) -> tuple[Matrix, Vector, OutMap]:
    """P-cube kaleidoscope: blow up ``a`` and double ``b``."""
    # raises NotPMatrix / NotGeneric for bad base data
    pcube_outmap(a, b)
    m = blowup_pmatrix(a, check=False)
    q = list(b) + list(b)
    # M is a P-matrix whenever a is, so skip the 2^(2n) minors
    return m, q, pcube_outmap(m, q, check=False)
