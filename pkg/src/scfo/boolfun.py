"""Boolean functions as truth tables, NPN transforms and the built-in catalog.

Truth-table index order: entry ``i`` is the value at the assignment whose
binary expansion is ``x_1 x_2 ... x_n`` with ``x_1`` the most significant bit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

MAX_VARS = 4


@dataclass(frozen=True, order=True)
class TruthTable:
    n: int
    table: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_VARS:
            raise ValueError(f"unsupported number of variables: {self.n}")
        if len(self.table) != 1 << self.n:
            raise ValueError(f"table length {len(self.table)} != 2^{self.n}")
        if any(b not in (0, 1) for b in self.table):
            raise ValueError("table entries must be 0/1")

    @classmethod
    def from_bits(cls, bits: str, n: int | None = None) -> "TruthTable":
        if n is None:
            n = len(bits).bit_length() - 1
            if 1 << n != len(bits):
                raise ValueError(f"bitstring length {len(bits)} is not a power of two")
        if len(bits) != 1 << n or any(c not in "01" for c in bits):
            raise ValueError(f"expected {1 << n} binary digits, got {bits!r}")
        return cls(n, tuple(int(c) for c in bits))

    @classmethod
    def from_function(cls, n: int, fn: Callable[..., int]) -> "TruthTable":
        return cls(n, tuple(int(bool(fn(*x))) for x in assignments(n)))

    @classmethod
    def from_int(cls, n: int, value: int) -> "TruthTable":
        N = 1 << n
        return cls(n, tuple((value >> (N - 1 - i)) & 1 for i in range(N)))

    def __call__(self, *x: int) -> int:
        return self.table[index_of(x)]

    def to_int(self) -> int:
        """Integer whose most significant bit is ``table[0]``; orders like the table."""
        v = 0
        for b in self.table:
            v = (v << 1) | b
        return v

    @property
    def bits(self) -> str:
        return "".join(map(str, self.table))

    def is_constant(self) -> bool:
        return len(set(self.table)) == 1


def assignments(n: int) -> Iterator[tuple[int, ...]]:
    """All inputs in table order (x_1 most significant)."""
    return itertools.product((0, 1), repeat=n)


def index_of(x) -> int:
    i = 0
    for b in x:
        i = (i << 1) | b
    return i


@dataclass(frozen=True)
class NpnTransform:
    """``(Tf)(x) = out ^ f(y)`` with ``y[j] = x[perm[j]] ^ mask[j]`` (0-based)."""

    perm: tuple[int, ...]
    mask: tuple[int, ...]
    out: int = 0

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"not a permutation: {self.perm}")
        if len(self.mask) != len(self.perm):
            raise ValueError("mask and permutation differ in length")

    @property
    def n(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, n: int) -> "NpnTransform":
        return cls(tuple(range(n)), (0,) * n, 0)

    def then(self, other: "NpnTransform") -> "NpnTransform":
        """Transform equal to applying ``self`` first and ``other`` second."""
        perm = tuple(other.perm[p] for p in self.perm)
        mask = tuple(self.mask[j] ^ other.mask[self.perm[j]] for j in range(self.n))
        return NpnTransform(perm, mask, self.out ^ other.out)

    def inverse(self) -> "NpnTransform":
        perm = [0] * self.n
        mask = [0] * self.n
        for j, p in enumerate(self.perm):
            perm[p] = j
            mask[p] = self.mask[j]
        return NpnTransform(tuple(perm), tuple(mask), self.out)


def all_transforms(n: int) -> Iterator[NpnTransform]:
    for perm in itertools.permutations(range(n)):
        for mask in itertools.product((0, 1), repeat=n):
            for out in (0, 1):
                yield NpnTransform(perm, mask, out)


def _source_indices(T: NpnTransform) -> list[int]:
    """For each table index of ``Tf``, the index of ``f`` it reads."""
    n = T.n
    src = []
    for x in assignments(n):
        src.append(index_of(x[T.perm[j]] ^ T.mask[j] for j in range(n)))
    return src


def apply_transform(f: TruthTable, T: NpnTransform) -> TruthTable:
    if T.n != f.n:
        raise ValueError(f"transform for {T.n} variables applied to {f.n}-variable function")
    return TruthTable(f.n, tuple(f.table[s] ^ T.out for s in _source_indices(T)))


def npn_canonical(f: TruthTable) -> TruthTable:
    """Lexicographically least table over all 2 * 2^n * n! transforms."""
    return min(apply_transform(f, T) for T in all_transforms(f.n))


def dual_function(f: TruthTable) -> TruthTable:
    """``g(x) = f(not x_1, ..., not x_n)``: reversing the table negates every input."""
    return TruthTable(f.n, f.table[::-1])


@lru_cache(maxsize=None)
def _canonical_ints(n: int) -> np.ndarray:
    N = 1 << n
    dtype = np.uint32
    values = np.arange(1 << N, dtype=np.uint64).astype(dtype)
    bits = [((values >> dtype(N - 1 - i)) & dtype(1)) for i in range(N)]
    best = np.full(values.shape, np.iinfo(dtype).max, dtype=dtype)
    for T in all_transforms(n):
        acc = np.zeros_like(values)
        for i, s in enumerate(_source_indices(T)):
            b = bits[s] ^ dtype(T.out)
            acc |= b << dtype(N - 1 - i)
        np.minimum(best, acc, out=best)
    return best


def npn_classes(n: int) -> list[TruthTable]:
    """Canonical representative of every NPN class, sorted."""
    if not 1 <= n <= MAX_VARS:
        raise ValueError(f"npn_classes supports 1 <= n <= {MAX_VARS}, got {n}")
    reps = np.unique(_canonical_ints(n))
    return [TruthTable.from_int(n, int(v)) for v in reps]


def npn_class_sizes(n: int) -> dict[TruthTable, int]:
    reps, counts = np.unique(_canonical_ints(n), return_counts=True)
    return {TruthTable.from_int(n, int(v)): int(c) for v, c in zip(reps, counts)}


# -- catalog -----------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    n: int
    label: str
    fn: Callable[..., int]
    item: int | None = None  # position in the 3-variable representative list

    @property
    def table(self) -> TruthTable:
        return TruthTable.from_function(self.n, self.fn)


_ENTRIES = [
    CatalogEntry("zero1", 1, "0", lambda a: 0),
    CatalogEntry("id1", 1, "x1", lambda a: a),
    CatalogEntry("zero2", 2, "0", lambda a, b: 0),
    CatalogEntry("dict2", 2, "x1", lambda a, b: a),
    CatalogEntry("and2", 2, "x1 ∧ x2", lambda a, b: a & b),
    CatalogEntry("xor2", 2, "x1 ⊕ x2", lambda a, b: a ^ b),
    CatalogEntry("zero3", 3, "0", lambda a, b, c: 0, item=1),
    CatalogEntry("dict3", 3, "x1", lambda a, b, c: a, item=2),
    CatalogEntry("and2of3", 3, "x1 ∧ x2", lambda a, b, c: a & b, item=3),
    CatalogEntry("xor2of3", 3, "x1 ⊕ x2", lambda a, b, c: a ^ b, item=4),
    CatalogEntry("and3", 3, "x1 ∧ x2 ∧ x3", lambda a, b, c: a & b & c, item=5),
    CatalogEntry("xor3", 3, "x1 ⊕ x2 ⊕ x3", lambda a, b, c: a ^ b ^ c, item=6),
    CatalogEntry("eq3", 3, "(x1 = x2 = x3)?", lambda a, b, c: int(a == b == c), item=7),
    CatalogEntry("maj3", 3, "(x1 + x2 + x3 ≥ 2)?", lambda a, b, c: int(a + b + c >= 2), item=8),
    CatalogEntry("one3", 3, "(x1 + x2 + x3 = 1)?", lambda a, b, c: int(a + b + c == 1), item=9),
    CatalogEntry("xorand3", 3, "x1 ⊕ (x2 ∧ x3)", lambda a, b, c: a ^ (b & c), item=10),
    CatalogEntry("mux3", 3, "(x1 ∧ x2) ∨ (¬x1 ∧ x3)", lambda a, b, c: (a & b) | ((1 - a) & c), item=11),
    CatalogEntry("andxor3", 3, "x1 ∧ (x2 ⊕ x3)", lambda a, b, c: a & (b ^ c), item=12),
    CatalogEntry("chain3", 3, "(x1 ∨ x2) ∧ (x1 ⊕ x3)", lambda a, b, c: (a | b) & (a ^ c), item=13),
    CatalogEntry("and_or3", 3, "x1 ∧ (x2 ∨ x3)", lambda a, b, c: a & (b | c), item=14),
    # same NPN class as mux3; the form printed in the results table
    CatalogEntry("muxalt3", 3, "(x1 ∧ ¬x2) ∨ (x2 ∧ ¬x3)", lambda a, b, c: (a & (1 - b)) | (b & (1 - c))),
    CatalogEntry(
        "f4", 4, "¬x1x2¬x4 ∨ ¬x2x3¬x4 ∨ x1¬x2x4 ∨ x2¬x3x4",
        lambda a, b, c, d: ((1 - a) & b & (1 - d)) | ((1 - b) & c & (1 - d))
        | (a & (1 - b) & d) | (b & (1 - c) & d),
    ),
]

CATALOG: dict[str, CatalogEntry] = {e.name: e for e in _ENTRIES}


def named_function(name: str) -> TruthTable:
    try:
        return CATALOG[name].table
    except KeyError:
        raise KeyError(f"unknown function {name!r}; valid names: {', '.join(CATALOG)}") from None


def representatives3() -> list[CatalogEntry]:
    """The fourteen 3-variable class representatives, in list order."""
    return sorted((e for e in _ENTRIES if e.item is not None), key=lambda e: e.item)


def catalog_name(f: TruthTable) -> str | None:
    for e in _ENTRIES:
        if e.n == f.n and e.table == f:
            return e.name
    return None


def parse_function(spec: str, n: int | None = None) -> tuple[str, TruthTable]:
    """Resolve a catalog name or a raw bitstring into ``(name, table)``."""
    if spec in CATALOG:
        f = named_function(spec)
        if n is not None and n != f.n:
            raise ValueError(f"{spec} has {f.n} variables, not {n}")
        return spec, f
    if spec and all(c in "01" for c in spec):
        f = TruthTable.from_bits(spec, n)
        return catalog_name(f) or spec, f
    raise KeyError(f"unknown function {spec!r}; give a catalog name ({', '.join(CATALOG)}) "
                   "or a 2^n-digit bitstring")
