"""Input words, arrangements and the equality system of the minimum-insertion ILP.

For a fixed shift vector the security condition becomes a linear system
over the insertion counts ``y``.  For class ``b``, reference word ``w_1`` and
another word ``w_k`` aligned with shift ``s``, every segment ``j`` gives

    gap(w_1)[j] + sum_{i in seg_1(j)} y_i = gap(w_k)[j'] + sum_{i in seg_k(j')} y_i,
    j' = (j + s) mod J.

The post-insertion gap counts are substituted away, so only ``y`` remains.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial
from typing import Iterator, Sequence

from .boolfun import TruthTable, assignments
from .words import Word, gap_vector, segment_map, to_str

Row = tuple[int, ...]


@dataclass(frozen=True)
class Arrangement:
    """Card at source position ``p`` moves to target position ``perm[p]`` (0-based)."""

    perm: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"not a permutation: {self.perm}")

    @classmethod
    def identity(cls, size: int) -> "Arrangement":
        return cls(tuple(range(size)))

    def __len__(self) -> int:
        return len(self.perm)

    def apply(self, w: Sequence[int]) -> Word:
        if len(w) != len(self.perm):
            raise ValueError(f"arrangement of size {len(self.perm)} applied to word of length {len(w)}")
        out = [0] * len(w)
        for p, t in enumerate(self.perm):
            out[t] = w[p]
        return tuple(out)

    def one_based(self) -> list[int]:
        return [t + 1 for t in self.perm]


def all_arrangements(size: int) -> Iterator[Arrangement]:
    for p in itertools.permutations(range(size)):
        yield Arrangement(p)


@dataclass(frozen=True)
class WordClassing:
    """Words grouped by output value, each class sorted lexicographically.

    ``inputs0``/``inputs1`` hold the assignment behind each word, aligned with
    ``class0``/``class1``.
    """

    n: int
    class0: tuple[Word, ...]
    class1: tuple[Word, ...]
    inputs0: tuple[tuple[int, ...], ...] = ()
    inputs1: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        for w in self.class0 + self.class1:
            if len(w) != 2 * self.n or sum(w) != self.n:
                raise ValueError(f"word {to_str(w)} is not a {2 * self.n}-card word with {self.n} hearts")
        if len(self.class0) + len(self.class1) != 1 << self.n:
            raise ValueError("class sizes must add up to 2^n")
        if set(self.class0) & set(self.class1):
            raise ValueError("classes are not disjoint")

    def cls(self, b: int) -> tuple[Word, ...]:
        return self.class1 if b else self.class0

    @property
    def sizes(self) -> tuple[int, int]:
        return len(self.class0), len(self.class1)


def _sorted_class(pairs):
    pairs = sorted(pairs)
    return tuple(w for w, _ in pairs), tuple(x for _, x in pairs)


def input_words(f: TruthTable) -> WordClassing:
    """Step-1 words ``x1 ~x1 x2 ~x2 ... xn ~xn`` split by ``f``."""
    groups: tuple[list, list] = ([], [])
    for x in assignments(f.n):
        w = tuple(b for xi in x for b in (xi, 1 - xi))
        groups[f(*x)].append((w, x))
    c0, x0 = _sorted_class(groups[0])
    c1, x1 = _sorted_class(groups[1])
    return WordClassing(f.n, c0, c1, x0, x1)


def permute_classing(c: WordClassing, pi: Arrangement) -> WordClassing:
    if len(pi) != 2 * c.n:
        raise ValueError(f"arrangement of size {len(pi)} does not fit {2 * c.n}-card words")
    c0, x0 = _sorted_class((pi.apply(w), x) for w, x in zip(c.class0, c.inputs0 or [()] * len(c.class0)))
    c1, x1 = _sorted_class((pi.apply(w), x) for w, x in zip(c.class1, c.inputs1 or [()] * len(c.class1)))
    return WordClassing(c.n, c0, c1, x0 if c.inputs0 else (), x1 if c.inputs1 else ())


# -- shift vectors -----------------------------------------------------------


def shift_slots(c: WordClassing) -> list[tuple[int, int]]:
    """``(b, k)`` for every shift entry, ``k`` 0-based within its class (k >= 1)."""
    return [(b, k) for b in (0, 1) for k in range(1, len(c.cls(b)))]


def all_shift_vectors(c: WordClassing) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(c.n), repeat=len(shift_slots(c)))


def instance_count(f_or_c) -> int:
    """Number of (arrangement, shift vector) pairs: (2n)! * n^(K0 + K1 - 2)."""
    c = input_words(f_or_c) if isinstance(f_or_c, TruthTable) else f_or_c
    return factorial(2 * c.n) * c.n ** len(shift_slots(c))


# -- equality system ---------------------------------------------------------


class SegmentData:
    """Gap vectors and segment maps of every word of a classing (shared by all
    shift vectors for that arrangement)."""

    def __init__(self, c: WordClassing):
        self.classing = c
        self.I = 2 * c.n
        self.J = c.n
        self.gaps = tuple(tuple(gap_vector(w) for w in c.cls(b)) for b in (0, 1))
        self.segs = tuple(tuple(segment_map(w) for w in c.cls(b)) for b in (0, 1))

    def block(self, b: int, k: int, s: int) -> list[tuple[Row, int]]:
        """The J equations tying word ``k`` of class ``b`` to word 0 under shift ``s``."""
        J, I = self.J, self.I
        g1, gk = self.gaps[b][0], self.gaps[b][k]
        m1, mk = self.segs[b][0], self.segs[b][k]
        rows = []
        for j in range(J):
            jp = (j + s) % J
            row = tuple((m1[i] == j) - (mk[i] == jp) for i in range(I))
            rows.append((row, gk[jp] - g1[j]))
        return rows


@dataclass(frozen=True)
class IlpInstance:
    I: int
    J: int
    K0: int
    K1: int
    gaps: tuple
    segs: tuple
    shifts: tuple[int, ...]
    A: tuple[Row, ...]
    d: tuple[int, ...]

    def to_text(self) -> str:
        lines = [f"# I={self.I} J={self.J} K0={self.K0} K1={self.K1} s={list(self.shifts)}"]
        for row, rhs in zip(self.A, self.d):
            lhs = " ".join(f"{'+' if a > 0 else '-'}y{i + 1}" for i, a in enumerate(row) if a)
            lines.append(f"{lhs or '0'} = {rhs}")
        return "\n".join(lines) + "\n"


def build_ilp(c: WordClassing, shifts: Sequence[int], seg: SegmentData | None = None) -> IlpInstance:
    slots = shift_slots(c)
    if len(shifts) != len(slots):
        raise ValueError(f"shift vector has {len(shifts)} entries, expected {len(slots)}")
    if any(not 0 <= s < c.n for s in shifts):
        raise ValueError(f"shift entries must lie in [0, {c.n})")
    seg = seg or SegmentData(c)
    A, d = [], []
    for (b, k), s in zip(slots, shifts):
        for row, rhs in seg.block(b, k, s):
            A.append(row)
            d.append(rhs)
    K0, K1 = c.sizes
    return IlpInstance(seg.I, seg.J, K0, K1, seg.gaps, seg.segs, tuple(shifts), tuple(A), tuple(d))


def instance_from_system(A: Sequence[Sequence[int]], d: Sequence[int], I: int | None = None) -> IlpInstance:
    """Bare instance over an arbitrary equality system (used for solver testing)."""
    if I is None:
        if not A:
            raise ValueError("I is required for an empty system")
        I = len(A[0])
    return IlpInstance(I, 0, 0, 0, (), (), (), tuple(tuple(r) for r in A), tuple(d))
