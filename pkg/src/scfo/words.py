"""Binary card words: rotations, cyclic equality, gap vectors and 0-insertion.

A word is a plain tuple of 0/1 ints (club = 0, heart = 1).  Positions in the
public helpers are 1-based to match the way insertion slots are numbered
("insert after card i"), everything else is ordinary Python indexing.
"""

from __future__ import annotations

from typing import Iterable, Sequence

Word = tuple[int, ...]
Gaps = tuple[int, ...]

CLUB = "♣"
HEART = "♥"


class DomainError(ValueError):
    """Raised for gap operations on a word without any 1s."""


def word(bits: str | Iterable[int]) -> Word:
    """Build a word from a bitstring such as ``"01101"`` or an iterable of bits."""
    if isinstance(bits, str):
        if not bits or any(c not in "01" for c in bits):
            raise ValueError(f"not a binary word: {bits!r}")
        return tuple(int(c) for c in bits)
    w = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in w):
        raise ValueError(f"not a binary word: {w!r}")
    return w


def to_str(w: Sequence[int]) -> str:
    return "".join(map(str, w))


def to_glyphs(w: Sequence[int]) -> str:
    return "".join(HEART if b else CLUB for b in w)


def rotate(w: Word, r: int) -> Word:
    """Return ``w[r:] + w[:r]``; ``r`` must satisfy ``0 <= r < len(w)``."""
    if not 0 <= r < len(w):
        raise IndexError(f"rotation {r} out of range for length {len(w)}")
    return w[r:] + w[:r]


def cyclically_equal(w: Word, w2: Word) -> bool:
    if len(w) != len(w2):
        return False
    if not w:
        return True
    # w2 is a rotation of w iff it occurs in w+w
    return to_str(w2) in to_str(w + w)


def canonical_rotation(w: Word) -> Word:
    """Lexicographically least rotation (Booth's algorithm, O(L))."""
    n = len(w)
    if n == 0:
        return w
    s = w + w
    fail = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s[j]
        i = fail[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if i == -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return s[k:k + n]


def ones_positions(w: Sequence[int]) -> list[int]:
    """1-based positions of the 1s, left to right."""
    return [i + 1 for i, b in enumerate(w) if b]


def gap_vector(w: Sequence[int]) -> Gaps:
    """Zeros per segment, with the leading and trailing runs joined into segment 1."""
    t = ones_positions(w)
    if not t:
        raise DomainError("gap vector undefined for a word without 1s")
    L = len(w)
    first = (t[0] - 1) + (L - t[-1])
    return (first,) + tuple(t[j] - t[j - 1] - 1 for j in range(1, len(t)))


def segment_of_position(w: Sequence[int], i: int) -> int:
    """Segment (1-based) that receives zeros inserted after card ``i``."""
    if not 1 <= i <= len(w):
        raise IndexError(f"position {i} out of range for length {len(w)}")
    J = sum(w)
    if J == 0:
        raise DomainError("segments undefined for a word without 1s")
    return sum(w[:i]) % J + 1


def segment_map(w: Sequence[int]) -> tuple[int, ...]:
    """0-based segment index for every insertion position (vectorised form of
    :func:`segment_of_position`)."""
    J = sum(w)
    if J == 0:
        raise DomainError("segments undefined for a word without 1s")
    out = []
    c = 0
    for b in w:
        c += b
        out.append(c % J)
    return tuple(out)


def apply_insertion(w: Word, y: Sequence[int]) -> Word:
    """Insert ``y[i]`` zeros right after card ``i`` (0-based ``i``)."""
    if len(y) != len(w):
        raise ValueError(f"insertion vector has length {len(y)}, word has {len(w)}")
    if any(v < 0 for v in y):
        raise ValueError("insertion counts must be nonnegative")
    out: list[int] = []
    for b, k in zip(w, y):
        out.append(b)
        out.extend([0] * k)
    return tuple(out)


def gap_shifts(g: Sequence[int], g2: Sequence[int]) -> list[int]:
    """All ``s`` with ``g[j] == g2[(j + s) % J]`` for every ``j``."""
    J = len(g)
    if J != len(g2) or J == 0:
        return []
    return [s for s in range(J) if all(g[j] == g2[(j + s) % J] for j in range(J))]


def gaps_cyclically_equal(g: Sequence[int], g2: Sequence[int]) -> tuple[bool, list[int]]:
    shifts = gap_shifts(g, g2)
    return bool(shifts), shifts
