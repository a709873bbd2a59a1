"""Exact combinatorics of MZV indices.

Indices follow the *increasing* summation convention used throughout the
package::

    zeta(a_1, ..., a_n) = sum_{0 < l_1 < ... < l_n} 1 / (l_1^a_1 ... l_n^a_n)

so an index is admissible (the series converges) iff its *last* entry is at
least 2.  Most of the literature uses the reversed order; every formula in
this package is written for the increasing one.

Words are strings over ``"X"`` (dt/t) and ``"Y"`` (dt/(1-t)), read from the
innermost integration variable outwards::

    (a_1, ..., a_n)  <->  Y X^(a_1 - 1) Y X^(a_2 - 1) ... Y X^(a_n - 1)
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "AdmissibilityError",
    "EmptyDomainError",
    "MalformedWordError",
    "ShapeError",
    "Index",
    "Junction",
    "BlockPattern",
    "CONCAT",
    "MERGE",
    "T1_A",
    "T1_B",
    "T2_G1",
    "T2_G2",
    "T2_G3",
    "T2_G4",
    "T2_G5",
    "PATTERNS",
    "compositions",
    "weak_compositions",
    "admissible_indices",
    "index_to_word",
    "word_to_index",
    "dual",
    "assemble",
]


class AdmissibilityError(ValueError):
    """Raised when an operation needs a convergent index but got one ending in 1."""


class EmptyDomainError(ValueError):
    pass


class MalformedWordError(ValueError):
    pass


class ShapeError(ValueError):
    """Blocks handed to :func:`assemble` do not fit the pattern."""


class Index(tuple):
    """An MZV index: a nonempty tuple of positive integers.

    Ordering, hashing and equality are those of the underlying tuple, so a
    sorted list of indices is in lexicographic order.

    >>> Index((1, 3)).weight, Index((1, 3)).depth
    (4, 2)
    >>> Index.parse("2,1").admissible
    False
    """

    __slots__ = ()

    def __new__(cls, parts: Iterable[int] = ()) -> "Index":
        parts = tuple(parts)
        if not parts:
            raise ValueError("an index must have at least one entry")
        for p in parts:
            if isinstance(p, bool) or not isinstance(p, int) or p < 1:
                raise ValueError(f"index entries must be positive integers, got {parts!r}")
        return super().__new__(cls, parts)

    @classmethod
    def parse(cls, text: str) -> "Index":
        """Parse the comma-separated text form, e.g. ``"1,3"``."""
        try:
            parts = [int(tok) for tok in text.replace(" ", "").split(",")]
        except ValueError:
            raise ValueError(f"cannot parse index {text!r}") from None
        return cls(parts)

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def depth(self) -> int:
        return len(self)

    @property
    def admissible(self) -> bool:
        return self[-1] >= 2

    def require_admissible(self) -> "Index":
        if not self.admissible:
            raise AdmissibilityError(
                f"index ({self}) is not admissible: last entry must be >= 2"
            )
        return self

    def __str__(self) -> str:
        return ",".join(map(str, self))

    def __repr__(self) -> str:
        return f"Index(({', '.join(map(str, self))}{',' if len(self) == 1 else ''}))"


def _as_index(index: Sequence[int]) -> Index:
    return index if isinstance(index, Index) else Index(index)


# ---------------------------------------------------------------------------
# compositions


def compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    """All compositions of ``total`` into exactly ``parts`` positive parts.

    The list is in lexicographic order and has ``C(total-1, parts-1)`` entries.

    >>> compositions(3, 2)
    [(1, 2), (2, 1)]
    """
    if parts < 1 or total < parts:
        raise EmptyDomainError(f"no compositions of {total} into {parts} positive parts")
    return [tuple(c) for c in _compositions(total, parts)]


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def weak_compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    """All ``parts``-tuples of nonnegative integers summing to ``total``.

    Lexicographic order; ``C(total+parts-1, parts-1)`` entries.
    """
    if total < 0 or parts < 1:
        raise EmptyDomainError(f"no weak compositions of {total} into {parts} parts")
    return [tuple(p - 1 for p in c) for c in _compositions(total + parts, parts)]


def admissible_indices(weight: int, depth: int | None = None) -> list[Index]:
    """Every admissible index of the given weight (and depth, if given), sorted."""
    if weight < 2:
        return []
    depths = range(1, weight) if depth is None else [depth]
    out = []
    for d in depths:
        if d < 1 or d >= weight:
            continue
        out.extend(Index(c) for c in _compositions(weight, d) if c[-1] >= 2)
    return sorted(out)


# ---------------------------------------------------------------------------
# words and duality


def index_to_word(index: Sequence[int]) -> str:
    """Encode an index as its iterated-integral word.

    >>> index_to_word((1, 2))
    'YYX'
    """
    index = _as_index(index)
    return "".join("Y" + "X" * (a - 1) for a in index)


def word_to_index(word: str) -> Index:
    """Inverse of :func:`index_to_word`: read off the gaps between Y letters."""
    if not word or word[0] != "Y":
        raise MalformedWordError(f"word must be nonempty and start with Y, got {word!r}")
    if set(word) - {"X", "Y"}:
        raise MalformedWordError(f"word may contain only X and Y, got {word!r}")
    return Index(len(block) + 1 for block in word.split("Y")[1:])


def _swap_reverse(word: str) -> str:
    return word[::-1].translate(str.maketrans("XY", "YX"))


def dual(index: Sequence[int]) -> Index:
    """Dual index: reverse the word and exchange X and Y.

    >>> dual((3,))
    Index((1, 2))
    """
    index = _as_index(index).require_admissible()
    return word_to_index(_swap_reverse(index_to_word(index)))


# ---------------------------------------------------------------------------
# block assembly


class Junction(enum.Enum):
    CONCAT = "concat"
    MERGE = "merge"


CONCAT = Junction.CONCAT
MERGE = Junction.MERGE


@dataclass(frozen=True)
class BlockPattern:
    """How composition blocks are glued into one index.

    ``junctions[i]`` joins block ``i`` to block ``i+1``: CONCAT appends the
    next block, MERGE adds its first entry onto the current last entry.
    ``caps[i]`` adds 1 to the final entry of block ``i`` (after a merge, that
    entry is the merged one).
    """

    name: str
    junctions: tuple[Junction, ...]
    caps: tuple[bool, ...]

    def __post_init__(self):
        if len(self.junctions) != len(self.caps) - 1:
            raise ShapeError(f"{self.name}: need one junction per adjacent block pair")
        if not self.caps[-1]:
            raise ShapeError(f"{self.name}: the final block must be capped")

    @property
    def n_blocks(self) -> int:
        return len(self.caps)

    @property
    def n_merges(self) -> int:
        return sum(j is MERGE for j in self.junctions)

    @property
    def n_caps(self) -> int:
        return sum(self.caps)


def _pattern(name, junctions, capped):
    n = len(junctions) + 1
    return BlockPattern(name, tuple(junctions), tuple(i + 1 in capped for i in range(n)))


# The right-hand-side shapes of the two weighted sum formulas.  Block i has
# a_i + 1 parts and total a_i + b_i + 1; the theorem builders supply these.
T1_A = _pattern("T1-A", [CONCAT], {1, 2})
T1_B = _pattern("T1-B", [CONCAT, MERGE], {3})
T2_G1 = _pattern("T2-G1", [CONCAT, CONCAT], {1, 2, 3})
T2_G2 = _pattern("T2-G2", [CONCAT, MERGE, CONCAT], {3, 4})
T2_G3 = _pattern("T2-G3", [CONCAT, MERGE, CONCAT, MERGE], {5})
T2_G4 = _pattern("T2-G4", [CONCAT, CONCAT, MERGE], {1, 4})
T2_G5 = _pattern("T2-G5", [CONCAT, CONCAT, MERGE, MERGE], {5})

PATTERNS = {p.name: p for p in (T1_A, T1_B, T2_G1, T2_G2, T2_G3, T2_G4, T2_G5)}


def assemble(
    blocks: Sequence[Sequence[int]],
    pattern: BlockPattern,
    slots: Sequence[tuple[int, int]] | None = None,
) -> Index:
    """Glue composition blocks into one index according to ``pattern``.

    ``slots``, if given, lists the expected ``(parts_count, total)`` of each
    block and is checked.

    >>> assemble([(1,), (1,), (1,)], T1_B)
    Index((1, 3))
    """
    if len(blocks) != pattern.n_blocks:
        raise ShapeError(
            f"{pattern.name} takes {pattern.n_blocks} blocks, got {len(blocks)}"
        )
    if slots is not None:
        if len(slots) != len(blocks):
            raise ShapeError(f"{pattern.name}: {len(slots)} slots for {len(blocks)} blocks")
        for i, (block, (count, total)) in enumerate(zip(blocks, slots)):
            if len(block) != count or sum(block) != total:
                raise ShapeError(
                    f"{pattern.name}: block {i} = {tuple(block)} does not fit slot "
                    f"({count} parts, total {total})"
                )
    out: list[int] = []
    for i, block in enumerate(blocks):
        if not block:
            raise ShapeError(f"{pattern.name}: block {i} is empty")
        if i and pattern.junctions[i - 1] is MERGE:
            out[-1] += block[0]
            out.extend(block[1:])
        else:
            out.extend(block)
        if pattern.caps[i]:
            out[-1] += 1
    return Index(out)
