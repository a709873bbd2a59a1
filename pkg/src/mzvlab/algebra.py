"""Formal rational linear combinations of MZVs and the classical relations on them.

:class:`MzvExpr` is a finite map ``Index -> Fraction`` and
:class:`ProductExpr` maps multisets of indices (sorted tuples) to
coefficients.  Both are immutable, drop zero coefficients, and keep exact
rational arithmetic; only :mod:`mzvlab.evaluator` ever produces approximations.
"""

from __future__ import annotations

import re
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .evaluator import eval_expr
from .indices import EmptyDomainError, Index, admissible_indices, dual, weak_compositions
from .report import VerifyReport, compare

__all__ = [
    "MzvExpr",
    "ProductExpr",
    "stuffle",
    "sum_formula_expr",
    "ohno_expr",
    "verify_ohno",
    "verify_duality",
    "verify_sum_formula",
    "expand_products",
]


def _index(ix) -> Index:
    return (ix if isinstance(ix, Index) else Index(ix)).require_admissible()


class MzvExpr(Mapping):
    """``sum c_i zeta(index_i)`` with exact rational coefficients.

    Iteration is in lexicographic order of the indices.

    >>> e = MzvExpr({(2, 2): 2, (4,): 1})
    >>> str(e)
    '2*z(2,2)+1*z(4)'
    >>> MzvExpr.parse(str(e)) == e
    True
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable[tuple[Sequence[int], Fraction]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Index, Fraction] = defaultdict(Fraction)
        for ix, c in items:
            acc[_index(ix)] += Fraction(c)
        self._terms = {ix: acc[ix] for ix in sorted(acc) if acc[ix]}

    @classmethod
    def single(cls, index: Sequence[int], coeff: Fraction | int = 1) -> "MzvExpr":
        return cls({index: coeff})

    def __getitem__(self, index) -> Fraction:
        return self._terms[index if isinstance(index, Index) else Index(index)]

    def __iter__(self) -> Iterator[Index]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MzvExpr):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def __add__(self, other: "MzvExpr") -> "MzvExpr":
        return MzvExpr(list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> "MzvExpr":
        return self * -1

    def __sub__(self, other: "MzvExpr") -> "MzvExpr":
        return self + (-other)

    def __mul__(self, scalar) -> "MzvExpr":
        scalar = Fraction(scalar)
        return MzvExpr({ix: c * scalar for ix, c in self._terms.items()})

    __rmul__ = __mul__

    def weights(self) -> set[int]:
        return {ix.weight for ix in self._terms}

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for ix, c in self._terms.items():
            sign = "-" if c < 0 else "+"
            out.append(f"{sign}{abs(c)}*z({ix})")
        text = "".join(out)
        return text[1:] if text.startswith("+") else text

    def __repr__(self) -> str:
        return f"MzvExpr({str(self)!r})"

    _TERM = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)\s*\*\s*z\(([\d,\s]+)\)")

    @classmethod
    def parse(cls, text: str) -> "MzvExpr":
        """Inverse of ``str``: ``c1*z(i1)+c2*z(i2)+...``."""
        text = text.strip()
        if text == "0":
            return cls()
        pos = 0
        terms = []
        for match in cls._TERM.finditer(text):
            if text[pos:match.start()].strip():
                raise ValueError(f"cannot parse {text!r} near {text[pos:]!r}")
            sign, coeff, ix = match.groups()
            c = Fraction(coeff)
            terms.append((Index.parse(ix), -c if sign == "-" else c))
            pos = match.end()
        if not terms or text[pos:].strip():
            raise ValueError(f"cannot parse MZV expression {text!r}")
        return cls(terms)


class ProductExpr(Mapping):
    """``sum c_j prod_{x in M_j} zeta(x)`` over multisets ``M_j`` of indices.

    Multisets are stored as sorted tuples of :class:`Index`.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[Index, ...], Fraction] = defaultdict(Fraction)
        for key, c in items:
            acc[self.key(key)] += Fraction(c)
        self._terms = {k: acc[k] for k in sorted(acc) if acc[k]}

    @staticmethod
    def key(members: Iterable[Sequence[int]]) -> tuple[Index, ...]:
        members = tuple(sorted(_index(m) for m in members))
        if not members:
            raise ValueError("a product needs at least one factor")
        return members

    def __getitem__(self, members) -> Fraction:
        return self._terms[self.key(members)]

    def __iter__(self):
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, ProductExpr):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def __add__(self, other: "ProductExpr") -> "ProductExpr":
        return ProductExpr(list(self._terms.items()) + list(other._terms.items()))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for key, c in self._terms.items():
            sign = "-" if c < 0 else "+"
            parts.append(f"{sign}{abs(c)}*" + "*".join(f"z({ix})" for ix in key))
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text

    def __repr__(self) -> str:
        return f"ProductExpr({str(self)!r})"


# ---------------------------------------------------------------------------
# harmonic product


@lru_cache(maxsize=None)
def _stuffle_decreasing(u: tuple[int, ...], v: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], int], ...]:
    # u, v list exponents from the largest summation variable down; the
    # largest variable of the product is u's, v's, or both at once.
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    out: dict[tuple[int, ...], int] = defaultdict(int)
    x, y = u[0], v[0]
    for w, c in _stuffle_decreasing(u[1:], v):
        out[(x,) + w] += c
    for w, c in _stuffle_decreasing(u, v[1:]):
        out[(y,) + w] += c
    for w, c in _stuffle_decreasing(u[1:], v[1:]):
        out[(x + y,) + w] += c
    return tuple(out.items())


def stuffle(left: Sequence[int], right: Sequence[int]) -> MzvExpr:
    """Harmonic product: ``zeta(left) * zeta(right)`` as a sum of MZVs.

    >>> str(stuffle((2,), (3,)))
    '1*z(2,3)+1*z(3,2)+1*z(5)'
    """
    a, b = _index(left), _index(right)
    terms = _stuffle_decreasing(tuple(reversed(a)), tuple(reversed(b)))
    return MzvExpr((w[::-1], c) for w, c in terms)


def expand_products(expr: ProductExpr) -> MzvExpr:
    """Rewrite every product of MZVs as a linear combination by iterated stuffles."""
    out: dict[Index, Fraction] = defaultdict(Fraction)
    for members, c in expr.items():
        current = {members[0]: Fraction(1)}
        for factor in members[1:]:
            nxt: dict[Index, Fraction] = defaultdict(Fraction)
            for ix, coeff in current.items():
                for w, d in stuffle(ix, factor).items():
                    nxt[w] += coeff * d
            current = nxt
        for ix, coeff in current.items():
            out[ix] += c * coeff
    return MzvExpr(out)


# ---------------------------------------------------------------------------
# sum formula, Ohno, duality


def sum_formula_expr(weight: int, depth: int) -> MzvExpr:
    """Sum of all admissible ``zeta`` of the given weight and depth (coefficient 1)."""
    if depth < 1 or weight <= depth:
        raise EmptyDomainError(f"no admissible index of weight {weight} and depth {depth}")
    return MzvExpr((ix, 1) for ix in admissible_indices(weight, depth))


def ohno_expr(index: Sequence[int], c: int) -> MzvExpr:
    """``sum_{e_1+...+e_n = c, e_i >= 0} zeta(a_1 + e_1, ..., a_n + e_n)``."""
    index = _index(index)
    if c < 0:
        raise ValueError("c must be nonnegative")
    return MzvExpr(
        (tuple(a + e for a, e in zip(index, shift)), 1)
        for shift in weak_compositions(c, index.depth)
    )


def verify_ohno(index: Sequence[int], c: int, digits: int = 30) -> VerifyReport:
    """Numerically check Ohno's relation between ``index`` and its dual."""
    index = _index(index)
    other = dual(index)
    return compare(
        f"ohno({index};{other};c={c})",
        lambda t: eval_expr(ohno_expr(index, c), t),
        lambda t: eval_expr(ohno_expr(other, c), t),
        digits,
    )


def verify_duality(index: Sequence[int], digits: int = 30) -> VerifyReport:
    """Numerically check ``zeta(index) = zeta(dual(index))``."""
    index = _index(index)
    other = dual(index)
    return compare(
        f"duality({index};{other})",
        lambda t: eval_expr(MzvExpr.single(index), t),
        lambda t: eval_expr(MzvExpr.single(other), t),
        digits,
    )


def verify_sum_formula(weight: int, depth: int, digits: int = 30) -> VerifyReport:
    """Numerically check that the depth-``depth`` sum formula gives ``zeta(weight)``."""
    expr = sum_formula_expr(weight, depth)
    return compare(
        f"sum-formula(w={weight};d={depth})",
        lambda t: eval_expr(expr, t),
        lambda t: eval_expr(MzvExpr.single((weight,)), t),
        digits,
    )
