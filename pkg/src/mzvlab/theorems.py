"""Both sides of the four- and six-parameter weighted sum formulas.

Notation: ``k`` and ``l`` are the total degrees in the mu- and
xi-parameters.  Exponent vectors ``a`` and ``b`` are weak compositions of
``k`` and ``l``; block ``j`` of a right-hand-side index is a composition of
``a_j + b_j + 1`` into ``a_j + 1`` parts, and the blocks are glued by one of
the patterns in :mod:`mzvlab.indices`.

The six-parameter formula's coefficients are products of factors
``(sum_{i in S} mu_sigma(i))^(sum_{j in J} a_j)`` times the mirrored xi/b
factor.  They are stored as data in :data:`P_TABLE`, one
:class:`PFactor` tuple per polynomial.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .algebra import MzvExpr, ProductExpr
from .evaluator import eval_expr, eval_product_expr
from .indices import (
    T1_A,
    T1_B,
    T2_G1,
    T2_G2,
    T2_G3,
    T2_G4,
    T2_G5,
    BlockPattern,
    Index,
    assemble,
    compositions,
    weak_compositions,
)
from .report import VerifyReport, compare

__all__ = [
    "ParameterError",
    "DomainError",
    "ParamVector",
    "PFactor",
    "P_TABLE",
    "T1_FIRST",
    "T1_SECOND",
    "T2_GROUPS",
    "random_params",
    "p_coeff",
    "coefficient",
    "block_sum",
    "t1_lhs",
    "t1_rhs",
    "t2_lhs",
    "t2_rhs",
    "theorem_sides",
    "verify_theorem",
    "eq_after_sides",
    "verify_eq_after",
    "elo_lhs",
    "verify_elo",
]


class ParameterError(ValueError):
    """Parameter vector has the wrong arity for the requested identity."""


class DomainError(ValueError):
    pass


def _rational(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("parameters must be exact rationals, not floats")
    return Fraction(x)


@dataclass(frozen=True)
class ParamVector:
    """Exact rational parameters ``mu`` and ``xi`` of equal length (2 or 3)."""

    mu: tuple[Fraction, ...]
    xi: tuple[Fraction, ...]

    def __post_init__(self):
        mu = tuple(_rational(m) for m in self.mu)
        xi = tuple(_rational(x) for x in self.xi)
        if len(mu) != len(xi) or len(mu) not in (2, 3):
            raise ParameterError(
                f"mu and xi must both have length 2 or 3, got {len(mu)} and {len(xi)}"
            )
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "xi", xi)

    @property
    def arity(self) -> int:
        return len(self.mu)

    @classmethod
    def parse(cls, mu: str, xi: str) -> "ParamVector":
        """Parse comma-separated rationals such as ``"2,-3/2"``."""
        return cls(_parse_rationals(mu), _parse_rationals(xi))

    def require(self, arity: int) -> "ParamVector":
        if self.arity != arity:
            raise ParameterError(f"expected {arity} parameter pairs, got {self.arity}")
        return self


def _parse_rationals(text: str) -> tuple[Fraction, ...]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        try:
            out.append(Fraction(tok))
        except (ValueError, ZeroDivisionError):
            raise ParameterError(f"cannot parse rational {tok!r}") from None
        if "." in tok or "e" in tok.lower():
            raise ParameterError(f"use p/q syntax for rationals, got {tok!r}")
    return tuple(out)


def random_params(arity: int, rng: random.Random) -> ParamVector:
    """Seeded random rationals: numerators in [-9, 9], denominators in [1, 4].

    Vectors whose mu-part or xi-part is entirely zero are redrawn.
    """

    def draw() -> tuple[Fraction, ...]:
        while True:
            v = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(arity))
            if any(v):
                return v

    return ParamVector(draw(), draw())


# ---------------------------------------------------------------------------
# coefficient polynomials


@dataclass(frozen=True)
class PFactor:
    """``(sum_{i in subset} mu_sigma(i))^(sum_{j in slots} a_j)`` and its xi/b mirror."""

    subset: tuple[int, ...]
    slots: tuple[int, ...]

    def value(self, mu, xi, sigma, a, b) -> Fraction:
        base_mu = sum((mu[sigma[i - 1] - 1] for i in self.subset), Fraction(0))
        base_xi = sum((xi[sigma[i - 1] - 1] for i in self.subset), Fraction(0))
        return base_mu ** sum(a[j - 1] for j in self.slots) * base_xi ** sum(
            b[j - 1] for j in self.slots
        )


def _poly(*factors: tuple[Iterable[int], Iterable[int]]) -> tuple[PFactor, ...]:
    return tuple(PFactor(tuple(s), tuple(j)) for s, j in factors)


# P_1 ... P_15 of the six-parameter formula, keyed by m.
P_TABLE: dict[int, tuple[PFactor, ...]] = {
    1: _poly(({1}, {1}), ({2}, {2}), ({3}, {3})),
    2: _poly(({1}, {1}), ({1, 2}, {2}), ({2}, {3}), ({3}, {4})),
    3: _poly(({1}, {1, 3}), ({1, 2}, {2}), ({3}, {4})),
    4: _poly(({1}, {1, 3}), ({1, 2}, {2}), ({1, 3}, {4}), ({3}, {5})),
    5: _poly(({1}, {1, 3, 5}), ({1, 2}, {2}), ({1, 3}, {4})),
    6: _poly(({1}, {1}), ({2}, {2}), ({2, 3}, {3}), ({3}, {4})),
    7: _poly(({1}, {1}), ({1, 2}, {2}), ({2}, {3}), ({2, 3}, {4}), ({3}, {5})),
    8: _poly(({1}, {1}), ({1, 2}, {2}), ({1, 2, 3}, {3}), ({2, 3}, {4}), ({3}, {5})),
    9: _poly(({1}, {1}), ({1, 2}, {2}), ({1, 2, 3}, {3}), ({1, 3}, {4}), ({3}, {5})),
    10: _poly(({1}, {1, 5}), ({1, 2}, {2}), ({1, 2, 3}, {3}), ({1, 3}, {4})),
    11: _poly(({1}, {1}), ({2}, {2, 4}), ({2, 3}, {3})),
    12: _poly(({1}, {1}), ({1, 2}, {2}), ({2}, {3, 5}), ({2, 3}, {4})),
    13: _poly(({1}, {1}), ({1, 2}, {2}), ({1, 2, 3}, {3}), ({2, 3}, {4}), ({2}, {5})),
    14: _poly(({1}, {1}), ({1, 2}, {2, 4}), ({1, 2, 3}, {3}), ({2}, {5})),
    15: _poly(({1}, {1, 5}), ({1, 2}, {2, 4}), ({1, 2, 3}, {3})),
}

# Number of exponent slots each P_m uses.
P_SLOTS = {m: max(j for f in fs for j in f.slots) for m, fs in P_TABLE.items()}

# The four-parameter formula uses the same kind of polynomials.
T1_FIRST = (_poly(({1}, {1}), ({2}, {2})),)
T1_SECOND = (
    _poly(({1}, {1, 3}), ({1, 2}, {2})),
    _poly(({1}, {1}), ({1, 2}, {2}), ({2}, {3})),
)

# (pattern, number of slots, P indices) for the six-parameter right-hand side.
T2_GROUPS: tuple[tuple[BlockPattern, int, tuple[int, ...]], ...] = (
    (T2_G1, 3, (1,)),
    (T2_G2, 4, (2, 3)),
    (T2_G3, 5, (4, 5, 7, 12)),
    (T2_G4, 4, (6, 11)),
    (T2_G5, 5, (8, 9, 10, 13, 14, 15)),
)


def _eval_poly(factors, params: ParamVector, sigma, a, b) -> Fraction:
    out = Fraction(1)
    for f in factors:
        out *= f.value(params.mu, params.xi, sigma, a, b)
        if not out:
            break
    return out


def _pad(v: Sequence[int], n: int) -> tuple[int, ...]:
    v = tuple(v)
    if len(v) > n:
        raise ValueError(f"exponent vector {v} longer than {n}")
    return v + (0,) * (n - len(v))


def p_coeff(m: int, sigma: Sequence[int], a: Sequence[int], b: Sequence[int], params: ParamVector) -> Fraction:
    """Value of ``P_{m,sigma}`` at exponents ``a``, ``b``.

    ``sigma`` is a permutation of (1, 2, 3) given as the tuple
    ``(sigma(1), sigma(2), sigma(3))``.  Unused trailing exponents must be
    zero.

    >>> p = ParamVector((1, 2, 3), (5, 7, 11))
    >>> p_coeff(4, (1, 2, 3), (1, 0, 1, 0, 0), (0, 1, 0, 0, 0), p)
    Fraction(12, 1)
    """
    if m not in P_TABLE:
        raise ValueError(f"P index must be in 1..15, got {m}")
    params.require(3)
    if sorted(sigma) != [1, 2, 3]:
        raise ValueError(f"{sigma!r} is not a permutation of (1, 2, 3)")
    a, b = _pad(a, 5), _pad(b, 5)
    n = P_SLOTS[m]
    if any(a[n:]) or any(b[n:]):
        raise ValueError(f"P_{m} uses {n} exponent slots; trailing exponents must be zero")
    return _eval_poly(P_TABLE[m], params, tuple(sigma), a, b)


def coefficient(polys, params: ParamVector, a, b) -> Fraction:
    """``sum_sigma sum_{P in polys} P_sigma(a, b)`` over all permutations of the parameters."""
    total = Fraction(0)
    for sigma in itertools.permutations(range(1, params.arity + 1)):
        for factors in polys:
            total += _eval_poly(factors, params, sigma, a, b)
    return total


# ---------------------------------------------------------------------------
# right-hand-side building blocks


@lru_cache(maxsize=None)
def block_sum(pattern: BlockPattern, a: tuple[int, ...], b: tuple[int, ...]) -> MzvExpr:
    """Sum of ``zeta`` over all block choices for fixed exponent vectors.

    Block ``j`` runs over compositions of ``a_j + b_j + 1`` into ``a_j + 1``
    parts.
    """
    if len(a) != pattern.n_blocks or len(b) != pattern.n_blocks:
        raise ValueError(f"{pattern.name} needs {pattern.n_blocks} exponent slots")
    choices = [compositions(aj + bj + 1, aj + 1) for aj, bj in zip(a, b)]
    out: dict[Index, int] = defaultdict(int)
    for blocks in itertools.product(*choices):
        out[assemble(blocks, pattern)] += 1
    return MzvExpr(out)


def _accumulate(out: dict, expr: MzvExpr, scale: Fraction) -> None:
    for ix, c in expr.items():
        out[ix] += scale * c


def _exponent_pairs(k: int, l: int, slots: int):
    for a in weak_compositions(k, slots):
        for b in weak_compositions(l, slots):
            yield a, b


def _check_degrees(k: int, l: int) -> None:
    if k < 0 or l < 0:
        raise DomainError("k and l must be nonnegative")


def _lhs(k: int, l: int, params: ParamVector) -> ProductExpr:
    n = params.arity
    terms = []
    for a, b in _exponent_pairs(k, l, n):
        c = math.prod(
            (params.mu[i] ** a[i] * params.xi[i] ** b[i] for i in range(n)), start=Fraction(1)
        )
        terms.append(([(a[i] + b[i] + 2,) for i in range(n)], c))
    return ProductExpr(terms)


def t1_lhs(k: int, l: int, params: ParamVector) -> ProductExpr:
    """``sum mu1^a1 mu2^a2 xi1^b1 xi2^b2 zeta(a1+b1+2) zeta(a2+b2+2)``."""
    _check_degrees(k, l)
    return _lhs(k, l, params.require(2))


def t2_lhs(k: int, l: int, params: ParamVector) -> ProductExpr:
    """Three-factor analogue of :func:`t1_lhs`."""
    _check_degrees(k, l)
    return _lhs(k, l, params.require(3))


def _rhs(k: int, l: int, params: ParamVector, groups) -> MzvExpr:
    out: dict[Index, Fraction] = defaultdict(Fraction)
    for pattern, slots, polys in groups:
        for a, b in _exponent_pairs(k, l, slots):
            c = coefficient(polys, params, a, b)
            if c:
                _accumulate(out, block_sum(pattern, a, b), c)
    return MzvExpr(out)


def t1_rhs(k: int, l: int, params: ParamVector) -> MzvExpr:
    """Right-hand side of the four-parameter formula as an MZV combination."""
    _check_degrees(k, l)
    params.require(2)
    return _rhs(k, l, params, ((T1_A, 2, T1_FIRST), (T1_B, 3, T1_SECOND)))


def t2_rhs(k: int, l: int, params: ParamVector) -> MzvExpr:
    """Right-hand side of the six-parameter formula: five shape groups over S_3."""
    _check_degrees(k, l)
    params.require(3)
    groups = [(pattern, slots, tuple(P_TABLE[m] for m in ms)) for pattern, slots, ms in T2_GROUPS]
    return _rhs(k, l, params, groups)


def theorem_sides(which: str, k: int, l: int, params: ParamVector) -> tuple[ProductExpr, MzvExpr]:
    which = which.upper()
    if which == "T1":
        return t1_lhs(k, l, params), t1_rhs(k, l, params)
    if which == "T2":
        return t2_lhs(k, l, params), t2_rhs(k, l, params)
    raise ValueError(f"unknown theorem {which!r}; expected T1 or T2")


def verify_theorem(which: str, k: int, l: int, params: ParamVector, digits: int = 30) -> VerifyReport:
    """Evaluate both sides at ``10**-digits`` and compare within the combined bound."""
    lhs, rhs = theorem_sides(which, k, l, params)
    return compare(
        which.upper(),
        lambda t: eval_product_expr(lhs, t),
        lambda t: eval_expr(rhs, t),
        digits,
        k=k,
        l=l,
        mu=params.mu,
        xi=params.xi,
    )


# ---------------------------------------------------------------------------
# the xi1 = xi2 specialization and the Eie-Liaw-Ong weighted sum


def eq_after_sides(k: int, l: int, mu1, mu2) -> tuple[MzvExpr, MzvExpr]:
    """Both sides of the four-parameter formula after setting xi1 = xi2 and
    expanding the left-hand products by the harmonic product.

    The three-block sum runs over blocks alpha, beta and gamma; its
    constraint on the third block is the one for gamma.
    """
    _check_degrees(k, l)
    mu1, mu2 = _rational(mu1), _rational(mu2)
    lhs: dict[Index, Fraction] = defaultdict(Fraction)
    rhs: dict[Index, Fraction] = defaultdict(Fraction)

    power_sum = sum((mu1**a1 * mu2 ** (k - a1) for a1 in range(k + 1)), Fraction(0))
    lhs[Index((k + l + 4,))] += (l + 1) * power_sum
    for (a1, a2), (b1, b2) in _exponent_pairs(k, l, 2):
        c = mu1**a1 * mu2**a2 + mu2**a1 * mu1**a2
        if c:
            lhs[Index((a2 + b2 + 2, a1 + b1 + 2))] += c
            _accumulate(rhs, block_sum(T1_A, (a1, a2), (b1, b2)), c)
    for (a1, a2, a3), b in _exponent_pairs(k, l, 3):
        c = (mu1**a1 + mu2**a1) * (mu1 + mu2) ** a2 * 2 ** b[1] * (mu1**a3 + mu2**a3)
        if c:
            _accumulate(rhs, block_sum(T1_B, (a1, a2, a3), b), c)
    return MzvExpr(lhs), MzvExpr(rhs)


def verify_eq_after(k: int, l: int, mu1, mu2, digits: int = 30) -> VerifyReport:
    lhs, rhs = eq_after_sides(k, l, mu1, mu2)
    return compare(
        "eq-after",
        lambda t: eval_expr(lhs, t),
        lambda t: eval_expr(rhs, t),
        digits,
        k=k,
        l=l,
        mu=(_rational(mu1), _rational(mu2)),
    )


def elo_lhs(k: int, l: int) -> MzvExpr:
    """Weighted sum over compositions ``(a_0, ..., a_{k+1})`` of ``k+l+3``:

        sum_{j=0}^{k/2} 2^(a_{2j+1} + 1) zeta(a_0, ..., a_k, a_{k+1} + 1),

    which equals ``(2k + l + 5) zeta(k + l + 4)`` for even ``k``.

    >>> str(elo_lhs(0, 0))
    '8*z(1,3)+4*z(2,2)'
    """
    if k < 0 or l < 0:
        raise DomainError("k and l must be nonnegative")
    if k % 2:
        raise DomainError(f"k must be even, got {k}")
    out: dict[Index, Fraction] = defaultdict(Fraction)
    for alpha in compositions(k + l + 3, k + 2):
        weight = sum(2 ** (alpha[2 * j + 1] + 1) for j in range(k // 2 + 1))
        out[Index(alpha[:-1] + (alpha[-1] + 1,))] += weight
    return MzvExpr(out)


def verify_elo(k: int, l: int, digits: int = 30) -> VerifyReport:
    lhs = elo_lhs(k, l)
    rhs = MzvExpr.single((k + l + 4,), 2 * k + l + 5)
    return compare(
        "elo",
        lambda t: eval_expr(lhs, t),
        lambda t: eval_expr(rhs, t),
        digits,
        k=k,
        l=l,
    )
