"""High-precision evaluation of multiple zeta values with rigorous error bounds.

Two independent routes are provided.

:func:`zeta` splits the iterated integral of the index's word at t = 1/2
(Hölder convolution).  With ``w = w_1 ... w_m`` the word and ``w*`` the word
of the dual index,

    zeta(w) = sum_{j=0}^{m} L(w_1 ... w_j) * L(w*_1 ... w*_{m-j})

where ``L(v)`` is the iterated integral of ``v`` from 0 to 1/2, i.e. the
multiple polylogarithm

    L(Y X^(b_1-1) ... Y X^(b_r-1)) = sum_{0<l_1<...<l_r} 2^(-l_r) / (l_1^b_1 ... l_r^b_r).

Every prefix of a word is again such a word, so all ``m`` prefix values of
``w`` (and of ``w*``) come out of one pass over ``n = 1..N``.  The arithmetic
is fixed point: integers scaled by ``2^P`` with floor division, and every
rounding is counted in ulps alongside the value, so the returned bound is a
proof rather than an estimate.

:func:`zeta_naive` truncates the defining series directly (double precision,
tail bounded by the integral test).  It is slow and inaccurate but shares no
code with :func:`zeta`, which makes it a useful oracle.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .indices import Index, dual, index_to_word

__all__ = [
    "BigReal",
    "EvalResult",
    "ZetaCache",
    "MIN_TARGET",
    "zeta",
    "zeta_naive",
    "naive_tail_bound",
    "eval_expr",
    "eval_product_expr",
    "bits_for",
    "guard_bits",
    "configure_cache",
    "default_cache",
]

# Smallest absolute error zeta() accepts.
MIN_TARGET = Fraction(1, 2**2000)

# ln 2 < 0.6932, so ln n < 0.6932 * n.bit_length() for every n >= 1.
_LN2_UPPER = Fraction(6932, 10000)


@dataclass(frozen=True)
class BigReal:
    """The dyadic number ``mantissa * 2**-prec``."""

    mantissa: int
    prec: int

    @classmethod
    def from_fraction(cls, q: Fraction, prec: int) -> "BigReal":
        """Round ``q`` down to ``prec`` fractional bits (error < 2**-prec)."""
        q = Fraction(q)
        return cls((q.numerator << prec) // q.denominator, prec)

    def to_fraction(self) -> Fraction:
        return Fraction(self.mantissa, 1 << self.prec)

    def __float__(self) -> float:
        return self.mantissa / (1 << self.prec) if self.prec < 1000 else float(self.to_fraction())

    def _align(self, other: "BigReal") -> tuple[int, int, int]:
        prec = max(self.prec, other.prec)
        return self.mantissa << (prec - self.prec), other.mantissa << (prec - other.prec), prec

    def __add__(self, other: "BigReal") -> "BigReal":
        a, b, prec = self._align(other)
        return BigReal(a + b, prec)

    def __sub__(self, other: "BigReal") -> "BigReal":
        a, b, prec = self._align(other)
        return BigReal(a - b, prec)

    def __neg__(self) -> "BigReal":
        return BigReal(-self.mantissa, self.prec)

    def exact_decimal(self) -> str:
        """The exact decimal expansion, always with ``prec`` fractional digits."""
        return _exact_decimal(self.mantissa, self.prec)

    def decimal(self, digits: int) -> str:
        """Decimal string truncated toward zero after ``digits`` fractional digits."""
        sign = "-" if self.mantissa < 0 else ""
        scaled = (abs(self.mantissa) * 10**digits) >> self.prec
        whole, frac = divmod(scaled, 10**digits)
        return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"

    @classmethod
    def parse_exact(cls, text: str) -> "BigReal":
        """Inverse of :meth:`exact_decimal`."""
        sign = -1 if text.startswith("-") else 1
        whole, _, frac = text.lstrip("+-").partition(".")
        prec = len(frac)
        scaled = int(whole + frac)
        mantissa, rem = divmod(scaled << prec, 10**prec)
        if rem:
            raise ValueError(f"{text!r} is not a dyadic rational with {prec} bits")
        return cls(sign * mantissa, prec)


def _exact_decimal(mantissa: int, prec: int) -> str:
    sign = "-" if mantissa < 0 else ""
    scaled = abs(mantissa) * 5**prec
    whole, frac = divmod(scaled, 10**prec)
    return f"{sign}{whole}.{frac:0{prec}d}" if prec else f"{sign}{whole}"


@dataclass(frozen=True)
class EvalResult:
    """A value together with a proven bound on ``|value - true value|``."""

    value: BigReal
    abs_err: Fraction

    def __float__(self) -> float:
        return float(self.value)

    def contains(self, x: Fraction | float) -> bool:
        return abs(self.value.to_fraction() - Fraction(x)) <= self.abs_err


# ---------------------------------------------------------------------------
# precision bookkeeping


def bits_for(target: Fraction) -> int:
    """Smallest ``b >= 1`` with ``2**-b <= target``."""
    target = Fraction(target)
    if target <= 0:
        raise ValueError("target error must be positive")
    num, den = target.numerator, target.denominator
    b = max(1, (den // num).bit_length() - 1)
    while (num << b) < den:
        b += 1
    while b > 1 and (num << (b - 1)) >= den:
        b -= 1
    return b


def guard_bits(n_terms: int, word_length: int) -> int:
    """Extra fixed-point bits so the counted rounding stays under the target.

    Each prefix value accumulates about one ulp per summation step, and the
    convolution adds ``word_length + 1`` products of two such values, so the
    worst case is roughly ``2 (word_length + 1) n_terms`` ulps.
    """
    return (2 * (word_length + 1) * n_terms).bit_length() + 2


def _series_length(bits: int, word_length: int) -> int:
    # The prefix tails decay like 2^-N times a log-power factor of at most
    # ~2^(2m); the extra bits also cover the split among m+1 products.
    return bits + 2 * word_length + (word_length + 1).bit_length() + 8


# ---------------------------------------------------------------------------
# the convolution algorithm


def _word_blocks(word: str) -> list[int]:
    return [len(block) + 1 for block in word.split("Y")[1:]]


def _harmonic_upper(n: int) -> Fraction:
    """Upper bound for H_n = 1 + 1/2 + ... + 1/n (and for H_0 = 0)."""
    return 1 + _LN2_UPPER * n.bit_length()


def _prefix_tail(block: int, exponent: int, cutoff: int) -> Fraction:
    """Bound on sum_{n > cutoff} 2^-n n^-exponent H_{block-1}(n-1).

    ``H_{i}(n)`` is the nested harmonic-type sum over the first ``i`` blocks
    up to ``n``.  It is at most ``H_n^i / i!`` (every exponent is >= 1), and
    for ``n >= M = cutoff + 1`` we have ``H_{n-1} <= h + (n - M)/M`` with
    ``h >= H_{M-1}``.  Writing ``n = M + t`` and ``c = i / (h M)``,

        (h + t/M)^i <= h^i e^(c t) <= h^i (1 - c)^(-t),

    so the tail is at most ``2^-M h^i / (i! M^e) / (1 - 1/(2(1-c)))`` as long
    as ``c < 1/2``.
    """
    i = block - 1
    m = cutoff + 1
    h = _harmonic_upper(cutoff)
    c = Fraction(i) / (h * m)
    if c >= Fraction(1, 2):
        raise ValueError("series cutoff too small for the tail bound")
    geometric = 1 / (1 - 1 / (2 * (1 - c)))
    return Fraction(h**i, factorial(i) * m**exponent * (1 << m)) * geometric


def _prefix_values(word: str, prec: int, cutoff: int) -> list[tuple[int, Fraction]]:
    """Fixed-point values and error bounds of L(word[:j]) for j = 1..len(word).

    Values are integers scaled by ``2**prec``; errors are exact rationals
    (counted floor roundings plus the series tail).
    """
    blocks = _word_blocks(word)
    # (block number, partial exponent) for every prefix
    shape = []
    for b, size in enumerate(blocks, start=1):
        shape.extend((b, e) for e in range(1, size + 1))

    depth = len(blocks)
    one = 1 << prec
    harm = [one] + [0] * (depth - 1)
    harm_err = [0] * depth  # ulps
    acc = [0] * len(shape)
    acc_err = [0] * len(shape)

    for n in range(1, cutoff + 1):
        powers = {}
        for j, (b, e) in enumerate(shape):
            den = powers.get(e)
            if den is None:
                den = powers[e] = (n**e) << n
            acc[j] += harm[b - 1] // den
            acc_err[j] += -(-harm_err[b - 1] // den) + 1
        for i in range(depth - 1, 0, -1):
            den = n ** blocks[i - 1]
            harm[i] += harm[i - 1] // den
            harm_err[i] += -(-harm_err[i - 1] // den) + 1

    out = []
    for j, (b, e) in enumerate(shape):
        err = Fraction(acc_err[j], one) + _prefix_tail(b, e, cutoff)
        out.append((acc[j], err))
    return out


def _convolve(index: Index, bits: int) -> EvalResult:
    word = index_to_word(index)
    dual_word = index_to_word(dual(index))
    m = len(word)
    cutoff = _series_length(bits, m)
    prec = bits + guard_bits(cutoff, m)
    target = Fraction(1, 1 << bits)
    while True:
        one = 1 << prec
        left = [(one, Fraction(0))] + _prefix_values(word, prec, cutoff)
        right = [(one, Fraction(0))] + _prefix_values(dual_word, prec, cutoff)
        total = 0
        err = Fraction(0)
        for j in range(m + 1):
            a, ea = left[j]
            b, eb = right[m - j]
            total += a * b
            err += ea * Fraction(abs(b), one) + eb * Fraction(abs(a), one) + ea * eb
        mantissa = total >> prec
        err += Fraction(1, one)
        if err <= target:
            break
        cutoff += 16
        prec += 8
    # Round the bound up to a dyadic so it serializes exactly.
    err_ulps = -(-(err.numerator << prec) // err.denominator)
    return EvalResult(BigReal(mantissa, prec), Fraction(err_ulps, 1 << prec))


# ---------------------------------------------------------------------------
# cache


class ZetaCache:
    """Memo of ``zeta`` results keyed by ``(index, bits)``.

    With a path, entries are loaded from and appended to a UTF-8 file of
    lines ``index;bits;decimal_value;decimal_err``.  Values are stored as
    exact decimal expansions, so a cache hit returns exactly what a fresh
    computation would.
    """

    def __init__(self, path: str | os.PathLike | None = None):
        self._data: dict[tuple[Index, int], EvalResult] = {}
        self._lock = threading.Lock()
        self.path = Path(path) if path else None
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self):
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    idx, bits, value, err = line.split(";")
                    key = (Index.parse(idx), int(bits))
                    result = EvalResult(
                        BigReal.parse_exact(value), BigReal.parse_exact(err).to_fraction()
                    )
                except ValueError:
                    continue
                self._data[key] = result

    def get(self, index: Index, bits: int) -> EvalResult | None:
        return self._data.get((index, bits))

    def put(self, index: Index, bits: int, result: EvalResult) -> None:
        with self._lock:
            if (index, bits) in self._data:
                return
            self._data[(index, bits)] = result
            if self.path is not None:
                err = BigReal.from_fraction(result.abs_err, result.value.prec)
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(
                        f"{index};{bits};{result.value.exact_decimal()};{err.exact_decimal()}\n"
                    )

    def clear(self) -> None:
        with self._lock:
            self._data.clear()

    def __len__(self) -> int:
        return len(self._data)


_default_cache = ZetaCache()


def default_cache() -> ZetaCache:
    return _default_cache


def configure_cache(path: str | os.PathLike | None) -> ZetaCache:
    """Replace the process-wide cache (optionally backed by a file)."""
    global _default_cache
    _default_cache = ZetaCache(path)
    return _default_cache


# ---------------------------------------------------------------------------
# public evaluation API


def zeta(
    index: Sequence[int],
    target_abs_err: Fraction | float = Fraction(1, 10**30),
    *,
    cache: ZetaCache | None | bool = None,
) -> EvalResult:
    """Evaluate ``zeta(index)`` with ``abs_err <= target_abs_err``.

    The target is rounded down to a power of two, so results are a function
    of ``(index, bits_for(target))`` only.  ``cache=False`` bypasses the
    memo; ``None`` uses the process-wide one.

    >>> r = zeta((2,), Fraction(1, 10**20))
    >>> r.value.decimal(15)
    '1.644934066848226'
    """
    index = (index if isinstance(index, Index) else Index(index)).require_admissible()
    target = Fraction(target_abs_err)
    if target < MIN_TARGET:
        raise ValueError("target_abs_err below the supported floor of 2**-2000")
    bits = bits_for(target)
    # an empty ZetaCache is falsy (it has __len__), so test identity explicitly
    memo = _default_cache if cache is None else (None if cache is False else cache)
    if memo is not None:
        hit = memo.get(index, bits)
        if hit is not None:
            return hit
    result = _convolve(index, bits)
    if memo is not None:
        memo.put(index, bits, result)
    return result


def naive_tail_bound(index: Sequence[int], cutoff: int) -> Fraction:
    """Bound on the part of the defining series with largest variable > cutoff.

    For the index ``(a_1, ..., a_n)`` let ``s = a_n``, let ``r`` be the number
    of entries equal to 1 among ``a_1..a_{n-1}`` and ``K`` the product of
    ``1 + 1/(a_i - 1)`` over the others (an integral-test bound on each
    ``zeta(a_i)``).  Dropping the ordering between those two groups,

        S_{n-1}(L-1) <= K H_{L-1}^r / r! <= K (1 + ln L)^r / r!,

    so the tail is at most ``K/r! * sum_{L > N} f(L)`` with
    ``f(x) = (1 + ln x)^r x^-s``.  ``f`` decreases once ``1 + ln x >= r/s``;
    from that point ``N0 >= N`` on, the sum is bounded by the integral

        int_{N0}^inf f = r! N0^(1-s) / (s-1)^(r+1) * sum_{j<=r} z^j / j!,
        z = (s - 1)(1 + ln N0),

    and the terms in ``(N, N0]`` (at least one) are added explicitly.  Logarithms are
    taken in floating point and the final bound is inflated by 1e-9
    relative, which dominates their rounding.
    """
    index = (index if isinstance(index, Index) else Index(index)).require_admissible()
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    s = index[-1]
    head = index[:-1]
    r = sum(1 for a in head if a == 1)
    k_factor = math.prod(1 + 1 / (a - 1) for a in head if a >= 2)

    def f(x: float) -> float:
        return (1 + math.log(x)) ** r * x ** (-s)

    n0 = cutoff + 1
    while 1 + math.log(n0) < r / s:
        n0 += 1
    finite = sum(f(n) for n in range(cutoff + 1, n0 + 1))
    z = (s - 1) * (1 + math.log(n0))
    integral = (
        factorial(r) * n0 ** (1 - s) / (s - 1) ** (r + 1)
        * sum(z**j / factorial(j) for j in range(r + 1))
    )
    bound = k_factor / factorial(r) * (finite + integral)
    return Fraction(bound * (1 + 1e-9))


_UNIT_ROUNDOFF = Fraction(1, 2**53)


def _gamma(k: int) -> Fraction:
    """Upper bound for (1 + u)^k - 1 in binary64."""
    ku = k * _UNIT_ROUNDOFF
    return ku / (1 - ku)


def zeta_naive(index: Sequence[int], cutoff: int) -> EvalResult:
    """Partial sum of the defining series over ``l_n <= cutoff``.

    Nested partial sums ``S_i(n)`` (sum over ``l_1 < ... < l_i <= n``) are
    built level by level with cumulative sums.  ``abs_err`` adds
    :func:`naive_tail_bound` to a bound on the floating-point rounding.  All
    summands are positive, so a relative bound per level suffices: level
    ``i`` costs ``a_i`` roundings for the reciprocal power, one for the
    product and ``cutoff - 1`` for the running sum.
    """
    index = (index if isinstance(index, Index) else Index(index)).require_admissible()
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    n = np.arange(1, cutoff + 1, dtype=np.float64)
    recip = 1.0 / n
    prev = np.ones(cutoff, dtype=np.float64)  # S_0(n - 1) = 1
    rel = Fraction(0)
    level = None
    for a in index:
        factor = recip.copy()
        for _ in range(a - 1):
            factor *= recip
        level = np.cumsum(prev * factor)
        step = _gamma(a + 1 + cutoff - 1)
        rel = rel + step + rel * step
        prev = np.concatenate(([0.0], level[:-1]))
    value = Fraction(float(level[-1]))
    rounding = rel * value / (1 - rel)
    prec = 64
    big = BigReal.from_fraction(value, prec)
    err = rounding + Fraction(1, 1 << prec) + naive_tail_bound(index, cutoff)
    return EvalResult(big, err)


def _round_sum(total: Fraction, err: Fraction, target: Fraction) -> EvalResult:
    prec = bits_for(target / 4)
    big = BigReal.from_fraction(total, prec)
    return EvalResult(big, err + Fraction(1, 1 << prec))


def eval_expr(expr: Mapping[Index, Fraction], target_abs_err: Fraction | float) -> EvalResult:
    """Evaluate ``sum c_i zeta(index_i)`` with total bound <= target.

    Every term gets the same absolute budget ``target / (2 sum |c_i|)`` so
    that repeated indices share cache entries; the final rounding takes at
    most another quarter of the target.
    """
    target = Fraction(target_abs_err)
    terms = [(Index(ix), Fraction(c)) for ix, c in expr.items() if c]
    if not terms:
        return EvalResult(BigReal(0, 0), Fraction(0))
    scale = sum(abs(c) for _, c in terms)
    budget = target / (2 * scale)
    total = Fraction(0)
    err = Fraction(0)
    for ix, c in terms:
        r = zeta(ix, budget)
        total += c * r.value.to_fraction()
        err += abs(c) * r.abs_err
    return _round_sum(total, err, target)


def _product_bound(values: list[Fraction], errs: list[Fraction]) -> Fraction:
    upper = math.prod((abs(v) + e for v, e in zip(values, errs)), start=Fraction(1))
    return upper - math.prod((abs(v) for v in values), start=Fraction(1))


def eval_product_expr(
    expr: Mapping[Sequence[Index], Fraction], target_abs_err: Fraction | float
) -> EvalResult:
    """Evaluate ``sum c_j prod_{x in M_j} zeta(x)`` with total bound <= target.

    For a product the bound is ``prod(|v_i| + e_i) - prod |v_i|``, computed
    from the actual factor values and bounds.  Factor precision starts from
    the assumption ``|zeta| < 2`` and is tightened until the bound fits.
    """
    target = Fraction(target_abs_err)
    terms = [(tuple(Index(ix) for ix in key), Fraction(c)) for key, c in expr.items() if c]
    if not terms:
        return EvalResult(BigReal(0, 0), Fraction(0))
    scale = sum(abs(c) for _, c in terms)
    budget = target / (2 * scale)
    total = Fraction(0)
    err = Fraction(0)
    for factors, c in terms:
        r = len(factors)
        factor_target = budget / (r * 3**r)
        while True:
            results = [zeta(ix, factor_target) for ix in factors]
            values = [res.value.to_fraction() for res in results]
            bound = _product_bound(values, [res.abs_err for res in results])
            if bound <= budget:
                break
            factor_target /= 16
        total += c * math.prod(values, start=Fraction(1))
        err += abs(c) * bound
    return _round_sum(total, err, target)
