"""Verification reports shared by the identity checks and the CLI."""

from __future__ import annotations

import decimal
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .evaluator import EvalResult

__all__ = ["VerifyReport", "compare", "fraction_text", "sci"]


def fraction_text(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def sci(q: Fraction, digits: int = 6) -> str:
    """Scientific-notation string for a (possibly tiny) nonnegative rational."""
    q = Fraction(q)
    if q == 0:
        return "0"
    ctx = decimal.Context(prec=digits, Emin=-999999, Emax=999999)
    d = ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))
    return f"{d:.{digits - 1}e}"


@dataclass
class VerifyReport:
    """Outcome of one numerical identity check.

    ``passed`` holds exactly when ``abs_diff <= bound``; ``bound`` is the sum
    of the two sides' proven error bounds.
    """

    identity: str
    digits: int
    lhs: EvalResult
    rhs: EvalResult
    abs_diff: Fraction
    bound: Fraction
    passed: bool
    elapsed_ms: float
    k: int | None = None
    l: int | None = None
    mu: Sequence[Fraction] = field(default_factory=tuple)
    xi: Sequence[Fraction] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        shown = self.digits + 5
        return {
            "identity": self.identity,
            "k": self.k,
            "l": self.l,
            "mu": [fraction_text(m) for m in self.mu],
            "xi": [fraction_text(x) for x in self.xi],
            "digits": self.digits,
            "lhs": self.lhs.value.decimal(shown),
            "rhs": self.rhs.value.decimal(shown),
            "abs_diff": sci(self.abs_diff),
            "bound": sci(self.bound),
            "pass": self.passed,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def compare(
    identity: str,
    lhs: Callable[[Fraction], EvalResult],
    rhs: Callable[[Fraction], EvalResult],
    digits: int,
    **context,
) -> VerifyReport:
    """Evaluate both sides at ``10**-digits`` each and compare them."""
    start = time.perf_counter()
    target = Fraction(1, 10**digits)
    left = lhs(target)
    right = rhs(target)
    diff = abs(left.value.to_fraction() - right.value.to_fraction())
    bound = left.abs_err + right.abs_err
    elapsed = (time.perf_counter() - start) * 1000
    return VerifyReport(
        identity=identity,
        digits=digits,
        lhs=left,
        rhs=right,
        abs_diff=diff,
        bound=bound,
        passed=diff <= bound,
        elapsed_ms=elapsed,
        **context,
    )
