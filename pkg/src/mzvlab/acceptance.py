"""Exit criteria for the package, runnable from pytest and from ``mzvlab selftest``.

Each criterion starts from an empty zeta cache so its timing is honest.
"""

from __future__ import annotations

import math
import random
import time
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath

from . import evaluator
from .algebra import MzvExpr, expand_products, verify_ohno, verify_sum_formula
from .evaluator import eval_expr, eval_product_expr, zeta, zeta_naive
from .indices import admissible_indices, compositions, dual, weak_compositions
from .montecarlo import mc_integral
from .theorems import (
    ParamVector,
    elo_lhs,
    random_params,
    t1_lhs,
    t1_rhs,
    t2_lhs,
    t2_rhs,
    verify_elo,
    verify_eq_after,
    verify_theorem,
)

__all__ = ["CriterionResult", "CRITERIA", "run_criterion", "run_all", "format_line"]

SEED = 20240601
MC_SEEDS = (1, 2, 3)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float
    limit: float | None
    detail: str


@contextmanager
def _fresh_cache():
    saved = evaluator.default_cache()
    evaluator.configure_cache(None)
    try:
        yield
    finally:
        evaluator._default_cache = saved


def _closed_forms() -> dict[tuple[int, ...], mpmath.mpf]:
    with mpmath.workdps(80):
        pi = mpmath.pi
        z3 = mpmath.zeta(3)
        return {
            (2,): pi**2 / 6,
            (3,): z3,
            (4,): pi**4 / 90,
            (2, 2): pi**4 / 120,
            (1, 2): z3,
            (1, 3): pi**4 / 360,
        }


def _within(result, reference: mpmath.mpf) -> bool:
    with mpmath.workdps(80):
        diff = abs(mpmath.mpf(result.value.mantissa) / mpmath.mpf(2) ** result.value.prec - reference)
        bound = mpmath.mpf(result.abs_err.numerator) / result.abs_err.denominator
        return diff <= bound


def c1_evaluator() -> tuple[bool, str]:
    forms = _closed_forms()
    target = Fraction(1, 10**30)
    bad = [ix for ix, ref in forms.items() if not _within(zeta(ix, target, cache=False), ref)]
    return not bad, f"{len(forms) - len(bad)}/{len(forms)} closed forms inside bound at 1e-30"


def c2_oracle() -> tuple[bool, str]:
    indices = [ix for w in range(2, 9) for ix in admissible_indices(w)]
    bad = []
    for ix in indices:
        fast = zeta(ix, Fraction(1, 10**20))
        slow = zeta_naive(ix, 10**6)
        if abs(fast.value.to_fraction() - slow.value.to_fraction()) > slow.abs_err:
            bad.append(str(ix))
    return not bad, f"{len(indices) - len(bad)}/{len(indices)} indices agree (cutoff 1e6)" + (
        f"; failing: {bad}" if bad else ""
    )


def c3_theorem1() -> tuple[bool, str]:
    rng = random.Random(SEED)
    runs = failures = 0
    for k in range(5):
        for l in range(5 - k):
            for _ in range(5):
                runs += 1
                failures += not verify_theorem("T1", k, l, random_params(2, rng), 25).passed
    hand = MzvExpr({(2, 2): 2, (1, 3): 4})
    ones = ParamVector((1, 1), (1, 1))
    hand_ok = t1_rhs(0, 0, ones) == hand and verify_theorem("T1", 0, 0, ones, 25).passed
    return failures == 0 and hand_ok, f"{runs - failures}/{runs} runs pass; zeta(2)^2 = {hand}: {hand_ok}"


def c4_theorem2() -> tuple[bool, str]:
    rng = random.Random(SEED + 1)
    runs = failures = 0
    for k in range(3):
        for l in range(3 - k):
            for _ in range(3):
                runs += 1
                failures += not verify_theorem("T2", k, l, random_params(3, rng), 25).passed
    hand = MzvExpr({(2, 2, 2): 6, (1, 3, 2): 12, (1, 2, 3): 24, (2, 1, 3): 12, (1, 1, 4): 36})
    ones = ParamVector((1, 1, 1), (1, 1, 1))
    with mpmath.workdps(80):
        cube = (mpmath.pi**2 / 6) ** 3
    hand_ok = t2_rhs(0, 0, ones) == hand and _within(eval_expr(hand, Fraction(1, 10**25)), cube)
    return failures == 0 and hand_ok, f"{runs - failures}/{runs} runs pass; zeta(2)^3 = {hand}: {hand_ok}"


def c5_chain() -> tuple[bool, str]:
    rng = random.Random(SEED + 2)
    vectors = [(Fraction(1), Fraction(-1))] + [random_params(2, rng).mu for _ in range(2)]
    eq_runs = eq_fail = 0
    for k in range(5):
        for l in range(5 - k):
            for mu1, mu2 in vectors:
                eq_runs += 1
                eq_fail += not verify_eq_after(k, l, mu1, mu2, 25).passed
    ohno_runs = ohno_fail = 0
    for w in range(2, 7):
        for ix in admissible_indices(w):
            for c in range(3):
                ohno_runs += 1
                ohno_fail += not verify_ohno(ix, c, 25).passed
    dual_bad = 0
    dual_count = 0
    for w in range(2, 11):
        for ix in admissible_indices(w):
            dual_count += 1
            d = dual(ix)
            dual_bad += not (dual(d) == ix and d.weight == w and d.depth == w - ix.depth)
    elo_runs = elo_fail = 0
    for k in range(0, 5, 2):
        for l in range(5 - k):
            elo_runs += 1
            elo_fail += not verify_elo(k, l, 25).passed
    exact = elo_lhs(0, 0) == MzvExpr({(1, 3): 8, (2, 2): 4})
    ok = not (eq_fail or ohno_fail or dual_bad or elo_fail) and exact
    detail = (
        f"eq-after {eq_runs - eq_fail}/{eq_runs}; ohno {ohno_runs - ohno_fail}/{ohno_runs}; "
        f"duality {dual_count - dual_bad}/{dual_count}; elo {elo_runs - elo_fail}/{elo_runs}; "
        f"8z(1,3)+4z(2,2) exact: {exact}"
    )
    return ok, detail


def c6_sum_formula() -> tuple[bool, str]:
    runs = fails = 0
    for w in range(3, 10):
        for d in range(2, w):
            runs += 1
            fails += not verify_sum_formula(w, d, 25).passed
    return fails == 0, f"{runs - fails}/{runs} (w, d) pairs pass"


def c7_stuffle() -> tuple[bool, str]:
    rng = random.Random(SEED + 3)
    target = Fraction(1, 10**25)
    runs = fails = 0
    for k in range(4):
        for l in range(4 - k):
            for lhs in (t1_lhs(k, l, random_params(2, rng)), t2_lhs(k, l, random_params(3, rng))):
                runs += 1
                direct = eval_product_expr(lhs, target)
                expanded = eval_expr(expand_products(lhs), target)
                diff = abs(direct.value.to_fraction() - expanded.value.to_fraction())
                fails += diff > direct.abs_err + expanded.abs_err
    return fails == 0, f"{runs - fails}/{runs} left-hand sides agree"


def c8_monte_carlo() -> tuple[bool, str]:
    z2 = math.pi**2 / 6
    parts = []
    ok = True
    for pairs in (2, 3):
        params = ParamVector((1,) * pairs, (1,) * pairs)
        hits = 0
        for seed in MC_SEEDS:
            r = mc_integral(0, 0, pairs, params, 10**6, seed)
            hits += abs(r.estimate - z2**pairs) <= 3 * r.stderr
        ok &= hits >= 2
        parts.append(f"pairs={pairs}: {hits}/{len(MC_SEEDS)} seeds within 3 stderr")
    return ok, "; ".join(parts)


def c9_combinatorics() -> tuple[bool, str]:
    bad = 0
    for total in range(1, 13):
        for parts in range(1, total + 1):
            bad += len(compositions(total, parts)) != math.comb(total - 1, parts - 1)
    for total in range(0, 13):
        for parts in range(1, 8):
            bad += len(weak_compositions(total, parts)) != math.comb(total + parts - 1, parts - 1)
    rng = random.Random(SEED + 4)
    shape_bad = 0
    for k in range(5):
        for l in range(5 - k):
            for ix in t1_rhs(k, l, random_params(2, rng)):
                shape_bad += not (ix.admissible and ix.weight == k + l + 4)
            if k % 2 == 0:
                for ix in elo_lhs(k, l):
                    shape_bad += not (ix.admissible and ix.weight == k + l + 4)
    for k in range(3):
        for l in range(3 - k):
            for ix in t2_rhs(k, l, random_params(3, rng)):
                shape_bad += not (ix.admissible and ix.weight == k + l + 6)
    return bad == 0 and shape_bad == 0, f"count mismatches {bad}; bad RHS indices {shape_bad}"


CRITERIA: list[tuple[int, str, float | None, Callable[[], tuple[bool, str]]]] = [
    (1, "evaluator closed forms", 1.0, c1_evaluator),
    (2, "oracle agreement", 60.0, c2_oracle),
    (3, "four-parameter formula", 120.0, c3_theorem1),
    (4, "six-parameter formula", 300.0, c4_theorem2),
    (5, "specialization chain", None, c5_chain),
    (6, "sum formula", None, c6_sum_formula),
    (7, "stuffle soundness", None, c7_stuffle),
    (8, "Monte-Carlo oracle", 120.0, c8_monte_carlo),
    (9, "combinatorial counts", None, c9_combinatorics),
]


def run_criterion(number: int) -> CriterionResult:
    for n, title, limit, fn in CRITERIA:
        if n == number:
            with _fresh_cache():
                start = time.perf_counter()
                ok, detail = fn()
                seconds = time.perf_counter() - start
            if limit is not None and seconds >= limit:
                ok = False
                detail += f"; too slow ({seconds:.1f}s >= {limit:.0f}s)"
            return CriterionResult(n, title, ok, seconds, limit, detail)
    raise KeyError(number)


def format_line(r: CriterionResult) -> str:
    limit = f" (limit {r.limit:g}s)" if r.limit is not None else ""
    status = "PASS" if r.passed else "FAIL"
    return f"[{status}] C{r.number} {r.title}: {r.detail} [{r.seconds:.2f}s{limit}]"


def run_all(echo: Callable[[str], None] | None = print) -> list[CriterionResult]:
    results = []
    for n, *_ in CRITERIA:
        r = run_criterion(n)
        results.append(r)
        if echo:
            echo(format_line(r))
    return results
