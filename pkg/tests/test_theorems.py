import itertools
import math
import random
from fractions import Fraction

import pytest

from mzvlab.algebra import MzvExpr, expand_products
from mzvlab.evaluator import eval_expr, eval_product_expr
from mzvlab.indices import T2_G1, T2_G2, T2_G3, T2_G4, T2_G5, weak_compositions
from mzvlab.theorems import (
    P_SLOTS,
    P_TABLE,
    T2_GROUPS,
    DomainError,
    ParamVector,
    ParameterError,
    _rhs,
    elo_lhs,
    eq_after_sides,
    p_coeff,
    random_params,
    t1_lhs,
    t1_rhs,
    t2_lhs,
    t2_rhs,
    verify_elo,
    verify_eq_after,
    verify_theorem,
)


# ---------------------------------------------------------------------------
# golden table: each coefficient polynomial written out longhand.
# x = (x1, x2, x3) are the parameters already permuted by sigma, a the exponents.

def _half(m):
    return {
        1: lambda x, a: x[0] ** a[0] * x[1] ** a[1] * x[2] ** a[2],
        2: lambda x, a: x[0] ** a[0] * (x[0] + x[1]) ** a[1] * x[1] ** a[2] * x[2] ** a[3],
        3: lambda x, a: x[0] ** (a[0] + a[2]) * (x[0] + x[1]) ** a[1] * x[2] ** a[3],
        4: lambda x, a: x[0] ** (a[0] + a[2]) * (x[0] + x[1]) ** a[1] * (x[0] + x[2]) ** a[3] * x[2] ** a[4],
        5: lambda x, a: x[0] ** (a[0] + a[2] + a[4]) * (x[0] + x[1]) ** a[1] * (x[0] + x[2]) ** a[3],
        6: lambda x, a: x[0] ** a[0] * x[1] ** a[1] * (x[1] + x[2]) ** a[2] * x[2] ** a[3],
        7: lambda x, a: x[0] ** a[0] * (x[0] + x[1]) ** a[1] * x[1] ** a[2] * (x[1] + x[2]) ** a[3] * x[2] ** a[4],
        8: lambda x, a: x[0] ** a[0] * (x[0] + x[1]) ** a[1] * (x[0] + x[1] + x[2]) ** a[2] * (x[1] + x[2]) ** a[3] * x[2] ** a[4],
        9: lambda x, a: x[0] ** a[0] * (x[0] + x[1]) ** a[1] * (x[0] + x[1] + x[2]) ** a[2] * (x[0] + x[2]) ** a[3] * x[2] ** a[4],
        10: lambda x, a: x[0] ** (a[0] + a[4]) * (x[0] + x[1]) ** a[1] * (x[0] + x[1] + x[2]) ** a[2] * (x[0] + x[2]) ** a[3],
        11: lambda x, a: x[0] ** a[0] * x[1] ** (a[1] + a[3]) * (x[1] + x[2]) ** a[2],
        12: lambda x, a: x[0] ** a[0] * (x[0] + x[1]) ** a[1] * x[1] ** (a[2] + a[4]) * (x[1] + x[2]) ** a[3],
        13: lambda x, a: x[0] ** a[0] * (x[0] + x[1]) ** a[1] * (x[0] + x[1] + x[2]) ** a[2] * (x[1] + x[2]) ** a[3] * x[1] ** a[4],
        14: lambda x, a: x[0] ** a[0] * (x[0] + x[1]) ** (a[1] + a[3]) * (x[0] + x[1] + x[2]) ** a[2] * x[1] ** a[4],
        15: lambda x, a: x[0] ** (a[0] + a[4]) * (x[0] + x[1]) ** (a[1] + a[3]) * (x[0] + x[1] + x[2]) ** a[2],
    }[m]


def golden(m, sigma, a, b, params):
    mu = [params.mu[s - 1] for s in sigma]
    xi = [params.xi[s - 1] for s in sigma]
    f = _half(m)
    return f(mu, a) * f(xi, b)


def test_p_table_matches_longhand():
    rng = random.Random(7)
    for m in range(1, 16):
        n = P_SLOTS[m]
        for _ in range(40):
            params = random_params(3, rng)
            sigma = rng.choice(list(itertools.permutations((1, 2, 3))))
            a = tuple(rng.randint(0, 3) for _ in range(n)) + (0,) * (5 - n)
            b = tuple(rng.randint(0, 3) for _ in range(n)) + (0,) * (5 - n)
            assert p_coeff(m, sigma, a, b, params) == golden(m, sigma, a, b, params), (m, sigma, a, b)


def test_p_slots():
    assert P_SLOTS == {1: 3, 2: 4, 3: 4, 4: 5, 5: 5, 6: 4, 7: 5, 8: 5, 9: 5, 10: 5, 11: 4, 12: 5, 13: 5, 14: 5, 15: 5}
    assert [(p.name, n, ms) for p, n, ms in T2_GROUPS] == [
        ("T2-G1", 3, (1,)),
        ("T2-G2", 4, (2, 3)),
        ("T2-G3", 5, (4, 5, 7, 12)),
        ("T2-G4", 4, (6, 11)),
        ("T2-G5", 5, (8, 9, 10, 13, 14, 15)),
    ]
    for pattern, n, ms in T2_GROUPS:
        assert pattern.n_blocks == n and all(P_SLOTS[m] == n for m in ms)


def test_p_coeff_example_and_errors():
    p = ParamVector((1, 2, 3), (5, 7, 11))
    assert p_coeff(4, (1, 2, 3), (1, 0, 1, 0, 0), (0, 1, 0, 0, 0), p) == 12
    with pytest.raises(ValueError):
        p_coeff(16, (1, 2, 3), (0,) * 5, (0,) * 5, p)
    with pytest.raises(ValueError):
        p_coeff(1, (1, 1, 3), (0,) * 5, (0,) * 5, p)
    with pytest.raises(ValueError):
        p_coeff(1, (1, 2, 3), (0, 0, 0, 1, 0), (0,) * 5, p)


def test_param_vector():
    p = ParamVector.parse("2,-3/2", "1/2,5")
    assert p.mu == (2, Fraction(-3, 2)) and p.arity == 2
    with pytest.raises(ParameterError):
        ParamVector.parse("1,2", "1")
    with pytest.raises(TypeError):
        ParamVector((0.5, 1), (1, 1))
    with pytest.raises(ParameterError):
        ParamVector.parse("1,x", "1,1")
    with pytest.raises(ParameterError):
        p.require(3)
    rng = random.Random(0)
    for _ in range(50):
        q = random_params(3, rng)
        assert any(q.mu) and any(q.xi)
        assert all(abs(x) <= 9 and x.denominator <= 4 for x in q.mu + q.xi)


def test_sides_at_origin():
    ones2 = ParamVector((1, 1), (1, 1))
    assert str(t1_lhs(0, 0, ones2)) == "1*z(2)*z(2)"
    assert t1_rhs(0, 0, ones2) == MzvExpr({(2, 2): 2, (1, 3): 4})
    ones3 = ParamVector((1, 1, 1), (1, 1, 1))
    assert t2_rhs(0, 0, ones3) == MzvExpr(
        {(2, 2, 2): 6, (1, 3, 2): 12, (1, 2, 3): 24, (2, 1, 3): 12, (1, 1, 4): 36}
    )


def test_lhs_coefficients():
    p = ParamVector((2, 3), (5, 7))
    lhs = t1_lhs(1, 1, p)
    # mu1 xi1 z(4) z(2) + mu1 xi2 z(3) z(3) + mu2 xi1 z(3) z(3) + mu2 xi2 z(2) z(4)
    assert lhs[((2,), (4,))] == 2 * 5 + 3 * 7
    assert lhs[((3,), (3,))] == 2 * 7 + 3 * 5
    assert len(t2_lhs(2, 1, ParamVector((1, 2, 3), (1, 1, 1)))) > 0


def test_theorem_rhs_weights():
    rng = random.Random(3)
    for k in range(4):
        for l in range(4 - k):
            assert t1_rhs(k, l, random_params(2, rng)).weights() <= {k + l + 4}
    for k in range(3):
        for l in range(3 - k):
            assert t2_rhs(k, l, random_params(3, rng)).weights() <= {k + l + 6}


@pytest.mark.parametrize("k,l", [(0, 0), (1, 0), (0, 1), (2, 1), (1, 3)])
def test_t1_verifies(k, l):
    rng = random.Random(100 + 10 * k + l)
    assert verify_theorem("T1", k, l, random_params(2, rng), 25).passed


@pytest.mark.parametrize("k,l", [(0, 0), (1, 0), (0, 1), (1, 1)])
def test_t2_verifies(k, l):
    rng = random.Random(200 + 10 * k + l)
    assert verify_theorem("T2", k, l, random_params(3, rng), 25).passed


def _polynomial_points(arity, k, l):
    """Enough random parameter points to pin down a polynomial of the theorem's degree."""
    return (k + 1) * (l + 1) * math.comb(arity + 1, 2) + 1


def test_t1_exact_as_polynomial_identity():
    # After harmonic expansion both sides are MZV combinations; compare them
    # at many parameter points numerically to certify the rational identity.
    rng = random.Random(11)
    k, l = 1, 1
    target = Fraction(1, 10**20)
    for _ in range(_polynomial_points(2, k, l)):
        p = random_params(2, rng)
        lhs = eval_expr(expand_products(t1_lhs(k, l, p)), target)
        rhs = eval_expr(t1_rhs(k, l, p), target)
        assert abs(lhs.value.to_fraction() - rhs.value.to_fraction()) <= lhs.abs_err + rhs.abs_err


# ---------------------------------------------------------------------------
# mutations must be caught


def _check(lhs, rhs, digits=25):
    t = Fraction(1, 10**digits)
    a, b = eval_product_expr(lhs, t), eval_expr(rhs, t)
    return abs(a.value.to_fraction() - b.value.to_fraction()) <= a.abs_err + b.abs_err


def _t2_variant(k, l, params, groups):
    return _rhs(k, l, params, [(pat, n, tuple(P_TABLE[m] for m in ms)) for pat, n, ms in groups])


@pytest.mark.parametrize("drop", [1, 3, 5, 11, 15])
def test_dropping_a_polynomial_is_detected(drop):
    p = ParamVector((1, 2, -1), (Fraction(1, 2), 3, 1))
    groups = [(pat, n, tuple(m for m in ms if m != drop)) for pat, n, ms in T2_GROUPS]
    assert _check(t2_lhs(1, 1, p), _t2_variant(1, 1, p, T2_GROUPS))
    assert not _check(t2_lhs(1, 1, p), _t2_variant(1, 1, p, groups))


def test_swapping_patterns_is_detected():
    p = ParamVector((1, 2, -1), (Fraction(1, 2), 3, 1))
    swapped = [
        (T2_G5 if pat is T2_G3 else T2_G3 if pat is T2_G5 else pat, n, ms)
        for pat, n, ms in T2_GROUPS
    ]
    assert not _check(t2_lhs(1, 0, p), _t2_variant(1, 0, p, swapped))


def test_perturbed_coefficient_is_detected():
    p = ParamVector((2, 3), (5, 7))
    rhs = t1_rhs(1, 1, p)
    ix = next(iter(rhs))
    bumped = rhs + MzvExpr.single(ix, Fraction(1, 1000))
    assert not _check(t1_lhs(1, 1, p), bumped)


def test_theorem_errors():
    with pytest.raises(ParameterError):
        t1_lhs(0, 0, ParamVector((1, 1, 1), (1, 1, 1)))
    with pytest.raises(DomainError):
        t1_rhs(-1, 0, ParamVector((1, 1), (1, 1)))
    with pytest.raises(ValueError):
        verify_theorem("T3", 0, 0, ParamVector((1, 1), (1, 1)))


# ---------------------------------------------------------------------------
# specializations


def test_eq_after():
    for k in range(3):
        for l in range(3 - k):
            assert verify_eq_after(k, l, 1, -1, 25).passed
            assert verify_eq_after(k, l, Fraction(2, 3), 5, 25).passed
    lhs, rhs = eq_after_sides(0, 0, 1, 1)
    assert lhs.weights() == rhs.weights() == {4}


def test_elo():
    assert elo_lhs(0, 0) == MzvExpr({(1, 3): 8, (2, 2): 4})
    for k in (0, 2):
        for l in range(3):
            assert verify_elo(k, l, 25).passed
    with pytest.raises(DomainError):
        elo_lhs(1, 0)
    with pytest.raises(DomainError):
        elo_lhs(0, -1)


def test_elo_matches_specialized_t1():
    # (mu1, mu2, xi1, xi2) = (1, -1, 1, 1) in the harmonic-expanded four-parameter formula
    lhs, rhs = eq_after_sides(2, 1, 1, -1)
    t = Fraction(1, 10**25)
    a, b = eval_expr(lhs, t), eval_expr(rhs, t)
    assert abs(a.value.to_fraction() - b.value.to_fraction()) <= a.abs_err + b.abs_err
