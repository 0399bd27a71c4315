"""Adversarial soundness of truncated Laurent arithmetic.

A truncated series stands for every exact series agreeing with it up to its
truncation order.  An operation's reported window is sound only if no choice
of hidden tail can change any reported coefficient; these tests extend the
operands with random tails and demand bit-equality on the claimed window.
"""

import random
from fractions import Fraction

from hopfalg.rings import QQ, LaurentRing, LaurentSeries

L = LaurentRing(QQ, "eps")
rng = random.Random(20240517)


def random_series(max_pole=3, max_order=3):
    coeffs = {}
    for _ in range(rng.randint(0, 5)):
        k = rng.randint(-max_pole, max_order)
        coeffs[k] = Fraction(rng.randint(-5, 5))
    return L.make(coeffs, None)


def truncate(a: LaurentSeries, trunc: int) -> LaurentSeries:
    return L.make({k: v for k, v in a.coeffs if k <= trunc}, trunc)


def extend_with_tail(a: LaurentSeries, trunc: int, width=3) -> LaurentSeries:
    coeffs = dict(a.coeffs)
    for k in range(trunc + 1, trunc + 1 + width):
        c = rng.randint(-5, 5)
        if c:
            coeffs[k] = Fraction(c)
    return L.make(coeffs, None)


def window_coeffs(a: LaurentSeries):
    assert a.trunc is not None
    return {k: v for k, v in a.coeffs if k <= a.trunc}, a.trunc


def test_mul_window_is_tail_independent():
    for _ in range(300):
        a_exact, b_exact = random_series(), random_series()
        ta, tb = rng.randint(-1, 4), rng.randint(-1, 4)
        a, b = truncate(a_exact, ta), truncate(b_exact, tb)
        got = L.mul(a, b)
        if got.trunc is None:
            continue
        reported, window = window_coeffs(got)
        for _ in range(4):
            full = L.mul(extend_with_tail(a_exact, ta), extend_with_tail(b_exact, tb))
            for k, v in full.coeffs:
                if k <= window:
                    assert reported.get(k, Fraction(0)) == v, (a, b, k)
            for k, v in reported.items():
                assert dict(full.coeffs).get(k, Fraction(0)) == v, (a, b, k)


def test_add_window_is_tail_independent():
    for _ in range(200):
        a_exact, b_exact = random_series(), random_series()
        ta, tb = rng.randint(-1, 4), rng.randint(-1, 4)
        got = L.add(truncate(a_exact, ta), truncate(b_exact, tb))
        reported, window = window_coeffs(got)
        full = L.add(extend_with_tail(a_exact, ta), extend_with_tail(b_exact, tb))
        for k, v in full.coeffs:
            if k <= window:
                assert reported.get(k, Fraction(0)) == v


def test_invert_window_is_tail_independent():
    for _ in range(200):
        a_exact = random_series()
        if L.is_zero(a_exact):
            continue
        lead = a_exact.min_exp()
        ta = rng.randint(max(lead, 0), lead + 5)
        a = truncate(a_exact, ta)
        if L.is_zero(a) or a.min_exp() != lead:
            continue
        inv = L.invert_unit(a)
        reported, window = window_coeffs(inv)
        for _ in range(4):
            full = L.invert_unit(
                extend_with_tail(a_exact, ta), to_order=window + abs(lead) + 4
            )
            for k, v in reported.items():
                assert L.coefficient(full, k) == v, (a, k)


def test_exp_window_is_tail_independent():
    for _ in range(150):
        coeffs = {}
        for _ in range(rng.randint(0, 3)):
            k = rng.randint(1, 4)
            coeffs[k] = Fraction(rng.randint(-4, 4))
        a_exact = L.make(coeffs, None)
        ta = rng.randint(1, 5)
        a = truncate(a_exact, ta)
        got = L.exp(a)
        reported, window = window_coeffs(got)
        extended = extend_with_tail(a_exact, ta)
        big = L.make(dict(extended.coeffs), window + 4)
        full = L.exp(big)
        for k, v in reported.items():
            assert L.coefficient(full, k) == v


def test_pole_part_of_truncated_input_is_exact():
    for _ in range(100):
        a_exact = random_series()
        ta = rng.randint(-1, 4)
        a = truncate(a_exact, ta)
        pole = L.pole_part(a)
        assert pole.trunc is None
        full_pole = L.pole_part(extend_with_tail(a_exact, ta))
        assert pole.as_dict() == full_pole.as_dict()
