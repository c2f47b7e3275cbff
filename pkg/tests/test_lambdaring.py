"""Truncated Iwasawa algebra: specializations, the cyclotomic character."""

from fractions import Fraction

import pytest

from grossstark.errors import DomainError, IndeterminateOrderError
from grossstark.lambdaring import (DEFAULT_TRUNCATION, LambdaElement,
                                   epsilon_char, nu_k, pi_normalize,
                                   topological_generator)
from grossstark.padic import PadicNumber, angle_bracket, plog


def test_nu_k_on_T():
    # nu_k(T) = u^{k-1} - 1; at k = 2 that is exactly p
    for p in (3, 5, 7):
        T = LambdaElement.variable(p, N=12)
        v = nu_k(T, 2)
        assert (v - p).is_zero_to_precision()
        assert v.valuation == 1
        assert nu_k(T, 1).exact_zero or nu_k(T, 1).is_zero_to_precision()


def test_ring_arithmetic():
    p = 5
    T = LambdaElement.variable(p, N=12)
    h = (T + 1) * (T - 1)
    want = T * T - 1
    for i in range(DEFAULT_TRUNCATION + 1):
        d = h.coeff(i) - want.coeff(i)
        assert d.exact_zero or d.is_zero_to_precision()
    # scalar coercion paths
    g = T * Fraction(1, 2) + 3
    assert g.coeff(0).residue(4) == 3
    assert g.coeff(1).residue(4) == pow(2, -1, 5 ** 4)


def test_truncation_mismatch_rejected():
    a = LambdaElement.variable(5, M=8, N=6)
    b = LambdaElement.variable(5, M=16, N=6)
    with pytest.raises(DomainError):
        a + b
    with pytest.raises(DomainError):
        LambdaElement.variable(3, N=6) * LambdaElement.variable(5, N=6)


def test_epsilon_of_generator_is_one_plus_T():
    # epsilon(u) has exponent exactly 1: coefficients (1, 1, 0, 0, ...)
    for p in (3, 5, 7):
        e = epsilon_char(topological_generator(p), p)
        assert (e.coeff(0) - 1).is_zero_to_precision()
        assert (e.coeff(1) - 1).is_zero_to_precision()
        for i in range(2, e.M + 1):
            assert e.coeff(i).is_zero_to_precision()


def test_epsilon_specializes_to_angle_bracket_power():
    N = 12
    grid = {3: (2, 5, 7), 5: (2, 3, 6), 7: (2, 3, 10)}
    for p, xs in grid.items():
        for x in xs:
            e = epsilon_char(x, p, N=N)
            for k in (1, 2, 3, 5, 1 + (p - 1)):
                got = nu_k(e, k)
                want = angle_bracket(x, p, int(got.precision) + 2) ** (k - 1)
                diff = got - want
                assert diff.exact_zero or diff.is_zero_to_precision() \
                    or diff.valuation >= N - 3, (p, x, k, diff)


def test_epsilon_locked_value():
    # nu_3(epsilon(6)) = <6>^2 at p = 5; <6> = 6/omega(6) = 6 exactly
    # (6 = 1 + 5 is already principal), so the value is 36.
    e = epsilon_char(6, 5, N=12)
    got = nu_k(e, 3)
    assert (got - 36).is_zero_to_precision() or (got - 36).valuation >= 9


def test_epsilon_is_multiplicative():
    p, N = 7, 10
    a, b = 2, 3
    ea, eb = epsilon_char(a, p, N=N), epsilon_char(b, p, N=N)
    eab = epsilon_char(a * b, p, N=N)
    prod = ea * eb
    for i in range(5):
        d = prod.coeff(i) - eab.coeff(i)
        assert d.exact_zero or d.is_zero_to_precision() or d.valuation >= N - 3


def test_epsilon_rejects_non_unit():
    with pytest.raises(DomainError):
        epsilon_char(5, 5)
    with pytest.raises(DomainError):
        epsilon_char(PadicNumber.from_exact(5, 10, 8), 5)


def test_pi_normalize_exact_order():
    # h = pi^3 * unit: order 3 comes back, leading coefficient the unit
    p, N = 5, 12
    lug = plog(PadicNumber.from_exact(p, 1 + p, N + 4))
    pi = LambdaElement(p, [PadicNumber.zero(p), lug.inverse()])
    unit = LambdaElement.constant(p, 7, N=N)
    h = pi * pi * pi * unit
    n, hp = pi_normalize(h)
    assert n == 3
    lead = hp.coeff(0)
    assert (lead - 7).is_zero_to_precision() or (lead - 7).valuation >= N - 2


def test_pi_normalize_indeterminate():
    p = 5
    tiny = PadicNumber(p, 6, 1, 6)  # O(p^6) as a value: zero to precision
    h = LambdaElement(p, [tiny.truncate(6) - tiny.truncate(6)])
    with pytest.raises(IndeterminateOrderError):
        pi_normalize(h)


def test_pi_normalize_finite_difference_bridge():
    # the leading coefficient of h = pi^n h' matches the n-th derivative
    # of k -> nu_k(h) at k = 1 read off through finite differences:
    # nu_k(h) / nu_k(pi)^n -> nu_1(h') as k -> 1 p-adically.
    p, N = 5, 12
    lug = plog(PadicNumber.from_exact(p, 1 + p, N + 6))
    pi = LambdaElement(p, [PadicNumber.zero(p), lug.inverse()])
    e = epsilon_char(3, p, N=N)
    h = (e - e.coeff(0)) * 11  # order exactly 1 in pi
    n, hp = pi_normalize(h)
    assert n == 1
    lead = hp.coeff(0)
    for m in (2, 3):
        k = 1 + p ** m
        num = nu_k(h, k)
        den = nu_k(pi, k) ** n
        fd = num / den
        diff = fd - lead
        assert diff.exact_zero or diff.is_zero_to_precision() \
            or diff.valuation >= m - 1, (m, diff)
