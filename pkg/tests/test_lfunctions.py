"""Kubota-Leopoldt series: interpolation, trivial zeros, derivatives."""

from fractions import Fraction

import pytest

from grossstark.characters import DirichletCharacter
from grossstark.errors import (DomainError, PoleError, UnsupportedPoleError)
from grossstark.lfunctions import (LSeriesInstance, analytic_invariant,
                                   classical_L_at_nonpositive, kubota_leopoldt,
                                   lp_derivative_at_0, lstar, order_probe)
from grossstark.padic import PadicNumber


def chi(d):
    return DirichletCharacter.quadratic(d)


# -- classical values (exact Bernoulli oracle) ------------------------------

def test_classical_values_binding():
    assert classical_L_at_nonpositive(chi(-3), 0) == Fraction(1, 3)
    assert classical_L_at_nonpositive(chi(-4), 0) == Fraction(1, 2)
    assert classical_L_at_nonpositive(chi(-4), -2) == Fraction(-1, 2)
    # zeta(-1) = -1/12, zeta(0) has a pole guard
    one = DirichletCharacter.trivial()
    assert classical_L_at_nonpositive(one, -1) == Fraction(-1, 12)
    with pytest.raises(PoleError):
        classical_L_at_nonpositive(one, 0)


def test_classical_rejects_positive_s():
    with pytest.raises(DomainError):
        classical_L_at_nonpositive(chi(-3), 1)


def test_lstar_euler_factor():
    # L*(chi, n) = (1 - chi(p) p^{-n}) L(chi, n) at n = 0: factor (1 - chi(p))
    assert lstar(chi(-3), 0, 5) == Fraction(2, 3)      # chi_{-3}(5) = -1
    assert lstar(chi(-3), 0, 7) == 0                   # chi_{-3}(7) = 1: trivial zero
    assert lstar(chi(-4), 0, 5) == 0                   # split
    assert lstar(chi(-4), 0, 7) == Fraction(1)         # inert: (1+1)*1/2


# -- interpolation ----------------------------------------------------------

def test_interpolation_against_exact_values():
    # small but genuinely cross-checked grid; acceptance runs the full one
    N = 12
    for p in (3, 5, 7):
        for d in (-4, -7):
            c = chi(d)
            inst = LSeriesInstance(p, c, N)
            for n in (0, -1, -2):
                series = kubota_leopoldt(inst, n)
                exact = lstar(c.teichmuller_twist(n, p), n, p,
                              prec=series.precision + 4)
                diff = series - exact
                assert diff.exact_zero or diff.is_zero_to_precision() \
                    or diff.valuation >= N - 2, (p, d, n, diff)


def test_kubota_leopoldt_at_padic_argument():
    p, N = 5, 10
    inst = LSeriesInstance(p, chi(-4), N)
    s = PadicNumber.from_exact(p, p ** 2, N)  # s = 25, valuation 2
    val = kubota_leopoldt(inst, s)
    assert isinstance(val, PadicNumber)
    # continuity: close to the value at 0 (difference controlled by s)
    v0 = kubota_leopoldt(inst, 0)
    assert (val - v0).valuation >= 2


def test_padic_argument_needs_positive_valuation():
    inst = LSeriesInstance(5, chi(-4), 10)
    s = PadicNumber.from_exact(5, 3, 10)  # a unit: outside the disc contract
    with pytest.raises(DomainError):
        kubota_leopoldt(inst, s)


def test_instance_validation():
    with pytest.raises(DomainError):
        LSeriesInstance(4, chi(-3), 10)   # not an odd prime
    with pytest.raises(DomainError):
        LSeriesInstance(5, DirichletCharacter.quadratic(5), 10)  # even character
    with pytest.raises(DomainError):
        LSeriesInstance(5, chi(-3), 0)    # no precision


def test_degenerate_twist_rejected():
    # p = 3, chi_{-3} = omega^{-1}: the p-adic L-function has a pole
    inst = LSeriesInstance(3, chi(-3), 10)
    with pytest.raises(UnsupportedPoleError):
        kubota_leopoldt(inst, 0)


def test_trivial_zero_when_split():
    # chi_{-4}(5) = 1: L_p(chi omega, 0) = 0 to precision
    inst = LSeriesInstance(5, chi(-4), 12)
    assert inst.r == 1
    assert inst.R == frozenset({5})
    assert inst.Rprime == frozenset()
    v = kubota_leopoldt(inst, 0)
    assert v.is_zero_to_precision()


def test_no_trivial_zero_when_inert():
    # chi_{-4}(7) = -1: r = 0, nonzero value
    inst = LSeriesInstance(7, chi(-4), 12)
    assert inst.r == 0
    assert inst.Rprime == frozenset({7})
    v = kubota_leopoldt(inst, 0)
    assert not v.is_zero_to_precision()


def test_derivative_locked_value():
    # the worked (p=5, d=-4) instance: L_p'(0) residue pinned at 12 digits
    inst = LSeriesInstance(5, chi(-4), 12)
    d1 = lp_derivative_at_0(inst)
    assert d1.valuation == 1
    assert d1.residue(12) == 1352422578 * 5 % 5 ** 12


def test_derivative_finite_difference_consistency():
    # cross_check=True runs the FD comparison internally; it must not raise
    for (p, d) in ((5, -4), (7, -3)):
        inst = LSeriesInstance(p, chi(d), 10)
        val = lp_derivative_at_0(inst, cross_check=True)
        assert isinstance(val, PadicNumber)


def test_order_probe():
    inst = LSeriesInstance(5, chi(-4), 12)
    probe = order_probe(inst)
    assert probe["order_lower_bound"] == 1
    assert probe["conclusive"] is True
    inert = LSeriesInstance(7, chi(-4), 12)
    probe0 = order_probe(inert)
    assert probe0["order_lower_bound"] == 0
    # low precision: probe declines to conclude
    weak = order_probe(LSeriesInstance(5, chi(-4), 4))
    assert weak["conclusive"] is False


def test_analytic_invariant_rank1():
    inst = LSeriesInstance(5, chi(-4), 12)
    rep = analytic_invariant(inst)
    assert rep.r == 1
    assert rep.has_exceptional_zero
    assert rep.classical_value == Fraction(1, 2)
    # L_an = L_p'(0) / L(chi, 0) = 2 L_p'(0)
    assert rep.l_an.residue(12) == (2 * 1352422578 * 5) % 5 ** 12
    assert rep.value_at_0.is_zero_to_precision()


def test_analytic_invariant_rank0_is_one():
    # r = 0: L_p(0)/(L(chi,0) prod(1-chi(p))) = 1 + O(p^N-ish)
    inst = LSeriesInstance(7, chi(-4), 12)
    rep = analytic_invariant(inst)
    assert rep.r == 0
    assert not rep.has_exceptional_zero
    assert (rep.l_an - 1).valuation >= 8
