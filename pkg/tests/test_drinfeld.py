from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tdpairs.drinfeld import (
    SplitSequence,
    alpha_for_root,
    drinfeld_linear,
    drinfeld_polynomial,
    module_for_polynomial,
    module_for_split_sequence,
    normalized_split,
    sigma_tensor_recursion,
    sigmas_to_zetas,
    split_sequence,
    zeta1_closed_form,
    zeta1_cross_closed_form,
    zeta1_difference_closed_form,
    zeta_cross,
)
from tdpairs.poly import Polynomial
from tdpairs.scalars import QQ, PrecisionConfig
from tdpairs.uqmodule import evaluation_module, standard_module, tensor_product

from conftest import S, nonzero_rationals, running, running_coeffs

lam = Polynomial.indeterminate()
CFG = PrecisionConfig()


def module(alphas, q=2, coeffs=None):
    return standard_module([S(a) for a in alphas], S(q), coeffs or running_coeffs(len(alphas)))


def zs(*vals):
    return SplitSequence.of([Fraction(v) for v in vals])


def test_split_sequence_examples():
    assert split_sequence(module([])).zetas == (S(1),)
    assert split_sequence(module([1])).close(zs(1, "-225/8"))
    assert split_sequence(module([1, 1])).close(zs(1, "-1521/16", "1265625/256"))


def test_zeta0_must_be_one():
    with pytest.raises(ValueError):
        zs(2, 1)


def test_zeta_cross_examples():
    m = module([1])
    assert split_sequence(m)[1] - zeta_cross(m) == 0
    m = module([1, 1])
    assert split_sequence(m)[1] - zeta_cross(m) == S("-675/16")
    assert zeta1_difference_closed_form(S(2), 2, S(1), S(6)) == S("-675/16")


def test_normalized_split_examples():
    assert normalized_split(zs(1), S(2)) == [S(1)]
    assert normalized_split(zs(1, "-225/8"), S(2)) == [S(1), S("-25/2")]
    assert normalized_split(zs(1, "-1521/16", "1265625/256"), S(2)) == [S(1), S("-169/4"), S("625/4")]


def test_drinfeld_polynomial_examples():
    assert drinfeld_polynomial(module([])) == Polynomial(QQ, [1])
    assert drinfeld_polynomial(module([1])) == lam + S("11/2")
    assert drinfeld_polynomial(module([1, 1])) == (lam + S("11/2")) ** 2


def test_drinfeld_linear_examples():
    c = running_coeffs()
    assert drinfeld_linear(S(1), running(1), c) == lam + S("11/2")
    other = S(2) ** 4 * c.vvstar / (c.uustar * S(3))
    assert drinfeld_linear(other, running(1), c) == drinfeld_linear(S(3), running(1), c)
    with pytest.raises((ValueError, ZeroDivisionError)):
        drinfeld_linear(S(0), running(1), c)


def test_alpha_for_root_examples():
    c = running_coeffs()
    a = alpha_for_root(S("-11/2"), running(1), c, CFG)
    assert a == S("8/3")
    assert drinfeld_linear(a, running(1), c) == lam + S("11/2")


def test_alpha_for_root_complex():
    c = running_coeffs()
    a = alpha_for_root(S(1), running(1), c, CFG)
    assert not a.exact
    assert drinfeld_linear(a, running(1), c.lift(a.field)).close((lam - 1).lift(a.field))


@given(nonzero_rationals)
def test_alpha_root_product(r):
    c = running_coeffs()
    a = alpha_for_root(S(r), running(1), c, CFG)
    other = (S(2) ** 4 * c.vvstar / c.uustar).lift(a.field) / a
    assert drinfeld_linear(other, running(1), c.lift(a.field)).close((lam - S(r)).lift(a.field))


def test_module_for_polynomial_examples():
    c = running_coeffs(0)
    assert module_for_polynomial(Polynomial(QQ, [1]), running(0), c, CFG).d == 0
    m = module_for_polynomial(lam + S("11/2"), running(1), running_coeffs(), CFG)
    assert m.alphas[0] in (S(1), S("8/3"))
    P = (lam + S("11/2")) * (lam - S("3/7"))
    m = module_for_polynomial(P, running(2), running_coeffs(2), CFG)
    assert drinfeld_polynomial(m).close(P.lift(m.field))


def test_module_for_split_sequence_examples():
    c = running_coeffs()
    assert module_for_split_sequence(zs(1), running(0), c, CFG).d == 0
    m = module_for_split_sequence(zs(1, "-225/8"), running(1), c, CFG)
    assert m.alphas[0] in (S(1), S("8/3"))
    assert split_sequence(m).close(zs(1, "-225/8"))
    target = zs(1, "-1521/16", "1265625/256")
    m = module_for_split_sequence(target, running(2), running_coeffs(2), CFG)
    assert split_sequence(m).close(target)


@given(nonzero_rationals, st.lists(nonzero_rationals, min_size=0, max_size=4))
def test_multiplicativity(alpha, rest):
    c = running_coeffs()
    V = evaluation_module(S(alpha), S(2), c)
    W = standard_module([S(a) for a in rest], S(2), c)
    assert drinfeld_polynomial(tensor_product(V, W)) == drinfeld_polynomial(V) * drinfeld_polynomial(W)


@given(st.lists(nonzero_rationals, min_size=0, max_size=5))
def test_factorization(alphas):
    c = running_coeffs()
    m = standard_module([S(a) for a in alphas], S(2), c)
    expected = Polynomial(QQ, [1])
    for a in alphas:
        expected = expected * drinfeld_linear(S(a), running(1), c)
    assert drinfeld_polynomial(m) == expected


@given(nonzero_rationals, st.lists(nonzero_rationals, min_size=1, max_size=4))
def test_sigma_recursion(alpha, rest):
    c = running_coeffs()
    V = evaluation_module(S(alpha), S(2), c)
    W = standard_module([S(a) for a in rest], S(2), c)
    sV = normalized_split(split_sequence(V), S(2))
    sW = normalized_split(split_sequence(W), S(2))
    got = normalized_split(split_sequence(tensor_product(V, W)), S(2))
    assert got == sigma_tensor_recursion(sV[1], sW, S(2), c.bbstar, c.ccstar)


@given(st.lists(nonzero_rationals, min_size=1, max_size=5), st.sampled_from([2, Fraction(3, 2), -3]))
def test_closed_forms(alphas, q):
    from tdpairs.uqmodule import rl_coefficients

    c = rl_coefficients(running(len(alphas), S(q)))
    m = standard_module([S(a) for a in alphas], S(q), c)
    assert split_sequence(m)[1] == zeta1_closed_form(m.alphas, c)
    assert zeta_cross(m) == zeta1_cross_closed_form(m.alphas, c)
    assert split_sequence(m)[1] - zeta_cross(m) == zeta1_difference_closed_form(S(q), m.d, c.bbstar, c.ccstar)


@given(st.lists(nonzero_rationals, min_size=0, max_size=4), nonzero_rationals)
def test_uv_immaterial(alphas, t):
    c = running_coeffs()
    m = standard_module([S(a) for a in alphas], S(2), c)
    m2 = m.with_rl(c.rescaled(S(t)))
    assert split_sequence(m2).zetas == split_sequence(m).zetas
    assert drinfeld_polynomial(m2) == drinfeld_polynomial(m)


def test_sigma_zeta_inverse():
    z = zs(1, "-1521/16", "1265625/256")
    assert sigmas_to_zetas(normalized_split(z, S(2)), S(2)).zetas == z.zetas


@given(st.lists(st.fractions(-50, 50, max_denominator=9).filter(lambda x: x != 0), min_size=1, max_size=3))
def test_split_sequence_round_trip(vals):
    target = SplitSequence.of([1] + vals)
    d = len(vals)
    m = module_for_split_sequence(target, running(d), running_coeffs(d), CFG)
    got = split_sequence(m)
    assert got.close(SplitSequence(tuple(z.lift(m.field) for z in target)))
