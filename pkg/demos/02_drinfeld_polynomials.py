# Drinfel'd polynomials and the inverse problem
#
# The normalized split sequence of a standard module is packed into a monic
# polynomial of degree d. It is multiplicative over tensor products, so it
# factors into one linear factor per evaluation parameter. Reading the
# factorization backwards recovers a module from a prescribed split sequence.

from fractions import Fraction

from tdpairs import (
    PrecisionConfig,
    QRacahParams,
    SplitSequence,
    drinfeld_linear,
    drinfeld_polynomial,
    module_for_split_sequence,
    rl_coefficients,
    split_sequence,
    standard_module,
)
from tdpairs.scalars import scalar

params = QRacahParams.of(2, 0, 1, 3, 0, 1, 2, d=3)
coeffs = rl_coefficients(params)
alphas = [scalar(1), scalar(Fraction(-2, 3)), scalar(5)]

m = standard_module(alphas, params.q, coeffs)
P = drinfeld_polynomial(m)
print("P_V =", P)

# The product of the linear factors gives the same polynomial.
prod = drinfeld_linear(alphas[0], params, coeffs)
for a in alphas[1:]:
    prod = prod * drinfeld_linear(a, params, coeffs)
print("equal to the product of linear factors:", P == prod)

# Forward: module -> split sequence. Backward: split sequence -> module.
# Each root of P has two preimages alpha, so the recovered module need not
# have the same alphas; it has the same split sequence.
zetas = split_sequence(m)
back = module_for_split_sequence(zetas, params, coeffs, PrecisionConfig(128))
print("recovered alphas:", [str(a) for a in back.alphas])
print("round trip exact:", split_sequence(back) == zetas)

# A target with irrational roots falls back to the 128-bit complex backend.
target = SplitSequence.of([1, Fraction(7, 2), Fraction(-11, 5)])
mc = module_for_split_sequence(target, params.with_d(2), rl_coefficients(params.with_d(2)), PrecisionConfig(128))
print("complex field:", mc.field.name, " zetas:", [str(z) for z in split_sequence(mc)])
