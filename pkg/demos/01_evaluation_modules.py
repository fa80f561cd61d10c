# Evaluation modules and the relations they satisfy
#
# A standard module is a tensor product of two-dimensional evaluation
# modules V(alpha_1) x ... x V(alpha_d). Every operator is an exact
# rational matrix, so the defining relations can be checked with zero
# tolerance.

from tdpairs import (
    QRacahParams,
    rl_coefficients,
    split_sequence,
    standard_module,
    verify_rl_properties,
    verify_uq_relations,
)
from tdpairs.scalars import scalar

# The running parameters: q = 2, a = 0, b = 1, c = 3, a* = 0, b* = 1, c* = 2.
params = QRacahParams.of(2, 0, 1, 3, 0, 1, 2, d=2)
coeffs = rl_coefficients(params)
print("u* =", coeffs.ustar, " v* =", coeffs.vstar)

# A diameter-2 module with alpha = (1, 1) has dimension 4.
m = standard_module([scalar(1), scalar(1)], params.q, coeffs)
print("dimension", m.dim)

# Chevalley relations, q-Serre relations and the raising/lowering structure.
print(verify_uq_relations(m))
print(verify_rl_properties(m))

# L^i R^i acts on the bottom weight space as the scalar zeta_i.
print("split sequence:", [str(z) for z in split_sequence(m)])
