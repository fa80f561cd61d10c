# From a parameter array to a TD system and back
#
# Given eigenvalues, dual eigenvalues and a split sequence satisfying the
# nondegeneracy condition, we build a standard module whose split sequence is
# the prescribed one, pass to the irreducible quotient of the submodule
# generated by the bottom dual eigenspace, and read off A, A* and their
# primitive idempotents.

from fractions import Fraction

from tdpairs import (
    ParameterArray,
    QRacahParams,
    condition_ii,
    construct_realization,
    eigen_sequences,
    parameter_array_of,
    shape_check,
    verify_td_axioms,
)

params = QRacahParams.of(2, 0, 1, 3, 0, 1, 2, d=2)
thetas, theta_stars = eigen_sequences(params)
print("thetas:", [str(t) for t in thetas])
print("theta*s:", [str(t) for t in theta_stars])

pa = ParameterArray.of(thetas, theta_stars, [1, Fraction(-1521, 16), Fraction(1265625, 256)], q=2)
print("condition holds:", condition_ii(pa).holds)

r = construct_realization(pa)
print("dimension", r.dim, " shape", r.shape)
print("A =")
print(r.A)

# The realization is a TD pair with one standard ordering and its reversal.
rep = verify_td_axioms(r.A, r.Astar, r.thetas, r.theta_stars)
print(rep)
print("orderings:", rep.data["orderings"])
print(shape_check(r))

# Extracting the parameter array gives back the input exactly.
back = parameter_array_of(r)
print("round trip:", (back.thetas, back.theta_stars, back.zetas) == (pa.thetas, pa.theta_stars, pa.zetas))

# Violating the condition is refused with a reason code.
bad = ParameterArray.of(thetas, theta_stars, [1, 5, 0], q=2)
print("zeta_d = 0 gives:", condition_ii(bad).reason)
