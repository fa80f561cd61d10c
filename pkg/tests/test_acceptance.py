"""The ten acceptance criteria, each printed as one PASS/FAIL line.

Run standalone with ``python3 tests/test_acceptance.py`` or through pytest,
where the lines appear in the terminal summary.
"""

import functools
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import mpmath
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import S, rand_alphas, random_parameter_array  # noqa: E402

from tdpairs.drinfeld import (  # noqa: E402
    SplitSequence,
    drinfeld_linear,
    drinfeld_polynomial,
    module_for_split_sequence,
    normalized_split,
    sigma_tensor_recursion,
    split_sequence,
    zeta1_closed_form,
    zeta1_cross_closed_form,
    zeta1_difference_closed_form,
    zeta_cross,
)
from tdpairs.linalg import Matrix  # noqa: E402
from tdpairs.poly import Polynomial  # noqa: E402
from tdpairs.scalars import QQ, PrecisionConfig  # noqa: E402
from tdpairs.tdsystem import (  # noqa: E402
    ConditionIIError,
    ParameterArray,
    QRacahParams,
    build_AAstar,
    condition_ii,
    construct_realization,
    derived_constants,
    parameter_array_of,
    shape_check,
    verify_module_structure,
    verify_td_axioms,
    verify_tridiagonal_relations,
)
from tdpairs.uqmodule import (  # noqa: E402
    evaluation_module,
    rl_coefficients,
    standard_module,
    tensor_product,
    verify_rl_properties,
    verify_uq_relations,
)

SEED = 20240611
TRIALS = 20
CFG = PrecisionConfig(128)
RESULTS = {}


def params_for(q, d):
    return QRacahParams.of(q, 0, 1, 3, 0, 1, 2, d)


def record(n, title, ok, detail, seconds):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n:2d}: {title} ({detail}; {seconds:.1f}s)"
    RESULTS[n] = line
    print(line)
    return ok


def timed(n, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run():
            t = time.perf_counter()
            ok, detail = fn()
            return record(n, title, ok, detail, time.perf_counter() - t)

        return run

    return wrap


@functools.lru_cache(maxsize=None)
def relation_corpus():
    rng = random.Random(SEED + 1)
    out = []
    for q in (S(2), S(Fraction(3, 2))):
        for d in range(6):
            for _ in range(TRIALS):
                out.append(standard_module(rand_alphas(rng, d), q, rl_coefficients(params_for(q, d))))
    return out


@timed(1, "U_q(sl2-hat) relations, d<=5, q in {2, 3/2}")
def criterion_1():
    bad = [m.alphas for m in relation_corpus() if not verify_uq_relations(m).ok]
    return not bad, f"{len(relation_corpus())} modules, {len(bad)} with violations"


@timed(2, "R/L structure incl. both cubic relations")
def criterion_2():
    bad = [m.alphas for m in relation_corpus() if not verify_rl_properties(m).ok]
    return not bad, f"{len(relation_corpus())} modules, {len(bad)} with violations"


@timed(3, "Drinfel'd multiplicativity and factorization, d<=6")
def criterion_3():
    rng = random.Random(SEED + 3)
    c = rl_coefficients(params_for(S(2), 1))
    fails = total = 0
    for d in range(1, 7):
        for _ in range(TRIALS):
            alphas = rand_alphas(rng, d)
            V = evaluation_module(alphas[0], S(2), c)
            W = standard_module(alphas[1:], S(2), c)
            VW = tensor_product(V, W)
            P = drinfeld_polynomial(VW)
            prod = Polynomial(QQ, [1])
            for a in alphas:
                prod = prod * drinfeld_linear(a, params_for(S(2), 1), c)
            total += 1
            if P != drinfeld_polynomial(V) * drinfeld_polynomial(W) or P != prod:
                fails += 1
    return fails == 0, f"{total} trials, {fails} mismatches"


@timed(4, "sigma recursion oracle, d<=6, worked values")
def criterion_4():
    rng = random.Random(SEED + 4)
    c = rl_coefficients(params_for(S(2), 1))
    fails = total = 0
    for d in range(2, 7):
        for _ in range(TRIALS):
            alphas = rand_alphas(rng, d)
            V = evaluation_module(alphas[0], S(2), c)
            W = standard_module(alphas[1:], S(2), c)
            got = normalized_split(split_sequence(tensor_product(V, W)), S(2))
            sV = normalized_split(split_sequence(V), S(2))
            sW = normalized_split(split_sequence(W), S(2))
            total += 1
            fails += got != sigma_tensor_recursion(sV[1], sW, S(2), c.bbstar, c.ccstar)
    worked = normalized_split(split_sequence(standard_module([S(1), S(1)], S(2), c)), S(2))
    ok_worked = worked == [S(1), S(Fraction(-169, 4)), S(Fraction(625, 4))]
    return fails == 0 and ok_worked, f"{total} trials, {fails} mismatches, worked values {'ok' if ok_worked else 'WRONG'}"


@timed(5, "zeta_1 closed forms, d<=6, worked value -225/8")
def criterion_5():
    rng = random.Random(SEED + 5)
    fails = total = 0
    for d in range(1, 7):
        c = rl_coefficients(params_for(S(2), d))
        for _ in range(TRIALS):
            m = standard_module(rand_alphas(rng, d), S(2), c)
            z1, zx = split_sequence(m)[1], zeta_cross(m)
            total += 1
            fails += not (z1 == zeta1_closed_form(m.alphas, c) and zx == zeta1_cross_closed_form(m.alphas, c)
                          and z1 - zx == zeta1_difference_closed_form(S(2), d, c.bbstar, c.ccstar))
    worked = split_sequence(standard_module([S(1)], S(2), rl_coefficients(params_for(S(2), 1))))[1]
    ok_worked = worked == S(Fraction(-225, 8))
    return fails == 0 and ok_worked, f"{total} trials, {fails} mismatches, worked value {'ok' if ok_worked else 'WRONG'}"


def split_round_trip_errors(d, rng):
    """(exact?, componentwise relative error, normwise relative error) for one random target."""
    vals = [Fraction(rng.choice([-1, 1]) * rng.randint(1, 999), rng.randint(1, 99)) for _ in range(d)]
    target = SplitSequence.of([1] + vals)
    m = module_for_split_sequence(target, params_for(S(2), d), rl_coefficients(params_for(S(2), d)), CFG)
    got = split_sequence(m)
    if m.field.exact:
        return True, (0 if got.zetas == target.zetas else 1), 0
    ctx = m.field.ctx
    tv = [z.lift(m.field).value for z in target]
    gv = [z.value for z in got]
    comp = max(abs(g - t) / abs(t) for g, t in zip(gv, tv))
    norm = ctx.sqrt(sum(abs(g - t) ** 2 for g, t in zip(gv, tv))) / ctx.sqrt(sum(abs(t) ** 2 for t in tv))
    return False, comp, norm


@timed(6, "inverse pipeline round trip, d=1..5, rel. error < 2^-64 at 128 bits")
def criterion_6():
    rng = random.Random(SEED + 6)
    bound = mpmath.mpf(2) ** -64
    worst, worst_norm, n_exact, fails = 0, 0, 0, []
    for d in range(1, 6):
        for k in range(TRIALS):
            exact, comp, norm = split_round_trip_errors(d, rng)
            n_exact += exact
            worst, worst_norm = max(worst, comp), max(worst_norm, norm)
            if comp >= bound:
                fails.append((d, k, float(comp)))
    detail = (f"{5 * TRIALS} targets, {n_exact} exact, worst componentwise {float(worst):.2e}, "
              f"worst normwise {float(worst_norm):.2e}, {len(fails)} over bound {fails}")
    return not fails, detail


def same_array(x, y):
    """Exact equality of the three sequences; the optional q annotation is ignored."""
    return (x.thetas, x.theta_stars, x.zetas) == (y.thetas, y.theta_stars, y.zetas)


@functools.lru_cache(maxsize=None)
def realization_corpus():
    rng = random.Random(SEED + 7)
    out = []
    for d in range(1, 5):
        for _ in range(TRIALS):
            pa, p = random_parameter_array(rng, d)
            out.append((pa, p, construct_realization(pa, CFG, params=p if d <= 1 else None)))
    return out


def violating_arrays(rng):
    """Five arrays with zeta_d = 0 and five with a vanishing condition sum."""
    from tdpairs.poly import tau_eta

    out = []
    for k in range(10):
        d = 1 + k % 4
        pa, _ = random_parameter_array(rng, d)
        zs = list(pa.zetas)
        if k < 5:
            zs[d] = S(0)
            reason = "condition-ii-zeta-d-zero"
        else:
            th, ts = pa.thetas, pa.theta_stars
            partial = sum((tau_eta(list(th), d - i, "eta")(th[0]) * tau_eta(list(ts), d - i, "eta")(ts[0]) * zs[i]
                           for i in range(d)), S(0))
            zs[d] = -partial
            reason = "condition-ii-zeta-d-zero" if zs[d] == 0 else "condition-ii-sum-zero"
        out.append((ParameterArray(pa.thetas, pa.theta_stars, SplitSequence(tuple(zs)), pa.q), reason))
    return out


@timed(7, "parameter array -> TD system -> parameter array, d=1..4, and refusals")
def criterion_7():
    corpus = realization_corpus()
    fails = [i for i, (pa, _, r) in enumerate(corpus) if not (r.field.exact and same_array(parameter_array_of(r), pa))]
    refused = 0
    bad_refusals = []
    for pa, reason in violating_arrays(random.Random(SEED + 70)):
        try:
            construct_realization(pa, CFG)
            bad_refusals.append("constructed")
        except ConditionIIError as exc:
            if exc.reason == reason:
                refused += 1
            else:
                bad_refusals.append(exc.reason)
    ok = not fails and not bad_refusals
    return ok, f"{len(corpus)} arrays, {len(fails)} round-trip failures, {refused}/10 correct refusals"


@timed(8, "module structure and tridiagonal relations on the item-7 modules")
def criterion_8():
    bad = 0
    for pa, p, r in realization_corpus():
        m = r.module
        A, As = build_AAstar(m, p)
        ok = verify_tridiagonal_relations(A, As, derived_constants(p)).ok and verify_module_structure(m, A, As, p).ok
        bad += not ok
    return bad == 0, f"{len(realization_corpus())} modules, {bad} with violations"


@timed(9, "shape bound on the item-7 realizations")
def criterion_9():
    shapes = {}
    bad = 0
    for pa, _, r in realization_corpus():
        rep = shape_check(r)
        bad += not rep.ok
        shapes[tuple(r.shape)] = shapes.get(tuple(r.shape), 0) + 1
    return bad == 0, f"{len(realization_corpus())} realizations, {bad} violations, shapes {dict(sorted(shapes.items()))}"


def block_sum(X, Y):
    import numpy as np

    n, m = X.rows, Y.rows
    a = np.empty((n + m, n + m), dtype=object)
    a[:] = X.field.zero
    a[:n, :n], a[n:, n:] = X.a, Y.a
    return Matrix(X.field, a)


@timed(10, "TD pair axiom checker: constructed pairs confirmed, block sum rejected")
def criterion_10():
    bad = 0
    for pa, _, r in realization_corpus():
        rep = verify_td_axioms(r.A, r.Astar, r.thetas, r.theta_stars, CFG)
        orders = rep.data["orderings"]
        bad += not (rep.ok and len(orders) == 2 and orders[0] == orders[1][::-1])
    _, _, r = realization_corpus()[0]
    rep = verify_td_axioms(block_sum(r.A, r.A), block_sum(r.Astar, r.Astar), r.thetas, r.theta_stars, CFG)
    rejected = [c.name for c in rep.violations] == ["(iv) no proper nonzero subspace is invariant under both"]
    return bad == 0 and rejected, f"{len(realization_corpus())} pairs, {bad} not confirmed, block sum {'rejected by (iv)' if rejected else 'NOT rejected'}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("n", range(1, 11))
def test_criterion(n):
    assert CRITERIA[n - 1](), RESULTS[n]


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
