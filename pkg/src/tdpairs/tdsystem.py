"""q-Racah parameters, the TD system construction, and its verification."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Sequence

import numpy as np

from .drinfeld import SplitSequence, module_for_split_sequence, split_sequence, zeta_cross
from .linalg import (
    LinearAlgebraError,
    Matrix,
    charpoly,
    Subspace,
    apply,
    closure_under,
    contains,
    image,
    intersect,
    kernel,
    lagrange_idempotents,
    largest_invariant_in,
    quotient_action,
    rank,
    rref,
    subspace_sum,
)
from .poly import poly_roots, rational_roots, tau_eta
from .report import Report
from .scalars import QQ, FieldScalar, PrecisionConfig, complex_field, q_bracket, scalar
from .uqmodule import StandardModule, check_feasible, rl_coefficients, unify_fields

__all__ = [
    "DistinctnessError",
    "FitError",
    "ConditionIIError",
    "ConstructionError",
    "QRacahParams",
    "DerivedConstants",
    "ParameterArray",
    "ConditionResult",
    "TDRealization",
    "eigen_sequences",
    "fit_qracah",
    "derived_constants",
    "condition_ii",
    "build_AAstar",
    "verify_tridiagonal_relations",
    "verify_module_structure",
    "construct_realization",
    "parameter_array_of",
    "verify_td_axioms",
    "shape_check",
    "standard_orderings",
    "spectrum",
]


class DistinctnessError(ValueError):
    def __init__(self, message, pair):
        super().__init__(message)
        self.pair = pair


class FitError(ValueError):
    """The sequences are not of q-Racah form, or the fit is underdetermined."""


class ConditionIIError(ValueError):
    """The parameter array fails the existence condition; carries a reason code."""

    def __init__(self, reason: str, certificate: dict):
        super().__init__(reason)
        self.reason = reason
        self.certificate = certificate


class ConstructionError(ArithmeticError):
    pass


# -- parameters --------------------------------------------------------------


@dataclass(frozen=True)
class QRacahParams:
    q: FieldScalar
    a: FieldScalar
    b: FieldScalar
    c: FieldScalar
    astar: FieldScalar
    bstar: FieldScalar
    cstar: FieldScalar
    d: int

    def __post_init__(self):
        q = self.q
        if q.is_zero():
            raise ValueError("q must be nonzero")
        q2 = q ** 2
        scale = max(abs(q2), 1)
        if (q2 - 1).is_zero(scale) or (q2 + 1).is_zero(scale):
            raise ValueError("q^2 must differ from 1 and -1")
        prod = self.b * self.bstar * self.c * self.cstar
        if prod.is_zero():
            raise ValueError("b b* c c* must be nonzero")
        if self.d < 0:
            raise ValueError("d must be nonnegative")
        check_feasible(q, self.d)

    @classmethod
    def of(cls, q, a, b, c, astar, bstar, cstar, d: int) -> "QRacahParams":
        _, vals = unify_fields(q, a, b, c, astar, bstar, cstar)
        return cls(*vals, d)

    @property
    def field(self):
        return self.q.field

    @property
    def bbstar(self) -> FieldScalar:
        return self.b * self.bstar

    @property
    def ccstar(self) -> FieldScalar:
        return self.c * self.cstar

    def lift(self, field) -> "QRacahParams":
        if field == self.field:
            return self
        vals = [getattr(self, k).lift(field) for k in ("q", "a", "b", "c", "astar", "bstar", "cstar")]
        return QRacahParams(*vals, self.d)

    def with_d(self, d: int) -> "QRacahParams":
        return QRacahParams(self.q, self.a, self.b, self.c, self.astar, self.bstar, self.cstar, d)


@dataclass(frozen=True)
class DerivedConstants:
    beta: FieldScalar
    gamma: FieldScalar
    rho: FieldScalar
    gamma_star: FieldScalar
    rho_star: FieldScalar


def _distinct_pair(vals):
    field = vals[0].field
    scale = max([abs(v.value) for v in vals] + [1]) if not field.exact else 1
    for i, j in itertools.combinations(range(len(vals)), 2):
        if (vals[i] - vals[j]).is_zero(scale):
            return (i, j)
    return None


@dataclass(frozen=True)
class ParameterArray:
    thetas: tuple
    theta_stars: tuple
    zetas: SplitSequence
    q: FieldScalar | None = None

    def __post_init__(self):
        if not (len(self.thetas) == len(self.theta_stars) == len(self.zetas)):
            raise ValueError("the three sequences must have the same length d+1")
        for name, seq in (("thetas", self.thetas), ("theta_stars", self.theta_stars)):
            pair = _distinct_pair(list(seq))
            if pair is not None:
                raise DistinctnessError(f"{name}[{pair[0]}] = {name}[{pair[1]}]", pair)

    @classmethod
    def of(cls, thetas, theta_stars, zetas, q=None) -> "ParameterArray":
        vals = list(thetas) + list(theta_stars) + list(zetas) + ([q] if q is not None else [])
        field, vals = unify_fields(*vals)
        n = len(thetas)
        th, ts, zs = vals[:n], vals[n : 2 * n], vals[2 * n : 3 * n]
        return cls(tuple(th), tuple(ts), SplitSequence(tuple(zs)), vals[3 * n] if q is not None else None)

    @property
    def d(self) -> int:
        return len(self.thetas) - 1

    @property
    def field(self):
        return self.thetas[0].field

    def lift(self, field) -> "ParameterArray":
        if field == self.field:
            return self
        up = lambda seq: tuple(x.lift(field) for x in seq)
        return ParameterArray(up(self.thetas), up(self.theta_stars), SplitSequence(up(self.zetas)),
                              self.q.lift(field) if self.q is not None else None)

    def close(self, other: "ParameterArray") -> bool:
        """Equality (exact), or agreement within tolerance when either side is complex."""
        field = self.field if not self.field.exact else other.field
        a, b = self.lift(field), other.lift(field)
        seqs = zip((a.thetas, a.theta_stars, tuple(a.zetas)), (b.thetas, b.theta_stars, tuple(b.zetas)))
        return all(len(x) == len(y) and all(s.close(t) for s, t in zip(x, y)) for x, y in seqs)


def eigen_sequences(params: QRacahParams):
    """``theta_i = a + b q^(2i-d) + c q^(d-2i)`` and the starred analogue, checked distinct."""
    q, d = params.q, params.d
    th = tuple(params.a + params.b * q ** (2 * i - d) + params.c * q ** (d - 2 * i) for i in range(d + 1))
    ts = tuple(params.astar + params.bstar * q ** (2 * i - d) + params.cstar * q ** (d - 2 * i) for i in range(d + 1))
    for name, seq in (("theta", th), ("theta*", ts)):
        pair = _distinct_pair(list(seq))
        if pair is not None:
            i, j = pair
            raise DistinctnessError(f"{name}_{i} = {name}_{j}", pair)
    return th, ts


def derived_constants(params: QRacahParams) -> DerivedConstants:
    q = params.q
    qq = (q - q.inv()) ** 2
    q2 = (q ** 2 - q ** (-2)) ** 2
    return DerivedConstants(
        beta=q ** 2 + q ** (-2),
        gamma=-params.a * qq,
        rho=params.a ** 2 * qq - params.b * params.c * q2,
        gamma_star=-params.astar * qq,
        rho_star=params.astar ** 2 * qq - params.bstar * params.cstar * q2,
    )


# -- fitting -----------------------------------------------------------------


def _ratios(seq):
    return [(seq[i - 2] - seq[i + 1]) / (seq[i - 1] - seq[i]) for i in range(2, len(seq) - 1)]


def _lex_key(x: FieldScalar):
    v = x.value
    return (v, 0) if x.field.exact else (v.real, v.imag)


def _q_from_ratio(rho: FieldScalar, cfg: PrecisionConfig) -> FieldScalar:
    """q with ``q^2 + q^-2 + 1 = rho``: pick ``|q^2| >= 1``, then the lexicographically larger root."""
    field = rho.field
    s = rho - 1  # q^2 + q^-2
    disc = s * s - 4
    if field.exact:
        r = QQ.sqrt(disc.value)
        if r is None:
            field = complex_field(cfg)
            rho = rho.lift(field)
            s, disc = s.lift(field), disc.lift(field)
    if field.exact:
        roots = [(s + r) / 2, (s - r) / 2]
    else:
        r = FieldScalar(field, field.sqrt(disc.value))
        roots = [(s + r) / 2, (s - r) / 2]
    for t in roots:
        if (t - 1).is_zero(max(abs(t), 1)) or (t + 1).is_zero(max(abs(t), 1)):
            raise FitError("the common ratio forces q^2 = 1 or q^2 = -1, which q-Racah type excludes")
    big = [t for t in roots if abs(t) >= 1 or (not field.exact and field.is_zero(abs(t.value) - 1))]
    t = max(big, key=_lex_key)
    if field.exact:
        qv = QQ.sqrt(t.value)
        if qv is None:
            field = complex_field(cfg)
            t = t.lift(field)
        else:
            return FieldScalar(QQ, qv)
    r = FieldScalar(field, field.sqrt(t.value))
    return max([r, -r], key=_lex_key)


def _solve_abc(seq, q, d):
    """Solve ``seq_i = a + b q^(2i-d) + c q^(d-2i)``; consistency is checked by the caller."""
    field = q.field
    rows = [[field.one, (q ** (2 * i - d)).value, (q ** (d - 2 * i)).value, seq[i].value] for i in range(d + 1)]
    R, piv = rref(Matrix(field, np.array(rows, dtype=object)))
    if 3 in piv:
        raise FitError("the eigenvalue sequence is not of the form a + b q^(2i-d) + c q^(d-2i)")
    if piv[:3] != (0, 1, 2):
        raise FitError("degenerate linear system for (a, b, c)")
    return [FieldScalar(field, R.a[k, 3]) for k in range(3)]


def _default_abc(seq, q, d):
    """Underdetermined cases d <= 1: fix a, then solve for b and c (both nonzero)."""
    field = q.field
    if d == 0:
        return [seq[0] - 2, scalar(1, field), scalar(1, field)]
    qi, qq = q.inv(), q
    det = qi * qi - qq * qq
    for a_try in range(0, 8):
        a = scalar(a_try, field)
        x0, x1 = seq[0] - a, seq[1] - a
        # x0 = b q^-1 + c q ; x1 = b q + c q^-1
        b = (x0 * qi - x1 * qq) / det
        c = (x1 * qi - x0 * qq) / det
        if not b.is_zero() and not c.is_zero():
            return [a, b, c]
    raise FitError("could not find nonzero b, c")


def fit_qracah(thetas: Sequence, theta_stars: Sequence, cfg: PrecisionConfig = PrecisionConfig(), q=None) -> QRacahParams:
    """Recover ``q, a, b, c, a*, b*, c*`` from the two eigenvalue sequences.

    For ``d >= 3`` q is determined by the common ratio; for ``d = 2`` it must be
    supplied; for ``d <= 1`` it defaults to 2 when not supplied.
    """
    field, vals = unify_fields(*thetas, *theta_stars, *([q] if q is not None else []))
    n = len(thetas)
    th, ts = vals[:n], vals[n : 2 * n]
    d = n - 1
    if q is not None:
        q = vals[2 * n]
    elif d >= 3:
        ratios = _ratios(th) + _ratios(ts)
        r0 = ratios[0]
        for r in ratios[1:]:
            if not r.close(r0):
                raise FitError("the ratios (theta_{i-2} - theta_{i+1}) / (theta_{i-1} - theta_i) are not constant")
        q = _q_from_ratio(r0, cfg)
    elif d == 2:
        raise FitError("d = 2: q is underdetermined by the eigenvalue sequences and must be supplied")
    else:
        q = scalar(2, field)
    if q.field != field:
        field = q.field
        th = [x.lift(field) for x in th]
        ts = [x.lift(field) for x in ts]
    solve = _solve_abc if d >= 2 else _default_abc
    a, b, c = solve(th, q, d)
    a_s, b_s, c_s = solve(ts, q, d)
    try:
        params = QRacahParams(q, a, b, c, a_s, b_s, c_s, d)
    except ValueError as exc:
        raise FitError(str(exc)) from exc
    got_th, got_ts = eigen_sequences(params)
    if not all(x.close(y) for x, y in zip(got_th + got_ts, list(th) + list(ts))):
        raise FitError("fitted parameters do not reproduce the input sequences")
    return params


# -- condition (ii) ----------------------------------------------------------


@dataclass
class ConditionResult:
    holds: bool | None
    reason: str | None
    certificate: dict
    warnings: list = dc_field(default_factory=list)

    def __bool__(self):
        return self.holds is True


def condition_ii(pa: ParameterArray) -> ConditionResult:
    """``zeta_0 = 1``, ``zeta_d != 0`` and ``sum_i eta_{d-i}(theta_0) eta*_{d-i}(theta*_0) zeta_i != 0``.

    In complex mode a clause within tolerance of its threshold yields
    ``holds = None`` and a warning rather than a verdict.
    """
    d = pa.d
    field = pa.field
    th, ts, zs = pa.thetas, pa.theta_stars, list(pa.zetas)
    terms = []
    for i in range(d + 1):
        eta = tau_eta(list(th), d - i, "eta")(th[0])
        eta_s = tau_eta(list(ts), d - i, "eta")(ts[0])
        terms.append(eta * eta_s * zs[i])
    total = sum(terms[1:], terms[0])
    cert = {"zeta0": zs[0], "zeta_d": zs[d], "sum": total, "terms": terms}
    warnings = []
    if not zs[0].close(1):
        return ConditionResult(False, "condition-ii-zeta0-not-one", cert)
    if field.exact:
        if zs[d] == 0:
            return ConditionResult(False, "condition-ii-zeta-d-zero", cert)
        if total == 0:
            return ConditionResult(False, "condition-ii-sum-zero", cert)
        return ConditionResult(True, None, cert)
    holds = True
    zscale = max([abs(z.value) for z in zs] + [1])
    if zs[d].is_zero(zscale):
        warnings.append(f"zeta_d is within tolerance of zero (|zeta_d| = {float(abs(zs[d])):.3e}); cannot decide at this precision")
        holds = None
    tscale = max([abs(t.value) for t in terms] + [1])
    if total.is_zero(tscale):
        warnings.append(f"condition sum is within tolerance of zero (|sum| = {float(abs(total)):.3e}); cannot decide at this precision")
        holds = None
    return ConditionResult(holds, None, cert, warnings)


# -- operators on the standard module ----------------------------------------


def build_AAstar(m: StandardModule, params: QRacahParams):
    """``A = a + b K0 + c K1 + R`` and ``A* = a* + b* K0 + c* K1 + L``, with weight-shift checks."""
    if m.R is None:
        raise ValueError("module carries no R, L")
    params = params.lift(m.field) if params.field != m.field else params
    if not m.q.close(params.q):
        raise ValueError("module and parameters use different q")
    if not (m.coeffs.bbstar.close(params.bbstar) and m.coeffs.ccstar.close(params.ccstar)):
        raise ValueError("R, L coefficients do not match b b* and c c*")
    n, field = m.dim, m.field
    I = Matrix.identity(n, field)
    A = I * params.a + m.K0 * params.b + m.K1 * params.c + m.R
    As = I * params.astar + m.K0 * params.bstar + m.K1 * params.cstar + m.L
    th, ts = eigen_sequences(params.with_d(m.d))
    U = m.weight_spaces
    zero = Subspace.zero(n, field)
    for i in range(m.d + 1):
        up = U[i + 1] if i < m.d else zero
        down = U[i - 1] if i > 0 else zero
        if not contains(up, apply(A - I * th[i], U[i])):
            raise ConstructionError(f"(A - theta_{i}) U_{i} is not contained in U_{i + 1}")
        if not contains(down, apply(As - I * ts[i], U[i])):
            raise ConstructionError(f"(A* - theta*_{i}) U_{i} is not contained in U_{i - 1}")
    return A, As


def _eq_check(rep, name, lhs: Matrix, rhs: Matrix, scale=None):
    if lhs.field.exact:
        return rep.add(name, lhs == rhs)
    if scale is None:
        scale = max(lhs.magnitude(), rhs.magnitude())
    ok = (lhs - rhs).is_zero(scale)
    return rep.add(name, ok, "" if ok else f"residual {float((lhs - rhs).magnitude()):.3e}")


def verify_tridiagonal_relations(A: Matrix, Astar: Matrix, consts: DerivedConstants) -> Report:
    rep = Report("tridiagonal relations")
    br3 = consts.beta + 1
    for name, X, Y, g, r in (("A", A, Astar, consts.gamma, consts.rho), ("A*", Astar, A, consts.gamma_star, consts.rho_star)):
        X2 = X @ X
        X3 = X2 @ X
        lhs = X3 @ Y - (X2 @ Y @ X) * br3 + (X @ Y @ X2) * br3 - Y @ X3
        rhs = (X2 @ Y - Y @ X2) * g + (X @ Y - Y @ X) * r
        scale = max(X.magnitude(), Y.magnitude()) ** 4 * max(abs(br3), 1)
        _eq_check(rep, f"cubic relation for {name}", lhs, rhs, scale)
    return rep


def _ideal_sum(subs, n, field):
    subs = [s for s in subs if s.dim]
    return subspace_sum(*subs) if subs else Subspace.zero(n, field)


def verify_module_structure(m: StandardModule, A: Matrix, Astar: Matrix, params: QRacahParams) -> Report:
    """Eigenspace dimensions, flags, a_0 and a*_d, quasi-tridiagonality, the tau formula."""
    rep = Report("module structure")
    d, n, field = m.d, m.dim, m.field
    params = params.lift(field) if params.field != field else params
    th, ts = eigen_sequences(params.with_d(d))
    try:
        E = lagrange_idempotents(A, th)
        Es = lagrange_idempotents(Astar, ts)
    except LinearAlgebraError as exc:
        rep.add("A and A* diagonalizable with the expected spectra", False, str(exc))
        return rep
    rep.add("A and A* diagonalizable with the expected spectra", True)
    for i in range(d + 1):
        rep.add(f"dim E_{i}V = dim E*_{i}V = C({d},{i})", rank(E[i]) == comb(d, i) == rank(Es[i]))
    U = m.weight_spaces
    EV = [image(x) for x in E]
    EsV = [image(x) for x in Es]
    for i in range(d + 1):
        rep.add(f"E_{i}V + ... + E_{d}V = U_{i} + ... + U_{d}", _ideal_sum(EV[i:], n, field) == _ideal_sum(U[i:], n, field))
        rep.add(f"E*_0V + ... + E*_{i}V = U_0 + ... + U_{i}", _ideal_sum(EsV[: i + 1], n, field) == _ideal_sum(U[: i + 1], n, field))
    zetas = split_sequence(m)
    scale = max(A.magnitude(), Astar.magnitude(), max(x.magnitude() for x in E + Es))
    if d >= 1:
        a0 = th[0] + zetas[1] / (ts[0] - ts[1])
        ads = ts[1] - (zetas[1] + (ts[0] - ts[1]) * (th[0] - th[d - 1])) / (th[d - 1] - th[d])
        _eq_check(rep, "E*_0 A E*_0 = a_0 E*_0", Es[0] @ A @ Es[0], Es[0] * a0, scale ** 3)
        _eq_check(rep, "E_d A* E_d = a*_d E_d", E[d] @ Astar @ E[d], E[d] * ads, scale ** 3)
        rep.data["a0"] = a0
        rep.data["a_star_d"] = ads
    Z = Matrix.zeros(n, n, field)
    for i in range(d + 1):
        for j in range(d + 1):
            if abs(i - j) > 1:
                _eq_check(rep, f"E_{i} A* E_{j} = 0", E[i] @ Astar @ E[j], Z, scale ** 3)
                _eq_check(rep, f"E*_{i} A E*_{j} = 0", Es[i] @ A @ Es[j], Z, scale ** 3)
    tau = Matrix.identity(n, field)
    denom = scalar(1, field)
    I = Matrix.identity(n, field)
    for i in range(d + 1):
        if i > 0:
            tau = tau @ (A - I * th[i - 1])
            denom = denom * (ts[0] - ts[i])
        _eq_check(rep, f"E*_0 tau_{i}(A) E*_0 = zeta_{i} E*_0 / prod", Es[0] @ tau @ Es[0], Es[0] * (zetas[i] / denom), scale ** (i + 2))
    pa = ParameterArray(th, ts, zetas, params.q)
    cond = condition_ii(pa)
    if cond.holds:
        rep.add("E*_0 E_0 E*_0 nonzero", not (Es[0] @ E[0] @ Es[0]).is_zero(scale ** 3))
        rep.add("E*_0 E_d E*_0 nonzero", not (Es[0] @ E[d] @ Es[0]).is_zero(scale ** 3))
    return rep


# -- the construction --------------------------------------------------------


@dataclass
class TDRealization:
    dim: int
    A: Matrix
    Astar: Matrix
    E: list
    Estar: list
    shape: list
    thetas: tuple
    theta_stars: tuple
    params: QRacahParams | None = None
    module: StandardModule | None = None
    warnings: list = dc_field(default_factory=list)
    certificate: dict = dc_field(default_factory=dict)

    @property
    def d(self) -> int:
        return len(self.E) - 1

    @property
    def field(self):
        return self.A.field


def _idempotent(M: Matrix, vals, i) -> Matrix:
    field, n = M.field, M.rows
    I = Matrix.identity(n, field)
    out = I
    for j, v in enumerate(vals):
        if j != i:
            out = out @ ((M - I * v) * (vals[i] - v).inv())
    return out


def construct_realization(pa: ParameterArray, cfg: PrecisionConfig = PrecisionConfig(), params: QRacahParams | None = None,
                          u=1, v=1) -> TDRealization:
    """A TD system on an irreducible module with parameter array ``pa``.

    Raises :class:`ConditionIIError` when the array fails the existence
    condition, :class:`FitError` when it is not of q-Racah type.
    """
    cond = condition_ii(pa)
    if cond.holds is False:
        raise ConditionIIError(cond.reason, cond.certificate)
    warnings = list(cond.warnings)
    if params is None:
        params = fit_qracah(pa.thetas, pa.theta_stars, cfg, q=pa.q)
    d = pa.d
    coeffs = rl_coefficients(params, u, v)
    m = module_for_split_sequence(pa.zetas, params, coeffs, cfg)
    field = m.field
    pa_f = pa.lift(field) if field != pa.field else pa
    params_f = params.lift(field)
    A, As = build_AAstar(m, params_f)
    th, ts = pa_f.thetas, pa_f.theta_stars
    Es0 = _idempotent(As, ts, 0)
    seed = image(Es0)
    W = closure_under([A, As], seed)
    M = largest_invariant_in([A, As], intersect(kernel(Es0), W))
    AL = quotient_action(A, M, W)
    AsL = quotient_action(As, M, W)
    dimL = W.dim - M.dim
    try:
        EL = lagrange_idempotents(AL, th)
        EsL = lagrange_idempotents(AsL, ts)
    except LinearAlgebraError as exc:
        raise ConstructionError(f"idempotents on the quotient failed: {exc}") from exc
    shape = [rank(x) for x in EL]
    # irreducibility certificate on L
    e0L = image(EsL[0])
    gen = closure_under([AL, AsL], e0L)
    inv = largest_invariant_in([AL, AsL], kernel(EsL[0]))
    cert = {"dim_E0star_L": e0L.dim, "generated_dim": gen.dim, "invariant_in_kernel_dim": inv.dim,
            "dim_W": W.dim, "dim_M": M.dim}
    if e0L.dim != 1 or gen.dim != dimL or inv.dim != 0:
        raise ConstructionError(f"irreducibility certificate failed: {cert}")
    return TDRealization(dimL, AL, AsL, EL, EsL, shape, tuple(th), tuple(ts), params_f, m, warnings, cert)


def _proportionality(X: Matrix, E: Matrix) -> FieldScalar:
    field = X.field
    mags = [(abs(x), k) for k, x in enumerate(E.a.flat)]
    mag, k = max(mags, key=lambda t: t[0])
    if (field.exact and mag == 0) or (not field.exact and field.is_zero(mag)):
        raise LinearAlgebraError("reference matrix is zero")
    c = FieldScalar(field, X.a.flat[k] / E.a.flat[k])
    if not X.equals(E * c, max(X.magnitude(), E.magnitude() * max(abs(c.value), 1))):
        raise LinearAlgebraError("matrix is not proportional to the reference idempotent")
    return c


def _split_from_system(A, E_star0, thetas, theta_stars) -> list:
    field, n = A.field, A.rows
    I = Matrix.identity(n, field)
    tau = I
    denom = scalar(1, field)
    out = []
    for i in range(len(thetas)):
        if i > 0:
            tau = tau @ (A - I * thetas[i - 1])
            denom = denom * (theta_stars[0] - theta_stars[i])
        out.append(_proportionality(E_star0 @ tau @ E_star0, E_star0) * denom)
    return out


def parameter_array_of(r: TDRealization) -> ParameterArray:
    """Read the parameter array of a realization in its stored orientation."""
    zetas = _split_from_system(r.A, r.Estar[0], r.thetas, r.theta_stars)
    q = r.params.q if r.params is not None else None
    return ParameterArray(tuple(r.thetas), tuple(r.theta_stars), SplitSequence(tuple(zetas)), q)


# -- axioms ------------------------------------------------------------------


def standard_orderings(adj: list[set], limit: int = 1000) -> list[tuple]:
    """Orderings in which every edge of ``adj`` joins consecutive positions."""
    k = len(adj)
    out = []

    def extend(order, placed):
        if len(out) >= limit:
            return
        if len(order) == k:
            out.append(tuple(order))
            return
        last = order[-1] if order else None
        for x in range(k):
            if x in placed:
                continue
            # every placed neighbour of x must be the previous node
            if any(y in placed and y != last for y in adj[x]):
                continue
            # the previous node may not keep unplaced neighbours other than x
            if last is not None and any(y not in placed and y != x for y in adj[last]):
                continue
            placed.add(x)
            order.append(x)
            extend(order, placed)
            order.pop()
            placed.discard(x)

    extend([], set())
    return out


def _adjacency(E, B, scale):
    k = len(E)
    adj = [set() for _ in range(k)]
    for i in range(k):
        for j in range(k):
            if i != j and not (E[i] @ B @ E[j]).is_zero(scale):
                adj[i].add(j)
    return adj


def _irreducibility(A, As, E, Es, orders, dual_orders, scale):
    """(verdict, detail, witness subspace) using a 1-dim end eigenspace when available."""
    field, n = A.field, A.rows
    ops = [A, As]
    ends = []
    for fam, ords in ((Es, dual_orders), (E, orders)):
        for o in ords:
            ends.append(fam[o[0]])
    for P in ends:
        img = image(P)
        if img.dim != 1:
            continue
        gen = closure_under(ops, img)
        if gen.dim != n:
            return False, "a one-dimensional eigenspace generates a proper invariant subspace", gen
        inv = largest_invariant_in(ops, kernel(P))
        if inv.dim != 0:
            return False, "the kernel of an end idempotent contains an invariant subspace", inv
        return True, "one-dimensional end eigenspace generates everything; its kernel has no invariant subspace", None
    # no decisive certificate: look for a proper invariant subspace generated by an eigenvector
    for fam in (E, Es):
        for P in fam:
            for vec in image(P).vectors():
                gen = closure_under(ops, Subspace(field, n, vec.reshape(1, -1)))
                if 0 < gen.dim < n:
                    return False, "an eigenvector generates a proper invariant subspace", gen
    return None, "no one-dimensional end eigenspace; irreducibility undetermined", None


def spectrum(M: Matrix, cfg: PrecisionConfig = PrecisionConfig()) -> list:
    """Distinct eigenvalues of an exact matrix: rational when they all are, else complex."""
    if not M.field.exact:
        raise ValueError("spectra of complex matrices must be supplied")
    p = charpoly(M)
    if p.degree <= 0:
        return []
    sq = p.divmod(p.gcd(p.derivative()))[0].monic()
    roots = rational_roots(sq)
    if roots is not None:
        return roots
    return poly_roots(sq, cfg)


def verify_td_axioms(A: Matrix, Astar: Matrix, thetas: Sequence | None = None, theta_stars: Sequence | None = None,
                     cfg: PrecisionConfig = PrecisionConfig()) -> Report:
    """Check the four TD pair axioms for ``A, A*``.

    The spectra are unordered eigenvalue sets, computed from the
    characteristic polynomials when not supplied. The standard orderings are
    recovered from the adjacency pattern ``E_i A* E_j != 0``.
    """
    rep = Report("TD pair axioms")
    if thetas is None:
        thetas = spectrum(A, cfg)
    if theta_stars is None:
        theta_stars = spectrum(Astar, cfg)
    candidates = [A.field, Astar.field] + [x.field for x in list(thetas) + list(theta_stars) if isinstance(x, FieldScalar)]
    field = next((f for f in candidates if not f.exact), QQ)
    A, Astar = A.lift(field), Astar.lift(field)
    n = A.rows
    th = [scalar(x, field) if not isinstance(x, FieldScalar) else x.lift(field) for x in thetas]
    ts = [scalar(x, field) if not isinstance(x, FieldScalar) else x.lift(field) for x in theta_stars]
    try:
        E = lagrange_idempotents(A, th)
        Es = lagrange_idempotents(Astar, ts)
    except LinearAlgebraError as exc:
        rep.add("(i) A and A* diagonalizable", False, str(exc))
        return rep
    nonzero = all(not x.is_zero() for x in E + Es)
    rep.add("(i) A and A* diagonalizable", True)
    rep.add("every supplied eigenvalue has a nonzero eigenspace", nonzero)
    scale = max(A.magnitude(), Astar.magnitude(), max(x.magnitude() for x in E + Es)) ** 3
    adj = _adjacency(E, Astar, scale)
    adj_s = _adjacency(Es, A, scale)
    orders = standard_orderings(adj)
    dual_orders = standard_orderings(adj_s)
    rep.add("(ii) A* acts tridiagonally on an ordering of the eigenspaces of A", bool(orders), f"{len(orders)} orderings")
    rep.add("(iii) A acts tridiagonally on an ordering of the eigenspaces of A*", bool(dual_orders), f"{len(dual_orders)} orderings")
    d = len(th) - 1
    rep.add("standard orderings are exactly one ordering and its reversal",
            (len(orders) == 2 and orders[0] == orders[1][::-1]) if d >= 1 else len(orders) == 1)
    rep.add("dual standard orderings are exactly one ordering and its reversal",
            (len(dual_orders) == 2 and dual_orders[0] == dual_orders[1][::-1]) if len(ts) > 1 else len(dual_orders) == 1)
    verdict, detail, witness = _irreducibility(A, Astar, E, Es, orders, dual_orders, scale)
    rep.add("(iv) no proper nonzero subspace is invariant under both", verdict, detail)
    rep.data["orderings"] = [list(o) for o in orders]
    rep.data["dual_orderings"] = [list(o) for o in dual_orders]
    if witness is not None:
        rep.data["invariant_subspace"] = witness
    arrays = []
    if verdict and orders and dual_orders:
        for o in orders:
            for od in dual_orders:
                P = Es[od[0]]
                if image(P).dim != 1:
                    continue
                tho = [th[i] for i in o]
                tso = [ts[i] for i in od]
                try:
                    zs = _split_from_system(A, P, tho, tso)
                except LinearAlgebraError:
                    continue
                arrays.append({"ordering": list(o), "dual_ordering": list(od), "thetas": tho, "theta_stars": tso, "zetas": zs})
    rep.data["parameter_arrays"] = arrays
    return rep


def shape_check(r: TDRealization) -> Report:
    rep = Report("shape")
    d = r.d
    rho = [rank(x) for x in r.E]
    rho_s = [rank(x) for x in r.Estar]
    rep.data["shape"] = rho
    rep.add("rho_i = dim E*_i L", rho == rho_s, f"{rho} vs {rho_s}")
    rep.add("rho_0 = 1", rho[0] == 1)
    rep.add("rho_i = rho_(d-i)", rho == rho[::-1])
    rep.add("unimodal", all(rho[i - 1] <= rho[i] for i in range(1, d // 2 + 1)))
    rep.add("rho_i <= C(d, i)", all(x <= comb(d, i) for i, x in enumerate(rho)))
    rep.add("sum of rho_i = dim L", sum(rho) == r.dim)
    return rep
