"""Evaluation modules, their tensor products, and the operators R and L.

Basis vectors of a module of diameter ``d`` are indexed by subsets ``s`` of
``{1..d}``; the subset ``s`` has index ``sum(2**(i-1) for i in s)``.  Factor
``i`` of a tensor product therefore sits at bit ``i-1``, so the matrix of
``X (x) Y`` in this basis is ``np.kron(Y, X)``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import comb
from typing import Sequence

import numpy as np

from .linalg import Matrix, Subspace, apply, contains, _full, _identity_arr
from .report import Report
from .scalars import QQ, FieldScalar, FieldZeroDivisionError, q_bracket, scalar

__all__ = [
    "InfeasibleError",
    "RLCoefficients",
    "StandardModule",
    "evaluation_module",
    "standard_module",
    "tensor_product",
    "verify_uq_relations",
    "rl_coefficients",
    "rl_operators",
    "verify_rl_properties",
    "verify_coproduct_powers",
    "check_feasible",
    "unify_fields",
    "popcount",
]

GENERATORS = ("K0", "K1", "K0inv", "K1inv", "e0p", "e0m", "e1p", "e1m")


class InfeasibleError(ValueError):
    """``q^(2i) = 1`` for some ``1 <= i <= d``, or another degenerate input."""


def popcount(x: int) -> int:
    return bin(x).count("1")


def unify_fields(*values):
    """Coerce numbers and scalars to one field (complex wins over exact)."""
    fields = [v.field for v in values if isinstance(v, FieldScalar)]
    field = next((f for f in fields if not f.exact), QQ)
    return field, [scalar(v, field) for v in values]


def check_feasible(q: FieldScalar, d: int):
    if q.is_zero():
        raise InfeasibleError("q must be nonzero")
    for i in range(1, max(d, 1) + 1):
        if (q ** (2 * i) - 1).is_zero(scale=max(abs(q) ** (2 * i), 1)):
            raise InfeasibleError(f"q^{2 * i} = 1, so diameter {d} is not feasible")


@dataclass(frozen=True)
class RLCoefficients:
    """The coefficients u, v, u*, v* of R and L."""

    q: FieldScalar
    u: FieldScalar
    v: FieldScalar
    ustar: FieldScalar
    vstar: FieldScalar

    def __post_init__(self):
        for name in ("u", "v", "ustar", "vstar"):
            if getattr(self, name).is_zero():
                raise ValueError(f"{name} must be nonzero")

    @property
    def field(self):
        return self.q.field

    @property
    def _norm(self):
        q = self.q
        return q.inv() * (q - q.inv()) ** 2

    @property
    def bbstar(self) -> FieldScalar:
        """The product b b* determined by ``u v* = -b b* q^-1 (q - q^-1)^2``."""
        return -(self.u * self.vstar) / self._norm

    @property
    def ccstar(self) -> FieldScalar:
        return -(self.v * self.ustar) / self._norm

    @property
    def uustar(self) -> FieldScalar:
        return self.u * self.ustar

    @property
    def vvstar(self) -> FieldScalar:
        return self.v * self.vstar

    def lift(self, field) -> "RLCoefficients":
        return RLCoefficients(*(x.lift(field) for x in (self.q, self.u, self.v, self.ustar, self.vstar)))

    def rescaled(self, t) -> "RLCoefficients":
        """``u -> t u``, ``v* -> v*/t`` (and the same for ``v``, ``u*``); products are unchanged."""
        t = scalar(t, self.field)
        return replace(self, u=self.u * t, vstar=self.vstar / t, v=self.v * t, ustar=self.ustar / t)


def rl_coefficients(params, u=1, v=1) -> RLCoefficients:
    """Solve the product constraints for ``v*`` and ``u*`` given ``u`` and ``v``.

    ``params`` needs ``q``, ``b``, ``c``, ``bstar`` and ``cstar``.
    """
    q = params.q
    u, v = scalar(u, q.field), scalar(v, q.field)
    if u.is_zero() or v.is_zero():
        raise ValueError("u and v must be nonzero")
    norm = q.inv() * (q - q.inv()) ** 2
    vstar = -(params.b * params.bstar) * norm / u
    ustar = -(params.c * params.cstar) * norm / v
    return RLCoefficients(q, u, v, ustar, vstar)


@dataclass(frozen=True, eq=False)
class StandardModule:
    """V(alpha_1) (x) ... (x) V(alpha_d) with its generator matrices."""

    q: FieldScalar
    alphas: tuple
    K0: Matrix
    K1: Matrix
    K0inv: Matrix
    K1inv: Matrix
    e0p: Matrix
    e0m: Matrix
    e1p: Matrix
    e1m: Matrix
    coeffs: RLCoefficients | None = None
    R: Matrix | None = None
    L: Matrix | None = None

    @property
    def d(self) -> int:
        return len(self.alphas)

    @property
    def dim(self) -> int:
        return 1 << self.d

    @property
    def field(self):
        return self.q.field

    def generators(self) -> dict:
        return {g: getattr(self, g) for g in GENERATORS}

    def basis_index(self, subset) -> int:
        idx = 0
        for i in subset:
            if not 1 <= i <= self.d:
                raise IndexError(f"{i} is not in 1..{self.d}")
            idx |= 1 << (i - 1)
        return idx

    def subset_of(self, index: int) -> frozenset:
        return frozenset(i + 1 for i in range(self.d) if index >> i & 1)

    def weight_indices(self, i: int) -> list[int]:
        return [s for s in range(self.dim) if popcount(s) == i]

    @property
    def weight_spaces(self) -> list[Subspace]:
        out = []
        for i in range(self.d + 1):
            rows = _full(self.field, (comb(self.d, i), self.dim))
            for r, s in enumerate(self.weight_indices(i)):
                rows[r, s] = self.field.one
            out.append(Subspace(self.field, self.dim, rows, tuple(self.weight_indices(i))))
        return out

    def with_rl(self, coeffs: RLCoefficients) -> "StandardModule":
        """A copy carrying R and L built from ``coeffs``."""
        if coeffs.field != self.field:
            coeffs = coeffs.lift(self.field)
        R, L = rl_operators(self, coeffs)
        return replace(self, coeffs=coeffs, R=R, L=L)

    def lift(self, field) -> "StandardModule":
        if field == self.field:
            return self
        kw = {g: getattr(self, g).lift(field) for g in GENERATORS}
        out = StandardModule(self.q.lift(field), tuple(a.lift(field) for a in self.alphas), **kw)
        return out.with_rl(self.coeffs.lift(field)) if self.coeffs is not None else out


# -- construction ------------------------------------------------------------


def _kdiags(field, q, d):
    n = 1 << d
    qp = {k: (q ** k).value for k in range(-d, d + 1)}
    k0 = [qp[2 * popcount(s) - d] for s in range(n)]
    k1 = [qp[d - 2 * popcount(s)] for s in range(n)]
    return k0, k1


def _diag(field, entries):
    arr = _full(field, (len(entries), len(entries)))
    for i, x in enumerate(entries):
        arr[i, i] = x
    return arr


def _closed_form(q: FieldScalar, alphas: Sequence[FieldScalar]) -> dict:
    """Generator matrices from the explicit sums over ``i in s`` / ``i not in s``."""
    field = q.field
    d = len(alphas)
    n = 1 << d
    full = n - 1
    qp = {k: (q ** k).value for k in range(-d - 1, d + 2)}
    al = [a.value for a in alphas]
    alinv = [(a.inv()).value for a in alphas]
    mats = {g: _full(field, (n, n)) for g in ("e0p", "e0m", "e1p", "e1m")}
    for s in range(n):
        for i in range(1, d + 1):
            bit = 1 << (i - 1)
            before = bit - 1
            after = full ^ ((bit << 1) - 1)
            b_in = popcount(s & before)
            b_out = popcount(before) - b_in
            a_in = popcount(s & after)
            a_out = popcount(after) - a_in
            if s & bit:
                t = s ^ bit
                mats["e1p"][t, s] = qp[a_out - a_in]
                mats["e0m"][t, s] = alinv[i - 1] * qp[b_out - b_in + 1]
            else:
                t = s | bit
                mats["e1m"][t, s] = qp[b_in - b_out]
                mats["e0p"][t, s] = al[i - 1] * qp[a_in - a_out - 1]
    k0, k1 = _kdiags(field, q, d)
    mats["K0"] = _diag(field, k0)
    mats["K1"] = _diag(field, k1)
    mats["K0inv"] = _diag(field, [field.one / x for x in k0])
    mats["K1inv"] = _diag(field, [field.one / x for x in k1])
    return {g: Matrix(field, m) for g, m in mats.items()}


def _evaluation_arrays(q: FieldScalar, alpha: FieldScalar) -> dict:
    """The two-dimensional action on the basis x = u_{} (index 0), y = u_{1} (index 1)."""
    field = q.field
    z, o = field.zero, field.one
    qv, qi = q.value, q.inv().value
    a, ai = alpha.value, alpha.inv().value
    m = lambda rows: np.array(rows, dtype=object)
    return {
        "K0": m([[qi, z], [z, qv]]),
        "K1": m([[qv, z], [z, qi]]),
        "K0inv": m([[qv, z], [z, qi]]),
        "K1inv": m([[qi, z], [z, qv]]),
        # e1^- x = y, e1^+ y = x, e0^- y = q alpha^-1 x, e0^+ x = q^-1 alpha y
        "e1m": m([[z, z], [o, z]]),
        "e1p": m([[z, o], [z, z]]),
        "e0m": m([[z, qv * ai], [z, z]]),
        "e0p": m([[z, z], [qi * a, z]]),
    }


def _trivial_arrays(field) -> dict:
    one = np.array([[field.one]], dtype=object)
    zero = np.array([[field.zero]], dtype=object)
    return {g: (one if g.startswith("K") else zero) for g in GENERATORS}


def _tensor_arrays(field, V: dict, W: dict) -> dict:
    """Arrays of the action on V (x) W, V occupying the low bits."""
    IV = _identity_arr(field, V["K0"].shape[0])
    IW = _identity_arr(field, W["K0"].shape[0])
    out = {}
    for k in ("0", "1"):
        out["K" + k] = np.kron(W["K" + k], V["K" + k])
        out["K" + k + "inv"] = np.kron(W["K" + k + "inv"], V["K" + k + "inv"])
        # e^+ (v (x) w) = e^+ v (x) K w + v (x) e^+ w
        out["e" + k + "p"] = np.kron(W["K" + k], V["e" + k + "p"]) + np.kron(W["e" + k + "p"], IV)
        # e^- (v (x) w) = e^- v (x) w + K^-1 v (x) e^- w
        out["e" + k + "m"] = np.kron(IW, V["e" + k + "m"]) + np.kron(W["e" + k + "m"], V["K" + k + "inv"])
    return out


def _make(q, alphas, arrays, coeffs=None) -> StandardModule:
    field = q.field
    mats = {g: Matrix(field, arrays[g]) if isinstance(arrays[g], np.ndarray) else arrays[g] for g in GENERATORS}
    m = StandardModule(q, tuple(alphas), **mats)
    return m.with_rl(coeffs) if coeffs is not None else m


def evaluation_module(alpha, q, coeffs: RLCoefficients | None = None) -> StandardModule:
    """The two-dimensional module V(alpha)."""
    field, (q, alpha) = unify_fields(q, alpha)
    if alpha.is_zero():
        raise ValueError("alpha must be nonzero")
    check_feasible(q, 1)
    return _make(q, [alpha], _evaluation_arrays(q, alpha), coeffs)


def standard_module(alphas, q, coeffs: RLCoefficients | None = None, check: bool = True) -> StandardModule:
    """``V(alpha_1) (x) ... (x) V(alpha_d)``.

    The generators are computed from the closed-form sums; with ``check`` they
    are also built by iterated tensoring of evaluation modules and the two
    results must agree (exactly on the exact backend).
    """
    field, vals = unify_fields(q, *alphas)
    q, alphas = vals[0], vals[1:]
    if any(a.is_zero() for a in alphas):
        raise ValueError("every alpha must be nonzero")
    d = len(alphas)
    check_feasible(q, d)
    if d == 0:
        return _make(q, [], _trivial_arrays(field), coeffs)
    mats = _closed_form(q, alphas)
    if check:
        arrays = _evaluation_arrays(q, alphas[0])
        for a in alphas[1:]:
            arrays = _tensor_arrays(field, arrays, _evaluation_arrays(q, a))
        for g in GENERATORS:
            other = Matrix(field, arrays[g])
            if not mats[g].equals(other):
                raise AssertionError(f"closed form and tensor construction disagree on {g}")
    return _make(q, alphas, mats, coeffs)


def tensor_product(V: StandardModule, W: StandardModule) -> StandardModule:
    """V (x) W; its alphas are those of V followed by those of W."""
    if V.field != W.field or V.q != W.q:
        raise ValueError("modules must share q and the field")
    if V.d == 0:
        arrays = {g: getattr(W, g).a for g in GENERATORS}
    elif W.d == 0:
        arrays = {g: getattr(V, g).a for g in GENERATORS}
    else:
        arrays = _tensor_arrays(V.field, {g: getattr(V, g).a for g in GENERATORS}, {g: getattr(W, g).a for g in GENERATORS})
    check_feasible(V.q, V.d + W.d)
    coeffs = V.coeffs or W.coeffs
    return _make(V.q, V.alphas + W.alphas, arrays, coeffs)


def rl_operators(m: StandardModule, coeffs: RLCoefficients):
    """``R = u e0+ + v e1- K1`` and ``L = u* e1+ + v* e0- K0``."""
    R = m.e0p * coeffs.u + (m.e1m @ m.K1) * coeffs.v
    L = m.e1p * coeffs.ustar + (m.e0m @ m.K0) * coeffs.vstar
    return R, L


# -- verification ------------------------------------------------------------


def _check_eq(report, name, lhs: Matrix, rhs: Matrix, scale=None):
    if lhs.field.exact:
        return report.add(name, lhs == rhs)
    if scale is None:
        scale = max(lhs.magnitude(), rhs.magnitude())
    diff = lhs - rhs
    ok = diff.is_zero(scale)
    return report.add(name, ok, "" if ok else f"residual {float(diff.magnitude()):.3e}")


def _serre(X: Matrix, Y: Matrix, br3: FieldScalar) -> Matrix:
    X2 = X @ X
    X3 = X2 @ X
    return X3 @ Y - (X2 @ Y @ X) * br3 + (X @ Y @ X2) * br3 - Y @ X3


def verify_uq_relations(m: StandardModule) -> Report:
    """Check the Chevalley relations and the q-Serre relations on ``m``."""
    rep = Report("quantum affine relations")
    q, field, n = m.q, m.field, m.dim
    I = Matrix.identity(n, field)
    Z = Matrix.zeros(n, n, field)
    g = m.generators()
    scale = max([x.magnitude() for x in g.values()] + [1])
    for k in ("0", "1"):
        _check_eq(rep, f"K{k} K{k}^-1 = 1", g["K" + k] @ g["K" + k + "inv"], I)
        _check_eq(rep, f"K{k}^-1 K{k} = 1", g["K" + k + "inv"] @ g["K" + k], I)
    _check_eq(rep, "K0 K1 = K1 K0", g["K0"] @ g["K1"], g["K1"] @ g["K0"])
    q2, qm2 = q ** 2, q ** (-2)
    for i in ("0", "1"):
        for j in ("0", "1"):
            for sgn, up, down in (("p", q2, qm2), ("m", qm2, q2)):
                e = g["e" + j + sgn]
                lhs = g["K" + i] @ e @ g["K" + i + "inv"]
                factor = up if i == j else down
                sym = "+" if sgn == "p" else "-"
                _check_eq(rep, f"K{i} e{j}{sym} K{i}^-1 = q^({'+' if factor is q2 else '-'}2) e{j}{sym}", lhs, e * factor, scale ** 3)
    qq = q - q.inv()
    for i in ("0", "1"):
        lhs = g["e" + i + "p"] @ g["e" + i + "m"] - g["e" + i + "m"] @ g["e" + i + "p"]
        rhs = (g["K" + i] - g["K" + i + "inv"]) * qq.inv()
        _check_eq(rep, f"[e{i}+, e{i}-] = (K{i} - K{i}^-1)/(q - q^-1)", lhs, rhs, scale ** 2)
    _check_eq(rep, "[e0+, e1-] = 0", g["e0p"] @ g["e1m"] - g["e1m"] @ g["e0p"], Z, scale ** 2)
    _check_eq(rep, "[e0-, e1+] = 0", g["e0m"] @ g["e1p"] - g["e1p"] @ g["e0m"], Z, scale ** 2)
    br3 = q_bracket(3, q)
    for sgn, sym in (("p", "+"), ("m", "-")):
        for i, j in (("0", "1"), ("1", "0")):
            lhs = _serre(g["e" + i + sgn], g["e" + j + sgn], br3)
            _check_eq(rep, f"q-Serre (e{i}{sym})^3 e{j}{sym}", lhs, Z, abs(br3) * scale ** 4)
    return rep


def verify_rl_properties(m: StandardModule) -> Report:
    """K-conjugation of R, L; both cubic relations; [L^n R^n, K_i] = 0; weight shifts."""
    if m.R is None or m.L is None:
        raise ValueError("module carries no R, L; use with_rl first")
    rep = Report("R/L structure")
    q, field, n = m.q, m.field, m.dim
    R, L, K0, K1 = m.R, m.L, m.K0, m.K1
    scale = max(R.magnitude(), L.magnitude(), K0.magnitude(), K1.magnitude(), 1)
    _check_eq(rep, "K0 R K0^-1 = q^2 R", K0 @ R @ m.K0inv, R * q ** 2, scale ** 3)
    _check_eq(rep, "K1 R K1^-1 = q^-2 R", K1 @ R @ m.K1inv, R * q ** (-2), scale ** 3)
    _check_eq(rep, "K0 L K0^-1 = q^-2 L", K0 @ L @ m.K0inv, L * q ** (-2), scale ** 3)
    _check_eq(rep, "K1 L K1^-1 = q^2 L", K1 @ L @ m.K1inv, L * q ** 2, scale ** 3)

    br3 = q_bracket(3, q)
    pref = (q - q ** -1) * (q ** 2 - q ** -2) * (q ** 3 - q ** -3)
    bb, cc = m.coeffs.bbstar, m.coeffs.ccstar
    R2, L2 = R @ R, L @ L
    lhs = _serre(R, L, br3)
    rhs = (K1 @ R2 @ K1 * cc - K0 @ R2 @ K0 * bb) * pref
    _check_eq(rep, "cubic relation in R^3 L", lhs, rhs, abs(br3) * scale ** 4)
    lhs = _serre(L, R, br3)
    rhs = (K0 @ L2 @ K0 * bb - K1 @ L2 @ K1 * cc) * pref
    _check_eq(rep, "cubic relation in L^3 R", lhs, rhs, abs(br3) * scale ** 4)

    Rn = Matrix.identity(n, field)
    Ln = Matrix.identity(n, field)
    for k in range(1, m.d + 1):
        Rn, Ln = Rn @ R, Ln @ L
        P = Ln @ Rn
        s = P.magnitude() * scale
        _check_eq(rep, f"[L^{k} R^{k}, K0] = 0", P @ K0, K0 @ P, s)
        _check_eq(rep, f"[L^{k} R^{k}, K1] = 0", P @ K1, K1 @ P, s)

    U = m.weight_spaces
    for i in range(m.d + 1):
        up = U[i + 1] if i < m.d else Subspace.zero(n, field)
        down = U[i - 1] if i > 0 else Subspace.zero(n, field)
        rep.add(f"R U_{i} in U_{i + 1}", contains(up, apply(R, U[i])))
        rep.add(f"L U_{i} in U_{i - 1}", contains(down, apply(L, U[i])))
    return rep


def verify_coproduct_powers(V: StandardModule, W: StandardModule, nmax: int | None = None) -> Report:
    """Compare R^n, L^n on V (x) W with the expansion through ``[n]_q``.

    ``V`` must have diameter 1 and both modules must carry the same R, L
    coefficients.
    """
    if V.d != 1:
        raise ValueError("V must be an evaluation module")
    coeffs = V.coeffs
    if coeffs is None:
        raise ValueError("modules must carry R, L")
    W = W.with_rl(coeffs)
    VW = tensor_product(V, W)
    q, field = V.q, V.field
    rep = Report("coproduct powers")
    nmax = VW.d if nmax is None else nmax
    kron = lambda x, y: Matrix(field, np.kron(y.a, x.a))  # x (x) y in our basis
    IV = Matrix.identity(2, field)
    RW = [Matrix.identity(W.dim, field)]
    LW = [Matrix.identity(W.dim, field)]
    for _ in range(nmax):
        RW.append(RW[-1] @ W.R)
        LW.append(LW[-1] @ W.L)
    Rn = Matrix.identity(VW.dim, field)
    Ln = Matrix.identity(VW.dim, field)
    u, v, us, vs = coeffs.u, coeffs.v, coeffs.ustar, coeffs.vstar
    for k in range(1, nmax + 1):
        Rn, Ln = Rn @ VW.R, Ln @ VW.L
        br = q_bracket(k, q)
        Rk = (kron(V.e0p, RW[k - 1] @ W.K0) * (u * q ** (k - 1))
              + kron(V.e1m @ V.K1, RW[k - 1] @ W.K1) * (v * q ** (1 - k)))
        Lk = (kron(V.e1p, W.K1 @ LW[k - 1]) * (us * q ** (1 - k))
              + kron(V.e0m @ V.K0, W.K0 @ LW[k - 1]) * (vs * q ** (k - 1)))
        _check_eq(rep, f"R^{k} expansion", Rn, kron(IV, RW[k]) + Rk * br)
        _check_eq(rep, f"L^{k} expansion", Ln, kron(IV, LW[k]) + Lk * br)
    return rep
