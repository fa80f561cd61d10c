"""Split sequences, Drinfel'd polynomials, and the inverse construction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import Matrix
from .poly import Polynomial, f_poly, poly_roots, rational_roots
from .scalars import (
    QQ,
    FieldScalar,
    PrecisionConfig,
    complex_field,
    scalar,
)
from .uqmodule import (
    RLCoefficients,
    StandardModule,
    check_feasible,
    standard_module,
)

__all__ = [
    "ProportionalityError",
    "ReconstructionError",
    "SplitSequence",
    "split_sequence",
    "zeta_cross",
    "normalized_split",
    "sigmas_to_zetas",
    "drinfeld_polynomial",
    "drinfeld_from_sigmas",
    "drinfeld_linear",
    "alpha_for_root",
    "alpha_quadratic",
    "module_for_polynomial",
    "module_for_split_sequence",
    "sigma_tensor_recursion",
    "zeta1_closed_form",
    "zeta1_cross_closed_form",
    "zeta1_difference_closed_form",
]


class ProportionalityError(ArithmeticError):
    """A vector expected to be a multiple of a basis vector was not."""


class ReconstructionError(ArithmeticError):
    """A reconstructed module failed to reproduce its target data."""


@dataclass(frozen=True)
class SplitSequence:
    zetas: tuple

    def __post_init__(self):
        if not self.zetas:
            raise ValueError("a split sequence has at least one term")
        if not self.zetas[0].close(1):
            raise ValueError("zeta_0 must equal 1")

    @classmethod
    def of(cls, values, field=QQ) -> "SplitSequence":
        return cls(tuple(scalar(v, field) for v in values))

    @property
    def d(self) -> int:
        return len(self.zetas) - 1

    @property
    def field(self):
        return self.zetas[0].field

    def __getitem__(self, i):
        return self.zetas[i]

    def __len__(self):
        return len(self.zetas)

    def __iter__(self):
        return iter(self.zetas)

    def close(self, other: "SplitSequence") -> bool:
        return len(self) == len(other) and all(a.close(b) for a, b in zip(self, other))


def _proportional(field, vec, index, what):
    """The coefficient of basis vector ``index`` in ``vec``, which must be its only entry."""
    scale = max([abs(x) for x in vec] + [1]) if not field.exact else 1
    for j, x in enumerate(vec):
        if j != index and not field.is_zero(x, scale):
            raise ProportionalityError(f"{what} is not a multiple of the basis vector {index}")
    return FieldScalar(field, vec[index])


def split_sequence(m: StandardModule) -> SplitSequence:
    """The eigenvalues of ``L^i R^i`` on the highest weight vector ``u_{}``."""
    if m.R is None:
        raise ValueError("module carries no R, L")
    field = m.field
    v = np.full(m.dim, field.zero, dtype=object)
    v[0] = field.one
    zetas = [FieldScalar(field, field.one)]
    r = v
    R, L = m.R.a, m.L.a
    for i in range(1, m.d + 1):
        r = R.dot(r)
        w = r
        for _ in range(i):
            w = L.dot(w)
        zetas.append(_proportional(field, w, 0, f"L^{i} R^{i} u"))
    return SplitSequence(tuple(zetas))


def zeta_cross(m: StandardModule) -> FieldScalar:
    """The eigenvalue of ``RL`` on the one-dimensional top weight space."""
    if m.d < 1:
        raise ValueError("zeta_cross needs diameter at least 1")
    field = m.field
    top = m.dim - 1
    v = np.full(m.dim, field.zero, dtype=object)
    v[top] = field.one
    w = m.R.a.dot(m.L.a.dot(v))
    return _proportional(field, w, top, "R L u_top")


def _norm_factors(q: FieldScalar, d: int) -> list[FieldScalar]:
    """``prod_{k<=i} (q^k - q^-k)^2`` for ``0 <= i <= d``."""
    check_feasible(q, d)
    out = [scalar(1, q.field)]
    for k in range(1, d + 1):
        out.append(out[-1] * (q ** k - q ** (-k)) ** 2)
    return out


def normalized_split(zetas: SplitSequence | Sequence, q: FieldScalar) -> list[FieldScalar]:
    zs = list(zetas)
    field = q.field if all(z.field.exact for z in zs) else zs[0].field
    q = q.lift(field)
    norms = _norm_factors(q, len(zs) - 1)
    return [z.lift(field) / n for z, n in zip(zs, norms)]


def sigmas_to_zetas(sigmas: Sequence[FieldScalar], q: FieldScalar) -> SplitSequence:
    field = sigmas[0].field
    norms = _norm_factors(q.lift(field), len(sigmas) - 1)
    return SplitSequence(tuple(s * n for s, n in zip(sigmas, norms)))


def drinfeld_from_sigmas(sigmas: Sequence[FieldScalar], coeffs) -> Polynomial:
    """``(-1)^d sum_i sigma_{d-i} f_0 ... f_{i-1}``.

    ``coeffs`` exposes ``q``, ``bbstar`` and ``ccstar``.
    """
    d = len(sigmas) - 1
    field = sigmas[0].field
    prod = Polynomial(field, [1])
    total = Polynomial(field, [])
    for i in range(d + 1):
        total = total + prod * sigmas[d - i]
        if i < d:
            prod = prod * f_poly(i, coeffs).lift(field)
    if d % 2:
        total = -total
    return total


def drinfeld_polynomial(m: StandardModule) -> Polynomial:
    """The Drinfel'd polynomial of ``m`` (monic of degree ``d``, checked)."""
    sig = normalized_split(split_sequence(m), m.q)
    P = drinfeld_from_sigmas(sig, m.coeffs)
    if P.degree != m.d or not P.leading.close(1):
        raise ArithmeticError("Drinfel'd polynomial is not monic of degree d")
    return P


def _dl_norm(q):
    return q.inv() * (q - q.inv()) ** 2


def drinfeld_linear(alpha, params, coeffs: RLCoefficients) -> Polynomial:
    """``lambda - (alpha u u* q^-2 + alpha^-1 v v* q^2) / (q^-1 (q - q^-1)^2)``.

    ``params`` is accepted for symmetry with the other constructors; only
    ``coeffs`` (which carries q) is needed.
    """
    field = coeffs.field
    alpha = scalar(alpha, field) if not isinstance(alpha, FieldScalar) else alpha
    if alpha.is_zero():
        raise ValueError("alpha must be nonzero")
    if alpha.field != field:
        coeffs = coeffs.lift(alpha.field)
        field = alpha.field
    q = coeffs.q
    const = (alpha * coeffs.uustar * q ** (-2) + alpha.inv() * coeffs.vvstar * q ** 2) / _dl_norm(q)
    return Polynomial(field, [-const, 1])


def alpha_quadratic(r: FieldScalar, coeffs: RLCoefficients):
    """Coefficients (A, B, C) of ``A alpha^2 + B alpha + C = 0``, whose roots give ``P = lambda - r``."""
    q = coeffs.q
    A = coeffs.uustar * q ** (-2)
    B = -r * _dl_norm(q)
    C = coeffs.vvstar * q ** 2
    return A, B, C


def _pick(field, roots):
    """Larger modulus first; equal moduli are ordered by (real, imaginary)."""
    a, b = roots
    ma, mb = abs(a.value), abs(b.value)
    scale = max(ma, mb, 1)
    if field.exact:
        if ma != mb:
            return a if ma > mb else b
        return max(a, b, key=lambda x: x.value)
    if not field.is_zero(ma - mb, scale):
        return a if ma > mb else b
    key = lambda x: (x.value.real, x.value.imag)
    return a if key(a) >= key(b) else b


def alpha_for_root(r, params, coeffs: RLCoefficients, cfg: PrecisionConfig = PrecisionConfig()) -> FieldScalar:
    """A nonzero alpha with Drinfel'd polynomial ``lambda - r``.

    Both roots of the quadratic qualify; their product is ``q^4 v v* / (u u*)``.
    The result stays exact when ``r`` and ``coeffs`` are rational and the
    discriminant is a rational square; otherwise it is complex at ``cfg``.
    """
    if not isinstance(r, FieldScalar):
        r = scalar(r, coeffs.field)
    if r.field.exact and coeffs.field.exact:
        A, B, C = alpha_quadratic(r, coeffs)
        disc = B * B - A * C * 4
        s = QQ.sqrt(disc.value)
        if s is not None:
            roots = ((-B + s) / (A * 2), (-B - s) / (A * 2))
            return _pick(QQ, roots)
    field = complex_field(cfg) if r.field.exact else r.field
    A, B, C = alpha_quadratic(r.lift(field), coeffs.lift(field))
    disc = B * B - A * C * 4
    s = FieldScalar(field, field.sqrt(disc.value))
    # avoid cancellation: take the sign making |-B -+ s| large
    if abs((-B + s).value) >= abs((-B - s).value):
        big = (-B + s) / (A * 2)
    else:
        big = (-B - s) / (A * 2)
    small = C / (A * big)
    return _pick(field, (big, small))


def module_for_polynomial(P: Polynomial, params, coeffs: RLCoefficients, cfg: PrecisionConfig = PrecisionConfig()) -> StandardModule:
    """A standard module whose Drinfel'd polynomial is the monic ``P``."""
    if P.is_zero() or not P.leading.close(1):
        raise ValueError("P must be monic")
    d = P.degree
    q = coeffs.q
    if d == 0:
        return standard_module([], q.lift(P.field), coeffs.lift(P.field))
    roots = None
    if P.field.exact and coeffs.field.exact:
        roots = rational_roots(P)
    if roots is None:
        roots = poly_roots(P, cfg if P.field.exact else P.field.config)
    alphas = [alpha_for_root(r, params, coeffs, cfg) for r in roots]
    field = next((a.field for a in alphas if not a.field.exact), alphas[0].field)
    alphas = [a.lift(field) for a in alphas]
    m = standard_module(alphas, q.lift(field), coeffs.lift(field))
    got = drinfeld_polynomial(m)
    if not got.close(P.lift(field)):
        raise ReconstructionError("the constructed module has a different Drinfel'd polynomial")
    return m


def module_for_split_sequence(zetas, params, coeffs: RLCoefficients, cfg: PrecisionConfig = PrecisionConfig()) -> StandardModule:
    """A standard module with the prescribed split sequence."""
    if not isinstance(zetas, SplitSequence):
        zetas = SplitSequence(tuple(zetas))
    q = coeffs.q
    field = zetas.field
    sig = normalized_split(zetas, q.lift(field))
    P = drinfeld_from_sigmas(sig, coeffs.lift(field))
    m = module_for_polynomial(P, params, coeffs, cfg)
    got = split_sequence(m)
    target = SplitSequence(tuple(z.lift(m.field) for z in zetas))
    if not got.close(target):
        raise ReconstructionError("the constructed module has a different split sequence")
    return m


def sigma_tensor_recursion(sigma1_V: FieldScalar, sigmas_W: Sequence[FieldScalar], q: FieldScalar, bbstar, ccstar) -> list[FieldScalar]:
    """Normalized split sequence of ``V (x) W`` from those of V (diameter 1) and W."""
    d = len(sigmas_W)  # W has diameter d-1
    out = [scalar(1, q.field)]
    for n in range(1, d):
        term = (q ** (d - n) - q ** (n - d)) * (bbstar * q ** (n - d) - ccstar * q ** (d - n))
        out.append(term * sigmas_W[n - 1] + sigmas_W[n] + sigma1_V * sigmas_W[n - 1])
    out.append(sigma1_V * sigmas_W[d - 1])
    return out


def _zeta1_common(alphas, coeffs):
    q = coeffs.q
    sa = sum((a for a in alphas), scalar(0, q.field))
    sinv = sum((a.inv() for a in alphas), scalar(0, q.field))
    return coeffs.uustar * q.inv() * sa + coeffs.vvstar * q ** 3 * sinv


def zeta1_closed_form(alphas: Sequence[FieldScalar], coeffs: RLCoefficients) -> FieldScalar:
    q, d = coeffs.q, len(alphas)
    tail = (q - q.inv()) * (q ** d - q ** (-d)) * (coeffs.bbstar * q ** (1 - d) + coeffs.ccstar * q ** (d - 1))
    return _zeta1_common(alphas, coeffs) - tail


def zeta1_cross_closed_form(alphas: Sequence[FieldScalar], coeffs: RLCoefficients) -> FieldScalar:
    q, d = coeffs.q, len(alphas)
    tail = (q - q.inv()) * (q ** d - q ** (-d)) * (coeffs.bbstar * q ** (d - 1) + coeffs.ccstar * q ** (1 - d))
    return _zeta1_common(alphas, coeffs) - tail


def zeta1_difference_closed_form(q: FieldScalar, d: int, bbstar, ccstar) -> FieldScalar:
    return (q - q.inv()) * (q ** (d - 1) - q ** (1 - d)) * (q ** d - q ** (-d)) * (bbstar - ccstar)
