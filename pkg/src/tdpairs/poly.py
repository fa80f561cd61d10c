"""Dense univariate polynomials over a scalar field, plus root extraction."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import gmpy2
import mpmath

from .scalars import (
    QQ,
    BackendMismatchError,
    FieldScalar,
    PrecisionConfig,
    common_field,
    complex_field,
)

__all__ = [
    "Polynomial",
    "RootFindingError",
    "poly_arith",
    "poly_eval",
    "tau_eta",
    "f_poly",
    "poly_roots",
    "rational_roots",
]


class RootFindingError(ArithmeticError):
    """The simultaneous root iteration did not reach the residual target."""

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


def _trim(field, coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class Polynomial:
    """A polynomial in one indeterminate, coefficients in ascending degree."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs=()):
        self.field = field
        self.coeffs = _trim(field, (field(c) for c in coeffs))

    @classmethod
    def _raw(cls, field, coeffs):
        p = object.__new__(cls)
        p.field = field
        p.coeffs = _trim(field, coeffs)
        return p

    @classmethod
    def constant(cls, c, field=QQ):
        return cls(field, [c])

    @classmethod
    def indeterminate(cls, field=QQ):
        return cls(field, [0, 1])

    @classmethod
    def from_roots(cls, roots: Sequence[FieldScalar], field=None):
        field = field or (roots[0].field if roots else QQ)
        p = cls(field, [1])
        for r in roots:
            p = p * cls._raw(field, (-field(r), field.one))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> FieldScalar:
        return FieldScalar(self.field, self.coeffs[-1] if self.coeffs else 0)

    def coefficient(self, k: int) -> FieldScalar:
        v = self.coeffs[k] if 0 <= k < len(self.coeffs) else self.field.zero
        return FieldScalar(self.field, v)

    def scalars(self) -> list[FieldScalar]:
        return [FieldScalar(self.field, c) for c in self.coeffs]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> "Polynomial":
        lead = self.coeffs[-1]
        return Polynomial._raw(self.field, [c / lead for c in self.coeffs])

    def lift(self, field) -> "Polynomial":
        if field is self.field or field == self.field:
            return self
        if not self.field.exact:
            raise BackendMismatchError("complex polynomials cannot be lowered to the exact field")
        return Polynomial._raw(field, [field(c) for c in self.coeffs])

    def _other(self, other):
        if isinstance(other, Polynomial):
            common_field(self.field, other.field)
            return other
        if isinstance(other, FieldScalar):
            common_field(self.field, other.field)
            return Polynomial._raw(self.field, (other.value,))
        if isinstance(other, (int, Fraction)) or type(other) is type(gmpy2.mpq()):
            return Polynomial._raw(self.field, (self.field(other),))
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        n = max(len(self.coeffs), len(o.coeffs))
        z = self.field.zero
        a = self.coeffs + (z,) * (n - len(self.coeffs))
        b = o.coeffs + (z,) * (n - len(o.coeffs))
        return Polynomial._raw(self.field, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        if not self.coeffs or not o.coeffs:
            return Polynomial._raw(self.field, ())
        out = [self.field.zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return Polynomial._raw(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Polynomial._raw(self.field, (self.field.one,))
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            o = self._other(other)
            if o is NotImplemented:
                return o
            other = o
        if self.field != other.field:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def close(self, other: "Polynomial") -> bool:
        """Coefficientwise equality; relative to the largest coefficient in complex mode."""
        common_field(self.field, other.field)
        if self.field.exact:
            return self == other
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.field.zero
        a = self.coeffs + (z,) * (n - len(self.coeffs))
        b = other.coeffs + (z,) * (n - len(other.coeffs))
        scale = max([abs(c) for c in a + b] + [1])
        return all(self.field.is_zero(x - y, scale) for x, y in zip(a, b))

    def __call__(self, x):
        """Horner evaluation."""
        if isinstance(x, FieldScalar):
            common_field(self.field, x.field)
            xv = x.value
        else:
            xv = self.field(x)
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * xv + c
        return FieldScalar(self.field, acc)

    def derivative(self) -> "Polynomial":
        return Polynomial._raw(self.field, [k * c for k, c in enumerate(self.coeffs)][1:])

    def divmod(self, other: "Polynomial"):
        common_field(self.field, other.field)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.coeffs[-1]
        quot = [self.field.zero] * max(len(rem) - dq, 1)
        while len(rem) - 1 >= dq and rem:
            k = len(rem) - 1 - dq
            f = rem[-1] / lead
            quot[k] = f
            for j, c in enumerate(other.coeffs):
                rem[k + j] -= f * c
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return Polynomial._raw(self.field, quot), Polynomial._raw(self.field, rem)

    def gcd(self, other: "Polynomial") -> "Polynomial":
        """Monic gcd by the Euclidean algorithm (exact backend only)."""
        if not self.field.exact:
            raise ValueError("polynomial gcd requires the exact backend")
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic() if not a.is_zero() else a

    def __repr__(self):
        terms = ", ".join(self.field.format(c) for c in self.coeffs)
        return f"Polynomial([{terms}])"


def poly_arith(p: Polynomial, r: Polynomial, op: str) -> Polynomial:
    if op == "add":
        return p + r
    if op == "sub":
        return p - r
    if op == "mul":
        return p * r
    raise ValueError(f"unknown operation {op!r}")


def poly_eval(p: Polynomial, x) -> FieldScalar:
    return p(x)


def tau_eta(thetas: Sequence[FieldScalar], i: int, variant: str = "tau") -> Polynomial:
    """``tau_i = prod_{j<i} (x - theta_j)`` or ``eta_i = prod_{j<i} (x - theta_{d-j})``."""
    d = len(thetas) - 1
    if not 0 <= i <= d + 1 or (variant == "eta" and i > d + 1):
        raise IndexError(f"index {i} out of range for d={d}")
    if variant == "tau":
        roots = thetas[:i]
    elif variant == "eta":
        roots = [thetas[d - j] for j in range(i)]
    else:
        raise ValueError(f"variant must be 'tau' or 'eta', not {variant!r}")
    field = thetas[0].field if thetas else QQ
    return Polynomial.from_roots(list(roots), field)


def f_poly(i: int, params) -> Polynomial:
    """``bb* q^-2i + cc* q^2i - x``.

    ``params`` is anything exposing ``q``, ``bbstar`` and ``ccstar``.
    """
    q = params.q
    c0 = params.bbstar * q ** (-2 * i) + params.ccstar * q ** (2 * i)
    return Polynomial._raw(q.field, (c0.value, -q.field.one))


# -- root finding ------------------------------------------------------------


def _aberth(ctx, coeffs, maxiter):
    """Aberth-Ehrlich iteration on monic ``coeffs`` (ascending) in ``ctx``."""
    n = len(coeffs) - 1
    deriv = [k * coeffs[k] for k in range(1, n + 1)]

    def horner(cs, z):
        acc = ctx.mpc(0)
        for c in reversed(cs):
            acc = acc * z + c
        return acc

    # Fujiwara bound for the root moduli
    bound = max(
        [abs(coeffs[n - k]) ** (ctx.mpf(1) / k) for k in range(1, n)]
        + [abs(coeffs[0] / 2) ** (ctx.mpf(1) / n)]
        + [ctx.mpf(0)]
    ) * 2
    radius = bound if bound > 0 else ctx.mpf(1)
    center = -coeffs[n - 1] / n
    zs = [
        center + radius * ctx.expjpi(ctx.mpf(2 * k) / n + ctx.mpf(1) / (2 * n + 1))
        for k in range(n)
    ]
    eps = ctx.ldexp(1, -ctx.prec + 8)
    for it in range(maxiter):
        biggest = ctx.mpf(0)
        for k in range(n):
            z = zs[k]
            pz = horner(coeffs, z)
            if pz == 0:
                continue
            dz = horner(deriv, z)
            s = ctx.mpc(0)
            for j in range(n):
                if j != k:
                    diff = z - zs[j]
                    if diff != 0:
                        s += 1 / diff
            ratio = pz / dz if dz != 0 else ctx.mpc(eps)
            denom = 1 - ratio * s
            w = ratio / denom if denom != 0 else ratio
            zs[k] = z - w
            rel = abs(w) / max(abs(zs[k]), 1)
            if rel > biggest:
                biggest = rel
        if biggest <= eps:
            return zs, it + 1
    return zs, maxiter


def poly_roots(p: Polynomial, cfg: PrecisionConfig = PrecisionConfig(), maxiter: int = 200):
    """All complex roots of ``p`` with multiplicity.

    Roots are computed by Aberth-Ehrlich iteration from deterministic starting
    points, with guard bits, then polished by Newton steps. Estimates closer
    than the zero tolerance are merged into a repeated root (cluster mean).
    Returned values live in ``complex_field(cfg)``, sorted by (real, imag).
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no finite root set")
    out_field = complex_field(cfg)
    if p.degree == 0:
        return []
    work = mpmath.MPContext()
    work.prec = 2 * cfg.precision_bits + 32
    if p.field.exact:
        raw = [work.mpc(work.mpf(int(gmpy2.numer(c))) / int(gmpy2.denom(c))) for c in p.coeffs]
    else:
        raw = [work.mpc(c) for c in p.coeffs]
    lead = raw[-1]
    monic = [c / lead for c in raw]
    n = len(monic) - 1
    if n == 1:
        zs = [-monic[0]]
    else:
        zs, _ = _aberth(work, monic, maxiter)
        # Newton polish; skipped near multiple roots where p' vanishes
        deriv = [k * monic[k] for k in range(1, n + 1)]
        for k in range(n):
            for _ in range(3):
                pz = _horner(work, monic, zs[k])
                dz = _horner(work, deriv, zs[k])
                if dz == 0 or pz == 0:
                    break
                step = pz / dz
                if abs(step) > abs(zs[k]) * work.ldexp(1, -cfg.precision_bits // 2) + work.ldexp(1, -cfg.precision_bits):
                    break
                zs[k] -= step

    tol = out_field.tolerance
    zs = _merge_clusters(work, zs, tol)

    best = work.mpf(0)
    for z in zs:
        resid = abs(_horner(work, monic, z))
        r = max(abs(z), 1)
        scale = sum(abs(c) * r ** k for k, c in enumerate(monic))
        best = max(best, resid / scale if scale else resid)
    if best > tol:
        raise RootFindingError(
            f"root iteration did not converge (relative residual {mpmath.nstr(best, 5)})",
            best_residual=best,
        )
    roots = [FieldScalar(out_field, out_field.ctx.mpc(z)) for z in zs]
    roots.sort(key=lambda r: (r.value.real, r.value.imag))
    return roots


def _horner(ctx, cs, z):
    acc = ctx.mpc(0)
    for c in reversed(cs):
        acc = acc * z + c
    return acc


def _merge_clusters(ctx, zs, tol):
    """Replace each cluster of estimates by its mean, keeping multiplicity."""
    n = len(zs)
    label = list(range(n))

    def find(i):
        while label[i] != i:
            label[i] = label[label[i]]
            i = label[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            scale = max(abs(zs[i]), abs(zs[j]), 1)
            if abs(zs[i] - zs[j]) <= tol * scale:
                label[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = list(zs)
    for members in groups.values():
        if len(members) > 1:
            mean = sum(zs[i] for i in members) / len(members)
            for i in members:
                out[i] = mean
    return out


def _mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = x._mpf_
    val = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -val if sign else val


def rational_roots(p: Polynomial, precision_bits: int = 256):
    """Roots of an exact polynomial when it splits over the rationals, else ``None``.

    Candidates come from the numerically computed roots of the squarefree
    part; each candidate is accepted only after exact verification, and
    multiplicities are recovered by exact deflation.
    """
    if not p.field.exact:
        raise ValueError("rational_roots requires an exact polynomial")
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.degree == 0:
        return []
    g = p.gcd(p.derivative())
    squarefree = p.divmod(g)[0] if g.degree > 0 else p
    if squarefree.degree == 1:
        candidates = [Fraction(-squarefree.monic().coeffs[0])]
    else:
        approx = poly_roots(squarefree, PrecisionConfig(precision_bits))
        candidates = []
        limit = 2 ** (precision_bits // 4)
        for r in approx:
            if abs(r.value.imag) > abs(r.value) * mpmath.mpf(2) ** (-precision_bits // 2) + mpmath.mpf(2) ** (-precision_bits // 2):
                return None
            candidates.append(_mpf_to_fraction(r.value.real).limit_denominator(limit))
    roots = []
    rest = p
    for c in candidates:
        c = QQ(c)
        lin = Polynomial._raw(QQ, (-c, QQ.one))
        if rest(FieldScalar(QQ, c)).value != 0:
            return None
        while rest.degree > 0:
            quo, rem = rest.divmod(lin)
            if not rem.is_zero():
                break
            roots.append(FieldScalar(QQ, c))
            rest = quo
    if rest.degree != 0:
        return None
    return sorted(roots, key=lambda r: r.value)
