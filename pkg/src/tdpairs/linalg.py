"""Dense linear algebra over :data:`QQ` or a complex field.

Vectors are columns; a :class:`Subspace` stores its basis as the rows of a
matrix in reduced row-echelon form, so two subspaces are equal exactly when
their stored data agree.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .scalars import QQ, FieldScalar, common_field

__all__ = [
    "DimensionError",
    "LinearAlgebraError",
    "Matrix",
    "Subspace",
    "rref",
    "rank",
    "kernel",
    "image",
    "span",
    "subspace_sum",
    "intersect",
    "contains",
    "apply",
    "inverse",
    "subspace_ops",
    "lagrange_idempotents",
    "is_diagonalizable",
    "charpoly",
    "closure_under",
    "largest_invariant_in",
    "quotient_action",
    "quotient_projection",
]


class DimensionError(ValueError):
    pass


class LinearAlgebraError(ArithmeticError):
    pass


def _full(field, shape, value=None):
    return np.full(shape, field.zero if value is None else value, dtype=object)


def _scale_of(field, arr) -> object:
    """Largest entry magnitude (at least 1); only meaningful for complex fields."""
    if field.exact or arr.size == 0:
        return 1
    return max(max(abs(x) for x in arr.flat), 1)


class Matrix:
    """A rectangular matrix with entries in a single field."""

    __slots__ = ("field", "a")

    def __init__(self, field, array):
        arr = np.asarray(array, dtype=object)
        if arr.ndim != 2:
            raise DimensionError("a matrix needs a two-dimensional array")
        self.field = field
        self.a = arr

    @classmethod
    def from_rows(cls, rows, field=QQ) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("rows have different lengths")
        arr = _full(field, (len(rows), ncols))
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                arr[i, j] = field(x)
        return cls(field, arr)

    @classmethod
    def zeros(cls, rows, cols, field=QQ) -> "Matrix":
        return cls(field, _full(field, (rows, cols)))

    @classmethod
    def identity(cls, n, field=QQ) -> "Matrix":
        arr = _full(field, (n, n))
        for i in range(n):
            arr[i, i] = field.one
        return cls(field, arr)

    @classmethod
    def diag(cls, entries, field=QQ) -> "Matrix":
        entries = list(entries)
        arr = _full(field, (len(entries), len(entries)))
        for i, x in enumerate(entries):
            arr[i, i] = field(x)
        return cls(field, arr)

    @property
    def shape(self):
        return self.a.shape

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def entry(self, i, j) -> FieldScalar:
        return FieldScalar(self.field, self.a[i, j])

    def _coerce(self, other):
        if isinstance(other, Matrix):
            common_field(self.field, other.field)
            return other.a
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.shape != self.a.shape:
            raise DimensionError(f"shape mismatch {self.a.shape} vs {o.shape}")
        return Matrix(self.field, self.a + o)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.shape != self.a.shape:
            raise DimensionError(f"shape mismatch {self.a.shape} vs {o.shape}")
        return Matrix(self.field, self.a - o)

    def __neg__(self):
        return Matrix(self.field, -self.a)

    def __matmul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.a.shape[1] != o.shape[0]:
            raise DimensionError(f"cannot multiply {self.a.shape} by {o.shape}")
        return Matrix(self.field, _matmul(self.field, self.a, o))

    def _scalar(self, c):
        if isinstance(c, FieldScalar):
            common_field(self.field, c.field)
            return c.value
        return self.field(c)

    def __mul__(self, c):
        if isinstance(c, Matrix):
            return NotImplemented
        return Matrix(self.field, self.a * self._scalar(c))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Matrix.identity(self.rows, self.field)
        for _ in range(n):
            out = out @ self
        return out

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.a.T.copy())

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.a.shape == other.a.shape
            and bool(np.all(self.a == other.a))
        )

    __hash__ = None

    def is_zero(self, scale=None) -> bool:
        if self.field.exact:
            return all(x == 0 for x in self.a.flat)
        if scale is None:
            scale = 1
        return all(self.field.is_zero(x, scale) for x in self.a.flat)

    def equals(self, other: "Matrix", scale=None) -> bool:
        """Equality, using the relative zero test in complex mode."""
        common_field(self.field, other.field)
        if self.a.shape != other.a.shape:
            return False
        if self.field.exact:
            return self == other
        if scale is None:
            scale = max(_scale_of(self.field, self.a), _scale_of(self.field, other.a))
        return (self - other).is_zero(scale)

    def lift(self, field) -> "Matrix":
        if field is self.field or field == self.field:
            return self
        if not self.field.exact:
            raise ValueError("complex matrices cannot be lowered to the exact field")
        conv = np.vectorize(field, otypes=[object])
        return Matrix(field, conv(self.a) if self.a.size else _full(field, self.a.shape))

    def magnitude(self):
        return _scale_of(self.field, self.a)

    def rows_list(self):
        return [[FieldScalar(self.field, x) for x in row] for row in self.a]

    def __repr__(self):
        body = "; ".join(", ".join(self.field.format(x) for x in row) for row in self.a)
        return f"Matrix[{self.rows}x{self.cols}]({body})"


def _matmul(field, x, y):
    if x.shape[0] == 0 or y.shape[1] == 0 or x.shape[1] == 0:
        return _full(field, (x.shape[0], y.shape[1]))
    nz = x != 0
    if 4 * int(nz.sum()) <= x.size:
        return _sparse_left(field, x, nz, y)
    nzy = y != 0
    if 4 * int(nzy.sum()) <= y.size:
        return _sparse_left(field, y.T, nzy.T, x.T).T.copy()
    return x.dot(y)


def _sparse_left(field, x, nz, y):
    """x @ y for a mostly-zero x: accumulate scaled rows of y."""
    out = _full(field, (x.shape[0], y.shape[1]))
    for i, k in zip(*np.nonzero(nz)):
        out[i] = out[i] + x[i, k] * y[k]
    return out


def _identity_arr(field, n):
    arr = _full(field, (n, n))
    for i in range(n):
        arr[i, i] = field.one
    return arr


# -- row reduction -----------------------------------------------------------


def _rref_array(field, arr, scale=None):
    """Reduced row-echelon form of a copy of ``arr``; returns (rows, pivots)."""
    m = arr.copy()
    nrows, ncols = m.shape
    pivots = []
    exact = field.exact
    if not exact and scale is None:
        scale = _scale_of(field, m)
    r = 0
    for col in range(ncols):
        if r >= nrows:
            break
        if exact:
            piv = next((i for i in range(r, nrows) if m[i, col] != 0), None)
        else:
            best, piv = field.tolerance * scale, None
            for i in range(r, nrows):
                mag = abs(m[i, col])
                if mag > best:
                    best, piv = mag, i
        if piv is None:
            if not exact:
                for i in range(r, nrows):
                    m[i, col] = field.zero
            continue
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = field.one / m[r, col]
        m[r, col:] = m[r, col:] * inv
        m[r, col] = field.one
        for i in range(nrows):
            if i != r:
                f = m[i, col]
                if f != 0:
                    m[i, col:] = m[i, col:] - f * m[r, col:]
                    m[i, col] = field.zero
        pivots.append(col)
        r += 1
    return m[: len(pivots)], tuple(pivots)


def rref(M: Matrix):
    """(R, pivots): the nonzero rows of the reduced row-echelon form of ``M``."""
    rows, piv = _rref_array(M.field, M.a)
    return Matrix(M.field, rows.reshape(len(piv), M.cols)), piv


def rank(M: Matrix) -> int:
    return len(rref(M)[1])


class Subspace:
    """A subspace of F^n stored as an RREF basis (rows)."""

    __slots__ = ("field", "n", "basis", "pivots")

    def __init__(self, field, n: int, basis_rows=None, pivots=None):
        self.field = field
        self.n = n
        if basis_rows is None:
            basis_rows = _full(field, (0, n))
        if pivots is None:
            basis_rows, pivots = _rref_array(field, np.asarray(basis_rows, dtype=object).reshape(-1, n))
        self.basis = Matrix(field, np.asarray(basis_rows, dtype=object).reshape(len(pivots), n))
        self.pivots = tuple(pivots)

    @classmethod
    def zero(cls, n, field=QQ) -> "Subspace":
        return cls(field, n, _full(field, (0, n)), ())

    @classmethod
    def full(cls, n, field=QQ) -> "Subspace":
        return cls(field, n, _identity_arr(field, n), tuple(range(n)))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def vectors(self):
        """Basis vectors as 1-D object arrays."""
        return [self.basis.a[i] for i in range(self.dim)]

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        if self.n != other.n or self.pivots != other.pivots:
            return False
        return self.basis.equals(other.basis)

    __hash__ = None

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.n})"


def span(vectors: Iterable, n: int | None = None, field=QQ) -> Subspace:
    """Span of column vectors given as sequences or 1-D arrays."""
    vecs = [np.asarray(v, dtype=object) for v in vectors]
    if n is None:
        if not vecs:
            raise DimensionError("ambient dimension required for an empty span")
        n = len(vecs[0])
    if any(v.shape != (n,) for v in vecs):
        raise DimensionError("vectors of the wrong length")
    if not vecs:
        return Subspace.zero(n, field)
    return Subspace(field, n, np.vstack(vecs))


def kernel(M: Matrix) -> Subspace:
    """{x : Mx = 0}."""
    field = M.field
    R, piv = rref(M)
    free = [j for j in range(M.cols) if j not in piv]
    vecs = []
    for f in free:
        v = _full(field, (M.cols,))
        v[f] = field.one
        for row, p in enumerate(piv):
            v[p] = -R.a[row, f]
        vecs.append(v)
    if not vecs:
        return Subspace.zero(M.cols, field)
    return Subspace(field, M.cols, np.vstack(vecs))


def image(M: Matrix) -> Subspace:
    """The column space of ``M``."""
    return Subspace(M.field, M.rows, M.a.T.copy())


def subspace_sum(*subs: Subspace) -> Subspace:
    field = common_field(*(s.field for s in subs))
    n = subs[0].n
    if any(s.n != n for s in subs):
        raise DimensionError("ambient dimensions differ")
    return Subspace(field, n, np.vstack([s.basis.a for s in subs]))


def intersect(S1: Subspace, S2: Subspace) -> Subspace:
    field = common_field(S1.field, S2.field)
    if S1.n != S2.n:
        raise DimensionError("ambient dimensions differ")
    if S1.dim == 0 or S2.dim == 0:
        return Subspace.zero(S1.n, field)
    # x.B1 = y.B2  <=>  (x, y) in ker [B1^T | -B2^T]
    stacked = Matrix(field, np.hstack([S1.basis.a.T, -S2.basis.a.T]))
    K = kernel(stacked)
    if K.dim == 0:
        return Subspace.zero(S1.n, field)
    coeffs = K.basis.a[:, : S1.dim]
    return Subspace(field, S1.n, _matmul(field, coeffs, S1.basis.a))


def _annihilator(S: Subspace) -> np.ndarray:
    """Rows N with N x = 0 exactly when x lies in S."""
    if S.dim == 0:
        return _identity_arr(S.field, S.n)
    return kernel(S.basis).basis.a


def contains(S: Subspace, x) -> bool:
    """Membership of a vector, or inclusion of a subspace."""
    if isinstance(x, Subspace):
        common_field(S.field, x.field)
        if x.dim == 0:
            return True
        return S.dim >= x.dim and subspace_sum(S, x).dim == S.dim
    v = np.asarray(x, dtype=object).reshape(-1)
    if v.shape[0] != S.n:
        raise DimensionError("vector of the wrong length")
    N = _annihilator(S)
    res = _matmul(S.field, N, v.reshape(-1, 1))
    scale = _scale_of(S.field, v.reshape(1, -1))
    return all(S.field.is_zero(x, scale) for x in res.flat)


def apply(M: Matrix, S: Subspace) -> Subspace:
    """The image M(S)."""
    common_field(M.field, S.field)
    if M.cols != S.n:
        raise DimensionError("operator and subspace dimensions differ")
    if S.dim == 0:
        return Subspace.zero(M.rows, M.field)
    return Subspace(M.field, M.rows, _matmul(M.field, S.basis.a, M.a.T))


def inverse(M: Matrix) -> Matrix:
    if M.rows != M.cols:
        raise DimensionError("only square matrices are invertible")
    n = M.rows
    aug = np.hstack([M.a, _identity_arr(M.field, n)])
    R, piv = _rref_array(M.field, aug)
    if piv[:n] != tuple(range(n)) or len(piv) < n:
        raise LinearAlgebraError("matrix is singular")
    return Matrix(M.field, R[:, n:].copy())


def subspace_ops(request: str, *args):
    """Dispatch for ``rref kernel image rank sum intersect membership``."""
    table = {
        "rref": lambda M: Subspace(M.field, M.cols, M.a),
        "kernel": kernel,
        "image": image,
        "rank": rank,
        "sum": subspace_sum,
        "intersect": intersect,
        "membership": contains,
    }
    if request not in table:
        raise ValueError(f"unknown request {request!r}")
    return table[request](*args)


# -- spectral helpers --------------------------------------------------------


def _eig_values(field, eigs):
    return [e.value if isinstance(e, FieldScalar) else field(e) for e in eigs]


def _distinct(field, vals, scale):
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if field.is_zero(vals[i] - vals[j], scale):
                return (i, j)
    return None


def lagrange_idempotents(M: Matrix, eigs: Sequence) -> list[Matrix]:
    """Primitive idempotents ``E_i = prod_{j != i} (M - eig_j)/(eig_i - eig_j)``.

    The defining identities are checked afterwards; a failure raises
    :class:`LinearAlgebraError`.
    """
    field = M.field
    if M.rows != M.cols:
        raise DimensionError("square matrix required")
    vals = _eig_values(field, eigs)
    k = len(vals)
    scale = max([_scale_of(field, M.a)] + [abs(v) if not field.exact else 1 for v in vals])
    dup = _distinct(field, vals, scale)
    if dup is not None:
        raise LinearAlgebraError(f"eigenvalues {dup[0]} and {dup[1]} coincide")
    n = M.rows
    ident = _identity_arr(field, n)
    shifted = [M.a - v * ident for v in vals]
    # prefix[i] = prod_{j<i} shifted[j]; suffix[i] = prod_{j>i}; all factors commute
    prefix = [ident]
    for i in range(k - 1):
        prefix.append(_matmul(field, prefix[-1], shifted[i]))
    suffix = [ident] * k
    for i in range(k - 2, -1, -1):
        suffix[i] = _matmul(field, shifted[i + 1], suffix[i + 1])
    out = []
    for i in range(k):
        denom = field.one
        for j in range(k):
            if j != i:
                denom *= vals[i] - vals[j]
        E = _matmul(field, prefix[i], suffix[i]) * (field.one / denom)
        out.append(Matrix(field, E))
    _check_idempotents(M, out, vals)
    return out


def _check_idempotents(M, Es, vals):
    field = M.field
    n = M.rows
    I = Matrix.identity(n, field)
    scale = max(_scale_of(field, M.a), max((_scale_of(field, E.a) for E in Es), default=1))
    total = Matrix.zeros(n, n, field)
    recon = Matrix.zeros(n, n, field)
    for E, v in zip(Es, vals):
        total = total + E
        recon = recon + E * v
    if not total.equals(I, scale):
        raise LinearAlgebraError("idempotents do not sum to the identity: the matrix is not annihilated by the product over the supplied eigenvalues")
    if not recon.equals(M, scale * scale):
        raise LinearAlgebraError("sum of eigenvalue-weighted idempotents does not reproduce the matrix")
    for i, Ei in enumerate(Es):
        for j in range(i, len(Es)):
            P = Ei @ Es[j]
            target = Ei if i == j else Matrix.zeros(n, n, field)
            if not P.equals(target, scale * scale):
                raise LinearAlgebraError(f"idempotent relation fails for ({i}, {j})")


def is_diagonalizable(M: Matrix, eigs: Sequence) -> bool:
    """True when M is annihilated by prod (x - eig_i) and eigenspaces fill the space."""
    field = M.field
    vals = _eig_values(field, eigs)
    n = M.rows
    ident = _identity_arr(field, n)
    prod = ident
    for v in vals:
        prod = _matmul(field, prod, M.a - v * ident)
    scale = _scale_of(field, M.a) ** max(len(vals), 1)
    if not Matrix(field, prod).is_zero(scale):
        return False
    dims = sum(kernel(Matrix(field, M.a - v * ident)).dim for v in vals)
    return dims == n


def charpoly(M: Matrix):
    """Characteristic polynomial ``det(x - M)`` by the Faddeev-LeVerrier recursion."""
    from .poly import Polynomial

    field, n = M.field, M.rows
    if M.cols != n:
        raise DimensionError("characteristic polynomial of a non-square matrix")
    coeffs = [field.one]
    ident = _identity_arr(field, n)
    Mk = _full(field, (n, n))
    for k in range(1, n + 1):
        Mk = _matmul(field, M.a, Mk + coeffs[-1] * ident)
        c = -sum((Mk[i, i] for i in range(n)), field.zero) / k
        coeffs.append(c)
    return Polynomial._raw(field, coeffs[::-1])


# -- invariant subspaces -----------------------------------------------------


class _Echelon:
    """Incrementally maintained echelon basis used by :func:`closure_under`."""

    def __init__(self, field, n, scale):
        self.field = field
        self.n = n
        self.rows: dict[int, np.ndarray] = {}
        self.scale = scale

    def reduce(self, v):
        v = v.copy()
        for p, row in self.rows.items():
            c = v[p]
            if c != 0:
                v = v - c * row
                v[p] = self.field.zero
        return v

    def insert(self, v) -> np.ndarray | None:
        """Add ``v`` if independent; returns the new reduced vector or ``None``."""
        r = self.reduce(v)
        f = self.field
        if f.exact:
            piv = next((i for i, x in enumerate(r) if x != 0), None)
        else:
            scale = max(self.scale, _scale_of(f, v.reshape(1, -1)))
            mags = [abs(x) for x in r]
            best = max(mags) if mags else 0
            piv = mags.index(best) if best > f.tolerance * scale else None
        if piv is None:
            return None
        r = r * (f.one / r[piv])
        r[piv] = f.one
        for p in list(self.rows):
            c = self.rows[p][piv]
            if c != 0:
                self.rows[p] = self.rows[p] - c * r
                self.rows[p][piv] = f.zero
        self.rows[piv] = r
        return r

    def subspace(self) -> Subspace:
        if not self.rows:
            return Subspace.zero(self.n, self.field)
        return Subspace(self.field, self.n, np.vstack(list(self.rows.values())))


def closure_under(ops: Sequence[Matrix], seed: Subspace) -> Subspace:
    """Smallest subspace containing ``seed`` and invariant under every op."""
    field = seed.field
    for op in ops:
        common_field(field, op.field)
        if op.rows != seed.n or op.cols != seed.n:
            raise DimensionError("operator size does not match the seed subspace")
    scale = max([_scale_of(field, op.a) for op in ops] + [1])
    ech = _Echelon(field, seed.n, scale)
    frontier = []
    for v in seed.vectors():
        r = ech.insert(v)
        if r is not None:
            frontier.append(r)
    while frontier:
        nxt = []
        for v in frontier:
            for op in ops:
                r = ech.insert(op.a.dot(v))
                if r is not None:
                    nxt.append(r)
        frontier = nxt
    return ech.subspace()


def largest_invariant_in(ops: Sequence[Matrix], bound: Subspace) -> Subspace:
    """Largest op-invariant subspace contained in ``bound``.

    Iterates ``S <- {v in S : op v in S for all ops}`` from ``S = bound``.
    """
    field = bound.field
    S = bound
    while S.dim > 0:
        N = _annihilator(S)
        B_T = S.basis.a.T
        blocks = [_matmul(field, N, _matmul(field, op.a, B_T)) for op in ops]
        stacked = Matrix(field, np.vstack(blocks)) if blocks else Matrix.zeros(0, S.dim, field)
        K = kernel(stacked)
        if K.dim == S.dim:
            return S
        if K.dim == 0:
            return Subspace.zero(S.n, field)
        S = Subspace(field, S.n, _matmul(field, K.basis.a, S.basis.a))
    return S


def _quotient_frame(sub: Subspace, total: Subspace):
    """Sub in total-coordinates (RREF) and the complement coordinate indices."""
    field = total.field
    if sub.dim:
        coords = sub.basis.a[:, list(total.pivots)]
        srows, spiv = _rref_array(field, coords)
    else:
        srows, spiv = _full(field, (0, total.dim)), ()
    comp = [j for j in range(total.dim) if j not in spiv]
    return srows, spiv, comp


def quotient_projection(sub: Subspace, total: Subspace, vectors) -> np.ndarray:
    """Coordinates in total/sub (columns) of vectors lying in ``total``."""
    field = total.field
    srows, spiv, comp = _quotient_frame(sub, total)
    vecs = np.asarray(vectors, dtype=object).reshape(-1, total.n)
    coords = vecs[:, list(total.pivots)] if total.dim else _full(field, (vecs.shape[0], 0))
    if len(spiv):
        coords = coords - _matmul(field, coords[:, list(spiv)], srows)
    return coords[:, comp].T.copy()


def quotient_action(M: Matrix, sub: Subspace, total: Subspace) -> Matrix:
    """Matrix of the map induced by ``M`` on ``total / sub``.

    The quotient basis consists of the images of the total-basis vectors whose
    coordinate index is not a pivot of ``sub`` (in total-coordinates).
    """
    field = common_field(M.field, sub.field, total.field)
    if not contains(total, sub):
        raise LinearAlgebraError("sub is not contained in total")
    if total.dim == 0:
        return Matrix.zeros(0, 0, field)
    if not contains(total, apply(M, total)):
        raise LinearAlgebraError("total is not invariant under the operator")
    if not contains(sub, apply(M, sub)):
        raise LinearAlgebraError("sub is not invariant under the operator")
    _, _, comp = _quotient_frame(sub, total)
    reps = total.basis.a[comp]
    images = _matmul(field, reps, M.a.T) if comp else _full(field, (0, total.n))
    return Matrix(field, quotient_projection(sub, total, images).reshape(len(comp), len(comp)))
