"""
Exact scalars and dense linear algebra.

Rational matrices are ``flint.fmpq_mat``; matrices over a proper number
field Q[t]/(m(t)) are :class:`NFMatrix`, which mirrors the small part of the
fmpq_mat interface the rest of the package uses. Everything downstream is
written against that shared interface and dispatches through the helpers here.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import flint
from flint import fmpq, fmpq_mat, fmpq_poly


class ExtensionNeeded(Exception):
    """A root outside the session field is required.

    ``polynomial`` holds rational coefficients (constant term first) of a
    polynomial whose root must be adjoined, e.g. via ``SUPERQ_FIELD``.
    """

    def __init__(self, polynomial, message=""):
        self.polynomial = [fmpq(c) for c in polynomial]
        text = message or "field extension required"
        super().__init__(f"{text}: adjoin a root of {poly_str(self.polynomial)}")


def poly_str(coeffs) -> str:
    """``t^2 - 2`` style rendering of rational coefficients (constant first)."""
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = fmpq(coeffs[k])
        if c == 0:
            continue
        mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
        a = abs(c)
        body = str(a) if (a != 1 or not mono) else ""
        body = body + ("*" if body and mono else "") + mono
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sg, b in terms[1:]:
        out += f" {sg} {b}"
    return out


def parse_q(s) -> fmpq:
    """Parse ``"num/den"`` (or an int) into an fmpq."""
    if isinstance(s, fmpq):
        return s
    if isinstance(s, int):
        return fmpq(s)
    s = str(s).strip()
    if "/" in s:
        a, b = s.split("/")
        return fmpq(int(a), int(b))
    return fmpq(int(s))


def fmt_q(x) -> str:
    x = fmpq(x)
    return f"{x.p}/{x.q}"


# ---------------------------------------------------------------------------
# number fields


class NumberField:
    """Q[t]/(minpoly). Degree one means the rationals."""

    def __init__(self, minpoly: Sequence = (0, 1)):
        coeffs = [parse_q(c) for c in minpoly]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        lead = coeffs[-1]
        coeffs = [c / lead for c in coeffs]
        poly = fmpq_poly(coeffs)
        _, factors = poly.factor()
        if len(factors) != 1 or factors[0][1] != 1:
            raise ValueError(f"{poly_str(coeffs)} is not irreducible over Q")
        self.minpoly = tuple(coeffs)
        self.poly = poly
        self.degree = len(coeffs) - 1

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(self.minpoly)

    def __repr__(self):
        if self.is_rational:
            return "QQ"
        return f"NumberField({poly_str(self.minpoly)})"

    # elements -------------------------------------------------------------
    @property
    def zero(self):
        return fmpq(0) if self.is_rational else NFElem(self, fmpq_poly([0]))

    @property
    def one(self):
        return fmpq(1) if self.is_rational else NFElem(self, fmpq_poly([1]))

    def gen(self):
        """The class of t (for the rationals, the unique root of minpoly)."""
        if self.is_rational:
            return -self.minpoly[0]
        return NFElem(self, fmpq_poly([0, 1]))

    def __call__(self, x):
        if self.is_rational:
            if isinstance(x, NFElem):
                if x.value.degree() > 0:
                    raise ValueError("element is not rational")
                return x.value[0]
            return fmpq(x)
        if isinstance(x, NFElem):
            if x.field != self:
                raise ValueError("element from another field")
            return x
        return NFElem(self, fmpq_poly([fmpq(x)]))

    def from_coeffs(self, coeffs):
        if self.is_rational:
            return parse_q(coeffs[0]) if coeffs else fmpq(0)
        return NFElem(self, fmpq_poly([parse_q(c) for c in coeffs]))

    def coeffs(self, x) -> list:
        """Power-basis coefficients of length ``degree``."""
        if self.is_rational:
            return [fmpq(x)]
        x = self(x)
        out = [x.value[i] for i in range(self.degree)]
        return out

    def to_json(self) -> dict:
        return {"minpoly": [fmt_q(c) for c in self.minpoly]}

    @classmethod
    def from_json(cls, d) -> "NumberField":
        if d is None:
            return QQ
        return cls(d["minpoly"])

    def scalar_to_json(self, x):
        if self.is_rational:
            return fmt_q(x)
        return [fmt_q(c) for c in self.coeffs(x)]

    def scalar_from_json(self, s):
        if isinstance(s, list):
            return self.from_coeffs(s)
        return self(parse_q(s))

    # square roots, used for isotropic vectors and eigenvalues -------------
    def sqrt(self, x):
        """A square root of ``x`` in the field, or None."""
        x = self(x)
        if self.is_rational:
            return _rational_sqrt(x)
        if self.degree != 2:
            # only rational radicands handled beyond quadratic fields
            if x.value.degree() <= 0:
                r = _rational_sqrt(x.value[0])
                return None if r is None else self(r)
            return None
        # x = a + b t; try (u + v t)^2 = x by brute algebra on the norm
        a0, a1 = self.minpoly[0], self.minpoly[1]
        disc = a1 * a1 - 4 * a0  # t = (-a1 + sqrt(disc)) / 2
        s_d = self.gen() * 2 + a1  # sqrt(disc)
        a = x.value[0] if x.value.degree() >= 0 else fmpq(0)
        b = x.value[1] if x.value.degree() >= 1 else fmpq(0)
        # rewrite x = p + q sqrt(disc)
        q = b / 2
        p = a + b * a1 / 2
        if q == 0:
            r = _rational_sqrt(p)
            if r is not None:
                return self(r)
            r = _rational_sqrt(p / disc)
            if r is not None:
                return s_d * r
            return None
        # (u + w s)^2 = u^2 + w^2 disc + 2uw s
        norm = p * p - q * q * disc
        rn = _rational_sqrt(norm)
        if rn is None:
            return None
        for cand in (p + rn, p - rn):
            u2 = cand / 2
            u = _rational_sqrt(u2)
            if u is not None and u != 0:
                w = q / (2 * u)
                return self(u) + s_d * w
        return None

    def roots_of(self, coeffs) -> list:
        """Roots in this field of a rational polynomial (with multiplicity ignored).

        Raises ExtensionNeeded when an irreducible factor has no root here.
        """
        poly = fmpq_poly([fmpq(c) for c in coeffs])
        if poly.degree() < 1:
            return []
        _, factors = poly.factor()
        roots = []
        for f, _m in sorted(factors, key=lambda fm: (fm[0].degree(), str(fm[0]))):
            d = f.degree()
            if d == 1:
                roots.append(self(-f[0] / f[1]))
            elif d == 2:
                a, b, c = f[2], f[1], f[0]
                s = self.sqrt(b * b - 4 * a * c)
                if s is None:
                    raise ExtensionNeeded([f[i] for i in range(3)])
                roots.append((self(-b) + s) / (2 * a))
                roots.append((self(-b) - s) / (2 * a))
            else:
                if not self.is_rational and self.degree == d and f == self.poly:
                    raise ExtensionNeeded([f[i] for i in range(d + 1)],
                                          "higher-degree root splitting unsupported")
                raise ExtensionNeeded([f[i] for i in range(d + 1)])
        return roots


def _rational_sqrt(x):
    x = fmpq(x)
    if x < 0:
        return None
    p, q = int(x.p), int(x.q)
    rp, rq = _isqrt_exact(p), _isqrt_exact(q)
    if rp is None or rq is None:
        return None
    return fmpq(rp, rq)


def _isqrt_exact(n: int):
    import math

    r = math.isqrt(n)
    return r if r * r == n else None


QQ = NumberField((0, 1))


def session_field() -> NumberField:
    """Field named by ``SUPERQ_FIELD`` (comma separated minpoly, constant first)."""
    spec = os.environ.get("SUPERQ_FIELD", "").strip()
    if not spec:
        return QQ
    return NumberField([parse_q(c) for c in spec.replace(" ", "").split(",")])


class NFElem:
    __slots__ = ("field", "value")

    def __init__(self, field: NumberField, value: fmpq_poly):
        self.field = field
        self.value = value % field.poly if value.degree() >= field.degree else value

    def _coerce(self, other):
        if isinstance(other, NFElem):
            return other.value
        return fmpq_poly([fmpq(other)])

    def __add__(self, o):
        return NFElem(self.field, self.value + self._coerce(o))

    __radd__ = __add__

    def __sub__(self, o):
        return NFElem(self.field, self.value - self._coerce(o))

    def __rsub__(self, o):
        return NFElem(self.field, self._coerce(o) - self.value)

    def __mul__(self, o):
        return NFElem(self.field, self.value * self._coerce(o))

    __rmul__ = __mul__

    def __neg__(self):
        return NFElem(self.field, -self.value)

    def inverse(self):
        if self.value.is_zero():
            raise ZeroDivisionError("division by zero in number field")
        g, s, _t = self.value.xgcd(self.field.poly)
        return NFElem(self.field, s / g[0])

    def __truediv__(self, o):
        if isinstance(o, NFElem):
            return self * o.inverse()
        return NFElem(self.field, self.value / fmpq(o))

    def __rtruediv__(self, o):
        return self.inverse() * o

    def __eq__(self, o):
        if isinstance(o, NFElem):
            return self.value == o.value
        try:
            return self.value == fmpq_poly([fmpq(o)])
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(tuple(str(self.value[i]) for i in range(self.field.degree)))

    def __bool__(self):
        return not self.value.is_zero()

    def __repr__(self):
        return str(self.value).replace("x", "t")


# ---------------------------------------------------------------------------
# matrices over a number field


class NFMatrix:
    """Dense matrix over a proper number field with the fmpq_mat subset we use."""

    def __init__(self, field: NumberField, rows: list):
        self.field = field
        self.rows = rows
        self._ncols = len(rows[0]) if rows else 0

    @classmethod
    def zeros(cls, field, r, c):
        m = cls(field, [[field.zero] * c for _ in range(r)])
        m._ncols = c
        return m

    def nrows(self):
        return len(self.rows)

    def ncols(self):
        return self._ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __setitem__(self, ij, v):
        i, j = ij
        self.rows[i][j] = self.field(v)

    def tolist(self):
        return [list(r) for r in self.rows]

    def transpose(self):
        m = NFMatrix(self.field, [list(c) for c in zip(*self.rows)] if self.rows else [])
        m._ncols = self.nrows()
        return m

    def _wrap(self, rows, ncols):
        m = NFMatrix(self.field, rows)
        m._ncols = ncols
        return m

    def __add__(self, o):
        return self._wrap([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, o.rows)], self._ncols)

    def __sub__(self, o):
        return self._wrap([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, o.rows)], self._ncols)

    def __neg__(self):
        return self._wrap([[-a for a in r] for r in self.rows], self._ncols)

    def __mul__(self, o):
        if isinstance(o, NFMatrix):
            cols = list(zip(*o.rows)) if o.rows else []
            z = self.field.zero
            out = []
            for r in self.rows:
                row = []
                for c in cols:
                    s = z
                    for a, b in zip(r, c):
                        if a and b:
                            s = s + a * b
                    row.append(s)
                out.append(row)
            return self._wrap(out, o.ncols())
        return self._wrap([[a * o for a in r] for r in self.rows], self._ncols)

    __rmul__ = __mul__

    def __eq__(self, o):
        return isinstance(o, NFMatrix) and self.rows == o.rows

    def rref(self):
        R, _piv = bareiss_rref(self.rows, self.field)
        rank = len(_piv)
        full = R + [[self.field.zero] * self._ncols for _ in range(self.nrows() - rank)]
        return self._wrap(full, self._ncols), rank

    def rank(self):
        return self.rref()[1]


# ---------------------------------------------------------------------------
# construction helpers


def field_of(M) -> NumberField:
    return M.field if isinstance(M, NFMatrix) else QQ


def mat(rows, field: NumberField = QQ, ncols: int | None = None):
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if field.is_rational:
        if not rows:
            return fmpq_mat(0, ncols)
        return fmpq_mat(rows)
    m = NFMatrix(field, [[field(x) for x in r] for r in rows])
    m._ncols = ncols
    return m


def zeros(r: int, c: int, field: NumberField = QQ):
    if field.is_rational:
        return fmpq_mat(r, c)
    return NFMatrix.zeros(field, r, c)


def identity(n: int, field: NumberField = QQ):
    M = zeros(n, n, field)
    for i in range(n):
        M[i, i] = field.one
    return M


def diag(entries, field: NumberField = QQ):
    n = len(entries)
    M = zeros(n, n, field)
    for i, x in enumerate(entries):
        M[i, i] = x
    return M


def is_zero_matrix(M) -> bool:
    if isinstance(M, NFMatrix):
        return all(not x for r in M.rows for x in r)
    return M == fmpq_mat(M.nrows(), M.ncols())


def column(M, j) -> list:
    return [M[i, j] for i in range(M.nrows())]


def row(M, i) -> list:
    return [M[i, j] for j in range(M.ncols())]


def mat_vec(M, v):
    """M * v for a list vector v."""
    n = M.ncols()
    out = []
    for i in range(M.nrows()):
        s = 0
        for j in range(n):
            x = v[j]
            if x:
                a = M[i, j]
                if a:
                    s = s + a * x
        out.append(s)
    return out


def block_diag(blocks, field: NumberField = QQ):
    n = sum(b.nrows() for b in blocks)
    m = sum(b.ncols() for b in blocks)
    M = zeros(n, m, field)
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.nrows()):
            for j in range(b.ncols()):
                x = b[i, j]
                if x:
                    M[r0 + i, c0 + j] = x
        r0 += b.nrows()
        c0 += b.ncols()
    return M


def flatten(M) -> list:
    return [M[i, j] for i in range(M.nrows()) for j in range(M.ncols())]


def trace(M):
    s = 0
    for i in range(M.nrows()):
        s = s + M[i, i]
    return s


# ---------------------------------------------------------------------------
# elimination


def bareiss_rref(rows: list, field: NumberField = QQ):
    """Fraction-free forward elimination followed by pivot normalization.

    Works over any exact field; returns (nonzero rref rows, pivot columns).
    Used directly for number-field matrices and as an independent check on
    the FLINT path for rational ones.
    """
    A = [[field(x) for x in r] for r in rows]
    if not A:
        return [], []
    m, n = len(A), len(A[0])
    prev = field.one
    pivots = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        p = next((i for i in range(r, m) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        for i in range(r + 1, m):
            a = A[i][c]
            Ai, Ar = A[i], A[r]
            for j in range(c, n):
                Ai[j] = (piv * Ai[j] - a * Ar[j]) / prev
        prev = piv
        pivots.append(c)
        r += 1
    R = A[:r]
    # back substitution and normalization
    for k in range(r - 1, -1, -1):
        c = pivots[k]
        inv = field.one / R[k][c]
        R[k] = [x * inv for x in R[k]]
        for i in range(k):
            a = R[i][c]
            if a:
                R[i] = [x - a * y for x, y in zip(R[i], R[k])]
    return R, pivots


def rref(M):
    """(rref matrix trimmed to its nonzero rows, pivot columns)."""
    if isinstance(M, NFMatrix):
        R, piv = bareiss_rref(M.rows, M.field)
        out = NFMatrix(M.field, R)
        out._ncols = M.ncols()
        return out, piv
    if M.nrows() == 0 or M.ncols() == 0:
        return fmpq_mat(0, M.ncols()), []
    R, rk = M.rref()
    piv = []
    n = M.ncols()
    for i in range(rk):
        j = piv[-1] + 1 if piv else 0
        while R[i, j] == 0:
            j += 1
        piv.append(j)
    if rk < R.nrows():
        R = fmpq_mat([[R[i, j] for j in range(n)] for i in range(rk)]) if rk else fmpq_mat(0, n)
    return R, piv


def rank(M) -> int:
    if isinstance(M, NFMatrix):
        return M.rank()
    if M.nrows() == 0 or M.ncols() == 0:
        return 0
    return M.rank()


def kernel_matrix(M):
    """Columns form the canonical (rref) basis of the right null space."""
    field = field_of(M)
    n = M.ncols()
    R, piv = rref(M)
    free = [j for j in range(n) if j not in set(piv)]
    K = zeros(n, len(free), field)
    for t, f in enumerate(free):
        K[f, t] = field.one
        for i, p in enumerate(piv):
            x = R[i, f]
            if x:
                K[p, t] = -x
    # K columns are already in reduced form w.r.t. free columns; put them in
    # rref of the kernel (pivot = first nonzero entry)
    return _canonical_columns(K)


def _canonical_columns(K):
    if K.ncols() == 0:
        return K
    Rt, _ = rref(K.transpose())
    return Rt.transpose()


def kernel_basis(M) -> list:
    """Right null space as canonical rref row vectors."""
    K = kernel_matrix(M)
    return [column(K, j) for j in range(K.ncols())]


def solve_linear(M, rhs):
    """One solution x of M x = rhs (free variables zero), or None."""
    if len(rhs) != M.nrows():
        raise ValueError("dimension mismatch")
    field = field_of(M)
    n = M.ncols()
    aug = zeros(M.nrows(), n + 1, field)
    for i in range(M.nrows()):
        for j in range(n):
            x = M[i, j]
            if x:
                aug[i, j] = x
        if rhs[i]:
            aug[i, n] = rhs[i]
    R, piv = rref(aug)
    if piv and piv[-1] == n:
        return None
    x = [field.zero] * n
    for i, p in enumerate(piv):
        x[p] = R[i, n]
    return x


def row_space(vectors, ncols: int, field: NumberField = QQ):
    """Canonical rref basis (list of rows) of the span of ``vectors``."""
    vectors = [v for v in vectors]
    if not vectors:
        return []
    R, piv = rref(mat(vectors, field, ncols))
    return [row(R, i) for i in range(len(piv))]


def nullspace_sparse(rows: Iterable[dict], ncols: int, field: NumberField = QQ,
                     chunk: int | None = None):
    """Null space of a sparse system, given as dicts {column: coefficient}.

    Rows are absorbed in chunks: the current kernel basis K is restricted by
    each chunk A_c through ker(A_c K). Returns the kernel as a matrix whose
    columns are the canonical rref basis.
    """
    K = identity(ncols, field)
    if chunk is None:
        chunk = max(64, 200000 // max(ncols, 1))
    buf = []

    def absorb(buf, K):
        if K.ncols() == 0:
            return K
        A = zeros(len(buf), ncols, field)
        for i, r in enumerate(buf):
            for j, x in r.items():
                A[i, j] = x
        B = A * K
        if is_zero_matrix(B):
            return K
        N = kernel_matrix(B)
        return K * N

    for r in rows:
        if not r:
            continue
        buf.append(r)
        if len(buf) >= chunk:
            K = absorb(buf, K)
            buf = []
            if K.ncols() == 0:
                return K
    if buf:
        K = absorb(buf, K)
    return _canonical_columns(K)


# ---------------------------------------------------------------------------
# polynomials


def poly_eval_matrix(coeffs, M):
    """p(M) by Horner's rule; coefficients constant first."""
    field = field_of(M)
    n = M.nrows()
    I = identity(n, field)
    out = zeros(n, n, field)
    for c in reversed(list(coeffs)):
        out = out * M + I * field(c)
    return out


def _poly_trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def poly_divmod(a, b, field: NumberField):
    a = _poly_trim([field(x) for x in a])
    b = _poly_trim([field(x) for x in b])
    if not b:
        raise ZeroDivisionError
    q = [field.zero] * max(len(a) - len(b) + 1, 1)
    inv = field.one / b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = a[-1] * inv
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] = a[i + k] - c * y
        a = _poly_trim(a)
    return q, a


def poly_gcd(a, b, field: NumberField):
    a = _poly_trim([field(x) for x in a])
    b = _poly_trim([field(x) for x in b])
    while b:
        _, r = poly_divmod(a, b, field)
        a, b = b, r
    if not a:
        return []
    inv = field.one / a[-1]
    return [x * inv for x in a]


def poly_derivative(p, field: NumberField):
    return [field(x) * i for i, x in enumerate(p)][1:]


def krylov_minimal_polynomial(M) -> list:
    """Minimal polynomial from the first linear dependency among I, M, M^2, ..."""
    field = field_of(M)
    n = M.nrows()
    powers = [identity(n, field)]
    basis_rows = []
    while True:
        vecs = [flatten(P) for P in powers]
        A = mat(vecs, field, n * n).transpose()
        K = kernel_matrix(A)
        if K.ncols() > 0:
            c = column(K, 0)
            c = _poly_trim(c)
            inv = field.one / c[-1]
            return [x * inv for x in c]
        powers.append(powers[-1] * M)
        basis_rows.append(None)


@dataclass(frozen=True)
class MinimalPolynomial:
    coeffs: tuple
    squarefree: bool


def minimal_polynomial(M) -> MinimalPolynomial:
    """Monic minimal polynomial (constant term first) and squarefree flag."""
    if M.nrows() != M.ncols():
        raise ValueError("matrix must be square")
    field = field_of(M)
    if M.nrows() == 0:
        return MinimalPolynomial((field.one,), True)
    if field.is_rational:
        p = M.minpoly()
        coeffs = [fmpq(p[i]) for i in range(p.degree() + 1)]
    else:
        coeffs = krylov_minimal_polynomial(M)
    g = poly_gcd(coeffs, poly_derivative(coeffs, field), field)
    return MinimalPolynomial(tuple(coeffs), len(g) == 1)


def charpoly(M) -> list:
    """Rational characteristic polynomial coefficients (constant first)."""
    p = M.charpoly()
    return [fmpq(p[i]) for i in range(p.degree() + 1)]


def to_field(M, field: NumberField):
    """Coerce a rational matrix into ``field``."""
    if field.is_rational:
        return M
    return mat([[field(M[i, j]) for j in range(M.ncols())] for i in range(M.nrows())],
               field, M.ncols())


__all__ = [
    "ExtensionNeeded", "NumberField", "NFElem", "NFMatrix", "QQ", "session_field",
    "mat", "zeros", "identity", "diag", "rref", "rank", "kernel_basis", "kernel_matrix",
    "solve_linear", "row_space", "nullspace_sparse", "minimal_polynomial",
    "bareiss_rref", "parse_q", "fmt_q", "fmpq", "flint",
]
