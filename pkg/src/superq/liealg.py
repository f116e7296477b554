"""
Lie superalgebras given by structure constants.

Basis vectors are ordered even-first. ``table[(i, j)]`` is a sparse dict
{k: c} with [e_i, e_j] = sum_k c e_k; both orders are stored, the second
derived from the first by super-antisymmetry. Vectors are plain lists of
field scalars in that basis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dfield
from functools import cached_property

from . import exactla as la
from .exactla import QQ, NumberField, fmpq


def sgn(p, q) -> int:
    return -1 if (p and q) else 1


# ---------------------------------------------------------------------------
# realizations


@dataclass
class Realization:
    """Basis elements as (m|n) block matrices.

    With ``projective`` the bracket only holds modulo the identity matrix
    (psl, pq, psq and friends).
    """

    m: int
    n: int
    mats: list
    projective: bool = False

    def parity_of(self, X) -> int | None:
        m, N = self.m, self.m + self.n
        even = odd = False
        for i in range(N):
            for j in range(N):
                if X[i, j]:
                    if (i < m) == (j < m):
                        even = True
                    else:
                        odd = True
        if even and odd:
            return None
        return 1 if odd else 0

    def str(self, X):
        s = 0
        for i in range(self.m + self.n):
            s = s + (X[i, i] if i < self.m else -X[i, i])
        return s

    def otr(self, X):
        """trace of the upper right block (q-shaped matrices, m = n)."""
        s = 0
        for i in range(self.m):
            s = s + X[i, self.m + i]
        return s


def supercommutator(X, Y, px, py):
    return X * Y - Y * X * sgn(px, py)


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    parity: list = dfield(default_factory=list)
    antisymmetry: list = dfield(default_factory=list)
    jacobi: list = dfield(default_factory=list)
    realization: list = dfield(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.parity or self.antisymmetry or self.jacobi or self.realization)

    def summary(self) -> dict:
        return {
            "ok": self.ok,
            "parity": [list(t) for t in self.parity[:20]],
            "antisymmetry": [list(t) for t in self.antisymmetry[:20]],
            "jacobi": [list(t) for t in self.jacobi[:20]],
            "realization": [list(t) for t in self.realization[:20]],
            "counts": [len(self.parity), len(self.antisymmetry), len(self.jacobi),
                       len(self.realization)],
        }


# ---------------------------------------------------------------------------
# the algebra


class SuperLieAlgebra:
    def __init__(self, labels, parities, table, field: NumberField = QQ,
                 cartan=None, realization: Realization | None = None, name: str = "",
                 loose_violations=None):
        labels = list(labels)
        parities = [int(p) for p in parities]
        if len(set(labels)) != len(labels):
            raise ValueError("basis labels must be unique")
        if len(labels) != len(parities):
            raise ValueError("labels and parities differ in length")
        if any(parities[i] > parities[i + 1] for i in range(len(parities) - 1)):
            raise ValueError("even basis vectors must precede odd ones")
        self.labels = labels
        self.parities = parities
        self.field = field
        self.name = name
        self.realization = realization
        self._loose = list(loose_violations or [])
        self.table = {}
        for (i, j), row in table.items():
            row = {k: field(c) for k, c in row.items() if c}
            if row:
                self.table[(i, j)] = row
        # derive the missing half
        for (i, j), row in list(self.table.items()):
            if (j, i) not in self.table and i != j:
                s = -sgn(parities[i], parities[j])
                self.table[(j, i)] = {k: c * s for k, c in row.items()}
        d = len(labels)
        self.cartan = [self._as_vector(h) for h in (cartan or [])]

    def _as_vector(self, h):
        if isinstance(h, int):
            v = [self.field.zero] * self.dim
            v[h] = self.field.one
            return v
        return [self.field(x) for x in h]

    # shape ---------------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def n_even(self) -> int:
        return self.parities.count(0)

    @property
    def sdim(self) -> tuple:
        e = self.n_even
        return (e, self.dim - e)

    @property
    def even_indices(self):
        return range(self.n_even)

    @property
    def odd_indices(self):
        return range(self.n_even, self.dim)

    def __repr__(self):
        e, o = self.sdim
        return f"<SuperLieAlgebra {self.name or '?'} ({e}|{o})>"

    def zero(self):
        return [self.field.zero] * self.dim

    def unit(self, i):
        v = self.zero()
        v[i] = self.field.one
        return v

    def parity_of(self, v) -> int | None:
        """Parity of a homogeneous vector (None for 0 or mixed)."""
        ev = any(v[i] for i in self.even_indices)
        od = any(v[i] for i in self.odd_indices)
        if ev and od:
            return None
        if od:
            return 1
        if ev:
            return 0
        return None

    def split(self, v):
        """(even part, odd part) of a vector."""
        e = self.n_even
        z = self.field.zero
        return (list(v[:e]) + [z] * (self.dim - e), [z] * e + list(v[e:]))

    # brackets ------------------------------------------------------------
    def bracket_basis(self, i, j) -> dict:
        return self.table.get((i, j), {})

    def bracket(self, u, v):
        out = self.zero()
        nu = [(i, a) for i, a in enumerate(u) if a]
        nv = [(j, b) for j, b in enumerate(v) if b]
        for i, a in nu:
            for j, b in nv:
                row = self.table.get((i, j))
                if row:
                    ab = a * b
                    for k, c in row.items():
                        out[k] = out[k] + ab * c
        return out

    @cached_property
    def _ad(self):
        d = self.dim
        mats = []
        for i in range(d):
            M = la.zeros(d, d, self.field)
            for j in range(d):
                for k, c in self.table.get((i, j), {}).items():
                    M[k, j] = c
            mats.append(M)
        return mats

    def ad(self, i):
        """Matrix of ad(e_i); column j holds [e_i, e_j]."""
        return self._ad[i]

    def ad_vec(self, v):
        d = self.dim
        M = la.zeros(d, d, self.field)
        for i, a in enumerate(v):
            if a:
                M = M + self._ad[i] * a
        return M

    # validation ----------------------------------------------------------
    def validate(self) -> ValidationReport:
        rep = ValidationReport()
        rep.antisymmetry.extend(self._loose)
        P = self.parities
        for (i, j), row in self.table.items():
            for k, c in row.items():
                if P[k] != (P[i] + P[j]) % 2:
                    rep.parity.append((i, j, k))
            other = self.table.get((j, i), {})
            s = -sgn(P[i], P[j])
            keys = set(row) | set(other)
            if any(row.get(k, 0) != s * other.get(k, 0) for k in keys):
                if i <= j:
                    rep.antisymmetry.append((i, j))
        for i in range(self.dim):
            if P[i] == 0 and (i, i) in self.table:
                rep.antisymmetry.append((i, i))
        rep.jacobi = self.jacobi_violations()
        if self.realization is not None:
            rep.realization = realization_violations(self)
        return rep

    def jacobi_violations(self):
        """Triples (i, j, k) with [e_i,[e_j,e_k]] != [[e_i,e_j],e_k] + s [e_j,[e_i,e_k]]."""
        out = []
        P = self.parities
        d = self.dim
        ad = self._ad
        for i in range(d):
            for j in range(i, d):
                lhs = la.zeros(d, d, self.field)
                for k, c in self.table.get((i, j), {}).items():
                    lhs = lhs + ad[k] * c
                rhs = ad[i] * ad[j] - ad[j] * ad[i] * sgn(P[i], P[j])
                diff = lhs - rhs
                if not la.is_zero_matrix(diff):
                    for k in range(d):
                        if any(diff[r, k] for r in range(d)):
                            out.append((i, j, k))
        return out

    # serialization -------------------------------------------------------
    def to_json(self) -> dict:
        F = self.field
        rows = []
        for (i, j) in sorted(self.table):
            if i < j or (i == j and self.parities[i] == 1):
                row = self.table[(i, j)]
                rows.append([i, j, [[k, F.scalar_to_json(row[k])] for k in sorted(row)]])
        out = {
            "name": self.name,
            "field": F.to_json(),
            "basis": [{"label": l, "parity": "odd" if p else "even"}
                      for l, p in zip(self.labels, self.parities)],
            "brackets": rows,
        }
        idx = []
        for h in self.cartan:
            nz = [i for i, x in enumerate(h) if x]
            if len(nz) == 1 and h[nz[0]] == 1:
                idx.append(nz[0])
            else:
                idx = None
                break
        if idx is not None:
            out["cartan_even"] = idx
        else:
            out["cartan_even_vectors"] = [[F.scalar_to_json(x) for x in h] for h in self.cartan]
        if self.realization is not None:
            R = self.realization
            out["realization"] = {
                "m": R.m, "n": R.n, "projective": R.projective,
                "matrices": [[[r, c, F.scalar_to_json(X[r, c])]
                              for r in range(X.nrows()) for c in range(X.ncols()) if X[r, c]]
                             for X in R.mats],
            }
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, d) -> "SuperLieAlgebra":
        """Read the algebra schema; tolerates unsorted rows, both halves and
        an arbitrary basis order (re-sorted even-first)."""
        F = NumberField.from_json(d.get("field"))
        basis = d["basis"]

        def par(p):
            if isinstance(p, str):
                return {"even": 0, "odd": 1, "0": 0, "1": 1}[p.lower()]
            return int(p)

        labels = [b["label"] for b in basis]
        parities = [par(b["parity"]) for b in basis]
        order = sorted(range(len(labels)), key=lambda i: (parities[i], i))
        pos = {old: new for new, old in enumerate(order)}
        table = {}
        loose = []
        for i, j, row in d.get("brackets", []):
            i, j = pos[i], pos[j]
            r = {}
            for k, c in row:
                k = pos[k]
                r[k] = r.get(k, F.zero) + F.scalar_from_json(c)
            r = {k: c for k, c in r.items() if c}
            if (i, j) in table:
                if table[(i, j)] != r:
                    loose.append((min(i, j), max(i, j)))
                continue
            table[(i, j)] = r
        # check explicitly supplied pairs for antisymmetry
        for (i, j), r in list(table.items()):
            if i < j and (j, i) in table:
                s = -sgn(parities[order[i]], parities[order[j]])
                o = table[(j, i)]
                if set(r) != set(o) or any(r[k] != s * o[k] for k in r):
                    loose.append((i, j))
        table = {k: v for k, v in table.items() if v}
        cartan = []
        if "cartan_even" in d:
            cartan = [pos[i] for i in d["cartan_even"]]
        elif "cartan_even_vectors" in d:
            cartan = [[F.scalar_from_json(h[order[i]]) for i in range(len(order))]
                      for h in d["cartan_even_vectors"]]
        real = None
        if "realization" in d and order == list(range(len(order))):
            R = d["realization"]
            N = R["m"] + R["n"]
            mats = []
            for entries in R["matrices"]:
                X = la.zeros(N, N, F)
                for r, c, x in entries:
                    X[r, c] = F.scalar_from_json(x)
                mats.append(X)
            real = Realization(R["m"], R["n"], mats, R.get("projective", False))
        g = cls([labels[i] for i in order], [parities[i] for i in order], table, F,
                cartan, real, d.get("name", ""), loose)
        return g

    @classmethod
    def loads(cls, s: str) -> "SuperLieAlgebra":
        return cls.from_json(json.loads(s))


def realization_violations(g: SuperLieAlgebra):
    """Pairs whose supercommutator disagrees with the structure constants."""
    R = g.realization
    out = []
    N = R.m + R.n
    I = la.identity(N, g.field)
    for i in range(g.dim):
        if R.parity_of(R.mats[i]) not in (g.parities[i], None) or (
                R.parity_of(R.mats[i]) is None and not la.is_zero_matrix(R.mats[i])):
            out.append((i, i, -1))
    for i in range(g.dim):
        for j in range(i, g.dim):
            C = supercommutator(R.mats[i], R.mats[j], g.parities[i], g.parities[j])
            for k, c in g.bracket_basis(i, j).items():
                C = C - R.mats[k] * c
            if R.projective:
                lam = C[0, 0]
                C = C - I * lam
            if not la.is_zero_matrix(C):
                out.append((i, j))
    return out


# ---------------------------------------------------------------------------
# graded subspaces


class Span:
    """Incrementally maintained reduced echelon basis."""

    def __init__(self, n, field=QQ):
        self.n = n
        self.field = field
        self.rows = {}  # pivot -> row (pivot entry 1)

    def reduce(self, v):
        v = list(v)
        for p in sorted(self.rows):
            a = v[p]
            if a:
                r = self.rows[p]
                v = [x - a * y for x, y in zip(v, r)]
        return v

    def add(self, v) -> bool:
        v = self.reduce(v)
        p = next((i for i, x in enumerate(v) if x), None)
        if p is None:
            return False
        inv = self.field.one / v[p]
        v = [x * inv for x in v]
        for q, r in self.rows.items():
            a = r[p]
            if a:
                self.rows[q] = [x - a * y for x, y in zip(r, v)]
        self.rows[p] = v
        return True

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    def basis(self):
        return [self.rows[p] for p in sorted(self.rows)]

    def __len__(self):
        return len(self.rows)


@dataclass
class Subspace:
    """Graded subspace of an algebra, stored as rref bases of both parts."""

    ambient_dim: int
    even: list
    odd: list

    @property
    def sdim(self):
        return (len(self.even), len(self.odd))

    @property
    def dim(self):
        return len(self.even) + len(self.odd)

    @property
    def basis(self):
        return self.even + self.odd

    @property
    def parities(self):
        return [0] * len(self.even) + [1] * len(self.odd)

    def contains(self, v, field=QQ) -> bool:
        S = Span(self.ambient_dim, field)
        for b in self.basis:
            S.add(b)
        return S.contains(v)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim
                and self.even == other.even and self.odd == other.odd)


def graded_subspace(g: SuperLieAlgebra, vectors) -> Subspace:
    """Span of the homogeneous parts of ``vectors``."""
    ev, od = [], []
    for v in vectors:
        a, b = g.split(v)
        if any(a):
            ev.append(a)
        if any(b):
            od.append(b)
    return Subspace(g.dim, la.row_space(ev, g.dim, g.field), la.row_space(od, g.dim, g.field))


def whole(g: SuperLieAlgebra) -> Subspace:
    return graded_subspace(g, [g.unit(i) for i in range(g.dim)])


def zero_subspace(g: SuperLieAlgebra) -> Subspace:
    return Subspace(g.dim, [], [])


def subspace_sum(g, *subs) -> Subspace:
    return graded_subspace(g, [v for S in subs for v in S.basis])


def subspace_intersection(g, A: Subspace, B: Subspace) -> Subspace:
    out = []
    for pa, pb in ((A.even, B.even), (A.odd, B.odd)):
        if not pa or not pb:
            continue
        # x = sum a_i A_i = sum b_j B_j
        M = la.mat(pa + pb, g.field, g.dim).transpose()
        K = la.kernel_basis(M)
        for c in K:
            v = g.zero()
            for coef, r in zip(c[:len(pa)], pa):
                if coef:
                    v = [x + coef * y for x, y in zip(v, r)]
            out.append(v)
    return graded_subspace(g, out)


def contained(g, A: Subspace, B: Subspace) -> bool:
    S = Span(g.dim, g.field)
    for b in B.basis:
        S.add(b)
    return all(S.contains(a) for a in A.basis)


def bracket_spaces(g, A: Subspace, B: Subspace) -> Subspace:
    return graded_subspace(g, [g.bracket(a, b) for a in A.basis for b in B.basis])


def subspace_closure(g: SuperLieAlgebra, seed, mode: str = "subalgebra") -> Subspace:
    """Smallest graded subalgebra (or ideal) containing ``seed``."""
    if mode not in ("subalgebra", "ideal"):
        raise ValueError(f"unknown closure mode {mode!r}")
    S = Span(g.dim, g.field)
    queue = []
    for v in seed:
        for part in g.split(v):
            if any(part) and S.add(part):
                queue.append(part)
    if mode == "ideal":
        partners = [g.unit(i) for i in range(g.dim)]
    done = []
    while queue:
        v = queue.pop(0)
        others = partners if mode == "ideal" else done + [v]
        for u in others:
            w = g.bracket(u, v)
            if any(w) and S.add(w):
                queue.append(w)
        done.append(v)
    return graded_subspace(g, S.basis())


def derived(g: SuperLieAlgebra) -> Subspace:
    return graded_subspace(g, [g.bracket(g.unit(i), g.unit(j))
                               for i in range(g.dim) for j in range(i, g.dim)])


def is_ideal(g: SuperLieAlgebra, S: Subspace) -> bool:
    sp = Span(g.dim, g.field)
    for b in S.basis:
        sp.add(b)
    return all(sp.contains(g.bracket(g.unit(i), b)) for b in S.basis for i in range(g.dim))


def is_subalgebra(g: SuperLieAlgebra, S: Subspace) -> bool:
    sp = Span(g.dim, g.field)
    for b in S.basis:
        sp.add(b)
    B = S.basis
    return all(sp.contains(g.bracket(a, b)) for a in B for b in B)


def coordinates(S: Subspace, v):
    """Coordinates of v in the rref basis of S (v assumed to lie in S)."""
    out = []
    for r in S.basis:
        p = next(i for i, x in enumerate(r) if x)
        out.append(v[p])
    return out


def _sub_labels(g, S):
    labels = []
    for r in S.basis:
        nz = [i for i, x in enumerate(r) if x]
        if len(nz) == 1 and r[nz[0]] == 1:
            labels.append(g.labels[nz[0]])
        else:
            labels.append(None)
    # fall back to generic names for combinations, keep uniqueness
    out = []
    seen = set()
    for t, l in enumerate(labels):
        if l is None or l in seen:
            l = f"v{t}"
        while l in seen:
            l = l + "'"
        seen.add(l)
        out.append(l)
    return out


def subalgebra(g: SuperLieAlgebra, S: Subspace, name: str = "") -> SuperLieAlgebra:
    """The algebra structure on S in its rref basis."""
    B = S.basis
    table = {}
    for a in range(len(B)):
        for b in range(a, len(B)):
            w = g.bracket(B[a], B[b])
            if any(w):
                c = coordinates(S, w)
                table[(a, b)] = {k: x for k, x in enumerate(c) if x}
    cartan = []
    if g.cartan and all(S.contains(h, g.field) for h in g.cartan):
        cartan = [coordinates(S, h) for h in g.cartan]
    real = None
    if g.realization is not None and not g.realization.projective:
        R = g.realization
        mats = [_combine(R.mats, r, g.field, R.m + R.n) for r in B]
        real = Realization(R.m, R.n, mats, False)
    return SuperLieAlgebra(_sub_labels(g, S), S.parities, table, g.field, cartan, real,
                           name or f"sub({g.name})")


def _combine(mats, coeffs, field, N):
    X = la.zeros(N, N, field)
    for M, c in zip(mats, coeffs):
        if c:
            X = X + M * c
    return X


@dataclass
class Quotient:
    algebra: SuperLieAlgebra
    complement: list  # indices of g's basis forming the complement
    ideal: Subspace

    def project(self, g: SuperLieAlgebra, v):
        """Image of v in the quotient coordinates."""
        r = self._reducer(g).reduce(v)
        return [r[i] for i in self.complement]

    def lift(self, g: SuperLieAlgebra, w):
        v = g.zero()
        for c, i in zip(w, self.complement):
            v[i] = c
        return v

    def _reducer(self, g):
        if not hasattr(self, "_span"):
            sp = Span(g.dim, g.field)
            for b in self.ideal.basis:
                sp.add(b)
            self._span = sp
        return self._span

    def projection_matrix(self, g):
        cols = [self.project(g, g.unit(i)) for i in range(g.dim)]
        return la.mat(cols, g.field, len(self.complement)).transpose() if cols else None


def quotient(g: SuperLieAlgebra, I: Subspace, name: str = "") -> Quotient:
    """g/I on the complement spanned by the non-pivot basis vectors."""
    if not is_ideal(g, I):
        raise ValueError("subspace is not an ideal")
    pivots = {next(i for i, x in enumerate(r) if x) for r in I.basis}
    comp = [i for i in range(g.dim) if i not in pivots]
    Q = Quotient(None, comp, I)
    table = {}
    for a, i in enumerate(comp):
        for b in range(a, len(comp)):
            j = comp[b]
            w = g.bracket_basis(i, j)
            if w:
                v = g.zero()
                for k, c in w.items():
                    v[k] = c
                c = Q.project(g, v)
                row = {k: x for k, x in enumerate(c) if x}
                if row:
                    table[(a, b)] = row
    cartan = [Q.project(g, h) for h in g.cartan]
    cartan = la.row_space([h for h in cartan if any(h)], len(comp), g.field) if cartan else []
    real = None
    if g.realization is not None:
        R = g.realization
        N = R.m + R.n
        # quotients by a central line of scalars keep a projective realization
        scal = all(_is_scalar(_combine(R.mats, b, g.field, N)) for b in I.basis)
        if scal:
            real = Realization(R.m, R.n, [R.mats[i] for i in comp],
                               R.projective or I.dim > 0)
    Q.algebra = SuperLieAlgebra([g.labels[i] for i in comp], [g.parities[i] for i in comp],
                                table, g.field, cartan, real, name or f"{g.name}/I")
    return Q


def _is_scalar(X):
    n = X.nrows()
    a = X[0, 0] if n else 0
    return all(X[i, j] == (a if i == j else 0) for i in range(n) for j in range(n))


def direct_sum(gs, name: str = "") -> SuperLieAlgebra:
    """Direct sum, basis re-ordered even-first (all even parts, then all odd)."""
    if not gs:
        return SuperLieAlgebra([], [], {}, QQ, [], None, name or "0")
    F = gs[0].field
    if any(g.field != F for g in gs):
        raise ValueError("summands over different fields")
    pos = []  # pos[t][i] = new index
    ev = sum(g.n_even for g in gs)
    e_off, o_off = 0, ev
    labels, parities = [None] * sum(g.dim for g in gs), [0] * sum(g.dim for g in gs)
    for t, g in enumerate(gs):
        m = {}
        for i in range(g.dim):
            if g.parities[i] == 0:
                m[i] = e_off
                e_off += 1
            else:
                m[i] = o_off
                o_off += 1
            labels[m[i]] = f"{g.labels[i]}#{t}" if len(gs) > 1 else g.labels[i]
            parities[m[i]] = g.parities[i]
        pos.append(m)
    table = {}
    cartan = []
    D = len(labels)
    for t, g in enumerate(gs):
        m = pos[t]
        for (i, j), row in g.table.items():
            table[(m[i], m[j])] = {m[k]: c for k, c in row.items()}
        for h in g.cartan:
            v = [F.zero] * D
            for i, x in enumerate(h):
                v[m[i]] = x
            cartan.append(v)
    s = SuperLieAlgebra(labels, parities, table, F, cartan, None,
                        name or " + ".join(g.name for g in gs))
    s.embeddings = pos
    return s


def generators(g: SuperLieAlgebra) -> list:
    """A small set of basis indices generating g as an algebra (greedy)."""
    S = Span(g.dim, g.field)
    gens = []
    # root-like vectors first: they generate quickly
    order = sorted(range(g.dim), key=lambda i: (not _is_eigen_for_cartan(g, i), i))
    for i in order:
        if S.contains(g.unit(i)):
            continue
        gens.append(i)
        cl = subspace_closure(g, [g.unit(k) for k in gens], "subalgebra")
        S = Span(g.dim, g.field)
        for b in cl.basis:
            S.add(b)
        if len(S) == g.dim:
            break
    return sorted(gens)


def _is_eigen_for_cartan(g, i):
    if not g.cartan:
        return False
    e = g.unit(i)
    if any(g.unit(i) == h for h in g.cartan):
        return False
    for h in g.cartan:
        w = g.bracket(h, e)
        if any(w[k] for k in range(g.dim) if k != i):
            return False
    return any(any(g.bracket(h, e)) for h in g.cartan)


# ---------------------------------------------------------------------------
# invariant forms


@dataclass
class BilinearForm:
    gram: object
    parity: int
    nondegenerate: bool
    kind: str = ""

    def __call__(self, u, v):
        return sum((u[i] * self.gram[i, j] * v[j] for i in range(len(u)) if u[i]
                    for j in range(len(v)) if v[j]), 0)


def form_violations(g: SuperLieAlgebra, G, parity: int | None = None):
    """Invariance, supersymmetry and parity failures of the Gram matrix G."""
    P = g.parities
    d = g.dim
    bad = []
    for i in range(d):
        for j in range(d):
            x = G[i, j]
            if x and parity is not None and (P[i] + P[j]) % 2 != parity:
                bad.append(("parity", i, j))
            if x != sgn(P[i], P[j]) * G[j, i]:
                bad.append(("symmetry", i, j))
    ad = [g.ad(i) for i in range(d)]
    Gt = G.transpose()
    for x in range(d):
        # B([x,y],z) = (ad_x^T G)[y,z];  B(y,[x,z]) = (G ad_x)[y,z]
        A1 = ad[x].transpose() * G
        A2 = G * ad[x]
        for y in range(d):
            s = sgn(P[x], P[y])
            for z in range(d):
                if A1[y, z] + s * A2[y, z]:
                    bad.append(("invariance", x, y, z))
    return bad


def invariant_form(g: SuperLieAlgebra, kind: str = "detect_all") -> list:
    d = g.dim
    F = g.field
    if kind in ("supertrace_of_rep", "otr"):
        R = g.realization
        if R is None:
            raise ValueError(f"{kind} requires a matrix realization")
        G = la.zeros(d, d, F)
        for i in range(d):
            for j in range(d):
                XY = R.mats[i] * R.mats[j]
                v = R.str(XY) if kind == "supertrace_of_rep" else R.otr(XY)
                if v:
                    G[i, j] = v
        par = 0 if kind == "supertrace_of_rep" else 1
        return [BilinearForm(G, par, la.rank(G) == d, kind)]
    if kind == "killing":
        G = la.zeros(d, d, F)
        ad = [g.ad(i) for i in range(d)]
        n0 = g.n_even
        for i in range(d):
            for j in range(d):
                if g.parities[i] != g.parities[j]:
                    continue
                M = ad[i] * ad[j]
                s = F.zero
                for k in range(d):
                    s = s + (M[k, k] if k < n0 else -M[k, k])
                if s:
                    G[i, j] = s
        return [BilinearForm(G, 0, la.rank(G) == d, kind)]
    if kind != "detect_all":
        raise ValueError(f"unknown form kind {kind!r}")
    out = []
    for par in (0, 1):
        out.extend(_solve_forms(g, par))
    return out


def _solve_forms(g: SuperLieAlgebra, par: int):
    d = g.dim
    P = g.parities
    F = g.field
    # unknowns: G[i,j] with i <= j and parity match; G[j,i] = s G[i,j]
    var = {}
    for i in range(d):
        for j in range(i, d):
            if (P[i] + P[j]) % 2 == par:
                if i == j and P[i] == 1:
                    continue  # s = -1 forces 0 on the odd diagonal
                var[(i, j)] = len(var)

    def entry(i, j):
        if i <= j:
            return var.get((i, j)), 1
        return var.get((j, i)), sgn(P[i], P[j])

    gens = range(d)
    rows = []
    for x in gens:
        for y in range(d):
            s = sgn(P[x], P[y])
            for z in range(d):
                r = {}
                for k, c in g.bracket_basis(x, y).items():
                    v, t = entry(k, z)
                    if v is not None:
                        r[v] = r.get(v, 0) + c * t
                for k, c in g.bracket_basis(x, z).items():
                    v, t = entry(y, k)
                    if v is not None:
                        r[v] = r.get(v, 0) + s * c * t
                r = {k: v for k, v in r.items() if v}
                if r:
                    rows.append(r)
    K = la.nullspace_sparse(rows, len(var), F)
    forms = []
    for c in range(K.ncols()):
        G = la.zeros(d, d, F)
        for (i, j), v in var.items():
            x = K[v, c]
            if x:
                G[i, j] = x
                if i != j:
                    G[j, i] = x * sgn(P[i], P[j])
        forms.append(BilinearForm(G, par, la.rank(G) == d, "detected"))
    return forms
