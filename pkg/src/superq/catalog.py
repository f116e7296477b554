"""
Constructors for the named families.

Matrix families are built from explicit matrix bases and their structure
constants are read off supercommutators. The exceptional and built-up
families are assembled from bracket formulas on tensor products. Every
constructor returns a validated algebra with a designated even Cartan.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dfield
from fractions import Fraction
from functools import lru_cache
from itertools import product

from . import exactla as la
from .exactla import QQ, fmpq
from .liealg import (Realization, SuperLieAlgebra, graded_subspace, quotient, sgn,
                     subalgebra, subspace_closure, supercommutator)


# ---------------------------------------------------------------------------
# small helpers


def E(N, i, j):
    X = la.zeros(N, N)
    X[i, j] = 1
    return X


def _par(i, j, m):
    return int((i < m) != (j < m))


class CoordSolver:
    """Coordinates of matrices in the span of a fixed list of matrices."""

    def __init__(self, mats):
        self.mats = mats
        N = mats[0].nrows()
        self.N = N
        B = la.mat([la.flatten(X) for X in mats], QQ, N * N)
        _, piv = la.rref(B)
        if len(piv) != len(mats):
            raise ValueError("matrices are linearly dependent")
        self.piv = piv
        sub = la.mat([[B[r, c] for c in piv] for r in range(len(mats))])
        self.inv = sub.inv()
        self.B = B

    def __call__(self, X, check=True):
        N = self.N
        w = la.mat([[X[c // N, c % N] for c in self.piv]])
        c = w * self.inv
        coeffs = [c[0, k] for k in range(len(self.mats))]
        if check:
            rec = la.mat([coeffs]) * self.B
            flat = la.flatten(X)
            if any(rec[0, t] != flat[t] for t in range(N * N)):
                raise ValueError("matrix not in the span")
        return coeffs


def algebra_from_matrices(labels, parities, mats, m, n, cartan, name,
                          field=QQ) -> SuperLieAlgebra:
    """Structure constants of a matrix superalgebra spanned by ``mats``."""
    order = sorted(range(len(labels)), key=lambda i: (parities[i], i))
    labels = [labels[i] for i in order]
    parities = [parities[i] for i in order]
    mats = [mats[i] for i in order]
    pos = {old: new for new, old in enumerate(order)}
    cartan = [pos[c] if isinstance(c, int) else c for c in cartan]
    solve = CoordSolver(mats)
    table = {}
    for i in range(len(mats)):
        for j in range(i, len(mats)):
            C = supercommutator(mats[i], mats[j], parities[i], parities[j])
            if la.is_zero_matrix(C):
                continue
            c = solve(C)
            row = {k: x for k, x in enumerate(c) if x}
            if row:
                table[(i, j)] = row
    return SuperLieAlgebra(labels, parities, table, field, cartan,
                           Realization(m, n, mats), name)


def _unit_label(i, j):
    return f"E{i + 1}_{j + 1}"


def _weight_key(w):
    return tuple(w)


def solve_weight_graded(nvars, var_weight, rows):
    """Kernel of a weight-homogeneous sparse system, one weight at a time.

    Returns a list of (weight, kernel vectors in full coordinates), sorted by
    weight, zero weight first.
    """
    groups = {}
    for v in range(nvars):
        groups.setdefault(_weight_key(var_weight[v]), []).append(v)
    out = []
    keys = sorted(groups, key=lambda w: (any(w), w))
    for w in keys:
        vs = groups[w]
        loc = {v: t for t, v in enumerate(vs)}
        sub = []
        for r in rows:
            rr = {loc[v]: c for v, c in r.items() if v in loc}
            if rr:
                sub.append(rr)
        K = la.nullspace_sparse(sub, len(vs))
        vecs = []
        for c in range(K.ncols()):
            full = [fmpq(0)] * nvars
            for t, v in enumerate(vs):
                full[v] = K[t, c]
            vecs.append(full)
        if vecs:
            out.append((w, vecs))
    return out


# ---------------------------------------------------------------------------
# gl, sl, psl, pgl


def gl(m, n=0):
    N = m + n
    labels, pars, mats = [], [], []
    for i in range(N):
        for j in range(N):
            labels.append(_unit_label(i, j))
            pars.append(_par(i, j, m))
            mats.append(E(N, i, j))
    cartan = [i * N + i for i in range(N)]
    return algebra_from_matrices(labels, pars, mats, m, n, cartan, f"gl({m},{n})" if n else f"gl({m})")


def sl(m, n=0):
    N = m + n
    if N < 2:
        raise ValueError("sl needs m + n >= 2")
    if m == n == 1:
        pass
    labels, pars, mats = [], [], []
    cart = []
    for i in range(N - 1):
        s = 1 if i == m - 1 else -1
        X = E(N, i, i) + E(N, i + 1, i + 1) * s
        labels.append(f"h{i + 1}")
        pars.append(0)
        mats.append(X)
        cart.append(len(mats) - 1)
    for i in range(N):
        for j in range(N):
            if i != j:
                labels.append(_unit_label(i, j))
                pars.append(_par(i, j, m))
                mats.append(E(N, i, j))
    return algebra_from_matrices(labels, pars, mats, m, n, cart, f"sl({m},{n})" if n else f"sl({m})")


def _mod_identity(g, name):
    """Quotient by the line of scalar matrices inside g."""
    N = g.realization.m + g.realization.n
    I = la.identity(N)
    c = CoordSolver(g.realization.mats)(I)
    Q = quotient(g, graded_subspace(g, [c]), name)
    return Q.algebra


def psl(n):
    return _mod_identity(sl(n, n), f"psl({n},{n})")


def pgl(m, n):
    return _mod_identity(gl(m, n), f"pgl({m},{n})")


# ---------------------------------------------------------------------------
# orthosymplectic


def _osp_form(m, n2):
    N = m + n2
    J = la.zeros(N, N)
    for i in range(m):
        J[i, m - 1 - i] = 1
    k = n2 // 2
    for i in range(k):
        J[m + i, m + k + i] = 1
        J[m + k + i, m + i] = -1
    return J


def _diag_weights(cartan_mats, N):
    return [[h[i, i] for h in cartan_mats] for i in range(N)]


def _form_preserving(m, n, J, name, extra=None):
    """Matrices X with (Xv,w) + (-1)^{p(X)p(v)} (v,Xw) = 0 for v^T J w."""
    N = m + n
    pi = [0 if i < m else 1 for i in range(N)]

    def rows_for(parity, allowed):
        idx = {}
        for c in range(N):
            for d in range(N):
                if _par(c, d, m) == parity and (c, d) in allowed:
                    idx[(c, d)] = len(idx)
        rows = []
        for a in range(N):
            for b in range(N):
                s = sgn(parity, pi[a])
                r = {}
                for c in range(N):
                    if J[c, b] and (c, a) in idx:
                        v = idx[(c, a)]
                        r[v] = r.get(v, 0) + J[c, b]
                    if J[a, c] and (c, b) in idx:
                        v = idx[(c, b)]
                        r[v] = r.get(v, 0) + s * J[a, c]
                r = {k: x for k, x in r.items() if x}
                if r:
                    rows.append(r)
        if extra:
            rows.extend(extra(parity, idx))
        return idx, rows

    # Cartan: diagonal solutions
    allpos = {(c, d) for c in range(N) for d in range(N)}
    didx, drows = rows_for(0, {(i, i) for i in range(N)})
    K = la.nullspace_sparse(drows, len(didx))
    cartan_mats = []
    inv = {v: k for k, v in didx.items()}
    for c in range(K.ncols()):
        X = la.zeros(N, N)
        for v in range(len(didx)):
            if K[v, c]:
                X[inv[v][0], inv[v][1]] = K[v, c]
        cartan_mats.append(X)
    wts = _diag_weights(cartan_mats, N)
    labels, pars, mats, cart = [], [], [], []
    for t, X in enumerate(cartan_mats):
        labels.append(f"h{t + 1}")
        pars.append(0)
        mats.append(X)
        cart.append(t)
    for parity in (0, 1):
        idx, rows = rows_for(parity, allpos)
        inv = {v: k for k, v in idx.items()}
        var_w = [[wts[c][t] - wts[d][t] for t in range(len(cartan_mats))]
                 for (c, d) in (inv[v] for v in range(len(idx)))]
        for w, vecs in solve_weight_graded(len(idx), var_w, rows):
            if not any(w) and parity == 0:
                continue  # the Cartan, already listed
            for vec in vecs:
                X = la.zeros(N, N)
                lead = None
                for v, x in enumerate(vec):
                    if x:
                        c, d = inv[v]
                        X[c, d] = x
                        if lead is None:
                            lead = (c, d)
                labels.append(f"X{lead[0] + 1}_{lead[1] + 1}")
                pars.append(parity)
                mats.append(X)
    return algebra_from_matrices(labels, pars, mats, m, n, cart, name)


def osp(m, n2):
    if n2 % 2:
        raise ValueError("osp(m, 2n) needs an even second parameter")
    return _form_preserving(m, n2, _osp_form(m, n2), f"osp({m},{n2})")


def so(m):
    return _form_preserving(m, 0, _osp_form(m, 0), f"so({m})")


def sp_symplectic(n2):
    g = _form_preserving(0, n2, _osp_form(0, n2), f"sp_symplectic({n2})")
    # relabel as purely even: the odd block of an (0|2n) realization is even here
    return g


# ---------------------------------------------------------------------------
# queer family


def q(n, name=None):
    N = 2 * n
    labels, pars, mats, cart = [], [], [], []
    for i in range(n):
        for j in range(n):
            labels.append(f"A{i + 1}_{j + 1}")
            pars.append(0)
            mats.append(E(N, i, j) + E(N, n + i, n + j))
            if i == j:
                cart.append(len(mats) - 1)
    for i in range(n):
        for j in range(n):
            labels.append(f"B{i + 1}_{j + 1}")
            pars.append(1)
            mats.append(E(N, i, n + j) + E(N, n + i, j))
    return algebra_from_matrices(labels, pars, mats, n, n, cart, name or f"q({n})")


def sq(n):
    N = 2 * n
    labels, pars, mats, cart = [], [], [], []
    for i in range(n):
        for j in range(n):
            labels.append(f"A{i + 1}_{j + 1}")
            pars.append(0)
            mats.append(E(N, i, j) + E(N, n + i, n + j))
            if i == j:
                cart.append(len(mats) - 1)
    for i in range(n - 1):
        labels.append(f"H{i + 1}")
        pars.append(1)
        mats.append(E(N, i, n + i) + E(N, n + i, i) - E(N, i + 1, n + i + 1) - E(N, n + i + 1, i + 1))
    for i in range(n):
        for j in range(n):
            if i != j:
                labels.append(f"B{i + 1}_{j + 1}")
                pars.append(1)
                mats.append(E(N, i, n + j) + E(N, n + i, j))
    return algebra_from_matrices(labels, pars, mats, n, n, cart, f"sq({n})")


def pq(n):
    return _mod_identity(q(n), f"pq({n})")


def psq(n):
    return _mod_identity(sq(n), f"psq({n})")


# ---------------------------------------------------------------------------
# periplectic family


def p(n, traceless=False):
    """(A B; C -A^t) with B symmetric and C skew; ``traceless`` gives sp(n)."""
    N = 2 * n
    labels, pars, mats, cart = [], [], [], []
    if traceless:
        for i in range(n - 1):
            labels.append(f"h{i + 1}")
            pars.append(0)
            mats.append(E(N, i, i) - E(N, n + i, n + i) - E(N, i + 1, i + 1) + E(N, n + i + 1, n + i + 1))
            cart.append(len(mats) - 1)
    for i in range(n):
        for j in range(n):
            if traceless and i == j:
                continue
            labels.append(f"A{i + 1}_{j + 1}")
            pars.append(0)
            mats.append(E(N, i, j) - E(N, n + j, n + i))
            if i == j:
                cart.append(len(mats) - 1)
    for i in range(n):
        for j in range(i, n):
            labels.append(f"B{i + 1}_{j + 1}")
            pars.append(1)
            X = E(N, i, n + j)
            if i != j:
                X = X + E(N, j, n + i)
            mats.append(X)
    for i in range(n):
        for j in range(i + 1, n):
            labels.append(f"C{i + 1}_{j + 1}")
            pars.append(1)
            mats.append(E(N, n + i, j) - E(N, n + j, i))
    return algebra_from_matrices(labels, pars, mats, n, n, cart,
                                 f"sp({n})" if traceless else f"p({n})")


def sp(n):
    """The traceless part [p(n), p(n)] = p(n) ∩ sl(n,n)."""
    return p(n, traceless=True)


# ---------------------------------------------------------------------------
# table builder for the abstract families


class Builder:
    def __init__(self, name=""):
        self.name = name
        self.labels = []
        self.par = []
        self.idx = {}
        self.table = {}
        self.cartan = []

    def add(self, label, parity):
        self.idx[label] = len(self.labels)
        self.labels.append(label)
        self.par.append(parity)
        return label

    def set(self, a, b, vec):
        """Add vec to [a, b] (and the derived value to [b, a])."""
        i, j = self.idx[a], self.idx[b]
        vec = {self.idx[k]: fmpq(c) for k, c in vec.items() if c}
        if not vec:
            return
        if i > j:
            s = -sgn(self.par[i], self.par[j])
            vec = {k: s * c for k, c in vec.items()}
            i, j = j, i
        row = self.table.setdefault((i, j), {})
        for k, c in vec.items():
            row[k] = row.get(k, 0) + c

    def build(self, field=QQ):
        order = sorted(range(len(self.labels)), key=lambda i: (self.par[i], i))
        pos = {old: new for new, old in enumerate(order)}
        table = {}
        for (i, j), row in self.table.items():
            a, b = pos[i], pos[j]
            r = {pos[k]: c for k, c in row.items() if c}
            if not r:
                continue
            if a > b:
                s = -sgn(self.par[i], self.par[j])
                r = {k: s * c for k, c in r.items()}
                a, b = b, a
            table[(a, b)] = r
        cart = [pos[self.idx[c]] for c in self.cartan]
        return SuperLieAlgebra([self.labels[i] for i in order], [self.par[i] for i in order],
                               table, field, cart, None, self.name)


def _add_lie(B, g, prefix="", suffix=""):
    """Copy an (even) algebra's basis and brackets into a builder."""
    names = [f"{prefix}{l}{suffix}" for l in g.labels]
    for nm, p_ in zip(names, g.parities):
        B.add(nm, p_)
    for (i, j), row in g.table.items():
        if i <= j:
            B.set(names[i], names[j], {names[k]: c for k, c in row.items()})
    return names


# ---------------------------------------------------------------------------
# sl(2) data shared by the exceptional constructions

_H = la.mat([[1, 0], [0, -1]])
_E = la.mat([[0, 1], [0, 0]])
_F = la.mat([[0, 0], [1, 0]])
_SL2 = [("h", _H), ("e", _E), ("f", _F)]


def _omega(a, b):
    """Symplectic form on the 2-dim module, basis (v+, v-)."""
    return {(0, 1): 1, (1, 0): -1}.get((a, b), 0)


@lru_cache(None)
def _rho(a, b):
    """rho(v_a, v_b) in sl(2) coordinates (h, e, f), with rho(v,v)(u) = omega(v,u) v."""
    M = la.zeros(2, 2)
    for u in range(2):
        col = [fmpq(0), fmpq(0)]
        col[b] += fmpq(_omega(a, u), 2)
        col[a] += fmpq(_omega(b, u), 2)
        M[0, u] = col[0]
        M[1, u] = col[1]
    # M = x h + y e + z f
    return (M[0, 0], M[0, 1], M[1, 0])


def _sl2_act(k, a):
    """sl(2) basis element k (0=h,1=e,2=f) on v_a: returns {b: c}."""
    X = _SL2[k][1]
    return {b: X[b, a] for b in range(2) if X[b, a]}


def d21a_raw(alpha, beta, gamma, name=None) -> SuperLieAlgebra:
    """sl2^3 + V x V x V with the bracket weighted by (alpha, beta, gamma).

    No check on alpha + beta + gamma: Jacobi is left to the validator.
    """
    alpha, beta, gamma = fmpq(alpha), fmpq(beta), fmpq(gamma)
    B = Builder(name or f"D(2,1;{alpha}:{beta}:{gamma})")
    sl2 = sl(2)
    for t in range(3):
        for k, (nm, _) in enumerate(_SL2):
            B.add(f"{nm}{t + 1}", 0)
        for i in range(3):
            for j in range(i + 1, 3):
                X = supercommutator(_SL2[i][1], _SL2[j][1], 0, 0)
                c = CoordSolver([m for _, m in _SL2])(X)
                B.set(f"{_SL2[i][0]}{t + 1}", f"{_SL2[j][0]}{t + 1}",
                      {f"{_SL2[k][0]}{t + 1}": c[k] for k in range(3)})
    sym = "+-"
    odd = {}
    for abc in product(range(2), repeat=3):
        odd[abc] = B.add("x" + "".join(sym[a] for a in abc), 1)
    for t in range(3):
        for k in range(3):
            for abc in odd:
                vec = {}
                for b, c in _sl2_act(k, abc[t]).items():
                    new = list(abc)
                    new[t] = b
                    vec[odd[tuple(new)]] = vec.get(odd[tuple(new)], 0) + c
                B.set(f"{_SL2[k][0]}{t + 1}", odd[abc], vec)
    # gamma weights rho on the first factor, beta the second, alpha the third
    coef = (gamma, beta, alpha)
    keys = list(odd)
    for s in range(len(keys)):
        for r in range(s, len(keys)):
            x, y = keys[s], keys[r]
            vec = {}
            for t in range(3):
                others = [u for u in range(3) if u != t]
                w = _omega(x[others[0]], y[others[0]]) * _omega(x[others[1]], y[others[1]])
                if not w:
                    continue
                rh = _rho(x[t], y[t])
                for k in range(3):
                    if rh[k]:
                        lbl = f"{_SL2[k][0]}{t + 1}"
                        vec[lbl] = vec.get(lbl, 0) + coef[t] * w * rh[k]
            B.set(odd[x], odd[y], vec)
    B.cartan = ["h1", "h2", "h3"]
    return B.build()


def d21a(a) -> SuperLieAlgebra:
    a = fmpq(a) if not isinstance(a, str) else la.parse_q(a)
    g = d21a_raw(a, 1, -1 - a, f"D(2,1;{_fmt(a)})")
    return g


def _fmt(x):
    x = fmpq(x)
    return str(x.p) if x.q == 1 else f"{x.p}/{x.q}"


# ---------------------------------------------------------------------------
# G(1,2) and F(1,3): sl2 + s on V x W


def _cross(a, b):
    return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]


def octonion_mul(x, y):
    """Split octonions as Zorn vector matrices (a, v; w, b), flattened to 8 entries."""
    a, v, w, b = x[0], x[1:4], x[4:7], x[7]
    a2, v2, w2, b2 = y[0], y[1:4], y[4:7], y[7]
    dot = lambda s, t: sum((p_ * q_ for p_, q_ in zip(s, t)), fmpq(0))
    A = a * a2 + dot(v, w2)
    V = [a * p_ + b2 * q_ - r for p_, q_, r in zip(v2, v, _cross(w, w2))]
    W = [a2 * p_ + b * q_ + r for p_, q_, r in zip(w, w2, _cross(v, v2))]
    Bb = b * b2 + dot(w, v2)
    return [A] + V + W + [Bb]


@lru_cache(None)
def g2_data():
    """G2 = Der(octonions) acting on the imaginary octonions.

    Returns (labels, 7x7 matrices, cartan labels, invariant form on V7).
    """
    units = [[fmpq(int(i == k)) for i in range(8)] for k in range(8)]
    prod = [[octonion_mul(units[i], units[j]) for j in range(8)] for i in range(8)]
    # torus weights (sl3 diagonal): a, b weight 0, v_i -> t_i, w_i -> -t_i
    tor = [[1, -1, 0], [0, 1, -1]]
    wt = [[0, 0]] + [[t[i] for t in tor] for i in range(3)] + \
         [[-t[i] for t in tor] for i in range(3)] + [[0, 0]]
    var = lambda r, c: r * 8 + c
    var_w = [[wt[r][s] - wt[c][s] for s in range(2)] for r in range(8) for c in range(8)]
    rows = []
    for i in range(8):
        for j in range(8):
            # D(e_i e_j) - D(e_i) e_j - e_i D(e_j) = 0, component k
            for k in range(8):
                r = {}
                for l, c in enumerate(prod[i][j]):
                    if c:
                        r[var(k, l)] = r.get(var(k, l), 0) + c
                for l in range(8):
                    c = prod[l][j][k]
                    if c:
                        r[var(l, i)] = r.get(var(l, i), 0) - c
                    c = prod[i][l][k]
                    if c:
                        r[var(l, j)] = r.get(var(l, j), 0) - c
                r = {a: b for a, b in r.items() if b}
                if r:
                    rows.append(r)
    blocks = solve_weight_graded(64, var_w, rows)
    ders = [(w, v) for w, vs in blocks for v in vs]
    if len(ders) != 14:
        raise RuntimeError(f"derivation algebra of octonions has dim {len(ders)}")
    # V7 basis: u0 = (1,0,..,0,-1), v1..3, w1..3
    vb = [[fmpq(1)] + [fmpq(0)] * 6 + [fmpq(-1)]] + units[1:7]
    Vmat = la.mat(vb).transpose()
    solver_cols = None
    mats, labels, cart = [], [], []
    for t, (w, vec) in enumerate(ders):
        D8 = la.mat([[vec[var(r, c)] for c in range(8)] for r in range(8)])
        img = D8 * Vmat
        M = la.zeros(7, 7)
        for c in range(7):
            col = [img[r, c] for r in range(8)]
            # coordinates in vb: u0 coefficient = col[0]; check col[7] = -col[0]
            if col[7] != -col[0]:
                raise RuntimeError("derivation does not preserve imaginary octonions")
            M[0, c] = col[0]
            for r in range(1, 7):
                M[r, c] = col[r]
        mats.append(M)
        if not any(w):
            labels.append(f"t{len(cart) + 1}")
            cart.append(labels[-1])
        else:
            labels.append("g[" + ",".join(str(x) for x in w) + f"]{t}")
    # norm form N(a,v,w,b) = ab - v.w, polarized on V7
    b = la.zeros(7, 7)
    b[0, 0] = -2  # N(u0) = -1, so b(u0,u0) = 2N = -2
    for i in range(3):
        b[1 + i, 4 + i] = -1
        b[4 + i, 1 + i] = -1
    return labels, mats, cart, b


@lru_cache(None)
def spin7_data():
    """spin(7) in the even Clifford algebra of a split rank-7 form, on Λ(F^3)."""
    # basis of Λ(F^3) indexed by subsets (bitmasks), ordered by mask
    dim = 8

    def wedge(i):
        M = la.zeros(dim, dim)
        for S in range(dim):
            if not S >> i & 1:
                sign = (-1) ** bin(S & ((1 << i) - 1)).count("1")
                M[S | 1 << i, S] = sign
        return M

    def contract(i):
        M = la.zeros(dim, dim)
        for S in range(dim):
            if S >> i & 1:
                sign = (-1) ** bin(S & ((1 << i) - 1)).count("1")
                M[S & ~(1 << i), S] = sign
        return M

    par = la.zeros(dim, dim)
    for S in range(dim):
        par[S, S] = (-1) ** bin(S).count("1")
    gam = [("a1", wedge(0)), ("a2", wedge(1)), ("a3", wedge(2)),
           ("b1", contract(0)), ("b2", contract(1)), ("b3", contract(2)), ("u", par)]
    labels, mats, cart = [], [], []
    for i in range(7):
        for j in range(i + 1, 7):
            X = gam[i][1] * gam[j][1] - gam[j][1] * gam[i][1]
            labels.append(f"{gam[i][0]}{gam[j][0]}")
            mats.append(X)
            if gam[i][0][0] == "a" and gam[j][0] == "b" + gam[i][0][1]:
                cart.append(labels[-1])
    # invariant symmetric form on the spinors
    b = _invariant_symmetric_form(mats, dim)
    return labels, mats, cart, b


def _invariant_symmetric_form(mats, d):
    var = {}
    for i in range(d):
        for j in range(i, d):
            var[(i, j)] = len(var)
    ent = lambda i, j: var[(min(i, j), max(i, j))]
    rows = []
    for X in mats:
        # b(Xu, v) + b(u, Xv) = 0 ; (X^T b + b X)[u,v]
        for u in range(d):
            for v in range(u, d):
                r = {}
                for k in range(d):
                    if X[k, u]:
                        r[ent(k, v)] = r.get(ent(k, v), 0) + X[k, u]
                    if X[k, v]:
                        r[ent(u, k)] = r.get(ent(u, k), 0) + X[k, v]
                r = {a: c for a, c in r.items() if c}
                if r:
                    rows.append(r)
    K = la.nullspace_sparse(rows, len(var))
    if K.ncols() != 1:
        raise RuntimeError(f"expected a unique invariant form, found {K.ncols()}")
    b = la.zeros(d, d)
    for (i, j), v in var.items():
        b[i, j] = K[v, 0]
        b[j, i] = K[v, 0]
    return b


def _sl2_plus_s(s_labels, s_mats, s_cartan, b, name, c=None):
    """sl2 + s with odd part V1 x W; [v w, v' w'] = c omega s0(w,w') + b(w,w') rho(v,v')."""
    dW = s_mats[0].nrows()
    B = Builder(name)
    for nm, _ in _SL2:
        B.add(nm, 0)
    for i in range(3):
        for j in range(i + 1, 3):
            X = supercommutator(_SL2[i][1], _SL2[j][1], 0, 0)
            cc = CoordSolver([m for _, m in _SL2])(X)
            B.set(_SL2[i][0], _SL2[j][0], {_SL2[k][0]: cc[k] for k in range(3)})
    solve = CoordSolver(s_mats)
    for nm in s_labels:
        B.add(nm, 0)
    for i in range(len(s_mats)):
        for j in range(i + 1, len(s_mats)):
            X = s_mats[i] * s_mats[j] - s_mats[j] * s_mats[i]
            cc = solve(X)
            B.set(s_labels[i], s_labels[j], {s_labels[k]: cc[k] for k in range(len(cc)) if cc[k]})
    odd = {}
    for a in range(2):
        for w in range(dW):
            odd[(a, w)] = B.add(f"{'+-'[a]}w{w + 1}", 1)
    for k in range(3):
        for (a, w), lbl in odd.items():
            B.set(_SL2[k][0], lbl, {odd[(bb, w)]: cc for bb, cc in _sl2_act(k, a).items()})
    for t, X in enumerate(s_mats):
        for (a, w), lbl in odd.items():
            B.set(s_labels[t], lbl, {odd[(a, u)]: X[u, w] for u in range(dW) if X[u, w]})
    # moment map: tr(X_a s0) = b(X_a w, w')
    K = la.mat([[la.trace(X * Y) for Y in s_mats] for X in s_mats])
    Kinv = K.inv()

    def s0(w, w2):
        rhs = la.mat([[sum((X[u, w] * b[u, w2] for u in range(dW)), fmpq(0))] for X in s_mats])
        return Kinv * rhs

    keys = list(odd)
    pairs = []
    for i in range(len(keys)):
        for j in range(i, len(keys)):
            pairs.append((keys[i], keys[j]))

    def odd_bracket(cval):
        table = {}
        for (a, w), (a2, w2) in pairs:
            vec = {}
            om = _omega(a, a2)
            if om:
                sv = s0(w, w2)
                for t in range(len(s_mats)):
                    if sv[t, 0]:
                        vec[s_labels[t]] = cval * om * sv[t, 0]
            bw = b[w, w2]
            if bw:
                rh = _rho(a, a2)
                for k in range(3):
                    if rh[k]:
                        vec[_SL2[k][0]] = vec.get(_SL2[k][0], 0) + bw * rh[k]
            table[(odd[(a, w)], odd[(a2, w2)])] = vec
        return table

    if c is None:
        c = _solve_normalization(B, odd_bracket)
    for (x, y), vec in odd_bracket(c).items():
        B.set(x, y, vec)
    B.cartan = ["h"] + list(s_cartan)
    g = B.build()
    g.normalization = c
    return g


def _solve_normalization(B, odd_bracket):
    """Find c making super-Jacobi hold, using that the residual is affine in c."""
    import copy

    def algebra(cval):
        B2 = copy.deepcopy(B)
        for (x, y), vec in odd_bracket(cval).items():
            B2.set(x, y, vec)
        return B2.build()

    g0, g1 = algebra(fmpq(0)), algebra(fmpq(1))
    odd = list(g0.odd_indices)
    # residual J(x,y,z) = [x,[y,z]] - [[x,y],z] - s[y,[x,z]] on odd triples
    for x in odd:
        for y in odd:
            for z in odd[:4]:
                r0 = _jac(g0, x, y, z)
                r1 = _jac(g1, x, y, z)
                for k in range(g0.dim):
                    slope = r1[k] - r0[k]
                    if slope:
                        return -r0[k] / slope
    raise RuntimeError("normalization not determined by Jacobi")


def _jac(g, x, y, z):
    ex, ey, ez = g.unit(x), g.unit(y), g.unit(z)
    px, py = g.parities[x], g.parities[y]
    a = g.bracket(ex, g.bracket(ey, ez))
    b = g.bracket(g.bracket(ex, ey), ez)
    c = g.bracket(ey, g.bracket(ex, ez))
    s = sgn(px, py)
    return [u - v - s * w for u, v, w in zip(a, b, c)]


def G12():
    labels, mats, cart, b = g2_data()
    return _sl2_plus_s(labels, mats, cart, b, "G(1,2)")


def F13():
    labels, mats, cart, b = spin7_data()
    return _sl2_plus_s(labels, mats, cart, b, "F(1,3)")


# ---------------------------------------------------------------------------
# doubled algebras and the q-extension


def simple_lie(tag: str) -> SuperLieAlgebra:
    m = re.fullmatch(r"sl(\d+)", tag.replace("_", "").replace("(", "").replace(")", ""))
    if m:
        return sl(int(m.group(1)))
    m = re.fullmatch(r"so(\d+)", tag.replace("(", "").replace(")", ""))
    if m:
        return so(int(m.group(1)))
    raise ValueError(f"unsupported simple Lie algebra {tag!r}")


def killing_gram(k: SuperLieAlgebra):
    d = k.dim
    return la.mat([[la.trace(k.ad(i) * k.ad(j)) for j in range(d)] for i in range(d)])


def kd(k: SuperLieAlgebra, name=None) -> SuperLieAlgebra:
    """k ⊗ F(θ): [x, yθ] = [x,y]θ, [xθ, yθ] = 0."""
    B = Builder(name or f"kd({k.name})")
    ev = _add_lie(B, k)
    od = [B.add(f"{l}θ", 1) for l in k.labels]
    for (i, j), row in k.table.items():
        B.set(ev[i], od[j], {od[t]: c for t, c in row.items()})
    B.cartan = [ev[i] for i in _cartan_idx(k)]
    return B.build()


def _cartan_idx(k):
    out = []
    for h in k.cartan:
        nz = [i for i, x in enumerate(h) if x]
        out.append(nz[0])
    return out


def hat_kd(k: SuperLieAlgebra, name=None) -> SuperLieAlgebra:
    """F τ + k^d + F z1 + F z2 with [τ, yθ] = y, [yθ, y'θ] = (y,y') z1, [τ,τ] = z2."""
    B = Builder(name or f"hat_kd({k.name})")
    ev = _add_lie(B, k)
    z1, z2 = B.add("z1", 0), B.add("z2", 0)
    tau = B.add("τ", 1)
    od = [B.add(f"{l}θ", 1) for l in k.labels]
    for (i, j), row in k.table.items():
        B.set(ev[i], od[j], {od[t]: c for t, c in row.items()})
    for i in range(k.dim):
        B.set(tau, od[i], {ev[i]: 1})
    K = killing_gram(k)
    for i in range(k.dim):
        for j in range(i, k.dim):
            if K[i, j]:
                B.set(od[i], od[j], {z1: K[i, j]})
    B.set(tau, tau, {z2: 1})
    B.cartan = [ev[i] for i in _cartan_idx(k)] + [z1, z2]
    return B.build()


def tilde_kd(k: SuperLieAlgebra, name=None) -> SuperLieAlgebra:
    """W(0,1) ⋉ k^d with ∂(yθ) = y and θ∂ acting by 1 on kθ."""
    B = Builder(name or f"tilde_kd({k.name})")
    ev = _add_lie(B, k)
    Eop = B.add("θ∂", 0)
    d = B.add("∂", 1)
    od = [B.add(f"{l}θ", 1) for l in k.labels]
    for (i, j), row in k.table.items():
        B.set(ev[i], od[j], {od[t]: c for t, c in row.items()})
    B.set(Eop, d, {d: -1})
    for i in range(k.dim):
        B.set(d, od[i], {ev[i]: 1})
        B.set(Eop, od[i], {od[i]: 1})
    B.cartan = [ev[i] for i in _cartan_idx(k)] + [Eop]
    return B.build()


def hat_q(n) -> SuperLieAlgebra:
    """q(n) + F z with the extra term otr(x) otr(y) z."""
    g = q(n)
    R = g.realization
    B = Builder(f"hat_q({n})")
    names = _add_lie(B, g)
    z = B.add("z", 0)
    o = [R.otr(X) for X in R.mats]
    for i in range(g.dim):
        for j in range(i, g.dim):
            if o[i] and o[j]:
                B.set(names[i], names[j], {z: o[i] * o[j]})
    B.cartan = [names[i] for i in _cartan_idx(g)] + [z]
    return B.build()


# ---------------------------------------------------------------------------
# pseudoabelian families


def _classical_with_module(kind, m):
    """(algebra, matrices on E, form on E) for so(m), sp(m) or gl(m)."""
    if kind == "so":
        g = so(m)
        return g, g.realization.mats, _osp_form(m, 0)
    if kind == "sp":
        g = _form_preserving(0, m, _osp_form(0, m), f"sp_symplectic({m})")
        # the realization is (0|m); as an even algebra reuse the matrices
        even = SuperLieAlgebra(g.labels, [0] * g.dim, g.table, g.field, g.cartan, None, g.name)
        return even, g.realization.mats, _osp_form(0, m)
    if kind == "gl":
        g = gl(m)
        return g, g.realization.mats, None
    raise ValueError(kind)


def _pseudoabelian(kind, m, n, name):
    k, mats, form = _classical_with_module(kind, m)
    B = Builder(name)
    ev = _add_lie(B, k)
    if kind == "so":
        centre = {(i, j): B.add(f"v{i + 1}v{j + 1}", 0) for i in range(n) for j in range(i, n)}
    else:
        centre = {(i, j): B.add(f"v{i + 1}^v{j + 1}", 0) for i in range(n) for j in range(i + 1, n)}
    odd = {(a, i): B.add(f"e{a + 1}⊗v{i + 1}", 1) for a in range(m) for i in range(n)}
    for t, X in enumerate(mats):
        for (a, i), lbl in odd.items():
            B.set(ev[t], lbl, {odd[(c, i)]: X[c, a] for c in range(m) if X[c, a]})
    keys = list(odd)
    for s in range(len(keys)):
        for r in range(s, len(keys)):
            (a, i), (b, j) = keys[s], keys[r]
            f = form[a, b]
            if not f:
                continue
            if kind == "so":
                B.set(odd[(a, i)], odd[(b, j)], {centre[(min(i, j), max(i, j))]: f})
            else:
                if i == j:
                    continue
                sgn_ = 1 if i < j else -1
                B.set(odd[(a, i)], odd[(b, j)], {centre[(min(i, j), max(i, j))]: f * sgn_})
    B.cartan = [ev[x] for x in _cartan_idx(k)] + list(centre.values())
    return B.build()


def co(m, n):
    return _pseudoabelian("so", m, n, f"co({m},{n})")


def csp(m2, n):
    if m2 % 2:
        raise ValueError("csp(2m, n) needs an even first parameter")
    return _pseudoabelian("sp", m2, n, f"csp({m2},{n})")


def a_spq(s, p_, q_):
    """gl(s) + X⊗Y with odd part E⊗X + E*⊗Y."""
    k = gl(s)
    mats = k.realization.mats
    B = Builder(f"a({s},{p_},{q_})")
    ev = _add_lie(B, SuperLieAlgebra(k.labels, k.parities, k.table, k.field, k.cartan, None, k.name))
    centre = {(x, y): B.add(f"x{x + 1}y{y + 1}", 0) for x in range(p_) for y in range(q_)}
    ex = {(a, x): B.add(f"e{a + 1}⊗x{x + 1}", 1) for a in range(s) for x in range(p_)}
    fy = {(a, y): B.add(f"f{a + 1}⊗y{y + 1}", 1) for a in range(s) for y in range(q_)}
    for t, X in enumerate(mats):
        for (a, x), lbl in ex.items():
            B.set(ev[t], lbl, {ex[(c, x)]: X[c, a] for c in range(s) if X[c, a]})
        for (a, y), lbl in fy.items():
            # dual action: X f_a = -sum_c X[a, c] f_c
            B.set(ev[t], lbl, {fy[(c, y)]: -X[a, c] for c in range(s) if X[a, c]})
    for (a, x), l1 in ex.items():
        for (b, y), l2 in fy.items():
            if a == b:
                B.set(l1, l2, {centre[(x, y)]: 1})
    B.cartan = [ev[x] for x in _cartan_idx(k)] + list(centre.values())
    return B.build()


def abelian(e, o=0):
    B = Builder(f"abelian({e}|{o})")
    for i in range(e):
        B.add(f"a{i + 1}", 0)
    for i in range(o):
        B.add(f"b{i + 1}", 1)
    B.cartan = [f"a{i + 1}" for i in range(e)]
    return B.build()


def nonabelian2():
    """[x, y] = y: the 2-dim nonabelian Lie algebra."""
    B = Builder("nonab2")
    B.add("x", 0)
    B.add("y", 0)
    B.set("x", "y", {"y": 1})
    B.cartan = ["x"]
    return B.build()


def hat_sp4():
    from .dercoh import central_extension, h2_restricted

    g = sp(4)
    return central_extension(g, h2_restricted(g).cocycles, name="hat_sp(4)")


def hat_psl22():
    from .dercoh import central_extension, h2_restricted

    g = psl(2)
    return central_extension(g, h2_restricted(g).cocycles, name="hat_psl(2,2)")


# ---------------------------------------------------------------------------
# family specs


FAMILIES = ("gl", "sl", "psl", "pgl", "osp", "so", "q", "sq", "pq", "psq", "p", "sp",
            "D21a", "G12", "F13", "kd", "hat_kd", "tilde_kd", "hat_q", "hat_sp4",
            "hat_psl22", "co", "csp", "a_spq", "abelian", "nonab2")


@dataclass
class FamilySpec:
    family: str
    params: list = dfield(default_factory=list)
    scalars: dict = dfield(default_factory=dict)
    tag: str = ""  # simple Lie algebra for the doubled families

    def check(self):
        f, P = self.family, self.params
        if f not in FAMILIES:
            raise ValueError(f"unknown family {f!r}")
        need = {"gl": (1, 2), "sl": (1, 2), "psl": (1, 1), "pgl": (2, 2), "osp": (2, 2),
                "so": (1, 1), "q": (1, 1), "sq": (1, 1), "pq": (1, 1), "psq": (1, 1),
                "p": (1, 1), "sp": (1, 1), "hat_q": (1, 1), "co": (2, 2), "csp": (2, 2),
                "a_spq": (3, 3), "abelian": (1, 2)}
        if f in need:
            lo, hi = need[f]
            if not lo <= len(P) <= hi or any(int(x) < 0 for x in P):
                raise ValueError(f"{f} takes {lo}..{hi} nonnegative integer parameters")
        if f in ("q", "sq", "pq", "psq", "p", "sp", "hat_q", "psl") and P[0] < 1:
            raise ValueError(f"{f}(n) needs n >= 1")
        if f in ("sq", "pq", "psq", "sp", "psl") and P[0] < 2:
            raise ValueError(f"{f}(n) needs n >= 2")
        if f == "D21a":
            s = self.scalars
            if "a" in s:
                return
            if not all(k in s for k in ("alpha", "beta", "gamma")):
                raise ValueError("D(2,1;a) needs a or (alpha, beta, gamma)")
            al, be, ga = (la.parse_q(s[k]) for k in ("alpha", "beta", "gamma"))
            if al + be + ga != 0:
                raise ValueError("D(2,1;a) requires alpha + beta + gamma = 0")
            if be == 0:
                raise ValueError("D(2,1;a) requires beta != 0")
        if f in ("kd", "hat_kd", "tilde_kd") and not self.tag:
            raise ValueError(f"{f} needs a simple Lie algebra tag")

    def to_json(self):
        d = {"family": self.family, "params": list(self.params)}
        if self.scalars:
            d["scalars"] = {k: la.fmt_q(la.parse_q(v)) for k, v in sorted(self.scalars.items())}
        if self.tag:
            d["tag"] = self.tag
        return d

    @classmethod
    def from_json(cls, d):
        return cls(d["family"], list(d.get("params", [])), dict(d.get("scalars", {})), d.get("tag", ""))

    def __str__(self):
        f, P = self.family, self.params
        if f == "D21a":
            s = self.scalars
            if "a" in s:
                return f"D(2,1;a={s['a']})"
            return f"D(2,1;{s['alpha']}:{s['beta']}:{s['gamma']})"
        if f in ("G12", "F13"):
            return {"G12": "G(1,2)", "F13": "F(1,3)"}[f]
        if f in ("kd", "hat_kd", "tilde_kd"):
            return f"{f}({self.tag})"
        if f in ("hat_sp4", "hat_psl22", "nonab2"):
            return f
        if f == "psl":
            return f"psl({P[0]},{P[0]})"
        name = "a" if f == "a_spq" else f
        return f"{name}({','.join(str(x) for x in P)})"


_SHORT = re.compile(r"^\s*([A-Za-z_]+)\s*(?:\((.*)\))?\s*$")


def parse_spec(text: str) -> FamilySpec:
    """Parse shorthand such as ``osp(3,2)``, ``D(2,1;a=1)``, ``kd(sl2)``."""
    t = text.strip()
    m = re.fullmatch(r"D\(\s*2\s*,\s*1\s*;\s*(.*)\)", t)
    if m:
        body = m.group(1).replace(" ", "")
        if ":" in body:
            al, be, ga = body.split(":")
            spec = FamilySpec("D21a", [], {"alpha": al, "beta": be, "gamma": ga})
        else:
            spec = FamilySpec("D21a", [], {"a": body.split("=")[-1]})
        spec.check()
        return spec
    alias = {"G(1,2)": "G12", "F(1,3)": "F13", "G12": "G12", "F13": "F13",
             "hat_sp(4)": "hat_sp4", "hat_sp4": "hat_sp4", "hat_psl(2,2)": "hat_psl22",
             "hat_psl22": "hat_psl22", "nonab2": "nonab2"}
    if t.replace(" ", "") in alias:
        spec = FamilySpec(alias[t.replace(" ", "")])
        return spec
    m = _SHORT.match(t)
    if not m:
        raise ValueError(f"cannot parse algebra spec {text!r}")
    fam, body = m.group(1), (m.group(2) or "").replace(" ", "")
    fam = {"a": "a_spq", "tilde_kd": "tilde_kd", "hat_kd": "hat_kd"}.get(fam, fam)
    if fam in ("kd", "hat_kd", "tilde_kd"):
        spec = FamilySpec(fam, [], {}, body)
    else:
        try:
            params = [int(x) for x in body.split(",") if x != ""]
        except ValueError as exc:
            raise ValueError(f"bad parameters in {text!r}") from exc
        if fam == "psl" and len(params) == 2:
            if params[0] != params[1]:
                raise ValueError("psl(m,n) only for m = n")
            params = params[:1]
        if fam in ("psq", "sq") and len(params) == 2 and params[0] == params[1]:
            params = params[:1]
        spec = FamilySpec(fam, params)
    spec.check()
    return spec


def construct(spec) -> SuperLieAlgebra:
    if isinstance(spec, str):
        spec = parse_spec(spec)
    elif isinstance(spec, dict):
        spec = FamilySpec.from_json(spec)
    spec.check()
    g = _construct_cached(str(spec))
    return g


@lru_cache(maxsize=64)
def _construct_cached(key: str) -> SuperLieAlgebra:
    spec = parse_spec(key)
    f, P = spec.family, [int(x) for x in spec.params]
    if f == "gl":
        g = gl(*P)
    elif f == "sl":
        g = sl(*P)
    elif f == "psl":
        g = psl(P[0])
    elif f == "pgl":
        g = pgl(*P)
    elif f == "osp":
        g = osp(*P)
    elif f == "so":
        g = so(P[0])
    elif f == "q":
        g = q(P[0])
    elif f == "sq":
        g = sq(P[0])
    elif f == "pq":
        g = pq(P[0])
    elif f == "psq":
        g = psq(P[0])
    elif f == "p":
        g = p(P[0])
    elif f == "sp":
        g = sp(P[0])
    elif f == "D21a":
        s = spec.scalars
        if "a" in s:
            g = d21a(la.parse_q(s["a"]))
        else:
            g = d21a_raw(*(la.parse_q(s[k]) for k in ("alpha", "beta", "gamma")))
    elif f == "G12":
        g = G12()
    elif f == "F13":
        g = F13()
    elif f == "kd":
        g = kd(simple_lie(spec.tag))
    elif f == "hat_kd":
        g = hat_kd(simple_lie(spec.tag))
    elif f == "tilde_kd":
        g = tilde_kd(simple_lie(spec.tag))
    elif f == "hat_q":
        g = hat_q(P[0])
    elif f == "hat_sp4":
        g = hat_sp4()
    elif f == "hat_psl22":
        g = hat_psl22()
    elif f == "co":
        g = co(*P)
    elif f == "csp":
        g = csp(*P)
    elif f == "a_spq":
        g = a_spq(*P)
    elif f == "abelian":
        g = abelian(*P)
    elif f == "nonab2":
        g = nonabelian2()
    else:  # pragma: no cover
        raise ValueError(f)
    g.spec = spec
    return g


def matrix_realization(g: SuperLieAlgebra):
    """Basis matrices, or None for the abstract families."""
    if g.realization is None:
        return None
    return g.realization


DEFAULT_BATTERY = ["gl(2,1)", "gl(2,2)", "sl(2,2)", "psl(2,2)", "psl(3,3)", "osp(1,2)",
                   "osp(3,2)", "q(2)", "q(3)", "psq(3)", "p(3)", "sp(4)", "hat_sp(4)",
                   "D(2,1;a=1)", "D(2,1;a=2)", "D(2,1;a=-3)", "G(1,2)", "F(1,3)",
                   "kd(sl2)", "hat_kd(sl2)", "tilde_kd(sl2)", "co(3,2)", "csp(2,2)", "a(2,1,1)"]
