"""
Finite-dimensional graded modules.

A module is a list of action matrices, one per basis element of the
algebra, on a space whose basis vectors carry parities (in any order).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dfield
from functools import cached_property
from itertools import combinations

from . import exactla as la
from .exactla import QQ, ExtensionNeeded, fmpq
from flint import fmpq_poly
from .liealg import SuperLieAlgebra, Span, generators, sgn


class SuperModule:
    def __init__(self, algebra: SuperLieAlgebra, parities, action, name: str = ""):
        self.algebra = algebra
        self.parities = [int(p) for p in parities]
        self.action = list(action)
        self.name = name
        if len(self.action) != algebra.dim:
            raise ValueError("need one action matrix per basis element")

    @property
    def field(self):
        return self.algebra.field

    @property
    def dim(self):
        return len(self.parities)

    @property
    def sdim(self):
        e = self.parities.count(0)
        return (e, self.dim - e)

    def __repr__(self):
        return f"<SuperModule {self.name or '?'} {self.sdim} over {self.algebra.name}>"

    def act(self, v):
        """Action matrix of an algebra vector."""
        M = la.zeros(self.dim, self.dim, self.field)
        for i, a in enumerate(v):
            if a:
                M = M + self.action[i] * a
        return M

    @cached_property
    def parity_operator(self):
        return la.diag([(-1) ** p for p in self.parities], self.field)

    @cached_property
    def gen_indices(self):
        return generators(self.algebra)

    def generator_mats(self):
        return [self.action[i] for i in self.gen_indices]

    # checks --------------------------------------------------------------
    def validate(self):
        """Parity and representation failures as lists of indices/pairs."""
        g = self.algebra
        bad_parity, bad_rep = [], []
        for i, X in enumerate(self.action):
            pi = g.parities[i]
            for r in range(self.dim):
                for c in range(self.dim):
                    if X[r, c] and (self.parities[r] + self.parities[c]) % 2 != pi:
                        bad_parity.append((i, r, c))
                        break
        for i in range(g.dim):
            for j in range(i, g.dim):
                lhs = self.act(_row_to_vec(g, g.bracket_basis(i, j)))
                A, B = self.action[i], self.action[j]
                rhs = A * B - B * A * sgn(g.parities[i], g.parities[j])
                if not la.is_zero_matrix(lhs - rhs):
                    bad_rep.append((i, j))
        return {"parity": bad_parity, "representation": bad_rep,
                "ok": not bad_parity and not bad_rep}

    # serialization -------------------------------------------------------
    def to_json(self, inline_algebra=False):
        F = self.field
        d = {
            "name": self.name,
            "basis": [{"label": f"m{i}", "parity": "odd" if p else "even"}
                      for i, p in enumerate(self.parities)],
            "action": [[[r, c, F.scalar_to_json(X[r, c])] for r in range(self.dim)
                        for c in range(self.dim) if X[r, c]] for X in self.action],
        }
        d["algebra"] = self.algebra.to_json() if inline_algebra else (
            str(getattr(self.algebra, "spec", "")) or self.algebra.name)
        return d

    @classmethod
    def from_json(cls, d, algebra=None):
        if algebra is None:
            a = d["algebra"]
            if isinstance(a, dict):
                algebra = SuperLieAlgebra.from_json(a)
            else:
                from .catalog import construct
                algebra = construct(a)
        F = algebra.field
        pars = [1 if b["parity"] in ("odd", 1, "1") else 0 for b in d["basis"]]
        n = len(pars)
        mats = []
        for entries in d["action"]:
            X = la.zeros(n, n, F)
            for r, c, x in entries:
                X[r, c] = F.scalar_from_json(x)
            mats.append(X)
        return cls(algebra, pars, mats, d.get("name", ""))


def _row_to_vec(g, row):
    v = g.zero()
    for k, c in row.items():
        v[k] = c
    return v


# ---------------------------------------------------------------------------
# basic modules and constructions


def trivial(g, parity=0):
    return SuperModule(g, [parity], [la.zeros(1, 1, g.field) for _ in range(g.dim)], "trivial")


def one_dim(g, character, parity=0, name="F_chi"):
    """1-dim module; ``character`` gives the scalar of each basis element."""
    mats = []
    for i in range(g.dim):
        X = la.zeros(1, 1, g.field)
        if character[i]:
            if g.parities[i]:
                raise ValueError("odd elements act by zero on a 1-dim module")
            X[0, 0] = character[i]
        mats.append(X)
    return SuperModule(g, [parity], mats, name)


def adjoint(g):
    return SuperModule(g, list(g.parities), [g.ad(i) for i in range(g.dim)], "adjoint")


def standard(g):
    R = g.realization
    if R is None or R.projective:
        raise ValueError("no linear matrix realization")
    pars = [0] * R.m + [1] * R.n
    return SuperModule(g, pars, list(R.mats), "standard")


def parity_shift(M: SuperModule) -> SuperModule:
    """Π M: same matrices, flipped parities; odd operators change sign so
    that x(Πv) = (-1)^{p(x)} Π(xv)."""
    g = M.algebra
    mats = [X * (-1) if g.parities[i] else X for i, X in enumerate(M.action)]
    return SuperModule(g, [1 - p for p in M.parities], mats, f"Π{M.name}")


def dual(M: SuperModule) -> SuperModule:
    """rho*(x)_{ij} = -(-1)^{p(x) p(j)} rho(x)_{ji} in the dual basis."""
    g = M.algebra
    n = M.dim
    mats = []
    for i, X in enumerate(M.action):
        px = g.parities[i]
        Y = la.zeros(n, n, M.field)
        for a in range(n):
            for b in range(n):
                x = X[b, a]
                if x:
                    Y[a, b] = -sgn(px, M.parities[b]) * x
        mats.append(Y)
    return SuperModule(g, list(M.parities), mats, f"{M.name}*")


def tensor(M: SuperModule, N: SuperModule) -> SuperModule:
    """x(v ⊗ w) = xv ⊗ w + (-1)^{p(x)p(v)} v ⊗ xw, basis (a, b) -> a*dimN + b."""
    g = M.algebra
    m, n = M.dim, N.dim
    pars = [(p + q) % 2 for p in M.parities for q in N.parities]
    mats = []
    for i in range(g.dim):
        px = g.parities[i]
        X, Y = M.action[i], N.action[i]
        Z = la.zeros(m * n, m * n, M.field)
        for a in range(m):
            for c in range(m):
                x = X[c, a]
                if x:
                    for b in range(n):
                        Z[c * n + b, a * n + b] = x
        for a in range(m):
            s = sgn(px, M.parities[a])
            for b in range(n):
                for d in range(n):
                    y = Y[d, b]
                    if y:
                        Z[a * n + d, a * n + b] = Z[a * n + d, a * n + b] + s * y
        mats.append(Z)
    return SuperModule(g, pars, mats, f"({M.name}⊗{N.name})")


def module_sum(*Ms) -> SuperModule:
    g = Ms[0].algebra
    pars = [p for M in Ms for p in M.parities]
    mats = [la.block_diag([M.action[i] for M in Ms], g.field) for i in range(g.dim)]
    return SuperModule(g, pars, mats, "+".join(M.name for M in Ms))


def restrict(M: SuperModule, h: SuperLieAlgebra, embedding) -> SuperModule:
    """Restriction along an embedding given as the images (vectors of g) of h's basis."""
    mats = [M.act(v) for v in embedding]
    return SuperModule(h, list(M.parities), mats, f"Res({M.name})")


def even_part(g: SuperLieAlgebra):
    """(g_0 as an algebra, embedding vectors)."""
    from .liealg import subalgebra, graded_subspace

    S = graded_subspace(g, [g.unit(i) for i in g.even_indices])
    g0 = subalgebra(g, S, f"({g.name})_0")
    return g0, S.basis


def restrict_even(M: SuperModule) -> SuperModule:
    g0, emb = even_part(M.algebra)
    return restrict(M, g0, emb)


# ---------------------------------------------------------------------------
# sub and quotient modules


def _graded_rref(vectors, parities, field):
    """Homogeneous rref basis of the span of (assumed graded) vectors."""
    n = len(parities)
    ev, od = [], []
    for v in vectors:
        a = [x if parities[i] == 0 else field.zero for i, x in enumerate(v)]
        b = [x if parities[i] == 1 else field.zero for i, x in enumerate(v)]
        if any(a):
            ev.append(a)
        if any(b):
            od.append(b)
    return la.row_space(ev, n, field) + la.row_space(od, n, field)


def spin(mats, vectors, n, field=QQ):
    """Smallest subspace containing ``vectors`` stable under ``mats`` (rref rows)."""
    S = Span(n, field)
    queue = []
    for v in vectors:
        if S.add(v):
            queue.append(list(v))
    while queue:
        v = queue.pop()
        for X in mats:
            w = la.mat_vec(X, v)
            if any(w) and S.add(w):
                queue.append(w)
    return S.basis()


def submodule_span(M: SuperModule, vectors):
    """Graded submodule generated by ``vectors``."""
    mats = M.generator_mats() + [M.parity_operator]
    return _graded_rref(spin(mats, vectors, M.dim, M.field), M.parities, M.field)


def is_submodule(M: SuperModule, basis) -> bool:
    S = Span(M.dim, M.field)
    for b in basis:
        S.add(b)
    mats = M.action + [M.parity_operator]
    return all(S.contains(la.mat_vec(X, b)) for X in mats for b in basis)


def _pivot(v):
    return next(i for i, x in enumerate(v) if x)


def submodule(M: SuperModule, basis, name="") -> SuperModule:
    """Action on a graded submodule with the given homogeneous rref basis."""
    basis = _graded_rref(basis, M.parities, M.field)
    piv = [_pivot(b) for b in basis]
    pars = [M.parities[p] for p in piv]
    k = len(basis)
    B = la.mat(basis, M.field, M.dim).transpose() if k else la.zeros(M.dim, 0, M.field)
    mats = []
    for X in M.action:
        Y = la.zeros(k, k, M.field)
        img = X * B
        for c in range(k):
            col = [img[r, c] for r in range(M.dim)]
            coords = [col[p] for p in piv]
            # basis is reduced: coordinates are the pivot entries
            for r, x in enumerate(coords):
                if x:
                    Y[r, c] = x
        mats.append(Y)
    out = SuperModule(M.algebra, pars, mats, name or f"sub({M.name})")
    out.inclusion = B
    return out


def quotient_module(M: SuperModule, basis, name="") -> SuperModule:
    """M / span(basis) on the complement of non-pivot coordinates."""
    basis = _graded_rref(basis, M.parities, M.field)
    sp = Span(M.dim, M.field)
    for b in basis:
        sp.add(b)
    piv = {_pivot(b) for b in basis}
    comp = [i for i in range(M.dim) if i not in piv]
    k = len(comp)
    mats = []
    for X in M.action:
        Y = la.zeros(k, k, M.field)
        for c, j in enumerate(comp):
            col = sp.reduce([X[r, j] for r in range(M.dim)])
            for r, i in enumerate(comp):
                if col[i]:
                    Y[r, c] = col[i]
        mats.append(Y)
    out = SuperModule(M.algebra, [M.parities[i] for i in comp], mats, name or f"quot({M.name})")
    out.complement = comp
    return out


# ---------------------------------------------------------------------------
# weights


def weight_spaces(M: SuperModule, cartan=None):
    """Joint eigenspaces of the designated Cartan (or of the given vectors).

    Returns a list of (weight tuple, basis vectors), sorted by weight. Raises
    ExtensionNeeded when some eigenvalue is outside the field.
    """
    g = M.algebra
    H = [M.act(h) for h in (g.cartan if cartan is None else cartan)]
    n = M.dim
    F = M.field
    if all(_is_diagonal(X) for X in H):
        groups = {}
        for i in range(n):
            w = tuple(X[i, i] for X in H)
            groups.setdefault(w, []).append(i)
        out = []
        for w in sorted(groups, key=_wkey):
            vecs = []
            for i in groups[w]:
                v = [F.zero] * n
                v[i] = F.one
                vecs.append(v)
            out.append((w, vecs))
        return out
    spaces = [(tuple(), [[F.one if i == j else F.zero for i in range(n)] for j in range(n)])]
    for X in H:
        new = []
        for w, basis in spaces:
            # restrict X to span(basis) and split by eigenvalue
            sub = _restrict_operator(X, basis, F)
            mp = la.minimal_polynomial(sub)
            if not mp.squarefree:
                raise ValueError("Cartan does not act semisimply")
            roots = F.roots_of(mp.coeffs) if F.is_rational else _nf_roots(F, mp.coeffs)
            for lam in roots:
                K = la.kernel_basis(sub - la.identity(len(basis), F) * lam)
                vecs = [_combo(basis, c, F) for c in K]
                new.append((w + (lam,), vecs))
        spaces = new
    spaces = [(w, _graded_rref(vs, M.parities, F)) for w, vs in spaces]
    return sorted(spaces, key=lambda t: _wkey(t[0]))


def _nf_roots(F, coeffs):
    # only rational eigenvalues (or quadratic over the field's rationals) handled
    if all(F.coeffs(c)[1:] == [0] * (F.degree - 1) for c in coeffs):
        return F.roots_of([F.coeffs(c)[0] for c in coeffs])
    raise ExtensionNeeded([0, 1], "eigenvalues with irrational coefficients")


def _wkey(w):
    return tuple(fmpq(x) if not hasattr(x, "value") else fmpq(0) for x in w)


def _is_diagonal(X):
    n = X.nrows()
    return all(not X[i, j] for i in range(n) for j in range(n) if i != j)


def _combo(basis, coeffs, F):
    v = [F.zero] * len(basis[0])
    for c, b in zip(coeffs, basis):
        if c:
            v = [x + c * y for x, y in zip(v, b)]
    return v


def _restrict_operator(X, basis, F):
    """Matrix of X on an invariant subspace spanned by ``basis`` (rows)."""
    k = len(basis)
    B = la.mat(basis, F, X.nrows()).transpose()
    img = X * B
    # solve B c = img
    R, piv = la.rref(la.mat(basis, F, X.nrows()))
    # coordinates of w in span: use pivot-reduced basis
    Rrows = [la.row(R, i) for i in range(len(piv))]
    # transform: basis = T * Rrows; coordinates relative to basis
    T = la.mat([[b[p] for p in piv] for b in basis], F, k)  # basis[i][piv] = T[i] . Rrows[piv]
    Tinv = T.inv() if F.is_rational else _nf_inv(T, F)
    out = la.zeros(k, k, F)
    for c in range(k):
        w = [img[r, c] for r in range(X.nrows())]
        rc = la.mat([[w[p] for p in piv]], F, k)  # coords in Rrows
        cc = rc * Tinv
        for r in range(k):
            out[r, c] = cc[0, r]
    return out


def _nf_inv(T, F):
    n = T.nrows()
    aug = la.mat([la.row(T, i) + [F.one if i == j else F.zero for j in range(n)] for i in range(n)], F, 2 * n)
    R, piv = la.rref(aug)
    return la.mat([[R[i, n + j] for j in range(n)] for i in range(n)], F, n)


def weight_character(M: SuperModule):
    """{weight: (even dim, odd dim)} — the double-number character."""
    out = {}
    for w, vecs in weight_spaces(M):
        e = sum(1 for v in vecs if M.parities[_pivot(v)] == 0)
        out[w] = (e, len(vecs) - e)
    return out


def character_json(ch):
    return [{"weight": [la.fmt_q(x) for x in w], "dim": list(d)} for w, d in sorted(ch.items())]


def character_product(c1, c2):
    out = {}
    for w1, (a1, b1) in c1.items():
        for w2, (a2, b2) in c2.items():
            w = tuple(x + y for x, y in zip(w1, w2))
            a, b = out.get(w, (0, 0))
            out[w] = (a + a1 * a2 + b1 * b2, b + a1 * b2 + b1 * a2)
    return {w: d for w, d in out.items() if d != (0, 0)}


# ---------------------------------------------------------------------------
# hom spaces


def _weight_labels(M):
    lab = [None] * M.dim
    diag = all(_is_diagonal(M.act(h)) for h in M.algebra.cartan)
    if not diag:
        return None
    for w, vecs in weight_spaces(M):
        for v in vecs:
            lab[_pivot(v)] = w
    return lab


def hom_space(M: SuperModule, N: SuperModule, gens=None):
    """Basis of even g-maps M -> N (as dim N x dim M matrices)."""
    if M.algebra is not N.algebra and M.algebra.dim != N.algebra.dim:
        raise ValueError("modules over different algebras")
    F = M.field
    wm, wn = _weight_labels(M), _weight_labels(N)
    var = {}
    for i in range(N.dim):
        for j in range(M.dim):
            if N.parities[i] != M.parities[j]:
                continue
            if wm is not None and wn is not None and wm[j] != wn[i]:
                continue
            var[(i, j)] = len(var)
    if not var:
        return []
    gens = M.gen_indices if gens is None else gens
    rows = []
    for g_ in gens:
        A, B = M.action[g_], N.action[g_]
        Acols = {}
        for k in range(M.dim):
            for j in range(M.dim):
                if A[k, j]:
                    Acols.setdefault(j, []).append((k, A[k, j]))
        Brows = {}
        for i in range(N.dim):
            for k in range(N.dim):
                if B[i, k]:
                    Brows.setdefault(i, []).append((k, B[i, k]))
        for i in range(N.dim):
            for j in range(M.dim):
                r = {}
                for k, a in Acols.get(j, []):
                    v = var.get((i, k))
                    if v is not None:
                        r[v] = r.get(v, 0) + a
                for k, b in Brows.get(i, []):
                    v = var.get((k, j))
                    if v is not None:
                        r[v] = r.get(v, 0) - b
                r = {a: c for a, c in r.items() if c}
                if r:
                    rows.append(r)
    K = la.nullspace_sparse(rows, len(var), F)
    out = []
    for c in range(K.ncols()):
        X = la.zeros(N.dim, M.dim, F)
        for (i, j), v in var.items():
            if K[v, c]:
                X[i, j] = K[v, c]
        out.append(X)
    return out


def is_intertwiner(M, N, X) -> bool:
    return all(la.is_zero_matrix(X * A - B * X) for A, B in zip(M.action, N.action))


def find_invertible(maps, seed=0, tries=30):
    """An invertible element of span(maps), or None."""
    if not maps:
        return None
    n, m = maps[0].nrows(), maps[0].ncols()
    if n != m:
        return None
    for X in maps:
        if la.rank(X) == n:
            return X
    rng = random.Random(seed)
    for _ in range(tries):
        Y = la.zeros(n, n, maps[0].field if hasattr(maps[0], "field") else QQ)
        for X in maps:
            Y = Y + X * rng.randint(-5, 5)
        if la.rank(Y) == n:
            return Y
    return None


# ---------------------------------------------------------------------------
# simplicity (Holt-Rees / Norton)


@dataclass
class SimplicityResult:
    simple: object  # True, False or "unknown"
    submodule: list | None = None
    certificate: dict | None = None


def _random_algebra_element(mats, rng, n, F, words=3, length=3):
    A = la.zeros(n, n, F)
    for _ in range(words):
        W = la.identity(n, F)
        for _ in range(rng.randint(1, length)):
            W = W * mats[rng.randrange(len(mats))]
        A = A + W * rng.randint(-3, 3)
    for X in mats:
        A = A + X * rng.randint(-2, 2)
    return A


def _poly_of_matrix(coeffs, A):
    return la.poly_eval_matrix(coeffs, A)


def is_simple(M: SuperModule, seed=0, tries=40) -> SimplicityResult:
    """Norton's irreducibility test on the algebra generated by the action
    and the parity operator (its invariant subspaces are the graded submodules)."""
    n = M.dim
    F = M.field
    if n == 0:
        raise ValueError("zero module")
    if n == 1:
        return SimplicityResult(True, None, {"reason": "dimension 1"})
    mats = [X for X in M.generator_mats() if not la.is_zero_matrix(X)]
    mats_all = mats + [M.parity_operator]
    if not mats:
        v = [F.one] + [F.zero] * (n - 1)
        return SimplicityResult(False, submodule_span(M, [v]))
    # quick spin of a basis vector: a proper result settles it
    for i in range(min(n, 4)):
        e = [F.zero] * n
        e[i] = F.one
        S = submodule_span(M, [e])
        if len(S) < n:
            return SimplicityResult(False, S)
    rng = random.Random(seed)
    mats_t = [X.transpose() for X in mats_all]
    for attempt in range(tries):
        A = _random_algebra_element(mats_all, rng, n, F)
        if F.is_rational:
            cp = A.charpoly()
            _, facs = cp.factor()
            factors = sorted(([fmpq(f[i]) for i in range(f.degree() + 1)] for f, _m in facs),
                             key=len)
        else:
            mp = la.minimal_polynomial(A)
            factors = [list(mp.coeffs)] if len(mp.coeffs) > 1 else []
        for f in factors:
            N_ = _poly_of_matrix(f, A)
            K = la.kernel_basis(N_)
            if len(K) != len(f) - 1 or not K:
                continue
            v = K[0]
            S = spin(mats_all, [v], n, F)
            if len(S) < n:
                return SimplicityResult(False, _graded_rref(S, M.parities, F))
            Kt = la.kernel_basis(N_.transpose())
            w = Kt[0]
            St = spin(mats_t, [w], n, F)
            if len(St) < n:
                # annihilator of a proper dual submodule is a proper submodule
                ann = la.kernel_basis(la.mat(St, F, n))
                return SimplicityResult(False, _graded_rref(ann, M.parities, F))
            return SimplicityResult(True, None, {"element_seed": seed, "attempt": attempt,
                                                 "factor_degree": len(f) - 1})
    return SimplicityResult("unknown")


# ---------------------------------------------------------------------------
# semisimple decomposition


def _find_simple_submodule(M: SuperModule, seed=0):
    """Basis (rref rows in M's coordinates) of some simple submodule."""
    basis = [[M.field.one if i == j else M.field.zero for i in range(M.dim)] for j in range(M.dim)]
    cur = M
    emb = basis
    for _ in range(M.dim + 1):
        r = is_simple(cur, seed)
        if r.simple is True:
            return emb
        if r.simple == "unknown":
            raise RuntimeError("simplicity test inconclusive")
        sub = r.submodule
        emb = [_combo(emb, c, M.field) for c in sub]
        cur = submodule(cur, sub)
    raise RuntimeError("no simple submodule found")


def semisimple_decomposition(M: SuperModule, seed=0):
    """Split a semisimple module into simple submodules.

    Returns a list of bases (rows in M's coordinates). Each simple piece S is
    split off by an equivariant projection M -> S restricting to the
    identity; the process recurses on its kernel.
    """
    F = M.field
    out = []
    cur = M
    emb = [[F.one if i == j else F.zero for i in range(M.dim)] for j in range(M.dim)]
    while cur.dim:
        S = _find_simple_submodule(cur, seed)
        if len(S) == cur.dim:
            out.append(emb)
            break
        Smod = submodule(cur, S)
        maps = hom_space(cur, Smod)
        incl = Smod.inclusion  # cur.dim x k
        # find combination with phi * incl = id
        k = Smod.dim
        rows = []
        rhs = []
        for r in range(k):
            for c in range(k):
                rows.append([(X * incl)[r, c] for X in maps])
                rhs.append(F.one if r == c else F.zero)
        sol = la.solve_linear(la.mat(rows, F, len(maps)), rhs) if maps else None
        if sol is None:
            raise ValueError("module is not semisimple")
        phi = la.zeros(k, cur.dim, F)
        for c, X in zip(sol, maps):
            if c:
                phi = phi + X * c
        kern = la.kernel_basis(phi)
        out.append([_combo(emb, c, F) for c in S])
        kern = _graded_rref(kern, cur.parities, F)
        emb = [_combo(emb, c, F) for c in kern]
        cur = submodule(cur, kern)
    return out


def isotypic_components(M: SuperModule, seed=0):
    """Group a semisimple decomposition by isomorphism type (even or odd maps).

    Returns a list of lists of simple-summand bases.
    """
    parts = semisimple_decomposition(M, seed)
    mods = [submodule(M, b) for b in parts]
    groups = []
    for b, S in zip(parts, mods):
        for grp in groups:
            T = grp[1]
            if _isomorphic_up_to_parity(S, T):
                grp[0].append(b)
                break
        else:
            groups.append([[b], S])
    return [g[0] for g in groups]


def _isomorphic_up_to_parity(S, T):
    if S.dim != T.dim:
        return False
    for T2 in (T, parity_shift(T)):
        if find_invertible(hom_space(S, T2)) is not None:
            return True
    return False


def equivariant_projection(M: SuperModule, basis):
    """A module map M -> U restricting to the identity on U = span(basis).

    Returns (phi as a dim U x dim M matrix, U as a SuperModule); None when no
    such projection exists (U is not a direct summand).
    """
    F = M.field
    U = submodule(M, basis)
    maps = hom_space(M, U)
    incl = U.inclusion
    k = U.dim
    if not maps:
        return None
    prods = [X * incl for X in maps]
    rows, rhs = [], []
    for r in range(k):
        for c in range(k):
            rows.append([P[r, c] for P in prods])
            rhs.append(F.one if r == c else F.zero)
    sol = la.solve_linear(la.mat(rows, F, len(maps)), rhs)
    if sol is None:
        return None
    phi = la.zeros(k, M.dim, F)
    for c, X in zip(sol, maps):
        if c:
            phi = phi + X * c
    return phi, U


def equivariant_complement(M: SuperModule, basis):
    """Graded submodule W with M = span(basis) ⊕ W (rref rows), or None."""
    res = equivariant_projection(M, basis)
    if res is None:
        return None
    phi, _ = res
    return _graded_rref(la.kernel_basis(phi), M.parities, M.field)


# ---------------------------------------------------------------------------
# induction on the exterior-monomial PBW basis


class _Inducer:
    """Normal ordering in U(g) (x) _{U(s)} M for a subalgebra s whose
    complement Y = span(y_1..y_k) is purely odd.

    Elements are dicts I -> matrix (dim M x dim M): the element
    sum_I y_I (x) A_I m, read as a linear function of m.
    """

    def __init__(self, g, S, m0):
        F = g.field
        self.g, self.S, self.m0, self.F = g, S, m0, F
        sp = Span(g.dim, F)
        for b in S.basis:
            sp.add(b)
        ys = []
        for i in range(g.dim):
            e = g.unit(i)
            if sp.add(e):
                if g.parities[i] == 0:
                    raise ValueError("complement of the subalgebra is not purely odd")
                ys.append(e)
        self.ys = ys
        self.k = len(ys)
        cols = ys + list(S.basis)
        Bm = la.mat(cols, F, g.dim).transpose()
        self.Binv = Bm.inv() if F.is_rational else _nf_inv(Bm, F)
        self.n = m0.dim
        self.Id = la.identity(self.n, F)
        self._act_s, self._left = {}, {}
        self.sub_par = S.parities

    def decompose(self, v):
        c = la.mat_vec(self.Binv, v)
        return c[:self.k], c[self.k:]

    @staticmethod
    def _add(acc, d, scale=None, right=None):
        for J, A in d.items():
            if right is not None:
                A = A * right
            if scale is not None:
                A = A * scale
            acc[J] = acc[J] + A if J in acc else A
        return acc

    def act_vec(self, v, I):
        cy, cs = self.decompose(v)
        out = {}
        for j, c in enumerate(cy):
            if c:
                self._add(out, self.left_basis(j, I), scale=c)
        for k, c in enumerate(cs):
            if c:
                self._add(out, self.act_s(k, I), scale=c)
        return out

    def act_s(self, k, I):
        key = (k, I)
        if key in self._act_s:
            return self._act_s[key]
        if not I:
            out = {(): self.m0.action[k]}
        else:
            i1, rest = I[0], I[1:]
            s = self.S.basis[k]
            sg = -1 if self.sub_par[k] else 1
            out = self._add({}, self.left(i1, self.act_s(k, rest)), scale=sg)
            self._add(out, self.act_vec(self.g.bracket(s, self.ys[i1]), rest))
        self._act_s[key] = out
        return out

    def left(self, j, elem):
        out = {}
        for K, A in elem.items():
            self._add(out, self.left_basis(j, K), right=A)
        return out

    def left_basis(self, j, K):
        key = (j, K)
        if key in self._left:
            return self._left[key]
        if not K or j < K[0]:
            out = {(j,) + K: self.Id}
        elif j == K[0]:
            y = self.ys[j]
            out = self._add({}, self.act_vec(self.g.bracket(y, y), K[1:]), scale=fmpq(1, 2))
        else:
            a = K[0]
            out = self._add({}, self.left(a, self.left_basis(j, K[1:])), scale=-1)
            self._add(out, self.act_vec(self.g.bracket(self.ys[j], self.ys[a]), K[1:]))
        out = {J: A for J, A in out.items() if not la.is_zero_matrix(A)}
        self._left[key] = out
        return out


def _subsets(k):
    return [I for r in range(k + 1) for I in combinations(range(k), r)]


def induce(g: SuperLieAlgebra, S, m0: SuperModule, direction="ind", name="") -> SuperModule:
    """U(g) (x)_{U(s)} m0 (``ind``) or Hom_{U(s)}(U(g), m0) (``coind``).

    ``S`` is a Subspace of g closed under the bracket, m0 a module over
    ``subalgebra(g, S)`` in the rref basis of S. The coinduced module is
    realized as Ind(m0*)*.
    """
    if direction == "coind":
        M = dual(induce(g, S, dual(m0), "ind"))
        M.name = name or f"Coind({m0.name})"
        M.ind_data = dict(M_dual_of=True, sub=S, base=m0, direction="coind")
        return M
    if direction != "ind":
        raise ValueError(direction)
    ind = _Inducer(g, S, m0)
    F, n = g.field, m0.dim
    subs = _subsets(ind.k)
    pos = {I: t for t, I in enumerate(subs)}
    N = len(subs) * n
    pars = [(len(I) + p) % 2 for I in subs for p in m0.parities]
    mats = []
    for i in range(g.dim):
        X = la.zeros(N, N, F)
        e = g.unit(i)
        for I in subs:
            c0 = pos[I] * n
            for J, A in ind.act_vec(e, I).items():
                r0 = pos[J] * n
                for r in range(n):
                    for c in range(n):
                        x = A[r, c]
                        if x:
                            X[r0 + r, c0 + c] = x
        mats.append(X)
    M = SuperModule(g, pars, mats, name or f"Ind({m0.name})")
    M.ind_data = dict(sub=S, base=m0, ys=ind.ys, subsets=subs, direction="ind")
    return M


def even_subspace(g):
    from .liealg import graded_subspace
    return graded_subspace(g, [g.unit(i) for i in g.even_indices])


def ind_even(M0: SuperModule, g: SuperLieAlgebra, direction="ind") -> SuperModule:
    """Induce a module over the even part (as produced by ``even_part``)."""
    return induce(g, even_subspace(g), M0, direction)


def word_operator(M: SuperModule, ys, I):
    """rho(y_{i1}) ... rho(y_{ir}) on M."""
    X = la.identity(M.dim, M.field)
    for i in reversed(I):
        X = M.act(ys[i]) * X
    return X


def natural_surjection(M: SuperModule, IndM: SuperModule):
    """Ind(M|_s) -> M, y_I (x) m -> y_I . m (a g-map)."""
    d = IndM.ind_data
    n = M.dim
    P = la.zeros(n, IndM.dim, M.field)
    for t, I in enumerate(d["subsets"]):
        W = word_operator(M, d["ys"], I)
        for r in range(n):
            for c in range(n):
                if W[r, c]:
                    P[r, t * n + c] = W[r, c]
    return P


def natural_injection(M: SuperModule, CoindM: SuperModule):
    """M -> Coind(M|_s) = Ind((M|_s)*)*: transpose of the surjection for M*,
    composed with the sign identification M = M** (v -> (-1)^{p(v)} v)."""
    D = CoindM.ind_data
    IndD = induce(M.algebra, D["sub"], dual(D["base"]))
    P = natural_surjection(dual(M), IndD)
    return P.transpose() * M.parity_operator


# ---------------------------------------------------------------------------
# twist module


def twist_module(g: SuperLieAlgebra):
    """(f, T) with f(x) = tr(ad x | g_1) on g_0, zero on g_1, T of parity dim g_1."""
    F = g.field
    odd = g.odd_indices
    f = []
    for i in range(g.dim):
        if g.parities[i]:
            f.append(F.zero)
            continue
        A = g.ad(i)
        f.append(sum((A[j, j] for j in odd), F.zero))
    for i in range(g.dim):
        for j in range(i, g.dim):
            w = g.bracket(g.unit(i), g.unit(j))
            if sum((a * b for a, b in zip(f, w)), F.zero):
                raise AssertionError(f"twist character does not vanish on [e{i}, e{j}]")
    T = one_dim(g, f, parity=len(odd) % 2, name="T")
    return f, T


# ---------------------------------------------------------------------------
# reciprocity Ind(M) ~ Coind(M (x) T)


def _solve_mat(A, B):
    """X with A X = B (free variables zero), or None."""
    F = la.field_of(A)
    n, m = A.ncols(), B.ncols()
    aug = la.mat([la.row(A, i) + la.row(B, i) for i in range(A.nrows())], F, n + m)
    R, piv = la.rref(aug)
    if any(p >= n for p in piv):
        return None
    X = la.zeros(n, m, F)
    for i, p in enumerate(piv):
        for c in range(m):
            if R[i, n + c]:
                X[p, c] = R[i, n + c]
    return X


def counit(C: SuperModule):
    """Coind(N) -> N, f -> f(1), as a matrix (sign from N = N**)."""
    N = C.ind_data["base"]
    E = la.zeros(N.dim, C.dim, C.field)
    for b in range(N.dim):
        E[b, b] = (-1) ** N.parities[b]
    return E


def _words(M, ys, subsets, X=None):
    """{I: rho(y_I) X} built incrementally (X defaults to the identity)."""
    out = {(): la.identity(M.dim, M.field) if X is None else X}
    Y = [M.act(y) for y in ys]
    for I in sorted(subsets, key=len):
        if I:
            out[I] = Y[I[0]] * out[I[1:]]
    return out


@dataclass
class ReciprocityResult:
    ind: SuperModule
    coind: SuperModule
    phi: object
    checks: dict

    @property
    def ok(self):
        return all(self.checks.values())


def reciprocity_map(g: SuperLieAlgebra, S0: SuperModule) -> ReciprocityResult:
    """The g-map Ind(S0) -> Coind(S0 (x) T) adjoint to the g_0-map
    psi(y_I (x) m) = [I = top] (-1)^{k p(m)} m (x) t, k = dim g_1."""
    F = g.field
    _, T = twist_module(g)
    N = tensor(S0, restrict_even(T))
    IndM = ind_even(S0, g)
    C = ind_even(N, g, "coind")
    d = IndM.ind_data
    ys, subs = d["ys"], d["subsets"]
    k = len(ys)
    eps = counit(C)
    # rows eps rho_C(y_I), built by right multiplication
    Y = [C.act(y) for y in ys]
    E = {(): eps}
    for I in subs:
        if I:
            E[I] = E[I[:-1]] * Y[I[-1]]
    n, m = N.dim, S0.dim
    top = tuple(range(k))
    A = la.zeros(len(subs) * n, C.dim, F)
    B = la.zeros(len(subs) * n, m, F)
    for t, I in enumerate(subs):
        for r in range(n):
            for c in range(C.dim):
                if E[I][r, c]:
                    A[t * n + r, c] = E[I][r, c]
        if I == top:
            for a in range(m):
                B[t * n + a, a] = (-1) ** (k * S0.parities[a])
    X = _solve_mat(A, B)
    checks = {"adjoint_solved": X is not None}
    if X is None:
        return ReciprocityResult(IndM, C, None, checks)
    W = _words(C, ys, subs, X)
    Phi = la.zeros(C.dim, IndM.dim, F)
    for t, I in enumerate(subs):
        col = W[I]
        for r in range(C.dim):
            for c in range(m):
                if col[r, c]:
                    Phi[r, t * m + c] = col[r, c]
    checks["intertwiner"] = is_intertwiner(IndM, C, Phi)
    checks["invertible"] = la.rank(Phi) == IndM.dim == C.dim
    return ReciprocityResult(IndM, C, Phi, checks)


# ---------------------------------------------------------------------------
# endomorphisms and indecomposable summands


def induced_endomorphisms(M: SuperModule, check=True):
    """Basis of End_g(M) for M = Ind(S0) or Coind(S0), via Hom_g(Ind S0, X) = Hom_{g_0}(S0, X)."""
    d = M.ind_data
    if d["direction"] == "coind":
        IndD = induce(M.algebra, d["sub"], dual(d["base"]))
        out = [X.transpose() for X in induced_endomorphisms(IndD, check=False)]
    else:
        S0, ys, subs = d["base"], d["ys"], d["subsets"]
        from .liealg import subalgebra
        R = restrict(M, subalgebra(M.algebra, d["sub"]), d["sub"].basis)
        m = S0.dim
        out = []
        for phi0 in hom_space(S0, R):
            W = _words(M, ys, subs, phi0)
            Phi = la.zeros(M.dim, M.dim, M.field)
            for t, I in enumerate(subs):
                for r in range(M.dim):
                    for c in range(m):
                        if W[I][r, c]:
                            Phi[r, t * m + c] = W[I][r, c]
            out.append(Phi)
    if check and not all(is_intertwiner(M, M, X) for X in out):
        raise AssertionError("extended map is not an endomorphism")
    return out


def module_endomorphisms(M: SuperModule):
    if getattr(M, "ind_data", None) is not None:
        return induced_endomorphisms(M)
    return hom_space(M, M)


def _eigenvalues(coeffs, F):
    return F.roots_of(coeffs) if F.is_rational else _nf_roots(F, coeffs)


def _primary_factors(coeffs, F):
    """Distinct monic irreducible factors of a minimal polynomial.

    Over Q these come from FLINT's factorization, so irrational eigenvalues
    need no field extension: M splits as the sum of ker f(phi)^d.
    """
    if not F.is_rational:
        return [[-r, F.one] for r in _eigenvalues(coeffs, F)]
    poly = fmpq_poly([fmpq(c) for c in coeffs])
    if poly.degree() < 1:
        return []
    _, facs = poly.factor()
    out = []
    for f, _m in facs:
        lead = f[f.degree()]
        out.append([fmpq(f[i]) / lead for i in range(f.degree() + 1)])
    return sorted(out, key=lambda c: (len(c), [str(x) for x in c]))


def _stable_kernel(N):
    """Kernel of N^d for d large (generalized eigenspace), as rows."""
    r = la.rank(N)
    P = N
    while True:
        Q = P * P
        r2 = la.rank(Q)
        if r2 == r:
            return la.kernel_basis(P)
        P, r = Q, r2


def decompose_summands(M: SuperModule, seed=0, endos=None, tries=12):
    """Indecomposable summands (submodules of M with ``.inclusion``).

    Fitting splitting: an endomorphism with two distinct eigenvalues splits
    the module into generalized eigenspaces; endomorphisms are compressed
    to each piece and the search recurses. A piece is declared
    indecomposable when no sampled endomorphism splits it.
    """
    F = M.field
    endos = module_endomorphisms(M) if endos is None else endos
    rng = random.Random(seed)
    eye = [[F.one if i == j else F.zero for i in range(M.dim)] for j in range(M.dim)]
    work = [(eye, list(endos))]
    done = []
    while work:
        B, A = work.pop()
        k = len(B)
        cands = list(A)
        for _ in range(tries if len(A) > 1 else 0):
            X = la.zeros(k, k, F)
            for Y in A:
                X = X + Y * rng.randint(-6, 6)
            cands.append(X)
        pieces = None
        for phi in cands:
            fs = _primary_factors(la.minimal_polynomial(phi).coeffs, F)
            if len(fs) >= 2:
                pieces = [_stable_kernel(la.poly_eval_matrix(f, phi)) for f in fs]
                break
        if pieces is None:
            done.append(B)
            continue
        cols = [v for p in pieces for v in p]
        P = la.mat(cols, F, k).transpose()
        Pinv = P.inv() if F.is_rational else _nf_inv(P, F)
        conj = [Pinv * X * P for X in A]
        off = 0
        for p in pieces:
            s = len(p)
            newB = [_combo(B, v, F) for v in p]
            sub = [la.mat([[X[off + r, off + c] for c in range(s)] for r in range(s)], F, s)
                   for X in conj]
            work.append((newB, sub))
            off += s
    mods = [submodule(M, B) for B in done]
    return sorted(mods, key=lambda S: (S.dim, S.sdim))


def summand_dims(mods):
    return sorted(S.sdim for S in mods)


# ---------------------------------------------------------------------------
# projectivity / injectivity split tests


@dataclass
class SplitResult:
    split: bool
    kind: str
    method: str
    witness: object = dfield(default=None, repr=False)

    def __bool__(self):
        return bool(self.split)


def _solve_identity(prods, k, F):
    rows, rhs = [], []
    for r in range(k):
        for c in range(k):
            rows.append([P[r, c] for P in prods])
            rhs.append(F.one if r == c else F.zero)
    if not prods:
        return None
    return la.solve_linear(la.mat(rows, F, len(prods)), rhs)


def split_test(M: SuperModule, kind="projective", method="auto", limit=300) -> SplitResult:
    """Does Ind(M|g0) -> M (projective) or M -> Coind(M|g0) (injective) split?

    ``direct`` builds Ind/Coind of the restriction and searches the hom space
    for a section. ``functorial`` applies to M = Ind(S) (resp. Coind(S)) and
    checks the section Ind(eta) of the unit eta: S -> Res Ind(S); it is used
    when the direct route exceeds ``limit`` dimensions.
    """
    g, F = M.algebra, M.field
    if kind not in ("projective", "injective"):
        raise ValueError(kind)
    k1 = len(g.odd_indices)
    d = getattr(M, "ind_data", None)
    if method == "auto":
        method = "direct" if (2 ** k1) * M.dim <= limit or d is None else "functorial"
    if method == "functorial":
        return _split_functorial(M, kind)
    R = restrict_even(M)
    if kind == "projective":
        X = ind_even(R, g)
        pi = natural_surjection(M, X)
        maps = hom_space(M, X)
        sol = _solve_identity([pi * Y for Y in maps], M.dim, F)
        wit = None if sol is None else _combine_maps(maps, sol, F)
    else:
        X = ind_even(R, g, "coind")
        iota = natural_injection(M, X)
        maps = hom_space(X, M)
        sol = _solve_identity([Y * iota for Y in maps], M.dim, F)
        wit = None if sol is None else _combine_maps(maps, sol, F)
    return SplitResult(sol is not None, kind, "direct", wit)


def _combine_maps(maps, coeffs, F):
    X = la.zeros(maps[0].nrows(), maps[0].ncols(), F)
    for c, Y in zip(coeffs, maps):
        if c:
            X = X + Y * c
    return X


def _split_functorial(M, kind):
    d = M.ind_data
    if d is None:
        raise ValueError("functorial split test needs an induced or coinduced module")
    if kind == "injective":
        if d["direction"] != "coind":
            raise ValueError("functorial injectivity test needs a coinduced module")
        IndD = induce(M.algebra, d["sub"], dual(d["base"]))
        r = _split_functorial(IndD, "projective")
        return SplitResult(r.split, kind, "functorial(dual)", r.witness)
    if d["direction"] != "ind":
        raise ValueError("functorial projectivity test needs an induced module")
    S0, ys, subs = d["base"], d["ys"], d["subsets"]
    F, m = M.field, S0.dim
    from .liealg import subalgebra
    R = restrict(M, subalgebra(M.algebra, d["sub"]), d["sub"].basis)
    eta = la.zeros(M.dim, m, F)
    for c in range(m):
        eta[c, c] = F.one
    eq = is_intertwiner(S0, R, eta)
    W = _words(M, ys, subs, eta)
    sect = all(W[I][r, c] == (F.one if r == t * m + c else F.zero)
               for t, I in enumerate(subs) for r in range(M.dim) for c in range(m))
    return SplitResult(eq and sect, kind, "functorial",
                       {"unit_equivariant": eq, "section_identity": sect})


# ---------------------------------------------------------------------------
# associative envelope, its radical, Loewy series


def _unflatten(v, n, F):
    return la.mat([v[r * n:(r + 1) * n] for r in range(n)], F, n)


def envelope(M: SuperModule):
    """Basis (flattened rows) of the unital algebra generated by the action
    and the parity operator, by closure under left multiplication."""
    F, n = M.field, M.dim
    gens = [X for X in M.generator_mats() if not la.is_zero_matrix(X)] + [M.parity_operator]
    sp = Span(n * n, F)
    frontier = []
    for X in [la.identity(n, F)] + gens:
        if sp.add(la.flatten(X)):
            frontier.append(X)
    while frontier:
        new = []
        for A in frontier:
            for X in gens:
                P = X * A
                if sp.add(la.flatten(P)):
                    new.append(P)
        frontier = new
    return sp.basis()


def envelope_radical(M: SuperModule, basis=None):
    """Jacobson radical of the envelope: kernel of the trace form (char 0)."""
    F, n = M.field, M.dim
    basis = envelope(M) if basis is None else basis
    r = len(basis)
    V = la.mat(basis, F, n * n)
    Wt = la.mat([la.flatten(_unflatten(b, n, F).transpose()) for b in basis], F, n * n).transpose()
    G = V * Wt  # G[i, j] = tr(a_i a_j)
    K = la.kernel_basis(G)
    return [_unflatten(_combo(basis, c, F), n, F) for c in K], r


@dataclass
class LoewyData:
    radical: list      # J^k M, k = 0, 1, ... (bases), ending with the zero space
    socle: list        # soc^k M, k = 0, 1, ... (bases), ending with M
    length: int
    method: str
    envelope_dim: int | None = None
    checks: dict = dfield(default_factory=dict)

    def layers(self):
        return [len(a) - len(b) for a, b in zip(self.radical, self.radical[1:])]

    def to_json(self):
        return {"length": self.length, "radical_dims": [len(b) for b in self.radical],
                "socle_dims": [len(b) for b in self.socle], "method": self.method,
                "envelope_dim": self.envelope_dim, "checks": dict(self.checks)}


def _apply_all(mats, vecs, F):
    return [la.mat_vec(X, v) for X in mats for v in vecs]


def loewy_data(M: SuperModule, seed=0, use_simplicity=True, method="auto",
               envelope_limit=36) -> LoewyData:
    """Radical series J^k M and socle series Ann(J^k) for the envelope radical J.

    ``method="hom"`` computes the same series from composition factors:
    soc = sum of images of Hom(L, M), rad = intersection of kernels of
    Hom(M, L). ``auto`` uses the envelope up to ``envelope_limit`` dimensions.
    """
    F, n = M.field, M.dim
    eye = [[F.one if i == j else F.zero for i in range(n)] for j in range(n)]
    if use_simplicity and is_simple(M, seed).simple is True:
        return LoewyData([eye, []], [[], eye], 1, "simple", None,
                         {"lengths_agree": True, "radical_in_socle": True})
    if method == "auto":
        method = "envelope" if n <= envelope_limit else "hom"
    edim = None
    if method == "envelope":
        basis = envelope(M)
        J, edim = envelope_radical(M, basis)
        rad_of = lambda vecs: _graded_rref(_apply_all(J, vecs, F), M.parities, F)
        rad = [eye]
        while rad[-1]:
            rad.append(rad_of(rad[-1]))
        soc = [[]]
        while len(soc[-1]) < n:
            S = soc[-1]
            Q = la.mat(la.kernel_basis(la.mat(S, F, n)), F, n) if S else la.identity(n, F)
            rows = []
            for X in J:
                QX = Q * X
                rows += [la.row(QX, i) for i in range(QX.nrows())]
            nxt = la.kernel_basis(la.mat(rows, F, n)) if rows else eye
            nxt = _graded_rref(nxt, M.parities, F)
            if len(nxt) <= len(S):
                raise AssertionError("socle series stalled")
            soc.append(nxt)
    elif method == "hom":
        rad, soc = _series_hom(M, seed)
    else:
        raise ValueError(method)
    lr, ls = len(rad) - 1, len(soc) - 1
    checks = {"lengths_agree": lr == ls,
              "radical_in_socle": all(_contains_all(soc[ls - k], rad[k], F)
                                      for k in range(min(lr, ls) + 1))}
    return LoewyData(rad, soc, lr, method, edim, checks)


def composition_factors(M: SuperModule, seed=0):
    """Simple subquotients (as modules) of a composition series."""
    r = is_simple(M, seed)
    if r.simple is True:
        return [M]
    if r.simple == "unknown":
        raise RuntimeError("simplicity test inconclusive")
    return composition_factors(submodule(M, r.submodule), seed) + \
        composition_factors(quotient_module(M, r.submodule), seed)


def distinct_factors(M: SuperModule, seed=0):
    out = []
    for L in composition_factors(M, seed):
        if not any(L.dim == K.dim and L.sdim == K.sdim and
                   find_invertible(hom_space(L, K)) is not None for K in out):
            out.append(L)
    return out


def socle(M: SuperModule, factors):
    vecs = []
    for L in factors:
        for X in hom_space(L, M):
            vecs += [la.column(X, j) for j in range(X.ncols())]
    return _graded_rref(vecs, M.parities, M.field) if vecs else []


def radical(M: SuperModule, factors):
    rows = []
    for L in factors:
        for X in hom_space(M, L):
            rows += [la.row(X, i) for i in range(X.nrows())]
    if not rows:
        return [[M.field.one if i == j else M.field.zero for i in range(M.dim)] for j in range(M.dim)]
    return _graded_rref(la.kernel_basis(la.mat(rows, M.field, M.dim)), M.parities, M.field)


def _series_hom(M, seed):
    F, n = M.field, M.dim
    facs = distinct_factors(M, seed)
    eye = [[F.one if i == j else F.zero for i in range(n)] for j in range(n)]
    rad = [eye]
    cur, emb = M, eye
    while emb:
        r = radical(cur, facs)
        emb = _graded_rref([_combo(emb, c, F) for c in r], M.parities, F) if r else []
        rad.append(emb)
        if not emb:
            break
        cur = submodule(M, emb)
        emb = [la.column(cur.inclusion, j) for j in range(cur.dim)]
    soc = [[]]
    while len(soc[-1]) < n:
        S = soc[-1]
        if S:
            Q = quotient_module(M, S)
            s = socle(Q, facs)
            lift = []
            for v in s:
                w = [F.zero] * n
                for c, i in enumerate(Q.complement):
                    w[i] = v[c]
                lift.append(w)
            nxt = _graded_rref(S + lift, M.parities, F)
        else:
            nxt = socle(M, facs)
        if len(nxt) <= len(S):
            raise AssertionError("socle series stalled")
        soc.append(nxt)
    return rad, soc


def _contains_all(big, small, F):
    if not small:
        return True
    sp = Span(len(small[0]), F)
    for b in big:
        sp.add(b)
    return all(sp.contains(v) for v in small)


# ---------------------------------------------------------------------------
# Clifford modules C_lambda over a Cartan subalgebra


def maximal_isotropic(G, F):
    """Rows spanning a maximal isotropic subspace of the symmetric form G.

    Kernel first, then an orthogonal basis of a complement, then hyperbolic
    pairs w_i + t w_j with t^2 = -d_i/d_j. Raises ExtensionNeeded when the
    anisotropic part needs a square root outside F.
    """
    k = G.nrows()
    rad = la.kernel_basis(G)
    sp = Span(k, F)
    for v in rad:
        sp.add(v)
    comp = []
    for i in range(k):
        e = [F.one if j == i else F.zero for j in range(k)]
        if sp.add(e):
            comp.append(e)
    form = lambda u, v: sum((u[a] * G[a, b] * v[b] for a in range(k) for b in range(k) if u[a] and v[b]), F.zero)
    orth = []
    pool = list(comp)
    while pool:
        v = next((u for u in pool if form(u, u)), None)
        if v is None:
            u, w = next((u, w) for u in pool for w in pool if form(u, w))
            v = [x + y for x, y in zip(u, w)]
            pool.remove(u)
            pool.insert(0, v)
        else:
            pool.remove(v)
        d = form(v, v)
        orth.append((v, d))
        pool = [[x - form(u, v) / d * y for x, y in zip(u, v)] for u in pool]
        pool = [u for u in pool if any(u)]
    iso = list(rad)
    left = list(orth)
    while len(left) >= 2:
        found = None
        for a in range(len(left)):
            for b in range(a + 1, len(left)):
                t = F.sqrt(-left[a][1] / left[b][1])
                if t is not None:
                    found = (a, b, t)
                    break
            if found:
                break
        if found is None:
            (_, da), (_, db) = left[0], left[1]
            q = da / db
            raise ExtensionNeeded([fmpq(q) if F.is_rational else q, 0, 1],
                                  "isotropic vector for the Clifford form")
        a, b, t = found
        iso.append([x + t * y for x, y in zip(left[a][0], left[b][0])])
        left = [p for i, p in enumerate(left) if i not in (a, b)]
    return iso


@dataclass
class CartanModule:
    module: SuperModule
    h: SuperLieAlgebra
    lam: list
    u1_dim: int
    h1_dim: int
    checks: dict
    rank: int = 0

    @property
    def codim(self):
        return self.h1_dim - self.u1_dim

    def to_json(self):
        F = self.module.field
        return {"lambda": [F.scalar_to_json(x) for x in self.lam], "dim": self.module.dim,
                "h1": self.h1_dim, "u1": self.u1_dim, "omega_rank": self.rank,
                "checks": dict(self.checks)}


def cartan_module(g: SuperLieAlgebra, lam, seed=0, cd=None) -> CartanModule:
    """C_lambda = U(h) (x)_{U(u)} F_lambda with u = h_0 + u_1, u_1 maximal
    isotropic for omega(x, y) = lambda([x, y]) on h_1."""
    from .liealg import subalgebra, graded_subspace
    from . import rootsys
    F = g.field
    cd = cd or rootsys.cartan(g, seed)
    lam = [F(x) for x in lam]
    if len(lam) != cd.h0.dim:
        raise ValueError(f"lambda needs {cd.h0.dim} values")
    H = subalgebra(g, cd.h, "h")
    r, k = len(cd.h.even), len(cd.h.odd)
    # lambda on the even basis of h (same space as h_0)
    B0 = la.mat(cd.h0.basis, F, g.dim).transpose()

    def lam_of(x):
        c = la.solve_linear(B0, x)
        if c is None:
            raise AssertionError("bracket of odd Cartan elements leaves h_0")
        return sum((a * b for a, b in zip(c, lam)), F.zero)

    lam_h = [lam_of(x) for x in cd.h.even]
    G = la.zeros(k, k, F)
    for a in range(k):
        for b in range(k):
            G[a, b] = lam_of(g.bracket(cd.h.odd[a], cd.h.odd[b]))
    u1 = maximal_isotropic(G, F)
    vecs = [H.unit(i) for i in range(r)]
    vecs += [[F.zero] * r + list(c) for c in u1]
    U = graded_subspace(H, vecs)
    chi = [sum((x * y for x, y in zip(b[:r], lam_h)), F.zero) if i < len(U.even) else F.zero
           for i, b in enumerate(U.basis)]
    Fl = one_dim(subalgebra(H, U), chi, name="F_lam")
    C = induce(H, U, Fl, name="C_lam")
    codim = k - len(u1)
    checks = {"isotropic": all(not G_val for G_val in
                               (sum((p[a] * G[a, b] * q[b] for a in range(k) for b in range(k)), F.zero)
                                for p in u1 for q in u1)),
              "dim": C.dim == 2 ** codim,
              "representation": C.validate()["ok"]}
    checks["simple"] = is_simple(C, seed).simple is True
    pi_iso = find_invertible(hom_space(C, parity_shift(C)), seed) is not None
    rank = k - len(la.kernel_basis(G))
    checks["pi_iso"] = pi_iso
    # two readings: parity of dim h_1/u_1, and parity of dim h_1/Ker(omega)
    checks["pi_matches_u1_codim"] = pi_iso == (codim % 2 == 1)
    checks["pi_matches_rank"] = pi_iso == (rank % 2 == 1)
    return CartanModule(C, H, lam, len(u1), k, checks, rank)


# ---------------------------------------------------------------------------
# highest weights


def _in_cone(d, pos, gamma, memo):
    """Is d a nonnegative integer combination of the roots ``pos``?"""
    from .rootsys import _gval
    if not any(d):
        return True
    if d in memo:
        return memo[d]
    memo[d] = False
    if _gval(gamma, d) <= 0:
        return False
    for a in pos:
        e = tuple(x - y for x, y in zip(d, a))
        if _gval(gamma, e) >= 0 and _in_cone(e, pos, gamma, memo):
            memo[d] = True
            return True
    return False


@dataclass
class HighestWeight:
    maximal: list
    weight: tuple | None
    space: list | None
    checks: dict

    def to_json(self):
        return {"maximal": [[la.fmt_q(x) for x in w] for w in self.maximal],
                "weight": None if self.weight is None else [la.fmt_q(x) for x in self.weight],
                "checks": dict(self.checks)}


def highest_weight(M: SuperModule, tri, rd, seed=0, simple=None) -> HighestWeight:
    """Maximal weights for the order mu <= lam iff lam - mu in Z_+ Delta^+.

    For a simple module: uniqueness of the maximum, n^+ L_lam = 0 and
    h-simplicity of L_lam are checked.
    """
    from .liealg import subalgebra
    F = M.field
    spaces = dict(weight_spaces(M, rd.h0.basis))
    memo = {}
    pos = list(tri.delta_plus)
    ws = list(spaces)
    maximal = [m for m in ws
               if not any(v != m and _in_cone(tuple(x - y for x, y in zip(v, m)), pos, tri.gamma, memo)
                          for v in ws)]
    if simple is None:
        simple = is_simple(M, seed).simple is True
    if not simple:
        return HighestWeight(maximal, None, None, {"simple": False})
    checks = {"simple": True, "unique": len(maximal) == 1}
    if len(maximal) != 1:
        return HighestWeight(maximal, None, None, checks)
    lam = maximal[0]
    L = spaces[lam]
    checks["dominates_all"] = all(_in_cone(tuple(x - y for x, y in zip(lam, m)), pos, tri.gamma, memo)
                                  for m in ws)
    checks["n_plus_kills"] = all(not any(la.mat_vec(M.act(e), v))
                                 for a in pos for e in rd.roots[a] for v in L)
    H = subalgebra(M.algebra, rd.h, "h")
    Mh = restrict(M, H, rd.h.basis)
    checks["h_stable"] = is_submodule(Mh, L)
    checks["h_simple"] = checks["h_stable"] and is_simple(submodule(Mh, L), seed).simple is True
    return HighestWeight(maximal, lam, L, checks)


def same_simple_up_to_parity(L1: SuperModule, L2: SuperModule, tri, rd, seed=0):
    """For simple modules with equal highest weight: is L1 = L2 or Pi L2?"""
    a = highest_weight(L1, tri, rd, seed, simple=True)
    b = highest_weight(L2, tri, rd, seed, simple=True)
    if a.weight != b.weight:
        return False
    return _isomorphic_up_to_parity(L1, L2)


# ---------------------------------------------------------------------------
# Kac modules for p(n)


def gl_simple(g: SuperLieAlgebra, n: int, lam):
    """L0(lam) for g_0 = gl(n) of p(n), as a submodule of tensors of E and det.

    lam = a_n (1,..,1) + sum_k (a_k - a_{k+1}) omega_k; the highest weight
    vector is a tensor product of wedges e_1 ^ ... ^ e_k.
    """
    from itertools import permutations
    F = g.field
    lam = [int(x) for x in lam]
    if any(lam[i] < lam[i + 1] for i in range(n - 1)):
        raise ValueError(f"weight {lam} is not dominant")
    g0, emb = even_part(g)
    R = restrict_even(standard(g))
    E = submodule(R, [[F.one if i == j else F.zero for i in range(2 * n)] for j in range(n)], "E")
    det = one_dim(g0, [F(lam[-1]) if g.labels[g.even_indices[k]] in
                       {f"A{i}_{i}" for i in range(1, n + 1)} else F.zero for k in range(g0.dim)],
                  name="det")
    wedges = []
    for k in range(1, n):
        wedges += [k] * (lam[k - 1] - lam[k])
    N = sum(wedges)
    V, vec = det, [F.one]
    for k in wedges:
        Wk = E
        for _ in range(k - 1):
            Wk = tensor(Wk, E)
        w = [F.zero] * (n ** k)
        for perm in permutations(range(k)):
            sgn_ = 1
            for a in range(k):
                for b in range(a + 1, k):
                    if perm[a] > perm[b]:
                        sgn_ = -sgn_
            idx = 0
            for p_ in perm:
                idx = idx * n + p_
            w[idx] += sgn_
        V = tensor(V, Wk)
        vec = [x * y for x in vec for y in w]
    L = submodule(V, submodule_span(V, [vec]), f"L0{tuple(lam)}")
    return L


@dataclass
class KacModule:
    module: SuperModule
    lam: tuple
    sign: str
    exterior: str
    L0: SuperModule

    def to_json(self):
        return {"lambda": list(self.lam), "sign": self.sign, "dim": self.module.dim,
                "sdim": list(self.module.sdim), "L0_dim": self.L0.dim,
                "exterior_piece": self.exterior}


def kac_module_p(n: int, lam, sign="+", g=None) -> KacModule:
    """K^{+-}(lam) = U(g) (x)_{U(g_0 + g^{+-1})} L0(lam) for g = p(n).

    g^1 = S^2 E is the B block, g^-1 = Lambda^2 E* the C block; K^+ is
    induced through the exterior algebra on g^-1, K^- through g^1.
    """
    from .liealg import subalgebra, graded_subspace
    from .catalog import construct
    g = g or construct(f"p({n})")
    if sign not in ("+", "-"):
        raise ValueError(sign)
    L0 = gl_simple(g, n, lam)
    keep = "B" if sign == "+" else "C"
    idx = list(g.even_indices) + [i for i in g.odd_indices if g.labels[i].startswith(keep)]
    S = graded_subspace(g, [g.unit(i) for i in idx])
    P = subalgebra(g, S, f"p({n})^{sign}")
    F = g.field
    mats = []
    for k in range(P.dim):
        if k < len(S.even):
            mats.append(L0.action[k])
        else:
            mats.append(la.zeros(L0.dim, L0.dim, F))
    infl = SuperModule(P, L0.parities, mats, f"L0{tuple(lam)}")
    K = induce(g, S, infl, name=f"K{sign}{tuple(lam)}")
    ext = "g^-1 = Lambda^2(E*)" if sign == "+" else "g^1 = S^2(E)"
    return KacModule(K, tuple(lam), sign, ext, L0)


def kac_simplicity_products(lam):
    """(prod over i<j, prod over i<=j) of (a_i - a_j); the second is always 0."""
    lt, le = 1, 1
    n = len(lam)
    for i in range(n):
        for j in range(i, n):
            d = lam[i] - lam[j]
            le *= d
            if i < j:
                lt *= d
    return lt, le


def head_and_socle(M: SuperModule, L: LoewyData | None = None, seed=0):
    """(socle simple?, head simple?, loewy data) for an indecomposability check."""
    L = L or loewy_data(M, seed)
    soc1 = L.socle[1]
    rad1 = L.radical[1]
    soc_simple = is_simple(submodule(M, soc1), seed).simple is True
    head_simple = (len(rad1) < M.dim and
                   is_simple(quotient_module(M, rad1), seed).simple is True) if rad1 else True
    return soc_simple, head_simple, L
