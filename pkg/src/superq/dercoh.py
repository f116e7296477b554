"""
Derivations, outer derivations, restricted and full H^2 with trivial
coefficients, central extensions, and the maximality tests built on them.

Cochains are stored as Gram matrices C[i, j] = c(e_i, e_j) on the basis of g.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dfield

from . import exactla as la
from .liealg import (Span, SuperLieAlgebra, contained, derived, generators, graded_subspace,
                     sgn, subalgebra)


# ---------------------------------------------------------------------------
# derivations


@dataclass
class DerivationAlgebra:
    algebra: SuperLieAlgebra
    basis: list          # matrices on g, rref-canonical as flattened vectors
    parities: list
    ad_image: list       # ad(e_i) spanning set reduced to a basis
    outer_dims: tuple    # (even, odd) dims of D(g)
    witness: dict = dfield(default_factory=dict)

    @property
    def sdim(self):
        return (self.parities.count(0), self.parities.count(1))

    def to_json(self):
        return {"der": list(self.sdim), "outer": list(self.outer_dims),
                "witness": {k: v for k, v in self.witness.items()
                            if isinstance(v, (bool, int, list)) and k != "complement"}}


def _flat(M, n):
    return [M[r, c] for r in range(n) for c in range(n)]


def _unflat(v, n, F):
    M = la.zeros(n, n, F)
    for idx, x in enumerate(v):
        if x:
            M[idx // n, idx % n] = x
    return M


def _nz(M):
    """Row and column dictionaries of a matrix's nonzero entries."""
    rows, cols = {}, {}
    for r in range(M.nrows()):
        for c in range(M.ncols()):
            x = M[r, c]
            if x:
                rows.setdefault(r, {})[c] = x
                cols.setdefault(c, {})[r] = x
    return rows, cols


def leibniz_rows(g: SuperLieAlgebra, parity: int, gens=None):
    """Sparse rows of D ad_x - s ad_x D - ad_{Dx} = 0, x over generators.

    Variables are the entries D[r, c] allowed by the parity, numbered in the
    returned ``var`` map.
    """
    n, P = g.dim, g.parities
    var = {}
    for r in range(n):
        for c in range(n):
            if (P[r] + P[c]) % 2 == parity:
                var[(r, c)] = len(var)
    gens = gens if gens is not None else [g.unit(i) for i in generators(g)]
    # third[(r, c)] = {k: C_{k c}^r}
    third = {}
    for (k, c), row in g.table.items():
        for r, x in row.items():
            third.setdefault((r, c), {})[k] = x
    rows = []
    for x in gens:
        px = g.parity_of(x)
        s = sgn(parity, px)
        A = g.ad_vec(x)
        Arow, Acol = _nz(A)
        xs = [(j, a) for j, a in enumerate(x) if a]
        for r in range(n):
            for c in range(n):
                eq = {}

                def put(key, val):
                    v = var.get(key)
                    if v is not None and val:
                        eq[v] = eq.get(v, 0) + val

                for j, a in Acol.get(c, {}).items():
                    put((r, j), a)
                for j, a in Arow.get(r, {}).items():
                    put((j, c), -s * a)
                for k, cc in third.get((r, c), {}).items():
                    for j, xj in xs:
                        put((k, j), -cc * xj)
                eq = {k: v for k, v in eq.items() if v}
                if eq:
                    rows.append(eq)
    return var, rows


def derivation_defect(g: SuperLieAlgebra, D, parity):
    """Pairs (i, j) where D fails the graded Leibniz rule."""
    bad = []
    n = g.dim
    for i in range(n):
        Di = [D[r, i] for r in range(n)]
        for j in range(n):
            lhs = la.mat_vec(D, g.bracket(g.unit(i), g.unit(j)))
            Dj = [D[r, j] for r in range(n)]
            rhs = [a + sgn(parity, g.parities[i]) * b
                   for a, b in zip(g.bracket(Di, g.unit(j)), g.bracket(g.unit(i), Dj))]
            if lhs != rhs:
                bad.append((i, j))
    return bad


def _der_module(g, basis, parities):
    """Der(g) as a g_0-module under D -> [ad x, D]."""
    from . import repn

    n, F = g.dim, g.field
    sp = Span(n * n, F)
    for b in basis:
        sp.add(b)
    piv = [next(i for i, x in enumerate(b) if x) for b in basis]
    g0, emb = repn.even_part(g)
    mats = []
    k = len(basis)
    Ds = [_unflat(b, n, F) for b in basis]
    for x in emb:
        A = g.ad_vec(x)
        X = la.zeros(k, k, F)
        for c, D in enumerate(Ds):
            img = _flat(A * D - D * A, n)
            red = sp.reduce(img)
            if any(red):
                raise ArithmeticError("Der(g) is not stable under ad g_0")
            for r, p in enumerate(piv):
                if img[p]:
                    X[r, c] = img[p]
        mats.append(X)
    return repn.SuperModule(g0, parities, mats, "Der")


def derivations(g: SuperLieAlgebra, witness=True) -> DerivationAlgebra:
    """Der(g) as the kernel of the Leibniz system over a generating set."""
    n, F = g.dim, g.field
    vecs, pars = [], []
    for parity in (0, 1):
        var, rows = leibniz_rows(g, parity)
        K = la.nullspace_sparse(rows, len(var), F)
        inv = {v: key for key, v in var.items()}
        block = []
        for j in range(K.ncols()):
            full = [F.zero] * (n * n)
            for v in range(len(var)):
                x = K[v, j]
                if x:
                    r, c = inv[v]
                    full[r * n + c] = x
            block.append(full)
        block = la.row_space(block, n * n, F)
        vecs += block
        pars += [parity] * len(block)
    # sort the rref basis by pivot for canonical coordinates
    order = sorted(range(len(vecs)), key=lambda t: next(i for i, x in enumerate(vecs[t]) if x))
    vecs = [vecs[t] for t in order]
    pars = [pars[t] for t in order]
    ad_rows = la.row_space([_flat(g.ad(i), n) for i in range(n)], n * n, F)
    sp = Span(n * n, F)
    for b in vecs:
        sp.add(b)
    if not all(sp.contains(a) for a in ad_rows):
        raise ArithmeticError("ad(g) not inside the computed Der(g)")
    from .structure import center
    Z = center(g)
    ad_dims = (g.sdim[0] - Z.sdim[0], g.sdim[1] - Z.sdim[1])
    outer = (pars.count(0) - ad_dims[0], pars.count(1) - ad_dims[1])
    out = DerivationAlgebra(g, [_unflat(v, n, F) for v in vecs], pars,
                            [_unflat(v, n, F) for v in ad_rows], outer)
    if witness and any(outer):
        out.witness.update(_semidirect_witness(g, vecs, pars, ad_rows))
    return out


def _semidirect_witness(g, vecs, pars, ad_rows):
    from . import repn

    n, F = g.dim, g.field
    try:
        M = _der_module(g, vecs, pars)
    except ArithmeticError:
        return {"complement_found": False}
    piv = [next(i for i, x in enumerate(b) if x) for b in vecs]
    coords = [[a[p] for p in piv] for a in ad_rows]
    W = repn.equivariant_complement(M, coords) if coords else None
    if W is None:
        return {"complement_found": False}
    mats = [_unflat([sum((c * v[t] for c, v in zip(w, vecs) if c), F.zero)
                     for t in range(n * n)], n, F) for w in W]
    wp = [M.parities[next(i for i, x in enumerate(w) if x)] for w in W]
    sp = Span(n * n, F)
    for m in mats:
        sp.add(_flat(m, n))
    closed = True
    odd_abelian = True
    for a, pa in zip(mats, wp):
        for b, pb in zip(mats, wp):
            com = a * b - b * a * sgn(pa, pb)
            if not sp.contains(_flat(com, n)):
                closed = False
            if pa == 1 and pb == 1 and not la.is_zero_matrix(com):
                odd_abelian = False
    return {"complement_found": True, "complement_closed": closed,
            "complement_dims": [wp.count(0), wp.count(1)], "complement_odd_abelian": odd_abelian,
            "complement": mats}


def outer_derivation_dims(g):
    return derivations(g, witness=False).outer_dims


# ---------------------------------------------------------------------------
# 2-cochains


def _cochain_vars(g, parity, restricted):
    """Variables c(i, j): i < j, or i == j odd; parity and restriction filters."""
    P = g.parities
    var = {}
    for i in range(g.dim):
        for j in range(i, g.dim):
            if (P[i] + P[j]) % 2 != parity:
                continue
            if i == j and P[i] == 0:
                continue
            if restricted and (P[i] == 0 or P[j] == 0):
                continue
            var[(i, j)] = len(var)
    return var


def _lookup(var, P, i, j):
    """c(i, j) as (variable, sign), or None when forced to vanish."""
    if i <= j:
        v = var.get((i, j))
        return None if v is None else (v, 1)
    v = var.get((j, i))
    return None if v is None else (v, -sgn(P[i], P[j]))


def cocycle_rows(g: SuperLieAlgebra, var, triples=None):
    """Rows of the super-cyclic identity
    (-1)^{xz} c([x,y],z) + (-1)^{yx} c([y,z],x) + (-1)^{zy} c([z,x],y) = 0."""
    P, n = g.parities, g.dim
    if triples is None:
        triples = itertools.product(range(n), repeat=3)
    rows = []
    for x, y, z in triples:
        eq = {}
        for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
            s = sgn(P[a], P[c])
            for m, coef in g.bracket_basis(a, b).items():
                t = _lookup(var, P, m, c)
                if t is not None:
                    v, s2 = t
                    eq[v] = eq.get(v, 0) + s * s2 * coef
        eq = {k: v for k, v in eq.items() if v}
        if eq:
            rows.append(eq)
    return rows


def gram_from_vars(g, var, vec):
    F, P = g.field, g.parities
    C = la.zeros(g.dim, g.dim, F)
    for (i, j), v in var.items():
        x = vec[v]
        if x:
            C[i, j] = x
            if i != j:
                C[j, i] = -sgn(P[i], P[j]) * x
    return C


def vars_from_gram(var, C):
    out = [0] * len(var)
    for (i, j), v in var.items():
        out[v] = C[i, j]
    return out


def cocycle_identity_holds(g: SuperLieAlgebra, C) -> bool:
    P, n = g.parities, g.dim
    for x, y, z in itertools.product(range(n), repeat=3):
        tot = 0
        for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
            s = sgn(P[a], P[c])
            for m, coef in g.bracket_basis(a, b).items():
                tot += s * coef * C[m, c]
        if tot:
            return False
    return True


def coboundary(g: SuperLieAlgebra, f):
    """c_f(x, y) = f([x, y]) for a functional given by its values on the basis."""
    n = g.dim
    C = la.zeros(n, n, g.field)
    for (i, j), row in g.table.items():
        val = sum((f[k] * c for k, c in row.items() if f[k]), g.field.zero)
        if val:
            C[i, j] = val
    return C


@dataclass
class CocycleSpace:
    algebra: SuperLieAlgebra
    parity: int
    restricted: bool
    cocycle_basis: list      # Gram matrices spanning Z^2
    coboundary_basis: list   # Gram matrices spanning B^2
    cocycles: list           # representatives of a basis of H^2
    formula_dim: int | None = None

    @property
    def dim(self):
        return len(self.cocycles)

    def to_json(self):
        g = self.algebra
        odd = list(g.odd_indices) if self.restricted else list(range(g.dim))
        return {"parity": self.parity, "restricted": self.restricted, "dim": self.dim,
                "formula_dim": self.formula_dim,
                "cocycles": [[[la.fmt_q(C[i, j]) for j in odd] for i in odd] for C in self.cocycles]}


def _quotient_reps(var, Zv, Bv, F):
    """Representatives of span(Zv) / span(Bv): extend a basis of B into Z."""
    sp = Span(len(var), F)
    for b in Bv:
        sp.add(b)
    base = len(sp)
    reps = []
    for z in Zv:
        if sp.add(z):
            reps.append(z)
    return reps, base


def _check_extension(g, C, parity):
    """A cochain passes the super-cyclic identity iff its central extension is Lie."""
    a = cocycle_identity_holds(g, C)
    b = not central_extension(g, [C], check=False, parity=parity).jacobi_violations()
    if a != b:
        raise ArithmeticError("cocycle identity and Jacobi of the extension disagree")
    return a


def h2_restricted(g: SuperLieAlgebra, cross_check=True) -> CocycleSpace:
    """Even cocycles vanishing on (g_0, g) modulo coboundaries f([x,y]), f in g_0^*.

    Computed twice: by the invariant-form count minus dim(Z(g_0) ∩ [g_1,g_1]),
    and from explicit cocycle and coboundary bases.
    """
    from .structure import is_quasireductive
    if not is_quasireductive(g).quasireductive:
        raise ValueError("h2_restricted needs a quasireductive algebra")
    F = g.field
    var = _cochain_vars(g, 0, True)
    # explicit route: cocycle identity on all triples
    K = la.nullspace_sparse(cocycle_rows(g, var), len(var), F)
    Zv = [la.column(K, j) for j in range(K.ncols())]
    # coboundaries from functionals killing [g_0, g_0]
    from .repn import even_part
    g0, emb = even_part(g)
    d0 = [sum_vec(emb, b, F, g.dim) for b in derived(g0).basis]
    ann = la.kernel_basis(la.mat(d0, F, g.dim)) if d0 else [g.unit(i) for i in range(g.dim)]
    fs = [[f[i] if g.parities[i] == 0 else F.zero for i in range(g.dim)] for f in ann]
    Bv = [vars_from_gram(var, coboundary(g, f)) for f in fs]
    Bv = [b for b in Bv if any(b)]
    reps, _ = _quotient_reps(var, Zv, Bv, F)
    out = CocycleSpace(g, 0, True, [gram_from_vars(g, var, z) for z in Zv],
                       [gram_from_vars(g, var, b) for b in la.row_space(Bv, len(var), F)],
                       [gram_from_vars(g, var, r) for r in reps])
    out.formula_dim = h2_restricted_formula(g)
    if out.formula_dim != out.dim:
        raise ArithmeticError(f"H^2_r routes disagree: formula {out.formula_dim}, explicit {out.dim}")
    if cross_check:
        for C in out.cocycle_basis:
            if not _check_extension(g, C, 0):
                raise ArithmeticError("cocycle basis element fails the identity")
    return out


def sum_vec(basis, coeffs, F, n):
    v = [F.zero] * n
    for c, b in zip(coeffs, basis):
        if c:
            v = [x + c * y for x, y in zip(v, b)]
    return v


def h2_restricted_formula(g: SuperLieAlgebra) -> int:
    """dim (S^2 g_1^*)^{g_0} - dim(Z(g_0) ∩ [g_1, g_1])."""
    from .liealg import bracket_spaces, subspace_intersection
    from .repn import even_part
    from .structure import center_and_centralizer, _combo
    F, n, P = g.field, g.dim, g.parities
    odd = list(g.odd_indices)
    g0, emb = even_part(g)
    var = _cochain_vars(g, 0, True)
    rows = []
    # invariance c([x,a],b) + c(a,[x,b]) = 0 for x among generators of g_0
    for xi in generators(g0):
        x = emb[xi]
        A = g.ad_vec(x)
        for a in odd:
            for b in odd:
                if b < a:
                    continue
                eq = {}
                for m in odd:
                    for (u, w, coef) in ((m, b, A[m, a]), (a, m, A[m, b])):
                        if not coef:
                            continue
                        t = _lookup(var, P, u, w)
                        if t:
                            eq[t[0]] = eq.get(t[0], 0) + coef * t[1]
                eq = {k: v for k, v in eq.items() if v}
                if eq:
                    rows.append(eq)
    inv = la.nullspace_sparse(rows, len(var), F).ncols()
    Z0 = center_and_centralizer(g0)
    Z0g = graded_subspace(g, [_combo(emb, z, F, n) for z in Z0.basis])
    odd_sp = graded_subspace(g, [g.unit(i) for i in odd])
    br = bracket_spaces(g, odd_sp, odd_sp)
    return inv - subspace_intersection(g, Z0g, br).dim


def h2_trivial(g: SuperLieAlgebra, cross_check=True, seed=0) -> tuple:
    """(even, odd) dimensions of H^2(g, F)."""
    F = g.field
    dims = []
    rng = random.Random(seed)
    for parity in (0, 1):
        var = _cochain_vars(g, parity, False)
        if not var:
            dims.append(0)
            continue
        K = la.nullspace_sparse(cocycle_rows(g, var), len(var), F)
        Zv = [la.column(K, j) for j in range(K.ncols())]
        fs = [g.unit(i) for i in range(g.dim) if g.parities[i] == parity]
        Bv = [vars_from_gram(var, coboundary(g, f)) for f in fs]
        Bv = [b for b in Bv if any(b)]
        reps, base = _quotient_reps(var, Zv, Bv, F)
        dims.append(len(reps))
        if cross_check and Zv:
            probe = list(reps)
            coeffs = [rng.randint(-3, 3) for _ in Zv]
            probe.append(sum_vec(Zv, coeffs, F, len(var)))
            for v in probe:
                if any(v) and not _check_extension(g, gram_from_vars(g, var, v), parity):
                    raise ArithmeticError("cocycle fails the identity")
    return tuple(dims)


# ---------------------------------------------------------------------------
# central extensions


def central_extension(g: SuperLieAlgebra, cocycles, name: str = "", check=True, parity=0):
    """g ⊕ Z^* with [x, y]_new = [x, y] + sum_t c_t(x, y) z_t.

    The central vectors z_t have the parity of the cocycles. Raises ValueError if
    a cochain fails the cocycle identity (when ``check``).
    """
    F, n, P = g.field, g.dim, g.parities
    cocycles = list(cocycles)
    if check:
        for C in cocycles:
            if not cocycle_identity_holds(g, C):
                raise ValueError("input is not a 2-cocycle")
    k = len(cocycles)
    zl = [f"z{t + 1}" if f"z{t + 1}" not in g.labels else f"z{t + 1}'" for t in range(k)]
    ev = list(g.even_indices)
    od = list(g.odd_indices)
    order = [("g", i) for i in ev] + ([("z", t) for t in range(k)] if parity == 0 else []) + \
        [("g", i) for i in od] + ([("z", t) for t in range(k)] if parity == 1 else [])
    pos = {key: a for a, key in enumerate(order)}
    labels = [g.labels[x] if kind == "g" else zl[x] for kind, x in order]
    pars = [P[x] if kind == "g" else parity for kind, x in order]
    table = {}
    for i in range(n):
        for j in range(n):
            row = {pos[("g", m)]: c for m, c in g.bracket_basis(i, j).items()}
            for t, C in enumerate(cocycles):
                if C[i, j]:
                    row[pos[("z", t)]] = C[i, j]
            if row:
                table[(pos[("g", i)], pos[("g", j)])] = row

    def lift(v):
        w = [F.zero] * len(order)
        for i, x in enumerate(v):
            w[pos[("g", i)]] = x
        return w

    cartan = [lift(h) for h in g.cartan]
    if parity == 0:
        cartan += [pos[("z", t)] for t in range(k)]
    h = SuperLieAlgebra(labels, pars, table, F, cartan, None, name or f"{g.name}^")
    h.extension_of = g
    h.cocycles = cocycles
    h.lift_index = pos
    return h


def is_reduced(g):
    from .structure import center
    return contained(g, center(g), derived(g))


def realized_cocycles(g: SuperLieAlgebra):
    """(g' = g/Z(g), cocycles of g as a central extension of g', quotient data).

    The section g' -> g is the g_0-invariant complement W of Z(g), so the
    cocycles vanish on (g'_0, g') and land in the restricted space.
    """
    from . import repn
    from .liealg import quotient
    from .structure import center
    Z = center(g)
    Q = quotient(g, Z, f"{g.name}/Z")
    gp = Q.algebra
    F = g.field
    m = gp.dim
    if Z.dim:
        W = repn.equivariant_complement(repn.restrict_even(repn.adjoint(g)), Z.basis)
        if W is None:
            raise ArithmeticError("Z(g) has no g_0-invariant complement")
    else:
        W = [g.unit(i) for i in range(g.dim)]
    # section: solve project(sum a_k w_k) = e_a
    P = la.mat([Q.project(g, w) for w in W], F, m).transpose()
    sec = [sum_vec(W, la.solve_linear(P, gp.unit(a)), F, g.dim) for a in range(m)]
    piv = [next(i for i, x in enumerate(b) if x) for b in Z.basis]
    Cs = [la.zeros(m, m, F) for _ in Z.basis]
    for a in range(m):
        for b in range(m):
            br = g.bracket(sec[a], sec[b])
            low = sum_vec(sec, Q.project(g, br), F, g.dim)
            diff = [x - y for x, y in zip(br, low)]
            for t, p in enumerate(piv):
                if diff[p]:
                    Cs[t][a, b] = diff[p]
    return gp, Cs, Q


def _kernel_modulo(blocks, Bs, nunk, F):
    """Vectors a with sum_k a_k blocks[t][k] in span(Bs) for every t.

    Returns the kernel basis in a-coordinates.
    """
    nb = len(Bs)
    cols = nunk + nb * len(blocks)
    rows = []
    for t, blk in enumerate(blocks):
        L = len(blk[0]) if blk else (len(Bs[0]) if Bs else 0)
        for e in range(L):
            eq = {}
            for k, v in enumerate(blk):
                if v[e]:
                    eq[k] = v[e]
            for s, b in enumerate(Bs):
                if b[e]:
                    eq[nunk + t * nb + s] = -b[e]
            if eq:
                rows.append(eq)
    K = la.nullspace_sparse(rows, cols, F)
    proj = [[K[k, j] for k in range(nunk)] for j in range(K.ncols())]
    return la.row_space(proj, nunk, F)


def _act_gram(A, C):
    """Even operator A acting on a 2-form: -(A^T C + C A)."""
    return -(A.transpose() * C + C * A)


@dataclass
class MaximalityWitness:
    dim_Z: int
    dim_invariants: int
    Z_in_invariants: bool
    dim_R0: int
    dim_ann: int
    R0_in_ann: bool

    @property
    def maximal(self):
        return (self.Z_in_invariants and self.dim_Z == self.dim_invariants
                and self.R0_in_ann and self.dim_R0 == self.dim_ann)

    def to_json(self):
        return dict(self.__dict__, maximal=self.maximal)


def is_maximal(g: SuperLieAlgebra, seed=0):
    """(maximal?, witness): Z = H^2_r(g')^{R_0} and R_0 = Ann_{D(s)_0}(Z), s = C(g')."""
    from .structure import canonical_filtration, is_quasireductive
    if not is_quasireductive(g).quasireductive:
        raise ValueError("is_maximal needs a quasireductive algebra")
    if not is_reduced(g):
        raise ValueError("is_maximal needs a reduced algebra")
    F = g.field
    filt = canonical_filtration(g, seed)
    gp, Zc, _ = realized_cocycles(g)
    if gp.dim != filt.gprime.dim:
        raise ArithmeticError("quotient mismatch")
    H = h2_restricted(gp, cross_check=False)
    var = _cochain_vars(gp, 0, True)
    Zv = [vars_from_gram(var, C) for C in H.cocycle_basis]
    Bv = [vars_from_gram(var, C) for C in H.coboundary_basis]
    R0 = filt.R.even
    ops = [gp.ad_vec(x) for x in R0]
    # invariant classes: a in span(Z^2) with x.a in B^2 for all x in R_0
    blocks = [[vars_from_gram(var, _act_gram(A, C)) for C in H.cocycle_basis] for A in ops]
    if blocks and Zv:
        inv = _kernel_modulo(blocks, Bv, len(Zv), F)
        inv_vecs = [sum_vec(Zv, a, F, len(var)) for a in inv]
    else:
        inv_vecs = list(Zv)
    sp = Span(len(var), F)
    for b in Bv:
        sp.add(b)
    base = len(sp)
    for v in inv_vecs:
        sp.add(v)
    dim_inv = len(sp) - base
    zr = [vars_from_gram(var, C) for C in Zc]
    z_in = all(sp.contains(z) for z in zr)
    # annihilator of Z restricted to s = C(g') inside Der(s)_0
    S = filt.C_prime
    s = subalgebra(gp, S, "s")
    Bm = la.mat(S.basis, F, gp.dim).transpose()
    Zs = [Bm.transpose() * C * Bm for C in Zc]
    der = derivations(s, witness=False)
    D0 = [D for D, p in zip(der.basis, der.parities) if p == 0]
    svar = _cochain_vars(s, 0, True)
    Hs = h2_restricted(s, cross_check=False)
    sB = [vars_from_gram(svar, C) for C in Hs.coboundary_basis]
    if Zs and D0:
        blocks = [[vars_from_gram(svar, _act_gram(D, Cz)) for D in D0] for Cz in Zs]
        ann = _kernel_modulo(blocks, sB, len(D0), F)
        dim_ann_der = len(ann)
    else:
        dim_ann_der = len(D0)
    from .structure import center
    inner0 = s.sdim[0] - center(s).sdim[0]
    dim_ann = dim_ann_der - inner0
    # R_0 acting on s: its images must annihilate Z
    spb = Span(len(svar), F)
    for b in sB:
        spb.add(b)
    r0_in = all(spb.contains(vars_from_gram(svar, _act_gram(_restrict_to(gp.ad_vec(x), S, F), Cz)))
                for x in R0 for Cz in Zs)
    w = MaximalityWitness(len(Zc), dim_inv, z_in, len(R0), dim_ann, r0_in)
    return w.maximal, w


def _restrict_to(A, S, F):
    """Matrix of an operator preserving S in S's rref coordinates."""
    piv = [next(i for i, x in enumerate(b) if x) for b in S.basis]
    k = len(S.basis)
    out = la.zeros(k, k, F)
    for c, b in enumerate(S.basis):
        img = la.mat_vec(A, b)
        for r, p in enumerate(piv):
            if img[p]:
                out[r, c] = img[p]
    return out


def is_rigid(g: SuperLieAlgebra, seed=0) -> bool:
    """H^2(g) = 0 and D(g) = 0 for simple g."""
    from . import repn
    if g.dim == 0 or repn.is_simple(repn.adjoint(g), seed).simple is not True:
        raise ValueError("is_rigid needs a simple algebra")
    return h2_trivial(g, cross_check=False) == (0, 0) and \
        derivations(g, witness=False).outer_dims == (0, 0)


# ---------------------------------------------------------------------------
# pseudoabelian envelope


def pseudoabelian_envelope(g: SuperLieAlgebra, seed=0):
    """Family specs of the maximal pseudoabelian algebra dominating g."""
    from . import repn
    from .catalog import FamilySpec
    from .structure import canonical_filtration
    filt = canonical_filtration(g, seed)
    if any(r.kind != "OddAbelian" for r in filt.ideals):
        raise ValueError("algebra is not pseudoabelian (C(g) is not abelian)")
    gp = filt.gprime
    m = filt.C_prime
    out = []
    if m.dim == 0:
        return out
    # m as a module over R_0 (the even part of g' acts through R_0)
    M0 = repn.restrict_even(repn.adjoint(gp))
    Mm = repn.submodule(M0, m.basis)
    comps = repn.isotypic_components(Mm, seed)
    types = [repn.submodule(Mm, grp[0]) for grp in comps]
    used = set()
    for a, (grp, L) in enumerate(zip(comps, types)):
        if a in used:
            continue
        used.add(a)
        d, mult = L.dim, len(grp)
        Ld = repn.dual(L)
        maps = repn.hom_space(L, Ld)
        phi = repn.find_invertible(maps, seed) if maps else None
        if phi is not None:
            # the form B(u, v) = phi(u)(v) is symmetric or skew
            sym = phi.transpose() == phi
            skew = phi.transpose() == -phi
            if sym:
                out.append(FamilySpec("co", [d, mult]))
            elif skew:
                out.append(FamilySpec("csp", [d, mult]))
            else:
                raise ArithmeticError("invariant form is neither symmetric nor skew")
            continue
        q = 0
        for b, (grp2, L2) in enumerate(zip(comps, types)):
            if b not in used and L2.dim == d and repn.find_invertible(
                    repn.hom_space(L2, Ld), seed) is not None:
                q = len(grp2)
                used.add(b)
                break
        out.append(FamilySpec("a_spq", [d, mult, q]))
    return out
