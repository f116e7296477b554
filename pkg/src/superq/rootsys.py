"""
Cartan subalgebras, root decompositions, root-space profiles and
triangular decompositions.

Weights are tuples of coordinates on the basis of h_0^* dual to the chosen
basis of h_0.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dfield

from flint import fmpq, fmpz_mat

from . import exactla as la
from .liealg import SuperLieAlgebra, Span, graded_subspace, Subspace, subspace_sum
from . import repn
from .structure import center_and_centralizer, _combo


@dataclass
class CartanData:
    h0: Subspace
    h: Subspace
    source: str  # designated or generic

    def to_json(self):
        return {"h0_dim": self.h0.dim, "h": list(self.h.sdim), "source": self.source}


def _abelian(g, vecs):
    return not any(any(g.bracket(a, b)) for a in vecs for b in vecs)


def _semisimple_in_field(g, x):
    mp = la.minimal_polynomial(g.ad_vec(x))
    if not mp.squarefree:
        return False
    try:
        roots = g.field.roots_of(mp.coeffs) if g.field.is_rational else \
            repn._nf_roots(g.field, mp.coeffs)
    except la.ExtensionNeeded:
        return False
    return len(roots) == len(mp.coeffs) - 1


def cartan(g: SuperLieAlgebra, seed=0, tries=25) -> CartanData:
    """(h_0, h = Z_g(h_0)): designated Cartan, else a generic-element search."""
    F, n = g.field, g.dim
    g0, emb = repn.even_part(g)
    if g.cartan:
        h0 = graded_subspace(g, [g.split(h)[0] for h in g.cartan])
        if h0.sdim[1] == 0 and _abelian(g, h0.basis) and \
                all(_semisimple_in_field(g, x) for x in h0.basis):
            cz = center_and_centralizer(g, h0)
            if cz.sdim[0] == h0.dim:
                return CartanData(h0, cz, "designated")
    rng = random.Random(seed)
    best = None
    for _ in range(tries):
        x = _combo(emb, [F(rng.randint(-9, 9)) for _ in emb], F, n)
        if not any(x) or not _semisimple_in_field(g, x):
            continue
        cz = center_and_centralizer(g, [x])
        c0 = graded_subspace(g, cz.even)
        if best is None or c0.dim < best.dim:
            if _abelian(g, c0.basis) and all(_semisimple_in_field(g, y) for y in c0.basis):
                best = c0
    if best is None:
        raise RuntimeError("no Cartan subalgebra found within the retry budget")
    return CartanData(best, center_and_centralizer(g, best), "generic")


# ---------------------------------------------------------------------------
# root decomposition


@dataclass
class RootDatum:
    algebra: SuperLieAlgebra
    h0: Subspace
    h: Subspace
    roots: dict          # weight tuple -> list of basis vectors (homogeneous)
    profile: dict        # weight tuple -> (even dim, odd dim)
    checks: dict = dfield(default_factory=dict)

    @property
    def rank(self):
        return self.h0.dim

    def even_roots(self):
        return [a for a, d in self.profile.items() if d[0]]

    def odd_roots(self):
        return [a for a, d in self.profile.items() if d[1]]

    def lattice(self):
        """Integer matrix of root coordinates (rows) and the common denominator."""
        rs = sorted(self.roots, key=_rkey)
        den = 1
        for a in rs:
            for x in a:
                q = _q(x)
                den = den * int(q.q) // math.gcd(den, int(q.q))
        rows = [[int(_q(x) * den) for x in a] for a in rs]
        return rows, den

    def to_json(self):
        F = self.algebra.field
        out = {"h0_dim": self.h0.dim, "h": list(self.h.sdim), "checks": dict(self.checks)}
        try:
            rows, den = self.lattice()
        except ValueError:
            rows = None
        if rows is not None:
            out["denominator"] = den
            out["roots"] = [{"root": r, "dim": list(self.profile[a])}
                            for r, a in zip(rows, sorted(self.roots, key=_rkey))]
        else:
            out["roots"] = [{"root": [F.scalar_to_json(x) for x in a], "dim": list(self.profile[a])}
                            for a in sorted(self.roots, key=_rkey)]
        return out


def _rkey(a):
    return tuple(str(x) for x in a)


def _wt_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def root_decomposition(g: SuperLieAlgebra, seed=0, cd: CartanData | None = None) -> RootDatum:
    cd = cd or cartan(g, seed)
    h0 = cd.h0
    spaces = repn.weight_spaces(repn.adjoint(g), h0.basis)
    roots, prof = {}, {}
    zero = None
    P = g.parities
    for w, vecs in spaces:
        if not any(w):
            zero = vecs
            continue
        roots[w] = vecs
        e = sum(1 for v in vecs if P[next(i for i, x in enumerate(v) if x)] == 0)
        prof[w] = (e, len(vecs) - e)
    rd = RootDatum(g, h0, cd.h, roots, prof)
    zdim = len(zero or [])
    rd.checks["bookkeeping"] = zdim == cd.h.dim and \
        zdim + sum(len(v) for v in roots.values()) == g.dim
    rd.checks["zero_space_is_h"] = Subspace_eq(g, zero or [], cd.h)
    rd.checks["eigen"] = _eigen_check(g, rd)
    rd.checks["additivity"] = bool(_additivity_violations(g, rd, zero or []) == [])
    # odd roots of p(n) are not symmetric, so only the even ones are required
    ev = [a for a in roots if prof[a][0]]
    rd.checks["even_negation_stable"] = all(tuple(-x for x in a) in ev for a in ev)
    rd.checks["negation_stable"] = all(tuple(-x for x in a) in roots for a in roots)
    rd.checks["profile"] = not profile_violations(rd)
    try:
        rd.checks["weyl_stable"] = weyl_stable(g, rd)
    except ValueError:
        rd.checks["weyl_stable"] = None
    return rd


def Subspace_eq(g, vecs, S):
    T = graded_subspace(g, vecs)
    return T == S


def _eigen_check(g, rd):
    for a, vecs in rd.roots.items():
        for h, c in zip(rd.h0.basis, range(len(a))):
            for v in vecs:
                if g.bracket(h, v) != [a[c] * x for x in v]:
                    return False
    return True


def _additivity_violations(g, rd, zero):
    spaces = dict(rd.roots)
    spaces[tuple(g.field.zero for _ in range(rd.rank))] = zero
    spans = {}
    for w, vs in spaces.items():
        sp = Span(g.dim, g.field)
        for v in vs:
            sp.add(v)
        spans[w] = sp
    bad = []
    for a, va in spaces.items():
        for b, vb in spaces.items():
            target = spans.get(_wt_add(a, b))
            for x in va:
                for y in vb:
                    z = g.bracket(x, y)
                    if any(z) and (target is None or not target.contains(z)):
                        bad.append((a, b))
    return bad


def profile_violations(rd: RootDatum):
    """Roots whose space is not of graded dimension (1|0), (1|1) or (0|n)."""
    return [a for a, (e, o) in rd.profile.items()
            if not ((e, o) in ((1, 0), (1, 1)) or (e == 0 and o > 0))]


def coroot(g, rd, a):
    """h_a in h_0 with a(h_a) = 2 from [e_a, e_{-a}] (even root a)."""
    F = g.field
    ea = next(v for v in rd.roots[a] if g.parity_of(v) == 0)
    neg = tuple(-x for x in a)
    fa = next(v for v in rd.roots[neg] if g.parity_of(v) == 0)
    h = g.bracket(ea, fa)
    # h lies in the zero weight space; evaluate all h_0-weights on it
    coords = _h0_coords(g, rd, h)
    if coords is None:
        return None
    val = sum((x * y for x, y in zip(a, coords)), F.zero)
    if not val:
        return None
    return [c * 2 / val for c in coords]


def _h0_coords(g, rd, h):
    B = rd.h0.basis
    if not B:
        return []
    M = la.mat(B, g.field, g.dim).transpose()
    sol = la.solve_linear(M, h)
    return sol


def weyl_stable(g, rd, gamma=None):
    """Root multiset stable under the simple reflections of the even roots."""
    ev = [a for a in rd.even_roots() if rd.profile[a][0]]
    if not ev:
        return True
    gamma = gamma or sample_gamma(rd)
    pos = [a for a in ev if _gval(gamma, a) > 0]
    posset = set(pos)
    simple = [a for a in pos if not any(_wt_sub(a, b) in posset for b in pos if b != a)]
    for a in simple:
        hc = coroot(g, rd, a)
        if hc is None:
            return False
        for b, d in rd.profile.items():
            k = sum((x * y for x, y in zip(b, hc)), g.field.zero)
            img = tuple(x - k * y for x, y in zip(b, a))
            if rd.profile.get(img) != d:
                return False
    return True


def _wt_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _q(x):
    if hasattr(x, "value"):  # number-field element
        cs = x.value.coeffs()
        if len(cs) > 1:
            raise ValueError("irrational root coordinate; orderings need rational roots")
        return fmpq(cs[0]) if cs else fmpq(0)
    return fmpq(x)


def _gval(gamma, a):
    return sum((_q(x) * _q(y) for x, y in zip(gamma, a)), fmpq(0))


def sample_gamma(rd: RootDatum, seed=0, tries=200):
    rng = random.Random(seed)
    for t in range(tries):
        gam = [rng.randint(-97, 97) + fmpq(rng.randint(1, 7), 11) for _ in range(rd.rank)]
        if all(_gval(gam, a) != 0 for a in rd.roots):
            return gam
    raise RuntimeError("no regular gamma found")


# ---------------------------------------------------------------------------
# lattice


def root_lattice_check(rd: RootDatum) -> dict:
    """Z-rank of the group generated by the roots vs the dimension of their span."""
    F = rd.algebra.field
    rs = list(rd.roots)
    if not rs:
        return {"rank_Z": 0, "dim_span": 0, "is_algebraic": True}
    dim_span = la.rank(la.mat([list(a) for a in rs], F, rd.rank))
    # expand each coordinate over the Q-basis of the field: the Z-rank of a
    # finitely generated subgroup of a Q-space is its Q-rank
    rows = []
    for a in rs:
        r = []
        for x in a:
            r += [fmpq(c) for c in F.coeffs(x)] if not F.is_rational else [fmpq(x)]
        rows.append(r)
    den = 1
    for r in rows:
        for x in r:
            den = den * int(x.q) // math.gcd(den, int(x.q))
    Z = fmpz_mat([[int(x * den) for x in r] for r in rows])
    rank_z = Z.rank()
    return {"rank_Z": rank_z, "dim_span": dim_span, "is_algebraic": rank_z == dim_span}


# ---------------------------------------------------------------------------
# triangular decompositions


@dataclass
class TriangularDecomposition:
    gamma: list
    delta_plus: list
    delta_minus: list
    n_plus: Subspace
    n_minus: Subspace
    borel: Subspace
    checks: dict

    def to_json(self):
        return {"gamma": [la.fmt_q(x) for x in self.gamma], "n_pos": len(self.delta_plus),
                "n_plus": list(self.n_plus.sdim), "borel": list(self.borel.sdim),
                "checks": dict(self.checks)}


def triangular(g: SuperLieAlgebra, gamma, rd: RootDatum | None = None) -> TriangularDecomposition:
    rd = rd or root_decomposition(g)
    gamma = [fmpq(x) if not isinstance(x, str) else la.parse_q(x) for x in gamma]
    if len(gamma) != rd.rank:
        raise ValueError(f"gamma needs {rd.rank} values")
    zero = [a for a in rd.roots if _gval(gamma, a) == 0]
    if zero:
        names = ", ".join("(" + ",".join(la.fmt_q(x) for x in a) + ")" for a in sorted(zero, key=_rkey))
        raise ValueError(f"gamma vanishes on roots {names}")
    dp = sorted((a for a in rd.roots if _gval(gamma, a) > 0), key=_rkey)
    dm = sorted((a for a in rd.roots if _gval(gamma, a) < 0), key=_rkey)
    npl = graded_subspace(g, [v for a in dp for v in rd.roots[a]])
    nmi = graded_subspace(g, [v for a in dm for v in rd.roots[a]])
    b = subspace_sum(g, rd.h, npl)
    from .liealg import is_subalgebra
    checks = {"n_plus_closed": is_subalgebra(g, npl), "n_minus_closed": is_subalgebra(g, nmi),
              "borel_closed": is_subalgebra(g, b),
              "direct_sum": npl.dim + nmi.dim + rd.h.dim == g.dim
              and subspace_sum(g, npl, nmi, rd.h).dim == g.dim}
    return TriangularDecomposition(gamma, dp, dm, npl, nmi, b, checks)
