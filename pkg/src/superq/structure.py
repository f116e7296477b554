"""
Centers, minimal ideals and the canonical filtration Z ⊆ C ⊆ g.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

from . import exactla as la
from .liealg import (Span, Subspace, SuperLieAlgebra, bracket_spaces, contained, derived,
                     graded_subspace, invariant_form, is_ideal, is_subalgebra, quotient,
                     subalgebra, subspace_closure, subspace_intersection, subspace_sum,
                     whole, zero_subspace)
from . import repn


def _combo(vectors, coeffs, F, n):
    v = [F.zero] * n
    for c, b in zip(coeffs, vectors):
        if c:
            v = [x + c * y for x, y in zip(v, b)]
    return v


def center_and_centralizer(g: SuperLieAlgebra, h=None) -> Subspace:
    """Z_g(h) as the kernel of the stacked maps ad(y), y in h (Z(g) if h is None)."""
    if h is None:
        ys = [g.unit(i) for i in range(g.dim)]
    elif isinstance(h, Subspace):
        ys = h.basis
    else:
        ys = list(h)
    ys = [y for y in ys if any(y)]
    if not ys:
        return whole(g)
    d = g.dim
    rows = []
    for y in ys:
        A = g.ad_vec(y)
        for r in range(d):
            row = {c: A[r, c] for c in range(d) if A[r, c]}
            if row:
                rows.append(row)
    K = la.nullspace_sparse(rows, d, g.field)
    return graded_subspace(g, [la.column(K, j) for j in range(K.ncols())])


def center(g):
    return center_and_centralizer(g)


# ---------------------------------------------------------------------------
# even part


@dataclass
class EvenData:
    g0: SuperLieAlgebra
    emb: list          # g0 basis in g coordinates
    center: Subspace   # Z(g0) in g coordinates
    derived: Subspace  # [g0, g0] in g coordinates


def even_data(g: SuperLieAlgebra) -> EvenData:
    g0, emb = repn.even_part(g)
    Z0 = center_and_centralizer(g0)
    D0 = derived(g0)
    F, n = g.field, g.dim
    up = lambda S: graded_subspace(g, [_combo(emb, v, F, n) for v in S.basis])
    return EvenData(g0, emb, up(Z0), up(D0))


def simple_ideals_of_derived(g: SuperLieAlgebra, ed: EvenData | None = None, seed=0):
    """Simple ideals of [g0, g0] as subspaces of g."""
    ed = ed or even_data(g)
    if ed.derived.dim == 0:
        return []
    s = subalgebra(g, ed.derived, "[g0,g0]")
    parts = repn.semisimple_decomposition(repn.adjoint(s), seed)
    F, n = g.field, g.dim
    return [graded_subspace(g, [_combo(ed.derived.basis, c, F, n) for c in b]) for b in parts]


# ---------------------------------------------------------------------------
# quasireductivity


@dataclass
class QRReport:
    g0_reductive: bool
    action_semisimple: bool
    reduced: bool
    details: dict = dfield(default_factory=dict)

    @property
    def quasireductive(self):
        return self.g0_reductive and self.action_semisimple

    def to_json(self):
        return {"g0_reductive": self.g0_reductive, "action_semisimple": self.action_semisimple,
                "reduced": self.reduced, "quasireductive": self.quasireductive}


def is_reductive_lie(k: SuperLieAlgebra) -> bool:
    """k = Z(k) ⊕ [k,k] with nondegenerate Killing form on [k,k]."""
    Z = center_and_centralizer(k)
    D = derived(k)
    if Z.dim + D.dim != k.dim or subspace_intersection(k, Z, D).dim:
        return False
    if D.dim == 0:
        return True
    n = k.dim
    B = D.basis
    ads = [k.ad_vec(b) for b in B]
    G = la.mat([[la.trace(a * b) for b in ads] for a in ads], k.field, len(B))
    return la.rank(G) == len(B)


def is_quasireductive(g: SuperLieAlgebra) -> QRReport:
    ed = even_data(g)
    red = is_reductive_lie(ed.g0)
    semis = True
    bad = []
    for z in ed.center.basis:
        if not la.minimal_polynomial(g.ad_vec(z)).squarefree:
            semis = False
            bad.append(z)
    Zg = center_and_centralizer(g)
    reduced = contained(g, Zg, derived(g))
    return QRReport(red, semis, reduced, {"dim_Z_g0": ed.center.dim, "dim_Z": Zg.sdim})


# ---------------------------------------------------------------------------
# minimal ideals


@dataclass
class IdealRecord:
    subspace: Subspace
    kind: str  # Simple, OddAbelian, DoubledSimple
    k: object = None  # underlying simple Lie algebra for DoubledSimple
    witness: dict = dfield(default_factory=dict)

    @property
    def sdim(self):
        return self.subspace.sdim

    def to_json(self):
        d = {"kind": self.kind, "dim": list(self.sdim)}
        if self.k is not None:
            d["k_dim"] = self.k.dim
        return d


def odd_abelian_part(g: SuperLieAlgebra) -> Subspace:
    """A = {x in g_1 : [x, g_1] = 0}."""
    odd = graded_subspace(g, [g.unit(i) for i in g.odd_indices])
    Zc = center_and_centralizer(g, odd)
    return subspace_intersection(g, Zc, odd)


def classify_ideal(g: SuperLieAlgebra, I: Subspace, seed=0) -> IdealRecord:
    """Re-derive the kind of a minimal ideal from scratch."""
    if I.sdim[0] == 0:
        ok = not any(any(g.bracket(a, b)) for a in I.basis for b in I.basis)
        return IdealRecord(I, "OddAbelian" if ok else "Unknown", None, {"abelian": ok})
    l = subalgebra(g, I, "l")
    res = repn.is_simple(repn.adjoint(l), seed)
    if res.simple is True:
        return IdealRecord(I, "Simple", None, {"adjoint_simple": res.certificate})
    # doubled simple: l0 simple, [l1, l1] = 0, l1 ≅ l0, some odd d with [d, l1] != 0
    l0, emb0 = repn.even_part(l)
    l0_simple = is_reductive_lie(l0) and center_and_centralizer(l0).dim == 0 and \
        repn.is_simple(repn.adjoint(l0), seed).simple is True
    odd_l = list(l.odd_indices)
    l1_abelian = not any(any(l.bracket(l.unit(a), l.unit(b))) for a in odd_l for b in odd_l)
    iso = False
    if l0_simple and len(odd_l) == l0.dim:
        M1 = repn.restrict_even(repn.adjoint(l))
        sub1 = repn.submodule(M1, [l.unit(i) for i in odd_l])
        A0 = repn.adjoint(l0)
        Ash = repn.parity_shift(A0)
        iso = repn.find_invertible(repn.hom_space(Ash, sub1), seed) is not None
    outer = any(any(g.bracket(g.unit(d), b)) for d in g.odd_indices for b in I.odd
                if not I.contains(g.unit(d), g.field))
    if l0_simple and l1_abelian and iso and outer:
        return IdealRecord(I, "DoubledSimple", l0, {"l1_iso_l0": True})
    return IdealRecord(I, "Unknown", None, {"adjoint_simple": res.simple,
                                             "l0_simple": l0_simple, "l1_abelian": l1_abelian,
                                             "iso": iso, "outer": outer})


def minimal_ideals(g: SuperLieAlgebra, seed=0) -> list:
    """Minimal ideals of g (requires Z(g)_0 = 0).

    Odd abelian ones are simple g0-submodules of A = {x in g_1 : [x,g_1] = 0}
    (a decomposition is chosen when multiplicities exceed one). The others are
    closures of simple ideals of [g0,g0] or of central elements of g0,
    pruned to the minimal ones.
    """
    Zg = center_and_centralizer(g)
    if Zg.sdim[0]:
        raise ValueError("minimal_ideals needs Z(g)_0 = 0; pass g/Z(g)")
    ed = even_data(g)
    F, n = g.field, g.dim
    A = odd_abelian_part(g)
    records = []
    if A.dim:
        M0 = repn.restrict_even(repn.adjoint(g))
        Amod = repn.submodule(M0, A.basis)
        for b in repn.semisimple_decomposition(Amod, seed):
            vecs = [_combo(A.basis, c, F, n) for c in b]
            records.append(graded_subspace(g, vecs))
    cands = []
    for s in simple_ideals_of_derived(g, ed, seed):
        cands.append(subspace_closure(g, s.basis, "ideal"))
    zc = []
    for z in ed.center.basis:
        J = subspace_closure(g, [z], "ideal")
        cands.append(J)
        zc.append(J)
    kept = []
    for J in sorted(cands, key=lambda S: S.dim):
        if any(J == K for K in kept):
            continue
        if subspace_intersection(g, J, A).dim:
            continue
        if any(contained(g, K, J) for K in kept):
            continue
        # every central element of g0 inside J must regenerate J
        ZJ = subspace_intersection(g, J, ed.center)
        if any(subspace_closure(g, [z], "ideal").dim < J.dim for z in ZJ.basis):
            continue
        kept.append(J)
    out = [classify_ideal(g, J, seed) for J in kept]
    out += [IdealRecord(S, "OddAbelian", None, {"abelian": True}) for S in records]
    return out


# ---------------------------------------------------------------------------
# canonical filtration


@dataclass
class CanonicalFiltration:
    Z: Subspace                 # center of g
    C: Subspace                 # preimage of C(g) in g
    gprime: SuperLieAlgebra     # g / Z(g)
    quotient_map: object        # liealg.Quotient
    C_prime: Subspace           # C(g) inside g'
    ideals: list                # IdealRecords of g'
    R: Subspace                 # complement of C(g) in g', a subalgebra
    checks: dict

    def dims(self):
        return {"Z": list(self.Z.sdim), "C": list(self.C_prime.sdim), "R": list(self.R.sdim)}

    def to_json(self):
        d = self.dims()
        d["ideals"] = [r.to_json() for r in self.ideals]
        d["checks"] = {k: v for k, v in sorted(self.checks.items())}
        return d


def canonical_filtration(g: SuperLieAlgebra, seed=0) -> CanonicalFiltration:
    qr = is_quasireductive(g)
    if not qr.quasireductive:
        raise ValueError("algebra is not quasireductive")
    Z = center_and_centralizer(g)
    Q = quotient(g, Z, f"{g.name}/Z")
    gp = Q.algebra
    recs = minimal_ideals(gp, seed)
    Cp = subspace_sum(gp, *[r.subspace for r in recs]) if recs else zero_subspace(gp)
    # preimage of C(g) in g
    lifts = [Q.lift(g, v) for v in Cp.basis]
    C = subspace_sum(g, Z, graded_subspace(g, lifts))
    M0 = repn.restrict_even(repn.adjoint(gp))
    Rb = repn.equivariant_complement(M0, Cp.basis) if Cp.dim else \
        [gp.unit(i) for i in range(gp.dim)]
    if Rb is None:
        raise ValueError("no equivariant complement of C(g)")
    R = graded_subspace(gp, Rb)
    r_closed = is_subalgebra(gp, R)
    R0 = graded_subspace(gp, R.even)
    R1 = graded_subspace(gp, R.odd)
    r1_abelian = not any(any(gp.bracket(a, b)) for a in R.odd for b in R.odd)
    dR0 = bracket_spaces(gp, R0, R0)
    r1_trivial = not any(any(gp.bracket(a, b)) for a in dR0.basis for b in R.odd)
    r0_reductive = True
    if R0.dim:
        r0_reductive = is_reductive_lie(subalgebra(gp, R0, "r0"))
    Zgp = center_and_centralizer(gp)
    checks = {
        "C_is_ideal": is_ideal(gp, Cp),
        "C_direct_sum": sum(r.subspace.dim for r in recs) == Cp.dim,
        "kinds_verified": all(r.kind in ("Simple", "OddAbelian", "DoubledSimple") for r in recs),
        "R_closed": r_closed,
        "R1_abelian": r1_abelian,
        "R1_trivial_under_derived_R0": r1_trivial,
        "R0_reductive": r0_reductive,
        "center_lemma": Zgp.sdim[0] == 0,
        "Z_in_C": contained(g, Z, C),
    }
    return CanonicalFiltration(Z, C, gp, Q, Cp, recs, R, checks)


def adjoint_loewy(g: SuperLieAlgebra, seed=0):
    if not is_quasireductive(g).quasireductive:
        raise ValueError("algebra is not quasireductive")
    return repn.loewy_data(repn.adjoint(g), seed)
