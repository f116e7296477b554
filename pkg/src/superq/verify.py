"""Lemma verification suites over instance batteries.

Every suite maps an instance (an algebra spec, sometimes with a weight)
to a verdict with a small witness dictionary. Suites never swallow
``ExtensionNeeded``: the caller decides how to report a missing field.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field as dfield

from . import exactla as la
from . import repn, rootsys, structure, dercoh
from .catalog import DEFAULT_BATTERY, construct, parse_spec
from .liealg import SuperLieAlgebra, subalgebra


# ---------------------------------------------------------------------------
# reference values (lemma statements), used as oracles by the suites

DER_REFERENCE = {
    "psl(3,3)": {"der": (17, 18), "outer": (1, 0)},
    "psq(3)": {"outer": (0, 1)},
    "psl(2,2)": {"outer": (3, 0)},
    "kd(sl2)": {"outer": (1, 1)},
}

H2R_REFERENCE = {
    "psl(2,2)": 3, "psl(3,3)": 1, "psq(3)": 1, "sp(4)": 1, "kd(sl2)": 1,
    "osp(3,2)": 0, "sl(2,1)": 0, "D(2,1;a=1)": 0, "G(1,2)": 0, "F(1,3)": 0,
}

REPN_ALGEBRAS = ["gl(1,1)", "q(2)", "osp(1,2)", "p(3)"]


def _canon(table):
    return {str(parse_spec(k)): v for k, v in table.items()}


DER_REFERENCE = _canon(DER_REFERENCE)
H2R_REFERENCE = _canon(H2R_REFERENCE)


def over_field(g: SuperLieAlgebra, F) -> SuperLieAlgebra:
    """Scalar extension of a rational algebra through its JSON form."""
    if F.is_rational or not g.field.is_rational:
        return g
    d = g.to_json()
    d["field"] = F.to_json()
    h = SuperLieAlgebra.from_json(d)
    h.spec = getattr(g, "spec", None)
    return h


def load(spec: str, F=None) -> SuperLieAlgebra:
    g = construct(spec)
    return over_field(g, F) if F is not None else g


@dataclass
class Verdict:
    instance: str
    ok: bool
    detail: dict = dfield(default_factory=dict)
    seconds: float = 0.0

    def line(self):
        return f"{'PASS' if self.ok else 'FAIL'}  {self.instance}  {_short(self.detail)}"

    def to_json(self):
        return {"instance": self.instance, "ok": self.ok, "detail": _jsonable(self.detail)}


@dataclass
class VerificationSuite:
    lemma: str
    seed: int
    verdicts: list

    @property
    def ok(self):
        return all(v.ok for v in self.verdicts)

    def to_json(self):
        return {"lemma": self.lemma, "seed": self.seed, "ok": self.ok,
                "verdicts": [v.to_json() for v in self.verdicts]}


def _short(d, width=160):
    s = ", ".join(f"{k}={_jsonable(v)}" for k, v in d.items())
    return s if len(s) <= width else s[:width - 3] + "..."


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return la.fmt_q(x) if hasattr(x, "p") or hasattr(x, "value") else str(x)


# ---------------------------------------------------------------------------
# helpers


def g0_simples(g, seed=0, budget=64):
    """Trivial g_0-module plus the simple pieces of the restricted standard
    module, keeping those whose induced module stays within ``budget``."""
    g0, _ = repn.even_part(g)
    out = [repn.trivial(g0)]
    k = len(g.odd_indices)
    if g.realization is None:
        return out
    V = repn.restrict_even(repn.standard(g))
    for basis in repn.semisimple_decomposition(V, seed):
        if 2 ** k * len(basis) <= budget:
            S = repn.submodule(V, basis)
            if all(S.dim != T.dim or S.sdim != T.sdim for T in out[1:]):
                out.append(S)
    return out


def _is_simple_algebra(g, seed):
    return g.dim > 0 and repn.is_simple(repn.adjoint(g), seed).simple is True


def _qr(g):
    return structure.is_quasireductive(g).quasireductive


# ---------------------------------------------------------------------------
# suites: each returns (ok, detail)


def s_construct(g, seed, **_):
    r = g.validate()
    return r.ok, {"sdim": list(g.sdim), "counts": r.summary()["counts"],
                  "jacobi": r.summary()["jacobi"][:5]}


def s_quasireductive(g, seed, **_):
    q = structure.is_quasireductive(g)
    return q.quasireductive, q.to_json()


def s_center(g, seed, **_):
    f = structure.canonical_filtration(g, seed)
    return f.checks["center_lemma"], {"Z": list(f.Z.sdim), "Z(g')": list(
        structure.center_and_centralizer(f.gprime).sdim)}


def s_ideal(g, seed, **_):
    f = structure.canonical_filtration(g, seed)
    kinds = [(r.kind, list(r.sdim)) for r in f.ideals]
    return f.checks["kinds_verified"] and f.checks["C_direct_sum"], {"ideals": kinds}


def s_th1(g, seed, **_):
    f = structure.canonical_filtration(g, seed)
    return all(f.checks.values()), dict(f.dims(), failed=[k for k, v in f.checks.items() if not v])


def s_filt(g, seed, **_):
    L = structure.adjoint_loewy(g, seed)
    return L.length <= 3, {"length": L.length, "method": L.method,
                           "socle_dims": [len(s) for s in L.socle]}


def s_rootspace(g, seed, **_):
    rd = rootsys.root_decomposition(g, seed)
    bad = rootsys.profile_violations(rd)
    prof = sorted({tuple(v) for v in rd.profile.values()})
    ok = not bad and rd.checks["bookkeeping"]
    return ok, {"profiles": [list(p) for p in prof], "h": list(rd.h.sdim),
                "bookkeeping": rd.checks["bookkeeping"],
                "violators": [[la.fmt_q(x) for x in a] for a in bad][:4]}


def s_der(g, seed, key="", **_):
    D = dercoh.derivations(g)
    ref = DER_REFERENCE.get(key)
    got = {"der": D.sdim, "outer": tuple(D.outer_dims)}
    ok = True
    if ref:
        ok = all(got[k] == tuple(v) for k, v in ref.items())
    return ok, {"der": list(D.sdim), "outer": list(D.outer_dims),
                "reference": None if ref is None else {k: list(v) for k, v in ref.items()}}


def s_centext(g, seed, key="", **_):
    H = dercoh.h2_restricted(g)
    formula = dercoh.h2_restricted_formula(g)
    ref = H2R_REFERENCE.get(key)
    ok = H.dim == formula and (ref is None or H.dim == ref)
    return ok, {"h2_r": H.dim, "formula": formula, "reference": ref}


def s_centext_d(g, seed, **_):
    """H^2_r of the core C(g') (psl(2,2) has three)."""
    f = structure.canonical_filtration(g, seed)
    s = subalgebra(f.gprime, f.C_prime, "core")
    H = dercoh.h2_restricted(s)
    return H.dim == 3, {"core": list(s.sdim), "h2_r": H.dim}


def s_simpleh2(g, seed, **_):
    if not _is_simple_algebra(g, seed):
        return True, {"simple": False}
    H = dercoh.h2_restricted(g, cross_check=False)
    full = dercoh.h2_trivial(g, cross_check=False, seed=seed)
    return full == (H.dim, 0), {"h2": list(full), "h2_r": H.dim}


def s_rigid(g, seed, **_):
    if not _is_simple_algebra(g, seed):
        return True, {"simple": False}
    return True, {"simple": True, "rigid": dercoh.is_rigid(g, seed)}


def s_maximal(g, seed, **_):
    if not dercoh.is_reduced(g):
        return True, {"reduced": False}
    m, w = dercoh.is_maximal(g, seed)
    return True, dict(w.to_json(), reduced=True)


def s_reciprocity(g, seed, **_):
    res = []
    for S in g0_simples(g, seed):
        r = repn.reciprocity_map(g, S)
        res.append((S.dim, r.ind.dim, r.ok, r.checks))
    ok = all(x[2] for x in res) and all(d == 2 ** len(g.odd_indices) * s for s, d, _, _ in res)
    return ok, {"instances": [{"dim_S": s, "dim_Ind": d, "ok": o} for s, d, o, _ in res]}


def s_inj(g, seed, **_):
    out = []
    for S in g0_simples(g, seed):
        I = repn.ind_even(S, g)
        C = repn.ind_even(S, g, "coind")
        p = repn.split_test(I, "projective")
        q = repn.split_test(C, "injective")
        out.append({"dim_S": S.dim, "projective": p.split, "injective": q.split,
                    "method": p.method})
    return all(x["projective"] and x["injective"] for x in out), {"instances": out}


def s_duality(g, seed, **_):
    _, T = repn.twist_module(g)
    out = []
    for S in g0_simples(g, seed):
        I = repn.ind_even(S, g)
        C = repn.ind_even(repn.tensor(S, repn.restrict_even(T)), g, "coind")
        a = repn.summand_dims(repn.decompose_summands(I, seed))
        b = repn.summand_dims(repn.decompose_summands(C, seed))
        out.append({"dim_S": S.dim, "ind": [list(x) for x in a], "coind": [list(x) for x in b]})
    return all(x["ind"] == x["coind"] for x in out), {"instances": out}


def _simple_probes(g, seed):
    mods = []
    if g.realization is not None:
        mods.append(("standard", repn.standard(g)))
    mods.append(("adjoint", repn.adjoint(g)))
    return [(n, M) for n, M in mods if repn.is_simple(M, seed).simple is True]


def s_highestweight(g, seed, **_):
    rd = rootsys.root_decomposition(g, seed)
    tri = rootsys.triangular(g, rootsys.sample_gamma(rd, seed), rd)
    out = {}
    ok = True
    for name, M in _simple_probes(g, seed):
        hw = repn.highest_weight(M, tri, rd, seed, simple=True)
        good = all(hw.checks.values())
        ok = ok and good
        out[name] = {"weight": None if hw.weight is None else [g.field.scalar_to_json(x) for x in hw.weight],
                     "ok": good}
    return ok, out


def s_cartan(g, seed, weight=None, **_):
    cd = rootsys.cartan(g, seed)
    lams = [weight] if weight is not None else _cartan_weights(cd.h0.dim)
    out = []
    for lam in lams:
        C = repn.cartan_module(g, lam, seed, cd)
        c = C.checks
        out.append({"lambda": [g.field.scalar_to_json(x) for x in C.lam], "dim": C.module.dim,
                    "simple": c["simple"], "pi_iso": c["pi_iso"], "omega_rank": C.rank,
                    "codim_u1": C.codim, "rank_reading": c["pi_matches_rank"],
                    "u1_reading": c["pi_matches_u1_codim"]})
    ok = all(x["simple"] and x["rank_reading"] for x in out)
    return ok, {"modules": out}


def _cartan_weights(r):
    """Weights whose Gram form stays diagonalizable over Q for q(n)."""
    base = [[0] * r, [1] + [0] * (r - 1), [1, -1] + [0] * (r - 2)]
    if r >= 3:
        base.append([1, -1, 1])
    return [w[:r] for w in base if len(w[:r]) == r]


def s_kac(g, seed, weight=None, **_):
    n = int(g.spec.params[0])
    lams = [tuple(weight)] if weight is not None else [(0,) * n, (1,) + (0,) * (n - 1)]
    out = []
    ok = True
    for lam in lams:
        lam = tuple(int(x) for x in lam)
        Km = repn.kac_module_p(n, lam, "-", g)
        sm = repn.is_simple(Km.module, seed)
        Kp = repn.kac_module_p(n, lam, "+", g)
        sp = repn.is_simple(Kp.module, seed).simple
        lt, le = repn.kac_simplicity_products(lam)
        row = {"lambda": list(lam), "K-": {"dim": Km.module.dim, "simple": sm.simple,
                                           "witness_dim": None if sm.submodule is None else len(sm.submodule)},
               "K+": {"dim": Kp.module.dim, "simple": sp},
               "prod_i<j": lt, "prod_i<=j": le,
               "i<j_matches": sp == (lt != 0), "i<=j_matches": sp == (le != 0)}
        ok = ok and sm.simple is False and sm.submodule is not None and row["i<j_matches"]
        out.append(row)
    return ok, {"modules": out}


# ---------------------------------------------------------------------------
# registry

_QR_BATTERY = DEFAULT_BATTERY

LEMMAS = {
    "construct": ("antisymmetry and Jacobi of every battery algebra", DEFAULT_BATTERY, s_construct),
    "quasireductive": ("reductive even part acting semisimply", DEFAULT_BATTERY, s_quasireductive),
    "center": ("Z(g/Z(g))_0 = 0", _QR_BATTERY, s_center),
    "ideal": ("minimal ideal trichotomy", _QR_BATTERY, s_ideal),
    "th1": ("canonical filtration with bracket-closed R", _QR_BATTERY, s_th1),
    "filt": ("adjoint Loewy length at most 3", _QR_BATTERY, s_filt),
    "rootspace": ("root space profiles (1|0), (1|1), (0|n)", _QR_BATTERY, s_rootspace),
    "der": ("outer derivations", list(DER_REFERENCE), s_der),
    "centext": ("H^2_r explicit basis vs formula", [k for k in H2R_REFERENCE], s_centext),
    "centext-d": ("H^2_r of the psl(2,2) core is 3", ["psl(2,2)", "gl(2,2)", "sl(2,2)"], s_centext_d),
    "simpleh2": ("H^2 = H^2_r, odd part 0, for simple algebras", DEFAULT_BATTERY, s_simpleh2),
    "rigid": ("rigidity of simple algebras (reported)", DEFAULT_BATTERY, s_rigid),
    "maximal": ("maximality of reduced algebras (reported)", ["gl(2,2)", "sl(2,2)", "kd(sl2)",
                                                               "hat_kd(sl2)", "tilde_kd(sl2)"], s_maximal),
    "reciprocity": ("Ind(M) = Coind(M (x) T)", REPN_ALGEBRAS, s_reciprocity),
    "inj": ("Ind(S) projective, Coind(S) injective", REPN_ALGEBRAS, s_inj),
    "duality": ("summands of Ind(S) and Coind(S (x) T) agree", REPN_ALGEBRAS, s_duality),
    "highestweight": ("unique highest weight with h-simple weight space",
                      ["gl(2,1)", "q(2)", "osp(1,2)", "osp(3,2)", "sl(2,2)"], s_highestweight),
    "cartan": ("C_lambda simple, parity shift by omega rank", ["q(2)", "q(3)"], s_cartan),
    "kac": ("K^-(lambda) never simple; K^+ against the product criterion", ["p(3)"], s_kac),
}


def run(lemma_id: str, instances=None, seed=0, weight=None, field=None, echo=None):
    if lemma_id not in LEMMAS:
        raise KeyError(f"unknown lemma id {lemma_id!r}; known: {', '.join(sorted(LEMMAS))}")
    _, default, fn = LEMMAS[lemma_id]
    verdicts = []
    for key in (instances or default):
        key = str(parse_spec(key))
        t0 = time.perf_counter()
        try:
            g = load(key, field)
            ok, detail = fn(g, seed, key=key, weight=weight)
        except la.ExtensionNeeded:
            raise
        except (ValueError, RuntimeError, AssertionError, ArithmeticError) as exc:
            ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
        v = Verdict(key, bool(ok), detail, time.perf_counter() - t0)
        if echo:
            echo(v.line())
        verdicts.append(v)
    return VerificationSuite(lemma_id, seed, verdicts)
