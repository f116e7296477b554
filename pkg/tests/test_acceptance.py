"""Acceptance criteria, one printed PASS/FAIL line each.

Run alone with ``python tests/test_acceptance.py`` or inside the full suite;
the lines are written past pytest's capture so they land in the log.
Expected values are the lemma statements and counts from the definitions.
"""
import subprocess
import sys
import time

import pytest

from superq import dercoh, exactla as la, repn, rootsys, structure
from superq.catalog import DEFAULT_BATTERY, construct, d21a_raw, parse_spec
from superq.liealg import derived, graded_subspace, subalgebra

LINES = []


@pytest.fixture
def say(capsys):
    def emit(n, ok, text, seconds=None, budget=None):
        t = "" if seconds is None else f" [{seconds:.1f}s / {budget}s]"
        line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {text}{t}"
        LINES.append(line)
        with capsys.disabled():
            print("\n" + line, flush=True)
    return emit


class Clock:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.s = time.perf_counter() - self.t0


# ---------------------------------------------------------------------------


def test_c01_construction_soundness(say):
    with Clock() as c:
        bad = [s for s in DEFAULT_BATTERY if not construct(s).validate().ok]
        try:
            parse_spec("D(2,1;1:1:1)")
            rejected = False
        except ValueError:
            rejected = True
        raw = d21a_raw(1, 1, 1).jacobi_violations()
    ok = not bad and rejected and bool(raw) and c.s < 10
    say(1, ok, f"{len(DEFAULT_BATTERY)} battery algebras clean, failures={bad}; "
               f"D(2,1;1:1:1) rejected={rejected}, raw build has {len(raw)} Jacobi violations",
        c.s, 10)
    assert ok


DIMS = {"gl(2,1)": (5, 4), "osp(1,2)": (3, 2), "p(3)": (9, 9), "sp(3)": (8, 9),
        "D(2,1;a=2)": (9, 8), "G(1,2)": (17, 14), "F(1,3)": (24, 16), "kd(sl2)": (3, 3)}


def test_c02_dimension_table(say):
    with Clock() as c:
        got = {s: construct(s).sdim for s in DIMS}
    wrong = {s: got[s] for s in DIMS if got[s] != DIMS[s]}
    ok = not wrong and c.s < 1
    say(2, ok, f"{len(DIMS)} dimensions exact, mismatches={wrong}", c.s, 1)
    assert ok


def _trace_kernel(g, fn):
    """Subspace of g where a linear functional of the realization vanishes."""
    R = g.realization
    vals = [g.field(fn(R.mats[i])) for i in range(g.dim)]
    rows = la.kernel_basis(la.mat([vals], g.field, g.dim))
    return graded_subspace(g, rows)


def test_c03_derived_subalgebras(say):
    with Clock() as c:
        q3, p3 = construct("q(3)"), construct("p(3)")
        sq = _trace_kernel(q3, q3.realization.otr)
        psl = _trace_kernel(p3, p3.realization.str)
        a = derived(q3) == sq
        b = derived(p3) == psl
        dims_ok = sq.sdim == construct("sq(3)").sdim
    ok = a and b and dims_ok and c.s < 5
    say(3, ok, f"[q3,q3]=sq(3) {a} (dims {sq.sdim}); [p3,p3]=p(3)∩sl(3,3) {b} (dims {psl.sdim})",
        c.s, 5)
    assert ok


DER = {"psl(3,3)": ((17, 18), (1, 0)), "psq(3)": (None, (0, 1)),
       "psl(2,2)": (None, (3, 0)), "kd(sl2)": (None, (1, 1))}


def test_c04_derivations(say):
    with Clock() as c:
        got = {s: dercoh.derivations(construct(s), witness=False) for s in DER}
    bad = []
    for s, (der, outer) in DER.items():
        D = got[s]
        if (der is not None and D.sdim != der) or tuple(D.outer_dims) != outer:
            bad.append((s, D.sdim, D.outer_dims))
    ok = not bad and c.s < 60
    summary = ", ".join(f"{s}: D={tuple(got[s].outer_dims)}" for s in DER)
    say(4, ok, f"Der(psl(3,3))={got['psl(3,3)'].sdim}; {summary}; mismatches={bad}", c.s, 60)
    assert ok


H2R = {"psl(2,2)": 3, "psl(3,3)": 1, "psq(3)": 1, "sp(4)": 1, "kd(sl2)": 1,
       "osp(3,2)": 0, "sl(2,1)": 0, "D(2,1;a=1)": 0, "G(1,2)": 0, "F(1,3)": 0}


def test_c05_cohomology(say):
    with Clock() as c:
        bad = []
        for s, want in H2R.items():
            g = construct(s)
            H = dercoh.h2_restricted(g)
            f = dercoh.h2_restricted_formula(g)
            if not H.dim == f == want:
                bad.append((s, H.dim, f, want))
        simple_bad, n_simple = [], 0
        for s in DEFAULT_BATTERY:
            g = construct(s)
            if repn.is_simple(repn.adjoint(g)).simple is not True:
                continue
            n_simple += 1
            h2 = dercoh.h2_trivial(g, cross_check=False)
            hr = dercoh.h2_restricted(g, cross_check=False).dim
            if h2 != (hr, 0):
                simple_bad.append((s, h2, hr))
    ok = not bad and not simple_bad and c.s < 120
    say(5, ok, f"H^2_r table + formula on {len(H2R)} algebras, mismatches={bad}; "
               f"H^2 = (H^2_r|0) on {n_simple} simple battery members, failures={simple_bad}",
        c.s, 120)
    assert ok


def test_c06_extension_roundtrip(say):
    with Clock() as c:
        g = construct("psl(3,3)")
        H = dercoh.h2_restricted(g, cross_check=False)
        E = dercoh.central_extension(g, H.cocycles)
        ext_ok = E.sdim == (17, 18) and not E.jacobi_violations()
        f = structure.canonical_filtration(construct("gl(2,2)"))
        core = subalgebra(f.gprime, f.C_prime, "core")
        core_ok = (core.sdim == construct("psl(2,2)").sdim
                   and repn.is_simple(repn.adjoint(core)).simple is True
                   and [r.kind for r in f.ideals] == ["Simple"])
        filt_ok = f.dims() == {"Z": [1, 0], "C": [6, 8], "R": [1, 0]} and f.checks["R_closed"]
    ok = ext_ok and core_ok and filt_ok and c.s < 60
    say(6, ok, f"extension dims {E.sdim} Jacobi-clean {ext_ok}; gl(2,2) filtration {f.dims()}, "
               f"core simple (6|8) {core_ok}, R closed {f.checks['R_closed']}", c.s, 60)
    assert ok


def test_c07_loewy_bound(say):
    with Clock() as c:
        lengths = {}
        for s in DEFAULT_BATTERY:
            g = construct(s)
            if structure.is_quasireductive(g).quasireductive:
                lengths[s] = structure.adjoint_loewy(g).length
    pattern = {k: sorted(s for s, v in lengths.items() if v == k) for k in (1, 2, 3)}
    ok = all(v <= 3 for v in lengths.values()) and c.s < 120
    say(7, ok, f"max length {max(lengths.values())} over {len(lengths)} algebras; "
               f"length 3: {pattern[3]}; length 2: {pattern[2]}", c.s, 120)
    assert ok


def _profiles():
    out = {}
    for s in DEFAULT_BATTERY:
        g = construct(s)
        if structure.is_quasireductive(g).quasireductive:
            out[s] = rootsys.root_decomposition(g)
    return out


@pytest.mark.xfail(strict=True, reason="co(3,2) has a (1|2) root space; see notes")
def test_c08_root_profiles(say):
    with Clock() as c:
        rds = _profiles()
    violators = {s: sorted({rd.profile[a] for a in rootsys.profile_violations(rd)})
                 for s, rd in rds.items() if rootsys.profile_violations(rd)}
    books = all(rd.checks["bookkeeping"] for rd in rds.values())
    ok = not violators and books and c.s < 30
    say(8, ok, f"bookkeeping exact on all {len(rds)}: {books}; profile violators {violators} "
               f"(so(3) acts on the odd part by its standard = adjoint module)", c.s, 30)
    assert ok


def test_c08_only_co32_violates():
    rds = _profiles()
    assert all(rd.checks["bookkeeping"] for rd in rds.values())
    assert [s for s, rd in rds.items() if rootsys.profile_violations(rd)] == ["co(3,2)"]


REPN = ["gl(1,1)", "q(2)", "osp(1,2)", "p(3)"]


def test_c09_representation_suite(say):
    from superq.verify import g0_simples
    rows = []
    with Clock() as c:
        for s in REPN:
            g = construct(s)
            _, T = repn.twist_module(g)
            for S in g0_simples(g, budget=32):
                I = repn.ind_even(S, g)
                C = repn.ind_even(S, g, "coind")
                dim_ok = I.dim == 2 ** len(g.odd_indices) * S.dim
                rec = repn.reciprocity_map(g, S)
                proj = repn.split_test(I, "projective").split
                inj = repn.split_test(C, "injective").split
                CT = repn.ind_even(repn.tensor(S, repn.restrict_even(T)), g, "coind")
                a = repn.summand_dims(repn.decompose_summands(I))
                b = repn.summand_dims(repn.decompose_summands(CT))
                rows.append((s, S.dim, dim_ok, rec.ok, proj, inj, a == b))
    bad = [r for r in rows if not all(r[2:])]
    ok = not bad and c.s < 300
    say(9, ok, f"{len(rows)} (algebra, S) pairs: dims, invertible intertwiner, projective, "
               f"injective and summand multisets all hold; failures={bad}", c.s, 300)
    assert ok


def _simple_modules_for_weights():
    mods = []
    for s in ("gl(2,1)", "q(2)", "osp(1,2)", "osp(3,2)", "sl(2,2)"):
        g = construct(s)
        for name, M in (("standard", repn.standard(g)), ("adjoint", repn.adjoint(g))):
            if repn.is_simple(M).simple is True:
                mods.append((f"{s} {name}", g, M))
    g = construct("osp(1,2)")
    g0, _ = repn.even_part(g)
    for P in repn.decompose_summands(repn.ind_even(repn.trivial(g0), g)):
        if repn.is_simple(P).simple is True:
            mods.append((f"osp(1,2) Ind summand {P.sdim}", g, P))
    for lam in ((2, 1, 0), (3, 1, 0)):
        K = repn.kac_module_p(3, lam, "+")
        mods.append((f"p(3) K+{lam}", K.module.algebra, K.module))
    return mods


CARTAN_WEIGHTS = {"q(2)": [(0, 0), (1, 0), (1, -1), (3, -3)],
                  "q(3)": [(1, 0, 0), (1, -1, 0), (1, -1, 1)],
                  "q(4)": [(1, -1, 1, -1)]}


def _cartan_modules():
    from superq.verify import over_field
    out = [(s, lam, repn.cartan_module(construct(s), lam))
           for s, lams in CARTAN_WEIGHTS.items() for lam in lams]
    # (2, -1) needs sqrt(2): run it over Q(sqrt 2)
    g = over_field(construct("q(2)"), la.NumberField([-2, 0, 1]))
    out.append(("q(2)/Q(sqrt2)", (2, -1), repn.cartan_module(g, (2, -1))))
    return out


def _criterion10():
    with Clock() as c:
        hw_bad, n = [], 0
        for label, g, M in _simple_modules_for_weights():
            rd = rootsys.root_decomposition(g)
            tri = rootsys.triangular(g, rootsys.sample_gamma(rd), rd)
            hw = repn.highest_weight(M, tri, rd, simple=True)
            n += 1
            if not all(hw.checks.values()):
                hw_bad.append((label, hw.checks))
        cms = _cartan_modules()
    return dict(seconds=c.s, n=n, hw_bad=hw_bad, cms=cms,
                simple=all(cm.checks["simple"] for *_, cm in cms),
                rank_ok=all(cm.checks["pi_matches_rank"] for *_, cm in cms),
                codim_bad=[(s, lam, cm.rank, cm.codim) for s, lam, cm in cms
                           if not cm.checks["pi_matches_u1_codim"]])


def test_c10_highest_weights_simplicity_rank_criterion():
    r = _criterion10()
    assert not r["hw_bad"] and r["simple"] and r["rank_ok"] and r["seconds"] < 60


@pytest.mark.xfail(strict=True, reason="dim h1/u1 parity disagrees with Pi C = C when rank = 2, 3 mod 4")
def test_c10_highest_weights_and_cartan_modules(say):
    r = _criterion10()
    ok = not r["hw_bad"] and r["simple"] and not r["codim_bad"] and r["seconds"] < 60
    say(10, ok, f"{r['n']} simple modules with unique h-simple highest weight, failures={r['hw_bad']}; "
                f"{len(r['cms'])} C_lambda all simple={r['simple']}; printed Pi-criterion "
                f"(dim h1/u1 odd) fails on (alg, lambda, rank, codim) {r['codim_bad']}; "
                f"the rank criterion (rank of omega odd) holds on all={r['rank_ok']}",
        r["seconds"], 60)
    assert ok


KMINUS = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1), (0, 0, -1)]
KPLUS = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1), (2, 0, 0), (2, 1, 0), (3, 1, 0)]


def test_c11_kac_modules(say):
    with Clock() as c:
        g = construct("p(3)")
        minus = []
        for lam in KMINUS:
            K = repn.kac_module_p(3, lam, "-", g)
            r = repn.is_simple(K.module)
            witness = r.submodule is not None and 0 < len(r.submodule) < K.module.dim \
                and repn.is_submodule(K.module, r.submodule)
            minus.append((lam, r.simple, witness))
        plus = []
        for lam in KPLUS:
            K = repn.kac_module_p(3, lam, "+", g)
            s = repn.is_simple(K.module).simple is True
            lt, le = repn.kac_simplicity_products(lam)
            plus.append((lam, s, lt != 0, le != 0))
    minus_ok = all(simple is False and w for _, simple, w in minus)
    lt_ok = all(s == a for _, s, a, _ in plus)
    le_mismatch = [lam for lam, s, _, b in plus if s != b]
    ok = minus_ok and lt_ok and c.s < 300
    say(11, ok, f"K-(lambda) non-simple with submodule witness for {len(minus)} weights: {minus_ok}; "
                f"K+ simple set {[lam for lam, s, *_ in plus if s]} matches prod over i<j: {lt_ok}; "
                f"FLAG: prod over i<=j is identically 0 and disagrees at {le_mismatch}", c.s, 300)
    assert ok


def test_c12_determinism(say, tmp_path):
    cmd = [sys.executable, "-m", "superq.cli", "report", "gl(2,1)", "--seed", "0"]
    with Clock() as c:
        a = subprocess.run(cmd, capture_output=True, check=True).stdout
        b = subprocess.run(cmd, capture_output=True, check=True).stdout
    ok = a == b and len(a) > 0 and c.s < 5
    say(12, ok, f"two report runs byte-identical ({len(a)} bytes): {a == b}", c.s, 5)
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
