"""Cartan subalgebras, root decompositions, triangular decompositions."""
import pytest
from hypothesis import given, settings, strategies as st

from superq import rootsys
from superq.catalog import construct

ALLOWED = {(1, 0), (1, 1)}


def allowed(p):
    return p in ALLOWED or p[0] == 0


@pytest.mark.parametrize("spec,h", [("gl(2,1)", (3, 0)), ("q(2)", (2, 2)), ("q(3)", (3, 3)),
                                    ("p(3)", (3, 0)), ("kd(sl2)", (1, 1))])
def test_cartan_dims(spec, h):
    assert rootsys.cartan(construct(spec)).h.sdim == h


@pytest.mark.parametrize("spec", ["gl(2,1)", "osp(3,2)", "q(3)", "p(3)", "G(1,2)", "D(2,1;a=2)",
                                  "tilde_kd(sl2)", "sp(4)"])
def test_root_decomposition_bookkeeping(spec):
    g = construct(spec)
    rd = rootsys.root_decomposition(g)
    assert rd.h.dim + sum(len(v) for v in rd.roots.values()) == g.dim
    for k in ("bookkeeping", "zero_space_is_h", "eigen", "additivity", "even_negation_stable"):
        assert rd.checks[k], k
    assert all(allowed(p) for p in rd.profile.values())


def test_co32_profile_violation():
    rd = rootsys.root_decomposition(construct("co(3,2)"))
    bad = rootsys.profile_violations(rd)
    assert bad and all(rd.profile[a] == (1, 2) for a in bad)


def test_p3_odd_roots_not_symmetric():
    rd = rootsys.root_decomposition(construct("p(3)"))
    assert rd.checks["even_negation_stable"] and not rd.checks["negation_stable"]


@settings(max_examples=10)
@given(st.integers(0, 500), st.sampled_from(["gl(2,1)", "osp(3,2)", "q(2)"]))
def test_triangular_partition(seed, spec):
    g = construct(spec)
    rd = rootsys.root_decomposition(g)
    gam = rootsys.sample_gamma(rd, seed)
    t = rootsys.triangular(g, gam, rd)
    assert len(t.delta_plus) + len(t.delta_minus) == len(rd.roots)
    assert t.n_plus.dim + t.n_minus.dim + rd.h.dim == g.dim
    neg = {tuple(-x for x in a) for a in t.delta_plus}
    assert neg == set(t.delta_minus)


def test_gamma_on_root_rejected():
    g = construct("gl(2,1)")
    rd = rootsys.root_decomposition(g)
    with pytest.raises(ValueError):
        rootsys.triangular(g, [0] * rd.rank, rd)


def test_lattice_is_algebraic_for_rational_battery():
    for spec in ("gl(2,1)", "D(2,1;a=2)", "F(1,3)"):
        assert rootsys.root_lattice_check(rootsys.root_decomposition(construct(spec)))["is_algebraic"]
