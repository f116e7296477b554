"""Filtration, derivations, restricted cohomology and extensions."""
import random

import pytest
from hypothesis import given, settings, strategies as st

from superq import dercoh, repn, structure
from superq.catalog import DEFAULT_BATTERY, construct
from superq.liealg import subalgebra


@pytest.mark.parametrize("spec", DEFAULT_BATTERY)
def test_battery_quasireductive(spec):
    assert structure.is_quasireductive(construct(spec)).quasireductive


def test_gl22_filtration():
    f = structure.canonical_filtration(construct("gl(2,2)"))
    assert f.dims() == {"Z": [1, 0], "C": [6, 8], "R": [1, 0]}
    assert all(f.checks.values()), f.checks
    core = subalgebra(f.gprime, f.C_prime, "core")
    assert dercoh.h2_restricted(core).dim == 3


def test_non_quasireductive_rejected():
    g = construct("nonab2")       # solvable, not reductive
    assert not structure.is_quasireductive(g).g0_reductive
    with pytest.raises(ValueError):
        structure.canonical_filtration(g)


@pytest.mark.parametrize("spec,kinds", [
    ("psl(2,2)", ["Simple"]), ("kd(sl2)", ["OddAbelian"]),
    ("tilde_kd(sl2)", ["DoubledSimple"]), ("co(3,2)", ["OddAbelian", "OddAbelian"]),
])
def test_minimal_ideal_kinds(spec, kinds):
    f = structure.canonical_filtration(construct(spec))
    assert sorted(r.kind for r in f.ideals) == kinds


@pytest.mark.parametrize("spec,outer", [("psl(2,2)", (3, 0)), ("psq(3)", (0, 1)),
                                        ("kd(sl2)", (1, 1)), ("osp(3,2)", (0, 0))])
def test_outer_derivations(spec, outer):
    assert tuple(dercoh.derivations(construct(spec)).outer_dims) == outer


def test_inner_derivations_are_derivations():
    g = construct("gl(2,1)")
    for i in range(g.dim):
        assert dercoh.derivation_defect(g, g.ad(i), g.parities[i]) == []


def test_non_derivation_detected():
    from superq import exactla as la
    g = construct("gl(1,1)")
    assert dercoh.derivation_defect(g, la.identity(g.dim, g.field), 0)


@pytest.mark.parametrize("spec,dim", [("psl(2,2)", 3), ("psq(3)", 1), ("kd(sl2)", 1),
                                      ("osp(3,2)", 0), ("sl(2,1)", 0), ("D(2,1;a=1)", 0)])
def test_h2r_two_routes(spec, dim):
    g = construct(spec)
    H = dercoh.h2_restricted(g)
    assert H.dim == dim == dercoh.h2_restricted_formula(g)


def test_simple_h2_equals_restricted():
    for spec in ("psl(2,2)", "osp(3,2)", "osp(1,2)", "psq(3)"):
        g = construct(spec)
        assert dercoh.h2_trivial(g, cross_check=False) == (dercoh.h2_restricted(g).dim, 0)


def test_sl2_whitehead():
    assert dercoh.h2_trivial(construct("sl(2)")) == (0, 0)


@settings(max_examples=8)
@given(st.integers(0, 10 ** 6))
def test_random_cocycle_combination_extends(seed):
    g = construct("psl(2,2)")
    H = dercoh.h2_restricted(g, cross_check=False)
    rng = random.Random(seed)
    C = None
    for B in H.cocycle_basis:
        c = rng.randint(-3, 3)
        C = B * c if C is None else C + B * c
    assert dercoh.cocycle_identity_holds(g, C)
    assert not dercoh.central_extension(g, [C], check=False).jacobi_violations()


def test_coboundaries_are_cocycles():
    g = construct("gl(2,1)")
    for i in range(g.dim):
        if g.parities[i] == 0:
            assert dercoh.cocycle_identity_holds(g, dercoh.coboundary(g, g.unit(i)))


def test_psl33_extension():
    g = construct("psl(3,3)")
    H = dercoh.h2_restricted(g, cross_check=False)
    E = dercoh.central_extension(g, H.cocycles)
    assert E.sdim == (17, 18) and E.validate().ok


def test_rigidity():
    assert dercoh.is_rigid(construct("osp(3,2)"))
    assert not dercoh.is_rigid(construct("psl(2,2)"))
    with pytest.raises(ValueError):
        dercoh.is_rigid(construct("gl(2,1)"))


def test_maximality():
    ok, w = dercoh.is_maximal(construct("gl(2,2)"))
    assert ok and w.dim_Z == 1


@pytest.mark.parametrize("spec", ["gl(2,2)", "q(2)", "kd(sl2)", "p(3)"])
def test_adjoint_loewy_bound(spec):
    assert structure.adjoint_loewy(construct(spec)).length <= 3


def test_simple_adjoint_is_simple():
    assert repn.is_simple(repn.adjoint(construct("osp(3,2)"))).simple is True
