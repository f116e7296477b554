"""Construction, validation and serialization of the algebra families."""
import json

import pytest
from flint import fmpq
from hypothesis import given, strategies as st

from superq.catalog import DEFAULT_BATTERY, FamilySpec, construct, parse_spec, d21a_raw
from superq.liealg import SuperLieAlgebra, sgn

# (even|odd) dimensions by counting from the definitions
DIMS = {
    "gl(2,1)": (5, 4), "osp(1,2)": (3, 2), "p(3)": (9, 9), "sp(3)": (8, 9),
    "D(2,1;a=2)": (9, 8), "G(1,2)": (17, 14), "F(1,3)": (24, 16), "kd(sl2)": (3, 3),
    "gl(2,2)": (8, 8), "sl(2,2)": (7, 8), "psl(2,2)": (6, 8), "psl(3,3)": (16, 18),
    "q(2)": (4, 4), "q(3)": (9, 9), "psq(3)": (8, 8), "osp(3,2)": (6, 6),
    "gl(1,1)": (2, 2),
}


@pytest.mark.parametrize("spec,dims", sorted(DIMS.items()))
def test_dimensions(spec, dims):
    assert construct(spec).sdim == dims


@pytest.mark.parametrize("spec", DEFAULT_BATTERY)
def test_battery_validates(spec):
    rep = construct(spec).validate()
    assert rep.ok, rep.summary()


def test_d21a_sum_condition():
    with pytest.raises(ValueError):
        parse_spec("D(2,1;1:1:1)")
    bad = d21a_raw(fmpq(1), fmpq(1), fmpq(1))
    assert bad.jacobi_violations()
    good = d21a_raw(fmpq(1), fmpq(2), fmpq(-3))
    assert good.validate().ok


@pytest.mark.parametrize("text", ["gl(2,1)", "osp(3,2)", "D(2,1;a=-3)", "kd(sl2)",
                                  "a(2,1,1)", "G(1,2)", "psl(3,3)", "hat_sp(4)"])
def test_spec_roundtrip(text):
    s = parse_spec(text)
    assert str(parse_spec(str(s))) == str(s)
    assert FamilySpec.from_json(json.loads(json.dumps(s.to_json()))).to_json() == s.to_json()


@pytest.mark.parametrize("text", ["osp(", "psl(2,3)", "q(0)", "kd()", "nosuch(2)", "gl(a)"])
def test_spec_rejects(text):
    with pytest.raises(ValueError):
        construct(text)


@pytest.mark.parametrize("spec", ["gl(2,1)", "q(2)", "p(3)", "D(2,1;a=2)", "kd(sl2)"])
def test_json_roundtrip(spec):
    g = construct(spec)
    h = SuperLieAlgebra.from_json(json.loads(g.dumps()))
    assert h.dumps() == g.dumps()
    assert h.validate().ok


def test_loose_read_tolerates_both_halves_and_order():
    g = construct("gl(1,1)")
    d = g.to_json()
    extra = []
    for i, j, row in d["brackets"]:
        if i != j:
            s = -sgn(g.parities[i], g.parities[j])
            extra.append([j, i, [[k, str(fmpq(s) * fmpq(*map(int, c.split("/"))))] for k, c in row]])
    d["brackets"] = list(reversed(d["brackets"])) + extra
    h = SuperLieAlgebra.from_json(d)
    assert h.validate().ok and h.dumps() == g.dumps()


def test_antisymmetry_violation_reported():
    g = construct("gl(1,1)")
    d = g.to_json()
    i, j, row = next(r for r in d["brackets"] if r[0] != r[1] and r[2])
    d["brackets"].append([j, i, row])          # wrong sign for this pair
    rep = SuperLieAlgebra.from_json(d).validate()
    assert not rep.ok and rep.antisymmetry


def _homog(g, coeffs, parity):
    v = g.zero()
    idx = g.even_indices if parity == 0 else g.odd_indices
    for i, c in zip(idx, coeffs):
        v[i] = g.field(c)
    return v


coef = st.lists(st.integers(-3, 3), min_size=30, max_size=30)


@given(st.sampled_from(["gl(2,1)", "q(2)", "p(3)", "osp(3,2)", "D(2,1;a=2)", "tilde_kd(sl2)"]),
       st.tuples(st.integers(0, 1), st.integers(0, 1), st.integers(0, 1)), coef, coef, coef)
def test_super_jacobi_on_random_elements(spec, pars, a, b, c):
    g = construct(spec)
    x, y, z = (_homog(g, v, p) for v, p in zip((a, b, c), pars))
    px, py, pz = pars
    br = g.bracket
    lhs = br(x, br(y, z))
    rhs = [u + sgn(px, py) * w for u, w in zip(br(br(x, y), z), br(y, br(x, z)))]
    assert lhs == rhs


@given(st.sampled_from(["gl(2,2)", "psq(3)", "kd(sl2)"]),
       st.integers(0, 1), st.integers(0, 1), coef, coef)
def test_super_antisymmetry_on_random_elements(spec, px, py, a, b):
    g = construct(spec)
    x, y = _homog(g, a, px), _homog(g, b, py)
    assert g.bracket(x, y) == [-sgn(px, py) * t for t in g.bracket(y, x)]
