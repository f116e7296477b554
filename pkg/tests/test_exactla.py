"""Exact linear algebra and number fields."""
import pytest
from flint import fmpq
from hypothesis import given, strategies as st

from superq import exactla as la
from superq.exactla import ExtensionNeeded, NumberField, QQ

small = st.integers(-6, 6)


def matrices(max_r=5, max_c=5):
    return st.integers(1, max_r).flatmap(
        lambda r: st.integers(1, max_c).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices())
def test_bareiss_agrees_with_flint(rows):
    R1, p1 = la.bareiss_rref(rows, QQ)
    R2, p2 = la.rref(la.mat(rows, QQ, len(rows[0])))
    assert p1 == p2
    assert [list(r) for r in R1] == [la.row(R2, i) for i in range(len(p2))]


@given(matrices(6, 6))
def test_rank_nullity(rows):
    M = la.mat(rows, QQ, len(rows[0]))
    K = la.kernel_basis(M)
    assert la.rank(M) + len(K) == M.ncols()
    for v in K:
        assert not any(la.mat_vec(M, v))


@given(matrices(6, 6))
def test_sparse_nullspace_matches_dense(rows):
    n = len(rows[0])
    sparse = [{j: x for j, x in enumerate(r) if x} for r in rows]
    K = la.nullspace_sparse(sparse, n, QQ, chunk=2)
    dense = la.kernel_basis(la.mat(rows, QQ, n))
    cols = [la.column(K, j) for j in range(K.ncols())]
    assert la.row_space(cols, n) == la.row_space(dense, n)


@given(matrices(4, 4), st.lists(small, min_size=4, max_size=4))
def test_solve_linear(rows, x):
    n = len(rows[0])
    M = la.mat(rows, QQ, n)
    b = la.mat_vec(M, [fmpq(v) for v in x[:n]])
    sol = la.solve_linear(M, b)
    assert sol is not None and la.mat_vec(M, sol) == b


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n),
                                                     min_size=n, max_size=n)))
def test_minimal_polynomial_two_routes(rows):
    M = la.mat(rows, QQ, len(rows))
    mp = la.minimal_polynomial(M)
    assert la.is_zero_matrix(la.poly_eval_matrix(list(mp.coeffs), M))
    assert list(mp.coeffs) == la.krylov_minimal_polynomial(M)


def test_minimal_polynomial_squarefree_flag():
    J = la.mat([[1, 1], [0, 1]], QQ)
    assert not la.minimal_polynomial(J).squarefree
    assert la.minimal_polynomial(la.diag([1, 2], QQ)).squarefree


Q2 = NumberField([-2, 0, 1])


@given(st.lists(st.fractions(max_denominator=9).map(lambda q: fmpq(q.numerator, q.denominator)),
                min_size=2, max_size=2).filter(any))
def test_number_field_inverse(c):
    x = Q2.from_coeffs(c)
    assert x * x.inverse() == Q2.one


def test_sqrt_and_roots():
    s = Q2.sqrt(Q2(2))
    assert s * s == Q2(2)
    assert sorted(str(r) for r in Q2.roots_of([-2, 0, 1])) == sorted(str(r) for r in (s, -s))
    with pytest.raises(ExtensionNeeded) as e:
        QQ.roots_of([-2, 0, 1])
    assert e.value.polynomial == [fmpq(-2), fmpq(0), fmpq(1)]
    assert "t^2 - 2" in str(e.value)


def test_session_field(monkeypatch):
    monkeypatch.delenv("SUPERQ_FIELD", raising=False)
    assert la.session_field().is_rational
    monkeypatch.setenv("SUPERQ_FIELD", "1,0,1")
    F = la.session_field()
    assert F.degree == 2 and F.gen() * F.gen() == F(-1)


@given(st.fractions(max_denominator=50))
def test_q_roundtrip(q):
    x = fmpq(q.numerator, q.denominator)
    assert la.parse_q(la.fmt_q(x)) == x


def test_nf_matrix_rank_and_scalar_json():
    s = Q2.gen()
    M = la.mat([[Q2.one, s], [s, Q2(2)]], Q2, 2)
    assert la.rank(M) == 1
    assert Q2.scalar_from_json(Q2.scalar_to_json(s + 3)) == s + 3
