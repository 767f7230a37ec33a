from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qfermions import fock
from qfermions.fock import RepresentationError
from qfermions.qcore import LaurentPoly, basic_fermion

rational_q = st.fractions(min_value=Fraction(1, 10), max_value=1).filter(lambda q: q > 0)
float_q = st.floats(min_value=0.2, max_value=1.0)


def test_algebra_a_closed_form():
    A = fock.solve_recurrence("A", 8).values
    assert A[0].is_zero() and A[1] == LaurentPoly.one()
    for n in range(8):
        assert A[n] == (LaurentPoly.monomial(1 - n) if n % 2 else LaurentPoly.zero())


def test_algebra_b_is_basic_number():
    B = fock.solve_recurrence("B", 20).values
    assert all(B[n] == basic_fermion(n) for n in range(20))


def test_algebra_a_limited_to_two_states():
    fock.build_rep("A", 2)
    with pytest.raises(RepresentationError):
        fock.build_rep("A", 3)


def test_algebra_b_rejects_zero_norm_at_q1():
    fock.build_rep("B", 2, q=1.0)
    with pytest.raises(RepresentationError):
        fock.build_rep("B", 3, q=1.0)


@pytest.mark.parametrize("dim", [0, -1, 2.0])
def test_bad_dim(dim):
    with pytest.raises(ValueError):
        fock.build_rep("B", dim)


def test_exact_matrices_of_a_two_state():
    rep = fock.build_rep("A", 2)
    a = rep.lowering_float(0.5)
    assert np.array_equal(a, [[0, 1], [0, 0]])
    # a a† + q^-1 a† a = q^-N on both states
    N = rep.number_float()
    lhs = a @ a.T + 2 * a.T @ a
    assert np.allclose(lhs, np.diag(0.5 ** -np.diag(N)), rtol=0, atol=1e-15)


@pytest.mark.parametrize("dim", [1, 2, 5, 9])
def test_exact_relations_vanish(dim):
    for name, M in fock.algebra_relations(fock.build_rep("B", dim)).items():
        assert all(e.is_zero() for row in M for e in row), name


@settings(max_examples=40, deadline=None)
@given(float_q, st.integers(1, 12))
def test_float_relations_small(q, dim):
    assert fock.algebra_residual(fock.build_rep("B", dim), q, relative=True) < 1e-12


@given(st.integers(1, 10))
def test_number_operator_relations(dim):
    assert fock.number_operator_relations(fock.build_rep("B", dim)).ok
    assert fock.number_operator_relations(fock.build_rep("A", min(dim, 2))).ok


@given(st.integers(2, 10), rational_q)
def test_b_state_norms_positive_below_one(n, q):
    norm = fock.build_state_norm("B", n).evaluate(q)
    assert (norm == 0) if q == 1 else (norm > 0)


def test_surd_products_stay_exact():
    r = fock.Surd.root(LaurentPoly.monomial(-1) - LaurentPoly.monomial(1))
    assert (r * r).as_poly() == LaurentPoly.monomial(-1) - LaurentPoly.monomial(1)


def test_pv_spectrum_oracle():
    q = 0.6
    E = fock.pv_spectrum(5, q, hbar_omega=2.0)
    want = [(basic_fermion(n).evaluate(q) - basic_fermion(n + 1).evaluate(q)) for n in range(6)]
    assert np.allclose(E, want, rtol=1e-14, atol=0)
    # q = 1 alternates between -1/2 and +1/2
    assert fock.pv_spectrum(3, 1.0) == [-0.5, 0.5, -0.5, 0.5]


@given(st.floats(-50, 50), float_q)
def test_trace_occupation_is_fermi_function(x, q):
    want = 1.0 / (1.0 + np.exp(x))
    assert fock.exact_trace_occupation(q, x) == pytest.approx(want, rel=1e-13, abs=1e-300)


def test_trace_occupation_infinite_limits():
    assert fock.exact_trace_occupation(0.5, float("inf")) == 0.0
    assert fock.exact_trace_occupation(0.5, float("-inf")) == 1.0
    with pytest.raises(ValueError):
        fock.exact_trace_occupation(0.5, float("nan"))
