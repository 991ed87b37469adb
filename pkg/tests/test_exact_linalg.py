from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sp4endo.exact_linalg import (
    ExactMatrix,
    GaussianRational,
    J4,
    ModeMismatchError,
    NotInAlgebraError,
    cartan_involution_algebra,
    cartan_involution_group,
    commutator,
    form,
    is_in_algebra,
    is_symplectic,
    mat_mul,
    nullspace,
    parse_scalar,
    symplectic_inverse,
)
from sp4endo.structure import E_2E1, H1, H2, REAL_BASIS

I4 = ExactMatrix.identity()
fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)
gaussians = st.builds(GaussianRational, fractions, fractions)


def exact_matrices(elements=fractions, mode="rational"):
    return st.lists(st.lists(elements, min_size=4, max_size=4), min_size=4, max_size=4).map(
        lambda rows: ExactMatrix.from_rows(rows, mode))


def test_identity_times_form():
    assert mat_mul(I4, J4) == J4


def test_form_squares_to_minus_identity():
    assert mat_mul(J4, J4) == -I4
    assert J4.T == -J4


def test_h1_h2_product_is_zero():
    assert mat_mul(H1, H2).is_zero()


def test_commutator_of_diagonal_is_zero():
    assert commutator(H1, H2).is_zero()


def test_mode_mismatch_raises():
    with pytest.raises(ModeMismatchError):
        mat_mul(I4, I4.to_mode("float"))


@pytest.mark.parametrize("g", [I4, J4, ExactMatrix.diag([2, 3, Fraction(1, 2), Fraction(1, 3)])])
def test_symplectic_examples(g):
    assert is_symplectic(g)


def test_not_symplectic():
    assert not is_symplectic(ExactMatrix.diag([2, 3, Fraction(1, 3), Fraction(1, 2)]))


def test_algebra_membership():
    assert is_in_algebra(H1)
    assert is_in_algebra(E_2E1)
    assert not is_in_algebra(I4)


def test_cartan_involution_examples():
    assert cartan_involution_algebra(H1) == -H1
    assert cartan_involution_algebra(E_2E1) == -E_2E1.T
    rot = ExactMatrix.from_rows([[0, 0, 1, 0], [0, 0, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0]])
    assert cartan_involution_algebra(rot) == rot
    with pytest.raises(NotInAlgebraError):
        cartan_involution_algebra(I4)


def test_cartan_involution_properties_on_basis():
    basis = list(REAL_BASIS.values())
    for a in basis:
        assert cartan_involution_algebra(cartan_involution_algebra(a)) == a
        for b in basis:
            lhs = cartan_involution_algebra(commutator(a, b))
            assert lhs == commutator(cartan_involution_algebra(a), cartan_involution_algebra(b))


def test_group_involution_on_torus():
    g = ExactMatrix.diag([2, 3, Fraction(1, 2), Fraction(1, 3)])
    assert cartan_involution_group(g) == g.inverse()


def test_json_round_trip_gaussian():
    m = ExactMatrix.from_rows([[GaussianRational(Fraction(1, 2), -3), 0, 0, 0],
                               [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, GaussianRational(0, 1)]], "gaussian")
    assert ExactMatrix.from_json(m.to_json()) == m


def test_parse_scalar_forms():
    assert parse_scalar("3/4", "rational") == Fraction(3, 4)
    assert parse_scalar("1/2-3i", "gaussian") == GaussianRational(Fraction(1, 2), -3)
    assert parse_scalar("-i", "gaussian") == GaussianRational(0, -1)
    with pytest.raises(ValueError):
        parse_scalar(0.5, "rational")


def test_nullspace_rank():
    rows = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(6)]]
    basis = nullspace(rows, 3)
    assert len(basis) == 2
    for v in basis:
        assert all(sum(r[j] * v[j] for j in range(3)) == 0 for r in rows)


@given(exact_matrices(), exact_matrices(), exact_matrices())
def test_exact_arithmetic_is_associative_and_distributive(a, b, c):
    assert mat_mul(mat_mul(a, b), c) == mat_mul(a, mat_mul(b, c))
    assert mat_mul(a, b + c) == mat_mul(a, b) + mat_mul(a, c)


@given(exact_matrices(gaussians, "gaussian"), exact_matrices(gaussians, "gaussian"),
       exact_matrices(gaussians, "gaussian"))
def test_jacobi_on_random_gaussian_matrices(a, b, c):
    total = (commutator(commutator(a, b), c) + commutator(commutator(b, c), a)
             + commutator(commutator(c, a), b))
    assert total.is_zero()


@given(exact_matrices(), exact_matrices(), fractions)
def test_commutator_bilinear(a, b, s):
    assert commutator(a.scale(s) + b, b) == commutator(a, b).scale(s)


@given(st.lists(st.integers(0, 3), min_size=1, max_size=6), st.lists(fractions, min_size=6, max_size=6))
def test_symplectic_closed_under_product_and_inverse(word, params):
    gens = [
        ExactMatrix.from_rows([[1, 0, params[0], params[1]], [0, 1, params[1], params[2]],
                               [0, 0, 1, 0], [0, 0, 0, 1]]),
        ExactMatrix.diag([2, Fraction(1, 3), Fraction(1, 2), 3]),
        J4,
        ExactMatrix.from_rows([[1, params[3], 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, -params[3], 1]]),
    ]
    g = I4
    for w in word:
        g = mat_mul(g, gens[w])
    assert is_symplectic(g)
    inv = symplectic_inverse(g)
    assert is_symplectic(inv)
    assert mat_mul(g, inv) == I4


def test_float_mode_tolerance():
    g = ExactMatrix.from_rows(np.eye(4) + 1e-14, "float")
    assert is_symplectic(g, tol=1e-12)
    assert not is_symplectic(g, tol=1e-16)
    assert form("float").to_numpy().tolist() == J4.to_numpy().tolist()
