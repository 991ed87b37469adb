from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from sp4endo import structure as st
from sp4endo.exact_linalg import GaussianRational, commutator, is_in_algebra


def test_bracket_relations_pass():
    report = st.verify_bracket_table()
    assert report["all_passed"]
    names = {r["relation"] for r in report["relations"]}
    assert {"[H',X]=2X", "[H',Xbar]=-2Xbar", "[X,Xbar]=H'", "[Z,X]=0"} <= names


def test_h_prime_x_brackets_directly():
    assert commutator(st.H_PRIME, st.X) == st.X.scale(2)
    assert commutator(st.Z, st.X).is_zero()
    assert commutator(st.H_PRIME, st.X_BAR) == st.X_BAR.scale(-2)


def test_perturbed_catalog_fails():
    bad = dict(st.default_catalog())
    bad["X"] = st.X + st.Z
    report = st.verify_bracket_table(bad)
    assert not report["all_passed"]
    failed = [r["relation"] for r in report["relations"] if not r["passed"]]
    assert "[H',X]=2X" in failed


def test_displayed_conjugate_has_opposite_bracket():
    # the entrywise conjugate of X brackets to -H', hence the sign flip in X_BAR
    assert commutator(st.X, st.X_BAR_PRINTED) == -st.H_PRIME


def test_real_basis_in_algebra_and_dimension():
    assert all(is_in_algebra(m) for m in st.REAL_BASIS.values())
    assert st.dimension() == 10


def test_roots():
    roots = st.all_roots()
    assert len(roots) == 8
    assert {r.weight for r in roots if r.positive and r.compact} == {(1, -1)}
    assert {r.weight for r in roots if r.positive and not r.compact} == {(2, 0), (1, 1), (0, 2)}
    with pytest.raises(ValueError):
        st.Root(1, 0)


def test_rho_stored_and_half_sums():
    assert st.RHO == (2, -1)
    assert st.half_sum(st.POSITIVE_ROOTS) == (2, 1)
    assert st.half_sum({(2, 0), (0, -2), (1, 1), (1, -1)}) == (2, -1)


@pytest.mark.parametrize("w", st.ROOTS)
def test_root_vectors_are_eigenvectors(w):
    vec = st.ROOT_VECTORS[w]
    assert st.eigenvalue(st.Z, vec) == st.root_value(w, (1, 0))
    assert st.eigenvalue(st.H_PRIME, vec) == st.root_value(w, (0, 1))
    d = st.root_decompose(vec)
    assert d.components == {w: 1}
    assert d.cartan_part == (0, 0)


def test_pairing_matrix_values():
    i = GaussianRational(0, 1)
    assert st.pairing_matrix() == [[i, i], [GaussianRational(1), GaussianRational(-1)]]


def test_decompose_h_prime():
    d = st.root_decompose(st.H_PRIME)
    assert d.cartan_part == (0, 1)
    assert d.components == {}


def test_decompose_reconstructs_bracket():
    hc = st.Z.scale(Fraction(3, 2)) + st.H_PRIME.scale(-2)
    for w, vec in st.ROOT_VECTORS.items():
        br = commutator(hc, vec)
        d = st.root_decompose(br)
        assert d.components == {w: st.root_value(w, (Fraction(3, 2), -2))}
        assert d.reconstruct() == br


def test_decompose_rejects_outside_algebra():
    from sp4endo.exact_linalg import ExactMatrix
    with pytest.raises(ValueError):
        st.root_decompose(ExactMatrix.identity("gaussian"))


def test_weyl_group():
    w = st.weyl_group()
    assert len(w) == 8
    assert st.IDENTITY((5, 3)) == (5, 3)
    assert st.LONG_ELEMENT((5, 3)) == (-5, -3)
    assert sum(1 for x in w if x.det == 1) == 4
    for a, b in itertools.product(w, w):
        assert a.compose(b) in w
        assert a.compose(b)((2, 7)) == a(b((2, 7)))
    for x in w:
        assert {x(r) for r in st.ROOTS} == set(st.ROOTS)
        assert x.compose(x.inverse()).is_identity


def test_printed_matrix_report():
    report = st.verify_bracket_table()
    printed = {p["matrix"]: p for p in report["printed_matrix_checks"]}
    assert printed["X_(2, 0)"]["is_root_vector"]
    assert not printed["X_(0, 2)"]["is_root_vector"]
    assert not printed["X_(1, -1)"]["is_root_vector"]


def test_j_images_in_algebra():
    for name, m in st.J_IMAGES.items():
        assert is_in_algebra(m), name


@pytest.mark.slow
def test_jacobi_all_triples():
    passed, total = st.check_jacobi()
    assert passed == total == 816
