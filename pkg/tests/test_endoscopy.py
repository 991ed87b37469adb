from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sp4endo import endoscopy as endo
from sp4endo.decompositions import random_symplectic, rotation, sp_inv, torus, unipotent
from sp4endo.exact_linalg import ExactMatrix, is_symplectic, mat_mul
from sp4endo.structure import H1, H2


def test_classify_examples():
    ct = endo.classify(np.diag([2.0, 3.0, 0.5, 1 / 3]))
    assert ct.tag == "hyperbolic" and ct.regular
    assert ct.params == pytest.approx((2.0, 3.0))
    ct = endo.classify(rotation(0.3, 0.7))
    assert ct.tag == "elliptic" and ct.regular
    assert ct.params == pytest.approx((0.3, 0.7))
    assert endo.classify(unipotent(1, 0, 0, 0)).tag == "parabolic"
    assert endo.classify(np.eye(4)).tag == "singular"
    assert endo.classify(rotation(0.3, 0.3)).regular is False


def test_classify_mixed():
    g = rotation(0.5, 0) @ torus(1, 2)
    assert endo.classify(g).tag == "mixed"


@given(st.integers(0, 2**32 - 1), st.sampled_from(["hyp", "ell"]))
def test_classify_conjugation_invariant(seed, kind):
    rng = np.random.default_rng(seed)
    gamma = torus(2.0, 3.0) if kind == "hyp" else rotation(0.3, 1.2)
    h = random_symplectic(rng, length=2, spread=0.3)
    a, b = endo.classify(gamma), endo.classify(h @ gamma @ sp_inv(h))
    assert a.tag == b.tag and a.regular == b.regular
    assert np.allclose(a.params, b.params, atol=1e-6)


def test_centralizer_of_torus_is_cartan():
    basis = endo.centralizer_algebra(endo.rational_torus(2, 3))
    assert len(basis) == 2
    assert set(basis) == {H1, H2}


def test_centralizer_dimensions():
    assert len(endo.centralizer_algebra(ExactMatrix.identity())) == 10
    g = endo.rational_rotation(Fraction(1, 2), Fraction(1, 3))
    assert is_symplectic(g)
    assert len(endo.centralizer_algebra(g)) == 2
    g = endo.rational_rotation(Fraction(1, 2), Fraction(1, 2))
    assert len(endo.centralizer_algebra(g)) == 4


def test_centralizer_needs_exact_input():
    with pytest.raises(TypeError):
        endo.centralizer_algebra(np.eye(4))


def test_torus_kind_commutes_exactly():
    g = endo.rational_rotation(Fraction(1, 2), Fraction(1, 3))
    e = endo.endoscopic_group_of(g)
    assert e.kind == "torus" and e.form == "compact"
    assert e.commutes_with_gamma is True
    for u1, u2 in [(Fraction(2, 5), 7), (Fraction(-1, 9), Fraction(4, 3))]:
        s = endo.rational_rotation(u1, u2)
        assert (mat_mul(s, g) - mat_mul(g, s)).is_zero()


def test_split_torus_kind():
    e = endo.endoscopic_group_of(endo.rational_torus(2, 3))
    assert e.kind == "torus" and e.form == "split" and e.commutes_with_gamma


def test_sl2_kind_and_embedding():
    e = endo.endoscopic_group_of(rotation(0.4, 0.4))
    assert e.kind == "sl2"
    assert e.embed(1, 0, 0, 1) == ExactMatrix.identity()
    assert e.embed(1, 0, 0, 1, sign=-1) == -ExactMatrix.identity()
    with pytest.raises(ValueError):
        e.embed(1, 1, 1, 1)


@given(st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=5), min_size=4, max_size=4))
def test_sl2_images_symplectic_and_closed(vals):
    a, b, c, _ = vals
    if a == 0:
        a = Fraction(1)
    # pick d so that ad - bc = 1
    d = (1 + b * c) / a
    m = endo.sl2_block(a, b, c, d)
    n = endo.sl2_block(d, -b, -c, a)
    assert is_symplectic(m)
    assert mat_mul(m, n) == ExactMatrix.identity()
    assert is_symplectic(mat_mul(m, endo.sl2_block(1, 1, 0, 1)))


def test_singular_input_rejected():
    with pytest.raises(endo.SingularElementError):
        endo.endoscopic_group_of(unipotent(1, 0, 0, 0))
    with pytest.raises(endo.SingularElementError):
        endo.endoscopic_group_of(np.eye(4))


def test_pythagorean_points_on_circle():
    for u in (Fraction(1, 2), Fraction(-3, 7), 5):
        c, s = endo.pythagorean(u)
        assert c * c + s * s == 1
