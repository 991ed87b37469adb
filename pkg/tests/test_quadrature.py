from __future__ import annotations

import math

import numpy as np
import pytest

from sp4endo.quadrature import (
    QuadratureConfig,
    QuadratureError,
    QuadResult,
    gauss_legendre_fixed,
    integrate,
    integrate_outer,
    tanh_sinh,
)

CFG = QuadratureConfig(abs_tol=1e-13, rel_tol=1e-13)


@pytest.mark.parametrize("rule", ["tanh-sinh", "gauss-legendre-adaptive"])
def test_smooth_integrals(rule):
    cfg = CFG.with_(rule=rule)
    r = integrate(np.exp, 0.0, 1.0, cfg)
    assert r.converged
    assert r.value == pytest.approx(math.e - 1, abs=1e-12)
    r = integrate(lambda x: np.cos(x) ** 2, 0.0, math.pi, cfg)
    assert r.value == pytest.approx(math.pi / 2, abs=1e-12)


def test_tanh_sinh_endpoint_singularity():
    r = tanh_sinh(lambda x: 1 / np.sqrt(x), 0.0, 1.0, CFG)
    assert r.value == pytest.approx(2.0, abs=1e-10)
    r = tanh_sinh(lambda x: np.log(x), 0.0, 1.0, CFG)
    assert r.value == pytest.approx(-1.0, abs=1e-10)


def test_gauss_legendre_fixed_exact_for_polynomials():
    v = gauss_legendre_fixed(lambda x: x ** 7 - 3 * x ** 2, -1.0, 2.0, 4)
    exact = (2 ** 8 - 1) / 8 - (8 + 1)
    assert v == pytest.approx(exact, abs=1e-12)


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(rule="simpson")
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=0)
    with pytest.raises(ValueError):
        QuadratureConfig(max_depth=0)


def test_threads_not_in_config_dict():
    assert "threads" not in QuadratureConfig(threads=3).to_dict()


def test_require_raises_with_estimate():
    with pytest.raises(QuadratureError) as e:
        QuadResult(1.5, 0.1, False, 10).require()
    assert e.value.value == 1.5


def test_non_convergence_reported():
    r = integrate(lambda x: np.sin(1 / x), 1e-6, 1.0, QuadratureConfig(max_depth=2, abs_tol=1e-14))
    assert not r.converged
    assert math.isfinite(r.value)


def test_outer_integral_independent_of_threads():
    def inner(x):
        return integrate(lambda y: np.exp(-x * y * y), 0.0, 1.0, CFG)

    one = integrate_outer(inner, 0.0, 2.0, CFG.with_(threads=1), parallel=True)
    four = integrate_outer(inner, 0.0, 2.0, CFG.with_(threads=4), parallel=True)
    assert one.value == four.value
    assert one.error == four.error
