"""One-dimensional adaptive quadrature used by the orbital-integral layer.

Two rules are provided:

* ``tanh-sinh``: double-exponential rule with level-wise step halving.  It
  tolerates algebraic endpoint singularities, which is what iterated integrals
  over ellipsoidal supports produce.
* ``gauss-legendre-adaptive``: recursive bisection with a fixed Gauss-Legendre
  panel compared against its two halves.

Both accumulate with ``math.fsum`` over a fixed node order, so results do not
depend on how many threads evaluated the integrand.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable

import numpy as np

RULES = ("tanh-sinh", "gauss-legendre-adaptive")
THREADS_ENV = "SP4ENDO_THREADS"

_TMAX = 4.5
_GL_ORDER = 10


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and rule for each one-dimensional panel.

    ``max_depth`` bounds the number of step halvings (tanh-sinh) or the
    bisection depth (Gauss-Legendre).  ``threads`` only affects the outermost
    level of an iterated integral.
    """

    rule: str = "tanh-sinh"
    abs_tol: float = 1e-8
    rel_tol: float = 1e-10
    max_depth: int = 18
    threads: int = field(default_factory=default_threads)

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}; expected one of {RULES}")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")

    def with_(self, **kw) -> "QuadratureConfig":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        # threads is left out on purpose: it must not change any artifact
        return {"rule": self.rule, "abs_tol": self.abs_tol, "rel_tol": self.rel_tol,
                "max_depth": self.max_depth}


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    converged: bool
    evaluations: int

    def require(self) -> "QuadResult":
        if not self.converged:
            raise QuadratureError(self.value, self.error)
        return self

    def __float__(self) -> float:
        return float(self.value)


class QuadratureError(ArithmeticError):
    """Raised when a panel fails to converge; carries the best estimate."""

    def __init__(self, value: float, error: float):
        super().__init__(f"quadrature did not converge: estimate {value!r}, error bound {error!r}")
        self.value = value
        self.error = error


VectorIntegrand = Callable[[np.ndarray], np.ndarray]


def _target(cfg: QuadratureConfig, value: float) -> float:
    return max(cfg.abs_tol, cfg.rel_tol * abs(value))


# -- tanh-sinh -----------------------------------------------------------------

@lru_cache(maxsize=64)
def _ts_nodes(h: float, odd_only: bool) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Abscissae ``t``, offsets ``1 - tanh(u)`` and weights on ``[-1, 1]`` for ``t >= 0``."""
    n = int(_TMAX / h)
    k = np.arange(1, n + 1, 2) if odd_only else np.arange(0, n + 1)
    t = k * h
    u = 0.5 * math.pi * np.sinh(t)
    # 1 - tanh(u) without cancellation
    off = 2.0 / (np.exp(2.0 * u) + 1.0)
    w = 0.5 * math.pi * np.cosh(t) / np.cosh(u) ** 2
    return t, off, w


def _ts_level_sum(fn: VectorIntegrand, a: float, b: float, h: float, odd_only: bool) -> tuple[float, int]:
    c, r = 0.5 * (a + b), 0.5 * (b - a)
    t, off, w = _ts_nodes(h, odd_only)
    right = b - r * off
    left = a + r * off
    pos = t > 0
    # t = 0 (present only on the first level) is counted once
    mid_x, mid_w = ([c], w[:1]) if not odd_only else ([], [])
    xs = np.concatenate([left[pos][::-1], mid_x, right[pos]])
    ws = np.concatenate([w[pos][::-1], mid_w, w[pos]])
    keep = (xs > a) & (xs < b) & (ws > 0)
    xs, ws = xs[keep], ws[keep]
    vals = np.asarray(fn(xs), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("integrand returned a non-finite value")
    return math.fsum(r * ws * vals), xs.size


def tanh_sinh(fn: VectorIntegrand, a: float, b: float, cfg: QuadratureConfig,
              min_levels: int = 3) -> QuadResult:
    if b <= a:
        return QuadResult(0.0, 0.0, True, 0)
    h = 1.0
    s, n = _ts_level_sum(fn, a, b, h, odd_only=False)
    est = h * s
    evals = n
    err = math.inf
    for level in range(1, cfg.max_depth + 1):
        h *= 0.5
        s_new, n = _ts_level_sum(fn, a, b, h, odd_only=True)
        evals += n
        s += s_new
        new = h * s
        err = abs(new - est)
        est = new
        if level >= min_levels - 1 and err <= _target(cfg, est):
            return QuadResult(est, err, True, evals)
    return QuadResult(est, err, False, evals)


# -- adaptive Gauss-Legendre ---------------------------------------------------

@lru_cache(maxsize=32)
def gauss_legendre_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


_GL_X, _GL_W = gauss_legendre_nodes(_GL_ORDER)


def gauss_legendre_fixed(fn: VectorIntegrand, a: float, b: float, order: int) -> float:
    x, w = gauss_legendre_nodes(order)
    c, r = 0.5 * (a + b), 0.5 * (b - a)
    return math.fsum(r * w * np.asarray(fn(c + r * x), dtype=float))


def _gl_panel(fn, a, b):
    c, r = 0.5 * (a + b), 0.5 * (b - a)
    return math.fsum(r * _GL_W * np.asarray(fn(c + r * _GL_X), dtype=float))


def gauss_legendre_adaptive(fn: VectorIntegrand, a: float, b: float, cfg: QuadratureConfig) -> QuadResult:
    if b <= a:
        return QuadResult(0.0, 0.0, True, 0)
    whole = _gl_panel(fn, a, b)
    evals = _GL_ORDER
    accepted: list[tuple[float, float, float]] = []  # (left endpoint, value, error)
    stack = [(a, b, whole, 0)]
    converged = True
    scale = abs(whole)
    while stack:
        lo, hi, val, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left, right = _gl_panel(fn, lo, mid), _gl_panel(fn, mid, hi)
        evals += 2 * _GL_ORDER
        refined = left + right
        err = abs(refined - val)
        share = (hi - lo) / (b - a)
        if err <= _target(cfg, scale) * share or depth >= cfg.max_depth:
            if err > _target(cfg, scale) * share:
                converged = False
            accepted.append((lo, refined, err))
        else:
            stack.append((mid, hi, right, depth + 1))
            stack.append((lo, mid, left, depth + 1))
    accepted.sort()
    value = math.fsum(v for _, v, _ in accepted)
    error = math.fsum(e for _, _, e in accepted)
    return QuadResult(value, error, converged, evals)


def integrate(fn: VectorIntegrand, a: float, b: float, cfg: QuadratureConfig) -> QuadResult:
    """Integrate a vectorised integrand over ``[a, b]`` with the configured rule."""
    if cfg.rule == "tanh-sinh":
        return tanh_sinh(fn, a, b, cfg)
    return gauss_legendre_adaptive(fn, a, b, cfg)


# -- iterated integrals --------------------------------------------------------

def lift(inner: Callable[[float], QuadResult], cfg: QuadratureConfig, parallel: bool = False):
    """Turn a scalar-to-QuadResult map into a vectorised integrand.

    Inner error bounds and convergence flags are recorded in the returned
    collector so that the outer level can report them.  With ``parallel`` the
    nodes are evaluated by a thread pool; the results are consumed in node order.
    """
    collector = {"max_err": 0.0, "converged": True, "evaluations": 0}

    def fn(xs: np.ndarray) -> np.ndarray:
        if parallel and cfg.threads > 1 and xs.size > 1:
            with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
                results = list(pool.map(inner, [float(x) for x in xs]))
        else:
            results = [inner(float(x)) for x in xs]
        for r in results:
            collector["max_err"] = max(collector["max_err"], r.error)
            collector["converged"] &= r.converged
            collector["evaluations"] += r.evaluations
        return np.array([r.value for r in results])

    return fn, collector


def integrate_outer(inner: Callable[[float], QuadResult], a: float, b: float,
                    cfg: QuadratureConfig, parallel: bool = False) -> QuadResult:
    """Integrate ``x -> inner(x).value`` and fold in the inner error bounds."""
    fn, col = lift(inner, cfg, parallel)
    res = integrate(fn, a, b, cfg)
    err = res.error + col["max_err"] * (b - a)
    return QuadResult(res.value, err, res.converged and col["converged"],
                      res.evaluations + col["evaluations"])
