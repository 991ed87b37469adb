"""Brute-force reference computations used to cross-check the quadrature layer.

These deliberately share no support bounds or closed forms with
:mod:`sp4endo.orbital`: the integrand is built from generic batched matrix
products, and the integration box comes from a finite-difference fit of the
squared norm.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial import Polynomial

from .decompositions import J
from .orbital import TestFunction


def _unipotent_batch(x1, x2, x3, x4) -> np.ndarray:
    """``n(x) = [[I, S], [0, I]] diag(N, N^{-T})`` for flat coordinate arrays."""
    n = x1.size
    left = np.broadcast_to(np.eye(4), (n, 4, 4)).copy()
    left[:, 0, 2] = x1
    left[:, 0, 3] = x2
    left[:, 1, 2] = x2
    left[:, 1, 3] = x3
    right = np.broadcast_to(np.eye(4), (n, 4, 4)).copy()
    right[:, 0, 1] = x4
    right[:, 3, 2] = -x4
    return left @ right


def conjugated_values(a1: float, a2: float, f: TestFunction, pts: np.ndarray) -> np.ndarray:
    """``f(u^{-1} gamma u)`` for rows of ``pts``, via ``u^{-1} = -J u^T J``."""
    gamma = np.diag([a1, a2, 1 / a1, 1 / a2])
    u = _unipotent_batch(*pts.T)
    u_inv = -J @ np.swapaxes(u, 1, 2) @ J
    return f(u_inv @ gamma @ u)


def _entry_box(a1: float, a2: float, radius: float) -> np.ndarray:
    """Loose box from ``|entry| <= R``, read off entry by entry from the product."""
    r = radius
    x4 = r / abs(a1 - a2)
    x3 = r / abs(a2 - 1 / a2)
    x2 = (r + x4 * r) / min(abs(a2 - 1 / a1), abs(a1 - 1 / a2))
    x1 = (r + 2 * x4 * r + x4 * x4 * r + x4 * (r + x4 * r)) / abs(a1 - 1 / a1)
    return np.array([[-x1, x1], [-x2, x2], [-x3, x3], [-x4, x4]])


def _grid(box: np.ndarray, n: int) -> tuple[list[np.ndarray], float]:
    axes, vol = [], 1.0
    for lo, hi in box:
        h = (hi - lo) / n
        axes.append(lo + h * (np.arange(n) + 0.5))
        vol *= h
    return axes, vol


def _norm2(a1, a2, pts: np.ndarray) -> np.ndarray:
    gamma = np.diag([a1, a2, 1 / a1, 1 / a2])
    u = _unipotent_batch(*pts.T)
    g = -J @ np.swapaxes(u, 1, 2) @ J @ gamma @ u
    return np.sum(g * g, axis=(1, 2))


def _fitted_box(a1: float, a2: float, radius: float, samples: int = 4001) -> np.ndarray:
    """Support box from a finite-difference quadratic fit in ``(x1, x2, x3)`` per ``x4`` slice.

    For fixed ``x4`` the squared norm is a quadratic polynomial in the other
    three coordinates, so second differences with unit step recover it up to
    rounding.  The box is padded by 2% and by one ``x4`` sampling step.
    """
    r2 = radius ** 2
    x4_loose = _entry_box(a1, a2, radius)[3, 1]
    x4s = np.linspace(-x4_loose, x4_loose, samples)
    e = np.eye(3)
    lo, hi = np.full(4, np.inf), np.full(4, -np.inf)
    for x4 in x4s:
        probes = [np.zeros(3)] + [s * e[i] for i in range(3) for s in (1, -1)]
        probes += [e[i] + e[j] for i in range(3) for j in range(i + 1, 3)]
        vals = _norm2(a1, a2, np.column_stack([np.array(probes), np.full(len(probes), x4)]))
        g0, plus, minus = vals[0], vals[1:7:2], vals[2:7:2]
        b = 0.5 * (plus - minus)
        Q = np.diag(0.5 * (plus + minus) - g0)
        k = 7
        for i in range(3):
            for j in range(i + 1, 3):
                Q[i, j] = Q[j, i] = 0.5 * (vals[k] - plus[i] - plus[j] + g0)
                k += 1
        q_inv = np.linalg.inv(Q)
        centre = -0.5 * q_inv @ b
        slack = r2 - (g0 - 0.25 * b @ q_inv @ b)
        if slack <= 0:
            continue
        half = np.sqrt(slack * np.diag(q_inv))
        lo[:3] = np.minimum(lo[:3], centre - half)
        hi[:3] = np.maximum(hi[:3], centre + half)
        lo[3], hi[3] = min(lo[3], x4), max(hi[3], x4)
    if not np.all(np.isfinite(lo)):
        return np.zeros((4, 2))
    step = x4s[1] - x4s[0]
    lo[3] -= step
    hi[3] += step
    pad = 0.02 * (hi - lo)
    return np.column_stack([lo - pad, hi + pad])


def lattice_orbital_hyperbolic(a1: float, a2: float, f: TestFunction, n: int = 48,
                               chunk: int = 1 << 20) -> float:
    """Midpoint lattice sum of ``f(u^{-1} gamma u)`` over a box containing the support."""
    if not f.terms:
        return 0.0
    box = _fitted_box(a1, a2, f.max_radius)
    if not np.any(box):
        return 0.0
    axes, vol = _grid(box, n)
    # iterate over the outermost axis so memory stays bounded
    total = []
    inner = np.stack(np.meshgrid(*axes[1:], indexing="ij"), axis=-1).reshape(-1, 3)
    step = max(1, chunk // inner.shape[0])
    for start in range(0, n, step):
        x1 = axes[0][start:start + step]
        pts = np.concatenate([np.column_stack([np.full(inner.shape[0], v), inner]) for v in x1])
        total.append(math.fsum(conjugated_values(a1, a2, f, pts)))
    return math.fsum(total) * vol


def lattice_elliptic(lam: float, f: TestFunction, n: int = 200000) -> float:
    """Midpoint sum of ``sign(t - 1) f(m(lam, t)) dt`` over ``t`` in ``(0, T]``.

    ``T`` is found by doubling until ``f`` vanishes; the block is built entry by entry.
    """
    def values(t):
        c = math.sqrt(1 - lam * lam)
        g = np.zeros(t.shape + (4, 4))
        g[..., 0, 0] = g[..., 2, 2] = 1.0
        g[..., 1, 1] = g[..., 3, 3] = c
        g[..., 1, 3] = t * lam
        g[..., 3, 1] = -lam / t
        return f(g)

    T = 2.0
    while values(np.array([T]))[0] != 0:
        T *= 2
    h = T / n
    t = h * (np.arange(n) + 0.5)
    return math.fsum(np.sign(t - 1) * values(t)) * h


def closed_form_elliptic(lam: float, f: TestFunction) -> float:
    """Exact ``F(lam)`` for polynomial bumps via ``v = t + 1/t``.

    ``||m(lam, t)||^2 = 4 - 4 lam^2 + lam^2 v^2`` and ``(1 - 1/t^2) dt = dv``, so
    folding ``t < 1`` onto ``t > 1`` gives ``F = int_2^vmax phi(4 - 4 lam^2 + lam^2 v^2) dv``,
    a polynomial integral.  ``F`` is therefore a combination of ``1/|lam|``,
    powers of ``lam^2`` and square roots in ``lam^2``; it has no logarithmic term.
    """
    if lam == 0 or abs(lam) > 1:
        raise ValueError("need 0 < |lam| <= 1")
    l2 = lam * lam
    total = 0.0
    for t in f.terms:
        r2 = t.radius ** 2
        if r2 <= 4:  # the integrand starts at ||g||^2 = 4
            continue
        phi = t.coef * (1 - Polynomial([4 - 4 * l2, 0, l2]) / r2) ** t.degree
        vmax = math.sqrt((r2 - 4 + 4 * l2) / l2)
        anti = phi.integ()
        total += anti(vmax) - anti(2.0)
    return float(total)
