"""Orbital integrals of K-bi-invariant bump functions, transfer factors and the
small-parameter expansion of the elliptic orbital integral.

Hyperbolic elements are ``gamma = diag(a1, a2, 1/a1, 1/a2)`` and the orbital
integral is the raw integral over the unipotent radical,

    O_gamma(f) = int_U f(u^{-1} gamma u) dx1 dx2 dx3 dx4,

in the chart ``u = n(x1, x2, x3, x4)`` of :mod:`sp4endo.decompositions`.  In
that chart ``||u^{-1} gamma u||_F^2 = ||gamma||_F^2 + k4 x4^2 + x^T Q(x4) x``
with ``x = (x1, x2, x3)`` and ``Q(x4)`` positive definite for regular
``gamma``.  The support of every bump is therefore a nested family of
ellipsoids, and each coordinate is integrated over its exact support interval.

The elliptic integral ``F(lam)`` is a one-dimensional integral over the split
torus of the SL(2) block, see :func:`orbital_elliptic_1d`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .quadrature import (QuadratureConfig, QuadResult, gauss_legendre_nodes, integrate,
                         integrate_outer)

__all__ = [
    "BumpTerm", "TestFunction", "QuadratureConfig", "QuadResult", "TransferFactor",
    "transfer_factor", "orbital_hyperbolic", "orbital_elliptic_1d", "unipotent_integral",
    "singular_expansion", "even_odd_parts", "smooth_transfer_hyperbolic", "elliptic_block",
    "hyperbolic_conjugate", "quadratic_form", "STANDARD_BUMP", "EXPANSION_CONFIG",
    "SingularExpansion", "EvenOddParts", "LogFit", "fit_log", "default_lambda_grid",
    "TransferRow", "ContinuityDiagnostic", "continuity_diagnostic", "MEASURES",
]


# -- test functions ------------------------------------------------------------

@dataclass(frozen=True)
class BumpTerm:
    """``coef * (1 - s / R^2)^m`` for ``s < R^2``, zero otherwise."""

    coef: float
    radius: float
    degree: int

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("support radius must be positive")
        if self.degree < 4:
            raise ValueError("bump degree must be at least 4")

    def profile(self, s):
        s = np.asarray(s, dtype=float)
        x = 1.0 - s / self.radius ** 2
        return np.where(x > 0, self.coef * np.clip(x, 0.0, None) ** self.degree, 0.0)


@dataclass(frozen=True)
class TestFunction:
    """K-bi-invariant test function ``f(g) = phi(||g||_F^2)``.

    ``phi`` is a finite linear combination of polynomial bumps.  An optional
    conjugator ``k0`` in K gives ``g -> f(k0^{-1} g k0)``, which is evaluated
    literally on matrices (it equals ``f`` because the Frobenius norm is
    K-bi-invariant, and that is what the conjugation checks exercise).
    """

    __test__ = False  # not a pytest class

    terms: tuple[BumpTerm, ...] = ()
    conjugator: np.ndarray | None = field(default=None, compare=False, repr=False)

    @classmethod
    def bump(cls, radius: float, degree: int = 4, coef: float = 1.0) -> "TestFunction":
        return cls((BumpTerm(float(coef), float(radius), int(degree)),))

    @classmethod
    def zero(cls) -> "TestFunction":
        return cls(())

    @classmethod
    def parse(cls, text: str) -> "TestFunction":
        """``"R,m"`` or ``"R,m,coef"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) not in (2, 3):
            raise ValueError("profile must be 'R,m' or 'R,m,coef'")
        coef = float(parts[2]) if len(parts) == 3 else 1.0
        return cls.bump(float(parts[0]), int(parts[1]), coef)

    def __add__(self, other: "TestFunction") -> "TestFunction":
        return TestFunction(self.terms + other.terms, self.conjugator)

    def scale(self, c: float) -> "TestFunction":
        return TestFunction(tuple(BumpTerm(c * t.coef, t.radius, t.degree) for t in self.terms),
                            self.conjugator)

    __rmul__ = scale

    def conjugated(self, k0: np.ndarray) -> "TestFunction":
        return TestFunction(self.terms, np.asarray(k0, dtype=float))

    def split(self) -> list["TestFunction"]:
        return [TestFunction((t,), self.conjugator) for t in self.terms]

    @property
    def max_radius(self) -> float:
        return max((t.radius for t in self.terms), default=0.0)

    def profile(self, s):
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        for t in self.terms:
            out = out + t.profile(s)
        return out

    def __call__(self, g):
        """Evaluate on one matrix or a stack of matrices with shape ``(..., 4, 4)``."""
        g = np.asarray(g, dtype=float)
        if self.conjugator is not None:
            k = self.conjugator
            g = np.einsum("ji,...jk,kl->...il", k, g, k)
        return self.profile(np.sum(g * g, axis=(-2, -1)))

    def to_dict(self) -> dict:
        return {"terms": [[t.coef, t.radius, t.degree] for t in self.terms]}


STANDARD_BUMP = TestFunction.bump(5.0, 4)
"""Radius 5, degree 4: the bump used by the expansion studies and acceptance checks."""


# -- transfer factors ----------------------------------------------------------

@dataclass(frozen=True)
class TransferFactor:
    value: complex
    context: str
    params: tuple[float, float]
    singular: bool

    def to_dict(self) -> dict:
        return {"context": self.context, "params": list(self.params),
                "value": [self.value.real, self.value.imag], "singular": self.singular}


def transfer_factor(context: str, p1: float, p2: float, tol: float = 0.0) -> TransferFactor:
    """``|a1 - 1/a1| |a2 - 1/a2|`` (hyperbolic) or ``4i sin(t1) sin(t2)`` (elliptic).

    Singular parameters give the value 0 with ``singular=True``.
    """
    if context == "hyperbolic":
        if p1 == 0 or p2 == 0:
            return TransferFactor(0j, context, (p1, p2), True)
        v = abs(p1 - 1 / p1) * abs(p2 - 1 / p2)
        return TransferFactor(complex(v, 0.0), context, (p1, p2), v <= tol)
    if context == "elliptic":
        s1, s2 = _sin_exact(p1), _sin_exact(p2)
        v = complex(0.0, 4.0 * s1 * s2)
        return TransferFactor(v, context, (p1, p2), abs(v) <= tol)
    raise ValueError(f"unknown context {context!r}")


def _sin_exact(theta: float) -> float:
    # sin at multiples of pi is exactly zero, not 1e-16
    q = theta / math.pi
    if q == round(q):
        return 0.0
    return math.sin(theta)


# -- hyperbolic orbital integral -----------------------------------------------

def _check_hyperbolic(a1: float, a2: float):
    for a in (a1, a2):
        if a == 0 or abs(abs(a) - 1) < 1e-12:
            raise ValueError(f"singular hyperbolic parameter {a}")
    if abs(a1 - a2) < 1e-12 or abs(a1 * a2 - 1) < 1e-12:
        raise ValueError("eigenvalue pairs coincide; the element is not regular")


def hyperbolic_conjugate(a1: float, a2: float, x1, x2, x3, x4) -> np.ndarray:
    """``u^{-1} gamma u`` for ``u = n(x1, x2, x3, x4)``; arrays broadcast, shape ``(..., 4, 4)``.

    With ``S = [[x1, x2], [x2, x3]]``, ``N = [[1, x4], [0, 1]]`` and
    ``D = diag(a1, a2)`` the product is
    ``[[N^{-1} D N, N^{-1}(D S - S D^{-1}) N^{-T}], [0, N^T D^{-1} N^{-T}]]``.
    """
    x1, x2, x3, x4 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x1, x2, x3, x4)))
    out = np.zeros(x1.shape + (4, 4))
    b1, b2 = 1.0 / a1, 1.0 / a2
    out[..., 0, 0] = a1
    out[..., 0, 1] = x4 * (a1 - a2)
    out[..., 1, 1] = a2
    out[..., 2, 2] = b1
    out[..., 3, 2] = x4 * (b1 - b2)
    out[..., 3, 3] = b2
    m11 = (a1 - b1) * x1
    m12 = (a1 - b2) * x2
    m21 = (a2 - b1) * x2
    m22 = (a2 - b2) * x3
    # N^{-1} M N^{-T} with N^{-1} = [[1, -x4], [0, 1]]
    r11, r12 = m11 - x4 * m21, m12 - x4 * m22
    out[..., 0, 2] = r11 - x4 * r12
    out[..., 0, 3] = r12
    out[..., 1, 2] = m21 - x4 * m22
    out[..., 1, 3] = m22
    return out


def quadratic_form(a1: float, a2: float, x4: float) -> tuple[float, float, np.ndarray]:
    """``(||gamma||_F^2, k4, Q(x4))`` such that the squared norm is ``c + k4 x4^2 + x^T Q x``."""
    g2 = a1 ** 2 + a2 ** 2 + a1 ** -2 + a2 ** -2
    k4 = (a1 - a2) ** 2 + (1 / a1 - 1 / a2) ** 2
    cols = []
    for e in np.eye(3):
        m = hyperbolic_conjugate(a1, a2, e[0], e[1], e[2], x4)
        cols.append(m[:2, 2:].ravel())
    lin = np.array(cols).T
    return g2, k4, lin.T @ lin


def _hyperbolic_term(a1, a2, term: BumpTerm, f: TestFunction, q: QuadratureConfig) -> QuadResult:
    g2, k4, _ = quadratic_form(a1, a2, 0.0)
    r2 = term.radius ** 2
    if r2 <= g2:
        return QuadResult(0.0, 0.0, True, 0)
    x4max = math.sqrt((r2 - g2) / k4)
    single = TestFunction((term,), f.conjugator)
    # exact for the degree-2m polynomial in x1
    gx, gw = gauss_legendre_nodes(term.degree + 1)

    def over_x3(x4: float) -> QuadResult:
        _, _, Q = quadratic_form(a1, a2, x4)
        rho2 = r2 - g2 - k4 * x4 * x4
        if rho2 <= 0:
            return QuadResult(0.0, 0.0, True, 0)
        qinv = np.linalg.inv(Q)
        x3max = math.sqrt(rho2 * qinv[2, 2])
        qa, qb = Q[:2, :2], Q[:2, 2]
        qa_inv = np.linalg.inv(qa)
        schur = Q[2, 2] - qb @ qa_inv @ qb
        centre_dir = -qa_inv @ qb

        def over_x2(x3: float) -> QuadResult:
            rho2s = rho2 - schur * x3 * x3
            if rho2s <= 0:
                return QuadResult(0.0, 0.0, True, 0)
            c2 = centre_dir[1] * x3
            hw2 = math.sqrt(rho2s * qa_inv[1, 1])

            def inner(x2: np.ndarray) -> np.ndarray:
                b = Q[0, 1] * x2 + Q[0, 2] * x3
                e = Q[1, 1] * x2 * x2 + 2 * Q[1, 2] * x2 * x3 + Q[2, 2] * x3 * x3
                w2 = np.clip((rho2 - e + b * b / Q[0, 0]) / Q[0, 0], 0.0, None)
                hw = np.sqrt(w2)
                c1 = -b / Q[0, 0]
                x1 = c1[:, None] + hw[:, None] * gx[None, :]
                vals = single(hyperbolic_conjugate(a1, a2, x1, x2[:, None], x3, x4))
                return hw * (vals @ gw)

            return integrate(inner, c2 - hw2, c2 + hw2, q)

        return integrate_outer(over_x2, -x3max, x3max, q)

    return integrate_outer(over_x3, -x4max, x4max, q, parallel=True)


def orbital_hyperbolic(a1: float, a2: float, f: TestFunction,
                       q: QuadratureConfig | None = None) -> QuadResult:
    """Raw orbital integral ``int_U f(u^{-1} gamma u) du`` at ``gamma = diag(a1, a2, 1/a1, 1/a2)``.

    Each bump term is integrated over its own support; the result is zero
    when every support radius satisfies ``R^2 <= ||gamma||_F^2``.
    """
    q = q or QuadratureConfig()
    _check_hyperbolic(a1, a2)
    parts = [_hyperbolic_term(a1, a2, t, f, q) for t in f.terms]
    return _combine(parts)


def _combine(parts: Sequence[QuadResult]) -> QuadResult:
    return QuadResult(math.fsum(p.value for p in parts), math.fsum(p.error for p in parts),
                      all(p.converged for p in parts), sum(p.evaluations for p in parts))


# -- elliptic orbital integral -------------------------------------------------

MEASURES = ("dt", "dt/t")


def elliptic_block(lam, t) -> np.ndarray:
    """Embedded block rotation ``m(lam, t)`` acting on the symplectic pair ``(e2, e4)``.

    The block is ``[[sqrt(1 - lam^2), t lam], [-lam / t, sqrt(1 - lam^2)]]``;
    its squared Frobenius norm is ``4 + lam^2 (t - 1/t)^2``.
    """
    lam, t = np.broadcast_arrays(np.asarray(lam, dtype=float), np.asarray(t, dtype=float))
    c = np.sqrt(1.0 - lam * lam)
    out = np.zeros(lam.shape + (4, 4))
    out[..., 0, 0] = 1.0
    out[..., 2, 2] = 1.0
    out[..., 1, 1] = c
    out[..., 3, 3] = c
    out[..., 1, 3] = t * lam
    out[..., 3, 1] = -lam / t
    return out


def orbital_elliptic_1d(lam: float, f: TestFunction, q: QuadratureConfig | None = None,
                        measure: str = "dt") -> QuadResult:
    """``F(lam) = int_0^inf sign(t - 1) f(m(lam, t)) dmu(t)`` with ``lam = sin(theta)``.

    The integral is split at ``t = 1`` and written in ``t = e^s`` so that both
    halves run over ``s`` in ``[0, S]``, where ``S`` is the exact support edge.
    ``measure="dt"`` (default) gives the weight ``e^s``; ``measure="dt/t"``
    gives weight 1, and then the two halves cancel identically because
    ``||m(lam, t)|| = ||m(lam, 1/t)||``.
    """
    q = q or QuadratureConfig()
    if measure not in MEASURES:
        raise ValueError(f"measure must be one of {MEASURES}")
    if not (0 < abs(lam) <= 1):
        raise ValueError("need 0 < |lam| <= 1")
    parts = []
    for term in f.terms:
        r2 = term.radius ** 2
        if r2 <= 4:
            continue
        smax = math.asinh(math.sqrt(r2 - 4) / (2 * abs(lam)))
        single = TestFunction((term,), f.conjugator)

        def integrand(s: np.ndarray, single=single) -> np.ndarray:
            up = single(elliptic_block(lam, np.exp(s)))
            down = single(elliptic_block(lam, np.exp(-s)))
            if measure == "dt":
                return up * np.exp(s) - down * np.exp(-s)
            return up - down

        parts.append(integrate(integrand, 0.0, smax, q))
    return _combine(parts)


def unipotent_integral(f: TestFunction, q: QuadratureConfig | None = None) -> QuadResult:
    """``int_0^inf f(n(u)) du`` for the SL(2)-block unipotent ``n(u)`` (``||n(u)||^2 = 4 + u^2``)."""
    q = q or QuadratureConfig()
    parts = []
    for term in f.terms:
        r2 = term.radius ** 2
        if r2 <= 4:
            continue
        single = TestFunction((term,), f.conjugator)

        def integrand(u: np.ndarray, single=single) -> np.ndarray:
            n = np.broadcast_to(np.eye(4), u.shape + (4, 4)).copy()
            n[..., 1, 3] = u
            return single(n)

        parts.append(integrate(integrand, 0.0, math.sqrt(r2 - 4), q))
    return _combine(parts)


# -- singular expansion --------------------------------------------------------

EXPANSION_CONFIG = QuadratureConfig(abs_tol=1e-15, rel_tol=1e-14, max_depth=12)
"""Tight tolerances for the expansion: ``B`` divides the error of ``F`` by ``lam^2``."""


def default_lambda_grid(n: int = 13, lo: float = 1e-4, hi: float = 1e-1) -> list[float]:
    return [float(x) for x in np.geomspace(hi, lo, n)]


@dataclass(frozen=True)
class LogFit:
    slope: float
    intercept: float
    r2: float

    def to_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "r2": self.r2}


def fit_log(lams: Sequence[float], values: Sequence[float]) -> LogFit:
    """Least-squares line ``values ~ slope * ln(1/lam) + intercept`` with its r^2."""
    x = np.log(1.0 / np.asarray(lams, dtype=float))
    y = np.asarray(values, dtype=float)
    design = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ np.array([slope, intercept])
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid ** 2))
    # constant data: a horizontal line fits it perfectly
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return LogFit(float(slope), float(intercept), r2)


@dataclass(frozen=True)
class SingularExpansion:
    """``F(lam) = A(lam) + lam B(lam)`` with ``A(lam) = U/|lam| + A0``.

    ``U = int_0^inf f(n(u)) du`` and ``A0 = -2 f(I)``.
    """

    U: float
    A0: float
    lams: tuple[float, ...]
    F: tuple[float, ...]
    A: tuple[float, ...]
    B: tuple[float, ...]
    F_err: tuple[float, ...]
    log_fit: LogFit
    converged: bool

    def to_dict(self) -> dict:
        return {"U": self.U, "A0": self.A0, "lambda": list(self.lams), "F": list(self.F),
                "A": list(self.A), "B": list(self.B), "F_err": list(self.F_err),
                "log_fit": self.log_fit.to_dict(), "converged": self.converged}


def _check_grid(lams: Sequence[float]):
    lams = [float(x) for x in lams]
    if len(lams) < 8:
        raise ValueError("need at least 8 grid points")
    if not all(0 < x <= 0.2 for x in lams):
        raise ValueError("grid points must lie in (0, 0.2]")
    if any(b >= a for a, b in zip(lams, lams[1:])):
        raise ValueError("grid must be strictly decreasing")
    return lams


def singular_expansion(f: TestFunction, lams: Sequence[float] | None = None,
                       q: QuadratureConfig | None = None) -> SingularExpansion:
    """Separate the ``1/|lam|`` and constant parts of ``F`` and regress the rest on ``ln(1/lam)``.

    ``B(lam) = (F(lam) - A(lam)) / lam``.  The log regression is reported as
    is; for this integral ``B`` tends to a finite limit, so the fit quality
    measures how close ``B`` is to logarithmic on the grid.
    """
    lams = _check_grid(lams if lams is not None else default_lambda_grid())
    q = q or EXPANSION_CONFIG
    U = unipotent_integral(f, q)
    a0 = -2.0 * float(f(np.eye(4)))
    Fs, As, Bs, errs = [], [], [], []
    ok = U.converged
    for lam in lams:
        r = orbital_elliptic_1d(lam, f, q)
        ok &= r.converged
        a = U.value / lam + a0
        Fs.append(r.value)
        errs.append(r.error)
        As.append(a)
        Bs.append((r.value - a) / lam)
    return SingularExpansion(U.value, a0, tuple(lams), tuple(Fs), tuple(As), tuple(Bs),
                             tuple(errs), fit_log(lams, Bs), ok)


@dataclass(frozen=True)
class EvenOddParts:
    lams: tuple[float, ...]
    G: tuple[float, ...]
    H: tuple[float, ...]
    G_coeffs: dict
    H_coeffs: tuple[float, ...]
    G_residual: float
    H_residual: float
    H_even_residual: float
    G_condition: float
    H_condition: float

    def to_dict(self) -> dict:
        return {"lambda": list(self.lams), "G": list(self.G), "H": list(self.H),
                "G_coeffs": self.G_coeffs, "H_coeffs": list(self.H_coeffs),
                "G_residual": self.G_residual, "H_residual": self.H_residual,
                "H_even_residual": self.H_even_residual, "G_condition": self.G_condition,
                "H_condition": self.H_condition}


def _lstsq(design: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float, float]:
    """Column-scaled least squares; returns coefficients, relative residual, condition number."""
    norms = np.linalg.norm(design, axis=0)
    norms[norms == 0] = 1.0
    scaled = design / norms
    coef, *_ = np.linalg.lstsq(scaled, y, rcond=None)
    fit = scaled @ coef
    ymax = float(np.max(np.abs(y))) if y.size else 0.0
    resid = float(np.max(np.abs(fit - y))) / ymax if ymax > 0 else float(np.max(np.abs(fit - y), initial=0.0))
    return coef / norms, resid, float(np.linalg.cond(scaled))


def even_odd_parts(f: TestFunction, lams: Sequence[float] | None = None,
                   q: QuadratureConfig | None = None, order: int = 3) -> EvenOddParts:
    """``G = |lam| (F(lam) + F(-lam))`` and ``H = lam (F(lam) - F(-lam))`` with series fits.

    ``G`` is fitted by ``sum_n (a_n |lam|^{-1} + b_n) lam^{2n}`` and ``H`` by
    ``sum_n h_n lam^{2n}`` for ``n <= order``.
    """
    if order > 3 or order < 0:
        raise ValueError("order must be between 0 and 3")
    lams = [float(x) for x in (lams if lams is not None else default_lambda_grid())]
    if any(x <= 0 for x in lams):
        raise ValueError("give the positive half of the symmetric grid")
    q = q or EXPANSION_CONFIG
    fp = np.array([orbital_elliptic_1d(x, f, q).value for x in lams])
    fm = np.array([orbital_elliptic_1d(-x, f, q).value for x in lams])
    lam = np.array(lams)
    G = lam * (fp + fm)
    H = lam * (fp - fm)
    # H at -lam is (-lam)(F(-lam) - F(lam)), the same expression
    H_neg = (-lam) * (fm - fp)
    scale = max(float(np.max(np.abs(lam * fp))), float(np.max(np.abs(lam * fm))), 1e-300)
    even_res = float(np.max(np.abs(H - H_neg))) / scale
    n = np.arange(order + 1)
    design_g = np.column_stack([lam[:, None] ** (2 * n - 1), lam[:, None] ** (2 * n)])
    coef_g, res_g, cond_g = _lstsq(design_g, G)
    design_h = lam[:, None] ** (2 * n)
    coef_h, res_h, cond_h = _lstsq(design_h, H)
    g_coeffs = {"a": [float(c) for c in coef_g[: order + 1]], "b": [float(c) for c in coef_g[order + 1:]]}
    return EvenOddParts(tuple(lams), tuple(G.tolist()), tuple(H.tolist()), g_coeffs,
                        tuple(float(c) for c in coef_h), res_g, res_h, even_res, cond_g, cond_h)


# -- normalised hyperbolic transfer --------------------------------------------

@dataclass(frozen=True)
class TransferRow:
    a1: float
    a2: float
    delta: float
    orbital: float
    error: float
    value: float
    converged: bool

    def to_dict(self) -> dict:
        return {"a1": self.a1, "a2": self.a2, "delta": self.delta, "orbital": self.orbital,
                "error": self.error, "fH": self.value, "converged": self.converged}


@dataclass(frozen=True)
class ContinuityDiagnostic:
    jumps: tuple[float, ...]
    decreasing: bool

    def to_dict(self) -> dict:
        return {"jumps": list(self.jumps), "decreasing": self.decreasing}


def continuity_diagnostic(values: Sequence[float]) -> ContinuityDiagnostic:
    """Adjacent jumps along a refining sequence and whether they strictly decrease."""
    jumps = tuple(abs(b - a) for a, b in zip(values, values[1:]))
    return ContinuityDiagnostic(jumps, all(y < x for x, y in zip(jumps, jumps[1:])))


def smooth_transfer_hyperbolic(f: TestFunction, grid: Iterable[tuple[float, float]],
                               q: QuadratureConfig | None = None
                               ) -> tuple[list[TransferRow], ContinuityDiagnostic]:
    """Tabulate ``f^H(gamma) = Delta(gamma) O_gamma(f)`` along a grid of ``(a1, a2)``.

    The diagnostic treats the grid as a refining sequence in the given order.
    """
    q = q or QuadratureConfig()
    rows = []
    for a1, a2 in grid:
        d = transfer_factor("hyperbolic", a1, a2).value.real
        o = orbital_hyperbolic(a1, a2, f, q)
        rows.append(TransferRow(a1, a2, d, o.value, d * o.error, d * o.value, o.converged))
    return rows, continuity_diagnostic([r.value for r in rows])
