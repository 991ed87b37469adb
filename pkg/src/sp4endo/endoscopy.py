"""Conjugacy-type classification, centralizers and the two endoscopic groups."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .decompositions import as_array, rotation, torus
from .exact_linalg import ExactMatrix, mat_mul, nullspace
from .structure import REAL_BASIS

REGULARITY_TOL = 1e-8
"""Eigenvalues closer than this are treated as equal."""

_LOOSE = 1e-6
_DEFECT_RATIO = 100.0

TAGS = ("elliptic", "hyperbolic", "parabolic", "mixed", "singular")


@dataclass(frozen=True)
class ConjugacyType:
    tag: str
    params: tuple
    regular: bool

    def to_dict(self) -> dict:
        def enc(p):
            if isinstance(p, complex):
                return [p.real, p.imag]
            return float(p)
        return {"type": self.tag, "params": [enc(p) for p in self.params], "regular": self.regular}


def _pair_traces(g: np.ndarray) -> tuple[complex, complex]:
    """Roots ``y`` of ``y^2 - c1 y + (c2 - 2)``; eigenvalues satisfy ``lam + 1/lam = y``."""
    c1 = np.trace(g)
    c2 = 0.5 * (c1 * c1 - np.trace(g @ g))
    disc = complex(c1 * c1 - 4.0 * (c2 - 2.0))
    r = np.sqrt(disc)
    y1, y2 = (c1 + r) / 2, (c1 - r) / 2
    return complex(y1), complex(y2)


def _factor(y: float, unit: int | None) -> list[float]:
    # polynomial coefficients, highest degree first
    return [1.0, -float(unit)] if unit is not None else [1.0, -y, 1.0]


def _poly_at(g: np.ndarray, coeffs: list[list[float]]) -> np.ndarray:
    out = np.eye(4)
    for c in coeffs:
        term = np.zeros((4, 4))
        for k, a in enumerate(c):
            term += a * np.linalg.matrix_power(g, len(c) - 1 - k)
        out = out @ term
    return out


def _pair_rep(y: float) -> complex:
    """Representative eigenvalue of the pair ``{lam, 1/lam}`` with ``lam + 1/lam = y``."""
    if abs(y) >= 2:
        return (y + math.copysign(math.sqrt(y * y - 4), y)) / 2
    return complex(y / 2, math.sqrt(4 - y * y) / 2)


def classify(gamma, tol: float = REGULARITY_TOL) -> ConjugacyType:
    """Conjugacy type of a symplectic matrix from its eigenvalues.

    The characteristic polynomial of a symplectic matrix is palindromic, so the
    eigenvalues come in pairs ``{lam, 1/lam}`` indexed by ``y = lam + 1/lam``.
    Semisimplicity is decided by evaluating the candidate minimal polynomial.
    """
    g = as_array(gamma)
    scale = max(1.0, float(np.max(np.abs(g))))
    y1c, y2c = _pair_traces(g)
    if max(abs(y1c.imag), abs(y2c.imag)) > _LOOSE * scale:
        eig = tuple(sorted(np.linalg.eigvals(g), key=lambda z: (round(abs(z), 12), np.angle(z))))
        return ConjugacyType("mixed", tuple(complex(z) for z in eig), True)
    y1, y2 = sorted((y1c.real, y2c.real), reverse=True)

    def unit_of(y):
        for u in (1, -1):
            if abs(y - 2 * u) <= _LOOSE * scale:
                return u
        return None

    # most-merged plausible structure
    if abs(y1 - y2) <= _LOOSE * scale:
        y = 0.5 * (y1 + y2)
        merged = [(y, unit_of(y))]
    else:
        merged = [(y1, unit_of(y1)), (y2, unit_of(y2))]
    res = float(np.max(np.abs(_poly_at(g, [_factor(y, u) for y, u in merged])))) / scale ** 4
    if res <= tol:
        structure = merged
    else:
        distinct = [(y1, None), (y2, None)]
        gaps = [abs(y1 - y2)] + [abs(y - 2 * u) for y, u in merged if u is not None]
        gap = max(min(gaps), 1e-300)
        if res > _DEFECT_RATIO * gap:
            eig = tuple(complex(z) for z in np.linalg.eigvals(g))
            return ConjugacyType("parabolic", eig, False)
        structure = distinct if abs(y1 - y2) > 0 else merged

    units = [u for _, u in structure if u is not None]
    if units:
        return ConjugacyType("singular", tuple(float(u) for u in sorted(units)), False)
    ys = [y for y, _ in structure]
    if len(ys) == 1:
        ys = ys * 2
    if all(abs(y) < 2 for y in ys):
        thetas = sorted(math.acos(max(-1.0, min(1.0, y / 2))) for y in ys)
        reps = [complex(math.cos(t), math.sin(t)) for t in thetas]
        regular = abs(reps[0] - reps[1]) > tol
        return ConjugacyType("elliptic", tuple(thetas), regular)
    if all(abs(y) > 2 for y in ys):
        reps = sorted((_pair_rep(y).real for y in ys), key=abs)
        regular = abs(reps[0] - reps[1]) > tol * max(1.0, abs(reps[1]))
        return ConjugacyType("hyperbolic", tuple(reps), regular)
    ell = [y for y in ys if abs(y) < 2][0]
    hyp = [y for y in ys if abs(y) > 2][0]
    return ConjugacyType("mixed", (math.acos(ell / 2), _pair_rep(hyp).real), True)


# -- exact centralizers --------------------------------------------------------

def centralizer_algebra(gamma: ExactMatrix) -> list[ExactMatrix]:
    """Basis of ``{X in sp(4) : X gamma = gamma X}`` by exact linear algebra."""
    if not isinstance(gamma, ExactMatrix) or not gamma.is_exact:
        raise TypeError("centralizer_algebra needs an exact-mode ExactMatrix")
    basis = [b.to_mode(gamma.mode) for b in REAL_BASIS.values()]
    cols = [list((mat_mul(b, gamma) - mat_mul(gamma, b)).entries()) for b in basis]
    rows = [[col[k] for col in cols] for k in range(16)]
    out = []
    for v in nullspace(rows, len(basis)):
        m = ExactMatrix.zeros(gamma.mode)
        for c, b in zip(v, basis):
            if c != 0:
                m = m + b.scale(c)
        out.append(m)
    return out


def pythagorean(u) -> tuple[Fraction, Fraction]:
    """Rational point ``(cos, sin) = ((1-u^2)/(1+u^2), 2u/(1+u^2))`` on the unit circle."""
    u = Fraction(u)
    d = 1 + u * u
    return (1 - u * u) / d, 2 * u / d


def rational_rotation(u1, u2) -> ExactMatrix:
    """Exact ``r(theta1) r(theta2)`` at the Pythagorean angles of ``u1, u2``."""
    c1, s1 = pythagorean(u1)
    c2, s2 = pythagorean(u2)
    return ExactMatrix.from_rows([[c1, 0, s1, 0],
                                  [0, c2, 0, s2],
                                  [-s1, 0, c1, 0],
                                  [0, -s2, 0, c2]])


def rational_torus(t1, t2) -> ExactMatrix:
    t1, t2 = Fraction(t1), Fraction(t2)
    return ExactMatrix.diag([t1, t2, 1 / t1, 1 / t2])


def sl2_block(a, b, c, d, sign: int = 1):
    """``+-`` the SL(2) block acting on the symplectic pair ``(e2, e4)``.

    This is the displayed middle block after interchanging the third and fourth
    basis vectors, the ordering in which the block is symplectic.
    """
    exact = all(isinstance(x, (int, Fraction)) for x in (a, b, c, d))
    if exact:
        if Fraction(a) * d - Fraction(b) * c != 1:
            raise ValueError("ad - bc must equal 1")
        m = ExactMatrix.from_rows([[1, 0, 0, 0], [0, a, 0, b], [0, 0, 1, 0], [0, c, 0, d]])
        return m if sign == 1 else -m
    if abs(a * d - b * c - 1) > 1e-12:
        raise ValueError("ad - bc must equal 1")
    m = np.array([[1.0, 0, 0, 0], [0, a, 0, b], [0, 0, 1, 0], [0, c, 0, d]])
    return sign * m


# -- endoscopic groups ---------------------------------------------------------

class SingularElementError(ValueError):
    pass


@dataclass(frozen=True)
class EndoscopicGroup:
    """One of the two nontrivial endoscopic groups, with its embedding in Sp(4, R).

    ``kind`` is ``"torus"`` (S^1 x S^1 x {+-1}, or its split form for
    hyperbolic elements) or ``"sl2"`` (SL(2, R) x {+-1}).
    """

    kind: str
    form: str
    embed: Callable = field(repr=False, compare=False)
    commutes_with_gamma: bool | None = None

    @property
    def description(self) -> str:
        return {"torus": "S^1 x S^1 x {+-1}", "sl2": "SL(2,R) x {+-1}"}[self.kind]


def _torus_embed_compact(theta1, theta2, sign: int = 1):
    return sign * rotation(theta1, theta2)


def _torus_embed_split(t1, t2, sign: int = 1):
    return sign * torus(t1, t2)


def _commutes(gamma, samples) -> bool:
    if isinstance(gamma, ExactMatrix) and gamma.is_exact:
        return all((mat_mul(s, gamma) - mat_mul(gamma, s)).is_zero() for s in samples)
    g = as_array(gamma)
    return all(float(np.max(np.abs(s @ g - g @ s))) <= 1e-10 * max(1.0, float(np.max(np.abs(g)))) ** 2
               for s in samples)


def endoscopic_group_of(gamma, tol: float = REGULARITY_TOL) -> EndoscopicGroup:
    """Endoscopic group attached to an elliptic or hyperbolic semisimple element.

    Distinct eigenvalue pairs give the torus kind, equal pairs the SL(2) kind.
    For the torus kind, elementwise commutation with ``gamma`` is checked on a
    handful of group elements (exactly, for exact input).
    """
    ct = classify(gamma, tol)
    if ct.tag not in ("elliptic", "hyperbolic"):
        raise SingularElementError(f"no endoscopic group for a {ct.tag} element")
    if not ct.regular:
        return EndoscopicGroup("sl2", "block", sl2_block)
    if ct.tag == "elliptic":
        if isinstance(gamma, ExactMatrix) and gamma.is_exact:
            samples = [rational_rotation(Fraction(1, 3), Fraction(2, 7)),
                       rational_rotation(Fraction(-5, 4), Fraction(3, 11)).scale(-1)]
        else:
            samples = [rotation(0.4, -1.1), -rotation(2.0, 0.3)]
        return EndoscopicGroup("torus", "compact", _torus_embed_compact, _commutes(gamma, samples))
    if isinstance(gamma, ExactMatrix) and gamma.is_exact:
        samples = [rational_torus(Fraction(3, 2), 5), rational_torus(Fraction(1, 7), Fraction(2, 3)).scale(-1)]
    else:
        samples = [torus(1.5, 5.0), -torus(1 / 7, 2 / 3)]
    return EndoscopicGroup("torus", "split", _torus_embed_split, _commutes(gamma, samples))
