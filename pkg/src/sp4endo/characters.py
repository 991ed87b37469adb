"""Characters on the compact Cartan subgroup, kappa-weighted sums and transfer coefficients.

Weights ``(m1, m2)`` act on ``r(theta1) r(theta2)`` by ``exp(i (m1 theta1 + m2 theta2))``.
Discrete-series characters on the compact Cartan are taken in Weyl form

    Theta_mu(gamma) = sum_{w in W_K} det(w) e^{i <w mu, theta>} / D(theta),
    D(theta)        = sum_{w in W}   det(w) e^{i <w rho, theta>},

with ``W_K = {e, swap}`` the compact Weyl group.  The four even Weyl elements
represent ``W / W_K`` and index the members of a packet.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .decompositions import rotation
from .structure import (IDENTITY, LONG_ELEMENT, RHO, WeylElement, compact_weyl_group,
                        even_weyl_elements, weyl_group)

Weight = tuple[int, int]

QUARTER_TURN = WeylElement((1, 0), (-1, 1))
"""``(m1, m2) -> (-m2, m1)``."""
THREE_QUARTER_TURN = WeylElement((1, 0), (1, -1))
"""``(m1, m2) -> (m2, -m1)``."""

DEFAULT_LABELING: dict[WeylElement, tuple[int, int]] = {
    IDENTITY: (0, 0),
    LONG_ELEMENT: (1, 1),
    QUARTER_TURN: (1, 0),
    THREE_QUARTER_TURN: (0, 1),
}
"""Even Weyl elements labelled by ``(Z/2)^2`` through their sign-flip pattern."""

RHO_H_DEFAULT: Weight = (0, 0)


def pair(m: Sequence[float], theta: Sequence[float]) -> float:
    return m[0] * theta[0] + m[1] * theta[1]


@dataclass(frozen=True)
class TorusElement:
    """``r(theta1) r(theta2)`` in the compact Cartan subgroup."""

    theta1: float
    theta2: float

    @property
    def angles(self) -> tuple[float, float]:
        return (self.theta1, self.theta2)

    def matrix(self) -> np.ndarray:
        return rotation(self.theta1, self.theta2)

    def inverse(self) -> "TorusElement":
        return TorusElement(-self.theta1, -self.theta2)

    def character(self, m: Sequence[int]) -> complex:
        return cmath.exp(1j * pair(m, self.angles))


def is_regular_weight(mu: Sequence[int]) -> bool:
    """Not fixed by any nontrivial Weyl element."""
    return all(w(tuple(mu)) != tuple(mu) for w in weyl_group() if not w.is_identity)


@dataclass(frozen=True)
class HCParameter:
    """Harish-Chandra parameter ``mu`` with the covering shift ``xi``.

    ``shift`` is the exponent ``rho - rho_H + xi`` through which the covering
    character enters every formula.
    """

    mu: Weight
    xi: Weight = (0, 0)
    rho: Weight = RHO
    rho_h: Weight = RHO_H_DEFAULT

    def __post_init__(self):
        if not is_regular_weight(self.mu):
            raise ValueError(f"weight {self.mu} is not regular")

    @property
    def shift(self) -> Weight:
        return (self.rho[0] - self.rho_h[0] + self.xi[0], self.rho[1] - self.rho_h[1] + self.xi[1])


def minimal_k_types(k: int) -> tuple[Weight, Weight]:
    """The two minimal K-type weights ``(k, -k)`` and ``(k - 1, 1 - k)``."""
    return ((k, -k), (k - 1, 1 - k))


# -- Weyl sums -----------------------------------------------------------------

def weyl_numerator(mu: Sequence[int], gamma: TorusElement,
                   subset: Sequence[WeylElement] | None = None) -> complex:
    """``sum_{w in subset} det(w) exp(i <w mu, theta>)``; the full Weyl group by default."""
    ws = weyl_group() if subset is None else subset
    mu = tuple(mu)
    return sum((w.det * gamma.character(w(mu)) for w in ws), 0j)


def weyl_denominator(gamma: TorusElement, rho: Weight = RHO) -> complex:
    return weyl_numerator(rho, gamma)


class SingularTorusElementError(ValueError):
    pass


def ds_character(nu: Sequence[int], gamma: TorusElement, rho: Weight = RHO) -> complex:
    """Discrete-series character ``Theta_nu`` on the compact Cartan (Weyl form above)."""
    den = weyl_denominator(gamma, rho)
    if abs(den) < 1e-14:
        raise SingularTorusElementError("gamma is singular: the Weyl denominator vanishes")
    return weyl_numerator(nu, gamma, compact_weyl_group()) / den


# -- SL(2) ---------------------------------------------------------------------

def _check_sl2_angle(theta: float):
    if math.sin(theta) == 0 or (theta / math.pi) == round(theta / math.pi):
        raise SingularTorusElementError("theta is a multiple of pi")


def sl2_ds_character(n: int, theta: float, sign: int) -> complex:
    """``Theta_n^{+-}(r(theta)) = -+ e^{+- i n theta} / (e^{i theta} - e^{-i theta})``."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    _check_sl2_angle(theta)
    den = cmath.exp(1j * theta) - cmath.exp(-1j * theta)
    return -sign * cmath.exp(sign * 1j * n * theta) / den


def sl2_stable_sum(n: int, theta: float) -> complex:
    """``Theta_n^+ + Theta_n^-`` in closed form, ``-sin(n theta) / sin(theta)``."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    _check_sl2_angle(theta)
    return complex(-math.sin(n * theta) / math.sin(theta), 0.0)


def sl2_kappa_sum(n: int, theta: float, kappa: int = -1) -> complex:
    """``Theta_n^+ + kappa Theta_n^-``; ``kappa = -1`` is the unstable combination."""
    return sl2_ds_character(n, theta, 1) + kappa * sl2_ds_character(n, theta, -1)


# -- kappa characters ----------------------------------------------------------

@dataclass(frozen=True)
class KappaCharacter:
    """Character of ``(Z/2)^r`` given by its values (+-1) on the standard generators."""

    generator_values: tuple[int, ...]

    def __post_init__(self):
        if len(self.generator_values) > 2:
            raise ValueError("rank at most 2")
        if any(v not in (1, -1) for v in self.generator_values):
            raise ValueError("generator values must be +-1")

    @property
    def rank(self) -> int:
        return len(self.generator_values)

    @classmethod
    def trivial(cls, rank: int = 2) -> "KappaCharacter":
        return cls((1,) * rank)

    @classmethod
    def all(cls, rank: int = 2) -> list["KappaCharacter"]:
        return [cls(v) for v in itertools.product((1, -1), repeat=rank)]

    def __call__(self, element: Sequence[int]) -> int:
        if len(element) != self.rank:
            raise ValueError("element rank does not match")
        out = 1
        for v, b in zip(self.generator_values, element):
            if b % 2:
                out *= v
        return out

    def table(self) -> dict[tuple[int, ...], int]:
        return {e: self(e) for e in itertools.product((0, 1), repeat=self.rank)}


class LabelingError(ValueError):
    pass


def _check_labeling(labeling: Mapping[WeylElement, tuple[int, ...]], kappa: KappaCharacter):
    missing = [w.name for w in even_weyl_elements() if w not in labeling]
    if missing:
        raise LabelingError(f"labeling does not cover the even Weyl elements {missing}")
    for w, e in labeling.items():
        if len(e) != kappa.rank:
            raise LabelingError(f"label of {w.name} has rank {len(e)}, kappa has rank {kappa.rank}")


def kappa_orbital(param: HCParameter, gamma: TorusElement, kappa: KappaCharacter,
                  labeling: Mapping[WeylElement, tuple[int, ...]] | None = None) -> complex:
    """``sum_{det w = 1} kappa(w) Theta_{w mu}(gamma^{-1})``."""
    labeling = DEFAULT_LABELING if labeling is None else labeling
    _check_labeling(labeling, kappa)
    g_inv = gamma.inverse()
    return sum((kappa(labeling[w]) * ds_character(w(param.mu), g_inv, param.rho)
                for w in even_weyl_elements()), 0j)


def two_term_numerator(param: HCParameter, gamma_h: TorusElement, w: WeylElement,
                       w0: WeylElement = LONG_ELEMENT) -> complex:
    """``gamma^{w mu + xi} - gamma^{w0 w mu + xi}`` on the endoscopic torus."""
    a = w(param.mu)
    b = w0(a)
    xi = param.xi
    return (gamma_h.character((a[0] + xi[0], a[1] + xi[1]))
            - gamma_h.character((b[0] + xi[0], b[1] + xi[1])))


@dataclass(frozen=True)
class TransferEntry:
    w: WeylElement
    nu: Weight
    via: WeylElement
    value: int

    def to_dict(self) -> dict:
        return {"w": self.w.name, "nu": list(self.nu), "w2": self.via.name, "a": self.value}


def transfer_coefficients(mu: Sequence[int], xi: Sequence[int], kappa: KappaCharacter,
                          labeling: Mapping[WeylElement, tuple[int, ...]] | None = None
                          ) -> dict[tuple[WeylElement, Weight], TransferEntry]:
    """``a(w1, nu) = kappa(w2) kappa(w2 w1)^{-1}`` for ``nu = w2 mu + xi``, ``w1, w2`` even."""
    labeling = DEFAULT_LABELING if labeling is None else labeling
    _check_labeling(labeling, kappa)
    mu, xi = tuple(mu), tuple(xi)
    if not is_regular_weight(mu):
        raise ValueError(f"weight {mu} is not regular")
    out = {}
    for w1 in even_weyl_elements():
        for w2 in even_weyl_elements():
            wm = w2(mu)
            nu = (wm[0] + xi[0], wm[1] + xi[1])
            # kappa takes values +-1, so the inverse is the value itself
            val = kappa(labeling[w2]) * kappa(labeling[w2.compose(w1)])
            out[(w1, nu)] = TransferEntry(w1, nu, w2, val)
    return out


# -- packets -------------------------------------------------------------------

@dataclass(frozen=True)
class CharacterMember:
    label: str
    sign: int
    evaluate: Callable[[TorusElement], complex] = field(compare=False, repr=False)


@dataclass(frozen=True)
class CharacterPacket:
    """Packet members with their character evaluators and signs ``kappa(pi)``."""

    members: tuple[CharacterMember, ...]

    @classmethod
    def generated(cls, param: HCParameter, signs: Sequence[int] | None = None,
                  representatives: Sequence[WeylElement] | None = None) -> "CharacterPacket":
        """Members ``Theta_{w mu}`` for ``w`` in the representatives (even elements by default).

        The packet size is the number of representatives; it is not fixed.
        """
        reps = list(even_weyl_elements() if representatives is None else representatives)
        signs = [1] * len(reps) if signs is None else list(signs)
        if len(signs) != len(reps):
            raise ValueError("one sign per member")
        members = []
        for w, s in zip(reps, signs):
            nu = w(param.mu)
            members.append(CharacterMember(f"{w.name}:{nu}", int(s),
                                           lambda g, nu=nu: ds_character(nu, g, param.rho)))
        return cls(tuple(members))

    @property
    def size(self) -> int:
        return len(self.members)

    def negated(self) -> "CharacterPacket":
        return CharacterPacket(tuple(CharacterMember(m.label, -m.sign, m.evaluate) for m in self.members))


def stable_character_sum(packet: CharacterPacket, gamma: TorusElement) -> complex:
    """``sum_pi kappa(pi) Theta_pi(gamma)``."""
    return sum((m.sign * m.evaluate(gamma) for m in packet.members), 0j)
