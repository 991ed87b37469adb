"""Exact Fourier analysis on ``S = (Z/2)^r`` for packets paired with ``S``.

A packet member ``pi`` is paired with ``S`` through a character
``s -> <s, pi>``.  The forward transfer at ``s`` is
``sum_pi <s, pi> tr pi``; inversion recovers the traces from the transfers
through ``tr pi = (1/#S) sum_s <s, pi> transfer(s)``.  With
:class:`fractions.Fraction` traces every step is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Number
from typing import Mapping, Sequence

Element = tuple[int, ...]


@dataclass(frozen=True)
class SGroup:
    """Elementary abelian 2-group ``(Z/2)^rank`` with characters ``chi_a(s) = (-1)^{a.s}``."""

    rank: int

    def __post_init__(self):
        if self.rank not in (0, 1, 2):
            raise ValueError("rank must be 0, 1 or 2")

    @property
    def elements(self) -> list[Element]:
        return [tuple(e) for e in itertools.product((0, 1), repeat=self.rank)]

    @property
    def order(self) -> int:
        return 2 ** self.rank

    @property
    def identity(self) -> Element:
        return (0,) * self.rank

    def check(self, s: Sequence[int]) -> Element:
        s = tuple(int(x) for x in s)
        if len(s) != self.rank or any(x not in (0, 1) for x in s):
            raise ValueError(f"{s} is not an element of (Z/2)^{self.rank}")
        return s

    def character(self, a: Element, s: Element) -> int:
        return -1 if sum(x * y for x, y in zip(a, s)) % 2 else 1

    def character_table(self) -> list[list[int]]:
        """Rows indexed by the character label ``a``, columns by ``s``, both in element order."""
        els = self.elements
        return [[self.character(a, s) for s in els] for a in els]

    def orthogonality_defects(self) -> list[tuple[Element, Element, int]]:
        """Pairs of characters violating ``sum_s chi1 chi2 = #S [chi1 = chi2]`` (empty when exact)."""
        table = self.character_table()
        els = self.elements
        bad = []
        for i, j in itertools.product(range(len(els)), repeat=2):
            total = sum(x * y for x, y in zip(table[i], table[j]))
            expected = self.order if i == j else 0
            if total != expected:
                bad.append((els[i], els[j], total))
        return bad


class PacketError(ValueError):
    pass


def _is_character(group: SGroup, row: Mapping[Element, int]) -> Element | None:
    for a in group.elements:
        if all(row[s] == group.character(a, s) for s in group.elements):
            return a
    return None


@dataclass(frozen=True)
class Packet:
    """Packet members with their pairing, traces, signs ``eps`` and the constant ``c(s)``.

    ``pairing[i][s]`` is ``<s, pi_i>``.  ``c`` maps group elements to the
    constant of the sign relation ``eps(pi) = c(s) <s, pi>`` and defaults to 1.
    """

    group: SGroup
    names: tuple[str, ...]
    pairing: tuple[Mapping[Element, int], ...]
    traces: tuple = ()
    eps: tuple | None = None
    c: Mapping[Element, object] = field(default_factory=dict)
    s0: Element | None = None

    def __post_init__(self):
        if len(self.pairing) != len(self.names):
            raise PacketError("one pairing row per member")
        if self.traces and len(self.traces) != len(self.names):
            raise PacketError("one trace per member")
        if self.eps is not None and len(self.eps) != len(self.names):
            raise PacketError("one sign per member")
        for name, row in zip(self.names, self.pairing):
            if set(row) != set(self.group.elements):
                raise PacketError(f"pairing of {name} is not defined on all of S")
            if _is_character(self.group, row) is None:
                raise PacketError(f"pairing of {name} is not a character of S")

    # constructors

    @classmethod
    def from_characters(cls, group: SGroup, labels: Sequence[Element], traces: Sequence = (),
                        names: Sequence[str] | None = None, **kw) -> "Packet":
        """Member ``i`` paired by ``s -> chi_{labels[i]}(s)``."""
        labels = [group.check(a) for a in labels]
        names = tuple(names) if names is not None else tuple(f"pi{i + 1}" for i in range(len(labels)))
        pairing = tuple({s: group.character(a, s) for s in group.elements} for a in labels)
        return cls(group, names, pairing, tuple(traces), **kw)

    @classmethod
    def complete(cls, rank: int, traces: Sequence = (), **kw) -> "Packet":
        """One member per character of ``(Z/2)^rank``, in element order."""
        g = SGroup(rank)
        return cls.from_characters(g, g.elements, traces, **kw)

    def with_traces(self, traces: Sequence) -> "Packet":
        return Packet(self.group, self.names, self.pairing, tuple(traces), self.eps, self.c, self.s0)

    def with_eps(self, eps: Sequence, s0: Element | None = None) -> "Packet":
        return Packet(self.group, self.names, self.pairing, self.traces, tuple(eps), self.c,
                      self.s0 if s0 is None else s0)

    # queries

    def pair(self, s: Sequence[int], i: int) -> int:
        return self.pairing[i][self.group.check(s)]

    def labels(self) -> list[Element]:
        return [_is_character(self.group, row) for row in self.pairing]

    def c_of(self, s: Element):
        return self.c.get(s, 1)

    @property
    def is_complete(self) -> bool:
        return len(self.names) == self.group.order and len(set(self.labels())) == self.group.order

    def require_complete(self):
        if not self.is_complete:
            raise PacketError(f"packet has {len(self.names)} distinct members, S has order {self.group.order}")
        if len(self.traces) != len(self.names):
            raise PacketError("packet has no trace data")


def forward_transfer(p: Packet, s: Sequence[int]):
    """``sum_pi <s, pi> tr pi``."""
    p.require_complete()
    s = p.group.check(s)
    return sum((p.pairing[i][s] * t for i, t in enumerate(p.traces)), Fraction(0))


def forward_all(p: Packet) -> dict[Element, object]:
    return {s: forward_transfer(p, s) for s in p.group.elements}


def invert(p: Packet, transfers: Mapping[Element, object]) -> dict[str, object]:
    """``tr pi = (1/#S) sum_s <s, pi> transfer(s)`` for every member."""
    if len(p.names) != p.group.order or len(set(p.labels())) != p.group.order:
        raise PacketError("inversion needs one member per character of S")
    transfers = {tuple(k): v for k, v in transfers.items()}
    missing = [s for s in p.group.elements if s not in transfers]
    if missing:
        raise PacketError(f"transfers missing at {missing}")
    n = p.group.order
    out = {}
    for i, name in enumerate(p.names):
        total = sum((p.pairing[i][s] * transfers[s] for s in p.group.elements), Fraction(0))
        out[name] = total / n if _exact(total) else total / float(n)
    return out


def _exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def fourier_orthogonality(p: Packet) -> list[tuple[str, str, object]]:
    """Member pairs violating ``(1/#S) sum_s <s, pi> <s, pi'> = [pi = pi']`` (empty when exact)."""
    bad = []
    for i, j in itertools.product(range(len(p.names)), repeat=2):
        v = Fraction(sum(p.pairing[i][s] * p.pairing[j][s] for s in p.group.elements), p.group.order)
        if v != (1 if i == j else 0):
            bad.append((p.names[i], p.names[j], v))
    return bad


@dataclass(frozen=True)
class EpsilonReport:
    passed: bool
    s0: Element | None
    lhs: object
    rhs: object
    discrepancy: object
    offending: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"passed": self.passed, "s0": list(self.s0) if self.s0 is not None else None,
                "lhs": encode_scalar(self.lhs), "rhs": encode_scalar(self.rhs),
                "discrepancy": encode_scalar(self.discrepancy), "offending": list(self.offending)}


def _close(a, b, tol) -> bool:
    if tol == 0:
        return a == b
    return abs(a - b) <= tol


def verify_epsilon_consistency(p: Packet, stable_side=None, tol: float = 0) -> EpsilonReport:
    """Check ``eps(pi) = c(s0) <s0, pi>`` memberwise and the stable-versus-signed identity.

    ``stable_side`` is the endoscopic side ``sum_sigma tr sigma(f^H)``; when
    omitted it is taken as ``c(s0)`` times the forward transfer at ``s0``.  If
    the packet does not fix ``s0``, the element matching the most members is
    used and the remaining members are reported as offending.
    """
    if p.eps is None:
        raise PacketError("packet carries no signs eps")
    p.require_complete()
    candidates = [p.s0] if p.s0 is not None else p.group.elements

    def mismatches(s):
        return [p.names[i] for i, e in enumerate(p.eps)
                if not _close(e, p.c_of(s) * p.pairing[i][s], tol)]

    s0 = min(candidates, key=lambda s: len(mismatches(s)))
    offending = tuple(mismatches(s0))
    rhs = sum((e * t for e, t in zip(p.eps, p.traces)), Fraction(0))
    lhs = p.c_of(s0) * forward_transfer(p, s0) if stable_side is None else stable_side
    disc = lhs - rhs
    passed = not offending and _close(lhs, rhs, tol)
    return EpsilonReport(passed, s0, lhs, rhs, disc, offending)


# -- JSON ----------------------------------------------------------------------

def parse_scalar(x):
    """``"p/q"`` strings and integers are exact; JSON floats stay floats."""
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, Number):
        return x
    raise TypeError(f"cannot read scalar {x!r}")


def encode_scalar(x):
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def packet_from_json(data: Mapping) -> Packet:
    """Read ``{group_rank, pairing, traces[, names, eps, c, s0]}``.

    ``pairing`` is either a list of character labels (bit lists) or a list of
    rows of +-1 values over the group elements in lexicographic order.
    """
    group = SGroup(int(data["group_rank"]))
    raw = data["pairing"]
    names = tuple(data.get("names") or (f"pi{i + 1}" for i in range(len(raw))))
    els = group.elements
    rows = []
    for r in raw:
        r = list(r)
        if len(r) == group.rank and all(x in (0, 1) for x in r):
            rows.append({s: group.character(tuple(r), s) for s in els})
        elif len(r) == len(els):
            rows.append({s: int(v) for s, v in zip(els, r)})
        else:
            raise PacketError(f"cannot read pairing row {r}")
    traces = tuple(parse_scalar(t) for t in data.get("traces", ()))
    eps = tuple(parse_scalar(e) for e in data["eps"]) if "eps" in data else None
    c = {}
    for k, v in (data.get("c") or {}).items():
        c[tuple(int(ch) for ch in k)] = parse_scalar(v)
    s0 = tuple(data["s0"]) if data.get("s0") is not None else None
    return Packet(group, names, tuple(rows), traces, eps, c, s0)


def packet_to_json(p: Packet) -> dict:
    out = {
        "group_rank": p.group.rank,
        "names": list(p.names),
        "pairing": [[row[s] for s in p.group.elements] for row in p.pairing],
        "traces": [encode_scalar(t) for t in p.traces],
    }
    if p.eps is not None:
        out["eps"] = [encode_scalar(e) for e in p.eps]
    if p.c:
        out["c"] = {"".join(map(str, k)): encode_scalar(v) for k, v in sorted(p.c.items())}
    if p.s0 is not None:
        out["s0"] = list(p.s0)
    return out


def demo_packet() -> Packet:
    """Four members on ``(Z/2)^2`` with rational traces and signs from ``s0 = (1, 0)``."""
    traces = (Fraction(1, 2), Fraction(-3, 4), Fraction(5, 3), Fraction(2))
    p = Packet.complete(2, traces, names=("pi_a", "pi_b", "pi_c", "pi_d"))
    s0 = (1, 0)
    return p.with_eps([p.pair(s0, i) for i in range(4)], s0=s0)


def demo_report(p: Packet | None = None) -> dict:
    p = p or demo_packet()
    transfers = forward_all(p)
    back = invert(p, transfers)
    eps = verify_epsilon_consistency(p) if p.eps is not None else None
    return {
        "packet": packet_to_json(p),
        "transfers": {"".join(map(str, s)): encode_scalar(v) for s, v in transfers.items()},
        "inverted": {k: encode_scalar(v) for k, v in back.items()},
        "round_trip_exact": all(back[n] == t for n, t in zip(p.names, p.traces)),
        "orthogonality_defects": len(fourier_orthogonality(p)),
        "epsilon": eps.to_dict() if eps is not None else None,
    }
