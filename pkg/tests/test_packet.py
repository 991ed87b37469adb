from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sp4endo import characters as ch
from sp4endo import packet as pk
from sp4endo.structure import even_weyl_elements

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=50)


@pytest.mark.parametrize("rank", [0, 1, 2])
def test_character_table_orthogonal(rank):
    g = pk.SGroup(rank)
    assert g.order == 2 ** rank
    assert g.orthogonality_defects() == []
    assert pk.fourier_orthogonality(pk.Packet.complete(rank, [0] * g.order)) == []


def test_forward_examples():
    p = pk.Packet.complete(2, [Fraction(3, 7)] * 4)
    assert pk.forward_transfer(p, (0, 0)) == Fraction(12, 7)
    p = pk.Packet.complete(2, [1, 0, 0, 0])
    for s in p.group.elements:
        assert pk.forward_transfer(p, s) == p.pair(s, 0)


@given(st.integers(0, 2).flatmap(lambda r: st.tuples(st.just(r), st.lists(rationals, min_size=2 ** r,
                                                                       max_size=2 ** r))))
def test_round_trip_exact(data):
    rank, traces = data
    p = pk.Packet.complete(rank, traces)
    transfers = pk.forward_all(p)
    for s, v in transfers.items():
        assert v == sum(p.pair(s, i) * t for i, t in enumerate(traces))
    back = pk.invert(p, transfers)
    assert [back[n] for n in p.names] == list(traces)
    assert all(isinstance(back[n], Fraction) for n in p.names)


def test_invert_zero_and_trivial_group():
    p = pk.Packet.complete(2, [0] * 4)
    assert all(v == 0 for v in pk.invert(p, {s: 0 for s in p.group.elements}).values())
    p0 = pk.Packet.complete(0, [Fraction(5, 3)])
    assert pk.invert(p0, {(): Fraction(5, 3)}) == {"pi1": Fraction(5, 3)}


def test_invert_missing_transfer():
    p = pk.Packet.complete(1, [1, 2])
    with pytest.raises(pk.PacketError):
        pk.invert(p, {(0,): 3})


def test_incomplete_packet_rejected():
    g = pk.SGroup(2)
    p = pk.Packet.from_characters(g, [(0, 0), (1, 0)], [1, 2])
    with pytest.raises(pk.PacketError):
        pk.forward_transfer(p, (0, 0))


def test_pairing_must_be_character():
    g = pk.SGroup(1)
    with pytest.raises(pk.PacketError):
        pk.Packet(g, ("a",), ({(0,): 1, (1,): 2},))
    with pytest.raises(pk.PacketError):
        pk.Packet(g, ("a",), ({(0,): -1, (1,): 1},))


def test_epsilon_trivial_signs():
    p = pk.Packet.complete(2, [1, 2, 3, 4]).with_eps([1, 1, 1, 1], s0=(0, 0))
    assert pk.verify_epsilon_consistency(p).passed


@given(st.sampled_from(pk.SGroup(2).elements), st.lists(rationals, min_size=4, max_size=4))
def test_epsilon_from_character_passes(s0, traces):
    p = pk.Packet.complete(2, traces)
    p = p.with_eps([p.pair(s0, i) for i in range(4)], s0=s0)
    rep = pk.verify_epsilon_consistency(p)
    assert rep.passed and rep.discrepancy == 0


def test_epsilon_corrupted_member_named():
    p = pk.demo_packet()
    eps = list(p.eps)
    eps[2] = -eps[2]
    rep = pk.verify_epsilon_consistency(p.with_eps(eps))
    assert not rep.passed
    assert rep.offending == (p.names[2],)


def test_epsilon_with_constant_c():
    p = pk.Packet.complete(1, [Fraction(1, 2), Fraction(1, 3)], c={(1,): Fraction(-2)})
    p = p.with_eps([-2 * p.pair((1,), i) for i in range(2)], s0=(1,))
    assert pk.verify_epsilon_consistency(p).passed


def test_demo_packet_values():
    rep = pk.demo_report()
    assert rep["transfers"] == {"00": "41/12", "01": "11/12", "10": "-47/12", "11": "19/12"}
    assert rep["round_trip_exact"]


def test_json_round_trip():
    p = pk.demo_packet()
    data = json.loads(json.dumps(pk.packet_to_json(p)))
    q = pk.packet_from_json(data)
    assert q.traces == p.traces and q.eps == p.eps and q.labels() == p.labels()
    bits = pk.packet_from_json({"group_rank": 1, "pairing": [[0], [1]], "traces": ["1/2", 3]})
    assert bits.traces == (Fraction(1, 2), Fraction(3))


@pytest.mark.parametrize("gen", ch.KappaCharacter.all(2))
def test_kappa_orbital_is_forward_transfer(gen):
    """The kappa-weighted character sum is the forward transfer at the matching s."""
    param = ch.HCParameter((3, -1))
    g = ch.TorusElement(0.4, 1.3)
    ws = even_weyl_elements()
    labels = [ch.DEFAULT_LABELING[w] for w in ws]
    traces = [ch.ds_character(w(param.mu), g.inverse()) for w in ws]
    p = pk.Packet.from_characters(pk.SGroup(2), labels, traces)
    s = tuple(0 if v == 1 else 1 for v in gen.generator_values)
    assert pk.forward_transfer(p, s) == pytest.approx(ch.kappa_orbital(param, g, gen), abs=1e-13)


def test_float_traces_tolerance():
    p = pk.Packet.complete(1, [0.1, 0.2]).with_eps([1, 1], s0=(0,))
    assert pk.verify_epsilon_consistency(p, stable_side=0.30000000000000004 + 1e-12, tol=1e-9).passed
