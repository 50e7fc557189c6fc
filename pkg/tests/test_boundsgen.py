import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ifnetlab import boundsgen as bg
from ifnetlab import infocalc as ic
from ifnetlab import networks as nw
from ifnetlab import ratepoly as rp
from ifnetlab.errors import (
    FactorizationViolation,
    InconsistentIdentification,
    TooLarge,
)
from ifnetlab.infocalc import conditional_mutual_information as cmi


class TestEnumeration:
    def test_two_user_counts(self):
        topo = nw.cic_topology(2)
        full, reduced = bg.enumerate_bound_templates(topo, mu_max=2)
        assert len(full) == 5
        assert len(reduced) == 30

    def test_eq65_selection_present(self):
        topo = nw.cic_cm_topology()
        _, reduced = bg.enumerate_bound_templates(topo, mu_max=2)
        t = bg.find_reduced(
            reduced, omega1=("M1",), omega_s=("M0", "M2"), form=1
        )
        assert t.lhs_messages() == ("M1",)

    def test_single_message_single_receiver(self):
        topo = nw.build_topology(1, 1, [["M"]], [["M"]], [[True]])
        full, reduced = bg.enumerate_bound_templates(topo, mu_max=1,
                                                     mode="MULTI_RX", group_cap=1)
        assert full == [] and reduced == []
        # degenerate network: no disjoint receiver pair exists

    def test_prop5_selections_present(self):
        topo = nw.cic_topology(3)
        _, reduced = bg.enumerate_bound_templates(topo, mu_max=2, mode="MULTI_RX")
        bg.find_reduced(reduced, omega1=("M1",), omega_s=("M2", "M3"),
                        form=1, j1=(0,), j2=(1, 2))
        bg.find_reduced(reduced, omega2=("M2", "M3"), form=2, j1=(0,), j2=(1, 2))

    def test_duplicates_collapse(self):
        topo = nw.cic_topology(2)
        full, _ = bg.enumerate_bound_templates(topo, mu_max=2)
        keys = {(t.j1, t.j2, t.omegas1, t.omegas2, t.omega_s) for t in full}
        assert len(keys) == len(full)

    def test_cap(self):
        topo = nw.cic_topology(3)
        from ifnetlab.config import Caps

        with pytest.raises(TooLarge):
            bg.enumerate_bound_templates(
                topo, mu_max=3, mode="MULTI_RX", caps=Caps(max_templates=10)
            )

    def test_disjointness_random_topologies(self):
        rng = np.random.default_rng(17)
        from test_netmodel import random_topology

        for _ in range(10):
            topo = random_topology(rng)
            if topo.k2 != 2:
                continue
            full, _ = bg.enumerate_bound_templates(topo, mu_max=2)
            for t in full:
                t.check_disjoint()
                for o in t.omegas1:
                    assert set(o) <= set().union(*[topo.rx_messages[j] for j in t.j1])
                for o in t.omegas2:
                    assert set(o) <= set().union(*[topo.rx_messages[j] for j in t.j2])


class TestReplays:
    def test_all_registered_replays_match(self):
        topos = {
            "cic_cm": nw.cic_cm_topology(),
            "bccr": nw.bccr_topology(),
            "cic3": nw.cic_topology(3),
        }
        for rid, rep in sorted(bg.REPLAYS.items()):
            out = bg.run_replay(rid, topos[rep.topology_builder])
            assert out.rendered == rep.expected, rid
            assert out.audit is not None

    def test_bad_rendering_rejected(self):
        topo = nw.cic_cm_topology()
        rep = bg.REPLAYS["eq65"]
        _, reduced = bg.enumerate_bound_templates(topo, mu_max=2)
        tpl = bg.find_reduced(reduced, **rep.selection)
        with pytest.raises(InconsistentIdentification):
            bg.specialize_bound(
                tpl, topo, rep.identification, rep.steps,
                [(("X1",), ("Y1",), ("X2", "U"))],  # wrong conditioning
            )

    def test_steps_numerically_sound(self):
        """Every audited rewrite of a sample replay is numerically an
        equality or a relaxation on random admissible distributions."""
        topo = nw.cic_cm_topology()
        ch = nw.both_see_all_channel(topo)
        rng = np.random.default_rng(23)
        rep = bg.REPLAYS["eq66"]
        _, reduced = bg.enumerate_bound_templates(topo, mu_max=2)
        tpl = bg.find_reduced(reduced, **rep.selection)
        base_terms = tpl.terms(topo.rx_names)
        out = bg.specialize_bound(tpl, topo, rep.identification, rep.steps,
                                  rep.rendering)
        for _ in range(10):
            pmf = random_admissible(rng, ch)
            joint = ic.induced_joint(pmf, ch)

            def val(terms):
                tot = 0.0
                for s, y, c in terms:
                    s2 = tuple(x for x in s if x in joint.variables)
                    c2 = tuple(x for x in c if x in joint.variables)
                    tot += cmi(joint, s2, y, c2)
                return tot

            before = val(base_terms)
            after = val([(t.s, t.y, t.c) for t in out.raw_terms])
            assert before <= after + 1e-9


def random_admissible(rng, channel, z_card=2, q_card=1):
    """Random member of the outer-bound distribution family."""
    topo = channel.topology
    msgs = topo.messages
    m_cards = {m: 2 for m in msgs}
    names = ["Q"] + list(msgs) + ["Z"] + list(topo.tx_names)
    cards = [q_card] + [m_cards[m] for m in msgs] + [z_card] + list(channel.input_cards)
    table = np.zeros(cards)
    z_cond = rng.dirichlet(np.ones(z_card),
                           size=int(np.prod([m_cards[m] for m in msgs])) * q_card)
    encoders = []
    for i in range(topo.k1):
        own = sorted(topo.tx_messages[i])
        n_in = q_card * int(np.prod([m_cards[m] for m in own]))
        encoders.append(rng.integers(0, channel.input_cards[i], size=n_in))
    msg_list = list(msgs)
    for q in range(q_card):
        for assign in itertools.product(*[range(m_cards[m]) for m in msg_list]):
            base = 1.0 / (q_card * np.prod([m_cards[m] for m in msg_list]))
            flat_idx = q
            for m, v in zip(msg_list, assign):
                flat_idx = flat_idx * m_cards[m] + v
            xs = []
            for i in range(topo.k1):
                own = sorted(topo.tx_messages[i])
                key = q
                for m in own:
                    key = key * m_cards[m] + assign[msg_list.index(m)]
                xs.append(int(encoders[i][key]))
            for z in range(z_card):
                idx = (q, *assign, z, *xs)
                table[idx] += base * z_cond[flat_idx, z]
    return ic.JointPmf(tuple(names), table)


class TestEvaluation:
    def test_hand_assembled_form3(self):
        ch = nw.cross_observation_channel(0.1, 0.15)
        topo = ch.topology
        rng = np.random.default_rng(1)
        pmf = random_admissible(rng, ch)
        _, reduced = bg.enumerate_bound_templates(topo, mu_max=2)
        t = bg.find_reduced(reduced, omega1=("M1",), omega2=("M2",), form=3)
        got = bg.evaluate_bound(t, ch, pmf)
        j = ic.induced_joint(pmf, ch)
        hand = cmi(j, ("M1",), ("Y1",), ("Z", "M2", "Q")) + \
            cmi(j, ("Z", "M2"), ("Y2",), ("Q",))
        assert got == pytest.approx(hand, abs=1e-12)

    def test_degenerate_z_full_template(self):
        topo = nw.cic_topology(2)
        y1 = nw.deterministic_receiver((2, 2), lambda a, b: a, 2)
        y2 = nw.deterministic_receiver((2, 2), lambda a, b: b, 2)
        ch = nw.channel_from_conditionals(topo, (2, 2), [y1, y2])
        rng = np.random.default_rng(2)
        pmf = random_admissible(rng, ch, z_card=1)
        full, _ = bg.enumerate_bound_templates(topo, mu_max=2)
        t = next(x for x in full if x.omegas1 == (("M1",),)
                 and x.omegas2 == (("M2",),) and x.omega_s == ())
        j = ic.induced_joint(pmf, ch)
        expect = cmi(j, ("M1",), ("Y1",), ("Z", "M2", "Q")) + \
            cmi(j, ("M2",), ("Y2",), ("Z", "Q"))
        assert bg.evaluate_bound(t, ch, pmf) == pytest.approx(expect, abs=1e-12)

    def test_min_tail_zero_when_z_independent(self):
        ch = nw.cross_observation_channel(0.1, 0.1)
        rng = np.random.default_rng(3)
        pmf = random_admissible(rng, ch, z_card=1)  # degenerate => independent
        full, _ = bg.enumerate_bound_templates(ch.topology, mu_max=1)
        t = next(x for x in full if x.omegas1 == (("M1",),) and x.omegas2 == ((),))
        j = ic.induced_joint(pmf, ch)
        tail = min(cmi(j, ("Z",), ("Y1",), ("Q",)), cmi(j, ("Z",), ("Y2",), ("Q",)))
        assert tail == pytest.approx(0.0, abs=1e-12)

    def test_factorization_gate(self):
        ch = nw.cross_observation_channel(0.1, 0.1)
        rng = np.random.default_rng(4)
        # non-uniform messages must be rejected
        names = ("Q", "M1", "M2", "Z", "X1", "X2")
        table = np.zeros((1, 2, 2, 1, 2, 2))
        table[0, 0, 0, 0, 0, 0] = 0.7
        table[0, 1, 1, 0, 1, 1] = 0.3
        with pytest.raises(FactorizationViolation):
            bg.evaluate_bound(
                bg.enumerate_bound_templates(ch.topology, 1)[1][0],
                ch, ic.JointPmf(names, table),
            )

    def test_lift_round_trip(self):
        ch = nw.cross_observation_channel(0.05, 0.1)
        g = 4
        inp = ic.JointPmf(("X1", "X2"), np.outer([0.25, 0.75], [0.5, 0.5]))
        lifted = bg.lift_grid_member(ch, inp, g)
        bg.validate_outer_pmf(lifted, ch.topology)
        jl = ic.induced_joint(lifted, ch)
        ji = ic.induced_joint(inp, ch)
        a = cmi(jl, ("M1",), ("Y1",), ("M2",))
        b = cmi(ji, ("X1",), ("Y1",), ("X2",))
        assert a == pytest.approx(b, abs=1e-12)

    def test_soundness_inner_vs_outer_per_pmf(self):
        ch = nw.cross_observation_channel(0.1, 0.15)
        _, reduced = bg.enumerate_bound_templates(ch.topology, mu_max=2)
        fam = ic.parse_factorization("P(X1)P(X2)", {"X1": 2, "X2": 2}, 4)
        worst = 0.0
        for member in ic.family_grid(fam):
            jm = ic.induced_joint(member, ch)
            rows = []
            for omega in (("M1",), ("M2",), ("M1", "M2")):
                xs = ["X1" if m == "M1" else "X2" for m in omega]
                rest = [x for x in ("X1", "X2") if x not in xs]
                bound = min(cmi(jm, xs, ("Y1",), rest), cmi(jm, xs, ("Y2",), rest))
                rows.append(({("R1" if m == "M1" else "R2"): 1 for m in omega}, bound))
            inner = rp.make_polytope(("R1", "R2"), rows)
            outer = bg.outer_polytope_at(ch, bg.lift_grid_member(ch, member, 4),
                                         reduced)
            for vtx in rp.enumerate_vertices(inner):
                worst = max(worst, float(np.max(outer.A @ vtx - outer.b)))
        assert worst <= 1e-9

    def test_template_json(self):
        topo = nw.cic_topology(2)
        full, reduced = bg.enumerate_bound_templates(topo, mu_max=1)
        import json

        doc = json.loads(bg.template_to_json(full[0]))
        assert doc["kind"] == "full" and "terms" in doc
        doc = json.loads(bg.template_to_json(reduced[0]))
        assert doc["kind"] == "reduced"
        assert all(t.startswith("I(") for t in doc["terms"])
