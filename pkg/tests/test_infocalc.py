import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ifnetlab import infocalc as ic
from ifnetlab import networks as nw
from ifnetlab.errors import NegativeSnr, OverlappingSets, SpecCycle, VariableUnknown


def bsc_joint(eps, p1=0.5):
    t = np.array(
        [[p1 * (1 - eps), p1 * eps], [(1 - p1) * eps, (1 - p1) * (1 - eps)]]
    )
    return ic.JointPmf(("X", "Y"), t)


def h2(p):
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


class TestConditionalMutualInformation:
    def test_noiseless_bit(self):
        assert ic.mutual_information(bsc_joint(0.0), ("X",), ("Y",)) == pytest.approx(1.0, abs=1e-12)

    def test_pure_noise(self):
        assert ic.mutual_information(bsc_joint(0.5), ("X",), ("Y",)) == pytest.approx(0.0, abs=1e-12)

    def test_bsc_011(self):
        # independent oracle: 1 - H2(0.11) evaluated directly
        expected = 1.0 - h2(0.11)
        assert ic.mutual_information(bsc_joint(0.11), ("X",), ("Y",)) == pytest.approx(expected, abs=1e-12)

    def test_unknown_variable(self):
        with pytest.raises(VariableUnknown):
            ic.conditional_mutual_information(bsc_joint(0.1), ("Z",), ("Y",))

    def test_overlap(self):
        with pytest.raises(OverlappingSets):
            ic.conditional_mutual_information(bsc_joint(0.1), ("X",), ("X",))


@st.composite
def random_joint(draw, max_card=3, nvars=3):
    cards = [draw(st.integers(2, max_card)) for _ in range(nvars)]
    size = int(np.prod(cards))
    raw = draw(
        st.lists(st.floats(0.01, 1.0), min_size=size, max_size=size)
    )
    t = np.asarray(raw)
    t = t / t.sum()
    return ic.JointPmf(("A", "B", "C"), t.reshape(cards))


@settings(max_examples=40, deadline=None)
@given(random_joint())
def test_chain_rule(pmf):
    lhs = ic.conditional_mutual_information(pmf, ("A", "B"), ("C",))
    rhs = ic.conditional_mutual_information(pmf, ("A",), ("C",)) + \
        ic.conditional_mutual_information(pmf, ("B",), ("C",), ("A",))
    assert lhs == pytest.approx(rhs, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(random_joint())
def test_symmetry(pmf):
    assert ic.conditional_mutual_information(pmf, ("A",), ("B",), ("C",)) == \
        ic.conditional_mutual_information(pmf, ("B",), ("A",), ("C",))


class TestSimplexGrid:
    def test_binary_g2(self):
        pts = list(ic.simplex_grid(2, 2))
        assert [tuple(p) for p in pts] == [(0.0, 1.0), (0.5, 0.5), (1.0, 0.0)]

    def test_vertices(self):
        pts = list(ic.simplex_grid(3, 1))
        assert len(pts) == 3
        assert all(p.max() == 1.0 for p in pts)

    def test_count_card2_g8(self):
        assert len(list(ic.simplex_grid(2, 8))) == 9 == ic.simplex_grid_count(2, 8)


class TestFamilyGrid:
    def test_product_binary_g2(self):
        spec = ic.parse_factorization("P(X1)P(X2)", {"X1": 2, "X2": 2}, 2)
        members = list(ic.family_grid(spec))
        assert len(members) == 9

    def test_vertex_family_factorizes(self):
        spec = ic.parse_factorization(
            "P(W)P(X1|W)P(X2|W)", {"W": 2, "X1": 2, "X2": 2}, 1
        )
        members = list(ic.family_grid(spec))
        assert len(members) == ic.family_grid_count(spec)
        for m in members:
            assert ic.check_factorization(m, spec) <= 1e-12

    def test_joint_card4_g4(self):
        spec = ic.FamilySpec((ic.Factor(("X",), ()),), {"X": 4}, 4)
        assert ic.family_grid_count(spec) == 35
        assert sum(1 for _ in ic.family_grid(spec)) == 35

    def test_cycle_rejected(self):
        with pytest.raises(SpecCycle):
            ic.FamilySpec(
                (ic.Factor(("A",), ("B",)), ic.Factor(("B",), ("A",))),
                {"A": 2, "B": 2},
            )

    def test_chunks_match_iterator(self):
        spec = ic.parse_factorization("P(W)P(X1|W)", {"W": 2, "X1": 2}, 2)
        stacked = np.concatenate(list(ic.family_grid_batched(spec, chunk=5)))
        listed = np.stack([m.table for m in ic.family_grid(spec)])
        assert np.max(np.abs(stacked - listed)) == 0.0


class TestInducedJoint:
    def test_xor(self):
        topo = nw.cic_topology(2)
        y1 = nw.deterministic_receiver((2, 2), lambda a, b: a ^ b, 2)
        y2 = nw.deterministic_receiver((2, 2), lambda a, b: b, 2)
        ch = nw.channel_from_conditionals(topo, (2, 2), [y1, y2])
        u = ic.JointPmf(("X1", "X2"), np.full((2, 2), 0.25))
        j = ic.induced_joint(u, ch)
        assert ic.mutual_information(j, ("X1",), ("Y1",)) == pytest.approx(0.0, abs=1e-12)
        assert ic.conditional_mutual_information(j, ("X1",), ("Y1",), ("X2",)) == pytest.approx(1.0, abs=1e-12)

    def test_point_mass_gives_channel_row(self, swap_channel):
        t = np.zeros((2, 2))
        t[1, 0] = 1.0
        j = ic.induced_joint(ic.JointPmf(("X1", "X2"), t), swap_channel)
        marg = j.marginal(("Y1", "Y2")).table
        assert marg[0, 1] == pytest.approx(1.0)

    def test_common_cloud(self):
        topo = nw.cic_topology(2)
        y1 = nw.deterministic_receiver((2, 2), lambda a, b: a, 2)
        y2 = nw.deterministic_receiver((2, 2), lambda a, b: b, 2)
        ch = nw.channel_from_conditionals(topo, (2, 2), [y1, y2])
        t = np.zeros((2, 2, 2))
        t[0, 0, 0] = 0.5
        t[1, 1, 1] = 0.5
        j = ic.induced_joint(ic.JointPmf(("W", "X1", "X2"), t), ch)
        assert ic.mutual_information(j, ("W",), ("Y1",)) == pytest.approx(1.0, abs=1e-12)

    def test_data_processing(self, swap_channel):
        rng = np.random.default_rng(0)
        for _ in range(20):
            t = rng.dirichlet(np.ones(16)).reshape(2, 2, 2, 2)
            j = ic.induced_joint(ic.JointPmf(("D", "E", "X1", "X2"), t), swap_channel)
            lhs = ic.mutual_information(j, ("D",), ("Y1", "Y2"))
            rhs = ic.mutual_information(j, ("X1", "X2"), ("Y1", "Y2"))
            assert lhs <= rhs + 1e-9


class TestGaussian:
    def test_psi_values(self):
        assert ic.gaussian_psi(0) == 0.0
        assert ic.gaussian_psi(1) == pytest.approx(0.5)
        assert ic.gaussian_psi(3) == pytest.approx(1.0)
        with pytest.raises(NegativeSnr):
            ic.gaussian_psi(-0.1)

    def test_single_link(self):
        net = nw.gaussian_cic(0.0, 0.0)
        cov = ic.GaussianCovariance(np.eye(2))
        assert ic.gaussian_mutual_information(net, cov, [0], [0], []) == pytest.approx(0.5)

    def test_zero_gain_row(self):
        net = nw.GaussianNetwork(
            nw.cic_topology(2), np.array([[0.0, 0.0], [1.0, 1.0]]), (1.0, 1.0)
        )
        cov = ic.GaussianCovariance(np.eye(2))
        assert ic.gaussian_mutual_information(net, cov, [0, 1], [0], []) == pytest.approx(0.0, abs=1e-12)

    def test_cross_link_conditional(self):
        # standard form with a=2, b=0.5: I(X1;Y2|X2) = psi(0.25)
        net = nw.gaussian_cic(2.0, 0.5)
        cov = ic.GaussianCovariance(np.eye(2))
        got = ic.gaussian_mutual_information(net, cov, [0], [1], [1])
        assert got == pytest.approx(ic.gaussian_psi(0.25), abs=1e-12)

    def test_quadrature_oracle(self):
        # single-output differential entropies via numeric integration
        from scipy.integrate import quad

        rng = np.random.default_rng(3)
        for _ in range(10):
            g = rng.uniform(0.3, 2.0, size=2)
            p = rng.uniform(0.3, 2.0, size=2)
            net = nw.GaussianNetwork(
                nw.cic_topology(2), np.array([g, g * 0 + 1.0]), tuple(p)
            )
            cov = ic.GaussianCovariance(np.diag(p))
            got = ic.gaussian_mutual_information(net, cov, [0, 1], [0], [])

            var_y = g[0] ** 2 * p[0] + g[1] ** 2 * p[1] + 1.0

            def neg_ent(pdf, lo, hi):
                val, _ = quad(
                    lambda y: -pdf(y) * math.log2(max(pdf(y), 1e-300)), lo, hi,
                    limit=200,
                )
                return val

            pdf = lambda y: math.exp(-y * y / (2 * var_y)) / math.sqrt(2 * math.pi * var_y)
            h_y = neg_ent(pdf, -12 * math.sqrt(var_y), 12 * math.sqrt(var_y))
            pdfz = lambda y: math.exp(-y * y / 2) / math.sqrt(2 * math.pi)
            h_z = neg_ent(pdfz, -12, 12)
            assert got == pytest.approx(h_y - h_z, abs=1e-3)
