import math
from fractions import Fraction

import numpy as np
import pytest

from lplab import linear_code as lc
from lplab.errors import GraphMismatch, KBelowMaxOriginalDegree
from lplab.lp_decoder import build_polytope, decode_status, decode_with_excess
from lplab.witness import (build_tau, extend_by_zeros, find_witness, flow,
                           make_witness, repair_pipeline, superpose, trim,
                           verify_witness)


def single_check_graph(n=3):
    return lc.tanner_graph(lc.single_check(n))


def random_rational_llr(rng, n, lo=-16, hi=33):
    return [Fraction(int(rng.integers(lo, hi)), 8) for _ in range(n)]


class TestFlowAndVerify:
    def test_zero_witness_zero_flow(self):
        G = single_check_graph()
        w = make_witness(G, {(i, 0): 0 for i in range(3)})
        assert flow(w) == (0, 0, 0)
        assert verify_witness(w, [Fraction(1), Fraction(1), Fraction(1)])

    def test_single_check_flow_is_weights(self):
        G = single_check_graph()
        w = make_witness(G, {(0, 0): -1, (1, 0): 1, (2, 0): 1})
        assert flow(w) == (-1, 1, 1)

    def test_flow_linearity(self):
        rng = np.random.default_rng(3)
        G = lc.tanner_graph(lc.hamming_7_4())
        for _ in range(10):
            w1 = make_witness(G, {e: Fraction(int(rng.integers(-8, 9)), 4)
                                  for e in G.edges})
            w2 = make_witness(G, {e: Fraction(int(rng.integers(-8, 9)), 4)
                                  for e in G.edges})
            f = flow(superpose(w1, w2))
            assert f == tuple(a + b for a, b in zip(flow(w1), flow(w2)))

    def test_hand_example_verifies(self):
        G = single_check_graph()
        w = make_witness(G, {(0, 0): Fraction("-0.41"), (1, 0): Fraction("0.45"),
                             (2, 0): Fraction("0.45")})
        l = [Fraction("-0.4"), Fraction("0.5"), Fraction("0.5")]
        assert verify_witness(w, l)

    def test_hand_example_scaled_fails(self):
        G = single_check_graph()
        w = make_witness(G, {(0, 0): Fraction("-0.82"), (1, 0): Fraction("0.9"),
                             (2, 0): Fraction("0.9")})
        l = [Fraction("-0.4"), Fraction("0.5"), Fraction("0.5")]
        assert not verify_witness(w, l)  # F_2 = 0.9 >= 0.5

    def test_pairwise_violation_fails(self):
        G = single_check_graph()
        w = make_witness(G, {(0, 0): -1, (1, 0): Fraction(1, 2), (2, 0): 2})
        assert not verify_witness(w, [Fraction(0), Fraction(1), Fraction(3)])

    def test_strictness(self):
        G = single_check_graph()
        w = make_witness(G, {(0, 0): 0, (1, 0): 0, (2, 0): 0})
        assert not verify_witness(w, [Fraction(0), Fraction(1), Fraction(1)])


class TestFindWitness:
    def test_positive_llr_zero_witness(self):
        G = single_check_graph()
        found = find_witness(G, [Fraction(1), Fraction(2), Fraction(3)])
        assert found is not None
        w, slack = found
        # the zero witness already achieves slack min l_i = 1; the maximal
        # slack can only be larger
        assert slack >= 1
        assert verify_witness(w, [Fraction(1), Fraction(2), Fraction(3)])

    def test_spec_slack_value(self):
        G = single_check_graph()
        found = find_witness(G, [Fraction(-2, 5), Fraction(1, 2), Fraction(1, 2)])
        assert found is not None
        w, slack = found
        assert slack == Fraction(1, 20)
        assert verify_witness(w, [Fraction(-2, 5), Fraction(1, 2), Fraction(1, 2)])

    def test_none_when_decode_fails(self):
        G = single_check_graph()
        assert find_witness(G, [Fraction(-1), Fraction(1, 2), Fraction(1, 2)]) is None

    def test_soundness_random(self):
        rng = np.random.default_rng(11)
        for H in (lc.single_check(3), lc.hamming_7_4(),
                  lc.parity_check_matrix(4, [(0, 1), (1, 2), (2, 3)])):
            G = lc.tanner_graph(H)
            for _ in range(30):
                l = random_rational_llr(rng, G.n)
                found = find_witness(G, l)
                if found is not None:
                    w, slack = found
                    assert slack > 0
                    assert verify_witness(w, l)

    def test_matches_decode_success(self):
        rng = np.random.default_rng(13)
        for H in (lc.single_check(3), lc.hamming_7_4()):
            G = lc.tanner_graph(H)
            P = build_polytope(G)
            for _ in range(40):
                l = random_rational_llr(rng, G.n)
                assert (find_witness(G, l) is not None) == decode_status(P, l)

    def test_excess_slack_equivalence(self):
        rng = np.random.default_rng(17)
        G = lc.tanner_graph(lc.hamming_7_4())
        P = build_polytope(G)
        eps = Fraction(1, 4)
        for _ in range(30):
            l = random_rational_llr(rng, 7)
            shifted = [v - eps for v in l]
            assert (find_witness(G, shifted) is not None) == \
                decode_with_excess(P, l, eps).success

    def test_degree_one_check_capped_slack(self):
        G = lc.tanner_graph(lc.parity_check_matrix(2, [0b01, 0b10]))
        found = find_witness(G, [Fraction(-5), Fraction(-7)])
        assert found is not None  # trivial code decodes everything
        w, slack = found
        assert slack > 0


class TestSuperpose:
    def test_witness_sum_verifies_against_llr_sum(self):
        rng = np.random.default_rng(19)
        G = lc.tanner_graph(lc.hamming_7_4())
        done = 0
        while done < 10:
            l1 = random_rational_llr(rng, 7)
            l2 = random_rational_llr(rng, 7)
            f1, f2 = find_witness(G, l1), find_witness(G, l2)
            if f1 is None or f2 is None:
                continue
            combined = superpose(f1[0], f2[0])
            assert verify_witness(combined, [a + b for a, b in zip(l1, l2)])
            done += 1

    def test_zero_identity(self):
        G = single_check_graph()
        w = make_witness(G, {(0, 0): -1, (1, 0): 2, (2, 0): 1})
        z = make_witness(G, {e: 0 for e in G.edges})
        assert superpose(w, z).w == w.w

    def test_graph_mismatch(self):
        w1 = make_witness(single_check_graph(), {(i, 0): 0 for i in range(3)})
        G2 = lc.tanner_graph(lc.hamming_7_4())
        w2 = make_witness(G2, {e: 0 for e in G2.edges})
        with pytest.raises(GraphMismatch):
            superpose(w1, w2)


CHAIN4 = lc.parity_check_matrix(4, [(0, 1), (1, 2), (2, 3)])


class TestTrim:
    def test_no_removal_when_k_large(self):
        G = lc.full_redundant_graph(CHAIN4)  # has a weight-4 dual check
        w = make_witness(G, {e: Fraction(1, 8) for e in G.edges})
        trimmed, report = trim(w, 4, Fraction(1, 4), 2.0)
        assert report.removed_checks == ()
        assert report.risky == ()
        assert trimmed.graph.checks == G.checks

    def test_removal_and_risky_set(self):
        G = lc.full_redundant_graph(CHAIN4)
        j4 = G.checks.index((0, 1, 2, 3))
        weights = {e: Fraction(0) for e in G.edges}
        eps = Fraction(1, 4)
        weights[(0, j4)] = -eps          # variable 0 receives eps help
        weights[(1, j4)] = eps
        weights[(2, j4)] = eps
        weights[(3, j4)] = eps
        w = make_witness(G, weights)
        trimmed, report = trim(w, 2, eps, 2.0)
        assert j4 in report.removed_checks
        assert report.risky == (0,)
        assert report.removed_flow[0] == eps
        assert all(len(c) <= 2 for c in trimmed.graph.checks)

    def test_k_below_base_degree_rejected(self):
        G = lc.full_redundant_graph(CHAIN4)
        w = make_witness(G, {e: 0 for e in G.edges})
        with pytest.raises(KBelowMaxOriginalDegree):
            trim(w, 1, Fraction(1, 4), 2.0)

    def test_bound_rhs_value(self):
        G = lc.full_redundant_graph(lc.hamming_7_4())
        w = make_witness(G, {e: 0 for e in G.edges})
        _, report = trim(w, 4, Fraction(1, 5), 2.0)
        assert report.bound_rhs == pytest.approx(2 * 7 * 2.0 / (0.2 * 3))
        assert report.bound_holds and not report.flagged

    def test_primitivity_diagnostics(self):
        G = lc.full_redundant_graph(CHAIN4)
        j4 = G.checks.index((0, 1, 2, 3))
        weights = {e: Fraction(0) for e in G.edges}
        weights[(0, j4)] = Fraction(1, 2)   # payment by a negative-LLR variable
        weights[(1, j4)] = Fraction(1, 2)
        w = make_witness(G, weights)
        l = [Fraction(-1), Fraction(2), Fraction(2), Fraction(2)]
        _, report = trim(w, 2, Fraction(1, 4), 2.0, l=l)
        assert 0 in report.outflow_from_vminus
        assert report.inflow_to_vplus == ()


class TestBuildTau:
    def test_no_risky(self):
        tau = build_tau((), 0.2, 2.0, 3)
        assert np.allclose(tau.values, 0.1)

    def test_spec_example(self):
        tau = build_tau((0,), 0.2, 2.0, 3)
        assert np.allclose(tau.values, [-2.0, 0.1, 0.1])

    def test_all_risky(self):
        tau = build_tau((0, 1), 0.3, 1.5, 2)
        assert np.allclose(tau.values, [-1.5, -1.5])


class TestRepairPipeline:
    def test_hamming_end_to_end(self):
        H = lc.hamming_7_4()
        G = lc.tanner_graph(H)
        G_bar = lc.full_redundant_graph(H)
        G_k = lc.redundant_graph(H, 4)
        eps = Fraction(1, 5)
        llr_inf = 2.0
        rng = np.random.default_rng(23)
        repaired = 0
        for _ in range(40):
            l = [Fraction(int(rng.integers(-4, 17)), 8) for _ in range(7)]
            shifted = [v - eps for v in l]
            found = find_witness(G_bar, shifted)
            if found is None:
                continue
            result = repair_pipeline(G, G_k, found[0], l, eps, llr_inf)
            if result is not None:
                assert verify_witness(result, l)
                repaired += 1
        assert repaired > 5

    def test_no_tau_witness_returns_none(self):
        # risky set covering everything makes tau undecodable on the base graph
        H = lc.single_check(3)
        G = lc.tanner_graph(H)
        G_bar = lc.full_redundant_graph(H)  # same single check
        eps = Fraction(1, 4)
        weights = {(0, 0): -eps, (1, 0): eps, (2, 0): eps}
        w = make_witness(G_bar, weights)
        # force a fake trim scenario: k below the only check degree is not
        # allowed, so exercise the tau-failure branch directly instead
        tau = build_tau((0, 1, 2), float(eps), 2.0, 3)
        assert find_witness(G, tau) is None


class TestExtendByZeros:
    def test_extension_preserves_weights(self):
        H = lc.hamming_7_4()
        G = lc.tanner_graph(H)
        G_bar = lc.full_redundant_graph(H)
        w = make_witness(G, {e: Fraction(1, 3) for e in G.edges})
        ext = extend_by_zeros(w, G_bar)
        target = {sup: j for j, sup in enumerate(G_bar.checks)}
        for j, sup in enumerate(G.checks):
            for i in sup:
                assert ext.weight(i, target[sup]) == Fraction(1, 3)
        total = sum(ext.w.values())
        assert total == sum(w.w.values())

    def test_missing_check_rejected(self):
        G = single_check_graph(3)
        w = make_witness(G, {(i, 0): 1 for i in range(3)})
        other = lc.tanner_graph(lc.parity_check_matrix(3, [(0, 1)]))
        with pytest.raises(GraphMismatch):
            extend_by_zeros(w, other)
