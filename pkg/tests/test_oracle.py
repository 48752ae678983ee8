"""Checks on the dense-amplitude verifier itself.

The verifier is the referee for the adjacency-level fusion rule, so it gets
its own scrutiny: state construction against textbook identities, operator
algebra, and a deliberately broken merge rule to prove the referee can
actually call a foul.
"""

import itertools
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from graphforge.graph import GraphState
from graphforge.oracle import (
    DEFAULT_QUBIT_CAP,
    FID_MIN,
    PROB_TOL,
    PROJECTOR_LABELS,
    StateVector,
    apply_local,
    fidelity,
    make_graph_state,
    project,
    sweep_verify,
    verify_fusion_rule,
)


@st.composite
def graph_with_free_pair(draw):
    n = draw(st.integers(min_value=2, max_value=6))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.integers(min_value=0, max_value=2 ** len(pairs) - 1))
    edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
    g = GraphState.from_edges(range(n), edges)
    free = [pq for pq in pairs if not g.has_edge(*pq)]
    assume(free)
    u, v = free[draw(st.integers(min_value=0, max_value=len(free) - 1))]
    return g, u, v


class TestStateConstruction:
    def test_edgeless_graph_is_plus_product(self):
        sv = make_graph_state(GraphState.from_edges(range(3), []))
        np.testing.assert_allclose(sv.amps, np.full(8, 2.0 ** -1.5))

    def test_single_edge_flips_only_the_11_amplitude(self):
        sv = make_graph_state(GraphState.from_edges(range(2), [(0, 1)]))
        np.testing.assert_allclose(sv.amps, [0.5, 0.5, 0.5, -0.5])

    @settings(max_examples=40, deadline=None)
    @given(graph_with_free_pair())
    def test_amplitudes_have_uniform_magnitude(self, gp):
        g, _, _ = gp
        sv = make_graph_state(g)
        np.testing.assert_allclose(np.abs(sv.amps), 2.0 ** (-g.num_vertices / 2.0),
                                   atol=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(graph_with_free_pair())
    def test_every_vertex_stabilizer_fixes_the_state(self, gp):
        # X on a vertex with Z on each neighbor must leave the state untouched,
        # eigenvalue exactly +1
        g, _, _ = gp
        order = sorted(g.vertices)
        axis = {vid: i for i, vid in enumerate(order)}
        sv = make_graph_state(g)
        for a in order:
            hit = apply_local(sv, "X", axis[a])
            for b in sorted(g.neighbors(a)):
                hit = apply_local(hit, "Z", axis[b])
            np.testing.assert_allclose(hit.amps, sv.amps, atol=1e-12)

    def test_qubit_cap_enforced(self):
        big = GraphState.from_edges(range(DEFAULT_QUBIT_CAP + 1), [])
        with pytest.raises(ValueError, match="cap"):
            make_graph_state(big)
        assert make_graph_state(big, cap=DEFAULT_QUBIT_CAP + 1).n == DEFAULT_QUBIT_CAP + 1

    def test_amplitude_count_must_match(self):
        with pytest.raises(ValueError):
            StateVector(2, np.zeros(3, dtype=np.complex128))


class TestLocalOperations:
    @pytest.mark.parametrize("which", ["X", "Z", "H"])
    def test_each_operator_is_an_involution(self, which):
        sv = make_graph_state(GraphState.from_edges(range(3), [(0, 1), (1, 2)]))
        twice = apply_local(apply_local(sv, which, 1), which, 1)
        np.testing.assert_allclose(twice.amps, sv.amps, atol=1e-12)

    def test_hadamard_rotates_plus_to_zero(self):
        sv = make_graph_state(GraphState.from_edges(range(1), []))
        out = apply_local(sv, "H", 0)
        np.testing.assert_allclose(out.amps, [1.0, 0.0], atol=1e-12)

    def test_unknown_operator_rejected(self):
        sv = make_graph_state(GraphState.from_edges(range(2), []))
        with pytest.raises(ValueError, match="X, Z or H"):
            apply_local(sv, "Y", 0)

    def test_qubit_out_of_range(self):
        sv = make_graph_state(GraphState.from_edges(range(2), []))
        with pytest.raises(IndexError):
            apply_local(sv, "X", 2)

    def test_fidelity_needs_matching_sizes(self):
        a = make_graph_state(GraphState.from_edges(range(2), []))
        b = make_graph_state(GraphState.from_edges(range(3), []))
        with pytest.raises(ValueError):
            fidelity(a, b)


class TestOutcomeAlgebra:
    """Identities that must hold for any graph and any fusable pair."""

    @staticmethod
    def _conjugated(g, u, v):
        order = sorted(g.vertices)
        return apply_local(make_graph_state(g), "X", order.index(u)), \
            order.index(u), order.index(v)

    @settings(max_examples=40, deadline=None)
    @given(graph_with_free_pair())
    def test_each_outcome_carries_a_quarter(self, gp):
        g, u, v = gp
        sv, iu, iv = self._conjugated(g, u, v)
        probs = {lbl: project(sv, lbl, iu, iv)[0] for lbl in PROJECTOR_LABELS}
        assert abs(sum(probs.values()) - 1.0) <= PROB_TOL
        for lbl in PROJECTOR_LABELS:
            assert abs(probs[lbl] - 0.25) <= PROB_TOL

    @settings(max_examples=40, deadline=None)
    @given(graph_with_free_pair())
    def test_post_states_normalized_and_mutually_orthogonal(self, gp):
        g, u, v = gp
        sv, iu, iv = self._conjugated(g, u, v)
        posts = []
        for lbl in PROJECTOR_LABELS:
            _, post = project(sv, lbl, iu, iv)
            assert post is not None
            assert abs(post.norm() - 1.0) <= 1e-12
            posts.append(post)
        for a, b in itertools.combinations(posts, 2):
            assert abs(np.vdot(a.amps, b.amps)) <= 1e-12

    def test_projector_reapplication(self):
        g = GraphState.from_edges(range(4), [(0, 1), (1, 2), (2, 3)])
        sv, iu, iv = self._conjugated(g, 0, 3)
        # p00 is a true projector: applying it to its own output is certain
        _, post = project(sv, "p00", iu, iv)
        prob2, again = project(post, "p00", iu, iv)
        assert abs(prob2 - 1.0) <= 1e-12
        np.testing.assert_allclose(again.amps, post.amps, atol=1e-12)
        # the success operator is not: it eats a factor 1/sqrt2 each pass
        # but leaves the direction alone
        _, post = project(sv, "plus", iu, iv)
        prob2, again = project(post, "plus", iu, iv)
        assert abs(prob2 - 0.5) <= 1e-12
        np.testing.assert_allclose(again.amps, post.amps, atol=1e-12)

    def test_same_qubit_twice_rejected(self):
        sv = make_graph_state(GraphState.from_edges(range(2), []))
        with pytest.raises(ValueError, match="differ"):
            project(sv, "p00", 1, 1)

    def test_unknown_outcome_rejected(self):
        sv = make_graph_state(GraphState.from_edges(range(2), []))
        with pytest.raises(ValueError, match="proj"):
            project(sv, "bell", 0, 1)

    def test_qubit_pair_out_of_range(self):
        sv = make_graph_state(GraphState.from_edges(range(2), []))
        with pytest.raises(IndexError):
            project(sv, "p00", 0, 5)


class TestNamedCases:
    def test_isolated_pair(self):
        # no neighborhoods at all; both success signatures still fire at 1/4
        g = GraphState.from_edges(range(2), [])
        report = verify_fusion_rule(g, 0, 1)
        assert report.passed
        assert report.sym_diff_empty
        for lbl in PROJECTOR_LABELS:
            assert abs(report.probabilities[lbl] - 0.25) <= PROB_TOL
        assert report.worst_fidelity() >= FID_MIN

    def test_chain_end_to_end(self):
        g = GraphState.from_edges(range(4), [(0, 1), (1, 2), (2, 3)])
        report = verify_fusion_rule(g, 0, 3)
        assert report.passed
        assert not report.sym_diff_empty
        assert report.num_qubits == 4
        assert report.pair == (0, 3)

    def test_shared_neighbor_pair(self):
        # neighborhoods cancel exactly; the merge strands the common neighbor
        g = GraphState.from_edges(range(3), [(0, 2), (1, 2)])
        report = verify_fusion_rule(g, 0, 1)
        assert report.passed
        assert report.sym_diff_empty
        assert all(f is not None and f >= FID_MIN for f in report.fidelities.values())

    def test_adjacent_pair_refused(self):
        g = GraphState.from_edges(range(2), [(0, 1)])
        with pytest.raises(ValueError):
            verify_fusion_rule(g, 0, 1)


class TestMutationControl:
    """A broken merge rule must be flagged, or the verifier proves nothing."""

    def test_union_instead_of_symmetric_difference_is_caught(self, monkeypatch):
        real = GraphState.fuse_success

        def union_merge(self, u, v):
            joined = (self.neighbors(u) | self.neighbors(v)) - {u, v}
            rep = real(self, u, v)
            for w in joined:
                self.add_edge(rep.fused_vertex, w)
            return rep

        monkeypatch.setattr(GraphState, "fuse_success", union_merge)
        g = GraphState.from_edges(range(3), [(0, 2), (1, 2)])
        report = verify_fusion_rule(g, 0, 1)
        assert not report.passed
        assert min(report.fidelities["plus"], report.fidelities["minus"]) < FID_MIN

    def test_broken_rule_shows_up_in_sweep_accounting(self, monkeypatch):
        real = GraphState.fuse_success

        def union_merge(self, u, v):
            joined = (self.neighbors(u) | self.neighbors(v)) - {u, v}
            rep = real(self, u, v)
            for w in joined:
                self.add_edge(rep.fused_vertex, w)
            return rep

        monkeypatch.setattr(GraphState, "fuse_success", union_merge)
        summary = sweep_verify(max_qubits=3, samples=0, enum_max=3)
        assert not summary.passed
        assert summary.cases_passed < summary.cases_run
        assert summary.failures
        assert len(summary.failures) <= 20
        sample = summary.failures[0]
        assert set(sample) == {"vertices", "edges", "pair", "probabilities", "fidelities"}


class TestSweep:
    def test_small_sweep_is_clean(self):
        summary = sweep_verify(max_qubits=4, samples=30, seed=11, enum_max=3)
        assert summary.passed
        assert summary.cases_run == summary.cases_passed > 20
        assert summary.skipped_adjacent > 0
        assert summary.worst_fidelity >= FID_MIN
        assert summary.max_probability_error <= PROB_TOL
        assert summary.failures == []

    def test_sweep_is_reproducible(self):
        a = sweep_verify(max_qubits=4, samples=10, seed=3, enum_max=2)
        b = sweep_verify(max_qubits=4, samples=10, seed=3, enum_max=2)
        assert a == b

    def test_sweep_respects_the_cap(self):
        with pytest.raises(ValueError, match="cap"):
            sweep_verify(max_qubits=DEFAULT_QUBIT_CAP + 1)
