"""Exact dense-amplitude check of the fusion rule, from first principles.

The graph-level fusion semantics in :mod:`graphforge.graph` are a claim
about quantum states.  This module re-derives every fusion outcome the slow
way: build the full graph state as amplitudes (one qubit in (|0>+|1>)/sqrt2
per vertex, a controlled-Z per edge), conjugate one marked qubit with X,
apply each of the four two-qubit measurement outcomes, correct the
success branches (X, conditional Z, Hadamard), and compare the result
against the graph state of the graph the fusion rule *predicts*.  The
comparison is by fidelity up to global phase; distinct graphs give
distinct graph states, so fidelity 1 certifies the predicted graph
exactly.

Outcome algebra on the X-conjugated state, with u, v the marked pair and
|X> the graph state of the remainder.  Each outcome has probability 1/4
for every graph and every fusable pair:

* ``p00``: remainder left in Z(N(u))|X>.
* ``p11``: remainder left in Z(N(v))|X>.
* ``plus``/``minus``: post-state (|10> +- |01> Z(N(u))Z(N(v)))|X>/sqrt2.
  The detection signature fixes parity and phase without revealing which
  qubit is up, so the |10>/|01> coherence survives; after corrections this
  is exactly the graph state of the fused graph with the merged vertex at
  u's slot and the fresh leaf at v's.

Everything here is deliberately independent of the production fusion code:
amplitudes never consult adjacency rewriting, only state algebra.  The two
meet only in the final fidelity comparison.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .graph import GraphState

#: Dense amplitudes double per qubit; this cap keeps one vector under 256 KiB.
DEFAULT_QUBIT_CAP = 14

#: Tolerance for probability identities (sums, per-outcome values).
PROB_TOL = 1e-12

#: Minimum fidelity for a branch to count as matching its prediction.
FID_MIN = 1.0 - 1e-10

PROJECTOR_LABELS = ("p00", "p11", "plus", "minus")

_SQRT_HALF = 1.0 / math.sqrt(2.0)


class StateVector:
    """Normalized amplitudes over n qubits; qubit i is axis i of the tensor."""

    __slots__ = ("n", "amps")

    def __init__(self, n: int, amps: np.ndarray):
        if amps.shape != (2**n,):
            raise ValueError(f"expected {2**n} amplitudes for {n} qubits, got {amps.shape}")
        self.n = n
        self.amps = amps

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def tensor(self) -> np.ndarray:
        return self.amps.reshape((2,) * self.n)

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amps.copy())


def make_graph_state(g: GraphState, cap: int = DEFAULT_QUBIT_CAP) -> StateVector:
    """Graph state of g: |+> per vertex, CZ per edge; qubits ordered by id."""
    order = sorted(g.vertices)
    n = len(order)
    if n > cap:
        raise ValueError(f"{n} qubits exceeds the cap of {cap}")
    axis = {vid: i for i, vid in enumerate(order)}
    amps = np.full(2**n, 2.0 ** (-n / 2.0), dtype=np.complex128)
    t = amps.reshape((2,) * n)
    for a, b in g.edges():
        idx = [slice(None)] * n
        idx[axis[a]] = 1
        idx[axis[b]] = 1
        t[tuple(idx)] *= -1.0
    return StateVector(n, amps)


def apply_local(sv: StateVector, which: str, qubit: int) -> StateVector:
    """Single-qubit X, Z, or H; returns a new vector."""
    if not 0 <= qubit < sv.n:
        raise IndexError(f"qubit {qubit} out of range for {sv.n} qubits")
    t = np.moveaxis(sv.tensor(), qubit, 0)
    if which == "X":
        out = t[::-1].copy()
    elif which == "Z":
        out = t.copy()
        out[1] *= -1.0
    elif which == "H":
        out = np.stack(((t[0] + t[1]) * _SQRT_HALF, (t[0] - t[1]) * _SQRT_HALF))
    else:
        raise ValueError(f"which must be X, Z or H, got {which!r}")
    return StateVector(sv.n, np.moveaxis(out, 0, qubit).reshape(-1).copy())


def project(sv: StateVector, proj: str, u: int, v: int,
            ) -> tuple[float, StateVector | None]:
    """Apply one of the four measurement outcomes on qubits (u, v).

    ``p00`` and ``p11`` are plain projectors onto |00> and |11>.  The two
    success signatures act as (|10><10| +- |01><01|)/sqrt2: the detection
    pattern reveals odd parity and a relative phase but not which qubit
    is up, so the coherence between |10> and |01> survives.  That surviving
    coherence is what carries the neighborhood bonds through the merge; a
    rank-one Bell projection here would strip them.  The four operators
    still resolve the identity and give the same outcome probabilities.

    Returns the outcome probability and the normalized post-state, or None
    in place of the state when the probability is below 1e-14.
    """
    if u == v:
        raise ValueError("projector qubits must differ")
    if not (0 <= u < sv.n and 0 <= v < sv.n):
        raise IndexError(f"qubits ({u}, {v}) out of range for {sv.n} qubits")
    t = np.moveaxis(sv.tensor(), (u, v), (0, 1))
    out = np.zeros_like(t)
    if proj == "p00":
        out[0, 0] = t[0, 0]
    elif proj == "p11":
        out[1, 1] = t[1, 1]
    elif proj in ("plus", "minus"):
        sign = 1.0 if proj == "plus" else -1.0
        out[1, 0] = t[1, 0] * _SQRT_HALF
        out[0, 1] = sign * t[0, 1] * _SQRT_HALF
    else:
        raise ValueError(f"proj must be one of {PROJECTOR_LABELS}, got {proj!r}")
    prob = float(np.sum(np.abs(out) ** 2))
    if prob < 1e-14:
        return prob, None
    post = np.moveaxis(out, (0, 1), (u, v)).reshape(-1).copy()
    post /= math.sqrt(prob)
    return prob, StateVector(sv.n, post)


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|: global-phase-insensitive overlap magnitude."""
    if a.n != b.n:
        raise ValueError("qubit counts differ")
    return float(abs(np.vdot(a.amps, b.amps)))


@dataclass(frozen=True)
class VerificationReport:
    """Per-outcome probabilities and prediction fidelities for one fusion."""

    num_qubits: int
    pair: tuple[int, int]
    sym_diff_empty: bool
    probabilities: dict[str, float]
    fidelities: dict[str, float | None]
    passed: bool

    def worst_fidelity(self) -> float:
        vals = [f for f in self.fidelities.values() if f is not None]
        return min(vals) if vals else 1.0


# constant for every graph and pair: the signature operators do not interfere
# the |10> and |01> blocks, so each success outcome carries exactly half of
# the odd-parity weight
_EXPECTED_PROBABILITIES = {"p00": 0.25, "p11": 0.25, "plus": 0.25, "minus": 0.25}


def _success_prediction(g: GraphState, u: int, v: int) -> StateVector:
    gc = g.copy()
    rep = gc.fuse_success(u, v)
    relabel = {rep.fused_vertex: u, rep.leaf_vertex: v}
    edges = [(relabel.get(a, a), relabel.get(b, b)) for a, b in gc.edges()]
    pred = GraphState.from_edges(sorted(g.vertices), edges)
    return make_graph_state(pred)


def _failure_prediction(g: GraphState, u: int, v: int, outcome_bit: int) -> StateVector:
    order = sorted(g.vertices)
    iu, iv = order.index(u), order.index(v)
    byproduct = g.neighbors(u) if outcome_bit == 0 else g.neighbors(v)
    gc = g.copy()
    gc.fuse_failure(u, v)
    small = make_graph_state(gc)
    small_order = sorted(gc.vertices)
    for w in sorted(byproduct):
        small = apply_local(small, "Z", small_order.index(w))
    # embed the remnant back into the full register with u, v in |bb>
    n = len(order)
    full = np.zeros((2,) * n, dtype=np.complex128)
    idx = [slice(None)] * n
    idx[iu] = outcome_bit
    idx[iv] = outcome_bit
    full[tuple(idx)] = small.tensor()
    return StateVector(n, full.reshape(-1))


def verify_fusion_rule(g: GraphState, u: int, v: int,
                       cap: int = DEFAULT_QUBIT_CAP) -> VerificationReport:
    """Measure one fusion event exactly and compare against the graph rule.

    Builds the graph state including u and v, conjugates u with X, applies
    all four projectors, corrects the success branches (X on u, Z on u for
    the minus signature, H on v), and scores each branch's fidelity against
    the independently constructed predicted graph state.
    """
    g.check_fusable(u, v)
    order = sorted(g.vertices)
    iu, iv = order.index(u), order.index(v)
    sym_diff_empty = (g.neighbors(u) ^ g.neighbors(v)) == set()

    sv = apply_local(make_graph_state(g, cap=cap), "X", iu)
    expected = _EXPECTED_PROBABILITIES
    probabilities: dict[str, float] = {}
    fidelities: dict[str, float | None] = {}

    success_target = _success_prediction(g, u, v)
    for label in PROJECTOR_LABELS:
        prob, post = project(sv, label, iu, iv)
        probabilities[label] = prob
        if post is None:
            fidelities[label] = None
            continue
        if label in ("plus", "minus"):
            corrected = apply_local(post, "X", iu)
            if label == "minus":
                corrected = apply_local(corrected, "Z", iu)
            corrected = apply_local(corrected, "H", iv)
            fidelities[label] = fidelity(corrected, success_target)
        else:
            target = _failure_prediction(g, u, v, 0 if label == "p00" else 1)
            fidelities[label] = fidelity(post, target)

    prob_ok = all(abs(probabilities[k] - expected[k]) <= PROB_TOL for k in PROJECTOR_LABELS)
    sum_ok = abs(sum(probabilities.values()) - 1.0) <= PROB_TOL
    fid_ok = all(f is None or f >= FID_MIN for f in fidelities.values())
    return VerificationReport(
        num_qubits=len(order),
        pair=(u, v),
        sym_diff_empty=sym_diff_empty,
        probabilities=probabilities,
        fidelities=fidelities,
        passed=prob_ok and sum_ok and fid_ok,
    )


@dataclass
class SweepSummary:
    cases_run: int = 0
    cases_passed: int = 0
    skipped_adjacent: int = 0
    worst_fidelity: float = 1.0
    max_probability_error: float = 0.0
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.cases_run > 0 and self.cases_passed == self.cases_run

    def record(self, g: GraphState, u: int, v: int, report: VerificationReport) -> None:
        self.cases_run += 1
        self.worst_fidelity = min(self.worst_fidelity, report.worst_fidelity())
        expected = _EXPECTED_PROBABILITIES
        err = max(abs(report.probabilities[k] - expected[k]) for k in PROJECTOR_LABELS)
        self.max_probability_error = max(self.max_probability_error, err)
        if report.passed:
            self.cases_passed += 1
        elif len(self.failures) < 20:
            self.failures.append({
                "vertices": list(g.vertices),
                "edges": [list(e) for e in g.edges()],
                "pair": [u, v],
                "probabilities": report.probabilities,
                "fidelities": report.fidelities,
            })


def _all_graphs(k: int):
    """Every labeled simple graph on vertices 0..k-1."""
    pairs = list(itertools.combinations(range(k), 2))
    for mask in range(2 ** len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        yield GraphState.from_edges(range(k), edges)


def sweep_verify(max_qubits: int = 10, samples: int = 500, seed: int = 0,
                 enum_max: int = 5) -> SweepSummary:
    """Certify the fusion rule across exhaustive small cases plus random ones.

    Enumerates every graph on 2..enum_max vertices with every non-adjacent
    marked pair, then adds `samples` random graphs of up to max_qubits
    vertices with one randomly chosen pair each.  Adjacent pairs are
    counted as skipped, never failed.
    """
    if max_qubits > DEFAULT_QUBIT_CAP:
        raise ValueError(f"max_qubits beyond the {DEFAULT_QUBIT_CAP}-qubit cap")
    summary = SweepSummary()
    for k in range(2, enum_max + 1):
        for g in _all_graphs(k):
            for u, v in itertools.combinations(range(k), 2):
                if g.has_edge(u, v):
                    summary.skipped_adjacent += 1
                    continue
                summary.record(g, u, v, verify_fusion_rule(g, u, v))
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        k = int(rng.integers(2, max_qubits + 1))
        g = GraphState.from_edges(range(k), [])
        for a, b in itertools.combinations(range(k), 2):
            if rng.random() < 0.5:
                g.add_edge(a, b)
        u, v = (int(x) for x in rng.choice(k, size=2, replace=False))
        if g.has_edge(u, v):
            summary.skipped_adjacent += 1
            continue
        summary.record(g, u, v, verify_fusion_rule(g, u, v))
    return summary
