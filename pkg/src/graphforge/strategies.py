"""Monte Carlo growth strategies over the fusion graph model.

Two strategies grow a quasi-linear cluster one fusion at a time:

* **s1** builds one EPR segment per cycle and attempts to fuse it onto the
  cluster's dangling end.  Success extends the cluster by two edges (the
  merged vertex keeps a redundant leaf); failure costs one edge.
* **s2** first builds a 3-star (two EPR segments fused together) and then
  attempts to fuse one of its leaves onto the cluster end.  Success adds
  four edges.  After a failed attach the damaged star is a 3-qubit chain;
  one repair attempt against a fresh qubit either restores the star or
  scraps it.  Pre-building moves the growth threshold from p > 1/3 down to
  p > 1/5.

On a failed attach the deleted end is abandoned and growth retreats to the
most recently created surviving end vertex: the redundant leaf from the
last success first, then its junction, then the leaf before that, and so
on.  Retreating in that order means the retreating end always has degree
one, so every failure costs exactly one edge; the runners keep those
pending ends on an explicit stack.  The cluster dies when a failure
consumes its last vertex, and the next EPR segment built seeds a new one.

Every entangling attempt, EPR builds included, costs one unit and one
uniform draw.  Runs are executed either by the counter kernels in
``graphforge._kernel`` (fast path) or by the graph-backed classes below,
which maintain the full ``GraphState``; both consume identical draw
sequences, so a seed produces identical counters on every backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernel
from .analytic import AnalyticCosts, analytic_costs
from .eo import AttemptCapExceeded, AttemptLedger, EoModel, attempt_fusion, build_epr, forced_outcome_fusion
from .graph import FusionReport, GraphState

#: A run aborts, flagged non-growing, after this many attempts without
#: reaching its target.
GIVE_UP_BOUND = 100_000_000

_HUGE_TARGET = 2**62


@dataclass
class GrowthState:
    """Snapshot of a graph-backed run.

    ``pending`` lists the fallback end vertices as (vertex, depth) pairs,
    most recent last; ``path_edges`` is the tracked root-to-end distance, a
    lower bound on the cluster's true diameter.
    """

    cluster: GraphState
    active_end: int | None
    pending: tuple[tuple[int, int], ...]
    path_edges: int


@dataclass(frozen=True)
class ThreeNode:
    """A 3-star fragment: center bonded to exactly three leaves."""

    center: int
    leaves: tuple[int, int, int]


@dataclass
class CostSummary:
    """Aggregated cost of one or more runs of a strategy.

    ``cost_per_edge`` is the ratio of total attempts to total net edges and
    is only defined when edges were actually produced; ``std_error`` is the
    linearized standard error of that ratio over runs.  Summaries merge by
    plain accumulation, so partial results can be combined in any order.
    """

    attempts: int = 0
    net_edges: int = 0
    runs: int = 0
    runs_reached: int = 0
    cycles: int = 0
    successes: int = 0
    failures: int = 0
    epr_builds: int = 0
    _sum_a2: float = 0.0
    _sum_e2: float = 0.0
    _sum_ae: float = 0.0

    def add_run(self, *, attempts: int, edges: int, reached: bool, cycles: int,
                successes: int, failures: int, builds: int) -> None:
        self.attempts += attempts
        self.net_edges += edges
        self.runs += 1
        self.runs_reached += 1 if reached else 0
        self.cycles += cycles
        self.successes += successes
        self.failures += failures
        self.epr_builds += builds
        self._sum_a2 += float(attempts) ** 2
        self._sum_e2 += float(edges) ** 2
        self._sum_ae += float(attempts) * float(edges)

    def merge(self, other: "CostSummary") -> None:
        self.attempts += other.attempts
        self.net_edges += other.net_edges
        self.runs += other.runs
        self.runs_reached += other.runs_reached
        self.cycles += other.cycles
        self.successes += other.successes
        self.failures += other.failures
        self.epr_builds += other.epr_builds
        self._sum_a2 += other._sum_a2
        self._sum_e2 += other._sum_e2
        self._sum_ae += other._sum_ae

    @property
    def cost_per_edge(self) -> float | None:
        if self.net_edges <= 0:
            return None
        return self.attempts / self.net_edges

    @property
    def non_growing(self) -> bool:
        return self.net_edges <= 0 or (self.runs > 0 and self.runs_reached == 0)

    @property
    def std_error(self) -> float | None:
        if self.net_edges <= 0 or self.runs < 2:
            return None
        r = self.attempts / self.net_edges
        # var of (a_i - r e_i); the mean of that quantity is 0 by choice of r
        s2 = (self._sum_a2 - 2.0 * r * self._sum_ae + r * r * self._sum_e2) / (self.runs - 1)
        mean_edges = self.net_edges / self.runs
        return math.sqrt(max(s2, 0.0) / self.runs) / mean_edges


# ---------------------------------------------------------------------------
# graph-backed reference runners


class _GrowthBase:
    """Shared cluster bookkeeping for the graph-backed strategy runners."""

    def __init__(self, model: EoModel, *, graph: GraphState | None = None,
                 ledger: AttemptLedger | None = None):
        self.model = model
        self.g = graph if graph is not None else GraphState()
        self.ledger = ledger if ledger is not None else AttemptLedger()
        self.active_end: int | None = None
        self.pending: list[tuple[int, int]] = []
        self.path_edges = 0
        self.edges = 0  # cluster edge counter, kept in lockstep with the kernels

    @property
    def state(self) -> GrowthState:
        return GrowthState(self.g, self.active_end, tuple(self.pending), self.path_edges)

    @property
    def anchor(self) -> int | None:
        """Oldest surviving cluster vertex, or None if there is no cluster."""
        if self.pending:
            return self.pending[0][0]
        return self.active_end

    def cluster_edges(self) -> int:
        """Edge count of the cluster component, recounted from the graph."""
        a = self.anchor
        if a is None:
            return 0
        return self.g.component_edges(a)

    def backbone_length(self) -> int:
        """Vertex count of the longest path through the cluster."""
        a = self.anchor
        if a is None:
            return 0
        return len(self.g.diameter_path(a))

    def seed_forced(self) -> None:
        """Materialize the seed segment by forced success (scripted tests)."""
        if self.active_end is not None:
            raise RuntimeError("cluster already seeded")
        u = self.g.add_vertex()
        v = self.g.add_vertex()
        rep = forced_outcome_fusion(self.g, self.ledger, u, v, "success")
        self._adopt_segment(rep.fused_vertex, rep.leaf_vertex)

    def _adopt_segment(self, far: int, leaf: int) -> None:
        self.active_end = leaf
        self.pending = [(far, 0)]
        self.path_edges = 1
        self.edges = 1

    def _retreat(self) -> None:
        # the failed fusion already deleted the active end (degree one, so
        # exactly one cluster edge went with it)
        if self.pending:
            self.active_end, self.path_edges = self.pending.pop()
            self.edges -= 1
        else:
            self.active_end = None
            self.path_edges = 0
            self.edges = 0

    def _target_met(self, target_edges: int | None, target_backbone: int | None) -> bool:
        if target_edges is not None and self.edges >= target_edges:
            return True
        if target_backbone is not None and self.path_edges + 1 >= target_backbone:
            return True
        return False

    def _summary(self, base: tuple[int, int, int, int], attaches: int, gave_up: bool) -> CostSummary:
        led = self.ledger
        out = CostSummary()
        out.add_run(
            attempts=led.attempts - base[0],
            edges=self.edges if self.active_end is not None else 0,
            reached=not gave_up,
            cycles=attaches,
            successes=led.successes - base[1],
            failures=led.failures - base[2],
            builds=led.epr_builds - base[3],
        )
        return out

    def _ledger_base(self) -> tuple[int, int, int, int]:
        led = self.ledger
        return led.attempts, led.successes, led.failures, led.epr_builds


class S1Growth(_GrowthBase):
    """Graph-backed s1 runner; same draw sequence as the s1 kernel."""

    def attach_forced(self, outcome: str) -> FusionReport:
        """One scripted growth step: EPR by forced success, then the named attach."""
        if self.active_end is None:
            raise RuntimeError("no cluster; call seed_forced first")
        u = self.g.add_vertex()
        v = self.g.add_vertex()
        seg = forced_outcome_fusion(self.g, self.ledger, u, v, "success")
        return self._attach(seg.fused_vertex, seg.leaf_vertex,
                            lambda a, b: forced_outcome_fusion(self.g, self.ledger, a, b, outcome))

    def _attach(self, far: int, epr_leaf: int, fuse) -> FusionReport:
        active = self.active_end
        assert self.g.degree(active) == (1 if self.pending else 0)
        rep = fuse(active, epr_leaf)
        if rep.success:
            d = self.path_edges
            self.pending.append((rep.fused_vertex, d))
            self.pending.append((rep.leaf_vertex, d + 1))
            self.active_end = far
            self.path_edges = d + 1
            self.edges += 2
        else:
            # the far EPR vertex is stranded; discard it
            self.g.remove_vertex(far)
            self._retreat()
        return rep

    def run(self, *, target_edges: int | None = None, target_backbone: int | None = None,
            max_attempts: int = GIVE_UP_BOUND) -> CostSummary:
        if target_edges is None and target_backbone is None:
            raise ValueError("need target_edges or target_backbone")
        base = self._ledger_base()
        led = self.ledger
        attaches = 0
        gave_up = False
        while True:
            if self.active_end is not None and self._target_met(target_edges, target_backbone):
                break
            if led.attempts - base[0] >= max_attempts:
                gave_up = True
                break
            try:
                far, leaf = build_epr(self.model, led, self.g,
                                      max_attempts=max_attempts - (led.attempts - base[0]))
            except AttemptCapExceeded:
                gave_up = True
                break
            if self.active_end is None:
                self._adopt_segment(far, leaf)
                continue
            if led.attempts - base[0] >= max_attempts:
                gave_up = True
                break
            attaches += 1
            self._attach(far, leaf, lambda a, b: attempt_fusion(self.model, led, self.g, a, b))
        return self._summary(base, attaches, gave_up)


class S2Growth(_GrowthBase):
    """Graph-backed s2 runner; same draw sequence as the s2 kernel."""

    def build_3node_forced(self) -> ThreeNode:
        """3-star by forced successes: two EPR builds plus one fusion, all ledgered."""
        segs = []
        for _ in range(2):
            u = self.g.add_vertex()
            v = self.g.add_vertex()
            rep = forced_outcome_fusion(self.g, self.ledger, u, v, "success")
            segs.append((rep.fused_vertex, rep.leaf_vertex))
        rep = forced_outcome_fusion(self.g, self.ledger, segs[0][1], segs[1][1], "success")
        return ThreeNode(rep.fused_vertex, tuple(sorted((segs[0][0], segs[1][0], rep.leaf_vertex))))

    def attach_forced(self, node: ThreeNode, outcome: str):
        """Scripted attach of a 3-star; returns (report, leftover chain or None)."""
        if self.active_end is None:
            raise RuntimeError("no cluster; call seed_forced first")
        return self._attach_node(node, lambda a, b: forced_outcome_fusion(self.g, self.ledger, a, b, outcome))

    def repair_forced(self, chain, outcome: str):
        """Scripted repair of a damaged star; returns (report, ThreeNode or None)."""
        return self._repair(chain, lambda a, b: forced_outcome_fusion(self.g, self.ledger, a, b, outcome))

    def _attach_node(self, node: ThreeNode, fuse):
        active = self.active_end
        assert self.g.degree(active) == (1 if self.pending else 0)
        port = node.leaves[0]
        rep = fuse(active, port)
        if rep.success:
            rest = [w for w in node.leaves if w != port]
            d = self.path_edges
            self.pending.append((rep.fused_vertex, d))
            self.pending.append((rep.leaf_vertex, d + 1))
            self.pending.append((node.center, d + 1))
            self.pending.append((rest[1], d + 2))
            self.active_end = rest[0]
            self.path_edges = d + 2
            self.edges += 4
            return rep, None
        self._retreat()
        chain = (node.center, tuple(w for w in node.leaves if w != port))
        return rep, chain

    def _repair(self, chain, fuse):
        center, remaining = chain
        q = self.g.add_vertex()
        rep = fuse(center, q)
        if rep.success:
            node = ThreeNode(rep.fused_vertex, tuple(sorted(remaining + (rep.leaf_vertex,))))
            if self.active_end is None:
                # cluster died under this star; the star becomes the cluster
                self._adopt_node(node)
                return rep, None
            return rep, node
        for w in remaining:
            self.g.remove_vertex(w)
        return rep, None

    def _adopt_node(self, node: ThreeNode) -> None:
        self.active_end = node.leaves[0]
        self.pending = [(node.center, 0), (node.leaves[2], 1), (node.leaves[1], 1)]
        self.path_edges = 1
        self.edges = 3

    def run(self, *, target_edges: int | None = None, target_backbone: int | None = None,
            max_attempts: int = GIVE_UP_BOUND) -> CostSummary:
        if target_edges is None and target_backbone is None:
            raise ValueError("need target_edges or target_backbone")
        base = self._ledger_base()
        led = self.ledger
        model = self.model
        g = self.g
        attaches = 0
        gave_up = False

        def sampled(a, b):
            return attempt_fusion(model, led, g, a, b)

        while True:
            if self.active_end is not None and self._target_met(target_edges, target_backbone):
                break
            if led.attempts - base[0] >= max_attempts:
                gave_up = True
                break
            if self.active_end is None:
                try:
                    far, leaf = build_epr(model, led, g,
                                          max_attempts=max_attempts - (led.attempts - base[0]))
                except AttemptCapExceeded:
                    gave_up = True
                    break
                self._adopt_segment(far, leaf)
                continue
            # build one 3-star
            node = None
            while node is None:
                try:
                    seg1 = build_epr(model, led, g,
                                     max_attempts=max_attempts - (led.attempts - base[0]))
                    seg2 = build_epr(model, led, g,
                                     max_attempts=max_attempts - (led.attempts - base[0]))
                except AttemptCapExceeded:
                    gave_up = True
                    break
                if led.attempts - base[0] >= max_attempts:
                    gave_up = True
                    break
                rep = sampled(seg1[1], seg2[1])
                if rep.success:
                    node = ThreeNode(rep.fused_vertex,
                                     tuple(sorted((seg1[0], seg2[0], rep.leaf_vertex))))
                else:
                    g.remove_vertex(seg1[0])
                    g.remove_vertex(seg2[0])
            if gave_up:
                break
            # consume it through the attach/repair loop
            while node is not None:
                if led.attempts - base[0] >= max_attempts:
                    gave_up = True
                    break
                attaches += 1
                rep, chain = self._attach_node(node, sampled)
                if rep.success:
                    node = None
                    continue
                if led.attempts - base[0] >= max_attempts:
                    gave_up = True
                    break
                rep2, node = self._repair(chain, sampled)
            if gave_up:
                break
        return self._summary(base, attaches, gave_up)


# ---------------------------------------------------------------------------
# public run API

_GROWTH_CLASSES = {"s1": S1Growth, "s2": S2Growth}


def _check_run_args(strategy: str, target_edges: int, max_attempts: int) -> None:
    if strategy not in _GROWTH_CLASSES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if target_edges < 1:
        raise ValueError(f"target_edges must be >= 1, got {target_edges}")
    if max_attempts < 1:
        raise ValueError(f"max_attempts must be >= 1, got {max_attempts}")


def _run_one(strategy: str, model: EoModel, target_edges: int,
             max_attempts: int, backend: str) -> CostSummary:
    _check_run_args(strategy, target_edges, max_attempts)
    if backend == "graph":
        runner = _GROWTH_CLASSES[strategy](model)
        return runner.run(target_edges=target_edges, max_attempts=max_attempts)
    fn = _kernel.kernel(strategy, backend)
    attempts, succ, fail, builds, attaches, edges, alive, gave_up, _ = fn(
        model.bit_generator, model.p, target_edges, max_attempts, None
    )
    out = CostSummary()
    out.add_run(attempts=attempts, edges=edges, reached=not gave_up, cycles=attaches,
                successes=succ, failures=fail, builds=builds)
    return out


def run_s1(model: EoModel, target_edges: int, *, max_attempts: int = GIVE_UP_BOUND,
           backend: str = "auto") -> CostSummary:
    """Grow one s1 cluster to ``target_edges`` edges; flagged if it cannot."""
    return _run_one("s1", model, target_edges, max_attempts, backend)


def run_s2(model: EoModel, target_edges: int, *, max_attempts: int = GIVE_UP_BOUND,
           backend: str = "auto") -> CostSummary:
    """Grow one s2 cluster to ``target_edges`` edges; flagged if it cannot."""
    return _run_one("s2", model, target_edges, max_attempts, backend)


def run_many(strategy: str, p: float, seed: int, *, target_edges: int,
             runs: int | None = None, min_cycles: int | None = None,
             max_attempts: int = GIVE_UP_BOUND, backend: str = "auto",
             lane: int = 0) -> CostSummary:
    """Aggregate independent runs, each on its own (seed, lane, index) stream.

    Stop after ``runs`` runs, or once ``min_cycles`` attach cycles have been
    accumulated (whichever was given; exactly one must be).
    """
    if (runs is None) == (min_cycles is None):
        raise ValueError("specify exactly one of runs, min_cycles")
    if runs is not None and runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    if min_cycles is not None and min_cycles < 1:
        raise ValueError(f"min_cycles must be >= 1, got {min_cycles}")
    total = CostSummary()
    i = 0
    while True:
        if runs is not None:
            if i >= runs:
                break
        elif i > 0 and total.cycles >= min_cycles:
            break
        model = EoModel.for_run(p, seed, i, lane=lane)
        total.merge(_run_one(strategy, model, target_edges, max_attempts, backend))
        i += 1
    return total


# ---------------------------------------------------------------------------
# long-run growth-rate estimation (threshold bracketing)


@dataclass(frozen=True)
class GrowthRate:
    """Late-window growth slope, in edges per attempt, with its run-to-run error."""

    strategy: str
    p: float
    runs: int
    attempts_per_run: int
    slope: float
    std_error: float

    @property
    def t_stat(self) -> float:
        if self.std_error == 0.0:
            return math.inf if self.slope > 0 else (-math.inf if self.slope < 0 else 0.0)
        return self.slope / self.std_error

    def significantly_positive(self, z: float = 3.0) -> bool:
        return self.t_stat > z


def growth_rate(strategy: str, p: float, seed: int, *, total_attempts: int,
                runs: int = 8, backend: str = "auto", lane: int = 0) -> GrowthRate:
    """Estimate the long-run edges-per-attempt slope at fixed p.

    Each run gets ``total_attempts // runs`` attempts; the slope is measured
    between the halfway point and the end of each run, so the early transient
    (and, below threshold, the approach to the stationary boundary regime)
    is excluded.
    """
    if strategy not in _GROWTH_CLASSES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if runs < 2:
        raise ValueError("need at least 2 runs for an error estimate")
    per_run = total_attempts // runs
    if per_run < 4:
        raise ValueError("total_attempts too small for the requested runs")
    half = per_run // 2
    fn = _kernel.kernel(strategy, backend if backend != "graph" else "auto")
    checkpoints = np.asarray([half, per_run], dtype=np.int64)
    slopes = np.empty(runs)
    for i in range(runs):
        model = EoModel.for_run(p, seed, i, lane=lane)
        res = fn(model.bit_generator, model.p, _HUGE_TARGET, per_run, checkpoints)
        e_half, e_end = res[8]
        slopes[i] = (e_end - e_half) / float(per_run - half)
    mean = float(slopes.mean())
    se = float(slopes.std(ddof=1) / math.sqrt(runs))
    return GrowthRate(strategy=strategy, p=p, runs=runs, attempts_per_run=per_run,
                      slope=mean, std_error=se)


# ---------------------------------------------------------------------------
# side-by-side comparison


@dataclass(frozen=True)
class ComparisonRow:
    p: float
    analytic: AnalyticCosts
    mc_s1: CostSummary
    mc_s2: CostSummary


def compare_strategies(p_values, trials: int = 20_000, *, seed: int = 0,
                       target_edges: int = 500, max_attempts: int = 5_000_000,
                       backend: str = "auto") -> list[ComparisonRow]:
    """Closed forms and Monte Carlo for both strategies on a p grid.

    ``trials`` is the minimum number of attach cycles accumulated per
    (strategy, p) cell.  Rows come back sorted by p; each cell draws from
    its own derived stream, so adding grid points does not disturb existing
    cells.
    """
    rows = []
    for idx, p in enumerate(sorted(set(float(p) for p in p_values))):
        mc = {}
        for s_idx, strat in enumerate(("s1", "s2")):
            mc[strat] = run_many(strat, p, seed, target_edges=target_edges,
                                 min_cycles=trials, max_attempts=max_attempts,
                                 backend=backend, lane=2 * idx + s_idx)
        rows.append(ComparisonRow(p=p, analytic=analytic_costs(p),
                                  mc_s1=mc["s1"], mc_s2=mc["s2"]))
    return rows
