"""Joining grown chain sections into a network by fusing their leaves.

The pipeline has two phases.  Phase one grows several quasi-linear
sections independently inside one shared graph (``grow_sections``).  Phase
two (``assemble``) walks pairs of sections and fuses leaves that sit at
the same backbone position; a successful fusion creates a cross-link
vertex bonded to both backbones plus one fresh second-generation leaf,
while a failure burns both leaves and leaves the backbones intact.  Phase
two never builds EPR segments: the only resource it consumes is the leaves
the growth phase left behind, one attempt per junction.

Cost accounting runs through a single ledger across both phases, so
``AssemblyStats.total_cost_per_edge`` is the end-to-end price of the
largest connected component.
"""

from __future__ import annotations

from dataclasses import dataclass

from .eo import AttemptLedger, EoModel, attempt_fusion
from .graph import GraphState
from .strategies import GIVE_UP_BOUND, S1Growth, S2Growth

_RUNNERS = {"s1": S1Growth, "s2": S2Growth}

PAIRINGS = ("chain", "ring", "all-pairs")


class NonGrowingError(RuntimeError):
    """A section ran out of attempt budget before reaching its backbone target."""

    def __init__(self, section_index: int, attempts_spent: int):
        super().__init__(
            f"section {section_index} did not reach its backbone target "
            f"within {attempts_spent} attempts; p is likely at or below threshold"
        )
        self.section_index = section_index
        self.attempts_spent = attempts_spent


@dataclass
class ChainSection:
    """One grown quasi-linear fragment.

    ``backbone`` is a path (consecutive entries adjacent); ``leaf_of`` maps
    a backbone vertex to its pendant leaf where one survived growth.  Both
    refer to vertices of the owning graph and go stale as assembly consumes
    leaves; consumed entries are detected by presence checks, not removed.
    """

    backbone: list[int]
    leaf_of: dict[int, int]


@dataclass(frozen=True)
class AssemblyStats:
    junctions_attempted: int
    junctions_formed: int
    second_gen_leaves: int
    phase2_attempts: int
    total_cost_per_edge: float | None


@dataclass(frozen=True)
class ConnectivityReport:
    largest_component_vertices: int
    largest_component_edges: int
    cross_links: tuple[int, ...]
    isolated_fragments: int


def grow_sections(model: EoModel, strategy: str, count: int, backbone_len: int,
                  *, max_attempts_per_section: int = GIVE_UP_BOUND,
                  ) -> tuple[GraphState, list[ChainSection], AttemptLedger]:
    """Grow ``count`` disjoint sections, each with a backbone of at least
    ``backbone_len`` vertices, in one shared graph.

    Raises :class:`NonGrowingError` when a section exhausts its budget, which
    is the expected outcome at or below the strategy's growth threshold.
    """
    if strategy not in _RUNNERS:
        raise ValueError(f"unknown strategy {strategy!r}")
    if count < 2:
        raise ValueError(f"count must be >= 2, got {count}")
    if backbone_len < 2:
        raise ValueError(f"backbone_len must be >= 2, got {backbone_len}")
    g = GraphState()
    ledger = AttemptLedger()
    sections: list[ChainSection] = []
    for i in range(count):
        runner = _RUNNERS[strategy](model, graph=g, ledger=ledger)
        summary = runner.run(target_backbone=backbone_len,
                             max_attempts=max_attempts_per_section)
        if summary.runs_reached == 0:
            raise NonGrowingError(i, summary.attempts)
        sections.append(_extract_section(g, runner.anchor))
    return g, sections, ledger


def _extract_section(g: GraphState, anchor: int) -> ChainSection:
    backbone = g.diameter_path(anchor)
    on_backbone = set(backbone)
    leaf_of: dict[int, int] = {}
    for v in backbone:
        pendant = [w for w in g.neighbors(v)
                   if w not in on_backbone and g.degree(w) == 1]
        if pendant:
            leaf_of[v] = min(pendant)
    return ChainSection(backbone=backbone, leaf_of=leaf_of)


def _row_pairs(n: int, pairing: str) -> list[tuple[int, int]]:
    if pairing == "chain":
        return [(i, i + 1) for i in range(n - 1)]
    if pairing == "ring":
        pairs = [(i, i + 1) for i in range(n - 1)]
        if n >= 3:
            pairs.append((n - 1, 0))
        return pairs
    if pairing == "all-pairs":
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    raise ValueError(f"pairing must be one of {PAIRINGS}, got {pairing!r}")


def _usable_leaf(g: GraphState, leaf: int | None) -> bool:
    return leaf is not None and g.has_vertex(leaf) and g.degree(leaf) == 1


def assemble(model: EoModel, g: GraphState, rows: list[ChainSection],
             ledger: AttemptLedger, *, second_generation: bool = False,
             pairing: str = "chain") -> AssemblyStats:
    """Fuse leaves of section pairs at matching backbone positions.

    Pairing order over rows is ``chain`` (consecutive), ``ring`` (chain plus
    a closing pair), or ``all-pairs``.  With ``second_generation`` on, each
    adjacent pair of junctions formed within a row pair gets at most one
    extra fusion attempt between their second-generation leaves.
    """
    seen_vertices: set[int] = set()
    for i, row in enumerate(rows):
        overlap = seen_vertices & set(row.backbone)
        if overlap:
            raise ValueError(f"rows share backbone vertices {sorted(overlap)}")
        seen_vertices |= set(row.backbone)

    pairs = _row_pairs(len(rows), pairing)
    attempted = 0
    formed = 0
    second_gen = 0
    extra_attempts = 0
    # per row pair, the second-generation leaves of formed junctions in
    # backbone-position order
    formed_leaves: dict[tuple[int, int], list[int]] = {}

    for i, j in pairs:
        a, b = rows[i], rows[j]
        chain: list[int] = []
        for k in range(min(len(a.backbone), len(b.backbone))):
            la = a.leaf_of.get(a.backbone[k])
            lb = b.leaf_of.get(b.backbone[k])
            if not (_usable_leaf(g, la) and _usable_leaf(g, lb)):
                continue
            attempted += 1
            report = attempt_fusion(model, ledger, g, la, lb)
            if report.success:
                formed += 1
                second_gen += 1
                chain.append(report.leaf_vertex)
        if chain:
            formed_leaves[(i, j)] = chain

    if second_generation:
        for key in sorted(formed_leaves):
            leaves = formed_leaves[key]
            for la, lb in zip(leaves, leaves[1:]):
                if not (_usable_leaf(g, la) and _usable_leaf(g, lb)):
                    continue
                extra_attempts += 1
                attempt_fusion(model, ledger, g, la, lb)

    return AssemblyStats(
        junctions_attempted=attempted,
        junctions_formed=formed,
        second_gen_leaves=second_gen,
        phase2_attempts=attempted + extra_attempts,
        total_cost_per_edge=_total_cost(g, ledger),
    )


def _total_cost(g: GraphState, ledger: AttemptLedger) -> float | None:
    best = _largest_component(g)
    if best is None:
        return None
    edges = g.component_edges(min(best))
    if edges <= 0:
        return None
    return ledger.attempts / edges


def _largest_component(g: GraphState) -> set[int] | None:
    comps = g.components()
    if not comps:
        return None
    # size first, then smallest member id so ties are deterministic
    return max(comps, key=lambda c: (len(c), -min(c)))


def connectivity_report(g: GraphState, rows: list[ChainSection],
                        pairing: str = "chain") -> ConnectivityReport:
    """Descriptive statistics of the assembled graph.

    ``cross_links`` counts, for each row pair in pairing order, the vertices
    bonded to both backbones; junction centers are recovered from adjacency,
    so the report needs no record of the assembly run.
    """
    backbone_sets = [{v for v in r.backbone if g.has_vertex(v)} for r in rows]
    links = []
    for i, j in _row_pairs(len(rows), pairing):
        count = 0
        for v in g.vertices:
            nbrs = g.neighbors(v)
            if nbrs & backbone_sets[i] and nbrs & backbone_sets[j]:
                count += 1
        links.append(count)
    comps = g.components()
    best = _largest_component(g)
    if best is None:
        return ConnectivityReport(0, 0, tuple(links), 0)
    return ConnectivityReport(
        largest_component_vertices=len(best),
        largest_component_edges=g.component_edges(min(best)),
        cross_links=tuple(links),
        isolated_fragments=len(comps) - 1,
    )
