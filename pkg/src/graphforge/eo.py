"""Probabilistic entangling-operation model and attempt bookkeeping.

One entangling attempt between two unbonded qubits succeeds with probability
``p`` and consumes exactly one uniform draw from the model's generator,
whether it succeeds or fails.  The cost unit throughout the package is one
attempt; building raw EPR segments is paid for in the same unit.

Randomness is a PCG64 bit generator.  Independent streams for parallel or
repeated runs are derived from ``(seed, lane, run_index)`` via SeedSequence
spawn keys, so any run is reproducible in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import FusionReport, GraphState

#: Default cap on attempts within a single EPR build loop.
DEFAULT_BUILD_CAP = 10_000_000


class AttemptCapExceeded(RuntimeError):
    """A bounded attempt loop ran out of budget before succeeding."""


@dataclass
class AttemptLedger:
    """Running totals of entangling attempts.

    ``attempts == successes + failures`` always; ``epr_builds`` counts calls
    to :func:`build_epr` (the build-loop counter), not the attempts inside
    them, which land in ``attempts`` like any other.
    """

    attempts: int = 0
    successes: int = 0
    failures: int = 0
    epr_builds: int = 0

    def record(self, success: bool) -> None:
        self.attempts += 1
        if success:
            self.successes += 1
        else:
            self.failures += 1


class EoModel:
    """Success probability plus a seeded random stream.

    ``p`` must lie in (0, 1].  Values above 1/2 are outside the physically
    meaningful regime for the modeled operation but are accepted for
    what-if sweeps; check :attr:`in_physical_regime` if it matters.
    """

    def __init__(self, p: float, seed: int | None = None, *, bit_generator=None):
        if not 0.0 < p <= 1.0:
            raise ValueError(f"success probability must be in (0, 1], got {p}")
        self.p = float(p)
        if bit_generator is None:
            bit_generator = np.random.PCG64(np.random.SeedSequence(seed))
        self.bit_generator = bit_generator
        self.rng = np.random.Generator(bit_generator)

    @classmethod
    def for_run(cls, p: float, seed: int, run_index: int, *, lane: int = 0) -> "EoModel":
        """Model with an independent stream derived from (seed, lane, run_index).

        ``lane`` separates logically distinct batches (e.g. grid cells of a
        sweep) that share one user-facing seed.
        """
        ss = np.random.SeedSequence(seed, spawn_key=(lane, run_index))
        return cls(p, bit_generator=np.random.PCG64(ss))

    @property
    def in_physical_regime(self) -> bool:
        return self.p <= 0.5

    def sample_success(self) -> bool:
        """One Bernoulli(p) draw; consumes exactly one uniform."""
        return self.rng.random() < self.p

    def __repr__(self) -> str:
        return f"EoModel(p={self.p})"


def attempt_fusion(model: EoModel, ledger: AttemptLedger, g: GraphState, u: int, v: int) -> FusionReport:
    """Sample one entangling attempt between u and v and apply its outcome.

    Precondition failures (unknown, identical, or adjacent vertices) raise
    before any randomness is consumed or the ledger is touched.
    """
    g.check_fusable(u, v)
    success = model.sample_success()
    ledger.record(success)
    if success:
        return g.fuse_success(u, v)
    return g.fuse_failure(u, v)


def forced_outcome_fusion(g: GraphState, ledger: AttemptLedger, u: int, v: int, outcome: str) -> FusionReport:
    """Apply a named outcome without sampling; for scripted structure tests.

    Still costs one ledger attempt, so scripted and sampled runs account
    identically.
    """
    if outcome not in ("success", "failure"):
        raise ValueError(f"outcome must be 'success' or 'failure', got {outcome!r}")
    g.check_fusable(u, v)
    ledger.record(outcome == "success")
    if outcome == "success":
        return g.fuse_success(u, v)
    return g.fuse_failure(u, v)


def build_epr(
    model: EoModel,
    ledger: AttemptLedger,
    g: GraphState,
    max_attempts: int = DEFAULT_BUILD_CAP,
) -> tuple[int, int]:
    """Build one EPR segment: repeat fusion on fresh vertex pairs until it sticks.

    Returns ``(fused_vertex, leaf_vertex)`` of the resulting two-vertex
    segment.  Expected cost is ``1/p`` attempts.  Raises
    :class:`AttemptCapExceeded` once ``max_attempts`` attempts have been
    spent without a success (each failed attempt has already deleted its own
    pair, so nothing is left behind).
    """
    ledger.epr_builds += 1
    for _ in range(max_attempts):
        u = g.add_vertex()
        v = g.add_vertex()
        report = attempt_fusion(model, ledger, g, u, v)
        if report.success:
            return report.fused_vertex, report.leaf_vertex
    raise AttemptCapExceeded(
        f"no EPR segment after {max_attempts} attempts (p={model.p})"
    )
