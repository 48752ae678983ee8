"""Pure-Python Monte Carlo kernels for the growth strategies.

These are the reference semantics: the compiled twin in ``_native.pyx`` must
consume the identical draw sequence and produce identical counters for any
(bit generator state, arguments).  One uniform draw per entangling attempt,
compared against p; EPR builds, attach attempts and repair attempts all draw
from the same stream in program order.

The cluster is tracked as an edge counter plus one mode flag:

* no cluster -> the next EPR segment built becomes the seed (1 edge);
* s1 cycle: build one EPR segment, then one attach attempt: +2 edges on
  success, -1 on failure;
* s2 cycle: build a 3-star from two EPR segments plus one fusion (discard
  both and retry on failure), then attach it: +4 edges on success; on
  failure -1 edge, then one repair attempt that either restores the 3-star
  or scraps what is left of it;
* a failure against a bare single-vertex cluster (0 edges) kills the
  cluster; if a freshly repaired 3-star finds the cluster gone it is adopted
  as the new cluster (3 edges).

``checkpoints`` is an ascending int64 array of attempt counts; the cluster
edge count is recorded the first time the attempt counter reaches each entry
(entries never reached get the final count).  Kernels return the tuple

    (attempts, successes, failures, epr_builds, attach_attempts,
     edges, alive, gave_up, checkpoint_edges)
"""

from __future__ import annotations

import numpy as np


def _checkpoint_arrays(checkpoints):
    cps = np.asarray([] if checkpoints is None else checkpoints, dtype=np.int64)
    return cps, np.zeros(len(cps), dtype=np.int64)


def s1_run(bit_generator, p, target_edges, max_attempts, checkpoints=None):
    rng = np.random.Generator(bit_generator)
    random = rng.random
    cps, cpe = _checkpoint_arrays(checkpoints)
    ncp = len(cps)
    ci = 0
    attempts = successes = failures = builds = attaches = 0
    edges = 0
    alive = False
    gave_up = False
    while True:
        if alive and edges >= target_edges:
            break
        if attempts >= max_attempts:
            gave_up = True
            break
        # one EPR build loop (seed segment or attach fodder)
        builds += 1
        built = False
        while attempts < max_attempts:
            attempts += 1
            if random() < p:
                successes += 1
                built = True
            else:
                failures += 1
            while ci < ncp and attempts >= cps[ci]:
                cpe[ci] = edges
                ci += 1
            if built:
                break
        if not built:
            gave_up = True
            break
        if not alive:
            alive = True
            edges = 1
            continue
        if attempts >= max_attempts:
            gave_up = True
            break
        attempts += 1
        attaches += 1
        if random() < p:
            successes += 1
            edges += 2
        else:
            failures += 1
            if edges == 0:
                alive = False
            else:
                edges -= 1
        while ci < ncp and attempts >= cps[ci]:
            cpe[ci] = edges
            ci += 1
    while ci < ncp:
        cpe[ci] = edges
        ci += 1
    return attempts, successes, failures, builds, attaches, edges, alive, gave_up, cpe


def s2_run(bit_generator, p, target_edges, max_attempts, checkpoints=None):
    rng = np.random.Generator(bit_generator)
    random = rng.random
    cps, cpe = _checkpoint_arrays(checkpoints)
    ncp = len(cps)
    ci = 0
    attempts = successes = failures = builds = attaches = 0
    edges = 0
    alive = False
    gave_up = False
    while True:
        if alive and edges >= target_edges:
            break
        if attempts >= max_attempts:
            gave_up = True
            break
        if not alive:
            builds += 1
            built = False
            while attempts < max_attempts:
                attempts += 1
                if random() < p:
                    successes += 1
                    built = True
                else:
                    failures += 1
                while ci < ncp and attempts >= cps[ci]:
                    cpe[ci] = edges
                    ci += 1
                if built:
                    break
            if not built:
                gave_up = True
                break
            alive = True
            edges = 1
            continue
        # build one 3-star: two EPR segments, then fuse their leaf ends
        have3 = False
        while not have3:
            ok = True
            for _ in range(2):
                builds += 1
                built = False
                while attempts < max_attempts:
                    attempts += 1
                    if random() < p:
                        successes += 1
                        built = True
                    else:
                        failures += 1
                    while ci < ncp and attempts >= cps[ci]:
                        cpe[ci] = edges
                        ci += 1
                    if built:
                        break
                if not built:
                    ok = False
                    break
            if not ok or attempts >= max_attempts:
                gave_up = True
                break
            attempts += 1
            if random() < p:
                successes += 1
                have3 = True
            else:
                failures += 1
            while ci < ncp and attempts >= cps[ci]:
                cpe[ci] = edges
                ci += 1
        if gave_up:
            break
        # attach loop: consume the 3-star, repairing once per failed attach
        while have3:
            if attempts >= max_attempts:
                gave_up = True
                break
            attempts += 1
            attaches += 1
            if random() < p:
                successes += 1
                edges += 4
                have3 = False
                while ci < ncp and attempts >= cps[ci]:
                    cpe[ci] = edges
                    ci += 1
            else:
                failures += 1
                if edges == 0:
                    alive = False
                else:
                    edges -= 1
                while ci < ncp and attempts >= cps[ci]:
                    cpe[ci] = edges
                    ci += 1
                if attempts >= max_attempts:
                    gave_up = True
                    break
                attempts += 1
                if random() < p:
                    successes += 1
                    if not alive:
                        # cluster died under this 3-star; it becomes the cluster
                        alive = True
                        edges = 3
                        have3 = False
                else:
                    failures += 1
                    have3 = False
                while ci < ncp and attempts >= cps[ci]:
                    cpe[ci] = edges
                    ci += 1
        if gave_up:
            break
    while ci < ncp:
        cpe[ci] = edges
        ci += 1
    return attempts, successes, failures, builds, attaches, edges, alive, gave_up, cpe
