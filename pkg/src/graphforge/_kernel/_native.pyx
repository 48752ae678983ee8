# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo kernels; keep in lockstep with pure.py.

Same draw sequence, same counters, same return tuple.  Draws come from the
bit generator's next_double, which matches scalar Generator.random() calls
on the same state, so the two implementations are interchangeable bit for
bit.  See pure.py for the state-machine description.
"""

import numpy as np

from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.stdint cimport int64_t
from numpy.random cimport bitgen_t


cdef bitgen_t *_get_bitgen(bit_generator) except NULL:
    capsule = bit_generator.capsule
    if not PyCapsule_IsValid(capsule, "BitGenerator"):
        raise ValueError("expected a numpy BitGenerator")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")


def s1_run(bit_generator, double p, int64_t target_edges, int64_t max_attempts, checkpoints=None):
    cdef bitgen_t *rng = _get_bitgen(bit_generator)
    cp_arr = np.asarray([] if checkpoints is None else checkpoints, dtype=np.int64)
    out_arr = np.zeros(cp_arr.shape[0], dtype=np.int64)
    cdef const int64_t[::1] cps = cp_arr
    cdef int64_t[::1] cpe = out_arr
    cdef Py_ssize_t ncp = cp_arr.shape[0]
    cdef Py_ssize_t ci = 0
    cdef int64_t attempts = 0, successes = 0, failures = 0, builds = 0, attaches = 0
    cdef int64_t edges = 0
    cdef bint alive = False, gave_up = False, built
    with bit_generator.lock, nogil:
        while True:
            if alive and edges >= target_edges:
                break
            if attempts >= max_attempts:
                gave_up = True
                break
            builds += 1
            built = False
            while attempts < max_attempts:
                attempts += 1
                if rng.next_double(rng.state) < p:
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
            if rng.next_double(rng.state) < p:
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
    return attempts, successes, failures, builds, attaches, edges, bool(alive), bool(gave_up), out_arr


def s2_run(bit_generator, double p, int64_t target_edges, int64_t max_attempts, checkpoints=None):
    cdef bitgen_t *rng = _get_bitgen(bit_generator)
    cp_arr = np.asarray([] if checkpoints is None else checkpoints, dtype=np.int64)
    out_arr = np.zeros(cp_arr.shape[0], dtype=np.int64)
    cdef const int64_t[::1] cps = cp_arr
    cdef int64_t[::1] cpe = out_arr
    cdef Py_ssize_t ncp = cp_arr.shape[0]
    cdef Py_ssize_t ci = 0
    cdef int64_t attempts = 0, successes = 0, failures = 0, builds = 0, attaches = 0
    cdef int64_t edges = 0
    cdef int k
    cdef bint alive = False, gave_up = False, built, have3, ok
    with bit_generator.lock, nogil:
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
                    if rng.next_double(rng.state) < p:
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
            have3 = False
            while not have3:
                ok = True
                for k in range(2):
                    builds += 1
                    built = False
                    while attempts < max_attempts:
                        attempts += 1
                        if rng.next_double(rng.state) < p:
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
                if rng.next_double(rng.state) < p:
                    successes += 1
                    have3 = True
                else:
                    failures += 1
                while ci < ncp and attempts >= cps[ci]:
                    cpe[ci] = edges
                    ci += 1
            if gave_up:
                break
            while have3:
                if attempts >= max_attempts:
                    gave_up = True
                    break
                attempts += 1
                attaches += 1
                if rng.next_double(rng.state) < p:
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
                    if rng.next_double(rng.state) < p:
                        successes += 1
                        if not alive:
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
    return attempts, successes, failures, builds, attaches, edges, bool(alive), bool(gave_up), out_arr
