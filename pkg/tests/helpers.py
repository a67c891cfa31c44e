"""Shared test utilities: random tables and independent oracles."""

import numpy as np


def random_count_matrix(rng, n, m, high=6):
    """Random nonnegative integer table with no zero row or column."""
    while True:
        X = rng.integers(0, high, size=(n, m))
        if X.sum(axis=1).min() > 0 and X.sum(axis=0).min() > 0:
            return X


def oracle_constrained_complete_link(coords):
    """From-scratch adjacent complete-link merging, leftmost tie-break.

    Independent of the library implementation: cluster distances are
    recomputed at every step as explicit maxima over member-point
    pairs, with no distance-update shortcuts.
    """
    X = np.asarray(coords, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n = X.shape[0]
    diffs = X[:, None, :] - X[None, :, :]
    D = np.sqrt(np.sum(diffs * diffs, axis=2))
    members = [[i] for i in range(n)]
    blocks = [(i + 1, i + 1) for i in range(n)]
    merges = []
    while len(members) > 1:
        best_t = 0
        best_d = max(D[i, j] for i in members[0] for j in members[1])
        for t in range(1, len(members) - 1):
            d = max(D[i, j] for i in members[t] for j in members[t + 1])
            if d < best_d:
                best_t, best_d = t, d
        merges.append((blocks[best_t], blocks[best_t + 1], float(best_d)))
        members[best_t] = members[best_t] + members[best_t + 1]
        del members[best_t + 1]
        blocks[best_t] = (blocks[best_t][0], blocks[best_t + 1][1])
        del blocks[best_t + 1]
    return merges


def coords_match_up_to_axis_signs(A, B, atol=1e-8):
    """True when every axis of B equals the same axis of A up to sign."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        return False
    for axis in range(A.shape[1]):
        direct = np.max(np.abs(A[:, axis] - B[:, axis]))
        flipped = np.max(np.abs(A[:, axis] + B[:, axis]))
        if min(direct, flipped) > atol:
            return False
    return True
