"""Episodization: clustering the segment sequence without reordering it.

Agglomerative complete-link clustering restricted to merging adjacent
blocks only, so every cluster at every level is a contiguous run of
ordinals. The merge history induces an ultrametric on segments, cuts
into contiguous segmentations, and per-segment "nodal" anomaly scores
(how high a segment stays single before joining its neighborhood).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Merge:
    """One agglomeration of two adjacent contiguous blocks.

    Blocks are (start, end) ordinal ranges, 1-based inclusive; right
    must start where left ends + 1.
    """

    left: tuple[int, int]
    right: tuple[int, int]
    height: float

    def __post_init__(self):
        if self.right[0] != self.left[1] + 1:
            raise ValueError(f"merge blocks are not adjacent: {self.left} / {self.right}")
        if self.left[0] > self.left[1] or self.right[0] > self.right[1]:
            raise ValueError("malformed block range")
        if self.height < 0:
            raise ValueError("merge height must be nonnegative")

    @property
    def union(self) -> tuple[int, int]:
        return (self.left[0], self.right[1])


@dataclass(frozen=True)
class Dendrogram:
    """Ordered merge history of the constrained clustering."""

    n_leaves: int
    merges: tuple[Merge, ...]

    def __post_init__(self):
        if len(self.merges) != self.n_leaves - 1:
            raise ValueError("a dendrogram over n leaves has exactly n-1 merges")
        for prev, cur in zip(self.merges, self.merges[1:]):
            if cur.height < prev.height:
                raise ValueError("merge heights must be nondecreasing")

    @property
    def heights(self) -> tuple[float, ...]:
        return tuple(m.height for m in self.merges)

    def to_json_dict(self) -> dict:
        return {
            "n_leaves": self.n_leaves,
            "merges": [
                {"left": list(m.left), "right": list(m.right), "height": float(m.height)}
                for m in self.merges
            ],
        }


@dataclass(frozen=True)
class Segmentation:
    """A partition of 1..n into contiguous blocks."""

    boundaries: tuple[int, ...]  # ordinals after which a cut falls
    blocks: tuple[tuple[int, int], ...]

    def __post_init__(self):
        expected_start = 1
        for start, end in self.blocks:
            if start != expected_start or end < start:
                raise ValueError("blocks must partition 1..n in order")
            expected_start = end + 1
        if self.boundaries != tuple(end for _, end in self.blocks[:-1]):
            raise ValueError("boundaries must be the non-final block ends")

    def to_json_dict(self) -> dict:
        return {
            "boundaries": list(self.boundaries),
            "blocks": [list(b) for b in self.blocks],
        }


def constrained_cluster(coords, linkage: str = "complete") -> Dendrogram:
    """Cluster the point sequence, merging adjacent blocks only.

    At each of the n-1 steps, the adjacent pair of clusters with the
    smallest complete-link distance (the maximum pairwise Euclidean
    distance across the two blocks) merges; equal distances break to
    the leftmost pair so output is deterministic. Heights come straight
    from the pairwise distance set, so they are exact and provably
    nondecreasing.
    """
    if linkage != "complete":
        raise ValueError(f"unsupported linkage: {linkage!r}")
    X = np.asarray(coords, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n = X.shape[0]
    if n < 2:
        raise ValueError("need at least 2 points to cluster")

    diffs = X[:, None, :] - X[None, :, :]
    D = np.sqrt(np.sum(diffs * diffs, axis=2))

    # D shrinks to a cluster-by-cluster complete-link matrix as blocks merge.
    blocks: list[tuple[int, int]] = [(i + 1, i + 1) for i in range(n)]
    merges: list[Merge] = []
    while len(blocks) > 1:
        best = 0
        best_d = D[0, 1]
        for t in range(1, len(blocks) - 1):
            d = D[t, t + 1]
            if d < best_d:
                best_d = d
                best = t
        merges.append(Merge(left=blocks[best], right=blocks[best + 1], height=float(best_d)))
        blocks[best] = (blocks[best][0], blocks[best + 1][1])
        del blocks[best + 1]
        row = np.maximum(D[best], D[best + 1])
        D = np.delete(np.delete(D, best + 1, axis=0), best + 1, axis=1)
        row = np.delete(row, best + 1)
        D[best, :] = row
        D[:, best] = row
        D[best, best] = 0.0
    return Dendrogram(n_leaves=n, merges=tuple(merges))


def ultrametric(dendrogram: Dendrogram) -> np.ndarray:
    """Pairwise matrix of lowest-common-merge heights.

    u[i, j] is the height of the first merge uniting leaves i and j;
    it satisfies the strong triangle inequality by construction.
    """
    n = dendrogram.n_leaves
    U = np.zeros((n, n))
    for m in dendrogram.merges:
        a0, a1 = m.left
        b0, b1 = m.right
        U[a0 - 1 : a1, b0 - 1 : b1] = m.height
        U[b0 - 1 : b1, a0 - 1 : a1] = m.height
    return U


def cut(dendrogram: Dendrogram, n_blocks: int) -> Segmentation:
    """Partition into ``n_blocks`` contiguous blocks by undoing the last merges."""
    n = dendrogram.n_leaves
    if not 1 <= n_blocks <= n:
        raise ValueError(f"n_blocks must be in 1..{n}")
    blocks: list[tuple[int, int]] = [(i + 1, i + 1) for i in range(n)]
    for m in dendrogram.merges[: n - n_blocks]:
        idx = blocks.index(m.left)
        assert blocks[idx + 1] == m.right
        blocks[idx] = m.union
        del blocks[idx + 1]
    return Segmentation(
        boundaries=tuple(end for _, end in blocks[:-1]),
        blocks=tuple(blocks),
    )


def nodal_scores(dendrogram: Dendrogram) -> np.ndarray:
    """Height at which each leaf first joins any neighbor.

    A late-merging leaf is unlike its sequential surroundings; high
    scores flag anomalous segments.
    """
    n = dendrogram.n_leaves
    scores = np.full(n, -1.0)
    for m in dendrogram.merges:
        start, end = m.union
        for i in range(start - 1, end):
            if scores[i] < 0:
                scores[i] = m.height
    return scores
