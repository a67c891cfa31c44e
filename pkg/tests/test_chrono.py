import numpy as np
import pytest

from helpers import oracle_constrained_complete_link
from narrascope import (
    Dendrogram,
    Merge,
    constrained_cluster,
    cut,
    nodal_scores,
    ultrametric,
)


class TestConstrainedCluster:
    def test_two_pairs_then_bridge(self):
        d = constrained_cluster([0.0, 1.0, 10.0, 11.0])
        got = [(m.left, m.right, m.height) for m in d.merges]
        assert got == [
            ((1, 1), (2, 2), 1.0),
            ((3, 3), (4, 4), 1.0),
            ((1, 2), (3, 4), 11.0),
        ]

    def test_two_points(self):
        d = constrained_cluster([[0.0, 0.0], [3.0, 4.0]])
        assert len(d.merges) == 1
        assert d.merges[0].height == 5.0

    def test_merge_count(self):
        rng = np.random.default_rng(0)
        d = constrained_cluster(rng.normal(size=(12, 3)))
        assert len(d.merges) == 11

    def test_leftmost_tie_break(self):
        # distances 1, 1, 1: leftmost pair merges first
        d = constrained_cluster([0.0, 1.0, 2.0, 3.0])
        assert d.merges[0].left == (1, 1) and d.merges[0].right == (2, 2)

    def test_heights_nondecreasing(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            d = constrained_cluster(rng.normal(size=(rng.integers(2, 15), 2)))
            assert all(b.height >= a.height for a, b in zip(d.merges, d.merges[1:]))

    def test_matches_oracle(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            n = int(rng.integers(2, 8))
            X = rng.normal(size=(n, 2))
            d = constrained_cluster(X)
            expected = oracle_constrained_complete_link(X)
            got = [(m.left, m.right, m.height) for m in d.merges]
            assert got == expected

    def test_reversal_gives_mirror(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            n = int(rng.integers(2, 10))
            X = rng.normal(size=(n, 2))
            fwd = constrained_cluster(X)
            rev = constrained_cluster(X[::-1])

            def mirror(block):
                return (n + 1 - block[1], n + 1 - block[0])

            for mf, mr in zip(fwd.merges, rev.merges):
                assert mr.height == pytest.approx(mf.height, abs=1e-12)
                assert (mirror(mr.right), mirror(mr.left)) == (mf.left, mf.right)

    def test_single_point_rejected(self):
        with pytest.raises(ValueError):
            constrained_cluster([1.0])

    def test_only_complete_linkage(self):
        with pytest.raises(ValueError):
            constrained_cluster([0.0, 1.0], linkage="single")


class TestUltrametric:
    def test_read_off_merge_history(self):
        d = constrained_cluster([0.0, 1.0, 10.0, 11.0])
        U = ultrametric(d)
        assert U[0, 1] == 1.0
        assert U[2, 3] == 1.0
        assert U[0, 2] == U[1, 3] == 11.0
        assert np.allclose(U, U.T)
        assert np.allclose(np.diag(U), 0.0)

    def test_two_points(self):
        d = constrained_cluster([[0.0], [7.0]])
        assert ultrametric(d)[0, 1] == 7.0

    def test_identical_points_all_zero(self):
        d = constrained_cluster([2.0, 2.0, 2.0, 2.0])
        assert np.allclose(ultrametric(d), 0.0)

    def test_strong_triangle_inequality(self):
        rng = np.random.default_rng(4)
        for _ in range(30):
            n = int(rng.integers(3, 14))
            U = ultrametric(constrained_cluster(rng.normal(size=(n, 2))))
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        assert U[i, k] <= max(U[i, j], U[j, k])


class TestCut:
    def test_single_block(self):
        d = constrained_cluster([0.0, 1.0, 10.0, 11.0])
        seg = cut(d, 1)
        assert seg.blocks == ((1, 4),)
        assert seg.boundaries == ()

    def test_all_singletons(self):
        d = constrained_cluster([0.0, 1.0, 10.0, 11.0])
        seg = cut(d, 4)
        assert seg.blocks == ((1, 1), (2, 2), (3, 3), (4, 4))

    def test_natural_two_blocks(self):
        d = constrained_cluster([0.0, 1.0, 10.0, 11.0])
        seg = cut(d, 2)
        assert seg.blocks == ((1, 2), (3, 4))
        assert seg.boundaries == (2,)

    def test_every_cut_is_contiguous_partition(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(11, 2))
        d = constrained_cluster(X)
        for k in range(1, 12):
            seg = cut(d, k)
            assert len(seg.blocks) == k
            flat = [i for s, e in seg.blocks for i in range(s, e + 1)]
            assert flat == list(range(1, 12))

    def test_out_of_range(self):
        d = constrained_cluster([0.0, 1.0])
        with pytest.raises(ValueError):
            cut(d, 0)
        with pytest.raises(ValueError):
            cut(d, 3)


class TestNodalScores:
    def test_uniform_pairs(self):
        d = constrained_cluster([0.0, 1.0, 10.0, 11.0])
        assert nodal_scores(d).tolist() == [1.0, 1.0, 1.0, 1.0]

    def test_planted_outlier_scores_highest(self):
        d = constrained_cluster([0.0, 0.0, 5.0, 0.0, 0.0])
        scores = nodal_scores(d)
        assert scores[2] == max(scores)
        assert scores[2] > max(scores[[0, 1, 3, 4]])

    def test_identical_points_score_zero(self):
        d = constrained_cluster([1.0, 1.0, 1.0])
        assert nodal_scores(d).tolist() == [0.0, 0.0, 0.0]

    def test_scores_are_first_merge_heights(self):
        rng = np.random.default_rng(6)
        X = rng.normal(size=(9, 2))
        d = constrained_cluster(X)
        scores = nodal_scores(d)
        for i in range(1, 10):
            first = next(m for m in d.merges if m.union[0] <= i <= m.union[1])
            assert scores[i - 1] == first.height


class TestDendrogramValidation:
    def test_non_adjacent_blocks_rejected(self):
        with pytest.raises(ValueError):
            Merge(left=(1, 2), right=(4, 5), height=1.0)

    def test_decreasing_heights_rejected(self):
        merges = (
            Merge(left=(1, 1), right=(2, 2), height=2.0),
            Merge(left=(1, 2), right=(3, 3), height=1.0),
        )
        with pytest.raises(ValueError):
            Dendrogram(n_leaves=3, merges=merges)

    def test_wrong_merge_count_rejected(self):
        with pytest.raises(ValueError):
            Dendrogram(n_leaves=3, merges=(Merge(left=(1, 1), right=(2, 2), height=1.0),))

    def test_json_dict(self):
        d = constrained_cluster([0.0, 1.0, 10.0])
        data = d.to_json_dict()
        assert data["n_leaves"] == 3
        assert data["merges"][0] == {"left": [1, 1], "right": [2, 2], "height": 1.0}
