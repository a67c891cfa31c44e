"""Backbone extraction: which segments carry the narrative.

Segments are ranked by their contribution to the leading factor axes
(squared, so axis reflections cannot matter), the top slice is kept,
and the analysis is rerun on the restricted corpus. A congruence score
says how much of the original configuration the restriction preserved,
maximized over axis reflections since factor orientations are free.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .ca import FactorModel, correspondence_analysis
from .corpus import SegmentedDocument, TermSegmentMatrix, Vocabulary
from .errors import DegenerateMatrix, NoCommonSegments, RankTooLow

_MAX_AXES = 10
_SIGMA_TIE = 1e-9


@dataclass(frozen=True)
class SalienceEntry:
    ordinal: int
    contrib_sum: float
    cos2_sum: float
    rank: int


@dataclass(frozen=True)
class SalienceReport:
    """Per-segment salience over the first K axes, in ordinal order."""

    axes: int
    entries: tuple[SalienceEntry, ...]

    def top(self, k: int) -> list[int]:
        """Ordinals of the k best-ranked segments, in ordinal order."""
        chosen = sorted(self.entries, key=lambda e: e.rank)[:k]
        return sorted(e.ordinal for e in chosen)

    def to_json_dict(self) -> dict:
        return {
            "axes": self.axes,
            "entries": [
                {
                    "ordinal": e.ordinal,
                    "contrib_sum": e.contrib_sum,
                    "cos2_sum": e.cos2_sum,
                    "rank": e.rank,
                }
                for e in self.entries
            ],
        }


@dataclass(frozen=True)
class Backbone:
    selected: tuple[int, ...]
    restricted_matrix: TermSegmentMatrix
    restricted_vocabulary: Vocabulary
    restricted_model: FactorModel

    def to_json_dict(self) -> dict:
        return {
            "selected": list(self.selected),
            "n_terms": self.restricted_matrix.n_terms,
            "model": self.restricted_model.to_json_dict(),
        }


def salience(model: FactorModel, axes: int = 2) -> SalienceReport:
    """Rank segments by summed contributions over the first ``axes`` axes.

    Ties break by summed squared correlations, then by ordinal. Both
    criteria are squared quantities, so the report is invariant to
    axis sign flips of the model. Sort keys are rounded to 12 decimals
    so segments with numerically identical profiles tie deterministically
    instead of ordering on decomposition noise.
    """
    if not 1 <= axes <= model.k:
        raise RankTooLow(f"axes must be in 1..{model.k}")
    contrib = model.row_contrib[:, :axes].sum(axis=1)
    cos2 = model.row_cos2[:, :axes].sum(axis=1)
    ordinals = list(model.row_labels)
    order = sorted(
        range(len(ordinals)),
        key=lambda i: (-round(contrib[i], 12), -round(cos2[i], 12), ordinals[i]),
    )
    rank_of = {i: pos + 1 for pos, i in enumerate(order)}
    entries = tuple(
        SalienceEntry(
            ordinal=ordinals[i],
            contrib_sum=float(contrib[i]),
            cos2_sum=float(cos2[i]),
            rank=rank_of[i],
        )
        for i in range(len(ordinals))
    )
    return SalienceReport(axes=axes, entries=entries)


def extract_backbone(
    doc: SegmentedDocument,
    matrix: TermSegmentMatrix,
    model: FactorModel,
    vocabulary: Vocabulary,
    top_k: int | None = None,
    threshold: float | None = None,
    segments=None,
    axes: int = 2,
) -> Backbone:
    """Keep the most salient segments and refit the factor space on them.

    Selection is the ``top_k`` best-ranked segments, every segment whose
    contribution sum reaches ``threshold``, or an explicit ``segments``
    ordinal list (exactly one must be given). Terms that no longer occur
    are dropped; the restricted vocabulary is a subset of the full one.
    """
    selectors = sum(x is not None for x in (top_k, threshold, segments))
    if selectors != 1:
        raise ValueError("give exactly one of top_k / threshold / segments")
    if segments is not None:
        known = {seg.ordinal for seg in doc.segments}
        selected = sorted(set(segments))
        unknown = [o for o in selected if o not in known]
        if unknown:
            raise ValueError(f"unknown segment ordinal(s): {unknown}")
    elif top_k is not None:
        report = salience(model, axes=axes)
        if not 1 <= top_k <= len(report.entries):
            raise ValueError(f"top_k must be in 1..{len(report.entries)}")
        selected = report.top(top_k)
    else:
        report = salience(model, axes=axes)
        selected = sorted(e.ordinal for e in report.entries if e.contrib_sum >= threshold)
        if not selected:
            raise ValueError(f"no segment reaches contribution threshold {threshold}")
    return _restrict(matrix, vocabulary, selected)


def _restrict(matrix: TermSegmentMatrix, vocabulary: Vocabulary, selected: list[int]) -> Backbone:
    if len(selected) < 2:
        raise DegenerateMatrix("a backbone needs at least 2 segments to refit")
    chosen = set(selected)
    missing = chosen - set(matrix.row_ordinals)
    if missing:
        raise ValueError(f"segment(s) not present in the matrix: {sorted(missing)}")
    keep_rows = [i for i, ordinal in enumerate(matrix.row_ordinals) if ordinal in chosen]
    dense = matrix.to_dense()[keep_rows, :]
    keep_cols = np.flatnonzero(dense.sum(axis=0) > 0)
    if keep_cols.size < 2:
        raise DegenerateMatrix("fewer than 2 terms survive the restriction")
    dense = dense[:, keep_cols]
    terms = tuple(vocabulary.terms[j] for j in keep_cols)
    restricted_matrix = TermSegmentMatrix.from_dense(dense, row_ordinals=tuple(selected))
    restricted_model = correspondence_analysis(
        restricted_matrix, row_labels=tuple(selected), col_labels=terms
    )
    return Backbone(
        selected=tuple(selected),
        restricted_matrix=restricted_matrix,
        restricted_vocabulary=Vocabulary(terms=terms),
        restricted_model=restricted_model,
    )


def _tie_groups(sigma: np.ndarray) -> list[list[int]]:
    groups: list[list[int]] = [[0]]
    for a in range(1, sigma.shape[0]):
        if abs(sigma[a] - sigma[a - 1]) < _SIGMA_TIE:
            groups[-1].append(a)
        else:
            groups.append([a])
    return groups


def _axis_permutations(sigma: np.ndarray):
    """All axis orders that only permute within near-equal singular values."""
    groups = _tie_groups(sigma)
    def expand(prefixes, group):
        return [p + list(g) for p in prefixes for g in permutations(group)]
    orders = [[]]
    for group in groups:
        orders = expand(orders, group)
    return orders


def compare_configurations(
    model_a: FactorModel,
    model_b: FactorModel,
    common=None,
    axes: int = 2,
) -> float:
    """Congruence of two factor configurations on shared segments, in [0, 1].

    Mass-weighted normalized inner product of the centered K-axis
    configurations, maximized over per-axis reflections (and over axis
    order within ties of the singular values, where the factor basis is
    itself arbitrary). 1.0 means identical up to reflection.
    """
    if not 1 <= axes <= min(model_a.k, model_b.k):
        raise RankTooLow(f"axes must be in 1..{min(model_a.k, model_b.k)}")
    if axes > _MAX_AXES:
        raise ValueError(f"axes capped at {_MAX_AXES}")
    if common is None:
        common = [lab for lab in model_a.row_labels if lab in set(model_b.row_labels)]
    common = list(common)
    if not common:
        raise NoCommonSegments("the two models share no segment ordinals")

    idx_a = [model_a.row_index(lab) for lab in common]
    idx_b = [model_b.row_index(lab) for lab in common]
    A = model_a.row_coords[idx_a, :axes]
    B = model_b.row_coords[idx_b, :axes]
    w = model_a.row_masses[idx_a].astype(float)
    if w.sum() <= 0:
        w = np.ones(len(common))
    w = w / w.sum()

    A = A - (w[:, None] * A).sum(axis=0)
    B = B - (w[:, None] * B).sum(axis=0)
    denom = np.sqrt(np.sum(w[:, None] * A * A) * np.sum(w[:, None] * B * B))
    if denom <= 0:
        # Both configurations collapse to a point; nothing disagrees.
        return 1.0

    best = 0.0
    for order in _axis_permutations(model_b.sigma[:axes]):
        cross = np.sum(w[:, None] * A * B[:, order], axis=0)
        # abs() picks the best sign per axis: reflections are free.
        best = max(best, float(np.sum(np.abs(cross)) / denom))
    return min(best, 1.0)
