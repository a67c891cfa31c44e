"""Correspondence Analysis over term-segment counts.

Rows (segments) and columns (terms) are embedded in one Euclidean
factor space built from the chi-squared metric on profiles: the table
of relative frequencies is centered on its independence expectation,
standardized, and decomposed by SVD. Row/column principal coordinates,
per-axis inertia shares, contributions, and squared correlations all
come out of that single decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import TermSegmentMatrix
from .errors import ZeroProfile

# Singular values this far below the leading one (or below absolute
# noise floor) are numerical zeros, not axes.
_REL_TOL = 1e-12
_ABS_TOL = 1e-14


@dataclass(frozen=True)
class FactorModel:
    """Output of one correspondence analysis.

    Coordinates are principal (mass-standardized and scaled by the
    singular values), so plain Euclidean distances between row points
    reproduce chi-squared distances between row profiles at full rank.
    Axis signs are arbitrary: any per-axis reflection of a model is the
    same model, and downstream comparisons must treat it as such.
    """

    k: int
    sigma: np.ndarray            # (k,) descending positive singular values
    row_coords: np.ndarray       # (n, k)
    col_coords: np.ndarray       # (m, k)
    row_masses: np.ndarray       # (n,)
    col_masses: np.ndarray       # (m,)
    inertia_total: float         # chi-squared statistic / grand total
    percent_inertia: np.ndarray  # (k,) shares of inertia_total, in percent
    row_contrib: np.ndarray      # (n, k) per-axis shares, sum to 1 per axis
    col_contrib: np.ndarray      # (m, k)
    row_cos2: np.ndarray         # (n, k) share of the point's full distance
    col_cos2: np.ndarray         # (m, k)
    row_labels: tuple            # typically segment ordinals
    col_labels: tuple            # typically term strings
    degenerate: bool = False     # True when all residuals vanished (k == 0)

    def __post_init__(self):
        for name in ("sigma", "row_coords", "col_coords", "row_masses", "col_masses",
                     "percent_inertia", "row_contrib", "col_contrib", "row_cos2", "col_cos2"):
            getattr(self, name).flags.writeable = False

    @property
    def n_rows(self) -> int:
        return self.row_coords.shape[0]

    @property
    def n_cols(self) -> int:
        return self.col_coords.shape[0]

    def row_index(self, label) -> int:
        return self.row_labels.index(label)

    def to_json_dict(self) -> dict:
        def records(labels, coords, contrib, cos2, masses):
            return [
                {
                    "id": i,
                    "label": labels[i],
                    "coords": [float(x) for x in coords[i]],
                    "contrib": [float(x) for x in contrib[i]],
                    "cos2": [float(x) for x in cos2[i]],
                    "mass": float(masses[i]),
                }
                for i in range(len(labels))
            ]

        return {
            "k": self.k,
            "degenerate": self.degenerate,
            "sigma": [float(s) for s in self.sigma],
            "inertia_total": float(self.inertia_total),
            "percent_inertia": [float(p) for p in self.percent_inertia],
            "rows": records(self.row_labels, self.row_coords, self.row_contrib,
                            self.row_cos2, self.row_masses),
            "cols": records(self.col_labels, self.col_coords, self.col_contrib,
                            self.col_cos2, self.col_masses),
        }


def _squared_profile_distances_to_centroid(P, r, c):
    """Full-rank squared chi distance of each row profile to the barycenter."""
    n = P.shape[0]
    out = np.zeros(n)
    pos = c > 0
    for i in range(n):
        if r[i] <= 0:
            continue
        diff = P[i, pos] / r[i] - c[pos]
        out[i] = float(np.sum(diff * diff / c[pos]))
    return out


def analyze_counts(counts, k="full", row_labels=None, col_labels=None) -> FactorModel:
    """Correspondence analysis of a dense nonnegative count array.

    Zero rows or columns are tolerated here (they get zero mass, zero
    coordinates, and zero contributions); the TermSegmentMatrix path
    excludes them upstream, so this matters only for raw-array callers.
    """
    N = np.asarray(counts, dtype=float)
    if N.ndim != 2:
        raise ValueError("counts must be 2-dimensional")
    if np.any(N < 0):
        raise ValueError("counts must be nonnegative")
    n, m = N.shape
    grand = N.sum()
    if grand <= 0:
        raise ValueError("counts must not be all zero")

    P = N / grand
    r = P.sum(axis=1)
    c = P.sum(axis=0)

    # Standardized residuals; zero-mass cells contribute nothing.
    expected = np.outer(r, c)
    scale = np.sqrt(expected)
    S = np.zeros_like(P)
    pos = scale > 0
    S[pos] = (P[pos] - expected[pos]) / scale[pos]

    inertia_total = float(np.sum(S * S))

    max_rank = min(n, m) - 1
    if k == "full":
        k_req = max_rank
    else:
        k_req = int(k)
        if not (0 <= k_req <= max_rank):
            raise ValueError(f"requested rank {k_req} exceeds min(n,m)-1 = {max_rank}")

    U, sv, Vt = np.linalg.svd(S, full_matrices=False)
    cutoff = max(_REL_TOL * (sv[0] if sv.size else 0.0), _ABS_TOL)
    rank = int(np.sum(sv > cutoff))
    rank = min(rank, max_rank, k_req)

    sigma = sv[:rank].copy()
    degenerate = rank == 0

    inv_sqrt_r = np.where(r > 0, 1.0 / np.sqrt(np.where(r > 0, r, 1.0)), 0.0)
    inv_sqrt_c = np.where(c > 0, 1.0 / np.sqrt(np.where(c > 0, c, 1.0)), 0.0)
    F = inv_sqrt_r[:, None] * U[:, :rank] * sigma[None, :]
    G = inv_sqrt_c[:, None] * Vt[:rank].T * sigma[None, :]

    with np.errstate(divide="ignore", invalid="ignore"):
        row_contrib = r[:, None] * F**2 / sigma[None, :] ** 2 if rank else np.zeros((n, 0))
        col_contrib = c[:, None] * G**2 / sigma[None, :] ** 2 if rank else np.zeros((m, 0))

    row_d2 = _squared_profile_distances_to_centroid(P, r, c)
    col_d2 = _squared_profile_distances_to_centroid(P.T, c, r)
    with np.errstate(divide="ignore", invalid="ignore"):
        row_cos2 = np.where(row_d2[:, None] > 0, F**2 / np.where(row_d2[:, None] > 0, row_d2[:, None], 1.0), 0.0)
        col_cos2 = np.where(col_d2[:, None] > 0, G**2 / np.where(col_d2[:, None] > 0, col_d2[:, None], 1.0), 0.0)

    percent = 100.0 * sigma**2 / inertia_total if inertia_total > 0 else np.zeros(rank)

    if row_labels is None:
        row_labels = tuple(range(1, n + 1))
    if col_labels is None:
        col_labels = tuple(range(1, m + 1))
    if len(row_labels) != n or len(col_labels) != m:
        raise ValueError("label lengths disagree with the count array shape")

    return FactorModel(
        k=rank,
        sigma=sigma,
        row_coords=F,
        col_coords=G,
        row_masses=r.copy(),
        col_masses=c.copy(),
        inertia_total=inertia_total,
        percent_inertia=percent,
        row_contrib=row_contrib,
        col_contrib=col_contrib,
        row_cos2=row_cos2,
        col_cos2=col_cos2,
        row_labels=tuple(row_labels),
        col_labels=tuple(col_labels),
        degenerate=degenerate,
    )


def correspondence_analysis(matrix: TermSegmentMatrix, k="full",
                            row_labels=None, col_labels=None) -> FactorModel:
    """Correspondence analysis of a term-segment matrix.

    ``k`` is a retained-axis count or "full" for min(n,m)-1. Row labels
    default to the matrix's original segment ordinals. A table whose
    residuals all vanish (rows proportional to the margins) yields a
    k=0 model flagged ``degenerate`` instead of an error.
    """
    if row_labels is None:
        row_labels = matrix.row_ordinals
    return analyze_counts(matrix.to_dense(), k=k, row_labels=row_labels, col_labels=col_labels)


def chi2_distance(matrix: TermSegmentMatrix, i: int, i2: int) -> float:
    """Chi-squared distance between the profiles of rows ``i`` and ``i2`` (0-based)."""
    N = matrix.to_dense().astype(float)
    n = matrix.n_segments
    if not (0 <= i < n and 0 <= i2 < n):
        raise IndexError("row index out of range")
    c = N.sum(axis=0) / matrix.grand_total
    p1 = N[i] / N[i].sum()
    p2 = N[i2] / N[i2].sum()
    pos = c > 0
    diff = p1[pos] - p2[pos]
    return float(np.sqrt(np.sum(diff * diff / c[pos])))


def project_supplementary(model: FactorModel, profile) -> np.ndarray:
    """Place a held-out term profile into an existing factor space.

    The profile is normalized to sum 1 and mapped through the column
    coordinates (barycentric transition), so projecting the profile of
    an existing row reproduces that row's coordinates, and the average
    profile (the column masses) lands on the origin.
    """
    p = np.asarray(profile, dtype=float)
    if p.shape != (model.n_cols,):
        raise ValueError(f"profile must have length {model.n_cols}")
    if np.any(p < 0):
        raise ValueError("profile entries must be nonnegative")
    total = p.sum()
    if total <= 0:
        raise ZeroProfile("profile sums to zero")
    p = p / total
    if model.k == 0:
        return np.zeros(0)
    return (p @ model.col_coords) / model.sigma
