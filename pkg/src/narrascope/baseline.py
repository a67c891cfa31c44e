"""Randomization baselining of narrative attributes.

Scalar attributes of the segment sequence (movement variability, turn
similarity, tempo balance) are compared against the same attribute on
randomly reordered sequences. Factor coordinates are order-independent,
so replicates only re-index the rows; nothing is refitted. Reported
p-values are lower-tail with the add-one estimator, so they are never
zero and the degenerate all-ties case reports exactly 1.0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations
from typing import Callable

import numpy as np

from .ca import FactorModel, correspondence_analysis
from .corpus import SegmentedDocument, TermSegmentMatrix, tokenize
from .errors import TooShort

RNG_ALGORITHM = "numpy-pcg64"
EXHAUSTIVE = "exhaustive"
_EXHAUSTIVE_MAX_N = 8

CSV_HEADER = "attribute,observed,fraction_smaller,p_value,R,seed"


@dataclass(frozen=True)
class AttributeSeries:
    """Per-step series read off a factor trajectory.

    movement[t] is the Euclidean step length between consecutive
    segment coordinates; orientation[t] is the cosine between
    consecutive displacement vectors (1.0 when either displacement is
    zero: a standstill is treated as going straight on); tempo is the
    token count per segment and tempo_delta its signed differences.
    """

    movement: np.ndarray     # (n-1,)
    orientation: np.ndarray  # (n-2,)
    tempo: np.ndarray        # (n,)
    tempo_delta: np.ndarray  # (n-1,)

    def __post_init__(self):
        n = self.tempo.shape[0]
        if self.movement.shape != (n - 1,) or self.orientation.shape != (n - 2,):
            raise ValueError("series lengths disagree")
        if self.tempo_delta.shape != (n - 1,):
            raise ValueError("series lengths disagree")
        for name in ("movement", "orientation", "tempo", "tempo_delta"):
            getattr(self, name).flags.writeable = False


@dataclass(frozen=True)
class PermutationReport:
    attribute_name: str
    observed: float
    replicates: tuple[float, ...]
    fraction_smaller: float
    p_value: float
    R: int
    seed: int | None
    rng_algorithm: str

    def to_json_dict(self) -> dict:
        return {
            "attribute": self.attribute_name,
            "observed": self.observed,
            "fraction_smaller": self.fraction_smaller,
            "p_value": self.p_value,
            "R": self.R,
            "seed": self.seed,
            "rng_algorithm": self.rng_algorithm,
            "replicates": list(self.replicates),
        }

    def to_csv_line(self) -> str:
        seed = "" if self.seed is None else self.seed
        return (
            f"{self.attribute_name},{self.observed!r},{self.fraction_smaller!r},"
            f"{self.p_value!r},{self.R},{seed}"
        )


def _series_from_arrays(coords: np.ndarray, tempo: np.ndarray) -> AttributeSeries:
    n = coords.shape[0]
    if n < 3:
        raise TooShort("attribute series need at least 3 segments")
    disp = np.diff(coords, axis=0)
    movement = np.linalg.norm(disp, axis=1)
    dots = np.sum(disp[:-1] * disp[1:], axis=1)
    denom = movement[:-1] * movement[1:]
    safe = np.where(denom > 0, denom, 1.0)
    orientation = np.clip(np.where(denom > 0, dots / safe, 1.0), -1.0, 1.0)
    tempo = np.asarray(tempo, dtype=float)
    return AttributeSeries(
        movement=movement,
        orientation=orientation,
        tempo=tempo,
        tempo_delta=np.diff(tempo),
    )


def attribute_series(model: FactorModel, doc: SegmentedDocument) -> AttributeSeries:
    """Series for the document's true order; model rows must align with segments."""
    if model.n_rows != len(doc.segments):
        raise ValueError(
            f"model has {model.n_rows} rows but the document has {len(doc.segments)} segments"
        )
    tempo = np.array([len(tokenize(seg.body)) for seg in doc.segments], dtype=float)
    return _series_from_arrays(model.row_coords, tempo)


def _sample_std(values: np.ndarray) -> float:
    # A single observation carries no variability.
    if values.shape[0] < 2:
        return 0.0
    return float(np.std(values, ddof=1))


def _a2_movement_variability(series: AttributeSeries) -> float:
    return _sample_std(series.movement)


def _a3_orientation_similarity(series: AttributeSeries) -> float:
    return float(np.mean(1.0 - series.orientation))


def _a4_orientation_variability(series: AttributeSeries) -> float:
    return _sample_std(series.orientation)


def _a6_tempo_balance(series: AttributeSeries) -> float:
    return abs(float(np.mean(series.tempo_delta)))


ATTRIBUTES: dict[str, Callable[[AttributeSeries], float]] = {
    "A2_movement_variability": _a2_movement_variability,
    "A3_orientation_similarity": _a3_orientation_similarity,
    "A4_orientation_variability": _a4_orientation_variability,
    "A6_tempo_balance": _a6_tempo_balance,
}


def register_attribute(name: str, fn: Callable[[AttributeSeries], float]) -> None:
    """Register an additional scalar attribute under a unique name."""
    if name in ATTRIBUTES:
        raise ValueError(f"attribute already registered: {name}")
    ATTRIBUTES[name] = fn


def resolve_attribute(name: str) -> str:
    """Accept a full attribute key or its short prefix (e.g. ``A2``)."""
    if name in ATTRIBUTES:
        return name
    for key in ATTRIBUTES:
        if key.split("_", 1)[0] == name:
            return key
    raise KeyError(f"unknown attribute: {name!r} (have {sorted(ATTRIBUTES)})")


def scalar_attribute(series: AttributeSeries, which: str) -> float:
    """Evaluate one named attribute; smaller always means more structured."""
    return ATTRIBUTES[resolve_attribute(which)](series)


def permutation_test(
    matrix: TermSegmentMatrix,
    doc: SegmentedDocument,
    which: str,
    R: int | str = 999,
    seed: int | None = 0,
) -> PermutationReport:
    """Compare an attribute of the true order against random segment orders.

    Each replicate permutes the segment order only: factor coordinates
    are re-indexed (correspondence analysis is row-order independent)
    and the tempo vector is permuted identically. ``R`` may be
    "exhaustive" to enumerate all n! orders (n <= 8). The reported
    p-value is lower-tail, (1 + #{replicate <= observed}) / (R + 1);
    ``fraction_smaller`` counts strictly smaller replicates. The whole
    report is deterministic given (inputs, R, seed).
    """
    which = resolve_attribute(which)
    attr = ATTRIBUTES[which]
    n = matrix.n_segments
    if n < 3:
        raise TooShort("permutation testing needs at least 3 segments")
    if not set(matrix.row_ordinals) <= {seg.ordinal for seg in doc.segments}:
        raise ValueError("matrix rows do not correspond to document segments")

    model = correspondence_analysis(matrix)
    coords = model.row_coords
    tempo = np.array(matrix.row_totals, dtype=float)
    observed = attr(_series_from_arrays(coords, tempo))

    replicates: list[float] = []
    if R == EXHAUSTIVE:
        if n > _EXHAUSTIVE_MAX_N:
            raise ValueError(
                f"exhaustive enumeration supports n <= {_EXHAUSTIVE_MAX_N}; use Monte Carlo"
            )
        for perm in permutations(range(n)):
            order = list(perm)
            replicates.append(attr(_series_from_arrays(coords[order], tempo[order])))
        r_count = math.factorial(n)
        algorithm = "exhaustive-lexicographic"
    else:
        r_count = int(R)
        if r_count < 1:
            raise ValueError("R must be at least 1")
        rng = np.random.default_rng(seed)
        for _ in range(r_count):
            order = rng.permutation(n)
            replicates.append(attr(_series_from_arrays(coords[order], tempo[order])))
        algorithm = RNG_ALGORITHM

    reps = np.array(replicates)
    fraction_smaller = float(np.mean(reps < observed))
    p_value = float((1 + int(np.sum(reps <= observed))) / (r_count + 1))
    return PermutationReport(
        attribute_name=which,
        observed=float(observed),
        replicates=tuple(float(x) for x in replicates),
        fraction_smaller=fraction_smaller,
        p_value=p_value,
        R=r_count,
        seed=None if R == EXHAUSTIVE else seed,
        rng_algorithm=algorithm,
    )
