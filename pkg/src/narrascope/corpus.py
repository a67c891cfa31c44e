"""Text ingestion: segment parsing, tokenization, term-segment counts.

A document is an ordered sequence of segments (screenplay scenes, prose
paragraphs, or sub-scene beats). Tokenization is deliberately blunt:
lowercase everything, turn punctuation into blanks, drop one-character
tokens, keep everything else including function words. No stop lists,
no stemming.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateMatrix, EmptyDocument, NoScenesFound

SCHEMA_VERSION = 1

KIND_SCENE = "scene"
KIND_PARAGRAPH = "paragraph"
KIND_BEAT = "beat"

_NON_ALNUM = re.compile(r"[^a-z0-9]+")
_TERM_RE = re.compile(r"^[a-z0-9]{2,}$")

_HEADING_RE = re.compile(
    r"^\s*\[?\s*(?P<prefix>INTERIOR|EXTERIOR|INT|EXT)\b\.?(?P<rest>[^\]]*)\]?\s*$"
)
_TIME_RE = re.compile(r"[\s\-–—.]*\b(?P<tod>DAY|NIGHT)\b[\s.]*$")
_CUE_COLON_RE = re.compile(
    r"^\s*(?P<name>[A-Z][A-Z0-9 .'\-]{0,39}?)\s*(?:\([^)]*\))?\s*:\s*(?P<dialog>.*)$"
)
_CUE_BARE_RE = re.compile(r"^\s*(?P<name>[A-Z][A-Z0-9 .'\-]{0,39}?)\s*(?:\([^)]*\))?\s*$")
_BEAT_DELIM_RE = re.compile(r"^\s*-{3,}\s*BEAT\s*-{3,}\s*$")

# Transition lines look like speaker cues but never are.
_TRANSITIONS = {
    "CUT TO",
    "SMASH CUT TO",
    "MATCH CUT TO",
    "DISSOLVE TO",
    "FADE IN",
    "FADE OUT",
    "FADE TO BLACK",
    "INTERCUT",
    "THE END",
    "TITLE",
    "SUPER",
}


def tokenize(text: str) -> list[str]:
    """Split raw text into analysis tokens.

    Lowercases, replaces every character outside [a-z0-9] with a blank,
    splits on whitespace and drops tokens shorter than two characters.
    Token order follows text order; nothing else is filtered.
    """
    cleaned = _NON_ALNUM.sub(" ", text.lower())
    return [tok for tok in cleaned.split() if len(tok) >= 2]


@dataclass(frozen=True)
class Segment:
    """One unit of the narrative sequence: a scene, paragraph, or beat."""

    ordinal: int
    kind: str
    body: str
    heading: str | None = None
    location_type: str = "unknown"
    location_name: str | None = None
    time_of_day: str = "unknown"
    characters: frozenset[str] = frozenset()
    beats: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.kind not in (KIND_SCENE, KIND_PARAGRAPH, KIND_BEAT):
            raise ValueError(f"unknown segment kind: {self.kind!r}")
        if self.ordinal < 1:
            raise ValueError("segment ordinals are 1-based")
        if not self.body.strip():
            raise ValueError(f"segment {self.ordinal} has an empty body")


@dataclass(frozen=True)
class SegmentedDocument:
    """An ordered, homogeneous sequence of segments."""

    title: str
    source_kind: str
    segments: tuple[Segment, ...]

    def __post_init__(self):
        if self.source_kind not in ("screenplay", "prose"):
            raise ValueError(f"unknown source kind: {self.source_kind!r}")
        if not self.segments:
            raise ValueError("a document needs at least one segment")
        kinds = {seg.kind for seg in self.segments}
        if len(kinds) != 1:
            raise ValueError(f"mixed segment kinds in one document: {sorted(kinds)}")
        ordinals = [seg.ordinal for seg in self.segments]
        if ordinals != list(range(1, len(ordinals) + 1)):
            raise ValueError("segment ordinals must run 1..n without gaps")

    def __len__(self) -> int:
        return len(self.segments)

    @property
    def kind(self) -> str:
        return self.segments[0].kind


@dataclass(frozen=True)
class Vocabulary:
    """Ordered unique terms with a term -> column lookup."""

    terms: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        for term in self.terms:
            if not _TERM_RE.match(term):
                raise ValueError(f"invalid term: {term!r}")
        index = {term: j for j, term in enumerate(self.terms)}
        if len(index) != len(self.terms):
            raise ValueError("vocabulary terms must be unique")
        object.__setattr__(self, "index", index)

    def __len__(self) -> int:
        return len(self.terms)

    def count_vector(self, text: str) -> np.ndarray:
        """Occurrence counts of known terms in ``text``, in column order.

        Tokens outside the vocabulary are ignored; use this to build
        profiles of held-out text for supplementary projection.
        """
        counts = np.zeros(len(self.terms), dtype=np.int64)
        for tok in tokenize(text):
            j = self.index.get(tok)
            if j is not None:
                counts[j] += 1
        return counts


@dataclass(frozen=True)
class TermSegmentMatrix:
    """Sparse nonnegative counts of terms (columns) per segment (rows).

    Only positive counts are stored; rows and columns are 0-based
    internally. ``row_ordinals[i]`` is the original segment ordinal of
    row ``i`` (rows may have been dropped upstream for being empty).
    """

    n_segments: int
    n_terms: int
    counts: dict[tuple[int, int], int]
    row_totals: tuple[int, ...]
    col_totals: tuple[int, ...]
    grand_total: int
    row_ordinals: tuple[int, ...]

    def __post_init__(self):
        if len(self.row_totals) != self.n_segments or len(self.col_totals) != self.n_terms:
            raise ValueError("marginal lengths disagree with the declared shape")
        if len(self.row_ordinals) != self.n_segments:
            raise ValueError("row_ordinals must cover every row")
        if any(b <= a for a, b in zip(self.row_ordinals, self.row_ordinals[1:])):
            raise ValueError("row_ordinals must be strictly increasing")
        row_sums = [0] * self.n_segments
        col_sums = [0] * self.n_terms
        for (i, j), v in self.counts.items():
            if not (0 <= i < self.n_segments and 0 <= j < self.n_terms):
                raise ValueError(f"count index out of range: {(i, j)}")
            if v < 1:
                raise ValueError("stored counts must be >= 1; omit structural zeros")
            row_sums[i] += v
            col_sums[j] += v
        if tuple(row_sums) != self.row_totals or tuple(col_sums) != self.col_totals:
            raise ValueError("marginals do not match stored counts")
        if self.grand_total != sum(row_sums):
            raise ValueError("grand total does not match stored counts")
        if min(row_sums, default=0) == 0 or min(col_sums, default=0) == 0:
            raise ValueError("all-zero rows/columns are not representable")

    @classmethod
    def from_counts(cls, counts: dict[tuple[int, int], int], n_segments: int, n_terms: int,
                    row_ordinals: tuple[int, ...] | None = None) -> "TermSegmentMatrix":
        row_totals = [0] * n_segments
        col_totals = [0] * n_terms
        for (i, j), v in counts.items():
            row_totals[i] += v
            col_totals[j] += v
        if row_ordinals is None:
            row_ordinals = tuple(range(1, n_segments + 1))
        return cls(
            n_segments=n_segments,
            n_terms=n_terms,
            counts=dict(counts),
            row_totals=tuple(row_totals),
            col_totals=tuple(col_totals),
            grand_total=sum(row_totals),
            row_ordinals=tuple(row_ordinals),
        )

    @classmethod
    def from_dense(cls, array, row_ordinals: tuple[int, ...] | None = None) -> "TermSegmentMatrix":
        arr = np.asarray(array)
        counts = {
            (int(i), int(j)): int(arr[i, j])
            for i, j in zip(*np.nonzero(arr))
        }
        return cls.from_counts(counts, arr.shape[0], arr.shape[1], row_ordinals)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n_segments, self.n_terms), dtype=np.int64)
        for (i, j), v in self.counts.items():
            dense[i, j] = v
        return dense


# ---------------------------------------------------------------------------
# Parsing


def _parse_heading(line: str):
    """Return (location_type, location_name, time_of_day) or None."""
    m = _HEADING_RE.match(line)
    if m is None:
        return None
    prefix = m.group("prefix")
    location_type = "interior" if prefix.startswith("INT") else "exterior"
    rest = m.group("rest")
    time_of_day = "unknown"
    tm = _TIME_RE.search(rest)
    if tm is not None:
        time_of_day = tm.group("tod").lower()
        rest = rest[: tm.start()]
    name = rest.strip(" \t.-–—")
    return location_type, (name or None), time_of_day


def _is_bare_cue(line: str, next_line: str | None) -> str | None:
    """Detect a classic centered speaker cue (no colon). Returns the name.

    Requires leading indentation: centered cues are indented, while
    all-caps action lines usually start at the left margin.
    """
    if next_line is None or not next_line.strip():
        return None
    if not line[:1].isspace():
        return None
    m = _CUE_BARE_RE.match(line)
    if m is None:
        return None
    name = " ".join(m.group("name").split())
    if len(name) < 2 or name.count(" ") > 3 or not any(ch.isalpha() for ch in name):
        return None
    if name.rstrip(".") in _TRANSITIONS:
        return None
    if _HEADING_RE.match(next_line):
        return None
    return name


def _scan_scene_lines(lines: list[str]):
    """Split scene lines into cleaned body lines, characters, beat chunks."""
    characters: set[str] = set()
    chunks: list[list[str]] = [[]]
    idx = 0
    while idx < len(lines):
        line = lines[idx]
        nxt = lines[idx + 1] if idx + 1 < len(lines) else None
        if _BEAT_DELIM_RE.match(line):
            chunks.append([])
            idx += 1
            continue
        colon = _CUE_COLON_RE.match(line)
        if colon is not None:
            name = " ".join(colon.group("name").split())
            if name.rstrip(".") not in _TRANSITIONS:
                characters.add(name)
                chunks[-1].append(colon.group("dialog"))
                idx += 1
                continue
            # A transition carries no text; drop the line.
            idx += 1
            continue
        bare = _is_bare_cue(line, nxt)
        if bare is not None:
            characters.add(bare)
            idx += 1
            continue
        chunks[-1].append(line)
        idx += 1
    bodies = ["\n".join(chunk).strip() for chunk in chunks]
    bodies = [b for b in bodies if b]
    return bodies, characters


def parse_screenplay(raw: str, title: str = "") -> SegmentedDocument:
    """Parse screenplay-formatted text into a scene sequence.

    A scene starts at a heading line (optionally bracketed) of the form
    ``INT./EXT. <location> [- DAY|NIGHT]``. Speaker cues become the
    scene's character set and are stripped from the body; the body keeps
    dialog and action text only. Scenes whose body comes out empty are
    dropped with a warning.

    Raises NoScenesFound when no heading matches, which usually means
    the input is prose and should go through parse_prose instead.
    """
    lines = raw.splitlines()
    headings: list[tuple[int, str]] = []
    for lineno, line in enumerate(lines):
        if _HEADING_RE.match(line):
            headings.append((lineno, line.strip()))
    if not headings:
        raise NoScenesFound("no scene heading (INT./EXT.) found")

    segments: list[Segment] = []
    dropped: list[int] = []
    ordinal = 1
    for which, (lineno, heading_line) in enumerate(headings):
        end = headings[which + 1][0] if which + 1 < len(headings) else len(lines)
        parsed = _parse_heading(heading_line)
        assert parsed is not None
        location_type, location_name, time_of_day = parsed
        bodies, characters = _scan_scene_lines(lines[lineno + 1 : end])
        body = "\n\n".join(bodies)
        if not body.strip():
            dropped.append(which + 1)
            continue
        segments.append(
            Segment(
                ordinal=ordinal,
                kind=KIND_SCENE,
                body=body,
                heading=heading_line,
                location_type=location_type,
                location_name=location_name,
                time_of_day=time_of_day,
                characters=frozenset(characters),
                beats=tuple(bodies) if len(bodies) > 1 else None,
            )
        )
        ordinal += 1
    if dropped:
        warnings.warn(f"dropped {len(dropped)} empty scene(s) at heading position(s) {dropped}")
    if not segments:
        raise NoScenesFound("every scene body was empty")
    return SegmentedDocument(title=title, source_kind="screenplay", segments=tuple(segments))


def detect_kind(raw: str) -> str:
    """Guess the source kind: screenplay iff at least 2 heading lines match."""
    hits = sum(1 for line in raw.splitlines() if _HEADING_RE.match(line))
    return "screenplay" if hits >= 2 else "prose"


def parse_prose(raw: str, title: str = "") -> SegmentedDocument:
    """Parse plain prose into paragraphs split on blank lines."""
    if not raw.strip():
        raise EmptyDocument("no non-whitespace content")
    paragraphs: list[str] = []
    current: list[str] = []
    for line in raw.splitlines():
        if line.strip():
            current.append(line)
        elif current:
            paragraphs.append("\n".join(current))
            current = []
    if current:
        paragraphs.append("\n".join(current))
    segments = tuple(
        Segment(ordinal=i + 1, kind=KIND_PARAGRAPH, body=text)
        for i, text in enumerate(paragraphs)
    )
    return SegmentedDocument(title=title, source_kind="prose", segments=segments)


def beat_document(doc: SegmentedDocument, scene_ordinal: int) -> SegmentedDocument:
    """Re-segment one scene into its beats (delimited by ``---BEAT---``)."""
    for seg in doc.segments:
        if seg.ordinal == scene_ordinal:
            bodies = seg.beats if seg.beats else (seg.body,)
            segments = tuple(
                Segment(ordinal=i + 1, kind=KIND_BEAT, body=text)
                for i, text in enumerate(bodies)
            )
            title = f"{doc.title} / segment {scene_ordinal}" if doc.title else f"segment {scene_ordinal}"
            return SegmentedDocument(title=title, source_kind=doc.source_kind, segments=segments)
    raise ValueError(f"no segment with ordinal {scene_ordinal}")


# ---------------------------------------------------------------------------
# Matrix construction


def build_matrix(doc: SegmentedDocument) -> tuple[TermSegmentMatrix, Vocabulary]:
    """Count term occurrences per segment body.

    Headings and speaker cues never reach the counts (they are metadata,
    already kept out of segment bodies at parse time). Segments whose
    body tokenizes to nothing are dropped with a warning; the surviving
    row order is recorded in ``row_ordinals``.
    """
    if len(doc.segments) < 2:
        raise DegenerateMatrix("need at least 2 segments to build a matrix")
    token_lists: list[tuple[int, list[str]]] = []
    dropped: list[int] = []
    for seg in doc.segments:
        tokens = tokenize(seg.body)
        if tokens:
            token_lists.append((seg.ordinal, tokens))
        else:
            dropped.append(seg.ordinal)
    if dropped:
        warnings.warn(f"dropped segment(s) with no usable tokens: {dropped}")
    if len(token_lists) < 2:
        raise DegenerateMatrix("fewer than 2 segments have usable tokens")

    term_index: dict[str, int] = {}
    counts: dict[tuple[int, int], int] = {}
    for row, (_, tokens) in enumerate(token_lists):
        for tok in tokens:
            col = term_index.setdefault(tok, len(term_index))
            counts[(row, col)] = counts.get((row, col), 0) + 1
    if len(term_index) < 2:
        raise DegenerateMatrix("fewer than 2 distinct terms")

    vocabulary = Vocabulary(terms=tuple(term_index))
    matrix = TermSegmentMatrix.from_counts(
        counts,
        n_segments=len(token_lists),
        n_terms=len(term_index),
        row_ordinals=tuple(ordinal for ordinal, _ in token_lists),
    )
    return matrix, vocabulary


# ---------------------------------------------------------------------------
# Serialization


def matrix_to_triplet(matrix: TermSegmentMatrix) -> str:
    """Render the sparse triplet format: header then 1-based ``row col count`` lines."""
    lines = [f"ROWS {matrix.n_segments} COLS {matrix.n_terms} NNZ {len(matrix.counts)}"]
    for (i, j), v in sorted(matrix.counts.items()):
        lines.append(f"{i + 1} {j + 1} {v}")
    return "\n".join(lines) + "\n"


def matrix_from_triplet(text: str) -> TermSegmentMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split()
    if len(header) != 6 or header[0] != "ROWS" or header[2] != "COLS" or header[4] != "NNZ":
        raise ValueError("malformed triplet header")
    n_rows, n_cols, nnz = int(header[1]), int(header[3]), int(header[5])
    if len(lines) - 1 != nnz:
        raise ValueError("NNZ does not match the number of triplet lines")
    counts: dict[tuple[int, int], int] = {}
    for ln in lines[1:]:
        i, j, v = (int(x) for x in ln.split())
        counts[(i - 1, j - 1)] = v
    return TermSegmentMatrix.from_counts(counts, n_rows, n_cols)


def vocabulary_to_text(vocabulary: Vocabulary) -> str:
    return "\n".join(vocabulary.terms) + "\n"


def vocabulary_from_text(text: str) -> Vocabulary:
    return Vocabulary(terms=tuple(ln.strip() for ln in text.splitlines() if ln.strip()))


def corpus_to_json(matrix: TermSegmentMatrix, vocabulary: Vocabulary) -> dict:
    """Matrix plus vocabulary as one JSON-compatible document."""
    return {
        "schema_version": SCHEMA_VERSION,
        "n_segments": matrix.n_segments,
        "n_terms": matrix.n_terms,
        "row_ordinals": list(matrix.row_ordinals),
        "triplets": [[i + 1, j + 1, v] for (i, j), v in sorted(matrix.counts.items())],
        "terms": list(vocabulary.terms),
    }


def corpus_from_json(data: dict) -> tuple[TermSegmentMatrix, Vocabulary]:
    counts = {(i - 1, j - 1): v for i, j, v in data["triplets"]}
    matrix = TermSegmentMatrix.from_counts(
        counts, data["n_segments"], data["n_terms"], tuple(data["row_ordinals"])
    )
    return matrix, Vocabulary(terms=tuple(data["terms"]))


def document_to_json(doc: SegmentedDocument) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "title": doc.title,
        "source_kind": doc.source_kind,
        "segments": [
            {
                "ordinal": seg.ordinal,
                "kind": seg.kind,
                "heading": seg.heading,
                "location_type": seg.location_type,
                "location_name": seg.location_name,
                "time_of_day": seg.time_of_day,
                "characters": sorted(seg.characters),
                "body": seg.body,
                "beats": list(seg.beats) if seg.beats else None,
            }
            for seg in doc.segments
        ],
    }


def document_from_json(data: dict) -> SegmentedDocument:
    segments = tuple(
        Segment(
            ordinal=item["ordinal"],
            kind=item["kind"],
            body=item["body"],
            heading=item.get("heading"),
            location_type=item.get("location_type", "unknown"),
            location_name=item.get("location_name"),
            time_of_day=item.get("time_of_day", "unknown"),
            characters=frozenset(item.get("characters", [])),
            beats=tuple(item["beats"]) if item.get("beats") else None,
        )
        for item in data["segments"]
    )
    return SegmentedDocument(title=data["title"], source_kind=data["source_kind"], segments=segments)


def looks_like_document_json(text: str) -> bool:
    """Cheap sniff used by the CLI to re-ingest ``parse`` output."""
    stripped = text.lstrip()
    if not stripped.startswith("{"):
        return False
    try:
        data = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError):
        return False
    return isinstance(data, dict) and "segments" in data and "source_kind" in data
