"""Command-line pipeline: parse -> matrix -> factors -> downstream reports.

Every subcommand is a pure function of (input bytes, flags): identical
runs produce byte-identical artifacts, each carrying a manifest with
the tool version, the semantic config, and a content hash of the parsed
document. Exit codes: 0 success, 1 user error, 2 internal failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .baseline import CSV_HEADER, permutation_test, resolve_attribute
from .ca import correspondence_analysis
from .chrono import constrained_cluster, cut
from .corpus import (
    SegmentedDocument,
    beat_document,
    build_matrix,
    corpus_to_json,
    detect_kind,
    document_from_json,
    document_to_json,
    looks_like_document_json,
    matrix_to_triplet,
    parse_prose,
    parse_screenplay,
    vocabulary_to_text,
)
from .errors import NarrascopeError, RankTooLow
from .manifest import build_manifest, canonical_json, sha256_hex
from .plots import plot_dendrogram, plot_factor_plane, plot_strip
from .summarize import extract_backbone, salience

_FORMATS = ("json", "csv", "svg", "txt")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="narrascope", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"narrascope {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, beats=True):
        p.add_argument("input", help="text file, or a document.json from `parse`")
        p.add_argument("--kind", choices=["auto", "screenplay", "prose"], default="auto")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--format", default=None,
                       help="comma list of output formats to keep (json,csv,svg,txt)")
        if beats:
            p.add_argument("--beats-of", type=int, default=None, metavar="ORDINAL",
                           help="re-segment one scene into its beats before analysis")

    p = sub.add_parser("parse", help="segment the input and emit document.json")
    common(p)

    p = sub.add_parser("analyze", help="build the term matrix and factor model")
    common(p)
    p.add_argument("--axes", default="full", help='retained axes, or "full"')

    p = sub.add_parser("segment", help="episodize via constrained clustering")
    common(p)
    p.add_argument("--blocks", type=int, required=True, help="number of contiguous blocks")

    p = sub.add_parser("baseline", help="permutation-test a narrative attribute")
    common(p)
    p.add_argument("--attr", required=True, help="attribute name (e.g. A2, A3, A4, A6)")
    p.add_argument("--R", default="999", help='replicates, or "exhaustive"')
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("summarize", help="rank salience and extract the backbone")
    common(p)
    p.add_argument("--axes", type=int, default=2)
    p.add_argument("--top-k", type=int, default=None)
    p.add_argument("--threshold", type=float, default=None)

    p = sub.add_parser("plot", help="emit the axes 1-2 factor plane as SVG")
    common(p)
    p.add_argument("--highlight", default="", help="comma list of segment ordinals")

    return parser


def _load_document(args) -> SegmentedDocument:
    path = Path(args.input)
    raw = path.read_text(encoding="utf-8")
    if looks_like_document_json(raw):
        doc = document_from_json(json.loads(raw))
    else:
        kind = args.kind if args.kind != "auto" else detect_kind(raw)
        if kind == "screenplay":
            doc = parse_screenplay(raw, title=path.stem)
        else:
            doc = parse_prose(raw, title=path.stem)
    beats_of = getattr(args, "beats_of", None)
    if beats_of is not None:
        doc = beat_document(doc, beats_of)
    return doc


def _formats(args) -> set[str]:
    if args.format is None:
        return set(_FORMATS)
    chosen = {f.strip() for f in args.format.split(",") if f.strip()}
    bad = chosen - set(_FORMATS)
    if bad:
        raise _UsageError(f"unknown format(s): {sorted(bad)}")
    if not chosen:
        raise _UsageError("at least one output format is required")
    return chosen


class _Emitter:
    """Collects artifacts, then writes them plus a run manifest."""

    def __init__(self, out_dir: str, formats: set[str], manifest: dict):
        self.out_dir = Path(out_dir)
        self.formats = formats
        self.manifest = manifest
        self.artifacts: dict[str, str] = {}

    def add_json(self, name: str, payload: dict):
        body = dict(payload)
        body["schema_version"] = 1
        body["manifest"] = self.manifest
        self.artifacts[name] = json.dumps(body, indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def add_text(self, name: str, text: str):
        self.artifacts[name] = text

    def write(self) -> list[Path]:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        written = []
        kept = {
            name: data
            for name, data in self.artifacts.items()
            if name.rsplit(".", 1)[-1] in self.formats
        }
        run = {
            "manifest": self.manifest,
            "schema_version": 1,
            "artifacts": {name: sha256_hex(data) for name, data in sorted(kept.items())},
        }
        kept["manifest.json"] = json.dumps(run, indent=2, sort_keys=True) + "\n"
        for name, data in sorted(kept.items()):
            target = self.out_dir / name
            target.write_text(data, encoding="utf-8")
            written.append(target)
        return written


def _make_emitter(args, doc: SegmentedDocument, config: dict) -> _Emitter:
    doc_hash = sha256_hex(canonical_json(document_to_json(doc)))
    manifest = build_manifest(__version__, config, doc_hash)
    return _Emitter(args.out, _formats(args), manifest)


def _config(args, **extra) -> dict:
    base = {"command": args.command, "kind": args.kind}
    beats_of = getattr(args, "beats_of", None)
    if beats_of is not None:
        base["beats_of"] = beats_of
    base.update(extra)
    return base


def _cmd_parse(args) -> int:
    doc = _load_document(args)
    emitter = _make_emitter(args, doc, _config(args))
    emitter.add_json("document.json", document_to_json(doc))
    emitter.write()
    return 0


def _resolve_axes(value) -> int | str:
    if value == "full":
        return "full"
    try:
        return int(value)
    except (TypeError, ValueError):
        raise _UsageError(f'--axes must be an integer or "full", got {value!r}')


def _cmd_analyze(args) -> int:
    doc = _load_document(args)
    axes = _resolve_axes(args.axes)
    matrix, vocabulary = build_matrix(doc)
    model = correspondence_analysis(matrix, k=axes, col_labels=vocabulary.terms)
    emitter = _make_emitter(args, doc, _config(args, axes=str(axes)))
    emitter.add_json("factor_model.json", model.to_json_dict())
    emitter.add_json("corpus.json", corpus_to_json(matrix, vocabulary))
    emitter.add_text("matrix.txt", matrix_to_triplet(matrix))
    emitter.add_text("vocabulary.txt", vocabulary_to_text(vocabulary))
    emitter.write()
    return 0


def _cmd_segment(args) -> int:
    doc = _load_document(args)
    matrix, vocabulary = build_matrix(doc)
    model = correspondence_analysis(matrix, col_labels=vocabulary.terms)
    dendrogram = constrained_cluster(model.row_coords)
    segmentation = cut(dendrogram, args.blocks)
    emitter = _make_emitter(args, doc, _config(args, blocks=args.blocks))
    emitter.add_json("dendrogram.json", dendrogram.to_json_dict())
    emitter.add_json("segmentation.json", segmentation.to_json_dict())
    emitter.add_text(
        "dendrogram.svg",
        plot_dendrogram(dendrogram, labels=list(matrix.row_ordinals),
                        comment=canonical_json(emitter.manifest)),
    )
    emitter.write()
    return 0


def _cmd_baseline(args) -> int:
    doc = _load_document(args)
    matrix, _ = build_matrix(doc)
    r_arg = args.R if args.R == "exhaustive" else int(args.R)
    try:
        attr = resolve_attribute(args.attr)
    except KeyError as exc:
        raise _UsageError(str(exc))
    report = permutation_test(matrix, doc, attr, R=r_arg, seed=args.seed)
    emitter = _make_emitter(
        args, doc, _config(args, attr=attr, R=str(r_arg), seed=args.seed)
    )
    emitter.add_json("baseline_report.json", report.to_json_dict())
    emitter.add_text("baseline_summary.csv", CSV_HEADER + "\n" + report.to_csv_line() + "\n")
    emitter.write()
    return 0


def _cmd_summarize(args) -> int:
    doc = _load_document(args)
    matrix, vocabulary = build_matrix(doc)
    model = correspondence_analysis(matrix, col_labels=vocabulary.terms)
    top_k = args.top_k
    if top_k is None and args.threshold is None:
        top_k = 6
    report = salience(model, axes=args.axes)
    backbone = extract_backbone(
        doc, matrix, model, vocabulary,
        top_k=top_k, threshold=args.threshold, axes=args.axes,
    )
    emitter = _make_emitter(
        args, doc,
        _config(args, axes=args.axes, top_k=top_k, threshold=args.threshold),
    )
    emitter.add_json("salience.json", report.to_json_dict())
    emitter.add_json("backbone.json", backbone.to_json_dict())
    bodies = {seg.ordinal: seg.body for seg in doc.segments}
    lines = [f"# backbone summary ({len(backbone.selected)} segments)",
             f"# manifest: {canonical_json(emitter.manifest)}", ""]
    for ordinal in backbone.selected:
        lines.append(f"[segment {ordinal}]")
        lines.append(bodies[ordinal])
        lines.append("")
    emitter.add_text("backbone.txt", "\n".join(lines))
    emitter.write()
    return 0


def _cmd_plot(args) -> int:
    doc = _load_document(args)
    matrix, vocabulary = build_matrix(doc)
    model = correspondence_analysis(matrix, col_labels=vocabulary.terms)
    highlight = [int(x) for x in args.highlight.split(",") if x.strip()]
    emitter = _make_emitter(args, doc, _config(args, highlight=highlight))
    comment = canonical_json(emitter.manifest)
    try:
        svg = plot_factor_plane(model, highlight=highlight, comment=comment)
    except RankTooLow:
        svg = plot_strip(model, highlight=highlight, comment=comment)
    emitter.add_text("factor_plane.svg", svg)
    emitter.write()
    return 0


_COMMANDS = {
    "parse": _cmd_parse,
    "analyze": _cmd_analyze,
    "segment": _cmd_segment,
    "baseline": _cmd_baseline,
    "summarize": _cmd_summarize,
    "plot": _cmd_plot,
}


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"narrascope: {exc}", file=sys.stderr)
        return 1
    except (NarrascopeError, OSError, UnicodeDecodeError, ValueError, KeyError) as exc:
        print(f"narrascope: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - internal failure path
        print(f"narrascope: internal error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
