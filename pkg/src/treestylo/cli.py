"""Command-line driver: ``treestylo extract | classify | pcfg``.

Exit codes: 0 success, 1 input error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from dataclasses import dataclass, field
from importlib.resources import files
from pathlib import Path
from typing import Optional

import numpy as np

from . import corpus as cp
from .classifier import MODES, AliasMap, sweep
from .features import ALL_SUBTREES, KINDS, POS, POS_BY_LEVEL, FeatureSpec
from .pcfg import GrammarError, best_parse, load_grammar, perturb, sample_trees, score_tree
from .reducer import NumericalError
from .treebank import (DEFAULT_PUNCTUATION, NormalizationConfig, SentenceStats,
                       normalize_all, read_tree_file, stats)

CSV_HEADER = ["top_n", "feature", "param", "vocab_size", "err_full", "err_2", "err_3",
              "err_4", "err_5", "adj_err_full", "adj_err_2", "adj_err_3", "adj_err_4",
              "adj_err_5"]
CSV_DIMS = (2, 3, 4, 5)

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2


class InputError(ValueError):
    pass


# -- manifest ---------------------------------------------------------------

@dataclass
class ManifestEntry:
    author: str
    doc_id: str
    path: Path
    segments: Optional[int] = None


@dataclass
class Manifest:
    entries: list
    options: NormalizationConfig = field(default_factory=NormalizationConfig)


def read_manifest(path) -> Manifest:
    """Load a JSON manifest; relative tree paths resolve against its folder.

    ::

        {"documents": [{"author": "A", "doc_id": "a1", "path": "a1.mrg",
                        "segments": 2}, ...],
         "options": {"drop_root": true, "strip_words": true,
                     "punctuation_labels": [",", "."]}}
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    docs = raw.get("documents") if isinstance(raw, dict) else None
    if not docs:
        raise InputError(f"{path}: manifest lists no documents")
    entries = []
    for i, d in enumerate(docs):
        try:
            seg = d.get("segments")
            if seg is not None and (not isinstance(seg, int) or seg < 1):
                raise InputError(f"{path}: entry {i}: segments must be a positive integer")
            entries.append(ManifestEntry(str(d["author"]), str(d["doc_id"]),
                                         path.parent / d["path"], seg))
        except (KeyError, TypeError) as exc:
            raise InputError(f"{path}: entry {i} is missing {exc}") from None
    opts = raw.get("options") or {}
    unknown = set(opts) - {"drop_root", "strip_words", "punctuation_labels"}
    if unknown:
        raise InputError(f"{path}: unknown options {sorted(unknown)}")
    cfg = NormalizationConfig(
        drop_root=bool(opts.get("drop_root", True)),
        strip_words=bool(opts.get("strip_words", True)),
        punctuation_labels=frozenset(opts.get("punctuation_labels", DEFAULT_PUNCTUATION)))
    return Manifest(entries, cfg)


def load_corpus(manifest: Manifest) -> cp.Corpus:
    docs = []
    for e in manifest.entries:
        raw = read_tree_file(e.path)
        if not raw:
            raise InputError(f"{e.path}: no trees")
        pieces = [raw] if not e.segments else cp.segment(raw, e.segments)
        for k, piece in enumerate(pieces, 1):
            doc_id = e.doc_id if not e.segments else f"{e.doc_id}#{k}"
            docs.append(cp.Document(
                doc_id, e.author, normalize_all(piece, manifest.options),
                stats(piece, manifest.options.punctuation_labels)))
    return cp.Corpus(docs)


def _specs(kind: str, params) -> list[FeatureSpec]:
    if kind in (POS, POS_BY_LEVEL):
        if params:
            raise InputError(f"--feature {kind} takes no --depth/--level")
        return [FeatureSpec(kind)]
    if not params:
        raise InputError(f"--feature {kind} needs --depth/--level")
    return [FeatureSpec(kind, p) for p in params]


def _safe_name(doc_id: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", doc_id)


def _atomic_write(path: Path, text: str):
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


# -- extract ----------------------------------------------------------------

def cmd_extract(args) -> int:
    corpus = load_corpus(read_manifest(args.manifest))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for spec in _specs(args.feature, args.param):
        counts = corpus.counts(spec)
        tag = _safe_name(str(spec).replace(":", ""))
        sub = out / tag
        sub.mkdir(exist_ok=True)
        names = set()
        for doc, c in zip(corpus.documents, counts):
            name = _safe_name(doc.doc_id)
            if name in names:
                raise InputError(f"doc_id {doc.doc_id!r} collides with another file name")
            names.add(name)
            artifact = {"doc_id": doc.doc_id, "author": doc.author, "feature": spec.kind,
                        "param": spec.param, "sentence_count": doc.stats.sentence_count,
                        "word_count": doc.stats.word_count,
                        "counts": dict(sorted(c.items()))}
            _atomic_write(sub / f"{name}.json", json.dumps(artifact, indent=1) + "\n")
        rows = author_summary(corpus, spec)
        _atomic_write(sub / "summary.csv", _csv(
            ["author", "docs", "sentences", "words", "distinct", "total"], rows))
        union, inter = cp.union_intersection_report(cp.author_totals(corpus, spec))
        print(f"{spec}: {len(corpus)} documents, {len(corpus.classes)} authors, "
              f"union {union}, intersection {inter}")
        for r in rows:
            print("  {:<16} docs={:<4} sentences={:<6} words={:<8} distinct={:<7} total={}"
                  .format(*r))
    return EXIT_OK


def author_summary(corpus: cp.Corpus, spec: FeatureSpec) -> list[list]:
    """One row per author: docs, sentences, words, distinct and total features."""
    totals = cp.author_totals(corpus, spec)
    rows = []
    for a in corpus.classes:
        docs = [corpus.documents[j] for j in corpus.members[a]]
        st = sum((d.stats for d in docs), start=SentenceStats())
        rows.append([a, len(docs), st.sentence_count, st.word_count, len(totals[a]),
                     sum(totals[a].values())])
    return rows


# -- classify ---------------------------------------------------------------

@dataclass
class ReportRow:
    top_n: int
    feature: str
    param: Optional[int]
    vocab_size: int
    err_full: int
    err: dict
    adj_err_full: int
    adj_err: dict
    warnings: list

    def csv_row(self) -> list:
        cell = lambda v: "" if v is None else v  # noqa: E731
        return ([self.top_n, self.feature, cell(self.param), self.vocab_size, self.err_full]
                + [cell(self.err.get(d)) for d in CSV_DIMS]
                + [self.adj_err_full] + [cell(self.adj_err.get(d)) for d in CSV_DIMS])

    def as_dict(self) -> dict:
        return {"top_n": self.top_n, "feature": self.feature, "param": self.param,
                "vocab_size": self.vocab_size, "err_full": self.err_full,
                "err": {str(k): v for k, v in self.err.items()},
                "adj_err_full": self.adj_err_full,
                "adj_err": {str(k): v for k, v in self.adj_err.items()},
                "warnings": self.warnings}


def classify_rows(corpus: cp.Corpus, specs, top_ns, dims, mode="paper",
                  rank_tol=1e-12, alias: Optional[AliasMap] = None) -> list[ReportRow]:
    rows = []
    for n in top_ns:
        for spec in specs:
            totals = cp.author_totals(corpus, spec)
            vocab = cp.top_n_union(totals, n, spec)
            M = cp.build_matrix(corpus, vocab, normalize=True)
            res = sweep(M, dims, mode, rank_tol, alias)
            notes = list(res.warnings)
            if M.zero_columns:
                notes.append(f"documents with no vocabulary feature: {list(M.zero_columns)}")
            rows.append(ReportRow(n, spec.kind, spec.param, len(vocab), res.err_full,
                                  res.err_by_dim, res.adj_full, res.adj_by_dim, notes))
    return rows


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_classify(args) -> int:
    corpus = load_corpus(read_manifest(args.manifest))
    specs = _specs(args.feature, args.param)
    if args.loo_mode == "none":
        raise InputError("--loo-mode none has no projected columns; use paper or strict")
    alias = AliasMap.parse(args.alias or [])
    rows = classify_rows(corpus, specs, args.top_n, args.dims, args.loo_mode,
                         args.rank_tol, alias)
    prefix = Path(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    csv_text = _csv(CSV_HEADER, [r.csv_row() for r in rows])
    meta = {"feature": args.feature, "loo_mode": args.loo_mode, "dims": args.dims,
            "rank_tol": args.rank_tol, "alias": alias.pairs,
            "documents": len(corpus), "classes": corpus.classes,
            "rows": [r.as_dict() for r in rows]}
    _atomic_write(Path(f"{prefix}.csv"), csv_text)
    _atomic_write(Path(f"{prefix}.json"), json.dumps(meta, indent=1) + "\n")
    sys.stdout.write(csv_text)
    for r in rows:
        for w in r.warnings:
            print(f"warning: top_n={r.top_n} {r.feature}:{r.param}: {w}", file=sys.stderr)
    return EXIT_OK


# -- pcfg -------------------------------------------------------------------

def _grammar(path):
    if path is None:
        text = files("treestylo.data").joinpath("airline.pcfg").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    try:
        g = load_grammar(text)
    except GrammarError as exc:
        raise GrammarError(f"{path or 'airline.pcfg'}: {exc}") from None
    for w in g.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return g


def _trees(paths):
    out = []
    for p in paths:
        out.extend(read_tree_file(p))
    return out


def cmd_pcfg_score(args) -> int:
    g = _grammar(args.grammar)
    for i, t in enumerate(_trees(args.trees), 1):
        s = score_tree(g, t)
        print(f"{i}\t{s.probability:.6g}\t{s.log_prob:.12g}\t{t.to_sexpr()}")
    return EXIT_OK


def cmd_pcfg_best(args) -> int:
    g = _grammar(args.grammar)
    trees = _trees(args.trees)
    best = best_parse(g, trees)
    idx = next(i for i, t in enumerate(trees, 1) if t is best.tree)
    print(f"{idx}\t{best.probability:.6g}\t{best.tree.to_sexpr()}")
    return EXIT_OK


def _parse_shift(text: str):
    rule, sep, delta = text.rpartition("=")
    lhs, arrow, rhs = rule.partition("->")
    if not sep or not arrow:
        raise InputError(f"--shift must look like 'LHS -> RHS=DELTA', got {text!r}")
    try:
        return (lhs.strip(), tuple(rhs.split())), float(delta)
    except ValueError:
        raise InputError(f"bad shift amount in {text!r}") from None


def cmd_pcfg_sample(args) -> int:
    g = _grammar(args.grammar)
    if args.shift:
        g = perturb(g, dict(_parse_shift(s) for s in args.shift))
    if args.count < 0:
        raise InputError("--count must be >= 0")
    trees = sample_trees(g, args.count, args.seed, args.max_depth)
    text = "".join(t.to_sexpr() + "\n" for t in trees)
    if args.out:
        _atomic_write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- entry point ------------------------------------------------------------

def _add_feature_args(p):
    p.add_argument("--manifest", required=True, help="JSON corpus manifest")
    p.add_argument("--feature", choices=KINDS, default=ALL_SUBTREES)
    p.add_argument("--depth", "--level", dest="param", type=int, nargs="+",
                   help="subtree depth(s) or rooted level(s)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="treestylo", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="extract per-document feature counts")
    _add_feature_args(p)
    p.add_argument("--out", default="counts", help="output directory")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("classify", help="leave-one-out classification report")
    _add_feature_args(p)
    p.add_argument("--top-n", type=int, nargs="+", default=[5, 10, 20, 30])
    p.add_argument("--dims", type=int, nargs="+", default=list(CSV_DIMS))
    p.add_argument("--loo-mode", choices=MODES, default="paper")
    p.add_argument("--alias", action="append", metavar="FROM=TO")
    p.add_argument("--rank-tol", type=float, default=1e-12)
    p.add_argument("--out", default="report", help="output prefix (.csv and .json)")
    p.set_defaults(func=cmd_classify)

    pc = sub.add_parser("pcfg", help="PCFG scoring and sampling")
    psub = pc.add_subparsers(dest="pcfg_command", required=True)
    for name, func, helptext in (("score", cmd_pcfg_score, "probability of each tree"),
                                 ("best", cmd_pcfg_best, "most probable candidate")):
        p = psub.add_parser(name, help=helptext)
        p.add_argument("--grammar", help="grammar file (default: bundled airline grammar)")
        p.add_argument("trees", nargs="+", help="tree files")
        p.set_defaults(func=func)
    p = psub.add_parser("sample", help="sample trees from a grammar")
    p.add_argument("--grammar")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-depth", type=int, default=30)
    p.add_argument("--shift", action="append", metavar="'LHS -> RHS=DELTA'",
                   help="perturb a rule probability, then renormalize its lhs")
    p.add_argument("--out", help="output tree file (default: stdout)")
    p.set_defaults(func=cmd_pcfg_sample)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "top_n", None) and min(args.top_n) < 1:
        print("error: --top-n values must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "dims", None) and min(args.dims) < 1:
        print("error: --dims values must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
