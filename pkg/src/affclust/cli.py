"""Command-line driver: ``affclust <command> [options]``.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 data validation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .cooccur import write_cooccurrence_snapshot
from .errors import DataValidationError
from .evalkit import compare_clusterings, format_score, pairwise_score, token_baseline
from .graph import SWEEP_COLUMNS, build_graph, components, largest_component, sweep
from .ingest import extract_observations, parse_corpus, write_corpus, write_observations
from .matrix import matrix_stats, write_snapshot
from .pipeline import cooccurrence_of, load_input
from .synth import (
    SynthConfig,
    branch_config,
    confusion_corpus,
    generate,
    large_scale_config,
    read_truth,
    write_truth,
)

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_DATA = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _rate(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {value}")
    return value


def _cutoff(text: str) -> float:
    value = float(text)
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1], got {value}")
    return value


def _int_range(text: str) -> tuple[int, int]:
    """``"4"`` or ``"3:8"``."""
    lo, _, hi = text.partition(":")
    try:
        pair = (int(lo), int(hi or lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO:HI, got {text!r}") from None
    if not 1 <= pair[0] <= pair[1]:
        raise argparse.ArgumentTypeError(f"need 1 <= LO <= HI, got {text!r}")
    return pair


class _Output:
    """Write to ``path`` or to stdout when ``path`` is None."""

    def __init__(self, path: str | None):
        self.path = path

    def __enter__(self):
        if self.path is None:
            return sys.stdout
        self._fh = open(self.path, "w", encoding="utf-8", newline="")
        return self._fh

    def __exit__(self, *exc):
        if self.path is not None:
            self._fh.close()


def _write_checkpoints(args, loaded, c=None) -> None:
    if not getattr(args, "checkpoint_dir", None):
        return
    d = Path(args.checkpoint_dir)
    d.mkdir(parents=True, exist_ok=True)
    with open(d / "matrix.jsonl", "w", encoding="utf-8") as fh:
        write_snapshot(fh, loaded.matrix, loaded.authors, loaded.affiliations)
    if c is not None:
        with open(d / "cooccurrence.jsonl", "w", encoding="utf-8") as fh:
            write_cooccurrence_snapshot(fh, c)


def _clustering(args):
    loaded = load_input(args.input)
    c = cooccurrence_of(loaded.matrix, loaded.affiliations, args.workers)
    _write_checkpoints(args, loaded, c)
    return loaded, c


def cmd_ingest(args) -> int:
    with open(args.input, "rb") as fh:
        parsed = parse_corpus(fh)
    extracted = extract_observations(parsed.records)
    with open(args.output, "w", encoding="utf-8") as fh:
        write_observations(extracted.observations, fh)
    report = {
        "records": len(parsed.records),
        "skipped_lines": parsed.skipped_lines,
        "dropped_authors": parsed.dropped_authors,
        "dropped_affiliations": extracted.dropped_affiliations,
        "observations": len(extracted.observations),
    }
    for k, v in report.items():
        print(f"{k}: {v}")
    return EXIT_OK


def cmd_cluster(args) -> int:
    loaded, c = _clustering(args)
    cl = components(build_graph(c, args.threshold))
    with _Output(args.output) as out:
        out.write(cl.dumps(include_singletons=args.include_singletons))
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.t_min > args.t_max:
        print(f"affclust sweep: error: --t-min {args.t_min} exceeds --t-max {args.t_max}", file=sys.stderr)
        return EXIT_USAGE
    _, c = _clustering(args)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    writer.writerows(sweep(c, args.t_min, args.t_max))
    with _Output(args.output) as out:
        out.write(buf.getvalue())
    return EXIT_OK


def cmd_export(args) -> int:
    _, c = _clustering(args)
    comp = largest_component(components(build_graph(c, args.threshold)), args.rank)
    with _Output(args.output) as out:
        if args.format == "dot":
            out.write(comp.to_dot())
        else:
            out.write(json.dumps(comp.to_json(), ensure_ascii=False, indent=2) + "\n")
    return EXIT_OK


def cmd_stats(args) -> int:
    loaded, c = _clustering(args)
    st = matrix_stats(loaded.matrix)
    lines = {
        "input_kind": loaded.kind,
        **loaded.report,
        "authors": st.rows,
        "affiliations": st.cols,
        "nonzeros": st.nonzeros,
        "total_count": st.total,
        "cooccurring_pairs": c.nnz_pairs,
        "max_pair_weight": int(c.weights.max()) if c.nnz_pairs else 0,
    }
    for k, v in lines.items():
        print(f"{k}: {v}")
    return EXIT_OK


def _gen_config(args) -> SynthConfig:
    return SynthConfig(
        institute_count=args.institutes,
        aliases_per_institute=args.aliases,
        authors_per_institute=args.authors,
        papers_per_author=args.papers,
        coauthors_per_paper=args.coauthors,
        homonym_rate=args.homonym_rate,
        cross_institute_noise_rate=args.noise_rate,
        rng_seed=args.seed,
        family_pool=args.families,
    )


def cmd_gen(args) -> int:
    if args.scenario == "confusion":
        records, truth = confusion_corpus(args.seed)
    else:
        if args.scenario == "branch":
            config = branch_config(args.seed)
        elif args.scenario == "large":
            config = large_scale_config(args.seed)
        else:
            config = _gen_config(args)
        records, truth = generate(config)
    with open(args.output, "w", encoding="utf-8") as fh:
        write_corpus(records, fh)
    with open(args.truth, "w", encoding="utf-8") as fh:
        write_truth(fh, truth)
    print(f"papers: {len(records)}")
    print(f"affiliations: {len(truth.affiliations)}")
    print(f"institutes: {len(set(truth.affiliations.values()))}")
    return EXIT_OK


def cmd_eval(args) -> int:
    _, c = _clustering(args)
    with open(args.truth, encoding="utf-8") as fh:
        truth = read_truth(fh)
    cl = components(build_graph(c, args.threshold))
    score = pairwise_score(cl, truth)
    result = {"threshold": args.threshold, "score": score.to_json()}
    text = format_score(score, f"co-occurrence clustering, threshold {args.threshold}")
    if args.baseline_cutoff is not None:
        base = token_baseline(c.labels, args.baseline_cutoff)
        base_score = pairwise_score(base, truth)
        cmp = compare_clusterings(cl, base)
        result["baseline"] = {"cutoff": args.baseline_cutoff, "score": base_score.to_json()}
        result["comparison"] = cmp.to_json()
        text += format_score(base_score, f"token baseline, cutoff {args.baseline_cutoff}")
        text += "comparison (A = co-occurrence, B = token baseline)\n" + cmp.to_text()
    with _Output(args.output) as out:
        if args.format == "json":
            out.write(json.dumps(result, indent=2) + "\n")
        else:
            out.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="affclust", description="Cluster affiliation strings by shared authors.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log skipped lines and other details to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, output_help="output file (default: stdout)"):
        sp.add_argument("--input", required=True, help="corpus, observations file or matrix snapshot")
        sp.add_argument("--output", help=output_help)
        sp.add_argument("--workers", type=_positive_int, default=1, help="threads for the co-occurrence product")
        sp.add_argument("--checkpoint-dir", help="also write matrix.jsonl and cooccurrence.jsonl here")

    sp = sub.add_parser("ingest", help="parse a corpus into an observations file")
    sp.add_argument("--input", required=True)
    sp.add_argument("--output", required=True)
    sp.set_defaults(func=cmd_ingest)

    sp = sub.add_parser("cluster", help="cluster affiliations at one threshold (JSON)")
    common(sp)
    sp.add_argument("--threshold", type=_positive_int, default=1)
    sp.add_argument("--include-singletons", action="store_true")
    sp.set_defaults(func=cmd_cluster)

    sp = sub.add_parser("sweep", help="cluster summaries over a threshold range (CSV)")
    common(sp)
    sp.add_argument("--t-min", type=_positive_int, default=1)
    sp.add_argument("--t-max", type=_positive_int, default=6)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("export", help="export one component as DOT or JSON")
    common(sp)
    sp.add_argument("--threshold", type=_positive_int, default=1)
    sp.add_argument("--rank", type=_nonneg_int, default=0, help="0 = largest component")
    sp.add_argument("--format", choices=("dot", "json"), default="dot")
    sp.set_defaults(func=cmd_export)

    sp = sub.add_parser("stats", help="matrix and co-occurrence statistics")
    common(sp)
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("gen", help="generate a synthetic corpus and truth file")
    sp.add_argument("--output", required=True, help="corpus JSONL path")
    sp.add_argument("--truth", required=True, help="truth JSONL path")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--scenario", choices=("custom", "branch", "confusion", "large"), default="custom")
    sp.add_argument("--institutes", type=_positive_int, default=10)
    sp.add_argument("--aliases", type=_int_range, default=(3, 5), metavar="N|LO:HI")
    sp.add_argument("--authors", type=_int_range, default=(5, 15), metavar="N|LO:HI")
    sp.add_argument("--papers", type=_int_range, default=(3, 8), metavar="N|LO:HI", help="appearances per author")
    sp.add_argument("--coauthors", type=_int_range, default=(2, 6), metavar="N|LO:HI")
    sp.add_argument("--homonym-rate", type=_rate, default=0.0)
    sp.add_argument("--noise-rate", type=_rate, default=0.0)
    sp.add_argument("--families", type=_positive_int, default=None, help="distinct institute name families")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("eval", help="score a clustering against a truth file")
    common(sp)
    sp.add_argument("--truth", required=True)
    sp.add_argument("--threshold", type=_positive_int, default=1)
    sp.add_argument("--baseline-cutoff", type=_cutoff, default=None, help="also run the token baseline")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_eval)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help, --version and usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except (DataValidationError, ValueError, KeyError, IndexError) as exc:
        print(f"affclust {args.command}: invalid data: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"affclust {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
