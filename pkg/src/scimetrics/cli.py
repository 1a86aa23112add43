"""Command-line driver for the pipeline.

Thin by construction: flags are parsed here, every number comes from the
library, and everything on stdout goes through the shared JSON formatter,
so CLI output matches the HTTP service byte for byte. stderr carries
human-readable diagnostics only.

Exit codes: 0 success, 1 validation or data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .api import DEFAULT_LISTEN, create_app
from .battery import build_metric_matrix
from .corpus import parse_corpus, validate_corpus
from .errors import ScimetricsError
from .ranking import oa_advantage
from .reports import (
    fit_for,
    parse_constraints,
    parse_weights,
    parse_window,
    rank_for,
    report_text,
    run_report,
    summary_payload,
)
from .serialize import json_dumps
from .synth import GeneratorConfig, generate_to_dir
from .validation import (
    download_citation_correlator,
    factor_analysis,
    split_half_reliability,
)


class UsageError(Exception):
    """Flag-level mistake detected after argparse (exit 2)."""


def parse_listen(text: str) -> tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep or not host:
        raise ValueError(f"malformed listen address {text!r} (want host:port)")
    return host, int(port)


def parse_metric_list(text: str) -> list[str]:
    return [token.strip() for token in text.split(",")]


def _resolve(args, dest, default=None, parse=None, config_key=None):
    """Flag value, else config-file value, else default."""
    value = getattr(args, dest, None)
    if value is None:
        value = args.run_config.get(config_key or dest)
        if isinstance(value, str) and parse is not None:
            value = parse(value)
    return default if value is None else value


def _load_corpus(args):
    path = _resolve(args, "in_dir", config_key="in")
    if path is None:
        raise UsageError("missing required flag --in")
    return parse_corpus(path)


def _emit(payload) -> None:
    print(json_dumps(payload))


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def cmd_generate(args) -> int:
    out = _resolve(args, "out")
    if out is None:
        raise UsageError("missing required flag --out")
    extra = {}
    loadings = _resolve(args, "loadings", parse=parse_weights)
    if loadings is not None:
        extra["latent_loadings"] = dict(
            zip(loadings.metric_names, loadings.weights))
    cfg = GeneratorConfig(
        seed=_resolve(args, "seed", 0),
        n_units=_resolve(args, "units", 40),
        authors_per_unit=_resolve(args, "authors_per_unit", 3),
        papers_per_author=_resolve(args, "papers_per_author", 4),
        n_disciplines=_resolve(args, "disciplines", 1),
        noise_sigma=_resolve(args, "noise_sigma", 0.1),
        oa_fraction=_resolve(args, "oa_fraction", 0.2),
        oa_citation_multiplier=_resolve(args, "oa_multiplier", 2.0),
        dl_cit_coupling=_resolve(args, "coupling", 0.5),
        years=_resolve(args, "years", 6),
        **extra,
    )
    result = generate_to_dir(cfg, out)
    _emit(summary_payload(result.corpus))
    print(f"wrote corpus for seed {cfg.seed} to {out}", file=sys.stderr)
    return 0


def cmd_ingest(args) -> int:
    corpus = _load_corpus(args)
    _emit({
        "summary": summary_payload(corpus),
        "load": corpus.report.counts(),
    })
    print(corpus.report.to_text(), file=sys.stderr)
    return 0


def cmd_validate(args) -> int:
    corpus = _load_corpus(args)
    report = validate_corpus(corpus)
    _emit(report)
    print(report.to_text(), file=sys.stderr)
    findings = (report.anachronistic_edges + report.orphan_authors
                + report.units_with_zero_papers)
    return 1 if findings else 0


def cmd_metrics(args) -> int:
    corpus = _load_corpus(args)
    matrix = build_metric_matrix(
        corpus,
        _require_discipline(args),
        level=_resolve(args, "level", "unit"),
        metric_names=_resolve(args, "metrics", parse=parse_metric_list),
    )
    _emit(matrix)
    return 0


def cmd_fit(args) -> int:
    corpus = _load_corpus(args)
    _, model = fit_for(
        corpus,
        _require_discipline(args),
        metric_names=_resolve(args, "metrics", parse=parse_metric_list),
        ridge_lambda=_resolve(args, "ridge"),
    )
    _emit(model)
    return 0


def cmd_calibrate(args) -> int:
    from .validation import constrained_refit

    corpus = _load_corpus(args)
    discipline = _require_discipline(args)
    matrix, model = fit_for(
        corpus,
        discipline,
        metric_names=_resolve(args, "metrics", parse=parse_metric_list),
        ridge_lambda=_resolve(args, "ridge"),
    )
    constraints = _resolve(args, "constraints", parse=parse_constraints)
    if constraints:
        model = constrained_refit(
            model, matrix, corpus.criteria[discipline], constraints)
    _emit(model)
    return 0


def cmd_rank(args) -> int:
    corpus = _load_corpus(args)
    weights = _resolve(args, "weights", parse=parse_weights)
    if weights is None:
        raise UsageError("missing required flag --weights")
    _emit(rank_for(corpus, _require_discipline(args), weights))
    return 0


def cmd_correlate(args) -> int:
    corpus = _load_corpus(args)
    kwargs = {}
    dl = _resolve(args, "dl_window", parse=parse_window)
    cit = _resolve(args, "cit_window", parse=parse_window)
    if dl is not None:
        kwargs["dl_window"] = dl
    if cit is not None:
        kwargs["cit_window"] = cit
    _emit(download_citation_correlator(corpus, **kwargs))
    return 0


def cmd_reliability(args) -> int:
    corpus = _load_corpus(args)
    _emit(split_half_reliability(
        corpus,
        _resolve(args, "metric", "citation_count"),
        seed=_resolve(args, "seed", 0),
        duplicate_halves=bool(_resolve(args, "duplicate_halves", False)),
    ))
    return 0


def cmd_factor(args) -> int:
    corpus = _load_corpus(args)
    matrix = build_metric_matrix(
        corpus,
        _require_discipline(args),
        metric_names=_resolve(args, "metrics", parse=parse_metric_list),
    )
    _emit(factor_analysis(matrix))
    return 0


def cmd_oa_advantage(args) -> int:
    corpus = _load_corpus(args)
    _emit(oa_advantage(corpus, _require_discipline(args)))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    corpus = None
    if _resolve(args, "in_dir", config_key="in") is not None:
        corpus = _load_corpus(args)
    host, port = _resolve(
        args, "listen", parse_listen(DEFAULT_LISTEN), parse=parse_listen)
    static = _resolve(args, "static")
    app = create_app(corpus, static_dir=static)
    uvicorn.run(app, host=host, port=port, log_level="warning")
    return 0


def cmd_report(args) -> int:
    corpus = _load_corpus(args)
    report = run_report(
        corpus,
        _require_discipline(args),
        metric_names=_resolve(args, "metrics", parse=parse_metric_list),
        reliability_metric=_resolve(args, "metric", "citation_count"),
        split_seed=_resolve(args, "seed", 0),
    )
    text = report_text(report)
    print(json_dumps(report))
    print(text, end="", file=sys.stderr)
    out = _resolve(args, "out")
    if out is not None:
        directory = Path(out)
        directory.mkdir(parents=True, exist_ok=True)
        (directory / "report.json").write_text(json_dumps(report) + "\n")
        (directory / "report.txt").write_text(text)
        print(f"wrote report.json and report.txt to {directory}",
              file=sys.stderr)
    return 0


def _require_discipline(args) -> str:
    discipline = _resolve(args, "discipline")
    if discipline is None:
        raise UsageError("missing required flag --discipline")
    return discipline


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scimetrics",
        description="Generate, validate, and analyze research corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, **flag_sets):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=handler)
        p.add_argument("--config", help="JSON config file; flags override it")
        if flag_sets.get("input", True):
            p.add_argument("--in", dest="in_dir", metavar="DIR",
                           help="corpus directory")
        return p

    p = add("generate", cmd_generate, "write a synthetic corpus",
            input=False)
    p.add_argument("--out", required=False, help="output directory")
    p.add_argument("--seed", type=int)
    p.add_argument("--units", type=int)
    p.add_argument("--authors-per-unit", type=int)
    p.add_argument("--papers-per-author", type=int)
    p.add_argument("--disciplines", type=int)
    p.add_argument("--noise-sigma", type=float)
    p.add_argument("--oa-fraction", type=float)
    p.add_argument("--oa-multiplier", type=float)
    p.add_argument("--coupling", type=float)
    p.add_argument("--years", type=int)
    p.add_argument("--loadings", type=parse_weights, metavar="name:w,...")

    add("ingest", cmd_ingest, "load a corpus and print link findings")
    add("validate", cmd_validate,
        "integrity report; exit 1 on any finding")

    p = add("metrics", cmd_metrics, "print the metric matrix")
    p.add_argument("--discipline")
    p.add_argument("--level", choices=("unit", "author"))
    p.add_argument("--metrics", type=parse_metric_list, metavar="a,b,c")

    p = add("fit", cmd_fit, "fit the criterion regression")
    p.add_argument("--discipline")
    p.add_argument("--metrics", type=parse_metric_list, metavar="a,b,c")
    p.add_argument("--ridge", type=float)

    p = add("calibrate", cmd_calibrate, "refit with pinned betas")
    p.add_argument("--discipline")
    p.add_argument("--metrics", type=parse_metric_list, metavar="a,b,c")
    p.add_argument("--ridge", type=float)
    p.add_argument("--constraints", type=parse_constraints,
                   metavar="name:v,...")

    p = add("rank", cmd_rank, "composite ranking for hand-set weights")
    p.add_argument("--discipline")
    p.add_argument("--weights", type=parse_weights, metavar="name:w,...")

    p = add("correlate", cmd_correlate, "download/citation correlator")
    p.add_argument("--dl-window", type=parse_window, metavar="a:b")
    p.add_argument("--cit-window", type=parse_window, metavar="c:")

    p = add("reliability", cmd_reliability, "split-half reliability")
    p.add_argument("--metric")
    p.add_argument("--seed", type=int)
    p.add_argument("--duplicate-halves", action="store_true", default=None)

    p = add("factor", cmd_factor, "factor-analyze the battery")
    p.add_argument("--discipline")
    p.add_argument("--metrics", type=parse_metric_list, metavar="a,b,c")

    p = add("oa-advantage", cmd_oa_advantage,
            "open-access citation advantage")
    p.add_argument("--discipline")

    p = add("serve", cmd_serve, "run the HTTP service")
    p.add_argument("--listen", type=parse_listen, metavar="host:port")
    p.add_argument("--static", help="directory of UI assets to serve at /")

    p = add("report", cmd_report, "full run summary (JSON + text)")
    p.add_argument("--discipline")
    p.add_argument("--metrics", type=parse_metric_list, metavar="a,b,c")
    p.add_argument("--metric", help="reliability metric")
    p.add_argument("--seed", type=int, help="reliability split seed")
    p.add_argument("--out", help="directory for report.json / report.txt")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.run_config = {}
    if getattr(args, "config", None):
        try:
            args.run_config = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read config {args.config}: {exc}")
    try:
        return args.func(args)
    except UsageError as exc:
        print(parser.format_usage(), end="", file=sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(parser.format_usage(), end="", file=sys.stderr)
        print(f"{parser.prog}: error: missing file: {exc.filename or exc}",
              file=sys.stderr)
        return 2
    except ValueError as exc:
        # domain-invalid flag values (bad windows, out-of-range knobs)
        print(parser.format_usage(), end="", file=sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except ScimetricsError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
