"""Command-line interface.

Every subcommand reads an optional INI config (``--config``), applies its
flags on top and writes its outputs plus ``effective_config.ini`` under
``--output-dir``. Output file names are fixed so reruns overwrite in place:

  stats       key_features.csv, key_features.txt
  preprocess  tokenized.jsonl, dtm.csv, dtm.vocab.txt
  explore     frequencies.csv, wordcloud.csv, top_terms.svg,
              term_network.{graphml,dot,svg}
  topics      bic.csv, bic.svg, topic_terms.csv, doc_topics.csv, model.json
  cooccur     cooccur_<term>.csv, ego_<term>.{graphml,dot,svg}
  simulate    sim_dtm.csv, sim_dtm.vocab.txt, sim_truth.json

Exit status: 0 ok, 1 usage, 2 data error, 3 domain error, 4 numerical failure.
"""

from __future__ import annotations

import dataclasses
import json
import re
import sys
from pathlib import Path

import click

from . import __version__
from .config import RunConfig, load_config
from .corpus import aggregate_by, load_corpus
from .cooccur import associations, build_boolean_contexts, ego_network
from .dtm import (BOOLEAN, COUNT, DOCUMENT, SENTENCE, build_dtm, lexical_stats,
                  read_dtm, top_terms, trim_dtm, write_dtm)
from .errors import CorpusmixError, DataError
from .explore import term_network, wordcloud_data
from .export import bar_svg, fmt, line_svg, write_csv, write_network
from .lda import (LdaConfig, doc_topic_mixture, fit_lda, sample_corpus, select_k, topic_terms,
                  write_model_json)
from .lda.model import bic_value
from .textprep import load_prep_config, preprocess_corpus

EFFECTIVE_CONFIG = "effective_config.ini"


# -- shared plumbing ----------------------------------------------------------

def _resolve(ctx: click.Context, **flags) -> RunConfig:
    base = ctx.obj or RunConfig()
    return base.updated(**flags)


def _outdir(cfg: RunConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / EFFECTIVE_CONFIG).write_text(cfg.to_ini(), encoding="utf-8")
    return out


def _tokenized(cfg: RunConfig, group_by: str | None = None):
    if not cfg.corpus_dir:
        raise click.UsageError("no corpus given (--corpus-dir or corpus_dir in the config)")
    corpus = load_corpus(cfg.corpus_dir, cfg.metadata_path)
    if group_by:
        corpus = aggregate_by(corpus, group_by)
    prep = load_prep_config(cfg.stopwords_path, cfg.lemma_path, cfg.collocations_path,
                            min_word_len=cfg.min_word_len)
    return preprocess_corpus(corpus, prep)


def _weighting(cfg: RunConfig) -> str:
    if cfg.weighting not in (COUNT, BOOLEAN):
        raise click.UsageError(f"weighting must be {COUNT!r} or {BOOLEAN!r}")
    return cfg.weighting


def _context(cfg: RunConfig, default: str) -> str:
    context = cfg.context or default
    if context not in (DOCUMENT, SENTENCE):
        raise click.UsageError(f"context must be {DOCUMENT!r} or {SENTENCE!r}")
    return context


def _safe_name(term: str) -> str:
    return re.sub(r"[^\w.-]", "_", term)


def corpus_options(f):
    opts = [
        click.option("--corpus-dir", type=click.Path(file_okay=False), help="Directory of *.txt documents."),
        click.option("--metadata", "metadata_path", type=click.Path(dir_okay=False),
                     help="Metadata table with a doc_id column."),
        click.option("--stopwords", "stopwords_path", type=click.Path(dir_okay=False)),
        click.option("--lemmas", "lemma_path", type=click.Path(dir_okay=False),
                     help="Two-column token<TAB>lemma table."),
        click.option("--collocations", "collocations_path", type=click.Path(dir_okay=False)),
        click.option("--min-word-len", type=int),
        click.option("--min-term-freq", type=int, help="Trim terms with lower corpus frequency."),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return output_option(f)


def output_option(f):
    return click.option("-o", "--output-dir", type=click.Path(file_okay=False))(f)


# -- commands -----------------------------------------------------------------

@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("-c", "--config", "config_path", type=click.Path(dir_okay=False),
              help="INI file with default settings; flags take precedence.")
@click.version_option(__version__, prog_name="corpusmix")
@click.pass_context
def cli(ctx, config_path):
    """Corpus statistics, LDA topic mixtures and term co-occurrence networks."""
    ctx.obj = load_config(config_path) if config_path else RunConfig()


@cli.command()
@corpus_options
@click.pass_context
def stats(ctx, **flags):
    """Key lexical features of the cleaned corpus."""
    cfg = _resolve(ctx, **flags)
    docs = _tokenized(cfg)
    report = lexical_stats(docs).rows()
    out = _outdir(cfg)
    write_csv(out / "key_features.csv", ["feature", "value"], report)
    width = max(len(name) for name, _ in report)
    text = "Key features of the corpus\n" + "".join(f"{name:<{width}}  {value}\n" for name, value in report)
    (out / "key_features.txt").write_text(text, encoding="utf-8")
    click.echo(text, nl=False)


@cli.command()
@corpus_options
@click.option("--weighting", type=click.Choice([COUNT, BOOLEAN]))
@click.option("--context", type=click.Choice([DOCUMENT, SENTENCE]))
@click.pass_context
def preprocess(ctx, **flags):
    """Emit the tokenized corpus and its trimmed document-term matrix."""
    cfg = _resolve(ctx, **flags)
    docs = _tokenized(cfg)
    out = _outdir(cfg)
    with open(out / "tokenized.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for doc in docs:
            fh.write(json.dumps({"id": doc.id, "sentences": doc.sentences}, ensure_ascii=False) + "\n")
    dtm = trim_dtm(build_dtm(docs, _weighting(cfg), _context(cfg, DOCUMENT)), cfg.min_term_freq)
    write_dtm(dtm, out / "dtm.csv")
    click.echo(f"{len(docs)} documents, {dtm.shape[0]} rows x {dtm.shape[1]} terms -> {out}")


@cli.command()
@corpus_options
@click.option("--context", type=click.Choice([DOCUMENT, SENTENCE]),
              help="Context unit for term-network edges.")
@click.option("--top-n", type=int, help="Bars in the frequency chart.")
@click.option("--max-terms", type=int, help="Terms in the word cloud table.")
@click.option("--network-top-n", type=int, help="Terms in the network.")
@click.pass_context
def explore(ctx, **flags):
    """Frequency table, word-cloud sizes and the top-term network."""
    cfg = _resolve(ctx, **flags)
    docs = _tokenized(cfg)
    dtm = trim_dtm(build_dtm(docs, COUNT, _context(cfg, DOCUMENT)), cfg.min_term_freq)
    if dtm.shape[1] == 0:
        raise DataError(f"no term reaches min_term_freq={cfg.min_term_freq}")
    out = _outdir(cfg)
    freqs = top_terms(dtm, dtm.shape[1])
    write_csv(out / "frequencies.csv", ["term", "frequency"], freqs)
    cloud = wordcloud_data(freqs, cfg.max_terms, cfg.min_size, cfg.max_size)
    write_csv(out / "wordcloud.csv", ["term", "frequency", "size"],
              [(c.term, c.frequency, c.size) for c in cloud])
    head = freqs[:cfg.top_n]
    (out / "top_terms.svg").write_text(bar_svg([t for t, _ in head], [f for _, f in head]),
                                       encoding="utf-8")
    net = term_network(dtm, cfg.network_top_n)
    write_network(out / "term_network", net.nodes, net.edges, "frequency", "weight")
    click.echo(f"{dtm.shape[1]} terms -> {out}")


@cli.command()
@corpus_options
@click.option("--dtm", "dtm_path", type=click.Path(dir_okay=False),
              help="Read a triplet CSV instead of a corpus directory.")
@click.option("--vocab", "vocab_path", type=click.Path(dir_okay=False),
              help="Vocabulary sidecar for --dtm (default: <dtm>.vocab.txt).")
@click.option("--group-by", help="Metadata variable to aggregate documents by.")
@click.option("--k", type=int, help="Fit this k only (no selection).")
@click.option("--k-min", type=int)
@click.option("--k-max", type=int)
@click.option("--chosen-k", type=int, help="Report this k instead of the BIC minimum.")
@click.option("--alpha", type=float, help="Document-topic prior (default 50/k).")
@click.option("--delta", type=float, help="Topic-term prior.")
@click.option("--seed", type=int)
@click.option("--em-max-iter", type=int)
@click.option("--em-rel-tol", type=float)
@click.option("--estep-max-iter", type=int)
@click.option("--estep-rel-tol", type=float)
@click.option("--top-n", type=int, help="Terms listed per topic.")
@click.pass_context
def topics(ctx, **flags):
    """Fit LDA by variational EM, choosing k by BIC."""
    cfg = _resolve(ctx, **flags)
    if cfg.dtm_path:
        if cfg.group_by:
            raise click.UsageError("--group-by needs a corpus directory, not --dtm")
        dtm = read_dtm(cfg.dtm_path, cfg.vocab_path)
    else:
        dtm = build_dtm(_tokenized(cfg, cfg.group_by), COUNT, DOCUMENT)
    dtm = trim_dtm(dtm, cfg.min_term_freq)
    if dtm.shape[1] == 0:
        raise DataError(f"no term reaches min_term_freq={cfg.min_term_freq}")

    template = LdaConfig(k=1, alpha=cfg.alpha, delta=cfg.delta, seed=cfg.seed,
                         em_max_iter=cfg.em_max_iter, em_rel_tol=cfg.em_rel_tol,
                         estep_max_iter=cfg.estep_max_iter, estep_rel_tol=cfg.estep_rel_tol)
    V, n = dtm.shape[1], dtm.n_tokens
    if cfg.k is not None:
        model = fit_lda(dtm, dataclasses.replace(template, k=cfg.k))
        curve = [(cfg.k, bic_value(model.diagnostics.log_likelihood_bound, cfg.k, V, n))]
        best_k = chosen = cfg.k
    else:
        sel = select_k(dtm, cfg.k_min, cfg.k_max, template, cfg.chosen_k)
        model = sel.model()
        curve = list(zip(sel.k_values, sel.bic))
        best_k, chosen = sel.best_k, sel.chosen_k

    out = _outdir(cfg)
    write_csv(out / "bic.csv", ["k", "bic"], curve)
    (out / "bic.svg").write_text(line_svg([k for k, _ in curve], [b for _, b in curve],
                                          "number of topics k", "BIC"), encoding="utf-8")
    rows = []
    for t, terms in enumerate(topic_terms(model, cfg.top_n), 1):
        rows.extend((t, rank, term, p) for rank, (term, p) in enumerate(terms, 1))
    write_csv(out / "topic_terms.csv", ["topic", "rank", "term", "probability"], rows)
    header = ["doc_id"] + [f"topic_{t}" for t in range(1, model.k + 1)]
    write_csv(out / "doc_topics.csv", header,
              ([doc_id] + [fmt(x) for x in mix] for doc_id, mix in doc_topic_mixture(model)))
    write_model_json(model, out / "model.json", extra={"bic": {
        "k": [k for k, _ in curve], "value": [b for _, b in curve], "best_k": best_k,
        "chosen_k": chosen, "n": n, "n_definition": "total tokens", "p_definition": "k*(V-1)"}})
    click.echo(f"k={chosen} (BIC minimum at k={best_k}), {dtm.shape[0]} documents, "
               f"{V} terms -> {out}")


@cli.command()
@corpus_options
@click.option("-f", "--focal", "focal_terms", multiple=True, help="Focal term; repeatable.")
@click.option("--context", type=click.Choice([DOCUMENT, SENTENCE]))
@click.option("--top-n", type=int, help="Associates listed and linked to the focal term.")
@click.option("--depth", type=click.IntRange(1, 2))
@click.option("--llr-threshold", type=float, help="Minimum LLR for network edges.")
@click.option("--fanout", type=int, help="Second-ring branches per first-ring term.")
@click.pass_context
def cooccur(ctx, **flags):
    """LLR co-occurrence rankings and ego networks for focal terms."""
    cfg = _resolve(ctx, **flags)
    if not cfg.focal_terms:
        raise click.UsageError("give at least one --focal term")
    docs = _tokenized(cfg)
    bdtm = build_boolean_contexts(docs, _context(cfg, SENTENCE))
    bdtm = trim_dtm(bdtm, cfg.min_term_freq)
    results = [(focal, associations(bdtm, focal)) for focal in cfg.focal_terms]
    out = _outdir(cfg)
    for focal, assoc in results:
        name = _safe_name(focal)
        write_csv(out / f"cooccur_{name}.csv", ["term", "llr", "m_i", "m_j", "m_ij"],
                  [(a.term, a.llr, a.m_i, a.m_j, a.m_ij) for a in assoc[:cfg.top_n]])
        net = ego_network(bdtm, focal, cfg.top_n, cfg.depth, cfg.llr_threshold, cfg.fanout)
        write_network(out / f"ego_{name}", net.nodes, net.edges, "degree", "llr", focal=focal)
        click.echo(f"{focal}: {min(len(assoc), cfg.top_n)} associates, {len(net.edges)} edges")


@cli.command()
@click.option("--k", "sim_k", type=int)
@click.option("--n-terms", "sim_n_terms", type=int)
@click.option("--n-docs", "sim_n_docs", type=int)
@click.option("--doc-len", "sim_doc_len", type=int)
@click.option("--alpha", "sim_alpha", type=float)
@click.option("--delta", "sim_delta", type=float)
@click.option("--seed", type=int)
@output_option
@click.pass_context
def simulate(ctx, **flags):
    """Sample a corpus from the LDA generative process."""
    cfg = _resolve(ctx, **flags)
    sim = sample_corpus(cfg.sim_k, cfg.sim_n_terms, cfg.sim_n_docs, cfg.sim_doc_len,
                        cfg.sim_alpha, cfg.sim_delta, cfg.seed)
    out = _outdir(cfg)
    write_dtm(sim.dtm, out / "sim_dtm.csv")
    truth = {
        "k": cfg.sim_k, "seed": cfg.seed,
        "vocabulary": list(sim.dtm.vocab.terms), "doc_ids": list(sim.dtm.rows),
        "beta": sim.true_beta.tolist(), "theta": sim.true_theta.tolist(),
        "assignments": [z.tolist() for z in sim.true_assignments],
    }
    (out / "sim_truth.json").write_text(json.dumps(truth) + "\n", encoding="utf-8")
    click.echo(f"{cfg.sim_n_docs} documents x {cfg.sim_n_terms} terms -> {out}")


# -- entry points -------------------------------------------------------------

def main(argv=None) -> int:
    """Run the CLI and return its exit status instead of exiting."""
    try:
        rv = cli.main(args=argv, prog_name="corpusmix", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except CorpusmixError as exc:
        click.echo(f"error: {exc}", err=True)
        return exc.exit_code
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return rv if isinstance(rv, int) else 0


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
