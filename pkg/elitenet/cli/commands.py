import json
import logging
import os
from collections import OrderedDict
from typing import *

import pandas as pd

from elitenet.analysis.confusion import confusion_frame
from elitenet.analysis.robustness import robustness_sweep
from elitenet.analysis.words import load_stopwords, read_texts_csv, word_frequency
from elitenet.cli.domain import RunDirectory
from elitenet.exceptions import ConfigError, DomainError
from elitenet.network.domain import *
from elitenet.network.elite import PRESETS, RECORD_COLUMNS, author_scores, author_tweet_leaderboard, \
    monthly_counts, parse_criterion, qualifying_records, read_records_csv, select_elites
from elitenet.network.graph import read_edge_csv, read_edge_rows, remove_isolates, write_edge_csv
from elitenet.seeding import derive_seed
from elitenet.solver.actor_solver import fit, select_k
from elitenet.solver.domain import FitConfig, PosteriorSummary
from elitenet.viewer.domain import RenderConfig
from elitenet.viewer.graphml import export_graphml
from elitenet.viewer.layout import force_layout
from elitenet.viewer.svg import bar_chart_svg, confusion_svg, latent_map_svg, network_svg

logger = logging.getLogger(__name__)


def open_run(args, inputs: Sequence[str], config: Dict[str, Any] = None) -> RunDirectory:
    run = RunDirectory(args.out, args.command, args.seed, args.force)
    for path in inputs:
        run.add_input(path)
    run.manifest.config = dict(config or {}, threads=args.threads)
    return run


def load_fit_config(path: str = None, k: int = None, d: int = None) -> FitConfig:
    """
    Read a fit configuration, apply command line overrides and validate everything at once.

    :param path: JSON file, defaults only when None
    :param k: overrides model.K
    :param d: overrides model.d
    :return: validated configuration
    """
    doc = {}
    if path is not None:
        with open(path, encoding='utf-8') as f:
            try:
                doc = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError('{}: invalid JSON: {}'.format(path, e)) from e
        if not isinstance(doc, dict):
            raise ConfigError('{}: expected a JSON object'.format(path))
    model = dict(doc.get('model') or {})
    if k is not None:
        model['K'] = k
    if d is not None:
        model['d'] = d
    return FitConfig.model_validate(dict(doc, model=model))


def parse_k_range(text: str) -> List[int]:
    """`a..b` inclusive, or a comma separated list."""
    try:
        if '..' in text:
            lo, hi = text.split('..', 1)
            ks = list(range(int(lo), int(hi) + 1))
        else:
            ks = [int(k) for k in text.split(',')]
    except ValueError as e:
        raise ConfigError('bad K range {!r}'.format(text)) from e
    if not ks or min(ks) < 1:
        raise ConfigError('K range {!r} must be non-empty with K >= 1'.format(text))
    return ks


def criterion_from_args(args) -> EliteCriterion:
    try:
        if args.min_total is not None:
            return CumulativeThreshold(args.min_total)
        if args.min_count is not None:
            return MinCountAtThreshold(args.min_count, args.min_tweet_pop)
        return SingleTweetThreshold(args.min_tweet_pop)
    except DomainError as e:
        raise ConfigError(str(e)) from e


def fit_graph(path: str) -> DirectedGraph:
    build = read_edge_csv(path)
    g, removed = remove_isolates(build.graph)
    logger.info('graph: %d nodes, %d edges, %d isolates removed', g.n, len(g.edges), len(removed))
    return g


def check_k(config: FitConfig, g: DirectedGraph):
    if config.model.K > g.n:
        raise ConfigError('K={} exceeds the {} nodes of the graph'.format(config.model.K, g.n))


def cmd_extract(args) -> int:
    criterion = criterion_from_args(args)
    records = read_records_csv(args.records)
    with open_run(args, [args.records], {'criterion': criterion.to_dict(), 'top': args.top}) as run:
        selection = select_elites(records, criterion)
        if not selection.authors:
            logger.warning('no user satisfies %s', criterion.describe())
        qualifying = qualifying_records(records, selection)

        scores = author_scores(qualifying, selection.authors)
        run.write_frame('elites.csv', pd.DataFrame(
            [(a, n, total) for a, (n, total) in sorted(scores.items())],
            columns=['author', 'n_qualifying_tweets', 'total_popularity']))
        run.write_frame('qualifying.csv', pd.DataFrame([[getattr(r, c) for c in RECORD_COLUMNS] for r in qualifying],
                                                       columns=RECORD_COLUMNS))
        run.write_frame('monthly.csv', pd.DataFrame(list(monthly_counts(qualifying).items()),
                                                    columns=['month', 'count']))
        leaderboard = author_tweet_leaderboard(qualifying, selection.authors, args.top)
        run.write_frame('leaderboard.csv', pd.DataFrame(leaderboard, columns=['author', 'n_tweets']))
        run.write_text('leaderboard.svg', bar_chart_svg(leaderboard, 'Qualifying tweets per elite user'))

        presets = OrderedDict()
        for cid, c in PRESETS.items():
            s = select_elites(records, c)
            presets[cid] = {'description': c.describe(), 'n_users': len(s.authors),
                            'n_qualifying_tweets': len(s.qualifying_tweets)}
        run.write_json('summary.json', {'criterion': criterion.to_dict(), 'description': criterion.describe(),
                                        'n_records': len(records), 'n_users': len(selection.authors),
                                        'n_qualifying_tweets': len(selection.qualifying_tweets),
                                        'presets': presets})
    print('n_users {}'.format(len(selection.authors)))
    print('n_qualifying_tweets {}'.format(len(selection.qualifying_tweets)))
    return 0


def cmd_fit(args) -> int:
    config = load_fit_config(args.config, args.k, args.d)
    g = fit_graph(args.edges)
    check_k(config, g)
    resolved = dict(config.model_dump(), seed=args.seed)
    with open_run(args, [args.edges] + ([args.config] if args.config else []), resolved) as run:
        result = fit(g, config.model, config.mcmc, args.seed, args.threads)
        run.write_json('config.json', resolved)
        write_edge_csv(g, run.file('graph.csv'))
        for k, chain in enumerate(result.chains):
            run.write_text('draws/chain-{}.jsonl'.format(k), ''.join(d.to_json() + '\n' for d in chain.draws))
        run.write_text('summary.json', result.summary.to_json())
        terms = result.bic_terms
        run.write_frame('bic_table.csv', pd.DataFrame([(config.model.K, terms.logit, terms.mixture, terms.effects,
                                                        terms.total)],
                                                      columns=['K', 'logit', 'mixture', 'effects', 'bic']))
    print('n_nodes {} n_edges {} draws {}'.format(g.n, len(g.edges), result.summary.draw_count))
    print('bic {:.3f} (smaller is better)'.format(terms.total))
    return 0


def cmd_select_k(args) -> int:
    ks = parse_k_range(args.k_range)
    config = load_fit_config(args.config)
    g = fit_graph(args.edges)
    if max(ks) > g.n:
        raise ConfigError('K={} exceeds the {} nodes of the graph'.format(max(ks), g.n))
    resolved = dict(config.model_dump(), seed=args.seed, k_range=ks)
    with open_run(args, [args.edges] + ([args.config] if args.config else []), resolved) as run:
        best, table = select_k(g, config.model, ks, config.mcmc, args.seed, args.threads)
        run.write_frame('bic_table.csv', pd.DataFrame(list(table.items()), columns=['K', 'bic']))
        run.write_json('selection.json', {'bic': {str(k): v for k, v in table.items()}, 'recommended_K': best,
                                          'note': 'smaller is better'})
    print('K  BIC (smaller is better)')
    for k, value in table.items():
        print('{:<2} {:.3f}'.format(k, value))
    print('recommended K {}'.format(best))
    return 0


def criterion_id(text: str) -> str:
    return text.replace(':', '-')


def present_highlights(highlights: Sequence[str], g: DirectedGraph, cid: str) -> List[str]:
    """Highlight labels that are nodes of the criterion's graph, the others are reported and skipped."""
    missing = [h for h in highlights if h not in g.nodes]
    if missing:
        logger.warning('criterion %s: highlighted users not in the network: %s', cid, ', '.join(missing))
    return [h for h in highlights if h in g.nodes]


def cmd_robustness(args) -> int:
    items = [s.strip() for s in args.criteria.split(',') if s.strip()]
    if args.baseline not in items:
        items.insert(0, args.baseline)
    criteria = OrderedDict()
    for text in items:
        try:
            criteria[criterion_id(text)] = parse_criterion(text)
        except DomainError as e:
            raise ConfigError(str(e)) from e
    config = load_fit_config(args.config)
    render = RenderConfig.default()
    records = read_records_csv(args.records)
    edges = read_edge_rows(args.edges)
    baseline = criterion_id(args.baseline)
    resolved = dict(config.model_dump(), seed=args.seed, baseline=baseline, highlights=list(args.highlight),
                    criteria={cid: c.to_dict() for cid, c in criteria.items()})
    with open_run(args, [args.records, args.edges] + ([args.config] if args.config else []), resolved) as run:
        reports = robustness_sweep(records, edges, criteria, config.model, config.mcmc, args.seed,
                                   baseline=baseline, threads=args.threads)
        run.write_json('report.json', {'baseline': baseline, 'criteria': [r.to_dict() for r in reports.values()]})
        for cid, report in reports.items():
            run.write_text('summary-{}.json'.format(cid), report.summary.to_json())
            run.write_text('latent-{}.svg'.format(cid),
                           latent_map_svg(report.summary, report.graph,
                                          present_highlights(args.highlight, report.graph, cid), render))
            if report.confusion is None:
                continue
            run.write_frame('confusion-{}.csv'.format(cid), confusion_frame(report.confusion))
            run.write_text('confusion-{}.svg'.format(cid),
                           confusion_svg(report.confusion, '{} vs {}'.format(baseline, cid),
                                         row_name=baseline, column_name=cid))
    for cid, report in reports.items():
        agreement = '{:.3f}'.format(report.confusion.agreement) if report.confusion is not None else '-'
        print('{} n_elites {} n_nodes {} agreement {}'.format(cid, report.n_elites, report.stats.n_nodes, agreement))
    return 0


def cmd_plot(args) -> int:
    summary_path = os.path.join(args.fit, 'summary.json')
    graph_path = os.path.join(args.fit, 'graph.csv')
    render = RenderConfig.read(args.render_config) if args.render_config else RenderConfig.default()
    with open(summary_path, encoding='utf-8') as f:
        summary = PosteriorSummary.from_json(f.read())
    g = read_edge_csv(graph_path).graph
    with open_run(args, [summary_path, graph_path] + ([args.render_config] if args.render_config else []),
                  {'highlights': list(args.highlight), 'render': render.model_dump()}) as run:
        run.write_text('latent_map.svg', latent_map_svg(summary, g, args.highlight, render))
        layout = force_layout(g, derive_seed(args.seed, 'layout'))
        run.write_text('network.svg', network_svg(g, layout, render, summary))
        run.write_text('graph.graphml', export_graphml(g, summary))
    print('layout iterations {} converged {}'.format(layout.iterations_run, layout.converged))
    return 0


def cmd_wordfreq(args) -> int:
    stopwords = load_stopwords(args.stopwords)
    texts = read_texts_csv(args.texts, args.column)
    with open_run(args, [args.texts] + ([args.stopwords] if args.stopwords else []),
                  {'column': args.column, 'top': args.top, 'n_stopwords': len(stopwords)}) as run:
        pairs = word_frequency(texts, stopwords, args.top)
        run.write_frame('wordfreq.csv', pd.DataFrame(pairs, columns=['word', 'count']))
        run.write_text('wordfreq.svg', bar_chart_svg(pairs, 'Top {} content words'.format(args.top)))
    for word, count in pairs:
        print('{} {}'.format(word, count))
    return 0
