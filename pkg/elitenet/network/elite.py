import logging
from collections import Counter, OrderedDict, defaultdict
from typing import *

import pandas as pd

from elitenet.exceptions import DomainError, ParseError
from elitenet.network.domain import *

logger = logging.getLogger(__name__)

RECORD_COLUMNS = ['tweet_id', 'author', 'likes', 'replies', 'retweets', 'language', 'created_at']

PRESETS = OrderedDict([
    ('main', SingleTweetThreshold(2000)),
    ('a', SingleTweetThreshold(4000)),
    ('b', SingleTweetThreshold(1000)),
    ('c', MinCountAtThreshold(2, 2000)),
    ('d', CumulativeThreshold(5000)),
])


def popularity_score(t: TweetRecord) -> int:
    return t.likes + t.replies + t.retweets


def unique_records(records: Iterable[TweetRecord]) -> List[TweetRecord]:
    """
    Drop repeated tweet ids, first occurrence wins.

    :param records: tweet records
    :return: records with unique tweet_id, original order kept
    """
    records = list(records)
    seen = set()
    unique = []
    for r in records:
        if r.tweet_id not in seen:
            seen.add(r.tweet_id)
            unique.append(r)
    if len(unique) < len(records):
        logger.debug('dropped %d duplicate tweet ids', len(records) - len(unique))
    return unique


def select_elites(records: List[TweetRecord], c: EliteCriterion) -> EliteSelection:
    """
    Apply an elite criterion.

    :param records: tweet records of one language
    :param c: inclusion rule
    :return: elite authors and the tweets that made them elite (all their tweets for the cumulative rule)
    """
    if not records:
        raise DomainError('no tweet records to select elites from')

    by_author = defaultdict(list)
    for r in unique_records(records):
        by_author[r.author].append(r)

    authors = set()
    qualifying = []
    for author, tweets in by_author.items():
        if isinstance(c, CumulativeThreshold):
            if sum(popularity_score(t) for t in tweets) >= c.total:
                authors.add(author)
                qualifying += [t.tweet_id for t in tweets]
            continue

        popular = [t.tweet_id for t in tweets if popularity_score(t) >= c.threshold]
        needed = c.count if isinstance(c, MinCountAtThreshold) else 1
        if len(popular) >= needed:
            authors.add(author)
            qualifying += popular

    return EliteSelection(authors=authors, qualifying_tweets=qualifying)


def qualifying_records(records: List[TweetRecord], selection: EliteSelection) -> List[TweetRecord]:
    ids = set(selection.qualifying_tweets)
    return [r for r in unique_records(records) if r.tweet_id in ids]


def monthly_counts(tweets: Iterable[TweetRecord]) -> Dict[str, int]:
    """
    Count tweets per calendar month (UTC) of their creation time.

    :param tweets: qualifying tweets
    :return: ordered mapping 'YYYY-MM' -> count
    """
    counts = Counter()
    for t in tweets:
        try:
            stamp = pd.Timestamp(t.created_at)
        except (ValueError, TypeError) as e:
            raise ParseError('unparseable timestamp {!r}'.format(t.created_at), record_id=t.tweet_id) from e
        if pd.isna(stamp):
            raise ParseError('missing timestamp', record_id=t.tweet_id)
        if stamp.tzinfo is not None:
            stamp = stamp.tz_convert('UTC')
        counts['{:04d}-{:02d}'.format(stamp.year, stamp.month)] += 1
    return OrderedDict(sorted(counts.items()))


def author_tweet_leaderboard(records: Iterable[TweetRecord], elites: Set[str], top_n: int) -> List[Tuple[str, int]]:
    """
    Rank elite authors by number of tweets.

    :param records: qualifying tweets
    :param elites: elite author set
    :param top_n: number of authors to keep
    :return: (author, count) descending by count, ties broken by label
    """
    if top_n < 1:
        raise DomainError('top_n must be at least 1')
    counts = Counter(r.author for r in unique_records(records) if r.author in elites)
    return sorted(counts.items(), key=lambda x: (-x[1], x[0]))[:top_n]


def author_scores(records: Iterable[TweetRecord], authors: Set[str]) -> Dict[str, Tuple[int, int]]:
    """Per-author (number of tweets, summed popularity)."""
    res = {a: (0, 0) for a in authors}
    for r in records:
        if r.author in res:
            n, total = res[r.author]
            res[r.author] = (n + 1, total + popularity_score(r))
    return res


def parse_criterion(text: str) -> EliteCriterion:
    """
    Parse a preset name or one of `single:T`, `count:k:T`, `total:C`.

    :param text: criterion string
    :return: criterion
    """
    if text in PRESETS:
        return PRESETS[text]
    parts = text.split(':')
    try:
        if parts[0] == 'single' and len(parts) == 2:
            return SingleTweetThreshold(int(parts[1]))
        if parts[0] == 'count' and len(parts) == 3:
            return MinCountAtThreshold(int(parts[1]), int(parts[2]))
        if parts[0] == 'total' and len(parts) == 2:
            return CumulativeThreshold(int(parts[1]))
    except ValueError as e:
        raise DomainError('bad criterion {!r}: {}'.format(text, e)) from e
    raise DomainError('unknown criterion {!r}'.format(text))


def read_records_csv(path) -> List[TweetRecord]:
    """
    Read engagement records.

    :param path: CSV with header tweet_id,author,likes,replies,retweets,language,created_at
    :return: records in file order
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding='utf-8')
    except pd.errors.ParserError as e:
        raise ParseError(str(e)) from e
    missing = [c for c in RECORD_COLUMNS if c not in frame.columns]
    if missing:
        raise ParseError('missing column(s) {}'.format(', '.join(missing)), row=0)

    records = []
    for number, row in enumerate(frame[RECORD_COLUMNS].itertuples(index=False), start=1):
        if not row.tweet_id or not row.author:
            raise ParseError('empty tweet_id or author', row=number)
        counts = []
        for name in ('likes', 'replies', 'retweets'):
            value = getattr(row, name)
            if not (value.isascii() and value.isdigit()):
                raise ParseError('{} must be a non-negative integer, got {!r}'.format(name, value),
                                 row=number, record_id=row.tweet_id)
            counts.append(int(value))
        records.append(TweetRecord(tweet_id=row.tweet_id, author=row.author,
                                   likes=counts[0], replies=counts[1], retweets=counts[2],
                                   language=row.language, created_at=row.created_at))
    return records
