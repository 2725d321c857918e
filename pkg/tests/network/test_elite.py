import io
import unittest

from elitenet.exceptions import DomainError, ParseError
from elitenet.network.domain import *
from elitenet.network.elite import *
from tests.utils import fixture, record, requires_fixture


class TestPopularity(unittest.TestCase):

    def test_score(self):
        self.assertEqual(1276, popularity_score(record(1, 'AnikaBlub', likes=1162, replies=61, retweets=53)))
        self.assertEqual(3, popularity_score(record(2, 'goetageblatt', likes=0, replies=2, retweets=1)))
        self.assertEqual(0, popularity_score(record(3, 'x')))

    def test_negative_count_rejected(self):
        with self.assertRaises(DomainError):
            record(1, 'a', likes=-1)


class TestSelectElites(unittest.TestCase):

    def setUp(self):
        self.records = [
            record(1, 'alice', likes=1500),
            record(2, 'alice', likes=600),
            record(3, 'bob', likes=2000),
            record(4, 'bob', likes=10),
            record(5, 'carol', likes=2500),
            record(6, 'carol', likes=3000),
        ]

    def test_single_threshold_inclusive(self):
        authors, tweets = select_elites(self.records, SingleTweetThreshold(2000))
        self.assertEqual({'bob', 'carol'}, authors)
        self.assertEqual(['3', '5', '6'], sorted(tweets))

    def test_cumulative_includes_all_tweets(self):
        authors, tweets = select_elites(self.records, CumulativeThreshold(2000))
        self.assertIn('alice', authors)
        self.assertIn('1', tweets)
        self.assertIn('2', tweets)

    def test_cumulative_versus_single(self):
        records = [record(1, 'a', likes=1500), record(2, 'a', likes=600)]
        self.assertEqual({'a'}, select_elites(records, CumulativeThreshold(2000)).authors)
        self.assertEqual(set(), select_elites(records, SingleTweetThreshold(2000)).authors)

    def test_min_count(self):
        authors, tweets = select_elites(self.records, MinCountAtThreshold(2, 2000))
        self.assertEqual({'carol'}, authors)
        self.assertEqual(['5', '6'], sorted(tweets))

    def test_duplicate_tweet_ids_counted_once(self):
        records = [record(1, 'a', likes=2000), record(1, 'a', likes=2000)]
        authors, tweets = select_elites(records, MinCountAtThreshold(2, 2000))
        self.assertEqual(set(), authors)

    def test_nothing_qualifies(self):
        authors, tweets = select_elites(self.records, SingleTweetThreshold(10 ** 6))
        self.assertEqual(set(), authors)
        self.assertEqual([], tweets)

    def test_empty_records(self):
        with self.assertRaises(DomainError):
            select_elites([], SingleTweetThreshold(1))

    def test_invalid_criteria(self):
        self.assertRaises(DomainError, SingleTweetThreshold, 0)
        self.assertRaises(DomainError, MinCountAtThreshold, 0, 10)
        self.assertRaises(DomainError, CumulativeThreshold, -5)

    @requires_fixture('records.csv')
    def test_published_counts(self):
        records = read_records_csv(fixture('records.csv'))
        authors, tweets = select_elites(records, PRESETS['main'])
        self.assertEqual(372, len(authors))
        self.assertEqual(1024, len(tweets))

        expected = {'a': 137, 'b': 730, 'c': 99, 'd': 516}
        for cid, n in expected.items():
            self.assertEqual(n, len(select_elites(records, PRESETS[cid]).authors), 'criterion {}'.format(cid))

        qualifying = qualifying_records(records, select_elites(records, PRESETS['main']))
        months = monthly_counts(qualifying)
        self.assertEqual(53, min(months.values()))
        self.assertEqual(156, max(months.values()))
        self.assertEqual('DrPuerner', author_tweet_leaderboard(qualifying, authors, 1)[0][0])


class TestMonthlyCounts(unittest.TestCase):

    def test_single_tweet(self):
        self.assertEqual({'2021-03': 1}, dict(monthly_counts([record(1, 'a')])))

    def test_one_per_month(self):
        tweets = [record(m, 'a', created_at='2021-{:02d}-15T10:00:00Z'.format(m)) for m in range(12, 0, -1)]
        counts = monthly_counts(tweets)
        self.assertEqual(['2021-{:02d}'.format(m) for m in range(1, 13)], list(counts))
        self.assertTrue(all(c == 1 for c in counts.values()))

    def test_converted_to_utc(self):
        counts = monthly_counts([record(1, 'a', created_at='2021-04-01T00:30:00+02:00')])
        self.assertEqual({'2021-03': 1}, dict(counts))

    def test_bad_timestamp(self):
        with self.assertRaises(ParseError) as ctx:
            monthly_counts([record('t9', 'a', created_at='not a date')])
        self.assertEqual('t9', ctx.exception.record_id)


class TestLeaderboard(unittest.TestCase):

    def test_single_author(self):
        records = [record(1, 'a'), record(2, 'a')]
        self.assertEqual([('a', 2)], author_tweet_leaderboard(records, {'a'}, 5))

    def test_ties_by_label(self):
        records = [record(1, 'zed'), record(2, 'amy'), record(3, 'bob'), record(4, 'bob')]
        self.assertEqual([('bob', 2), ('amy', 1), ('zed', 1)],
                         author_tweet_leaderboard(records, {'zed', 'amy', 'bob'}, 3))

    def test_non_elite_ignored(self):
        records = [record(1, 'a'), record(2, 'b'), record(3, 'b')]
        self.assertEqual([('a', 1)], author_tweet_leaderboard(records, {'a'}, 3))

    def test_top_n_positive(self):
        with self.assertRaises(DomainError):
            author_tweet_leaderboard([], set(), 0)


class TestParsing(unittest.TestCase):

    def test_parse_criterion(self):
        self.assertEqual(SingleTweetThreshold(4000), parse_criterion('a'))
        self.assertEqual(SingleTweetThreshold(300), parse_criterion('single:300'))
        self.assertEqual(MinCountAtThreshold(3, 100), parse_criterion('count:3:100'))
        self.assertEqual(CumulativeThreshold(700), parse_criterion('total:700'))
        self.assertRaises(DomainError, parse_criterion, 'nope')
        self.assertRaises(DomainError, parse_criterion, 'single:x')

    def test_read_records(self):
        text = 'tweet_id,author,likes,replies,retweets,language,created_at\n' \
               '1,alice,10,2,3,de,2021-01-01T00:00:00Z\n' \
               '2,bob,0,0,0,de,2021-02-01T00:00:00Z\n'
        records = read_records_csv(io.StringIO(text))
        self.assertEqual(2, len(records))
        self.assertEqual(15, popularity_score(records[0]))
        self.assertEqual('bob', records[1].author)

    def test_read_records_negative_count(self):
        text = 'tweet_id,author,likes,replies,retweets,language,created_at\n' \
               '1,alice,10,2,3,de,2021-01-01\n' \
               '2,bob,-4,0,0,de,2021-02-01\n'
        with self.assertRaises(ParseError) as ctx:
            read_records_csv(io.StringIO(text))
        self.assertEqual(2, ctx.exception.row)
        self.assertEqual('2', ctx.exception.record_id)

    def test_read_records_non_ascii_digit(self):
        text = 'tweet_id,author,likes,replies,retweets,language,created_at\n' \
               '1,alice,10,²,3,de,2021-01-01\n'
        with self.assertRaises(ParseError) as ctx:
            read_records_csv(io.StringIO(text))
        self.assertEqual(1, ctx.exception.row)

    def test_read_records_missing_column(self):
        with self.assertRaises(ParseError):
            read_records_csv(io.StringIO('tweet_id,author\n1,a\n'))
