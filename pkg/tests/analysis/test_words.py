import io
import os
import tempfile
import unittest

from elitenet.analysis.words import *
from elitenet.exceptions import DomainError
from tests.utils import fixture, requires_fixture


class TestTokenize(unittest.TestCase):

    def test_strips_urls_mentions_and_hash_signs(self):
        text = '@RKI_de meldet #Corona Zahlen https://t.co/abc123 www.rki.de/x'
        self.assertEqual(['meldet', 'corona', 'zahlen'], tokenize(text))

    def test_keeps_umlauts_and_digits(self):
        self.assertEqual(['größte', 'impfstoff', 'covid19'], tokenize('Größte Impfstoff-#COVID19 2021 a'))


class TestWordFrequency(unittest.TestCase):

    def test_case_folding(self):
        self.assertEqual([('impfung', 3)], word_frequency(['Impfung impfung IMPFUNG'], set(), 5))

    def test_empty(self):
        self.assertEqual([], word_frequency([], set(), 15))

    def test_ranking_and_stopwords(self):
        texts = ['die Maske und die Impfung', 'Impfung und Test', 'Test Maske']
        res = word_frequency(texts, {'die', 'und'}, 10)
        self.assertEqual([('impfung', 2), ('maske', 2), ('test', 2)], res)

    def test_counts_sum_to_retained_tokens(self):
        texts = ['eins zwei drei zwei', 'drei drei vier']
        res = word_frequency(texts, set(), 100)
        self.assertEqual(7, sum(c for _, c in res))

    def test_top_n(self):
        self.assertEqual(1, len(word_frequency(['aa bb cc'], set(), 1)))
        with self.assertRaises(DomainError):
            word_frequency(['x'], set(), 0)


class TestStopwords(unittest.TestCase):

    def test_shipped_list(self):
        words = load_stopwords()
        self.assertIn('und', words)
        self.assertIn('nicht', words)
        self.assertNotIn('mehr', words)

    def test_custom_list(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'stop.txt')
            with open(path, 'w', encoding='utf-8') as f:
                f.write('# comment\nFoo\n\nbar  # trailing\n')
            self.assertEqual({'foo', 'bar'}, load_stopwords(path))

    def test_read_texts(self):
        texts = read_texts_csv(io.StringIO('id,text\n1,hallo welt\n2,\n'))
        self.assertEqual(['hallo welt', ''], texts)

    @requires_fixture('texts.csv')
    def test_published_top_words(self):
        res = word_frequency(read_texts_csv(fixture('texts.csv')), load_stopwords(), 15)
        self.assertEqual(['covid19', 'coronavirus', 'corona', 'mehr', 'impfung'], [w for w, _ in res[:5]])
