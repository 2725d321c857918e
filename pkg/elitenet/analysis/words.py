import logging
import re
from collections import Counter
from importlib import resources
from typing import *

import pandas as pd

from elitenet.exceptions import DomainError, ParseError

logger = logging.getLogger(__name__)

URL = re.compile(r'(?:https?://|www\.)\S+')
MENTION = re.compile(r'@\w+')
TOKEN = re.compile(r'[^\W_]+')
MIN_TOKEN_LENGTH = 2


def load_stopwords(path=None) -> Set[str]:
    """
    Read a stopword list, one word per line, '#' starts a comment.

    :param path: file path, defaults to the shipped German list
    :return: lower-cased stopwords
    """
    if path is None:
        text = resources.files('elitenet.analysis').joinpath('data/stopwords_de.txt').read_text(encoding='utf-8')
    else:
        with open(path, encoding='utf-8') as f:
            text = f.read()
    words = set()
    for line in text.splitlines():
        word = line.split('#', 1)[0].strip().lower()
        if word:
            words.add(word)
    return words


def tokenize(text: str) -> List[str]:
    text = URL.sub(' ', text.lower())
    text = MENTION.sub(' ', text).replace('#', ' ')
    return [t for t in TOKEN.findall(text) if len(t) >= MIN_TOKEN_LENGTH and not t.isdigit()]


def word_frequency(texts: Iterable[str], stopwords: Set[str], top_n: int) -> List[Tuple[str, int]]:
    """
    Most frequent content words.

    :param texts: tweet texts
    :param stopwords: lower-cased words to ignore
    :param top_n: number of words returned
    :return: (word, count) by decreasing count, ties in alphabetical order
    """
    if top_n < 1:
        raise DomainError('top_n must be at least 1, got {}'.format(top_n))
    counts = Counter()
    for text in texts:
        counts.update(t for t in tokenize(text) if t not in stopwords)
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))[:top_n]


def read_texts_csv(path, column: str = 'text') -> List[str]:
    frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    if column not in frame.columns:
        raise ParseError('missing column {!r}'.format(column), row=0)
    return frame[column].tolist()
