"""Seeded two-class Bangla-script corpora with disjoint class vocabularies.

Class 0 words are 2-3 letters long and class 1 words 5-7 letters, so the
classes differ in writing style (token length) as well as in vocabulary.
Letters are drawn from the assigned vowels and consonants of the Bangla
block, never repeating a letter back to back (no accidental elongations).
"""

from __future__ import annotations

from .corpus import Corpus, Document
from .rng import Rng

BANGLA_LETTERS = tuple(
    chr(cp)
    for lo, hi in ((0x0985, 0x098C), (0x098F, 0x0990), (0x0993, 0x09A8), (0x09AA, 0x09B0), (0x09B2, 0x09B2), (0x09B6, 0x09B9))
    for cp in range(lo, hi + 1)
)
WORD_LENGTHS = ((2, 3), (5, 7))


def _randint(rng: Rng, lo: int, hi: int) -> int:
    """Uniform integer in ``[lo, hi]``."""
    return lo + int(rng.random(1)[0] * (hi - lo + 1))


def _word(rng: Rng, lo: int, hi: int) -> str:
    letters = []
    for _ in range(_randint(rng, lo, hi)):
        choices = [c for c in BANGLA_LETTERS if not letters or c != letters[-1]]
        letters.append(choices[int(rng.random(1)[0] * len(choices))])
    return "".join(letters)


def class_vocabularies(vocab_size: int = 50, seed: int = 0) -> tuple[list[str], list[str]]:
    rng = Rng(seed)
    seen: set[str] = set()
    vocabs = []
    for lo, hi in WORD_LENGTHS:
        words = []
        while len(words) < vocab_size:
            w = _word(rng, lo, hi)
            if w not in seen:
                seen.add(w)
                words.append(w)
        vocabs.append(sorted(words))
    return vocabs[0], vocabs[1]


def make_corpus(
    n_docs: int = 400,
    vocab_size: int = 50,
    min_tokens: int = 5,
    max_tokens: int = 40,
    seed: int = 0,
    class_names: tuple[str, str] = ("neutral", "political"),
) -> Corpus:
    """Documents alternate class 0, class 1, class 0, ... in corpus order."""
    vocabs = class_vocabularies(vocab_size, seed)
    rng = Rng(seed + 1)
    docs = []
    for k in range(n_docs):
        label = k % 2
        words = vocabs[label]
        n_tokens = _randint(rng, min_tokens, max_tokens)
        picks = rng.random(n_tokens)
        text = " ".join(words[int(u * len(words))] for u in picks)
        docs.append(Document(f"row-{k}", text, label))
    return Corpus(tuple(docs), tuple(class_names), "<synthetic>")
