"""Script filtering, whitespace tokenization and stopword removal.

No stemming or lemmatization happens anywhere: elongated forms such as
"ভালোওওও" carry emphasis and are kept verbatim.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

BANGLA_BLOCK = (0x0980, 0x09FF)


@dataclass(frozen=True)
class PreprocessConfig:
    script_ranges: tuple[tuple[int, int], ...] = (BANGLA_BLOCK,)
    stopwords: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.script_ranges:
            raise ValueError("script_ranges must be non-empty")
        for lo, hi in self.script_ranges:
            if not 0 <= lo <= hi <= 0x10FFFF:
                raise ValueError(f"invalid codepoint interval {lo:#x}-{hi:#x}")
        for word in self.stopwords:
            if not word or any(ch.isspace() for ch in word):
                raise ValueError(f"invalid stopword {word!r}")
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))
        object.__setattr__(self, "script_ranges", tuple((int(lo), int(hi)) for lo, hi in self.script_ranges))

    def in_script(self, ch: str) -> bool:
        cp = ord(ch)
        return any(lo <= cp <= hi for lo, hi in self.script_ranges)

    def to_dict(self) -> dict:
        return {
            "script_ranges": [[lo, hi] for lo, hi in self.script_ranges],
            "stopwords": sorted(self.stopwords),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PreprocessConfig":
        return cls(tuple(tuple(r) for r in data["script_ranges"]), frozenset(data["stopwords"]))


@dataclass(frozen=True)
class TokenSequence:
    tokens: tuple[str, ...]
    origin_id: str = ""

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


def parse_script_range(value: str) -> tuple[int, int]:
    """Parse ``HEXLO-HEXHI`` (e.g. ``0980-09FF``, optional ``U+``/``0x`` prefixes)."""
    parts = value.split("-")
    if len(parts) != 2:
        raise ValueError(f"script range must look like HEXLO-HEXHI, got {value!r}")

    def _hex(s: str) -> int:
        s = s.strip()
        for prefix in ("U+", "u+", "0x", "0X"):
            if s.startswith(prefix):
                s = s[len(prefix):]
        return int(s, 16)

    lo, hi = _hex(parts[0]), _hex(parts[1])
    if lo > hi:
        raise ValueError(f"script range {value!r} has lo > hi")
    return lo, hi


_SPACES = re.compile(r" +")


def filter_script(text: str, config: PreprocessConfig) -> str:
    """Replace every out-of-script character with a space, collapse and trim."""
    kept = "".join(ch if config.in_script(ch) else " " for ch in text)
    return _SPACES.sub(" ", kept).strip(" ")


def tokenize(text: str) -> list[str]:
    return text.split()


def remove_stopwords(tokens, config: PreprocessConfig) -> list[str]:
    stop = config.stopwords
    return [t for t in tokens if t not in stop]


def preprocess_text(text: str, config: PreprocessConfig) -> list[str]:
    return remove_stopwords(tokenize(filter_script(text, config)), config)


def preprocess_document(doc, config: PreprocessConfig) -> TokenSequence:
    return TokenSequence(tuple(preprocess_text(doc.text, config)), doc.id)


def load_stopwords(path) -> frozenset[str]:
    """One token per line; blank lines and ``#`` comments are skipped."""
    try:
        content = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise OSError(f"cannot read stopword file {path}: {exc}") from exc
    words = set()
    for line in content.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)
