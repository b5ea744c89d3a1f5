"""Character classes and the CJK-aware tokenizer used by features and metrics."""

from __future__ import annotations

import unicodedata

_CJK_RANGES = (
    (0x2E80, 0x2FDF),  # radicals, Kangxi
    (0x3000, 0x303F),  # CJK symbols and punctuation
    (0x3040, 0x30FF),  # kana
    (0x3100, 0x312F),  # bopomofo
    (0x3190, 0x33FF),  # kanbun .. CJK compatibility
    (0x3400, 0x4DBF),  # extension A
    (0x4E00, 0x9FFF),  # unified ideographs
    (0xF900, 0xFAFF),  # compatibility ideographs
    (0xFE30, 0xFE4F),  # compatibility forms
    (0xFF00, 0xFFEF),  # half/full width forms
    (0x20000, 0x2FA1F),  # extensions B..F, compatibility supplement
    (0x30000, 0x323AF),  # extensions G, H
)

_CJK_PUNCT = (0x3000, 0x303F)


def is_cjk(ch: str) -> bool:
    cp = ord(ch)
    for lo, hi in _CJK_RANGES:
        if lo <= cp <= hi:
            return True
    return False


def is_punct(ch: str) -> bool:
    if ch.isspace():
        return False
    if unicodedata.category(ch).startswith("P"):
        return True
    return _CJK_PUNCT[0] <= ord(ch) <= _CJK_PUNCT[1]


def is_digit(ch: str) -> bool:
    return unicodedata.category(ch) == "Nd"


def tokenize(text: str) -> list[str]:
    """Whitespace split, with every CJK character broken out as its own token.

    >>> tokenize("你好 world")
    ['你', '好', 'world']
    >>> tokenize("2024年")
    ['2024', '年']
    """
    tokens: list[str] = []
    for chunk in text.split():
        run = []
        for ch in chunk:
            if is_cjk(ch):
                if run:
                    tokens.append("".join(run))
                    run = []
                tokens.append(ch)
            else:
                run.append(ch)
        if run:
            tokens.append("".join(run))
    return tokens


def char_tokens(text: str) -> list[str]:
    """Every non-whitespace character as a token."""
    return [ch for ch in text if not ch.isspace()]
