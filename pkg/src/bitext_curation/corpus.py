"""Corpus types, ALT-style TSV ingestion and re-alignment by shared sentence id."""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    ConfigError,
    DuplicateId,
    EmptyId,
    InvalidLanguage,
    MalformedLine,
)
from .features import length_ratio

DEFAULT_DOMAIN = "__default__"


class LanguageTag(str, enum.Enum):
    FIL = "fil"
    ID = "id"
    LO = "lo"
    MY = "my"
    VI = "vi"
    ZH = "zh"

    @classmethod
    def parse(cls, code: str | LanguageTag) -> LanguageTag:
        try:
            return cls(code)
        except ValueError:
            raise InvalidLanguage(f"unknown language code {code!r}") from None

    def __str__(self) -> str:
        return self.value


SOURCE_LANGUAGES = tuple(t for t in LanguageTag if t is not LanguageTag.ZH)


@dataclass(frozen=True)
class SentencePair:
    id: str
    source_lang: LanguageTag
    source_text: str
    target_text: str
    domain: str = ""

    def __post_init__(self):
        if not self.id:
            raise EmptyId("sentence id must be non-empty")
        lang = LanguageTag.parse(self.source_lang)
        if lang is LanguageTag.ZH:
            raise InvalidLanguage("zh is the target language and cannot be a source")
        object.__setattr__(self, "source_lang", lang)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "source_lang": self.source_lang.value,
            "source_text": self.source_text,
            "target_text": self.target_text,
            "domain": self.domain,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> SentencePair:
        return cls(
            id=d["id"],
            source_lang=d["source_lang"],
            source_text=d["source_text"],
            target_text=d["target_text"],
            domain=d.get("domain", "") or "",
        )


@dataclass(frozen=True)
class Corpus:
    pairs: tuple[SentencePair, ...]
    source_lang: LanguageTag
    # ids seen on only one side during alignment
    dropped: int = field(default=0, compare=False)

    def __post_init__(self):
        lang = LanguageTag.parse(self.source_lang)
        object.__setattr__(self, "source_lang", lang)
        object.__setattr__(self, "pairs", tuple(self.pairs))
        seen = set()
        for p in self.pairs:
            if p.source_lang is not lang:
                raise InvalidLanguage(
                    f"pair {p.id} has source_lang {p.source_lang}, corpus is {lang}"
                )
            if p.id in seen:
                raise DuplicateId(f"duplicate id {p.id!r} in corpus")
            seen.add(p.id)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def ids(self) -> list[str]:
        return [p.id for p in self.pairs]


@dataclass(frozen=True)
class ValidityConfig:
    min_len_ratio: float = 0.3
    max_chars: int = 4096
    require_nonempty: bool = True

    def __post_init__(self):
        if not 0 < self.min_len_ratio <= 1:
            raise ConfigError("min_len_ratio must lie in (0, 1]")
        if self.max_chars <= 0:
            raise ConfigError("max_chars must be positive")


def _unescape(text: str) -> str:
    return text.replace("\\t", "\t")


def _escape(text: str) -> str:
    return text.replace("\t", "\\t")


def parse_alt_line(line: str, *, nfc: bool = False) -> tuple[str, str]:
    """Split one ``id<TAB>text`` record.

    Literal tabs inside the text must be written as the two characters ``\\t``.
    An empty text is returned as ``""``; the validity filter rejects it later.
    """
    line = line.rstrip("\r\n")
    if "\t" not in line:
        raise MalformedLine(f"no tab separator in line {line[:60]!r}")
    sid, text = line.split("\t", 1)
    if "\t" in text:
        raise MalformedLine(f"unescaped tab inside text of {sid!r}")
    sid = sid.strip()
    if not sid:
        raise EmptyId(f"empty id in line {line[:60]!r}")
    text = _unescape(text.strip())
    if nfc:
        text = unicodedata.normalize("NFC", text)
    return sid, text


def format_alt_line(sid: str, text: str) -> str:
    return f"{sid}\t{_escape(text)}\n"


def read_alt_file(path, *, nfc: bool = False) -> list[tuple[str, str]]:
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        for raw in fh:
            if not raw.strip():
                continue
            records.append(parse_alt_line(raw, nfc=nfc))
    return records


def _index(records: Iterable[tuple[str, str]], side: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for sid, text in records:
        if sid in out:
            raise DuplicateId(f"id {sid!r} appears twice on the {side} side")
        out[sid] = text
    return out


def align_by_id(
    source_records: Sequence[tuple[str, str]],
    zh_records: Sequence[tuple[str, str]],
    lang: LanguageTag | str,
    domains: Mapping[str, str] | None = None,
) -> Corpus:
    """Join source-language and Chinese records that share an id.

    Ids present on one side only are dropped; their number is kept on
    ``Corpus.dropped``. Output is ordered by id.
    """
    lang = LanguageTag.parse(lang)
    if lang is LanguageTag.ZH:
        raise InvalidLanguage("source language cannot be zh")
    src = _index(source_records, "source")
    tgt = _index(zh_records, "zh")
    shared = sorted(src.keys() & tgt.keys())
    dropped = len(src) + len(tgt) - 2 * len(shared)
    domains = domains or {}
    pairs = [
        SentencePair(sid, lang, src[sid], tgt[sid], domains.get(sid, ""))
        for sid in shared
    ]
    return Corpus(tuple(pairs), lang, dropped=dropped)


def drop_reason(pair: SentencePair, cfg: ValidityConfig = ValidityConfig()) -> str | None:
    """Name of the first validity criterion the pair fails, or None if it passes."""
    x, y = pair.source_text, pair.target_text
    if not x or not y:
        if cfg.require_nonempty:
            return "empty_text"
        # length ratio undefined with an empty side
        return None if len(x) <= cfg.max_chars and len(y) <= cfg.max_chars else "too_long"
    if len(x) > cfg.max_chars or len(y) > cfg.max_chars:
        return "too_long"
    if length_ratio(x, y) < cfg.min_len_ratio:
        return "length_ratio"
    return None


def validity_filter(pair: SentencePair, cfg: ValidityConfig = ValidityConfig()) -> bool:
    return drop_reason(pair, cfg) is None
