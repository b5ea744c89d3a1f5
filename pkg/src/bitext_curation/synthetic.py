"""Seeded synthetic parallel corpora for demos, benchmarks and tests.

Sentences are drawn from small per-language pseudo-lexicons whose words map
to fixed Chinese characters, so the target is predictable from the source.
A share of pairs is corrupted the way mined bitext usually is: swapped
targets, truncation, digit mismatches, empty sides, runaway lengths.
"""

from __future__ import annotations

import random

from .corpus import SOURCE_LANGUAGES, Corpus, SentencePair

DOMAINS = ("news", "gov", "wiki", "travel")
_DOMAIN_WEIGHTS = (0.4, 0.25, 0.2, 0.15)

_SCRIPTS = {
    "fil": "abdegiklmnoprstuwy",
    "id": "abcdegijklmnoprstuy",
    "lo": "".join(chr(c) for c in range(0x0E81, 0x0EAE) if chr(c).isalpha()),
    "my": "".join(chr(c) for c in range(0x1000, 0x1021)),
    "vi": "abcdeghiklmnopqrstuvxyàáâãèéêìíòóôõùúýăđơư",
}
_ZH = "的一是在不了有和人这中大为上个国我以要他时来用们生到作地于出就分对成会可也你年"
_PUNCT_ZH = "，。"


def _lexicon(lang: str, rng: random.Random, size: int = 60) -> list[tuple[str, str]]:
    letters = _SCRIPTS[lang]
    words = set()
    while len(words) < size:
        words.add("".join(rng.choice(letters) for _ in range(rng.randint(2, 5))))
    return [(w, "".join(rng.choice(_ZH) for _ in range(rng.randint(2, 3)))) for w in sorted(words)]


def _sentence(lex, rng: random.Random) -> tuple[str, str]:
    n = rng.randint(4, 14)
    picks = [rng.choice(lex) for _ in range(n)]
    src = " ".join(w for w, _ in picks)
    tgt = "".join(z for _, z in picks)
    if rng.random() < 0.3:
        num = str(rng.randint(1, 2030))
        src += f" {num}"
        tgt += num
    return src + ".", tgt + "。"


def make_pairs(n: int, lang: str, seed: int = 0, noise: float = 0.3, id_prefix: str = "SNT") -> list[SentencePair]:
    rng = random.Random(f"{seed}:{lang}")
    lex = _lexicon(lang, rng)
    clean = [_sentence(lex, rng) for _ in range(n)]
    pairs = []
    for i, (src, tgt) in enumerate(clean):
        if rng.random() < noise:
            kind = rng.choice(("swap", "truncate", "digits", "empty", "long", "punct"))
            if kind == "swap":
                tgt = clean[rng.randrange(n)][1]
            elif kind == "truncate":
                tgt = tgt[: max(1, len(tgt) // 4)]
            elif kind == "digits":
                tgt = tgt + "".join(rng.choice("0123456789") for _ in range(12))
            elif kind == "empty":
                tgt = ""
            elif kind == "long":
                src = " ".join([src] * 8)
            else:
                tgt = tgt + _PUNCT_ZH * 6
        domain = rng.choices(DOMAINS, weights=_DOMAIN_WEIGHTS)[0]
        pairs.append(SentencePair(f"{id_prefix}.{lang}.{i:06d}", lang, src, tgt, domain))
    return pairs


def make_corpus(n: int, lang: str = "lo", seed: int = 0, noise: float = 0.3) -> Corpus:
    return Corpus(tuple(make_pairs(n, lang, seed, noise)), lang)


def make_multilingual(n_per_lang: int, seed: int = 0, noise: float = 0.3) -> list[SentencePair]:
    out: list[SentencePair] = []
    for tag in SOURCE_LANGUAGES:
        out.extend(make_pairs(n_per_lang, tag.value, seed, noise))
    return out
