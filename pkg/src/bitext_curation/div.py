"""Exact-size, domain-proportional train/dev/test splitting.

Each split first takes ``floor(N_T * p_k)`` items from every domain ``k``
(``p_k`` being the domain's share of the whole corpus), then tops up the
rounding deficit one item per domain in largest-remainder order. Remainders
are measured against the cumulative target over all splits processed so far,
so a domain that received an extra item in ``train`` is charged for it when
``dev`` and ``test`` are filled. For the first split this is exactly the
ordinary per-split fractional remainder.

Within a domain, items are drawn in the order of a keyed BLAKE2b hash of their
id, which makes the split a pure function of (corpus, sizes, seed) on every
platform.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

from .corpus import DEFAULT_DOMAIN, Corpus, SentencePair
from .errors import EmptyCorpus, InfeasibleSpec

SPLIT_NAMES = ("train", "dev", "test")


@dataclass(frozen=True)
class SplitSpec:
    n_train: int
    n_dev: int
    n_test: int
    seed: int = 0

    def __post_init__(self):
        if min(self.sizes) < 0:
            raise InfeasibleSpec("split sizes must be non-negative")

    @property
    def sizes(self) -> tuple[int, int, int]:
        return (self.n_train, self.n_dev, self.n_test)

    @property
    def total(self) -> int:
        return sum(self.sizes)


@dataclass(frozen=True)
class DomainGroups:
    groups: dict[str, list[SentencePair]]
    proportions: dict[str, float]

    @property
    def counts(self) -> dict[str, int]:
        return {k: len(v) for k, v in self.groups.items()}


@dataclass
class SplitResult:
    train: list[SentencePair]
    dev: list[SentencePair]
    test: list[SentencePair]
    # split -> domain -> {"allocated", "sampled", "compensated"}
    quota_report: dict[str, dict[str, dict[str, int]]] = field(default_factory=dict)

    def __getitem__(self, name: str) -> list[SentencePair]:
        return {"train": self.train, "dev": self.dev, "test": self.test}[name]


def group_by_domain(corpus: Corpus) -> DomainGroups:
    if len(corpus) == 0:
        raise EmptyCorpus("cannot group an empty corpus")
    groups: dict[str, list[SentencePair]] = {}
    for p in corpus:
        groups.setdefault(p.domain or DEFAULT_DOMAIN, []).append(p)
    groups = dict(sorted(groups.items()))
    n = len(corpus)
    return DomainGroups(groups, {k: len(v) / n for k, v in groups.items()})


def allocate_quotas(n_target: int, proportions: Mapping[str, float]) -> dict[str, int]:
    """floor(n_target * p_k) per domain."""
    if n_target < 0:
        raise ValueError("target size must be non-negative")
    # the epsilon absorbs products like 10 * 0.6 landing at 5.999...
    return {k: int(n_target * p + 1e-9) for k, p in proportions.items()}


def _seed_key(seed: int) -> bytes:
    return (seed % (1 << 64)).to_bytes(8, "little")


def shuffle_key(seed: int, sid: str) -> bytes:
    return hashlib.blake2b(sid.encode("utf-8"), digest_size=16, key=_seed_key(seed)).digest()


def _draw_order(items: list[SentencePair], seed: int) -> deque:
    base = hashlib.blake2b(digest_size=16, key=_seed_key(seed))

    def key(p: SentencePair):
        h = base.copy()
        h.update(p.id.encode("utf-8"))
        return (h.digest(), p.id)

    return deque(sorted(items, key=key))


def split(corpus: Corpus, spec: SplitSpec) -> SplitResult:
    n = len(corpus)
    if spec.total > n:
        raise InfeasibleSpec(f"requested {spec.total} items from a corpus of {n}")
    groups = group_by_domain(corpus)
    counts = groups.counts
    pools = {k: _draw_order(v, spec.seed) for k, v in groups.groups.items()}
    taken = dict.fromkeys(counts, 0)

    out: dict[str, list[SentencePair]] = {}
    report: dict[str, dict[str, dict[str, int]]] = {}
    cum_target = 0
    for name, n_t in zip(SPLIT_NAMES, spec.sizes):
        cum_target += n_t
        chosen: list[SentencePair] = []
        rows: dict[str, dict[str, int]] = {}
        for k, c in counts.items():
            # integer floor of n_t * c / n avoids float rounding entirely
            q = n_t * c // n
            got = min(q, len(pools[k]))
            chosen.extend(pools[k].popleft() for _ in range(got))
            taken[k] += got
            rows[k] = {"allocated": q, "sampled": got, "compensated": 0}

        deficit = n_t - len(chosen)
        if deficit > 0:
            # remainder of the cumulative target, in units of 1/n
            order = sorted(counts, key=lambda k: (-(cum_target * counts[k] - n * taken[k]), k))
            while deficit > 0 and any(pools[k] for k in order):
                for k in order:
                    if deficit == 0:
                        break
                    if pools[k]:
                        chosen.append(pools[k].popleft())
                        taken[k] += 1
                        rows[k]["compensated"] += 1
                        deficit -= 1
        elif deficit < 0:
            chosen = chosen[:n_t]

        if len(chosen) != n_t:
            raise InfeasibleSpec(f"could not fill {name}: {len(chosen)} of {n_t}")
        out[name] = chosen
        report[name] = rows
    return SplitResult(out["train"], out["dev"], out["test"], report)
