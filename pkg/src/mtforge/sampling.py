"""Temperature-based language balancing and three-pool batch scheduling.

Languages are sampled with probability proportional to ``D_l^(1/T)`` where
``D_l`` is the language's sentence count; raising the temperature flattens
the distribution toward uniform, lifting low-resource languages. Batches mix
the bitext, back-translation, and dual-pseudo pools according to normalized
mixture weights.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping

from .corpus import (
    CorpusManifest,
    Direction,
    LanguageStats,
    OriginPool,
    SentencePair,
    iter_all_pairs,
)
from .errors import EmptyPoolError


@dataclass(frozen=True)
class SamplingDistribution:
    """Temperature-rescaled language probabilities."""

    temperature: float
    q: Mapping[str, float]

    def __post_init__(self):
        langs = sorted(self.q)
        object.__setattr__(self, "_langs", langs)
        object.__setattr__(self, "_weights", [self.q[l] for l in langs])

    def sample(self, rng: random.Random) -> str:
        return rng.choices(self._langs, weights=self._weights)[0]


@dataclass(frozen=True)
class MixtureWeights:
    """Pool weights (bitext, back-translation, dual-pseudo).

    Weights must be non-negative with a positive sum and are normalized to
    sum to one, so decimal shorthands like (0.33, 0.33, 0.33) mean exact
    thirds.
    """

    bitext: float
    back_translation: float
    dual_pseudo: float

    def __post_init__(self):
        vals = (self.bitext, self.back_translation, self.dual_pseudo)
        if any(v < 0 for v in vals):
            raise ValueError("mixture weights must be non-negative")
        total = sum(vals)
        if total <= 0:
            raise ValueError("mixture weights must not all be zero")
        if abs(total - 1.0) > 1e-9:
            object.__setattr__(self, "bitext", self.bitext / total)
            object.__setattr__(self, "back_translation", self.back_translation / total)
            object.__setattr__(self, "dual_pseudo", self.dual_pseudo / total)

    def for_pool(self, pool: OriginPool) -> float:
        return {
            OriginPool.BITEXT: self.bitext,
            OriginPool.BACK_TRANSLATION: self.back_translation,
            OriginPool.DUAL_PSEUDO: self.dual_pseudo,
        }[pool]

    @classmethod
    def parse(cls, text: str) -> "MixtureWeights":
        """Parse ``0.6,0.2,0.2`` notation (bitext, BT, dual-pseudo order)."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected three comma-separated weights, got {text!r}")
        return cls(*(float(p) for p in parts))


@dataclass
class Batch:
    pairs: list[SentencePair]
    composition: dict[tuple[str, OriginPool], int] = field(default_factory=dict)


def language_distribution(stats: LanguageStats, temperature: float) -> SamplingDistribution:
    """Rescale language frequencies p_l = D_l / sum_i D_i by ``1/temperature``:
    q_l is p_l^(1/T) renormalized. Going through p_l keeps the result exactly
    invariant under a common scaling of all counts. Languages with zero count
    get zero probability (they are dropped).
    """
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    positive = {l: c for l, c in stats.per_language.items() if c > 0}
    if not positive:
        raise ValueError("no language has a positive sentence count")
    total = sum(positive.values())
    exponent = 1.0 / temperature
    scaled = {l: (c / total) ** exponent for l, c in sorted(positive.items())}
    z = sum(scaled.values())
    return SamplingDistribution(temperature, {l: w / z for l, w in scaled.items()})


class BatchScheduler:
    """Seeded infinite sampler over a three-pool corpus.

    Each draw picks (1) a pool from the mixture weights, (2) a direction
    within the pool with probability proportional to q_src * q_tgt
    (renormalized over the directions present in that pool), and (3) a pair
    uniformly from that direction. Sampling is with replacement; the whole
    stream is reproducible from the seed.

    Pairs are materialized in memory at construction, which is fine at the
    corpus sizes this scheduler is meant for (development and simulation).
    """

    def __init__(
        self,
        manifest: CorpusManifest,
        stats: LanguageStats,
        distribution: SamplingDistribution,
        weights: MixtureWeights,
        batch_size: int,
        seed: int,
    ):
        if batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        self.batch_size = batch_size
        self.weights = weights
        self._rng = random.Random(seed)

        pools: dict[OriginPool, dict[Direction, list[SentencePair]]] = {}
        for pair in iter_all_pairs(manifest):
            pools.setdefault(pair.origin, {}).setdefault(pair.direction, []).append(pair)

        self._pools = []   # (pool, directions, direction weights, pairs per direction)
        pool_weights = []
        for pool in OriginPool:
            lam = weights.for_pool(pool)
            if lam <= 0:
                continue
            by_dir = {d: ps for d, ps in pools.get(pool, {}).items() if ps}
            if not by_dir:
                raise EmptyPoolError(
                    f"pool {pool.value} has weight {lam:g} but no pairs in the manifest")
            directions = sorted(by_dir)
            dir_weights = [
                distribution.q.get(d.src, 0.0) * distribution.q.get(d.tgt, 0.0)
                for d in directions
            ]
            if sum(dir_weights) <= 0:
                raise EmptyPoolError(
                    f"pool {pool.value}: no direction has positive sampling weight")
            self._pools.append((pool, directions, dir_weights, by_dir))
            pool_weights.append(lam)
        self._pool_weights = pool_weights

    def draw(self) -> SentencePair:
        pool, directions, dir_weights, by_dir = self._rng.choices(
            self._pools, weights=self._pool_weights)[0]
        direction = self._rng.choices(directions, weights=dir_weights)[0]
        pairs = by_dir[direction]
        return pairs[self._rng.randrange(len(pairs))]

    def next_batch(self) -> Batch:
        pairs = [self.draw() for _ in range(self.batch_size)]
        composition: dict[tuple[str, OriginPool], int] = {}
        for pair in pairs:
            for lang in (pair.direction.src, pair.direction.tgt):
                key = (lang, pair.origin)
                composition[key] = composition.get(key, 0) + 1
        return Batch(pairs, composition)


def make_scheduler(
    manifest: CorpusManifest,
    stats: LanguageStats,
    distribution: SamplingDistribution,
    weights: MixtureWeights,
    batch_size: int,
    seed: int,
) -> BatchScheduler:
    return BatchScheduler(manifest, stats, distribution, weights, batch_size, seed)
