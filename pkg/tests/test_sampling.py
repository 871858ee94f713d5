import math
import random

import pytest

from mtforge.corpus import Direction, LanguageStats, OriginPool
from mtforge.errors import EmptyPoolError
from mtforge.sampling import (
    BatchScheduler,
    MixtureWeights,
    language_distribution,
    make_scheduler,
)


def stats_for(counts):
    return LanguageStats(per_language=dict(counts))


class TestLanguageDistribution:
    def test_symmetric_counts(self):
        for t in (0.5, 1.0, 5.0, 100.0):
            dist = language_distribution(stats_for({"aa": 50, "bb": 50}), t)
            assert dist.q["aa"] == pytest.approx(0.5, abs=1e-12)
            assert dist.q["bb"] == pytest.approx(0.5, abs=1e-12)

    def test_fifth_root_case(self):
        # 32^(1/5) = 2, so the rescaled weights are exactly 2 : 1
        dist = language_distribution(stats_for({"aa": 32, "bb": 1}), 5.0)
        assert dist.q["aa"] == pytest.approx(2 / 3, abs=1e-12)
        assert dist.q["bb"] == pytest.approx(1 / 3, abs=1e-12)

    def test_temperature_one_is_proportional(self):
        dist = language_distribution(stats_for({"aa": 32, "bb": 1}), 1.0)
        assert dist.q["aa"] == pytest.approx(32 / 33, abs=1e-12)
        assert dist.q["bb"] == pytest.approx(1 / 33, abs=1e-12)

    def test_zero_count_language_dropped(self):
        dist = language_distribution(stats_for({"aa": 10, "bb": 0}), 5.0)
        assert "bb" not in dist.q
        assert dist.q["aa"] == pytest.approx(1.0)

    def test_empty_stats(self):
        with pytest.raises(ValueError):
            language_distribution(stats_for({}), 5.0)
        with pytest.raises(ValueError):
            language_distribution(stats_for({"aa": 0}), 5.0)

    def test_non_positive_temperature(self):
        for t in (0.0, -1.0):
            with pytest.raises(ValueError):
                language_distribution(stats_for({"aa": 1}), t)

    def test_sums_to_one(self):
        rng = random.Random(3)
        for _ in range(100):
            counts = {f"l{chr(97 + i)}": rng.randint(1, 10**6) for i in range(6)}
            dist = language_distribution(stats_for(counts), rng.uniform(0.2, 50))
            assert math.isclose(sum(dist.q.values()), 1.0, abs_tol=1e-9)

    def test_temperature_flattens_monotonically(self):
        """With D_a > D_b the ratio q_a/q_b falls toward 1 as T grows."""
        counts = stats_for({"aa": 1000, "bb": 3})
        ratios = []
        for t in (1.0, 5.0, 100.0):
            dist = language_distribution(counts, t)
            ratios.append(dist.q["aa"] / dist.q["bb"])
        assert ratios[0] > ratios[1] > ratios[2] > 1.0
        assert ratios[2] == pytest.approx(1.0, abs=0.1)

    def test_scale_invariance(self):
        base = language_distribution(stats_for({"aa": 4, "bb": 9, "cc": 25}), 5.0)
        scaled = language_distribution(
            stats_for({"aa": 4000, "bb": 9000, "cc": 25000}), 5.0)
        assert base.q == scaled.q

    def test_sample_reproducible(self):
        dist = language_distribution(stats_for({"aa": 32, "bb": 1}), 5.0)
        draws1 = [dist.sample(random.Random(42)) for _ in range(1)]
        draws2 = [dist.sample(random.Random(42)) for _ in range(1)]
        assert draws1 == draws2


class TestMixtureWeights:
    def test_normalizes_decimal_shorthand(self):
        w = MixtureWeights(0.33, 0.33, 0.33)
        assert w.bitext == pytest.approx(1 / 3, abs=1e-12)
        assert math.isclose(w.bitext + w.back_translation + w.dual_pseudo, 1.0,
                            abs_tol=1e-9)

    def test_parse(self):
        w = MixtureWeights.parse("0.6,0.2,0.2")
        assert w.for_pool(OriginPool.BITEXT) == pytest.approx(0.6, abs=1e-9)
        assert w.for_pool(OriginPool.DUAL_PSEUDO) == pytest.approx(0.2, abs=1e-9)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            MixtureWeights(-0.1, 0.6, 0.5)

    def test_all_zero_rejected(self):
        with pytest.raises(ValueError):
            MixtureWeights(0, 0, 0)

    def test_parse_wrong_arity(self):
        with pytest.raises(ValueError):
            MixtureWeights.parse("0.5,0.5")


def three_pool_corpus(make_corpus, n=20):
    rows = lambda k: [(f"s{i}", f"t{i}") for i in range(k)]
    return make_corpus([
        ("bx1.tsv", "hr-en", "bitext", rows(n)),
        ("bx2.tsv", "en-hu", "bitext", rows(n)),
        ("bt1.tsv", "hu-en", "bt", rows(n)),
        ("dp1.tsv", "hr-hu", "dual_pseudo", rows(n)),
    ])


def scheduler_for(manifest, weights, batch_size=8, seed=0, temperature=5.0):
    from mtforge.corpus import corpus_stats
    stats = corpus_stats(manifest)
    dist = language_distribution(stats, temperature)
    return make_scheduler(manifest, stats, dist, weights, batch_size, seed)


class TestScheduler:
    def test_degenerate_mixture_all_bitext(self, make_corpus):
        sched = scheduler_for(three_pool_corpus(make_corpus),
                              MixtureWeights(1, 0, 0))
        batch = sched.next_batch()
        assert all(p.origin is OriginPool.BITEXT for p in batch.pairs)

    def test_empty_pool_with_positive_weight(self, make_corpus):
        manifest = make_corpus([
            ("bx.tsv", "hr-en", "bitext", [("s", "t")]),
            ("bt.tsv", "en-hr", "bt", [("s", "t")]),
        ])
        with pytest.raises(EmptyPoolError) as err:
            scheduler_for(manifest, MixtureWeights(0.33, 0.33, 0.33))
        assert "dual_pseudo" in str(err.value)

    def test_batch_size_contract(self, make_corpus):
        sched = scheduler_for(three_pool_corpus(make_corpus),
                              MixtureWeights(0.6, 0.2, 0.2), batch_size=8)
        assert len(sched.next_batch().pairs) == 8

    def test_same_seed_same_batches(self, make_corpus):
        manifest = three_pool_corpus(make_corpus)
        w = MixtureWeights(0.6, 0.2, 0.2)
        a = scheduler_for(manifest, w, seed=42).next_batch()
        b = scheduler_for(manifest, w, seed=42).next_batch()
        assert a.pairs == b.pairs

    def test_single_direction_manifest(self, make_corpus):
        manifest = make_corpus([("bx.tsv", "hr-en", "bitext",
                                 [(f"s{i}", f"t{i}") for i in range(5)])])
        sched = scheduler_for(manifest, MixtureWeights(1, 0, 0))
        batch = sched.next_batch()
        assert {p.direction for p in batch.pairs} == {Direction("hr", "en")}

    def test_composition_tallies_match_pairs(self, make_corpus):
        sched = scheduler_for(three_pool_corpus(make_corpus),
                              MixtureWeights(0.6, 0.2, 0.2), batch_size=32)
        batch = sched.next_batch()
        # each pair contributes its two sides
        assert sum(batch.composition.values()) == 2 * len(batch.pairs)
        origin_totals = {}
        for (lang, origin), n in batch.composition.items():
            origin_totals[origin] = origin_totals.get(origin, 0) + n
        for origin, total in origin_totals.items():
            assert total == 2 * sum(p.origin is origin for p in batch.pairs)

    def test_pool_marginals_within_three_sigma(self, make_corpus):
        draws = 20_000
        sched = scheduler_for(three_pool_corpus(make_corpus),
                              MixtureWeights(0.6, 0.2, 0.2),
                              batch_size=draws, seed=7)
        batch = sched.next_batch()
        expected = {OriginPool.BITEXT: 0.6, OriginPool.BACK_TRANSLATION: 0.2,
                    OriginPool.DUAL_PSEUDO: 0.2}
        for origin, p in expected.items():
            observed = sum(pair.origin is origin for pair in batch.pairs) / draws
            assert abs(observed - p) <= 3 * math.sqrt(p * (1 - p) / draws)

    def test_invalid_batch_size(self, make_corpus):
        with pytest.raises(ValueError):
            scheduler_for(three_pool_corpus(make_corpus),
                          MixtureWeights(1, 0, 0), batch_size=0)

    def test_direction_weights_follow_q_product(self, make_corpus):
        """Within one pool, directions are drawn proportionally to
        q_src * q_tgt; checked against the analytic marginal."""
        rows = lambda k: [(f"s{i}", f"t{i}") for i in range(k)]
        manifest = make_corpus([
            ("a.tsv", "hr-en", "bitext", rows(80)),
            ("b.tsv", "hu-en", "bitext", rows(10)),
        ])
        from mtforge.corpus import corpus_stats
        stats = corpus_stats(manifest)
        dist = language_distribution(stats, 5.0)
        sched = make_scheduler(manifest, stats, dist, MixtureWeights(1, 0, 0),
                               batch_size=30_000, seed=3)
        batch = sched.next_batch()
        w_hr = dist.q["hr"] * dist.q["en"]
        w_hu = dist.q["hu"] * dist.q["en"]
        expected = w_hr / (w_hr + w_hu)
        observed = sum(p.direction == Direction("hr", "en")
                       for p in batch.pairs) / len(batch.pairs)
        assert abs(observed - expected) <= 3 * math.sqrt(
            expected * (1 - expected) / len(batch.pairs))
