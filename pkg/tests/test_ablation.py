import pytest

from abyssal.ablation import Corpus, generate_corpus, run_ablation
from abyssal.errors import BadMix

MIX = {"none": 0.5, "capability": 0.2, "affordance": 0.3}


class TestCorpus:
    def test_mix_counts_20(self, two_auv):
        corpus = generate_corpus(two_auv, seed=1, n=20, mix=MIX)
        tags = [e.tag for e in corpus.entries]
        assert tags.count("none") == 10
        assert tags.count("capability") == 4
        assert tags.count("affordance") == 6

    def test_empty_corpus(self, two_auv):
        assert len(generate_corpus(two_auv, seed=1, n=0, mix={"none": 1.0})) == 0

    def test_bad_mixes(self, two_auv):
        with pytest.raises(BadMix):
            generate_corpus(two_auv, 1, 20, {"none": 0.9, "capability": 0.3})
        with pytest.raises(BadMix):
            generate_corpus(two_auv, 1, 20, {"none": 1.2, "capability": -0.2})
        with pytest.raises(BadMix):
            generate_corpus(two_auv, 1, 20, {"none": 0.5, "flux": 0.5})

    def test_seed_determinism(self, two_auv):
        a = generate_corpus(two_auv, seed=9, n=20, mix=MIX)
        b = generate_corpus(two_auv, seed=9, n=20, mix=MIX)
        assert [e.text for e in a.entries] == [e.text for e in b.entries]
        c = generate_corpus(two_auv, seed=10, n=20, mix=MIX)
        assert [e.text for e in a.entries] != [e.text for e in c.entries]

    def test_oracle_labels_match_tags(self, two_auv):
        corpus = generate_corpus(two_auv, seed=3, n=20, mix=MIX)
        for entry in corpus.entries:
            assert entry.oracle_feasible == (entry.tag == "none")


class TestAblation:
    def test_full_matches_oracle_everywhere(self, two_auv):
        for seed in (1, 2, 3, 11, 12):
            corpus = generate_corpus(two_auv, seed=seed, n=20, mix=MIX)
            result = run_ablation(corpus, two_auv)
            full = result.per_config[0]
            assert full.mode == "FULL"
            assert full.validation_accuracy == 1.0
            assert full.bt_completeness == 1.0

    def test_trend_strict_with_mixed_violations(self, two_auv):
        corpus = generate_corpus(two_auv, seed=5, n=20, mix=MIX)
        result = run_ablation(corpus, two_auv)
        by_mode = {c.mode: c.validation_accuracy for c in result.per_config}
        assert by_mode["FULL"] == 1.0
        assert by_mode["KG_ONLY"] == 0.70
        assert by_mode["STATE_ONLY"] == 0.50
        assert by_mode["FULL"] > by_mode["KG_ONLY"] > by_mode["STATE_ONLY"]

    def test_accuracy_ordering_on_resource_mix(self, two_auv):
        corpus = generate_corpus(
            two_auv, seed=6, n=20, mix={"none": 0.6, "resource": 0.2, "affordance": 0.2}
        )
        result = run_ablation(corpus, two_auv)
        accs = [c.validation_accuracy for c in result.per_config]
        assert accs[0] >= accs[1] >= accs[2]
        # resource violations are caught by every mode
        assert accs[2] >= 0.8 - 1e-9

    def test_mission_counts_equal_across_configs(self, two_auv):
        corpus = generate_corpus(two_auv, seed=7, n=12, mix=MIX)
        result = run_ablation(corpus, two_auv)
        assert {c.missions for c in result.per_config} == {12}

    def test_render_table(self, two_auv):
        corpus = generate_corpus(two_auv, seed=1, n=4, mix={"none": 1.0})
        table = run_ablation(corpus, two_auv).render_table()
        assert "FULL" in table and "STATE_ONLY" in table
