from __future__ import annotations

import numpy as np
import pytest

from clozebase.annotate import CoarseClass, coarse_class, heuristic_tag, tokenize
from clozebase.corpus import swap_endings
from clozebase.errors import ParseError
from clozebase.features import (MAX_SIM_TOPNS, POS_CLASSES, FeatureConfig,
                                FeatureVector, aligned_sim, apply_scaler,
                                config_from_names, extract, feature_length,
                                feature_names, fit_scaler, flags_for,
                                load_features, max_sim_topn, pos_sims,
                                save_features, sim_story_ending)

# ---------------------------------------------------------------------------
# Brute-force oracle: straight-line reimplementation of every feature block,
# touching only table.entries and raw numpy.
# ---------------------------------------------------------------------------


def o_lookup(table, token):
    if token in table.entries:
        return table.entries[token]
    return table.entries.get(token.lower())


def o_vecs(table, tokens):
    return [o_lookup(table, t) for t in tokens if o_lookup(table, t) is not None]


def o_centroid(table, tokens):
    vecs = o_vecs(table, tokens)
    if not vecs:
        return np.zeros(table.dim)
    total = np.zeros(table.dim)
    for v in vecs:
        total = total + v
    return total / len(vecs)


def o_cosine(a, b):
    na = float(np.sqrt(sum(x * x for x in a)))
    nb = float(np.sqrt(sum(x * x for x in b)))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(sum(x * y for x, y in zip(a, b)) / (na * nb))


def o_plain_sim(table, story, ending):
    return o_cosine(o_centroid(table, story), o_centroid(table, ending))


def o_max_sim(table, story, ending, n):
    center = o_centroid(table, ending)
    scores = sorted((o_cosine(v, center) for v in o_vecs(table, story)),
                    reverse=True)
    if not scores:
        return 0.0
    top = scores[:n]
    return sum(top) / len(top)


def o_aligned(table, story, ending):
    svecs, evecs = o_vecs(table, story), o_vecs(table, ending)
    if not svecs or not evecs:
        return 0.0
    best = [max(o_cosine(sv, ev) for ev in evecs) for sv in svecs]
    return sum(best) / len(best)


def o_pos_sims(table, story_annotated, ending_annotated):
    values = []
    for cs in POS_CLASSES:
        s_members = [t.surface for t in story_annotated
                     if coarse_class(t.pos) is cs]
        for ce in POS_CLASSES:
            e_members = [t.surface for t in ending_annotated
                         if coarse_class(t.pos) is ce]
            values.append(o_cosine(o_centroid(table, s_members),
                                   o_centroid(table, e_members)))
    return values


def o_extract_all(table, instance):
    """Full 'all'-config vector, assembled independently of extract()."""
    story_sents = [tokenize(s) for s in instance.context]
    story = [t for sent in story_sents for t in sent]
    endings = {1: tokenize(instance.ending1), 2: tokenize(instance.ending2)}
    story_anno = [t for sent in story_sents for t in heuristic_tag(sent)]
    values = list(o_centroid(table, story))
    for k in (1, 2):
        values.extend(o_centroid(table, endings[k]))
    for k in (1, 2):
        ending = endings[k]
        values.append(o_plain_sim(table, story, ending))
        for n in MAX_SIM_TOPNS:
            values.append(o_max_sim(table, story, ending, n))
        values.append(o_aligned(table, story, ending))
        values.extend(o_pos_sims(table, story_anno, heuristic_tag(ending)))
    return np.asarray(values)


class TestOracleEquivalence:
    def test_all_config_matches_oracle_on_50_instances(self, table, instances50):
        for instance in instances50:
            got = extract(instance, table, heuristic_tag, FeatureConfig.ALL)
            np.testing.assert_allclose(got.values, o_extract_all(table, instance),
                                       rtol=0, atol=1e-10)

    def test_individual_blocks_match_oracle(self, table, instances50):
        for instance in instances50[:20]:
            story = [t for s in instance.context for t in tokenize(s)]
            ending = tokenize(instance.ending1)
            assert sim_story_ending(story, ending, table) == pytest.approx(
                o_plain_sim(table, story, ending), abs=1e-12)
            for n in MAX_SIM_TOPNS:
                assert max_sim_topn(story, ending, table, n) == pytest.approx(
                    o_max_sim(table, story, ending, n), abs=1e-12)
            assert aligned_sim(story, ending, table) == pytest.approx(
                o_aligned(table, story, ending), abs=1e-12)
            s_anno, e_anno = heuristic_tag(story), heuristic_tag(ending)
            np.testing.assert_allclose(pos_sims(s_anno, e_anno, table),
                                       o_pos_sims(table, s_anno, e_anno),
                                       rtol=0, atol=1e-12)


class TestBlockBehavior:
    def test_identical_text_gives_unit_sims(self, table):
        tokens = ["dog", "ocean", "played"]
        assert sim_story_ending(tokens, tokens, table) == pytest.approx(1.0)
        assert aligned_sim(tokens, tokens, table) == pytest.approx(1.0)

    def test_all_oov_gives_zero(self, table):
        assert sim_story_ending(["zzqx1"], ["dog"], table) == 0.0
        assert aligned_sim(["dog"], ["zzqx1"], table) == 0.0
        assert max_sim_topn(["zzqx1"], ["dog"], table, 1) == 0.0

    def test_max_sim_top1_is_max(self, table):
        story = ["dog", "cat", "beach", "pizza"]
        ending = ["ocean", "waves"]
        center = np.mean([table.entries["ocean"], table.entries["waves"]], axis=0)
        per_word = [o_cosine(table.entries[w], center) for w in story]
        assert max_sim_topn(story, ending, table, 1) == pytest.approx(
            max(per_word), abs=1e-12)

    def test_max_sim_clamps_to_available(self, table):
        story = ["dog", "cat"]
        got = max_sim_topn(story, ["beach"], table, 5)
        per_word = [o_cosine(table.entries[w], table.entries["beach"])
                    for w in story]
        assert got == pytest.approx(sum(per_word) / 2, abs=1e-12)

    def test_single_pair_aligned_is_pairwise_cosine(self, table):
        got = aligned_sim(["dog"], ["cat"], table)
        assert got == pytest.approx(
            o_cosine(table.entries["dog"], table.entries["cat"]), abs=1e-12)

    def test_pos_sims_length_and_empty_class(self, table):
        story = heuristic_tag(["the", "dog"])        # DT + NN: no verbs
        ending = heuristic_tag(["she", "runs"])
        values = pos_sims(story, ending, table)
        assert len(values) == 25
        verb_row = slice(5, 10)                      # (VERB, *) block
        assert all(v == 0.0 for v in values[verb_row])


class TestLayout:
    def test_all_dim300_is_962(self):
        assert feature_length(FeatureConfig.ALL, 300) == 962

    def test_endings_only_is_2dim(self):
        assert feature_length(FeatureConfig.ENDINGS_ONLY, 300) == 600

    @pytest.mark.parametrize("config,dim,expected", [
        (FeatureConfig.ALL, 16, 3 * 16 + 2 * 31),
        (FeatureConfig.ALL_WO_POS_SIM, 16, 3 * 16 + 2 * 6),
        (FeatureConfig.ALL_WO_MAX_SIM, 16, 3 * 16 + 2 * 26),
        (FeatureConfig.ALL_WO_SIM, 16, 3 * 16 + 2 * 30),
        (FeatureConfig.REPR_PLUS_SIM, 16, 3 * 16 + 2 * 1),
        (FeatureConfig.ENDINGS_ONLY, 16, 2 * 16),
        (FeatureConfig.SIMS_ONLY, 16, 2 * 31),
    ])
    def test_lengths_per_config(self, config, dim, expected):
        assert feature_length(config, dim) == expected
        assert len(feature_names(config, dim)) == expected

    def test_names_are_unique_and_stable(self):
        for config in FeatureConfig:
            names = feature_names(config, 16)
            assert len(set(names)) == len(names)
            assert names == feature_names(config, 16)

    def test_flag_table_shape(self):
        assert flags_for(FeatureConfig.ALL_WO_MAX_SIM).max_sim is False
        assert flags_for(FeatureConfig.ALL_WO_MAX_SIM).aligned_sim is False
        assert flags_for(FeatureConfig.ALL_WO_SIM).plain_sim is False
        assert flags_for(FeatureConfig.ALL_WO_SIM).max_sim is True
        assert flags_for(FeatureConfig.SIMS_ONLY).repr_story is False

    def test_extract_layout_matches_names(self, table, instances50):
        for config in FeatureConfig:
            vector = extract(instances50[0], table, heuristic_tag, config)
            assert vector.names == feature_names(config, table.dim)
            assert vector.values.shape == (len(vector.names),)

    def test_config_recoverable_from_names(self):
        for config in FeatureConfig:
            assert config_from_names(feature_names(config, 16)) is config

    def test_unknown_names_rejected(self):
        with pytest.raises(ValueError, match="configuration"):
            config_from_names(("mystery_feature",))


class TestSwapEquivariance:
    def swap_names(self, name):
        if name.startswith("e1_"):
            return "e2_" + name[3:]
        if name.startswith("e2_"):
            return "e1_" + name[3:]
        return name

    @pytest.mark.parametrize("config", list(FeatureConfig))
    def test_exact_block_exchange(self, table, instances50, config):
        for instance in instances50[:10]:
            original = extract(instance, table, heuristic_tag, config)
            swapped = extract(swap_endings(instance), table, heuristic_tag, config)
            lookup = dict(zip(original.names, original.values))
            expected = np.asarray([lookup[self.swap_names(n)]
                                   for n in swapped.names])
            np.testing.assert_array_equal(swapped.values, expected)


class TestExtractValidation:
    def test_pos_config_requires_annotator(self, table, instances50):
        with pytest.raises(ValueError, match="annotations"):
            extract(instances50[0], table, None, FeatureConfig.ALL)

    def test_no_pos_config_runs_without_annotator(self, table, instances50):
        vector = extract(instances50[0], table, None, FeatureConfig.REPR_PLUS_SIM)
        assert vector.values.shape[0] == feature_length(
            FeatureConfig.REPR_PLUS_SIM, table.dim)

    def test_vector_shape_mismatch_rejected(self):
        with pytest.raises(ValueError, match="names"):
            FeatureVector(names=("a", "b"), values=np.zeros(3))


class TestScaler:
    def vec(self, values, names=None):
        values = np.asarray(values, dtype=np.float64)
        names = names or tuple(f"f{i}" for i in range(len(values)))
        return FeatureVector(names=names, values=values)

    def test_min_max_to_unit(self):
        train = [self.vec([2.0, -1.0]), self.vec([4.0, 1.0])]
        scaler = fit_scaler(train)
        np.testing.assert_array_equal(apply_scaler(scaler, train[0]).values, [0, 0])
        np.testing.assert_array_equal(apply_scaler(scaler, train[1]).values, [1, 1])
        mid = apply_scaler(scaler, self.vec([3.0, 0.0]))
        np.testing.assert_allclose(mid.values, [0.5, 0.5])

    def test_constant_feature_maps_to_zero(self):
        train = [self.vec([7.0, 1.0]), self.vec([7.0, 2.0])]
        scaler = fit_scaler(train)
        assert apply_scaler(scaler, train[0]).values[0] == 0.0
        assert apply_scaler(scaler, self.vec([9.0, 1.5])).values[0] == 0.0

    def test_clamping_outside_train_range(self):
        scaler = fit_scaler([self.vec([0.0]), self.vec([10.0])])
        assert apply_scaler(scaler, self.vec([-5.0])).values[0] == 0.0
        assert apply_scaler(scaler, self.vec([15.0])).values[0] == 1.0

    def test_empty_train_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            fit_scaler([])

    def test_layout_mismatch_rejected(self):
        scaler = fit_scaler([self.vec([1.0, 2.0])])
        with pytest.raises(ValueError, match="layout"):
            apply_scaler(scaler, self.vec([1.0, 2.0], names=("x", "y")))

    def test_scaled_features_stay_in_unit_interval(self, table, instances50):
        vectors = [extract(i, table, heuristic_tag, FeatureConfig.ALL)
                   for i in instances50]
        scaler = fit_scaler(vectors[:30])
        for v in vectors:
            scaled = apply_scaler(scaler, v).values
            assert scaled.min() >= 0.0 and scaled.max() <= 1.0


class TestPersistence:
    def test_round_trip_bit_exact(self, tmp_path, table, instances50):
        vectors = [extract(i, table, heuristic_tag, FeatureConfig.SIMS_ONLY)
                   for i in instances50[:8]]
        labels = [i.gold for i in instances50[:8]]
        path = tmp_path / "features.csv"
        save_features(path, vectors, labels)
        loaded, got_labels = load_features(path)
        assert got_labels == labels
        for original, restored in zip(vectors, loaded):
            assert restored.names == original.names
            np.testing.assert_array_equal(restored.values, original.values)

    def test_label_column_validated(self, tmp_path):
        path = tmp_path / "features.csv"
        path.write_text("a,b\n0.5,oops\n")
        with pytest.raises(ParseError, match="label"):
            load_features(path)

    def test_column_count_validated(self, tmp_path):
        path = tmp_path / "features.csv"
        path.write_text("a,b\n0.5,1\n")   # 2 columns where 3 expected
        with pytest.raises(ParseError, match="line 2"):
            load_features(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "features.csv"
        path.write_text("")
        with pytest.raises(ParseError, match="empty"):
            load_features(path)
