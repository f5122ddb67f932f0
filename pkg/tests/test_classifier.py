import json
import random
from collections import Counter

import pytest

from evocar.classifier import (
    ClassifierModel,
    accuracy,
    build,
    cross_validate,
    model_from_json_dict,
    predict,
    rule_order_key,
    stratified_folds,
)
from evocar.dataset import discretize, interval_label
from evocar.evolution import GAConfig, RulePool
from evocar.gini import select_anchor
from evocar.rules import ClassAssociationRule, Item, generate_initial_rules
from evocar.ztest import ZTestConfig

from conftest import make_dataset


def bare_rule(pairs, consequent, support=0.0, confidence=0.0, fitness=0.0):
    return ClassAssociationRule(tuple(Item(a, v) for a, v in pairs), consequent,
                                support, confidence, fitness)


def oracle_predict(model, discretized_values):
    """Independent first-match reference: plain linear scan."""
    for rule in model.rules:
        if all(discretized_values.get(i.attribute) == i.value for i in rule.antecedent):
            return rule.consequent
    return model.default_class


def oracle_discretize(model, row):
    out = {}
    for attr in model.schema:
        if attr.is_class:
            continue
        if attr.name in model.cuts:
            out[attr.name] = interval_label(model.cuts[attr.name], float(row[attr.name]))
        else:
            out[attr.name] = str(row[attr.name])
    return out


@pytest.fixture()
def majority_ds():
    rows = [("v", "C1")] * 7 + [("w", "C2")] * 3
    return make_dataset(("a", "cls"), rows, "cls")


class TestBuild:
    def test_confidence_is_primary_key(self, majority_ds):
        lo = bare_rule([("a", "v")], "C1", support=0.7, confidence=0.8)
        hi = bare_rule([("a", "w")], "C2", support=0.3, confidence=1.0)
        model = build([lo, hi], majority_ds, "a")
        assert model.rules == (hi, lo)

    def test_support_breaks_confidence_ties(self, majority_ds):
        small = bare_rule([("a", "v")], "C1", support=0.2, confidence=0.9)
        large = bare_rule([("a", "w")], "C2", support=0.4, confidence=0.9)
        model = build([small, large], majority_ds, "a")
        assert model.rules == (large, small)

    def test_shorter_antecedent_breaks_further_ties(self):
        # same confidence and support, so length decides
        ds = make_dataset(("a", "b", "cls"),
                          [("v", "m", "C1")] * 7 + [("w", "n", "C2")] * 3, "cls")
        one = bare_rule([("a", "v")], "C1", 0.4, 0.9)
        two = bare_rule([("a", "w"), ("b", "n")], "C2", 0.4, 0.9)
        model = build([two, one], ds, "a")
        assert model.rules == (one, two)

    def test_text_is_final_tiebreaker(self, majority_ds):
        r1 = bare_rule([("a", "v")], "C1", 0.4, 0.9)
        r2 = bare_rule([("a", "w")], "C1", 0.4, 0.9)
        model = build([r2, r1], majority_ds, "a")
        assert model.rules == (r1, r2)

    def test_default_class_is_training_majority(self, majority_ds):
        model = build([], majority_ds, "a")
        assert model.default_class == "C1"

    def test_default_class_tie_goes_to_first_declared(self):
        rows = [("v", "C2"), ("w", "C1"), ("v", "C1"), ("w", "C2")]
        ds = make_dataset(("a", "cls"), rows, "cls")
        model = build([], ds, "a")
        assert model.default_class == "C2"  # declared first (row order)

    def test_empty_pool_warns_and_predicts_default(self, majority_ds):
        with pytest.warns(UserWarning, match="default class"):
            model = build(RulePool(4), majority_ds, "a")
        assert model.rules == ()
        assert predict(model, {"a": "anything"}) == "C1"

    def test_ordering_is_permutation_independent(self, majority_ds):
        rng = random.Random(9)
        rules = [bare_rule([("a", "v")], "C1", s / 10, c / 10)
                 for s in range(1, 4) for c in range(5, 8)]
        rules += [bare_rule([("a", "w")], "C2", 0.2, 0.6)]
        reference = None
        for _ in range(10):
            rng.shuffle(rules)
            ordered = build(list(rules), majority_ds, "a").rules
            if reference is None:
                reference = ordered
            assert ordered == reference


class TestPredict:
    def test_first_match_wins(self, majority_ds):
        later = bare_rule([("a", "v")], "C2", 0.3, 0.7)
        earlier = bare_rule([("a", "v")], "C1", 0.3, 0.9)
        model = build([later, earlier], majority_ds, "a")
        assert model.rules[0] is earlier
        assert predict(model, {"a": "v"}) == "C1"

    def test_no_match_falls_back_to_default(self, majority_ds):
        rule = bare_rule([("a", "w")], "C2", 0.3, 1.0)
        model = build([rule], majority_ds, "a")
        assert predict(model, {"a": "v"}) == "C1"

    def test_liver_top_interval_rule(self, liver_raw, liver_disc):
        rule = bare_rule([("sgpt", "(43.333333-+inf]")], "1", 0.1, 1.0)
        model = build([rule], liver_disc, "sgpt")
        row = dict(zip((a.name for a in liver_raw.schema), liver_raw.instances[0]))
        assert predict(model, row) == "1"  # sgpt=45 sits in the top interval

    def test_missing_column_named(self, liver_disc):
        model = build([], liver_disc, "drinks")
        with pytest.raises(ValueError, match="alkphos"):
            predict(model, {"mcv": "85.0"})

    def test_non_numeric_value_named(self, liver_disc):
        model = build([], liver_disc, "drinks")
        row = {a.name: "1.0" for a in liver_disc.schema if not a.is_class}
        row["sgpt"] = "banana"
        with pytest.raises(ValueError, match="banana"):
            predict(model, row)

    def test_out_of_range_numeric_is_fine(self, liver_disc):
        rule = bare_rule([("sgpt", "(43.333333-+inf]")], "1", 0.1, 1.0)
        model = build([rule], liver_disc, "sgpt")
        row = {a.name: "0" for a in liver_disc.schema if not a.is_class}
        row["sgpt"] = "1e9"
        assert predict(model, row) == "1"

    def test_predict_is_pure(self, liver_disc):
        rule = bare_rule([("drinks", "(0.333333-+inf]")], "1", 0.4, 1.0)
        model = build([rule], liver_disc, "drinks")
        row = {a.name: "0.5" for a in liver_disc.schema if not a.is_class}
        assert len({predict(model, row) for _ in range(5)}) == 1


class TestAccuracy:
    def test_fraction_correct(self):
        rows = [("v", "C1")] * 8 + [("w", "C1")] * 2
        ds = make_dataset(("a", "cls"), rows, "cls")
        model = build([bare_rule([("a", "v")], "C1", 0.8, 1.0),
                       bare_rule([("a", "w")], "C2", 0.1, 0.5)], ds, "a")
        assert accuracy(model, ds) == 0.8

    def test_default_only_on_pure_majority_test(self, majority_ds):
        model = build([], majority_ds, "a")
        pure = make_dataset(("a", "cls"), [("v", "C1")] * 4, "cls")
        assert accuracy(model, pure) == 1.0

    def test_empty_test_rejected(self, majority_ds):
        model = build([], majority_ds, "a")
        with pytest.raises(ValueError):
            accuracy(model, make_dataset(("a", "cls"), [], "cls"))


class TestPredictOracle:
    def test_agreement_on_fixture_rows(self, liver_raw, liver_disc, weather_raw,
                                        lens_raw, balloon_raw):
        cases = [
            (liver_raw, liver_disc, "drinks"),
            (weather_raw, discretize(weather_raw, 3), "humidity"),
            (lens_raw, discretize(lens_raw, 3), "tear_rate"),
            (balloon_raw, discretize(balloon_raw, 3), "act"),
        ]
        for raw, disc, anchor in cases:
            rules = generate_initial_rules(disc, anchor, max_len=3, minsup=0.1)
            model = build(rules, disc, anchor)
            names = [a.name for a in raw.schema]
            for instance in raw.instances:
                row = dict(zip(names, instance))
                assert predict(model, row) == oracle_predict(model, oracle_discretize(model, row))

    def test_agreement_on_fuzzed_pairs(self, liver_disc):
        rng = random.Random(404)
        names = [a.name for a in liver_disc.schema if not a.is_class]
        checked = 0
        while checked < 1000:
            k = rng.randint(1, 12)
            rules = []
            for _ in range(k):
                attrs = rng.sample(names, rng.randint(1, 3))
                items = [(a, rng.choice(liver_disc.attribute(a).values)) for a in attrs]
                rules.append(bare_rule(items, rng.choice(("1", "2")),
                                       support=rng.random(), confidence=rng.random(),
                                       fitness=rng.uniform(-2, 5)))
            model = build(rules, liver_disc, "drinks")
            for _ in range(rng.randint(1, 5)):
                row = {name: repr(rng.uniform(-50, 150)) for name in names}
                assert predict(model, row) == oracle_predict(model, oracle_discretize(model, row))
                checked += 1


class TestStratifiedFolds:
    def test_balanced_hundred_rows_ten_folds(self):
        rows = [("v", "C1")] * 50 + [("w", "C2")] * 50
        ds = make_dataset(("a", "cls"), rows, "cls")
        folds = stratified_folds(ds, 10, seed=3)
        class_col = ds.class_col
        for fold in folds:
            assert len(fold) == 10
            labels = Counter(ds.instances[i][class_col] for i in fold)
            assert labels == {"C1": 5, "C2": 5}

    def test_liver_two_folds(self, liver_raw):
        folds = stratified_folds(liver_raw, 2, seed=0)
        assert sorted(len(f) for f in folds) == [5, 5]
        class_col = liver_raw.class_col
        for fold in folds:
            labels = Counter(liver_raw.instances[i][class_col] for i in fold)
            assert sorted(labels.values()) == [2, 3]

    def test_folds_partition_dataset(self, weather_raw):
        for k in (2, 3, 5):
            folds = stratified_folds(weather_raw, k, seed=1)
            flat = [i for fold in folds for i in fold]
            assert sorted(flat) == list(range(weather_raw.n))
            sizes = [len(f) for f in folds]
            assert max(sizes) - min(sizes) <= 1

    def test_per_class_proportions_within_one(self, lens_raw):
        for k in (2, 3, 4):
            folds = stratified_folds(lens_raw, k, seed=5)
            counts = lens_raw.class_counts()
            class_col = lens_raw.class_col
            for fold in folds:
                per_class = Counter(lens_raw.instances[i][class_col] for i in fold)
                for label, total in counts.items():
                    ideal = total / k
                    assert abs(per_class.get(label, 0) - ideal) < 1 + 1e-9

    def test_k_too_small(self, liver_raw):
        with pytest.raises(ValueError):
            stratified_folds(liver_raw, 1, seed=0)

    def test_class_smaller_than_k_advises(self, liver_raw):
        with pytest.raises(ValueError, match="k <="):
            stratified_folds(liver_raw, 7, seed=0)


class TestCrossValidate:
    def test_report_accounting(self, liver_raw):
        report = cross_validate(liver_raw, 2, ga=GAConfig(rng_seed=11))
        total_correct = sum(f.correct for f in report.per_fold)
        total_size = sum(f.test_size for f in report.per_fold)
        assert total_size == liver_raw.n
        assert report.overall_accuracy == total_correct / total_size
        assert 0.0 <= report.overall_accuracy <= 1.0
        for fold in report.per_fold:
            assert fold.accuracy == fold.correct / fold.test_size

    def test_fixed_seed_reports_identical(self, liver_raw):
        a = cross_validate(liver_raw, 2, ga=GAConfig(rng_seed=2))
        b = cross_validate(liver_raw, 2, ga=GAConfig(rng_seed=2))
        assert json.dumps(a.to_json_dict(), sort_keys=True) == \
               json.dumps(b.to_json_dict(), sort_keys=True)

    def test_config_snapshot_embedded(self, liver_raw):
        report = cross_validate(liver_raw, 2, ga=GAConfig(rng_seed=1))
        assert report.config["k"] == 2
        assert report.config["ga"]["rng_seed"] == 1
        assert report.config["ztest"]["minsup"] == 0.1


class TestModelSerialization:
    def test_round_trip_preserves_predictions(self, liver_raw, liver_disc):
        anchor = select_anchor(liver_disc)
        rules = generate_initial_rules(liver_disc, anchor, max_len=2, minsup=0.2)
        model = build(rules, liver_disc, anchor, {"note": "round-trip"})
        restored = model_from_json_dict(json.loads(json.dumps(model.to_json_dict())))
        assert restored.default_class == model.default_class
        assert restored.rules == model.rules
        names = [a.name for a in liver_raw.schema]
        for instance in liver_raw.instances:
            row = dict(zip(names, instance))
            assert predict(restored, row) == predict(model, row)

    def test_version_checked(self):
        with pytest.raises(ValueError, match="version"):
            model_from_json_dict({"format_version": 99})
