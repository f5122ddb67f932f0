"""Associative classifier built from genetically evolved class association rules.

Pipeline: discretize numeric attributes into labelled intervals, pick the
minimum-Gini anchor attribute, enumerate frequent anchored rules, evolve
them with a seeded genetic algorithm scored by the support Z statistic,
prune by hypothesis test, then order the survivors into a first-match
rule-list classifier evaluated with stratified k-fold cross validation.
"""

from .classifier import (
    ClassifierModel,
    EvaluationReport,
    FoldResult,
    accuracy,
    build,
    cross_validate,
    load_model,
    predict,
    stratified_folds,
)
from .dataset import (
    Attribute,
    Dataset,
    Interval,
    apply_discretization,
    discretize,
    interval_label,
    load_csv,
    subset,
)
from .evolution import Chromosome, GAConfig, RulePool, crossover, evolve, mutate, select
from .gini import AttributeScore, attribute_gini, partition_gini, score_attributes, select_anchor
from .rules import (
    ClassAssociationRule,
    Item,
    generate_initial_rules,
    matches,
    measure,
    new_rule,
    rule_text,
)
from .ztest import ZResult, ZTestConfig, critical_value, hypothesis_test, z_statistic

__version__ = "0.1.0"

__all__ = [
    "Attribute", "AttributeScore", "Chromosome", "ClassAssociationRule",
    "ClassifierModel", "Dataset", "EvaluationReport", "FoldResult", "GAConfig",
    "Interval", "Item", "RulePool", "ZResult", "ZTestConfig", "accuracy",
    "apply_discretization", "attribute_gini", "build", "critical_value",
    "cross_validate", "crossover", "discretize", "evolve",
    "generate_initial_rules", "hypothesis_test", "interval_label", "load_csv",
    "load_model", "matches", "measure", "mutate", "new_rule", "partition_gini",
    "predict", "rule_text", "score_attributes", "select", "select_anchor",
    "stratified_folds", "subset", "z_statistic",
]
