"""Genetic evolution of class association rules.

Each individual encodes exactly one rule; fitness is the rule's support
Z statistic and is recomputed whenever an operator changes the rule. A
capped pool collects the best distinct rules seen anywhere in the run,
and the returned pool is pruned to the rules whose Z test rejects the
null hypothesis.

Every random draw goes through a single seeded generator, so a fixed
seed reproduces a run bit for bit.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, replace

from .dataset import Dataset
from .rules import ClassAssociationRule, Item, new_rule, rule_key
from .ztest import ZTestConfig, hypothesis_test, z_statistic


@dataclass(frozen=True)
class Chromosome:
    """One-rule individual; fitness mirrors the rule's Z statistic."""

    rule: ClassAssociationRule

    @property
    def fitness(self) -> float:
        return self.rule.fitness


@dataclass(frozen=True)
class GAConfig:
    population_size: int = 50
    generations: int = 30
    crossover_rate: float = 0.8
    mutation_rate: float = 0.1
    tournament_size: int = 2
    elite_count: int = 2
    pool_size: int = 100
    rng_seed: int = 42

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError("population_size must be positive")
        if self.generations < 0:
            raise ValueError("generations may not be negative")
        if not 0 <= self.crossover_rate <= 1:
            raise ValueError("crossover_rate must be in [0, 1]")
        if not 0 <= self.mutation_rate <= 1:
            raise ValueError("mutation_rate must be in [0, 1]")
        if self.tournament_size < 2:
            raise ValueError("tournament_size must be at least 2")
        if not 0 <= self.elite_count < self.population_size:
            raise ValueError("elite_count must be in [0, population_size)")
        if self.pool_size < 1:
            raise ValueError("pool_size must be positive")


def derive_seed(seed: int, label: str) -> int:
    """Stable 64-bit stream seed for (seed, label), e.g. one per CV fold."""
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


class RulePool:
    """Best-rules pool capped at `capacity`, deduplicated by
    (antecedent, consequent).

    A newcomer only ever evicts the current minimum-fitness rule, and
    only when strictly fitter, so the pool minimum never decreases.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("pool capacity must be positive")
        self.capacity = capacity
        self._rules: dict[tuple, ClassAssociationRule] = {}

    def __len__(self) -> int:
        return len(self._rules)

    def offer(self, rule: ClassAssociationRule) -> bool:
        key = (rule.antecedent, rule.consequent)
        if key in self._rules:
            return False
        if len(self._rules) < self.capacity:
            self._rules[key] = rule
            return True
        worst_key, worst = min(
            self._rules.items(), key=lambda kv: (kv[1].fitness, rule_key(kv[1]))
        )
        if rule.fitness > worst.fitness:
            del self._rules[worst_key]
            self._rules[key] = rule
            return True
        return False

    @property
    def rules(self) -> tuple[ClassAssociationRule, ...]:
        return tuple(sorted(self._rules.values(), key=lambda r: (-r.fitness, rule_key(r))))

    @property
    def best_fitness(self) -> float | None:
        return max((r.fitness for r in self._rules.values()), default=None)

    @property
    def min_fitness(self) -> float | None:
        return min((r.fitness for r in self._rules.values()), default=None)


def score_rule(rule: ClassAssociationRule, ds: Dataset, minsup: float) -> Chromosome:
    """Chromosome whose rule carries fresh support/confidence/fitness."""
    measured = new_rule(ds, rule.antecedent, rule.consequent)
    z = z_statistic(measured.support, minsup, ds.n)
    return Chromosome(replace(measured, fitness=z))


def select(population, cfg: GAConfig, rng: random.Random) -> Chromosome:
    """Tournament selection with replacement; fitness ties go to the
    canonically smaller rule."""
    if not population:
        raise ValueError("cannot select from an empty population")
    draws = [population[rng.randrange(len(population))] for _ in range(cfg.tournament_size)]
    return min(draws, key=lambda c: (-c.fitness, rule_key(c.rule)))


def _rebuild(items, fallback: Chromosome, ds: Dataset, minsup: float) -> Chromosome | None:
    """Measured chromosome for `items`, or None when it matches nothing."""
    rule = new_rule(ds, items, fallback.rule.consequent)
    if rule.support == 0.0:
        return None
    return Chromosome(replace(rule, fitness=z_statistic(rule.support, minsup, ds.n)))


def _repair(items, parent: Chromosome, ds: Dataset, anchor: str,
            minsup: float) -> Chromosome:
    """Post-crossover repair: drop later duplicate attributes, restore a
    lost anchor item from the parent, and fall back to the parent when
    the offspring goes infrequent."""
    kept: list[Item] = []
    seen: set[str] = set()
    for item in items:
        if item.attribute in seen:
            continue
        seen.add(item.attribute)
        kept.append(item)
    if anchor not in seen:
        kept.append(next(i for i in parent.rule.antecedent if i.attribute == anchor))
    rule = new_rule(ds, kept, parent.rule.consequent)
    if rule.support < minsup:
        return parent
    return Chromosome(replace(rule, fitness=z_statistic(rule.support, minsup, ds.n)))


def crossover(a: Chromosome, b: Chromosome, ds: Dataset, anchor: str,
              minsup: float, rng: random.Random) -> tuple[Chromosome, Chromosome]:
    """Single-point crossover on antecedent items; consequents stay put.

    The cut position is uniform over the interior of the shorter parent,
    and the suffixes after it are swapped. Parents with single-item
    antecedents have no interior cut, so they pass through unchanged.
    """
    ant_a, ant_b = a.rule.antecedent, b.rule.antecedent
    if len(ant_a) < 2 or len(ant_b) < 2:
        return a, b
    cut = rng.randint(1, min(len(ant_a), len(ant_b)) - 1)
    child1 = _repair(ant_a[:cut] + ant_b[cut:], a, ds, anchor, minsup)
    child2 = _repair(ant_b[:cut] + ant_a[cut:], b, ds, anchor, minsup)
    return child1, child2


def _value_mutation_items(c: Chromosome, ds: Dataset, anchor: str,
                          rng: random.Random) -> list[Item] | None:
    """Swap one item's value for a different declared value of the same
    attribute. Targets a random non-anchor item, or the anchor itself when
    it is the whole antecedent. None when the attribute has no alternative."""
    items = list(c.rule.antecedent)
    non_anchor = [k for k, item in enumerate(items) if item.attribute != anchor]
    if non_anchor:
        k = non_anchor[rng.randrange(len(non_anchor))]
    else:
        k = next(k for k, item in enumerate(items) if item.attribute == anchor)
    attr = ds.attribute(items[k].attribute)
    alternatives = [v for v in attr.values if v != items[k].value]
    if not alternatives:
        return None
    items[k] = Item(attr.name, alternatives[rng.randrange(len(alternatives))])
    return items


def _node_mutation_items(c: Chromosome, ds: Dataset, anchor: str,
                         rng: random.Random) -> list[Item] | None:
    """Replace a random non-anchor item with a random-valued item of an
    attribute not yet present in the antecedent."""
    items = list(c.rule.antecedent)
    non_anchor = [k for k, item in enumerate(items) if item.attribute != anchor]
    if not non_anchor:
        return None
    k = non_anchor[rng.randrange(len(non_anchor))]
    present = {item.attribute for item in items}
    eligible = [a for a in ds.schema if not a.is_class and a.name not in present]
    if not eligible:
        return None
    attr = eligible[rng.randrange(len(eligible))]
    items[k] = Item(attr.name, attr.values[rng.randrange(len(attr.values))])
    return items


def mutate(c: Chromosome, ds: Dataset, anchor: str, mutation_rate: float,
           minsup: float, rng: random.Random) -> Chromosome:
    """With probability mutation_rate, mutate one judgment node: either its
    value or the node itself, chosen uniformly. An anchor-only antecedent
    value-mutates the anchor. A mutant that matches nothing is discarded
    and the original returned."""
    if rng.random() >= mutation_rate:
        return c
    if all(item.attribute == anchor for item in c.rule.antecedent):
        items = _value_mutation_items(c, ds, anchor, rng)
    elif rng.choice(("value", "node")) == "value":
        items = _value_mutation_items(c, ds, anchor, rng)
    else:
        items = _node_mutation_items(c, ds, anchor, rng)
    if items is None:
        return c
    return _rebuild(items, c, ds, minsup) or c


def evolve(initial, ds: Dataset, anchor: str, ga: GAConfig, ztest: ZTestConfig,
           observer=None) -> RulePool:
    """Run the generational loop and return the Z-test-pruned rule pool.

    All initial rules are offered to the pool up front, then the breeding
    population is seeded from them: fitness-ranked truncation when there
    are too many, value-mutated resamples when too few. Each generation
    carries the elite unchanged and fills the rest with
    select -> crossover -> mutate offspring, offering every individual to
    the pool afterwards.

    `observer(generation, population, pool)` is called after seeding
    (generation 0) and after every generation.
    """
    initial = list(initial)
    if not initial:
        raise ValueError(
            "no frequent anchored rules to evolve; lower minsup or raise max_len"
        )
    rng = random.Random(ga.rng_seed)
    minsup = ztest.minsup
    scored = [score_rule(r, ds, minsup) for r in initial]
    scored.sort(key=lambda c: (-c.fitness, rule_key(c.rule)))

    pool = RulePool(ga.pool_size)
    for c in scored:
        pool.offer(c.rule)

    population = scored[: ga.population_size]
    source = 0
    while len(population) < ga.population_size:
        parent = scored[source % len(scored)]
        source += 1
        items = _value_mutation_items(parent, ds, anchor, rng)
        child = _rebuild(items, parent, ds, minsup) if items is not None else None
        population.append(child if child is not None else parent)
    if observer is not None:
        observer(0, tuple(population), pool)

    for generation in range(1, ga.generations + 1):
        ranked = sorted(population, key=lambda c: (-c.fitness, rule_key(c.rule)))
        offspring = ranked[: ga.elite_count]
        while len(offspring) < ga.population_size:
            parent1 = select(population, ga, rng)
            parent2 = select(population, ga, rng)
            if rng.random() < ga.crossover_rate:
                child1, child2 = crossover(parent1, parent2, ds, anchor, minsup, rng)
            else:
                child1, child2 = parent1, parent2
            offspring.append(mutate(child1, ds, anchor, ga.mutation_rate, minsup, rng))
            if len(offspring) < ga.population_size:
                offspring.append(mutate(child2, ds, anchor, ga.mutation_rate, minsup, rng))
        population = offspring
        for c in population:
            pool.offer(c.rule)
        if observer is not None:
            observer(generation, tuple(population), pool)

    pruned = RulePool(ga.pool_size)
    for rule in pool.rules:
        if hypothesis_test(rule.fitness, ztest).reject_null:
            pruned.offer(rule)
    return pruned
