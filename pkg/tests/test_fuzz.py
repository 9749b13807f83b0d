from __future__ import annotations

import pytest

from figmod.category import hom_count
from figmod.errors import ValidationError
from figmod.fuzz import FuzzConfig, random_batch, random_presentation
from figmod.io import emit_module_file


def test_same_seed_same_output():
    cfg = FuzzConfig(seed=3, count=5, group="z2")
    a = [emit_module_file(mf) for mf in random_batch(cfg)]
    b = [emit_module_file(mf) for mf in random_batch(cfg)]
    assert a == b
    assert [mf.name for mf in random_batch(cfg)] == [f"fuzz-3-{k}" for k in range(5)]


def test_instance_independent_of_count():
    small = random_batch(FuzzConfig(seed=11, count=3))
    large = random_batch(FuzzConfig(seed=11, count=9))
    assert [emit_module_file(m) for m in small] == [emit_module_file(m) for m in large[:3]]


def test_count_zero():
    assert random_batch(FuzzConfig(seed=1, count=0)) == []


@pytest.mark.parametrize("group", ["trivial", "z2"])
def test_bounds_on_many_draws(group):
    cfg = FuzzConfig(seed=2024, count=1000, group=group, max_gen_degree=2, max_rel_degree=4, max_generators=3, max_relations=3)
    G = cfg.group_object()
    seen_gen, seen_rel = set(), set()
    for k in range(cfg.count):
        P = random_presentation(cfg, k)
        gens = P.generator_degrees
        assert 1 <= len(gens) <= cfg.max_generators
        assert all(0 <= g <= cfg.max_gen_degree for g in gens)
        assert len(P.relations) <= cfg.max_relations
        for d, vec in P.relations:
            assert min(gens) <= d <= cfg.max_rel_degree
            assert len(vec) == sum(hom_count(g, d, G) for g in gens if g <= d)
            assert all(0 <= int(x) < 5 for x in vec)
        seen_gen.update(gens)
        seen_rel.update(d for d, _ in P.relations)
    # every allowed degree shows up over 1000 draws
    assert seen_gen == set(range(cfg.max_gen_degree + 1))
    assert seen_rel == set(range(cfg.max_rel_degree + 1))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"max_gen_degree": 3, "max_rel_degree": 2},
        {"max_generators": 0},
        {"count": -1},
        {"group": "z3"},
        {"density": 0.0},
        {"field": "9"},
    ],
)
def test_invalid_config(kwargs):
    with pytest.raises(ValidationError):
        FuzzConfig(**kwargs).validate()
